//! Symmetric multiderivations: the graded dual of Sym Omega over the free
//! ring R, with the shuffle product, divided powers, zeta, theta, and the
//! Poisson bracket.

use std::collections::BTreeMap;

use crate::coeff::Ring;
use crate::diffop::DiffOp;
use crate::error::{KernelError, Result};
use crate::multiindex::{binom, MultiIndex};
use crate::poly::Poly;

/// A degree-r element of (Sym Omega)*, stored by its values on the basis
/// monomials dx^alpha with |alpha| = r (zero values omitted).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiDerivation {
    ring: Ring,
    degree: u32,
    values: BTreeMap<MultiIndex, Poly>,
}

impl MultiDerivation {
    pub fn zero(ring: Ring, degree: u32) -> MultiDerivation {
        MultiDerivation {
            ring,
            degree,
            values: BTreeMap::new(),
        }
    }

    /// Degree-0 elements are identified with polynomials.
    pub fn from_poly(p: Poly) -> MultiDerivation {
        let ring = p.ring();
        let mut u = MultiDerivation::zero(ring, 0);
        u.set_value(MultiIndex::zero(ring.nvars()), p);
        u
    }

    pub fn one(ring: Ring) -> MultiDerivation {
        MultiDerivation::from_poly(Poly::one(ring))
    }

    /// Degree-1 elements are derivations: value on dx_i is delta(x_i).
    pub fn from_derivation(delta: &DiffOp) -> Result<MultiDerivation> {
        let ring = delta.ring();
        if !delta.is_derivation() {
            return Err(KernelError::OrderTooHigh(delta.order().unwrap_or(0), 1));
        }
        let mut u = MultiDerivation::zero(ring, 1);
        for i in 0..ring.nvars() {
            u.set_value(
                MultiIndex::unit(i, ring.nvars()),
                delta.apply(&Poly::var(ring, i)),
            );
        }
        Ok(u)
    }

    /// Inverse of `from_derivation` on degree-1 elements.
    pub fn to_derivation(&self) -> Result<DiffOp> {
        if self.degree != 1 {
            return Err(KernelError::OrderTooHigh(self.degree, 1));
        }
        let n = self.ring.nvars();
        Ok(DiffOp::from_terms(
            self.ring,
            (0..n).map(|i| {
                let e = MultiIndex::unit(i, n);
                (e.clone(), self.value(&e))
            }),
        ))
    }

    pub fn from_values(
        ring: Ring,
        degree: u32,
        values: impl IntoIterator<Item = (MultiIndex, Poly)>,
    ) -> Result<MultiDerivation> {
        let mut u = MultiDerivation::zero(ring, degree);
        for (gamma, p) in values {
            if p.ring() != ring {
                return Err(KernelError::ContextMismatch);
            }
            if gamma.total() != degree {
                return Err(KernelError::OrderTooHigh(gamma.total(), degree));
            }
            u.set_value(gamma, p);
        }
        Ok(u)
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value(&self, gamma: &MultiIndex) -> Poly {
        self.values
            .get(gamma)
            .cloned()
            .unwrap_or_else(|| Poly::zero(self.ring))
    }

    pub fn values(&self) -> impl Iterator<Item = (&MultiIndex, &Poly)> {
        self.values.iter()
    }

    fn set_value(&mut self, gamma: MultiIndex, p: Poly) {
        if p.is_zero() {
            self.values.remove(&gamma);
        } else {
            self.values.insert(gamma, p);
        }
    }

    fn add_value(&mut self, gamma: MultiIndex, p: Poly) {
        let s = self.value(&gamma).add(&p).expect("same ring");
        self.set_value(gamma, s);
    }

    pub fn add(&self, other: &MultiDerivation) -> Result<MultiDerivation> {
        if self.ring != other.ring {
            return Err(KernelError::ContextMismatch);
        }
        if self.degree != other.degree {
            return Err(KernelError::LengthMismatch(
                self.degree as usize,
                other.degree as usize,
            ));
        }
        let mut out = self.clone();
        for (gamma, p) in &other.values {
            out.add_value(gamma.clone(), p.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &MultiDerivation) -> Result<MultiDerivation> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> MultiDerivation {
        MultiDerivation {
            ring: self.ring,
            degree: self.degree,
            values: self
                .values
                .iter()
                .map(|(g, p)| (g.clone(), p.neg()))
                .collect(),
        }
    }

    /// R-module structure.
    pub fn scale(&self, a: &Poly) -> Result<MultiDerivation> {
        let mut out = MultiDerivation::zero(self.ring, self.degree);
        for (gamma, p) in &self.values {
            out.set_value(gamma.clone(), p.mul(a)?);
        }
        Ok(out)
    }

    /// Multilinear symmetric extension to arbitrary polynomial arguments,
    /// through the Jacobian expansion d(f_j) = sum_i (df_j/dx_i) dx_i.
    pub fn md_eval(&self, fs: &[Poly]) -> Result<Poly> {
        if fs.len() != self.degree as usize {
            return Err(KernelError::ArityMismatch(self.degree as usize, fs.len()));
        }
        let n = self.ring.nvars();
        let mut partials = Vec::with_capacity(fs.len());
        for f in fs {
            if f.ring() != self.ring {
                return Err(KernelError::ContextMismatch);
            }
            partials.push((0..n).map(|i| f.partial(i)).collect::<Vec<_>>());
        }
        let mut out = Poly::zero(self.ring);
        let mut choice = vec![0usize; fs.len()];
        self.eval_rec(&partials, &mut choice, 0, &Poly::one(self.ring), &mut out)?;
        Ok(out)
    }

    fn eval_rec(
        &self,
        partials: &[Vec<Poly>],
        choice: &mut Vec<usize>,
        j: usize,
        acc: &Poly,
        out: &mut Poly,
    ) -> Result<()> {
        if j == partials.len() {
            let mut gamma = vec![0u32; self.ring.nvars()];
            for &i in choice.iter() {
                gamma[i] += 1;
            }
            let v = self.value(&MultiIndex::new(gamma));
            if !v.is_zero() {
                *out = out.add(&acc.mul(&v)?)?;
            }
            return Ok(());
        }
        for i in 0..self.ring.nvars() {
            if partials[j][i].is_zero() {
                continue;
            }
            let next = acc.mul(&partials[j][i])?;
            choice[j] = i;
            self.eval_rec(partials, choice, j + 1, &next, out)?;
        }
        Ok(())
    }

    /// Canonical rendering: one "deg r: dx^[a1,..,an] -> poly" line per
    /// nonzero basis value, sorted grevlex ascending.
    pub fn render(&self, names: &[String]) -> String {
        if self.values.is_empty() {
            return format!("deg {}: 0", self.degree);
        }
        self.values
            .iter()
            .map(|(gamma, p)| {
                let idx: Vec<String> = gamma.exponents().iter().map(|e| e.to_string()).collect();
                format!(
                    "deg {}: dx^[{}] -> {}",
                    self.degree,
                    idx.join(","),
                    p.render(names)
                )
            })
            .collect::<Vec<_>>()
            .join("\n")
    }
}

impl std::fmt::Display for MultiDerivation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.render(&Poly::default_names(&self.ring)))
    }
}

/// The shuffle product, closed on the dual basis:
/// (u * v)(dx^gamma) = sum_{alpha+beta=gamma} C(gamma,alpha) u(dx^alpha) v(dx^beta).
pub fn shuffle(u: &MultiDerivation, v: &MultiDerivation) -> Result<MultiDerivation> {
    if u.ring != v.ring {
        return Err(KernelError::ContextMismatch);
    }
    let mut out = MultiDerivation::zero(u.ring, u.degree + v.degree);
    for (alpha, a) in &u.values {
        for (beta, b) in &v.values {
            let gamma = alpha.add(beta);
            let c = binom(&gamma, alpha, &u.ring);
            if c.is_zero() {
                continue;
            }
            out.add_value(gamma, a.mul(b)?.scale(&c));
        }
    }
    Ok(out)
}

/// The divided power rho_i of a degree d >= 1 element: on the coordinate
/// multiset of each dx^gamma (|gamma| = id), sum over partitions of the id
/// labeled slots into i unordered blocks of size d of the product of values.
pub fn divided_power(u: &MultiDerivation, i: u32) -> Result<MultiDerivation> {
    let d = u.degree;
    if d == 0 {
        return Err(KernelError::ZeroDegreeDividedPower);
    }
    if i == 0 {
        return Ok(MultiDerivation::one(u.ring));
    }
    let total = i * d;
    if total as usize > crate::MAX_ORDER {
        return Err(KernelError::DeskScaleExceeded(format!(
            "divided power degree {total}"
        )));
    }
    let mut out = MultiDerivation::zero(u.ring, total);
    for gamma in MultiIndex::all_of_degree(u.ring.nvars(), total) {
        let slots = gamma.coordinate_multiset();
        let mut acc = Poly::zero(u.ring);
        partition_rec(
            u,
            &slots,
            &mut vec![false; slots.len()],
            d as usize,
            &Poly::one(u.ring),
            &mut acc,
        )?;
        out.set_value(gamma, acc);
    }
    Ok(out)
}

/// Enumerates each unordered partition into equal-size blocks exactly once:
/// the lowest unused slot leads the next block, companions are chosen by
/// combinations among the higher unused slots.
fn partition_rec(
    u: &MultiDerivation,
    slots: &[usize],
    used: &mut Vec<bool>,
    block: usize,
    acc: &Poly,
    out: &mut Poly,
) -> Result<()> {
    let Some(leader) = used.iter().position(|&b| !b) else {
        *out = out.add(acc)?;
        return Ok(());
    };
    used[leader] = true;
    let free: Vec<usize> = (leader + 1..slots.len()).filter(|&k| !used[k]).collect();
    let mut pick = Vec::with_capacity(block - 1);
    combinations_rec(u, slots, used, block, acc, out, leader, &free, 0, &mut pick)?;
    used[leader] = false;
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn combinations_rec(
    u: &MultiDerivation,
    slots: &[usize],
    used: &mut Vec<bool>,
    block: usize,
    acc: &Poly,
    out: &mut Poly,
    leader: usize,
    free: &[usize],
    from: usize,
    pick: &mut Vec<usize>,
) -> Result<()> {
    if pick.len() == block - 1 {
        let mut gamma = vec![0u32; u.ring.nvars()];
        gamma[slots[leader]] += 1;
        for &k in pick.iter() {
            gamma[slots[k]] += 1;
        }
        let v = u.value(&MultiIndex::new(gamma));
        if !v.is_zero() {
            for &k in pick.iter() {
                used[k] = true;
            }
            let next = acc.mul(&v)?;
            partition_rec(u, slots, used, block, &next, out)?;
            for &k in pick.iter() {
                used[k] = false;
            }
        }
        return Ok(());
    }
    for idx in from..free.len() {
        pick.push(free[idx]);
        combinations_rec(u, slots, used, block, acc, out, leader, free, idx + 1, pick)?;
        pick.pop();
    }
    Ok(())
}

/// zeta_r(delta)(dx^alpha) = prod_i delta(x_i)^{alpha_i}.
pub fn zeta(delta: &MultiDerivation, r: u32) -> Result<MultiDerivation> {
    if delta.degree != 1 {
        return Err(KernelError::OrderTooHigh(delta.degree, 1));
    }
    let ring = delta.ring;
    let n = ring.nvars();
    let mut out = MultiDerivation::zero(ring, r);
    for alpha in MultiIndex::all_of_degree(n, r) {
        let mut v = Poly::one(ring);
        for i in 0..n {
            let e = alpha.get(i);
            if e > 0 {
                v = v.mul(&delta.value(&MultiIndex::unit(i, n)).pow(e))?;
            }
        }
        out.set_value(alpha, v);
    }
    Ok(out)
}

/// theta_n(sigma_n(P)): on the coordinate multiset (y_1..y_n) of each
/// dx^gamma both closed forms are computed and compared:
/// the alternating sum over L of (-1)^{#L} y_L P(y_{L'}), and the constant
/// part of the iterated bracket [[..[P, y_n], ..], y_1].
pub fn theta(p: &DiffOp, n: u32) -> Result<MultiDerivation> {
    let ring = p.ring();
    if let Some(o) = p.order() {
        if o > n {
            return Err(KernelError::OrderTooHigh(o, n));
        }
    }
    let mut out = MultiDerivation::zero(ring, n);
    for gamma in MultiIndex::all_of_degree(ring.nvars(), n) {
        let ys: Vec<Poly> = gamma
            .coordinate_multiset()
            .into_iter()
            .map(|i| Poly::var(ring, i))
            .collect();
        // Alternating-sum route.
        let mut alt = Poly::zero(ring);
        for mask in 0u32..(1 << ys.len()) {
            let mut inside = Poly::one(ring);
            let mut outside = Poly::one(ring);
            for (l, y) in ys.iter().enumerate() {
                if mask >> l & 1 == 1 {
                    outside = outside.mul(y)?;
                } else {
                    inside = inside.mul(y)?;
                }
            }
            let term = outside.mul(&p.apply(&inside))?;
            alt = if mask.count_ones() % 2 == 1 {
                alt.sub(&term)?
            } else {
                alt.add(&term)?
            };
        }
        // Iterated-bracket route; after n brackets the operator has order 0.
        let b = p.iterated_bracket(&ys)?;
        let bval = b.apply(&Poly::one(ring));
        assert_eq!(alt, bval, "theta closed forms disagree on {gamma:?}");
        out.set_value(gamma, bval);
    }
    Ok(out)
}

/// The Poisson bracket on SDer, evaluated on the coordinate tuple of each
/// basis monomial by the double subset sum.
pub fn sder_poisson(h: &MultiDerivation, hp: &MultiDerivation) -> Result<MultiDerivation> {
    if h.ring != hp.ring {
        return Err(KernelError::ContextMismatch);
    }
    let (r, s) = (h.degree, hp.degree);
    if r + s == 0 {
        return Err(KernelError::DegenerateBracket);
    }
    let ring = h.ring;
    let deg = r + s - 1;
    let mut out = MultiDerivation::zero(ring, deg);
    for gamma in MultiIndex::all_of_degree(ring.nvars(), deg) {
        let ys: Vec<Poly> = gamma
            .coordinate_multiset()
            .into_iter()
            .map(|i| Poly::var(ring, i))
            .collect();
        let pos = subset_sum(h, hp, &ys, s as usize)?;
        let negv = subset_sum(hp, h, &ys, r as usize)?;
        out.set_value(gamma, pos.sub(&negv)?);
    }
    Ok(out)
}

/// sum over #L = `inner_size` subsets L of the tuple of
/// outer(y_{L'}..., inner(y_L)).
fn subset_sum(
    outer: &MultiDerivation,
    inner: &MultiDerivation,
    ys: &[Poly],
    inner_size: usize,
) -> Result<Poly> {
    let ring = outer.ring;
    let mut out = Poly::zero(ring);
    for mask in 0u32..(1 << ys.len()) {
        if mask.count_ones() as usize != inner_size {
            continue;
        }
        let mut picked = Vec::with_capacity(inner_size);
        let mut rest = Vec::with_capacity(ys.len() - inner_size);
        for (l, y) in ys.iter().enumerate() {
            if mask >> l & 1 == 1 {
                picked.push(y.clone());
            } else {
                rest.push(y.clone());
            }
        }
        rest.push(inner.md_eval(&picked)?);
        out = out.add(&outer.md_eval(&rest)?)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    fn dual_dx(ring: Ring, i: usize) -> MultiDerivation {
        MultiDerivation::from_derivation(&DiffOp::delta(ring, MultiIndex::unit(i, ring.nvars())))
            .unwrap()
    }

    #[test]
    fn md_eval_basics() {
        let q = Ring::rationals(2).unwrap();
        let c = MultiDerivation::from_poly(Poly::from_i64(q, 5));
        assert_eq!(c.md_eval(&[]).unwrap(), Poly::from_i64(q, 5));
        let d = dual_dx(q, 0);
        assert!(d.md_eval(&[Poly::from_i64(q, 3)]).unwrap().is_zero());
        // Chain rule: d(x1^2 x2) picks up 2 x1 x2 through dx1.
        let f = Poly::var(q, 0).pow(2).mul(&Poly::var(q, 1)).unwrap();
        let expect = Poly::var(q, 0)
            .mul(&Poly::var(q, 1))
            .unwrap()
            .scale(&q.from_i64(2));
        assert_eq!(d.md_eval(&[f]).unwrap(), expect);
        assert!(d.md_eval(&[Poly::one(q), Poly::one(q)]).is_err());
    }

    #[test]
    fn shuffle_of_two_derivations() {
        let q = Ring::rationals(2).unwrap();
        // delta = x2 d1, delta' = x1 d2.
        let delta =
            MultiDerivation::from_derivation(&DiffOp::from_term(mi(&[1, 0]), Poly::var(q, 1)))
                .unwrap();
        let deltap =
            MultiDerivation::from_derivation(&DiffOp::from_term(mi(&[0, 1]), Poly::var(q, 0)))
                .unwrap();
        let s = shuffle(&delta, &deltap).unwrap();
        let x1 = Poly::var(q, 0);
        let x2 = Poly::var(q, 1);
        // (delta * delta')(x1, x2) = delta(x1)delta'(x2) + delta(x2)delta'(x1).
        let expect = x2.mul(&x1).unwrap();
        assert_eq!(s.md_eval(&[x1, x2]).unwrap(), expect);
    }

    #[test]
    fn shuffle_unit_and_char2_square() {
        let q = Ring::rationals(2).unwrap();
        let u = dual_dx(q, 0);
        assert_eq!(shuffle(&u, &MultiDerivation::one(q)).unwrap(), u);
        let f2 = Ring::new(2, 2).unwrap();
        let v = dual_dx(f2, 0);
        // (u*u)(dx1^2) = C(2,1) = 0 in char 2.
        assert!(shuffle(&v, &v).unwrap().is_zero());
    }

    #[test]
    fn shuffle_matches_subset_enumeration() {
        let f3 = Ring::new(2, 3).unwrap();
        let u = MultiDerivation::from_values(
            f3,
            1,
            [
                (mi(&[1, 0]), Poly::var(f3, 1)),
                (mi(&[0, 1]), Poly::one(f3)),
            ],
        )
        .unwrap();
        let v = MultiDerivation::from_values(f3, 2, [(mi(&[1, 1]), Poly::var(f3, 0))]).unwrap();
        let s = shuffle(&u, &v).unwrap();
        for gamma in MultiIndex::all_of_degree(2, 3) {
            let ys: Vec<Poly> = gamma
                .coordinate_multiset()
                .into_iter()
                .map(|i| Poly::var(f3, i))
                .collect();
            // Set-sum definition over #L = deg(u) subsets.
            let mut expect = Poly::zero(f3);
            for mask in 0u32..(1 << ys.len()) {
                if mask.count_ones() != 1 {
                    continue;
                }
                let (mut l, mut lp) = (Vec::new(), Vec::new());
                for (k, y) in ys.iter().enumerate() {
                    if mask >> k & 1 == 1 {
                        l.push(y.clone());
                    } else {
                        lp.push(y.clone());
                    }
                }
                expect = expect
                    .add(
                        &u.md_eval(&l)
                            .unwrap()
                            .mul(&v.md_eval(&lp).unwrap())
                            .unwrap(),
                    )
                    .unwrap();
            }
            assert_eq!(s.value(&gamma), expect, "gamma {gamma:?}");
        }
    }

    #[test]
    fn divided_power_small_cases() {
        let q = Ring::rationals(2).unwrap();
        let u = dual_dx(q, 0);
        assert_eq!(divided_power(&u, 0).unwrap(), MultiDerivation::one(q));
        assert_eq!(divided_power(&u, 1).unwrap(), u);
        // rho_2(delta)(dx_a dx_b) = delta(x_a)delta(x_b); one pair partition.
        let delta = MultiDerivation::from_values(
            q,
            1,
            [
                (mi(&[1, 0]), Poly::var(q, 1)),
                (mi(&[0, 1]), Poly::var(q, 0)),
            ],
        )
        .unwrap();
        let r2 = divided_power(&delta, 2).unwrap();
        assert_eq!(r2.value(&mi(&[2, 0])), Poly::var(q, 1).pow(2));
        assert_eq!(
            r2.value(&mi(&[1, 1])),
            Poly::var(q, 0).mul(&Poly::var(q, 1)).unwrap()
        );
        assert!(divided_power(&MultiDerivation::one(q), 2).is_err());
    }

    #[test]
    fn divided_power_scales_to_shuffle_powers_over_q() {
        let q = Ring::rationals(2).unwrap();
        let u = MultiDerivation::from_values(
            q,
            2,
            [
                (mi(&[2, 0]), Poly::var(q, 1)),
                (mi(&[1, 1]), Poly::from_i64(q, 3)),
                (mi(&[0, 2]), Poly::var(q, 0).add(&Poly::one(q)).unwrap()),
            ],
        )
        .unwrap();
        for i in 1..=3u32 {
            let mut pw = MultiDerivation::one(q);
            for _ in 0..i {
                pw = shuffle(&pw, &u).unwrap();
            }
            let mut fact = 1i64;
            for j in 1..=i as i64 {
                fact *= j;
            }
            let scaled = divided_power(&u, i)
                .unwrap()
                .scale(&Poly::from_i64(q, fact))
                .unwrap();
            assert_eq!(scaled, pw, "i = {i}");
        }
    }

    #[test]
    fn zeta_values_and_exponential_type() {
        let f2 = Ring::new(3, 2).unwrap();
        // delta = x2^2 . (dual of dx3).
        let delta =
            MultiDerivation::from_values(f2, 1, [(mi(&[0, 0, 1]), Poly::var(f2, 1).pow(2))])
                .unwrap();
        let z2 = zeta(&delta, 2).unwrap();
        assert_eq!(z2.value(&mi(&[0, 0, 2])), Poly::var(f2, 1).pow(4));
        assert_eq!(zeta(&delta, 0).unwrap(), MultiDerivation::one(f2));
        assert!(zeta(&MultiDerivation::zero(f2, 1), 3).unwrap().is_zero());
        // shuffle(zeta_i, zeta_j) = C(i+j,i) zeta_{i+j}.
        let q = Ring::rationals(2).unwrap();
        let dq = MultiDerivation::from_values(
            q,
            1,
            [(mi(&[1, 0]), Poly::var(q, 1)), (mi(&[0, 1]), Poly::one(q))],
        )
        .unwrap();
        for i in 0..=2u32 {
            for j in 0..=2u32 {
                let lhs = shuffle(&zeta(&dq, i).unwrap(), &zeta(&dq, j).unwrap()).unwrap();
                let c = crate::multiindex::binom_bigint((i + j) as u64, i as u64);
                let rhs = zeta(&dq, i + j)
                    .unwrap()
                    .scale(&Poly::constant(q, q.from_bigint(&c)))
                    .unwrap();
                assert_eq!(lhs, rhs, "i={i} j={j}");
            }
        }
    }

    #[test]
    fn theta_low_degrees_are_identities() {
        let q = Ring::rationals(2).unwrap();
        let a = Poly::var(q, 0).pow(2).add(&Poly::one(q)).unwrap();
        assert_eq!(
            theta(&DiffOp::mul_op(a.clone()), 0).unwrap(),
            MultiDerivation::from_poly(a)
        );
        let delta = DiffOp::from_term(mi(&[1, 0]), Poly::var(q, 1));
        assert_eq!(
            theta(&delta, 1).unwrap(),
            MultiDerivation::from_derivation(&delta).unwrap()
        );
    }

    #[test]
    fn theta_of_delta2_on_dx_squared() {
        let q = Ring::rationals(1).unwrap();
        let p = DiffOp::delta(q, mi(&[2]));
        let t = theta(&p, 2).unwrap();
        assert_eq!(t.value(&mi(&[2])), Poly::one(q));
        assert!(theta(&p, 1).is_err());
    }

    #[test]
    fn theta_drops_lower_order_terms() {
        // sigma_2 of an order-1 operator is 0, so theta(P, 2) = 0.
        let f3 = Ring::new(2, 3).unwrap();
        let p = DiffOp::from_term(mi(&[1, 0]), Poly::var(f3, 1));
        assert!(theta(&p, 2).unwrap().is_zero());
    }

    #[test]
    fn theta_of_sigma_basis_is_dual_basis() {
        let f2 = Ring::new(2, 2).unwrap();
        for alpha in MultiIndex::all_up_to(2, 3) {
            if alpha.is_zero() {
                continue;
            }
            let t = theta(&DiffOp::delta(f2, alpha.clone()), alpha.total()).unwrap();
            for gamma in MultiIndex::all_of_degree(2, alpha.total()) {
                let expect = if gamma == alpha {
                    Poly::one(f2)
                } else {
                    Poly::zero(f2)
                };
                assert_eq!(t.value(&gamma), expect, "alpha {alpha:?} gamma {gamma:?}");
            }
        }
    }

    #[test]
    fn poisson_restricts_to_lie_bracket_in_degree_one() {
        let q = Ring::rationals(2).unwrap();
        let d1 = DiffOp::from_term(mi(&[1, 0]), Poly::var(q, 1));
        let d2 = DiffOp::from_term(mi(&[0, 1]), Poly::var(q, 0).pow(2));
        let h = MultiDerivation::from_derivation(&d1).unwrap();
        let hp = MultiDerivation::from_derivation(&d2).unwrap();
        let br = sder_poisson(&h, &hp).unwrap();
        let expect = MultiDerivation::from_derivation(&d1.commutator(&d2).unwrap()).unwrap();
        assert_eq!(br, expect);
        // Antisymmetry.
        assert_eq!(sder_poisson(&hp, &h).unwrap(), br.neg());
    }

    #[test]
    fn poisson_with_degree_zero_evaluates() {
        let q = Ring::rationals(2).unwrap();
        let h = shuffle(
            &MultiDerivation::from_derivation(&DiffOp::delta(q, mi(&[1, 0]))).unwrap(),
            &MultiDerivation::from_derivation(&DiffOp::delta(q, mi(&[0, 1]))).unwrap(),
        )
        .unwrap();
        let a = Poly::var(q, 0).pow(2);
        let br = sder_poisson(&h, &MultiDerivation::from_poly(a.clone())).unwrap();
        // {h, a}(y) = h(y, a).
        for i in 0..2 {
            let y = Poly::var(q, i);
            assert_eq!(
                br.md_eval(std::slice::from_ref(&y)).unwrap(),
                h.md_eval(&[y, a.clone()]).unwrap()
            );
        }
        let z = MultiDerivation::from_poly(Poly::one(q));
        assert!(sder_poisson(&z, &z).is_err());
    }
}
