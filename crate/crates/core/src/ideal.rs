//! Ideals with Groebner membership, J-logarithmic predicates, and stepwise
//! logarithmic integrability with obstruction extraction.

use std::sync::OnceLock;

use crate::coeff::Ring;
use crate::diffop::DiffOp;
use crate::error::{KernelError, Result};
use crate::hs::HSDerivation;
use crate::multiindex::MultiIndex;
use crate::poly::Poly;

const PAIR_CAP: usize = 100_000;

/// A basis element together with cofactors expressing it in the original
/// generators: poly = sum cof[i] * gens[i].
#[derive(Clone, Debug)]
struct GbElem {
    poly: Poly,
    cof: Vec<Poly>,
}

/// An ideal of R given by generators; the grevlex Groebner basis (with its
/// construction trace back to the generators) is computed once on demand.
#[derive(Debug)]
pub struct Ideal {
    ring: Ring,
    gens: Vec<Poly>,
    gb: OnceLock<Result<Vec<GbElem>>>,
}

impl Clone for Ideal {
    fn clone(&self) -> Ideal {
        Ideal {
            ring: self.ring,
            gens: self.gens.clone(),
            gb: OnceLock::new(),
        }
    }
}

impl Ideal {
    pub fn new(ring: Ring, gens: Vec<Poly>) -> Result<Ideal> {
        if gens.is_empty() {
            return Err(KernelError::BadSerialization(
                "ideal needs generators".into(),
            ));
        }
        for g in &gens {
            if g.ring() != ring {
                return Err(KernelError::ContextMismatch);
            }
        }
        Ok(Ideal {
            ring,
            gens,
            gb: OnceLock::new(),
        })
    }

    pub fn principal(f: Poly) -> Result<Ideal> {
        Ideal::new(f.ring(), vec![f])
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn gens(&self) -> &[Poly] {
        &self.gens
    }

    pub fn is_principal(&self) -> bool {
        self.gens.len() == 1
    }

    fn basis(&self) -> Result<&[GbElem]> {
        let r = self.gb.get_or_init(|| buchberger(self.ring, &self.gens));
        match r {
            Ok(b) => Ok(b),
            Err(e) => Err(e.clone()),
        }
    }

    pub fn groebner_basis(&self) -> Result<Vec<Poly>> {
        Ok(self.basis()?.iter().map(|e| e.poly.clone()).collect())
    }

    /// The grevlex normal form of `f` modulo the ideal.
    pub fn reduce(&self, f: &Poly) -> Result<Poly> {
        if f.ring() != self.ring {
            return Err(KernelError::ContextMismatch);
        }
        let basis = self.basis()?;
        let (_, rem) = divide(f, basis)?;
        Ok(rem)
    }

    pub fn member(&self, f: &Poly) -> Result<bool> {
        if f.ring() != self.ring {
            return Err(KernelError::ContextMismatch);
        }
        // A single polynomial is a Groebner basis of the principal ideal it
        // generates, so long division already decides membership.
        if let [g] = &self.gens[..] {
            if !g.is_zero() {
                return Ok(f.exact_divide(g)?.is_some());
            }
        }
        Ok(self.reduce(f)?.is_zero())
    }

    /// Writes f = sum c_i * gens[i] when f is a member, by dividing against
    /// the Groebner basis and back-substituting its construction trace.
    pub fn express_in_generators(&self, f: &Poly) -> Result<Option<Vec<Poly>>> {
        if f.ring() != self.ring {
            return Err(KernelError::ContextMismatch);
        }
        let basis = self.basis()?;
        let (quots, rem) = divide(f, basis)?;
        if !rem.is_zero() {
            return Ok(None);
        }
        let mut coeffs = vec![Poly::zero(self.ring); self.gens.len()];
        for (q, elem) in quots.iter().zip(basis) {
            if q.is_zero() {
                continue;
            }
            for (c, cof) in coeffs.iter_mut().zip(&elem.cof) {
                *c = c.add(&q.mul(cof)?)?;
            }
        }
        debug_assert!({
            let mut check = Poly::zero(self.ring);
            for (c, g) in coeffs.iter().zip(&self.gens) {
                check = check.add(&c.mul(g)?)?;
            }
            check == *f
        });
        Ok(Some(coeffs))
    }
}

/// Buchberger with cofactor tracking; pairs with coprime leading monomials
/// are skipped, and the processed-pair count is capped to stay desk-scale.
fn buchberger(ring: Ring, gens: &[Poly]) -> Result<Vec<GbElem>> {
    let mut basis: Vec<GbElem> = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        if g.is_zero() {
            continue;
        }
        let mut cof = vec![Poly::zero(ring); gens.len()];
        cof[i] = Poly::one(ring);
        basis.push(GbElem {
            poly: g.clone(),
            cof,
        });
    }
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for i in 0..basis.len() {
        for j in 0..i {
            pairs.push((j, i));
        }
    }
    let mut processed = 0usize;
    while let Some((i, j)) = pairs.pop() {
        processed += 1;
        if processed > PAIR_CAP {
            return Err(KernelError::DeskScaleExceeded(format!(
                "Groebner pair count above {PAIR_CAP}"
            )));
        }
        let (lmi, _) = basis[i].poly.leading().expect("nonzero basis");
        let (lmj, _) = basis[j].poly.leading().expect("nonzero basis");
        if lmi.is_coprime_with(lmj) {
            continue;
        }
        let s = s_poly(ring, &basis[i], &basis[j])?;
        let (quots, rem) = divide(&s.poly, &basis)?;
        if rem.is_zero() {
            continue;
        }
        let mut cof = s.cof;
        for (q, elem) in quots.iter().zip(&basis) {
            if q.is_zero() {
                continue;
            }
            for (c, ec) in cof.iter_mut().zip(&elem.cof) {
                *c = c.sub(&q.mul(ec)?)?;
            }
        }
        let k = basis.len();
        for i in 0..k {
            pairs.push((i, k));
        }
        basis.push(GbElem { poly: rem, cof });
    }
    Ok(basis)
}

fn s_poly(ring: Ring, f: &GbElem, g: &GbElem) -> Result<GbElem> {
    let (lmf, lcf) = f.poly.leading().expect("nonzero");
    let (lmg, lcg) = g.poly.leading().expect("nonzero");
    let l = lmf.lcm(lmg);
    let mf = Poly::monomial(ring, l.checked_sub(lmf).expect("lcm"), lcf.inv()?);
    let mg = Poly::monomial(ring, l.checked_sub(lmg).expect("lcm"), lcg.inv()?);
    let poly = mf.mul(&f.poly)?.sub(&mg.mul(&g.poly)?)?;
    let cof = f
        .cof
        .iter()
        .zip(&g.cof)
        .map(|(a, b)| mf.mul(a)?.sub(&mg.mul(b)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(GbElem { poly, cof })
}

/// Full multivariate division: every term of the remainder is irreducible by
/// every leading monomial of the basis. Returns (quotients, remainder).
fn divide(f: &Poly, basis: &[GbElem]) -> Result<(Vec<Poly>, Poly)> {
    let ring = f.ring();
    let mut quots = vec![Poly::zero(ring); basis.len()];
    let mut rem = Poly::zero(ring);
    let mut work = f.clone();
    'outer: while let Some((mi, c)) = work.leading().map(|(m, c)| (m.clone(), c.clone())) {
        for (k, elem) in basis.iter().enumerate() {
            let (lm, lc) = elem.poly.leading().expect("nonzero basis");
            if let Some(d) = mi.checked_sub(lm) {
                let q = Poly::monomial(ring, d, c.div(lc)?);
                work = work.sub(&q.mul(&elem.poly)?)?;
                quots[k] = quots[k].add(&q)?;
                continue 'outer;
            }
        }
        let t = Poly::monomial(ring, mi, c);
        rem = rem.add(&t)?;
        work = work.sub(&t)?;
    }
    Ok((quots, rem))
}

/// delta(J) subset J, checked on generators; valid because delta is a
/// derivation (order <= 1, kills constants).
pub fn is_log_derivation(delta: &DiffOp, ideal: &Ideal) -> Result<bool> {
    if delta.ring() != ideal.ring {
        return Err(KernelError::ContextMismatch);
    }
    if !delta.is_derivation() {
        return Err(KernelError::OrderTooHigh(delta.order().unwrap_or(0), 1));
    }
    for g in &ideal.gens {
        if !ideal.member(&delta.apply(g))? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Phi(J) subset J R_m: every t-coefficient of Phi(g) lies in J, for each
/// generator g; Phi being a ring homomorphism makes generators sufficient.
pub fn is_log_hs(d: &HSDerivation, ideal: &Ideal) -> Result<bool> {
    if d.ring() != ideal.ring {
        return Err(KernelError::ContextMismatch);
    }
    for g in &ideal.gens {
        let s = d.apply_phi(g)?;
        for i in 1..=d.length() {
            if !ideal.member(s.coeff(i))? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Equality-mod-J fingerprint of a J-logarithmic derivation: the normal
/// forms of its coordinate values. Equal fingerprints characterize the same
/// induced derivation on R/J.
pub fn fingerprint(delta: &DiffOp, ideal: &Ideal) -> Result<Vec<Poly>> {
    if !is_log_derivation(delta, ideal)? {
        return Err(KernelError::NotLogarithmic);
    }
    (0..ideal.ring.nvars())
        .map(|j| ideal.reduce(&delta.apply(&Poly::var(ideal.ring, j))))
        .collect()
}

/// The outcome of one integrability step from length m to m + 1.
#[derive(Clone, Debug, PartialEq)]
pub struct ObstructionReport {
    pub step: usize,
    pub obstruction_nf: Poly,
    pub correction: Option<DiffOp>,
}

impl ObstructionReport {
    pub fn is_ok(&self) -> bool {
        self.obstruction_nf.is_zero()
    }
}

impl std::fmt::Display for ObstructionReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if let Some(c) = &self.correction {
            write!(f, "step {}: OK (correction: {c})", self.step)
        } else {
            write!(
                f,
                "step {}: BLOCKED (obstruction NF: {})",
                self.step, self.obstruction_nf
            )
        }
    }
}

/// For principal J = (F) and a J-logarithmic D of length m: the canonical
/// lift extends D iff D_{m+1}(F) lies in (F_x1, .., F_xn, F); when it does,
/// the division quotients c_i give the correction -sum c_i Delta^(e_i).
pub fn obstruction_step(d: &HSDerivation, ideal: &Ideal) -> Result<ObstructionReport> {
    let [f] = ideal.gens() else {
        return Err(KernelError::NonPrincipalIdeal);
    };
    if !is_log_hs(d, ideal)? {
        return Err(KernelError::NotLogarithmic);
    }
    let ring = d.ring();
    let n = ring.nvars();
    let step = d.length() + 1;
    let lift = d.canonical_lift()?;
    let top = lift.component(step)?;
    let w = top.apply(f);
    let mut obs_gens: Vec<Poly> = (0..n).map(|i| f.partial(i)).collect();
    obs_gens.push(f.clone());
    let obs = Ideal::new(ring, obs_gens)?;
    match obs.express_in_generators(&w)? {
        Some(coeffs) => {
            let correction = DiffOp::from_terms(
                ring,
                (0..n).map(|i| (MultiIndex::unit(i, n), coeffs[i].neg())),
            );
            debug_assert!(is_log_hs(&d.with_top_term(&correction)?, ideal)?);
            Ok(ObstructionReport {
                step,
                obstruction_nf: Poly::zero(ring),
                correction: Some(correction),
            })
        }
        None => Ok(ObstructionReport {
            step,
            obstruction_nf: obs.reduce(&w)?,
            correction: None,
        }),
    }
}

/// Greedy stepwise integration up to `target`: applies each correction and
/// recurses. A block means this greedy path failed, not that the input is
/// not integrable to the target length.
pub fn step_integrate(
    d: &HSDerivation,
    ideal: &Ideal,
    target: usize,
) -> Result<(HSDerivation, Vec<ObstructionReport>)> {
    if !is_log_hs(d, ideal)? {
        return Err(KernelError::NotLogarithmic);
    }
    let mut cur = d.clone();
    let mut trace = Vec::new();
    while cur.length() < target {
        let report = obstruction_step(&cur, ideal)?;
        match &report.correction {
            Some(c) => {
                cur = cur.with_top_term(c)?;
                trace.push(report);
            }
            None => {
                trace.push(report);
                break;
            }
        }
    }
    Ok((cur, trace))
}

/// The length-1 derivation with D_1 = delta.
pub fn derivation_to_hs(delta: &DiffOp) -> Result<HSDerivation> {
    let ring = delta.ring();
    if !delta.is_derivation() {
        return Err(KernelError::OrderTooHigh(delta.order().unwrap_or(0), 1));
    }
    HSDerivation::identity(ring, 0)?.with_top_term(delta)
}

/// Transfers an m-integral: given a J-logarithmic m-integral E of some
/// derivation and a J-logarithmic delta with the same fingerprint, the
/// corrector E' = (a_1 . T_1) o .. o (a_n . T_n) with a_i = delta(x_i) -
/// E_1(x_i) in J makes E o E' an m-integral of delta.
pub fn transfer_integral(e: &HSDerivation, delta: &DiffOp, ideal: &Ideal) -> Result<HSDerivation> {
    let ring = e.ring();
    let m = e.length();
    if !is_log_hs(e, ideal)? || !is_log_derivation(delta, ideal)? {
        return Err(KernelError::NotLogarithmic);
    }
    let e1 = e.component(1)?.clone();
    let mut corrector = HSDerivation::identity(ring, m)?;
    for i in 0..ring.nvars() {
        let xi = Poly::var(ring, i);
        let a = delta.apply(&xi).sub(&e1.apply(&xi))?;
        if !ideal.member(&a)? {
            return Err(KernelError::FingerprintMismatch);
        }
        if a.is_zero() {
            continue;
        }
        let factor = HSDerivation::taylor(ring, i, m)?.scale(&a)?;
        corrector = corrector.compose(&factor)?;
    }
    e.compose(&corrector)
}
