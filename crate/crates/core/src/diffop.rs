//! Differential operators on R in the Delta^(alpha) basis: application,
//! composition, commutators, symbols, and coefficient extraction.

use std::collections::BTreeMap;

use crate::coeff::{Coeff, Ring};
use crate::error::{KernelError, Result};
use crate::multiindex::{binom, MultiIndex};
use crate::poly::{delta_apply, Poly};

/// P = sum a_alpha Delta^(alpha), left coefficients, canonical (no zero
/// polynomials stored).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffOp {
    ring: Ring,
    terms: BTreeMap<MultiIndex, Poly>,
}

impl DiffOp {
    pub fn zero(ring: Ring) -> DiffOp {
        DiffOp {
            ring,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(ring: Ring) -> DiffOp {
        DiffOp::mul_op(Poly::one(ring))
    }

    /// The basis operator Delta^(alpha).
    pub fn delta(ring: Ring, alpha: MultiIndex) -> DiffOp {
        DiffOp::from_term(alpha, Poly::one(ring))
    }

    /// Delta_e^(i): e in slot i.
    pub fn delta_power(ring: Ring, i: usize, e: u32) -> DiffOp {
        let mut exps = vec![0; ring.nvars()];
        exps[i] = e;
        DiffOp::delta(ring, MultiIndex::new(exps))
    }

    /// The order-0 operator a * Id.
    pub fn mul_op(a: Poly) -> DiffOp {
        DiffOp::from_term(MultiIndex::zero(a.ring().nvars()), a)
    }

    pub fn from_term(alpha: MultiIndex, a: Poly) -> DiffOp {
        let mut op = DiffOp::zero(a.ring());
        op.add_term(alpha, a);
        op
    }

    pub fn from_terms(ring: Ring, terms: impl IntoIterator<Item = (MultiIndex, Poly)>) -> DiffOp {
        let mut op = DiffOp::zero(ring);
        for (alpha, a) in terms {
            op.add_term(alpha, a);
        }
        op
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Poly)> {
        self.terms.iter()
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> Poly {
        self.terms
            .get(alpha)
            .cloned()
            .unwrap_or_else(|| Poly::zero(self.ring))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// max |alpha| over stored terms; `None` marks the zero operator.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|a| a.total()).max()
    }

    /// A derivation-shaped operator: order <= 1 and no constant part.
    pub fn is_derivation(&self) -> bool {
        self.order().unwrap_or(0) <= 1
            && !self
                .terms
                .contains_key(&MultiIndex::zero(self.ring.nvars()))
    }

    fn add_term(&mut self, alpha: MultiIndex, a: Poly) {
        if a.is_zero() {
            return;
        }
        match self.terms.remove(&alpha) {
            None => {
                self.terms.insert(alpha, a);
            }
            Some(old) => {
                let s = old.add(&a).expect("same ring");
                if !s.is_zero() {
                    self.terms.insert(alpha, s);
                }
            }
        }
    }

    pub fn add(&self, other: &DiffOp) -> Result<DiffOp> {
        if self.ring != other.ring {
            return Err(KernelError::ContextMismatch);
        }
        let mut out = self.clone();
        for (alpha, a) in &other.terms {
            out.add_term(alpha.clone(), a.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &DiffOp) -> Result<DiffOp> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> DiffOp {
        DiffOp {
            ring: self.ring,
            terms: self
                .terms
                .iter()
                .map(|(a, p)| (a.clone(), p.neg()))
                .collect(),
        }
    }

    /// Left multiplication by a polynomial.
    pub fn scale(&self, a: &Poly) -> Result<DiffOp> {
        let mut out = DiffOp::zero(self.ring);
        for (alpha, p) in &self.terms {
            out.add_term(alpha.clone(), p.mul(a)?);
        }
        Ok(out)
    }

    pub fn scale_coeff(&self, c: &Coeff) -> DiffOp {
        let mut out = DiffOp::zero(self.ring);
        for (alpha, p) in &self.terms {
            out.add_term(alpha.clone(), p.scale(c));
        }
        out
    }

    /// P(f) = sum a_alpha Delta^(alpha)(f).
    pub fn apply(&self, f: &Poly) -> Poly {
        let mut out = Poly::zero(self.ring);
        for (alpha, a) in &self.terms {
            let d = delta_apply(alpha, f);
            if !d.is_zero() {
                out = out.add(&a.mul(&d).expect("same ring")).expect("same ring");
            }
        }
        out
    }

    /// Composition in the Delta basis, via the Leibniz expansion
    /// Delta^(alpha) o (b . ) = sum_{sigma+rho=alpha} Delta^(sigma)(b) Delta^(rho)
    /// and rule (b): Delta^(rho) o Delta^(beta) = C(rho+beta, rho) Delta^(rho+beta).
    pub fn compose(&self, other: &DiffOp) -> Result<DiffOp> {
        if self.ring != other.ring {
            return Err(KernelError::ContextMismatch);
        }
        let mut out = DiffOp::zero(self.ring);
        for (alpha, a) in &self.terms {
            for (beta, b) in &other.terms {
                for sigma in alpha.all_below() {
                    let rho = alpha.checked_sub(&sigma).expect("sigma <= alpha");
                    let db = delta_apply(&sigma, b);
                    if db.is_zero() {
                        continue;
                    }
                    let target = rho.add(beta);
                    let c = binom(&target, &rho, &self.ring);
                    if c.is_zero() {
                        continue;
                    }
                    out.add_term(target, a.mul(&db)?.scale(&c));
                }
            }
        }
        Ok(out)
    }

    /// [P, a] = P o (a.) - (a.) o P; order drops by at least one.
    pub fn bracket(&self, a: &Poly) -> Result<DiffOp> {
        let right = self.compose(&DiffOp::mul_op(a.clone()))?;
        let left = DiffOp::mul_op(a.clone()).compose(self)?;
        right.sub(&left)
    }

    /// [[...[[P, xs_d], xs_{d-1}], ...], xs_1]: brackets the last element first.
    pub fn iterated_bracket(&self, xs: &[Poly]) -> Result<DiffOp> {
        let mut acc = self.clone();
        for x in xs.iter().rev() {
            acc = acc.bracket(x)?;
        }
        Ok(acc)
    }

    /// The commutator [P, Q].
    pub fn commutator(&self, other: &DiffOp) -> Result<DiffOp> {
        self.compose(other)?.sub(&other.compose(self)?)
    }

    /// The degree-`d` symbol of an operator of order <= d.
    pub fn symbol(&self, d: u32) -> Result<Symbol> {
        if let Some(o) = self.order() {
            if o > d {
                return Err(KernelError::OrderTooHigh(o, d));
            }
        }
        Ok(Symbol {
            degree: d,
            rep: self.clone(),
        })
    }

    /// Canonical rendering: terms sorted by |alpha| then grevlex ascending,
    /// e.g. "x2^2*D[0,1,0] + x2^4*D[0,0,2]".
    pub fn render(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (alpha, a) in &self.terms {
            let coeff = a.render(names);
            let coeff = if a.num_terms() > 1 {
                format!("({coeff})")
            } else {
                coeff
            };
            let idx: Vec<String> = alpha.exponents().iter().map(|e| e.to_string()).collect();
            if alpha.is_zero() {
                parts.push(coeff);
            } else if coeff == "1" {
                parts.push(format!("D[{}]", idx.join(",")));
            } else {
                parts.push(format!("{coeff}*D[{}]", idx.join(",")));
            }
        }
        parts.join(" + ")
    }
}

impl std::fmt::Display for DiffOp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.render(&Poly::default_names(&self.ring)))
    }
}

/// Reconstructs the unique Delta-basis operator of order <= `d` agreeing with
/// a k-linear black box on monomials, via the coefficient-inversion formula
/// a_alpha = sum_{beta<=alpha} C(alpha,beta)(-1)^{|beta|} x^beta P(x^{alpha-beta}).
pub fn coeff_extract(
    ring: Ring,
    black_box: impl Fn(&MultiIndex) -> Poly,
    d: u32,
) -> Result<DiffOp> {
    let n = ring.nvars();
    let mut values: BTreeMap<MultiIndex, Poly> = BTreeMap::new();
    for gamma in MultiIndex::all_up_to(n, d) {
        let v = black_box(&gamma);
        if v.ring() != ring {
            return Err(KernelError::ContextMismatch);
        }
        values.insert(gamma, v);
    }
    let mut op = DiffOp::zero(ring);
    for alpha in MultiIndex::all_up_to(n, d) {
        let mut a = Poly::zero(ring);
        for beta in alpha.all_below() {
            let rest = alpha.checked_sub(&beta).expect("beta <= alpha");
            let pv = &values[&rest];
            if pv.is_zero() {
                continue;
            }
            let mut c = binom(&alpha, &beta, &ring);
            if beta.total() % 2 == 1 {
                c = c.neg();
            }
            if c.is_zero() {
                continue;
            }
            let xbeta = Poly::monomial(ring, beta, ring.one());
            a = a.add(&xbeta.mul(pv)?.scale(&c))?;
        }
        op.add_term(alpha, a);
    }
    // Diagnostic: any value table on monomials of degree <= d is consistent
    // with exactly one candidate operator, so disagreement can only show on
    // higher-degree probes.
    for gamma in MultiIndex::all_up_to(n, d + 2) {
        let mono = Poly::monomial(ring, gamma.clone(), ring.one());
        let v = match values.get(&gamma) {
            Some(v) => v.clone(),
            None => black_box(&gamma),
        };
        if op.apply(&mono) != v {
            return Err(KernelError::NotAnOperator(d));
        }
    }
    Ok(op)
}

/// The class of an order <= d operator modulo order <= d-1, stored with a
/// representative; equality compares the degree-d coefficient slices.
#[derive(Clone, Debug)]
pub struct Symbol {
    degree: u32,
    rep: DiffOp,
}

impl Symbol {
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn representative(&self) -> &DiffOp {
        &self.rep
    }

    pub fn ring(&self) -> Ring {
        self.rep.ring()
    }

    pub fn one(ring: Ring) -> Symbol {
        Symbol {
            degree: 0,
            rep: DiffOp::identity(ring),
        }
    }

    pub fn zero(ring: Ring, degree: u32) -> Symbol {
        Symbol {
            degree,
            rep: DiffOp::zero(ring),
        }
    }

    /// The |alpha| = degree coefficient slice.
    pub fn principal(&self) -> BTreeMap<MultiIndex, Poly> {
        self.rep
            .terms()
            .filter(|(a, _)| a.total() == self.degree)
            .map(|(a, p)| (a.clone(), p.clone()))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.principal().is_empty()
    }

    /// Product in gr Diff: sigma_r(P) sigma_s(Q) = sigma_{r+s}(P o Q).
    pub fn mul(&self, other: &Symbol) -> Result<Symbol> {
        Ok(Symbol {
            degree: self.degree + other.degree,
            rep: self.rep.compose(&other.rep)?,
        })
    }

    pub fn add(&self, other: &Symbol) -> Result<Symbol> {
        if self.degree != other.degree {
            return Err(KernelError::LengthMismatch(
                self.degree as usize,
                other.degree as usize,
            ));
        }
        Ok(Symbol {
            degree: self.degree,
            rep: self.rep.add(&other.rep)?,
        })
    }

    pub fn scale(&self, a: &Poly) -> Result<Symbol> {
        Ok(Symbol {
            degree: self.degree,
            rep: self.rep.scale(a)?,
        })
    }

    pub fn scale_coeff(&self, c: &Coeff) -> Symbol {
        Symbol {
            degree: self.degree,
            rep: self.rep.scale_coeff(c),
        }
    }
}

impl PartialEq for Symbol {
    fn eq(&self, other: &Symbol) -> bool {
        self.degree == other.degree && self.principal() == other.principal()
    }
}

impl Eq for Symbol {}

/// {sigma_r(P), sigma_s(Q)} = sigma_{r+s-1}([P, Q]).
pub fn poisson(s: &Symbol, t: &Symbol) -> Result<Symbol> {
    if s.degree + t.degree == 0 {
        return Err(KernelError::DegenerateBracket);
    }
    Ok(Symbol {
        degree: s.degree + t.degree - 1,
        rep: s.rep.commutator(&t.rep)?,
    })
}
