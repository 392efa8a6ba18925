//! Sparse multivariate polynomials over an exact coefficient field.

use std::collections::BTreeMap;

use crate::coeff::{Coeff, Ring};
use crate::error::{KernelError, Result};
use crate::multiindex::{binom, MultiIndex};

/// An element of R = k[x1..xn] in canonical form: no zero coefficients stored,
/// terms keyed by grevlex-ascending multi-index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    ring: Ring,
    terms: BTreeMap<MultiIndex, Coeff>,
}

impl Poly {
    pub fn zero(ring: Ring) -> Poly {
        Poly {
            ring,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: Ring) -> Poly {
        Poly::constant(ring, ring.one())
    }

    pub fn constant(ring: Ring, c: Coeff) -> Poly {
        let mut p = Poly::zero(ring);
        p.add_term(MultiIndex::zero(ring.nvars()), c);
        p
    }

    pub fn from_i64(ring: Ring, n: i64) -> Poly {
        Poly::constant(ring, ring.from_i64(n))
    }

    /// The coordinate x_{i+1} (0-based slot).
    pub fn var(ring: Ring, i: usize) -> Poly {
        assert!(i < ring.nvars());
        Poly::monomial(ring, MultiIndex::unit(i, ring.nvars()), ring.one())
    }

    pub fn monomial(ring: Ring, mi: MultiIndex, c: Coeff) -> Poly {
        assert_eq!(mi.nvars(), ring.nvars());
        let mut p = Poly::zero(ring);
        p.add_term(mi, c);
        p
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Coeff)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, mi: &MultiIndex) -> Coeff {
        self.terms
            .get(mi)
            .cloned()
            .unwrap_or_else(|| self.ring.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|mi| mi.is_zero())
    }

    /// Total degree; `None` is the distinguished marker for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|mi| mi.total()).max()
    }

    /// Leading term under grevlex.
    pub fn leading(&self) -> Option<(&MultiIndex, &Coeff)> {
        self.terms.iter().next_back()
    }

    fn add_term(&mut self, mi: MultiIndex, c: Coeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&mi) {
            None => {
                self.terms.insert(mi, c);
            }
            Some(old) => {
                let s = old.add(&c);
                if !s.is_zero() {
                    self.terms.insert(mi, s);
                }
            }
        }
    }

    fn check_ring(&self, other: &Poly) -> Result<()> {
        if self.ring != other.ring {
            return Err(KernelError::ContextMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Poly) -> Result<Poly> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (mi, c) in &other.terms {
            out.add_term(mi.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Poly) -> Result<Poly> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        Poly {
            ring: self.ring,
            terms: self
                .terms
                .iter()
                .map(|(mi, c)| (mi.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Result<Poly> {
        self.check_ring(other)?;
        let mut out = Poly::zero(self.ring);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.add_term(a.add(b), ca.mul(cb));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Coeff) -> Poly {
        let mut out = Poly::zero(self.ring);
        for (mi, v) in &self.terms {
            out.add_term(mi.clone(), v.mul(c));
        }
        out
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut out = Poly::one(self.ring);
        for _ in 0..e {
            out = out.mul(self).expect("same ring");
        }
        out
    }

    /// The formal partial derivative with respect to x_{i+1}.
    pub fn partial(&self, i: usize) -> Poly {
        let mut out = Poly::zero(self.ring);
        for (mi, c) in &self.terms {
            let e = mi.get(i);
            if e == 0 {
                continue;
            }
            let mut exps = mi.exponents().to_vec();
            exps[i] -= 1;
            out.add_term(MultiIndex::new(exps), c.mul(&self.ring.from_i64(e as i64)));
        }
        out
    }

    /// Multivariate long division by a single divisor, reducing every term
    /// divisible by the leading monomial of `g`. Returns the quotient when the
    /// remainder vanishes (a single polynomial is a Groebner basis of the
    /// principal ideal it generates, so this decides divisibility).
    pub fn exact_divide(&self, g: &Poly) -> Result<Option<Poly>> {
        self.check_ring(g)?;
        if g.is_zero() {
            return Err(KernelError::DivisionByZero);
        }
        let (lm, lc) = g.leading().expect("nonzero");
        let lc_inv = lc.inv()?;
        let mut work = self.clone();
        let mut quot = Poly::zero(self.ring);
        loop {
            // Highest term still divisible by lm(g).
            let hit = work
                .terms
                .iter()
                .rev()
                .find(|(mi, _)| lm.leq(mi))
                .map(|(mi, c)| (mi.clone(), c.clone()));
            let Some((mi, c)) = hit else {
                break;
            };
            let q_mi = mi.checked_sub(lm).expect("divisible");
            let q_c = c.mul(&lc_inv);
            let q_term = Poly::monomial(self.ring, q_mi, q_c);
            work = work.sub(&q_term.mul(g)?)?;
            quot = quot.add(&q_term)?;
        }
        if work.is_zero() {
            Ok(Some(quot))
        } else {
            Ok(None)
        }
    }

    /// Canonical text rendering: terms in grevlex-descending order, e.g.
    /// "x2^4*x3 + 1". Variable names default to x1..xn.
    pub fn render(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (idx, (mi, c)) in self.terms.iter().rev().enumerate() {
            let (neg, mag) = match c {
                Coeff::Rat(q) if q < &num::BigRational::from_integer(0.into()) => {
                    (true, format!("{}", -q))
                }
                other => (false, format!("{other}")),
            };
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = render_monomial(mi, names);
            if mono.is_empty() {
                out.push_str(&mag);
            } else if mag == "1" {
                out.push_str(&mono);
            } else {
                out.push_str(&mag);
                out.push('*');
                out.push_str(&mono);
            }
        }
        out
    }

    pub fn default_names(ring: &Ring) -> Vec<String> {
        (1..=ring.nvars()).map(|i| format!("x{i}")).collect()
    }
}

fn render_monomial(mi: &MultiIndex, names: &[String]) -> String {
    let mut parts = Vec::new();
    for (i, &e) in mi.exponents().iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(names[i].clone()),
            _ => parts.push(format!("{}^{}", names[i], e)),
        }
    }
    parts.join("*")
}

impl std::fmt::Display for Poly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.render(&Poly::default_names(&self.ring)))
    }
}

/// Delta^(alpha) applied to a single monomial: C(beta,alpha) x^{beta-alpha}
/// if beta >= alpha, else 0; extended k-linearly over `f`.
pub fn delta_apply(alpha: &MultiIndex, f: &Poly) -> Poly {
    let ring = f.ring();
    let mut out = Poly::zero(ring);
    for (beta, c) in f.terms() {
        if let Some(diff) = beta.checked_sub(alpha) {
            out.add_term(diff, c.mul(&binom(beta, alpha, &ring)));
        }
    }
    out
}
