//! Hasse-Schmidt derivations of length m, stored through the equivalent
//! k-algebra homomorphism Phi: R -> R[t]/(t^{m+1}), x_j -> sum D_i(x_j) t^i.

use std::sync::OnceLock;

use num::BigInt;

use crate::coeff::{Coeff, Ring};
use crate::diffop::{coeff_extract, DiffOp, Symbol};
use crate::error::{KernelError, Result};
use crate::multiindex::{binom_bigint, MultiIndex};
use crate::poly::Poly;
use crate::series::{substitute, TruncSeries};
use crate::text::parse_poly;
use crate::MAX_ORDER;

/// D = (Id, D_1, ..., D_m), materialized as the images Phi(x_1..x_n).
/// Component operators are recovered on demand and cached per slot.
#[derive(Debug)]
pub struct HSDerivation {
    ring: Ring,
    length: usize,
    images: Vec<TruncSeries>,
    components: Vec<OnceLock<DiffOp>>,
}

impl Clone for HSDerivation {
    fn clone(&self) -> HSDerivation {
        HSDerivation {
            ring: self.ring,
            length: self.length,
            images: self.images.clone(),
            components: (0..=self.length).map(|_| OnceLock::new()).collect(),
        }
    }
}

impl PartialEq for HSDerivation {
    fn eq(&self, other: &HSDerivation) -> bool {
        self.ring == other.ring && self.length == other.length && self.images == other.images
    }
}

impl Eq for HSDerivation {}

impl HSDerivation {
    /// The identity: Phi(x_j) = x_j.
    pub fn identity(ring: Ring, length: usize) -> Result<HSDerivation> {
        let images = (0..ring.nvars())
            .map(|j| TruncSeries::from_poly(Poly::var(ring, j), length))
            .collect::<Result<Vec<_>>>()?;
        HSDerivation::from_images(ring, images)
    }

    /// Validates that each image is congruent to its coordinate mod t.
    pub fn from_images(ring: Ring, images: Vec<TruncSeries>) -> Result<HSDerivation> {
        if images.len() != ring.nvars() {
            return Err(KernelError::ArityMismatch(ring.nvars(), images.len()));
        }
        let length = images[0].order();
        for (j, im) in images.iter().enumerate() {
            if im.ring() != ring {
                return Err(KernelError::ContextMismatch);
            }
            if im.order() != length {
                return Err(KernelError::LengthMismatch(length, im.order()));
            }
            if *im.coeff(0) != Poly::var(ring, j) {
                return Err(KernelError::InvalidHs(j));
            }
        }
        Ok(HSDerivation {
            ring,
            length,
            images,
            components: (0..=length).map(|_| OnceLock::new()).collect(),
        })
    }

    /// The length-m derivation with components (Id, Delta_i^(1), ..., Delta_i^(m)),
    /// i.e. Phi(x_i) = x_i + t.
    pub fn taylor(ring: Ring, i: usize, length: usize) -> Result<HSDerivation> {
        let mut d = HSDerivation::identity(ring, length)?;
        if length >= 1 {
            d.images[i].set_coeff(1, Poly::one(ring));
        }
        HSDerivation::from_images(ring, d.images)
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn images(&self) -> &[TruncSeries] {
        &self.images
    }

    /// Phi(f), the defining homomorphism.
    pub fn apply_phi(&self, f: &Poly) -> Result<TruncSeries> {
        substitute(f, &self.images)
    }

    /// D_i as a differential operator of order <= i, reconstructed from
    /// D_i(x^gamma) = [t^i] Phi(x^gamma) and cached.
    pub fn component(&self, i: usize) -> Result<&DiffOp> {
        assert!(i <= self.length);
        if let Some(op) = self.components[i].get() {
            return Ok(op);
        }
        let op = coeff_extract(
            self.ring,
            |gamma| {
                let mono = Poly::monomial(self.ring, gamma.clone(), self.ring.one());
                self.apply_phi(&mono)
                    .expect("validated images")
                    .coeff(i)
                    .clone()
            },
            i as u32,
        )?;
        Ok(self.components[i].get_or_init(|| op))
    }

    /// Group law: (D o D')_n = sum_{i+l=n} D_i o D'_l. On homomorphisms this
    /// is Phi'' = Phi-tilde o Phi', applying Phi coefficient-wise to Phi'(x_j).
    pub fn compose(&self, other: &HSDerivation) -> Result<HSDerivation> {
        if self.ring != other.ring {
            return Err(KernelError::ContextMismatch);
        }
        if self.length != other.length {
            return Err(KernelError::LengthMismatch(self.length, other.length));
        }
        let m = self.length;
        let mut images = Vec::with_capacity(self.ring.nvars());
        for j in 0..self.ring.nvars() {
            let mut out = TruncSeries::zero(self.ring, m)?;
            for l in 0..=m {
                let c = other.images[j].coeff(l);
                if c.is_zero() {
                    continue;
                }
                let lifted = self.apply_phi(c)?;
                for i in 0..=(m - l) {
                    let term = out.coeff(i + l).add(lifted.coeff(i))?;
                    out.set_coeff(i + l, term);
                }
            }
            images.push(out);
        }
        HSDerivation::from_images(self.ring, images)
    }

    /// Group inverse, solved degree by degree: if Phi(c_{j,<d}) has t^d
    /// coefficient e, the inverse image needs c_{j,d} = -e.
    pub fn inverse(&self) -> Result<HSDerivation> {
        let m = self.length;
        let mut images: Vec<TruncSeries> = (0..self.ring.nvars())
            .map(|j| TruncSeries::from_poly(Poly::var(self.ring, j), m))
            .collect::<Result<Vec<_>>>()?;
        for d in 1..=m {
            for image in images.iter_mut() {
                // t^d coefficient of Phi applied to the partial inverse image.
                let mut e = Poly::zero(self.ring);
                for i in 0..d {
                    let c = image.coeff(i);
                    if c.is_zero() {
                        continue;
                    }
                    e = e.add(self.apply_phi(c)?.coeff(d - i))?;
                }
                image.set_coeff(d, e.neg());
            }
        }
        let inv = HSDerivation::from_images(self.ring, images)?;
        debug_assert_eq!(self.compose(&inv)?, HSDerivation::identity(self.ring, m)?);
        Ok(inv)
    }

    /// Truncation tau_{m,m'}: drop the components above m'.
    pub fn truncate(&self, length: usize) -> Result<HSDerivation> {
        let images = self
            .images
            .iter()
            .map(|s| s.truncate(length))
            .collect::<Result<Vec<_>>>()?;
        HSDerivation::from_images(self.ring, images)
    }

    /// a . D, the derivation with components a^r D_r: scales the t^i image
    /// coefficients by a^i.
    pub fn scale(&self, a: &Poly) -> Result<HSDerivation> {
        if a.ring() != self.ring {
            return Err(KernelError::ContextMismatch);
        }
        let mut images = Vec::with_capacity(self.ring.nvars());
        for im in &self.images {
            let mut out = TruncSeries::zero(self.ring, self.length)?;
            let mut pw = Poly::one(self.ring);
            for i in 0..=self.length {
                out.set_coeff(i, im.coeff(i).mul(&pw)?);
                pw = pw.mul(a)?;
            }
            images.push(out);
        }
        HSDerivation::from_images(self.ring, images)
    }

    /// The canonical lift to length m+1 with vanishing top component.
    pub fn canonical_lift(&self) -> Result<HSDerivation> {
        if self.length + 1 > MAX_ORDER {
            return Err(KernelError::OrderCap(self.length + 1));
        }
        let images = self
            .images
            .iter()
            .map(|s| s.extend(self.length + 1))
            .collect::<Result<Vec<_>>>()?;
        HSDerivation::from_images(self.ring, images)
    }

    /// Lift to length m+1 whose top component restricts to the derivation
    /// `delta` on coordinates: images gain delta(x_j) t^{m+1}.
    pub fn with_top_term(&self, delta: &DiffOp) -> Result<HSDerivation> {
        let mut lifted = self.canonical_lift()?;
        let top = lifted.length;
        for j in 0..self.ring.nvars() {
            let v = delta.apply(&Poly::var(self.ring, j));
            lifted.images[j].set_coeff(top, v);
        }
        HSDerivation::from_images(self.ring, lifted.images)
    }

    /// In characteristic 0 a derivation integrates to every length via
    /// D_i = D_1^i / i!.
    pub fn char0_integral(delta: &DiffOp, length: usize) -> Result<HSDerivation> {
        let ring = delta.ring();
        let mut images = Vec::with_capacity(ring.nvars());
        for j in 0..ring.nvars() {
            let mut out = TruncSeries::zero(ring, length)?;
            let mut v = Poly::var(ring, j);
            for i in 0..=length {
                out.set_coeff(i, v.scale(&ring.factorial_inv(i)?));
                v = delta.apply(&v);
            }
            images.push(out);
        }
        HSDerivation::from_images(ring, images)
    }

    /// The total symbol Sigma_m(D) = sum sigma_i(D_i) t^i.
    pub fn total_symbol(&self) -> Result<TotalSymbol> {
        let components = (0..=self.length)
            .map(|i| self.component(i)?.symbol(i as u32))
            .collect::<Result<Vec<_>>>()?;
        Ok(TotalSymbol { components })
    }

    pub fn to_json(&self) -> String {
        let names = Poly::default_names(&self.ring);
        let images: Vec<Vec<String>> = self
            .images
            .iter()
            .map(|s| s.coeffs().iter().map(|p| p.render(&names)).collect())
            .collect();
        serde_json::json!({ "length": self.length, "images": images }).to_string()
    }

    pub fn from_json(ring: Ring, src: &str) -> Result<HSDerivation> {
        let v: serde_json::Value =
            serde_json::from_str(src).map_err(|e| KernelError::BadSerialization(e.to_string()))?;
        let length = v["length"]
            .as_u64()
            .ok_or_else(|| KernelError::BadSerialization("missing length".into()))?
            as usize;
        let arr = v["images"]
            .as_array()
            .ok_or_else(|| KernelError::BadSerialization("missing images".into()))?;
        let names = Poly::default_names(&ring);
        let mut images = Vec::with_capacity(arr.len());
        for row in arr {
            let row = row
                .as_array()
                .ok_or_else(|| KernelError::BadSerialization("image must be an array".into()))?;
            let coeffs = row
                .iter()
                .map(|s| {
                    let s = s.as_str().ok_or_else(|| {
                        KernelError::BadSerialization("coefficient must be a string".into())
                    })?;
                    parse_poly(s, ring, &names)
                })
                .collect::<Result<Vec<_>>>()?;
            images.push(TruncSeries::from_coeffs(ring, length, coeffs)?);
        }
        HSDerivation::from_images(ring, images)
    }
}

/// The image of D in the associated graded ring, slot i holding sigma_i(D_i).
#[derive(Clone, Debug, PartialEq)]
pub struct TotalSymbol {
    components: Vec<Symbol>,
}

impl TotalSymbol {
    pub fn from_components(components: Vec<Symbol>) -> Result<TotalSymbol> {
        for (i, s) in components.iter().enumerate() {
            if s.degree() as usize != i {
                return Err(KernelError::OrderTooHigh(s.degree(), i as u32));
            }
        }
        Ok(TotalSymbol { components })
    }

    pub fn length(&self) -> usize {
        self.components.len() - 1
    }

    pub fn slot(&self, i: usize) -> &Symbol {
        &self.components[i]
    }

    pub fn ring(&self) -> Ring {
        self.components[0].ring()
    }

    /// Convolution product matching the group law.
    pub fn mul(&self, other: &TotalSymbol) -> Result<TotalSymbol> {
        let m = self.length().min(other.length());
        let mut components = Vec::with_capacity(m + 1);
        for n in 0..=m {
            let mut acc = Symbol::zero(self.ring(), n as u32);
            for i in 0..=n {
                acc = acc.add(&self.components[i].mul(&other.components[n - i])?)?;
            }
            components.push(acc);
        }
        Ok(TotalSymbol { components })
    }

    /// a . : slot i is scaled by a^i.
    pub fn scale(&self, a: &Poly) -> Result<TotalSymbol> {
        let mut components = Vec::with_capacity(self.components.len());
        let mut pw = Poly::one(a.ring());
        for s in &self.components {
            components.push(s.scale(&pw)?);
            pw = pw.mul(a)?;
        }
        Ok(TotalSymbol { components })
    }

    /// Exponential type: C(i+j, i) R_{i+j} = R_i R_j for all i + j <= m.
    pub fn is_exponential_type(&self) -> Result<bool> {
        let ring = self.ring();
        for i in 0..=self.length() {
            for j in 0..=(self.length() - i) {
                let c: Coeff = ring.from_bigint(&binom_coeff(i, j));
                let lhs = self.components[i + j].scale_coeff(&c);
                let rhs = self.components[i].mul(&self.components[j])?;
                if lhs != rhs {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

fn binom_coeff(i: usize, j: usize) -> BigInt {
    binom_bigint((i + j) as u64, i as u64)
}

/// sigma^(alpha) as a degree-|alpha| symbol.
pub fn sigma_basis(ring: Ring, alpha: MultiIndex) -> Symbol {
    let d = alpha.total();
    DiffOp::delta(ring, alpha)
        .symbol(d)
        .expect("order equals degree")
}
