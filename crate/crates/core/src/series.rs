//! Truncated power series R[t]/(t^{m+1}) with polynomial coefficients, and
//! the substitution homomorphism x_j -> images[j].

use crate::coeff::Ring;
use crate::error::{KernelError, Result};
use crate::poly::Poly;
use crate::MAX_ORDER;

/// An element of R_m = R[t]/(t^{m+1}): exactly m+1 polynomial coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncSeries {
    order: usize,
    coeffs: Vec<Poly>,
}

impl TruncSeries {
    pub fn zero(ring: Ring, order: usize) -> Result<TruncSeries> {
        if order > MAX_ORDER {
            return Err(KernelError::OrderCap(order));
        }
        Ok(TruncSeries {
            order,
            coeffs: vec![Poly::zero(ring); order + 1],
        })
    }

    pub fn from_poly(p: Poly, order: usize) -> Result<TruncSeries> {
        let mut s = TruncSeries::zero(p.ring(), order)?;
        s.coeffs[0] = p;
        Ok(s)
    }

    pub fn from_coeffs(ring: Ring, order: usize, mut coeffs: Vec<Poly>) -> Result<TruncSeries> {
        if coeffs.len() > order + 1 {
            return Err(KernelError::BadTruncation(coeffs.len() - 1, order));
        }
        for c in &coeffs {
            if c.ring() != ring {
                return Err(KernelError::ContextMismatch);
            }
        }
        coeffs.resize(order + 1, Poly::zero(ring));
        let mut s = TruncSeries::zero(ring, order)?;
        s.coeffs = coeffs;
        Ok(s)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn ring(&self) -> Ring {
        self.coeffs[0].ring()
    }

    pub fn coeff(&self, i: usize) -> &Poly {
        &self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    pub fn set_coeff(&mut self, i: usize, p: Poly) {
        assert_eq!(p.ring(), self.ring());
        self.coeffs[i] = p;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Poly::is_zero)
    }

    fn check(&self, other: &TruncSeries) -> Result<()> {
        if self.ring() != other.ring() {
            return Err(KernelError::ContextMismatch);
        }
        if self.order != other.order {
            return Err(KernelError::LengthMismatch(self.order, other.order));
        }
        Ok(())
    }

    pub fn add(&self, other: &TruncSeries) -> Result<TruncSeries> {
        self.check(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.add(b))
            .collect::<Result<Vec<_>>>()?;
        Ok(TruncSeries {
            order: self.order,
            coeffs,
        })
    }

    pub fn sub(&self, other: &TruncSeries) -> Result<TruncSeries> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> TruncSeries {
        TruncSeries {
            order: self.order,
            coeffs: self.coeffs.iter().map(Poly::neg).collect(),
        }
    }

    /// Product in R[t]/(t^{m+1}): terms of t-degree > m are discarded.
    pub fn mul(&self, other: &TruncSeries) -> Result<TruncSeries> {
        self.check(other)?;
        let mut out = TruncSeries::zero(self.ring(), self.order)?;
        for i in 0..=self.order {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=(self.order - i) {
                if other.coeffs[j].is_zero() {
                    continue;
                }
                let prod = self.coeffs[i].mul(&other.coeffs[j])?;
                out.coeffs[i + j] = out.coeffs[i + j].add(&prod)?;
            }
        }
        Ok(out)
    }

    pub fn scale_poly(&self, p: &Poly) -> Result<TruncSeries> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.mul(p))
            .collect::<Result<Vec<_>>>()?;
        Ok(TruncSeries {
            order: self.order,
            coeffs,
        })
    }

    pub fn pow(&self, e: u32) -> Result<TruncSeries> {
        let mut out = TruncSeries::from_poly(Poly::one(self.ring()), self.order)?;
        for _ in 0..e {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    /// Truncation R_m -> R_{m'}, a ring homomorphism for m' <= m.
    pub fn truncate(&self, order: usize) -> Result<TruncSeries> {
        if order > self.order {
            return Err(KernelError::BadTruncation(order, self.order));
        }
        Ok(TruncSeries {
            order,
            coeffs: self.coeffs[..=order].to_vec(),
        })
    }

    /// Extension R_m -> R_{m+q} with zero top coefficients.
    pub fn extend(&self, order: usize) -> Result<TruncSeries> {
        if order > MAX_ORDER {
            return Err(KernelError::OrderCap(order));
        }
        assert!(order >= self.order);
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order + 1, Poly::zero(self.ring()));
        Ok(TruncSeries { order, coeffs })
    }
}

/// The image of `f` under the k-algebra homomorphism sending x_j to
/// `images[j]`, computed term by term with truncation at t^{m+1}.
pub fn substitute(f: &Poly, images: &[TruncSeries]) -> Result<TruncSeries> {
    let ring = f.ring();
    if images.len() != ring.nvars() {
        return Err(KernelError::ArityMismatch(ring.nvars(), images.len()));
    }
    let order = images[0].order();
    for im in images {
        if im.ring() != ring {
            return Err(KernelError::ContextMismatch);
        }
        if im.order() != order {
            return Err(KernelError::LengthMismatch(order, im.order()));
        }
    }
    let mut out = TruncSeries::zero(ring, order)?;
    for (mi, c) in f.terms() {
        let mut term = TruncSeries::from_poly(Poly::constant(ring, c.clone()), order)?;
        for (j, &e) in mi.exponents().iter().enumerate() {
            if e > 0 {
                term = term.mul(&images[j].pow(e)?)?;
            }
        }
        out = out.add(&term)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Poly;

    fn contra_images(ring: Ring, order: usize) -> Vec<TruncSeries> {
        // Phi4: x1 -> x1; x2 -> x2 + x2^2 t^2 + x2^3 t^4; x3 -> x3 + x2^2 t.
        let x1 = Poly::var(ring, 0);
        let x2 = Poly::var(ring, 1);
        let x3 = Poly::var(ring, 2);
        let mut im1 = TruncSeries::from_poly(x1, order).unwrap();
        let mut im2 = TruncSeries::from_poly(x2.clone(), order).unwrap();
        if order >= 2 {
            im2.set_coeff(2, x2.pow(2));
        }
        if order >= 4 {
            im2.set_coeff(4, x2.pow(3));
        }
        let mut im3 = TruncSeries::from_poly(x3, order).unwrap();
        if order >= 1 {
            im3.set_coeff(1, x2.pow(2));
        }
        let _ = &mut im1;
        vec![im1, im2, im3]
    }

    fn f_contra(ring: Ring) -> Poly {
        Poly::var(ring, 0)
            .pow(2)
            .add(&Poly::var(ring, 1).pow(3))
            .unwrap()
            .add(&Poly::var(ring, 2).pow(2))
            .unwrap()
    }

    #[test]
    fn phi4_fixes_f() {
        let ring = Ring::new(3, 2).unwrap();
        let f = f_contra(ring);
        let s = substitute(&f, &contra_images(ring, 4)).unwrap();
        assert_eq!(*s.coeff(0), f);
        for i in 1..=4 {
            assert!(s.coeff(i).is_zero(), "t^{i} coefficient should vanish");
        }
    }

    #[test]
    fn phi1_kills_f_to_first_order() {
        let ring = Ring::new(3, 2).unwrap();
        let f = f_contra(ring);
        let s = substitute(&f, &contra_images(ring, 1)).unwrap();
        assert_eq!(*s.coeff(0), f);
        assert!(s.coeff(1).is_zero());
    }

    #[test]
    fn identity_images_give_constant_series() {
        let ring = Ring::rationals(2).unwrap();
        let f = Poly::var(ring, 0).mul(&Poly::var(ring, 1)).unwrap();
        let images: Vec<_> = (0..2)
            .map(|j| TruncSeries::from_poly(Poly::var(ring, j), 3).unwrap())
            .collect();
        let s = substitute(&f, &images).unwrap();
        assert_eq!(*s.coeff(0), f);
        assert!((1..=3).all(|i| s.coeff(i).is_zero()));
    }

    #[test]
    fn truncation_is_a_ring_homomorphism_on_substitution() {
        let ring = Ring::new(3, 2).unwrap();
        let f = f_contra(ring);
        let images = contra_images(ring, 4);
        let full = substitute(&f, &images).unwrap();
        for m2 in 0..=4usize {
            let trunc_images: Vec<_> = images.iter().map(|s| s.truncate(m2).unwrap()).collect();
            assert_eq!(
                full.truncate(m2).unwrap(),
                substitute(&f, &trunc_images).unwrap()
            );
        }
    }

    #[test]
    fn order_cap_enforced() {
        let ring = Ring::rationals(1).unwrap();
        assert!(TruncSeries::zero(ring, crate::MAX_ORDER + 1).is_err());
    }
}
