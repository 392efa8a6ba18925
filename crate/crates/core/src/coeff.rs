//! Exact coefficient arithmetic over F_p (p prime) and Q.

use num::bigint::Sign;
use num::{BigInt, BigRational, One, Zero};

use crate::error::{KernelError, Result};
use crate::MAX_VARS;

/// Ring context shared by all values of a computation: number of variables
/// and the coefficient field (`None` means Q, `Some(p)` means F_p).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Ring {
    nvars: usize,
    modulus: Option<u64>,
}

impl Ring {
    /// `characteristic` must be 0 (for Q) or a prime.
    pub fn new(nvars: usize, characteristic: u64) -> Result<Ring> {
        if nvars == 0 || nvars > MAX_VARS {
            return Err(KernelError::TooManyVars(nvars));
        }
        let modulus = match characteristic {
            0 => None,
            p if is_prime(p) => Some(p),
            p => return Err(KernelError::BadCharacteristic(p)),
        };
        Ok(Ring { nvars, modulus })
    }

    pub fn rationals(nvars: usize) -> Result<Ring> {
        Ring::new(nvars, 0)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn characteristic(&self) -> u64 {
        self.modulus.unwrap_or(0)
    }

    pub fn modulus(&self) -> Option<u64> {
        self.modulus
    }

    pub fn zero(&self) -> Coeff {
        match self.modulus {
            Some(p) => Coeff::ModP { r: 0, p },
            None => Coeff::Rat(BigRational::zero()),
        }
    }

    pub fn one(&self) -> Coeff {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Coeff {
        self.from_bigint(&BigInt::from(n))
    }

    pub fn from_bigint(&self, n: &BigInt) -> Coeff {
        match self.modulus {
            Some(p) => {
                let pb = BigInt::from(p);
                let mut r = n % &pb;
                if r.sign() == Sign::Minus {
                    r += &pb;
                }
                let (_, digits) = r.to_u64_digits();
                Coeff::ModP {
                    r: digits.first().copied().unwrap_or(0),
                    p,
                }
            }
            None => Coeff::Rat(BigRational::from_integer(n.clone())),
        }
    }

    /// Inverse of i! in the coefficient field, when it exists.
    pub fn factorial_inv(&self, i: usize) -> Result<Coeff> {
        let mut f = BigInt::one();
        for j in 1..=i {
            f *= BigInt::from(j);
        }
        self.from_bigint(&f)
            .inv()
            .map_err(|_| KernelError::FactorialNotInvertible(i))
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// An exact scalar: a residue mod a prime, or an arbitrary-precision rational.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Coeff {
    ModP { r: u64, p: u64 },
    Rat(BigRational),
}

impl Coeff {
    pub fn is_zero(&self) -> bool {
        match self {
            Coeff::ModP { r, .. } => *r == 0,
            Coeff::Rat(q) => q.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Coeff::ModP { r, .. } => *r == 1,
            Coeff::Rat(q) => q.is_one(),
        }
    }

    pub fn add(&self, other: &Coeff) -> Coeff {
        match (self, other) {
            (Coeff::ModP { r: a, p }, Coeff::ModP { r: b, p: q }) => {
                assert_eq!(p, q, "mixed moduli");
                Coeff::ModP {
                    r: (a + b) % p,
                    p: *p,
                }
            }
            (Coeff::Rat(a), Coeff::Rat(b)) => Coeff::Rat(a + b),
            _ => panic!("mixed coefficient kinds"),
        }
    }

    pub fn sub(&self, other: &Coeff) -> Coeff {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Coeff {
        match self {
            Coeff::ModP { r, p } => Coeff::ModP {
                r: (p - r) % p,
                p: *p,
            },
            Coeff::Rat(a) => Coeff::Rat(-a),
        }
    }

    pub fn mul(&self, other: &Coeff) -> Coeff {
        match (self, other) {
            (Coeff::ModP { r: a, p }, Coeff::ModP { r: b, p: q }) => {
                assert_eq!(p, q, "mixed moduli");
                let v = (*a as u128 * *b as u128 % *p as u128) as u64;
                Coeff::ModP { r: v, p: *p }
            }
            (Coeff::Rat(a), Coeff::Rat(b)) => Coeff::Rat(a * b),
            _ => panic!("mixed coefficient kinds"),
        }
    }

    pub fn inv(&self) -> Result<Coeff> {
        if self.is_zero() {
            return Err(KernelError::DivisionByZero);
        }
        Ok(match self {
            Coeff::ModP { r, p } => Coeff::ModP {
                r: mod_pow(*r, p - 2, *p),
                p: *p,
            },
            Coeff::Rat(a) => Coeff::Rat(a.recip()),
        })
    }

    pub fn div(&self, other: &Coeff) -> Result<Coeff> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: u32) -> Coeff {
        match self {
            Coeff::ModP { r, p } => Coeff::ModP {
                r: mod_pow(*r, e as u64, *p),
                p: *p,
            },
            Coeff::Rat(a) => {
                let mut acc = BigRational::one();
                for _ in 0..e {
                    acc *= a;
                }
                Coeff::Rat(acc)
            }
        }
    }
}

fn mod_pow(b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc: u128 = 1;
    let mut bb = b as u128 % p as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * bb % p as u128;
        }
        bb = bb * bb % p as u128;
        e >>= 1;
    }
    acc as u64
}

impl std::fmt::Display for Coeff {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Coeff::ModP { r, .. } => write!(f, "{r}"),
            Coeff::Rat(q) => write!(f, "{q}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_rejects_composite_characteristic() {
        assert_eq!(
            Ring::new(2, 4).unwrap_err(),
            KernelError::BadCharacteristic(4)
        );
        assert_eq!(
            Ring::new(2, 1).unwrap_err(),
            KernelError::BadCharacteristic(1)
        );
        assert!(Ring::new(2, 2).is_ok());
        assert!(Ring::new(2, 101).is_ok());
    }

    #[test]
    fn ring_rejects_too_many_vars() {
        assert!(Ring::new(9, 0).is_err());
        assert!(Ring::new(0, 0).is_err());
    }

    #[test]
    fn modp_arithmetic() {
        let r = Ring::new(1, 7).unwrap();
        let a = r.from_i64(-3);
        assert_eq!(a, Coeff::ModP { r: 4, p: 7 });
        assert!(a.mul(&a.inv().unwrap()).is_one());
        assert!(r.zero().inv().is_err());
    }

    #[test]
    fn rational_arithmetic_is_reduced() {
        let r = Ring::rationals(1).unwrap();
        let half = r.from_i64(1).div(&r.from_i64(2)).unwrap();
        let again = half.add(&half);
        assert!(again.is_one());
    }

    #[test]
    fn factorial_inverse() {
        let q = Ring::rationals(1).unwrap();
        assert!(q.factorial_inv(5).is_ok());
        let f2 = Ring::new(1, 2).unwrap();
        assert!(f2.factorial_inv(1).is_ok());
        assert_eq!(
            f2.factorial_inv(2).unwrap_err(),
            KernelError::FactorialNotInvertible(2)
        );
        let f7 = Ring::new(1, 7).unwrap();
        assert!(f7.factorial_inv(6).is_ok());
        assert!(f7.factorial_inv(7).is_err());
    }
}
