//! Multi-indices in N^n with the grevlex order (x1 > x2 > ... > xn) and
//! entry-wise binomial coefficients.

use std::cmp::Ordering;

use num::BigInt;

use crate::coeff::{Coeff, Ring};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> MultiIndex {
        MultiIndex(exponents)
    }

    pub fn zero(nvars: usize) -> MultiIndex {
        MultiIndex(vec![0; nvars])
    }

    /// The index with a single 1 in slot `i` (0-based).
    pub fn unit(i: usize, nvars: usize) -> MultiIndex {
        let mut e = vec![0; nvars];
        e[i] = 1;
        MultiIndex(e)
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, i: usize) -> u32 {
        self.0[i]
    }

    /// |alpha|, the total degree.
    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        debug_assert_eq!(self.0.len(), other.0.len());
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Entry-wise subtraction; defined only when `other <= self`.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        debug_assert_eq!(self.0.len(), other.0.len());
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(MultiIndex)
    }

    /// The partial order: beta <= alpha entry-wise.
    pub fn leq(&self, other: &MultiIndex) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Entry-wise lcm (max), the monomial lcm.
    pub fn lcm(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    pub fn is_coprime_with(&self, other: &MultiIndex) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// All indices of total degree exactly `d`.
    pub fn all_of_degree(nvars: usize, d: u32) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; nvars];
        fill_degree(&mut cur, 0, d, &mut out);
        out
    }

    /// All indices of total degree at most `d`.
    pub fn all_up_to(nvars: usize, d: u32) -> Vec<MultiIndex> {
        (0..=d)
            .flat_map(|k| MultiIndex::all_of_degree(nvars, k))
            .collect()
    }

    /// All beta <= self, entry-wise.
    pub fn all_below(&self) -> Vec<MultiIndex> {
        let mut out = vec![MultiIndex(Vec::with_capacity(self.0.len()))];
        for &e in &self.0 {
            out = out
                .into_iter()
                .flat_map(|base| {
                    (0..=e).map(move |v| {
                        let mut b = base.0.clone();
                        b.push(v);
                        MultiIndex(b)
                    })
                })
                .collect();
        }
        out
    }

    /// Expands the index to the multiset of its coordinate symbols, e.g.
    /// (0,1,2) -> [1, 2, 2] (0-based variable slots).
    pub fn coordinate_multiset(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.total() as usize);
        for (i, &e) in self.0.iter().enumerate() {
            for _ in 0..e {
                out.push(i);
            }
        }
        out
    }
}

/// Grevlex: compare by total degree, ties broken so that in the difference the
/// rightmost nonzero entry being negative means "greater".
impl Ord for MultiIndex {
    fn cmp(&self, other: &MultiIndex) -> Ordering {
        match self.total().cmp(&other.total()) {
            Ordering::Equal => {}
            o => return o,
        }
        for (a, b) in self.0.iter().zip(&other.0).rev() {
            match a.cmp(b) {
                Ordering::Equal => {}
                Ordering::Less => return Ordering::Greater,
                Ordering::Greater => return Ordering::Less,
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &MultiIndex) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn fill_degree(cur: &mut Vec<u32>, pos: usize, rem: u32, out: &mut Vec<MultiIndex>) {
    if pos + 1 == cur.len() {
        cur[pos] = rem;
        out.push(MultiIndex(cur.clone()));
        cur[pos] = 0;
        return;
    }
    for v in 0..=rem {
        cur[pos] = v;
        fill_degree(cur, pos + 1, rem - v, out);
    }
    cur[pos] = 0;
}

/// C(beta, alpha) = prod_i C(beta_i, alpha_i), exactly over Z then mapped
/// into k. For F_p a Lucas fast path is used; both routes agree (tested).
pub fn binom(beta: &MultiIndex, alpha: &MultiIndex, ring: &Ring) -> Coeff {
    match ring.modulus() {
        Some(p) => {
            let mut acc = ring.one();
            for (b, a) in beta.exponents().iter().zip(alpha.exponents()) {
                acc = acc.mul(&Coeff::ModP {
                    r: binom_lucas(*b as u64, *a as u64, p),
                    p,
                });
                if acc.is_zero() {
                    break;
                }
            }
            acc
        }
        None => ring.from_bigint(&binom_exact(beta, alpha)),
    }
}

/// The integer prod_i C(beta_i, alpha_i), over Z.
pub fn binom_exact(beta: &MultiIndex, alpha: &MultiIndex) -> BigInt {
    let mut acc = BigInt::from(1);
    for (b, a) in beta.exponents().iter().zip(alpha.exponents()) {
        acc *= binom_bigint(*b as u64, *a as u64);
    }
    acc
}

pub fn binom_bigint(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    let k = k.min(n - k);
    let mut num = BigInt::from(1);
    let mut den = BigInt::from(1);
    for i in 0..k {
        num *= BigInt::from(n - i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

fn binom_lucas(mut n: u64, mut k: u64, p: u64) -> u64 {
    let mut acc: u64 = 1;
    while k > 0 || n > 0 {
        let (nd, kd) = (n % p, k % p);
        if kd > nd {
            return 0;
        }
        acc = (acc as u128 * binom_small_mod(nd, kd, p) as u128 % p as u128) as u64;
        n /= p;
        k /= p;
    }
    acc
}

fn binom_small_mod(n: u64, k: u64, p: u64) -> u64 {
    // n, k < p, so no factor in the numerator or denominator vanishes mod p.
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * ((n - i) % p) as u128 % p as u128;
        acc = acc * inv_mod(i + 1, p) as u128 % p as u128;
    }
    acc as u64
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // Fermat.
    let mut acc: u128 = 1;
    let mut b = a as u128 % p as u128;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p as u128;
        }
        b = b * b % p as u128;
        e >>= 1;
    }
    acc as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    #[test]
    fn grevlex_order_three_vars() {
        // x1^2 > x1x2 > x2^2 > x1x3 > x2x3 > x3^2
        let ordered = [
            mi(&[2, 0, 0]),
            mi(&[1, 1, 0]),
            mi(&[0, 2, 0]),
            mi(&[1, 0, 1]),
            mi(&[0, 1, 1]),
            mi(&[0, 0, 2]),
        ];
        for w in ordered.windows(2) {
            assert!(w[0] > w[1], "{:?} should exceed {:?}", w[0], w[1]);
        }
        assert!(mi(&[0, 0, 2]) > mi(&[1, 0, 0]));
    }

    #[test]
    fn binom_examples() {
        let q = Ring::rationals(1).unwrap();
        assert_eq!(binom(&mi(&[3]), &mi(&[2]), &q), q.from_i64(3));
        let f2 = Ring::new(1, 2).unwrap();
        assert!(binom(&mi(&[2]), &mi(&[1]), &f2).is_zero());
        let f5 = Ring::new(2, 5).unwrap();
        assert!(binom(&mi(&[4, 1]), &mi(&[0, 0]), &f5).is_one());
    }

    #[test]
    fn lucas_agrees_with_bigint_route() {
        for p in [2u64, 3, 5, 7, 13] {
            let ring = Ring::new(1, p).unwrap();
            for n in 0..40u64 {
                for k in 0..=n {
                    let fast = binom(&mi(&[n as u32]), &mi(&[k as u32]), &ring);
                    let slow = ring.from_bigint(&binom_bigint(n, k));
                    assert_eq!(fast, slow, "C({n},{k}) mod {p}");
                }
            }
        }
    }

    #[test]
    fn binomial_against_factorial_oracle() {
        // |beta| <= 12, product-of-entries definition vs factorial formula.
        let fact = |n: u64| -> BigInt {
            (1..=n)
                .map(BigInt::from)
                .product::<BigInt>()
                .max(BigInt::from(1))
        };
        for n in 0..=12u64 {
            for k in 0..=n {
                let expect = fact(n) / (fact(k) * fact(n - k));
                assert_eq!(binom_bigint(n, k), expect);
            }
        }
    }

    #[test]
    fn degree_enumeration() {
        assert_eq!(MultiIndex::all_of_degree(3, 2).len(), 6);
        assert_eq!(MultiIndex::all_up_to(2, 3).len(), 10);
        assert_eq!(mi(&[1, 2]).all_below().len(), 6);
    }

    #[test]
    fn coordinate_multiset_expansion() {
        assert_eq!(mi(&[0, 1, 2]).coordinate_multiset(), vec![1, 2, 2]);
    }
}
