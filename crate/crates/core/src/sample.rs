//! Seeded random generators for the property suites. Sizes are deliberately
//! small: theta and the partition enumerations grow fast with degree.

use rand::Rng;

use crate::coeff::{Coeff, Ring};
use crate::diffop::DiffOp;
use crate::dual::MultiDerivation;
use crate::hs::HSDerivation;
use crate::multiindex::MultiIndex;
use crate::poly::Poly;
use crate::series::TruncSeries;

/// One of the standard test fields: F_2, F_3, F_5, or Q.
pub fn ring(rng: &mut impl Rng, nvars: usize) -> Ring {
    let chars = [0u64, 2, 3, 5];
    Ring::new(nvars, chars[rng.gen_range(0..chars.len())]).expect("valid test ring")
}

pub fn coeff(ring: Ring, rng: &mut impl Rng) -> Coeff {
    match ring.modulus() {
        Some(p) => ring.from_i64(rng.gen_range(0..p) as i64),
        None => ring.from_i64(rng.gen_range(-3..=3)),
    }
}

pub fn nonzero_coeff(ring: Ring, rng: &mut impl Rng) -> Coeff {
    loop {
        let c = coeff(ring, rng);
        if !c.is_zero() {
            return c;
        }
    }
}

pub fn poly(ring: Ring, rng: &mut impl Rng, max_deg: u32, max_terms: usize) -> Poly {
    let mut out = Poly::zero(ring);
    let terms = rng.gen_range(0..=max_terms);
    for _ in 0..terms {
        let deg = rng.gen_range(0..=max_deg);
        let exps: Vec<u32> = random_index(rng, ring.nvars(), deg);
        let mono = Poly::monomial(ring, MultiIndex::new(exps), coeff(ring, rng));
        out = out.add(&mono).expect("same ring");
    }
    out
}

fn random_index(rng: &mut impl Rng, nvars: usize, total: u32) -> Vec<u32> {
    let mut exps = vec![0u32; nvars];
    for _ in 0..total {
        exps[rng.gen_range(0..nvars)] += 1;
    }
    exps
}

/// A random operator of order <= `max_order` (order exactly `max_order` is
/// not forced; zero is possible).
pub fn diffop(ring: Ring, rng: &mut impl Rng, max_order: u32) -> DiffOp {
    let mut out = DiffOp::zero(ring);
    let terms = rng.gen_range(0..=3);
    for _ in 0..terms {
        let deg = rng.gen_range(0..=max_order);
        let alpha = MultiIndex::new(random_index(rng, ring.nvars(), deg));
        let a = poly(ring, rng, 2, 2);
        out = out.add(&DiffOp::from_term(alpha, a)).expect("same ring");
    }
    out
}

/// A random derivation: order <= 1, no constant part.
pub fn derivation(ring: Ring, rng: &mut impl Rng) -> DiffOp {
    let mut out = DiffOp::zero(ring);
    for i in 0..ring.nvars() {
        if rng.gen_bool(0.7) {
            let a = poly(ring, rng, 2, 2);
            out = out
                .add(&DiffOp::from_term(MultiIndex::unit(i, ring.nvars()), a))
                .expect("same ring");
        }
    }
    out
}

/// A random length-m Hasse-Schmidt derivation with small image coefficients.
pub fn hs(ring: Ring, rng: &mut impl Rng, length: usize) -> HSDerivation {
    let images = (0..ring.nvars())
        .map(|j| {
            let mut s = TruncSeries::from_poly(Poly::var(ring, j), length).expect("order ok");
            for i in 1..=length {
                if rng.gen_bool(0.6) {
                    s.set_coeff(i, poly(ring, rng, 2, 2));
                }
            }
            s
        })
        .collect();
    HSDerivation::from_images(ring, images).expect("constant terms are coordinates")
}

/// A random homogeneous element of the graded dual.
pub fn multiderivation(ring: Ring, rng: &mut impl Rng, degree: u32) -> MultiDerivation {
    let mut values = Vec::new();
    for gamma in MultiIndex::all_of_degree(ring.nvars(), degree) {
        if rng.gen_bool(0.5) {
            values.push((gamma, poly(ring, rng, 2, 2)));
        }
    }
    MultiDerivation::from_values(ring, degree, values).expect("degrees match")
}
