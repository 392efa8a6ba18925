//! The iterated bracket of a top component against coordinates expands into
//! lower components with composition-sum coefficients:
//! [...[[D_m, x1], x2]..., xk] = sum_{j=0}^{m-k} c_j D_j with
//! c_j = sum over alpha in Z_{>0}^k, |alpha| = m - j, of prod_i D_{alpha_i}(x_i).

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hskernel_core::hs::HSDerivation;
use hskernel_core::ideal::{is_log_hs, Ideal};
use hskernel_core::{sample, DiffOp, Poly, Ring};

fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 1..=total.saturating_sub(parts - 1) {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn expansion(d: &HSDerivation, k: usize) -> DiffOp {
    let ring = d.ring();
    let m = d.length();
    let mut acc = DiffOp::zero(ring);
    for j in 0..=m - k {
        let mut c = Poly::zero(ring);
        for alpha in compositions(m - j, k) {
            let mut prod = Poly::one(ring);
            for (i, &a) in alpha.iter().enumerate() {
                prod = prod
                    .mul(&d.component(a).unwrap().apply(&Poly::var(ring, i)))
                    .unwrap();
            }
            c = c.add(&prod).unwrap();
        }
        acc = acc
            .add(&d.component(j).unwrap().scale(&c).unwrap())
            .unwrap();
    }
    acc
}

#[test]
fn iterated_bracket_expands_into_lower_components() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..40 {
        let ring = sample::ring(&mut rng, 3);
        let m = 1 + (rng.next_u64() % 4) as usize;
        let d = sample::hs(ring, &mut rng, m);
        for k in 1..=m.min(ring.nvars()) {
            // The innermost bracket is taken against the last list entry, so
            // reverse to put x1 innermost; by symmetry either order works.
            let xs: Vec<Poly> = (0..k).rev().map(|i| Poly::var(ring, i)).collect();
            let lhs = d.component(m).unwrap().iterated_bracket(&xs).unwrap();
            assert_eq!(lhs, expansion(&d, k), "length {m}, depth {k}");
        }
    }
}

#[test]
fn bracket_order_is_immaterial() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..25 {
        let ring = sample::ring(&mut rng, 3);
        let op = sample::diffop(ring, &mut rng, 3);
        let a = sample::poly(ring, &mut rng, 2, 3);
        let b = sample::poly(ring, &mut rng, 2, 3);
        let ab = op.bracket(&a).unwrap().bracket(&b).unwrap();
        let ba = op.bracket(&b).unwrap().bracket(&a).unwrap();
        assert_eq!(ab, ba);
    }
}

#[test]
fn char0_exponential_of_a_log_derivation_stays_log() {
    let ring = Ring::rationals(3).unwrap();
    let f = Poly::var(ring, 0)
        .mul(&Poly::var(ring, 1))
        .unwrap()
        .mul(&Poly::var(ring, 2))
        .unwrap();
    let j = Ideal::principal(f).unwrap();
    let delta = DiffOp::from_term(hskernel_core::MultiIndex::unit(0, 3), Poly::var(ring, 0));
    let d = HSDerivation::char0_integral(&delta, 6).unwrap();
    assert!(is_log_hs(&d, &j).unwrap());
}
