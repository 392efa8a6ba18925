//! Property suites for the commutative base layer: ring axioms for sparse
//! polynomials and the substitution homomorphism on truncated series.

use proptest::prelude::*;

use hskernel_core::series::{substitute, TruncSeries};
use hskernel_core::{MultiIndex, Poly, Ring};

const CHARS: [u64; 4] = [0, 2, 3, 5];

fn ring_strategy() -> impl Strategy<Value = Ring> {
    (1usize..=3, 0usize..CHARS.len()).prop_map(|(n, c)| Ring::new(n, CHARS[c]).unwrap())
}

fn poly_strategy(ring: Ring) -> impl Strategy<Value = Poly> {
    let n = ring.nvars();
    prop::collection::vec((prop::collection::vec(0u32..4, n), -6i64..=6), 0..5).prop_map(
        move |terms| {
            let mut acc = Poly::zero(ring);
            for (exps, c) in terms {
                let m = Poly::monomial(ring, MultiIndex::new(exps), ring.from_i64(c));
                acc = acc.add(&m).unwrap();
            }
            acc
        },
    )
}

fn triple() -> impl Strategy<Value = (Ring, Poly, Poly, Poly)> {
    ring_strategy().prop_flat_map(|ring| {
        (
            poly_strategy(ring),
            poly_strategy(ring),
            poly_strategy(ring),
        )
            .prop_map(move |(a, b, c)| (ring, a, b, c))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn addition_is_a_commutative_group((ring, a, b, c) in triple()) {
        prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
        prop_assert_eq!(
            a.add(&b).unwrap().add(&c).unwrap(),
            a.add(&b.add(&c).unwrap()).unwrap()
        );
        prop_assert_eq!(a.add(&Poly::zero(ring)).unwrap(), a.clone());
        prop_assert!(a.sub(&a).unwrap().is_zero());
        prop_assert_eq!(a.neg().neg(), a);
    }

    #[test]
    fn multiplication_is_commutative_and_distributes((ring, a, b, c) in triple()) {
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(
            a.mul(&b).unwrap().mul(&c).unwrap(),
            a.mul(&b.mul(&c).unwrap()).unwrap()
        );
        prop_assert_eq!(a.mul(&Poly::one(ring)).unwrap(), a.clone());
        prop_assert_eq!(
            a.mul(&b.add(&c).unwrap()).unwrap(),
            a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
        );
    }

    #[test]
    fn pow_is_iterated_multiplication((_, a, _, _) in triple()) {
        let mut prod = Poly::one(a.ring());
        for e in 0..4u32 {
            prop_assert_eq!(a.pow(e), prod.clone());
            prod = prod.mul(&a).unwrap();
        }
    }

    #[test]
    fn substitution_is_a_ring_homomorphism((ring, a, b, s) in triple()) {
        // Images x_i -> x_i + s*t, truncated at order 3.
        let images: Vec<TruncSeries> = (0..ring.nvars())
            .map(|i| {
                let mut im = TruncSeries::from_poly(Poly::var(ring, i), 3).unwrap();
                im.set_coeff(1, s.clone());
                im
            })
            .collect();
        let sum = substitute(&a.add(&b).unwrap(), &images).unwrap();
        prop_assert_eq!(
            sum,
            substitute(&a, &images).unwrap().add(&substitute(&b, &images).unwrap()).unwrap()
        );
        let prod = substitute(&a.mul(&b).unwrap(), &images).unwrap();
        prop_assert_eq!(
            prod,
            substitute(&a, &images).unwrap().mul(&substitute(&b, &images).unwrap()).unwrap()
        );
        let one = substitute(&Poly::one(ring), &images).unwrap();
        prop_assert_eq!(one, TruncSeries::from_poly(Poly::one(ring), 3).unwrap());
    }

    #[test]
    fn exact_divide_inverts_multiplication((_, a, b, _) in triple()) {
        prop_assume!(!b.is_zero());
        let prod = a.mul(&b).unwrap();
        let q = prod.exact_divide(&b).unwrap();
        prop_assert_eq!(q, Some(a));
    }
}
