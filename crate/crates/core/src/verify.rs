//! Randomized property suites: the main theorems run as executable checks
//! over seeded random inputs. Cases are independent and data-parallel; the
//! per-case rng depends only on (seed, index), so sequential and parallel
//! runs agree exactly.

use num::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rand::Rng;

use crate::coeff::Ring;
use crate::diffop::{coeff_extract, poisson, DiffOp};
use crate::dual::{divided_power, sder_poisson, shuffle, theta, zeta, MultiDerivation};
use crate::hs::HSDerivation;
use crate::ideal::Ideal;
use crate::multiindex::MultiIndex;
use crate::poly::Poly;
use crate::sample;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parallelism {
    Sequential,
    /// Rayon data parallelism; falls back to sequential when the crate is
    /// built without the "parallel" feature.
    Parallel,
}

#[derive(Clone, Debug)]
pub struct SuiteOutcome {
    pub name: String,
    pub cases: usize,
    pub failures: usize,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

impl std::fmt::Display for SuiteOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}: {}/{} passed{}",
            self.name,
            self.cases - self.failures,
            self.cases,
            if self.passed() { "" } else { "  [FAIL]" }
        )
    }
}

fn case_rng(seed: u64, idx: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ (idx as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn run_cases(
    name: &str,
    cases: usize,
    seed: u64,
    par: Parallelism,
    case: impl Fn(&mut ChaCha8Rng) -> bool + Sync,
) -> SuiteOutcome {
    let failures = match par {
        #[cfg(feature = "parallel")]
        Parallelism::Parallel => {
            use rayon::prelude::*;
            (0..cases)
                .into_par_iter()
                .filter(|&i| !case(&mut case_rng(seed, i)))
                .count()
        }
        _ => (0..cases)
            .filter(|&i| !case(&mut case_rng(seed, i)))
            .count(),
    };
    SuiteOutcome {
        name: name.into(),
        cases,
        failures,
    }
}

fn small_ring(rng: &mut impl Rng) -> Ring {
    let nvars = rng.gen_range(1..=3);
    sample::ring(rng, nvars)
}

/// theta(P o Q, n+m) = shuffle(theta(P, n), theta(Q, m)), n + m <= 5.
pub fn theta_multiplicativity(seed: u64, cases: usize, par: Parallelism) -> SuiteOutcome {
    run_cases("theta multiplicativity", cases, seed, par, |rng| {
        let ring = small_ring(rng);
        let n = rng.gen_range(0..=3u32);
        let m = rng.gen_range(0..=(5 - n).min(3));
        let p = sample::diffop(ring, rng, n);
        let q = sample::diffop(ring, rng, m);
        let lhs = theta(&p.compose(&q).unwrap(), n + m).unwrap();
        let rhs = shuffle(&theta(&p, n).unwrap(), &theta(&q, m).unwrap()).unwrap();
        lhs == rhs
    })
}

/// theta(P, n) = 0 exactly when the degree-n slice of P vanishes.
pub fn theta_injectivity(seed: u64, cases: usize, par: Parallelism) -> SuiteOutcome {
    run_cases("theta injectivity", cases, seed, par, |rng| {
        let ring = small_ring(rng);
        let n = rng.gen_range(0..=3u32);
        let p = sample::diffop(ring, rng, n);
        let t = theta(&p, n).unwrap();
        t.is_zero() == p.symbol(n).unwrap().is_zero()
    })
}

/// The commutative diagram: theta_n(D_n) = zeta_n(D_1) for all n <= m.
pub fn hs_curio_diagram(seed: u64, cases: usize, par: Parallelism) -> SuiteOutcome {
    run_cases("theta/zeta commutative diagram", cases, seed, par, |rng| {
        let ring = small_ring(rng);
        let m = rng.gen_range(1..=4usize);
        let d = sample::hs(ring, rng, m);
        let d1 = MultiDerivation::from_derivation(d.component(1).unwrap()).unwrap();
        (0..=m).all(|n| {
            theta(d.component(n).unwrap(), n as u32).unwrap() == zeta(&d1, n as u32).unwrap()
        })
    })
}

fn factorial(n: u64) -> BigInt {
    (1..=n)
        .map(BigInt::from)
        .product::<BigInt>()
        .max(BigInt::from(1))
}

/// The five divided-power axioms on random homogeneous elements, with the
/// axiom-5 coefficient (ij)!/(i!(j!)^i) computed exactly over Z.
pub fn divided_power_axioms(seed: u64, cases: usize, par: Parallelism) -> SuiteOutcome {
    run_cases("divided-power axioms", cases, seed, par, |rng| {
        let nvars = rng.gen_range(1..=2);
        let ring = sample::ring(rng, nvars);
        let d = rng.gen_range(1..=2u32);
        let u = sample::multiderivation(ring, rng, d);
        let v = sample::multiderivation(ring, rng, d);

        // 1: rho_0 = 1, rho_1 = id.
        if divided_power(&u, 0).unwrap() != MultiDerivation::one(ring) {
            return false;
        }
        if divided_power(&u, 1).unwrap() != u {
            return false;
        }

        // 2: rho_i(u) * rho_j(u) = C(i+j, i) rho_{i+j}(u).
        let (i, j) = pick_degrees(rng, d, 4);
        let lhs = shuffle(
            &divided_power(&u, i).unwrap(),
            &divided_power(&u, j).unwrap(),
        )
        .unwrap();
        let c = crate::multiindex::binom_bigint((i + j) as u64, i as u64);
        let rhs = divided_power(&u, i + j)
            .unwrap()
            .scale(&Poly::constant(ring, ring.from_bigint(&c)))
            .unwrap();
        if lhs != rhs {
            return false;
        }

        // 3: rho_i(a u) = a^i rho_i(u) for ring elements a.
        let a = sample::poly(ring, rng, 1, 2);
        let i3 = rng.gen_range(0..=3u32).min(8 / d);
        let lhs = divided_power(&u.scale(&a).unwrap(), i3).unwrap();
        let rhs = divided_power(&u, i3).unwrap().scale(&a.pow(i3)).unwrap();
        if lhs != rhs {
            return false;
        }

        // 4: rho_i(u + v) = sum_{l+m=i} rho_l(u) * rho_m(v).
        let i4 = rng.gen_range(0..=3u32).min(8 / d);
        let lhs = divided_power(&u.add(&v).unwrap(), i4).unwrap();
        let mut rhs = MultiDerivation::zero(ring, i4 * d);
        for l in 0..=i4 {
            rhs = rhs
                .add(
                    &shuffle(
                        &divided_power(&u, l).unwrap(),
                        &divided_power(&v, i4 - l).unwrap(),
                    )
                    .unwrap(),
                )
                .unwrap();
        }
        if lhs != rhs {
            return false;
        }

        // 5: rho_i(rho_j(u)) = (ij)!/(i!(j!)^i) rho_{ij}(u), j >= 1.
        let (i5, j5) = loop {
            let i5 = rng.gen_range(0..=3u32);
            let j5 = rng.gen_range(1..=3u32);
            if i5 * j5 * d <= 6 {
                break (i5, j5);
            }
        };
        let lhs = divided_power(&divided_power(&u, j5).unwrap(), i5).unwrap();
        let c = factorial((i5 * j5) as u64) / (factorial(i5 as u64) * factorial(j5 as u64).pow(i5));
        let rhs = divided_power(&u, i5 * j5)
            .unwrap()
            .scale(&Poly::constant(ring, ring.from_bigint(&c)))
            .unwrap();
        lhs == rhs
    })
}

fn pick_degrees(rng: &mut impl Rng, d: u32, max_total: u32) -> (u32, u32) {
    loop {
        let i = rng.gen_range(0..=3u32);
        let j = rng.gen_range(0..=3u32);
        if (i + j) * d <= max_total.max(d) && (i + j) * d <= 8 {
            return (i, j);
        }
    }
}

/// Group axioms, the component convolution law, multiplicativity of the
/// total symbol, exponential type, the D_1 = 0 degeneration, and the
/// scalar action.
pub fn hs_group_symbol(seed: u64, cases: usize, par: Parallelism) -> SuiteOutcome {
    run_cases("HS group and total symbol", cases, seed, par, |rng| {
        let ring = small_ring(rng);
        let m = rng.gen_range(1..=4usize);
        let d = sample::hs(ring, rng, m);
        let dp = sample::hs(ring, rng, m);
        let e = HSDerivation::identity(ring, m).unwrap();

        // Group axioms.
        let prod = d.compose(&dp).unwrap();
        if d.compose(&e).unwrap() != d || e.compose(&d).unwrap() != d {
            return false;
        }
        let inv = d.inverse().unwrap();
        if d.compose(&inv).unwrap() != e || inv.compose(&d).unwrap() != e {
            return false;
        }

        // Component convolution law.
        for n in 0..=m {
            let mut expect = DiffOp::zero(ring);
            for i in 0..=n {
                expect = expect
                    .add(
                        &d.component(i)
                            .unwrap()
                            .compose(dp.component(n - i).unwrap())
                            .unwrap(),
                    )
                    .unwrap();
            }
            if *prod.component(n).unwrap() != expect {
                return false;
            }
        }

        // Total symbol: group homomorphism and exponential type.
        let sd = d.total_symbol().unwrap();
        let sdp = dp.total_symbol().unwrap();
        if prod.total_symbol().unwrap() != sd.mul(&sdp).unwrap() {
            return false;
        }
        if !sd.is_exponential_type().unwrap() {
            return false;
        }

        // D_1 = 0 forces total symbol 1.
        let mut images = d.images().to_vec();
        for im in &mut images {
            im.set_coeff(1, Poly::zero(ring));
        }
        let flat = HSDerivation::from_images(ring, images).unwrap();
        let sym = flat.total_symbol().unwrap();
        if (1..=m).any(|i| !sym.slot(i).is_zero()) {
            return false;
        }

        // Scalar action: Sigma(a . D) = a Sigma(D), slot-wise a^i.
        let a = sample::poly(ring, rng, 1, 2);
        d.scale(&a).unwrap().total_symbol().unwrap() == sd.scale(&a).unwrap()
    })
}

/// theta intertwines the symbol Poisson bracket with the SDer bracket.
pub fn theta_poisson_compat(seed: u64, cases: usize, par: Parallelism) -> SuiteOutcome {
    run_cases("theta Poisson compatibility", cases, seed, par, |rng| {
        let ring = small_ring(rng);
        let (r, s) = loop {
            let r = rng.gen_range(0..=2u32);
            let s = rng.gen_range(0..=2u32);
            if r + s >= 1 {
                break (r, s);
            }
        };
        let p = sample::diffop(ring, rng, r);
        let q = sample::diffop(ring, rng, s);
        let br = poisson(&p.symbol(r).unwrap(), &q.symbol(s).unwrap()).unwrap();
        let lhs = theta(br.representative(), r + s - 1).unwrap();
        let rhs = sder_poisson(&theta(&p, r).unwrap(), &theta(&q, s).unwrap()).unwrap();
        lhs == rhs
    })
}

/// Shuffle algebra laws: commutative, associative, unital, R-bilinear.
pub fn shuffle_algebra(seed: u64, cases: usize, par: Parallelism) -> SuiteOutcome {
    run_cases("shuffle algebra laws", cases, seed, par, |rng| {
        let ring = small_ring(rng);
        let (du, dv, dw) = (
            rng.gen_range(0..=2),
            rng.gen_range(0..=2),
            rng.gen_range(0..=2),
        );
        let u = sample::multiderivation(ring, rng, du);
        let v = sample::multiderivation(ring, rng, dv);
        let w = sample::multiderivation(ring, rng, dw);
        let one = MultiDerivation::one(ring);
        if shuffle(&u, &v).unwrap() != shuffle(&v, &u).unwrap() {
            return false;
        }
        if shuffle(&shuffle(&u, &v).unwrap(), &w).unwrap()
            != shuffle(&u, &shuffle(&v, &w).unwrap()).unwrap()
        {
            return false;
        }
        if shuffle(&u, &one).unwrap() != u {
            return false;
        }
        let a = sample::poly(ring, rng, 1, 2);
        shuffle(&u.scale(&a).unwrap(), &v).unwrap() == shuffle(&u, &v).unwrap().scale(&a).unwrap()
    })
}

/// The four oracle pairs: composition vs apply-then-extract, principal
/// division vs Groebner, shuffle closed form vs subset enumeration, and
/// divided powers vs i!-scaling over Q.
pub fn oracle_equivalences(seed: u64, cases: usize, par: Parallelism) -> Vec<SuiteOutcome> {
    let compose = run_cases("oracle: compose vs extract", cases, seed, par, |rng| {
        let ring = small_ring(rng);
        let n = rng.gen_range(0..=2u32);
        let m = rng.gen_range(0..=2u32);
        let p = sample::diffop(ring, rng, n);
        let q = sample::diffop(ring, rng, m);
        let direct = p.compose(&q).unwrap();
        let extracted = coeff_extract(
            ring,
            |g| p.apply(&q.apply(&Poly::monomial(ring, g.clone(), ring.one()))),
            n + m,
        )
        .unwrap();
        direct == extracted
    });
    let membership = run_cases(
        "oracle: principal membership",
        cases,
        seed.wrapping_add(1),
        par,
        |rng| {
            let ring = small_ring(rng);
            let f = loop {
                let f = sample::poly(ring, rng, 2, 3);
                if !f.is_zero() {
                    break f;
                }
            };
            let probe = if rng.gen_bool(0.5) {
                f.mul(&sample::poly(ring, rng, 2, 2)).unwrap()
            } else {
                sample::poly(ring, rng, 3, 3)
            };
            let fast = probe.exact_divide(&f).unwrap().is_some();
            let ideal = Ideal::principal(f).unwrap();
            let slow = ideal.reduce(&probe).unwrap().is_zero();
            fast == slow && ideal.member(&probe).unwrap() == fast
        },
    );
    let shuffles = run_cases(
        "oracle: shuffle vs enumeration",
        cases,
        seed.wrapping_add(2),
        par,
        |rng| {
            let ring = small_ring(rng);
            let i = rng.gen_range(0..=2u32);
            let j = rng.gen_range(0..=(3 - i));
            let u = sample::multiderivation(ring, rng, i);
            let v = sample::multiderivation(ring, rng, j);
            let s = shuffle(&u, &v).unwrap();
            MultiIndex::all_of_degree(ring.nvars(), i + j)
                .into_iter()
                .all(|gamma| s.value(&gamma) == shuffle_enum(&u, &v, &gamma).unwrap())
        },
    );
    let powers = run_cases(
        "oracle: divided power vs factorial",
        cases,
        seed.wrapping_add(3),
        par,
        |rng| {
            let nvars = rng.gen_range(1..=2);
            let ring = Ring::rationals(nvars).unwrap();
            let d = rng.gen_range(1..=2u32);
            let i = rng.gen_range(0..=(6 / d).min(3));
            let u = sample::multiderivation(ring, rng, d);
            let mut pw = MultiDerivation::one(ring);
            for _ in 0..i {
                pw = shuffle(&pw, &u).unwrap();
            }
            let scaled = divided_power(&u, i)
                .unwrap()
                .scale(&Poly::constant(
                    ring,
                    ring.from_bigint(&factorial(i as u64)),
                ))
                .unwrap();
            scaled == pw
        },
    );
    vec![compose, membership, shuffles, powers]
}

/// The set-sum definition of the shuffle product, evaluated on the
/// coordinate tuple of a basis monomial through md_eval.
fn shuffle_enum(
    u: &MultiDerivation,
    v: &MultiDerivation,
    gamma: &MultiIndex,
) -> crate::error::Result<Poly> {
    let ring = u.ring();
    let ys: Vec<Poly> = gamma
        .coordinate_multiset()
        .into_iter()
        .map(|i| Poly::var(ring, i))
        .collect();
    let mut out = Poly::zero(ring);
    for mask in 0u32..(1 << ys.len()) {
        if mask.count_ones() != u.degree() {
            continue;
        }
        let (mut l, mut lp) = (Vec::new(), Vec::new());
        for (k, y) in ys.iter().enumerate() {
            if mask >> k & 1 == 1 {
                l.push(y.clone());
            } else {
                lp.push(y.clone());
            }
        }
        out = out.add(&u.md_eval(&l)?.mul(&v.md_eval(&lp)?)?)?;
    }
    Ok(out)
}

/// Every suite at a shared case count.
pub fn run_all(seed: u64, cases: usize, par: Parallelism) -> Vec<SuiteOutcome> {
    let mut out = vec![
        theta_multiplicativity(seed, cases, par),
        theta_injectivity(seed, cases, par),
        hs_curio_diagram(seed, cases, par),
        divided_power_axioms(seed, cases, par),
        hs_group_symbol(seed, cases, par),
        theta_poisson_compat(seed, cases, par),
        shuffle_algebra(seed, cases, par),
    ];
    out.extend(oracle_equivalences(seed, cases, par));
    out
}
