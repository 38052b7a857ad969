use glasner_core::bump::build_bump;
use glasner_core::pair_counts::{lemma4_sum, profile};
use glasner_core::polynomials::{
    instantiate, mult_complexity_bound, IntegerValuedPolynomial, MatrixFamily, PrimeAssignment, PrimeMode,
    RationalPolynomial,
};
use glasner_core::primes::first_n_primes;
use glasner_core::search::{generate_adversarial, maps_into_half_grid, GeneratorKind, GeneratorParams};
use glasner_core::torus::{torus_distance, PointSet, TorusPoint};
use glasner_core::{BigInt, BigRational, Metric};
use num_integer::Integer;
use proptest::prelude::*;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn point(coords: &[f64]) -> TorusPoint<f64> {
    TorusPoint::new(coords.to_vec()).unwrap()
}

fn coord() -> impl Strategy<Value = f64> {
    -3.0f64..3.0
}

fn ratio() -> impl Strategy<Value = (i64, i64)> {
    (-200i64..200, 1i64..60)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn distance_is_a_metric(
        x in prop::collection::vec(coord(), 3),
        y in prop::collection::vec(coord(), 3),
        z in prop::collection::vec(coord(), 3),
    ) {
        let (x, y, z) = (point(&x), point(&y), point(&z));
        for metric in [Metric::Sup, Metric::Euclidean] {
            let dxy = torus_distance(&x, &y, metric).unwrap();
            let dyx = torus_distance(&y, &x, metric).unwrap();
            let dxz = torus_distance(&x, &z, metric).unwrap();
            let dzy = torus_distance(&z, &y, metric).unwrap();
            prop_assert!((dxy - dyx).abs() < 1e-12);
            prop_assert!(dxy <= dxz + dzy + 1e-12);
            prop_assert!(torus_distance(&x, &x, metric).unwrap() == 0.0);
            let cap = match metric {
                Metric::Sup => 0.5,
                Metric::Euclidean => 0.5 * 3f64.sqrt(),
            };
            prop_assert!(dxy <= cap + 1e-12);
        }
    }

    #[test]
    fn exact_points_ignore_integer_shifts(
        a in prop::collection::vec(ratio(), 2),
        b in prop::collection::vec(ratio(), 2),
        shift in prop::collection::vec(-5i64..5, 2),
    ) {
        let x = TorusPoint::new(a.iter().map(|&(n, d)| q(n, d)).collect()).unwrap();
        let xs = TorusPoint::new(a.iter().zip(&shift).map(|(&(n, d), &s)| q(n + s * d, d)).collect()).unwrap();
        prop_assert_eq!(&x, &xs);
        let y = TorusPoint::new(b.iter().map(|&(n, d)| q(n, d)).collect()).unwrap();
        for metric in [Metric::Sup, Metric::Euclidean] {
            prop_assert_eq!(torus_distance(&x, &y, metric).unwrap(), torus_distance(&xs, &y, metric).unwrap());
        }
    }

    #[test]
    fn integer_valued_polynomials_are_periodic(
        t in 0u64..100_000,
        b in 2u64..500,
        which in 0usize..3,
    ) {
        let text = ["1/2x^2 + 1/2x", "1/6x^3 - 1/6x", "x^2 + 3x + 1"][which];
        let f = IntegerValuedPolynomial::parse(text).unwrap();
        let period = f.period_factor() * BigInt::from(b);
        let direct = f.eval_at_integer(&BigInt::from(t)).mod_floor(&BigInt::from(b));
        let shifted = f.eval_at_integer(&(BigInt::from(t) + period)).mod_floor(&BigInt::from(b));
        prop_assert_eq!(&direct, &shifted);
        prop_assert_eq!(BigInt::from(f.eval_mod(t, b)), direct);
    }

    #[test]
    fn pair_profile_is_translation_invariant(
        seed in 0u64..1000,
        shift in prop::collection::vec(ratio(), 2),
    ) {
        let params = GeneratorParams { d: 30, ..Default::default() };
        let set = generate_adversarial(GeneratorKind::RandomBoundedDenominator, 40, 2, &params, seed).unwrap();
        let v: Vec<BigRational> = shift.iter().map(|&(n, d)| q(n, d)).collect();
        let moved = PointSet::new(2, set.points().iter().map(|p| p.translate(&v).unwrap()).collect()).unwrap();
        prop_assert_eq!(profile(&set).unwrap(), profile(&moved).unwrap());
    }

    #[test]
    fn lemma4_sum_is_monotone(seed in 0u64..1000, t in 1.0f64..50.0, dt in 0.0f64..50.0) {
        let params = GeneratorParams { d: 25, ..Default::default() };
        let set = generate_adversarial(GeneratorKind::RandomBoundedDenominator, 30, 1, &params, seed).unwrap();
        let p = profile(&set).unwrap();
        let a = lemma4_sum(&p, 1.0, t, 0.4, 2).unwrap();
        prop_assert!(a >= 0.0);
        prop_assert!(lemma4_sum(&p, 1.0, t + dt, 0.4, 2).unwrap() >= a);
        prop_assert!(lemma4_sum(&p, 1.0, t, 0.4, 3).unwrap() >= a);
        prop_assert!(lemma4_sum(&p, 1.0, t, 0.6, 2).unwrap() <= a);
    }

    #[test]
    fn complexity_bound_scales_with_frequency(m1 in -20i64..20, m2 in -20i64..20, c in 1i64..10) {
        prop_assume!(m1 != 0 || m2 != 0);
        let fam = MatrixFamily::new(
            2,
            2,
            PrimeMode::IndependentPrimes,
            [&[0, 1][..], &[0, 0, 1], &[0, 0, 0, 1], &[0, 0, 0, 0, 1]]
                .iter()
                .map(|c| RationalPolynomial::from_integers(c))
                .collect(),
        )
        .unwrap();
        let a = mult_complexity_bound(&fam, &[m1, m2]).unwrap();
        let b = mult_complexity_bound(&fam, &[c * m1, c * m2]).unwrap();
        // Q is homogeneous of degree m in the frequency bound
        prop_assert_eq!(b.q, a.q * BigInt::from(c * c));
    }

    #[test]
    fn half_grid_is_invariant(m in 1usize..4, seed in 0u64..500) {
        let set = generate_adversarial(GeneratorKind::HalfGrid, 1 << m, m, &GeneratorParams::default(), 0).unwrap();
        let fam = MatrixFamily::new(
            2,
            m,
            PrimeMode::IndependentPrimes,
            (0..2 * m)
                .map(|i| RationalPolynomial::from_integers(&[i as i64, 1, (i % 3) as i64]))
                .collect(),
        )
        .unwrap();
        let primes = first_n_primes(200).unwrap();
        let grid = (0..2 * m)
            .map(|i| primes.as_slice()[((seed as usize) * 31 + i * 17) % 200])
            .collect();
        let mat = instantiate(&fam, &PrimeAssignment::Grid(grid)).unwrap();
        prop_assert!(maps_into_half_grid(&mat, &set).unwrap());
    }

    #[test]
    fn bump_is_real_and_even(eps in 0.02f64..0.3, m in 1i64..2000) {
        let g = build_bump(eps, 2000).unwrap();
        prop_assert_eq!(g.fourier(m).unwrap(), g.fourier(-m).unwrap());
        prop_assert!(g.fourier(m).unwrap() >= 0.0);
        prop_assert!(g.fourier(m).unwrap() <= 1.0);
    }
}

#[test]
fn exact_and_float_distances_agree() {
    let x = TorusPoint::new(vec![q(1, 3), q(5, 7)]).unwrap();
    let y = TorusPoint::new(vec![q(9, 10), q(1, 8)]).unwrap();
    let xf = point(&[1.0 / 3.0, 5.0 / 7.0]);
    let yf = point(&[0.9, 0.125]);
    for metric in [Metric::Sup, Metric::Euclidean] {
        let e = torus_distance(&x, &y, metric).unwrap();
        let f = torus_distance(&xf, &yf, metric).unwrap();
        assert!((e - f).abs() < 1e-12);
    }
}
