use nfdiv::arith::parse_descriptor;
use nfdiv::numfield::{parse_field, parse_overrides};
use nfdiv::series::{prime_coefficient_check, u_series, EulerComparison, TruncatedDirichletSeries};
use nfdiv::Error;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn series(len: usize) -> impl Strategy<Value = TruncatedDirichletSeries> {
    prop::collection::vec(-9i64..=9, len).prop_map(|v| TruncatedDirichletSeries::from_integers(v))
}

fn unit_series(len: usize) -> impl Strategy<Value = TruncatedDirichletSeries> {
    (prop::sample::select(vec![-3i64, -1, 1, 2, 5]), prop::collection::vec(-9i64..=9, len - 1)).prop_map(
        |(lead, rest)| {
            let mut v = vec![lead];
            v.extend(rest);
            TruncatedDirichletSeries::from_integers(v)
        },
    )
}

fn triple() -> impl Strategy<Value = (TruncatedDirichletSeries, TruncatedDirichletSeries, TruncatedDirichletSeries)> {
    (1usize..40).prop_flat_map(|n| (series(n), series(n), series(n)))
}

fn add(a: &TruncatedDirichletSeries, b: &TruncatedDirichletSeries) -> TruncatedDirichletSeries {
    TruncatedDirichletSeries::new(a.coeffs().iter().zip(b.coeffs()).map(|(x, y)| x + y).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms((a, b, c) in triple()) {
        let ab = a.dirichlet_mul(&b).unwrap();
        prop_assert_eq!(&ab, &b.dirichlet_mul(&a).unwrap());
        prop_assert_eq!(ab.dirichlet_mul(&c).unwrap(), a.dirichlet_mul(&b.dirichlet_mul(&c).unwrap()).unwrap());
        let lhs = a.dirichlet_mul(&add(&b, &c)).unwrap();
        prop_assert_eq!(lhs, add(&ab, &a.dirichlet_mul(&c).unwrap()));
        let id = TruncatedDirichletSeries::delta(a.len());
        prop_assert_eq!(a.dirichlet_mul(&id).unwrap(), a);
    }

    #[test]
    fn inverse_and_powers(a in (1usize..40).prop_flat_map(unit_series), k in 0i64..4, j in 0i64..4) {
        let inv = a.dirichlet_inv().unwrap();
        prop_assert_eq!(a.dirichlet_mul(&inv).unwrap(), TruncatedDirichletSeries::delta(a.len()));
        prop_assert_eq!(a.dirichlet_pow(-1).unwrap(), inv);
        let lhs = a.dirichlet_pow(k).unwrap().dirichlet_mul(&a.dirichlet_pow(-j).unwrap()).unwrap();
        prop_assert_eq!(lhs, a.dirichlet_pow(k - j).unwrap());
        prop_assert_eq!(a.dirichlet_pow(0).unwrap(), TruncatedDirichletSeries::delta(a.len()));
    }

    #[test]
    fn u_series_of_a_power_is_delta(a in (1usize..30).prop_flat_map(series), m in 1u64..4) {
        // Z with Z_1 = 1: U = Z^m Z^-m = delta
        let mut coeffs = a.coeffs().to_vec();
        coeffs[0] = BigRational::one();
        let z = TruncatedDirichletSeries::new(coeffs);
        let l = z.dirichlet_pow(m as i64).unwrap();
        prop_assert_eq!(u_series(&l, &z, m).unwrap(), TruncatedDirichletSeries::delta(z.len()));
    }
}

#[test]
fn zero_leading_coefficient_has_no_inverse() {
    let a = TruncatedDirichletSeries::from_integers([0i64, 1, 2]);
    assert_eq!(a.dirichlet_inv().unwrap_err(), Error::ZeroLeadingCoefficient);
    let b = TruncatedDirichletSeries::from_integers([1i64, 1]);
    assert_eq!(a.dirichlet_mul(&b).unwrap_err(), Error::LengthMismatch(3, 2));
}

#[test]
fn inverse_of_zeta_is_mobius() {
    let mu = TruncatedDirichletSeries::zeta(30).dirichlet_inv().unwrap();
    let expected =
        [1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0, -1, 1, 1, 0, -1, 0, -1, 0, 1, 1, -1, 0, 0, 1, 0, 0, -1, -1];
    for (n, &e) in expected.iter().enumerate() {
        assert_eq!(mu.coeff(n + 1), &BigRational::from_integer(BigInt::from(e)));
    }
}

#[test]
fn cubic_u_series_vanishes_at_primes() {
    let k = parse_field("poly:-1,-2,1,1;disc=49;galois=true")
        .unwrap()
        .with_overrides(parse_overrides("7 3,1,1").unwrap())
        .unwrap();
    let desc = parse_descriptor("tau2:2", &[k]).unwrap();
    let cmp = EulerComparison::build(&desc, 2000).unwrap();
    assert_eq!(cmp.m, 7);
    let u = cmp.u().unwrap();
    assert!(u.coeff(1).is_one());
    for p in nfdiv::primes::primes_up_to(2000) {
        if p != 7 {
            assert!(u.coeff(p as usize).is_zero(), "u_{p}");
        }
    }
    let report = prime_coefficient_check(&desc, None, 2000).unwrap();
    assert!(report.is_consistent());
}

#[test]
fn theorem_two_two_exponent() {
    // (a_{K1} a_{K2})^2 over Q(i) and Q(sqrt 5): m = (2 d)^(l - 1) = 4
    let desc = parse_descriptor("a^2@quad:-4 * a^2@quad:5", &[]).unwrap();
    assert_eq!(desc.euler_exponent(), Some(4));
    let report = prime_coefficient_check(&desc, None, 3000).unwrap();
    assert!(report.is_consistent(), "{:?}", report.unexpected());
    assert!(report.unexpected().is_empty());
}
