use nfdiv::ffpoly::{factor_degree_profile, PrimePoly};
use nfdiv::numfield::{
    compositum, parse_field, parse_overrides, quadratic_ideal_count_oracle, NumberField, SplittingType,
};
use nfdiv::primes::{gcd_u64, primes_up_to};
use nfdiv::zpoly::cyclotomic;
use proptest::prelude::*;

fn cubic() -> NumberField {
    parse_field("poly:-1,-2,1,1;disc=49;galois=true")
        .unwrap()
        .with_overrides(parse_overrides("7 3,1,1").unwrap())
        .unwrap()
}

#[test]
fn quadratic_counts_match_divisor_sum() {
    for d in [-4, -3, 5, 8, -7, 12, -20, 13] {
        let k = NumberField::quadratic(d).unwrap();
        for n in 1..=5000u64 {
            assert_eq!(k.ideal_count(n).unwrap() as i64, quadratic_ideal_count_oracle(d, n), "D={d} n={n}");
        }
    }
}

#[test]
fn cyclotomic_dedekind_agrees_with_order_rule() {
    for t in [5u64, 7, 8, 12, 9, 15] {
        let k = NumberField::cyclotomic(t).unwrap();
        let phi = cyclotomic(t);
        for p in primes_up_to(600) {
            if t % p == 0 {
                continue;
            }
            let dedekind = SplittingType::unramified(&factor_degree_profile(&PrimePoly::from_signed(p, &phi)).unwrap());
            let rule = k.family_splitting(p).unwrap().expect("cyclotomic rule");
            assert_eq!(dedekind, rule, "t={t} p={p}");
        }
    }
}

#[test]
fn cyclotomic_ramified_primes() {
    // Q(zeta_9) at 3: totally ramified; Q(zeta_12) at 2: e = 2, f = 2 for 2 mod 3
    let k = NumberField::cyclotomic(9).unwrap();
    assert_eq!(k.splitting_type(3).unwrap(), SplittingType::uniform(6, 1, 1));
    let k = NumberField::cyclotomic(12).unwrap();
    assert_eq!(k.splitting_type(2).unwrap(), SplittingType::uniform(2, 2, 1));
}

#[test]
fn splitting_types_sum_to_degree() {
    let fields = [
        NumberField::quadratic(-4).unwrap(),
        NumberField::quadratic(5).unwrap(),
        NumberField::cyclotomic(7).unwrap(),
        NumberField::cyclotomic(12).unwrap(),
        cubic(),
    ];
    for k in &fields {
        for p in primes_up_to(1000) {
            let st = k.splitting_type(p).unwrap();
            assert_eq!(st.degree(), k.degree() as u64, "{} at {p}", k.name());
            // Galois: uniform e, f
            assert!(st.efg().is_some(), "{} at {p}: {st}", k.name());
        }
    }
}

#[test]
fn compositum_multiplies_prime_counts() {
    let pairs = [
        (NumberField::quadratic(-4).unwrap(), NumberField::quadratic(5).unwrap()),
        (NumberField::quadratic(-3).unwrap(), NumberField::quadratic(5).unwrap()),
        (NumberField::quadratic(-4).unwrap(), NumberField::cyclotomic(5).unwrap()),
        (NumberField::quadratic(-4).unwrap(), cubic()),
    ];
    for (k1, k2) in &pairs {
        let kl = compositum(k1, k2).unwrap();
        assert_eq!(kl.degree(), k1.degree() * k2.degree());
        for p in primes_up_to(3000) {
            if kl.is_bad_prime(p) {
                continue;
            }
            let lhs = kl.ideal_count_prime_power(p, 1).unwrap();
            let rhs = k1.ideal_count_prime_power(p, 1).unwrap() * k2.ideal_count_prime_power(p, 1).unwrap();
            assert_eq!(lhs, rhs, "{} at {p}", kl.name());
        }
    }
}

#[test]
fn compositum_rejects_shared_ramification() {
    let err = compositum(&NumberField::quadratic(-4).unwrap(), &NumberField::quadratic(8).unwrap()).unwrap_err();
    assert!(matches!(err, nfdiv::Error::NonCoprimeDiscriminants { .. }));
    let generic = parse_field("poly:1,0,0,1;galois=false").unwrap();
    assert!(matches!(compositum(&NumberField::quadratic(-4).unwrap(), &generic), Err(nfdiv::Error::NotGalois(_))));
}

#[test]
fn power_identity_at_unramified_primes() {
    for k in [NumberField::quadratic(-4).unwrap(), NumberField::cyclotomic(5).unwrap(), cubic()] {
        let d = k.degree() as u128;
        for p in primes_up_to(5000) {
            if k.is_ramified_prime(p) {
                continue;
            }
            let a = k.ideal_count_prime_power(p, 1).unwrap();
            for j in 2..=4u32 {
                assert_eq!(a.pow(j), d.pow(j - 1) * a, "{} p={p} k={j}", k.name());
            }
        }
    }
}

#[test]
fn unknown_splitting_is_reported() {
    let k = parse_field("poly:-1,-2,1,1;disc=49;galois=true").unwrap();
    assert!(matches!(k.ideal_count(7), Err(nfdiv::Error::UnknownSplitting { p: 7, .. })));
    assert_eq!(k.ideal_count(13).unwrap(), 3);
}

#[test]
fn parse_errors_carry_columns() {
    match parse_field("quad:abc") {
        Err(nfdiv::Error::Parse { column, .. }) => assert_eq!(column, 6),
        other => panic!("expected parse error, got {other:?}"),
    }
    assert!(parse_field("cyclo:6").is_err());
    assert!(parse_field("quad:-12").is_err());
    assert!(parse_overrides("7 3,1").is_err());
}

fn field_strategy() -> impl Strategy<Value = NumberField> {
    prop::sample::select(vec!["quad:-4", "quad:-3", "quad:5", "quad:8", "cyclo:5", "cyclo:7", "cyclo:12"])
        .prop_map(|s| parse_field(s).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn ideal_count_is_multiplicative(k in field_strategy(), m in 1u64..3000, n in 1u64..3000) {
        prop_assume!(gcd_u64(m, n) == 1);
        let lhs = k.ideal_count(m * n).unwrap();
        prop_assert_eq!(lhs, k.ideal_count(m).unwrap() * k.ideal_count(n).unwrap());
    }

    #[test]
    fn split_primes_have_d_ideals(k in field_strategy(), idx in 0usize..300) {
        let p = primes_up_to(2000)[idx];
        let st = k.splitting_type(p).unwrap();
        let a = k.ideal_count_prime_power(p, 1).unwrap();
        if st.splits_completely() {
            prop_assert_eq!(a, k.degree() as u128);
        } else if !st.is_ramified() {
            prop_assert_eq!(a, 0);
        }
    }
}
