use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use shearcert::dyadic::{in_lattice, lattice_collision, Dyadic, Exact, OddRational};

fn oracle(x: &Exact) -> BigRational {
    BigRational::new(x.numerator().clone(), x.denominator())
}

fn small() -> impl Strategy<Value = Exact> {
    (
        -200i64..=200,
        prop_oneof![1i64..=64, Just(96), Just(3 * 128), Just(45)],
    )
        .prop_map(|(p, q)| Exact::ratio(p, q).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn ring_laws_match_big_rationals(a in small(), b in small(), c in small()) {
        let (ra, rb, rc) = (oracle(&a), oracle(&b), oracle(&c));
        prop_assert_eq!(oracle(&(&a + &b)), &ra + &rb);
        prop_assert_eq!(oracle(&(&a - &b)), &ra - &rb);
        prop_assert_eq!(oracle(&(&a * &b)), &ra * &rb);
        prop_assert_eq!(oracle(&-&a), -ra.clone());
        if !b.is_zero() {
            prop_assert_eq!(oracle(&a.checked_div(&b).unwrap()), &ra / &rb);
        }
        prop_assert_eq!(oracle(&(&(&a + &b) + &c)), &(&ra + &rb) + &rc);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(a.cmp(&b), ra.cmp(&rb));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2_000))]

    #[test]
    fn canonical_form(p in -10_000i64..10_000, q in 1i64..10_000) {
        let x = Exact::ratio(p, q).unwrap();
        if !x.is_zero() {
            let odd_num = x.numerator() % BigInt::from(2) != BigInt::from(0);
            prop_assert!(x.two_exponent() == 0 || odd_num);
        }
        let again: Exact = x.to_string().parse().unwrap();
        prop_assert_eq!(&again, &x);
        prop_assert_eq!(Exact::from_fraction(x.numerator().clone(), x.denominator()).unwrap(), x.clone());
        prop_assert_eq!(oracle(&x), BigRational::new(p.into(), q.into()));
        prop_assert!((x.to_f64() - p as f64 / q as f64).abs() <= 1e-15 * (1.0 + (p as f64 / q as f64).abs()));
    }

    #[test]
    fn lattice_scaling(x in small(), j in 1u32..12) {
        prop_assert_eq!(in_lattice(&x, j), in_lattice(&x.mul_pow2(1), j - 1));
    }

    #[test]
    fn lattice_against_oracle(x in small(), j in 0u32..10) {
        // x in 2^-(j+1) Z iff 2^(j+1) x is an integer
        let scaled = oracle(&x) * BigRational::from_integer(BigInt::from(1u64 << (j + 1)));
        prop_assert_eq!(in_lattice(&x, j), scaled.is_integer());
    }

    #[test]
    fn collisions_are_lattice_differences(t in prop::collection::vec(small(), 0..6), j in 0u32..5) {
        match lattice_collision(&t, j) {
            Some((a, b)) => {
                prop_assert!(a < b);
                prop_assert!(in_lattice(&(&t[a] - &t[b]), j));
            }
            None => {
                for a in 0..t.len() {
                    for b in a + 1..t.len() {
                        prop_assert!(!in_lattice(&(&t[a] - &t[b]), j));
                    }
                }
            }
        }
    }

    #[test]
    fn dyadic_closure(a in -1000i64..1000, e in 0u32..20, b in -1000i64..1000, f in 0u32..20) {
        let (x, y) = (Dyadic::new(a, e), Dyadic::new(b, f));
        for z in [&x + &y, &x - &y, &x * &y] {
            prop_assert!(z.as_exact().is_dyadic());
        }
        prop_assert_eq!(x.to_f64(), a as f64 / (1u64 << e) as f64);
    }

    #[test]
    fn odd_times_dyadic(a in 1i64..50, b in 0i64..25, n in -100i64..100, e in 0u32..10) {
        let c = OddRational::new(a, 2 * b + 1).unwrap();
        let d = Dyadic::new(n, e);
        let prod = c.as_exact() * d.as_exact();
        let sum = c.as_exact() + d.as_exact();
        // the odd part of either result divides the odd denominator of c
        for z in [prod, sum] {
            prop_assert!((BigInt::from(2 * b + 1) % z.odd_part()) == BigInt::from(0));
        }
    }
}

#[test]
fn newtype_conversions() {
    assert!(Dyadic::try_from(Exact::ratio(5, 12).unwrap()).is_err());
    assert!(OddRational::try_from(Exact::ratio(5, 12).unwrap()).is_err());
    let c: OddRational = "2/15".parse().unwrap();
    assert_eq!(c.denominator(), &BigInt::from(15));
    assert_eq!(
        serde_json::to_string(&Exact::ratio(-2, 6).unwrap()).unwrap(),
        "\"-1/3\""
    );
    assert!("1/0".parse::<Exact>().is_err());
    assert!("x".parse::<Exact>().is_err());
}
