use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use tube::exact::{Rational, Surd};

fn big(r: &Rational) -> BigRational {
    BigRational::new(r.numer(), r.denom())
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

proptest! {
    #[test]
    fn ring_ops_match_bigrational(a in any::<i64>(), b in 1..i64::MAX, c in any::<i64>(), d in 1..i64::MAX) {
        let (x, y) = (q(a, b), q(c, d));
        let (bx, by) = (big(&x), big(&y));
        prop_assert_eq!(big(&(&x + &y)), &bx + &by);
        prop_assert_eq!(big(&(&x - &y)), &bx - &by);
        prop_assert_eq!(big(&(&x * &y)), &bx * &by);
        let s = &x + &y;
        // canonical form: lowest terms, positive denominator
        prop_assert_eq!(s.numer(), big(&s).numer().clone());
        prop_assert!(s.denom() > BigInt::from(0));
    }

    #[test]
    fn small_denominators(a in -1000i64..1000, b in 1i64..50, c in -1000i64..1000, d in 1i64..50) {
        let (x, y) = (q(a, b), q(c, d));
        prop_assert_eq!(big(&(&x - &y)), big(&x) - big(&y));
        prop_assert_eq!((&x - &x).is_zero(), true);
        prop_assert_eq!((&x * &Rational::zero()).denom(), BigInt::from(1));
    }

    #[test]
    fn surd_sign_matches_float(a in -50i64..50, b in -50i64..50, c in -50i64..50) {
        let s = &(&Surd::from_int(a) + &Surd::root_term(q(b, 1), 2).unwrap()) + &Surd::root_term(q(c, 3), 3).unwrap();
        let f = a as f64 + b as f64 * 2f64.sqrt() + c as f64 / 3.0 * 3f64.sqrt();
        if f.abs() > 1e-9 {
            prop_assert_eq!(s.signum(), if f > 0.0 { 1 } else { -1 });
        }
    }
}

#[test]
fn surd_exact_zero() {
    // (1 + √2)² − 3 − 2√2 = 0
    let r2 = Surd::root_term(Rational::one(), 2).unwrap();
    let a = &Surd::one() + &r2;
    let z = &(&(&a * &a) - &Surd::from_int(3)) - &r2.scale(&Rational::from_int(2));
    assert_eq!(z.signum(), 0);
}
