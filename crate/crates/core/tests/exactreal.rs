use cdist::exactreal::rational::{int, pow2, rat, to_f64};
use cdist::exactreal::{
    add, div, dyadic_enum, exp, log, lt_semi, mul, neg, pi, reciprocal, sqrt, sub, Comparison,
    DEFAULT_FUEL,
};
use cdist::{CReal, Error, Rational};
use num_bigint::BigInt;
use num_traits::Signed;
use proptest::prelude::*;

/// Exact rational from a decimal literal, used for reference constants.
fn decimal(s: &str) -> Rational {
    let (int_part, frac) = s.split_once('.').unwrap_or((s, ""));
    let digits: BigInt = format!("{int_part}{frac}").parse().unwrap();
    Rational::new(digits, BigInt::from(10).pow(frac.len() as u32))
}

// 40 significant digits, from an independent arbitrary-precision library.
const SQRT2: &str = "1.414213562373095048801688724209698078570";
const E: &str = "2.718281828459045235360287471352662497757";
const PI: &str = "3.141592653589793238462643383279502884197";
const LN3: &str = "1.098612288668109691395245236922525704647";
const EXP_MINUS_7_3: &str = "0.09697196786440506280990665929837073148072";
const SQRT_THIRD: &str = "0.5773502691896257645091487805019574556476";

fn assert_encloses(x: &CReal, reference: &str, n: u32) {
    let iv = x.enclosure(n).unwrap();
    let r = decimal(reference);
    // The reference itself is only good to about 10^-40.
    let slack = pow2(-128);
    assert!(
        iv.lo() - &slack <= r && r <= iv.hi() + &slack,
        "{iv:?} misses {reference}"
    );
    assert!(iv.width() <= pow2(2 - n as i64));
}

#[test]
fn constants_to_one_hundred_bits() {
    let one = CReal::from_int(1);
    assert_encloses(&sqrt(&CReal::from_int(2)), SQRT2, 100);
    assert_encloses(&exp(&one), E, 100);
    assert_encloses(&pi(), PI, 100);
    assert_encloses(&log(&CReal::from_int(3)), LN3, 100);
    assert_encloses(&exp(&CReal::from_rational(rat(-7, 3))), EXP_MINUS_7_3, 100);
    assert_encloses(&sqrt(&CReal::from_rational(rat(1, 3))), SQRT_THIRD, 100);
}

#[test]
fn pi_enclosures_at_low_precision() {
    // Radius 2^(-n+1): at n = 1 the interval is [q - 1, q + 1], too wide for
    // [2.5, 3.7]; by n = 3 it fits.
    let coarse = pi().enclosure(1).unwrap();
    assert_eq!(coarse.width(), int(2));
    assert!(coarse.lo() < &decimal(PI) && &decimal(PI) < coarse.hi());
    let e = pi().enclosure(3).unwrap();
    assert!(rat(5, 2) <= *e.lo() && *e.hi() <= rat(37, 10), "{e:?}");
}

#[test]
fn composite_expressions() {
    // (sqrt 2)^2 - 2 = 0 and exp(log 3) = 3.
    let s = sqrt(&CReal::from_int(2));
    let z = sub(&mul(&s, &s), &CReal::from_int(2));
    assert!(z.approx(80).unwrap().abs() <= pow2(-78));
    let three = exp(&log(&CReal::from_int(3)));
    assert!((three.approx(60).unwrap() - int(3)).abs() <= pow2(-58));
    let q = div(&CReal::from_int(1), &pi());
    assert!((to_f64(&q.approx(50).unwrap()) - std::f64::consts::FRAC_1_PI).abs() < 1e-14);
}

#[test]
fn domain_errors() {
    let minus_one = CReal::from_int(-1);
    assert!(matches!(sqrt(&minus_one).approx(10), Err(Error::Domain(_))));
    assert!(matches!(
        log(&CReal::from_int(0)).approx(10),
        Err(Error::Domain(_))
    ));
    assert!(matches!(log(&minus_one).approx(10), Err(Error::Domain(_))));
}

#[test]
fn reciprocal_of_zero_diverges() {
    let zero = sub(&pi(), &pi());
    assert!(reciprocal(&zero).approx(4).unwrap_err().is_partial());
}

#[test]
fn comparison_is_semi_decidable() {
    let s = sqrt(&CReal::from_int(2));
    let q = CReal::from_rational(decimal("1.4142135623730950488"));
    assert_eq!(lt_semi(&q, &s, DEFAULT_FUEL).unwrap(), Comparison::Less);
    assert_eq!(lt_semi(&s, &q, DEFAULT_FUEL).unwrap(), Comparison::Greater);
    assert_eq!(lt_semi(&s, &s.clone(), 8).unwrap(), Comparison::Undecided);
    let far = add(&pi(), &CReal::from_rational(pow2(-200)));
    assert_eq!(lt_semi(&pi(), &far, 16).unwrap(), Comparison::Undecided);
    assert_eq!(lt_semi(&pi(), &far, 64).unwrap(), Comparison::Less);
}

#[test]
fn dyadic_enumeration_is_dense() {
    let d = dyadic_enum();
    let first: Vec<Rational> = d.iter().take(5).collect();
    assert_eq!(first, [int(0), int(-1), rat(-1, 2), rat(1, 2), int(1)]);
    // Every dyadic m/2^n with |m/2^n| <= n appears, and nothing repeats.
    let seen: Vec<Rational> = d.iter().take(5000).collect();
    let mut sorted = seen.clone();
    sorted.sort();
    sorted.dedup();
    assert_eq!(sorted.len(), seen.len());
    for m in -24..=24 {
        assert!(seen.contains(&rat(m, 8)), "missing {m}/8");
    }
    assert_eq!(
        to_f64(&d.metric(&rat(1, 2), &rat(-3, 4)).approx(10).unwrap()),
        1.25
    );
}

fn real_input() -> impl Strategy<Value = (i64, i64)> {
    (-4000i64..4000, 1i64..512)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn arithmetic_matches_floats((a, b) in real_input(), (c, d) in real_input()) {
        let (x, y) = (CReal::from_rational(rat(a, b)), CReal::from_rational(rat(c, d)));
        // Route through `from_fn` so the non-exact code paths are exercised.
        let (x, y) = (add(&x, &sqrt(&CReal::from_int(0))), add(&y, &sqrt(&CReal::from_int(0))));
        let (fx, fy) = (a as f64 / b as f64, c as f64 / d as f64);
        for (got, want) in [
            (add(&x, &y), fx + fy),
            (sub(&x, &y), fx - fy),
            (mul(&x, &y), fx * fy),
            (neg(&x), -fx),
        ] {
            let v = to_f64(&got.approx(60).unwrap());
            prop_assert!((v - want).abs() <= 1e-9 * (1.0 + want.abs()), "{v} vs {want}");
        }
        if c != 0 {
            let v = to_f64(&div(&x, &y).approx(60).unwrap());
            prop_assert!((v - fx / fy).abs() <= 1e-9 * (1.0 + (fx / fy).abs()));
        }
    }

    #[test]
    fn transcendentals_match_floats((a, b) in real_input()) {
        let q = a as f64 / b as f64;
        let x = CReal::from_rational(rat(a, b));
        if q.abs() < 30.0 {
            let v = to_f64(&exp(&x).approx(60).unwrap());
            prop_assert!((v - q.exp()).abs() <= 1e-12 * (1.0 + q.exp()));
        }
        let ax = CReal::from_rational(rat(a.abs(), b));
        let v = to_f64(&sqrt(&ax).approx(60).unwrap());
        prop_assert!((v - q.abs().sqrt()).abs() <= 1e-12 * (1.0 + q.abs().sqrt()));
        if a != 0 {
            let v = to_f64(&log(&ax).approx(60).unwrap());
            prop_assert!((v - q.abs().ln()).abs() <= 1e-12);
        }
    }

    #[test]
    fn constructors_stay_fast_cauchy((a, b) in real_input(), (c, d) in real_input()) {
        let x = sqrt(&CReal::from_rational(rat(a.abs() + 1, b)));
        let y = exp(&CReal::from_rational(rat(c % 200, d)));
        for z in [add(&x, &y), sub(&x, &y), mul(&x, &y), div(&x, &y), log(&x), sqrt(&y)] {
            prop_assert!(z.verify_fast_cauchy(30).is_ok());
        }
    }

    #[test]
    fn enclosures_nest((a, b) in real_input()) {
        let x = exp(&sqrt(&CReal::from_rational(rat(a.abs(), b))));
        let mut prev = x.enclosure(0).unwrap();
        for n in 1..=40 {
            let iv = x.enclosure(n).unwrap();
            prop_assert!(iv.intersects(&prev));
            prev = iv;
        }
    }
}
