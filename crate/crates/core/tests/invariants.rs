use hecke_moments::arith::{gcd, lcm, mod_inverse, RationalPhase};
use hecke_moments::characters::enumerate_characters;
use hecke_moments::exp_sums::{kloosterman, weil_ratio};
use hecke_moments::moment::cutoff_weight;
use hecke_moments::special::{bessel_j1, cutoff_v_closed, hurwitz_zeta, hurwitz_zeta_shifted};
use num_complex::Complex64;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn inverse_is_an_inverse(a in -10_000i64..10_000, c in 2u64..5_000) {
        match mod_inverse(a, c) {
            Ok(inv) => prop_assert_eq!((a.rem_euclid(c as i64) as u64 * inv) % c, 1),
            Err(_) => prop_assert!(gcd(a.unsigned_abs(), c) > 1),
        }
    }

    #[test]
    fn gcd_lcm_product(a in 1u64..100_000, b in 1u64..100_000) {
        prop_assert_eq!(gcd(a, b) * lcm(a, b), a * b);
    }

    #[test]
    fn phases_add_mod_one(a in -500i64..500, b in -500i64..500, d in 1u64..60) {
        let x = RationalPhase::new(a, d);
        let y = RationalPhase::new(b, d);
        let sum = x.add_mod_one(&y);
        prop_assert!((sum.e() - x.e() * y.e()).norm() < 1e-13);
        prop_assert!((0.0..1.0).contains(&sum.frac()));
    }

    #[test]
    fn characters_are_multiplicative(q in 1u64..40, a in -200i64..200, b in -200i64..200, pick in 0usize..1000) {
        let chars = enumerate_characters(q);
        let chi = &chars[pick % chars.len()];
        prop_assert!((chi.evaluate(a * b) - chi.evaluate(a) * chi.evaluate(b)).norm() < 1e-12);
        prop_assert!((chi.evaluate(a + q as i64) - chi.evaluate(a)).norm() < 1e-15);
        let conj = chi.conj();
        let expected = if gcd(a.unsigned_abs(), q) == 1 { 1.0 } else { 0.0 };
        prop_assert!((chi.evaluate(a) * conj.evaluate(a) - Complex64::new(expected, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn kloosterman_symmetries(m in -50i64..50, n in -50i64..50, c in 1u64..300) {
        let k = kloosterman(m, n, c).value;
        prop_assert!((k - kloosterman(n, m, c).value).abs() < 1e-9);
        prop_assert!(weil_ratio(m, n, c) <= 1.0 + 1e-9);
        if mod_inverse(m, c).is_ok() {
            // S(m, n; c) = S(1, m n; c) for m a unit
            let mn = (m * n).rem_euclid(c as i64);
            prop_assert!((k - kloosterman(1, mn, c).value).abs() < 1e-9);
        }
    }

    #[test]
    fn hurwitz_recurrence(re in -3.0f64..4.0, im in -30.0f64..30.0, x in 0.05f64..3.0) {
        let s = Complex64::new(re, im);
        prop_assume!((s - 1.0).norm() > 0.05);
        let lhs = hurwitz_zeta_shifted(s, x).unwrap() - hurwitz_zeta_shifted(s, x + 1.0).unwrap();
        let rhs = (-s * x.ln()).exp();
        prop_assert!((lhs - rhs).norm() < 1e-9 * rhs.norm().max(1.0), "{} vs {}", lhs, rhs);
        // the all-integers sum only sees the fractional part
        let periodic = hurwitz_zeta(s, x + 2.0).unwrap() - hurwitz_zeta(s, x).unwrap();
        prop_assert!(periodic.norm() < 1e-9 * rhs.norm().max(1.0));
    }

    #[test]
    fn bessel_is_odd_and_bounded(x in 0.0f64..500.0) {
        prop_assert_eq!(bessel_j1(-x), -bessel_j1(x));
        prop_assert!(bessel_j1(x).abs() <= 0.582);
    }

    #[test]
    fn cutoff_reflection(u in -12.0f64..12.0) {
        let x = u.exp();
        prop_assert!((cutoff_weight(x) + cutoff_weight(1.0 / x) - 1.0).abs() < 1e-14);
        prop_assert!((cutoff_v_closed(x).unwrap() - cutoff_weight(x)).abs() < 1e-15);
    }
}
