//! Values frozen from an independent mpmath evaluation (30 digits).

use hecke_moments::arith::RationalPhase;
use hecke_moments::characters::Character;
use hecke_moments::special::periodic_zeta;
use hecke_moments::twisted_zeta::{f_star, feq_check, TwistedZetaPoint};
use num_complex::Complex64;

fn legendre5(n: i64) -> f64 {
    match n.rem_euclid(5) {
        0 => 0.0,
        1 | 4 => 1.0,
        _ => -1.0,
    }
}

fn chi4(n: i64) -> f64 {
    match n.rem_euclid(4) {
        1 => 1.0,
        3 => -1.0,
        _ => 0.0,
    }
}

type ValueTable = fn(i64) -> f64;

fn real_characters() -> [(Character, ValueTable); 2] {
    [
        (Character::from_exponents(5, &[2]).unwrap(), legendre5),
        (Character::from_exponents(4, &[1]).unwrap(), chi4),
    ]
}

#[test]
fn quadratic_characters_match_their_tables() {
    for (chi, table) in real_characters() {
        for n in -30..30 {
            assert!((chi.evaluate(n) - Complex64::new(table(n), 0.0)).norm() < 1e-15, "{chi} at {n}");
        }
    }
}

#[test]
fn twisted_zeta_against_hurwitz_oracle() {
    // (a, c, s, value for the character mod 5, value for the character mod 4)
    let cases = [
        (1, 7, (2.0, 1.0), (0.468_397_707_206_910_3, 0.511_207_851_046_094_5), (0.600_558_688_711_748_3, 0.691_678_490_003_701_9)),
        (3, 8, (0.5, 3.0), (0.348_250_739_326_588_3, 0.837_143_115_229_093_5), (-0.140_381_979_325_437_14, 1.754_137_385_636_502_8)),
        (2, 3, (-0.5, 1.5), (-4.762_502_627_758_9, -4.524_576_944_854_323), (0.055_554_792_838_014_684, -0.376_581_018_965_012_3)),
    ];
    let [(chi5, _), (chi4, _)] = real_characters();
    for (a, c, (sr, si), v5, v4) in cases {
        let s = Complex64::new(sr, si);
        for (chi, (re, im)) in [(&chi5, v5), (&chi4, v4)] {
            let point = TwistedZetaPoint::new(s, chi.clone(), a, c).unwrap();
            let got = f_star(&point).unwrap();
            let want = Complex64::new(re, im);
            assert!((got - want).norm() < 1e-11 * want.norm().max(1.0), "{chi} a/c = {a}/{c} s = {s}: {got} vs {want}");
        }
    }
}

#[test]
fn periodic_zeta_against_polylog() {
    let cases = [
        ((2.0, 0.0), (1, 3), (-0.548_311_355_616_075_5, 0.676_627_737_606_435_8)),
        ((0.5, 2.0), (2, 5), (-1.068_204_568_807_287, 0.098_271_605_758_934_55)),
    ];
    for ((sr, si), (a, c), (re, im)) in cases {
        let got = periodic_zeta(Complex64::new(sr, si), &RationalPhase::new(a, c)).unwrap();
        assert!((got - Complex64::new(re, im)).norm() < 1e-11, "{got}");
    }
}

#[test]
fn functional_equation_at_oracle_points() {
    let [(chi5, _), (chi4, _)] = real_characters();
    for chi in [chi5, chi4] {
        for (a, c) in [(1, 7), (3, 8), (2, 3)] {
            for s in [Complex64::new(0.5, 3.0), Complex64::new(-0.5, 1.5), Complex64::new(1.7, -8.0)] {
                let r = feq_check(s, &chi, a, c).unwrap();
                assert!(r.relative_error < 1e-10, "{chi} {a}/{c} {s}: {}", r.relative_error);
            }
        }
    }
}
