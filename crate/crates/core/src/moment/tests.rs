use num_complex::Complex64;
use num_rational::Ratio;

use super::*;
use crate::arith::{divisor_count, gcd, mod_inverse};
use crate::characters::Character;

fn chi3() -> Character {
    Character::from_exponents(3, &[1]).unwrap()
}

fn int(m: u64) -> Ratio<u64> {
    Ratio::from_integer(m)
}

#[test]
fn delta_values() {
    assert_eq!(delta_nu(5, 1), Ratio::from_integer(0));
    assert_eq!(delta_nu(3, 2), Ratio::new(3, 8));
    assert_eq!(delta_nu(2, 5), Ratio::new(1, 2));
    assert_eq!(delta_nu(2, 3), Ratio::new(1, 2));
}

#[test]
fn truncation_meets_target() {
    for (y, ra) in [(10.0, 0.0), (1e3, 0.2), (1e4, -0.2)] {
        let n = truncation_length(y, ra, 1e-9);
        assert!(n as f64 >= y);
        assert!(J1_MAX * cutoff_tail_integral(n as f64, y, ra) < 1e-9);
        assert!(J1_MAX * cutoff_tail_integral(0.9 * n as f64, y, ra) >= 1e-9);
    }
}

#[test]
fn tail_integral_matches_quadrature() {
    let (x, y, ra): (f64, f64, f64) = (50.0, 20.0, 0.1);
    let steps = 400_000;
    let (u0, u1) = ((x / y).ln(), 40.0);
    let h = (u1 - u0) / steps as f64;
    let f = |u: f64| {
        let t = y * u.exp();
        t.powf(-0.5 - ra) * cutoff_weight(t / y) * t
    };
    let simpson: f64 = (0..=steps)
        .map(|i| {
            let w = if i == 0 || i == steps { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
            w * f(u0 + h * i as f64)
        })
        .sum::<f64>()
        * h
        / 3.0;
    let closed = cutoff_tail_integral(x, y, ra);
    assert!((simpson - closed).abs() < 1e-9 * closed, "{simpson} {closed}");
}

#[test]
fn direct_sum_matches_reference() {
    // Independent double-precision sums over n <= 4e6 with math.fsum.
    let p = MomentParams::new(1, Complex64::new(0.0, 0.0), chi3(), 7).with_y(100.0).with_tolerance(1e-10);
    let t = t_sum_direct(1, 5, int(1), &p).unwrap();
    assert!((t - Complex64::new(0.3501415662209895, 0.5092395256439367)).norm() < 1e-9, "{t}");

    let p = MomentParams::new(3, Complex64::new(0.0, 0.2), chi3(), 7).with_y(50.0).with_tolerance(1e-10);
    let t = t_sum_direct(2, 7, int(3), &p).unwrap();
    assert!((t - Complex64::new(0.062158308773581146, 0.04873600987457575)).norm() < 1e-9, "{t}");
}

#[test]
fn direct_sum_rejects_non_units() {
    let p = MomentParams::new(1, Complex64::new(0.0, 0.0), chi3(), 7).with_y(10.0);
    assert!(t_sum_direct(2, 4, int(1), &p).is_err());
}

#[test]
fn large_modulus_is_small() {
    let p = MomentParams::new(1, Complex64::new(0.0, 0.0), chi3(), 7).with_y(20.0).with_tolerance(1e-10);
    for c in [10_000u64, 100_000] {
        let t = t_sum_direct(1, c, int(1), &p).unwrap();
        assert!(t.norm() <= small_argument_bound(c, int(1), &p));
    }
}

#[test]
fn fractional_index_reproduces_substitution() {
    // T(a, c/p; Y/p) with index m/p is sum chi(n) e(n a p / c) n^{-1/2-alpha} J_1(4 pi sqrt(m n p) / c) V(p n / Y).
    let (m, p, c, y) = (2u64, 3u64, 15u64, 60.0);
    let params = MomentParams::new(m, Complex64::new(0.05, 0.3), chi3(), 7).with_y(y / p as f64);
    let n_max = 20_000;
    let got = t_sum_truncated(1, c / p, Ratio::new(m, p), &params, n_max);
    let mut want = Complex64::new(0.0, 0.0);
    for n in 1..=n_max {
        let nf = n as f64;
        let phase = Complex64::from_polar(1.0, std::f64::consts::TAU * (n * p % c) as f64 / c as f64);
        let bessel = crate::special::bessel_j1(4.0 * std::f64::consts::PI * (nf * (m * p) as f64).sqrt() / c as f64);
        want += chi3().evaluate(n as i64) * phase * (-(0.5 + params.alpha) * nf.ln()).exp() * bessel
            * cutoff_weight(p as f64 * nf / y);
    }
    assert!((got - want).norm() < 1e-10, "{got} {want}");
}

#[test]
fn contour_matches_direct() {
    let chi = Character::from_exponents(5, &[1]).unwrap();
    let alpha = Complex64::new(0.0, 0.5);
    let p = MomentParams::new(2, alpha, chi, 7).with_y(200.0).with_tolerance(1e-9);
    for (a, c) in [(1i64, 12u64), (5, 12), (2, 9)] {
        let direct = t_sum_direct(a, c, int(2), &p).unwrap();
        let contour = t_sum_contour(a, c, int(2), &p).unwrap();
        assert!((direct - contour).norm() < 1e-6 * direct.norm().max(1.0), "c={c} {direct} {contour}");
    }
}

#[test]
fn contour_with_trivial_character() {
    let p = MomentParams::new(1, Complex64::new(0.0, 0.0), Character::trivial(1), 7).with_y(100.0).with_tolerance(1e-9);
    let direct = t_sum_direct(1, 7, int(1), &p).unwrap();
    let contour = t_sum_contour(1, 7, int(1), &p).unwrap();
    assert!((direct - contour).norm() < 1e-6 * direct.norm().max(1.0), "{direct} {contour}");
}

#[test]
fn contour_conjugation() {
    let chi = Character::from_exponents(5, &[1]).unwrap();
    let (c, y) = (8u64, 50.0);
    let config = ContourConfig::for_sum(c, 1.0, y);
    let up = ContourEvaluator::new(&chi, c, Complex64::new(0.0, 0.3), config).unwrap();
    let down = ContourEvaluator::new(&chi.conj(), c, Complex64::new(0.0, -0.3), config).unwrap();
    let t = up.t_sum(3, int(1), y).unwrap();
    let s = down.t_sum(-3, int(1), y).unwrap();
    assert!((t - s.conj()).norm() < 1e-12, "{t} {s}");
}

#[test]
fn contour_rejects_pole() {
    let p = MomentParams::new(1, Complex64::new(0.0, 0.0), chi3(), 7).with_y(10.0);
    assert!(matches!(t_sum_contour(1, 3, int(1), &p), Err(crate::Error::PoleOnPath(3))));
}

#[test]
fn block_matches_sum_over_residues() {
    let chi = Character::from_exponents(5, &[2]).unwrap();
    let p = MomentParams::new(2, Complex64::new(0.0, 0.4), chi, 6).with_y(40.0).with_tolerance(1e-11);
    for (c, mult) in [(6u64, 1u64), (12, 1), (12, 3)] {
        let block = kloosterman_block(&p, c, mult).unwrap();
        let mut want = Complex64::new(0.0, 0.0);
        let m_eff = Ratio::new(p.m, mult);
        let inner = p.clone().with_y(p.y / mult as f64);
        for a in (1..c).filter(|&a| gcd(a, c) == 1) {
            let abar = mod_inverse(a as i64, c).unwrap();
            let twist = Complex64::from_polar(1.0, std::f64::consts::TAU * (p.m * abar % c) as f64 / c as f64);
            want += twist * t_sum_direct(a as i64, c / mult, m_eff, &inner).unwrap();
        }
        want /= c as f64;
        assert!((block - want).norm() < 1e-9, "c={c} mult={mult}: {block} {want}");
    }
}

#[test]
fn levels_without_cusp_forms_give_zero() {
    // S_2(Gamma_0(N)) = 0 for N = 8, 10, 13, so the whole moment vanishes.
    for level in [8u64, 10, 13] {
        let p = MomentParams::new(1, Complex64::new(0.0, 0.0), chi3(), level);
        let r = moment_full_basis(&p).unwrap();
        assert!((r.main - 1.0).norm() < 1e-4);
        assert!(r.total.norm() < r.tail_estimate, "N={level}: {} vs {}", r.total, r.tail_estimate);
    }
}

#[test]
fn cutoff_invariance() {
    let chi = Character::from_exponents(5, &[1]).unwrap();
    let p = MomentParams::new(1, Complex64::new(0.0, 1.0), chi, 11).with_multiples(24, 24);
    let r1 = moment_full_basis(&p).unwrap();
    let r4 = moment_full_basis(&p.clone().with_y(4.0 * p.y)).unwrap();
    // Small next to the modulus tail, which the truncated c-sum cannot resolve.
    let diff = (r1.total - r4.total).norm();
    assert!(diff < 5e-3 && diff < 10.0 * r1.tail_estimate.max(r4.tail_estimate), "{} {}", r1.total, r4.total);
    assert!((r1.main - r4.main).norm() < 1e-4);
}

#[test]
fn conjugate_parameters_give_conjugate_moment() {
    let chi = Character::from_exponents(5, &[1]).unwrap();
    let a = MomentParams::new(2, Complex64::new(0.1, 0.7), chi.clone(), 12).with_multiples(8, 8);
    let b = MomentParams::new(2, Complex64::new(0.1, -0.7), chi.conj(), 12).with_multiples(8, 8);
    let (ra, rb) = (moment_full_basis(&a).unwrap(), moment_full_basis(&b).unwrap());
    assert!((ra.total - rb.total.conj()).norm() < 1e-9);
}

#[test]
fn newforms_vanish_when_p_divides_m() {
    let p = MomentParams::new(6, Complex64::new(0.0, 0.0), Character::from_exponents(5, &[1]).unwrap(), 27);
    let r = moment_newforms_prime_power(&p).unwrap();
    assert_eq!(r.total, Complex64::new(0.0, 0.0));
    assert_eq!(r.main, Complex64::new(0.0, 0.0));
}

#[test]
fn newforms_need_prime_power_level() {
    let chi = Character::from_exponents(5, &[1]).unwrap();
    for level in [12u64, 7] {
        let p = MomentParams::new(1, Complex64::new(0.0, 0.0), chi.clone(), level);
        assert!(matches!(moment_newforms_prime_power(&p), Err(crate::Error::InvalidParams(_))));
    }
}

#[test]
fn parameter_validation() {
    let zero = Complex64::new(0.0, 0.0);
    assert!(MomentParams::new(1, zero, chi3(), 9).validate().is_err());
    assert!(MomentParams::new(1, Complex64::new(0.5, 0.0), chi3(), 101).validate().is_err());
    assert!(MomentParams::new(1, zero, chi3(), 101).with_y(10.0).validate().is_err());
    let imprimitive = Character::from_exponents(9, &[3]).unwrap();
    assert!(MomentParams::new(1, zero, imprimitive, 10).validate().is_err());
    assert!(MomentParams::new(1, zero, chi3(), 101).validate().is_ok());
}

#[test]
fn zero_twist_index_main_term() {
    // chi(m) = 0 kills the diagonal.
    let p = MomentParams::new(3, Complex64::new(0.0, 0.0), chi3(), 10);
    assert_eq!(main_term(&p), Complex64::new(0.0, 0.0));
}

#[test]
fn slope_of_power_law() {
    let rows: Vec<SweepRow> = [100u64, 200, 400, 800]
        .iter()
        .map(|&n| SweepRow {
            level: n,
            q: 3,
            m: 1,
            t: 1.0,
            abs_error: 3.0 * (n as f64).powf(-0.9),
            normalized_error: 0.0,
            runtime_s: 0.0,
        })
        .collect();
    assert!((fit_slope(&rows).unwrap() + 0.9).abs() < 1e-12);
    assert!(fit_slope(&rows[..1]).is_none());
}

#[test]
fn divisor_bound_constant() {
    let limit = 1_000_000usize;
    let mut d = vec![0u32; limit + 1];
    for i in 1..=limit {
        for j in (i..=limit).step_by(i) {
            d[j] += 1;
        }
    }
    for (n, &dn) in d.iter().enumerate().skip(1) {
        assert!(dn as f64 <= DIVISOR_CONSTANT * (n as f64).cbrt(), "n={n}");
    }
    assert_eq!(divisor_count(2520), 48);
}
