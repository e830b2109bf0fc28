//! The sums `T(a, c; Y) = sum_n chi(n) e(n a / c) n^{-1/2-alpha} J_1(4 pi sqrt(m n) / c) V(n / Y)`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use num_rational::Ratio;

use crate::arith::{e_frac, gcd, mul_mod, rem_euclid};
use crate::error::{Error, Result};
use crate::moment::params::MomentParams;
use crate::special::bessel_j1;
use crate::sum::ComplexSum;

/// `sup_x |J_1(x)|`, rounded up.
pub const J1_MAX: f64 = 0.582;

/// Below this `V(x) = 1` to double precision.
const V_FLAT: f64 = 1e-6;

/// `V(x) = erfc(log(x) / 2) / 2`, the cutoff with kernel `e^{w^2}`.
pub fn cutoff_weight(x: f64) -> f64 {
    if x < V_FLAT {
        return 1.0;
    }
    0.5 * libm::erfc(0.5 * x.ln())
}

/// `int_x^inf t^{-1/2-re_alpha} V(t / y) dt`, which majorises the tail of any
/// n-sum with coefficients of modulus at most one after `x`.
pub fn cutoff_tail_integral(x: f64, y: f64, re_alpha: f64) -> f64 {
    let mut kappa = 0.5 - re_alpha;
    if kappa.abs() < 1e-9 {
        kappa = 1e-9;
    }
    let u0 = (x / y).ln();
    let lead = (kappa * kappa).exp() * libm::erfc(0.5 * u0 - kappa);
    let edge = (kappa * u0).exp() * libm::erfc(0.5 * u0);
    (y.powf(kappa) * (lead - edge) / (2.0 * kappa)).max(0.0)
}

/// Least `n >= y` with `J1_MAX * cutoff_tail_integral(n, y, re_alpha) < target`.
pub fn truncation_length(y: f64, re_alpha: f64, target: f64) -> u64 {
    let tail = |u: f64| J1_MAX * cutoff_tail_integral(y * u.exp(), y, re_alpha);
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while tail(hi) >= target {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if tail(mid) < target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (y * hi.exp()).ceil() as u64
}

fn check_inputs(a: i64, c: u64, m_eff: Ratio<u64>) -> Result<()> {
    if c == 0 {
        return Err(Error::InvalidParams("modulus c must be positive".into()));
    }
    if gcd(rem_euclid(a, c), c) != 1 {
        return Err(Error::NotInvertible { a, c });
    }
    if *m_eff.numer() == 0 || *m_eff.denom() == 0 {
        return Err(Error::InvalidParams("effective index must be positive".into()));
    }
    Ok(())
}

pub(crate) fn ratio_to_f64(r: Ratio<u64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// `T` summed directly up to the certified truncation length.
pub fn t_sum_direct(a: i64, c: u64, m_eff: Ratio<u64>, params: &MomentParams) -> Result<Complex64> {
    check_inputs(a, c, m_eff)?;
    let n_max = truncation_length(params.y, params.alpha.re, params.tolerance / 10.0);
    Ok(t_sum_truncated(a, c, m_eff, params, n_max))
}

/// `T` with the n-sum stopped at `n_max`, no certification.
pub fn t_sum_truncated(a: i64, c: u64, m_eff: Ratio<u64>, params: &MomentParams, n_max: u64) -> Complex64 {
    let q = params.q();
    let chi = params.chi.value_table();
    let ar = rem_euclid(a, c);
    let phases: Vec<Complex64> = (0..c).map(|r| e_frac(mul_mod(r, ar, c), c)).collect();
    let scale = 2.0 * TAU * ratio_to_f64(m_eff).sqrt() / c as f64;
    let exponent = -(0.5 + params.alpha);
    let mut acc = ComplexSum::new();
    for n in 1..=n_max {
        let chi_n = chi[(n % q) as usize];
        if chi_n.re == 0.0 && chi_n.im == 0.0 {
            continue;
        }
        let nf = n as f64;
        let radial = bessel_j1(scale * nf.sqrt()) * cutoff_weight(nf / params.y);
        if radial == 0.0 {
            continue;
        }
        let power = (exponent * nf.ln()).exp();
        acc.add(chi_n * phases[(n % c) as usize] * power * radial);
    }
    acc.value()
}

/// `J_1(x) <= x / 2` bound on `|T|`, useful when `c` is large.
pub fn small_argument_bound(c: u64, m_eff: Ratio<u64>, params: &MomentParams) -> f64 {
    let n_max = truncation_length(params.y, params.alpha.re, params.tolerance / 10.0);
    let half = PI * ratio_to_f64(m_eff).sqrt() * 2.0 / c as f64;
    let beta = -params.alpha.re;
    (1..=n_max)
        .map(|n| {
            let nf = n as f64;
            nf.powf(beta) * half * cutoff_weight(nf / params.y)
        })
        .sum::<f64>()
        + params.tolerance / 10.0
}
