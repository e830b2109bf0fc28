//! First moment of twisted L-values over weight-two forms of level `N`.

mod contour;
mod params;
mod tsum;

pub use contour::{t_sum_contour, ContourConfig, ContourEvaluator};
pub use params::{MomentParams, MomentResult};
pub use tsum::{
    cutoff_tail_integral, cutoff_weight, small_argument_bound, t_sum_direct, t_sum_truncated, truncation_length,
    J1_MAX,
};
pub use engine::{
    block_bound, kloosterman_block, modulus_sum, weil_tail_bound, ModulusSum, DIVISOR_CONSTANT, MAX_MODULUS,
};

use std::time::Instant;

use num_complex::Complex64;
use num_rational::Ratio;
use serde::Serialize;

use crate::arith::factorize;
use crate::error::{Error, Result};

mod engine;

/// `chi(m) m^{-1/2-alpha} V(m / Y)`.
pub fn main_term(params: &MomentParams) -> Complex64 {
    let m = params.m as f64;
    let chi_m = params.chi.evaluate(params.m as i64);
    chi_m * (-(0.5 + params.alpha) * m.ln()).exp() * cutoff_weight(m / params.y)
}

/// The harmonic first moment over an orthogonal basis of weight-two cusp forms of level `N`.
pub fn moment_full_basis(params: &MomentParams) -> Result<MomentResult> {
    params.validate()?;
    let main = main_term(params);
    let sum = modulus_sum(params, params.level, 1)?;
    let kloosterman = -std::f64::consts::TAU * sum.value;
    Ok(MomentResult {
        main,
        kloosterman,
        total: main + kloosterman,
        tail_bound: std::f64::consts::TAU * sum.tail_bound,
        tail_estimate: std::f64::consts::TAU * sum.tail_estimate,
        theory_scale: params.theory_scale(),
        c_max: sum.c_max,
        multiples: sum.multiples,
    })
}

/// `0` for `nu = 1`, `1 / (p - 1/p)` for `nu = 2` and `1 / p` beyond.
pub fn delta_nu(p: u64, nu: u32) -> Ratio<u64> {
    assert!(nu >= 1, "exponent must be positive");
    match nu {
        1 => Ratio::from_integer(0),
        2 => Ratio::new(p, p * p - 1),
        _ => Ratio::new(1, p),
    }
}

fn ratio_f64(r: Ratio<u64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// The same moment restricted to newforms of prime-power level `N = p^nu`, `nu >= 2`, assembled
/// from full-basis moments at `N` and `N / p` and the old-form corrections at `pn`.
pub fn moment_newforms_prime_power(params: &MomentParams) -> Result<MomentResult> {
    let (p, nu) = factorize(params.level)
        .as_prime_power()
        .filter(|&(_, nu)| nu >= 2)
        .ok_or_else(|| Error::InvalidParams(format!("level {} is not p^nu with nu >= 2", params.level)))?;
    params.validate()?;
    let theory_scale = params.theory_scale();
    if params.m.is_multiple_of(p) {
        let zero = Complex64::new(0.0, 0.0);
        return Ok(MomentResult {
            main: zero,
            kloosterman: zero,
            total: zero,
            tail_bound: 0.0,
            tail_estimate: 0.0,
            theory_scale,
            c_max: 0,
            multiples: 0,
        });
    }
    let delta = ratio_f64(delta_nu(p, nu));
    let lower = params.clone().with_level(params.level / p);
    let full_n = moment_full_basis(params)?;
    let full_lower = moment_full_basis(&lower)?;
    let old_n = modulus_sum(params, params.level, p)?;
    let old_lower = modulus_sum(params, params.level / p, p)?;
    let twist = params.chi.evaluate(p as i64) * (-(0.5 + params.alpha) * (p as f64).ln()).exp();
    let tau = std::f64::consts::TAU;
    let old = twist * tau * (old_n.value - delta * old_lower.value);

    let main = full_n.main - delta * full_lower.main;
    let kloosterman = full_n.kloosterman - delta * full_lower.kloosterman + old;
    let tw = twist.norm() * tau;
    Ok(MomentResult {
        main,
        kloosterman,
        total: main + kloosterman,
        tail_bound: full_n.tail_bound + delta * full_lower.tail_bound + tw * (old_n.tail_bound + delta * old_lower.tail_bound),
        tail_estimate: full_n.tail_estimate
            + delta * full_lower.tail_estimate
            + tw * (old_n.tail_estimate + delta * old_lower.tail_estimate),
        theory_scale,
        c_max: full_n.c_max.max(old_n.c_max),
        multiples: full_n.multiples.max(old_n.multiples),
    })
}

/// One level of an error-decay sweep.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    #[serde(rename = "N")]
    pub level: u64,
    pub q: u64,
    pub m: u64,
    #[serde(rename = "T")]
    pub t: f64,
    pub abs_error: f64,
    pub normalized_error: f64,
    pub runtime_s: f64,
}

/// Full-basis moments at each level, keeping the other parameters and the cutoff rule of `base`.
///
/// The cutoff is recomputed per level as `default_y * (base.y / base.default_y())`.
pub fn error_decay_sweep(base: &MomentParams, levels: &[u64]) -> Result<Vec<SweepRow>> {
    let y_scale = base.y / base.default_y();
    let mut rows = Vec::with_capacity(levels.len());
    for &level in levels {
        let params = base.clone().with_level(level).with_y_scale(y_scale);
        let start = Instant::now();
        let r = moment_full_basis(&params)?;
        let runtime_s = start.elapsed().as_secs_f64();
        let abs_error = (r.total - r.main).norm();
        rows.push(SweepRow {
            level,
            q: params.q(),
            m: params.m,
            t: params.t(),
            abs_error,
            normalized_error: abs_error / r.theory_scale,
            runtime_s,
        });
    }
    Ok(rows)
}

/// Least-squares slope of `log(abs_error)` against `log(N)`.
pub fn fit_slope(rows: &[SweepRow]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.abs_error > 0.0)
        .map(|r| ((r.level as f64).ln(), r.abs_error.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

#[cfg(test)]
mod tests;
