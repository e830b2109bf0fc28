//! Sums over the moduli `c = N, 2N, 3N, ...` of the Kloosterman side.
//!
//! For one modulus, opening `sum_a e(m abar / c) T(a, c)` gives
//! `K_c = (1/c) sum_n chi(n) S(m, k n; c) n^{-1/2-alpha} J_1(4 pi sqrt(m k n) / c) V(k n / Y)`
//! with `k = 1` for the full basis and `k = p` for the old-form correction. The weights
//! `chi(n) S(m, k n; c)` are periodic of period `P = lcm(c, q)` with zero mean, and once the
//! Bessel and `n^{-i Im alpha}` phases move slower than `1 / (8P)` the remaining tail is a smooth
//! function against a mean-zero periodic sequence. Cutting it off with an `erfc` ramp of width
//! `2.5 P` leaves an error of order `exp(-(2.5 pi 0.75)^2)`, far below double precision.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::arith::{divisor_count, gcd, lcm};
use crate::error::{Error, Result};
use crate::exp_sums::kloosterman_row;
use crate::moment::params::MomentParams;
use crate::moment::tsum::{cutoff_tail_integral, cutoff_weight, truncation_length};
use crate::special::bessel_j1;
use crate::sum::{ComplexSum, NeumaierSum};

/// Hard cap on the largest modulus.
pub const MAX_MODULUS: u64 = 1_000_000;

/// Plain summation is used beyond this many terms only if the smooth cutoff is unavailable.
const MAX_DIRECT_TERMS: u64 = 2_000_000_000;

const BATCH: u64 = 8;

/// `d(n) <= 4 n^{1/3}` for every `n >= 1` (the supremum of the ratio is `3.527...`, at 2520).
pub const DIVISOR_CONSTANT: f64 = 4.0;

/// `K_c` for the modulus `c` and multiplier `k`.
pub fn kloosterman_block(params: &MomentParams, c: u64, mult: u64) -> Result<Complex64> {
    let q = params.q();
    let period = lcm(c, q);
    let row = kloosterman_row(params.m as i64, c);
    let chi = params.chi.value_table();
    let weights: Vec<Complex64> =
        (0..period).map(|n| chi[(n % q) as usize] * row[((mult % c) * (n % c) % c) as usize]).collect();
    let scale: f64 = weights.iter().map(|w| w.norm()).sum();
    let mean: Complex64 = weights.iter().sum();

    let y_eff = params.y / mult as f64;
    let w_max = weights.iter().map(|w| w.norm()).fold(0.0, f64::max);
    let target = params.tolerance * c as f64 / (10.0 * w_max.max(1.0));
    let n_v = truncation_length(y_eff, params.alpha.re, target);

    let pf = period as f64;
    let (ramp, n_stop) = if mean.norm() <= 1e-9 * scale.max(1.0) {
        let base = (64.0 * (params.m * mult) as f64 * (pf / c as f64).powi(2))
            .max(1.27 * pf * params.alpha.im.abs())
            .max(10.0);
        let width = 2.5 * pf;
        let mid = base + 6.0 * width;
        let end = (mid + 6.0 * width).ceil() as u64;
        (Some((mid, width)), end.min(n_v))
    } else {
        if n_v > MAX_DIRECT_TERMS {
            return Err(Error::InvalidParams(format!(
                "modulus {c} needs {n_v} direct terms; lower Y"
            )));
        }
        (None, n_v)
    };

    let bessel_scale = 2.0 * TAU * ((params.m * mult) as f64).sqrt() / c as f64;
    let exponent = -(0.5 + params.alpha);
    let real_power = params.alpha.im == 0.0;
    let mut acc = ComplexSum::new();
    for n in 1..=n_stop {
        let w = weights[(n % period) as usize];
        if w.re == 0.0 && w.im == 0.0 {
            continue;
        }
        let nf = n as f64;
        let mut radial = bessel_j1(bessel_scale * nf.sqrt()) * cutoff_weight(nf / y_eff);
        if let Some((mid, width)) = ramp {
            radial *= 0.5 * libm::erfc((nf - mid) / width);
        }
        let term = if real_power {
            w * (radial * nf.powf(exponent.re))
        } else {
            w * (exponent * nf.ln()).exp() * radial
        };
        acc.add(term);
    }
    Ok(acc.value() / c as f64)
}

/// The sum over `c = level * j`, `j = 1, 2, ...` of `K_c`, with the adaptive stopping rule.
#[derive(Debug, Clone)]
pub struct ModulusSum {
    pub value: Complex64,
    /// Certified majorant for `sum_{c > c_max} |K_c|` from Weil's bound; usually very pessimistic.
    pub tail_bound: f64,
    /// `rms(c K_c) / (level sqrt(multiples))`, the size of the tail if the blocks behave randomly.
    pub tail_estimate: f64,
    pub multiples: u64,
    pub c_max: u64,
    pub blocks: Vec<Complex64>,
}

/// Majorant for `sum_{j > multiples} |K_{level j}|` from `|S(m, n; c)| <= d(c) (m, n, c)^{1/2} c^{1/2}`
/// and `|J_1(x)| <= x / 2`.
pub fn weil_tail_bound(params: &MomentParams, level: u64, mult: u64, multiples: u64) -> f64 {
    let mk = (params.m * mult) as f64;
    let y_eff = params.y / mult as f64;
    // sum_n n^{-Re alpha} V(n / y) <= 1 + int_1^inf t^{-Re alpha} V(t / y) dt
    let n_sum = 1.0 + cutoff_tail_integral(1.0, y_eff, params.alpha.re - 0.5);
    // sum_{j > J} (level j)^{1/3 + 1/2 - 2} <= 6 level^{-7/6} J^{-1/6}
    let c_sum = 6.0 * (level as f64).powf(-7.0 / 6.0) * (multiples as f64).powf(-1.0 / 6.0);
    TAU * DIVISOR_CONSTANT * mk.sqrt() * TAU * mk.sqrt() * n_sum * c_sum
}

pub fn modulus_sum(params: &MomentParams, level: u64, mult: u64) -> Result<ModulusSum> {
    let cap = (MAX_MODULUS / level).max(1).min(params.max_multiples);
    let mut blocks: Vec<Complex64> = Vec::new();
    let mut spread = NeumaierSum::new();
    let mut tail_estimate = f64::INFINITY;
    while (blocks.len() as u64) < cap {
        let start = blocks.len() as u64 + 1;
        let stop = (start + BATCH - 1).min(cap);
        let batch: Vec<Result<Complex64>> =
            (start..=stop).into_par_iter().map(|j| kloosterman_block(params, level * j, mult)).collect();
        for (j, r) in (start..=stop).zip(batch) {
            let v = r?;
            spread.add(((level * j) as f64 * v.norm()).powi(2));
            blocks.push(v);
        }
        let count = blocks.len() as f64;
        let rms = (spread.value() / count).sqrt();
        tail_estimate = rms / (level as f64 * count.sqrt());
        if blocks.len() as u64 >= params.min_multiples && TAU * tail_estimate < params.tolerance {
            break;
        }
    }
    let mut acc = ComplexSum::new();
    for b in &blocks {
        acc.add(*b);
    }
    let multiples = blocks.len() as u64;
    Ok(ModulusSum {
        value: acc.value(),
        tail_bound: weil_tail_bound(params, level, mult, multiples),
        tail_estimate,
        multiples,
        c_max: level * multiples,
        blocks,
    })
}

/// `|K_c|` bound used in tests: Weil plus `|J_1(x)| <= x / 2`.
pub fn block_bound(params: &MomentParams, c: u64, mult: u64) -> f64 {
    let mk = (params.m * mult) as f64;
    let g = gcd(params.m * mult, c) as f64;
    let n_sum = 1.0 + cutoff_tail_integral(1.0, params.y / mult as f64, params.alpha.re - 0.5);
    divisor_count(c) as f64 * (g * c as f64).sqrt() * PI * 2.0 * mk.sqrt() * n_sum / (c * c) as f64
}
