//! `T` through its Mellin-Barnes representation.
//!
//! With `X = 2 pi sqrt(m) / c`, the Bessel factor is
//! `(1 / 2 pi i) int G(s) X^{-s} n^{-s/2} ds / 2`, `G(s) = Gamma((1+s)/2) / Gamma((3-s)/2)`,
//! and the cutoff is `(1 / 2 pi i) int e^{w^2} (n / Y)^{-w} dw / w`. Summing over `n` gives
//! `F*(1/2 + alpha + s/2 + w, chi, a/c)`. The `s`-line is pushed to `Re s = -2K`; the poles of
//! `G` at `s = -1, -3, ...` leave `sum_{j<K} (-1)^j X^{2j+1} / (j! (j+1)!) W_j` with
//! `W_j = (1 / 2 pi i) int F*(w + alpha - j) e^{w^2} Y^w dw / w`.
//!
//! Both lines are discretised with the trapezoid rule on a shared lattice, so `F*` is only
//! evaluated at `z0 + i h k` and reused for every `a`, `m` and `Y`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use num_rational::Ratio;
use rayon::prelude::*;

use crate::arith::{e_frac, gcd, mul_mod, rem_euclid};
use crate::characters::Character;
use crate::error::{Error, Result};
use crate::moment::params::MomentParams;
use crate::moment::tsum::ratio_to_f64;
use crate::special::{hurwitz_zeta_rational, log_gamma};
use crate::sum::ComplexSum;

/// Discretisation of the double integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourConfig {
    /// Number of residues taken from the `s`-line.
    pub residues: usize,
    pub sigma_w: f64,
    /// Step in `Im w`; the `s`-line uses twice this.
    pub step: f64,
    pub half_length_w: f64,
    pub half_length_s: f64,
}

impl Default for ContourConfig {
    fn default() -> Self {
        Self { residues: 4, sigma_w: 0.5, step: 0.1, half_length_w: 6.5, half_length_s: 200.0 }
    }
}

impl ContourConfig {
    /// Long enough `s`-line for Bessel arguments up to `4 pi sqrt(m_eff n) / c`
    /// with `n` in the bulk of the cutoff `V(n / y)`.
    pub fn for_sum(c: u64, m_eff: f64, y: f64) -> Self {
        let reach = 4.0 * PI * (m_eff * y).sqrt() / c as f64;
        Self { half_length_s: (6.0 * reach).max(200.0), ..Self::default() }
    }
}

/// Cached `F*` data for one character, one modulus `c` and one shift `alpha`.
pub struct ContourEvaluator {
    c: u64,
    alpha: Complex64,
    config: ContourConfig,
    sigma_w: f64,
    w_nodes: usize,
    s_nodes: usize,
    /// `log(cq)`.
    log_cq: f64,
    /// `sum_{l = r mod c} chi(l) zeta(z, l / cq)` for each lattice point `z` and residue `r`.
    lattice: Vec<Vec<Complex64>>,
    lattice_z: Vec<Complex64>,
    /// The same on the residue lines, one block per `j`.
    residue_lines: Vec<Vec<Vec<Complex64>>>,
    residue_z: Vec<Vec<Complex64>>,
    /// `G(s) / 2` on the shifted `s`-line.
    kernel: Vec<Complex64>,
    s_line: Vec<Complex64>,
}

fn grouped_zeta(z: Complex64, chi: &Character, c: u64) -> Result<Vec<Complex64>> {
    let q = chi.modulus();
    let cq = c * q;
    let mut out = vec![ComplexSum::new(); c as usize];
    for l in 1..=cq {
        let Some(ph) = chi.phase(l as i64) else { continue };
        out[(l % c) as usize].add(ph.e() * hurwitz_zeta_rational(z, l as i64, cq)?);
    }
    Ok(out.into_iter().map(|s| s.value()).collect())
}

fn grouped_line(zs: &[Complex64], chi: &Character, c: u64) -> Result<Vec<Vec<Complex64>>> {
    zs.par_iter().map(|&z| grouped_zeta(z, chi, c)).collect()
}

impl ContourEvaluator {
    pub fn new(chi: &Character, c: u64, alpha: Complex64, config: ContourConfig) -> Result<Self> {
        let q = chi.modulus();
        if c == q {
            return Err(Error::PoleOnPath(c));
        }
        if c == 0 {
            return Err(Error::InvalidParams("modulus c must be positive".into()));
        }
        if config.residues == 0 || !(config.step > 0.0) || !(config.sigma_w > 0.0) {
            return Err(Error::InvalidParams("bad contour configuration".into()));
        }
        // Keep the j = 0 residue line away from the Hurwitz poles at z = 1.
        let mut sigma_w = config.sigma_w;
        if (sigma_w + alpha.re - 1.0).abs() < 0.2 {
            sigma_w = (1.0 - alpha.re - 0.3).max(0.2);
        }
        let h = config.step;
        let jw = (config.half_length_w / h).ceil() as usize;
        let js = (config.half_length_s / (2.0 * h)).ceil() as usize;
        let k = config.residues as f64;
        let sigma_s = -2.0 * k;

        let z0 = Complex64::new(0.5 + alpha.re + 0.5 * sigma_s + sigma_w, alpha.im);
        let lattice_z: Vec<Complex64> =
            (0..=2 * (jw + js)).map(|i| z0 + Complex64::new(0.0, h * (i as f64 - (jw + js) as f64))).collect();
        let lattice = grouped_line(&lattice_z, chi, c)?;

        let mut residue_z = Vec::new();
        let mut residue_lines = Vec::new();
        for j in 0..config.residues {
            let zs: Vec<Complex64> = (0..=2 * jw)
                .map(|i| Complex64::new(sigma_w + alpha.re - j as f64, alpha.im + h * (i as f64 - jw as f64)))
                .collect();
            residue_lines.push(grouped_line(&zs, chi, c)?);
            residue_z.push(zs);
        }

        let s_line: Vec<Complex64> =
            (0..=2 * js).map(|i| Complex64::new(sigma_s, 2.0 * h * (i as f64 - js as f64))).collect();
        let kernel = s_line
            .iter()
            .map(|&s| {
                let lg = log_gamma((1.0 + s) / 2.0)? - log_gamma((3.0 - s) / 2.0)?;
                Ok(0.5 * lg.exp())
            })
            .collect::<Result<Vec<_>>>()?;

        Ok(Self {
            c,
            alpha,
            config,
            sigma_w,
            w_nodes: 2 * jw + 1,
            s_nodes: 2 * js + 1,
            log_cq: ((c * q) as f64).ln(),
            lattice,
            lattice_z,
            residue_lines,
            residue_z,
            kernel,
            s_line,
        })
    }

    pub fn config(&self) -> ContourConfig {
        self.config
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    fn assemble(&self, z: Complex64, grouped: &[Complex64], phases: &[Complex64]) -> Complex64 {
        let mut acc = ComplexSum::new();
        for (g, p) in grouped.iter().zip(phases) {
            acc.add(g * p);
        }
        acc.value() * (-z * self.log_cq).exp()
    }

    /// `T(a, c; Y)` with effective index `m_eff`.
    pub fn t_sum(&self, a: i64, m_eff: Ratio<u64>, y: f64) -> Result<Complex64> {
        let c = self.c;
        let ar = rem_euclid(a, c);
        if gcd(ar, c) != 1 {
            return Err(Error::NotInvertible { a, c });
        }
        let phases: Vec<Complex64> = (0..c).map(|r| e_frac(mul_mod(r, ar, c), c)).collect();
        let x = TAU * ratio_to_f64(m_eff).sqrt() / c as f64;
        let h = self.config.step;

        let w_weight: Vec<Complex64> = (0..self.w_nodes)
            .map(|i| {
                let w = Complex64::new(self.sigma_w, h * (i as f64 - (self.w_nodes / 2) as f64));
                (w * w + w * y.ln()).exp() / w
            })
            .collect();

        let mut total = ComplexSum::new();
        let mut coeff = x;
        for (j, (line, zs)) in self.residue_lines.iter().zip(&self.residue_z).enumerate() {
            if j > 0 {
                coeff *= -x * x / (j as f64 * (j + 1) as f64);
            }
            let mut acc = ComplexSum::new();
            for ((g, &z), wt) in line.iter().zip(zs).zip(&w_weight) {
                acc.add(self.assemble(z, g, &phases) * wt);
            }
            total.add(acc.value() * (coeff * h / TAU));
        }

        let f_lattice: Vec<Complex64> =
            self.lattice.iter().zip(&self.lattice_z).map(|(g, &z)| self.assemble(z, g, &phases)).collect();
        let log_x = x.ln();
        let mut acc = ComplexSum::new();
        for i in 0..self.s_nodes {
            let s = self.s_line[i];
            let outer = self.kernel[i] * (-s * log_x).exp();
            let mut inner = Complex64::new(0.0, 0.0);
            for (jj, wt) in w_weight.iter().enumerate() {
                inner += wt * f_lattice[i + jj];
            }
            acc.add(outer * inner);
        }
        total.add(acc.value() * (2.0 * h * h / (4.0 * PI * PI)));
        Ok(total.value())
    }
}

/// `T` through the contour representation, building a fresh evaluator.
pub fn t_sum_contour(a: i64, c: u64, m_eff: Ratio<u64>, params: &MomentParams) -> Result<Complex64> {
    let config = ContourConfig::for_sum(c, ratio_to_f64(m_eff), params.y);
    let ev = ContourEvaluator::new(&params.chi, c, params.alpha, config)?;
    ev.t_sum(a, m_eff, params.y)
}
