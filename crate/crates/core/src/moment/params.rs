use num_complex::Complex64;

use crate::arith::gcd;
use crate::characters::Character;
use crate::error::{Error, Result};

/// Inputs of a moment computation.
#[derive(Debug, Clone)]
pub struct MomentParams {
    /// Twist index `m >= 1`.
    pub m: u64,
    pub alpha: Complex64,
    /// Primitive character modulo `q`.
    pub chi: Character,
    /// Level `N`.
    pub level: u64,
    /// Cutoff length `Y`.
    pub y: f64,
    /// Target absolute accuracy of the truncated sums.
    pub tolerance: f64,
    /// Window constant `c0` in `|Re alpha| <= c0 / log N`.
    pub re_alpha_window: f64,
    /// Bounds on the number of multiples `c = N, 2N, ...` of the level.
    pub min_multiples: u64,
    pub max_multiples: u64,
}

impl MomentParams {
    /// Parameters with the default cutoff `Y = (m N q T)^2`, `T = 1 + |Im alpha|`.
    pub fn new(m: u64, alpha: Complex64, chi: Character, level: u64) -> Self {
        let mut p = Self {
            m,
            alpha,
            chi,
            level,
            y: 0.0,
            tolerance: 1e-8,
            re_alpha_window: 1.0,
            min_multiples: 16,
            max_multiples: 64,
        };
        p.y = p.default_y();
        p
    }

    pub fn q(&self) -> u64 {
        self.chi.modulus()
    }

    /// `T = 1 + |Im alpha|`.
    pub fn t(&self) -> f64 {
        1.0 + self.alpha.im.abs()
    }

    pub fn default_y(&self) -> f64 {
        let r = self.m as f64 * self.level as f64 * self.q() as f64 * self.t();
        r * r
    }

    pub fn with_y(mut self, y: f64) -> Self {
        self.y = y;
        self
    }

    pub fn with_y_scale(mut self, scale: f64) -> Self {
        self.y = self.default_y() * scale;
        self
    }

    pub fn with_level(mut self, level: u64) -> Self {
        self.level = level;
        self
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn with_multiples(mut self, min: u64, max: u64) -> Self {
        self.min_multiples = min;
        self.max_multiples = max;
        self
    }

    /// Reference error scale `(q T m)^{1/2} / N`.
    pub fn theory_scale(&self) -> f64 {
        (self.q() as f64 * self.t() * self.m as f64).sqrt() / self.level as f64
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParams(msg));
        if self.m == 0 {
            return bad("twist index m must be positive".into());
        }
        if self.level < 2 {
            return bad(format!("level must be at least 2, got {}", self.level));
        }
        if !self.chi.is_primitive() {
            return Err(Error::InvalidCharacter(format!("{} is not primitive", self.chi)));
        }
        if gcd(self.q(), self.level) != 1 {
            return bad(format!("gcd(q, N) = gcd({}, {}) must be 1", self.q(), self.level));
        }
        if !self.alpha.re.is_finite() || !self.alpha.im.is_finite() {
            return bad("alpha must be finite".into());
        }
        if self.level >= 3 && self.alpha.re.abs() > self.re_alpha_window / (self.level as f64).ln() {
            return bad(format!(
                "|Re alpha| = {} exceeds {} / log N",
                self.alpha.re.abs(),
                self.re_alpha_window
            ));
        }
        let floor = (self.q() as f64 * self.t()).powi(2) * self.level as f64;
        if !(self.y >= floor) || !self.y.is_finite() {
            return bad(format!("Y = {} is below q^2 T^2 N = {floor}", self.y));
        }
        if !(self.tolerance > 0.0) {
            return bad("tolerance must be positive".into());
        }
        if self.min_multiples == 0 || self.max_multiples < self.min_multiples {
            return bad("need 1 <= min_multiples <= max_multiples".into());
        }
        Ok(())
    }
}

/// Outcome of a moment computation; `total = main + kloosterman`.
#[derive(Debug, Clone)]
pub struct MomentResult {
    pub main: Complex64,
    /// The off-diagonal side, `-2 pi` times the sum over moduli `c`.
    pub kloosterman: Complex64,
    pub total: Complex64,
    /// Rigorous majorant for the moduli beyond the truncation point.
    pub tail_bound: f64,
    /// Empirical size of the same tail, from the spread of the computed blocks.
    pub tail_estimate: f64,
    /// `(q T m)^{1/2} / N`.
    pub theory_scale: f64,
    /// Largest modulus summed.
    pub c_max: u64,
    pub multiples: u64,
}

impl MomentResult {
    /// `|total - main| N / (q T m)^{1/2}`.
    pub fn normalized_error(&self) -> f64 {
        (self.total - self.main).norm() / self.theory_scale
    }
}
