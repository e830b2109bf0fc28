//! Complex special functions: log-Gamma, Hurwitz and periodic zeta, Bessel
//! `J_1` and the smooth cutoff `V(x) = (1/2 pi i) int e^{s^2} x^{-s} ds/s`.

use std::f64::consts::{FRAC_PI_4, LN_2, PI, TAU};
use std::sync::LazyLock;

use num_complex::Complex64;
use num_rational::Ratio;

use crate::arith::RationalPhase;
use crate::error::{Error, Result};
use crate::sum::ComplexSum;

const LANCZOS_G: f64 = 5.242_187_5;
const LANCZOS_SERIES0: f64 = 0.999_999_999_999_997_1;
const LANCZOS_COEFFS: [f64; 14] = [
    57.156_235_665_862_92,
    -59.597_960_355_475_49,
    14.136_097_974_741_746,
    -0.491_913_816_097_620_2,
    3.399_464_998_481_189e-5,
    4.652_362_892_704_858e-5,
    -9.837_447_530_487_956e-5,
    1.580_887_032_249_125e-4,
    -2.102_644_417_241_048_8e-4,
    2.174_396_181_152_126_5e-4,
    -1.643_181_065_367_639e-4,
    8.441_822_398_385_275e-5,
    -2.619_083_840_158_140_8e-5,
    3.689_918_265_953_162_5e-6,
];
const MAX_HEAD: usize = 1 << 20;
const SQRT_TAU: f64 = 2.506_628_274_631_000_5;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `log Gamma(s)` on the principal branch (the continuation from the positive
/// reals, so `log_gamma(s + 1) = log_gamma(s) + log(s)` holds exactly).
pub fn log_gamma(s: Complex64) -> Result<Complex64> {
    // Normalise -0.0 so that logs of negative reals land on +i pi.
    let s = c(s.re, if s.im == 0.0 { 0.0 } else { s.im });
    if s.im == 0.0 && s.re <= 0.0 && s.re == s.re.round() {
        return Err(Error::PoleAtNonpositiveInteger(s.re as i64));
    }
    if s.re >= 0.5 {
        return Ok(log_gamma_lanczos(s));
    }
    let reflected = c(PI.ln(), 0.0) - ln_sin_pi(s) - log_gamma_lanczos(1.0 - s);
    // Reflection fixes the value only modulo 2 pi i; recover the branch from
    // the recurrence, where only the imaginary parts are needed.
    let steps = (0.5 - s.re).ceil() as u64;
    let mut arg_sum = 0.0;
    for k in 0..steps {
        arg_sum += (s + k as f64).arg();
    }
    let target = log_gamma_lanczos(s + steps as f64).im - arg_sum;
    let turns = ((target - reflected.im) / TAU).round();
    Ok(reflected + c(0.0, TAU * turns))
}

fn log_gamma_lanczos(s: Complex64) -> Complex64 {
    let shifted = s + LANCZOS_G;
    let head = (s + 0.5) * shifted.ln() - shifted;
    let mut series = c(LANCZOS_SERIES0, 0.0);
    for (j, coef) in LANCZOS_COEFFS.iter().enumerate() {
        series += *coef / (s + (j + 1) as f64);
    }
    head + (series * SQRT_TAU).ln() - s.ln()
}

/// `log sin(pi z)` modulo `2 pi i`, without overflow for large `|Im z|`.
fn ln_sin_pi(z: Complex64) -> Complex64 {
    if z.im < 0.0 {
        return ln_sin_pi(z.conj()).conj();
    }
    // sin(pi z) = e^{-i pi z} (1 - e^{2 pi i z}) / (-2i)
    let i = c(0.0, 1.0);
    let tail = (i * TAU * z).exp();
    -i * PI * z - c(LN_2, -PI / 2.0) + (1.0 - tail).ln()
}

pub fn gamma(s: Complex64) -> Result<Complex64> {
    log_gamma(s).map(Complex64::exp)
}

/// `B_{2j} / (2j)!` for `j = 1..=10`, from exact rational Bernoulli numbers.
static BERNOULLI_OVER_FACTORIAL: LazyLock<Vec<f64>> = LazyLock::new(|| {
    let bernoulli = bernoulli_numbers(20);
    let mut factorial = Ratio::from_integer(1i128);
    let mut out = Vec::with_capacity(10);
    for n in 1..=20i128 {
        factorial *= Ratio::from_integer(n);
        if n % 2 == 0 {
            let r = bernoulli[n as usize] / factorial;
            out.push(*r.numer() as f64 / *r.denom() as f64);
        }
    }
    out
});

/// Exact `B_0..=B_n` from `sum_{k<=n} C(n+1, k) B_k = 0`.
pub fn bernoulli_numbers(n: usize) -> Vec<Ratio<i128>> {
    let mut b: Vec<Ratio<i128>> = vec![Ratio::from_integer(1)];
    for m in 1..=n {
        let mut acc = Ratio::from_integer(0);
        let mut binom: i128 = 1; // C(m+1, k)
        for (k, bk) in b.iter().enumerate() {
            acc += *bk * binom;
            binom = binom * (m as i128 + 1 - k as i128) / (k as i128 + 1);
        }
        b.push(-acc / Ratio::from_integer(m as i128 + 1));
    }
    b
}

/// `zeta(s, x) = sum_{n + x > 0} (n + x)^{-s}`: all integers `n`, so only the
/// fractional part of `x` matters and integer `x` gives the Riemann zeta.
pub fn hurwitz_zeta(s: Complex64, x: f64) -> Result<Complex64> {
    if !x.is_finite() {
        return Err(Error::InvalidParams(format!("Hurwitz shift {x} is not finite")));
    }
    let frac = x - x.floor();
    hurwitz_zeta_shifted(s, if frac == 0.0 { 1.0 } else { frac })
}

/// `zeta(s, num/den)` with the fractional part taken exactly.
pub fn hurwitz_zeta_rational(s: Complex64, num: i64, den: u64) -> Result<Complex64> {
    let r = crate::arith::rem_euclid(num, den);
    let x = if r == 0 { 1.0 } else { r as f64 / den as f64 };
    hurwitz_zeta_shifted(s, x)
}

/// The classical series `sum_{n >= 0} (n + x)^{-s}` for `x > 0`, continued by
/// Euler-Maclaurin summation.
pub fn hurwitz_zeta_shifted(s: Complex64, x: f64) -> Result<Complex64> {
    if (s - 1.0).norm() < 1e-12 {
        return Err(Error::PoleAtOne);
    }
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::NonPositiveArgument(x));
    }
    // Fewest explicit terms whose Bernoulli remainder is below the rounding
    // noise of the head, which grows like N^{-Re s} when Re s is negative.
    let noise = |big: f64| 1e-17 * big.powf((-s.re).max(0.0));
    let mut m = 2usize;
    while remainder_estimate(s, x + m as f64) > noise(x + m as f64) && m < MAX_HEAD {
        m += m / 2;
    }
    let mut value = euler_maclaurin(s, x, m);
    loop {
        let big = x + m as f64;
        let est = remainder_estimate(s, big);
        if m >= MAX_HEAD || est <= noise(big).max(1e-16 * value.norm()) {
            break;
        }
        m *= 2;
        value = euler_maclaurin(s, x, m);
    }
    Ok(value)
}

fn euler_maclaurin(s: Complex64, x: f64, m: usize) -> Complex64 {
    let mut acc = ComplexSum::new();
    for k in 0..m {
        acc.add((-s * (k as f64 + x).ln()).exp());
    }
    let big = x + m as f64;
    let ln_big = big.ln();
    let power = (-s * ln_big).exp(); // big^{-s}
    acc.add(power * big / (s - 1.0));
    acc.add(power * 0.5);
    // B_{2j}/(2j)! * s (s+1) ... (s+2j-2) * big^{-s-2j+1}
    let mut rising = s;
    let mut pw = power / big;
    for (j, coef) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        acc.add(rising * pw * *coef);
        let k = 2.0 * (j + 1) as f64;
        rising *= (s + (k - 1.0)) * (s + k);
        pw /= big * big;
    }
    acc.value()
}

/// Size of the first omitted term, `|(s)_21| / (2 pi N)^22 * 2 N^{1 - Re s}`.
fn remainder_estimate(s: Complex64, big: f64) -> f64 {
    let mut log_rising = 0.0;
    for k in 0..21 {
        log_rising += (s + k as f64).norm().ln();
    }
    let log_term = LN_2 + log_rising - 22.0 * (TAU * big).ln() + (1.0 - s.re) * big.ln();
    log_term.exp()
}

/// `F(s, x) = sum_{n >= 1} e(n x) n^{-s}`, continued through
/// `c^{-s} sum_{l=1}^{c} e(l a / c) zeta(s, l / c)` for `x = a / c`.
pub fn periodic_zeta(s: Complex64, x: &RationalPhase) -> Result<Complex64> {
    if x.is_integer() {
        return hurwitz_zeta_shifted(s, 1.0);
    }
    if (s - 1.0).norm() < 1e-12 {
        // The poles of the Hurwitz terms cancel; F(1, x) = -log(1 - e(x)).
        return Ok(-(1.0 - x.e()).ln());
    }
    let den = x.denominator();
    let a = x.residue();
    let mut acc = ComplexSum::new();
    for l in 1..=den {
        let phase = crate::arith::e_frac(crate::arith::mul_mod(l, a, den), den);
        acc.add(phase * hurwitz_zeta_rational(s, l as i64, den)?);
    }
    Ok(acc.value() * (-s * (den as f64).ln()).exp())
}

/// Bessel function `J_1(x)`.
pub fn bessel_j1(x: f64) -> f64 {
    if x < 0.0 {
        -bessel_j1(-x)
    } else if x < 12.0 {
        bessel_j1_series(x)
    } else {
        bessel_j1_asymptotic(x)
    }
}

/// `sum_k (-1)^k (x/2)^{2k+1} / (k! (k+1)!)`.
pub fn bessel_j1_series(x: f64) -> f64 {
    let half = 0.5 * x;
    let sq = half * half;
    let mut term = half;
    let mut acc = term;
    for k in 1..200 {
        term *= -sq / (k as f64 * (k + 1) as f64);
        acc += term;
        if term.abs() < 1e-17 * acc.abs().max(1e-300) {
            break;
        }
    }
    acc
}

/// Hankel's large-argument expansion, truncated at its smallest term.
pub fn bessel_j1_asymptotic(x: f64) -> f64 {
    let mu = 4.0;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut coef = 1.0f64; // a_k(1) / x^k
    let mut last = f64::INFINITY;
    for k in 1..200 {
        let odd = (2 * k - 1) as f64;
        coef *= (mu - odd * odd) / (8.0 * k as f64 * x);
        if coef.abs() >= last || coef.abs() < 1e-17 {
            break;
        }
        last = coef.abs();
        match k % 4 {
            1 => q += coef,
            2 => p -= coef,
            3 => q -= coef,
            _ => p += coef,
        }
    }
    let omega = x - 3.0 * FRAC_PI_4;
    (2.0 / (PI * x)).sqrt() * (p * omega.cos() - q * omega.sin())
}

/// A truncated vertical line `Re s = sigma`, `|Im s| <= half_length`, sampled
/// at `nodes` equally spaced points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourSpec {
    sigma: f64,
    half_length: f64,
    nodes: usize,
}

impl ContourSpec {
    pub fn new(sigma: f64, half_length: f64, nodes: usize) -> Result<Self> {
        if nodes < 64 {
            return Err(Error::InvalidParams(format!("contour needs at least 64 nodes, got {nodes}")));
        }
        if !(half_length >= 10.0) {
            return Err(Error::InvalidParams(format!("contour half-length {half_length} is below 10")));
        }
        if sigma == 0.0 || !sigma.is_finite() {
            return Err(Error::InvalidParams("contour must avoid the pole at s = 0".into()));
        }
        Ok(Self { sigma, half_length, nodes })
    }

    /// The default line for `V(x)`: `Re s = 2` when `x >= 1`, else `Re s = -2`.
    pub fn for_cutoff(x: f64) -> Self {
        Self { sigma: if x >= 1.0 { 2.0 } else { -2.0 }, half_length: 12.0, nodes: 2048 }
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn half_length(&self) -> f64 {
        self.half_length
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn with_sigma(self, sigma: f64) -> Result<Self> {
        Self::new(sigma, self.half_length, self.nodes)
    }
}

/// `V(x)` by trapezoidal quadrature on the line of `spec`. A line left of the
/// origin picks up the residue 1 at `s = 0`.
pub fn cutoff_v(x: f64, spec: &ContourSpec) -> Result<Complex64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::NonPositiveArgument(x));
    }
    let ln_x = x.ln();
    let n = spec.nodes;
    let h = 2.0 * spec.half_length / (n - 1) as f64;
    let mut acc = ComplexSum::new();
    for j in 0..n {
        let t = -spec.half_length + j as f64 * h;
        let s = c(spec.sigma, t);
        let w = if j == 0 || j == n - 1 { 0.5 } else { 1.0 };
        acc.add((s * s - s * ln_x).exp() / s * w);
    }
    // ds = i dt, so (1 / 2 pi i) ds = dt / 2 pi.
    let integral = acc.value() * (h / TAU);
    Ok(if spec.sigma < 0.0 { integral + 1.0 } else { integral })
}

/// `V(x) = erfc(log(x) / 2) / 2`, the closed form of the same integral.
pub fn cutoff_v_closed(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::NonPositiveArgument(x));
    }
    Ok(0.5 * libm::erfc(0.5 * x.ln()))
}
