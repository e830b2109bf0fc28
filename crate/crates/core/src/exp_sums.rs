//! Kloosterman sums `S(m, n; c) = sum_{x mod c, (x,c)=1} e((m x + n xbar) / c)`.

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::arith::{batch_inverse, divisor_count, e_frac, gcd, mul_mod, rem_euclid};
use crate::sum::ComplexSum;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KloostermanValue {
    pub m: i64,
    pub n: i64,
    pub c: u64,
    pub value: f64,
    /// Imaginary part left over from floating-point summation.
    pub imag_residual: f64,
}

/// Units modulo `c` in increasing order.
pub fn units(c: u64) -> Vec<u64> {
    if c == 1 {
        return vec![0];
    }
    (1..c).filter(|&x| gcd(x, c) == 1).collect()
}

/// `S(m, n; c)` by direct summation with exact phases.
pub fn kloosterman(m: i64, n: i64, c: u64) -> KloostermanValue {
    assert!(c >= 1, "Kloosterman modulus must be positive");
    let xs = units(c);
    let inv = batch_inverse(&xs, c).expect("units are invertible");
    let (mr, nr) = (rem_euclid(m, c), rem_euclid(n, c));
    let mut acc = ComplexSum::new();
    for (&x, &xbar) in xs.iter().zip(&inv) {
        let r = (mul_mod(mr, x, c) + mul_mod(nr, xbar, c)) % c;
        acc.add(e_frac(r, c));
    }
    let v = acc.value();
    KloostermanValue { m, n, c, value: v.re, imag_residual: v.im }
}

/// `S(m, r; c)` for every `r` in `0..c` by one FFT of length `c`.
pub fn kloosterman_row(m: i64, c: u64) -> Vec<f64> {
    let len = c as usize;
    let mut buf = vec![Complex64::new(0.0, 0.0); len];
    let xs = units(c);
    let inv = batch_inverse(&xs, c).expect("units are invertible");
    let mr = rem_euclid(m, c);
    for (&y, &ybar) in xs.iter().zip(&inv) {
        buf[y as usize] = e_frac(mul_mod(mr, ybar, c), c);
    }
    // rustfft's inverse transform is unnormalised: out[r] = sum_y buf[y] e(r y / c).
    FftPlanner::new().plan_fft_inverse(len).process(&mut buf);
    buf.into_iter().map(|z| z.re).collect()
}

/// `|S(m, n; c)| / (d(c) gcd(m, n, c)^{1/2} c^{1/2})`; at most 1 by Weil's bound.
pub fn weil_ratio(m: i64, n: i64, c: u64) -> f64 {
    let s = kloosterman(m, n, c).value;
    weil_normalise(s, m, n, c)
}

pub fn weil_normalise(s: f64, m: i64, n: i64, c: u64) -> f64 {
    let g = gcd(gcd(m.unsigned_abs(), n.unsigned_abs()), c);
    s.abs() / (divisor_count(c) as f64 * (g as f64).sqrt() * (c as f64).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeilSample {
    pub m: i64,
    pub n: i64,
    pub c: u64,
    pub value: f64,
    pub ratio: f64,
}

/// All `(m, n, c)` with `m, n` in the given ranges and `1 <= c <= c_max`.
pub fn weil_sweep(ms: std::ops::RangeInclusive<i64>, ns: std::ops::RangeInclusive<i64>, c_max: u64) -> Vec<WeilSample> {
    let mut out = Vec::new();
    for c in 1..=c_max {
        for m in ms.clone() {
            let row = kloosterman_row(m, c);
            for n in ns.clone() {
                let value = row[rem_euclid(n, c) as usize];
                out.push(WeilSample { m, n, c, value, ratio: weil_normalise(value, m, n, c) });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{euler_phi, is_prime, mod_inverse};

    #[test]
    fn examples() {
        assert!((kloosterman(1, 1, 1).value - 1.0).abs() < 1e-15);
        assert!((kloosterman(1, 1, 2).value - 1.0).abs() < 1e-15);
        assert!((kloosterman(1, 1, 3).value + 1.0).abs() < 1e-15);
        assert!((kloosterman(1, 1, 6).value + 1.0).abs() < 1e-15);
        for c in 1..60 {
            assert!((kloosterman(0, 0, c).value - euler_phi(c) as f64).abs() < 1e-10);
        }
    }

    #[test]
    fn row_matches_direct() {
        for c in [1u64, 2, 7, 12, 30, 97, 128] {
            for m in [1i64, 3, -5] {
                let row = kloosterman_row(m, c);
                for (r, v) in row.iter().enumerate() {
                    let d = kloosterman(m, r as i64, c);
                    assert!((v - d.value).abs() < 1e-10, "m={m} r={r} c={c}");
                }
            }
        }
    }

    #[test]
    fn twisted_multiplicativity() {
        for c1 in 2u64..=20 {
            for c2 in 2u64..=(200 / c1) {
                if gcd(c1, c2) != 1 {
                    continue;
                }
                let i2 = mod_inverse(c2 as i64, c1).unwrap() as i64;
                let i1 = mod_inverse(c1 as i64, c2).unwrap() as i64;
                for (m, n) in [(1i64, 1i64), (2, 5), (3, 0)] {
                    let whole = kloosterman(m, n, c1 * c2).value;
                    let split = kloosterman(m * i2, n * i2, c1).value * kloosterman(m * i1, n * i1, c2).value;
                    assert!((whole - split).abs() < 1e-9, "c1={c1} c2={c2}");
                }
            }
        }
    }

    #[test]
    fn prime_moduli_obey_weil() {
        for c in (2u64..400).filter(|&c| is_prime(c)) {
            for m in 1..5 {
                let s = kloosterman(m, 1, c).value;
                if !(m as u64).is_multiple_of(c) {
                    assert!(s.abs() <= 2.0 * (c as f64).sqrt() + 1e-9);
                }
            }
        }
    }
}
