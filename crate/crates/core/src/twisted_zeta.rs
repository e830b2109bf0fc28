//! Character-twisted periodic and Hurwitz zeta functions
//!
//! `F*(s, chi, a/c) = sum_{n >= 1} chi(n) e(n a / c) n^{-s}` and
//! `F_*(s, chi, x) = sum_{n + x > 0} chi(n) (n + x)^{-s}`, both continued to
//! all `s` through finite combinations of Hurwitz zeta values, together with
//! the functional equation linking them and a convexity-bound diagnostic.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::Serialize;

use crate::arith::{self, gcd, RationalPhase};
use crate::characters::{gauss_sum, Character};
use crate::error::{Error, Result};
use crate::special::{hurwitz_zeta_rational, log_gamma};
use crate::sum::ComplexSum;

/// Step used to evaluate the entire function `F*` at the removable point `s = 1`.
const REMOVABLE_STEP: f64 = 1e-4;

/// A point `(s, chi, a/c)` at which `F*` is evaluated.
#[derive(Debug, Clone)]
pub struct TwistedZetaPoint {
    pub s: Complex64,
    pub chi: Character,
    pub phase: RationalPhase,
}

impl TwistedZetaPoint {
    pub fn new(s: Complex64, chi: Character, a: i64, c: u64) -> Result<Self> {
        if c == 0 {
            return Err(Error::InvalidParams("phase denominator must be positive".into()));
        }
        if gcd(a.unsigned_abs(), c) != 1 {
            return Err(Error::InvalidParams(format!("phase {a}/{c} is not reduced")));
        }
        if !chi.is_primitive() {
            return Err(Error::InvalidCharacter(format!("{chi} is not primitive")));
        }
        Ok(Self { s, chi, phase: RationalPhase::new(a, c) })
    }

    pub fn a(&self) -> i64 {
        self.phase.numerator()
    }

    pub fn c(&self) -> u64 {
        self.phase.denominator()
    }

    fn at(&self, s: Complex64) -> Self {
        Self { s, ..self.clone() }
    }
}

/// Both sides of the functional equation at one point.
#[derive(Debug, Clone, Serialize)]
pub struct FeqReport {
    pub s: [f64; 2],
    pub q: u64,
    pub character: Vec<u64>,
    pub a: i64,
    pub c: u64,
    pub left: [f64; 2],
    pub right: [f64; 2],
    pub relative_error: f64,
}

/// `F*(s, chi, a/c)` via `(cq)^{-s} sum_{l=1}^{cq} chi(l) e(l a / c) zeta(s, l / (cq))`.
pub fn f_star(point: &TwistedZetaPoint) -> Result<Complex64> {
    let q = point.chi.modulus();
    let c = point.c();
    if (point.s - 1.0).norm() < 1e-12 {
        if c == q {
            return Err(Error::PoleAtOne);
        }
        // Entire here: the Hurwitz poles cancel. Average over a small circle.
        let h = REMOVABLE_STEP;
        let offsets = [Complex64::new(h, 0.0), Complex64::new(-h, 0.0), Complex64::new(0.0, h), Complex64::new(0.0, -h)];
        let mut acc = ComplexSum::new();
        for d in offsets {
            acc.add(f_star_decomposed(&point.at(point.s + d))?);
        }
        return Ok(acc.value() / 4.0);
    }
    f_star_decomposed(point)
}

fn f_star_decomposed(point: &TwistedZetaPoint) -> Result<Complex64> {
    let q = point.chi.modulus();
    let c = point.c();
    let cq = c * q;
    let a = point.phase.residue();
    let mut acc = ComplexSum::new();
    for l in 1..=cq {
        let Some(chi_l) = point.chi.phase(l as i64) else { continue };
        let twist = RationalPhase::new(arith::mul_mod(l, a, c) as i64, c);
        let zeta = hurwitz_zeta_rational(point.s, l as i64, cq)?;
        acc.add(chi_l.add_mod_one(&twist).e() * zeta);
    }
    Ok(acc.value() * (-point.s * (cq as f64).ln()).exp())
}

/// `F_*(s, chi, x)` via `q^{-s} sum_{l=1}^{q} chi(l) zeta(s, (l + x) / q)`.
pub fn f_lower_star(s: Complex64, chi: &Character, x: &RationalPhase) -> Result<Complex64> {
    let q = chi.modulus();
    let (num, den) = (x.numerator(), x.denominator());
    if den == 1 && chi.phase(-num).is_some() {
        return Err(Error::TermAtZero { n: -num });
    }
    let mut acc = ComplexSum::new();
    for l in 1..=q {
        let Some(chi_l) = chi.phase(l as i64) else { continue };
        // (l + num/den) / q = (l den + num) / (den q)
        let shifted = l as i64 * den as i64 + num;
        acc.add(chi_l.e() * hurwitz_zeta_rational(s, shifted, den * q)?);
    }
    Ok(acc.value() * (-s * (q as f64).ln()).exp())
}

/// Residue of `F*(s, chi, a/c)` at `s = 1`: `conj(chi)(a) tau(chi) / q` when
/// `c = q`, and zero otherwise.
pub fn residue_at_one(chi: &Character, a: i64, c: u64) -> Complex64 {
    let q = chi.modulus();
    if c != q {
        return Complex64::new(0.0, 0.0);
    }
    chi.conj().evaluate(a) * gauss_sum(chi).value / q as f64
}

/// Right-hand side of the functional equation for `F*(w, chi, a/c)` where
/// `w = point.s`, evaluated at `s = 1 - w`:
/// `Gamma(s) (2 pi)^{-s} tau(chi) q^{s-1} (e^{-pi i s/2} F_*(s, conj chi, -aq/c)
///  + chi(-1) e^{pi i s/2} F_*(s, conj chi, aq/c))`.
pub fn feq_rhs(point: &TwistedZetaPoint) -> Result<Complex64> {
    let s = 1.0 - point.s;
    let chi = &point.chi;
    let q = chi.modulus();
    let bar = chi.conj();
    let shift = RationalPhase::new(point.a() * q as i64, point.c());
    let minus = f_lower_star(s, &bar, &shift.neg())?;
    let plus = f_lower_star(s, &bar, &shift)?;
    let i = Complex64::new(0.0, 1.0);
    let rot = (i * PI * s / 2.0).exp();
    let parity = chi.parity() as f64;
    let log_scale = log_gamma(s)? - s * TAU.ln() + (s - 1.0) * (q as f64).ln();
    let prefactor = log_scale.exp() * gauss_sum(chi).value;
    Ok(prefactor * (minus / rot + plus * rot * parity))
}

/// Evaluate both sides of `F*(1 - s, chi, a/c) = feq_rhs` at `s`.
pub fn feq_check(s: Complex64, chi: &Character, a: i64, c: u64) -> Result<FeqReport> {
    let point = TwistedZetaPoint::new(1.0 - s, chi.clone(), a, c)?;
    let left = f_star(&point)?;
    let right = feq_rhs(&point)?;
    let relative_error = (left - right).norm() / left.norm().max(right.norm()).max(1e-300);
    Ok(FeqReport {
        s: [s.re, s.im],
        q: chi.modulus(),
        character: chi.exponents().to_vec(),
        a,
        c,
        left: [left.re, left.im],
        right: [right.re, right.im],
        relative_error,
    })
}

/// `|F*(s, chi, a/c)|` divided by the convexity bound
/// `(q + q|s|)^{1/2 - Re(s)/2 + eps}` times, when `c` does not divide `q`,
/// `{qa/c}^{-1 + Re(s) - eps} + {-qa/c}^{-1 + Re(s) - eps}`.
pub fn convexity_ratio(s: Complex64, chi: &Character, a: i64, c: u64, eps: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&s.re) || (s - 1.0).norm() <= eps || !(eps > 0.0) {
        return Err(Error::InvalidParams(format!(
            "convexity ratio needs -1 <= Re s <= 1, |s - 1| > eps > 0 (s = {s}, eps = {eps})"
        )));
    }
    let value = f_star(&TwistedZetaPoint::new(s, chi.clone(), a, c)?)?;
    Ok(value.norm() / convexity_bound(s, chi.modulus(), a, c, eps))
}

pub fn convexity_bound(s: Complex64, q: u64, a: i64, c: u64, eps: f64) -> f64 {
    let qf = q as f64;
    let growth = (qf + qf * s.norm()).powf(0.5 - 0.5 * s.re + eps);
    if q.is_multiple_of(c) {
        return growth;
    }
    let shift = RationalPhase::new(a * q as i64, c);
    let exponent = -1.0 + s.re - eps;
    growth * (shift.frac().powf(exponent) + shift.neg().frac().powf(exponent))
}

/// One evaluated point of a convexity sweep.
#[derive(Debug, Clone, Serialize)]
pub struct ConvexitySample {
    pub s: [f64; 2],
    pub q: u64,
    pub character: Vec<u64>,
    pub a: i64,
    pub c: u64,
    pub ratio: f64,
}

/// Grid for [`convexity_sweep`]: all primitive characters with modulus in
/// `moduli`, all reduced `a/c` with `c` in `denominators`, and
/// `s = sigma + i t` over the given sigmas and `t_count` equally spaced `t`
/// in `[-t_max, t_max]`.
#[derive(Debug, Clone)]
pub struct ConvexityGrid {
    pub moduli: Vec<u64>,
    pub denominators: Vec<u64>,
    pub sigmas: Vec<f64>,
    pub t_max: f64,
    pub t_count: usize,
    pub eps: f64,
}

pub fn convexity_sweep(grid: &ConvexityGrid) -> Result<Vec<ConvexitySample>> {
    let ts: Vec<f64> = if grid.t_count <= 1 {
        vec![0.0]
    } else {
        (0..grid.t_count)
            .map(|j| -grid.t_max + 2.0 * grid.t_max * j as f64 / (grid.t_count - 1) as f64)
            .collect()
    };
    let mut out = Vec::new();
    for &q in &grid.moduli {
        let primitive = crate::characters::enumerate_characters(q).into_iter().filter(Character::is_primitive);
        for chi in primitive {
            for &c in &grid.denominators {
                for a in (1..=c as i64).filter(|&a| gcd(a as u64, c) == 1) {
                    for &sigma in &grid.sigmas {
                        for &t in &ts {
                            let s = Complex64::new(sigma, t);
                            if (s - 1.0).norm() <= grid.eps {
                                continue;
                            }
                            let ratio = convexity_ratio(s, &chi, a, c, grid.eps)?;
                            out.push(ConvexitySample {
                                s: [sigma, t],
                                q,
                                character: chi.exponents().to_vec(),
                                a,
                                c,
                                ratio,
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::enumerate_characters;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn quadratic3() -> Character {
        Character::from_exponents(3, &[1]).unwrap()
    }

    fn odd4() -> Character {
        Character::from_exponents(4, &[1]).unwrap()
    }

    #[test]
    fn trivial_character_reduces_to_periodic_zeta() {
        let p = TwistedZetaPoint::new(c(2.0, 0.0), Character::trivial(1), 1, 2).unwrap();
        let v = f_star(&p).unwrap();
        assert!((v - c(-PI * PI / 12.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn decomposition_groupings_agree() {
        // The mod-15 decomposition against the same sum regrouped mod 30.
        let chi = quadratic3();
        let s = c(2.0, 0.0);
        let direct = f_star(&TwistedZetaPoint::new(s, chi.clone(), 1, 5).unwrap()).unwrap();
        let mut acc = ComplexSum::new();
        for l in 1..=30u64 {
            let w = chi.evaluate(l as i64) * RationalPhase::new(l as i64, 5).e();
            acc.add(w * hurwitz_zeta_rational(s, l as i64, 30).unwrap());
        }
        let regrouped = acc.value() * 30f64.powi(-2);
        assert!((direct - regrouped).norm() < 1e-13);
    }

    #[test]
    fn lower_star_examples() {
        let l2 = f_lower_star(c(2.0, 0.0), &quadratic3(), &RationalPhase::integer(0)).unwrap();
        assert!((l2 - c(0.78130241289648629686, 0.0)).norm() < 1e-12);
        let catalan = 0.91596559417721901505;
        let g = f_lower_star(c(2.0, 0.0), &odd4(), &RationalPhase::integer(0)).unwrap();
        assert!((g - c(catalan, 0.0)).norm() < 1e-12);
        assert_eq!(
            f_lower_star(c(2.0, 0.0), &quadratic3(), &RationalPhase::integer(-2)),
            Err(Error::TermAtZero { n: 2 })
        );
    }

    #[test]
    fn lower_star_matches_direct_sum() {
        // n runs over every integer with n + x > 0, so F_* is q-periodic in x.
        let chi = Character::from_exponents(5, &[1]).unwrap();
        let s = c(3.0, 2.0);
        for x in [RationalPhase::new(7, 4), RationalPhase::new(-9, 4), RationalPhase::new(1, 3)] {
            let mut direct = ComplexSum::new();
            let start = (-x.to_f64()).floor() as i64 + 1;
            for n in start..start + 200_000 {
                let base = n as f64 + x.to_f64();
                direct.add(chi.evaluate(n) * (-s * base.ln()).exp());
            }
            let got = f_lower_star(s, &chi, &x).unwrap();
            assert!((got - direct.value()).norm() < 1e-9, "x={x}");
            let shifted = RationalPhase::new(x.numerator() + 5 * x.denominator() as i64, x.denominator());
            assert!((f_lower_star(s, &chi, &shifted).unwrap() - got).norm() < 1e-13);
        }
    }

    #[test]
    fn residue_examples() {
        let r = residue_at_one(&quadratic3(), 1, 3);
        assert!((r - c(0.0, 3f64.sqrt() / 3.0)).norm() < 1e-14);
        assert_eq!(residue_at_one(&quadratic3(), 1, 5), c(0.0, 0.0));
        assert!((residue_at_one(&Character::trivial(1), 1, 1) - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn pole_only_when_denominator_equals_modulus() {
        let p = TwistedZetaPoint::new(c(1.0, 0.0), quadratic3(), 1, 3).unwrap();
        assert_eq!(f_star(&p), Err(Error::PoleAtOne));
        let entire = TwistedZetaPoint::new(c(1.0, 0.0), quadratic3(), 2, 7).unwrap();
        let at_one = f_star(&entire).unwrap();
        let near = f_star(&entire.at(c(1.0 + 1e-6, 0.0))).unwrap();
        assert!((at_one - near).norm() < 1e-5);
    }

    #[test]
    fn point_validation() {
        assert!(TwistedZetaPoint::new(c(2.0, 0.0), quadratic3(), 2, 4).is_err());
        let imprimitive = Character::from_exponents(6, &[0, 1]).unwrap();
        assert!(matches!(
            TwistedZetaPoint::new(c(2.0, 0.0), imprimitive, 1, 5),
            Err(Error::InvalidCharacter(_))
        ));
    }

    #[test]
    fn feq_examples() {
        let r = feq_check(c(0.5, 3.0), &quadratic3(), 1, 7).unwrap();
        assert!(r.relative_error < 1e-7, "{r:?}");
        let r = feq_check(c(-0.5, 0.0), &odd4(), 2, 9).unwrap();
        assert!(r.relative_error < 1e-7, "{r:?}");
        let r = feq_check(c(2.0, 1.0), &Character::trivial(1), 1, 3).unwrap();
        assert!(r.relative_error < 1e-8, "{r:?}");
        let even5 = Character::from_exponents(5, &[2]).unwrap();
        let r = feq_check(c(0.25, -4.0), &even5, 3, 8).unwrap();
        assert!(r.relative_error < 1e-7, "{r:?}");
    }

    #[test]
    fn conjugation_symmetry() {
        for chi in enumerate_characters(5).into_iter().filter(Character::is_primitive) {
            for (a, cc) in [(1, 3), (2, 7), (5, 12)] {
                let s = c(0.3, 4.5);
                let v = f_star(&TwistedZetaPoint::new(s, chi.clone(), a, cc).unwrap()).unwrap();
                let w = f_star(&TwistedZetaPoint::new(s.conj(), chi.conj(), -a, cc).unwrap()).unwrap();
                assert!((v.conj() - w).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn convexity_ratio_on_unit_line_is_moderate() {
        let r = convexity_ratio(c(1.0, 5.0), &quadratic3(), 1, 4, 0.1).unwrap();
        assert!(r.is_finite() && r < 10.0);
        let divides = convexity_ratio(c(0.0, 2.0), &Character::from_exponents(5, &[1]).unwrap(), 1, 5, 0.1).unwrap();
        let expected = f_star(&TwistedZetaPoint::new(c(0.0, 2.0), Character::from_exponents(5, &[1]).unwrap(), 1, 5).unwrap())
            .unwrap()
            .norm()
            / (5.0 + 5.0 * 2.0f64).powf(0.6);
        assert!((divides - expected).abs() < 1e-12);
        assert!(convexity_ratio(c(1.5, 0.0), &quadratic3(), 1, 4, 0.1).is_err());
    }
}
