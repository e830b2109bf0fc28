//! Seeded self-checks covering every module, with a deterministic text report.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{gcd, mod_inverse};
use crate::characters::{enumerate_characters, gauss_sum, Character};
use crate::error::{Error, Result};
use crate::exp_sums::{kloosterman, weil_sweep};
use crate::moment::{
    error_decay_sweep, fit_slope, moment_full_basis, moment_newforms_prime_power, t_sum_direct, ContourConfig,
    ContourEvaluator, MomentParams, SweepRow,
};
use crate::special::{
    bessel_j1_asymptotic, bessel_j1_series, cutoff_v, hurwitz_zeta, hurwitz_zeta_shifted, ContourSpec,
};
use crate::twisted_zeta::{f_star, feq_check, residue_at_one, TwistedZetaPoint};

pub const CRITERIA: [u8; 9] = [1, 2, 3, 4, 5, 6, 7, 8, 9];

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionReport {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub details: Vec<String>,
}

impl CriterionReport {
    fn new(id: u8, title: &'static str) -> Self {
        Self { id, title, passed: true, details: Vec::new() }
    }

    fn check(&mut self, ok: bool, detail: String) {
        self.passed &= ok;
        self.details.push(format!("{} {detail}", if ok { "ok  " } else { "FAIL" }));
    }

    fn note(&mut self, detail: String) {
        self.details.push(format!("     {detail}"));
    }

    /// `criterion N [PASS] title`.
    pub fn headline(&self) -> String {
        format!("criterion {} [{}] {}", self.id, if self.passed { "PASS" } else { "FAIL" }, self.title)
    }
}

/// Results shared between criteria within one run.
#[derive(Debug, Clone, Default)]
pub struct VerifyContext {
    seed: u64,
    sweep: Option<Vec<SweepRow>>,
}

impl VerifyContext {
    pub fn new(seed: u64) -> Self {
        Self { seed, sweep: None }
    }

    fn rng(&self, id: u8) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(id as u64))
    }

    /// The criterion-8 sweep, computed on first use.
    pub fn decay_sweep(&mut self) -> Result<&[SweepRow]> {
        if self.sweep.is_none() {
            let base = MomentParams::new(1, Complex64::new(0.0, 0.0), character(3, &[1])?, 101);
            self.sweep = Some(error_decay_sweep(&base, &DECAY_LEVELS)?);
        }
        Ok(self.sweep.as_deref().unwrap_or_default())
    }
}

pub const DECAY_LEVELS: [u64; 4] = [101, 211, 401, 809];

fn character(q: u64, exponents: &[u64]) -> Result<Character> {
    Character::from_exponents(q, exponents)
}

fn primitive_characters(q: u64) -> Vec<Character> {
    enumerate_characters(q).into_iter().filter(|c| c.is_primitive()).collect()
}

fn units(q: u64) -> impl Iterator<Item = u64> {
    (1..=q).filter(move |&a| gcd(a, q) == 1)
}

pub fn run_criterion(id: u8, ctx: &mut VerifyContext) -> Result<CriterionReport> {
    match id {
        1 => characters_suite(),
        2 => special_suite(),
        3 => functional_equation_suite(ctx),
        4 => residue_suite(),
        5 => kloosterman_suite(),
        6 => dual_path_suite(ctx),
        7 => cutoff_invariance_suite(),
        8 => decay_suite(ctx),
        9 => prime_power_suite(ctx),
        _ => Err(Error::InvalidParams(format!("no criterion {id}"))),
    }
}

pub fn run_all(seed: u64) -> Result<Vec<CriterionReport>> {
    let mut ctx = VerifyContext::new(seed);
    CRITERIA.iter().map(|&id| run_criterion(id, &mut ctx)).collect()
}

/// Plain-text report; contains no timings so equal seeds give equal bytes.
pub fn render(seed: u64, reports: &[CriterionReport]) -> String {
    let mut out = format!("verify-all seed={seed}\n");
    for r in reports {
        out.push_str(&r.headline());
        out.push('\n');
        for d in &r.details {
            out.push_str("    ");
            out.push_str(d);
            out.push('\n');
        }
    }
    let passed = reports.iter().filter(|r| r.passed).count();
    out.push_str(&format!("summary: {passed}/{} criteria passed\n", reports.len()));
    out
}

fn characters_suite() -> Result<CriterionReport> {
    let mut rep = CriterionReport::new(1, "characters: orthogonality, multiplicativity, Gauss sums");
    let (mut orth, mut dual, mut mult) = (0.0f64, 0.0f64, 0.0f64);
    for q in 1..=36u64 {
        let chars = enumerate_characters(q);
        let tables: Vec<Vec<Complex64>> = chars.iter().map(|c| c.value_table()).collect();
        let phi = units(q).count() as f64;
        for (i, ti) in tables.iter().enumerate() {
            for (j, tj) in tables.iter().enumerate() {
                let s: Complex64 = ti.iter().zip(tj).map(|(x, y)| x * y.conj()).sum();
                let want = if i == j { phi } else { 0.0 };
                orth = orth.max((s - want).norm());
            }
            for a in 0..q {
                for b in 0..q {
                    let lhs = ti[((a * b) % q) as usize];
                    mult = mult.max((lhs - ti[a as usize] * ti[b as usize]).norm());
                }
            }
        }
        for a in units(q) {
            for b in units(q) {
                let s: Complex64 = tables.iter().map(|t| t[(a % q) as usize] * t[(b % q) as usize].conj()).sum();
                let want = if a % q == b % q { phi } else { 0.0 };
                dual = dual.max((s - want).norm());
            }
        }
    }
    rep.check(orth < 1e-10, format!("q <= 36 row orthogonality max error {orth:.2e}"));
    rep.check(dual < 1e-10, format!("q <= 36 column orthogonality max error {dual:.2e}"));
    rep.check(mult < 1e-10, format!("q <= 36 multiplicativity max error {mult:.2e}"));

    let (mut modulus, mut pair, mut count) = (0.0f64, 0.0f64, 0usize);
    for q in 1..=50u64 {
        for chi in primitive_characters(q) {
            let tau = gauss_sum(&chi).value;
            let tau_bar = gauss_sum(&chi.conj()).value;
            modulus = modulus.max((tau.norm_sqr() - q as f64).abs());
            pair = pair.max((tau * tau_bar - chi.parity() as f64 * q as f64).norm());
            count += 1;
        }
    }
    rep.check(modulus < 1e-9, format!("{count} primitive characters, q <= 50: max ||tau|^2 - q| {modulus:.2e}"));
    rep.check(pair < 1e-9, format!("max |tau(chi) tau(conj chi) - chi(-1) q| {pair:.2e}"));
    Ok(rep)
}

fn special_suite() -> Result<CriterionReport> {
    let mut rep = CriterionReport::new(2, "special functions: Hurwitz zeta, Bessel J1, cutoff V");
    let z2 = hurwitz_zeta(Complex64::new(2.0, 0.0), 1.0)?;
    let err = (z2 - PI * PI / 6.0).norm();
    rep.check(err < 1e-9, format!("zeta(2, 1) - pi^2/6 = {err:.2e}"));

    let points = [Complex64::new(2.0, 0.0), Complex64::new(0.5, 14.0), Complex64::new(-1.5, 3.0), Complex64::new(3.0, -7.0)];
    let mut worst = 0.0f64;
    for &s in &points {
        for c in [2u64, 3, 5] {
            for x in [0.2, 0.55, 1.0] {
                let mut lhs = Complex64::new(0.0, 0.0);
                for k in 0..c {
                    lhs += hurwitz_zeta_shifted(s, (x + k as f64) / c as f64)?;
                }
                let rhs = (s * (c as f64).ln()).exp() * hurwitz_zeta_shifted(s, x)?;
                worst = worst.max((lhs - rhs).norm() / rhs.norm().max(1.0));
            }
        }
    }
    rep.check(worst < 1e-9, format!("multiplication formula c in {{2,3,5}}: max relative error {worst:.2e}"));

    let branch = (bessel_j1_series(12.0) - bessel_j1_asymptotic(12.0)).abs();
    rep.check(branch < 1e-9, format!("J1 series vs asymptotic at x = 12: {branch:.2e}"));

    let mut shift = 0.0f64;
    for x in [0.1, 0.3, 1.0, 3.0, 10.0] {
        let right = cutoff_v(x, &ContourSpec::new(1.5, 12.0, 2048)?)?;
        let left = cutoff_v(x, &ContourSpec::new(-1.5, 12.0, 2048)?)?;
        let mid = cutoff_v(x, &ContourSpec::new(0.7, 12.0, 2048)?)?;
        shift = shift.max((right - left).norm()).max((right - mid).norm());
    }
    rep.check(shift < 1e-9, format!("V line-shift independence (Re s = 1.5, 0.7, -1.5): {shift:.2e}"));
    let v = cutoff_v(1e-6, &ContourSpec::for_cutoff(1e-6))?;
    let dev = (v - 1.0).norm();
    rep.check(dev < 1e-10, format!("|V(1e-6) - 1| = {dev:.2e}"));
    Ok(rep)
}

fn sample_s(rng: &mut ChaCha8Rng) -> Complex64 {
    loop {
        let s = Complex64::new(rng.gen_range(-0.5..1.5), rng.gen_range(-15.0..15.0));
        if s.norm() > 0.25 && (s - 1.0).norm() > 0.25 {
            return s;
        }
    }
}

fn functional_equation_suite(ctx: &VerifyContext) -> Result<CriterionReport> {
    let mut rep = CriterionReport::new(3, "functional equation of the twisted periodic zeta function");
    let mut rng = ctx.rng(3);
    let (mut worst, mut checks) = (0.0f64, 0usize);
    let mut worst_at = String::new();
    for q in [3u64, 4, 5, 7] {
        let chars = primitive_characters(q);
        for c in (2..=12u64).filter(|&c| c != q) {
            let samples: Vec<Complex64> = (0..20).map(|_| sample_s(&mut rng)).collect();
            for chi in &chars {
                for a in units(c) {
                    for &s in &samples {
                        let r = feq_check(s, chi, a as i64, c)?;
                        checks += 1;
                        if r.relative_error > worst {
                            worst = r.relative_error;
                            worst_at = format!("{chi}, a/c = {a}/{c}, s = {:.4}{:+.4}i", s.re, s.im);
                        }
                    }
                }
            }
        }
    }
    rep.check(worst < 1e-7, format!("{checks} checks, max relative error {worst:.2e} ({worst_at})"));
    Ok(rep)
}

fn residue_suite() -> Result<CriterionReport> {
    let mut rep = CriterionReport::new(4, "pole of F* at s = 1");
    let h = 1e-4;
    let mut worst = 0.0f64;
    let mut count = 0;
    for q in [3u64, 4, 5, 7, 8] {
        for chi in primitive_characters(q) {
            for a in units(q) {
                let at = |s: Complex64| -> Result<Complex64> {
                    f_star(&TwistedZetaPoint::new(s, chi.clone(), a as i64, q)?)
                };
                // The symmetric difference cancels the O(h) term of (s - 1) F*(s).
                let extracted = (at(Complex64::new(1.0 + h, 0.0))? - at(Complex64::new(1.0 - h, 0.0))?) * (h / 2.0);
                let want = chi.conj().evaluate(a as i64) * gauss_sum(&chi).value / q as f64;
                worst = worst.max((extracted - want).norm());
                worst = worst.max((residue_at_one(&chi, a as i64, q) - want).norm());
                count += 1;
            }
        }
    }
    rep.check(worst < 1e-6, format!("c = q, {count} cases: max |residue - conj(chi)(a) tau(chi)/q| {worst:.2e}"));

    let mut growth = 0.0f64;
    let mut cases = 0;
    for (q, c) in [(4u64, 2u64), (8, 2), (8, 4), (9, 3)] {
        for chi in primitive_characters(q) {
            for a in units(c) {
                let mut values = Vec::new();
                for h in [1e-2, 1e-4, 1e-6] {
                    let p = TwistedZetaPoint::new(Complex64::new(1.0 + h, 0.0), chi.clone(), a as i64, c)?;
                    values.push(f_star(&p)?.norm());
                }
                let hi = values.iter().cloned().fold(0.0, f64::max);
                let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
                growth = growth.max(hi / lo.max(1e-300));
                cases += 1;
            }
        }
    }
    rep.check(
        growth < 1.5,
        format!("c | q, c < q, {cases} cases: max ratio of |F*(1 + h)| over h = 1e-2, 1e-4, 1e-6 is {growth:.4}"),
    );
    Ok(rep)
}

fn kloosterman_suite() -> Result<CriterionReport> {
    let mut rep = CriterionReport::new(5, "Kloosterman sums: Weil bound and twisted multiplicativity");
    let samples = weil_sweep(1..=10, 1..=10, 500);
    let worst = samples.iter().map(|s| s.ratio).fold(0.0, f64::max);
    rep.check(worst <= 1.0, format!("{} sums, c <= 500, 1 <= m, n <= 10: max Weil ratio {worst:.6}", samples.len()));

    let mut err = 0.0f64;
    let mut pairs = 0;
    for c1 in 2u64..=100 {
        for c2 in 2..=(200 / c1) {
            if gcd(c1, c2) != 1 {
                continue;
            }
            let i2 = mod_inverse(c2 as i64, c1)? as i64;
            let i1 = mod_inverse(c1 as i64, c2)? as i64;
            for (m, n) in [(1i64, 1i64), (2, 7), (5, 0), (3, 3)] {
                let whole = kloosterman(m, n, c1 * c2).value;
                let split = kloosterman(m * i2, n * i2, c1).value * kloosterman(m * i1, n * i1, c2).value;
                err = err.max((whole - split).abs());
            }
            pairs += 1;
        }
    }
    rep.check(err < 1e-9, format!("{pairs} coprime pairs with c1 c2 <= 200: max error {err:.2e}"));
    Ok(rep)
}

fn random_character(rng: &mut ChaCha8Rng, q: u64) -> Character {
    primitive_characters(q).choose(rng).cloned().unwrap_or_else(|| Character::trivial(q))
}

fn dual_path_suite(ctx: &VerifyContext) -> Result<CriterionReport> {
    let mut rep = CriterionReport::new(6, "T-sum: direct summation vs contour integral");
    let mut rng = ctx.rng(6);
    let alphas = [Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.3), Complex64::new(0.0, -0.5), Complex64::new(0.1, 0.2)];
    let (mut worst, mut count) = (0.0f64, 0usize);
    let mut worst_at = String::new();
    for group in 0..10 {
        let q = *[1u64, 3, 4, 5].choose(&mut rng).unwrap_or(&3);
        let chi = random_character(&mut rng, q);
        let c = loop {
            let c = rng.gen_range(5..=30u64);
            if c != q {
                break c;
            }
        };
        let alpha = *alphas.choose(&mut rng).unwrap_or(&alphas[0]);
        let tuples: Vec<(i64, u64, f64)> = (0..5)
            .map(|a_count| {
                let a = loop {
                    let a = rng.gen_range(1..c);
                    if gcd(a, c) == 1 {
                        break a as i64;
                    }
                };
                let (m, y) = if group == 0 && a_count == 0 {
                    (1, 1e4)
                } else {
                    (rng.gen_range(1..=4u64), *[50.0, 100.0, 300.0, 1000.0].choose(&mut rng).unwrap_or(&100.0))
                };
                (a, m, y)
            })
            .collect();
        let reach = tuples.iter().map(|&(_, m, y)| m as f64 * y).fold(0.0, f64::max);
        let ev = ContourEvaluator::new(&chi, c, alpha, ContourConfig::for_sum(c, reach, 1.0))?;
        for (a, m, y) in tuples {
            let params = MomentParams::new(m, alpha, chi.clone(), 2).with_y(y).with_tolerance(1e-7);
            let direct = t_sum_direct(a, c, Ratio::from_integer(m), &params)?;
            let contour = ev.t_sum(a, Ratio::from_integer(m), y)?;
            let err = (direct - contour).norm() / direct.norm().max(1.0);
            count += 1;
            if err >= worst {
                worst = err;
                worst_at = format!("{chi}, c = {c}, a = {a}, m = {m}, Y = {y}, alpha = {alpha}");
            }
        }
    }
    rep.check(worst < 1e-6, format!("{count} tuples, max |direct - contour| / max(1, |T|) = {worst:.2e} ({worst_at})"));
    Ok(rep)
}

fn cutoff_invariance_suite() -> Result<CriterionReport> {
    let mut rep = CriterionReport::new(7, "moment: independence of the cutoff length Y");
    let cases: [(u64, u64, &[u64], u64, Complex64); 6] = [
        (11, 3, &[1], 1, Complex64::new(0.0, 0.0)),
        (13, 5, &[1], 2, Complex64::new(0.0, 1.0)),
        (23, 4, &[1], 3, Complex64::new(0.0, 0.0)),
        (29, 5, &[2], 1, Complex64::new(0.0, 1.0)),
        (37, 3, &[1], 2, Complex64::new(0.0, 1.0)),
        (50, 3, &[1], 3, Complex64::new(0.0, 0.0)),
    ];
    for (level, q, exps, m, alpha) in cases {
        let params = MomentParams::new(m, alpha, character(q, exps)?, level);
        let r1 = moment_full_basis(&params)?;
        let r4 = moment_full_basis(&params.clone().with_y(4.0 * params.y))?;
        let diff = (r1.total - r4.total).norm();
        let tail = r1.tail_estimate.max(r4.tail_estimate);
        let limit = (10.0 * tail).max(1e-6);
        rep.check(
            diff < limit,
            format!(
                "N = {level}, q = {q}, m = {m}, alpha = {alpha}: |total(Y) - total(4Y)| = {diff:.2e}, tail estimate {tail:.2e}, Weil tail bound {:.2e}",
                r1.tail_bound.max(r4.tail_bound)
            ),
        );
    }
    Ok(rep)
}

fn decay_suite(ctx: &mut VerifyContext) -> Result<CriterionReport> {
    let mut rep = CriterionReport::new(8, "moment: decay of the error term in N");
    let rows = ctx.decay_sweep()?.to_vec();
    for r in &rows {
        rep.note(format!(
            "N = {}: |total - main| = {:.4e}, normalized {:.3}",
            r.level, r.abs_error, r.normalized_error
        ));
    }
    let decreasing = rows.windows(2).all(|w| w[1].abs_error < w[0].abs_error);
    rep.check(decreasing, "error decreases along N = 101, 211, 401, 809".into());
    let slope = fit_slope(&rows).unwrap_or(f64::NAN);
    rep.check(slope <= -0.8, format!("log-log slope {slope:.3}"));
    let spread = |xs: &[f64]| {
        let hi = xs.iter().cloned().fold(0.0, f64::max);
        let lo = xs.iter().cloned().fold(f64::INFINITY, f64::min);
        hi / lo
    };
    let across_n: Vec<f64> = rows.iter().map(|r| r.normalized_error).collect();
    let s = spread(&across_n);
    rep.check(s <= 10.0, format!("normalized error spread across N: factor {s:.2}"));

    let chi = character(3, &[1])?;
    let mut variants = vec![(1u64, Complex64::new(0.0, 0.0), across_n[0])];
    for (m, alpha) in [(1u64, Complex64::new(0.0, 5.0)), (2, Complex64::new(0.0, 0.0)), (3, Complex64::new(0.0, 0.0))] {
        let r = moment_full_basis(&MomentParams::new(m, alpha, chi.clone(), DECAY_LEVELS[0]))?;
        variants.push((m, alpha, r.normalized_error()));
    }
    for (m, alpha, e) in &variants {
        rep.note(format!("N = {}, m = {m}, alpha = {alpha}: normalized {e:.3}", DECAY_LEVELS[0]));
    }
    let s = spread(&variants.iter().map(|v| v.2).collect::<Vec<_>>());
    rep.check(s <= 10.0, format!("normalized error spread over alpha in {{0, 5i}}, m in {{1, 2, 3}}: factor {s:.2}"));
    Ok(rep)
}

fn prime_power_suite(ctx: &mut VerifyContext) -> Result<CriterionReport> {
    let mut rep = CriterionReport::new(9, "moment over newforms of prime-power level");
    for (level, q, m) in [(9u64, 5u64, 3u64), (8, 3, 2), (27, 5, 6), (25, 3, 5), (16, 5, 4)] {
        let params = MomentParams::new(m, Complex64::new(0.0, 0.0), character(q, &[1])?, level);
        let r = moment_newforms_prime_power(&params)?;
        let zero = Complex64::new(0.0, 0.0);
        rep.check(
            r.total == zero && r.main == zero,
            format!("N = {level}, m = {m}: total is exactly {}", r.total),
        );
    }
    let c_emp = ctx.decay_sweep()?.iter().map(|r| r.normalized_error).fold(0.0, f64::max);
    rep.note(format!("empirical constant from the decay sweep: {c_emp:.3}"));
    for (level, q, expected) in [(9u64, 5u64, 5.0 / 8.0), (8, 3, 0.5)] {
        let params = MomentParams::new(1, Complex64::new(0.0, 0.0), character(q, &[1])?, level);
        let r = moment_newforms_prime_power(&params)?;
        let dev = (r.total - r.main).norm();
        let scale = c_emp * r.theory_scale;
        rep.check(
            (r.main.re - expected).abs() < 1e-3 && dev <= scale,
            format!(
                "N = {level}, q = {q}: total {:.6}, main {:.6} (expected {expected}), |total - main| = {dev:.4} <= {scale:.4}",
                r.total, r.main
            ),
        );
    }
    Ok(rep)
}
