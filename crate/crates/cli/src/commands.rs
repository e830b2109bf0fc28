use std::fmt::Write as _;
use std::time::Instant;

use clap::{Args, ValueEnum};
use hecke_moments::arith::RationalPhase;
use hecke_moments::characters::{enumerate_characters, gauss_sum, Character};
use hecke_moments::exp_sums;
use hecke_moments::moment::{self, MomentParams, MomentResult};
use hecke_moments::special::{self, ContourSpec};
use hecke_moments::twisted_zeta::{self, ConvexityGrid, TwistedZetaPoint};
use hecke_moments::verify;
use num_complex::Complex64;
use serde_json::{json, Map, Value};

use crate::input::{parse_complex, parse_list, resolve_character};
use crate::{CliError, Format, Outcome, OutputArgs};

const VERSION: &str = env!("CARGO_PKG_VERSION");

fn cx(z: Complex64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Invalid(msg.into())
}

/// `{tool, version, command, params, ...fields}`.
fn record(command: &str, params: Value, fields: Value) -> Value {
    let mut obj = Map::new();
    obj.insert("tool".into(), json!("hecke-moments"));
    obj.insert("version".into(), json!(VERSION));
    obj.insert("command".into(), json!(command));
    obj.insert("params".into(), params);
    if let Value::Object(f) = fields {
        obj.extend(f);
    }
    Value::Object(obj)
}

fn flatten(prefix: &str, v: &Value, out: &mut String) {
    match v {
        Value::Object(map) => {
            if let (Some(re), Some(im), 2) = (map.get("re"), map.get("im"), map.len()) {
                let (re, im) = (re.as_f64().unwrap_or(f64::NAN), im.as_f64().unwrap_or(f64::NAN));
                let sign = if im.is_sign_negative() { '-' } else { '+' };
                let _ = writeln!(out, "{prefix} = {re:?}{sign}{:?}i", im.abs());
                return;
            }
            for (k, x) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, out);
            }
        }
        other => {
            let _ = writeln!(out, "{prefix} = {other}");
        }
    }
}

/// JSON as pretty text, or `key = value` lines for the plain format.
fn render(v: &Value, format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => Ok(format!("{}\n", serde_json::to_string_pretty(v).map_err(|e| invalid(e.to_string()))?)),
        Format::Plain => {
            let mut s = String::new();
            flatten("", v, &mut s);
            Ok(s)
        }
        Format::Csv => Err(invalid("this command has no CSV output")),
    }
}

fn character_json(chi: &Character) -> Value {
    json!({ "q": chi.modulus(), "exponents": chi.exponents() })
}

#[derive(Debug, Clone, Args)]
pub struct CharsArgs {
    #[arg(long)]
    pub q: u64,
}

pub fn chars(args: &CharsArgs, out: &OutputArgs) -> Result<Outcome, CliError> {
    if args.q == 0 {
        return Err(invalid("q must be positive"));
    }
    let chars = enumerate_characters(args.q);
    let format = out.format.unwrap_or(Format::Plain);
    let rows: Vec<Value> = chars
        .iter()
        .map(|c| {
            json!({
                "label": c.to_string(),
                "exponents": c.exponents(),
                "parity": c.parity(),
                "conductor": c.conductor(),
                "primitive": c.is_primitive(),
            })
        })
        .collect();
    let text = match format {
        Format::Json => render(&record("chars", json!({ "q": args.q }), json!({ "characters": rows })), format)?,
        Format::Csv | Format::Plain => {
            let sep = if format == Format::Csv { "," } else { "  " };
            let mut s = ["label", "exponents", "parity", "conductor", "primitive"].join(sep) + "\n";
            for c in &chars {
                let exps: Vec<String> = c.exponents().iter().map(u64::to_string).collect();
                let label = c.to_string();
                let exps = exps.join(";");
                let fields =
                    [label, exps, c.parity().to_string(), c.conductor().to_string(), c.is_primitive().to_string()];
                s += &(fields.join(sep) + "\n");
            }
            s
        }
    };
    Ok(Outcome::ok(text))
}

#[derive(Debug, Clone, Args)]
pub struct CharacterArgs {
    /// Modulus of the character.
    #[arg(long, default_value_t = 3)]
    pub q: u64,
    /// Exponent vector, comma separated (see `chars`); defaults to the first primitive character.
    #[arg(long)]
    pub chi: Option<String>,
}

impl CharacterArgs {
    fn resolve(&self) -> Result<Character, CliError> {
        if self.q == 0 {
            return Err(invalid("q must be positive"));
        }
        let exps = self.chi.as_deref().map(parse_list::<u64>).transpose().map_err(invalid)?;
        resolve_character(self.q, exps.as_deref())
    }
}

pub fn gauss(args: &CharacterArgs, out: &OutputArgs) -> Result<Outcome, CliError> {
    let chi = args.resolve()?;
    let tau = gauss_sum(&chi).value;
    let v = record(
        "gauss",
        character_json(&chi),
        json!({ "value": cx(tau), "abs_squared": tau.norm_sqr(), "primitive": chi.is_primitive() }),
    );
    Ok(Outcome::ok(render(&v, out.format.unwrap_or(Format::Json))?))
}

#[derive(Debug, Clone, Args)]
pub struct KloostermanArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub m: i64,
    #[arg(long, allow_hyphen_values = true)]
    pub n: i64,
    #[arg(long)]
    pub c: u64,
}

pub fn kloosterman(args: &KloostermanArgs, out: &OutputArgs) -> Result<Outcome, CliError> {
    if args.c == 0 {
        return Err(invalid("c must be positive"));
    }
    let k = exp_sums::kloosterman(args.m, args.n, args.c);
    let v = record(
        "kloosterman",
        json!({ "m": args.m, "n": args.n, "c": args.c }),
        json!({
            "value": k.value,
            "imag_residual": k.imag_residual,
            "weil_ratio": exp_sums::weil_normalise(k.value, args.m, args.n, args.c),
        }),
    );
    Ok(Outcome::ok(render(&v, out.format.unwrap_or(Format::Json))?))
}

#[derive(Debug, Clone, Args)]
pub struct WeilSweepArgs {
    #[arg(long, default_value_t = 10)]
    pub m_max: i64,
    #[arg(long, default_value_t = 10)]
    pub n_max: i64,
    #[arg(long, default_value_t = 500)]
    pub c_max: u64,
}

pub fn weil_sweep(args: &WeilSweepArgs, out: &OutputArgs) -> Result<Outcome, CliError> {
    if args.m_max < 1 || args.n_max < 1 || args.c_max < 1 {
        return Err(invalid("m-max, n-max and c-max must be positive"));
    }
    let samples = exp_sums::weil_sweep(1..=args.m_max, 1..=args.n_max, args.c_max);
    let worst = samples.iter().max_by(|a, b| a.ratio.total_cmp(&b.ratio)).copied();
    let max_ratio = worst.map_or(0.0, |w| w.ratio);
    let text = match out.format.unwrap_or(Format::Json) {
        Format::Csv => {
            let mut s = String::from("m,n,c,value,ratio\n");
            for w in &samples {
                let _ = writeln!(s, "{},{},{},{},{}", w.m, w.n, w.c, w.value, w.ratio);
            }
            s
        }
        f => {
            let worst = worst.map(|w| json!({ "m": w.m, "n": w.n, "c": w.c, "value": w.value, "ratio": w.ratio }));
            let v = record(
                "weil-sweep",
                json!({ "m_max": args.m_max, "n_max": args.n_max, "c_max": args.c_max }),
                json!({ "count": samples.len(), "max_ratio": max_ratio, "worst": worst }),
            );
            render(&v, f)?
        }
    };
    let violation = (max_ratio > 1.0).then(|| format!("Weil ratio {max_ratio} exceeds 1"));
    Ok(Outcome { text, violation })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ZetaKind {
    Hurwitz,
    Periodic,
}

#[derive(Debug, Clone, Args)]
pub struct ZetaArgs {
    /// Point s as re+imi.
    #[arg(long, allow_hyphen_values = true)]
    pub s: String,
    /// Shift x: a decimal or a fraction a/b (fractions are exact; periodic needs one).
    #[arg(long, allow_hyphen_values = true)]
    pub x: String,
    #[arg(long, value_enum, default_value_t = ZetaKind::Hurwitz)]
    pub kind: ZetaKind,
}

fn parse_fraction(text: &str) -> Result<Option<(i64, u64)>, CliError> {
    let Some((a, b)) = text.split_once('/') else { return Ok(None) };
    let a: i64 = a.trim().parse().map_err(|_| invalid(format!("bad numerator in {text:?}")))?;
    let b: u64 = b.trim().parse().map_err(|_| invalid(format!("bad denominator in {text:?}")))?;
    if b == 0 {
        return Err(invalid("denominator must be positive"));
    }
    Ok(Some((a, b)))
}

pub fn zeta(args: &ZetaArgs, out: &OutputArgs) -> Result<Outcome, CliError> {
    let s = parse_complex(&args.s).map_err(invalid)?;
    let fraction = parse_fraction(&args.x)?;
    let value = match (args.kind, fraction) {
        (ZetaKind::Hurwitz, Some((a, b))) => special::hurwitz_zeta_rational(s, a, b)?,
        (ZetaKind::Hurwitz, None) => {
            let x: f64 = args.x.parse().map_err(|_| invalid(format!("bad shift {:?}", args.x)))?;
            special::hurwitz_zeta(s, x)?
        }
        (ZetaKind::Periodic, Some((a, b))) => special::periodic_zeta(s, &RationalPhase::new(a, b))?,
        (ZetaKind::Periodic, None) => return Err(invalid("the periodic zeta function needs x as a fraction a/b")),
    };
    let kind = match args.kind {
        ZetaKind::Hurwitz => "hurwitz",
        ZetaKind::Periodic => "periodic",
    };
    let v = record("zeta", json!({ "s": cx(s), "x": args.x, "kind": kind }), json!({ "value": cx(value) }));
    Ok(Outcome::ok(render(&v, out.format.unwrap_or(Format::Json))?))
}

#[derive(Debug, Clone, Args)]
pub struct BesselArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub x: f64,
}

pub fn besselj1(args: &BesselArgs, out: &OutputArgs) -> Result<Outcome, CliError> {
    if !args.x.is_finite() {
        return Err(invalid("x must be finite"));
    }
    let v = record("besselj1", json!({ "x": args.x }), json!({ "value": special::bessel_j1(args.x) }));
    Ok(Outcome::ok(render(&v, out.format.unwrap_or(Format::Json))?))
}

#[derive(Debug, Clone, Args)]
pub struct CutoffArgs {
    #[arg(long)]
    pub x: f64,
    /// Abscissa of the integration line; by default 2 for x >= 1 and -2 below.
    #[arg(long, allow_hyphen_values = true)]
    pub sigma: Option<f64>,
    #[arg(long, default_value_t = 12.0)]
    pub half_length: f64,
    #[arg(long, default_value_t = 2048)]
    pub nodes: usize,
}

pub fn cutoff(args: &CutoffArgs, out: &OutputArgs) -> Result<Outcome, CliError> {
    let default = ContourSpec::for_cutoff(args.x);
    let spec = ContourSpec::new(args.sigma.unwrap_or(default.sigma()), args.half_length, args.nodes)?;
    let quad = special::cutoff_v(args.x, &spec)?;
    let closed = special::cutoff_v_closed(args.x)?;
    let v = record(
        "cutoff",
        json!({ "x": args.x, "sigma": spec.sigma(), "half_length": spec.half_length(), "nodes": spec.nodes() }),
        json!({ "value": cx(quad), "closed_form": closed, "difference": (quad - closed).norm() }),
    );
    Ok(Outcome::ok(render(&v, out.format.unwrap_or(Format::Json))?))
}

#[derive(Debug, Clone, Args)]
pub struct FstarArgs {
    #[command(flatten)]
    pub character: CharacterArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub a: i64,
    #[arg(long)]
    pub c: u64,
    /// Point s as re+imi.
    #[arg(long, allow_hyphen_values = true)]
    pub s: String,
}

pub fn fstar(args: &FstarArgs, out: &OutputArgs) -> Result<Outcome, CliError> {
    let chi = args.character.resolve()?;
    let s = parse_complex(&args.s).map_err(invalid)?;
    let point = TwistedZetaPoint::new(s, chi.clone(), args.a, args.c)?;
    let value = twisted_zeta::f_star(&point)?;
    let v = record(
        "fstar",
        json!({ "character": character_json(&chi), "a": args.a, "c": args.c, "s": cx(s) }),
        json!({ "value": cx(value) }),
    );
    Ok(Outcome::ok(render(&v, out.format.unwrap_or(Format::Json))?))
}

#[derive(Debug, Clone, Args)]
pub struct FeqArgs {
    #[command(flatten)]
    pub point: FstarArgs,
    /// Largest acceptable relative error.
    #[arg(long, default_value_t = 1e-7)]
    pub tol: f64,
}

pub fn feq_check(args: &FeqArgs, out: &OutputArgs) -> Result<Outcome, CliError> {
    let p = &args.point;
    let chi = p.character.resolve()?;
    let s = parse_complex(&p.s).map_err(invalid)?;
    let r = twisted_zeta::feq_check(s, &chi, p.a, p.c)?;
    let v = record(
        "feq-check",
        json!({ "character": character_json(&chi), "a": p.a, "c": p.c, "s": cx(s), "tol": args.tol }),
        json!({
            "left": { "re": r.left[0], "im": r.left[1] },
            "right": { "re": r.right[0], "im": r.right[1] },
            "rel_err": r.relative_error,
        }),
    );
    let violation = (!(r.relative_error <= args.tol))
        .then(|| format!("relative error {} above {}", r.relative_error, args.tol));
    Ok(Outcome { text: render(&v, out.format.unwrap_or(Format::Json))?, violation })
}

#[derive(Debug, Clone, Args)]
pub struct ConvexityArgs {
    #[arg(long, default_value = "3,4,5")]
    pub moduli: String,
    #[arg(long, default_value = "2,3,5,7")]
    pub denominators: String,
    #[arg(long, default_value = "-0.5,0,0.5", allow_hyphen_values = true)]
    pub sigmas: String,
    #[arg(long, default_value_t = 20.0)]
    pub t_max: f64,
    #[arg(long, default_value_t = 9)]
    pub t_count: usize,
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,
}

pub fn convexity_sweep(args: &ConvexityArgs, out: &OutputArgs) -> Result<Outcome, CliError> {
    let grid = ConvexityGrid {
        moduli: parse_list(&args.moduli).map_err(invalid)?,
        denominators: parse_list(&args.denominators).map_err(invalid)?,
        sigmas: parse_list(&args.sigmas).map_err(invalid)?,
        t_max: args.t_max,
        t_count: args.t_count,
        eps: args.eps,
    };
    if grid.moduli.contains(&0) || grid.denominators.contains(&0) {
        return Err(invalid("moduli and denominators must be positive"));
    }
    let samples = twisted_zeta::convexity_sweep(&grid)?;
    let max_ratio = samples.iter().map(|s| s.ratio).fold(0.0, f64::max);
    let text = match out.format.unwrap_or(Format::Json) {
        Format::Csv => {
            let mut s = String::from("q,character,a,c,sigma,t,ratio\n");
            for x in &samples {
                let exps: Vec<String> = x.character.iter().map(u64::to_string).collect();
                let _ = writeln!(s, "{},{},{},{},{},{},{}", x.q, exps.join(";"), x.a, x.c, x.s[0], x.s[1], x.ratio);
            }
            s
        }
        f => {
            let v = record(
                "convexity-sweep",
                json!({
                    "moduli": grid.moduli, "denominators": grid.denominators, "sigmas": grid.sigmas,
                    "t_max": grid.t_max, "t_count": grid.t_count, "eps": grid.eps,
                }),
                json!({ "count": samples.len(), "max_ratio": max_ratio }),
            );
            render(&v, f)?
        }
    };
    Ok(Outcome::ok(text))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NuMode {
    /// Orthogonal basis of all cusp forms of level N.
    Full,
    /// Newforms of prime-power level N = p^nu, nu >= 2.
    Newform,
}

#[derive(Debug, Clone, Args)]
pub struct MomentSetup {
    #[command(flatten)]
    pub character: CharacterArgs,
    #[arg(long, default_value_t = 1)]
    pub m: u64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub alpha_re: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub alpha_im: f64,
    /// Cutoff Y as a multiple of (m N q T)^2.
    #[arg(long, alias = "Y-scale", default_value_t = 1.0)]
    pub y_scale: f64,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long, default_value_t = 16)]
    pub min_multiples: u64,
    #[arg(long, default_value_t = 64)]
    pub max_multiples: u64,
}

impl MomentSetup {
    fn params(&self, level: u64) -> Result<MomentParams, CliError> {
        let chi = self.character.resolve()?;
        if !(self.y_scale > 0.0) {
            return Err(invalid("Y-scale must be positive"));
        }
        Ok(MomentParams::new(self.m, Complex64::new(self.alpha_re, self.alpha_im), chi, level)
            .with_y_scale(self.y_scale)
            .with_tolerance(self.tol)
            .with_multiples(self.min_multiples, self.max_multiples))
    }
}

fn params_json(p: &MomentParams, y_scale: f64) -> Value {
    json!({
        "m": p.m,
        "alpha": cx(p.alpha),
        "character": character_json(&p.chi),
        "level": p.level,
        "Y": p.y,
        "y_scale": y_scale,
        "T": p.t(),
        "tolerance": p.tolerance,
        "re_alpha_window": p.re_alpha_window,
        "min_multiples": p.min_multiples,
        "max_multiples": p.max_multiples,
    })
}

fn result_json(r: &MomentResult) -> Value {
    json!({
        "main": cx(r.main),
        "kloosterman": cx(r.kloosterman),
        "total": cx(r.total),
        "tail_bound": r.tail_bound,
        "tail_estimate": r.tail_estimate,
        "theory_scale": r.theory_scale,
        "normalized_error": r.normalized_error(),
        "c_max": r.c_max,
        "multiples": r.multiples,
    })
}

#[derive(Debug, Clone, Args)]
pub struct MomentArgs {
    #[command(flatten)]
    pub setup: MomentSetup,
    #[arg(long)]
    pub level: u64,
    #[arg(long, value_enum, default_value_t = NuMode::Full)]
    pub nu_mode: NuMode,
}

pub fn moment(args: &MomentArgs, out: &OutputArgs) -> Result<Outcome, CliError> {
    let params = args.setup.params(args.level)?;
    let start = Instant::now();
    let r = match args.nu_mode {
        NuMode::Full => moment::moment_full_basis(&params)?,
        NuMode::Newform => moment::moment_newforms_prime_power(&params)?,
    };
    let runtime = start.elapsed().as_secs_f64();
    let mut p = params_json(&params, args.setup.y_scale);
    p["nu_mode"] = json!(if args.nu_mode == NuMode::Full { "full" } else { "newform" });
    let mut fields = result_json(&r);
    if !out.omit_timing {
        fields["runtime_s"] = json!(runtime);
    }
    Ok(Outcome::ok(render(&record("moment", p, fields), out.format.unwrap_or(Format::Json))?))
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub setup: MomentSetup,
    /// Comma-separated levels.
    #[arg(long, default_value = "101,211,401,809")]
    pub levels: String,
}

pub fn sweep(args: &SweepArgs, out: &OutputArgs) -> Result<Outcome, CliError> {
    let levels: Vec<u64> = parse_list(&args.levels).map_err(invalid)?;
    let first = *levels.first().ok_or_else(|| invalid("no levels given"))?;
    let base = args.setup.params(first)?;
    let rows = moment::error_decay_sweep(&base, &levels)?;
    let slope = moment::fit_slope(&rows);
    let runtime = |r: &moment::SweepRow| if out.omit_timing { "NA".to_string() } else { format!("{:.3}", r.runtime_s) };
    let text = match out.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut s = String::from("N,q,m,T,abs_error,normalized_error,runtime_s\n");
            for r in &rows {
                let _ = writeln!(s, "{},{},{},{},{},{},{}", r.level, r.q, r.m, r.t, r.abs_error, r.normalized_error, runtime(r));
            }
            match slope {
                Some(x) => {
                    let _ = writeln!(s, "# slope={x}");
                }
                None => s.push_str("# slope=NA\n"),
            }
            s
        }
        f => {
            let rows: Vec<Value> = rows
                .iter()
                .map(|r| {
                    let mut v = json!({
                        "N": r.level, "q": r.q, "m": r.m, "T": r.t,
                        "abs_error": r.abs_error, "normalized_error": r.normalized_error,
                    });
                    if !out.omit_timing {
                        v["runtime_s"] = json!(r.runtime_s);
                    }
                    v
                })
                .collect();
            let mut p = params_json(&base, args.setup.y_scale);
            p["levels"] = json!(levels);
            render(&record("sweep", p, json!({ "rows": rows, "slope": slope })), f)?
        }
    };
    Ok(Outcome::ok(text))
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Seed of the sampled suites.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Run only these criteria (comma separated); default all.
    #[arg(long)]
    pub criteria: Option<String>,
}

pub fn verify_all(args: &VerifyArgs, out: &OutputArgs) -> Result<Outcome, CliError> {
    let ids: Vec<u8> = match &args.criteria {
        Some(list) => parse_list(list).map_err(invalid)?,
        None => verify::CRITERIA.to_vec(),
    };
    let mut ctx = verify::VerifyContext::new(args.seed);
    let reports = ids.iter().map(|&id| verify::run_criterion(id, &mut ctx)).collect::<Result<Vec<_>, _>>()?;
    let failed: Vec<String> = reports.iter().filter(|r| !r.passed).map(|r| r.id.to_string()).collect();
    let text = match out.format.unwrap_or(Format::Plain) {
        Format::Plain => verify::render(args.seed, &reports),
        Format::Json => {
            let list: Vec<Value> = reports
                .iter()
                .map(|r| json!({ "id": r.id, "title": r.title, "passed": r.passed, "details": r.details }))
                .collect();
            render(&record("verify-all", json!({ "seed": args.seed, "criteria": ids }), json!({ "criteria": list })), Format::Json)?
        }
        Format::Csv => {
            let mut s = String::from("criterion,passed,title\n");
            for r in &reports {
                let _ = writeln!(s, "{},{},\"{}\"", r.id, r.passed, r.title);
            }
            s
        }
    };
    let violation = (!failed.is_empty()).then(|| format!("criteria {} failed", failed.join(", ")));
    Ok(Outcome { text, violation })
}
