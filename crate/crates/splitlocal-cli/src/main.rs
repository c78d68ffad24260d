mod config;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use splitlocal::coeffs::{CoeffElement, Mono};
use splitlocal::lemma_verify::{verify_lemma, Mode, VerifyOptions};
use splitlocal::lfactors::{const_cv, lfactor_bc_pi2, vanish_order_t};
use splitlocal::padic_geometry::PadicParams;
use splitlocal::repcoeff::SphericalModel;
use splitlocal::schwartz::{locality_threshold, sb_asymptotic_constants, BoxSet, SchwartzFn};
use splitlocal::zeta::{
    doubled_iv, local_period, truncated_gl1, truncated_gl2, truncated_iv, unramified_identity, zeta_gl1, zeta_gl2,
    NumericSummand, SPoint,
};

use config::{parse_ratio, ConfigError, DmSource, RawConfig, SessionConfig};
use report::{Document, Rational, Value, Verdict};

#[derive(Parser)]
#[command(name = "splitlocal", version, about = "Exact split-place local zeta integrals, L-factors and periods")]
struct Cli {
    /// Add wall-clock timing to the report (breaks byte-for-byte reproducibility).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct ParamArgs {
    /// Session file (key = value, repeated `box` records).
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    q: Option<u64>,
    /// Root-of-unity order: c, α, β are powers of ζ_N.
    #[arg(long = "N")]
    n: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    c_exp: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    alpha_exp: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    beta_exp: Option<i64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Pieces,
    Subpieces,
}

#[derive(Clone, Copy, ValueEnum, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
enum Integral {
    Gl1,
    Gl2,
    Iv,
}

#[derive(Subcommand)]
enum Command {
    /// Certify the pole orders of the difference-of-heights pieces.
    CheckLemma {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        /// Skip the un-subtracted control run.
        #[arg(long)]
        no_negative_control: bool,
        /// Also check that the pieces add up to a single-pass sum.
        #[arg(long)]
        sum_identity: bool,
        /// Threshold to use instead of max(l1, 1).
        #[arg(long)]
        l1: Option<i64>,
    },
    /// Compare the zeta integral of the unit lattice with its Euler-factor quotient.
    CheckUnramified {
        #[command(flatten)]
        params: ParamArgs,
        /// Rank (1 or 2); both when omitted.
        #[arg(long)]
        m: Option<u32>,
    },
    /// Closed form of a zeta integral.
    EvalZeta {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_enum)]
        integral: Option<Integral>,
        /// Height enters as |Δ|^{s + k/2}.
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        shift: i64,
        /// Also evaluate at these real t (comma separated).
        #[arg(long, value_delimiter = ',')]
        t0: Vec<f64>,
    },
    /// The regularised local period.
    LocalPeriod {
        #[command(flatten)]
        params: ParamArgs,
    },
    /// c_v, pole orders and, for a configured φ, the stabilisation constants.
    Constants {
        #[command(flatten)]
        params: ParamArgs,
        /// Use the trivial Satake lists {1, 1} at s = 1/2 and s = 3/2.
        #[arg(long)]
        all_satake_one: bool,
    },
    /// Partial sums of a zeta integral against its closed form.
    TruncationCompare {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_enum)]
        integral: Option<Integral>,
        #[arg(long, value_delimiter = ',')]
        t0: Vec<f64>,
        #[arg(long, value_delimiter = ',')]
        radii: Vec<i64>,
        #[arg(long)]
        tol: Option<f64>,
    },
}

enum Failure {
    Input(String),
    Engine(splitlocal::Error),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Input(format!("config {e}"))
    }
}

impl From<splitlocal::Error> for Failure {
    fn from(e: splitlocal::Error) -> Self {
        match e {
            splitlocal::Error::Invalid(m) => Failure::Input(m),
            e => Failure::Engine(e),
        }
    }
}

type Out = Result<(String, Verdict), Failure>;

fn load(args: &ParamArgs) -> Result<SessionConfig, Failure> {
    let mut raw = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            RawConfig::parse(&text)?
        }
        None => RawConfig::default(),
    };
    if let Some(q) = args.q {
        raw.set("q", q);
    }
    if let Some(n) = args.n {
        raw.set("N", n);
    }
    if let Some(c) = args.c_exp {
        raw.set("c_exp", c);
    }
    if let Some(a) = args.alpha_exp {
        raw.set("alpha_exp", a);
    }
    if let Some(b) = args.beta_exp {
        raw.set("beta_exp", b);
    }
    Ok(raw.validate()?)
}

fn params(cfg: &SessionConfig) -> Result<PadicParams, Failure> {
    Ok(PadicParams::with_beta(cfg.q, cfg.n, cfg.c_exp, cfg.alpha_exp, cfg.beta_exp)?)
}

fn model(cfg: &SessionConfig, p: &PadicParams) -> Result<SphericalModel, Failure> {
    let mut m = SphericalModel::new(p)?;
    if let DmSource::Explicit { c1, c2 } = &cfg.dm_source {
        let s = p.session();
        m.c1 = CoeffElement::from_rational(s, &parse_ratio(c1).expect("validated"));
        m.c2 = CoeffElement::from_rational(s, &parse_ratio(c2).expect("validated"));
        m.degenerate = false;
    }
    Ok(m)
}

/// φ from the box records, or the unit lattice when none are given.
fn schwartz(cfg: &SessionConfig, p: &PadicParams, dim: usize) -> Result<SchwartzFn, Failure> {
    let s = p.session();
    if cfg.boxes.is_empty() {
        return Ok(SchwartzFn::unit_lattice(dim, s));
    }
    if cfg.dim() != Some(dim) {
        return Err(Failure::Input(format!("config box: this command needs {dim} coordinates per box")));
    }
    let mut phi = SchwartzFn::zero(dim);
    for b in &cfg.boxes {
        let boxes = b.parsed.iter().map(|&(ball, k)| if ball { BoxSet::ball(k) } else { BoxSet::shell(k) }).collect();
        let r = parse_ratio(&b.coef.ratio).expect("validated");
        let coef = CoeffElement::zeta_pow(s, b.coef.zeta).scale(&r);
        phi = phi.plus(boxes, coef)?;
    }
    Ok(phi)
}

fn satake(p: &PadicParams, exps: &Option<Vec<i64>>, default: Vec<Mono>) -> Vec<Mono> {
    match exps {
        Some(v) => v.iter().map(|&k| Mono::zeta(p.ctx(), k)).collect(),
        None => default,
    }
}

fn emit<C: Serialize, R: Serialize>(command: &'static str, config: C, result: R, verdict: Verdict, start: Option<Instant>) -> String {
    let doc = Document {
        schema: report::SCHEMA,
        command,
        config,
        result,
        verdict,
        timing_ms: start.map(|t| t.elapsed().as_millis()),
    };
    serde_json::to_string_pretty(&doc).expect("report is serialisable")
}

fn default_integral(cfg: &SessionConfig, given: Option<Integral>) -> Integral {
    given.unwrap_or(match cfg.dim() {
        Some(1) => Integral::Gl1,
        Some(2) => Integral::Gl2,
        _ => Integral::Iv,
    })
}

fn dim_of(i: Integral) -> usize {
    match i {
        Integral::Gl1 => 1,
        Integral::Gl2 => 2,
        Integral::Iv => 3,
    }
}

fn closed_form(i: Integral, p: &PadicParams, phi: &SchwartzFn, model: &SphericalModel, at: SPoint) -> Result<splitlocal::coeffs::RatFunc, Failure> {
    Ok(match i {
        Integral::Gl1 => zeta_gl1(p, phi, at)?.closed_form,
        Integral::Gl2 => zeta_gl2(p, phi, model, at)?.closed_form,
        Integral::Iv => doubled_iv(p, phi, model)?.closed_form,
    })
}

fn run(cli: Cli) -> Out {
    let start = cli.timing.then(Instant::now);
    match cli.command {
        Command::CheckLemma { params: a, mode, no_negative_control, sum_identity, l1 } => {
            let cfg = load(&a)?;
            let p = params(&cfg)?;
            let m = model(&cfg, &p)?;
            let phi = schwartz(&cfg, &p, 3)?;
            let mode = match (mode, cfg.mode.as_deref()) {
                (Some(ModeArg::Subpieces), _) | (None, Some("subpieces")) => Mode::Subpieces,
                _ => Mode::Pieces,
            };
            let opts = VerifyOptions { mode, negative_control: !no_negative_control, sum_identity, l1_override: l1 };
            let r = verify_lemma(&p, &phi, &m, opts)?;
            // the negative control and the sum identity are part of the verdict when requested
            let ok = r.overall && (no_negative_control || r.negative_control_fails) && r.piece_sum_identity != Some(false);
            let body = report::Lemma::from(&r);
            Ok((emit("check-lemma", &cfg, body, Verdict::from_bool(ok), start), Verdict::from_bool(ok)))
        }
        Command::CheckUnramified { params: a, m } => {
            let cfg = load(&a)?;
            let p = params(&cfg)?;
            let model = model(&cfg, &p)?;
            #[derive(Serialize)]
            struct Row {
                m: u32,
                engine: Rational,
                expected: Rational,
                equal: bool,
            }
            let ranks = match m {
                Some(k) => vec![k],
                None => vec![1, 2],
            };
            let mut rows = Vec::new();
            for k in ranks {
                let (z, e) = unramified_identity(&p, &model, k)?;
                rows.push(Row { m: k, equal: z.equals(&e), engine: (&z).into(), expected: (&e).into() });
            }
            let v = Verdict::from_bool(rows.iter().all(|r| r.equal));
            Ok((emit("check-unramified", &cfg, rows, v, start), v))
        }
        Command::EvalZeta { params: a, integral, shift, t0 } => {
            let cfg = load(&a)?;
            let p = params(&cfg)?;
            let model = model(&cfg, &p)?;
            let which = default_integral(&cfg, integral);
            let phi = schwartz(&cfg, &p, dim_of(which))?;
            let f = closed_form(which, &p, &phi, &model, SPoint::Shift(shift))?;
            #[derive(Serialize)]
            struct Body {
                integral: Integral,
                shift: i64,
                closed_form: Rational,
                values: Vec<(f64, [f64; 2])>,
            }
            let mut values = Vec::new();
            for t in t0 {
                let v = f.eval_complex(Complex64::new(t, 0.0))?;
                values.push((t, [v.re, v.im]));
            }
            let body = Body { integral: which, shift, closed_form: (&f).into(), values };
            Ok((emit("eval-zeta", &cfg, body, Verdict::Info, start), Verdict::Info))
        }
        Command::LocalPeriod { params: a } => {
            let cfg = load(&a)?;
            let p = params(&cfg)?;
            let model = model(&cfg, &p)?;
            let phi = schwartz(&cfg, &p, 3)?;
            let ac = p.alpha().mul(&p.c());
            let half = satake(&p, &cfg.satake_half, vec![ac.clone(), ac.inv()]);
            let three = satake(&p, &cfg.satake_three_half, vec![Mono::one(p.ctx()); 2]);
            let v = local_period(&p, &phi, &model, &half, &three)?;
            let cv = const_cv(&p, &half, &three)?;
            let unramified = cfg.boxes.is_empty() && cfg.satake_half.is_none() && matches!(cfg.dm_source, DmSource::Macdonald);
            #[derive(Serialize)]
            struct Body {
                period: Value,
                c_v: Value,
                /// only present for unramified data, where the period must be 1
                #[serde(skip_serializing_if = "Option::is_none")]
                equals_one: Option<bool>,
            }
            let equals_one = unramified.then(|| v.is_one());
            let verdict = match equals_one {
                Some(b) => Verdict::from_bool(b),
                None => Verdict::Info,
            };
            let body = Body { period: (&v).into(), c_v: (&cv).into(), equals_one };
            Ok((emit("local-period", &cfg, body, verdict, start), verdict))
        }
        Command::Constants { params: a, all_satake_one } => {
            let mut cfg = load(&a)?;
            if all_satake_one {
                cfg.satake_half = Some(vec![0, 0]);
                cfg.satake_three_half = Some(vec![0, 0]);
            }
            let p = params(&cfg)?;
            let ac = p.alpha().mul(&p.c());
            let half = satake(&p, &cfg.satake_half, vec![ac.clone(), ac.inv()]);
            let three = satake(&p, &cfg.satake_three_half, vec![Mono::one(p.ctx()); 2]);
            let cv = const_cv(&p, &half, &three)?;
            #[derive(Serialize)]
            struct Stab {
                l1: i64,
                /// k^i_j, rows i = 1, 2
                k: Vec<Vec<String>>,
            }
            #[derive(Serialize)]
            struct Body {
                c_v: Value,
                t_value: i64,
                bc_pole_order: String,
                #[serde(skip_serializing_if = "Option::is_none")]
                stabilisation: Option<Stab>,
            }
            let stabilisation = if cfg.dim() == Some(3) {
                let phi = schwartz(&cfg, &p, 3)?;
                let k = sb_asymptotic_constants(&phi)?;
                Some(Stab { l1: locality_threshold(&phi), k: k.k.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect() })
            } else {
                None
            };
            let pole = match lfactor_bc_pi2(&p).order_at_one() {
                splitlocal::coeffs::Order::Finite(k) => (-k).to_string(),
                splitlocal::coeffs::Order::Infinity => "none".into(),
            };
            let body = Body { c_v: (&cv).into(), t_value: vanish_order_t(&p), bc_pole_order: pole, stabilisation };
            Ok((emit("constants", &cfg, body, Verdict::Info, start), Verdict::Info))
        }
        Command::TruncationCompare { params: a, integral, t0, radii, tol } => {
            let cfg = load(&a)?;
            let p = params(&cfg)?;
            let model = model(&cfg, &p)?;
            let which = default_integral(&cfg, integral);
            let phi = schwartz(&cfg, &p, dim_of(which))?;
            let t0 = if !t0.is_empty() { t0 } else { cfg.t0.map_or(vec![0.3, 0.5], |t| vec![t]) };
            let radii = if !radii.is_empty() { radii } else { cfg.radii.clone().unwrap_or(vec![10, 20, 40]) };
            let tol = tol.or(cfg.tolerance).unwrap_or(1e-9);
            if t0.iter().any(|&t| !(t > 0.0 && t < 1.0)) || radii.iter().any(|&r| r < 0) || !(tol > 0.0) {
                return Err(Failure::Input("t0 must lie in (0, 1), radii be non-negative and tol positive".into()));
            }
            let f = closed_form(which, &p, &phi, &model, SPoint::Shift(0))?;
            let max_r = *radii.iter().max().unwrap_or(&0);
            let ns = NumericSummand::new(&p, &phi, &model, max_r.max(0) as u64);
            #[derive(Serialize)]
            struct Row {
                t0: f64,
                closed: [f64; 2],
                partial: Vec<(i64, [f64; 2], f64)>,
                pass: bool,
            }
            let mut rows = Vec::new();
            for &t in &t0 {
                let v = f.eval_complex(Complex64::new(t, 0.0))?;
                let mut partial = Vec::new();
                for &r in &radii {
                    let s = match which {
                        Integral::Gl1 => truncated_gl1(&ns, SPoint::Shift(0), t, r),
                        Integral::Gl2 => truncated_gl2(&ns, SPoint::Shift(0), t, r),
                        Integral::Iv => truncated_iv(&ns, t, r),
                    };
                    partial.push((r, [s.re, s.im], (s - v).norm()));
                }
                let pass = partial.last().is_some_and(|x| x.2 <= tol);
                rows.push(Row { t0: t, closed: [v.re, v.im], partial, pass });
            }
            #[derive(Serialize)]
            struct Body {
                integral: Integral,
                tolerance: f64,
                rows: Vec<Row>,
            }
            let v = Verdict::from_bool(rows.iter().all(|r| r.pass));
            Ok((emit("truncation-compare", &cfg, Body { integral: which, tolerance: tol, rows }, v, start), v))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok((doc, verdict)) => {
            // a closed pipe downstream is not our failure
            let _ = writeln!(std::io::stdout().lock(), "{doc}");
            match verdict {
                Verdict::Fail => ExitCode::from(1),
                _ => ExitCode::SUCCESS,
            }
        }
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Engine(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
