//! `motionkit` command-line front end.

mod parse;

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use motionkit::factor::{factor_auto, factor_by_norm_factors, sample_params, CaseInfo};
use motionkit::linkage::MISMATCH_TOL;
use motionkit::motionpoly::{trajectory_of_point, BasicMotion};
use motionkit::osculate::{svg_plot, SvgLayer};
use motionkit::projd::same_point;
use motionkit::{
    bennett_fit, classify_case, closure_check, develop, interp_conic, make_basic_motion, nullcone_conic_fit,
    osculating_darboux, set_tolerance, synthesize_fourbar, ConicFamily, CurveEvaluator, CylinderMotion,
    DualNumber, DualQuaternion, Error, FactorizationResult, Linkage, MotionPoly, NullConeCase, TrigKind,
    TrigMotion,
};
use serde::{Deserialize, Serialize};

/// Largest projective residual accepted when re-verifying written output.
const VERIFY_TOL: f64 = 1e-8;

#[derive(Parser)]
#[command(name = "motionkit", version, about = "Rational rigid-body motions over the dual numbers")]
struct Cli {
    /// Global zero tolerance; overrides MOTIONKIT_TOL.
    #[arg(long, global = true, value_parser = parse::number)]
    tol: Option<f64>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a basic motion or the conic through three poses.
    Motion(MotionArgs),
    /// Factor a quadratic motion polynomial.
    Factor(FactorArgs),
    /// Develop a cylinder motion into the plane (SVG or CSV).
    Develop(DevelopArgs),
    /// Four-bar linkage from two factorizations of the same motion.
    Linkage(LinkageArgs),
    /// Trajectory of a point as CSV.
    Sample(SampleArgs),
    /// Conic motions through three poses.
    Fit(FitArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum MotionKind {
    Rotation,
    Translation,
    Helical,
    Darboux,
    Conic,
}

#[derive(Args)]
struct MotionArgs {
    #[arg(long, value_enum)]
    kind: MotionKind,
    #[arg(long, allow_hyphen_values = true, value_parser = parse::number)]
    pitch: Option<f64>,
    #[arg(long, allow_hyphen_values = true, value_parser = parse::number)]
    amplitude: Option<f64>,
    #[arg(long, allow_hyphen_values = true, value_parser = parse::vec3)]
    direction: Option<[f64; 3]>,
    #[arg(long, allow_hyphen_values = true, value_parser = parse::number, default_value = "1")]
    speed: f64,
    /// Three dual quaternion JSON files (or inline JSON), the poses at t = 0, 1, ∞.
    #[arg(long, num_args = 3)]
    points: Vec<String>,
    #[arg(long, allow_hyphen_values = true, value_parser = parse::dual, default_value = "1,0")]
    gamma0: DualNumber,
    #[arg(long, allow_hyphen_values = true, value_parser = parse::dual, default_value = "1,0")]
    gamma2: DualNumber,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FactorArgs {
    /// Motion polynomial JSON file or inline JSON.
    #[arg(long)]
    input: String,
    /// Free family parameter v₂ of bounded translations.
    #[arg(long, allow_hyphen_values = true, value_parser = parse::number, default_value = "0")]
    v2: f64,
    /// Free family parameter v₃ of bounded translations.
    #[arg(long, allow_hyphen_values = true, value_parser = parse::number, default_value = "0")]
    v3: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum CylinderKind {
    Rotation,
    Helical,
    Darboux,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PlotFormat {
    Svg,
    Csv,
}

#[derive(Args)]
struct DevelopArgs {
    /// Cylinder motion JSON file or inline JSON.
    #[arg(long, conflicts_with = "kind", required_unless_present = "kind")]
    input: Option<String>,
    #[arg(long, value_enum)]
    kind: Option<CylinderKind>,
    #[arg(long, allow_hyphen_values = true, value_parser = parse::number, default_value = "1")]
    pitch: f64,
    #[arg(long, allow_hyphen_values = true, value_parser = parse::number, default_value = "1")]
    amplitude: f64,
    #[arg(long, allow_hyphen_values = true, value_parser = parse::pair, default_value = "0,2pi")]
    t_range: (f64, f64),
    #[arg(long, default_value_t = 200)]
    samples: usize,
    /// Overlay the osculating sine curve at this parameter.
    #[arg(long, allow_hyphen_values = true, value_parser = parse::number)]
    osculate: Option<f64>,
    #[arg(long, value_enum, default_value = "svg")]
    format: PlotFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct LinkageArgs {
    /// Factorization JSON, or `factor` output holding at least two factorizations.
    #[arg(long)]
    first: String,
    #[arg(long)]
    second: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SampleArgs {
    /// Motion JSON: a motion polynomial, `motion` output, or a cylinder motion.
    #[arg(long)]
    input: String,
    #[arg(long, allow_hyphen_values = true, value_parser = parse::vec3)]
    point: [f64; 3],
    #[arg(long, allow_hyphen_values = true, value_parser = parse::pair, default_value = "-1,1")]
    t_range: (f64, f64),
    #[arg(long, default_value_t = 50)]
    samples: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FitKind {
    Bennett,
    Nullcone,
}

#[derive(Args)]
struct FitArgs {
    #[arg(value_enum)]
    kind: FitKind,
    #[arg(long, num_args = 3, required = true)]
    points: Vec<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Input(String),
    Math(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Math(_) => 3,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NoFactorization(_)
            | Error::MismatchedMotions(_)
            | Error::NoSolutionFound
            | Error::QuadrupleRoot
            | Error::NonInvertibleRemainder
            | Error::BranchAmbiguity { .. }
            | Error::NotCaseB
            | Error::NotCaseC => Failure::Math(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type CmdResult = Result<(), Failure>;

fn input_err(msg: impl std::fmt::Display) -> Failure {
    Failure::Input(msg.to_string())
}

/// Inline JSON or the contents of a file.
fn load<T: for<'de> Deserialize<'de>>(src: &str) -> Result<T, Failure> {
    let text = if src.trim_start().starts_with(['{', '[']) {
        src.to_string()
    } else {
        fs::read_to_string(src).map_err(|e| input_err(format!("{src}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| input_err(format!("{src}: {e}")))
}

fn write_atomic(path: &Path, data: &str) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(data.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn emit(out: &Option<PathBuf>, data: &str) -> CmdResult {
    match out {
        Some(p) => write_atomic(p, data).map_err(|e| input_err(format!("{}: {e}", p.display()))),
        None => {
            print!("{data}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

/// Serializes `v`, parses the text back, and runs `check` on the parsed value.
fn emit_verified<T, F>(out: &Option<PathBuf>, v: &T, check: F) -> CmdResult
where
    T: Serialize + for<'de> Deserialize<'de>,
    F: FnOnce(&T) -> Result<(), String>,
{
    let text = to_json(v);
    let back: T = serde_json::from_str(&text).map_err(|e| Failure::Math(format!("output does not reparse: {e}")))?;
    check(&back).map_err(|e| Failure::Math(format!("output verification failed: {e}")))?;
    emit(out, &text)
}

fn conic_through(poly: &MotionPoly, pts: &[DualQuaternion; 3]) -> Result<(), String> {
    let hits = [poly.eval(0.0), poly.eval(1.0), poly.eval_inf()];
    for (k, (h, p)) in hits.iter().zip(pts).enumerate() {
        if !same_point(*h, *p, VERIFY_TOL) {
            return Err(format!("conic misses pose {k}"));
        }
    }
    Ok(())
}

fn load_points(srcs: &[String]) -> Result<[DualQuaternion; 3], Failure> {
    match srcs {
        [a, b, c] => Ok([load(a)?, load(b)?, load(c)?]),
        _ => Err(input_err("expected three poses")),
    }
}

fn cmd_motion(a: &MotionArgs) -> CmdResult {
    let need = |v: Option<f64>, name: &str| v.ok_or_else(|| input_err(format!("--{name} is required for this kind")));
    let kind = match a.kind {
        MotionKind::Conic => {
            let pts = load_points(&a.points)?;
            let fam = ConicFamily::new(pts[0], pts[1], pts[2], a.gamma0, a.gamma2);
            let poly = interp_conic(&fam)?;
            return emit_verified(&a.out, &poly, |p| conic_through(p, &pts));
        }
        MotionKind::Rotation => TrigKind::Rotation,
        MotionKind::Translation => TrigKind::Translation {
            direction: a.direction.ok_or_else(|| input_err("--direction is required for translations"))?,
            speed: a.speed,
        },
        MotionKind::Helical => TrigKind::Helical { pitch: need(a.pitch, "pitch")? },
        MotionKind::Darboux => TrigKind::Darboux { amplitude: need(a.amplitude, "amplitude")? },
    };
    if !a.points.is_empty() {
        return Err(input_err("--points only applies to --kind conic"));
    }
    let m = make_basic_motion(kind)?;
    emit_verified(&a.out, &m, |back| if back == &m { Ok(()) } else { Err("motion changed on reparse".into()) })
}

#[derive(Serialize, Deserialize)]
struct FactorOutput {
    case: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tangency: Option<[[f64; 2]; 2]>,
    factorizations: Vec<FactorizationResult>,
}

fn cmd_factor(a: &FactorArgs) -> CmdResult {
    let c: MotionPoly = load(&a.input)?;
    if c.degree() != 2 {
        return Err(input_err(format!("expected a quadratic motion polynomial, got degree {}", c.degree())));
    }
    let out = match classify_case(&c) {
        Ok(CaseInfo { roots, .. }) => {
            let (case, factorizations) = factor_auto(&c, a.v2, a.v3)?;
            FactorOutput {
                case: case.label().to_string(),
                tangency: Some(roots.map(|z| [z.re, z.im])),
                factorizations,
            }
        }
        Err(Error::NotNullCone(_)) => FactorOutput {
            case: NullConeCase::NotNullCone.label().to_string(),
            tangency: None,
            factorizations: factor_by_norm_factors(&c)?,
        },
        Err(e) => return Err(e.into()),
    };
    let samples = sample_params();
    emit_verified(&a.out, &out, |o| {
        for (k, f) in o.factorizations.iter().enumerate() {
            let r = f.roundtrip_residual(&c, &samples);
            if !(r <= VERIFY_TOL) {
                return Err(format!("factorization {k} roundtrip residual {r:e}"));
            }
        }
        Ok(())
    })
}

fn cmd_develop(a: &DevelopArgs) -> CmdResult {
    let m = match (&a.input, a.kind) {
        (Some(src), _) => load::<CylinderMotion>(src)?,
        (None, Some(CylinderKind::Rotation)) => CylinderMotion::rotation(),
        (None, Some(CylinderKind::Helical)) => CylinderMotion::helical(a.pitch),
        (None, Some(CylinderKind::Darboux)) => CylinderMotion::darboux(a.amplitude),
        (None, None) => return Err(input_err("either --input or --kind is required")),
    };
    let curve = develop(&m, a.t_range, a.samples)?;
    if a.format == PlotFormat::Csv {
        if a.osculate.is_some() {
            return Err(input_err("--osculate needs SVG output"));
        }
        return emit(&a.out, &curve.to_csv());
    }
    let mut layers = vec![curve.polyline("black")];
    let mut marker = None;
    if let Some(t0) = a.osculate {
        let osc = osculating_darboux(&m, t0)?;
        let us: Vec<f64> = curve.samples.iter().map(|s| s.u).collect();
        let (lo, hi) = us.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &u| (l.min(u), h.max(u)));
        let n = a.samples.max(2);
        let sine = (0..n)
            .map(|i| {
                let u = lo + (hi - lo) * i as f64 / (n - 1) as f64;
                (u, osc.developed_height(u))
            })
            .collect();
        layers.push(SvgLayer { points: sine, stroke: "blue".into() });
        marker = Some((m.angle.eval(t0), m.height.eval(t0)));
    }
    emit(&a.out, &svg_plot(&layers, marker))
}

#[derive(Deserialize)]
#[serde(untagged)]
enum FactorInput {
    Many(FactorOutput),
    One(FactorizationResult),
}

fn load_factorizations(src: &str) -> Result<Vec<FactorizationResult>, Failure> {
    Ok(match load::<FactorInput>(src)? {
        FactorInput::Many(o) => o.factorizations,
        FactorInput::One(f) => vec![f],
    })
}

#[derive(Serialize, Deserialize)]
struct LinkageReport {
    types: String,
    #[serde(flatten)]
    linkage: Linkage,
}

fn cmd_linkage(a: &LinkageArgs) -> CmdResult {
    let mut facts = load_factorizations(&a.first)?;
    if let Some(src) = &a.second {
        facts.truncate(1);
        facts.extend(load_factorizations(src)?.into_iter().take(1));
    }
    if facts.len() < 2 {
        return Err(input_err("need two factorizations: pass --second or a factor output with two branches"));
    }
    let l = synthesize_fourbar(&facts[0], &facts[1])?;
    let report = LinkageReport { types: l.type_string(), linkage: l };
    let samples = sample_params();
    emit_verified(&a.out, &report, |r| {
        let res = closure_check(&r.linkage, &samples);
        if res <= MISMATCH_TOL {
            Ok(())
        } else {
            Err(format!("closure residual {res:e}"))
        }
    })
}

#[derive(Deserialize)]
#[serde(untagged)]
enum MotionInput {
    Poly(MotionPoly),
    Basic(BasicMotion),
    Trig(TrigMotion),
    Cylinder(CylinderMotion),
}

fn cmd_sample(a: &SampleArgs) -> CmdResult {
    let m = load::<MotionInput>(&a.input)?;
    let n = a.samples.max(2);
    let (t0, t1) = a.t_range;
    let ts: Vec<f64> = (0..n).map(|i| t0 + (t1 - t0) * i as f64 / (n - 1) as f64).collect();
    let curve: &dyn CurveEvaluator = match &m {
        MotionInput::Poly(p) => p,
        MotionInput::Basic(b) => &b.trig,
        MotionInput::Trig(t) => t,
        MotionInput::Cylinder(c) => c,
    };
    let tr = trajectory_of_point(curve, a.point, &ts)?;
    emit(&a.out, &tr.to_csv())
}

fn cmd_fit(a: &FitArgs) -> CmdResult {
    let pts = load_points(&a.points)?;
    match a.kind {
        FitKind::Bennett => {
            let poly = bennett_fit(pts[0], pts[1], pts[2])?;
            emit_verified(&a.out, &poly, |p| conic_through(p, &pts))
        }
        FitKind::Nullcone => {
            let sols = nullcone_conic_fit(pts[0], pts[1], pts[2])?;
            if sols.is_empty() {
                return Err(Error::NoSolutionFound.into());
            }
            emit_verified(&a.out, &sols, |s| s.iter().try_for_each(|c| conic_through(&c.poly, &pts)))
        }
    }
}

fn apply_tolerance(flag: Option<f64>) -> CmdResult {
    let tol = match (flag, std::env::var("MOTIONKIT_TOL")) {
        (Some(t), _) => t,
        (None, Ok(s)) => parse::number(&s).map_err(|e| input_err(format!("MOTIONKIT_TOL: {e}")))?,
        (None, Err(_)) => return Ok(()),
    };
    if tol <= 0.0 {
        return Err(input_err("tolerance must be positive"));
    }
    set_tolerance(tol);
    Ok(())
}

fn run(cli: Cli) -> CmdResult {
    apply_tolerance(cli.tol)?;
    match &cli.cmd {
        Command::Motion(a) => cmd_motion(a),
        Command::Factor(a) => cmd_factor(a),
        Command::Develop(a) => cmd_develop(a),
        Command::Linkage(a) => cmd_linkage(a),
        Command::Sample(a) => cmd_sample(a),
        Command::Fit(a) => cmd_fit(a),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let msg = match &f {
                Failure::Input(m) => format!("error: {m}"),
                Failure::Math(m) => format!("failed: {m}"),
            };
            eprintln!("{msg}");
            ExitCode::from(f.code())
        }
    }
}
