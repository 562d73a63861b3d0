use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use curvestat::current_k::{kc, KcConfig, KernelSpec, DEFAULT_SAMPLES};
use curvestat::fiber_k::{kf_direct, kf_via_cox, KfConfig};
use curvestat::morph_k::{km, KmConfig};
use curvestat::point_k::{csr_reference, ripley_k_points, ripley_k_points_at};
use curvestat::synth::{gen_curveset, gen_points, CurvePreset, PointPattern};
use curvestat::{CurveSet, EstimateCurve, Execution, Point, Window};

use crate::error::{usage, CliError, CliResult};
use crate::format::{self, Config};

#[derive(Debug, Parser)]
#[command(name = "curvestat", version, about = "Generate point and curve datasets and estimate K-functions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a synthetic dataset.
    #[command(subcommand)]
    Generate(Generate),
    /// Run an estimator on a dataset and write the estimate.
    #[command(subcommand)]
    Estimate(Estimate),
}

#[derive(Debug, Subcommand)]
pub enum Generate {
    Points(PointsArgs),
    Curves(CurvesArgs),
}

#[derive(Debug, Subcommand)]
pub enum Estimate {
    /// Ripley's K of a points file.
    Kpoints(KpointsArgs),
    /// Fiber K-function on the eroded window.
    KfDirect(KfDirectArgs),
    /// Fiber K-function through Poisson points on the curves.
    KfCox(KfCoxArgs),
    /// Morphological K-function from dilation neighbourhoods.
    Km(KmArgs),
    /// K-function of currents distances between curves.
    Kc(KcArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PatternKind {
    Uniform,
    MotherChild,
    Grid,
    NoisyGrid,
}

#[derive(Debug, Args)]
pub struct PointsArgs {
    #[arg(long, value_enum)]
    pub pattern: PatternKind,
    /// Interior point count (uniform).
    #[arg(long)]
    pub n: Option<usize>,
    /// Mother points (mother-child).
    #[arg(long)]
    pub mothers: Option<usize>,
    /// Children per mother (mother-child).
    #[arg(long)]
    pub children: Option<usize>,
    /// Lattice points per axis (grid, noisy-grid).
    #[arg(long)]
    pub k: Option<usize>,
    /// Offset standard deviation (mother-child, noisy-grid).
    #[arg(long)]
    pub sd: Option<f64>,
    /// Observation window as lo,hi corners: x0,y0,x1,y1 (or six numbers in 3D).
    #[arg(long, default_value = "-1,-1,1,1")]
    pub window: String,
    /// Width of the guard band around the window.
    #[arg(long, default_value_t = 0.0)]
    pub margin: f64,
    /// Required for random patterns; rejected for the deterministic grid.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CurvesArgs {
    /// wide, 7cluster, 2cluster or 1cluster.
    #[arg(long, value_parser = parse_preset)]
    pub preset: CurvePreset,
    #[arg(long, default_value_t = CurvePreset::DEFAULT_CURVES)]
    pub n: usize,
    #[arg(long)]
    pub seed: u64,
    /// Cluster spread (clustered presets only).
    #[arg(long)]
    pub spread: Option<f64>,
    #[arg(long, default_value_t = CurvePreset::FIELD_SEED)]
    pub field_seed: u64,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RadiiArgs {
    /// Comma-separated radii, or start:stop:count for an evenly spaced grid.
    #[arg(long)]
    pub radii: Option<String>,
}

#[derive(Debug, Args)]
pub struct KpointsArgs {
    pub input: PathBuf,
    /// Without radii the full step function is written, one row per distinct distance.
    #[command(flatten)]
    pub radii: RadiiArgs,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct KfDirectArgs {
    pub input: PathBuf,
    #[command(flatten)]
    pub radii: RadiiArgs,
    /// Outer quadrature spacing along the curves.
    #[arg(long)]
    pub spacing: Option<f64>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct KfCoxArgs {
    pub input: PathBuf,
    #[command(flatten)]
    pub radii: RadiiArgs,
    /// Poisson intensity per unit curve length.
    #[arg(long)]
    pub lambda: f64,
    #[arg(long)]
    pub seed: u64,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct KmArgs {
    pub input: PathBuf,
    #[command(flatten)]
    pub radii: RadiiArgs,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct KcArgs {
    pub input: PathBuf,
    /// Gaussian kernel bandwidth.
    #[arg(long)]
    pub sigma: f64,
    #[arg(long, default_value_t = 1.0)]
    pub amplitude: f64,
    /// Dirac currents per curve.
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    pub samples: usize,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

fn parse_preset(s: &str) -> Result<CurvePreset, String> {
    s.parse().map_err(|e: curvestat::Error| e.to_string())
}

const DEFAULT_RADII: usize = 100;

/// `n` evenly spaced values from `a` to `b` inclusive, hitting `b` exactly.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![a],
        _ => (0..n).map(|k| if k + 1 == n { b } else { a + (b - a) * k as f64 / (n - 1) as f64 }).collect(),
    }
}

/// A radii spec as given on the command line, with its resolved values.
struct Radii {
    spec: String,
    values: Vec<f64>,
}

fn parse_radii(spec: &str) -> CliResult<Radii> {
    let bad = |m: String| CliError::Usage(format!("--radii {spec:?}: {m}"));
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| bad(format!("bad number {t:?}")));
    let values = if let [a, b, n] = spec.split(':').collect::<Vec<_>>()[..] {
        let n: usize = n.trim().parse().map_err(|_| bad(format!("bad count {n:?}")))?;
        if n == 0 {
            return Err(bad("count must be positive".into()));
        }
        linspace(num(a)?, num(b)?, n)
    } else {
        spec.split(',').map(num).collect::<CliResult<Vec<_>>>()?
    };
    if values.iter().any(|r| !r.is_finite() || *r < 0.0) {
        return Err(bad("radii must be finite and non-negative".into()));
    }
    if values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(bad("radii must be strictly increasing".into()));
    }
    Ok(Radii { spec: spec.to_string(), values })
}

/// The given radii, or `DEFAULT_RADII` evenly spaced ones up to `max`.
fn radii_or(args: &RadiiArgs, max: f64) -> CliResult<Radii> {
    match &args.radii {
        Some(s) => parse_radii(s),
        None => parse_radii(&format!("{}:{}:{DEFAULT_RADII}", max / DEFAULT_RADII as f64, max)),
    }
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn load_curves(path: &Path) -> CliResult<CurveSet> {
    Ok(format::parse_curves(&path.display().to_string(), &read(path)?)?.1)
}

fn parse_window(s: &str) -> CliResult<Window> {
    let v = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| CliError::Usage(format!("--window: bad number {t:?}"))))
        .collect::<CliResult<Vec<_>>>()?;
    if v.len() != 4 && v.len() != 6 {
        return usage(format!("--window needs 4 or 6 comma-separated numbers, got {}", v.len()));
    }
    let d = v.len() / 2;
    let w = Point::new(&v[..d]).and_then(|lo| Window::new(lo, Point::new(&v[d..])?));
    w.map_err(|e| CliError::Usage(format!("--window: {e}")))
}

pub fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Generate(Generate::Points(a)) => generate_points(a),
        Command::Generate(Generate::Curves(a)) => generate_curves(a),
        Command::Estimate(e) => estimate(e),
    }
}

fn generate_points(a: PointsArgs) -> CliResult<()> {
    use PatternKind::*;
    let allowed: &[&str] = match a.pattern {
        Uniform => &["n"],
        MotherChild => &["mothers", "children", "sd"],
        Grid => &["k"],
        NoisyGrid => &["k", "sd"],
    };
    let given = [
        ("n", a.n.is_some()),
        ("mothers", a.mothers.is_some()),
        ("children", a.children.is_some()),
        ("k", a.k.is_some()),
        ("sd", a.sd.is_some()),
    ];
    if let Some((flag, _)) = given.iter().find(|(f, set)| *set && !allowed.contains(f)) {
        return usage(format!("--{flag} does not apply to --pattern {}", pattern_name(a.pattern)));
    }
    match (a.pattern, a.seed) {
        (Grid, Some(_)) => return usage("--seed is not accepted for the deterministic grid pattern"),
        (Grid, None) => {}
        (_, None) => return usage(format!("--seed is required for --pattern {}", pattern_name(a.pattern))),
        _ => {}
    }
    let window = parse_window(&a.window)?;
    let mut cfg = Config::default();
    cfg.push("pattern", pattern_name(a.pattern));
    let pattern = match a.pattern {
        Uniform => {
            let n = a.n.unwrap_or(100);
            cfg.push("n", n);
            PointPattern::Uniform { n }
        }
        MotherChild => {
            let (mothers, children, sd) = (a.mothers.unwrap_or(10), a.children.unwrap_or(10), a.sd.unwrap_or(0.05));
            cfg.push("mothers", mothers).push("children", children).push("sd", sd);
            PointPattern::MotherChild { mothers, children, sd }
        }
        Grid => {
            let k = a.k.unwrap_or(10);
            cfg.push("k", k);
            PointPattern::Grid { k }
        }
        NoisyGrid => {
            let (k, sd) = (a.k.unwrap_or(10), a.sd.unwrap_or(0.03));
            cfg.push("k", k).push("sd", sd);
            PointPattern::NoisyGrid { k, sd }
        }
    };
    cfg.push("window", a.window.replace(' ', "")).push("margin", a.margin);
    if let Some(s) = a.seed {
        cfg.push("seed", s);
    }
    let ps =
        gen_points(&pattern, &window, a.margin, a.seed.unwrap_or(0)).map_err(|e| CliError::Usage(e.to_string()))?;
    format::write_output(a.output.as_deref(), &format::points_to_string(&ps, &cfg))
}

fn pattern_name(p: PatternKind) -> &'static str {
    match p {
        PatternKind::Uniform => "uniform",
        PatternKind::MotherChild => "mother-child",
        PatternKind::Grid => "grid",
        PatternKind::NoisyGrid => "noisy-grid",
    }
}

fn generate_curves(a: CurvesArgs) -> CliResult<()> {
    if a.preset == CurvePreset::Wide && a.spread.is_some() {
        return usage("--spread does not apply to the wide preset");
    }
    let spread = a.spread.unwrap_or(a.preset.default_spread());
    let spec = a.preset.spec_with(a.n, a.seed, a.field_seed, spread);
    let mut cfg = Config::default();
    cfg.push("preset", a.preset).push("n", a.n).push("seed", a.seed).push("field_seed", a.field_seed);
    if a.preset != CurvePreset::Wide {
        cfg.push("spread", spread);
    }
    cfg.push("margin", spec.margin)
        .push("step", spec.flow.step)
        .push("max_len", spec.flow.max_len)
        .push("emit_every", spec.flow.emit_every);
    let cs = gen_curveset(&spec, a.seed)?;
    format::write_output(a.output.as_deref(), &format::curves_to_string(&cs, &cfg))
}

fn estimate(e: Estimate) -> CliResult<()> {
    let pi_r2 = |dim: usize| move |r: f64| csr_reference(r, dim);
    match e {
        Estimate::Kpoints(a) => {
            let name = a.input.display().to_string();
            let (_, ps) = format::parse_points(&name, &read(&a.input)?)?;
            let mut cfg = Config::default();
            cfg.push("input", &name);
            let curve = match &a.radii.radii {
                Some(s) => {
                    let radii = parse_radii(s)?;
                    cfg.push("radii", &radii.spec);
                    ripley_k_points_at(&ps, &radii.values, Execution::default())?
                }
                None => {
                    cfg.push("radii", "steps");
                    ripley_k_points(&ps)?
                }
            };
            cfg.push("normalization", "area/n^2");
            let dim = ps.window().dim();
            emit("kpoints", &curve, Some(&pi_r2(dim)), &cfg, &[], a.output.as_deref())
        }
        Estimate::KfDirect(a) => {
            let cs = load_curves(&a.input)?;
            let radii = radii_or(&a.radii, 0.5 * cs.window().min_side() * (1.0 - 1e-6))?;
            let mut cfg = Config::default();
            cfg.push("input", a.input.display()).push("radii", &radii.spec);
            match a.spacing {
                Some(h) => cfg.push("spacing", h),
                None => cfg.push("spacing", "auto"),
            };
            let est = kf_direct(&cs, &radii.values, &KfConfig { spacing: a.spacing, ..KfConfig::default() })?;
            let warnings: Vec<String> = est
                .truncated_at
                .map(|r| format!("radii from {r} on dropped: the eroded window is empty"))
                .into_iter()
                .collect();
            emit("kf-direct", &est.curve, Some(&pi_r2(cs.dim())), &cfg, &warnings, a.output.as_deref())
        }
        Estimate::KfCox(a) => {
            let cs = load_curves(&a.input)?;
            let radii = radii_or(&a.radii, 0.5 * cs.window().min_side() * (1.0 - 1e-6))?;
            let mut cfg = Config::default();
            cfg.push("input", a.input.display())
                .push("radii", &radii.spec)
                .push("lambda", a.lambda)
                .push("seed", a.seed);
            let curve = kf_via_cox(&cs, a.lambda, a.seed, &radii.values, Execution::default())?;
            emit("kf-cox", &curve, Some(&pi_r2(cs.dim())), &cfg, &[], a.output.as_deref())
        }
        Estimate::Km(a) => {
            let cs = load_curves(&a.input)?;
            let radii = radii_or(&a.radii, cs.extent_diameter())?;
            let mut cfg = Config::default();
            cfg.push("input", a.input.display()).push("radii", &radii.spec);
            let est = km(&cs, &radii.values, &KmConfig::default())?;
            let warnings: Vec<String> = if est.skipped.is_empty() {
                vec![]
            } else {
                let ids: Vec<String> = est.skipped.iter().map(|k| k.to_string()).collect();
                vec![format!("curves with no length inside the window were skipped: {}", ids.join(","))]
            };
            emit("km", &est.curve, None, &cfg, &warnings, a.output.as_deref())
        }
        Estimate::Kc(a) => {
            let cs = load_curves(&a.input)?;
            let kernel = KernelSpec::new(a.amplitude, a.sigma).map_err(|e| CliError::Usage(e.to_string()))?;
            if a.samples == 0 {
                return usage("--samples must be at least 1");
            }
            let mut cfg = Config::default();
            cfg.push("input", a.input.display())
                .push("sigma", a.sigma)
                .push("amplitude", a.amplitude)
                .push("samples", a.samples)
                .push("normalization", "1/(n(n-1))");
            let curve = kc(&cs, &KcConfig { samples: a.samples, ..KcConfig::new(kernel) })?;
            emit("kc", &curve, None, &cfg, &[], a.output.as_deref())
        }
    }
}

fn emit(
    name: &str,
    curve: &EstimateCurve,
    reference: Option<&dyn Fn(f64) -> f64>,
    cfg: &Config,
    warnings: &[String],
    output: Option<&Path>,
) -> CliResult<()> {
    for w in warnings {
        eprintln!("warning: {w}");
    }
    format::write_output(output, &format::estimate_to_string(name, curve, reference, cfg, warnings))
}

/// Sizes the global rayon pool from `CURVESTAT_THREADS` (unset, empty or 0 means automatic).
pub fn configure_threads(value: Option<&str>) -> CliResult<()> {
    let n = match value.map(str::trim) {
        None | Some("") => 0,
        Some(s) => s
            .parse::<usize>()
            .map_err(|_| CliError::Usage(format!("CURVESTAT_THREADS must be a non-negative integer, got {s:?}")))?,
    };
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot size the thread pool: {e}")))?;
    }
    Ok(())
}
