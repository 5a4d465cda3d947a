//! Command-line front end for `zonofit`.
//!
//! Each command builds its output as a string from library calls; `main`
//! only parses arguments, writes the result and maps errors to exit codes.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use zonofit::approx::{approximation_report, c0_approximate_at, cinf_approximate, distance_to_zonotope, hausdorff_bound};
use zonofit::geometry::{perimeter_cauchy, regular_subdivision, SupNorm};
use zonofit::process::{
    central_from_feret, central_nnls, existence_check, isotropize_moments, stationarity_diagnostic, confidence_bound,
    CentralFaceMoments, ExistenceReport, FeretProcessMoments, StationarityReport,
};
use zonofit::sim::{estimate_process_moments, moments_from_rows, sample_feret_table, EstimationResult, RandomShapeModel};
use zonofit::spec::{parse_shape, ShapeSpec};
use zonofit::{Body64, Error};

pub use zonofit::approx::ApproximationMode;

/// First line of every CSV file written by the tool.
pub const CSV_HEADER: &str = "# zonofit v1";

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "ZONOFIT_THREADS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;
pub const EXIT_UNDERDETERMINED: i32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Solver {
    Linear,
    Nnls,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    C0,
    Cinf,
}

impl From<Mode> for ApproximationMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::C0 => ApproximationMode::C0,
            Mode::Cinf => ApproximationMode::Cinf,
        }
    }
}

#[derive(Debug, Clone, Parser)]
#[command(name = "zonofit", version, about = "Zonotope approximation from Feret diameters")]
pub struct RunConfig {
    /// Seed for all random streams.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output file (or file prefix for `simulate`); stdout when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Approximate one shape by a zonotope.
    Approximate(ApproximateArgs),
    /// Approximation error of unit-perimeter ellipses over a range of orders.
    Sweep(SweepArgs),
    /// Central face-length moments from Feret samples or moments.
    Estimate(EstimateArgs),
    /// Simulate a random shape model and estimate its Feret moments.
    Simulate(SimulateArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ApproximateArgs {
    /// Shape shorthand (`ellipse:3,1,0`, `disk:1`, `square`, …), JSON object, or JSON file.
    #[arg(long)]
    pub shape: String,
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = Mode::C0)]
    pub mode: Mode,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    /// Inclusive range of orders, `lo..hi`.
    #[arg(long = "n-range", default_value = "2..20")]
    pub n_range: String,
    /// Axis ratios, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "3")]
    pub k: Vec<f64>,
    /// Orientations tried in `[0, π/n)` for the best and worst 0-regular cases.
    #[arg(long, default_value_t = 32)]
    pub orientations: usize,
}

#[derive(Debug, Clone, Args)]
pub struct EstimateArgs {
    /// Sample CSV (`sample_id,theta,h`) or moment JSON file.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = Solver::Linear)]
    pub solver: Solver,
    /// Order of the fitted zonotope; defaults to the data grid size.
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    /// Model as inline JSON or a JSON file.
    #[arg(long)]
    pub model: String,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    /// Confidence level for the reported Hausdorff radius.
    #[arg(long, default_value_t = 0.05)]
    pub epsilon: f64,
}

/// A file to write: path suffix (empty for the main output) and contents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub files: Vec<(String, String)>,
}

impl Output {
    fn single(text: String) -> Self {
        Self { files: vec![(String::new(), text)] }
    }
}

/// Maps an error chain to the documented exit code.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    match err.chain().find_map(|e| e.downcast_ref::<Error>()) {
        Some(Error::Underdetermined(_)) => EXIT_UNDERDETERMINED,
        Some(e) if e.is_input_error() => EXIT_INPUT,
        Some(_) => EXIT_NUMERIC,
        None => EXIT_INPUT,
    }
}

fn text_or_file(arg: &str) -> anyhow::Result<String> {
    let t = arg.trim();
    if t.starts_with('{') {
        return Ok(t.to_string());
    }
    let p = Path::new(t);
    if p.is_file() {
        return fs::read_to_string(p).with_context(|| format!("reading {}", p.display()));
    }
    Ok(t.to_string())
}

pub fn load_shape(arg: &str) -> anyhow::Result<Body64> {
    let spec: ShapeSpec = parse_shape(&text_or_file(arg)?)?;
    Ok(spec.to_body()?)
}

pub fn load_model(arg: &str) -> anyhow::Result<RandomShapeModel> {
    let text = text_or_file(arg)?;
    let model: RandomShapeModel =
        serde_json::from_str(&text).map_err(|e| Error::InvalidModel(format!("{e}")))?;
    model.validate()?;
    Ok(model)
}

fn json<T: Serialize>(v: &T) -> anyhow::Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

fn csv_text(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> anyhow::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    let body = String::from_utf8(w.into_inner().map_err(|e| anyhow!("{e}"))?)?;
    Ok(format!("{CSV_HEADER}\n{body}"))
}

fn require_order(n: usize) -> anyhow::Result<()> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("n must be at least 2, got {n}")).into());
    }
    Ok(())
}

pub fn cmd_approximate(args: &ApproximateArgs, format: Format) -> anyhow::Result<Output> {
    require_order(args.n)?;
    let body = load_shape(&args.shape)?;
    let report = approximation_report(&body, args.n, args.mode.into())?;
    let text = match format {
        Format::Json => json(&report)?,
        Format::Csv => {
            let mode = match args.mode {
                Mode::C0 => "c0",
                Mode::Cinf => "cinf",
            };
            let rows = report.vertices.iter().enumerate().map(|(i, v)| {
                vec![
                    report.n.to_string(),
                    mode.to_string(),
                    report.tau.to_string(),
                    report.d_hausdorff.to_string(),
                    report.bound.to_string(),
                    i.to_string(),
                    v[0].to_string(),
                    v[1].to_string(),
                ]
            });
            let mut s = csv_text(&["n", "mode", "tau", "d_hausdorff", "bound", "vertex", "x", "y"], rows)?;
            let alpha: Vec<String> = report.alpha.iter().map(f64::to_string).collect();
            writeln!(s, "# alpha: {}", alpha.join(","))?;
            s
        }
    };
    Ok(Output::single(text))
}

/// One row of the accuracy sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub n: usize,
    pub k: f64,
    pub d_hausdorff: f64,
    pub bound: f64,
    pub mode: &'static str,
}

fn parse_range(s: &str) -> anyhow::Result<(usize, usize)> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| Error::InvalidParameter(format!("expected lo..hi, got '{s}'")))?;
    let parse = |t: &str| {
        t.trim_start_matches('=')
            .trim()
            .parse::<usize>()
            .map_err(|_| Error::InvalidParameter(format!("bad range bound '{t}'")))
    };
    Ok((parse(lo)?, parse(hi)?))
}

/// Ellipse with axis ratio `k ≥ 1` scaled to unit perimeter.
pub fn unit_perimeter_ellipse(k: f64) -> anyhow::Result<Body64> {
    if !(k.is_finite() && k >= 1.0) {
        return Err(Error::InvalidParameter(format!("axis ratio must be >= 1, got {k}")).into());
    }
    let p = perimeter_cauchy(&Body64::ellipse(k, 1.0, 0.0)?)?;
    Ok(Body64::ellipse(k / p, 1.0 / p, 0.0)?)
}

pub fn sweep_rows(args: &SweepArgs) -> anyhow::Result<Vec<SweepRow>> {
    let (lo, hi) = parse_range(&args.n_range)?;
    if lo <= hi {
        require_order(lo)?;
    }
    if args.orientations < 1 {
        return Err(Error::InvalidParameter("need at least one orientation".into()).into());
    }
    let mut ks = args.k.clone();
    ks.sort_by(f64::total_cmp);
    let mut rows = Vec::new();
    for &k in &ks {
        let e = unit_perimeter_ellipse(k)?;
        let diam = zonofit::geometry::diameter(&e)?;
        for n in lo..=hi {
            let bound = hausdorff_bound(n, diam);
            let width = std::f64::consts::PI / n as f64;
            let mut best = f64::INFINITY;
            let mut worst = 0.0f64;
            for j in 0..args.orientations {
                let t = width * j as f64 / args.orientations as f64;
                let z = c0_approximate_at(&e, n, t)?;
                let d = distance_to_zonotope(&e, &z, SupNorm::default());
                best = best.min(d);
                worst = worst.max(d);
            }
            let cinf = cinf_approximate(&e, n)?.objective;
            for (mode, d) in [("c0_best", best), ("c0_worst", worst), ("cinf", cinf)] {
                rows.push(SweepRow { n, k, d_hausdorff: d, bound, mode });
            }
        }
    }
    Ok(rows)
}

pub fn cmd_sweep(args: &SweepArgs, format: Format) -> anyhow::Result<Output> {
    let rows = sweep_rows(args)?;
    let text = match format {
        Format::Json => json(&rows)?,
        Format::Csv => csv_text(
            &["n", "k", "d_hausdorff", "bound", "mode"],
            rows.iter().map(|r| {
                vec![r.n.to_string(), r.k.to_string(), r.d_hausdorff.to_string(), r.bound.to_string(), r.mode.into()]
            }),
        )?,
    };
    Ok(Output::single(text))
}

/// Parses a `sample_id,theta,h` table into one Feret row per sample on a regular grid.
pub fn parse_sample_csv(text: &str) -> anyhow::Result<Vec<Vec<f64>>> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| Error::InvalidParameter(format!("malformed CSV: {e}")))?.clone();
    if headers.iter().collect::<Vec<_>>() != ["sample_id", "theta", "h"] {
        return Err(Error::InvalidParameter(format!("expected header sample_id,theta,h, got {headers:?}")).into());
    }
    let mut rows: Vec<(u64, f64, f64)> = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| Error::InvalidParameter(format!("malformed CSV: {e}")))?;
        let field = |i: usize| rec.get(i).unwrap_or("");
        let id = field(0).parse::<u64>().map_err(|_| Error::InvalidParameter(format!("bad sample_id '{}'", field(0))))?;
        let num = |i: usize| {
            field(i).parse::<f64>().map_err(|_| Error::InvalidParameter(format!("bad number '{}'", field(i))))
        };
        rows.push((id, num(1)?, num(2)?));
    }
    let mut samples: Vec<Vec<(f64, f64)>> = Vec::new();
    let mut last: Option<u64> = None;
    for (id, theta, h) in rows {
        if last != Some(id) {
            samples.push(Vec::new());
            last = Some(id);
        }
        samples.last_mut().expect("pushed").push((theta, h));
    }
    let n = samples.first().map_or(0, Vec::len);
    if n == 0 {
        return Err(Error::InvalidParameter("no samples in CSV".into()).into());
    }
    let grid = regular_subdivision::<f64>(n);
    samples
        .into_iter()
        .map(|mut s| {
            if s.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: s.len() }.into());
            }
            s.sort_by(|a, b| a.0.total_cmp(&b.0));
            if s.iter().zip(&grid).any(|(a, g)| (a.0 - g).abs() > 1e-9) {
                return Err(Error::InvalidParameter("sample angles are not the regular grid".into()).into());
            }
            Ok(s.into_iter().map(|(_, h)| h).collect())
        })
        .collect()
}

/// Loads moments from a moment JSON file or a sample CSV.
pub fn load_moments(path: &Path) -> anyhow::Result<FeretProcessMoments<f64>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    if text.trim_start().starts_with('{') {
        let m: FeretProcessMoments<f64> =
            serde_json::from_str(&text).map_err(|e| Error::InvalidParameter(format!("moment JSON: {e}")))?;
        m.validate()?;
        Ok(m)
    } else {
        Ok(moments_from_rows(&parse_sample_csv(&text)?, false)?)
    }
}

/// Central moments from stationary-projected data on the `n_data` grid.
pub fn estimate_central(
    m: &FeretProcessMoments<f64>,
    solver: Solver,
    n: Option<usize>,
) -> anyhow::Result<CentralFaceMoments<f64>> {
    let iso = isotropize_moments(m)?;
    let n_data = iso.n;
    let n = n.unwrap_or(n_data);
    require_order(n)?;
    match solver {
        Solver::Linear => {
            if n > n_data {
                return Err(Error::Underdetermined(format!("linear solve at order {n} needs data on the {n}-grid, got {n_data}")).into());
            }
            if n != n_data {
                return Err(Error::DimensionMismatch { expected: n, found: n_data }.into());
            }
            Ok(central_from_feret(&iso)?)
        }
        Solver::Nnls => {
            let lag = iso.lag_vector();
            let obs: Vec<(f64, f64)> = (0..=n_data / 2)
                .map(|k| (iso.theta[k], (lag[k] + lag[(n_data - k) % n_data]) / 2.0))
                .collect();
            let mut c = central_nnls(&obs, iso.grand_mean(), n)?;
            if let Some(se) = &iso.stderr_mean {
                c.stderr_mean_alpha = Some(std::f64::consts::PI / (2.0 * n as f64) * se[0]);
            }
            Ok(c)
        }
    }
}

pub fn cmd_estimate(args: &EstimateArgs, format: Format) -> anyhow::Result<Output> {
    let m = load_moments(&args.input)?;
    let c = estimate_central(&m, args.solver, args.n)?;
    let text = match format {
        Format::Json => json(&c)?,
        Format::Csv => {
            let se_v = c.stderr_v_alpha.clone();
            let mut rows = vec![vec![
                "mean_alpha".to_string(),
                "0".to_string(),
                c.mean_alpha.to_string(),
                c.stderr_mean_alpha.map(|s| s.to_string()).unwrap_or_default(),
            ]];
            rows.extend(c.v_alpha.iter().enumerate().map(|(k, v)| {
                vec![
                    "v_alpha".to_string(),
                    k.to_string(),
                    v.to_string(),
                    se_v.as_ref().map(|s| s[k].to_string()).unwrap_or_default(),
                ]
            }));
            csv_text(&["quantity", "index", "value", "stderr"], rows)?
        }
    };
    Ok(Output::single(text))
}

/// JSON document written by `simulate`.
#[derive(Debug, Clone, Serialize)]
pub struct SimulationReport {
    pub model: RandomShapeModel,
    pub result: EstimationResult<f64>,
    pub stationarity: StationarityReport,
    pub existence: ExistenceReport,
    pub epsilon: f64,
    /// `a(ε, n)` with the mean diameter estimated by the grid maximum of `H`.
    pub confidence_radius: f64,
}

pub fn simulate(args: &SimulateArgs, seed: u64) -> anyhow::Result<(Vec<Vec<f64>>, SimulationReport)> {
    if args.samples < 2 {
        return Err(Error::InvalidParameter(format!("need at least 2 samples, got {}", args.samples)).into());
    }
    require_order(args.n)?;
    let model = load_model(&args.model)?;
    let table = sample_feret_table::<f64>(&model, args.n, args.samples, seed)?;
    let result = estimate_process_moments::<f64>(&model, args.n, args.samples, seed)?;
    let mean_diam = table.iter().map(|r| r.iter().copied().fold(0.0, f64::max)).sum::<f64>() / table.len() as f64;
    let confidence_radius = confidence_bound(args.epsilon, args.n, mean_diam)?;
    let report = SimulationReport {
        stationarity: stationarity_diagnostic(&result.moments),
        existence: existence_check(&result.moments),
        model,
        result,
        epsilon: args.epsilon,
        confidence_radius,
    };
    Ok((table, report))
}

pub fn samples_csv(table: &[Vec<f64>]) -> anyhow::Result<String> {
    let n = table.first().map_or(0, Vec::len);
    let theta = regular_subdivision::<f64>(n);
    let rows = table.iter().enumerate().flat_map(|(id, row)| {
        row.iter()
            .zip(&theta)
            .map(move |(h, t)| vec![id.to_string(), t.to_string(), h.to_string()])
    });
    csv_text(&["sample_id", "theta", "h"], rows)
}

pub fn cmd_simulate(args: &SimulateArgs, seed: u64, format: Format, to_files: bool) -> anyhow::Result<Output> {
    let (table, report) = simulate(args, seed)?;
    if to_files {
        return Ok(Output { files: vec![(".csv".into(), samples_csv(&table)?), (".json".into(), json(&report)?)] });
    }
    Ok(Output::single(match format {
        Format::Json => json(&report)?,
        Format::Csv => samples_csv(&table)?,
    }))
}

/// Runs one command and returns the files it produces.
pub fn execute(cfg: &RunConfig) -> anyhow::Result<Output> {
    match &cfg.command {
        Command::Approximate(a) => cmd_approximate(a, cfg.format),
        Command::Sweep(a) => cmd_sweep(a, cfg.format),
        Command::Estimate(a) => cmd_estimate(a, cfg.format),
        Command::Simulate(a) => cmd_simulate(a, cfg.seed, cfg.format, cfg.out.is_some()),
    }
}

fn threads_from_env() -> anyhow::Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Ok(v) if !v.trim().is_empty() => {
            let n: usize = v.trim().parse().map_err(|_| anyhow!("{THREADS_ENV} must be a positive integer, got '{v}'"))?;
            if n == 0 {
                bail!("{THREADS_ENV} must be positive");
            }
            Ok(Some(n))
        }
        _ => Ok(None),
    }
}

/// Executes `cfg` in a pool sized by `ZONOFIT_THREADS` and writes the output.
pub fn run(cfg: &RunConfig) -> anyhow::Result<()> {
    let output = match threads_from_env()? {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .context("building thread pool")?
            .install(|| execute(cfg))?,
        None => execute(cfg)?,
    };
    match &cfg.out {
        Some(path) => {
            for (suffix, text) in &output.files {
                let mut p = path.clone().into_os_string();
                p.push(suffix);
                let p = PathBuf::from(p);
                fs::write(&p, text).with_context(|| format!("writing {}", p.display()))?;
            }
        }
        None => {
            for (_, text) in &output.files {
                print!("{text}");
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("2..20").unwrap(), (2, 20));
        assert_eq!(parse_range("2..=5").unwrap(), (2, 5));
        assert!(parse_range("2-5").is_err());
    }

    #[test]
    fn exit_code_mapping() {
        assert_eq!(exit_code(&Error::Underdetermined("x".into()).into()), EXIT_UNDERDETERMINED);
        assert_eq!(exit_code(&Error::InvalidSpec("x".into()).into()), EXIT_INPUT);
        assert_eq!(exit_code(&Error::SingularMatrix(0).into()), EXIT_NUMERIC);
        assert_eq!(exit_code(&anyhow!("io")), EXIT_INPUT);
        let wrapped = anyhow::Error::from(Error::IllConditioned { condition: 1e13, limit: 1e12 }).context("solving");
        assert_eq!(exit_code(&wrapped), EXIT_NUMERIC);
    }

    #[test]
    fn sample_csv_round_trip() {
        let table = vec![vec![1.0, 2.0, 3.0], vec![0.5, 0.25, 0.125]];
        let text = samples_csv(&table).unwrap();
        assert!(text.starts_with("# zonofit v1\nsample_id,theta,h\n"));
        assert_eq!(parse_sample_csv(&text).unwrap(), table);
        assert!(parse_sample_csv("sample_id,theta,h\n0,0,1\n0,0.5,1\n").is_err());
    }

    #[test]
    fn unit_perimeter() {
        let e = unit_perimeter_ellipse(3.0).unwrap();
        assert!((perimeter_cauchy(&e).unwrap() - 1.0).abs() < 1e-9);
        assert!(unit_perimeter_ellipse(0.5).is_err());
    }
}
