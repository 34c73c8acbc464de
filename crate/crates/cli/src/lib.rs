//! `cpx` command-line front end.
//!
//! Every command writes machine-readable artifacts that carry a metadata block
//! (tool version, SHA-256 of the resolved configuration, seed). Exit codes:
//! 0 success, 1 usage or configuration error, 2 solver non-improvement or a
//! failed table check, 3 numerical abort.

use clap::{Parser, Subcommand, ValueEnum};
use cpx_cavity::{effective_fidelity, CavityError, CavityModel, ScanModel, Scenario, Trajectory};
use cpx_designer::{
    design_two_pulse, optimize_phases, table_one, verify_table, CostSpec, DesignError,
    DesignResult, FiveReading, OptimizeOptions, TableReport, Variant,
};
use cpx_pulse::{wrap_phase, CompositeSequence};
use cpx_robustness::{fmt17, map_grid, scan, write_matrix_csv, RegionArea, ScanGrid};
use cpx_series::{extract_series, ErrorSeries, DEFAULT_STEP};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_NON_IMPROVEMENT: u8 = 2;
pub const EXIT_NUMERICAL: u8 = 3;

/// Fidelity thresholds reported by the singlet scan.
pub const SINGLET_THRESHOLDS: [f64; 3] = [0.999, 0.99, 0.9];

/// Long options that may also be written with a single dash (`-theta 0.5`).
const LONG_FLAGS: &[&str] = &[
    "theta", "variant", "cost", "grid", "seed", "threads", "restarts", "order", "step", "input",
    "out", "metric",
];

#[derive(Debug, Parser)]
#[command(
    name = "cpx",
    version,
    about = "Composite pulse design and validation for three-level Λ systems"
)]
pub struct Cli {
    /// Worker threads (default: CPX_THREADS, else all cores). Results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Output file (design, coeffs) or directory (scan, simulate, verify-table).
    #[arg(short = 'o', long = "out", global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Design phases for an N-pulse sequence reaching P_r = sin²θ.
    Design {
        #[arg(short = 'N', long = "pulses")]
        n: usize,
        /// Target angle in radians, within [0, π/2].
        #[arg(long, allow_hyphen_values = true)]
        theta: f64,
        /// Two-pulse closed form or shorthand cost: accuracy, leakage, balanced.
        #[arg(long)]
        variant: Option<Variant>,
        /// Cost weights as inline JSON or a path to a JSON file.
        #[arg(long)]
        cost: Option<String>,
        #[arg(long, default_value_t = 200)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Taylor coefficients of the populations of a sequence.
    Coeffs {
        #[arg(short = 'i', long = "input")]
        input: PathBuf,
        #[arg(long, default_value_t = 2)]
        order: usize,
        #[arg(long, default_value_t = DEFAULT_STEP)]
        step: f64,
    },
    /// Infidelity and leakage landscapes over a deviation grid.
    Scan {
        #[arg(short = 'i', long = "input")]
        input: PathBuf,
        /// min:max:points, applied to both axes.
        #[arg(long, default_value = "-0.5:0.5:201", allow_hyphen_values = true)]
        grid: String,
        #[arg(long, value_enum, default_value_t = Metric::Both)]
        metric: Metric,
    },
    /// Open-system simulation of singlet preparation in the cavity.
    Simulate {
        /// Scenario JSON; omitted fields take their defaults.
        #[arg(short = 'i', long = "input")]
        input: Option<PathBuf>,
    },
    /// Check tabulated phases (built-in reference rows by default).
    VerifyTable {
        /// JSON list of {n, theta, alphas, betas} rows.
        #[arg(short = 'i', long = "input")]
        input: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Infidelity,
    Leakage,
    Both,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numerical(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Numerical(_) => EXIT_NUMERICAL,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Numerical(m) => write!(f, "numerical abort: {m}"),
        }
    }
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

impl From<DesignError> for CliError {
    fn from(e: DesignError) -> Self {
        match e {
            DesignError::Infeasible => CliError::Numerical(e.to_string()),
            other => usage(other),
        }
    }
}

impl From<CavityError> for CliError {
    fn from(e: CavityError) -> Self {
        match e {
            CavityError::TraceDrift { .. } => CliError::Numerical(e.to_string()),
            other => usage(other),
        }
    }
}

/// Rewrites `-theta` style options into `--theta` so clap sees long flags.
pub fn normalize_args(args: impl IntoIterator<Item = String>) -> Vec<String> {
    args.into_iter()
        .map(|a| {
            if a.starts_with('-') && !a.starts_with("--") {
                let name = a[1..].split('=').next().unwrap_or("");
                if LONG_FLAGS.contains(&name) {
                    return format!("-{a}");
                }
            }
            a
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct Metadata {
    pub tool: &'static str,
    pub version: &'static str,
    pub config_hash: String,
    pub seed: u64,
}

impl Metadata {
    /// Hashes the canonical JSON form of `config` (object keys are sorted).
    pub fn new(config: &Value, seed: u64) -> Self {
        let bytes = serde_json::to_vec(config).expect("JSON values always serialize");
        Metadata {
            tool: "cpx",
            version: env!("CARGO_PKG_VERSION"),
            config_hash: hex::encode(Sha256::digest(&bytes)),
            seed,
        }
    }

    fn csv_lines(&self) -> Vec<(&'static str, String)> {
        vec![
            ("tool", self.tool.to_string()),
            ("version", self.version.to_string()),
            ("config_hash", self.config_hash.clone()),
            ("seed", self.seed.to_string()),
        ]
    }
}

/// Parses and runs a command line, returning the process exit code.
pub fn run(args: impl IntoIterator<Item = String>) -> u8 {
    let cli = match Cli::try_parse_from(normalize_args(args)) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.code()
        }
    }
}

fn thread_count(flag: Option<usize>) -> Result<Option<usize>, CliError> {
    let n = match flag {
        Some(n) => Some(n),
        None => match std::env::var("CPX_THREADS") {
            Ok(s) if !s.trim().is_empty() => Some(
                s.trim()
                    .parse()
                    .map_err(|_| usage(format!("CPX_THREADS='{s}' is not a thread count")))?,
            ),
            _ => None,
        },
    };
    if n == Some(0) {
        return Err(usage("thread count must be at least 1"));
    }
    Ok(n)
}

pub fn execute(cli: &Cli) -> Result<u8, CliError> {
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_count(cli.threads)? {
        pool = pool.num_threads(n);
    }
    let pool = pool.build().map_err(usage)?;
    pool.install(|| match &cli.command {
        Command::Design {
            n,
            theta,
            variant,
            cost,
            restarts,
            seed,
        } => cmd_design(
            *n,
            *theta,
            *variant,
            cost.as_deref(),
            *restarts,
            *seed,
            cli.out.as_deref(),
        ),
        Command::Coeffs { input, order, step } => {
            cmd_coeffs(input, *order, *step, cli.out.as_deref())
        }
        Command::Scan {
            input,
            grid,
            metric,
        } => cmd_scan(input, grid, *metric, cli.out.as_deref()),
        Command::Simulate { input } => cmd_simulate(input.as_deref(), cli.out.as_deref()),
        Command::VerifyTable { input } => cmd_verify_table(input.as_deref(), cli.out.as_deref()),
    })
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

fn read_json(path: &Path) -> Result<Value, CliError> {
    serde_json::from_str(&read_text(path)?)
        .map_err(|e| usage(format!("malformed JSON in {}: {e}", path.display())))
}

fn write_json_to(out: Option<&Path>, value: &Value) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(usage)?;
    text.push('\n');
    match out {
        Some(p) => {
            fs::write(p, text).map_err(|e| usage(format!("cannot write {}: {e}", p.display())))
        }
        None => io::stdout().write_all(text.as_bytes()).map_err(usage),
    }
}

fn out_dir(out: Option<&Path>) -> Result<PathBuf, CliError> {
    let dir = out
        .map(Path::to_path_buf)
        .unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir).map_err(|e| usage(format!("cannot create {}: {e}", dir.display())))?;
    Ok(dir)
}

fn create(path: &Path) -> Result<io::BufWriter<fs::File>, CliError> {
    fs::File::create(path)
        .map(io::BufWriter::new)
        .map_err(|e| usage(format!("cannot write {}: {e}", path.display())))
}

/// Accepts inline JSON (starting with `{`) or a path to a JSON file.
pub fn parse_cost(arg: &str) -> Result<CostSpec, CliError> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        read_text(Path::new(arg))?
    };
    let spec: CostSpec =
        serde_json::from_str(&text).map_err(|e| usage(format!("malformed cost JSON: {e}")))?;
    spec.validate()?;
    Ok(spec)
}

#[derive(Debug, Deserialize)]
struct PhaseInput {
    theta: f64,
    #[serde(default)]
    alphas: Vec<f64>,
    #[serde(default)]
    betas: Vec<f64>,
    #[serde(default)]
    resonant: bool,
}

/// Reads a sequence from JSON. Accepted shapes: the output of `design`
/// (`result.sequence`), a bare sequence `{theta_target, pulses}`, phases
/// `{theta, alphas, betas}` of θₙ = π/4 pulses, or `{theta, resonant: true}`
/// for the single resonant pulse reaching sin²θ.
pub fn parse_sequence(v: &Value) -> Result<CompositeSequence, CliError> {
    let bad = |e: String| usage(format!("malformed sequence JSON: {e}"));
    let inner = v
        .pointer("/result/sequence")
        .or_else(|| v.get("sequence"))
        .unwrap_or(v);
    let seq = if inner.get("pulses").is_some() {
        serde_json::from_value::<CompositeSequence>(inner.clone())
            .map_err(|e| bad(e.to_string()))?
    } else {
        let p: PhaseInput =
            serde_json::from_value(inner.clone()).map_err(|e| bad(e.to_string()))?;
        if p.resonant {
            CompositeSequence::resonant(p.theta).map_err(|e| bad(e.to_string()))?
        } else {
            CompositeSequence::from_phases(p.theta, &p.alphas, &p.betas)
                .map_err(|e| bad(e.to_string()))?
        }
    };
    seq.validate().map_err(|e| bad(e.to_string()))?;
    Ok(seq)
}

/// Parses `min:max:points` into a square grid.
pub fn parse_grid(s: &str) -> Result<ScanGrid, CliError> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || usage(format!("grid '{s}' must look like min:max:points"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let min: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let max: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let points: usize = parts[2].trim().parse().map_err(|_| bad())?;
    ScanGrid::square(min, max, points).map_err(usage)
}

/// Slack for angles typed with four decimals, such as 1.5708 for π/2.
pub const THETA_SLACK: f64 = 1e-4;

/// Checks θ ∈ [0, π/2], snapping values within [`THETA_SLACK`] of an end onto it.
pub fn clamp_theta(theta: f64) -> Result<f64, CliError> {
    let top = std::f64::consts::FRAC_PI_2;
    if !theta.is_finite() || theta < -THETA_SLACK || theta > top + THETA_SLACK {
        return Err(usage(format!("theta {theta} outside [0, π/2]")));
    }
    Ok(theta.clamp(0.0, top))
}

/// Consecutive differences xₙ − xₙ₊₁ wrapped into [0, 2π).
fn differences(x: &[f64]) -> Vec<f64> {
    x.windows(2).map(|w| wrap_phase(w[0] - w[1])).collect()
}

pub fn cmd_design(
    n: usize,
    theta: f64,
    variant: Option<Variant>,
    cost: Option<&str>,
    restarts: usize,
    seed: u64,
    out: Option<&Path>,
) -> Result<u8, CliError> {
    let theta = clamp_theta(theta)?;
    if !(2..=8).contains(&n) {
        return Err(usage(format!("N = {n} outside 2..=8")));
    }
    let spec = match (cost, variant) {
        (Some(c), _) => parse_cost(c)?,
        (None, Some(v)) => v.cost_spec(),
        (None, None) => CostSpec::second_order(),
    };
    let opts = OptimizeOptions {
        restarts,
        seed,
        ..Default::default()
    };
    let result: DesignResult = match (n, variant, cost) {
        (2, Some(v), None) => design_two_pulse(theta, v)?,
        _ => optimize_phases(n, theta, &spec, &opts)?,
    };
    let config = json!({
        "command": "design",
        "n": n,
        "theta": theta,
        "variant": variant,
        "cost": spec,
        "restarts": restarts,
        "seed": seed,
    });
    let seq = &result.sequence;
    let output = json!({
        "metadata": Metadata::new(&config, seed),
        "n": n,
        "theta": theta,
        "cost_spec": spec,
        "phase_differences": { "alpha": differences(&seq.alphas()), "beta": differences(&seq.betas()) },
        "result": result,
    });
    write_json_to(out, &output)?;
    if result.solver_report.non_improvement {
        eprintln!(
            "warning: cost {:.6e} does not beat the single-pulse baseline {:.6e}",
            result.cost, result.solver_report.baseline_cost
        );
        return Ok(EXIT_NON_IMPROVEMENT);
    }
    Ok(EXIT_OK)
}

pub fn cmd_coeffs(
    input: &Path,
    order: usize,
    step: f64,
    out: Option<&Path>,
) -> Result<u8, CliError> {
    let raw = read_json(input)?;
    let seq = parse_sequence(&raw)?;
    let series: ErrorSeries = extract_series(&seq, order, step).map_err(usage)?;
    let config = json!({ "command": "coeffs", "input": raw, "order": order, "step": step });
    let costs: Vec<Value> = (2..=order)
        .map(|l| json!({ "order": l, "fc": series.fc(l), "fd": series.fd(l) }))
        .collect();
    let output = json!({
        "metadata": Metadata::new(&config, 0),
        "target_population": seq.target_population(),
        "series": series,
        "costs": costs,
    });
    write_json_to(out, &output)?;
    Ok(EXIT_OK)
}

pub fn cmd_scan(
    input: &Path,
    grid: &str,
    metric: Metric,
    out: Option<&Path>,
) -> Result<u8, CliError> {
    let raw = read_json(input)?;
    let seq = parse_sequence(&raw)?;
    let grid = parse_grid(grid)?;
    let land = scan(&seq, &grid).map_err(usage)?;
    let config = json!({ "command": "scan", "input": raw, "grid": grid, "metric": metric });
    let meta = Metadata::new(&config, 0);
    let dir = out_dir(out)?;
    let lines = meta.csv_lines();
    let mut header: Vec<(&str, String)> = lines.iter().map(|(k, v)| (*k, v.clone())).collect();
    header.push(("target_population", fmt17(seq.target_population())));
    let mut files = Vec::new();
    for (name, wanted, values) in [
        ("infidelity", metric != Metric::Leakage, &land.infidelity),
        ("leakage", metric != Metric::Infidelity, &land.leakage),
    ] {
        if !wanted {
            continue;
        }
        let path = dir.join(format!("{name}.csv"));
        let mut meta_lines = header.clone();
        meta_lines.push(("metric", name.to_string()));
        write_matrix_csv(create(&path)?, &meta_lines, &grid, values).map_err(usage)?;
        files.push(format!("{name}.csv"));
    }
    let summary = json!({
        "metadata": meta,
        "grid": grid,
        "reference_box": [-cpx_robustness::REFERENCE_HALF_WIDTH, cpx_robustness::REFERENCE_HALF_WIDTH],
        "box_nodes": land.box_nodes,
        "region_areas": land.region_areas,
        "files": files,
    });
    write_json_to(Some(&dir.join("summary.json")), &summary)?;
    for RegionArea {
        threshold,
        infidelity,
        leakage,
    } in &land.region_areas
    {
        println!(
            "threshold {threshold}: infidelity area {infidelity:.4}, leakage area {leakage:.4}"
        );
    }
    Ok(EXIT_OK)
}

fn write_trajectory(path: &Path, meta: &Metadata, t: &Trajectory) -> Result<(), CliError> {
    let mut w = create(path)?;
    let io = |e: io::Error| usage(format!("cannot write {}: {e}", path.display()));
    for (k, v) in meta.csv_lines() {
        writeln!(w, "# {k}: {v}").map_err(io)?;
    }
    writeln!(w, "t,fidelity,trace,excited,photons").map_err(io)?;
    for s in &t.samples {
        writeln!(
            w,
            "{},{},{},{},{}",
            fmt17(s.t),
            fmt17(s.fidelity),
            fmt17(s.trace),
            fmt17(s.excited),
            fmt17(s.photons)
        )
        .map_err(io)?;
    }
    w.flush().map_err(io)
}

fn singlet_scan(
    scenario: &Scenario,
    dir: &Path,
    meta: &Metadata,
) -> Result<Option<Value>, CliError> {
    let Some(cfg) = &scenario.scan else {
        return Ok(None);
    };
    let grid = ScanGrid {
        eps1_range: cfg.eps1_range,
        eps2_range: cfg.eps2_range,
        resolution: cfg.resolution,
    };
    let w = scenario.waveform_spec();
    let m = &scenario.model;
    let values = map_grid(&grid, |d| -> Result<f64, CavityError> {
        match cfg.model {
            ScanModel::Effective => effective_fidelity(m.omega[0], m.omega[1], d.eps1, d.eps2, &w),
            ScanModel::Full => {
                let model = CavityModel { ..m.clone() }.with_deviations(d.eps1, d.eps2);
                let t = cpx_cavity::evolve_from_psi1(
                    &model,
                    &scenario.lindblad,
                    &w,
                    &scenario.options(),
                )?;
                Ok(t.final_fidelity)
            }
        }
    })
    .map_err(usage)?;
    let values: Vec<Vec<f64>> = values
        .into_iter()
        .map(|row| row.into_iter().collect::<Result<Vec<_>, _>>())
        .collect::<Result<_, _>>()?;
    let total = (grid.resolution * grid.resolution) as f64;
    let flat = values.iter().flatten();
    let min = flat.clone().copied().fold(f64::INFINITY, f64::min);
    let fractions: Vec<Value> = SINGLET_THRESHOLDS
        .iter()
        .map(|&th| json!({ "threshold": th, "fraction": flat.clone().filter(|&&f| f >= th).count() as f64 / total }))
        .collect();
    let mut lines = meta.csv_lines();
    lines.push(("metric", "singlet_fidelity".to_string()));
    write_matrix_csv(
        create(&dir.join("fidelity_scan.csv"))?,
        &lines,
        &grid,
        &values,
    )
    .map_err(usage)?;
    Ok(Some(json!({
        "model": cfg.model,
        "grid": grid,
        "min_fidelity": min,
        "fractions_at_least": fractions,
        "file": "fidelity_scan.csv",
    })))
}

pub fn cmd_simulate(input: Option<&Path>, out: Option<&Path>) -> Result<u8, CliError> {
    let raw = match input {
        Some(p) => read_json(p)?,
        None => json!({}),
    };
    let scenario: Scenario =
        serde_json::from_value(raw).map_err(|e| usage(format!("malformed scenario JSON: {e}")))?;
    let resolved = serde_json::to_value(&scenario).map_err(usage)?;
    let config = json!({ "command": "simulate", "scenario": resolved });
    let meta = Metadata::new(&config, 0);
    let traj = scenario.run()?;
    let dir = out_dir(out)?;
    write_trajectory(&dir.join("trajectory.csv"), &meta, &traj)?;
    let scan = singlet_scan(&scenario, &dir, &meta)?;
    let output = json!({
        "metadata": meta,
        "scenario": resolved,
        "final_fidelity": traj.final_fidelity,
        "integrator": traj.integrator,
        "dt": traj.dt,
        "steps": traj.steps,
        "subspace_dim": traj.subspace_dim,
        "scan": scan,
    });
    write_json_to(Some(&dir.join("final.json")), &output)?;
    println!("final singlet fidelity {:.6}", traj.final_fidelity);
    Ok(EXIT_OK)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TableInput {
    pub n: usize,
    pub theta: f64,
    /// α₂ … α_N.
    pub alphas: Vec<f64>,
    /// The printed β columns.
    pub betas: Vec<f64>,
}

fn table_rows(input: Option<&Path>) -> Result<(Vec<TableInput>, Value), CliError> {
    match input {
        Some(p) => {
            let raw = read_json(p)?;
            let rows = serde_json::from_value(raw.clone())
                .map_err(|e| usage(format!("malformed table JSON: {e}")))?;
            Ok((rows, raw))
        }
        None => {
            let rows: Vec<TableInput> = table_one()
                .into_iter()
                .map(|r| TableInput {
                    n: r.n,
                    theta: r.theta,
                    alphas: r.alphas,
                    betas: r.betas,
                })
                .collect();
            Ok((rows, json!("table-one")))
        }
    }
}

/// Absolute phases (α₁ … α₅, β₁ … β₅) of a row under the reading that was used.
fn absolute_phases(row: &TableInput, report: &TableReport) -> (Vec<f64>, Vec<f64>) {
    let mut alphas = vec![0.0];
    alphas.extend(&row.alphas);
    let betas = match report.reading {
        Some(FiveReading::BetaOneToFour) => {
            let mut b = row.betas.clone();
            b.push(0.0);
            b
        }
        _ => std::iter::once(0.0)
            .chain(row.betas.iter().copied())
            .collect(),
    };
    (alphas, betas)
}

pub fn cmd_verify_table(input: Option<&Path>, out: Option<&Path>) -> Result<u8, CliError> {
    let (rows, source) = table_rows(input)?;
    let reports: Vec<TableReport> = rows
        .iter()
        .map(|r| verify_table(r.n, r.theta, &r.alphas, &r.betas))
        .collect::<Result<_, _>>()?;
    let config = json!({ "command": "verify-table", "rows": source });
    let meta = Metadata::new(&config, 0);
    let width = rows.iter().map(|r| r.n).max().unwrap_or(2);
    let dir = out_dir(out)?;
    let path = dir.join("table.csv");
    let mut w = create(&path)?;
    let io = |e: io::Error| usage(format!("cannot write {}: {e}", path.display()));
    for (k, v) in meta.csv_lines() {
        writeln!(w, "# {k}: {v}").map_err(io)?;
    }
    let mut header = String::from("n,theta,reading,c0_error,c1_norm,cost,pass");
    for name in ["alpha", "beta"] {
        for k in 1..=width {
            header.push_str(&format!(",{name}_{k}"));
        }
    }
    writeln!(w, "{header}").map_err(io)?;
    for (row, rep) in rows.iter().zip(&reports) {
        let reading = match rep.reading {
            Some(FiveReading::BetaOneToFour) => "beta_1_to_4",
            Some(FiveReading::BetaTwoToFive) => "beta_2_to_5",
            None => "",
        };
        let mut line = format!(
            "{},{},{reading},{},{},{},{}",
            row.n,
            fmt17(row.theta),
            fmt17(rep.c0_error),
            fmt17(rep.c1_norm),
            fmt17(rep.cost),
            rep.pass
        );
        let (a, b) = absolute_phases(row, rep);
        for list in [a, b] {
            for k in 0..width {
                line.push(',');
                if let Some(x) = list.get(k) {
                    line.push_str(&fmt17(*x));
                }
            }
        }
        writeln!(w, "{line}").map_err(io)?;
    }
    w.flush().map_err(io)?;
    let failed = reports.iter().filter(|r| !r.pass).count();
    let summary = json!({
        "metadata": meta,
        "tolerance": cpx_designer::TABLE_TOLERANCE,
        "rows": reports,
        "failed": failed,
        "file": "table.csv",
    });
    write_json_to(Some(&dir.join("table_summary.json")), &summary)?;
    println!("{} rows checked, {failed} failed", reports.len());
    Ok(if failed == 0 {
        EXIT_OK
    } else {
        EXIT_NON_IMPROVEMENT
    })
}
