//! Batch front end: score ingestion, one-shot selection, Monte Carlo
//! simulation, axis sweeps, assumption checks, and reference curves.
//! Every run drops a manifest next to its artifacts; flags override the
//! optional TOML config, which overrides built-in defaults.

use std::collections::BTreeMap;
use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::conformal::conformal_pvalues;
use crate::envelope::{write_envelope_csv, DEFAULT_LAMBDA_GRID};
use crate::error::{Error, Result};
use crate::harness::{
    check_assumptions, maxp_by_label, null_reference_curves, result_rows, run_protocol,
    summarize, summary_rows, sweep, write_null_curves_csv, write_results_csv,
    write_summary_csv, ProcedureSpec, ProtocolConfig, SweepAxis, WorldSpec,
};
use crate::scores::{
    read_jsonl_records, score_matrix, CalibrationScores, ScoreConfig, ScoreKind, ScoreMatrix,
};
use crate::selection::{
    compose_naive, jecs_select_full, jmcs_select, per_model_select, per_model_select_storey,
    ComposeMode,
};
use crate::simgen::{gen_split, write_labels_csv, SplitConfig, SyntheticConfig};
use crate::svg::sweep_chart;

pub const OUTPUT_DIR_ENV: &str = "JECS_OUTPUT_DIR";
const STOREY_LAMBDA: f64 = 0.5;

#[derive(Parser, Debug)]
#[command(name = "jecs", version, about = "Joint benchmark selection across audited models")]
pub struct Cli {
    /// TOML config file; command-line flags take precedence
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Where artifacts are written (default: $JECS_OUTPUT_DIR or ./jecs_out)
    #[arg(long, global = true)]
    pub output_dir: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Turn token-level JSONL records into per-detector score CSVs
    Scores(ScoresArgs),
    /// Run one selection procedure on a test/calibration score pair
    Select(SelectArgs),
    /// Monte Carlo protocol on one simulated world
    Simulate(SimulateArgs),
    /// Re-run the protocol along an axis (alpha, lambda, k, rho)
    Sweep(SweepArgs),
    /// Empirical checks of the envelope assumptions on a simulated world
    CheckAssumptions(CheckAssumptionsArgs),
    /// Null max-p CDF and density reference table
    NullCurves(NullCurvesArgs),
}

#[derive(Args, Debug)]
pub struct ScoresArgs {
    /// Test-pool records (JSONL)
    #[arg(long)]
    pub test: PathBuf,
    /// Calibration records (JSONL)
    #[arg(long)]
    pub cal: PathBuf,
    /// Detectors to compute (default: all four)
    #[arg(long, value_delimiter = ',')]
    pub scores: Option<Vec<String>>,
    /// Bottom-fraction size for the min-k detectors
    #[arg(long)]
    pub k_percent: Option<f64>,
}

#[derive(Args, Debug)]
pub struct SelectArgs {
    /// Test score CSV
    #[arg(long)]
    pub test: PathBuf,
    /// Calibration score CSV
    #[arg(long)]
    pub cal: PathBuf,
    /// jecs, jmcs, union, intersection, or per-model-bh
    #[arg(long)]
    pub procedure: String,
    #[arg(long)]
    pub alpha: f64,
    /// Candidate thresholds for the envelope fit
    #[arg(long, value_delimiter = ',')]
    pub lambda_grid: Option<Vec<f64>>,
}

#[derive(Args, Debug, Default, Clone)]
pub struct WorldArgs {
    /// Generator: synthetic or split
    #[arg(long)]
    pub kind: Option<String>,
    #[arg(long)]
    pub n_pool: Option<usize>,
    /// Number of audited models
    #[arg(long)]
    pub k: Option<usize>,
    /// Per-(item, model) membership probability (synthetic)
    #[arg(long)]
    pub member_prob: Option<f64>,
    /// Member score shift
    #[arg(long)]
    pub mu: Option<f64>,
    /// Calibration fraction of the pool (synthetic)
    #[arg(long)]
    pub cal_fraction: Option<f64>,
    /// Clean-block fraction (split)
    #[arg(long)]
    pub a: Option<f64>,
    /// Calibration-block fraction (split)
    #[arg(long)]
    pub b: Option<f64>,
    /// Per-model training fraction of the remainder (split)
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long)]
    pub world_seed: Option<u64>,
}

#[derive(Args, Debug, Default, Clone)]
pub struct ProtocolArgs {
    #[arg(long)]
    pub reps: Option<usize>,
    #[arg(long)]
    pub subsample_fraction: Option<f64>,
    /// Alpha grid (repeat the flag or comma-separate)
    #[arg(long, value_delimiter = ',')]
    pub alpha: Option<Vec<f64>>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads for the repetition loop (0 = shared pool)
    #[arg(long)]
    pub parallelism: Option<usize>,
    /// Procedures to run (jecs,jmcs,union,intersection)
    #[arg(long, value_delimiter = ',')]
    pub procedures: Option<Vec<String>>,
    /// Candidate thresholds for the envelope fit
    #[arg(long, value_delimiter = ',')]
    pub lambda_grid: Option<Vec<f64>>,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub world: WorldArgs,
    #[command(flatten)]
    pub protocol: ProtocolArgs,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[command(flatten)]
    pub world: WorldArgs,
    #[command(flatten)]
    pub protocol: ProtocolArgs,
    /// alpha, lambda, k, or rho
    #[arg(long)]
    pub axis: Option<String>,
    /// Axis values, comma-separated
    #[arg(long, value_delimiter = ',')]
    pub values: Option<Vec<f64>>,
}

#[derive(Args, Debug)]
pub struct CheckAssumptionsArgs {
    #[command(flatten)]
    pub world: WorldArgs,
    /// Tail threshold the diagnostics are evaluated at
    #[arg(long)]
    pub lambda: Option<f64>,
}

#[derive(Args, Debug)]
pub struct NullCurvesArgs {
    /// Number of audited models
    #[arg(long)]
    pub k: usize,
    /// Grid resolution
    #[arg(long, default_value_t = 1000)]
    pub points: usize,
}

#[derive(Deserialize, Debug, Default, Clone)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    protocol: Option<ProtocolSection>,
    world: Option<WorldSection>,
    run: Option<RunSection>,
    sweep: Option<SweepSection>,
}

#[derive(Deserialize, Debug, Default, Clone)]
#[serde(deny_unknown_fields)]
struct ProtocolSection {
    reps: Option<usize>,
    subsample_fraction: Option<f64>,
    alpha_grid: Option<Vec<f64>>,
    seed: Option<u64>,
    parallelism: Option<usize>,
}

#[derive(Deserialize, Debug, Default, Clone)]
#[serde(deny_unknown_fields)]
struct WorldSection {
    kind: Option<String>,
    n_pool: Option<usize>,
    cal_fraction: Option<f64>,
    k: Option<usize>,
    member_prob: Option<f64>,
    mu: Option<f64>,
    a: Option<f64>,
    b: Option<f64>,
    rho: Option<f64>,
    seed: Option<u64>,
}

#[derive(Deserialize, Debug, Default, Clone)]
#[serde(deny_unknown_fields)]
struct RunSection {
    procedures: Option<Vec<String>>,
    lambda_grid: Option<Vec<f64>>,
    lambda: Option<f64>,
    output_dir: Option<PathBuf>,
}

#[derive(Deserialize, Debug, Default, Clone)]
#[serde(deny_unknown_fields)]
struct SweepSection {
    axis: Option<String>,
    values: Option<Vec<f64>>,
}

fn load_config(path: Option<&Path>) -> Result<FileConfig> {
    match path {
        None => Ok(FileConfig::default()),
        Some(p) => {
            let text = fs::read_to_string(p)?;
            toml::from_str(&text)
                .map_err(|e| Error::Parameter(format!("config {}: {e}", p.display())))
        }
    }
}

fn resolve_output_dir(flag: Option<&Path>, cfg: &FileConfig) -> PathBuf {
    if let Some(p) = flag {
        return p.to_path_buf();
    }
    if let Some(p) = cfg.run.as_ref().and_then(|r| r.output_dir.clone()) {
        return p;
    }
    if let Ok(p) = std::env::var(OUTPUT_DIR_ENV) {
        if !p.is_empty() {
            return PathBuf::from(p);
        }
    }
    PathBuf::from("jecs_out")
}

fn resolve_world(args: &WorldArgs, cfg: &FileConfig) -> Result<WorldSpec> {
    let sect = cfg.world.clone().unwrap_or_default();
    let kind = args
        .kind
        .clone()
        .or(sect.kind)
        .unwrap_or_else(|| "synthetic".to_string());
    let seed = args.world_seed.or(sect.seed).unwrap_or(0);
    match kind.as_str() {
        "synthetic" => {
            let d = SyntheticConfig::default();
            Ok(WorldSpec::Synthetic(SyntheticConfig {
                n_pool: args.n_pool.or(sect.n_pool).unwrap_or(d.n_pool),
                cal_fraction: args
                    .cal_fraction
                    .or(sect.cal_fraction)
                    .unwrap_or(d.cal_fraction),
                k: args.k.or(sect.k).unwrap_or(d.k),
                member_prob: args
                    .member_prob
                    .or(sect.member_prob)
                    .unwrap_or(d.member_prob),
                mu: args.mu.or(sect.mu).unwrap_or(d.mu),
                seed,
            }))
        }
        "split" => {
            let d = SplitConfig::default();
            Ok(WorldSpec::Split {
                split: SplitConfig {
                    n_pool: args.n_pool.or(sect.n_pool).unwrap_or(d.n_pool),
                    a: args.a.or(sect.a).unwrap_or(d.a),
                    b: args.b.or(sect.b).unwrap_or(d.b),
                    rho: args.rho.or(sect.rho).unwrap_or(d.rho),
                    k: args.k.or(sect.k).unwrap_or(d.k),
                    seed,
                },
                mu: args.mu.or(sect.mu).unwrap_or(4.0),
            })
        }
        other => Err(Error::Parameter(format!(
            "unknown generator kind `{other}` (expected synthetic or split)"
        ))),
    }
}

fn resolve_protocol(args: &ProtocolArgs, cfg: &FileConfig) -> ProtocolConfig {
    let sect = cfg.protocol.clone().unwrap_or_default();
    let d = ProtocolConfig::default();
    ProtocolConfig {
        reps: args.reps.or(sect.reps).unwrap_or(d.reps),
        subsample_fraction: args
            .subsample_fraction
            .or(sect.subsample_fraction)
            .unwrap_or(d.subsample_fraction),
        alpha_grid: args
            .alpha
            .clone()
            .or(sect.alpha_grid)
            .unwrap_or(d.alpha_grid),
        seed: args.seed.or(sect.seed).unwrap_or(d.seed),
        parallelism: args.parallelism.or(sect.parallelism).unwrap_or(d.parallelism),
    }
}

fn resolve_procedures(args: &ProtocolArgs, cfg: &FileConfig) -> Result<Vec<ProcedureSpec>> {
    let run = cfg.run.clone().unwrap_or_default();
    let grid = args
        .lambda_grid
        .clone()
        .or(run.lambda_grid)
        .unwrap_or_else(|| DEFAULT_LAMBDA_GRID.to_vec());
    let names = args
        .procedures
        .clone()
        .or(run.procedures)
        .unwrap_or_else(|| {
            vec![
                "jecs".into(),
                "jmcs".into(),
                "union".into(),
                "intersection".into(),
            ]
        });
    names
        .iter()
        .map(|name| match name.as_str() {
            "jecs" => Ok(ProcedureSpec::Jecs {
                lambda_grid: grid.clone(),
            }),
            "jmcs" => Ok(ProcedureSpec::Jmcs),
            "union" => Ok(ProcedureSpec::Union),
            "intersection" => Ok(ProcedureSpec::Intersection),
            other => Err(Error::Parameter(format!(
                "unknown procedure `{other}` (expected jecs, jmcs, union, intersection)"
            ))),
        })
        .collect()
}

#[derive(Serialize)]
struct RunManifest {
    command: &'static str,
    config_path: Option<String>,
    seed: Option<u64>,
    output_dir: String,
    versions: BTreeMap<&'static str, &'static str>,
}

impl RunManifest {
    fn new(command: &'static str, cli_config: Option<&Path>, seed: Option<u64>, dir: &Path) -> Self {
        let mut versions = BTreeMap::new();
        versions.insert("jecs", env!("CARGO_PKG_VERSION"));
        RunManifest {
            command,
            config_path: cli_config.map(|p| p.display().to_string()),
            seed,
            output_dir: dir.display().to_string(),
            versions,
        }
    }
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

fn parse_score_kinds(names: Option<&[String]>) -> Result<Vec<ScoreKind>> {
    match names {
        None => Ok(ScoreKind::ALL.to_vec()),
        Some(names) => names.iter().map(|n| n.parse()).collect(),
    }
}

fn cmd_scores(args: &ScoresArgs, dir: &Path, manifest: RunManifest) -> Result<()> {
    let kinds = parse_score_kinds(args.scores.as_deref())?;
    let test_records = read_jsonl_records(BufReader::new(fs::File::open(&args.test)?))?;
    let cal_records = read_jsonl_records(BufReader::new(fs::File::open(&args.cal)?))?;
    // Render everything before touching the filesystem so a bad record
    // cannot leave partial output behind.
    let mut pending: Vec<(PathBuf, Vec<u8>)> = Vec::new();
    for kind in kinds {
        let mut cfg = ScoreConfig::new(kind);
        if let Some(kp) = args.k_percent {
            cfg.k_percent = kp;
        }
        for (records, role) in [(&test_records, "test"), (&cal_records, "cal")] {
            let matrix = score_matrix(records, &cfg)?;
            let mut buf = Vec::new();
            matrix.write_csv(&mut buf)?;
            pending.push((dir.join(format!("scores_{role}_{}.csv", kind.name())), buf));
        }
    }
    fs::create_dir_all(dir)?;
    for (path, bytes) in pending {
        fs::write(path, bytes)?;
    }
    write_json(&dir.join("manifest.json"), &manifest)
}

fn cmd_select(args: &SelectArgs, dir: &Path, manifest: RunManifest) -> Result<()> {
    if !(args.alpha > 0.0 && args.alpha < 1.0) {
        return Err(Error::Parameter(format!(
            "alpha must lie in (0, 1), got {}",
            args.alpha
        )));
    }
    let test = ScoreMatrix::read_csv(BufReader::new(fs::File::open(&args.test)?))?;
    let cal = CalibrationScores(ScoreMatrix::read_csv(BufReader::new(fs::File::open(
        &args.cal,
    )?))?);
    let grid = args
        .lambda_grid
        .clone()
        .unwrap_or_else(|| DEFAULT_LAMBDA_GRID.to_vec());
    fs::create_dir_all(dir)?;
    let json = match args.procedure.as_str() {
        "jecs" => {
            let (result, fit) = jecs_select_full(&test, &cal, args.alpha, &grid)?;
            if let Some(fit) = &fit {
                let mut buf = Vec::new();
                write_envelope_csv(fit, &mut buf)?;
                fs::write(dir.join("envelope.csv"), buf)?;
            }
            result.to_json(&test.items)
        }
        "jmcs" => jmcs_select(&test, &cal, args.alpha)?.to_json(&test.items),
        "union" | "intersection" => {
            let p = conformal_pvalues(&cal, &test)?;
            let per_model = per_model_select_storey(&p, args.alpha)?;
            let mode = if args.procedure == "union" {
                ComposeMode::Union
            } else {
                ComposeMode::Intersection
            };
            let composed = compose_naive(&per_model, mode)?;
            let mut objects: Vec<serde_json::Value> = per_model
                .iter()
                .map(|r| r.to_json(&test.items))
                .collect();
            objects.push(composed.to_json(&test.items));
            serde_json::Value::Array(objects)
        }
        "per-model-bh" => {
            let p = conformal_pvalues(&cal, &test)?;
            let per_model = per_model_select(&p, args.alpha)?;
            serde_json::Value::Array(per_model.iter().map(|r| r.to_json(&test.items)).collect())
        }
        other => {
            return Err(Error::Parameter(format!(
                "unknown procedure `{other}` (expected jecs, jmcs, union, intersection, per-model-bh)"
            )))
        }
    };
    write_json(&dir.join("selection.json"), &json)?;
    write_json(&dir.join("manifest.json"), &manifest)
}

/// Block names for the test pool, aligned with the world's test rows.
fn test_block_names(spec: &WorldSpec) -> Result<Vec<&'static str>> {
    match spec {
        WorldSpec::Synthetic(cfg) => {
            Ok(vec!["test"; cfg.n_pool - cfg.n_cal()])
        }
        WorldSpec::Split { split, .. } => {
            let world = gen_split(split)?;
            Ok(world
                .test_indices()
                .iter()
                .map(|&i| world.blocks[i].name())
                .collect())
        }
    }
}

fn cmd_simulate(args: &SimulateArgs, cfg: &FileConfig, dir: &Path, manifest: RunManifest) -> Result<()> {
    let spec = resolve_world(&args.world, cfg)?;
    let protocol = resolve_protocol(&args.protocol, cfg);
    let procedures = resolve_procedures(&args.protocol, cfg)?;
    let world = spec.build()?;
    let outcomes = run_protocol(&world, &procedures, &protocol)?;
    let rows = result_rows(&outcomes, "alpha", None);
    let sums = summary_rows(&summarize(&outcomes), "alpha", None);
    fs::create_dir_all(dir)?;
    let mut buf = Vec::new();
    write_results_csv(&rows, &mut buf)?;
    fs::write(dir.join("results.csv"), &buf)?;
    buf.clear();
    write_summary_csv(&sums, &mut buf)?;
    fs::write(dir.join("summary.csv"), &buf)?;
    buf.clear();
    let blocks = test_block_names(&spec)?;
    write_labels_csv(&world.test.items, &blocks, &world.labels, &mut buf)?;
    fs::write(dir.join("labels.csv"), &buf)?;
    write_json(&dir.join("manifest.json"), &manifest)
}

fn cmd_sweep(args: &SweepArgs, cfg: &FileConfig, dir: &Path, manifest: RunManifest) -> Result<()> {
    let sect = cfg.sweep.clone().unwrap_or_default();
    let axis: SweepAxis = args
        .axis
        .clone()
        .or(sect.axis)
        .ok_or_else(|| Error::Parameter("sweep needs an axis (alpha, lambda, k, rho)".into()))?
        .parse()?;
    let values = args
        .values
        .clone()
        .or(sect.values)
        .ok_or_else(|| Error::Parameter("sweep needs at least one axis value".into()))?;
    let spec = resolve_world(&args.world, cfg)?;
    let protocol = resolve_protocol(&args.protocol, cfg);
    let procedures = resolve_procedures(&args.protocol, cfg)?;
    let (rows, sums) = sweep(axis, &values, &spec, &procedures, &protocol)?;
    fs::create_dir_all(dir)?;
    let mut buf = Vec::new();
    write_results_csv(&rows, &mut buf)?;
    fs::write(dir.join("results.csv"), &buf)?;
    buf.clear();
    write_summary_csv(&sums, &mut buf)?;
    fs::write(dir.join("summary.csv"), &buf)?;
    fs::write(dir.join("sweep.svg"), sweep_chart(&sums))?;
    write_json(&dir.join("manifest.json"), &manifest)
}

fn cmd_check_assumptions(
    args: &CheckAssumptionsArgs,
    cfg: &FileConfig,
    dir: &Path,
    manifest: RunManifest,
) -> Result<()> {
    let lambda = args
        .lambda
        .or(cfg.run.as_ref().and_then(|r| r.lambda))
        .unwrap_or(STOREY_LAMBDA);
    let spec = resolve_world(&args.world, cfg)?;
    let world = spec.build()?;
    let (pure, contaminated) = maxp_by_label(&world)?;
    let report = check_assumptions(&pure, &contaminated, lambda)?;
    fs::create_dir_all(dir)?;
    write_json(&dir.join("assumptions.json"), &report)?;
    write_json(&dir.join("manifest.json"), &manifest)
}

fn cmd_null_curves(args: &NullCurvesArgs, dir: &Path, manifest: RunManifest) -> Result<()> {
    let rows = null_reference_curves(args.k, args.points)?;
    fs::create_dir_all(dir)?;
    let mut buf = Vec::new();
    write_null_curves_csv(&rows, &mut buf)?;
    fs::write(dir.join("null_curves.csv"), &buf)?;
    write_json(&dir.join("manifest.json"), &manifest)
}

pub fn dispatch(cli: &Cli) -> Result<()> {
    let cfg = load_config(cli.config.as_deref())?;
    let dir = resolve_output_dir(cli.output_dir.as_deref(), &cfg);
    let config_path = cli.config.as_deref();
    match &cli.command {
        Command::Scores(args) => {
            cmd_scores(args, &dir, RunManifest::new("scores", config_path, None, &dir))
        }
        Command::Select(args) => {
            cmd_select(args, &dir, RunManifest::new("select", config_path, None, &dir))
        }
        Command::Simulate(args) => {
            let seed = resolve_protocol(&args.protocol, &cfg).seed;
            cmd_simulate(
                args,
                &cfg,
                &dir,
                RunManifest::new("simulate", config_path, Some(seed), &dir),
            )
        }
        Command::Sweep(args) => {
            let seed = resolve_protocol(&args.protocol, &cfg).seed;
            cmd_sweep(
                args,
                &cfg,
                &dir,
                RunManifest::new("sweep", config_path, Some(seed), &dir),
            )
        }
        Command::CheckAssumptions(args) => {
            let seed = match resolve_world(&args.world, &cfg)? {
                WorldSpec::Synthetic(c) => c.seed,
                WorldSpec::Split { split, .. } => split.seed,
            };
            cmd_check_assumptions(
                args,
                &cfg,
                &dir,
                RunManifest::new("check-assumptions", config_path, Some(seed), &dir),
            )
        }
        Command::NullCurves(args) => cmd_null_curves(
            args,
            &dir,
            RunManifest::new("null-curves", config_path, None, &dir),
        ),
    }
}

/// Parse argv and run; returns the process exit code. Usage and parameter
/// problems exit 2, runtime failures exit 1.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match dispatch(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Parameter(_) | Error::Parse { .. } => 2,
                _ => 1,
            }
        }
    }
}
