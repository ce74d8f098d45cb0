use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cogfso_cli::config::{load_preset, parse_config, validate_scenario, OutputFormat, ResolvedConfig};
use cogfso_cli::output::{config_hash, emit, render_selection, render_sweep, SelectionDocument, Sidecar, SweepDocument};
use cogfso_cli::{run_outage_sweep, run_selection_study, run_validate, CliError, CliResult, DEFAULT_SEED};
use cogfso_core::fso::Detection;
use cogfso_core::mc::{McEngine, RngConfig};

#[derive(Parser)]
#[command(name = "cogfso", version, about = "Outage and SU-TX selection statistics for cognitive RF / FSO relay links")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Outage probability over a grid of P_A, average optical SNR or threshold.
    Sweep(Common),
    /// SU-TX selection frequencies for the built-in and configured variants.
    Select(Common),
    /// Compare every closed form with simulation; exit 4 on any failed check.
    Validate {
        #[command(flatten)]
        common: Common,
        /// Evaluate the analytic side with a deliberately wrong S→R shape.
        #[arg(long)]
        negative_control: bool,
    },
}

#[derive(Args)]
struct Common {
    /// Experiment file (TOML).
    #[arg(long, conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Bundled experiment: fig2a, fig2b, fig2b-k, fig2c.
    #[arg(long)]
    preset: Option<String>,
    /// Monte Carlo trials (per grid point for sweeps).
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    detection: Option<DetectionArg>,
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    #[arg(long)]
    output: Option<PathBuf>,
    /// Worker threads; results do not depend on it.
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum DetectionArg {
    Imdd,
    Heterodyne,
}

impl From<DetectionArg> for Detection {
    fn from(d: DetectionArg) -> Self {
        match d {
            DetectionArg::Imdd => Detection::ImDd,
            DetectionArg::Heterodyne => Detection::Heterodyne,
        }
    }
}

struct Prepared {
    cfg: ResolvedConfig,
    seed: u64,
    engine: McEngine,
}

fn prepare(c: &Common, default_preset: &str) -> CliResult<Prepared> {
    let mut cfg = match (&c.config, &c.preset) {
        (Some(path), _) => parse_config(path)?,
        (None, Some(name)) => load_preset(name)?,
        (None, None) => load_preset(default_preset)?,
    };
    if let Some(d) = c.detection {
        cfg = cfg.with_detection(d.into());
        validate_scenario(&cfg.scenario)?;
    }
    if let Some(t) = c.trials {
        cfg.sweep.trials = t;
    }
    let seed = c.seed.or(cfg.seed).unwrap_or(DEFAULT_SEED);
    let mut engine = McEngine::new(RngConfig::new(seed));
    if let Some(w) = c.workers {
        engine = engine.with_workers(w).map_err(|e| CliError::Numerical(e.to_string()))?;
    }
    Ok(Prepared { cfg, seed, engine })
}

fn output_path(c: &Common, cfg: &ResolvedConfig) -> Option<PathBuf> {
    c.output.clone().or_else(|| cfg.sweep.output.as_ref().map(PathBuf::from))
}

fn describe(output: Option<&Path>) -> String {
    output.map_or_else(|| "-".to_string(), |p| p.display().to_string())
}

fn sweep(c: &Common) -> CliResult<()> {
    let p = prepare(c, "fig2a")?;
    let format = c.format.unwrap_or(p.cfg.sweep.format);
    let records = run_outage_sweep(&p.cfg.scenario, &p.cfg.sweep, &p.engine);
    let doc = SweepDocument { config_hash: config_hash(&p.cfg), seed: p.seed, records };
    let out = output_path(c, &p.cfg);
    let side = Sidecar { command: "sweep", config_hash: doc.config_hash.clone(), seed: p.seed, output: describe(out.as_deref()), config: &p.cfg };
    emit(&render_sweep(&doc, format)?, out.as_deref(), &side)
}

fn select(c: &Common) -> CliResult<()> {
    let p = prepare(c, "fig2c")?;
    let trials = c.trials.unwrap_or(100_000);
    let rows = run_selection_study(&p.cfg.scenario, &p.cfg.variants, trials, &p.engine)?;
    let doc = SelectionDocument { config_hash: config_hash(&p.cfg), seed: p.seed, trials, variants: rows };
    let out = output_path(c, &p.cfg);
    let side = Sidecar { command: "select", config_hash: doc.config_hash.clone(), seed: p.seed, output: describe(out.as_deref()), config: &p.cfg };
    emit(&render_selection(&doc, c.format.unwrap_or_default())?, out.as_deref(), &side)
}

fn validate(c: &Common, negative_control: bool) -> CliResult<()> {
    let p = prepare(c, "fig2a")?;
    let trials = c.trials.unwrap_or(1_000_000);
    let report = run_validate(&p.cfg.scenario, trials, &p.engine, negative_control)?;
    let body = match c.format {
        Some(OutputFormat::Json) => serde_json::to_string_pretty(&report)? + "\n",
        _ => report.to_text(),
    };
    let out = c.output.clone();
    let side = Sidecar { command: "validate", config_hash: config_hash(&p.cfg), seed: p.seed, output: describe(out.as_deref()), config: &p.cfg };
    emit(&body, out.as_deref(), &side)?;
    if report.passed() {
        Ok(())
    } else {
        let worst: Vec<String> =
            report.failures().iter().map(|f| format!("{} = {:.6} (limit {})", f.name, f.value, f.limit)).collect();
        Err(CliError::Validation(worst.join(", ")))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Sweep(c) => sweep(c),
        Command::Select(c) => select(c),
        Command::Validate { common, negative_control } => validate(common, *negative_control),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("cogfso: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
