use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use tournament_core::experiments::studies::{
    adversarial_study, complexity_sweep, diagnose, AdversarialStudy, ComplexityStudy,
};
use tournament_core::experiments::{
    emit_results, run_experiment, ExperimentConfig, ProcedureSummary,
};
use tournament_core::verification::{fuzz_two_round, MAX_RHO};

#[derive(Parser)]
#[command(
    name = "tournament",
    version,
    about = "Median-of-means tournaments over finite function classes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Overrides the seed in the config file.
    #[arg(long)]
    seed: Option<u64>,
    /// Directory for CSV and JSON output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; defaults to the number of CPUs.
    #[arg(long, env = "TOURNAMENT_WORKERS")]
    workers: Option<usize>,
}

impl Common {
    fn workers(&self) -> usize {
        self.workers
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
            .max(1)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Runs an experiment config and writes trials.csv, summary.csv and manifest.json.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Fixed-point sample complexities across dictionary sizes.
    Complexity {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Randomized check of the two-round population bound.
    Verify {
        #[arg(long, default_value_t = 10_000)]
        cases: u64,
        #[arg(long, default_value_t = 1.0 / 20.0)]
        rho: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Two-point study comparing ERM with the tournament.
    Adversarial {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Per-member sufficient-condition diagnostics for one trial's sample.
    Diagnose {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 0)]
        trial: usize,
        #[command(flatten)]
        common: Common,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write_json<T: serde::Serialize>(dir: &Path, name: &str, value: &T) -> Result<()> {
    fs::create_dir_all(dir)?;
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(dir.join(name), text)?;
    Ok(())
}

fn print_summary(summary: &[ProcedureSummary]) {
    println!(
        "{:<22} {:>7} {:>9} {:>19} {:>12}",
        "procedure", "trials", "failures", "rate [95% CI]", "mean excess"
    );
    for s in summary {
        println!(
            "{:<22} {:>7} {:>9} {:>5.3} [{:.3}, {:.3}] {:>12.4e}",
            s.procedure.to_string(),
            s.trials,
            s.failures,
            s.failure_rate,
            s.ci_low,
            s.ci_high,
            s.mean_excess
        );
    }
}

fn run(config: &Path, common: &Common) -> Result<()> {
    let mut cfg = ExperimentConfig::from_json(&read(config)?)?;
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    let out = run_experiment(&cfg, common.workers())?;
    let dir = common
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from("results"));
    emit_results(&dir, &out.records, &out.summary, &out.manifest)?;
    println!(
        "N = {} per segment, results in {}",
        out.manifest.segment_len,
        dir.display()
    );
    print_summary(&out.summary);
    Ok(())
}

fn complexity(config: &Path, common: &Common) -> Result<()> {
    let mut study: ComplexityStudy = serde_json::from_str(&read(config)?)?;
    if let Some(seed) = common.seed {
        study.seed = seed;
    }
    let report = complexity_sweep(&study)?;
    let mut csv = String::from("m,n_int,n_ext\n");
    for r in &report.rows {
        csv.push_str(&format!("{},{},{}\n", r.m, r.n_int, r.n_ext));
    }
    print!("{csv}");
    if let Some(fit) = &report.fit {
        println!("exponent of ln m: {:.3}", fit.slope);
    }
    if let Some(dir) = &common.out {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("complexity.csv"), csv)?;
        write_json(dir, "complexity.json", &report)?;
    }
    Ok(())
}

fn verify(cases: u64, rho: f64, common: &Common) -> Result<bool> {
    if !(rho > 0.0 && rho <= MAX_RHO) {
        bail!("rho must lie in (0, 1/18], got {rho}");
    }
    let report = fuzz_two_round(cases, rho, common.seed.unwrap_or(0))?;
    println!(
        "{} cases, {} checks, {} violations, worst excess/bound {:.4}",
        report.cases,
        report.checks,
        report.violations.len(),
        report.worst_ratio
    );
    if let Some(dir) = &common.out {
        write_json(dir, "verify.json", &report)?;
    }
    Ok(report.violations.is_empty())
}

fn adversarial(config: &Path, common: &Common) -> Result<()> {
    let mut study: AdversarialStudy = serde_json::from_str(&read(config)?)?;
    if let Some(seed) = common.seed {
        study.seed = seed;
    }
    let (report, out) = adversarial_study(&study, common.workers())?;
    let n = report.trials as f64;
    println!("ERM wrong endpoint     {:.3}", report.erm_wrong as f64 / n);
    println!(
        "tournament midpoint    {:.3}",
        report.tournament_midpoint as f64 / n
    );
    println!(
        "tournament success     {:.3}",
        report.tournament_success as f64 / n
    );
    if let Some(dir) = &common.out {
        emit_results(dir, &out.records, &out.summary, &out.manifest)?;
        write_json(dir, "adversarial.json", &report)?;
    }
    Ok(())
}

fn diagnostics(config: &Path, trial: usize, common: &Common) -> Result<()> {
    let mut cfg = ExperimentConfig::from_json(&read(config)?)?;
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    let report = diagnose(&cfg, None, trial)?;
    let stdout = io::stdout();
    let mut w = stdout.lock();
    writeln!(
        w,
        "id,distance,p1,expected_m,condition1,condition2_blocks,condition3_blocks,passes"
    )?;
    for m in &report.members {
        let opt = |x: Option<usize>| x.map(|v| v.to_string()).unwrap_or_default();
        writeln!(
            w,
            "{},{:.6e},{:.6e},{:.6e},{},{},{},{}",
            m.id,
            m.distance,
            m.p1,
            m.expected_m,
            m.condition1,
            opt(m.condition2_blocks),
            opt(m.condition3_blocks),
            m.passes
        )?;
    }
    writeln!(
        w,
        "all pass: {} ({} blocks)",
        report.all_pass, report.n_blocks
    )?;
    if let Some(dir) = &common.out {
        write_json(dir, "diagnostics.json", &report)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run { config, common } => run(config, common).map(|_| true),
        Command::Complexity { config, common } => complexity(config, common).map(|_| true),
        Command::Verify { cases, rho, common } => verify(*cases, *rho, common),
        Command::Adversarial { config, common } => adversarial(config, common).map(|_| true),
        Command::Diagnose {
            config,
            trial,
            common,
        } => diagnostics(config, *trial, common).map(|_| true),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
