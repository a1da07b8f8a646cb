use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use matoracle::harness::{
    generate, plot_data, run_on, sweep, Algorithm, Family, Instance, InstanceSpec, SweepConfig,
    TrialParams, TrialRecord,
};
use matoracle::Weight;

#[derive(Parser)]
#[command(
    name = "matoracle",
    version,
    about = "Clean/dirty oracle matroid algorithms: instances, trials and sweeps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Materialize an instance spec (family tags are expanded).
    Gen {
        #[arg(long)]
        spec: PathBuf,
        /// Defaults to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one algorithm and write its trial record as JSON.
    Run {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        alg: Algorithm,
        #[arg(long)]
        k: Option<usize>,
        /// Clean-query price for `costly`, e.g. `2` or `5/2`.
        #[arg(long)]
        p: Option<Weight>,
        /// Defaults to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the query transcript, one `seq,role,kind,answer,hex` line per query.
        #[arg(long)]
        transcript: Option<PathBuf>,
    },
    /// Load an instance and report its sizes; `--all` also runs every
    /// compatible algorithm with its certificate check.
    Verify {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        all: bool,
    },
    /// Run a sweep config and write one CSV row per cell.
    Bench {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Also write `series,algorithm,x,measured` rows for plotting.
        #[arg(long)]
        plot_data: Option<PathBuf>,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write_or_print(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_instance(path: &Path) -> Result<(InstanceSpec, Instance)> {
    let spec = InstanceSpec::from_json(&read(path)?)
        .with_context(|| format!("parsing {}", path.display()))?;
    let instance = generate(&spec).with_context(|| format!("generating {}", spec.label()))?;
    Ok((spec, instance))
}

fn gen(spec: &Path, out: Option<&Path>) -> Result<bool> {
    let spec = InstanceSpec::from_json(&read(spec)?)?;
    let resolved = spec.resolve()?;
    generate(&resolved)?;
    write_or_print(out, &(resolved.to_json() + "\n"))?;
    Ok(true)
}

fn summary(r: &TrialRecord) -> String {
    let bound = r.bound.as_deref().unwrap_or("-");
    let status = if r.failed() { "FAIL" } else { "ok" };
    let mut line = format!(
        "{status} {} k={} measured={} bound={bound} correct={} certificate={} eta_source={}",
        r.algorithm,
        r.k.map_or("-".into(), |k| k.to_string()),
        r.measured,
        r.correct,
        r.certificate,
        r.eta_source
    );
    if let Some(e) = &r.error {
        line.push_str(&format!(" error=\"{e}\""));
    }
    line
}

fn run(
    instance: &Path,
    alg: Algorithm,
    params: TrialParams,
    out: Option<&Path>,
    transcript: Option<&Path>,
) -> Result<bool> {
    let (spec, inst) = load_instance(instance)?;
    let trial = run_on(&spec.label(), &inst, alg, params);
    if let (Some(path), Some(ledger)) = (transcript, &trial.ledger) {
        fs::write(path, ledger.export()).with_context(|| format!("writing {}", path.display()))?;
    }
    write_or_print(out, &(serde_json::to_string_pretty(&trial.record)? + "\n"))?;
    eprintln!("{}", summary(&trial.record));
    Ok(!trial.record.failed())
}

/// Algorithms that make sense on this instance, with the parameters
/// `verify --all` uses for them.
fn compatible(spec: &InstanceSpec, inst: &Instance) -> Vec<(Algorithm, TrialParams)> {
    let plain = TrialParams::default();
    match inst {
        Instance::Intersection { .. } => vec![
            (Algorithm::IntersectDirty, plain),
            (Algorithm::Warmstart, plain),
        ],
        Instance::Basis { pair, .. } => {
            let mut algs: Vec<(Algorithm, TrialParams)> = Algorithm::ALL
                .iter()
                .filter(|a| !a.is_intersection() && (pair.ground().is_unit() || a.is_weighted()))
                .filter(|&&a| {
                    a != Algorithm::Pairquery
                        || matches!(spec.family, Some(Family::Pairquery { .. }))
                })
                .map(|&a| (a, plain))
                .collect();
            for (alg, params) in &mut algs {
                if *alg == Algorithm::Costly {
                    params.p = Some(Weight::from_integer(1));
                }
            }
            algs
        }
    }
}

fn verify(instance: &Path, all: bool) -> Result<bool> {
    let (spec, inst) = load_instance(instance)?;
    match &inst {
        Instance::Basis { pair, .. } => println!(
            "{}: n={} r={} r_d={} weighted={}",
            spec.label(),
            pair.n(),
            pair.clean_rank(),
            pair.dirty_basis().len(),
            !pair.ground().is_unit()
        ),
        Instance::Intersection { pair } => {
            println!("{}: intersection, n={}", spec.label(), pair.n())
        }
    }
    if !all {
        return Ok(true);
    }
    let mut ok = true;
    for (alg, params) in compatible(&spec, &inst) {
        let record = run_on(&spec.label(), &inst, alg, params).record;
        ok &= !record.failed() && record.certificate != "invalid";
        println!("{}", summary(&record));
    }
    Ok(ok)
}

fn bench(config: &Path, out: &Path, plot: Option<&Path>) -> Result<bool> {
    let config = SweepConfig::from_json(&read(config)?)?;
    let outcome = sweep(&config)?;
    fs::write(out, outcome.to_csv()).with_context(|| format!("writing {}", out.display()))?;
    if let Some(path) = plot {
        fs::write(path, plot_data(&outcome.records))
            .with_context(|| format!("writing {}", path.display()))?;
    }
    println!("{outcome}");
    Ok(outcome.passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen { spec, out } => gen(&spec, out.as_deref()),
        Command::Run {
            instance,
            alg,
            k,
            p,
            out,
            transcript,
        } => {
            if k == Some(0) {
                Err(anyhow::anyhow!("--k must be at least 1"))
            } else {
                run(
                    &instance,
                    alg,
                    TrialParams { k, p },
                    out.as_deref(),
                    transcript.as_deref(),
                )
            }
        }
        Command::Verify { instance, all } => verify(&instance, all),
        Command::Bench {
            config,
            out,
            plot_data,
        } => bench(&config, &out, plot_data.as_deref()),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
