use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use pseudoherm::dyson::critical_times;
use pseudoherm::fock::entropy_closed;
use pseudoherm::AlgebraKind;
use pseudoherm_cli::config::{preset, Scenario, PRESET_NAMES};
use pseudoherm_cli::{run_to_dir, thread_count, verify, CliError};
use rayon::prelude::*;

#[derive(Parser)]
#[command(
    name = "pseudoherm",
    version,
    about = "Non-Hermitian su(1,1)/su(2) dynamics through Hermitian Dyson maps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Source {
    /// Scenario file (INI).
    config: Option<PathBuf>,
    /// Built-in preset (fig1 .. fig7) instead of a file.
    #[arg(long, conflicts_with = "config")]
    preset: Option<String>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Also write SVG line plots.
    #[arg(long)]
    svg: bool,
}

impl Source {
    fn scenario(&self) -> Result<Scenario, CliError> {
        match (&self.config, &self.preset) {
            (Some(p), _) => Scenario::from_file(p),
            (None, Some(name)) => preset(name),
            (None, None) => Err(CliError::Parse("give a scenario file or --preset".into())),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario with the series it requests.
    Run(Source),
    /// Map parameters Phi, phi, Lambda, |z|, eps, |mu|.
    Dyson(Source),
    /// Hermitian counterpart coefficients and hermiticity residual.
    Counterpart(Source),
    /// Squeeze parameters r, phase and accumulated phase.
    Evolve(Source),
    /// Linear entropy: a single value from --kind/--n/--r, or a series from a scenario.
    Entropy {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        kind: Option<AlgebraKind>,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long)]
        r: Option<f64>,
    },
    /// Critical times of the linear ramp.
    Times {
        #[arg(long)]
        kind: AlgebraKind,
        #[arg(long)]
        phi0: f64,
        #[arg(long)]
        lambda0: f64,
        #[arg(long)]
        gamma: f64,
    },
    /// Run all figure presets.
    Figures {
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long)]
        svg: bool,
    },
    /// Run the invariant suite; exits 0 only if every check passes.
    Verify,
}

fn run_with_series(src: &Source, suffix: &str, series: &[&str]) -> Result<(), CliError> {
    let mut sc = src.scenario()?;
    if !suffix.is_empty() {
        sc.name = format!("{}_{suffix}", sc.name);
        sc.series = series.iter().map(|s| s.to_string()).collect();
    }
    let (res, paths) = run_to_dir(&sc, &src.out, src.svg)?;
    report_run(&res, &paths);
    Ok(())
}

fn report_run(res: &pseudoherm_cli::RunResult, paths: &[PathBuf]) {
    println!("{}: {} rows ({})", res.scenario.name, res.table.rows.len(), res.method);
    if let Some(t) = res.critical_time {
        println!("  critical time T = {t} (gamma*T = {})", res.scenario.gamma * t);
    }
    if let Some(b) = &res.breakdown {
        println!("  stopped at t = {} (gamma*t = {}): {}", b.time, b.gamma_t, b.reason);
    }
    for p in paths {
        println!("  wrote {}", p.display());
    }
}

fn execute(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Run(src) => run_with_series(&src, "", &[])?,
        Command::Dyson(src) => run_with_series(&src, "dyson", &["Phi", "phi", "Lambda", "z_abs", "eps", "mu_abs"])?,
        Command::Counterpart(src) => run_with_series(&src, "counterpart", &["W", "U_abs", "U_arg", "herm_residual"])?,
        Command::Evolve(src) => run_with_series(&src, "evolve", &["r", "phase", "Omega"])?,
        Command::Entropy { source, kind, n, r } => match (kind, r) {
            (Some(kind), Some(r)) => {
                let s = entropy_closed(kind, r, n)?;
                println!("{s}");
            }
            (None, None) => run_with_series(&source, "entropy", &["r", "S_lin"])?,
            _ => return Err(CliError::Parse("--kind and --r go together".into())),
        },
        Command::Times {
            kind,
            phi0,
            lambda0,
            gamma,
        } => {
            let ct = critical_times(phi0, lambda0, gamma, kind)?;
            let show = |name: &str, t: Option<f64>| match t {
                Some(t) => println!("{name:<8} t = {t:<22} gamma*t = {}", gamma * t),
                None => println!("{name:<8} undefined"),
            };
            match kind {
                AlgebraKind::Su11 => {
                    show("T-", ct.t_minus);
                    show("T+", ct.t_plus);
                    show("T", ct.t_star);
                    if let Some(z) = ct.z_at_t_star {
                        println!("|z(T)|   {z}");
                    }
                }
                AlgebraKind::Su2 => {
                    show("T", ct.t_star);
                    show("T'", ct.t_prime);
                }
            }
            show("approx", ct.t_approx);
        }
        Command::Figures { out, svg } => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(thread_count())
                .build()
                .map_err(|e| CliError::Numerical(e.to_string()))?;
            let results: Vec<_> = pool.install(|| {
                PRESET_NAMES
                    .par_iter()
                    .map(|name| preset(name).and_then(|sc| run_to_dir(&sc, &out, svg)))
                    .collect()
            });
            for r in results {
                let (res, paths) = r?;
                report_run(&res, &paths);
            }
        }
        Command::Verify => {
            let results = verify::run_all();
            print!("{}", verify::report(&results));
            let ok = results.iter().all(|c| c.passed());
            println!(
                "{}",
                if ok {
                    "all criteria passed"
                } else {
                    "some criteria failed"
                }
            );
            if !ok {
                return Ok(ExitCode::from(4));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
