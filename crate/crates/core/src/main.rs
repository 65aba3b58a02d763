use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

use psm_kinetic::cli::{self, Experiment, RunConfig};
use psm_kinetic::diag::fmt_real;
use psm_kinetic::Error;

#[derive(Parser)]
#[command(name = "psm-kinetic", version, about = "Conservative semi-Lagrangian transport experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Periodic step profile under constant advection (PSM, SLS, upwind).
    Step1d(Common),
    /// Solid-body rotation of a Gaussian blob with the finite-volume form.
    Rotation2d(Common),
    /// 4D drift-kinetic benchmark.
    Driftkinetic(Common),
}

#[derive(Args)]
struct Common {
    /// TOML run configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (overrides `run.out_dir`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// bsl | psm | sls, plus `upwind` for step1d.
    #[arg(long)]
    scheme: Option<String>,
    /// directional_split | finite_volume.
    #[arg(long)]
    form: Option<String>,
    /// SLS slope-ratio gain.
    #[arg(long = "K")]
    k: Option<f64>,
    /// Worker threads (0: one per core).
    #[arg(long)]
    threads: Option<usize>,
    /// Seed of the initial noise.
    #[arg(long)]
    seed: Option<u64>,
}

fn configure(c: &Common, experiment: Experiment) -> Result<(RunConfig, Option<String>), Error> {
    let mut cfg = match &c.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(o) = &c.out {
        cfg.run.out_dir = o.clone();
    }
    let mut step_scheme = None;
    if let Some(s) = &c.scheme {
        if experiment == Experiment::Step1d {
            let s = s.to_ascii_lowercase();
            if s != "upwind" {
                cfg.scheme.scheme = cli::parse_scheme(&s)?;
            }
            step_scheme = Some(s);
        } else {
            cfg.scheme.scheme = cli::parse_scheme(s)?;
        }
    }
    if let Some(f) = &c.form {
        cfg.scheme.form = cli::parse_form(f)?;
    }
    if let Some(k) = c.k {
        cfg.scheme.k = k;
    }
    if let Some(t) = c.threads {
        cfg.run.threads = t;
    }
    if let Some(s) = c.seed {
        cfg.run.seed = s;
    }
    cfg.validate(experiment)?;
    Ok((cfg, step_scheme))
}

fn run(experiment: Experiment, c: &Common) -> Result<(), Error> {
    let (cfg, step_scheme) = configure(c, experiment)?;
    if cfg.run.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.run.threads)
            .build_global()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    }
    let out = cfg.run.out_dir.clone();
    match experiment {
        Experiment::Step1d => {
            let report = cli::run_step1d(&cfg, step_scheme.as_deref(), Some(&out))?;
            for s in &report.stats {
                println!(
                    "{}: peak overshoot {} of step height, mass error {}",
                    s.scheme,
                    fmt_real(s.peak_relative(report.height)),
                    fmt_real(s.mass_error)
                );
            }
        }
        Experiment::Rotation2d => {
            let r = cli::run_rotation2d(&cfg, Some(&out))?;
            println!(
                "{} steps, L2 error {}, mass error {}",
                r.steps,
                fmt_real(r.l2_error),
                fmt_real(r.mass_error)
            );
        }
        Experiment::Driftkinetic => {
            let r = cli::run_driftkinetic(&cfg, Some(&out))?;
            if let (Some(first), Some(last)) = (r.records.first(), r.records.last()) {
                println!(
                    "{}: {} steps to t = {}, relative mass change {}",
                    cfg.scheme.label(),
                    last.step,
                    fmt_real(last.time),
                    fmt_real((last.mass - first.mass) / first.mass)
                );
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (experiment, common) = match &cli.command {
        Command::Step1d(c) => (Experiment::Step1d, c),
        Command::Rotation2d(c) => (Experiment::Rotation2d, c),
        Command::Driftkinetic(c) => (Experiment::Driftkinetic, c),
    };
    match run(experiment, common) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_numerical() {
                ExitCode::from(3)
            } else {
                ExitCode::from(2)
            }
        }
    }
}
