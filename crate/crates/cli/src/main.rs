use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use firefly_core::constrained::PenaltyParams;
use firefly_core::harness::{
    self, format_float, landscape_grid, paper_experiment, paper_suite, run_function, to_csv,
    write_file, ExperimentReport, LandscapeConfig, OutputFormat, RunConfig,
};
use firefly_core::testfns::RealizationPolicy;
use firefly_core::{Error, FaParams, Result};

#[derive(Parser)]
#[command(name = "firefly", version, about = "Firefly algorithm experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Json => OutputFormat::Json,
            Format::Csv => OutputFormat::Csv,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Paper,
}

#[derive(Subcommand)]
enum Command {
    /// Single run on a registry function; emits the trace.
    Run {
        #[arg(long)]
        function: String,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 25)]
        n: usize,
        #[arg(long, default_value_t = 20)]
        iters: usize,
        #[arg(long, default_value_t = 0.2)]
        alpha: f64,
        #[arg(long, default_value_t = 1.0)]
        beta0: f64,
        #[arg(long, default_value_t = 1.0)]
        gamma: f64,
        #[arg(long = "m-exp", default_value_t = 2.0)]
        m_exp: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Redraw stochastic coefficients before every evaluation.
        #[arg(long)]
        resample: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Replicate experiments; one report file per experiment.
    Bench {
        #[arg(long, value_enum, default_value = "paper")]
        suite: Suite,
        #[arg(long, default_value_t = 50)]
        replicates: usize,
        #[arg(long = "base-seed", default_value_t = 0)]
        base_seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Worker threads (all cores by default). Output does not depend on it.
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Penalized pressure vessel design over several seeds.
    Vessel {
        #[arg(long, default_value_t = 40)]
        n: usize,
        #[arg(long, default_value_t = 20)]
        iters: usize,
        #[arg(long, default_value_t = 1e6)]
        lambda: f64,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[arg(long, default_value_t = 30)]
        replicates: usize,
        #[arg(long = "base-seed", default_value_t = 0)]
        base_seed: u64,
        /// Round shell and head thickness up to multiples of 0.0625.
        #[arg(long = "snap-thickness")]
        snap_thickness: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Function values on a 2-D grid.
    Landscape {
        #[arg(long)]
        function: String,
        #[arg(long, default_value_t = 101)]
        resolution: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => write_file(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run_experiment(
    config: &harness::ExperimentConfig,
    threads: Option<usize>,
) -> Result<ExperimentReport> {
    match threads {
        Some(t) => harness::run_experiment_with_threads(config, t),
        None => harness::run_experiment(config),
    }
}

fn summary_line(r: &ExperimentReport) -> String {
    let a = &r.aggregates;
    let mut line = format!(
        "{}: success {}/{} ({:.2}), best {}, median {}, mean evaluations {:.1}",
        r.config.name,
        a.successes,
        a.runs,
        a.success_rate,
        a.best_value,
        a.median_value,
        a.mean_evaluations
    );
    if let Some(c) = a.best_feasible_cost {
        line += &format!(", best feasible cost {c}");
    }
    if let Some(c) = &a.capture {
        line += &format!(", all peaks captured {}/{}", c.all_occupied_runs, a.runs);
    }
    line
}

fn execute(command: Command) -> Result<()> {
    match command {
        Command::Run {
            function,
            dim,
            n,
            iters,
            alpha,
            beta0,
            gamma,
            m_exp,
            seed,
            resample,
            out,
            format,
        } => {
            let params = FaParams::default()
                .with_population(n)
                .with_max_iterations(iters)
                .with_alpha(alpha)
                .with_beta0(beta0)
                .with_gamma(gamma)
                .with_distance_exponent(m_exp)
                .with_seed(seed);
            let realization = if resample {
                RealizationPolicy::ResamplePerEvaluation
            } else {
                RealizationPolicy::Frozen
            };
            let report = run_function(&RunConfig {
                function,
                dim,
                params,
                realization,
            })?;
            let text = match format {
                Format::Json => report.to_json()?,
                Format::Csv => report.to_csv()?,
            };
            emit(out.as_ref(), &text)
        }
        Command::Bench {
            suite: Suite::Paper,
            replicates,
            base_seed,
            out,
            format,
            threads,
        } => {
            let mut summary = Vec::new();
            for config in paper_suite(replicates, base_seed)? {
                let config = config.with_format(format.into());
                let report = run_experiment(&config, threads)?;
                let path = out.join(format!("{}.{}", config.name, config.format.extension()));
                write_file(&path, &report.render()?)?;
                println!("{}", summary_line(&report));
                let a = &report.aggregates;
                summary.push(vec![
                    config.name.clone(),
                    a.runs.to_string(),
                    a.successes.to_string(),
                    format_float(a.success_rate),
                    format_float(a.best_value),
                    format_float(a.median_value),
                    format_float(a.worst_value),
                    format_float(a.mean_evaluations),
                ]);
            }
            let header = [
                "experiment",
                "runs",
                "successes",
                "success_rate",
                "best_value",
                "median_value",
                "worst_value",
                "mean_evaluations",
            ]
            .map(String::from);
            write_file(out.join("summary.csv"), &to_csv(&header, &summary)?)
        }
        Command::Vessel {
            n,
            iters,
            lambda,
            p,
            replicates,
            base_seed,
            snap_thickness,
            out,
            format,
        } => {
            let mut config = paper_experiment("vessel", replicates, base_seed)?
                .with_penalty(PenaltyParams::new(lambda, p)?)
                .with_snap_thickness(snap_thickness)
                .with_format(format.into());
            config.params = config.params.with_population(n).with_max_iterations(iters);
            let report = harness::run_experiment(&config)?;
            eprintln!("{}", summary_line(&report));
            emit(out.as_ref(), &report.render()?)
        }
        Command::Landscape {
            function,
            resolution,
            seed,
            out,
            format,
        } => {
            let grid = landscape_grid(&LandscapeConfig::new(function, resolution, seed))?;
            let text = match format {
                Format::Json => grid.to_json()?,
                Format::Csv => grid.to_csv()?,
            };
            write_file(&out, &text)
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_) | Error::Dimension { .. } => 2,
        Error::Lookup { .. } => 3,
        Error::Evaluation(_) | Error::Io(_) => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
