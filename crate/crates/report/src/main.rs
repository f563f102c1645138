use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gtorsion_report::config::{AlgebraSource, FrameChoice, RunConfig};
use gtorsion_report::error::{RunError, RunResult};
use gtorsion_report::report::{run_cohomology, run_convergence, run_field, run_verify};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "gtorsion", version, about = "Bracket-field and Lie algebra diagnostics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Jacobi, Killing form, classification and dual basis.
    Verify {
        #[command(flatten)]
        source: Source,
        /// Fail with exit code 3 when no dual basis exists.
        #[arg(long)]
        dual_basis: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Adjoint cohomology dimensions and the homotopy check.
    Cohomology {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Fail with exit code 3 on non-semisimple algebras.
        #[arg(long)]
        homotopy: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Per-point diagnostics CSV plus a JSON summary.
    Field {
        #[command(flatten)]
        field: FieldArgs,
        /// Diagnostics CSV path.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Summary path; stdout when omitted.
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Norms and observed orders over successive halvings of h.
    Converge {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, default_value_t = 3)]
        levels: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Built-in algebra: so3, su2, sl2r, heisenberg3, so4, abelian<n>.
    #[arg(long)]
    algebra: Option<String>,
    /// JSON algebra spec document.
    #[arg(long)]
    spec: Option<PathBuf>,
}

impl Source {
    fn resolve(self) -> AlgebraSource {
        match (self.algebra, self.spec) {
            (Some(name), _) => AlgebraSource::Named(name),
            (None, Some(path)) => AlgebraSource::Spec(path),
            (None, None) => unreachable!("clap requires one source"),
        }
    }
}

#[derive(Args)]
struct FieldArgs {
    #[command(flatten)]
    source: Source,
    /// identity, exp_chart, random_smooth or scaled:<factor>.
    #[arg(long, default_value = "exp_chart")]
    frame: FrameChoice,
    #[arg(long, default_value_t = 0.02)]
    h: f64,
    /// Chart radius; defaults to 0.4 over the largest spectral norm of ad.
    #[arg(long)]
    radius: Option<f64>,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Evaluate sample points on a thread pool.
    #[arg(long)]
    parallel: bool,
    /// Thread count for --parallel.
    #[arg(long)]
    threads: Option<usize>,
}

impl FieldArgs {
    fn config(self, levels: usize) -> (RunConfig, Option<usize>) {
        let mut config = RunConfig::new(self.source.resolve(), self.frame);
        config.step = self.h;
        config.radius = self.radius;
        config.samples = self.samples;
        config.seed = self.seed;
        config.levels = levels;
        config.parallel = self.parallel;
        (config, self.threads)
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn emit(text: &str, out: Option<&Path>) -> RunResult<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| RunError::Write {
            path: path.to_path_buf(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> RunResult<T> {
    match threads {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| RunError::Config(e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}

fn run(cli: Cli) -> RunResult<()> {
    match cli.command {
        Command::Verify { source, dual_basis, out } => {
            let alg = source.resolve().load()?;
            emit(&json(&run_verify(&alg, dual_basis)?), out.as_deref())
        }
        Command::Cohomology {
            source,
            seed,
            homotopy,
            out,
        } => {
            let alg = source.resolve().load()?;
            emit(&json(&run_cohomology(&alg, seed, homotopy)?), out.as_deref())
        }
        Command::Field { field, out, summary } => {
            let (config, threads) = field.config(2);
            let result = with_threads(threads, || run_field(&config))??;
            if let Some(path) = &out {
                emit(&result.csv, Some(path))?;
            }
            emit(&json(&result.summary), summary.as_deref())
        }
        Command::Converge { field, levels, out } => {
            let (config, threads) = field.config(levels);
            let table = with_threads(threads, || run_convergence(&config))??;
            emit(&json(&table), out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
