use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qpoc_cli::config::SimConfig;
use qpoc_cli::simulate::{run_simulation, write_simulation};
use qpoc_cli::sweep::{describe, run_sweep, write_sweep};
use qpoc_cli::verify::{run_verify, Selection};
use qpoc_cli::{RunError, EXIT_OK, EXIT_VERIFY};

#[derive(Parser)]
#[command(name = "qpoc", version, about = "N-body versus mean-field Lindblad entropy experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one N-body simulation against the mean-field flow.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        record_stride: Option<usize>,
    },
    /// Run several N and fit the decay rate of the final entropy.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_delimiter = ',')]
        n_list: Option<Vec<usize>>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        record_stride: Option<usize>,
    },
    /// Run the seeded property suites.
    Verify {
        #[arg(long, default_value = "all")]
        suite: Selection,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn load(config: &PathBuf, out: Option<PathBuf>, stride: Option<usize>) -> Result<SimConfig, RunError> {
    let mut cfg = SimConfig::from_path(config)?;
    if let Some(o) = out {
        cfg.out_dir = o;
    }
    if let Some(s) = stride {
        cfg.record_stride = s;
    }
    Ok(cfg)
}

fn report_violations(violations: &[String]) -> i32 {
    for v in violations {
        eprintln!("violation: {v}");
    }
    if violations.is_empty() {
        EXIT_OK
    } else {
        EXIT_VERIFY
    }
}

fn run(cli: Cli) -> Result<i32, RunError> {
    match cli.command {
        Command::Simulate { config, out, record_stride } => {
            let cfg = load(&config, out, record_stride)?;
            let v = cfg.validate()?;
            let n = cfg
                .single_n()
                .ok_or_else(|| RunError::Config("config needs `n` (or a non-empty `n_list`)".into()))?;
            let result = run_simulation(&v, n)?;
            write_simulation(&cfg.out_dir, &result, &cfg)?;
            println!("N = {n}: final h_n = {}", qpoc_cli::format::sig12(result.final_entropy()));
            println!("wrote {}", cfg.out_dir.display());
            Ok(report_violations(&result.violations))
        }
        Command::Sweep { config, n_list, out, record_stride } => {
            let mut cfg = load(&config, out, record_stride)?;
            if let Some(list) = n_list {
                cfg.n_list = Some(list);
            }
            let list = cfg.all_n();
            if list.is_empty() {
                return Err(RunError::Config("sweep needs --n-list or `n_list` in the config".into()));
            }
            let v = cfg.validate()?;
            let result = run_sweep(&v, &list)?;
            write_sweep(&cfg.out_dir, &result, &cfg)?;
            print!("{}", describe(&result));
            println!("wrote {}", cfg.out_dir.display());
            Ok(report_violations(&result.violations()))
        }
        Command::Verify { suite, seed } => {
            let report = run_verify(suite, seed);
            print!("{}", report.render());
            Ok(if report.all_passed() { EXIT_OK } else { EXIT_VERIFY })
        }
    }
}

fn main() -> ExitCode {
    let code = match run(Cli::parse()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
