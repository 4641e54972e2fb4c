use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use mdwave_cli::{catalog, execute, exit_code, load_scenario, EXIT_PARSE};

/// Run a measure-driven wave scenario and write its summary.
#[derive(Parser, Debug)]
#[command(name = "mdwave", version)]
struct Args {
    /// Scenario file or bundled scenario name.
    #[arg(long, required_unless_present = "list")]
    scenario: Option<String>,
    /// Output directory (defaults to the scenario's `output_dir` or `out/<name>`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides `run.seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads for ensemble runs.
    #[arg(long)]
    threads: Option<usize>,
    /// Exit with 1 when any check fails.
    #[arg(long)]
    check: bool,
    /// Print the bundled scenarios and exit.
    #[arg(long)]
    list: bool,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            let code = if e.use_stderr() { EXIT_PARSE } else { 0 };
            return ExitCode::from(code as u8);
        }
    };
    if args.list {
        print!("{}", catalog::listing());
        return ExitCode::SUCCESS;
    }
    if let Some(n) = args.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("thread pool: {e}");
        }
    }
    let source = args.scenario.expect("required unless --list");
    let run = load_scenario(&source).and_then(|s| execute(s, args.seed, args.out.as_deref()));
    match &run {
        Ok(e) => {
            print!("{}", e.json);
            eprintln!("wrote {}", e.out_dir.display());
        }
        Err(e) => eprintln!("error: {e}"),
    }
    ExitCode::from(exit_code(&run, args.check) as u8)
}
