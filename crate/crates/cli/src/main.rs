use std::process::ExitCode;

use clap::{Parser, Subcommand};
use weno_tvd::scenarios::{Scenario, SCENARIO_NAMES};
use weno_tvd_cli::driver::{convergence_table, run_convergence, run_scenario};
use weno_tvd_cli::{parse_config, CliError, RunArgs};

#[derive(Parser)]
#[command(name = "weno-tvd", version, about = "WENO / FLIC finite-volume solver for the standard advection and atmospheric test cases")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario and write snapshots, energy series and summary.json.
    Run(RunArgs),
    /// Run an advection scenario at several resolutions and tabulate errors.
    Converge {
        #[command(flatten)]
        args: RunArgs,
        /// Comma-separated cell counts, e.g. 50,100,200.
        #[arg(long, value_delimiter = ',')]
        ns: Option<Vec<usize>>,
    },
    /// Print the available scenarios.
    ListScenarios,
}

fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run(args) => {
            let cfg = parse_config(&args)?;
            let summary = run_scenario(&cfg)?;
            println!("{}: {} steps, output in {}", summary.scenario, summary.steps, cfg.output_dir.display());
            if let Some(e) = summary.errors {
                println!("L_inf = {:.6e}  L_1 = {:.6e}", e.linf, e.l1);
            }
            if let Some(d) = summary.max_energy_drift {
                println!("max |E/E0 - 1| = {d:.3e}");
            }
        }
        Command::Converge { args, ns } => {
            let cfg = parse_config(&args)?;
            let ns = ns.or(cfg.ns.clone()).unwrap_or_else(|| vec![50, 100, 200]);
            let rows = run_convergence(&cfg, &ns)?;
            print!("{}", convergence_table(&rows));
        }
        Command::ListScenarios => {
            for name in SCENARIO_NAMES {
                let sc = Scenario::by_name(name)?;
                println!("{name:<26} {}", sc.summary);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
