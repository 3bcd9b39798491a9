use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use skewbound::csvout::{write_rows, Row};
use skewbound::run::{enforce, render_report, run_compute, run_sweep, Settings};
use skewbound::{examples, parse_scenario, parse_str, CliError, Scenario};
use skewbound_core::bounds::Strategy;
use skewbound_core::MetricSpec;

#[derive(Parser)]
#[command(name = "skewbound", version, about = "Skew-information uncertainty bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// CSV destination (stdout if omitted).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Permutation search; by default exhaustive when feasible, sampled otherwise.
    #[arg(long, global = true, value_enum)]
    strategy: Option<StrategyArg>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Random candidates for sampled search.
    #[arg(long, global = true, default_value_t = 2000)]
    samples: usize,
    /// Override the scenario metric: wy, sld or wyd:<alpha>.
    #[arg(long, global = true)]
    metric: Option<MetricSpec>,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Exhaustive,
    Sampled,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate every task once at the scenario's parameter values.
    Compute { scenario: PathBuf },
    /// Run the scenario's sweep task and emit one CSV row per grid point.
    Sweep { scenario: PathBuf },
    /// Re-run a bundled example (1, 2 or 3).
    Reproduce {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=3))]
        example: u8,
    },
}

impl Cli {
    fn strategy(&self) -> Strategy {
        match self.strategy {
            None => Strategy::Auto {
                samples: self.samples,
                seed: self.seed,
            },
            Some(StrategyArg::Exhaustive) => Strategy::Exhaustive,
            Some(StrategyArg::Sampled) => Strategy::Sampled {
                samples: self.samples,
                seed: self.seed,
            },
        }
    }

    fn settings(&self, s: &Scenario) -> Settings {
        Settings::for_scenario(s, self.metric, self.strategy())
    }

    fn emit(&self, sweep: Option<&str>, rows: &[Row]) -> Result<(), CliError> {
        match &self.out {
            Some(path) => {
                let file = std::fs::File::create(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
                write_rows(std::io::BufWriter::new(file), sweep, rows)
            }
            None => write_rows(std::io::stdout().lock(), sweep, rows),
        }
    }
}

fn compute(cli: &Cli, s: &Scenario) -> Result<(), CliError> {
    let settings = cli.settings(s);
    let (point, comparisons) = run_compute(s, &settings)?;
    eprint!("{}", render_report(&settings, &point, &comparisons));
    cli.emit(
        None,
        &[Row {
            sweep: None,
            columns: point.columns(),
        }],
    )?;
    enforce(&comparisons)
}

fn column(rows: &[Row], name: &str) -> Option<Vec<f64>> {
    rows.iter()
        .map(|r| r.columns.iter().find(|(k, _)| k == name).map(|(_, v)| *v))
        .collect()
}

fn max_gap(rows: &[Row], a: &str, b: &str) -> Option<f64> {
    let (x, y) = (column(rows, a)?, column(rows, b)?);
    Some(x.iter().zip(&y).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max))
}

fn sweep(cli: &Cli, s: &Scenario) -> Result<(), CliError> {
    let settings = cli.settings(s);
    let out = run_sweep(s, &settings)?;
    cli.emit(Some(&out.param), &out.rows)?;
    let mut err = std::io::stderr().lock();
    let _ = writeln!(
        err,
        "metric {}: {} rows over {}, all bound invariants held",
        settings.metric,
        out.rows.len(),
        out.param
    );
    for (a, b) in [("I_1", "I_2"), ("I_3", "I_4"), ("S_3_1", "S_4_3")] {
        if let Some(g) = max_gap(&out.rows, a, b) {
            let _ = writeln!(err, "  max |{a} - {b}| = {g:.3e}");
        }
    }
    if let (Some(t), Some(n)) = (column(&out.rows, "LB_thm3"), column(&out.rows, "LB_norm")) {
        let margin = t.iter().zip(&n).map(|(a, b)| a - b).fold(f64::INFINITY, f64::min);
        let _ = writeln!(err, "  min (LB_thm3 - LB_norm) = {margin:.6}");
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Compute { scenario } => compute(cli, &parse_scenario(scenario)?),
        Command::Sweep { scenario } => sweep(cli, &parse_scenario(scenario)?),
        Command::Reproduce { example } => {
            let s = parse_str(examples::builtin(*example).expect("range-checked by clap"))?;
            if s.sweep().is_some() {
                sweep(cli, &s)
            } else {
                compute(cli, &s)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
