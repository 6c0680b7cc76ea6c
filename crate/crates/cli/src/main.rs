use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use wu_cli::eval::parse_point;
use wu_cli::{eval_metric, run_experiment, write_csv, CliError, CliResult, EvalKind, Experiment, ExperimentConfig, Params, ResultRow};
use wu_core::domains::DomainSpec;

const COLUMNS: &str = "\
Output is CSV with a header row. Every row starts with `experiment,case`,
continues with the experiment's input columns and computed values, and ends
with `tolerance,pass`. Floats carry 17 significant digits.

Exit status: 0 when every row passes, 1 when some row fails, 2 for usage or
configuration errors, 3 when a solver fails.";

#[derive(Parser)]
#[command(name = "wu", version, about = "Wu pseudometric experiments and evaluations", after_help = COLUMNS)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment (see `wu list`).
    Run {
        experiment: String,
        #[command(flatten)]
        flags: Flags,
        /// TOML file with top-level keys and per-experiment tables.
        #[arg(long)]
        config: Option<String>,
    },
    /// Evaluate one pseudometric at a point and vector.
    Eval {
        /// Domain, e.g. `elem:1,1`, `g2`, `gn:3`, `truncated:3:4`, `polydisc:1,2`,
        /// `synthetic:one`, or a product such as `g2*polydisc:1`.
        #[arg(long)]
        domain: Option<String>,
        /// gamma, gammaK, azukawa, kobayashi, wu or wu-full.
        #[arg(long, default_value = "kobayashi")]
        kind: String,
        /// Order of the Caratheodory pseudometric; implies `gamma`.
        #[arg(long)]
        k: Option<u32>,
        /// Base point, comma separated, e.g. `0.5,0.1+0.2i`.
        #[arg(long)]
        point: String,
        /// Tangent vector, comma separated.
        #[arg(long)]
        vector: String,
        #[command(flatten)]
        flags: Flags,
    },
    /// List experiments.
    List,
}

#[derive(Args)]
struct Flags {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    x: Option<f64>,
    /// Comma separated.
    #[arg(long, value_delimiter = ',')]
    x_grid: Option<Vec<f64>>,
    #[arg(long)]
    t: Option<f64>,
    /// Comma separated.
    #[arg(long, value_delimiter = ',')]
    m_list: Option<Vec<f64>>,
    /// Exponents of an elementary Reinhardt domain, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    alpha: Option<Vec<f64>>,
    #[arg(long, allow_hyphen_values = true)]
    big_c: Option<f64>,
    /// Sampled directions per indicatrix.
    #[arg(long)]
    resolution: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    /// CSV destination; standard output when absent.
    #[arg(long)]
    out: Option<String>,
}

impl Flags {
    fn params(&self) -> Params {
        Params {
            n: self.n,
            x: self.x,
            x_grid: self.x_grid.clone(),
            t: self.t,
            m_list: self.m_list.clone(),
            alpha: self.alpha.clone(),
            big_c: self.big_c,
            resolution: self.resolution,
            tol: self.tol,
            out: self.out.clone(),
        }
    }
}

fn emit(rows: &[ResultRow], out: Option<&str>) -> CliResult<()> {
    match out {
        Some(path) => {
            let file = File::create(path).map_err(|e| CliError::Io(format!("{path}: {e}")))?;
            write_csv(rows, BufWriter::new(file))
        }
        None => write_csv(rows, io::stdout().lock()),
    }
}

fn summarize(label: &str, rows: &[ResultRow]) {
    let failed: Vec<&ResultRow> = rows.iter().filter(|r| !r.pass).collect();
    let mut err = io::stderr().lock();
    for r in &failed {
        let _ = writeln!(err, "FAIL {} {}", r.experiment, r.case);
    }
    let _ = writeln!(err, "{label}: {} of {} rows pass", rows.len() - failed.len(), rows.len());
}

fn run(cli: Cli) -> CliResult<bool> {
    match cli.command {
        Command::List => {
            for e in Experiment::ALL {
                println!("{:<22}{}", e.name(), e.description());
            }
            Ok(true)
        }
        Command::Run { experiment, flags, config } => {
            let experiment: Experiment = experiment.parse()?;
            let cfg = match config {
                Some(path) => {
                    let text = std::fs::read_to_string(&path).map_err(|e| CliError::Config(format!("{path}: {e}")))?;
                    ExperimentConfig::from_config_str(experiment, &text)
                        .map_err(|e| CliError::Config(format!("{path}: {e}")))?
                }
                None => ExperimentConfig::new(experiment),
            }
            .with_overrides(&flags.params());
            let rows = run_experiment(&cfg)?;
            emit(&rows, cfg.params.out.as_deref())?;
            summarize(experiment.name(), &rows);
            Ok(rows.iter().all(|r| r.pass))
        }
        Command::Eval { domain, kind, k, point, vector, flags } => {
            let spec: DomainSpec = match (domain, &flags.alpha) {
                (Some(d), _) => d.parse()?,
                (None, Some(alpha)) => {
                    let list = alpha.iter().map(f64::to_string).collect::<Vec<_>>().join(",");
                    format!("elem:{list}:{}", flags.big_c.unwrap_or(0.0)).parse()?
                }
                (None, None) => return Err(CliError::Usage("eval needs --domain or --alpha".into())),
            };
            let kind: EvalKind = match k {
                Some(k) => format!("gamma{k}").parse()?,
                None => kind.parse()?,
            };
            let row = eval_metric(
                &spec,
                kind,
                &parse_point(&point)?,
                &parse_point(&vector)?,
                flags.resolution.unwrap_or(1024),
            )?;
            let rows = [row];
            emit(&rows, flags.out.as_deref())?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
