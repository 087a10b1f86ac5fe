use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use median_inequality::curves::{curve_samples_with, index_table, reference_catalog, Strategy};
use median_inequality::format::fixed;
use median_inequality::pipeline::{run_pipeline, PipelineConfig};
use median_inequality::transfer::{run_plan, Direction, PlanStep, TransferPlan, TRAJECTORY_HEADER};
use median_inequality::{Error, IndexReport, QuadratureConfig, QuantileModel, Sample};

#[derive(Parser)]
#[command(name = "medineq", version, about = "Median-based income inequality indices")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Decimal places in reported values.
    #[arg(long, global = true, default_value_t = 4)]
    precision: usize,
    /// Write the main output to this file instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(clap::Args)]
struct QuadArgs {
    /// Quadrature panels on the unit interval.
    #[arg(long, default_value_t = QuadratureConfig::default().panels)]
    panels: usize,
    /// Gauss-Legendre nodes per panel.
    #[arg(long, default_value_t = QuadratureConfig::default().nodes)]
    nodes: usize,
}

impl QuadArgs {
    fn config(&self) -> Result<QuadratureConfig, Error> {
        QuadratureConfig::new(self.panels, self.nodes)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Indices and rankings of the sixteen reference distributions.
    Table1 {
        #[command(flatten)]
        quad: QuadArgs,
    },
    /// Sample an equality curve, e.g. `paretoIV:sigma=1,alpha=2,gamma=2`.
    Curve {
        spec: String,
        /// Strategy 1, 2 or 3.
        #[arg(long)]
        k: u32,
        /// Number of grid points.
        #[arg(long, default_value_t = 1000)]
        points: usize,
        #[command(flatten)]
        quad: QuadArgs,
    },
    /// All seven indices of a sample.
    #[command(allow_negative_numbers = true)]
    Indices {
        values: Vec<f64>,
        /// Read incomes from a file (whitespace or comma separated).
        #[arg(long, conflicts_with = "values")]
        file: Option<PathBuf>,
    },
    /// Replay a transfer plan and check every predicted direction.
    #[command(allow_negative_numbers = true)]
    Transfer {
        /// Plan file with one `L H c` step per line.
        #[arg(long)]
        plan: PathBuf,
        values: Vec<f64>,
        #[arg(long, conflicts_with = "values")]
        file: Option<PathBuf>,
    },
    /// Per-group report and rankings from survey records.
    Cohorts {
        data: PathBuf,
        config: PathBuf,
        /// Strategies to rank by.
        #[arg(long, value_delimiter = ',', default_values_t = vec![1, 2, 3])]
        rank_by: Vec<u32>,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: if e.is_computational() { 2 } else { 1 },
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Error::from(e).into()
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if !e.use_stderr() {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("invalid arguments");
            eprintln!("error: {}", first.trim_start_matches("error: "));
            return ExitCode::from(1);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message.replace('\n', " "));
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Table1 { quad } => table1(cli, &quad.config()?),
        Command::Curve {
            spec,
            k,
            points,
            quad,
        } => curve(cli, spec, *k, *points, &quad.config()?),
        Command::Indices { values, file } => indices(cli, &load_sample(values, file.as_deref())?),
        Command::Transfer { plan, values, file } => {
            transfer(cli, &load_sample(values, file.as_deref())?, plan)
        }
        Command::Cohorts {
            data,
            config,
            rank_by,
        } => cohorts(cli, data, config, rank_by),
    }
}

fn emit(cli: &Cli, text: &str) -> Result<(), Failure> {
    match &cli.output {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn json<T: Serialize + ?Sized>(value: &T) -> Result<String, Failure> {
    let mut s = serde_json::to_string_pretty(value).map_err(Error::from)?;
    s.push('\n');
    Ok(s)
}

/// Left-aligns the first column and right-aligns the rest.
fn align(rows: &[Vec<String>]) -> String {
    let ncol = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..ncol)
        .map(|j| rows.iter().filter_map(|r| r.get(j)).map(|c| c.chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in rows {
        let cells: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(j, c)| {
                if j == 0 {
                    format!("{c:<w$}", w = widths[j])
                } else {
                    format!("{c:>w$}", w = widths[j])
                }
            })
            .collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    out
}

fn table1(cli: &Cli, quad: &QuadratureConfig) -> Result<(), Failure> {
    let rows = index_table(&reference_catalog(), quad)?;
    let p = cli.precision;
    let text = match cli.format {
        Format::Json => json(&rows)?,
        Format::Csv => {
            let mut out = String::from("distribution,psi1,psi2,psi3,rank1,rank2,rank3\n");
            for r in &rows {
                writeln!(
                    out,
                    "{},{},{},{},{},{},{}",
                    median_inequality::format::csv_field(&r.label),
                    fixed(r.psi[0], p),
                    fixed(r.psi[1], p),
                    fixed(r.psi[2], p),
                    r.ranks[0],
                    r.ranks[1],
                    r.ranks[2]
                )
                .unwrap();
            }
            out
        }
        Format::Text => {
            let mut table = vec![["Distribution", "Psi1", "Psi2", "Psi3", "Rank1", "Rank2", "Rank3"]
                .map(String::from)
                .to_vec()];
            for r in &rows {
                let mut row = vec![r.label.clone()];
                row.extend(r.psi.iter().map(|&v| fixed(v, p)));
                row.extend(r.ranks.iter().map(|x| x.to_string()));
                table.push(row);
            }
            align(&table)
        }
    };
    emit(cli, &text)
}

fn curve(cli: &Cli, spec: &str, k: u32, points: usize, quad: &QuadratureConfig) -> Result<(), Failure> {
    let model: QuantileModel = spec.parse()?;
    let strategy = Strategy::from_index(k)?;
    let samples = curve_samples_with(&model, strategy, points, quad)?;
    let body = match cli.format {
        Format::Json => json(&samples)?,
        Format::Csv | Format::Text => samples.to_csv(),
    };
    match &cli.output {
        Some(path) => {
            std::fs::write(path, body)?;
            println!("Psi{k} = {}", fixed(samples.index, cli.precision));
        }
        None => print!("{body}"),
    }
    Ok(())
}

fn parse_values(text: &str) -> Result<Vec<f64>, Failure> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .flat_map(|l| l.split(|c: char| c == ',' || c.is_whitespace()))
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<f64>().map_err(|_| Failure {
                code: 1,
                message: format!("`{t}` is not a number"),
            })
        })
        .collect()
}

fn load_sample(values: &[f64], file: Option<&Path>) -> Result<Sample, Failure> {
    let values = match file {
        Some(path) => parse_values(&std::fs::read_to_string(path)?)?,
        None => values.to_vec(),
    };
    Ok(Sample::new(values)?)
}

fn indices(cli: &Cli, s: &Sample) -> Result<(), Failure> {
    let report = IndexReport::compute(s, s.len())?;
    let p = cli.precision;
    let text = match cli.format {
        Format::Json => json(&report)?,
        Format::Csv => format!("{}\n{}\n", IndexReport::CSV_HEADER, report.csv_row("sample", p)),
        Format::Text => {
            let mut rows = vec![vec!["n".to_string(), s.len().to_string()]];
            for (name, v) in [
                ("mean", report.mean),
                ("median", report.median),
                ("G", report.gini),
                ("Z", report.zenga),
                ("D", report.dg),
                ("G2", report.g2),
                ("Psi1", report.psi1),
                ("Psi2", report.psi2),
                ("Psi3", report.psi3),
            ] {
                rows.push(vec![name.to_string(), fixed(v, p)]);
            }
            align(&rows)
        }
    };
    emit(cli, &text)
}

fn direction_cell(d: Option<Direction>) -> String {
    d.map_or_else(|| "NA".to_string(), |d| d.to_string())
}

fn trajectory_rows(steps: &[PlanStep], precision: usize) -> Vec<Vec<String>> {
    let mut header: Vec<String> = TRAJECTORY_HEADER.split(',').map(String::from).collect();
    header.extend(["predicted1", "predicted2", "predicted3", "observed1", "observed2", "observed3"].map(String::from));
    let mut rows = vec![header];
    for st in steps {
        let mut row = vec![
            st.step.to_string(),
            st.transfer.receiver.to_string(),
            st.transfer.giver.to_string(),
            st.transfer.amount.to_string(),
        ];
        row.extend(st.psi.iter().map(|&v| fixed(v, precision)));
        row.extend(st.predicted.iter().map(|&d| direction_cell(d)));
        row.extend(st.observed.iter().map(|&d| d.to_string()));
        rows.push(row);
    }
    rows
}

fn transfer(cli: &Cli, s: &Sample, plan_path: &Path) -> Result<(), Failure> {
    let plan: TransferPlan = std::fs::read_to_string(plan_path)?.parse()?;
    let steps = run_plan(s, &plan.steps)?;
    let text = match cli.format {
        Format::Json => json(&steps)?,
        Format::Csv => {
            let mut out = String::new();
            for row in trajectory_rows(&steps, cli.precision) {
                out.push_str(&row.join(","));
                out.push('\n');
            }
            out
        }
        Format::Text => align(&trajectory_rows(&steps, cli.precision)),
    };
    emit(cli, &text)?;
    for st in &steps {
        for (i, (pred, obs)) in st.predicted.iter().zip(&st.observed).enumerate() {
            if let Some(pred) = pred {
                if pred != obs {
                    return Err(Failure {
                        code: 2,
                        message: format!(
                            "step {}: predicted {pred} for Psi{} but observed {obs}",
                            st.step,
                            i + 1
                        ),
                    });
                }
            }
        }
    }
    Ok(())
}

fn cohorts(cli: &Cli, data: &Path, config: &Path, rank_by: &[u32]) -> Result<(), Failure> {
    let cfg = PipelineConfig::load(config)?;
    let strategies = rank_by
        .iter()
        .map(|&k| Strategy::from_index(k))
        .collect::<Result<Vec<_>, _>>()?;
    let table = run_pipeline(std::fs::File::open(data)?, &cfg, &strategies)?;
    for d in &table.diagnostics {
        eprintln!("warning: {d}");
    }
    let text = match cli.format {
        Format::Json => json(&table)?,
        Format::Csv => table.to_csv(cli.precision),
        Format::Text => table.to_text(cli.precision),
    };
    emit(cli, &text)
}
