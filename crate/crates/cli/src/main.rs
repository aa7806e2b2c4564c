//! `ahp`: consistency checks, weights, rankings and reports for vendor
//! evaluation models, plus the interactive session server.

mod table;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use ahp_core::display;
use ahp_core::report::{render_report, Report, ReportFormat};
use ahp_core::{evaluate, evaluate_with, load_model, DecisionModel, Evaluation, ModelError, Override};
use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

#[derive(Parser)]
#[command(name = "ahp", version, about = "Analytic hierarchy process vendor evaluation")]
struct Cli {
    /// Print a generation timestamp before the output.
    #[arg(long, global = true)]
    timestamps: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Per-node λmax, CI, CR and verdict.
    Check {
        model: PathBuf,
        /// Exit 1 when any node is inconsistent.
        #[arg(long)]
        strict: bool,
        /// CR must stay below this value.
        #[arg(long)]
        threshold: Option<f64>,
    },
    /// Leaf criteria by global weight.
    Weights {
        model: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Score and rank the alternatives.
    Rank {
        model: PathBuf,
        /// Hypothetical rating, ALT:LEAF=RATING; the file is not modified.
        #[arg(long = "whatif", value_name = "ALT:LEAF=RATING")]
        whatif: Vec<Override>,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        /// Exit 1 when any node is inconsistent.
        #[arg(long)]
        strict: bool,
    },
    /// Full report: every intermediate table.
    Report {
        model: PathBuf,
        /// Markdown file, or directory for csv. Markdown goes to stdout when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// markdown or csv
        #[arg(long, default_value = "markdown")]
        format: ReportFormat,
    },
    /// Run the session service and host the web UI.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        #[arg(long, env = "AHP_STATE_DIR", default_value = "ahp-sessions")]
        state_dir: PathBuf,
        /// Web UI bundle to serve at /.
        #[arg(long)]
        assets: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{}: {source}", path.display())]
    Read { path: PathBuf, source: std::io::Error },
    #[error("{}: {source}", path.display())]
    Model { path: PathBuf, source: ModelError },
    #[error(transparent)]
    Eval(#[from] ahp_core::EvalError),
    #[error("{0}")]
    Output(String),
    #[error("inconsistent judgments at: {0}")]
    Strict(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Strict(_) => 1,
            _ => 2,
        }
    }
}

fn load(path: &Path) -> Result<DecisionModel, CliError> {
    let bytes = std::fs::read(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    load_model(&bytes).map_err(|source| CliError::Model {
        path: path.to_path_buf(),
        source,
    })
}

/// Command output plus a failure to report after printing it.
struct Output {
    text: String,
    failure: Option<CliError>,
}

impl From<String> for Output {
    fn from(text: String) -> Self {
        Output { text, failure: None }
    }
}

fn gated(text: String, eval: &Evaluation, strict: bool) -> Output {
    let bad = eval.weights.inconsistent_nodes();
    let failure = (strict && !bad.is_empty()).then(|| CliError::Strict(bad.join(", ")));
    Output { text, failure }
}

fn node_name(eval: &Evaluation, id: &str) -> String {
    eval.weights.node(id).map_or_else(|| id.to_string(), |n| n.name.clone())
}

fn check(model: &DecisionModel, threshold: Option<f64>, strict: bool) -> Result<Output, CliError> {
    let eval = evaluate(model, threshold)?;
    let rows: Vec<Vec<String>> = eval
        .weights
        .analyses
        .iter()
        .map(|a| {
            let r = &a.report;
            vec![
                node_name(&eval, &a.node_id),
                r.n.to_string(),
                display::index(r.lambda_max),
                display::index(r.ci),
                format!("{:.2}", r.ri),
                display::index(r.cr),
                display::verdict(r.consistent).to_string(),
            ]
        })
        .collect();
    let mut out = table::render(&["Node", "n", "λmax", "CI", "RI", "CR", "Decision"], &rows, &[1, 2, 3, 4, 5]);
    out.push_str(&format!("\nThreshold: CR < {}\n", eval.threshold));
    Ok(gated(out, &eval, strict))
}

fn csv_string(headers: &[&str], rows: &[Vec<String>]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| CliError::Output(e.to_string());
    w.write_record(headers).map_err(err)?;
    for r in rows {
        w.write_record(r).map_err(err)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Output(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Output(e.to_string()))
}

fn to_json<T: serde::Serialize>(v: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(v)
        .map(|s| s + "\n")
        .map_err(|e| CliError::Output(e.to_string()))
}

fn weights(model: &DecisionModel, format: Format) -> Result<String, CliError> {
    let eval = evaluate(model, None)?;
    match format {
        Format::Table => {
            let rows: Vec<Vec<String>> = eval
                .priorities
                .iter()
                .map(|p| {
                    let n = eval.weights.node(&p.id);
                    vec![
                        p.rank.to_string(),
                        p.id.clone(),
                        p.name.clone(),
                        display::weight(p.global_weight),
                        display::percent(p.global_weight),
                        n.and_then(|n| n.top_criterion.clone()).map(|c| node_name(&eval, &c)).unwrap_or_default(),
                        n.map(|n| display::weight(n.local_weight)).unwrap_or_default(),
                    ]
                })
                .collect();
            Ok(table::render(
                &["Rank", "Id", "Criterion", "Global", "Weight %", "Top criterion", "Local"],
                &rows,
                &[0, 3, 4, 6],
            ))
        }
        Format::Csv => {
            // full precision; f64 Display round-trips exactly
            let rows: Vec<Vec<String>> = eval
                .weights
                .nodes
                .iter()
                .map(|n| {
                    vec![
                        n.id.clone(),
                        n.name.clone(),
                        n.parent.clone().unwrap_or_default(),
                        n.depth.to_string(),
                        n.is_leaf.to_string(),
                        n.local_weight.to_string(),
                        n.global_weight.to_string(),
                    ]
                })
                .collect();
            csv_string(&["id", "name", "parent", "depth", "is_leaf", "local_weight", "global_weight"], &rows)
        }
        Format::Json => to_json(&serde_json::json!({
            "weights": eval.weights,
            "priorities": eval.priorities,
        })),
    }
}

fn rank(model: &DecisionModel, overrides: &[Override], format: Format, strict: bool) -> Result<Output, CliError> {
    let eval = evaluate_with(model, None, overrides)?;
    let out = match format {
        Format::Json => to_json(&eval)?,
        Format::Table | Format::Csv => {
            let Some(ranking) = &eval.ranking else {
                return Err(CliError::Output("the model has no alternatives to rank".into()));
            };
            let criteria = eval.criterion_breakdown.as_ref().map(|b| b.criteria.clone()).unwrap_or_default();
            let mut headers = vec!["Rank".to_string(), "Alternative".into(), "Name".into(), "Total".into()];
            headers.extend(criteria.iter().map(|c| node_name(&eval, c)));
            let rows: Vec<Vec<String>> = ranking
                .entries
                .iter()
                .map(|e| {
                    let mut row = vec![
                        e.rank.to_string(),
                        e.alternative_id.clone(),
                        model.alternative_name(&e.alternative_id).unwrap_or_default().to_string(),
                    ];
                    if let Format::Csv = format {
                        row.push(e.total.to_string());
                    } else {
                        row.push(display::score(e.total));
                    }
                    let b = eval.criterion_breakdown.as_ref();
                    for c in &criteria {
                        let s = b.and_then(|b| b.get(&e.alternative_id, c)).unwrap_or(0.0);
                        row.push(if let Format::Csv = format { s.to_string() } else { display::score(s) });
                    }
                    row
                })
                .collect();
            let headers: Vec<&str> = headers.iter().map(String::as_str).collect();
            if let Format::Csv = format {
                csv_string(&headers, &rows)?
            } else {
                let numeric: Vec<usize> = (3..headers.len()).chain([0]).collect();
                table::render(&headers, &rows, &numeric)
            }
        }
    };
    Ok(gated(out, &eval, strict))
}

fn report(model: &DecisionModel, output: Option<&Path>, format: ReportFormat) -> Result<String, CliError> {
    let eval = evaluate(model, None)?;
    let rendered = render_report(model, &eval, format).map_err(|e| CliError::Output(e.to_string()))?;
    let write = |path: &Path, content: &str| {
        std::fs::write(path, content).map_err(|e| CliError::Output(format!("{}: {e}", path.display())))
    };
    match (rendered, output) {
        (Report::Markdown(md), None) => Ok(md),
        (Report::Markdown(md), Some(path)) => {
            write(path, &md)?;
            Ok(String::new())
        }
        (Report::Csv(_), None) => Err(CliError::Output("csv reports need -o DIR".into())),
        (Report::Csv(files), Some(dir)) => {
            std::fs::create_dir_all(dir).map_err(|e| CliError::Output(format!("{}: {e}", dir.display())))?;
            for f in files {
                write(&dir.join(&f.name), &f.content)?;
            }
            Ok(String::new())
        }
    }
}

fn serve(host: &str, port: u16, state_dir: PathBuf, assets: Option<PathBuf>) -> Result<(), CliError> {
    let config = ahp_service::Config {
        state_dir: state_dir.clone(),
        assets_dir: assets,
    };
    let app = ahp_service::app(&config).map_err(|e| CliError::Output(format!("{}: {e}", state_dir.display())))?;
    let rt = tokio::runtime::Runtime::new().map_err(|e| CliError::Output(e.to_string()))?;
    rt.block_on(async {
        let listener = tokio::net::TcpListener::bind((host, port))
            .await
            .map_err(|e| CliError::Output(format!("cannot listen on {host}:{port}: {e}")))?;
        let addr = listener.local_addr().map_err(|e| CliError::Output(e.to_string()))?;
        eprintln!("listening on http://{addr} (sessions in {})", state_dir.display());
        ahp_service::serve(listener, app)
            .await
            .map_err(|e| CliError::Output(e.to_string()))
    })
}

fn run(cli: Cli) -> Result<Output, CliError> {
    match cli.command {
        Command::Check { model, strict, threshold } => check(&load(&model)?, threshold, strict),
        Command::Weights { model, format } => weights(&load(&model)?, format).map(Output::from),
        Command::Rank {
            model,
            whatif,
            format,
            strict,
        } => rank(&load(&model)?, &whatif, format, strict),
        Command::Report { model, output, format } => report(&load(&model)?, output.as_deref(), format).map(Output::from),
        Command::Serve {
            port,
            host,
            state_dir,
            assets,
        } => serve(&host, port, state_dir, assets).map(|()| Output::from(String::new())),
    }
}

fn report_error(e: &CliError) -> ExitCode {
    match e {
        CliError::Model {
            path,
            source: ModelError::Invalid(diags),
        } => {
            eprintln!("error: {}: invalid model", path.display());
            for d in diags {
                eprintln!("  {d}");
            }
        }
        _ => eprintln!("error: {e}"),
    }
    ExitCode::from(e.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let timestamps = cli.timestamps;
    match run(cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if timestamps && !out.text.is_empty() {
                let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
                let _ = writeln!(stdout, "# generated at unix time {secs}");
            }
            let _ = stdout.write_all(out.text.as_bytes());
            let _ = stdout.flush();
            match out.failure {
                Some(e) => report_error(&e),
                None => ExitCode::SUCCESS,
            }
        }
        Err(e) => report_error(&e),
    }
}
