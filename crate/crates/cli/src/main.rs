//! `analyze`: runs the constraint pipeline on model files or the bundled corpus.

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;
use dirac_core::model::Model;
use dirac_core::parser::parse_model;
use dirac_core::report::{self, Report, Stage};
use dirac_core::{corpus, Options};
use serde_json::Value;

#[derive(Parser, Debug)]
#[command(name = "analyze", version, about = "Constraint analysis of singular Lagrangians")]
struct Cli {
    /// Model files to analyse.
    files: Vec<PathBuf>,
    /// Analyse the bundled corpus.
    #[arg(long)]
    corpus: bool,
    /// Emit JSON instead of text.
    #[arg(long)]
    json: bool,
    /// Last stage to run: lagrangian, canonical, brackets, conjecture or all.
    #[arg(long, default_value = "all")]
    stage: Stage,
    /// Override the maximum constraint chain order.
    #[arg(long)]
    max_order: Option<usize>,
    /// Total degree cap for Groebner bases.
    #[arg(long)]
    degree_cap: Option<u32>,
    /// Write one report per model into this directory instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

const USAGE: u8 = 2;
const ANALYSIS: u8 = 1;

fn load_inputs(cli: &Cli) -> (Vec<Model>, bool) {
    let mut models = Vec::new();
    let mut ok = true;
    if cli.corpus {
        for f in corpus::CORPUS {
            match f.model() {
                Ok(m) => models.push(m),
                Err(e) => {
                    eprintln!("error: bundled model {}: {e}", f.key);
                    ok = false;
                }
            }
        }
    }
    for path in &cli.files {
        let parsed = std::fs::read_to_string(path)
            .map_err(|e| e.to_string())
            .and_then(|text| parse_model(&text).map_err(|e| e.to_string()));
        match parsed {
            Ok(m) => models.push(m),
            Err(e) => {
                eprintln!("error: {}: {e}", path.display());
                ok = false;
            }
        }
    }
    (models, ok)
}

fn file_stem(name: &str) -> String {
    name.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' }).collect()
}

fn render(r: &Report, json: bool) -> String {
    if json {
        format!("{}\n", pretty(&report::to_json(r)))
    } else {
        report::to_text(r)
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values always serialise")
}

fn write_outputs(dir: &Path, reports: &[(String, Report)], json: bool) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    let ext = if json { "json" } else { "txt" };
    for (name, r) in reports {
        let path = dir.join(format!("{}.{ext}", file_stem(name)));
        std::fs::write(&path, render(r, json))?;
        let verdict = r.verdict_label();
        println!("{name}: {verdict} -> {}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.files.is_empty() && !cli.corpus {
        eprintln!("error: no model files given (use --corpus for the bundled models)");
        return ExitCode::from(USAGE);
    }
    let (models, inputs_ok) = load_inputs(&cli);
    let mut opts = Options { max_order: cli.max_order, ..Options::default() };
    if let Some(d) = cli.degree_cap {
        opts.degree_cap = d;
    }
    let results: Vec<_> = std::thread::scope(|s| {
        let handles: Vec<_> = models.iter().map(|m| s.spawn(|| report::run(m, cli.stage, &opts))).collect();
        handles.into_iter().map(|h| h.join().expect("analysis thread panicked")).collect()
    });

    let mut failed = false;
    let mut done: Vec<(String, Report)> = Vec::new();
    for (m, r) in models.iter().zip(results) {
        match r {
            Ok(r) => {
                failed |= r.is_analysis_failure();
                done.push((m.name.clone(), r));
            }
            Err(e) => {
                eprintln!("error: {}: {e}", m.name);
                failed = true;
            }
        }
    }

    if let Some(dir) = &cli.out {
        if let Err(e) = write_outputs(dir, &done, cli.json) {
            eprintln!("error: {}: {e}", dir.display());
            return ExitCode::from(USAGE);
        }
    } else {
        let mut stdout = std::io::stdout().lock();
        let text = if cli.json {
            let values: Vec<_> = done.iter().map(|(_, r)| report::to_json(r)).collect();
            let v = if values.len() == 1 && cli.files.len() == 1 && !cli.corpus {
                values.into_iter().next().expect("one value")
            } else {
                Value::Array(values)
            };
            format!("{}\n", pretty(&v))
        } else {
            done.iter().map(|(_, r)| report::to_text(r)).collect::<Vec<_>>().join("\n")
        };
        let _ = stdout.write_all(text.as_bytes());
    }

    if !inputs_ok {
        ExitCode::from(USAGE)
    } else if failed {
        ExitCode::from(ANALYSIS)
    } else {
        ExitCode::SUCCESS
    }
}
