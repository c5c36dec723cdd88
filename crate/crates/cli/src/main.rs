//! `opuc`: run one analysis from a JSON config and write a JSON summary plus
//! CSV traces.
//!
//! Exit codes: 0 on success, 2 for configuration errors, 3 for numeric
//! failures (a diagnostic JSON document is printed and, with `--out`,
//! written to `error.json`). `OPUC_THREADS` caps the worker pool.

mod config;
mod run;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, ValueEnum};
use serde_json::{json, Value};

use config::Command;

#[derive(Clone, Copy, Debug, ValueEnum)]
#[value(rename_all = "kebab-case")]
enum Sub {
    SchurEval,
    SigmaAc,
    Reflectionless,
    ClassifyKhrushchev,
    ClassifySimon,
    Moments,
    Ratio,
    PearsonDefect,
    RightLimits,
    SparseCheck,
    RandomExperiment,
}

impl Sub {
    fn name(self) -> &'static str {
        Command::NAMES[self as usize]
    }
}

#[derive(Parser, Debug)]
#[command(name = "opuc", version, about = "Spectral experiments for CMV and Jacobi matrices")]
struct Args {
    /// Analysis to run.
    command: Sub,
    /// JSON experiment config.
    #[arg(long)]
    config: PathBuf,
    /// Output directory for `summary.json` and CSV tables.
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Config(anyhow::Error),
    Numeric(opuc::Error),
    Io(anyhow::Error),
}

fn load(sub: Sub, path: &Path) -> anyhow::Result<Command> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut value: Value = serde_json::from_str(&text).context("config is not valid JSON")?;
    let obj = value.as_object_mut().ok_or_else(|| anyhow!("config must be a JSON object"))?;
    match obj.get("command") {
        None => {
            obj.insert("command".into(), Value::String(sub.name().into()));
        }
        Some(Value::String(c)) if c == sub.name() => {}
        Some(other) => return Err(anyhow!("config is for command {other}, not {}", sub.name())),
    }
    serde_json::from_value(value).context("config does not match the schema")
}

fn threads() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var("OPUC_THREADS") {
        let n: usize = v.trim().parse().context("OPUC_THREADS must be a positive integer")?;
        if n == 0 {
            return Err(anyhow!("OPUC_THREADS must be a positive integer"));
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn write_out(dir: &Path, summary: &Value, tables: &[(String, String)]) -> anyhow::Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    fs::write(dir.join("summary.json"), pretty(summary))?;
    for (name, text) in tables {
        fs::write(dir.join(name), text)?;
    }
    Ok(())
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn go(args: &Args) -> Result<(), Failure> {
    threads().map_err(Failure::Config)?;
    let cmd = load(args.command, &args.config).map_err(Failure::Config)?;
    let out = run::execute(&cmd).map_err(|e| {
        if run::is_config_error(&e) {
            Failure::Config(e.into())
        } else {
            Failure::Numeric(e)
        }
    })?;
    let summary = json!({
        "command": args.command.name(),
        "config": serde_json::to_value(&cmd).expect("config serializes"),
        "result": out.result,
    });
    if let Some(dir) = &args.out {
        write_out(dir, &summary, &out.tables).map_err(Failure::Io)?;
    }
    print!("{}", pretty(&summary));
    Ok(())
}

fn main() -> ExitCode {
    let args = Args::parse();
    match go(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(e)) => {
            eprintln!("config error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Numeric(e)) => {
            let diag = json!({
                "command": args.command.name(),
                "error": format!("{e:?}"),
                "message": e.to_string(),
            });
            if let Some(dir) = &args.out {
                let _ = fs::create_dir_all(dir).and_then(|_| fs::write(dir.join("error.json"), pretty(&diag)));
            }
            print!("{}", pretty(&diag));
            ExitCode::from(3)
        }
    }
}
