use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use qvernam::scenario::{run_scenario, validate_table, Diagnostic};
use toml::{Table, Value};

/// Run a seeded protocol scenario and print its summary.
#[derive(Debug, Parser)]
#[command(name = "qvernam", version)]
struct Args {
    /// Scenario file (TOML); flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    protocol: Option<String>,
    /// Preset name, four probabilities `pI,pX,pZ,pXZ`, or `OP:w,...`.
    #[arg(long)]
    channel: Option<String>,
    #[arg(long)]
    n: Option<i64>,
    #[arg(long)]
    r: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    trials: Option<i64>,
    #[arg(long)]
    seed: Option<i64>,
    /// json or csv.
    #[arg(long)]
    format: Option<String>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    threads: Option<i64>,
}

const EXIT_CONFIG: u8 = 1;
const EXIT_BOUND: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

fn load(args: &Args) -> Result<Table, Vec<Diagnostic>> {
    let mut table = match &args.config {
        None => Table::new(),
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                vec![Diagnostic {
                    field: "config".into(),
                    message: format!("cannot read {}: {e}", path.display()),
                }]
            })?;
            text.parse::<Table>().map_err(|e| {
                vec![Diagnostic {
                    field: "config".into(),
                    message: format!("not valid TOML: {}", e.message()),
                }]
            })?
        }
    };
    let mut set = |k: &str, v: Option<Value>| {
        if let Some(v) = v {
            table.insert(k.into(), v);
        }
    };
    set("protocol", args.protocol.clone().map(Value::String));
    set("channel", args.channel.clone().map(Value::String));
    set("n", args.n.map(Value::Integer));
    set("r", args.r.map(Value::Integer));
    set("trials", args.trials.map(Value::Integer));
    set("seed", args.seed.map(Value::Integer));
    set("format", args.format.clone().map(Value::String));
    set("out", args.out.as_ref().map(|p| Value::String(p.display().to_string())));
    set("threads", args.threads.map(Value::Integer));
    Ok(table)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let cfg = match load(&args).and_then(|t| validate_table(&t)) {
        Ok(c) => c,
        Err(diags) => {
            for d in diags {
                eprintln!("config error: {d}");
            }
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let start = Instant::now();
    let summary = match run_scenario(&cfg) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INTERNAL);
        }
    };
    let text = summary.render(cfg.format);
    match &cfg.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("error: cannot write {path}: {e}");
                return ExitCode::from(EXIT_INTERNAL);
            }
        }
        None => print!("{text}"),
    }
    eprintln!("wall time: {:.3} s", start.elapsed().as_secs_f64());
    for b in summary.bound_checks.iter().filter(|b| !b.pass) {
        eprintln!("bound check failed: {} (observed {}, bound {})", b.id, b.observed, b.bound);
    }
    if summary.all_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_BOUND)
    }
}
