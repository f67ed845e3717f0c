use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use jcbell::error::{Error, Result};
use jcbell::sweep_cli::{self, report, ExperimentConfig, Format};

#[derive(Parser)]
#[command(name = "jcbell", version, about = "CHSH violation and entanglement of Jaynes-Cummings atom-cavity states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the requested outputs over a time grid.
    Sweep {
        #[command(flatten)]
        overrides: Overrides,
        #[arg(long, value_enum, default_value = "csv")]
        format: OutFormat,
        /// Output file; standard output when omitted.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Scanned CHSH maximum for one state at one time.
    Bell {
        #[command(flatten)]
        overrides: Overrides,
        #[arg(long, default_value_t = 0.0)]
        time: f64,
    },
    /// Report on the long-time noise-averaged state.
    Asymptotic {
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Entropy and CHSH maximum as functions of the Schmidt angle.
    Curve {
        #[arg(long, default_value_t = 21)]
        points: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Csv,
    Json,
}

/// Flags overriding fields of the JSON config.
#[derive(Args)]
struct Overrides {
    /// JSON experiment config.
    #[arg(long, short)]
    config: Option<PathBuf>,
    /// `g`, `e` or `sup:c_g,c_e`.
    #[arg(long)]
    atom: Option<String>,
    /// `fock:k`, `smsv:r,theta`, `coherent:re,im` or `amps:[...]`.
    #[arg(long)]
    field: Option<String>,
    #[arg(long)]
    lambda_bar: Option<f64>,
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long)]
    quad_order: Option<usize>,
    /// Noise averaging: `exact` (closed form) or `quadrature` (Gauss-Hermite).
    #[arg(long)]
    method: Option<String>,
    #[arg(long)]
    start: Option<f64>,
    #[arg(long)]
    stop: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
    /// Comma-separated subset of bell, bell_lower, entropy, ppt_min.
    #[arg(long, value_delimiter = ',')]
    outputs: Option<Vec<String>>,
    #[arg(long)]
    coarse_steps: Option<usize>,
    #[arg(long)]
    refine_iters: Option<usize>,
    #[arg(long)]
    refine_tol: Option<f64>,
    #[arg(long)]
    max_dim: Option<usize>,
    #[arg(long)]
    tail_tol: Option<f64>,
}

fn set(doc: &mut Value, path: &[&str], v: Value) {
    let mut node = doc;
    for key in &path[..path.len() - 1] {
        if !node.get(*key).is_some_and(Value::is_object) {
            node[*key] = json!({});
        }
        node = &mut node[*key];
    }
    node[path[path.len() - 1]] = v;
}

impl Overrides {
    /// Loads the config file (if any) and applies the flags. Missing grid
    /// fields default to 101 points on [0, 10]; verbs that ignore the grid
    /// (`needs_grid` false) get a placeholder.
    fn resolve(&self, needs_grid: bool) -> Result<ExperimentConfig> {
        let mut doc = match &self.config {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| Error::config("config", format!("cannot read {}: {e}", p.display())))?;
                serde_json::from_str(&text).map_err(|e| Error::config("<document>", e.to_string()))?
            }
            None => json!({}),
        };
        if !doc.is_object() {
            return Err(Error::config("<document>", "config must be a JSON object"));
        }
        let mut put = |path: &[&str], v: Option<Value>| {
            if let Some(v) = v {
                set(&mut doc, path, v);
            }
        };
        put(&["initial_state", "atom"], self.atom.clone().map(Value::from));
        put(&["initial_state", "field"], self.field.clone().map(Value::from));
        put(&["noise", "lambda_bar"], self.lambda_bar.map(Value::from));
        put(&["noise", "sigma"], self.sigma.map(Value::from));
        put(&["noise", "quad_order"], self.quad_order.map(Value::from));
        put(&["noise", "method"], self.method.clone().map(Value::from));
        put(&["time_grid", "start"], self.start.map(Value::from));
        put(&["time_grid", "stop"], self.stop.map(Value::from));
        put(&["time_grid", "steps"], self.steps.map(Value::from));
        put(&["outputs"], self.outputs.clone().map(Value::from));
        put(&["scan", "coarse_steps"], self.coarse_steps.map(Value::from));
        put(&["scan", "refine_iters"], self.refine_iters.map(Value::from));
        put(&["scan", "refine_tol"], self.refine_tol.map(Value::from));
        put(&["truncation", "max_dim"], self.max_dim.map(Value::from));
        put(&["truncation", "tail_tol"], self.tail_tol.map(Value::from));
        if needs_grid {
            for (key, v) in [("start", json!(0.0)), ("stop", json!(10.0)), ("steps", json!(101))] {
                if doc.get("time_grid").and_then(|g| g.get(key)).is_none() {
                    set(&mut doc, &["time_grid", key], v);
                }
            }
        } else if doc.get("time_grid").is_none() {
            doc["time_grid"] = json!({"start": 0.0, "stop": 1.0, "steps": 2});
        }
        if doc.get("initial_state").and_then(|s| s.get("atom")).is_none() {
            set(&mut doc, &["initial_state", "atom"], json!("e"));
        }
        ExperimentConfig::from_value(doc)
    }
}

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var(sweep_cli::THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::config(sweep_cli::THREADS_ENV, format!("expected a positive integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::config(sweep_cli::THREADS_ENV, e.to_string()))
}

fn run(cli: Cli) -> Result<()> {
    configure_threads()?;
    let text = match cli.command {
        Command::Sweep {
            overrides,
            format,
            output,
        } => {
            let cfg = overrides.resolve(true)?;
            let table = sweep_cli::run_sweep(&cfg)?;
            let format = match format {
                OutFormat::Csv => Format::Csv,
                OutFormat::Json => Format::Json,
            };
            if let Some(path) = output {
                return sweep_cli::emit(&table, format, &path);
            }
            sweep_cli::render(&table, format)?
        }
        Command::Bell { overrides, time } => report::bell_report(&overrides.resolve(false)?, time)?,
        Command::Asymptotic { overrides } => report::asymptotic_report(&overrides.resolve(false)?)?,
        Command::Curve { points } => report::curve_csv(points)?,
    };
    std::io::stdout().lock().write_all(text.as_bytes())?;
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("jcbell: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
