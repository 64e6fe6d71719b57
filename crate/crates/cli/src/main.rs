use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use radar_core::demo::{write_demo, DEMO_SEED};
use radar_core::pipeline::{run, run_annotate, RunError};
use radar_core::report::ConfigError;
use radar_core::{Metric, RunConfig};

const EXIT_VALIDATION: u8 = 2;
const EXIT_RUNTIME: u8 = 3;

#[derive(Parser)]
#[command(
    name = "radar-eval",
    version,
    about = "Aspect-based evaluation of time series forecasts"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full evaluation and write every report file.
    Run(RunArgs),
    /// Annotate series and observations without scoring forecasts.
    Annotate(RunArgs),
    /// Check the configuration and inputs without computing anything.
    Validate(RunArgs),
    /// Write the synthetic demo inputs and a config into a directory.
    Demo {
        #[arg(long, default_value = "demo")]
        out: PathBuf,
        #[arg(long, default_value_t = DEMO_SEED)]
        seed: u64,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    rope: Option<f64>,
    #[arg(long)]
    metric: Option<Metric>,
    #[arg(long)]
    reference_model: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    threads: Option<usize>,
}

impl RunArgs {
    fn load(&self) -> Result<RunConfig, ConfigError> {
        let mut cfg = RunConfig::from_path(&self.config)?;
        if let Some(a) = self.alpha {
            cfg.alpha = a;
        }
        if let Some(r) = self.rope {
            cfg.rope = r;
        }
        if let Some(m) = self.metric {
            cfg.metric = m;
        }
        if let Some(r) = &self.reference_model {
            cfg.reference_model = Some(r.clone());
        }
        if let Some(o) = &self.out {
            cfg.output_dir = o.clone();
        }
        if let Some(t) = self.threads {
            cfg.threads = Some(t);
        }
        Ok(cfg)
    }
}

fn report_error(err: &RunError) -> ExitCode {
    eprintln!("{}", err.to_json());
    ExitCode::from(if err.is_validation() {
        EXIT_VALIDATION
    } else {
        EXIT_RUNTIME
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Demo { out, seed } => match write_demo(&out, seed) {
            Ok(config) => {
                println!("{}", config.display());
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!(
                    "{}",
                    serde_json::json!({ "error": { "kind": "runtime", "message": e.to_string() } })
                );
                ExitCode::from(EXIT_RUNTIME)
            }
        },
        Command::Validate(args) => {
            let checked = args.load().and_then(|cfg| cfg.validate_for_run().map(|_| cfg));
            match checked {
                Ok(cfg) => {
                    println!("{}", cfg.to_json());
                    ExitCode::SUCCESS
                }
                Err(e) => report_error(&RunError::Config(e)),
            }
        }
        Command::Run(args) => execute(&args, run),
        Command::Annotate(args) => execute(&args, run_annotate),
    }
}

fn execute(args: &RunArgs, pipeline: fn(&RunConfig) -> Result<radar_core::ReportBundle, RunError>) -> ExitCode {
    let cfg = match args.load() {
        Ok(cfg) => cfg,
        Err(e) => return report_error(&RunError::Config(e)),
    };
    match pipeline(&cfg) {
        Ok(bundle) => {
            for w in &bundle.manifest.warnings {
                eprintln!("warning: {w}");
            }
            for f in &bundle.files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => report_error(&e),
    }
}
