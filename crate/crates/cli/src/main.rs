//! `govsg`: rank GO terms per organism, run the virtual study group, and
//! render reviewed reports.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use govsg_agents::report::Format;
use govsg_agents::vsg::VsgConfig;
use thiserror::Error;

use commands::BackendChoice;
use config::PipelineConfig;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad configuration or input files. Exit code 2.
    #[error("{0}")]
    Input(String),
    /// Backend failures and partial runs. Exit code 1.
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Md,
    Html,
    Both,
}

impl FormatArg {
    fn formats(self) -> Vec<Format> {
        match self {
            FormatArg::Md => vec![Format::Markdown],
            FormatArg::Html => vec![Format::Html],
            FormatArg::Both => vec![Format::Markdown, Format::Html],
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "govsg", version, about = "GO feature ranking and virtual study group reports")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Args)]
struct BackendArgs {
    /// Scripted responses keyed by task id (mock mode).
    #[arg(long, conflicts_with = "live")]
    mock_script: Option<PathBuf>,
    /// Call a real chat-completion endpoint instead of the mock.
    #[arg(long)]
    live: bool,
    /// Overrides the sampling seed from the config.
    #[arg(long)]
    seed: Option<u64>,
}

impl BackendArgs {
    fn choice(&self) -> BackendChoice<'_> {
        if self.live {
            BackendChoice::Live
        } else {
            BackendChoice::Mock(self.mock_script.as_deref())
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Rank GO terms for every dataset in a pipeline config.
    Rank {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the study group from a study-group config.
    Vsg {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "govsg-out")]
        out: PathBuf,
        #[command(flatten)]
        backend: BackendArgs,
    },
    /// Render a transcript, optionally with reviewer annotations.
    Report {
        #[arg(long)]
        transcript: PathBuf,
        #[arg(long)]
        annotations: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "both")]
        format: FormatArg,
        #[arg(long, default_value = "govsg-out")]
        out: PathBuf,
    },
    /// rank, vsg and report in one go.
    Pipeline {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        backend: BackendArgs,
        #[arg(long)]
        annotations: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "both")]
        format: FormatArg,
    },
}

fn out_dir(flag: Option<PathBuf>, cfg: &PipelineConfig) -> PathBuf {
    flag.or_else(|| cfg.out.clone()).unwrap_or_else(|| PathBuf::from("govsg-out"))
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Rank { config, out } => {
            let cfg = PipelineConfig::load(&config)?;
            let out = out_dir(out, &cfg);
            commands::rank(&cfg, &out).map(|_| ())
        }
        Command::Vsg { config, out, backend } => {
            let mut cfg = VsgConfig::load(&config).map_err(|e| CliError::Input(e.to_string()))?;
            if let Some(seed) = backend.seed {
                cfg.sampling.seed = Some(seed);
            }
            commands::vsg(&cfg, backend.choice(), &out)
                .map(|_| ())
                .map_err(|(_, e)| e)
        }
        Command::Report {
            transcript,
            annotations,
            format,
            out,
        } => {
            let t = commands::load_transcript(&transcript)?;
            commands::report(t, annotations.as_deref(), &format.formats(), &out).map(|_| ())
        }
        Command::Pipeline {
            config,
            out,
            backend,
            annotations,
            format,
        } => {
            let cfg = PipelineConfig::load(&config)?;
            let out = out_dir(out, &cfg);
            commands::pipeline(
                &cfg,
                backend.seed,
                backend.choice(),
                annotations.as_deref(),
                &format.formats(),
                &out,
            )
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
