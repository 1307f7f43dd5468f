//! `container-lab`: batch front end for the container-lab library.
//!
//! Exit codes: 0 when every asserted property holds, 1 on a violation
//! (a JSON witness goes to stdout), 2 on usage or parameter errors and 3
//! when a desk-scale cap refuses the input.

mod commands;

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use container_lab::report::Format;
use container_lab::Error;

#[derive(Parser, Debug)]
#[command(name = "container-lab", version, about = "Exact intersecting-family and graph-container computations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub global: GlobalArgs,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalArgs {
    /// Worker threads for parallel enumeration (output does not depend on it).
    #[arg(long, global = true)]
    pub workers: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,

    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Include wall-clock timing in the report.
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
}

impl From<OutputFormat> for Format {
    fn from(f: OutputFormat) -> Self {
        match f {
            OutputFormat::Json => Format::Json,
            OutputFormat::Csv => Format::Csv,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeArg {
    Exhaustive,
    Colex,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum TierArg {
    Desk,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Count intersecting families of k-subsets of [n].
    Count {
        n: u32,
        k: u32,
        /// Attach the maximal-family profile.
        #[arg(long)]
        profile: bool,
    },
    /// Maximal intersecting families: the M_l profile and the Bollobás-type check.
    Maximal { n: u32, k: u32 },
    /// Encode an intersecting family as an independent set of H.
    Phi {
        /// Family file (`n k` header, one set per line); standard input if omitted.
        file: Option<PathBuf>,
        /// Inline family such as "1,2;1,3;2,3".
        #[arg(long, requires_all = ["n", "k"], conflicts_with = "file")]
        family: Option<String>,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        k: Option<u32>,
    },
    /// Check the shadow and isoperimetric bounds on H(n, k, r).
    Iso {
        n: u32,
        k: u32,
        r: u32,
        #[arg(long, value_enum, default_value_t = ModeArg::Exhaustive)]
        mode: ModeArg,
    },
    /// Run the container algorithm over all 2-linked sets of a graph.
    Containers(ContainerArgs),
    /// Run the whole acceptance sweep.
    VerifyAll {
        #[arg(long, value_enum, default_value_t = TierArg::Desk)]
        tier: TierArg,
        /// Run only these criteria (repeatable).
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=11))]
        only: Vec<u8>,
    },
}

#[derive(Args, Debug)]
pub struct ContainerArgs {
    /// Edge-list file of a biregular bipartite graph.
    #[arg(long, conflicts_with = "layers", required_unless_present = "layers")]
    pub graph: Option<PathBuf>,
    /// The layer graph H(n, k, r).
    #[arg(long, num_args = 3, value_names = ["N", "K", "R"])]
    pub layers: Option<Vec<u32>>,
    /// Restrict to |[A]| = a (needs --g).
    #[arg(long, requires = "g")]
    pub a: Option<usize>,
    /// Restrict to |N(A)| = g (needs --a).
    #[arg(long, requires = "a")]
    pub g: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub phi: u32,
    #[arg(long, default_value_t = 1)]
    pub psi: u32,
    #[arg(long = "bigC", default_value_t = 1.0)]
    pub big_c: f64,
    #[arg(long, env = "CONTAINER_LAB_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = container_lab::containers::DEFAULT_RETRY_CAP)]
    pub retry_cap: u32,
    /// Include every per-set certificate with its intermediate sets.
    #[arg(long)]
    pub provenance: bool,
}

/// A failed run, already mapped to its exit code.
pub struct Failure {
    pub code: u8,
    pub message: String,
    /// JSON written to stdout for property violations.
    pub witness: Option<String>,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::CapExceeded { .. } => 3,
            Error::Violation { .. } | Error::T0NotFound { .. } | Error::Uncoverable(_) | Error::NoConvergence { .. } => 1,
            _ => 2,
        };
        let witness = match &e {
            Error::Violation { property, witness } => Some(
                serde_json::to_string_pretty(&serde_json::json!({
                    "violation": property,
                    "witness": witness,
                }))
                .expect("witness serializes")
                    + "\n",
            ),
            _ => None,
        };
        Failure {
            code,
            message: e.to_string(),
            witness,
        }
    }
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
            witness: None,
        }
    }
}

pub fn read_input(path: Option<&PathBuf>) -> Result<String, Failure> {
    match path {
        Some(p) => std::fs::read_to_string(p).map_err(|e| Failure::usage(format!("cannot read {}: {e}", p.display()))),
        None => {
            let mut text = String::new();
            std::io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| Failure::usage(format!("cannot read standard input: {e}")))?;
            Ok(text)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match commands::run(&cli) {
        Ok(outcome) => {
            if let Err(e) = write_output(&cli.global, &outcome.text) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            for line in &outcome.notes {
                eprintln!("{line}");
            }
            ExitCode::from(outcome.code)
        }
        Err(failure) => {
            if let Some(witness) = &failure.witness {
                let _ = write_output(&cli.global, witness);
            }
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn write_output(global: &GlobalArgs, text: &str) -> std::io::Result<()> {
    match &global.output {
        Some(path) => std::fs::write(path, text),
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()
        }
    }
}
