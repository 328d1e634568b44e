//! Parsed command-line configurations and their flag serialization.

use std::path::PathBuf;

use aqs_core::adversary::AttackKind;
use aqs_core::protocol::{Variant, VerificationMode};
use clap::{Args, Parser, Subcommand, ValueEnum};

pub const DEFAULT_N: usize = 8;

#[derive(Debug, Parser)]
#[command(
    name = "aqs",
    version,
    about = "Arbitrated quantum signature simulator"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Run the protocol once and write its transcript.
    Run(RunArgs),
    /// Run an attack campaign and print one statistics row.
    Attack(AttackArgs),
    /// Check the correction table, marginals and sampler.
    Selftest(SelftestArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    TextLines,
    Table,
}

impl OutputFormat {
    pub fn label(self) -> &'static str {
        match self {
            OutputFormat::TextLines => "text-lines",
            OutputFormat::Table => "table",
        }
    }
}

/// Where the message comes from: `haar` or a path to an amplitude file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MessageArg {
    Haar,
    File(PathBuf),
}

impl MessageArg {
    fn parse(s: &str) -> Result<Self, String> {
        match s {
            "" => Err("empty message source".into()),
            "haar" => Ok(MessageArg::Haar),
            path => Ok(MessageArg::File(PathBuf::from(path))),
        }
    }

    fn to_arg(&self) -> String {
        match self {
            MessageArg::Haar => "haar".into(),
            MessageArg::File(p) => p.display().to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Args)]
pub struct RunArgs {
    /// Message length in qubits; defaults to the file length, or 8.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub n: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// `deferred` or `paper-order`.
    #[arg(long, default_value = "deferred", value_parser = parse_mode)]
    pub mode: VerificationMode,
    /// `base` or `undeniable`.
    #[arg(long, default_value = "base", value_parser = parse_variant)]
    pub variant: Variant,
    /// `haar`, or a file with one qubit per line: re(a) im(a) re(b) im(b).
    #[arg(long, default_value = "haar", value_parser = MessageArg::parse)]
    pub message: MessageArg,
    /// Transcript destination; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::TextLines)]
    pub format: OutputFormat,
    /// Key length override in bits.
    #[arg(long)]
    pub key_bits: Option<usize>,
}

fn parse_mode(s: &str) -> Result<VerificationMode, String> {
    s.parse()
        .map_err(|e: aqs_core::protocol::ProtocolError| e.to_string())
}

fn parse_variant(s: &str) -> Result<Variant, String> {
    s.parse()
        .map_err(|e: aqs_core::protocol::ProtocolError| e.to_string())
}

fn parse_attack(s: &str) -> Result<AttackKind, String> {
    s.parse()
        .map_err(|e: aqs_core::adversary::AdversaryError| e.to_string())
}

/// A single protocol run as configured on the command line.
pub type RunConfig = RunArgs;

impl RunArgs {
    /// Flags that parse back to this configuration.
    pub fn to_args(&self) -> Vec<String> {
        let mut args = vec!["run".to_string()];
        if let Some(n) = self.n {
            args.extend(["--n".into(), n.to_string()]);
        }
        args.extend([
            "--seed".into(),
            self.seed.to_string(),
            "--mode".into(),
            self.mode.label().into(),
            "--variant".into(),
            self.variant.label().into(),
            "--message".into(),
            self.message.to_arg(),
            "--format".into(),
            self.format.label().into(),
        ]);
        if let Some(out) = &self.out {
            args.extend(["--out".into(), out.display().to_string()]);
        }
        if let Some(bits) = self.key_bits {
            args.extend(["--key-bits".into(), bits.to_string()]);
        }
        args
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Args)]
pub struct AttackArgs {
    #[arg(long, value_parser = parse_attack)]
    pub attack: AttackKind,
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: u64,
    #[arg(long, default_value_t = DEFAULT_N as u64, value_parser = clap::value_parser!(u64).range(1..))]
    pub n: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = OutputFormat::TextLines)]
    pub format: OutputFormat,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// An attack campaign as configured on the command line.
pub type CampaignConfig = AttackArgs;

impl AttackArgs {
    pub fn to_args(&self) -> Vec<String> {
        let mut args = vec![
            "attack".to_string(),
            "--attack".into(),
            self.attack.name().into(),
            "--trials".into(),
            self.trials.to_string(),
            "--n".into(),
            self.n.to_string(),
            "--seed".into(),
            self.seed.to_string(),
            "--format".into(),
            self.format.label().into(),
        ];
        if let Some(out) = &self.out {
            args.extend(["--out".into(), out.display().to_string()]);
        }
        args
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Args)]
pub struct SelftestArgs {
    #[arg(long, default_value_t = 2024)]
    pub seed: u64,
    /// Fault injection: exchange two table entries, e.g. `psi+:+x,phi-:-x`.
    #[arg(long, hide = true)]
    pub transpose: Option<String>,
}
