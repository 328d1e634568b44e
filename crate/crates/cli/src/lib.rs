//! Command-line front end for the arbitrated quantum signature simulator.
//!
//! Exit codes: 0 accepted or passed, 1 rejected or failed, 2 usage,
//! configuration or pad errors.

pub mod config;
pub mod selftest;

use std::fs;
use std::io::Write;
use std::path::Path;

use aqs_core::adversary::{run_attack, DetectionStats};
use aqs_core::protocol::{
    execute, parse_line, MessageSource, MessageString, ProtocolConfig, Transcript,
};
use aqs_core::quantum::{CorrectionTable, QubitSpec};
use clap::Parser;
use thiserror::Error;

pub use config::{
    AttackArgs, CampaignConfig, Cli, Command, MessageArg, OutputFormat, RunArgs, RunConfig,
    SelftestArgs, DEFAULT_N,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_REJECTED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read message file {path}: {source}")]
    ReadMessage {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("message file line {line}: {reason}")]
    BadMessage { line: usize, reason: String },
    #[error("cannot write {path}: {source}")]
    Write {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Config(String),
}

/// Parses an amplitude file: one qubit per line, `re(a) im(a) re(b) im(b)`.
/// Blank lines and lines starting with `#` are skipped.
pub fn parse_message(text: &str) -> Result<MessageString, CliError> {
    let mut qubits = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |reason: String| CliError::BadMessage {
            line: i + 1,
            reason,
        };
        let values = line
            .split_whitespace()
            .map(str::parse::<f64>)
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| bad(e.to_string()))?;
        let parts: [f64; 4] = values
            .try_into()
            .map_err(|v: Vec<f64>| bad(format!("expected 4 reals, found {}", v.len())))?;
        qubits.push(QubitSpec::from_parts(parts).map_err(|e| bad(e.to_string()))?);
    }
    MessageString::new(qubits).map_err(|e| CliError::Config(e.to_string()))
}

/// Resolves a command-line run configuration into a protocol configuration.
pub fn protocol_config(args: &RunArgs) -> Result<ProtocolConfig, CliError> {
    let (n, message) = match &args.message {
        MessageArg::Haar => (
            args.n.map_or(DEFAULT_N, |n| n as usize),
            MessageSource::HaarRandom,
        ),
        MessageArg::File(path) => {
            let text = fs::read_to_string(path).map_err(|source| CliError::ReadMessage {
                path: path.display().to_string(),
                source,
            })?;
            let message = parse_message(&text)?;
            if let Some(n) = args.n {
                if n as usize != message.len() {
                    return Err(CliError::Config(format!(
                        "--n {n} but the message file holds {} qubits",
                        message.len()
                    )));
                }
            }
            (message.len(), MessageSource::Explicit(message))
        }
    };
    Ok(ProtocolConfig {
        n,
        seed: args.seed,
        mode: args.mode,
        variant: args.variant,
        message,
        key_bits: args.key_bits,
    })
}

/// Aligned, human-readable view of a transcript.
pub fn transcript_table(t: &Transcript) -> String {
    let mut out = format!(
        "{:>4}  {:<12}  {:<10}  {:<10}  {:<19}  {:>8}\n",
        "seq", "phase", "sender", "receiver", "kind", "bits"
    );
    for line in t.to_text().lines() {
        let f = parse_line(line);
        out.push_str(&format!(
            "{:>4}  {:<12}  {:<10}  {:<10}  {:<19}  {:>8}\n",
            f["seq"],
            f["phase"],
            f["sender"],
            f["receiver"],
            f["kind"],
            f["payload_hex"].len() * 4
        ));
    }
    match (&t.report, &t.failure) {
        (Some(r), _) => out.push_str(&format!(
            "accepted={} gamma={} mode={} reason={} min_fidelity={}\n",
            r.accepted,
            u8::from(r.gamma),
            r.mode.label(),
            r.reject_reason.map_or("none", |x| x.label()),
            r.min_fidelity()
                .map_or("none".into(), |f| format!("{f:.12}"))
        )),
        (None, Some(failure)) => out.push_str(&format!("failure: {failure}\n")),
        (None, None) => {}
    }
    out
}

fn emit(text: &str, out: Option<&Path>, stdout: &mut dyn Write) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Write {
            path: path.display().to_string(),
            source,
        }),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Write {
                path: "<stdout>".into(),
                source,
            }),
    }
}

pub fn cmd_run(args: &RunArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let config = match protocol_config(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let outcome = execute(&config, None);
    let text = match args.format {
        OutputFormat::TextLines => outcome.transcript.to_text(),
        OutputFormat::Table => transcript_table(&outcome.transcript),
    };
    if let Err(e) = emit(&text, args.out.as_deref(), stdout) {
        let _ = writeln!(stderr, "error: {e}");
        return EXIT_USAGE;
    }
    if let Some(e) = &outcome.error {
        let _ = writeln!(stderr, "error: {e}");
        return EXIT_USAGE;
    }
    if args.out.is_some() {
        if let Some(last) = outcome.transcript.to_text().lines().last() {
            let _ = writeln!(stdout, "{last}");
        }
    }
    if outcome.transcript.accepted() {
        EXIT_OK
    } else {
        EXIT_REJECTED
    }
}

pub fn cmd_attack(args: &AttackArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let stats = match run_attack(args.attack, args.trials, args.n as usize, args.seed) {
        Ok(s) => s,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let text = match args.format {
        OutputFormat::TextLines => format!("{}\n", stats.row()),
        OutputFormat::Table => format!("{}\n{}\n", DetectionStats::header(), stats.row()),
    };
    match emit(&text, args.out.as_deref(), stdout) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_USAGE
        }
    }
}

pub fn cmd_selftest(args: &SelftestArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let table = match &args.transpose {
        None => CorrectionTable::STANDARD,
        Some(spec) => match selftest::parse_transposition(spec) {
            Ok((a, b)) => CorrectionTable::STANDARD.with_swapped(a, b),
            Err(e) => {
                let _ = writeln!(stderr, "error: {e}");
                return EXIT_USAGE;
            }
        },
    };
    let results = selftest::run_selftest(&table, args.seed);
    for r in &results {
        let _ = writeln!(stdout, "{}", r.line());
    }
    if results.iter().all(|r| r.passed) {
        EXIT_OK
    } else {
        EXIT_REJECTED
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_cli<I, S>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(stderr, "{}", e.render())
            } else {
                write!(stdout, "{}", e.render())
            };
            return code;
        }
    };
    match &cli.command {
        Command::Run(a) => cmd_run(a, stdout, stderr),
        Command::Attack(a) => cmd_attack(a, stdout, stderr),
        Command::Selftest(a) => cmd_selftest(a, stdout, stderr),
    }
}
