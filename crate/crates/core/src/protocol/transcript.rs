//! Run transcripts and their line-oriented text form.
//!
//! Every line is a sequence of `key=value` fields, always starting with
//! `seq phase sender receiver kind payload_hex`. The report line appends
//! `accepted gamma mode reason min_fidelity`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::cipher::{BitString, CipherBlob};
use crate::quantum::{BellOutcome, XOutcome};

use super::channel::Envelope;
use super::types::{PartyId, VerificationReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Phase {
    Config,
    Initial,
    Signing,
    Verification,
    Report,
}

impl Phase {
    pub fn label(self) -> &'static str {
        match self {
            Phase::Config => "config",
            Phase::Initial => "initial",
            Phase::Signing => "signing",
            Phase::Verification => "verification",
            Phase::Report => "report",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasurementKind {
    Bell,
    X,
}

pub(crate) fn bell_record(outcomes: &[BellOutcome]) -> BitString {
    let mut bits = BitString::new();
    bits.push_u32(outcomes.len() as u32);
    for b in outcomes {
        bits.push_uint(u64::from(b.code()), 2);
    }
    bits
}

pub(crate) fn x_record(outcomes: &[XOutcome]) -> BitString {
    let mut bits = BitString::new();
    bits.push_u32(outcomes.len() as u32);
    for x in outcomes {
        bits.push(x.bit());
    }
    bits
}

#[derive(Debug, Clone, PartialEq)]
pub enum EventBody {
    Config(String),
    PhaseStart,
    Envelope(Envelope),
    /// A party's private measurement record.
    Measurement {
        party: PartyId,
        kind: MeasurementKind,
        bits: BitString,
    },
    Report(VerificationReport),
    Failure(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Event {
    pub seq: u64,
    pub phase: Phase,
    pub body: EventBody,
}

fn utf8_hex(s: &str) -> String {
    s.bytes().map(|b| format!("{b:02x}")).collect()
}

impl Event {
    pub fn to_line(&self) -> String {
        let (sender, receiver, kind, payload) = match &self.body {
            EventBody::Config(text) => (None, None, "config", utf8_hex(text)),
            EventBody::PhaseStart => (None, None, "phase", String::new()),
            EventBody::Envelope(env) => (
                Some(env.sender),
                Some(env.receiver),
                env.payload.kind(),
                env.payload.wire_bits().to_hex(),
            ),
            EventBody::Measurement { party, kind, bits } => {
                let kind = match kind {
                    MeasurementKind::Bell => "bell_outcomes",
                    MeasurementKind::X => "x_outcomes",
                };
                (Some(*party), None, kind, bits.to_hex())
            }
            EventBody::Report(report) => {
                let mut bits = BitString::new();
                for f in &report.per_qubit_fidelity {
                    bits.push_f64(*f);
                }
                (Some(PartyId::Bob), None, "report", bits.to_hex())
            }
            EventBody::Failure(message) => (None, None, "failure", utf8_hex(message)),
        };
        let name = |p: Option<PartyId>| p.map_or("-", PartyId::label);
        let mut line = format!(
            "seq={} phase={} sender={} receiver={} kind={} payload_hex={}",
            self.seq,
            self.phase.label(),
            name(sender),
            name(receiver),
            kind,
            payload
        );
        if let EventBody::Report(r) = &self.body {
            let _ = write!(
                line,
                " accepted={} gamma={} mode={} reason={} min_fidelity={}",
                r.accepted,
                u8::from(r.gamma),
                r.mode.label(),
                r.reject_reason.map_or("none", |x| x.label()),
                r.min_fidelity()
                    .map_or("none".to_string(), |f| format!("{f:.12}")),
            );
        }
        line
    }
}

/// Splits a transcript line into its `key=value` fields.
pub fn parse_line(line: &str) -> BTreeMap<&str, &str> {
    line.split_whitespace()
        .filter_map(|field| field.split_once('='))
        .collect()
}

/// Complete record of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct Transcript {
    pub seed: u64,
    pub config: String,
    pub events: Vec<Event>,
    pub report: Option<VerificationReport>,
    pub failure: Option<String>,
    /// Every ciphertext freshly encrypted by an honest party, for pad audits.
    pub pad_log: Vec<CipherBlob>,
}

impl Transcript {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for event in &self.events {
            out.push_str(&event.to_line());
            out.push('\n');
        }
        out
    }

    pub fn envelopes(&self) -> impl Iterator<Item = &Envelope> {
        self.events.iter().filter_map(|e| match &e.body {
            EventBody::Envelope(env) => Some(env),
            _ => None,
        })
    }

    /// Ciphertexts visible on the channel.
    pub fn public_ciphertexts(&self) -> impl Iterator<Item = &CipherBlob> {
        self.envelopes().flat_map(|e| e.payload.ciphertexts())
    }

    pub fn accepted(&self) -> bool {
        self.report.as_ref().is_some_and(|r| r.accepted)
    }
}
