//! Attack campaigns against the protocol and the arbitrator's dispute
//! rulings.
//!
//! Every trial `t` of a campaign seeded with `s` runs the protocol with seed
//! `s + t`. The message and the adversary's choices come from separate
//! streams of the same seed, so trials are independent and can run in any
//! order.

mod dispute;
mod strategies;

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::protocol::{
    execute, Interceptor, MessageSource, MessageString, ProtocolConfig, ProtocolError,
    RejectReason, Variant, VerificationMode, ACCEPT_EPSILON,
};
use crate::quantum::{
    apply_pauli, bell_branches, compose, fidelity, ghz3, pauli_correction, x_branches, BellOutcome,
    QubitSpec, XOutcome,
};

pub use dispute::{resolve_dispute, resolve_receipt_dispute, DisputeVerdict, ReceiptVerdict};
pub use strategies::{BobForge, KeyCompromise, Swap, Tamper, TamperRegion};

/// States closer than this to a Pauli fixed point count as degenerate.
pub const NON_DEGENERATE_MARGIN: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AttackKind {
    BobForgeSignature,
    OutsiderTamperSignature,
    OutsiderSwapMessage,
    KeyCompromiseForgeWithoutMa,
    AliceDisavow,
    BobDenyReceipt,
}

impl AttackKind {
    pub const ALL: [AttackKind; 6] = [
        AttackKind::BobForgeSignature,
        AttackKind::OutsiderTamperSignature,
        AttackKind::OutsiderSwapMessage,
        AttackKind::KeyCompromiseForgeWithoutMa,
        AttackKind::AliceDisavow,
        AttackKind::BobDenyReceipt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AttackKind::BobForgeSignature => "bob-forge-signature",
            AttackKind::OutsiderTamperSignature => "outsider-tamper-signature",
            AttackKind::OutsiderSwapMessage => "outsider-swap-message",
            AttackKind::KeyCompromiseForgeWithoutMa => "key-compromise-forge-without-ma",
            AttackKind::AliceDisavow => "alice-disavow",
            AttackKind::BobDenyReceipt => "bob-deny-receipt",
        }
    }

    pub fn names() -> Vec<&'static str> {
        Self::ALL.iter().map(|k| k.name()).collect()
    }
}

impl fmt::Display for AttackKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AttackKind {
    type Err = AdversaryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| AdversaryError::UnknownAttack(s.to_string()))
    }
}

#[derive(Debug, Error)]
pub enum AdversaryError {
    #[error("unknown attack {0:?}; valid attacks: {names}", names = AttackKind::names().join(", "))]
    UnknownAttack(String),
    #[error("trial count must be at least 1")]
    NoTrials,
    #[error("qubit count must be at least 1")]
    NoQubits,
    #[error("trial {trial} did not complete: {source}")]
    Trial {
        trial: u64,
        #[source]
        source: ProtocolError,
    },
}

/// How campaign messages are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MessageDistribution {
    Haar,
    /// Haar states at least [`NON_DEGENERATE_MARGIN`] away from every Pauli
    /// fixed point.
    NonDegenerate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CampaignSpec {
    pub kind: AttackKind,
    pub trials: u64,
    pub n: usize,
    pub seed: u64,
    pub messages: MessageDistribution,
    pub region: TamperRegion,
}

impl CampaignSpec {
    /// Non-degenerate messages, tamper anywhere in the signature.
    pub fn new(kind: AttackKind, trials: u64, n: usize, seed: u64) -> Self {
        Self {
            kind,
            trials,
            n,
            seed,
            messages: MessageDistribution::NonDegenerate,
            region: TamperRegion::Any,
        }
    }

    pub fn trial_seed(&self, trial: u64) -> u64 {
        self.seed.wrapping_add(trial)
    }

    fn stream(&self, trial: u64, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.trial_seed(trial));
        rng.set_stream(stream);
        rng
    }

    /// The message Alice signs in `trial`.
    pub fn trial_message(&self, trial: u64) -> MessageString {
        draw_message(&mut self.stream(trial, 1), self.n, self.messages)
    }
}

fn draw_message(rng: &mut ChaCha8Rng, n: usize, dist: MessageDistribution) -> MessageString {
    let qubits = (0..n)
        .map(|_| match dist {
            MessageDistribution::Haar => QubitSpec::haar_random(rng),
            MessageDistribution::NonDegenerate => {
                QubitSpec::haar_non_degenerate(rng, NON_DEGENERATE_MARGIN)
            }
        })
        .collect();
    MessageString::new(qubits).expect("campaigns have n >= 1")
}

/// What one trial produced.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialResult {
    pub detected: bool,
    /// The arbitrator set gamma = 0 (attacks that end in a verification report).
    pub gamma_zero: bool,
}

/// Runs a single trial of `spec`.
pub fn run_trial(spec: &CampaignSpec, trial: u64) -> Result<TrialResult, AdversaryError> {
    let message = spec.trial_message(trial);
    let mut adversary_rng = spec.stream(trial, 2);
    let mut config = ProtocolConfig::new(spec.n, spec.trial_seed(trial));
    config.mode = VerificationMode::Deferred;
    config.message = MessageSource::Explicit(message.clone());
    if spec.kind == AttackKind::BobDenyReceipt {
        config.variant = Variant::Undeniable;
    }

    let mut hook: Option<Box<dyn Interceptor>> = match spec.kind {
        AttackKind::BobForgeSignature => Some(Box::new(BobForge {
            forged: draw_message(&mut adversary_rng, spec.n, spec.messages),
            rng: adversary_rng,
        })),
        AttackKind::OutsiderTamperSignature => Some(Box::new(Tamper {
            region: spec.region,
            rng: adversary_rng,
            flipped: None,
        })),
        AttackKind::OutsiderSwapMessage => Some(Box::new(Swap {
            replacement: draw_message(&mut adversary_rng, spec.n, spec.messages),
        })),
        AttackKind::KeyCompromiseForgeWithoutMa => {
            Some(Box::new(KeyCompromise::new(adversary_rng)))
        }
        AttackKind::AliceDisavow | AttackKind::BobDenyReceipt => None,
    };
    let outcome = execute(
        &config,
        hook.as_deref_mut().map(|h| h as &mut dyn Interceptor),
    );
    if let Some(source) = outcome.error {
        return Err(AdversaryError::Trial { trial, source });
    }
    let report = outcome.report.as_ref();
    let gamma_zero = report.is_some_and(|r| r.reject_reason == Some(RejectReason::GammaZero));

    let detected = match spec.kind {
        AttackKind::AliceDisavow => {
            // Alice says she never signed; the truth is that she did.
            let (k_a, _) = outcome.keys.as_ref().expect("completed run keeps its keys");
            let signing = outcome.signing.as_ref().expect("completed run signed");
            resolve_dispute(&signing.signature, k_a, &message) == DisputeVerdict::SignedByAlice
        }
        AttackKind::BobDenyReceipt => {
            let (k_a, k_b) = outcome.keys.as_ref().expect("completed run keeps its keys");
            outcome.receipt.as_ref().is_some_and(|evidence| {
                resolve_receipt_dispute(evidence, k_a, k_b, &message)
                    == ReceiptVerdict::ReceivedByBob
            })
        }
        _ => report.is_some_and(|r| !r.accepted),
    };
    Ok(TrialResult {
        detected,
        gamma_zero,
    })
}

/// Aggregated outcome of a campaign. Merging is associative and
/// order-independent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DetectionStats {
    pub attack: AttackKind,
    pub n: usize,
    pub trials: u64,
    pub detected: u64,
    /// Rejections where the arbitrator set gamma = 0.
    pub gamma_zero: u64,
    pub seed: u64,
}

impl DetectionStats {
    pub fn empty(attack: AttackKind, n: usize, seed: u64) -> Self {
        Self {
            attack,
            n,
            trials: 0,
            detected: 0,
            gamma_zero: 0,
            seed,
        }
    }

    fn record(mut self, trial: &TrialResult) -> Self {
        self.trials += 1;
        self.detected += u64::from(trial.detected);
        self.gamma_zero += u64::from(trial.gamma_zero);
        self
    }

    pub fn merge(mut self, other: &DetectionStats) -> Self {
        self.trials += other.trials;
        self.detected += other.detected;
        self.gamma_zero += other.gamma_zero;
        self
    }

    pub fn rate(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.detected as f64 / self.trials as f64
        }
    }

    pub fn header() -> &'static str {
        "attack n trials detected rate seed"
    }

    /// One row: `attack n trials detected rate seed`.
    pub fn row(&self) -> String {
        format!(
            "{} {} {} {} {:.4} {}",
            self.attack,
            self.n,
            self.trials,
            self.detected,
            self.rate(),
            self.seed
        )
    }
}

/// Runs every trial of `spec`, in parallel.
pub fn run_campaign(spec: &CampaignSpec) -> Result<DetectionStats, AdversaryError> {
    if spec.trials == 0 {
        return Err(AdversaryError::NoTrials);
    }
    if spec.n == 0 {
        return Err(AdversaryError::NoQubits);
    }
    let empty = DetectionStats::empty(spec.kind, spec.n, spec.seed);
    (0..spec.trials)
        .into_par_iter()
        .map(|t| run_trial(spec, t).map(|r| empty.record(&r)))
        .try_reduce(|| empty, |a, b| Ok(a.merge(&b)))
}

/// Non-degenerate messages, tampering anywhere in the signature.
pub fn run_attack(
    kind: AttackKind,
    trials: u64,
    n: usize,
    seed: u64,
) -> Result<DetectionStats, AdversaryError> {
    run_campaign(&CampaignSpec::new(kind, trials, n, seed))
}

/// Honest Deferred runs with Haar-random messages; returns how many were
/// rejected.
pub fn honest_rejections(trials: u64, n: usize, seed: u64) -> Result<u64, AdversaryError> {
    (0..trials)
        .into_par_iter()
        .map(|t| {
            let config = ProtocolConfig::new(n, seed.wrapping_add(t));
            let outcome = execute(&config, None);
            match outcome.error {
                Some(source) => Err(AdversaryError::Trial { trial: t, source }),
                None => Ok(u64::from(!outcome.transcript.accepted())),
            }
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))
}

/// Bob's qubit after Alice reports `bell` and the arbitrator `arb`, from
/// branch expansion of the full chain.
fn bob_conditional(
    p: &QubitSpec,
    bell: BellOutcome,
    arb: XOutcome,
) -> Option<(f64, crate::quantum::PureState)> {
    let state = compose(p, &ghz3()).ok()?;
    let bell_branch = bell_branches(&state, (0, 1))
        .ok()?
        .into_iter()
        .find(|b| b.outcome == bell)?;
    let pair = bell_branch.residual?;
    let arb_branch = x_branches(&pair, 0)
        .ok()?
        .into_iter()
        .find(|b| b.outcome == arb)?;
    Some((
        bell_branch.probability * arb_branch.probability,
        arb_branch.residual?,
    ))
}

/// Probability that one qubit passes Bob's check when the forger guesses
/// the Bell outcome uniformly, summed over the Born probabilities of the
/// true outcomes.
pub fn key_compromise_pass_probability(p: &QubitSpec) -> f64 {
    let target = p.to_state();
    let mut pass = 0.0;
    for bell in BellOutcome::ALL {
        for arb in XOutcome::ALL {
            let Some((prob, bob)) = bob_conditional(p, bell, arb) else {
                continue;
            };
            let passing = BellOutcome::ALL
                .into_iter()
                .filter(|guess| {
                    apply_pauli(pauli_correction(*guess, arb), &bob, 0)
                        .and_then(|s| fidelity(&s, &target))
                        .is_ok_and(|f| f >= 1.0 - ACCEPT_EPSILON)
                })
                .count();
            pass += prob * passing as f64 / 4.0;
        }
    }
    pass
}

/// Expected detection rate of a key-compromise campaign and its standard
/// error, trial by trial from the Born oracle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpectedRate {
    pub mean: f64,
    pub sigma: f64,
}

pub fn expected_key_compromise_detection(spec: &CampaignSpec) -> ExpectedRate {
    let per_trial: Vec<f64> = (0..spec.trials)
        .into_par_iter()
        .map(|t| {
            let message = spec.trial_message(t);
            1.0 - message
                .qubits()
                .iter()
                .map(key_compromise_pass_probability)
                .product::<f64>()
        })
        .collect();
    let trials = per_trial.len().max(1) as f64;
    let mean = per_trial.iter().sum::<f64>() / trials;
    let variance: f64 = per_trial.iter().map(|p| p * (1.0 - p)).sum();
    ExpectedRate {
        mean,
        sigma: variance.sqrt() / trials,
    }
}
