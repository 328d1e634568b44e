//! End-to-end runs from a configuration and a seed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cipher::SecretKey;

use super::channel::{Channel, Interceptor};
use super::payload::PadBudget;
use super::phases::{
    initial_phase, signing_phase, undeniable_variant, verification_phase, ReceiptEvidence,
    SigningOutput,
};
use super::transcript::{EventBody, Phase, Transcript};
use super::types::{MessageString, Variant, VerificationMode, VerificationReport};
use super::ProtocolError;

#[derive(Debug, Clone, PartialEq)]
pub enum MessageSource {
    /// n Haar-random qubits drawn from the run's generator.
    HaarRandom,
    Explicit(MessageString),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolConfig {
    pub n: usize,
    pub seed: u64,
    pub mode: VerificationMode,
    pub variant: Variant,
    pub message: MessageSource,
    /// Key length override; defaults to the run's pad budget.
    pub key_bits: Option<usize>,
}

impl ProtocolConfig {
    pub fn new(n: usize, seed: u64) -> Self {
        Self {
            n,
            seed,
            mode: VerificationMode::Deferred,
            variant: Variant::Base,
            message: MessageSource::HaarRandom,
            key_bits: None,
        }
    }

    pub fn key_length(&self) -> usize {
        self.key_bits
            .unwrap_or_else(|| PadBudget::for_run(self.n, self.variant).required_key_length())
    }

    fn describe(&self) -> String {
        format!(
            "n={} seed={} mode={} variant={} message={} key_bits={}",
            self.n,
            self.seed,
            self.mode.label(),
            self.variant.label(),
            match self.message {
                MessageSource::HaarRandom => "haar",
                MessageSource::Explicit(_) => "explicit",
            },
            self.key_length()
        )
    }
}

/// Everything a run produced, including private material for test oracles.
#[derive(Debug)]
pub struct RunOutcome {
    pub transcript: Transcript,
    pub message: Option<MessageString>,
    /// (K_a, K_b) as they stood at the end of the run.
    pub keys: Option<(SecretKey, SecretKey)>,
    pub signing: Option<SigningOutput>,
    pub report: Option<VerificationReport>,
    pub receipt: Option<ReceiptEvidence>,
    pub error: Option<ProtocolError>,
}

#[derive(Default)]
struct Partial {
    message: Option<MessageString>,
    keys: Option<(SecretKey, SecretKey)>,
    signing: Option<SigningOutput>,
    report: Option<VerificationReport>,
    receipt: Option<ReceiptEvidence>,
}

fn drive(
    config: &ProtocolConfig,
    channel: &mut Channel<'_>,
    out: &mut Partial,
) -> Result<(), ProtocolError> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let message = match &config.message {
        MessageSource::HaarRandom => MessageString::haar_random(config.n, &mut rng)?,
        MessageSource::Explicit(m) if m.len() == config.n => m.clone(),
        MessageSource::Explicit(m) => {
            return Err(ProtocolError::InvalidConfig(format!(
                "message has {} qubits, expected {}",
                m.len(),
                config.n
            )))
        }
    };
    out.message = Some(message.clone());

    channel.enter_phase(Phase::Initial);
    let mut init = initial_phase(config.n, config.key_length(), config.variant, &mut rng)?;
    if let Some(hook) = channel.interceptor() {
        hook.on_keys(&init.k_a, &init.k_b);
    }

    channel.enter_phase(Phase::Signing);
    let signing = signing_phase(
        &message,
        &mut init.k_a,
        &mut init.allocation,
        channel,
        &mut rng,
    );
    let signing = match signing {
        Ok(s) => s,
        Err(e) => {
            out.keys = Some((init.k_a, init.k_b));
            return Err(e);
        }
    };
    let received = signing.envelope.clone();

    let verified = match config.variant {
        Variant::Base => verification_phase(
            &received,
            &init.k_a,
            &mut init.k_b,
            &mut init.allocation,
            config.mode,
            channel,
            &mut rng,
        )
        .map(|report| (report, None)),
        Variant::Undeniable => undeniable_variant(
            &received,
            &signing,
            &mut init.k_a,
            &mut init.k_b,
            &mut init.allocation,
            config.mode,
            channel,
            &mut rng,
        )
        .map(|o| (o.report, o.receipt)),
    };
    out.keys = Some((init.k_a, init.k_b));
    out.signing = Some(signing);
    let (report, receipt) = verified?;

    channel.enter_phase(Phase::Report);
    channel.record(EventBody::Report(report.clone()));
    out.report = Some(report);
    out.receipt = receipt;
    Ok(())
}

/// Runs the protocol once, letting `interceptor` see keys and rewrite
/// envelopes. Failures end the transcript with a failure line.
pub fn execute(config: &ProtocolConfig, interceptor: Option<&mut dyn Interceptor>) -> RunOutcome {
    let mut channel = Channel::new(interceptor);
    let describe = config.describe();
    channel.record(EventBody::Config(describe.clone()));
    let mut partial = Partial::default();
    let error = drive(config, &mut channel, &mut partial).err();
    if let Some(e) = &error {
        channel.record(EventBody::Failure(e.to_string()));
    }
    let (events, pad_log) = channel.into_logs();
    RunOutcome {
        transcript: Transcript {
            seed: config.seed,
            config: describe,
            events,
            report: partial.report.clone(),
            failure: error.as_ref().map(ToString::to_string),
            pad_log,
        },
        message: partial.message,
        keys: partial.keys,
        signing: partial.signing,
        report: partial.report,
        receipt: partial.receipt,
        error,
    }
}

/// Honest run with no interceptor.
pub fn run_protocol(config: &ProtocolConfig) -> Transcript {
    execute(config, None).transcript
}
