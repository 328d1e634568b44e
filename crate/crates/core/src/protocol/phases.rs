//! The initial, signing and verification phases, and the undeniable flow.

use rand::Rng;

use crate::cipher::{
    decode_receipt_signature, decode_signature, derive_bases, encode_receipt_signature,
    encode_signature, generate_key, otp_decrypt, otp_encrypt, records_equal, transform_message,
    CipherBlob, KeyId, ReceiptSignaturePayload, RotatedRecord, SecretKey, SignaturePayload,
    RECORD_TOLERANCE,
};
use crate::quantum::{
    apply_pauli, bell_branches, compose, fidelity, ghz3, pauli_correction, x_branches, BellOutcome,
    QubitSpec, XOutcome, NEGLIGIBLE_PROBABILITY,
};

use super::allocation::{GhzAllocation, QubitRole};
use super::channel::{Channel, Envelope, EnvelopePayload};
use super::payload::{blob_digest, PadBudget, SignatureRef, YbPayload, YtbPayload};
use super::transcript::{bell_record, x_record, MeasurementKind, Phase};
use super::types::{
    MessageString, PartyId, RejectReason, Variant, VerificationMode, VerificationReport,
};
use super::{ProtocolError, ACCEPT_EPSILON};

pub const ALICE_KEY_ID: &str = "K_a";
pub const BOB_KEY_ID: &str = "K_b";

/// Keys and registers after set-up.
#[derive(Debug, Clone)]
pub struct InitialState {
    pub k_a: SecretKey,
    pub k_b: SecretKey,
    pub allocation: GhzAllocation,
}

/// Generates both keys and one GHZ register per message qubit.
///
/// Fails before any key is drawn if `key_length` cannot cover the pad
/// budget of an `n`-qubit run. The first `n` bits of K_a select measurement
/// bases and are withheld from pad use.
pub fn initial_phase<R: Rng + ?Sized>(
    n: usize,
    key_length: usize,
    variant: Variant,
    rng: &mut R,
) -> Result<InitialState, ProtocolError> {
    if n == 0 {
        return Err(ProtocolError::InvalidConfig("n must be at least 1".into()));
    }
    let needed = PadBudget::for_run(n, variant).required_key_length();
    if key_length < needed {
        return Err(ProtocolError::InsufficientKey {
            needed,
            available: key_length,
        });
    }
    let mut k_a = generate_key(KeyId::new(ALICE_KEY_ID), key_length, rng)?;
    k_a.take_pad(n)?;
    let k_b = generate_key(KeyId::new(BOB_KEY_ID), key_length, rng)?;
    Ok(InitialState {
        k_a,
        k_b,
        allocation: GhzAllocation::new(n),
    })
}

/// Alice's private results plus the envelope Bob received.
#[derive(Debug, Clone)]
pub struct SigningOutput {
    pub signature: CipherBlob,
    pub alice_outcomes: Vec<BellOutcome>,
    pub record: RotatedRecord,
    pub envelope: Envelope,
}

fn check_length(message: &MessageString, allocation: &GhzAllocation) -> Result<(), ProtocolError> {
    if message.len() != allocation.len() {
        return Err(ProtocolError::LengthMismatch {
            message: message.len(),
            registers: allocation.len(),
        });
    }
    Ok(())
}

/// Builds the secret record, entangles and Bell-measures every message
/// qubit, encrypts the outcomes with the record and sends both to Bob.
pub fn signing_phase<R: Rng + ?Sized>(
    message: &MessageString,
    k_a: &mut SecretKey,
    allocation: &mut GhzAllocation,
    channel: &mut Channel<'_>,
    rng: &mut R,
) -> Result<SigningOutput, ProtocolError> {
    check_length(message, allocation)?;
    let bases = derive_bases(k_a, message.len())?;
    let record = transform_message(message.qubits(), &bases)?;

    let mut alice_outcomes = Vec::with_capacity(message.len());
    for (register, qubit) in allocation.registers_mut().iter_mut().zip(message.qubits()) {
        register.attach_message(qubit)?;
        alice_outcomes.push(register.bell_measure(rng)?);
    }
    channel.record_measurement(
        PartyId::Alice,
        MeasurementKind::Bell,
        bell_record(&alice_outcomes),
    );

    let payload = SignaturePayload::new(alice_outcomes.clone(), record.clone())
        .map_err(crate::cipher::CipherError::from)?;
    let signature = otp_encrypt(k_a, &encode_signature(&payload))?;
    channel.note_pad(&signature);
    let envelope = channel.send(
        PartyId::Alice,
        PartyId::Bob,
        EnvelopePayload::SignedMessage {
            message: message.clone(),
            signature: signature.clone(),
        },
    );
    Ok(SigningOutput {
        signature,
        alice_outcomes,
        record,
        envelope,
    })
}

/// The arbitrator's copy of Bob's request and Alice's binding signature in
/// the undeniable flow.
#[derive(Debug, Clone, PartialEq)]
pub struct ReceiptEvidence {
    pub yb: CipherBlob,
    pub signature: CipherBlob,
}

#[derive(Debug, Clone)]
pub struct VerificationOutcome {
    pub report: VerificationReport,
    pub receipt: Option<ReceiptEvidence>,
}

/// Whether Alice takes part in verification.
enum Flow<'k> {
    Base(&'k SecretKey),
    Undeniable {
        k_a: &'k mut SecretKey,
        signing: &'k SigningOutput,
    },
}

impl Flow<'_> {
    fn k_a(&self) -> &SecretKey {
        match self {
            Flow::Base(k) => k,
            Flow::Undeniable { k_a, .. } => k_a,
        }
    }
}

/// Result of the arbitrator's record check.
pub(crate) struct ArbitratorCheck {
    pub gamma: bool,
    pub alice_outcomes: Vec<BellOutcome>,
}

/// Decrypts a signature with K_a and compares its record with the record
/// recomputed from `message`. `expected_digest` is set for receipt
/// signatures. Anything that fails to decrypt or decode yields gamma = 0.
pub(crate) fn arbitrator_check(
    k_a: &SecretKey,
    signature: &CipherBlob,
    message: &MessageString,
    expected_digest: Option<[u8; 32]>,
) -> ArbitratorCheck {
    let reject = ArbitratorCheck {
        gamma: false,
        alice_outcomes: Vec::new(),
    };
    let Ok(plain) = otp_decrypt(k_a, signature) else {
        return reject;
    };
    let (payload, digest_ok) = match expected_digest {
        None => match decode_signature(&plain) {
            Ok(p) => (p, true),
            Err(_) => return reject,
        },
        Some(digest) => match decode_receipt_signature(&plain) {
            Ok(ReceiptSignaturePayload {
                signature,
                yb_digest,
            }) => (signature, yb_digest == digest),
            Err(_) => return reject,
        },
    };
    if payload.len() != message.len() {
        return reject;
    }
    let record_ok = derive_bases(k_a, message.len())
        .and_then(|bases| transform_message(message.qubits(), &bases))
        .is_ok_and(|expected| {
            payload.record.bit_identical(&expected)
                && records_equal(&payload.record, &expected, RECORD_TOLERANCE)
        });
    ArbitratorCheck {
        gamma: record_ok && digest_ok,
        alice_outcomes: payload.bell_outcomes,
    }
}

/// Bob's reconstruction when his share was measured before the corrections
/// were known.
///
/// From the received description `p` and the reported Bell outcome Bob
/// recomputes the arbitrator/Bob pair, conditions it on the arbitrator's x
/// outcome, and applies the correction. His own outcome must be possible in
/// that conditional state; otherwise the reported outcomes are inconsistent
/// and the fidelity is 0.
pub fn paper_order_fidelity(
    p: &QubitSpec,
    bell: BellOutcome,
    arb: XOutcome,
    bob: XOutcome,
) -> Result<f64, ProtocolError> {
    let state = compose(p, &ghz3())?;
    let branch = bell_branches(&state, (0, 1))?
        .into_iter()
        .find(|b| b.outcome == bell)
        .and_then(|b| b.residual);
    let Some(pair) = branch else {
        return Ok(0.0);
    };
    let conditional = x_branches(&pair, 0)?
        .into_iter()
        .find(|b| b.outcome == arb)
        .and_then(|b| b.residual);
    let Some(bob_qubit) = conditional else {
        return Ok(0.0);
    };
    let bob_possible = x_branches(&bob_qubit, 0)?
        .into_iter()
        .any(|b| b.outcome == bob && b.probability > NEGLIGIBLE_PROBABILITY);
    if !bob_possible {
        return Ok(0.0);
    }
    let corrected = apply_pauli(pauli_correction(bell, arb), &bob_qubit, 0)?;
    Ok(fidelity(&corrected, &p.to_state())?)
}

#[allow(clippy::too_many_arguments)]
fn verify<R: Rng + ?Sized>(
    envelope: &Envelope,
    mut flow: Flow<'_>,
    k_b: &mut SecretKey,
    allocation: &mut GhzAllocation,
    mode: VerificationMode,
    channel: &mut Channel<'_>,
    rng: &mut R,
) -> Result<VerificationOutcome, ProtocolError> {
    let done = |report| {
        Ok(VerificationOutcome {
            report,
            receipt: None,
        })
    };
    let EnvelopePayload::SignedMessage { message, signature } = &envelope.payload else {
        return Err(ProtocolError::UnexpectedEnvelope(envelope.payload.kind()));
    };
    if message.len() != allocation.len() {
        return done(VerificationReport::rejected(
            mode,
            false,
            RejectReason::StateMismatch,
        ));
    }
    let n = message.len();

    // Step 1: Bob measures (paper order) and asks the arbitrator.
    let own_bob_outcomes = match mode {
        VerificationMode::PaperOrder => {
            let outcomes = allocation
                .registers_mut()
                .iter_mut()
                .map(|r| r.x_measure(QubitRole::BobShare, rng))
                .collect::<Result<Vec<_>, _>>()?;
            channel.record_measurement(PartyId::Bob, MeasurementKind::X, x_record(&outcomes));
            outcomes
        }
        VerificationMode::Deferred => Vec::new(),
    };
    let yb_plain = YbPayload {
        bob_outcomes: own_bob_outcomes.clone(),
        signature: SignatureRef::of(signature),
        message: message.clone(),
    }
    .encode()
    .map_err(crate::cipher::CipherError::from)?;
    let yb = otp_encrypt(k_b, &yb_plain)?;
    channel.note_pad(&yb);

    // Undeniable flow: the request goes through Alice, who binds it.
    let (yb_at_arbitrator, arbitrator_signature, expected_digest, receipt) = match &mut flow {
        Flow::Base(_) => {
            let delivered =
                channel.send(PartyId::Bob, PartyId::Arbitrator, EnvelopePayload::Yb(yb));
            let EnvelopePayload::Yb(blob) = delivered.payload else {
                return Err(ProtocolError::UnexpectedEnvelope(delivered.payload.kind()));
            };
            (blob, None, None, None)
        }
        Flow::Undeniable { k_a, signing } => {
            let delivered = channel.send(PartyId::Bob, PartyId::Alice, EnvelopePayload::Yb(yb));
            let EnvelopePayload::Yb(yb_at_alice) = delivered.payload else {
                return Err(ProtocolError::UnexpectedEnvelope(delivered.payload.kind()));
            };
            let bound = ReceiptSignaturePayload {
                signature: SignaturePayload::new(
                    signing.alice_outcomes.clone(),
                    signing.record.clone(),
                )
                .map_err(crate::cipher::CipherError::from)?,
                yb_digest: blob_digest(&yb_at_alice),
            };
            let tilde = otp_encrypt(k_a, &encode_receipt_signature(&bound))?;
            channel.note_pad(&tilde);
            let delivered = channel.send(
                PartyId::Alice,
                PartyId::Arbitrator,
                EnvelopePayload::ForwardedSignature {
                    yb: yb_at_alice,
                    signature: tilde,
                },
            );
            let EnvelopePayload::ForwardedSignature { yb, signature } = delivered.payload else {
                return Err(ProtocolError::UnexpectedEnvelope(delivered.payload.kind()));
            };
            let digest = blob_digest(&yb);
            let evidence = ReceiptEvidence {
                yb: yb.clone(),
                signature: signature.clone(),
            };
            (yb, Some(signature), Some(digest), Some(evidence))
        }
    };

    // Step 2: the arbitrator opens y_b and sets gamma.
    let opened = otp_decrypt(k_b, &yb_at_arbitrator)
        .ok()
        .and_then(|bits| YbPayload::decode(&bits).ok());
    let Some(request) = opened else {
        return Ok(VerificationOutcome {
            report: VerificationReport::rejected(mode, false, RejectReason::DecryptError),
            receipt,
        });
    };
    let k_a_id = flow.k_a().id().clone();
    let signature_for_check =
        arbitrator_signature.unwrap_or_else(|| request.signature.to_blob(&k_a_id));
    let check = if request.message.len() == n {
        arbitrator_check(
            flow.k_a(),
            &signature_for_check,
            &request.message,
            expected_digest,
        )
    } else {
        ArbitratorCheck {
            gamma: false,
            alice_outcomes: Vec::new(),
        }
    };

    // Step 3: the arbitrator measures his shares and replies.
    let arb_outcomes = allocation
        .registers_mut()
        .iter_mut()
        .map(|r| r.x_measure(QubitRole::ArbitratorShare, rng))
        .collect::<Result<Vec<_>, _>>()?;
    channel.record_measurement(
        PartyId::Arbitrator,
        MeasurementKind::X,
        x_record(&arb_outcomes),
    );
    let ytb_plain = YtbPayload {
        alice_outcomes: check.alice_outcomes,
        bob_outcomes: request.bob_outcomes,
        arb_outcomes,
        gamma: check.gamma,
        signature: SignatureRef::of(&signature_for_check),
    }
    .encode()
    .map_err(crate::cipher::CipherError::from)?;
    let ytb = otp_encrypt(k_b, &ytb_plain)?;
    channel.note_pad(&ytb);
    let delivered = channel.send(PartyId::Arbitrator, PartyId::Bob, EnvelopePayload::Ytb(ytb));
    let EnvelopePayload::Ytb(ytb_at_bob) = delivered.payload else {
        return Err(ProtocolError::UnexpectedEnvelope(delivered.payload.kind()));
    };

    let finish = |report| {
        Ok(VerificationOutcome {
            report,
            receipt: receipt.clone(),
        })
    };

    // Step 4: Bob opens the reply.
    let reply = otp_decrypt(k_b, &ytb_at_bob)
        .ok()
        .and_then(|bits| YtbPayload::decode(&bits).ok());
    let Some(reply) = reply else {
        return finish(VerificationReport::rejected(
            mode,
            false,
            RejectReason::DecryptError,
        ));
    };

    // Step 5: gamma.
    if !reply.gamma {
        return finish(VerificationReport::rejected(
            mode,
            false,
            RejectReason::GammaZero,
        ));
    }
    if reply.alice_outcomes.len() != n || reply.arb_outcomes.len() != n {
        return finish(VerificationReport::rejected(
            mode,
            true,
            RejectReason::DecryptError,
        ));
    }
    if reply.bob_outcomes != own_bob_outcomes {
        return finish(VerificationReport::rejected(
            mode,
            true,
            RejectReason::StateMismatch,
        ));
    }

    // Step 6: rebuild the message from the corrections.
    let mut fidelities = Vec::with_capacity(n);
    match mode {
        VerificationMode::Deferred => {
            let mut late_outcomes = Vec::with_capacity(n);
            for (i, register) in allocation.registers_mut().iter_mut().enumerate() {
                let op = pauli_correction(reply.alice_outcomes[i], reply.arb_outcomes[i]);
                register.apply(QubitRole::BobShare, op)?;
                let corrected = register.lone_qubit(QubitRole::BobShare)?;
                fidelities.push(fidelity(corrected, &message.qubits()[i].to_state())?);
                late_outcomes.push(register.x_measure(QubitRole::BobShare, rng)?);
            }
            channel.record_measurement(PartyId::Bob, MeasurementKind::X, x_record(&late_outcomes));
        }
        VerificationMode::PaperOrder => {
            for (i, bob) in own_bob_outcomes.iter().enumerate() {
                fidelities.push(paper_order_fidelity(
                    &message.qubits()[i],
                    reply.alice_outcomes[i],
                    reply.arb_outcomes[i],
                    *bob,
                )?);
            }
        }
    }
    finish(VerificationReport::from_fidelities(
        mode,
        fidelities,
        ACCEPT_EPSILON,
    ))
}

/// Runs Bob's and the arbitrator's side of verification for the envelope
/// Bob received.
pub fn verification_phase<R: Rng + ?Sized>(
    envelope: &Envelope,
    k_a: &SecretKey,
    k_b: &mut SecretKey,
    allocation: &mut GhzAllocation,
    mode: VerificationMode,
    channel: &mut Channel<'_>,
    rng: &mut R,
) -> Result<VerificationReport, ProtocolError> {
    channel.enter_phase(Phase::Verification);
    verify(
        envelope,
        Flow::Base(k_a),
        k_b,
        allocation,
        mode,
        channel,
        rng,
    )
    .map(|o| o.report)
}

/// Verification in which Bob's request is routed through Alice, who returns
/// a signature over her outcomes, the record and a digest of the request.
#[allow(clippy::too_many_arguments)]
pub fn undeniable_variant<R: Rng + ?Sized>(
    envelope: &Envelope,
    signing: &SigningOutput,
    k_a: &mut SecretKey,
    k_b: &mut SecretKey,
    allocation: &mut GhzAllocation,
    mode: VerificationMode,
    channel: &mut Channel<'_>,
    rng: &mut R,
) -> Result<VerificationOutcome, ProtocolError> {
    channel.enter_phase(Phase::Verification);
    verify(
        envelope,
        Flow::Undeniable { k_a, signing },
        k_b,
        allocation,
        mode,
        channel,
        rng,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{fidelity as fid, PauliOp};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn setup(n: usize, seed: u64) -> (ChaCha8Rng, InitialState, MessageString) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let message = MessageString::haar_random(n, &mut rng).unwrap();
        let len = PadBudget::for_run(n, Variant::Undeniable).required_key_length();
        let init = initial_phase(n, len, Variant::Undeniable, &mut rng).unwrap();
        (rng, init, message)
    }

    #[test]
    fn initial_phase_shapes_and_errors() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let init = initial_phase(1, 2000, Variant::Base, &mut rng).unwrap();
        assert_eq!(init.allocation.shares().count(), 3);
        for r in init.allocation.registers() {
            assert!((fid(r.state(), &ghz3()).unwrap() - 1.0).abs() < 1e-12);
        }
        assert_eq!(init.k_a.cursor(), 1);
        assert_eq!(init.k_b.cursor(), 0);
        assert_ne!(init.k_a.bits(), init.k_b.bits());
        assert!(matches!(
            initial_phase(4, 10, Variant::Base, &mut rng),
            Err(ProtocolError::InsufficientKey { .. })
        ));
        assert!(initial_phase(0, 10_000, Variant::Base, &mut rng).is_err());

        let again =
            initial_phase(1, 2000, Variant::Base, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        assert_eq!(again.k_a, init.k_a);
        assert_eq!(again.allocation, init.allocation);
    }

    #[test]
    fn signing_leaves_pairs_and_matching_record() {
        let (mut rng, mut init, message) = setup(5, 3);
        let mut channel = Channel::new(None);
        let out = signing_phase(
            &message,
            &mut init.k_a,
            &mut init.allocation,
            &mut channel,
            &mut rng,
        )
        .unwrap();
        for r in init.allocation.registers() {
            assert_eq!(
                r.roles(),
                &[QubitRole::ArbitratorShare, QubitRole::BobShare]
            );
        }
        let expected =
            transform_message(message.qubits(), &derive_bases(&init.k_a, 5).unwrap()).unwrap();
        assert!(out.record.bit_identical(&expected));
        let plain = otp_decrypt(&init.k_a, &out.signature).unwrap();
        let payload = decode_signature(&plain).unwrap();
        assert_eq!(payload.bell_outcomes, out.alice_outcomes);
        assert_eq!(out.envelope.sender, PartyId::Alice);
        assert_eq!(out.envelope.receiver, PartyId::Bob);
    }

    #[test]
    fn signing_rejects_length_mismatch() {
        let (mut rng, mut init, _) = setup(2, 4);
        let short = MessageString::haar_random(1, &mut rng).unwrap();
        let mut channel = Channel::new(None);
        assert!(matches!(
            signing_phase(
                &short,
                &mut init.k_a,
                &mut init.allocation,
                &mut channel,
                &mut rng
            ),
            Err(ProtocolError::LengthMismatch {
                message: 1,
                registers: 2
            })
        ));
    }

    #[test]
    fn zero_message_psi_plus_branch_is_00() {
        // Scan seeds until the first register lands on PsiPlus.
        for seed in 0..64 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let message = MessageString::new(vec![QubitSpec::zero()]).unwrap();
            let mut init = initial_phase(1, 4000, Variant::Base, &mut rng).unwrap();
            let mut channel = Channel::new(None);
            let out = signing_phase(
                &message,
                &mut init.k_a,
                &mut init.allocation,
                &mut channel,
                &mut rng,
            )
            .unwrap();
            if out.alice_outcomes[0] == BellOutcome::PsiPlus {
                let residual = init.allocation.registers()[0].state();
                let expected = crate::quantum::PureState::basis(2, 0).unwrap();
                assert!((fid(residual, &expected).unwrap() - 1.0).abs() < 1e-12);
                return;
            }
        }
        panic!("no PsiPlus outcome in 64 seeds");
    }

    #[test]
    fn honest_deferred_and_paper_order_accept() {
        for mode in [VerificationMode::Deferred, VerificationMode::PaperOrder] {
            let (mut rng, mut init, message) = setup(6, 8);
            let mut channel = Channel::new(None);
            let out = signing_phase(
                &message,
                &mut init.k_a,
                &mut init.allocation,
                &mut channel,
                &mut rng,
            )
            .unwrap();
            let report = verification_phase(
                &out.envelope,
                &init.k_a,
                &mut init.k_b,
                &mut init.allocation,
                mode,
                &mut channel,
                &mut rng,
            )
            .unwrap();
            assert!(report.gamma);
            assert!(report.accepted, "{mode:?}: {report:?}");
            assert!(report.per_qubit_fidelity.iter().all(|f| *f >= 1.0 - 1e-9));
        }
    }

    #[test]
    fn record_bit_flip_gives_gamma_zero() {
        let (mut rng, mut init, message) = setup(3, 12);
        let mut channel = Channel::new(None);
        let mut out = signing_phase(
            &message,
            &mut init.k_a,
            &mut init.allocation,
            &mut channel,
            &mut rng,
        )
        .unwrap();
        if let EnvelopePayload::SignedMessage { signature, .. } = &mut out.envelope.payload {
            // Lowest mantissa bit of im(amp1) of the last record entry.
            let last = signature.len() - 1;
            signature.bits.flip(last);
        }
        let report = verification_phase(
            &out.envelope,
            &init.k_a,
            &mut init.k_b,
            &mut init.allocation,
            VerificationMode::Deferred,
            &mut channel,
            &mut rng,
        )
        .unwrap();
        assert!(!report.gamma);
        assert_eq!(report.reject_reason, Some(RejectReason::GammaZero));
    }

    #[test]
    fn undeniable_flow_binds_request() {
        let (mut rng, mut init, message) = setup(4, 21);
        let mut channel = Channel::new(None);
        let out = signing_phase(
            &message,
            &mut init.k_a,
            &mut init.allocation,
            &mut channel,
            &mut rng,
        )
        .unwrap();
        let outcome = undeniable_variant(
            &out.envelope,
            &out,
            &mut init.k_a,
            &mut init.k_b,
            &mut init.allocation,
            VerificationMode::Deferred,
            &mut channel,
            &mut rng,
        )
        .unwrap();
        assert!(outcome.report.accepted);
        let evidence = outcome.receipt.unwrap();
        let plain = otp_decrypt(&init.k_a, &evidence.signature).unwrap();
        let bound = decode_receipt_signature(&plain).unwrap();
        assert_eq!(bound.yb_digest, blob_digest(&evidence.yb));
        assert!(otp_decrypt(&init.k_b, &evidence.signature).is_err());
        let kinds: Vec<_> = channel
            .events()
            .iter()
            .filter_map(|e| match &e.body {
                super::super::transcript::EventBody::Envelope(env) => {
                    Some((env.sender, env.receiver))
                }
                _ => None,
            })
            .collect();
        assert!(kinds.contains(&(PartyId::Alice, PartyId::Arbitrator)));
        assert!(kinds.contains(&(PartyId::Bob, PartyId::Alice)));
    }

    #[test]
    fn paper_order_reconstruction_detects_wrong_bell() {
        let p = QubitSpec::from_parts([0.6, 0.0, 0.48, 0.64]).unwrap();
        for bell in BellOutcome::ALL {
            for arb in XOutcome::ALL {
                for bob in XOutcome::ALL {
                    let f = paper_order_fidelity(&p, bell, arb, bob).unwrap();
                    assert!((f - 1.0).abs() < 1e-9);
                }
            }
        }
        // Outcome-consistency: |0> message, PsiPlus and +x leave Bob in |0>,
        // for which both x outcomes are possible.
        let f = paper_order_fidelity(
            &QubitSpec::zero(),
            BellOutcome::PsiPlus,
            XOutcome::PlusX,
            XOutcome::MinusX,
        )
        .unwrap();
        assert!((f - 1.0).abs() < 1e-9);
        // With p = |+x>, PsiPlus and arbitrator +x leave Bob in |+x>: -x is impossible.
        let f = paper_order_fidelity(
            &QubitSpec::plus_x(),
            BellOutcome::PsiPlus,
            XOutcome::PlusX,
            XOutcome::MinusX,
        )
        .unwrap();
        assert_eq!(f, 0.0);
        let _ = PauliOp::Identity;
    }
}
