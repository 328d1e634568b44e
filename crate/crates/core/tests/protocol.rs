use aqs_core::cipher::{audit_pad_usage, BitString, CipherBlob, SecretKey};
use aqs_core::protocol::{
    execute, parse_line, run_protocol, EnvelopePayload, EventBody, Interceptor, MessageSource,
    MessageString, PadBudget, PartyId, ProtocolConfig, ProtocolError, RejectReason, Variant,
    VerificationMode,
};
use aqs_core::quantum::{
    apply_pauli, fidelity, pauli_correction, x_measure, Amplitude, BellOutcome, PureState,
    QubitSpec, XOutcome,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn config(n: usize, seed: u64, mode: VerificationMode, variant: Variant) -> ProtocolConfig {
    let mut c = ProtocolConfig::new(n, seed);
    c.mode = mode;
    c.variant = variant;
    c
}

#[test]
fn honest_runs_accept_in_every_mode_and_variant() {
    for n in [1, 4, 16] {
        for mode in [VerificationMode::Deferred, VerificationMode::PaperOrder] {
            for variant in [Variant::Base, Variant::Undeniable] {
                for seed in 0..5 {
                    let t = run_protocol(&config(n, seed, mode, variant));
                    let report = t.report.as_ref().expect("report");
                    assert!(
                        report.accepted && report.gamma,
                        "{n} {mode:?} {variant:?} {seed}"
                    );
                    assert_eq!(report.per_qubit_fidelity.len(), n);
                }
            }
        }
    }
}

#[test]
fn final_line_reports_acceptance() {
    let text = run_protocol(&ProtocolConfig::new(4, 11)).to_text();
    let last = parse_line(text.lines().last().unwrap());
    assert_eq!(last["kind"], "report");
    assert_eq!(last["accepted"], "true");
    assert_eq!(last["gamma"], "1");
    assert_eq!(last["reason"], "none");
    let seqs: Vec<u64> = text
        .lines()
        .map(|l| parse_line(l)["seq"].parse().unwrap())
        .collect();
    assert!(seqs.windows(2).all(|w| w[1] == w[0] + 1));
}

#[test]
fn identical_seed_identical_transcript() {
    for variant in [Variant::Base, Variant::Undeniable] {
        let c = config(8, 77, VerificationMode::PaperOrder, variant);
        assert_eq!(run_protocol(&c).to_text(), run_protocol(&c).to_text());
    }
    assert_ne!(
        run_protocol(&ProtocolConfig::new(8, 1)).to_text(),
        run_protocol(&ProtocolConfig::new(8, 2)).to_text()
    );
}

#[test]
fn no_key_bit_pads_twice_or_overlaps_basis_prefix() {
    for variant in [Variant::Base, Variant::Undeniable] {
        for n in [1, 5, 16] {
            let out = execute(&config(n, 3, VerificationMode::Deferred, variant), None);
            let log = &out.transcript.pad_log;
            assert_eq!(log.len(), if variant == Variant::Base { 3 } else { 4 });
            audit_pad_usage(log).unwrap();
            for blob in log.iter().filter(|b| b.pad_key_id.as_str() == "K_a") {
                assert!(blob.pad_offset >= n);
            }
            let (k_a, k_b) = out.keys.unwrap();
            assert!(k_a.cursor() <= k_a.len() && k_b.cursor() <= k_b.len());
        }
    }
}

#[test]
fn audit_catches_a_duplicated_pad() {
    let out = execute(&ProtocolConfig::new(2, 3), None);
    let mut log = out.transcript.pad_log.clone();
    log.push(log[0].clone());
    assert!(audit_pad_usage(&log).is_err());
}

#[test]
fn insufficient_key_aborts_before_any_envelope() {
    for variant in [Variant::Base, Variant::Undeniable] {
        let needed = PadBudget::for_run(6, variant).required_key_length();
        let mut c = config(6, 9, VerificationMode::Deferred, variant);
        c.key_bits = Some(needed - 1);
        let out = execute(&c, None);
        assert!(matches!(
            out.error,
            Some(ProtocolError::InsufficientKey { .. })
        ));
        assert_eq!(out.transcript.envelopes().count(), 0);
        assert!(out.transcript.pad_log.is_empty());
        c.key_bits = Some(needed);
        assert!(execute(&c, None).transcript.accepted());
    }
}

fn bit_text(bits: &BitString) -> String {
    bits.iter().map(|b| if b { '1' } else { '0' }).collect()
}

#[test]
fn no_key_window_appears_on_the_channel() {
    let out = execute(
        &config(4, 21, VerificationMode::Deferred, Variant::Undeniable),
        None,
    );
    let wire: String = out
        .transcript
        .envelopes()
        .map(|e| bit_text(&e.payload.wire_bits()))
        .collect::<Vec<_>>()
        .join("|");
    let (k_a, k_b) = out.keys.unwrap();
    for key in [&k_a, &k_b] {
        let text = bit_text(key.bits());
        for start in (0..text.len().saturating_sub(64)).step_by(8) {
            assert!(
                !wire.contains(&text[start..start + 64]),
                "{} window at {start}",
                key.id()
            );
        }
    }
}

/// Flips the last bit of the signature: the lowest mantissa bit of the final
/// record amplitude.
struct FlipLastSignatureBit;

impl Interceptor for FlipLastSignatureBit {
    fn intercept(&mut self, _: PartyId, _: PartyId, payload: &mut EnvelopePayload) {
        if let EnvelopePayload::SignedMessage { signature, .. } = payload {
            let last = signature.len() - 1;
            signature.bits.flip(last);
        }
    }
}

#[test]
fn smallest_record_perturbation_is_caught_by_gamma() {
    let mut hook = FlipLastSignatureBit;
    let out = execute(&ProtocolConfig::new(3, 5), Some(&mut hook));
    let report = out.report.unwrap();
    assert!(!report.gamma && !report.accepted);
    assert_eq!(report.reject_reason, Some(RejectReason::GammaZero));
    let last = out.transcript.to_text().lines().last().unwrap().to_string();
    assert!(last.contains("accepted=false gamma=0"));
}

/// In the undeniable flow, flips one bit of the digest Alice bound into her
/// re-signature.
struct FlipDigest;

impl Interceptor for FlipDigest {
    fn intercept(&mut self, _: PartyId, _: PartyId, payload: &mut EnvelopePayload) {
        if let EnvelopePayload::ForwardedSignature { signature, .. } = payload {
            let last = signature.len() - 1;
            signature.bits.flip(last - 100);
        }
    }
}

#[test]
fn tampered_receipt_digest_is_rejected() {
    let mut hook = FlipDigest;
    let c = config(3, 5, VerificationMode::Deferred, Variant::Undeniable);
    let report = execute(&c, Some(&mut hook)).report.unwrap();
    assert_eq!(report.reject_reason, Some(RejectReason::GammaZero));
}

/// Corrupts Bob's request in transit to the arbitrator.
struct ScrambleRequest;

impl Interceptor for ScrambleRequest {
    fn intercept(&mut self, _: PartyId, _: PartyId, payload: &mut EnvelopePayload) {
        if let EnvelopePayload::Yb(blob) = payload {
            blob.bits.flip(5);
        }
    }
}

#[test]
fn garbled_request_is_a_decrypt_error() {
    let mut hook = ScrambleRequest;
    let report = execute(&ProtocolConfig::new(2, 5), Some(&mut hook))
        .report
        .unwrap();
    assert!(!report.accepted);
    assert_eq!(report.reject_reason, Some(RejectReason::DecryptError));
}

/// Observes the keys without touching anything.
struct KeyObserver(Option<(SecretKey, SecretKey)>);

impl Interceptor for KeyObserver {
    fn on_keys(&mut self, k_a: &SecretKey, k_b: &SecretKey) {
        self.0 = Some((k_a.clone(), k_b.clone()));
    }

    fn intercept(&mut self, _: PartyId, _: PartyId, _: &mut EnvelopePayload) {}
}

#[test]
fn passive_interceptor_changes_nothing() {
    let c = ProtocolConfig::new(4, 8);
    let mut hook = KeyObserver(None);
    let watched = execute(&c, Some(&mut hook));
    assert_eq!(watched.transcript.to_text(), run_protocol(&c).to_text());
    let (k_a, _) = hook.0.unwrap();
    assert_eq!(k_a.cursor(), 4);
}

#[test]
fn ciphertexts_are_only_decryptable_with_their_key() {
    let out = execute(&ProtocolConfig::new(2, 4), None);
    let (k_a, k_b) = out.keys.unwrap();
    let blobs: Vec<&CipherBlob> = out.transcript.public_ciphertexts().collect();
    assert!(blobs.iter().any(|b| b.pad_key_id == *k_a.id()));
    assert!(blobs.iter().any(|b| b.pad_key_id == *k_b.id()));
    for blob in blobs {
        let wrong = if blob.pad_key_id == *k_a.id() {
            &k_b
        } else {
            &k_a
        };
        assert!(aqs_core::cipher::otp_decrypt(wrong, blob).is_err());
    }
}

#[test]
fn worked_example_zero_message_psi_plus_plus_x() {
    // Message |0>, Alice finds PsiPlus: the arbitrator/Bob pair is |00>.
    let pair = PureState::basis(2, 0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let (outcome, bob) = loop {
        let (o, b) = x_measure(&pair, 0, &mut rng).unwrap();
        if o == XOutcome::PlusX {
            break (o, b);
        }
    };
    let op = pauli_correction(BellOutcome::PsiPlus, outcome);
    assert_eq!(op, aqs_core::quantum::PauliOp::Identity);
    let corrected = apply_pauli(op, &bob, 0).unwrap();
    let f = fidelity(&corrected, &QubitSpec::zero().to_state()).unwrap();
    assert!((f - 1.0).abs() < 1e-12);

    // The same through a full protocol run with an explicit |0> message.
    let mut c = ProtocolConfig::new(1, 0);
    c.message = MessageSource::Explicit(MessageString::new(vec![QubitSpec::zero()]).unwrap());
    for seed in 0..8 {
        c.seed = seed;
        assert!(run_protocol(&c).accepted());
    }
}

#[test]
fn worked_example_general_amplitudes() {
    // alpha|00> + beta|11>, arbitrator +x: Bob holds alpha|0> + beta|1>.
    let (a, b) = (Amplitude::new(0.6, 0.0), Amplitude::new(0.0, 0.8));
    let pair = PureState::new(
        2,
        vec![a, Amplitude::new(0.0, 0.0), Amplitude::new(0.0, 0.0), b],
    )
    .unwrap();
    let branches = aqs_core::quantum::x_branches(&pair, 0).unwrap();
    let plus = branches
        .iter()
        .find(|br| br.outcome == XOutcome::PlusX)
        .unwrap();
    assert!((plus.probability - 0.5).abs() < 1e-12);
    let target = QubitSpec::new(a, b).unwrap().to_state();
    let f = fidelity(plus.residual.as_ref().unwrap(), &target).unwrap();
    assert!((f - 1.0).abs() < 1e-12);
}

#[test]
fn paper_order_outcome_frequencies_on_a_long_message() {
    let n = 1000;
    let qubit = QubitSpec::from_parts([0.6, 0.0, 0.0, 0.8]).unwrap();
    let mut c = config(n, 99, VerificationMode::PaperOrder, Variant::Base);
    c.message = MessageSource::Explicit(MessageString::new(vec![qubit; n]).unwrap());
    let out = execute(&c, None);
    assert!(out.transcript.accepted());
    let bell = &out.signing.as_ref().unwrap().alice_outcomes;
    for target in BellOutcome::ALL {
        let freq = bell.iter().filter(|b| **b == target).count() as f64 / n as f64;
        // Binomial(1000, 1/4): sd ~ 0.0137; 5 sd.
        assert!((freq - 0.25).abs() < 0.07, "{target:?} {freq}");
    }
    let bob_bits: Vec<_> = out
        .transcript
        .events
        .iter()
        .filter_map(|e| match &e.body {
            EventBody::Measurement {
                party: PartyId::Bob,
                bits,
                ..
            } => Some(bits.clone()),
            _ => None,
        })
        .collect();
    assert_eq!(bob_bits.len(), 1);
    let ones = bob_bits[0].iter().skip(32).filter(|b| *b).count() as f64 / n as f64;
    assert!((ones - 0.5).abs() < 0.08);
}
