//! Exact outcome statistics of the signing/verification measurement chain.

use std::collections::BTreeMap;

use rand::Rng;

use super::measure::{bell_branches, bell_measure, x_branches, x_measure, BellOutcome, XOutcome};
use super::state::{compose, ghz3, QubitSpec};
use super::QuantumError;

/// Key of the joint distribution: (Alice's Bell outcome, Bob's x outcome,
/// arbitrator's x outcome).
pub type ChainOutcome = (BellOutcome, XOutcome, XOutcome);

/// Probability of every measurement-chain outcome triple.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct JointDistribution {
    probabilities: BTreeMap<ChainOutcome, f64>,
}

impl JointDistribution {
    pub fn all_outcomes() -> impl Iterator<Item = ChainOutcome> {
        BellOutcome::ALL.into_iter().flat_map(|b| {
            XOutcome::ALL
                .into_iter()
                .flat_map(move |bob| XOutcome::ALL.into_iter().map(move |arb| (b, bob, arb)))
        })
    }

    /// Empirical distribution from raw outcome counts.
    pub fn from_counts(counts: &BTreeMap<ChainOutcome, u64>) -> Self {
        let total: u64 = counts.values().sum();
        let probabilities = Self::all_outcomes()
            .map(|k| {
                let c = counts.get(&k).copied().unwrap_or(0);
                (k, c as f64 / total.max(1) as f64)
            })
            .collect();
        Self { probabilities }
    }

    pub fn probability(&self, outcome: ChainOutcome) -> f64 {
        self.probabilities.get(&outcome).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ChainOutcome, &f64)> {
        self.probabilities.iter()
    }

    pub fn total(&self) -> f64 {
        self.probabilities.values().sum()
    }

    pub fn bell_marginal(&self, bell: BellOutcome) -> f64 {
        self.iter()
            .filter(|(k, _)| k.0 == bell)
            .map(|(_, p)| p)
            .sum()
    }

    pub fn bob_marginal(&self, bob: XOutcome) -> f64 {
        self.iter()
            .filter(|(k, _)| k.1 == bob)
            .map(|(_, p)| p)
            .sum()
    }

    pub fn arbitrator_marginal(&self, arb: XOutcome) -> f64 {
        self.iter()
            .filter(|(k, _)| k.2 == arb)
            .map(|(_, p)| p)
            .sum()
    }

    /// Probability of (Bell, arbitrator) with Bob's outcome summed out.
    pub fn bell_arbitrator(&self, bell: BellOutcome, arb: XOutcome) -> f64 {
        XOutcome::ALL
            .iter()
            .map(|&bob| self.probability((bell, bob, arb)))
            .sum()
    }

    /// Total-variation distance `1/2 * sum |p - q|`.
    pub fn total_variation(&self, other: &JointDistribution) -> f64 {
        0.5 * Self::all_outcomes()
            .map(|k| (self.probability(k) - other.probability(k)).abs())
            .sum::<f64>()
    }
}

/// Exact joint distribution of (Bell on message+Alice, x on Bob, x on
/// arbitrator) for `compose(p, ghz3())`, by branch expansion.
pub fn enumerate_joint_distribution(p: &QubitSpec) -> JointDistribution {
    let state = compose(p, &ghz3()).expect("ghz3 has three qubits");
    let mut probabilities = BTreeMap::new();
    for bell in bell_branches(&state, (0, 1)).expect("indices are valid") {
        for bob in expand_or_zero(bell.residual.as_ref(), 1) {
            for arb in expand_or_zero(bob.1.as_ref(), 0) {
                let p = bell.probability * bob.2 * arb.2;
                probabilities.insert((bell.outcome, bob.0, arb.0), p);
            }
        }
    }
    JointDistribution { probabilities }
}

/// Samples one run of the chain with the same measurement order as
/// [`enumerate_joint_distribution`].
pub fn sample_chain<R: Rng + ?Sized>(
    p: &QubitSpec,
    rng: &mut R,
) -> Result<ChainOutcome, QuantumError> {
    let state = compose(p, &ghz3())?;
    let (bell, pair) = bell_measure(&state, (0, 1), rng)?;
    let (bob, arb_only) = x_measure(&pair, 1, rng)?;
    let (arb, _) = x_measure(&arb_only, 0, rng)?;
    Ok((bell, bob, arb))
}

type XTerm = (XOutcome, Option<crate::quantum::PureState>, f64);

fn expand_or_zero(state: Option<&crate::quantum::PureState>, qubit: usize) -> Vec<XTerm> {
    match state {
        Some(s) => x_branches(s, qubit)
            .expect("qubit index is valid")
            .into_iter()
            .map(|b| (b.outcome, b.residual, b.probability))
            .collect(),
        None => XOutcome::ALL.iter().map(|&x| (x, None, 0.0)).collect(),
    }
}
