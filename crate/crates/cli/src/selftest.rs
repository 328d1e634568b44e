//! Reduced-size consistency checks of the quantum core.

use std::collections::BTreeMap;

use aqs_core::quantum::{
    apply_pauli, bell_branches, bob_marginal, compose, enumerate_joint_distribution, fidelity,
    ghz3, reduced_density, sample_chain, x_branches, BellOutcome, CorrectionTable, QubitSpec,
    XOutcome,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const TABLE_STATES: usize = 50;
pub const MARGINAL_STATES: usize = 50;
pub const SAMPLER_STATES: usize = 2;
pub const SAMPLER_SAMPLES: usize = 20_000;
pub const SAMPLER_MAX_TV: f64 = 0.03;
pub const NON_DEGENERATE_MARGIN: f64 = 1e-2;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn from(name: &'static str, outcome: Result<String, String>) -> Self {
        match outcome {
            Ok(detail) => Self {
                name,
                passed: true,
                detail,
            },
            Err(detail) => Self {
                name,
                passed: false,
                detail,
            },
        }
    }

    pub fn line(&self) -> String {
        format!(
            "{} {}: {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.detail
        )
    }
}

pub type TableKey = (BellOutcome, XOutcome);

/// Parses `bell:x,bell:x`, e.g. `psi+:+x,phi-:-x`.
pub fn parse_transposition(s: &str) -> Result<(TableKey, TableKey), String> {
    let key = |part: &str| {
        let (b, x) = part
            .split_once(':')
            .ok_or_else(|| format!("expected bell:x, got {part:?}"))?;
        let bell = BellOutcome::ALL
            .into_iter()
            .find(|o| o.label() == b)
            .ok_or_else(|| format!("unknown Bell outcome {b:?}"))?;
        let x = XOutcome::ALL
            .into_iter()
            .find(|o| o.label() == x)
            .ok_or_else(|| format!("unknown x outcome {x:?}"))?;
        Ok::<_, String>((bell, x))
    };
    let (a, b) = s
        .split_once(',')
        .ok_or("expected two entries separated by ','")?;
    Ok((key(a)?, key(b)?))
}

/// Worst fidelity of the corrected Bob qubit per (Bell, arbitrator x)
/// combination over `states`, by branch expansion of the full chain.
pub fn correction_fidelities(
    table: &CorrectionTable,
    states: &[QubitSpec],
) -> BTreeMap<(BellOutcome, XOutcome), f64> {
    let mut worst: BTreeMap<_, f64> = CorrectionTable::keys().map(|k| (k, 1.0)).collect();
    for p in states {
        let target = p.to_state();
        let chain = compose(p, &ghz3()).expect("three-qubit GHZ");
        for bell in bell_branches(&chain, (0, 1)).expect("valid pair") {
            let pair = bell.residual.expect("Bell branches have weight 1/4");
            for arb in x_branches(&pair, 0).expect("valid qubit") {
                let Some(bob) = arb.residual else { continue };
                let corrected = apply_pauli(table.lookup(bell.outcome, arb.outcome), &bob, 0)
                    .expect("single qubit");
                let f = fidelity(&corrected, &target).expect("same width");
                let entry = worst
                    .get_mut(&(bell.outcome, arb.outcome))
                    .expect("all keys");
                *entry = entry.min(f);
            }
        }
    }
    worst
}

pub fn non_degenerate_states(count: usize, rng: &mut ChaCha8Rng) -> Vec<QubitSpec> {
    (0..count)
        .map(|_| QubitSpec::haar_non_degenerate(rng, NON_DEGENERATE_MARGIN))
        .collect()
}

/// Every combination must reproduce the message within `1 - tolerance`.
pub fn check_correction_table(
    table: &CorrectionTable,
    states: &[QubitSpec],
    tolerance: f64,
) -> Result<String, String> {
    let failing: Vec<String> = correction_fidelities(table, states)
        .into_iter()
        .filter(|(_, f)| *f < 1.0 - tolerance)
        .map(|((b, x), f)| {
            format!(
                "bell={} arbitrator={} min_fidelity={f:.6}",
                b.label(),
                x.label()
            )
        })
        .collect();
    if failing.is_empty() {
        Ok(format!("8 combinations x {} states", states.len()))
    } else {
        Err(failing.join("; "))
    }
}

/// Largest elementwise gap between the closed-form Bob marginal and the
/// partial trace of the simulated residual.
pub fn marginal_gap(p: &QubitSpec) -> f64 {
    let chain = compose(p, &ghz3()).expect("three-qubit GHZ");
    bell_branches(&chain, (0, 1))
        .expect("valid pair")
        .into_iter()
        .map(|branch| {
            let pair = branch.residual.expect("Bell branches have weight 1/4");
            let traced = reduced_density(&pair, 1).expect("valid qubit");
            bob_marginal(branch.outcome, p).max_abs_diff(&traced)
        })
        .fold(0.0, f64::max)
}

pub fn check_marginals(states: &[QubitSpec], tolerance: f64) -> Result<String, String> {
    let worst = states.iter().map(marginal_gap).fold(0.0, f64::max);
    let detail = format!("{} states, max deviation {worst:.3e}", states.len());
    if worst <= tolerance {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// Total-variation distance between `samples` sampled chains and the exact
/// distribution.
pub fn sampler_distance(p: &QubitSpec, samples: usize, rng: &mut ChaCha8Rng) -> f64 {
    let mut counts = BTreeMap::new();
    for _ in 0..samples {
        *counts
            .entry(sample_chain(p, rng).expect("valid chain"))
            .or_insert(0u64) += 1;
    }
    let empirical = aqs_core::quantum::JointDistribution::from_counts(&counts);
    empirical.total_variation(&enumerate_joint_distribution(p))
}

pub fn check_sampler(
    states: &[QubitSpec],
    samples: usize,
    max_tv: f64,
    rng: &mut ChaCha8Rng,
) -> Result<String, String> {
    let worst = states
        .iter()
        .map(|p| sampler_distance(p, samples, rng))
        .fold(0.0, f64::max);
    let detail = format!(
        "{} states x {samples} samples, max TV {worst:.4}",
        states.len()
    );
    if worst < max_tv {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// Runs all three checks against `table`.
pub fn run_selftest(table: &CorrectionTable, seed: u64) -> Vec<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let states = non_degenerate_states(TABLE_STATES, &mut rng);
    let table_result = check_correction_table(table, &states, 1e-9);
    let marginal_states: Vec<_> = (0..MARGINAL_STATES)
        .map(|_| QubitSpec::haar_random(&mut rng))
        .collect();
    let sampler_states = non_degenerate_states(SAMPLER_STATES, &mut rng);
    vec![
        CheckResult::from("correction-table", table_result),
        CheckResult::from("bob-marginals", check_marginals(&marginal_states, 1e-12)),
        CheckResult::from(
            "sampler-vs-oracle",
            check_sampler(&sampler_states, SAMPLER_SAMPLES, SAMPLER_MAX_TV, &mut rng),
        ),
    ]
}
