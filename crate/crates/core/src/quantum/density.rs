//! Single-qubit reduced density matrices.

use num_complex::Complex64;

use super::measure::BellOutcome;
use super::state::{Amplitude, PureState, QubitSpec};
use super::QuantumError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix2 {
    pub entries: [[Amplitude; 2]; 2],
}

impl DensityMatrix2 {
    pub fn diagonal(p0: f64, p1: f64) -> Self {
        let z = Complex64::new(0.0, 0.0);
        Self {
            entries: [[Complex64::new(p0, 0.0), z], [z, Complex64::new(p1, 0.0)]],
        }
    }

    pub fn trace(&self) -> Amplitude {
        self.entries[0][0] + self.entries[1][1]
    }

    /// Largest elementwise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &DensityMatrix2) -> f64 {
        let mut worst: f64 = 0.0;
        for r in 0..2 {
            for c in 0..2 {
                worst = worst.max((self.entries[r][c] - other.entries[r][c]).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        let e = &self.entries;
        e[0][0].im.abs() <= tol
            && e[1][1].im.abs() <= tol
            && (e[0][1] - e[1][0].conj()).norm() <= tol
    }

    /// Eigenvalues of a Hermitian 2x2 matrix, ascending.
    pub fn eigenvalues(&self) -> [f64; 2] {
        let a = self.entries[0][0].re;
        let d = self.entries[1][1].re;
        let off = self.entries[0][1].norm();
        let mean = 0.5 * (a + d);
        let radius = (0.25 * (a - d) * (a - d) + off * off).sqrt();
        [mean - radius, mean + radius]
    }
}

/// Reduced density matrix of `qubit`, tracing out all others.
pub fn reduced_density(state: &PureState, qubit: usize) -> Result<DensityMatrix2, QuantumError> {
    state.check_index(qubit)?;
    let mask = state.mask(qubit);
    let amps = state.amplitudes();
    let mut rho = [[Complex64::new(0.0, 0.0); 2]; 2];
    for low in (0..amps.len()).filter(|i| i & mask == 0) {
        let pair = [amps[low], amps[low | mask]];
        for r in 0..2 {
            for c in 0..2 {
                rho[r][c] += pair[r] * pair[c].conj();
            }
        }
    }
    Ok(DensityMatrix2 { entries: rho })
}

/// Bob's reduced state after Alice's Bell outcome, before any x measurement.
pub fn bob_marginal(bell: BellOutcome, p: &QubitSpec) -> DensityMatrix2 {
    let a = p.alpha().norm_sqr();
    let b = p.beta().norm_sqr();
    match bell {
        BellOutcome::PsiPlus | BellOutcome::PsiMinus => DensityMatrix2::diagonal(a, b),
        BellOutcome::PhiPlus | BellOutcome::PhiMinus => DensityMatrix2::diagonal(b, a),
    }
}
