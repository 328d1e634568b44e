//! Pure states over at most four qubits.
//!
//! Amplitudes are indexed by the computational basis label in big-endian
//! order: qubit 0 is the most significant bit of the index.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::Rng;

use super::{QuantumError, NORM_TOLERANCE};

/// Complex probability amplitude.
pub type Amplitude = Complex64;

/// Largest register the engine will hold.
pub const MAX_QUBITS: usize = 4;

pub(crate) fn check_finite(a: Amplitude) -> Result<(), QuantumError> {
    if a.re.is_finite() && a.im.is_finite() {
        Ok(())
    } else {
        Err(QuantumError::NonFinite)
    }
}

/// Classical description `alpha|0> + beta|1>` of one message qubit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitSpec {
    alpha: Amplitude,
    beta: Amplitude,
}

impl QubitSpec {
    pub fn new(alpha: Amplitude, beta: Amplitude) -> Result<Self, QuantumError> {
        check_finite(alpha)?;
        check_finite(beta)?;
        let norm = alpha.norm_sqr() + beta.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(QuantumError::NotNormalized(norm));
        }
        Ok(Self { alpha, beta })
    }

    /// Builds a spec from real and imaginary parts, in the order used by
    /// message files: `re(alpha) im(alpha) re(beta) im(beta)`.
    pub fn from_parts(parts: [f64; 4]) -> Result<Self, QuantumError> {
        Self::new(
            Complex64::new(parts[0], parts[1]),
            Complex64::new(parts[2], parts[3]),
        )
    }

    pub fn zero() -> Self {
        Self {
            alpha: Complex64::new(1.0, 0.0),
            beta: Complex64::new(0.0, 0.0),
        }
    }

    pub fn one() -> Self {
        Self {
            alpha: Complex64::new(0.0, 0.0),
            beta: Complex64::new(1.0, 0.0),
        }
    }

    pub fn plus_x() -> Self {
        Self {
            alpha: Complex64::new(FRAC_1_SQRT_2, 0.0),
            beta: Complex64::new(FRAC_1_SQRT_2, 0.0),
        }
    }

    /// Samples a qubit from the Haar (unitarily invariant) measure.
    ///
    /// `|alpha|^2` is uniform on `[0, 1]` under that measure; both phases are
    /// drawn uniformly.
    pub fn haar_random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let weight: f64 = rng.random();
        let phase_a = rng.random::<f64>() * std::f64::consts::TAU;
        let phase_b = rng.random::<f64>() * std::f64::consts::TAU;
        let alpha = Complex64::from_polar(weight.sqrt(), phase_a);
        let beta = Complex64::from_polar((1.0 - weight).sqrt(), phase_b);
        // Renormalize away the last ulp of rounding.
        let norm = (alpha.norm_sqr() + beta.norm_sqr()).sqrt();
        Self {
            alpha: alpha / norm,
            beta: beta / norm,
        }
    }

    /// Haar sample conditioned on [`QubitSpec::is_pauli_distinguishable`].
    pub fn haar_non_degenerate<R: Rng + ?Sized>(rng: &mut R, margin: f64) -> Self {
        loop {
            let spec = Self::haar_random(rng);
            if spec.is_pauli_distinguishable(margin) {
                return spec;
            }
        }
    }

    pub fn alpha(&self) -> Amplitude {
        self.alpha
    }

    pub fn beta(&self) -> Amplitude {
        self.beta
    }

    pub fn parts(&self) -> [f64; 4] {
        [self.alpha.re, self.alpha.im, self.beta.re, self.beta.im]
    }

    /// True when every non-identity Pauli moves the state to fidelity at
    /// most `1 - margin`, i.e. a wrong correction cannot go unnoticed.
    ///
    /// The three overlaps are `(|a|^2 - |b|^2)^2` for sigma_z,
    /// `4 Re(a* b)^2` for sigma_x and `4 Im(a* b)^2` for sigma_x sigma_z.
    pub fn is_pauli_distinguishable(&self, margin: f64) -> bool {
        let cross = self.alpha.conj() * self.beta;
        let z = (self.alpha.norm_sqr() - self.beta.norm_sqr()).powi(2);
        let x = 4.0 * cross.re * cross.re;
        let xz = 4.0 * cross.im * cross.im;
        [z, x, xz].iter().all(|f| *f <= 1.0 - margin)
    }

    pub fn to_state(&self) -> PureState {
        PureState {
            qubits: 1,
            amps: vec![self.alpha, self.beta],
        }
    }
}

/// Normalized state vector over `qubit_count` qubits.
///
/// Zero-qubit states (a single unit amplitude) appear as the residual of a
/// measurement that consumed every qubit.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    qubits: usize,
    amps: Vec<Amplitude>,
}

impl PureState {
    pub fn new(qubits: usize, amps: Vec<Amplitude>) -> Result<Self, QuantumError> {
        if qubits > MAX_QUBITS {
            return Err(QuantumError::TooManyQubits(qubits));
        }
        if amps.len() != 1 << qubits {
            return Err(QuantumError::AmplitudeCount {
                qubits,
                len: amps.len(),
            });
        }
        for a in &amps {
            check_finite(*a)?;
        }
        let state = Self { qubits, amps };
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(QuantumError::NotNormalized(norm));
        }
        Ok(state)
    }

    /// Normalizes `amps` and wraps them; used for post-measurement residuals.
    pub(crate) fn from_unnormalized(qubits: usize, mut amps: Vec<Amplitude>) -> Self {
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        for a in &mut amps {
            *a /= norm;
        }
        Self { qubits, amps }
    }

    /// Computational basis state `|label>`.
    pub fn basis(qubits: usize, label: usize) -> Result<Self, QuantumError> {
        if qubits > MAX_QUBITS {
            return Err(QuantumError::TooManyQubits(qubits));
        }
        let dim = 1 << qubits;
        if label >= dim {
            return Err(QuantumError::IndexOutOfRange {
                index: label,
                qubits: dim,
            });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[label] = Complex64::new(1.0, 0.0);
        Ok(Self { qubits, amps })
    }

    pub fn qubit_count(&self) -> usize {
        self.qubits
    }

    pub fn amplitudes(&self) -> &[Amplitude] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Tensor product `self ⊗ other`; `self` supplies the leading qubits.
    pub fn tensor(&self, other: &PureState) -> Result<PureState, QuantumError> {
        let qubits = self.qubits + other.qubits;
        if qubits > MAX_QUBITS {
            return Err(QuantumError::TooManyQubits(qubits));
        }
        let amps = self
            .amps
            .iter()
            .flat_map(|a| other.amps.iter().map(move |b| a * b))
            .collect();
        Ok(PureState { qubits, amps })
    }

    /// Multiplies every amplitude by `phase`; `phase` must have unit modulus.
    pub fn with_global_phase(&self, phase: Amplitude) -> PureState {
        PureState {
            qubits: self.qubits,
            amps: self.amps.iter().map(|a| a * phase).collect(),
        }
    }

    /// Reads a single-qubit state back as a [`QubitSpec`].
    pub fn to_qubit_spec(&self) -> Result<QubitSpec, QuantumError> {
        if self.qubits != 1 {
            return Err(QuantumError::QubitCountMismatch {
                expected: 1,
                found: self.qubits,
            });
        }
        QubitSpec::new(self.amps[0], self.amps[1])
    }

    pub(crate) fn check_index(&self, index: usize) -> Result<(), QuantumError> {
        if index >= self.qubits {
            Err(QuantumError::IndexOutOfRange {
                index,
                qubits: self.qubits,
            })
        } else {
            Ok(())
        }
    }

    /// Bit mask selecting `qubit` inside a basis label.
    pub(crate) fn mask(&self, qubit: usize) -> usize {
        1 << (self.qubits - 1 - qubit)
    }
}

/// The GHZ triplet `(|000> + |111>)/sqrt(2)`.
pub fn ghz3() -> PureState {
    let mut amps = vec![Complex64::new(0.0, 0.0); 8];
    amps[0] = Complex64::new(FRAC_1_SQRT_2, 0.0);
    amps[7] = Complex64::new(FRAC_1_SQRT_2, 0.0);
    PureState { qubits: 3, amps }
}

/// Prepends the message qubit to a GHZ triplet.
///
/// Resulting qubit order: message, Alice's share, arbitrator's share, Bob's
/// share.
pub fn compose(message: &QubitSpec, ghz: &PureState) -> Result<PureState, QuantumError> {
    if ghz.qubit_count() != 3 {
        return Err(QuantumError::QubitCountMismatch {
            expected: 3,
            found: ghz.qubit_count(),
        });
    }
    message.to_state().tensor(ghz)
}

/// `|<a|b>|^2`.
pub fn fidelity(a: &PureState, b: &PureState) -> Result<f64, QuantumError> {
    if a.qubits != b.qubits {
        return Err(QuantumError::QubitCountMismatch {
            expected: a.qubits,
            found: b.qubits,
        });
    }
    let overlap: Complex64 = a.amps.iter().zip(&b.amps).map(|(x, y)| x.conj() * y).sum();
    Ok(overlap.norm_sqr().min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn ghz3_amplitudes() {
        let g = ghz3();
        assert_eq!(g.qubit_count(), 3);
        for (i, a) in g.amplitudes().iter().enumerate() {
            let expected = if i == 0 || i == 7 { 0.5f64.sqrt() } else { 0.0 };
            assert_eq!(a.re, expected);
            assert_eq!(a.im, 0.0);
        }
        assert!((g.norm_sqr() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn compose_with_zero() {
        let s = compose(&QubitSpec::zero(), &ghz3()).unwrap();
        assert_eq!(s.qubit_count(), 4);
        for (i, a) in s.amplitudes().iter().enumerate() {
            let expected = if i == 0b0000 || i == 0b0111 {
                FRAC_1_SQRT_2
            } else {
                0.0
            };
            assert!((a - c(expected, 0.0)).norm() < 1e-15, "index {i}");
        }
    }

    #[test]
    fn compose_with_plus_x() {
        let s = compose(&QubitSpec::plus_x(), &ghz3()).unwrap();
        for (i, a) in s.amplitudes().iter().enumerate() {
            let expected = if [0b0000, 0b0111, 0b1000, 0b1111].contains(&i) {
                0.5
            } else {
                0.0
            };
            assert!((a - c(expected, 0.0)).norm() < 1e-15, "index {i}");
        }
    }

    #[test]
    fn compose_rejects_wrong_register() {
        let two = PureState::basis(2, 0).unwrap();
        assert!(matches!(
            compose(&QubitSpec::zero(), &two),
            Err(QuantumError::QubitCountMismatch {
                expected: 3,
                found: 2
            })
        ));
    }

    #[test]
    fn compose_preserves_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let p = QubitSpec::haar_random(&mut rng);
            let s = compose(&p, &ghz3()).unwrap();
            assert!((s.norm_sqr() - 1.0).abs() < NORM_TOLERANCE);
        }
    }

    #[test]
    fn qubit_spec_validation() {
        assert!(QubitSpec::new(c(1.0, 0.0), c(1.0, 0.0)).is_err());
        assert!(QubitSpec::new(c(f64::NAN, 0.0), c(0.0, 0.0)).is_err());
        assert!(QubitSpec::from_parts([0.6, 0.0, 0.0, 0.8]).is_ok());
    }

    #[test]
    fn fidelity_basics() {
        let zero = QubitSpec::zero().to_state();
        let one = QubitSpec::one().to_state();
        let plus = QubitSpec::plus_x().to_state();
        assert!((fidelity(&zero, &zero).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(fidelity(&zero, &one).unwrap(), 0.0);
        assert!((fidelity(&zero, &plus).unwrap() - 0.5).abs() < 1e-15);
        assert!(fidelity(&zero, &ghz3()).is_err());
    }

    #[test]
    fn degenerate_states_are_not_distinguishable() {
        assert!(!QubitSpec::zero().is_pauli_distinguishable(1e-3));
        assert!(!QubitSpec::plus_x().is_pauli_distinguishable(1e-3));
        let generic = QubitSpec::from_parts([0.6, 0.0, 0.48, 0.64]).unwrap();
        assert!(generic.is_pauli_distinguishable(1e-2));
    }
}
