//! Dense complex statevector over the 2^n computational basis.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default cap on dense statevector size: 2^26 complex doubles = 1 GiB.
pub const DEFAULT_QUBIT_GUARD: usize = 26;

/// Dense amplitude array over the 2^n basis states. Qubit 0 is the most
/// significant bit of the index.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// |0...0> on `n` qubits.
    pub fn zero_state(n: usize) -> Result<Self> {
        Self::zero_state_with_guard(n, DEFAULT_QUBIT_GUARD)
    }

    pub fn zero_state_with_guard(n: usize, guard: usize) -> Result<Self> {
        if n == 0 || n > guard {
            return Err(Error::ResourceGuard {
                what: "statevector",
                requested: n,
                limit: guard,
            });
        }
        let mut amps = vec![Complex64::ZERO; 1usize << n];
        amps[0] = Complex64::ONE;
        Ok(StateVector { n, amps })
    }

    pub fn from_amplitudes(n: usize, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != 1usize << n {
            return Err(Error::LengthMismatch {
                left: amps.len(),
                right: 1usize << n,
            });
        }
        Ok(StateVector { n, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn amplitude(&self, index: u64) -> Complex64 {
        self.amps[index as usize]
    }

    /// Bit of qubit `q` in basis index `index` (qubit 0 = MSB).
    pub fn qubit_bit(&self, index: u64, q: usize) -> bool {
        index >> (self.n - 1 - q) & 1 == 1
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// |<self|other>|^2.
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        if self.n != other.n {
            return Err(Error::LengthMismatch {
                left: self.n,
                right: other.n,
            });
        }
        let overlap: Complex64 = self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum();
        Ok(overlap.norm_sqr())
    }
}
