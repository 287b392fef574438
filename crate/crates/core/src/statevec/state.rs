use rand::Rng;
use rand_distr::StandardNormal;

use super::rotation::{Mat2, RotationSpec};
use crate::{Error, Result, C64};

/// Norm tolerance promised by every state operation.
pub const NORM_TOLERANCE: f64 = 1e-12;

/// Pure state over `n` qubits. Qubit 0 is the most significant bit of the
/// basis index and `|g>` is bit value 0.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<C64>,
}

/// Bit mask selecting qubit `q` in an `n`-qubit basis index.
#[inline]
pub fn qubit_mask(n_qubits: usize, q: usize) -> usize {
    1usize << (n_qubits - 1 - q)
}

impl StateVector {
    /// The computational basis state `|index>`.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::DimensionMismatch(index, dim));
        }
        let mut amps = vec![C64::new(0.0, 0.0); dim];
        amps[index] = C64::new(1.0, 0.0);
        Ok(Self { n_qubits, amps })
    }

    /// All qubits in `|g>`.
    pub fn ground(n_qubits: usize) -> Self {
        Self::basis(n_qubits, 0).expect("index 0 always valid")
    }

    /// Builds a state from raw amplitudes, rescaling them to unit norm.
    pub fn from_amplitudes(n_qubits: usize, amps: Vec<C64>) -> Result<Self> {
        let dim = 1usize << n_qubits;
        if amps.len() != dim {
            return Err(Error::DimensionMismatch(amps.len(), dim));
        }
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::ZeroNorm);
        }
        let amps = amps.into_iter().map(|a| a / norm).collect();
        Ok(Self { n_qubits, amps })
    }

    /// Wraps amplitudes that are already normalised by construction.
    pub(crate) fn from_raw(n_qubits: usize, amps: Vec<C64>) -> Self {
        debug_assert_eq!(amps.len(), 1usize << n_qubits);
        Self { n_qubits, amps }
    }

    /// Product state `self (x) other`; the qubits of `self` come first.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let n = self.n_qubits + other.n_qubits;
        if n > usize::BITS as usize - 2 {
            return Err(Error::DenseLimit {
                limit: usize::BITS as usize - 2,
                requested: n,
            });
        }
        let amps = self
            .amps
            .iter()
            .flat_map(|a| other.amps.iter().map(move |b| a * b))
            .collect();
        Ok(Self::from_raw(n, amps))
    }

    /// A Haar-random state drawn from complex Gaussian amplitudes.
    pub fn random<R: Rng + ?Sized>(n_qubits: usize, rng: &mut R) -> Self {
        let dim = 1usize << n_qubits;
        let amps: Vec<C64> = (0..dim)
            .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        Self::from_amplitudes(n_qubits, amps).expect("gaussian vector is nonzero")
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::DimensionMismatch(self.n_qubits, other.n_qubits));
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Probability of finding qubit `q` in `|e>`.
    pub fn excited_population(&self, q: usize) -> Result<f64> {
        self.check_qubit(q)?;
        let m = qubit_mask(self.n_qubits, q);
        Ok(self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & m != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    pub(crate) fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.n_qubits {
            Err(Error::QubitOutOfRange {
                index: q,
                n_qubits: self.n_qubits,
            })
        } else {
            Ok(())
        }
    }

    /// Applies a 2x2 matrix on `target` wherever every qubit in `neighbors`
    /// is in `|g>`; other amplitudes are untouched.
    pub fn apply_conditional_matrix(
        &mut self,
        target: usize,
        neighbors: &[usize],
        m: &Mat2,
    ) -> Result<()> {
        self.check_qubit(target)?;
        for &q in neighbors {
            self.check_qubit(q)?;
            if q == target {
                return Err(Error::TargetInNeighbors(target));
            }
        }
        let n = self.n_qubits;
        let tm = qubit_mask(n, target);
        let nm = neighbors
            .iter()
            .fold(0usize, |acc, &q| acc | qubit_mask(n, q));
        for i in 0..self.amps.len() {
            if i & tm != 0 || i & nm != 0 {
                continue;
            }
            let j = i | tm;
            let (a, b) = (self.amps[i], self.amps[j]);
            self.amps[i] = m[0][0] * a + m[0][1] * b;
            self.amps[j] = m[1][0] * a + m[1][1] * b;
        }
        Ok(())
    }

    /// Applies a 2x2 matrix on `q` unconditionally.
    pub fn apply_single(&mut self, q: usize, m: &Mat2) -> Result<()> {
        self.apply_conditional_matrix(q, &[], m)
    }

    /// In-place form of [`apply_projector_controlled_rotation`].
    pub fn apply_controlled_rotation(
        &mut self,
        target: usize,
        neighbors: &[usize],
        rot: &RotationSpec,
    ) -> Result<()> {
        self.apply_conditional_matrix(target, neighbors, &rot.matrix())
    }

    /// Applies a `2^k x 2^k` matrix (row-major, qubits listed most significant first)
    /// to the listed qubits.
    pub fn apply_on_qubits(&mut self, qubits: &[usize], m: &[Vec<C64>]) -> Result<()> {
        let k = qubits.len();
        let sub = 1usize << k;
        if m.len() != sub || m.iter().any(|r| r.len() != sub) {
            return Err(Error::DimensionMismatch(m.len(), sub));
        }
        for (a, &q) in qubits.iter().enumerate() {
            self.check_qubit(q)?;
            if qubits[..a].contains(&q) {
                return Err(Error::TargetInNeighbors(q));
            }
        }
        let n = self.n_qubits;
        let masks: Vec<usize> = qubits.iter().map(|&q| qubit_mask(n, q)).collect();
        let all = masks.iter().fold(0, |a, m| a | m);
        let offset = |s: usize| -> usize {
            (0..k)
                .filter(|b| s & (1 << (k - 1 - b)) != 0)
                .fold(0, |acc, b| acc | masks[b])
        };
        let offsets: Vec<usize> = (0..sub).map(offset).collect();
        let mut buf = vec![C64::new(0.0, 0.0); sub];
        for base in 0..self.amps.len() {
            if base & all != 0 {
                continue;
            }
            for (s, o) in offsets.iter().enumerate() {
                buf[s] = self.amps[base | o];
            }
            for (r, o) in offsets.iter().enumerate() {
                self.amps[base | o] = (0..sub).map(|c| m[r][c] * buf[c]).sum();
            }
        }
        Ok(())
    }

    /// Multiplies every amplitude by `phase`.
    pub fn scale(&mut self, phase: C64) {
        for a in &mut self.amps {
            *a *= phase;
        }
    }
}

/// Returns a copy of `state` with `R(theta, n)` applied on `target` in the
/// subspace where all `neighbors` are in `|g>`.
pub fn apply_projector_controlled_rotation(
    state: &StateVector,
    target: usize,
    neighbors: &[usize],
    rotation: &RotationSpec,
) -> Result<StateVector> {
    let mut out = state.clone();
    out.apply_controlled_rotation(target, neighbors, rotation)?;
    Ok(out)
}

/// `|<a|b>|^2`.
pub fn state_fidelity(a: &StateVector, b: &StateVector) -> Result<f64> {
    Ok(a.inner(b)?.norm_sqr().min(1.0))
}
