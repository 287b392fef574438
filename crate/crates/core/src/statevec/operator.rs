use nalgebra::DMatrix;

use super::rotation::Mat2;
use super::state::{qubit_mask, StateVector};
use crate::{Error, Result, C64};

/// Largest register for which explicit matrices may be built.
pub const MAX_DENSE_QUBITS: usize = 14;

/// Default tolerance for treating an operator as unitary.
pub const UNITARY_TOLERANCE: f64 = 1e-10;

/// Explicit `2^n x 2^n` matrix. Indexing is `(row, column)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    n_qubits: usize,
    m: DMatrix<C64>,
}

fn check_dense(n_qubits: usize) -> Result<()> {
    if n_qubits > MAX_DENSE_QUBITS {
        Err(Error::DenseLimit {
            limit: MAX_DENSE_QUBITS,
            requested: n_qubits,
        })
    } else {
        Ok(())
    }
}

impl DenseOperator {
    pub fn identity(n_qubits: usize) -> Result<Self> {
        check_dense(n_qubits)?;
        let d = 1usize << n_qubits;
        Ok(Self {
            n_qubits,
            m: DMatrix::identity(d, d),
        })
    }

    pub fn zeros(n_qubits: usize) -> Result<Self> {
        check_dense(n_qubits)?;
        let d = 1usize << n_qubits;
        Ok(Self {
            n_qubits,
            m: DMatrix::zeros(d, d),
        })
    }

    pub fn from_matrix(n_qubits: usize, m: DMatrix<C64>) -> Result<Self> {
        check_dense(n_qubits)?;
        let d = 1usize << n_qubits;
        if m.nrows() != d || m.ncols() != d {
            return Err(Error::DimensionMismatch(m.nrows(), d));
        }
        Ok(Self { n_qubits, m })
    }

    /// Diagonal operator from its diagonal entries.
    pub fn diagonal(n_qubits: usize, diag: &[C64]) -> Result<Self> {
        let mut op = Self::zeros(n_qubits)?;
        if diag.len() != op.dim() {
            return Err(Error::DimensionMismatch(diag.len(), op.dim()));
        }
        for (i, d) in diag.iter().enumerate() {
            op.m[(i, i)] = *d;
        }
        Ok(op)
    }

    /// Builds the operator whose `j`-th column is `f(|j>)`.
    pub fn from_state_map<F>(n_qubits: usize, mut f: F) -> Result<Self>
    where
        F: FnMut(StateVector) -> Result<StateVector>,
    {
        let mut op = Self::zeros(n_qubits)?;
        for j in 0..op.dim() {
            let col = f(StateVector::basis(n_qubits, j)?)?;
            if col.n_qubits() != n_qubits {
                return Err(Error::DimensionMismatch(col.n_qubits(), n_qubits));
            }
            for (i, a) in col.amplitudes().iter().enumerate() {
                op.m[(i, j)] = *a;
            }
        }
        Ok(op)
    }

    /// Tensor product of single-qubit factors; unlisted qubits get the identity.
    pub fn from_local_factors(n_qubits: usize, factors: &[(usize, Mat2)]) -> Result<Self> {
        check_dense(n_qubits)?;
        let mut m = DMatrix::from_element(1, 1, C64::new(1.0, 0.0));
        for q in 0..n_qubits {
            let f = factors
                .iter()
                .filter(|(fq, _)| *fq == q)
                .map(|(_, f)| *f)
                .fold(
                    [
                        [C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
                        [C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
                    ],
                    |acc, f| super::rotation::mat2_mul(&f, &acc),
                );
            let local = DMatrix::from_fn(2, 2, |i, j| f[i][j]);
            m = m.kronecker(&local);
        }
        Self::from_matrix(n_qubits, m)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.m
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.m
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.m[(row, col)]
    }

    pub fn adjoint(&self) -> Self {
        Self {
            n_qubits: self.n_qubits,
            m: self.m.adjoint(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::DimensionMismatch(self.n_qubits, other.n_qubits));
        }
        Ok(Self {
            n_qubits: self.n_qubits,
            m: &self.m * &other.m,
        })
    }

    pub fn scale(&self, c: C64) -> Self {
        Self {
            n_qubits: self.n_qubits,
            m: &self.m * c,
        }
    }

    /// Applies the operator to a state. The result is renormalised only if the
    /// operator is not unitary; unitary operators preserve the norm already.
    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        if state.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch(state.n_qubits(), self.n_qubits));
        }
        let v = nalgebra::DVector::from_column_slice(state.amplitudes());
        let out = &self.m * v;
        StateVector::from_amplitudes(self.n_qubits, out.as_slice().to_vec())
    }

    /// `max_ij |(U^dagger U - 1)_ij|`.
    pub fn unitarity_defect(&self) -> f64 {
        let p = self.m.adjoint() * &self.m;
        let d = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((p[(i, j)] - C64::new(target, 0.0)).norm());
            }
        }
        worst
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() <= tol
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        (&self.m - self.m.adjoint()).iter().all(|z| z.norm() <= tol)
    }

    /// `max_ij |A_ij - B_ij|`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::DimensionMismatch(self.n_qubits, other.n_qubits));
        }
        Ok(self
            .m
            .iter()
            .zip(other.m.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// `max_ij |[A, B]_ij|`.
    pub fn commutator_max_norm(&self, other: &Self) -> Result<f64> {
        let ab = self.mul(other)?;
        let ba = other.mul(self)?;
        ab.max_abs_diff(&ba)
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        let d = self.dim();
        (0..d).all(|i| (0..d).all(|j| i == j || self.m[(i, j)].norm() <= tol))
    }

    /// Restricts the operator to the listed basis indices (rows and columns).
    pub fn compress(&self, basis: &[usize]) -> DMatrix<C64> {
        DMatrix::from_fn(basis.len(), basis.len(), |i, j| {
            self.m[(basis[i], basis[j])]
        })
    }

    /// True when the operator commutes with X, Y and Z on qubit `q`, i.e. it
    /// acts as the identity on that tensor factor.
    pub fn acts_trivially_on(&self, q: usize, tol: f64) -> Result<bool> {
        if q >= self.n_qubits {
            return Err(Error::QubitOutOfRange {
                index: q,
                n_qubits: self.n_qubits,
            });
        }
        let paulis: [Mat2; 3] = [
            [
                [C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
                [C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
            ],
            [
                [C64::new(0.0, 0.0), C64::new(0.0, -1.0)],
                [C64::new(0.0, 1.0), C64::new(0.0, 0.0)],
            ],
            [
                [C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
                [C64::new(0.0, 0.0), C64::new(-1.0, 0.0)],
            ],
        ];
        for p in paulis {
            let local = Self::from_local_factors(self.n_qubits, &[(q, p)])?;
            if self.commutator_max_norm(&local)? > tol {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Projector onto the subspace where every qubit in `qubits` is `|g>`.
pub fn ground_projector(n_qubits: usize, qubits: &[usize]) -> Result<DenseOperator> {
    check_dense(n_qubits)?;
    let mask = qubits
        .iter()
        .fold(0usize, |acc, &q| acc | qubit_mask(n_qubits, q));
    let diag: Vec<C64> = (0..1usize << n_qubits)
        .map(|i| {
            if i & mask == 0 {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
        .collect();
    DenseOperator::diagonal(n_qubits, &diag)
}

/// Brute-force `1 (x) Q + R (x) P` built from Kronecker products: the
/// reference construction for conditional rotations.
pub fn dense_controlled_rotation(
    n_qubits: usize,
    target: usize,
    neighbors: &[usize],
    rotation: &super::RotationSpec,
) -> Result<DenseOperator> {
    if target >= n_qubits {
        return Err(Error::QubitOutOfRange {
            index: target,
            n_qubits,
        });
    }
    if neighbors.contains(&target) {
        return Err(Error::TargetInNeighbors(target));
    }
    let g: Mat2 = [
        [C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
        [C64::new(0.0, 0.0), C64::new(0.0, 0.0)],
    ];
    let mut factors: Vec<(usize, Mat2)> = Vec::new();
    for &q in neighbors {
        if q >= n_qubits {
            return Err(Error::QubitOutOfRange { index: q, n_qubits });
        }
        factors.push((q, g));
    }
    let p = DenseOperator::from_local_factors(n_qubits, &factors)?;
    let r = DenseOperator::from_local_factors(n_qubits, &[(target, rotation.matrix())])?;
    let id = DenseOperator::identity(n_qubits)?;
    let q_part = &id.m - &p.m;
    DenseOperator::from_matrix(n_qubits, q_part + r.m * p.m)
}
