use nalgebra::DMatrix;
use std::f64::consts::PI;

use super::operator::DenseOperator;
use crate::{Error, Result, C64};

/// Tolerance used when a metric demands unitary inputs.
const METRIC_UNITARY_TOLERANCE: f64 = 1e-8;

/// How [`operator_distance`] treats the global phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistanceMode {
    /// `||u - v||_2`.
    Spectral,
    /// `min_phi ||u - e^{i phi} v||_2`.
    PhaseInsensitive,
}

fn check_pair(u: &DenseOperator, v: &DenseOperator) -> Result<()> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch(u.dim(), v.dim()));
    }
    for op in [u, v] {
        let defect = op.unitarity_defect();
        if defect > METRIC_UNITARY_TOLERANCE {
            return Err(Error::NotUnitary(defect));
        }
    }
    Ok(())
}

/// Largest singular value.
pub fn spectral_norm(m: &DMatrix<C64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().svd(false, false).singular_values.max()
}

/// Distance between two unitaries of equal dimension.
pub fn operator_distance(u: &DenseOperator, v: &DenseOperator, mode: DistanceMode) -> Result<f64> {
    check_pair(u, v)?;
    match mode {
        DistanceMode::Spectral => Ok(spectral_norm(&(u.matrix() - v.matrix()))),
        DistanceMode::PhaseInsensitive => Ok(unitary_phase_distance(u.matrix(), v.matrix())),
    }
}

/// For unitaries, `||u - e^{i phi} v||_2 = max_k |e^{i lambda_k} - e^{i phi}|`
/// over the eigenphases of `v^dagger u`; the optimum sits at the centre of the
/// shortest arc containing all eigenphases.
fn unitary_phase_distance(u: &DMatrix<C64>, v: &DMatrix<C64>) -> f64 {
    let w = v.adjoint() * u;
    let (_, t) = nalgebra::Schur::new(w).unpack();
    let mut phases: Vec<f64> = (0..t.nrows()).map(|i| t[(i, i)].arg()).collect();
    phases.sort_by(|a, b| a.total_cmp(b));
    let n = phases.len();
    if n == 0 {
        return 0.0;
    }
    let mut largest_gap: f64 = 0.0;
    for k in 0..n {
        let next = if k + 1 < n {
            phases[k + 1]
        } else {
            phases[0] + 2.0 * PI
        };
        largest_gap = largest_gap.max(next - phases[k]);
    }
    let arc = (2.0 * PI - largest_gap).max(0.0);
    2.0 * (arc / 4.0).sin()
}

/// `min_phi ||a - e^{i phi} b||_2` for arbitrary (possibly non-unitary)
/// matrices of equal shape, found by a coarse scan and golden-section refinement.
pub fn phase_insensitive_distance_general(a: &DMatrix<C64>, b: &DMatrix<C64>) -> Result<f64> {
    if a.shape() != b.shape() {
        return Err(Error::DimensionMismatch(a.nrows(), b.nrows()));
    }
    let f = |phi: f64| spectral_norm(&(a - b * C64::from_polar(1.0, phi)));
    let grid = 72;
    let mut best = (0.0, f(0.0));
    for k in 1..grid {
        let phi = 2.0 * PI * k as f64 / grid as f64;
        let val = f(phi);
        if val < best.1 {
            best = (phi, val);
        }
    }
    let step = 2.0 * PI / grid as f64;
    let (mut lo, mut hi) = (best.0 - step, best.0 + step);
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..80 {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = f(x2);
        }
    }
    Ok(best.1.min(f1).min(f2))
}

/// Average gate fidelity between two unitaries: `(|Tr(u^dagger v)|^2 + d) / (d^2 + d)`.
pub fn average_gate_fidelity(u: &DenseOperator, v: &DenseOperator) -> Result<f64> {
    check_pair(u, v)?;
    let d = u.dim() as f64;
    let tr = (u.matrix().adjoint() * v.matrix()).trace();
    Ok(((tr.norm_sqr() + d) / (d * d + d)).clamp(0.0, 1.0))
}

/// Average fidelity of a compressed (possibly leaky) block `m` against the
/// ideal unitary block `e`: `(Tr(m^dagger m) + |Tr(e^dagger m)|^2) / (d (d + 1))`.
pub fn average_gate_fidelity_block(e: &DMatrix<C64>, m: &DMatrix<C64>) -> Result<f64> {
    if e.shape() != m.shape() {
        return Err(Error::DimensionMismatch(e.nrows(), m.nrows()));
    }
    let d = e.nrows() as f64;
    let mm = (m.adjoint() * m).trace().re;
    let tr = (e.adjoint() * m).trace();
    Ok(((mm + tr.norm_sqr()) / (d * (d + 1.0))).clamp(0.0, 1.0))
}
