use serde::{Deserialize, Serialize};

use crate::{Error, Result, C64};

/// A 2x2 complex matrix acting on one qubit, ordered (g, e).
pub type Mat2 = [[C64; 2]; 2];

const AXIS_TOLERANCE: f64 = 1e-12;

/// Single-qubit rotation `R(theta, n) = cos(theta/2) 1 - i sin(theta/2) n.sigma`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RotationSpec {
    pub angle: f64,
    pub axis: [f64; 3],
}

impl RotationSpec {
    /// Builds a rotation, rejecting axes whose norm differs from one by more than 1e-12.
    pub fn new(angle: f64, axis: [f64; 3]) -> Result<Self> {
        let norm = axis_norm(axis);
        if !norm.is_finite() || (norm - 1.0).abs() > AXIS_TOLERANCE || !angle.is_finite() {
            return Err(Error::InvalidAxis(norm));
        }
        Ok(Self { angle, axis })
    }

    /// Builds a rotation after rescaling `axis` to unit length.
    pub fn normalized(angle: f64, axis: [f64; 3]) -> Result<Self> {
        let norm = axis_norm(axis);
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::InvalidAxis(norm));
        }
        Self::new(angle, [axis[0] / norm, axis[1] / norm, axis[2] / norm])
    }

    pub fn identity() -> Self {
        Self {
            angle: 0.0,
            axis: [1.0, 0.0, 0.0],
        }
    }

    pub fn x(angle: f64) -> Self {
        Self {
            angle,
            axis: [1.0, 0.0, 0.0],
        }
    }

    pub fn y(angle: f64) -> Self {
        Self {
            angle,
            axis: [0.0, 1.0, 0.0],
        }
    }

    pub fn z(angle: f64) -> Self {
        Self {
            angle,
            axis: [0.0, 0.0, 1.0],
        }
    }

    pub fn inverse(&self) -> Self {
        Self {
            angle: -self.angle,
            axis: self.axis,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.angle == 0.0
    }

    pub fn matrix(&self) -> Mat2 {
        let (s, c) = (self.angle / 2.0).sin_cos();
        let [nx, ny, nz] = self.axis;
        [
            [C64::new(c, -s * nz), C64::new(-s * ny, -s * nx)],
            [C64::new(s * ny, -s * nx), C64::new(c, s * nz)],
        ]
    }

    /// Recovers `(theta, n)` with `theta` in `[0, 2 pi]` from an SU(2) matrix.
    pub fn from_su2(m: &Mat2) -> Self {
        let c = 0.5 * (m[0][0].re + m[1][1].re);
        let sz = 0.5 * (m[1][1].im - m[0][0].im);
        let sx = -0.5 * (m[0][1].im + m[1][0].im);
        let sy = 0.5 * (m[1][0].re - m[0][1].re);
        let s = (sx * sx + sy * sy + sz * sz).sqrt();
        let angle = 2.0 * s.atan2(c);
        if s < 1e-300 {
            return Self {
                angle,
                axis: [0.0, 0.0, 1.0],
            };
        }
        Self {
            angle,
            axis: [sx / s, sy / s, sz / s],
        }
    }

    /// The product rotation `self * other` (apply `other` first).
    pub fn compose(&self, other: &Self) -> Self {
        Self::from_su2(&mat2_mul(&self.matrix(), &other.matrix()))
    }
}

fn axis_norm(axis: [f64; 3]) -> f64 {
    (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt()
}

pub fn mat2_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[C64::new(0.0, 0.0); 2]; 2];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub fn mat2_adjoint(a: &Mat2) -> Mat2 {
    [
        [a[0][0].conj(), a[1][0].conj()],
        [a[0][1].conj(), a[1][1].conj()],
    ]
}

pub fn mat2_max_diff(a: &Mat2, b: &Mat2) -> f64 {
    let mut d: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            d = d.max((a[i][j] - b[i][j]).norm());
        }
    }
    d
}

/// `max |(a^dagger a - 1)_ij|` for a 2x2 matrix.
pub fn mat2_unitarity_defect(a: &Mat2) -> f64 {
    let p = mat2_mul(&mat2_adjoint(a), a);
    let id = [
        [C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
        [C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
    ];
    mat2_max_diff(&p, &id)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn pauli_limits() {
        let x = RotationSpec::x(PI).matrix();
        assert!((x[0][1] - C64::new(0.0, -1.0)).norm() < 1e-15);
        assert!((x[1][0] - C64::new(0.0, -1.0)).norm() < 1e-15);
        let full = RotationSpec::y(2.0 * PI).matrix();
        assert!((full[0][0] + C64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn su2_round_trip() {
        let r = RotationSpec::normalized(1.3, [0.3, -0.5, 0.8]).unwrap();
        let back = RotationSpec::from_su2(&r.matrix());
        assert!(mat2_max_diff(&back.matrix(), &r.matrix()) < 1e-14);
    }

    #[test]
    fn rejects_non_unit_axis() {
        assert!(RotationSpec::new(1.0, [1.0, 1.0, 0.0]).is_err());
        assert!(RotationSpec::normalized(1.0, [0.0, 0.0, 0.0]).is_err());
    }
}
