//! Isometries of S²×R: a rotation of the sphere times an isometry of the line.
//!
//! Composition follows the right-action convention of the product formula
//! `(A₁×R₁, r₁)(A₂×R₂, r₂) = (A₁A₂ × R₁R₂, r₁R₂ + r₂)`: the left factor acts
//! first, so `a.then(&b)` maps `X` to `(X^a)^b`. Matrices act on column
//! vectors, so the stored linear part of `a.then(&b)` is `B·A`.

use nalgebra::{Matrix3, Rotation3, Unit, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::S2RPoint;

/// Tolerance for orthogonality and determinant checks.
pub const ORTHOGONALITY_TOLERANCE: f64 = 1e-10;

/// Action on the R factor: identity or the point reflection `t ↦ -t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FibreFlag {
    Preserve,
    Reverse,
}

impl FibreFlag {
    pub fn sign(self) -> f64 {
        match self {
            FibreFlag::Preserve => 1.0,
            FibreFlag::Reverse => -1.0,
        }
    }

    pub fn combine(self, other: FibreFlag) -> FibreFlag {
        if self == other {
            FibreFlag::Preserve
        } else {
            FibreFlag::Reverse
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Isometry {
    linear: Matrix3<f64>,
    flag: FibreFlag,
    shift: f64,
}

impl Isometry {
    pub fn new(linear: Matrix3<f64>, flag: FibreFlag, shift: f64) -> Result<Self> {
        let defect = (linear.transpose() * linear - Matrix3::identity()).norm();
        if defect > ORTHOGONALITY_TOLERANCE {
            return Err(Error::domain("orthogonality defect of linear part", defect));
        }
        let det = linear.determinant();
        if (det - 1.0).abs() > ORTHOGONALITY_TOLERANCE {
            return Err(Error::domain("determinant of linear part", det));
        }
        if !shift.is_finite() {
            return Err(Error::domain("fibre shift", shift));
        }
        Ok(Self { linear, flag, shift })
    }

    pub fn identity() -> Self {
        Self { linear: Matrix3::identity(), flag: FibreFlag::Preserve, shift: 0.0 }
    }

    /// Pure fibre translation.
    pub fn translation(shift: f64) -> Self {
        Self { shift, ..Self::identity() }
    }

    /// Right-handed rotation by `angle` about `axis`, followed by a fibre shift.
    pub fn rotation(axis: &Vector3<f64>, angle: f64, shift: f64) -> Self {
        Self {
            linear: rotation_matrix(axis, angle),
            flag: FibreFlag::Preserve,
            shift,
        }
    }

    pub(crate) fn from_parts(linear: Matrix3<f64>, flag: FibreFlag, shift: f64) -> Self {
        Self { linear, flag, shift }
    }

    pub fn linear(&self) -> &Matrix3<f64> {
        &self.linear
    }

    pub fn flag(&self) -> FibreFlag {
        self.flag
    }

    pub fn shift(&self) -> f64 {
        self.shift
    }

    /// `self` first, then `next`.
    pub fn then(&self, next: &Isometry) -> Isometry {
        Isometry {
            linear: next.linear * self.linear,
            flag: self.flag.combine(next.flag),
            shift: self.shift * next.flag.sign() + next.shift,
        }
    }

    pub fn inverse(&self) -> Isometry {
        Isometry {
            linear: self.linear.transpose(),
            flag: self.flag,
            shift: -self.shift * self.flag.sign(),
        }
    }

    pub fn apply(&self, p: &S2RPoint) -> S2RPoint {
        let d = self.linear * p.direction();
        // Rotations preserve the norm; renormalize to stop drift in long words.
        S2RPoint::from_unit(d / d.norm(), self.flag.sign() * p.fibre() + self.shift)
    }

    pub fn approx_eq(&self, other: &Isometry, tol: f64) -> bool {
        self.flag == other.flag
            && (self.linear - other.linear).norm() <= tol
            && (self.shift - other.shift).abs() <= tol
    }
}

/// Composition in the right-action convention: `a` acts first.
pub fn compose(a: &Isometry, b: &Isometry) -> Isometry {
    a.then(b)
}

pub fn apply(g: &Isometry, p: &S2RPoint) -> S2RPoint {
    g.apply(p)
}

pub fn rotation_matrix(axis: &Vector3<f64>, angle: f64) -> Matrix3<f64> {
    Rotation3::from_axis_angle(&Unit::new_normalize(*axis), angle).into_inner()
}
