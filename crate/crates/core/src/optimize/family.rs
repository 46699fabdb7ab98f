//! The one-parameter family of 8.I.2 arrangements in which `K^{g₁}`,
//! `K^{g₂τ₂}` and `K^{g₁g₂τ₂}` all touch the kernel ball.
//!
//! Along τ the family starts where the lattice translation also touches
//! (`τ_a`) and ends where the balls at `K^{g₂g₂τ₂τ₂}` and
//! `K^{g₁g₂g₁g₂τ₂τ₂}` meet (`τ_b`).

use nalgebra::{Matrix2, Vector2, Vector3};
use serde::{Deserialize, Serialize};

use super::polish::Tangent;
use super::{max_over_kernel, Domain, SearchParams};
use crate::error::{Error, Result};
use crate::geometry::{ball_volume_series_unchecked, S2RPoint};
use crate::groups::{GroupName, SpaceGroupSpec};
use crate::packing::{requirements_with, Packer, PackingConfiguration, Requirements8I2};

const SEED_TAU: f64 = 1.5;
const STEP: f64 = 0.05;
const NEWTON_TARGET: f64 = 1e-14;
const FD_STEP: f64 = 1e-7;

#[derive(Debug, Clone)]
pub struct RequirementFamily {
    spec: SpaceGroupSpec,
    packer: Packer,
    seed_kernel: Vector3<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Regime8I2 {
    pub tau_a: f64,
    pub tau_b: f64,
    pub a: PackingConfiguration,
    pub b: PackingConfiguration,
}

impl RequirementFamily {
    pub fn new(params: &SearchParams) -> Result<Self> {
        let spec = SpaceGroupSpec::catalog(GroupName::EightI2);
        let packer = Packer::new(&spec)?;
        let (c, _) = max_over_kernel(&packer, &Domain::new(&spec), SEED_TAU, params);
        let seed_kernel = newton(&spec, SEED_TAU, c.kernel)?;
        Ok(Self { spec, packer, seed_kernel })
    }

    /// Family kernel at `tau`, by continuation from the seed.
    pub fn kernel(&self, tau: f64) -> Result<Vector3<f64>> {
        self.kernel_from(tau, SEED_TAU, self.seed_kernel)
    }

    fn kernel_from(&self, tau: f64, from_tau: f64, from: Vector3<f64>) -> Result<Vector3<f64>> {
        let steps = ((tau - from_tau).abs() / STEP).ceil().max(1.0) as usize;
        let mut k = from;
        for i in 1..=steps {
            let t = from_tau + (tau - from_tau) * i as f64 / steps as f64;
            k = newton(&self.spec, t, k)?;
        }
        Ok(k)
    }

    pub fn requirements(&self, tau: f64) -> Result<Requirements8I2> {
        Ok(requirements_with(&self.spec, &self.kernel(tau)?, tau))
    }

    /// Half the common touching distance.
    pub fn radius(&self, tau: f64) -> Result<f64> {
        Ok(0.5 * self.requirements(tau)?.distances[0])
    }

    /// Density of the family arrangement, series ball volume.
    pub fn density(&self, tau: f64) -> Result<f64> {
        let r = self.radius(tau)?;
        Ok(ball_volume_series_unchecked(r) / (self.packer.cell_area() * tau))
    }

    /// Lower end: the lattice translation touches as well.
    pub fn tau_a(&self) -> Result<f64> {
        self.root(-1.0, |r| r.translation_margin)
    }

    /// Upper end: the second side condition becomes active.
    pub fn tau_b(&self) -> Result<f64> {
        self.root(1.0, |r| r.side_margin)
    }

    pub fn configuration(&self, tau: f64, k_max: u32) -> Result<PackingConfiguration> {
        let k = self.kernel(tau)?;
        self.packer.configuration(&S2RPoint::from_unit(k, 0.0), tau, k_max)
    }

    /// Marches from the seed in `direction` until `margin` changes sign,
    /// then bisects.
    fn root(&self, direction: f64, margin: impl Fn(&Requirements8I2) -> f64) -> Result<f64> {
        let eval = |t: f64, k: Vector3<f64>| margin(&requirements_with(&self.spec, &k, t));
        let (mut t0, mut k0) = (SEED_TAU, self.seed_kernel);
        let m0 = eval(t0, k0);
        if m0 <= 0.0 {
            return Err(Error::ConvergenceFailure { best: m0, other: 0.0, tolerance: 0.0 });
        }
        let (mut t1, mut k1);
        loop {
            t1 = t0 + direction * STEP;
            if !(0.05..=2.0 * std::f64::consts::PI).contains(&t1) {
                return Err(Error::ConvergenceFailure { best: m0, other: t1, tolerance: STEP });
            }
            k1 = newton(&self.spec, t1, k0)?;
            if eval(t1, k1) <= 0.0 {
                break;
            }
            t0 = t1;
            k0 = k1;
        }
        // t0 has positive margin, t1 non-positive.
        for _ in 0..200 {
            let mid = 0.5 * (t0 + t1);
            if mid == t0 || mid == t1 {
                break;
            }
            let km = newton(&self.spec, mid, k0)?;
            if eval(mid, km) > 0.0 {
                t0 = mid;
                k0 = km;
            } else {
                t1 = mid;
                k1 = km;
            }
        }
        let _ = k1;
        Ok(t0)
    }
}

/// Solves `d₁ = d₂ = d₃` for the kernel at fixed τ.
fn newton(spec: &SpaceGroupSpec, tau: f64, guess: Vector3<f64>) -> Result<Vector3<f64>> {
    let frame = Tangent::new(guess);
    let f = |u: &Vector2<f64>| -> Vector2<f64> {
        let r = requirements_with(spec, &frame.point(u.x, u.y), tau);
        Vector2::new(r.distances[0] - r.distances[1], r.distances[0] - r.distances[2])
    };
    let mut u = Vector2::zeros();
    let mut fu = f(&u);
    for _ in 0..60 {
        if fu.amax() < NEWTON_TARGET {
            return Ok(frame.point(u.x, u.y));
        }
        let mut jac = Matrix2::zeros();
        for j in 0..2 {
            let mut e = Vector2::zeros();
            e[j] = FD_STEP;
            jac.set_column(j, &((f(&(u + e)) - f(&(u - e))) / (2.0 * FD_STEP)));
        }
        let Some(inv) = jac.try_inverse() else { break };
        let step = -(inv * fu);
        let mut scale = 1.0;
        loop {
            let trial = u + scale * step;
            let ft = f(&trial);
            if ft.amax() < fu.amax() || scale < 1e-6 {
                u = trial;
                fu = ft;
                break;
            }
            scale *= 0.5;
        }
    }
    if fu.amax() < 1e-12 {
        return Ok(frame.point(u.x, u.y));
    }
    Err(Error::ConvergenceFailure { best: fu.amax(), other: 0.0, tolerance: NEWTON_TARGET })
}

/// Both ends of the 8.I.2 family with their arrangements.
pub fn regime_8i2(params: &SearchParams) -> Result<Regime8I2> {
    let fam = RequirementFamily::new(params)?;
    let tau_a = fam.tau_a()?;
    let tau_b = fam.tau_b()?;
    Ok(Regime8I2 {
        tau_a,
        tau_b,
        a: fam.configuration(tau_a, params.k_max)?,
        b: fam.configuration(tau_b, params.k_max)?,
    })
}
