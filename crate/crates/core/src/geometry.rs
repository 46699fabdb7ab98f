//! Metric model of S²×R.
//!
//! Points are stored as a unit direction on S² plus a fibre coordinate. The
//! Cartesian model embeds `(d, t)` as `e^t · d`, so geodesic spheres around
//! the base point `(1, 0, 0)` can be exported exactly as they are drawn in
//! the projective model.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature;

/// Absolute tolerance used by [`ball_volume`].
pub const VOLUME_TOLERANCE: f64 = 1e-10;
/// Evaluation budget of the nested volume quadrature.
pub const VOLUME_MAX_EVALUATIONS: usize = 1_000_000;

/// A point of S²×R.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct S2RPoint {
    direction: Vector3<f64>,
    fibre: f64,
}

impl S2RPoint {
    /// Builds a point, renormalizing `direction` onto the unit sphere.
    pub fn new(direction: Vector3<f64>, fibre: f64) -> Result<Self> {
        let norm = direction.norm();
        if !norm.is_finite() || norm < 1e-300 {
            return Err(Error::domain("direction norm", norm));
        }
        if !fibre.is_finite() {
            return Err(Error::domain("fibre coordinate", fibre));
        }
        Ok(Self { direction: direction / norm, fibre })
    }

    /// Caller guarantees `direction` has unit length.
    pub(crate) fn from_unit(direction: Vector3<f64>, fibre: f64) -> Self {
        debug_assert!((direction.norm() - 1.0).abs() < 1e-9);
        Self { direction, fibre }
    }

    /// The centre of the geodesic sphere parametrization, `(1, 0, 0)` at fibre 0.
    pub fn base() -> Self {
        Self { direction: Vector3::x(), fibre: 0.0 }
    }

    pub fn direction(&self) -> &Vector3<f64> {
        &self.direction
    }

    pub fn fibre(&self) -> f64 {
        self.fibre
    }

    pub fn to_model(&self) -> ModelPoint {
        let r = self.fibre.exp();
        ModelPoint {
            x: r * self.direction.x,
            y: r * self.direction.y,
            z: r * self.direction.z,
        }
    }
}

/// Cartesian image of a point in the projective model, `|(x, y, z)| = e^t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelPoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl ModelPoint {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let p = Self { x, y, z };
        let r = p.radius();
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::domain("model point radius", r));
        }
        Ok(p)
    }

    pub fn radius(&self) -> f64 {
        self.as_vector().norm()
    }

    pub fn as_vector(&self) -> Vector3<f64> {
        Vector3::new(self.x, self.y, self.z)
    }

    pub fn to_point(&self) -> Result<S2RPoint> {
        let r = self.radius();
        S2RPoint::new(self.as_vector(), r.ln())
    }
}

/// Initial direction of a geodesic at the base point: longitude `u` and
/// altitude `v`. Altitude `±π/2` points straight along the fibre.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeographicDirection {
    u: f64,
    v: f64,
}

impl GeographicDirection {
    pub fn new(u: f64, v: f64) -> Result<Self> {
        if !(u > -PI && u <= PI) {
            return Err(Error::domain("longitude", u));
        }
        if !(-FRAC_PI_2..=FRAC_PI_2).contains(&v) {
            return Err(Error::domain("altitude", v));
        }
        Ok(Self { u, v })
    }

    pub fn u(&self) -> f64 {
        self.u
    }

    pub fn v(&self) -> f64 {
        self.v
    }
}

/// Great-circle angle between two unit vectors.
pub fn spherical_angle(a: &Vector3<f64>, b: &Vector3<f64>) -> f64 {
    // atan2 form keeps full precision near 0 and π; the clamped arccos is
    // used only as the reference in tests.
    a.cross(b).norm().atan2(a.dot(b))
}

/// Geodesic distance of the product metric.
pub fn distance(p: &S2RPoint, q: &S2RPoint) -> f64 {
    let theta = spherical_angle(&p.direction, &q.direction);
    theta.hypot(p.fibre - q.fibre)
}

/// Endpoint of the unit-speed geodesic of length `rho` leaving the base point
/// in direction `dir`.
pub fn geodesic_point(rho: f64, dir: GeographicDirection) -> ModelPoint {
    let (sv, cv) = dir.v.sin_cos();
    let (su, cu) = dir.u.sin_cos();
    let radial = (rho * sv).exp();
    let (s, c) = (rho * cv).sin_cos();
    ModelPoint {
        x: radial * c,
        y: radial * s * cu,
        z: radial * s * su,
    }
}

fn check_radius(rho: f64) -> Result<()> {
    if rho > 0.0 && rho < PI {
        Ok(())
    } else {
        Err(Error::domain("ball radius (must lie in (0, π))", rho))
    }
}

/// Volume of the geodesic ball of radius `rho`, by nested adaptive quadrature
/// of `2π ∫₀^ρ ∫_{-π/2}^{π/2} |τ sin(τ cos v)| dv dτ`.
pub fn ball_volume(rho: f64) -> Result<f64> {
    check_radius(rho)?;
    // Symmetric in v; integrate the upper half and double.
    let r = quadrature::integrate_2d(
        |tau, v| (tau * (tau * v.cos()).sin()).abs(),
        0.0,
        rho,
        |_| 0.0,
        |_| FRAC_PI_2,
        VOLUME_TOLERANCE / (4.0 * PI),
        VOLUME_MAX_EVALUATIONS,
    )?;
    Ok(4.0 * PI * r.value)
}

/// Termwise-integrated series for the ball volume,
/// `4π Σ (−1)^k ρ^{2k+3} / ((2k+3)·((2k+1)!!)²)`.
pub fn ball_volume_series(rho: f64) -> Result<f64> {
    check_radius(rho)?;
    Ok(ball_volume_series_unchecked(rho))
}

pub(crate) fn ball_volume_series_unchecked(rho: f64) -> f64 {
    let rho2 = rho * rho;
    // term_k = ρ^{2k+3} / ((2k+1)!!)²
    let mut term = rho2 * rho;
    let mut sum = term / 3.0;
    for k in 1..200 {
        let odd = (2 * k + 1) as f64;
        term *= -rho2 / (odd * odd);
        let contrib = term / (odd + 2.0);
        sum += contrib;
        if contrib.abs() <= f64::EPSILON * 1e-2 * sum.abs() {
            break;
        }
    }
    4.0 * PI * sum
}

/// Volume of an S²×R prism over a spherical base.
pub fn prism_volume(base_area: f64, height: f64) -> Result<f64> {
    if !(base_area > 0.0 && base_area <= 4.0 * PI + 1e-12) {
        return Err(Error::domain("prism base area", base_area));
    }
    if !(height > 0.0 && height.is_finite()) {
        return Err(Error::domain("prism height", height));
    }
    Ok(base_area * height)
}

/// Area of a fundamental domain of a finite rotation group acting on S².
pub fn fundamental_area(point_group_order: usize) -> f64 {
    assert!(point_group_order >= 1, "point group order must be positive");
    4.0 * PI / point_group_order as f64
}

/// Area (spherical excess) of the geodesic triangle with unit vertices.
pub fn triangle_area(a: &Vector3<f64>, b: &Vector3<f64>, c: &Vector3<f64>) -> f64 {
    let triple = a.dot(&b.cross(c)).abs();
    let denom = 1.0 + a.dot(b) + b.dot(c) + c.dot(a);
    2.0 * triple.atan2(denom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn pt(x: f64, y: f64, z: f64, t: f64) -> S2RPoint {
        S2RPoint::new(Vector3::new(x, y, z), t).unwrap()
    }

    #[test]
    fn distance_examples() {
        let base = S2RPoint::base();
        assert_eq!(distance(&base, &pt(1.0, 0.0, 0.0, -2.5)), 2.5);
        assert_relative_eq!(distance(&base, &pt(-1.0, 0.0, 0.0, 0.0)), PI, epsilon = 1e-15);
        let d = distance(&base, &pt(0.0, 1.0, 0.0, 1.0));
        assert_relative_eq!(d, (PI * PI / 4.0 + 1.0).sqrt(), epsilon = 1e-15);
        assert!((d - 1.8621).abs() < 1e-4);
    }

    #[test]
    fn distance_matches_integrated_geodesic_arc_length() {
        // Target ((0,1,0), 1): the geodesic with u = 0 and tan v = 1 / (π/2)
        // reaches it at length L = √(π²/4 + 1). Integrate |dX/ds| of the
        // Cartesian curve against the model metric ds² = (|dX|² ) / |X|²
        // restricted to the curve, by quadrature over s ∈ [0, L].
        let target_angle = FRAC_PI_2;
        let target_fibre = 1.0_f64;
        let length = target_angle.hypot(target_fibre);
        let v = target_fibre.atan2(target_angle);
        let dir = GeographicDirection::new(0.0, v).unwrap();
        let h = 1e-6;
        let speed = |s: f64| {
            let a = geodesic_point(s + h, dir).as_vector();
            let b = geodesic_point(s - h, dir).as_vector();
            let x = geodesic_point(s, dir).as_vector();
            // Pull back the product metric: radial part d(ln r), angular part
            // the tangential velocity over r.
            let dx = (a - b) / (2.0 * h);
            let r = x.norm();
            let radial = dx.dot(&x) / r;
            let tangential = (dx - x * (radial / r)).norm();
            ((radial / r).powi(2) + (tangential / r).powi(2)).sqrt()
        };
        let arc = quadrature::integrate(speed, 0.0, length, 1e-11, 100_000).unwrap();
        let end = geodesic_point(length, dir).to_point().unwrap();
        assert_relative_eq!(*end.direction(), Vector3::new(0.0, 1.0, 0.0), epsilon = 1e-12);
        assert_relative_eq!(end.fibre(), 1.0, epsilon = 1e-12);
        assert!((arc.value - distance(&S2RPoint::base(), &end)).abs() < 1e-8);
    }

    #[test]
    fn geodesic_point_examples() {
        let p = geodesic_point(0.0, GeographicDirection::new(0.3, -0.2).unwrap());
        assert_eq!((p.x, p.y, p.z), (1.0, 0.0, 0.0));
        let p = geodesic_point(FRAC_PI_2, GeographicDirection::new(0.0, 0.0).unwrap());
        assert_relative_eq!(p.as_vector(), Vector3::new(0.0, 1.0, 0.0), epsilon = 1e-15);
        let p = geodesic_point(1.0, GeographicDirection::new(0.0, FRAC_PI_2).unwrap());
        assert_relative_eq!(p.as_vector(), Vector3::new(std::f64::consts::E, 0.0, 0.0), epsilon = 1e-15);
    }

    #[test]
    fn model_round_trip() {
        let p = pt(0.3, -1.2, 0.7, -3.25);
        let q = p.to_model().to_point().unwrap();
        assert_relative_eq!(*q.direction(), *p.direction(), epsilon = 1e-12);
        assert_relative_eq!(q.fibre(), p.fibre(), epsilon = 1e-12);
        assert!(ModelPoint::new(0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn geographic_ranges() {
        assert!(GeographicDirection::new(-PI, 0.0).is_err());
        assert!(GeographicDirection::new(PI, 0.0).is_ok());
        assert!(GeographicDirection::new(0.0, 1.6).is_err());
    }

    #[test]
    fn ball_volume_at_icosahedral_radius() {
        let rho = 0.55357;
        assert!((ball_volume(rho).unwrap() - 0.6962).abs() < 5e-5);
        assert!((ball_volume_series(rho).unwrap() - 0.6962).abs() < 5e-5);
    }

    #[test]
    fn ball_volume_third_of_pi() {
        // Frozen from scipy dblquad on the same double integral (4.469480329191093)
        // and the alternating series; Monte-Carlo over the model volume form
        // gives 4.4719 at 4·10⁶ samples.
        let v = ball_volume(PI / 3.0).unwrap();
        assert!((v - 4.469_480_329_191_093).abs() < 1e-9, "{v}");
        assert!((ball_volume_series(PI / 3.0).unwrap() - v).abs() < 1e-9);
    }

    #[test]
    fn ball_volume_small_radius_is_euclidean() {
        let rho: f64 = 1e-3;
        let euclid = 4.0 / 3.0 * PI * rho.powi(3);
        assert_relative_eq!(ball_volume_series(rho).unwrap(), euclid, max_relative = 1e-6);
        assert_relative_eq!(ball_volume(rho).unwrap(), euclid, epsilon = 1e-12);
        // 0.1: second series term is -ρ²/15 relative.
        let v = ball_volume_series(0.1).unwrap();
        assert!((v - 0.004_185_998_475_721_369).abs() < 1e-15);
        assert!((v - 4.0 / 3.0 * PI * 1e-3 * (1.0 - 0.01 / 15.0)).abs() < 1e-8);
    }

    #[test]
    fn ball_volume_quarter_turn_agrees_with_series() {
        let q = ball_volume(FRAC_PI_2).unwrap();
        let s = ball_volume_series(FRAC_PI_2).unwrap();
        assert!((q - s).abs() < 1e-8);
        assert!((q - 13.745_394_712_571_775).abs() < 1e-8);
    }

    #[test]
    fn ball_volume_domain() {
        for bad in [0.0, -1.0, PI, 4.0, f64::NAN] {
            assert!(matches!(ball_volume(bad), Err(Error::Domain { .. })));
            assert!(matches!(ball_volume_series(bad), Err(Error::Domain { .. })));
        }
    }

    #[test]
    fn prism_volume_examples() {
        assert_relative_eq!(prism_volume(PI / 3.0, 1.10714).unwrap(), 1.159_394_3, epsilon = 1e-7);
        assert_relative_eq!(prism_volume(4.0 * PI, 1.0).unwrap(), 4.0 * PI);
        let v = prism_volume(4.0 * PI / 3.0, 2.0 * PI / 3.0).unwrap();
        assert_relative_eq!(v, 8.0 * PI * PI / 9.0, epsilon = 1e-14);
        assert!((v - 8.7730).abs() < 1e-4);
        assert!(prism_volume(0.0, 1.0).is_err());
        assert!(prism_volume(1.0, -1.0).is_err());
    }

    #[test]
    fn fundamental_area_examples() {
        assert_relative_eq!(fundamental_area(12), PI / 3.0);
        assert_relative_eq!(fundamental_area(1), 4.0 * PI);
        assert_relative_eq!(fundamental_area(60), PI / 15.0);
        // (2,3,5) Möbius triangle: angles π/2, π/3, π/5; doubled.
        let c = |a: f64, b: f64, g: f64| (g.cos() + a.cos() * b.cos()) / (a.sin() * b.sin());
        let (a2, a3, a5) = (FRAC_PI_2, PI / 3.0, PI / 5.0);
        // Side lengths opposite each angle, then place the triangle.
        let side_23 = c(a2, a3, a5).acos();
        let side_25 = c(a2, a5, a3).acos();
        let v2 = Vector3::x();
        let v3 = Vector3::new(side_23.cos(), side_23.sin(), 0.0);
        let v5 = Vector3::new(side_25.cos(), 0.0, side_25.sin());
        assert_relative_eq!(2.0 * triangle_area(&v2, &v3, &v5), PI / 15.0, epsilon = 1e-12);
    }
}
