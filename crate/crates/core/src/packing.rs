//! Packing radius, Dirichlet–Voronoi cell volume and density of the orbit
//! of a kernel point.

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{ball_volume, ball_volume_series_unchecked, distance, fundamental_area, spherical_angle, S2RPoint};
use crate::groups::{build_point_group, frac_to_f64, GroupElement, PointGroup, SpaceGroupSpec, DEFAULT_K_MAX};
use crate::isometry::Isometry;

/// Absolute slack on distance for membership in the argmin set.
pub const TIE_TOLERANCE: f64 = 1e-9;
/// An image closer than this to the kernel counts as a fixed point.
pub const STABILIZER_TOLERANCE: f64 = 1e-9;

/// An orbit neighbour of the kernel together with its distance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Neighbour {
    pub element: GroupElement,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadiusReport {
    pub radius: f64,
    /// Elements within [`TIE_TOLERANCE`] of the minimal distance.
    pub argmin: Vec<Neighbour>,
    /// Enumeration half-width that certified the minimum.
    pub k_max: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PackingConfiguration {
    pub spec: SpaceGroupSpec,
    pub tau: f64,
    pub kernel: S2RPoint,
    pub radius: f64,
    pub density: f64,
    /// Number of orbit balls touching the kernel ball.
    pub kissing: usize,
    pub argmin_elements: Vec<Neighbour>,
    pub k_max: u32,
}

/// A space group with its point group precomputed, for repeated
/// evaluation at many kernels and lattice parameters.
#[derive(Debug, Clone)]
pub struct Packer {
    spec: SpaceGroupSpec,
    point_group: PointGroup,
    /// Non-identity rotations with the smallest fibre gap `min(s, 1-s)` of
    /// their coset, in units of τ.
    rotations: Vec<(Matrix3<f64>, f64)>,
    cell_area: f64,
}

impl Packer {
    pub fn new(spec: &SpaceGroupSpec) -> Result<Self> {
        let point_group = build_point_group(spec)?;
        let rotations = point_group
            .elements()
            .iter()
            .filter(|e| !e.is_identity_rotation())
            .map(|e| {
                let s = frac_to_f64(e.frac);
                (e.linear, s.min(1.0 - s))
            })
            .collect();
        Ok(Self {
            spec: spec.clone(),
            cell_area: fundamental_area(point_group.len()),
            point_group,
            rotations,
        })
    }

    pub fn spec(&self) -> &SpaceGroupSpec {
        &self.spec
    }

    pub fn point_group(&self) -> &PointGroup {
        &self.point_group
    }

    pub fn cell_volume(&self, tau: f64) -> Result<f64> {
        check_tau(tau)?;
        Ok(self.cell_area * tau)
    }

    /// Packing radius of a kernel with fibre coordinate 0, without
    /// enumeration. Returns 0 when the kernel lies on a rotation axis that
    /// carries no fibre shift.
    pub fn fast_radius(&self, kernel: &Vector3<f64>, tau: f64) -> f64 {
        let mut best = tau * tau;
        for (m, gap) in &self.rotations {
            let theta = spherical_angle(kernel, &(m * kernel));
            let g = gap * tau;
            let d2 = theta * theta + g * g;
            if d2 < best {
                best = d2;
            }
        }
        0.5 * best.sqrt()
    }

    /// Distance to the nearest image in each coset: the lattice translation
    /// first, then every non-identity rotation of the point group.
    pub(crate) fn image_distances(&self, kernel: &Vector3<f64>, tau: f64) -> Vec<f64> {
        std::iter::once(tau)
            .chain(self.rotations.iter().map(|(m, gap)| {
                let theta = spherical_angle(kernel, &(m * kernel));
                theta.hypot(gap * tau)
            }))
            .collect()
    }

    pub fn cell_area(&self) -> f64 {
        self.cell_area
    }

    /// Density from [`Packer::fast_radius`], using the series ball volume.
    pub fn fast_density(&self, kernel: &Vector3<f64>, tau: f64) -> f64 {
        let r = self.fast_radius(kernel, tau);
        if r <= 0.0 || r >= std::f64::consts::PI {
            return 0.0;
        }
        ball_volume_series_unchecked(r) / (self.cell_area * tau)
    }

    pub fn radius(&self, kernel: &S2RPoint, tau: f64, k_max: u32) -> Result<RadiusReport> {
        check_tau(tau)?;
        let mut k = k_max;
        loop {
            let mut images: Vec<Neighbour> = self
                .point_group
                .enumerate(tau, k)
                .into_iter()
                .map(|element| {
                    let d = distance(kernel, &element.iso.apply(kernel));
                    Neighbour { element, distance: d }
                })
                .collect();
            if let Some(fixed) = images.iter().find(|n| n.distance < STABILIZER_TOLERANCE) {
                return Err(Error::StabilizerNotTrivial { word: fixed.element.word.clone() });
            }
            let min = images.iter().map(|n| n.distance).fold(f64::INFINITY, f64::min);
            // Anything outside the window is at least (k+1)·τ away in the fibre.
            if min.is_finite() && k as f64 * tau >= min {
                images.retain(|n| n.distance <= min + TIE_TOLERANCE);
                images.sort_by(|a, b| a.distance.total_cmp(&b.distance));
                return Ok(RadiusReport { radius: 0.5 * min, argmin: images, k_max: k });
            }
            k += 1;
        }
    }

    pub fn configuration(&self, kernel: &S2RPoint, tau: f64, k_max: u32) -> Result<PackingConfiguration> {
        let report = self.radius(kernel, tau, k_max)?;
        let density = ball_volume(report.radius)? / self.cell_volume(tau)?;
        Ok(PackingConfiguration {
            spec: self.spec.clone(),
            tau,
            kernel: *kernel,
            radius: report.radius,
            density,
            kissing: report.argmin.len(),
            argmin_elements: report.argmin,
            k_max: report.k_max,
        })
    }
}

fn check_tau(tau: f64) -> Result<()> {
    if tau > 0.0 && tau.is_finite() {
        Ok(())
    } else {
        Err(Error::domain("lattice parameter tau", tau))
    }
}

pub fn packing_radius(spec: &SpaceGroupSpec, tau: f64, kernel: &S2RPoint, k_max: u32) -> Result<RadiusReport> {
    Packer::new(spec)?.radius(kernel, tau, k_max)
}

pub fn dv_cell_volume(spec: &SpaceGroupSpec, tau: f64) -> Result<f64> {
    check_tau(tau)?;
    Ok(fundamental_area(spec.point_group_order()) * tau)
}

pub fn density(spec: &SpaceGroupSpec, tau: f64, kernel: &S2RPoint, k_max: u32) -> Result<PackingConfiguration> {
    Packer::new(spec)?.configuration(kernel, tau, k_max)
}

/// Density at the default enumeration window.
pub fn density_default(spec: &SpaceGroupSpec, tau: f64, kernel: &S2RPoint) -> Result<PackingConfiguration> {
    density(spec, tau, kernel, DEFAULT_K_MAX)
}

impl PackingConfiguration {
    /// Distances from the kernel to every image in a window of `k_max`.
    pub fn orbit_distances(&self, k_max: u32) -> Result<Vec<f64>> {
        Ok(build_point_group(&self.spec)?
            .enumerate(self.tau, k_max)
            .iter()
            .map(|e| distance(&self.kernel, &e.iso.apply(&self.kernel)))
            .collect())
    }
}

/// Touching requirements of the 8.I.2 arrangements.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Requirements8I2 {
    /// `d(K,K^{g₁})`, `d(K,K^{g₂τ₂})`, `d(K,K^{g₁g₂τ₂})`.
    pub distances: [f64; 3],
    /// `d₁ − d₂`, `d₂ − d₃`, `d₃ − d₁`.
    pub residuals: [f64; 3],
    /// `d(K,K^τ) − d₁`.
    pub translation_margin: f64,
    /// `d(K^{g₂g₂τ₂τ₂}, K^{g₁g₂g₁g₂τ₂τ₂}) − d₁`.
    pub side_margin: f64,
    pub translation_ok: bool,
    pub side_ok: bool,
}

impl Requirements8I2 {
    pub fn feasible(&self) -> bool {
        self.translation_ok && self.side_ok && self.distances[0] > STABILIZER_TOLERANCE
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().fold(0.0_f64, |m, r| m.max(r.abs()))
    }
}

/// Evaluates the 8.I.2 requirement list at a kernel (fibre 0) and τ.
/// Side conditions compare against `d₁` with [`TIE_TOLERANCE`] slack.
pub fn touching_requirements_8i2(kernel: &Vector3<f64>, tau: f64) -> Requirements8I2 {
    let spec = SpaceGroupSpec::catalog(crate::groups::GroupName::EightI2);
    requirements_with(&spec, kernel, tau)
}

pub(crate) fn requirements_with(spec: &SpaceGroupSpec, kernel: &Vector3<f64>, tau: f64) -> Requirements8I2 {
    let k = S2RPoint::from_unit(kernel.normalize(), 0.0);
    let image = |word: &[usize]| spec.word_isometry(word, tau).apply(&k);
    let d1 = distance(&k, &image(&[0]));
    let d2 = distance(&k, &image(&[1]));
    let d3 = distance(&k, &image(&[0, 1]));
    let dt = distance(&k, &Isometry::translation(tau).apply(&k));
    let side = distance(&image(&[1, 1]), &image(&[0, 1, 0, 1]));
    let translation_margin = dt - d1;
    let side_margin = side - d1;
    Requirements8I2 {
        distances: [d1, d2, d3],
        residuals: [d1 - d2, d2 - d3, d3 - d1],
        translation_margin,
        side_margin,
        translation_ok: translation_margin >= -TIE_TOLERANCE,
        side_ok: side_margin >= -TIE_TOLERANCE,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::GroupName;
    use std::f64::consts::PI;

    fn point(x: f64, y: f64, z: f64) -> S2RPoint {
        S2RPoint::new(Vector3::new(x, y, z), 0.0).unwrap()
    }

    pub(crate) fn k_opt() -> Vector3<f64> {
        let s5 = 5f64.sqrt();
        let x = ((5.0 + s5) / 10.0).sqrt();
        let y = 0.5 * ((s5 - 1.0) / s5).sqrt();
        Vector3::new(x, y, y)
    }

    #[test]
    fn cyclic_radius_on_the_equator() {
        for q in 3..=12u32 {
            let spec = SpaceGroupSpec::new(GroupName::OneQI1, Some(q), None).unwrap();
            let a = PI / q as f64;
            let k = point(a.cos(), a.sin(), 0.0);
            let r = packing_radius(&spec, 2.0 * PI / q as f64, &k, 2).unwrap();
            assert!((r.radius - PI / q as f64).abs() < 1e-10, "q={q}");
        }
    }

    #[test]
    fn closed_form_kernel_radius() {
        let spec = SpaceGroupSpec::catalog(GroupName::EightI1);
        let r_opt = ((5.0 + 5f64.sqrt()) / 10.0).sqrt().acos();
        let k = S2RPoint::new(k_opt(), 0.0).unwrap();
        let cfg = density(&spec, 2.0 * r_opt, &k, 2).unwrap();
        assert!((cfg.radius - r_opt).abs() < 1e-12);
        assert!((cfg.density - 0.6005).abs() < 1e-3);
        let packer = Packer::new(&spec).unwrap();
        assert!((packer.fast_radius(&k_opt(), 2.0 * r_opt) - r_opt).abs() < 1e-14);
    }

    #[test]
    fn axis_kernels_are_rejected() {
        let spec = SpaceGroupSpec::new(GroupName::OneQI1, Some(3), None).unwrap();
        let err = packing_radius(&spec, 1.0, &point(0.0, 0.0, 1.0), 2).unwrap_err();
        assert!(matches!(err, Error::StabilizerNotTrivial { .. }));
        let spec = SpaceGroupSpec::catalog(GroupName::EightI1);
        let err = packing_radius(&spec, 1.0, &point(1.0, 0.0, 0.0), 2).unwrap_err();
        assert!(matches!(err, Error::StabilizerNotTrivial { word } if word == vec![0]));
        // A screw axis does not fix its points.
        let spec = SpaceGroupSpec::new(GroupName::OneQI2, Some(3), Some(1)).unwrap();
        let r = packing_radius(&spec, 1.0, &point(0.0, 0.0, 1.0), 2).unwrap();
        assert!((r.radius - 1.0 / 6.0).abs() < 1e-12);
        assert_eq!(Packer::new(&SpaceGroupSpec::catalog(GroupName::EightI1)).unwrap().fast_radius(&Vector3::x(), 1.0), 0.0);
    }

    #[test]
    fn window_is_widened_until_certified() {
        let spec = SpaceGroupSpec::catalog(GroupName::EightI1);
        let k = S2RPoint::new(k_opt(), 0.0).unwrap();
        let r0 = packing_radius(&spec, 1.0, &k, 0).unwrap();
        let r2 = packing_radius(&spec, 1.0, &k, 2).unwrap();
        assert_eq!(r0.k_max, 1);
        assert_eq!(r0.radius, r2.radius);
    }

    #[test]
    fn cell_volume_examples() {
        let spec = SpaceGroupSpec::catalog(GroupName::EightI1);
        assert!((dv_cell_volume(&spec, 1.10714).unwrap() - PI / 3.0 * 1.10714).abs() < 1e-15);
        let spec = SpaceGroupSpec::new(GroupName::OneQI1, Some(3), None).unwrap();
        let v = dv_cell_volume(&spec, 2.0 * PI / 3.0).unwrap();
        assert!((v - 8.0 * PI * PI / 9.0).abs() < 1e-13);
        assert!((dv_cell_volume(&spec, 2.0).unwrap() - 2.0 * dv_cell_volume(&spec, 1.0).unwrap()).abs() < 1e-15);
        assert!(dv_cell_volume(&spec, 0.0).is_err());
    }

    #[test]
    fn requirements_on_the_two_fold_axis() {
        let r = touching_requirements_8i2(&Vector3::x(), 1.2);
        assert_eq!(r.distances[0], 0.0);
        assert!(!r.feasible());
    }

    #[test]
    fn fast_radius_matches_enumeration() {
        for name in GroupName::ALL {
            let spec = SpaceGroupSpec::catalog(name);
            let packer = Packer::new(&spec).unwrap();
            for (i, tau) in [0.3, 1.1, 2.7].into_iter().enumerate() {
                let k = Vector3::new(0.7, 0.2 + 0.1 * i as f64, 0.31).normalize();
                let slow = packer.radius(&S2RPoint::new(k, 0.0).unwrap(), tau, 2).unwrap().radius;
                assert!((packer.fast_radius(&k, tau) - slow).abs() < 1e-14, "{name}");
            }
        }
    }
}
