//! Triangulated geodesic spheres in the model coordinates, for export as
//! Wavefront OBJ.

use std::f64::consts::PI;
use std::io::Write;

use nalgebra::{Rotation3, Vector3};

use crate::error::{Error, Result};
use crate::geometry::{geodesic_point, GeographicDirection, S2RPoint};
use crate::isometry::{FibreFlag, Isometry};
use crate::packing::PackingConfiguration;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Mesh {
    pub vertices: Vec<[f64; 3]>,
    /// Zero-based vertex indices, counter-clockwise seen from outside.
    pub faces: Vec<[usize; 3]>,
}

impl Mesh {
    /// Geodesic sphere of radius `rho` about the base point, with `grid`
    /// altitude bands and `2·grid` longitude sectors.
    pub fn sphere(rho: f64, grid: usize) -> Result<Self> {
        if !(rho > 0.0 && rho < PI) {
            return Err(Error::domain("sphere radius", rho));
        }
        if grid < 8 {
            return Err(Error::InvalidParameter(format!("mesh grid must be at least 8, got {grid}")));
        }
        let sectors = 2 * grid;
        let vertex = |u: f64, v: f64| {
            let u = if u > PI { u - 2.0 * PI } else { u };
            let p = geodesic_point(rho, GeographicDirection::new(u, v).expect("grid directions are in range"));
            [p.x, p.y, p.z]
        };
        let mut vertices = vec![vertex(0.0, -PI / 2.0)];
        for i in 1..grid {
            let v = -PI / 2.0 + PI * i as f64 / grid as f64;
            for j in 0..sectors {
                vertices.push(vertex(2.0 * PI * j as f64 / sectors as f64, v));
            }
        }
        vertices.push(vertex(0.0, PI / 2.0));
        let south = 0;
        let north = vertices.len() - 1;
        let ring = |i: usize, j: usize| 1 + (i - 1) * sectors + j % sectors;
        let mut faces = Vec::new();
        for j in 0..sectors {
            faces.push([south, ring(1, j + 1), ring(1, j)]);
        }
        for i in 1..grid - 1 {
            for j in 0..sectors {
                faces.push([ring(i, j), ring(i, j + 1), ring(i + 1, j + 1)]);
                faces.push([ring(i, j), ring(i + 1, j + 1), ring(i + 1, j)]);
            }
        }
        for j in 0..sectors {
            faces.push([north, ring(grid - 1, j), ring(grid - 1, j + 1)]);
        }
        let mut mesh = Self { vertices, faces };
        if mesh.signed_volume() < 0.0 {
            mesh.faces.iter_mut().for_each(|f| f.swap(1, 2));
        }
        Ok(mesh)
    }

    /// Enclosed volume, positive for outward orientation.
    pub fn signed_volume(&self) -> f64 {
        self.faces
            .iter()
            .map(|f| {
                let [a, b, c] = f.map(|i| Vector3::from(self.vertices[i]));
                a.dot(&b.cross(&c)) / 6.0
            })
            .sum()
    }

    /// Image under an isometry, acting on the S²×R points behind the
    /// model coordinates.
    pub fn transformed(&self, g: &Isometry) -> Result<Self> {
        let vertices = self
            .vertices
            .iter()
            .map(|v| {
                let p = crate::geometry::ModelPoint::new(v[0], v[1], v[2])?.to_point()?;
                let q = g.apply(&p).to_model();
                Ok([q.x, q.y, q.z])
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { vertices, faces: self.faces.clone() })
    }

    pub fn append(&mut self, other: &Mesh) {
        let offset = self.vertices.len();
        self.vertices.extend_from_slice(&other.vertices);
        self.faces.extend(other.faces.iter().map(|f| f.map(|i| i + offset)));
    }

    pub fn write_obj<W: Write>(&self, mut w: W) -> Result<()> {
        for v in &self.vertices {
            writeln!(w, "v {:.12} {:.12} {:.12}", v[0], v[1], v[2])?;
        }
        for f in &self.faces {
            writeln!(w, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1)?;
        }
        Ok(())
    }
}

/// Isometry taking the base point to `p`.
pub fn carrier(p: &S2RPoint) -> Isometry {
    let rot = Rotation3::rotation_between(&Vector3::x(), p.direction())
        .unwrap_or_else(|| Rotation3::from_axis_angle(&Vector3::z_axis(), PI));
    Isometry::new(*rot.matrix(), FibreFlag::Preserve, p.fibre()).expect("rotation matrix is proper")
}

/// Balls of radius `rho` (default: the packing radius) at the kernel and
/// at every touching neighbour.
pub fn orbit_mesh(config: &PackingConfiguration, rho: Option<f64>, grid: usize) -> Result<Mesh> {
    let base = Mesh::sphere(rho.unwrap_or(config.radius), grid)?;
    let to_kernel = carrier(&config.kernel);
    let mut mesh = base.transformed(&to_kernel)?;
    for n in &config.argmin_elements {
        mesh.append(&base.transformed(&to_kernel.then(&n.element.iso))?);
    }
    Ok(mesh)
}
