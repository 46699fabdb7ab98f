//! Active-set refinement: drives the near-minimal image distances to exact
//! equality by Gauss–Newton in tangent-plane coordinates.

use nalgebra::{DMatrix, DVector, Vector3};

use crate::packing::Packer;

const FD_STEP: f64 = 1e-7;
const RESIDUAL_TARGET: f64 = 1e-14;
const MAX_ITERATIONS: usize = 40;

/// Orthonormal frame at a point of S².
#[derive(Debug, Clone, Copy)]
pub(crate) struct Tangent {
    base: Vector3<f64>,
    e1: Vector3<f64>,
    e2: Vector3<f64>,
}

impl Tangent {
    pub(crate) fn new(base: Vector3<f64>) -> Self {
        let base = base.normalize();
        let helper = if base.x.abs() < 0.9 { Vector3::x() } else { Vector3::y() };
        let e1 = base.cross(&helper).normalize();
        let e2 = base.cross(&e1);
        Self { base, e1, e2 }
    }

    pub(crate) fn point(&self, a: f64, b: f64) -> Vector3<f64> {
        (self.base + a * self.e1 + b * self.e2).normalize()
    }
}

/// Refines `(kernel, tau)` so that every image distance within `window`
/// of the minimum becomes equal. With `fix_tau` only the kernel moves.
/// Returns `None` if fewer than two distances are active or the iteration
/// does not reach the residual target.
pub(crate) fn equalize(
    packer: &Packer,
    kernel: &Vector3<f64>,
    tau: f64,
    fix_tau: bool,
    window: f64,
) -> Option<(Vector3<f64>, f64)> {
    let d0 = packer.image_distances(kernel, tau);
    let min = d0.iter().cloned().fold(f64::INFINITY, f64::min);
    let active: Vec<usize> = (0..d0.len()).filter(|&i| d0[i] <= min + window).collect();
    if active.len() < 2 {
        return None;
    }
    let frame = Tangent::new(*kernel);
    let n = if fix_tau { 2 } else { 3 };
    let residual = |u: &[f64]| -> DVector<f64> {
        let t = if fix_tau { tau } else { tau + u[2] };
        let d = packer.image_distances(&frame.point(u[0], u[1]), t);
        DVector::from_iterator(active.len() - 1, active[1..].iter().map(|&i| d[i] - d[active[0]]))
    };
    let mut u = vec![0.0; n];
    let mut f = residual(&u);
    for _ in 0..MAX_ITERATIONS {
        if f.amax() < RESIDUAL_TARGET {
            break;
        }
        let mut jac = DMatrix::zeros(f.len(), n);
        for j in 0..n {
            let mut up = u.clone();
            let mut dn = u.clone();
            up[j] += FD_STEP;
            dn[j] -= FD_STEP;
            let col = (residual(&up) - residual(&dn)) / (2.0 * FD_STEP);
            jac.set_column(j, &col);
        }
        let step = jac.svd(true, true).solve(&(-&f), 1e-10).ok()?;
        let mut scale = 1.0;
        loop {
            let trial: Vec<f64> = u.iter().zip(step.iter()).map(|(a, s)| a + scale * s).collect();
            let ft = residual(&trial);
            if ft.amax() < f.amax() || scale < 1e-4 {
                u = trial;
                f = ft;
                break;
            }
            scale *= 0.5;
        }
    }
    if f.amax() >= 1e-12 {
        return None;
    }
    let t = if fix_tau { tau } else { tau + u[2] };
    Some((frame.point(u[0], u[1]), t))
}
