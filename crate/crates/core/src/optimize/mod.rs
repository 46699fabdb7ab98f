//! Density maximization over the kernel point and the lattice parameter.
//!
//! The kernel is searched on the spherical triangle returned by
//! [`SpaceGroupSpec::fundamental_triangle`] with fibre coordinate 0. A
//! barycentric grid with an inner golden-section search over τ seeds
//! Nelder–Mead runs in `(b₁, b₂, τ)`; each run ends with an active-set
//! refinement that equalizes the touching distances.

pub mod golden;
pub mod nelder_mead;

mod family;
mod polish;

pub use family::{regime_8i2, Regime8I2, RequirementFamily};

use std::f64::consts::PI;
use std::time::Instant;

use nalgebra::{Matrix3, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{ball_volume, distance, S2RPoint};
use crate::groups::{Family, GroupName, SpaceGroupSpec};
use crate::isometry::Isometry;
use crate::packing::{Packer, PackingConfiguration};

use golden::scan_golden_max;
use nelder_mead::{minimize, NelderMeadOptions};

/// Largest density spread tolerated between restarts.
pub const RESTART_TOLERANCE: f64 = 1e-6;
/// Densities closer than this are ties, broken by τ and then the kernel.
pub const DENSITY_TIE: f64 = 1e-12;
const POLISH_WINDOWS: [f64; 4] = [1e-5, 1e-6, 1e-7, 1e-8];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SearchParams {
    /// Barycentric grid resolution per edge.
    pub grid: usize,
    pub tau_min: f64,
    pub tau_max: f64,
    pub restarts: usize,
    pub seed: u64,
    pub k_max: u32,
    /// Minimal barycentric coordinate of grid samples.
    pub vertex_margin: f64,
    /// Number of grid cells refined by Nelder–Mead.
    pub starts: usize,
    /// Samples of the τ scan preceding golden-section search.
    pub tau_samples: usize,
    pub simplex_tolerance: f64,
    pub max_evaluations: usize,
}

impl Default for SearchParams {
    fn default() -> Self {
        Self {
            grid: 40,
            tau_min: 0.05,
            tau_max: 2.0 * PI,
            restarts: 3,
            seed: 1,
            k_max: 2,
            vertex_margin: 1e-4,
            starts: 5,
            tau_samples: 48,
            simplex_tolerance: 1e-10,
            max_evaluations: 20_000,
        }
    }
}

impl SearchParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParameter(m.to_string()));
        if self.grid < 2 {
            return bad("grid must be at least 2");
        }
        if !(self.tau_min > 0.0 && self.tau_min < self.tau_max && self.tau_max.is_finite()) {
            return bad("tau bracket must satisfy 0 < tau_min < tau_max");
        }
        if self.restarts == 0 || self.starts == 0 {
            return bad("restarts and starts must be positive");
        }
        if !(0.0..1.0 / 3.0).contains(&self.vertex_margin) {
            return bad("vertex margin must lie in [0, 1/3)");
        }
        if self.tau_samples < 3 {
            return bad("tau_samples must be at least 3");
        }
        Ok(())
    }
}

/// JSON experiment file: `{"q": 5, "k": 2, "k_max": 3, "search": {"grid": 60}}`.
/// Every field is optional.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub q: Option<u32>,
    pub k: Option<u32>,
    pub k_max: Option<u32>,
    pub search: SearchParams,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Search parameters with `k_max` applied.
    pub fn params(&self) -> SearchParams {
        let mut p = self.search.clone();
        if let Some(k) = self.k_max {
            p.k_max = k;
        }
        p
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "grid+simplex")]
    GridSimplex,
    #[serde(rename = "constrained-family")]
    ConstrainedFamily,
    #[serde(rename = "closed-form")]
    ClosedForm,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::GridSimplex => "grid+simplex",
            Method::ConstrainedFamily => "constrained-family",
            Method::ClosedForm => "closed-form",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveSample {
    pub tau: f64,
    pub density: f64,
    pub radius: f64,
    pub kissing: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityCurve {
    pub group: String,
    pub samples: Vec<CurveSample>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationResult {
    pub spec: SpaceGroupSpec,
    pub best: PackingConfiguration,
    /// Kernel in barycentric coordinates of the search triangle.
    pub barycentric: [f64; 3],
    pub curve: Option<DensityCurve>,
    pub method: Method,
    pub evaluations: u64,
    pub wall_time: f64,
    pub grid_best_density: f64,
    pub restart_densities: Vec<f64>,
}

/// The search triangle with barycentric conversions.
#[derive(Debug, Clone)]
pub(crate) struct Domain {
    vertices: [Vector3<f64>; 3],
    inverse: Matrix3<f64>,
}

impl Domain {
    pub(crate) fn new(spec: &SpaceGroupSpec) -> Self {
        let vertices = *spec.fundamental_triangle();
        let m = Matrix3::from_columns(&vertices);
        let inverse = m.try_inverse().expect("search triangle is non-degenerate");
        Self { vertices, inverse }
    }

    fn kernel(&self, b: &[f64]) -> Vector3<f64> {
        let w0 = 1.0 - b[0] - b[1];
        (w0 * self.vertices[0] + b[0] * self.vertices[1] + b[1] * self.vertices[2]).normalize()
    }

    pub(crate) fn barycentric(&self, k: &Vector3<f64>) -> [f64; 3] {
        let w = self.inverse * k;
        let s = w.sum();
        [w[0] / s, w[1] / s, w[2] / s]
    }

    fn contains(&self, k: &Vector3<f64>, slack: f64) -> bool {
        let w = self.inverse * k;
        let s = w.sum();
        s > 0.0 && w.iter().all(|c| c / s >= -slack)
    }

    fn grid(&self, n: usize, margin: f64) -> Vec<[f64; 2]> {
        let mut out = Vec::new();
        for i in 0..=n {
            for j in 0..=n - i {
                let b = [i as f64 / n as f64, j as f64 / n as f64];
                out.push([margin + (1.0 - 3.0 * margin) * b[0], margin + (1.0 - 3.0 * margin) * b[1]]);
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Candidate {
    pub(crate) kernel: Vector3<f64>,
    pub(crate) tau: f64,
    pub(crate) density: f64,
}

impl Candidate {
    fn better_than(&self, other: &Candidate) -> bool {
        if (self.density - other.density).abs() > DENSITY_TIE {
            return self.density > other.density;
        }
        if (self.tau - other.tau).abs() > DENSITY_TIE {
            return self.tau < other.tau;
        }
        self.kernel.iter().zip(other.kernel.iter()).find(|(a, b)| a != b).is_some_and(|(a, b)| a < b)
    }
}

fn best_of(cands: impl IntoIterator<Item = Candidate>) -> Option<Candidate> {
    cands.into_iter().fold(None, |acc, c| match acc {
        Some(a) if !c.better_than(&a) => Some(a),
        _ => Some(c),
    })
}

fn ensure_packing_exists(spec: &SpaceGroupSpec) -> Result<()> {
    match (spec.family(), spec.q()) {
        (Family::Cyclic, Some(q)) if q < 3 => Err(Error::NoPackingExists { q }),
        _ => Ok(()),
    }
}

fn inner_tau(packer: &Packer, k: &Vector3<f64>, params: &SearchParams) -> (f64, f64, usize) {
    scan_golden_max(|t| packer.fast_density(k, t), params.tau_min, params.tau_max, params.tau_samples, 1e-12)
}

fn penalty(b: &[f64], tau: Option<(f64, &SearchParams)>) -> f64 {
    let mut v = (-b[0]).max(0.0) + (-b[1]).max(0.0) + (b[0] + b[1] - 1.0).max(0.0);
    if let Some((t, p)) = tau {
        v += (p.tau_min - t).max(0.0) + (t - p.tau_max).max(0.0);
    }
    v
}

/// Nelder–Mead rounds from `x` until a round stops improving, then the
/// active-set refinement. `fixed_tau` restricts the search to the kernel.
fn refine(
    packer: &Packer,
    domain: &Domain,
    params: &SearchParams,
    start: Candidate,
    fixed_tau: Option<f64>,
) -> (Candidate, usize) {
    let opts = NelderMeadOptions { diameter_tolerance: params.simplex_tolerance, max_evaluations: params.max_evaluations };
    let objective = |x: &[f64]| -> f64 {
        let tau = fixed_tau.unwrap_or_else(|| x[2]);
        let p = penalty(x, if fixed_tau.is_some() { None } else { Some((tau, params)) });
        if p > 0.0 {
            return 1.0 + p;
        }
        -packer.fast_density(&domain.kernel(x), tau)
    };
    let b = domain.barycentric(&start.kernel);
    let mut x = vec![b[1], b[2]];
    if fixed_tau.is_none() {
        x.push(start.tau);
    }
    let h = 0.5 / params.grid as f64;
    let mut steps = vec![h, h, 0.05];
    steps.truncate(x.len());
    let mut value = objective(&x);
    let mut evals = 1;
    for _ in 0..8 {
        let m = minimize(objective, &x, &steps, opts);
        evals += m.evaluations;
        let improved = m.value < value - 1e-16;
        if m.value <= value {
            x = m.x;
            value = m.value;
        }
        if !improved {
            break;
        }
        steps.iter_mut().for_each(|s| *s = (*s * 0.2).max(1e-6));
    }
    let tau = fixed_tau.unwrap_or_else(|| x[2]);
    let mut best = Candidate { kernel: domain.kernel(&x), tau, density: -value };
    if start.better_than(&best) {
        best = start;
    }
    for window in POLISH_WINDOWS {
        let Some((k, t)) = polish::equalize(packer, &best.kernel, best.tau, fixed_tau.is_some(), window) else {
            continue;
        };
        evals += 1;
        if !domain.contains(&k, 1e-9) || t < params.tau_min || t > params.tau_max {
            continue;
        }
        let d = packer.fast_density(&k, t);
        if d >= best.density - 1e-13 {
            best = Candidate { kernel: k, tau: t, density: d };
        }
    }
    (best, evals)
}

/// Best kernel at a fixed τ.
pub(crate) fn max_over_kernel(packer: &Packer, domain: &Domain, tau: f64, params: &SearchParams) -> (Candidate, usize) {
    let grid: Vec<Candidate> = domain
        .grid(params.grid, params.vertex_margin)
        .par_iter()
        .map(|b| {
            let k = domain.kernel(b);
            Candidate { kernel: k, tau, density: packer.fast_density(&k, tau) }
        })
        .collect();
    let mut evals = grid.len();
    let top = top_candidates(&grid, params.starts);
    let refined: Vec<(Candidate, usize)> =
        top.par_iter().map(|c| refine(packer, domain, params, *c, Some(tau))).collect();
    evals += refined.iter().map(|r| r.1).sum::<usize>();
    let best = best_of(refined.into_iter().map(|r| r.0).chain(top)).expect("non-empty grid");
    (best, evals)
}

fn top_candidates(grid: &[Candidate], n: usize) -> Vec<Candidate> {
    let mut idx: Vec<usize> = (0..grid.len()).collect();
    idx.sort_by(|&a, &b| {
        if grid[a].better_than(&grid[b]) {
            std::cmp::Ordering::Less
        } else if grid[b].better_than(&grid[a]) {
            std::cmp::Ordering::Greater
        } else {
            a.cmp(&b)
        }
    });
    idx.into_iter().take(n).map(|i| grid[i]).collect()
}

fn jitter(c: &Candidate, domain: &Domain, params: &SearchParams, rng: &mut ChaCha8Rng) -> Candidate {
    let h = 0.25 / params.grid as f64;
    let b = domain.barycentric(&c.kernel);
    let mut b1 = (b[1] + rng.gen_range(-h..h)).max(0.0);
    let mut b2 = (b[2] + rng.gen_range(-h..h)).max(0.0);
    if b1 + b2 > 1.0 {
        let s = b1 + b2;
        b1 /= s;
        b2 /= s;
    }
    let tau = (c.tau * (1.0 + rng.gen_range(-0.01..0.01))).clamp(params.tau_min, params.tau_max);
    let kernel = domain.kernel(&[b1, b2]);
    Candidate { kernel, tau, density: f64::NEG_INFINITY }
}

/// Maximizes density over kernel and τ for one group.
pub fn optimize(spec: &SpaceGroupSpec, params: &SearchParams) -> Result<OptimizationResult> {
    let clock = Instant::now();
    params.validate()?;
    ensure_packing_exists(spec)?;
    let packer = Packer::new(spec)?;
    let domain = Domain::new(spec);

    let grid: Vec<(Candidate, usize)> = domain
        .grid(params.grid, params.vertex_margin)
        .par_iter()
        .map(|b| {
            let k = domain.kernel(b);
            let (tau, density, e) = inner_tau(&packer, &k, params);
            (Candidate { kernel: k, tau, density }, e)
        })
        .collect();
    let mut evals: usize = grid.iter().map(|g| g.1).sum();
    let grid: Vec<Candidate> = grid.into_iter().map(|g| g.0).collect();
    let grid_best = best_of(grid.iter().copied()).expect("non-empty grid");
    let top = top_candidates(&grid, params.starts);

    let restarts: Vec<(Candidate, usize)> = (0..params.restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(params.seed.wrapping_add(r as u64));
            let starts: Vec<Candidate> = top
                .iter()
                .map(|c| {
                    let mut j = jitter(c, &domain, params, &mut rng);
                    j.density = packer.fast_density(&j.kernel, j.tau);
                    j
                })
                .collect();
            let runs: Vec<(Candidate, usize)> =
                starts.par_iter().map(|c| refine(&packer, &domain, params, *c, None)).collect();
            let e = runs.iter().map(|r| r.1).sum();
            (best_of(runs.into_iter().map(|r| r.0)).expect("at least one start"), e)
        })
        .collect();
    evals += restarts.iter().map(|r| r.1).sum::<usize>();
    let restart_densities: Vec<f64> = restarts.iter().map(|r| r.0.density).collect();
    let hi = restart_densities.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lo = restart_densities.iter().cloned().fold(f64::INFINITY, f64::min);
    if hi - lo > RESTART_TOLERANCE {
        return Err(Error::ConvergenceFailure { best: hi, other: lo, tolerance: RESTART_TOLERANCE });
    }
    let best = best_of(restarts.iter().map(|r| r.0).chain(std::iter::once(grid_best))).expect("candidates");

    let mut config = packer.configuration(&S2RPoint::from_unit(best.kernel, 0.0), best.tau, params.k_max)?;
    let mut method = Method::GridSimplex;
    if spec.name() == GroupName::EightI2 {
        let regime = regime_8i2(params)?;
        if regime.a.density >= config.density - 1e-9 {
            config = regime.a;
            method = Method::ConstrainedFamily;
        }
    }
    let barycentric = clamp_barycentric(domain.barycentric(config.kernel.direction()));
    Ok(OptimizationResult {
        spec: spec.clone(),
        best: config,
        barycentric,
        curve: None,
        method,
        evaluations: evals as u64,
        wall_time: clock.elapsed().as_secs_f64(),
        grid_best_density: grid_best.density,
        restart_densities,
    })
}

fn clamp_barycentric(b: [f64; 3]) -> [f64; 3] {
    let c = b.map(|x| x.max(0.0));
    let s: f64 = c.iter().sum();
    c.map(|x| x / s)
}

/// Runs [`optimize`] for each `q`.
pub fn optimize_over_q(name: GroupName, qs: &[u32], k: Option<u32>, params: &SearchParams) -> Result<Vec<OptimizationResult>> {
    if !name.family().has_parameter() {
        return Err(Error::InvalidParameter(format!("{name} has no parameter q")));
    }
    qs.iter()
        .map(|&q| {
            let spec = SpaceGroupSpec::new(name, Some(q), k)?;
            optimize(&spec, params)
        })
        .collect()
}

/// Index of the densest result.
pub fn argmax(results: &[OptimizationResult]) -> Option<usize> {
    (0..results.len()).fold(None, |acc, i| match acc {
        Some(j) if results[j].best.density >= results[i].best.density => Some(j),
        _ => Some(i),
    })
}

/// Maximal density over the kernel at `n` equally spaced values of τ.
/// For 8.I.2 the requirement family is used wherever it beats the search.
pub fn density_curve(spec: &SpaceGroupSpec, tau_lo: f64, tau_hi: f64, n: usize, params: &SearchParams) -> Result<DensityCurve> {
    if !(tau_lo > 0.0 && tau_lo < tau_hi && tau_hi.is_finite()) {
        return Err(Error::InvalidParameter(format!("need 0 < tau_lo < tau_hi, got [{tau_lo}, {tau_hi}]")));
    }
    if n < 2 {
        return Err(Error::InvalidParameter("a curve needs at least 2 samples".into()));
    }
    params.validate()?;
    ensure_packing_exists(spec)?;
    let packer = Packer::new(spec)?;
    let domain = Domain::new(spec);
    let family = if spec.name() == GroupName::EightI2 { Some(RequirementFamily::new(params)?) } else { None };
    let taus: Vec<f64> = (0..n)
        .map(|i| if i == n - 1 { tau_hi } else { tau_lo + (tau_hi - tau_lo) * i as f64 / (n - 1) as f64 })
        .collect();
    let samples: Vec<Result<CurveSample>> = taus
        .par_iter()
        .map(|&tau| {
            let (mut best, _) = max_over_kernel(&packer, &domain, tau, params);
            if let Some(fam) = &family {
                if let Ok(k) = fam.kernel(tau) {
                    let d = packer.fast_density(&k, tau);
                    if d >= best.density - 1e-12 {
                        best = Candidate { kernel: k, tau, density: d };
                    }
                }
            }
            let cfg = packer.configuration(&S2RPoint::from_unit(best.kernel, 0.0), tau, params.k_max)?;
            Ok(CurveSample { tau, density: cfg.density, radius: cfg.radius, kissing: cfg.kissing })
        })
        .collect();
    Ok(DensityCurve { group: spec.label(), samples: samples.into_iter().collect::<Result<_>>()? })
}

/// `K^{opt}` of 8.I.1.
pub fn kernel_8i1() -> Vector3<f64> {
    let s5 = 5f64.sqrt();
    let y = 0.5 * ((s5 - 1.0) / s5).sqrt();
    Vector3::new(((5.0 + s5) / 10.0).sqrt(), y, y)
}

/// `R^{opt}` of 8.I.1.
pub fn radius_8i1() -> f64 {
    ((5.0 + 5f64.sqrt()) / 10.0).sqrt().acos()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormReport {
    pub kernel: [f64; 3],
    pub radius: f64,
    pub tau: f64,
    pub density: f64,
    pub ball_volume: f64,
    pub kissing: usize,
    /// `d(K,K^{g₂}) − d(K,K^{g₁})`.
    pub equal_distance_residual: f64,
    /// `(√3/2)·d(K,K^{g₂}) − d(K,K^{g₁})`.
    pub scaled_distance_residual: f64,
    /// `d(K,K^{g₁}) − 2R` and `d(K,K^τ) − 2R`.
    pub touching_residuals: [f64; 2],
    pub optimizer_kernel_angle: f64,
    pub optimizer_radius_gap: f64,
    pub optimizer_density_gap: f64,
    pub optimizer_kernel: [f64; 3],
}

/// Evaluates the closed-form 8.I.1 optimum and compares it with
/// [`optimize`].
pub fn closed_form_check_8i1(params: &SearchParams) -> Result<ClosedFormReport> {
    let spec = SpaceGroupSpec::catalog(GroupName::EightI1);
    let k = kernel_8i1();
    let r = radius_8i1();
    let tau = 2.0 * r;
    let cfg = Packer::new(&spec)?.configuration(&S2RPoint::from_unit(k, 0.0), tau, params.k_max)?;
    let p = S2RPoint::from_unit(k, 0.0);
    let d1 = distance(&p, &spec.word_isometry(&[0], tau).apply(&p));
    let d2 = distance(&p, &spec.word_isometry(&[1], tau).apply(&p));
    let dt = distance(&p, &Isometry::translation(tau).apply(&p));
    let opt = optimize(&spec, params)?;
    let ok = opt.best.kernel.direction();
    Ok(ClosedFormReport {
        kernel: [k.x, k.y, k.z],
        radius: r,
        tau,
        density: cfg.density,
        ball_volume: ball_volume(r)?,
        kissing: cfg.kissing,
        equal_distance_residual: d2 - d1,
        scaled_distance_residual: 0.75f64.sqrt() * d2 - d1,
        touching_residuals: [d1 - 2.0 * r, dt - 2.0 * r],
        optimizer_kernel_angle: crate::geometry::spherical_angle(ok, &k),
        optimizer_radius_gap: opt.best.radius - r,
        optimizer_density_gap: opt.best.density - cfg.density,
        optimizer_kernel: [ok.x, ok.y, ok.z],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> SearchParams {
        SearchParams { grid: 16, ..SearchParams::default() }
    }

    #[test]
    fn cyclic_three() {
        let spec = SpaceGroupSpec::new(GroupName::OneQI1, Some(3), None).unwrap();
        let r = optimize(&spec, &quick()).unwrap();
        assert!((r.best.radius - PI / 3.0).abs() < 1e-8, "{}", r.best.radius);
        assert!((r.best.density - 0.5094597).abs() < 1e-6);
        assert!(r.best.density >= r.grid_best_density);
    }

    #[test]
    fn small_q_has_no_packing() {
        for q in [1, 2] {
            let spec = SpaceGroupSpec::new(GroupName::OneQI1, Some(q), None).unwrap();
            assert!(matches!(optimize(&spec, &quick()), Err(Error::NoPackingExists { q: got }) if got == q));
        }
    }

    #[test]
    fn tetrahedral_closed_form() {
        let spec = SpaceGroupSpec::catalog(GroupName::EightI1);
        let r = optimize(&spec, &quick()).unwrap();
        let angle = crate::geometry::spherical_angle(r.best.kernel.direction(), &kernel_8i1());
        assert!(angle < 1e-6, "{angle}");
        assert!((r.best.radius - radius_8i1()).abs() < 1e-9);
    }

    #[test]
    fn experiment_config() {
        let c = ExperimentConfig::from_json(r#"{"q": 5, "k_max": 4, "search": {"grid": 12}}"#).unwrap();
        assert_eq!(c.q, Some(5));
        assert_eq!(c.params().k_max, 4);
        assert_eq!(c.params().grid, 12);
        assert_eq!(c.params().restarts, 3);
        assert!(ExperimentConfig::from_json(r#"{"qq": 5}"#).is_err());
    }

    #[test]
    fn rejects_bad_params() {
        let spec = SpaceGroupSpec::catalog(GroupName::EightI1);
        let p = SearchParams { tau_min: 3.0, tau_max: 1.0, ..quick() };
        assert!(matches!(optimize(&spec, &p), Err(Error::InvalidParameter(_))));
        assert!(density_curve(&spec, 1.0, 1.2, 1, &quick()).is_err());
    }
}
