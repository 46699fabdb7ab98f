//! Globally adaptive Gauss–Kronrod (G7/K15) integration.
//!
//! Intervals are bisected in order of decreasing error estimate until the
//! summed estimate drops below the absolute tolerance. The nested form used
//! for ball volumes simply calls [`integrate`] from inside the integrand and
//! shares one evaluation budget.

use std::cell::Cell;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.000_000_000_000_000_000_000_000_000_000_0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];

// Gauss weights for the odd Kronrod nodes (1, 3, 5) and the centre.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn kronrod15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(centre);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (j, &x) in XGK.iter().take(7).enumerate() {
        let dx = half * x;
        let pair = f(centre - dx) + f(centre + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    let value = kronrod * half;
    let error = ((kronrod - gauss) * half).abs();
    (value, error)
}

/// Integrates `f` over `[a, b]` to absolute tolerance `abs_tol`.
pub fn integrate<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    max_evaluations: usize,
) -> Result<Integral> {
    if a == b {
        return Ok(Integral { value: 0.0, error: 0.0, evaluations: 0 });
    }
    let mut evaluations = 15;
    let (value, error) = kronrod15(&mut f, a, b);
    let mut panels = vec![Panel { a, b, value, error }];
    loop {
        let total_error: f64 = panels.iter().map(|p| p.error).sum();
        if total_error <= abs_tol {
            break;
        }
        if evaluations + 30 > max_evaluations {
            return Err(Error::Quadrature { tolerance: abs_tol, evaluations });
        }
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i)
            .expect("at least one panel");
        let p = panels.swap_remove(worst);
        let mid = 0.5 * (p.a + p.b);
        if mid <= p.a || mid >= p.b {
            // Interval exhausted at machine precision; keep its estimate.
            panels.push(Panel { error: 0.0, ..p });
            continue;
        }
        let (lv, le) = kronrod15(&mut f, p.a, mid);
        let (rv, re) = kronrod15(&mut f, mid, p.b);
        evaluations += 30;
        panels.push(Panel { a: p.a, b: mid, value: lv, error: le });
        panels.push(Panel { a: mid, b: p.b, value: rv, error: re });
    }
    let value = panels.iter().map(|p| p.value).sum();
    let error = panels.iter().map(|p| p.error).sum();
    Ok(Integral { value, error, evaluations })
}

/// Nested integral `∫_a^b ∫_{lo(x)}^{hi(x)} f(x, y) dy dx` with a shared
/// evaluation budget. The inner tolerance is scaled by the outer interval
/// length so the inner errors cannot dominate the outer estimate.
pub fn integrate_2d<F, L, H>(
    f: F,
    a: f64,
    b: f64,
    lo: L,
    hi: H,
    abs_tol: f64,
    max_evaluations: usize,
) -> Result<Integral>
where
    F: Fn(f64, f64) -> f64,
    L: Fn(f64) -> f64,
    H: Fn(f64) -> f64,
{
    let used = Cell::new(0usize);
    let failed = Cell::new(false);
    let inner_tol = 0.1 * abs_tol / (b - a).abs().max(1.0);
    let outer = integrate(
        |x| {
            let budget = max_evaluations.saturating_sub(used.get());
            match integrate(|y| f(x, y), lo(x), hi(x), inner_tol, budget) {
                Ok(r) => {
                    used.set(used.get() + r.evaluations);
                    r.value
                }
                Err(_) => {
                    failed.set(true);
                    0.0
                }
            }
        },
        a,
        b,
        0.9 * abs_tol,
        max_evaluations,
    )?;
    if failed.get() || used.get() > max_evaluations {
        return Err(Error::Quadrature { tolerance: abs_tol, evaluations: used.get() });
    }
    Ok(Integral { evaluations: used.get() + outer.evaluations, ..outer })
}
