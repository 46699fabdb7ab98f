//! One-dimensional maximization.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for a maximum of `f` on `[a, b]`, stopping when
/// the bracket is narrower than `tol`. Returns `(x, f(x), evaluations)`.
pub fn golden_max<F: FnMut(f64) -> f64>(mut f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64, usize) {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut evals = 2;
    while (b - a).abs() > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        evals += 1;
    }
    if fc >= fd {
        (c, fc, evals)
    } else {
        (d, fd, evals)
    }
}

/// Uniform scan with `samples` points followed by golden-section search in
/// the cell around the best sample.
pub fn scan_golden_max<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, samples: usize, tol: f64) -> (f64, f64, usize) {
    let n = samples.max(3);
    let step = (b - a) / (n - 1) as f64;
    let mut best = (a, f64::NEG_INFINITY);
    for i in 0..n {
        let x = a + step * i as f64;
        let fx = f(x);
        if fx > best.1 {
            best = (x, fx);
        }
    }
    let lo = (best.0 - step).max(a);
    let hi = (best.0 + step).min(b);
    let (x, fx, e) = golden_max(&mut f, lo, hi, tol);
    if fx >= best.1 {
        (x, fx, n + e)
    } else {
        (best.0, best.1, n + e)
    }
}
