//! Geodesic ball volume: quadrature against the power series.

use s2xr_packing::geometry::{ball_volume, ball_volume_series};

fn main() -> s2xr_packing::Result<()> {
    println!("{:>8} {:>20} {:>20} {:>10}", "rho", "quadrature", "series", "diff");
    for rho in [0.1, 0.5, 1.0, std::f64::consts::FRAC_PI_3, 2.0, 3.0] {
        let q = ball_volume(rho)?;
        let s = ball_volume_series(rho)?;
        println!("{rho:>8.4} {q:>20.16} {s:>20.16} {:>10.1e}", (q - s).abs());
    }
    Ok(())
}
