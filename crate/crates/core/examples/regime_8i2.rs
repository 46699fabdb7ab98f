//! The two touching regimes of 8.I.2 and the density curve between them.

use s2xr_packing::optimize::{density_curve, regime_8i2, SearchParams};
use s2xr_packing::{GroupName, SpaceGroupSpec};

fn main() -> s2xr_packing::Result<()> {
    let params = SearchParams::default();
    let r = regime_8i2(&params)?;
    for (label, tau, cfg) in [("a", r.tau_a, &r.a), ("b", r.tau_b, &r.b)] {
        let k = cfg.kernel.direction();
        println!(
            "regime {label}: tau {tau:.6}  R {:.6}  density {:.6}  kissing {}  K ({:.5}, {:.5}, {:.5})",
            cfg.radius, cfg.density, cfg.kissing, k.x, k.y, k.z
        );
    }
    let curve = density_curve(&SpaceGroupSpec::catalog(GroupName::EightI2), r.tau_a, r.tau_b, 9, &params)?;
    for s in &curve.samples {
        println!("  tau {:.4}  density {:.6}  kissing {}", s.tau, s.density, s.kissing);
    }
    Ok(())
}
