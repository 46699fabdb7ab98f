//! Packing radius, density and touching neighbours for a hand-picked
//! kernel point.

use nalgebra::Vector3;
use s2xr_packing::groups::{GroupName, SpaceGroupSpec};
use s2xr_packing::packing::density;
use s2xr_packing::S2RPoint;

fn main() -> s2xr_packing::Result<()> {
    let spec = SpaceGroupSpec::catalog(GroupName::NineI1);
    let kernel = S2RPoint::new(Vector3::new(0.9, 0.3, 0.2), 0.0)?;
    let cfg = density(&spec, 0.8, &kernel, 2)?;
    println!("{} at tau = {}", spec.label(), cfg.tau);
    println!("radius  {:.10}", cfg.radius);
    println!("density {:.10}", cfg.density);
    println!("kissing {}", cfg.kissing);
    for n in &cfg.argmin_elements {
        println!("  word {:?} lattice {:+} distance {:.10}", n.element.word, n.element.lattice, n.distance);
    }
    Ok(())
}
