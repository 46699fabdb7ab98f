//! Builds every catalog point group and lists its order and signature.

use s2xr_packing::groups::{build_point_group, GroupName, SpaceGroupSpec};

fn main() -> s2xr_packing::Result<()> {
    for name in GroupName::ALL {
        let spec = SpaceGroupSpec::catalog(name);
        let pg = build_point_group(&spec)?;
        println!(
            "{:<20} {:<12} order {:>3}  generators {}  relators {}",
            spec.label(),
            spec.fractional_parts_string(),
            pg.len(),
            spec.generators().len(),
            spec.relators().len()
        );
    }
    Ok(())
}
