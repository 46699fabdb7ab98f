//! Optimizes one group. Usage: `optimize_group [GROUP] [Q]`.

use s2xr_packing::optimize::{optimize, SearchParams};
use s2xr_packing::report::optimization_text;
use s2xr_packing::{GroupName, SpaceGroupSpec};

fn main() -> s2xr_packing::Result<()> {
    let mut args = std::env::args().skip(1);
    let name: GroupName = args.next().as_deref().unwrap_or("9.I.2").parse()?;
    let q = args.next().map(|s| s.parse::<u32>()).transpose().map_err(|e| s2xr_packing::Error::InvalidParameter(e.to_string()))?;
    let spec = SpaceGroupSpec::new(name, q.or(name.default_q()), None)?;
    let result = optimize(&spec, &SearchParams::default())?;
    print!("{}", optimization_text(&result));
    Ok(())
}
