//! Density curve of a group as CSV on stdout.
//! Usage: `density_curve [GROUP] [TAU_MIN] [TAU_MAX] [N]`.

use s2xr_packing::optimize::{density_curve, SearchParams};
use s2xr_packing::report::write_curve_csv;
use s2xr_packing::{Error, GroupName, SpaceGroupSpec};

fn main() -> s2xr_packing::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let arg = |i: usize, default: f64| -> s2xr_packing::Result<f64> {
        args.get(i).map_or(Ok(default), |s| s.parse().map_err(|_| Error::InvalidParameter(s.clone())))
    };
    let name: GroupName = args.first().map_or("8.I.1", String::as_str).parse()?;
    let n = arg(3, 25.0)? as usize;
    let curve = density_curve(&SpaceGroupSpec::catalog(name), arg(1, 0.6)?, arg(2, 3.0)?, n, &SearchParams::default())?;
    write_curve_csv(&curve, std::io::stdout().lock())
}
