//! Closed-form optimum of 8.I.1 checked against the numerical search.

use s2xr_packing::optimize::{closed_form_check_8i1, SearchParams};

fn main() -> s2xr_packing::Result<()> {
    let r = closed_form_check_8i1(&SearchParams::default())?;
    println!("kernel             {:?}", r.kernel);
    println!("radius             {:.15}", r.radius);
    println!("tau                {:.15}", r.tau);
    println!("ball volume        {:.15}", r.ball_volume);
    println!("density            {:.15}", r.density);
    println!("kissing            {}", r.kissing);
    println!("touching residuals {:.1e} {:.1e}", r.touching_residuals[0], r.touching_residuals[1]);
    println!("optimizer kernel   {:?}", r.optimizer_kernel);
    println!("kernel angle       {:.1e}", r.optimizer_kernel_angle);
    println!("radius gap         {:.1e}", r.optimizer_radius_gap);
    Ok(())
}
