//! Full results table over the catalog, as text.

use s2xr_packing::optimize::SearchParams;
use s2xr_packing::report::{compute_table, write_table, Format, TablePlan};

fn main() -> s2xr_packing::Result<()> {
    let table = compute_table(&TablePlan::default(), &SearchParams::default());
    write_table(&table, Format::Text, std::io::stdout().lock())
}
