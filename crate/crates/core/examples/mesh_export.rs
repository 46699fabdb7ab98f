//! Writes the optimal 8.I.1 ball and its touching neighbours as an OBJ file.
//! Usage: `mesh_export [PATH]`.

use std::fs::File;
use std::io::BufWriter;

use s2xr_packing::mesh::orbit_mesh;
use s2xr_packing::optimize::{optimize, SearchParams};
use s2xr_packing::{GroupName, SpaceGroupSpec};

fn main() -> s2xr_packing::Result<()> {
    let path = std::env::args().nth(1).unwrap_or_else(|| "orbit_8i1.obj".into());
    let result = optimize(&SpaceGroupSpec::catalog(GroupName::EightI1), &SearchParams::default())?;
    let mesh = orbit_mesh(&result.best, None, 24)?;
    mesh.write_obj(BufWriter::new(File::create(&path)?))?;
    println!("{} balls, {} vertices, {} faces -> {path}", 1 + result.best.kissing, mesh.vertices.len(), mesh.faces.len());
    Ok(())
}
