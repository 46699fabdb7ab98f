use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use s2xr_packing::geometry::{ball_volume, ball_volume_series};
use s2xr_packing::mesh::{orbit_mesh, Mesh};
use s2xr_packing::optimize::{density_curve, optimize, ExperimentConfig, SearchParams};
use s2xr_packing::report::{compute_table, optimization_text, sig17, write_curve_csv, write_table, Format, TablePlan};
use s2xr_packing::{Error, GroupName, SpaceGroupSpec};

#[derive(Parser)]
#[command(name = "s2xr", version, about = "Geodesic ball packings of S2xR screw-motion groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct Search {
    /// Barycentric grid resolution
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long)]
    kmax: Option<u32>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    restarts: Option<usize>,
    /// JSON file overriding q, k, k_max and search parameters
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct Bracket {
    #[arg(long = "tau-min")]
    tau_min: Option<f64>,
    #[arg(long = "tau-max")]
    tau_max: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Optimize every catalog group and write the results table
    Table {
        #[command(flatten)]
        search: Search,
        #[command(flatten)]
        bracket: Bracket,
        #[arg(long, default_value = "text")]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Optimize one group
    Optimize {
        #[arg(long)]
        group: String,
        #[arg(long)]
        q: Option<u32>,
        #[arg(long)]
        k: Option<u32>,
        #[command(flatten)]
        search: Search,
        #[command(flatten)]
        bracket: Bracket,
        #[arg(long, default_value = "text")]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Maximal density over the kernel as a function of tau, as CSV
    Curve {
        #[arg(long)]
        group: String,
        #[arg(long)]
        q: Option<u32>,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long = "tau-min")]
        tau_min: f64,
        #[arg(long = "tau-max")]
        tau_max: f64,
        #[arg(long, default_value_t = 100)]
        n: usize,
        #[command(flatten)]
        search: Search,
        #[arg(long, default_value = "csv")]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Volume of a geodesic ball
    Volume { rho: f64 },
    /// Geodesic sphere mesh as OBJ, optionally at the optimal orbit
    Mesh {
        #[arg(long)]
        group: Option<String>,
        #[arg(long)]
        q: Option<u32>,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        rho: Option<f64>,
        /// Altitude bands of the sphere mesh
        #[arg(long = "mesh-grid", default_value_t = 32)]
        mesh_grid: usize,
        #[command(flatten)]
        search: Search,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

struct Resolved {
    params: SearchParams,
    q: Option<u32>,
    k: Option<u32>,
}

fn resolve(search: &Search, bracket: Option<&Bracket>, q: Option<u32>, k: Option<u32>) -> Result<Resolved, Error> {
    let config = match &search.config {
        Some(path) => ExperimentConfig::from_json(&std::fs::read_to_string(path)?)?,
        None => ExperimentConfig::default(),
    };
    let mut params = config.params();
    if let Some(g) = search.grid {
        params.grid = g;
    }
    if let Some(kmax) = search.kmax {
        params.k_max = kmax;
    }
    if let Some(s) = search.seed {
        params.seed = s;
    }
    if let Some(r) = search.restarts {
        params.restarts = r;
    }
    if let Some(b) = bracket {
        if let Some(t) = b.tau_min {
            params.tau_min = t;
        }
        if let Some(t) = b.tau_max {
            params.tau_max = t;
        }
    }
    params.validate()?;
    Ok(Resolved { params, q: q.or(config.q), k: k.or(config.k) })
}

fn spec_for(group: &str, q: Option<u32>, k: Option<u32>) -> Result<SpaceGroupSpec, Error> {
    let name: GroupName = group.parse()?;
    SpaceGroupSpec::new(name, q, k)
}

fn output(out: &Option<PathBuf>) -> Result<Box<dyn Write>, Error> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Table { search, bracket, format, out } => {
            let format: Format = format.parse()?;
            let r = resolve(&search, Some(&bracket), None, None)?;
            let table = compute_table(&TablePlan::default(), &r.params);
            let mut w = output(&out)?;
            write_table(&table, format, &mut w)?;
            w.flush()?;
            if table.failures() > 0 {
                return Ok(ExitCode::from(2));
            }
        }
        Command::Optimize { group, q, k, search, bracket, format, out } => {
            let format: Format = format.parse()?;
            let r = resolve(&search, Some(&bracket), q, k)?;
            let spec = spec_for(&group, r.q, r.k)?;
            let result = optimize(&spec, &r.params)?;
            let mut w = output(&out)?;
            match format {
                Format::Json => {
                    serde_json::to_writer_pretty(&mut w, &result)?;
                    writeln!(w)?;
                }
                _ => w.write_all(optimization_text(&result).as_bytes())?,
            }
            w.flush()?;
        }
        Command::Curve { group, q, k, tau_min, tau_max, n, search, format, out } => {
            let format: Format = format.parse()?;
            let r = resolve(&search, None, q, k)?;
            let spec = spec_for(&group, r.q, r.k)?;
            let curve = density_curve(&spec, tau_min, tau_max, n, &r.params)?;
            let mut w = output(&out)?;
            match format {
                Format::Json => {
                    serde_json::to_writer_pretty(&mut w, &curve)?;
                    writeln!(w)?;
                }
                _ => write_curve_csv(&curve, &mut w)?,
            }
            w.flush()?;
        }
        Command::Volume { rho } => {
            let quad = ball_volume(rho)?;
            let series = ball_volume_series(rho)?;
            println!("rho        {}", sig17(rho));
            println!("quadrature {}", sig17(quad));
            println!("series     {}", sig17(series));
        }
        Command::Mesh { group, q, k, rho, mesh_grid, search, out } => {
            let mesh = match group {
                Some(g) => {
                    let r = resolve(&search, None, q, k)?;
                    let spec = spec_for(&g, r.q, r.k)?;
                    let result = optimize(&spec, &r.params)?;
                    orbit_mesh(&result.best, rho, mesh_grid)?
                }
                None => {
                    let rho = rho.ok_or_else(|| Error::InvalidParameter("mesh needs --rho or --group".into()))?;
                    Mesh::sphere(rho, mesh_grid)?
                }
            };
            let mut w = output(&out)?;
            mesh.write_obj(&mut w)?;
            w.flush()?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = std::env::var("S2XR_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            let bad_arguments = matches!(
                e,
                Error::UnknownGroup(_)
                    | Error::UnknownFamily(_)
                    | Error::InvalidParameter(_)
                    | Error::Domain { .. }
                    | Error::NoPackingExists { .. }
            );
            ExitCode::from(if bad_arguments { 3 } else { 1 })
        }
    }
}
