mod angles;
mod config;
mod report;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use hyperbound::census::{run_census, run_octahedral_census, write_csv, write_json, CensusRecord};
use hyperbound::geosolve::{solve, solve_mgk_ansatz, CuspMarks, GeometricSolution};
use hyperbound::kojima::canonize_with;
use hyperbound::tetshape::{
    classify_vertices, volume, volume_dilog, volume_integral, volume_params, DihedralAngles,
    TetError,
};
use hyperbound::tricomb::{boundary_pattern, Pairing};

use config::Config;

#[derive(Parser)]
#[command(
    name = "hyperbound",
    version,
    about = "Hyperbolic tetrahedra, triangulations and a census of manifolds with geodesic boundary"
)]
struct Cli {
    /// TOML file with [solver], [canonize] and [filters] sections.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Volume of a tetrahedron from its dihedral angles A B C D E F
    /// (edges 01 02 03 23 13 12); one angle means a regular tetrahedron.
    Volume {
        #[arg(required = true, num_args = 1..=6)]
        angles: Vec<String>,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
        /// Also print vertex classes and the k/z parameters.
        #[arg(long)]
        diagnostics: bool,
    },
    /// Solve the hyperbolicity equations of one triangulation.
    Solve {
        /// Isomorphism signature, or a file in the pairing text format.
        pairing: String,
        #[arg(long, value_enum, default_value_t = Marks::Auto)]
        marks: Marks,
    },
    /// Solve, then move to the canonical decomposition.
    Canonize {
        pairing: String,
        #[arg(long, value_enum, default_value_t = Marks::Auto)]
        marks: Marks,
    },
    /// Census of manifolds of complexity n with geodesic boundary.
    Census {
        n: usize,
        /// Allow n = 3.
        #[arg(long)]
        extended: bool,
        /// Where census-<n>.csv and census-<n>.json are written.
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        /// Directory of the resumable result log.
        #[arg(long, env = "HYPERBOUND_LOG_DIR")]
        log_dir: Option<PathBuf>,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Relative handlebodies built from n regular ideal octahedra.
    Octcensus {
        n: usize,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Integral,
    Dilog,
    Auto,
}

#[derive(Clone, Copy, ValueEnum)]
enum Marks {
    /// Toric cusps when the boundary has tori, otherwise none.
    Auto,
    None,
    Cusps,
    /// All angles zero: regular ideal octahedra.
    Octahedral,
}

enum Failure {
    Input(String),
    Stage(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Stage(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Stage(m) => m,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message().replace('\n', " "));
            ExitCode::from(f.code())
        }
    }
}

fn run(cli: Cli) -> Result<String, Failure> {
    let config = Config::load(cli.config.as_deref()).map_err(Failure::Input)?;
    match cli.command {
        Command::Volume {
            angles,
            method,
            diagnostics,
        } => cmd_volume(&angles, method, diagnostics),
        Command::Solve { pairing, marks } => {
            let p = load_pairing(&pairing)?;
            let sol = geometrize(&p, marks, &config)?;
            Ok(report::solution(&sol))
        }
        Command::Canonize { pairing, marks } => {
            let p = load_pairing(&pairing)?;
            let sol = geometrize(&p, marks, &config)?;
            let d = canonize_with(&sol, &config.canonize())
                .map_err(|e| Failure::Stage(format!("canonize: {e}")))?;
            Ok(report::decomposition(&d))
        }
        Command::Census {
            n,
            extended,
            out_dir,
            log_dir,
            threads,
        } => {
            let mut c = config.census();
            c.extended = extended;
            c.log_dir = log_dir.clone();
            c.threads = threads;
            let out = run_census(n, &c).map_err(|e| {
                let log = log_dir
                    .map(|d| format!(" (partial log in {})", d.display()))
                    .unwrap_or_default();
                match e {
                    hyperbound::census::CensusError::UnsupportedSize { .. } => {
                        Failure::Input(e.to_string())
                    }
                    _ => Failure::Stage(format!("census: {e}{log}")),
                }
            })?;
            write_outputs(&out_dir, &format!("census-{n}"), &out.records, &out)?;
            Ok(report::census(&out))
        }
        Command::Octcensus { n, out_dir } => {
            let records = run_octahedral_census(n).map_err(|e| Failure::Input(e.to_string()))?;
            write_outputs(&out_dir, &format!("octcensus-{n}"), &records, &records)?;
            Ok(report::records(&records))
        }
    }
}

fn write_outputs<T: serde::Serialize>(
    dir: &Path,
    stem: &str,
    records: &[CensusRecord],
    full: &T,
) -> Result<(), Failure> {
    std::fs::create_dir_all(dir).map_err(|e| Failure::Stage(format!("{}: {e}", dir.display())))?;
    write_csv(records, &dir.join(format!("{stem}.csv")))
        .map_err(|e| Failure::Stage(e.to_string()))?;
    write_json(full, &dir.join(format!("{stem}.json"))).map_err(|e| Failure::Stage(e.to_string()))
}

fn tet_failure(e: TetError, angles: &[f64; 6]) -> Failure {
    match e {
        TetError::Quadrature(_) => Failure::Stage(format!("volume: {e}")),
        _ if angles.iter().all(|&a| a == 0.0) => Failure::Input(format!(
            "invalid angles: {e}; all-zero angles describe the regular ideal octahedron, see `hyperbound octcensus`"
        )),
        _ => Failure::Input(format!("invalid angles: {e}")),
    }
}

fn cmd_volume(args: &[String], method: Method, diagnostics: bool) -> Result<String, Failure> {
    let raw = angles::parse_angles(args).map_err(Failure::Input)?;
    let t = DihedralAngles::new(raw).map_err(|e| tet_failure(e, &raw))?;
    let v = match method {
        Method::Integral => volume_integral(&t),
        Method::Dilog => volume_dilog(&t),
        Method::Auto => volume(&t),
    }
    .map_err(|e| tet_failure(e, &raw))?;
    let mut out = format!("{v:.9}\n");
    if diagnostics {
        let classes = classify_vertices(&t).map_err(|e| tet_failure(e, &raw))?;
        let p = volume_params(&t).map_err(|e| tet_failure(e, &raw))?;
        let _ = writeln!(out, "vertices: {classes:?}");
        let _ = writeln!(
            out,
            "k1 = {:.12}\nk2 = {:.12}\nk3 = {:.12}\nk4 = {:.12}",
            p.k1, p.k2, p.k3, p.k4
        );
        let _ = writeln!(out, "z1 = {:.12}\nz2 = {:.12}", p.z1, p.z2);
    }
    Ok(out)
}

fn load_pairing(arg: &str) -> Result<Pairing, Failure> {
    let path = Path::new(arg);
    if path.is_file() {
        let text =
            std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{arg}: {e}")))?;
        return Pairing::from_text(&text).map_err(|e| Failure::Input(format!("{arg}: {e}")));
    }
    Pairing::from_signature(arg).map_err(|e| Failure::Input(format!("pairing {arg:?}: {e}")))
}

fn geometrize(p: &Pairing, marks: Marks, config: &Config) -> Result<GeometricSolution, Failure> {
    let toric = boundary_pattern(p)
        .map_err(|e| Failure::Input(e.to_string()))?
        .toric;
    let stage = |e: String| Failure::Stage(format!("solve: {e}"));
    match marks {
        Marks::Auto if toric > 0 => {
            solve_mgk_ansatz(p, &config.solver).map_err(|e| stage(e.to_string()))
        }
        Marks::Auto | Marks::None => {
            solve(p, &CuspMarks::none(), &config.solver).map_err(|e| stage(e.to_string()))
        }
        Marks::Cusps => {
            let m = CuspMarks::toric_cusps(p).map_err(|e| Failure::Input(e.to_string()))?;
            solve(p, &m, &config.solver).map_err(|e| stage(e.to_string()))
        }
        Marks::Octahedral => {
            solve(p, &CuspMarks::all_zero(p), &config.solver).map_err(|e| stage(e.to_string()))
        }
    }
}
