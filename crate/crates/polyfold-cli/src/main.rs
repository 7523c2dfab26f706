//! polyfold: source unfoldings, geodesic distances, and geodesic Voronoi
//! diagrams on convex polytope boundaries.
//!
//! Exit codes: 0 success, 1 failed verification checks, 2 invalid input,
//! 3 numeric failure.

use clap::{Args, Parser, Subcommand};
use polyfold_core::complex::FacetComplex;
use polyfold_core::geodesic::{geodesic_voronoi, geodesic_distance, shortest_paths_to};
use polyfold_core::io;
use polyfold_core::unfolder::Unfolder;
use polyfold_core::verify::{verify_complex, VerifyOptions};
use polyfold_core::{Error, Result, Tolerances};
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "polyfold", version, about = "Source unfoldings of convex polytope boundaries")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Unfold the surface from a source point and write the foldout
    Unfold(UnfoldArgs),
    /// Geodesic distance (and optionally the shortest paths) to a target
    Distance(DistanceArgs),
    /// Geodesic Voronoi diagram of several sources
    Voronoi(VoronoiArgs),
    /// Run the invariant suite against an input
    Verify(VerifyArgs),
}

#[derive(Args)]
struct Common {
    /// Input polytope (hpoly) or glued complex JSON
    #[arg(long)]
    input: PathBuf,
    /// Tolerance override, e.g. --tol pt=1e-8 (keys: pt, rank, kkt, slack,
    /// int, rad, ang, cap); repeatable
    #[arg(long = "tol", value_name = "KEY=VALUE")]
    tol: Vec<String>,
}

#[derive(Args)]
struct UnfoldArgs {
    #[command(flatten)]
    common: Common,
    /// Source point: "facet=<id>;point=[...]"
    #[arg(long)]
    source: String,
    /// Foldout JSON output path
    #[arg(long)]
    out: PathBuf,
    /// SVG rendering of the foldout (surface dimension 2 only)
    #[arg(long)]
    svg: Option<PathBuf>,
    /// OFF boundary mesh of the foldout ball (surface dimension 3 only)
    #[arg(long)]
    off: Option<PathBuf>,
    /// Cut locus JSON output path
    #[arg(long = "cut-locus")]
    cut_locus: Option<PathBuf>,
    /// Vistal tree JSON output path
    #[arg(long)]
    vistal: Option<PathBuf>,
}

#[derive(Args)]
struct DistanceArgs {
    #[command(flatten)]
    common: Common,
    /// Source point: "facet=<id>;point=[...]"
    #[arg(long)]
    source: String,
    /// Target point: "facet=<id>;point=[...]"
    #[arg(long)]
    target: String,
    /// Also print every shortest path with its facet sequence
    #[arg(long)]
    paths: bool,
}

#[derive(Args)]
struct VoronoiArgs {
    #[command(flatten)]
    common: Common,
    /// Source points, one "facet=<id>;point=[...]" each; repeatable
    #[arg(long = "sources", required = true)]
    sources: Vec<String>,
    /// Diagram JSON output path
    #[arg(long)]
    out: PathBuf,
    /// SVG overlay of the diagram (surface dimension 2 only)
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: Common,
    /// Source point; defaults to the center of the first facet
    #[arg(long)]
    source: Option<String>,
    /// Facet-sequence length cap for the brute-force oracle
    #[arg(long = "oracle-max-len", default_value_t = 4)]
    oracle_max_len: usize,
    /// Random targets for the oracle comparison
    #[arg(long, default_value_t = 100)]
    samples: usize,
    /// Seed for all verification sampling
    #[arg(long, default_value_t = 7)]
    seed: u64,
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_input_error() {
                2
            } else {
                3
            }
        }
    };
    std::process::exit(code);
}

fn tolerances(overrides: &[String]) -> Result<Tolerances> {
    let mut tol = Tolerances::from_env();
    for spec in overrides {
        let (key, value) = spec
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("tolerance override {spec:?} is not KEY=VALUE")))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|e| Error::Parse(format!("tolerance {key}: {e}")))?;
        if !tol.set(key.trim(), value) {
            return Err(Error::Parse(format!("unknown or invalid tolerance {key:?}")));
        }
    }
    Ok(tol)
}

fn load(common: &Common, tol: &Tolerances) -> Result<FacetComplex> {
    let text = std::fs::read_to_string(&common.input)?;
    let parsed = io::parse_input(&text, tol)?;
    io::build_complex(&parsed, tol)
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Unfold(args) => {
            let tol = tolerances(&args.common.tol)?;
            let complex = load(&args.common, &tol)?;
            let d = complex.surface_dim;
            if args.svg.is_some() && d != 2 {
                return Err(Error::DegenerateInput(format!(
                    "svg output needs surface dimension 2, input has {d}"
                )));
            }
            if args.off.is_some() && d != 3 {
                return Err(Error::DegenerateInput(format!(
                    "off output needs surface dimension 3, input has {d}"
                )));
            }
            let (label, point) = io::parse_source_spec(&args.source)?;
            let (facet, point) = io::resolve_point(&complex, label, &point, &tol)?;
            let mut u = Unfolder::new_single(&complex, &tol, facet, point)?;
            u.run()?;
            let foldout = u.foldout(0)?;
            std::fs::write(&args.out, io::write_foldout(&foldout))?;
            if let Some(path) = &args.svg {
                std::fs::write(path, io::write_svg_foldout(&foldout, tol.eps_pt))?;
            }
            if let Some(path) = &args.off {
                std::fs::write(path, io::write_off_foldout(&foldout, &tol))?;
            }
            if let Some(path) = &args.cut_locus {
                std::fs::write(path, io::write_cut_locus(&u.cut_locus(), d))?;
            }
            if let Some(path) = &args.vistal {
                std::fs::write(path, io::write_vistal(&u.vistal_tree(0)?))?;
            }
            Ok(0)
        }
        Command::Distance(args) => {
            let tol = tolerances(&args.common.tol)?;
            let complex = load(&args.common, &tol)?;
            let (label, point) = io::parse_source_spec(&args.source)?;
            let (facet, point) = io::resolve_point(&complex, label, &point, &tol)?;
            let (tlabel, tpoint) = io::parse_source_spec(&args.target)?;
            let (tfacet, tpoint) = io::resolve_point(&complex, tlabel, &tpoint, &tol)?;
            let mut u = Unfolder::new_single(&complex, &tol, facet, point)?;
            u.run()?;
            let dist = geodesic_distance(&u, tfacet, &tpoint)?;
            if args.paths {
                let paths = shortest_paths_to(&u, tfacet, &tpoint)?;
                println!("{}", io::write_distance(dist, Some(&paths)));
            } else {
                println!("{}", io::write_distance(dist, None));
            }
            Ok(0)
        }
        Command::Voronoi(args) => {
            let tol = tolerances(&args.common.tol)?;
            let complex = load(&args.common, &tol)?;
            if args.svg.is_some() && complex.surface_dim != 2 {
                return Err(Error::DegenerateInput(format!(
                    "svg output needs surface dimension 2, input has {}",
                    complex.surface_dim
                )));
            }
            let mut resolved = Vec::new();
            let mut source_list = Vec::new();
            for spec in &args.sources {
                let (label, point) = io::parse_source_spec(spec)?;
                let (facet, chart_pt) = io::resolve_point(&complex, label, &point, &tol)?;
                source_list.push((label, chart_pt.iter().copied().collect::<Vec<f64>>()));
                resolved.push((facet, chart_pt));
            }
            let cells = geodesic_voronoi(&complex, &tol, &resolved)?;
            std::fs::write(&args.out, io::write_gvd(&source_list, &cells))?;
            if let Some(path) = &args.svg {
                std::fs::write(path, io::write_svg_gvd(&complex, &cells))?;
            }
            Ok(0)
        }
        Command::Verify(args) => {
            let tol = tolerances(&args.common.tol)?;
            let complex = load(&args.common, &tol)?;
            let source = match &args.source {
                Some(spec) => {
                    let (label, point) = io::parse_source_spec(spec)?;
                    Some(io::resolve_point(&complex, label, &point, &tol)?)
                }
                None => None,
            };
            let opts = VerifyOptions {
                oracle_targets: args.samples,
                oracle_max_len: args.oracle_max_len,
                seed: args.seed,
                ..VerifyOptions::default()
            };
            let checks = verify_complex(&complex, &tol, source, &opts)?;
            let mut all_passed = true;
            for c in &checks {
                let tag = if c.passed { "PASS" } else { "FAIL" };
                all_passed &= c.passed;
                println!("{tag} {}: {}", c.name, c.detail);
            }
            Ok(if all_passed { 0 } else { 1 })
        }
    }
}
