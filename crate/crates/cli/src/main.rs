//! `eps-hull`: boundary analysis of epsilon-neighbourhoods from the shell.
//!
//! Exit codes: 0 success, 1 invalid input, 2 oracle mismatch or violated
//! invariant, 64 usage error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use epshull::analysis::{self, Analysis};
use epshull::curvature::bv_check;
use epshull::report::{self, Report};
use epshull::scene::parse_scene_with_tolerance;
use epshull::svg::render_svg;
use epshull::{Error, Tolerance};

const EXIT_INVALID: u8 = 1;
const EXIT_VIOLATION: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Parser, Debug)]
#[command(name = "eps-hull", version, about = "Boundary structure of planar epsilon-neighbourhoods")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build the boundary arrangement and list its elements.
    Build(Common),
    /// Classify every boundary vertex.
    Classify(Common),
    /// Decompose the boundary into Jordan curves.
    Decompose(Common),
    /// Curvature per element and the bounded-variation check.
    Curvature(Common),
    /// Run every invariant suite and the raster oracle.
    Check(Common),
    /// Write an SVG figure of the decomposition.
    Render(Common),
}

#[derive(Args, Debug)]
struct Common {
    /// Scene file.
    scene: PathBuf,
    /// Coincidence distance in scene units.
    #[arg(long)]
    tolerance: Option<f64>,
    /// Oracle grid resolution.
    #[arg(long, default_value_t = 512)]
    grid: usize,
    /// Write the JSON report here.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Write an SVG figure here.
    #[arg(long)]
    svg: Option<PathBuf>,
}

/// Failure carrying its exit code.
struct Failure {
    code: u8,
    err: anyhow::Error,
}

impl Failure {
    fn invalid(err: impl Into<anyhow::Error>) -> Self {
        Failure { code: EXIT_INVALID, err: err.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Geometry(_) | Error::Scene(_) | Error::Domain(_) | Error::EmptyInput => EXIT_INVALID,
            _ => EXIT_VIOLATION,
        };
        Failure { code, err: e.into() }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {:#}", f.err);
            ExitCode::from(f.code)
        }
    }
}

fn load(c: &Common) -> Result<Analysis, Failure> {
    let text = std::fs::read_to_string(&c.scene)
        .with_context(|| format!("reading {}", c.scene.display()))
        .map_err(Failure::invalid)?;
    let tol = c.tolerance.map(|t| Tolerance::default().with_pos(t));
    if let Some(t) = tol {
        t.validate().map_err(Failure::invalid)?;
    }
    let scene = parse_scene_with_tolerance(&text, tol).map_err(|e| Failure::from(Error::from(e)))?;
    Ok(analysis::analyze(&scene)?)
}

fn write_file(path: &Path, body: &str) -> Result<(), Failure> {
    std::fs::write(path, body)
        .with_context(|| format!("writing {}", path.display()))
        .map_err(Failure::invalid)
}

fn run(cmd: Command) -> Result<u8, Failure> {
    let common = match &cmd {
        Command::Build(c)
        | Command::Classify(c)
        | Command::Decompose(c)
        | Command::Curvature(c)
        | Command::Check(c)
        | Command::Render(c) => c,
    };
    let a = load(common)?;
    let mut r = Report { scene: Some(report::scene_summary(&a)), ..Default::default() };
    let mut code = 0;
    let summary = r.scene.clone().expect("set above");

    match &cmd {
        Command::Build(_) => {
            r.elements = Some(report::element_rows(&a));
            println!("elements: {}, vertices: {}", summary.elements, summary.vertices);
        }
        Command::Classify(_) => {
            let rows = report::vertex_rows(&a);
            for (i, v) in rows.iter().enumerate() {
                let theta = v.theta.map(|t| format!(" theta={t}")).unwrap_or_default();
                let q = v.q_split.as_ref().map(|q| format!(" {q}")).unwrap_or_default();
                println!("vertex {i} ({}, {}): {}{theta}{q}", v.x, v.y, v.class);
            }
            r.vertices = Some(rows);
        }
        Command::Decompose(_) => {
            r.vertices = Some(report::vertex_rows(&a));
            r.curves = Some(report::curve_rows(&a));
            r.components = Some(report::component_rows(&a));
            println!("components: {}, curves: {}", summary.components, summary.curves);
            for c in r.curves.as_ref().expect("set above") {
                println!("curve {}: component {}, {} elements, signed area {}", c.id, c.component, c.elements.len(), c.signed_area);
            }
        }
        Command::Curvature(_) => {
            let rows = analysis::element_curvatures(&a, 8)?;
            let mut witness = None;
            for c in &a.decomposition.curves {
                match bv_check(&a.scene, &a.graph, c, 17) {
                    Ok(rep) if rep.tv_ok => {}
                    Ok(_) => witness = Some(format!("curve {}: total variation above bound", c.id)),
                    Err(e @ Error::InequalityViolation { .. }) => witness = Some(format!("curve {}: {e}", c.id)),
                    Err(e) => return Err(e.into()),
                }
                if witness.is_some() {
                    break;
                }
            }
            let sec = report::curvature_section(&rows, witness);
            for k in &sec.per_element {
                println!("element {}: kappa {}", k.element, k.kappa);
            }
            println!("finite differences: {}", if sec.fd_ok { "ok" } else { "FAIL" });
            println!("bounded variation: {}", if sec.bv_ok { "ok" } else { "FAIL" });
            if !(sec.fd_ok && sec.bv_ok) {
                code = EXIT_VIOLATION;
            }
            r.curvature = Some(sec);
        }
        Command::Check(_) => {
            let checks = analysis::run_checks(&a, common.grid);
            let o = analysis::oracle(&a, common.grid)?;
            r.vertices = Some(report::vertex_rows(&a));
            r.curves = Some(report::curve_rows(&a));
            r.oracle = Some(report::oracle_section(&o));
            println!("components: {}, curves: {}, wedges: {}", summary.components, summary.curves, summary.wedges);
            for c in &checks {
                println!("{}: {} ({})", c.name, if c.ok { "ok" } else { "FAIL" }, c.detail);
            }
            if checks.iter().any(|c| !c.ok) {
                code = EXIT_VIOLATION;
            }
            r.checks = Some(checks);
        }
        Command::Render(_) => {
            r.curves = Some(report::curve_rows(&a));
            let svg = render_svg(&a);
            match &common.svg {
                Some(_) => println!("curves: {}, vertices: {}", summary.curves, summary.vertices),
                None => print!("{svg}"),
            }
        }
    }

    if let Some(path) = &common.svg {
        write_file(path, &render_svg(&a))?;
    }
    if let Some(path) = &common.json {
        write_file(path, &r.to_json())?;
    }
    Ok(code)
}
