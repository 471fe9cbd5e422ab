//! The `monotri` command line.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::colorings::{Coloring, PlaneColoring};
use crate::forcing::{forcing_check, ForcingError, ForcingPart};
use crate::geom::{place_triangle, Point, Region, TriangleSpec, DEFAULT_TOLERANCE};
use crate::io::{load_coloring, LoadError};
use crate::lines::{solve_unit_triangles, Line};
use crate::scan::{
    avoidance_scan, boundary_angle_audit, find_almost_unit, find_monochromatic_copy, hexagon_probe,
    is_almost_unit, AlmostUnitOutcome, ScanError, ScanGrid, ScanOutcome, HEXAGON_ANGULAR_TOL,
};
use crate::svg::render_svg;

#[derive(Debug, Parser)]
#[command(name = "monotri", version, about = "Monochromatic triangles in two-colorings of the plane")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = DEFAULT_TOLERANCE, value_parser = positive)]
    tolerance: f64,
}

#[derive(Debug, Args)]
struct GridArgs {
    #[arg(long)]
    coloring: PathBuf,
    /// Side lengths `a,b,c` in anticlockwise order.
    #[arg(long, value_parser = parse_triple)]
    triangle: [f64; 3],
    #[arg(long, value_parser = parse_region, allow_hyphen_values = true, default_value = "0,0,10,10")]
    region: Region,
    /// Translation step.
    #[arg(long, default_value_t = ScanGrid::DEFAULT_STEP, value_parser = positive)]
    grid: f64,
    #[arg(long, default_value_t = ScanGrid::DEFAULT_ANGLES)]
    angles: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Part {
    I,
    Ii,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Search a grid of placements for a monochromatic copy.
    Scan {
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, default_value_t = 0.0)]
        min_margin: f64,
    },
    /// Count monochromatic placements and near misses over a grid.
    Avoid {
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Look for almost unit triangles of both colors inside Q(3).
    Almost {
        #[arg(long)]
        coloring: PathBuf,
        #[arg(long, value_parser = positive)]
        epsilon: f64,
        #[arg(long, default_value_t = 1_000_000)]
        tries: u64,
        #[arg(long)]
        seed: u64,
    },
    /// Check the four zebra conditions.
    CheckZebra {
        #[arg(long)]
        coloring: PathBuf,
    },
    /// Intersect the unit circle around a boundary point with the boundary.
    Hexagon {
        #[arg(long)]
        coloring: PathBuf,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        point: Point,
        /// Window for boundary queries; defaults to a square of half-width 2 around the point.
        #[arg(long, value_parser = parse_region, allow_hyphen_values = true)]
        region: Option<Region>,
        #[arg(long, default_value_t = HEXAGON_ANGULAR_TOL, value_parser = positive)]
        angular_tol: f64,
    },
    /// List boundary vertices with convex angle at most 2π/3.
    Angles {
        #[arg(long)]
        coloring: PathBuf,
        #[arg(long, value_parser = parse_region, allow_hyphen_values = true, default_value = "0,0,10,10")]
        region: Region,
    },
    /// Enumerate the 32 colorings of the eight-point configuration.
    Forcing {
        #[arg(long, value_parser = parse_triple)]
        sides: [f64; 3],
        #[arg(long, value_enum)]
        part: Part,
    },
    /// Unit triangles with one vertex on each of three lines.
    Lines {
        #[arg(long, allow_hyphen_values = true)]
        q1: Line,
        #[arg(long, allow_hyphen_values = true)]
        q2: Line,
        #[arg(long, allow_hyphen_values = true)]
        q3: Line,
    },
    /// Draw a coloring as SVG.
    Render {
        #[arg(long)]
        coloring: PathBuf,
        #[arg(long, value_parser = parse_region, allow_hyphen_values = true, default_value = "0,0,4,4")]
        region: Region,
        /// Pixels per unit.
        #[arg(long, default_value_t = 50.0, value_parser = positive)]
        ppu: f64,
        /// JSON file with a `vertices` array of three points to overlay.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
}

fn numbers(s: &str, n: usize) -> Result<Vec<f64>, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}")))
        .collect::<Result<_, _>>()?;
    if v.len() != n {
        return Err(format!("expected {n} comma-separated numbers, got {}", v.len()));
    }
    if let Some(x) = v.iter().find(|x| !x.is_finite()) {
        return Err(format!("{x} is not finite"));
    }
    Ok(v)
}

fn positive(s: &str) -> Result<f64, String> {
    let x: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if x.is_finite() && x > 0.0 {
        Ok(x)
    } else {
        Err(format!("must be positive, got {s}"))
    }
}

fn parse_triple(s: &str) -> Result<[f64; 3], String> {
    let v = numbers(s, 3)?;
    Ok([v[0], v[1], v[2]])
}

fn parse_point(s: &str) -> Result<Point, String> {
    let v = numbers(s, 2)?;
    Ok(Point::new(v[0], v[1]))
}

fn parse_region(s: &str) -> Result<Region, String> {
    let v = numbers(s, 4)?;
    Region::new(v[0], v[1], v[2], v[3]).map_err(|e| e.to_string())
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Internal(_) => 2,
        }
    }
}

impl From<LoadError> for Failure {
    fn from(e: LoadError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<ScanError> for Failure {
    fn from(e: ScanError) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn load(path: &Path, tol: f64) -> Result<Coloring, Failure> {
    Ok(load_coloring(path)?.with_tolerance(tol))
}

enum Output {
    Json(serde_json::Value),
    Text(String),
}

fn json<T: Serialize>(v: &T) -> Result<Output, Failure> {
    serde_json::to_value(v).map(Output::Json).map_err(|e| Failure::Internal(e.to_string()))
}

fn spec_for(sides: [f64; 3], tol: f64) -> Result<TriangleSpec, Failure> {
    TriangleSpec::with_tolerance(sides[0], sides[1], sides[2], tol).map_err(|e| Failure::Usage(e.to_string()))
}

/// Recomputes a scan witness from its motion and checks it independently.
fn verify_scan(c: &Coloring, out: &ScanOutcome, min_margin: f64) -> Result<(), Failure> {
    let Some(w) = out.witness() else { return Ok(()) };
    let v = place_triangle(&w.spec, &w.motion());
    let colors = v.map(|p| c.color(p));
    let margin = v.iter().map(|&p| c.boundary_distance(p)).fold(f64::INFINITY, f64::min);
    let s = w.spec.sides();
    let sides_ok = [(0, 1, s[0]), (1, 2, s[1]), (2, 0, s[2])]
        .iter()
        .all(|&(i, j, l)| (v[i].dist(v[j]) - l).abs() <= 1e-9 * l.max(1.0));
    if v != w.vertices || !sides_ok || colors.iter().any(|&k| k != w.color) || margin < min_margin {
        return Err(Failure::Internal(format!("witness failed re-verification: {w:?}")));
    }
    Ok(())
}

fn verify_almost(c: &Coloring, out: &AlmostUnitOutcome) -> Result<(), Failure> {
    let AlmostUnitOutcome::Found(pair) = out else { return Ok(()) };
    let q3 = Region::centered_square(3.0);
    for (t, want) in [(&pair.black_triangle, crate::colorings::Color::Black), (&pair.white_triangle, crate::colorings::Color::White)] {
        let ok = is_almost_unit(&t.vertices, pair.epsilon)
            && t.vertices.iter().all(|&p| c.color(p) == want && q3.contains(p));
        if !ok {
            return Err(Failure::Internal(format!("almost unit triangle failed re-verification: {t:?}")));
        }
    }
    Ok(())
}

fn read_overlay(path: &Path) -> Result<[Point; 3], Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    let v: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let verts = v.get("vertices").cloned().unwrap_or(serde_json::Value::Null);
    serde_json::from_value(verts).map_err(|e| Failure::Usage(format!("{}: `vertices`: {e}", path.display())))
}

fn execute(cmd: Command, tol: f64) -> Result<Output, Failure> {
    match cmd {
        Command::Scan { grid, min_margin } => {
            let c = load(&grid.coloring, tol)?;
            let spec = spec_for(grid.triangle, tol)?;
            let g = ScanGrid::new(grid.region, grid.grid, grid.angles)?;
            let out = find_monochromatic_copy(&c, &spec, &g, min_margin)?;
            verify_scan(&c, &out, min_margin)?;
            json(&out)
        }
        Command::Avoid { grid } => {
            let c = load(&grid.coloring, tol)?;
            let spec = spec_for(grid.triangle, tol)?;
            let g = ScanGrid::new(grid.region, grid.grid, grid.angles)?;
            json(&avoidance_scan(&c, &spec, &g)?)
        }
        Command::Almost { coloring, epsilon, tries, seed } => {
            let c = load(&coloring, tol)?;
            let out = find_almost_unit(&c, epsilon, tries, seed)?;
            verify_almost(&c, &out)?;
            json(&out)
        }
        Command::CheckZebra { coloring } => match load(&coloring, tol)? {
            Coloring::Zebra(z) => {
                let report = crate::colorings::check_zebra_conditions(&z).map_err(|e| Failure::Usage(e.to_string()))?;
                json(&report)
            }
            other => Err(Failure::Usage(format!("check-zebra needs a zebra coloring, got {}", other.kind()))),
        },
        Command::Hexagon { coloring, point, region, angular_tol } => {
            let c = load(&coloring, tol)?;
            let window = region.unwrap_or_else(|| Region::around(point, 2.0));
            json(&hexagon_probe(&c, point, &window, angular_tol)?)
        }
        Command::Angles { coloring, region } => {
            let c = load(&coloring, tol)?;
            json(&boundary_angle_audit(&c, &region))
        }
        Command::Forcing { sides, part } => {
            let part = match part {
                Part::I => ForcingPart::I,
                Part::Ii => ForcingPart::II,
            };
            match forcing_check(part, sides[0], sides[1], sides[2], tol) {
                Ok(v) => json(&v),
                Err(e @ ForcingError::ConstructionInconsistent(..)) => Err(Failure::Internal(e.to_string())),
                Err(e) => Err(Failure::Usage(e.to_string())),
            }
        }
        Command::Lines { q1, q2, q3 } => {
            let sol = solve_unit_triangles(q1, q2, q3, tol).map_err(|e| Failure::Usage(e.to_string()))?;
            json(&sol)
        }
        Command::Render { coloring, region, ppu, witness } => {
            let c = load(&coloring, tol)?;
            let overlay = witness.as_deref().map(read_overlay).transpose()?;
            Ok(Output::Text(render_svg(&c, &region, ppu, overlay)))
        }
    }
}

/// Parses `args` (including the program name) and runs the command. Returns
/// the process exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                1
            } else {
                let _ = write!(stdout, "{text}");
                0
            };
        }
    };
    let result = execute(cli.command, cli.tolerance).and_then(|out| {
        let text = match out {
            Output::Json(v) => {
                let mut s = serde_json::to_string_pretty(&v).map_err(|e| Failure::Internal(e.to_string()))?;
                s.push('\n');
                s
            }
            Output::Text(s) => s,
        };
        match &cli.out {
            Some(path) => std::fs::write(path, text)
                .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display()))),
            None => stdout.write_all(text.as_bytes()).map_err(|e| Failure::Internal(e.to_string())),
        }
    });
    match result {
        Ok(()) => 0,
        Err(f) => {
            let (Failure::Usage(m) | Failure::Internal(m)) = &f;
            let _ = writeln!(stderr, "error: {m}");
            f.code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("monotri").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn forcing_equilateral() {
        let (code, out, _) = run_args(&["forcing", "--sides", "1,1,1", "--part", "i"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["verified"], true);
        assert_eq!(v["tested_colorings"], 32);
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run_args(&["forcing", "--sides", "1,1", "--part", "i"]).0, 1);
        assert_eq!(run_args(&["forcing", "--sides", "1,1,3", "--part", "i"]).0, 1);
        assert_eq!(run_args(&["frobnicate"]).0, 1);
        assert_eq!(run_args(&["lines", "--q1", "0,0", "--q2", "0,1", "--q3", "0,2"]).0, 1);
        assert_eq!(run_args(&["scan", "--coloring", "/nonexistent.json", "--triangle", "1,1,1"]).0, 1);
    }

    #[test]
    fn help_exits_zero() {
        let (code, out, _) = run_args(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("forcing"));
    }

    #[test]
    fn lines_accepts_negative_slopes() {
        let (code, out, err) = run_args(&["lines", "--q1", "-1,0", "--q2", "1,0", "--q3", "vertical:0.5"]);
        assert_eq!(code, 0, "{err}");
        assert!(out.contains("\"kind\": \"Finite\""));
    }

    #[test]
    fn region_and_triple_parsers() {
        assert!(parse_region("0,0,1").is_err());
        assert!(parse_region("1,0,0,1").is_err());
        assert_eq!(parse_triple("1, 2,3").unwrap(), [1.0, 2.0, 3.0]);
        assert!(parse_point("nan,0").is_err());
        assert!(positive("-1").is_err());
    }
}
