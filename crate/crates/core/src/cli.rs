//! Subcommand implementations shared by the binary and the tests.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::builder::{classify_and_build, Pipeline};
use crate::detector::{classify, Verdict};
use crate::generator;
use crate::graph::PlaneGraph;
use crate::layout::{Layout, RealRect};
use crate::render;
use crate::solver::{self, AreaAssignment, CartogramLayout, SolveError};
use crate::verifier::{self, Segment, Violation};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandOutcome {
    pub exit_code: i32,
    /// One line for standard error.
    pub message: String,
    /// JSON for standard output.
    pub payload: Option<String>,
}

impl CommandOutcome {
    fn new(exit_code: i32, message: impl Into<String>, payload: Option<String>) -> Self {
        CommandOutcome { exit_code, message: message.into(), payload }
    }

    fn input_error(message: impl Into<String>) -> Self {
        Self::new(EXIT_INPUT, message, None)
    }
}

#[derive(Debug, Parser)]
#[command(name = "rectdual", version, about = "Area-universal rectangular duals")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide class membership of an edge-list graph.
    Check { graph: PathBuf },
    /// Build an area-universal rectangular dual.
    Build {
        graph: PathBuf,
        #[arg(long, value_parser = parse_origin, default_value = "0,0")]
        origin: (i64, i64),
    },
    /// Validate a layout and test area-universality.
    Verify { layout: PathBuf },
    /// Realize target areas on an area-universal layout.
    Solve {
        layout: PathBuf,
        areas: PathBuf,
        #[arg(long, default_value_t = solver::DEFAULT_REL_TOL)]
        tol: f64,
        #[arg(long, default_value_t = solver::DEFAULT_MAX_ITERS)]
        max_iters: usize,
    },
    /// Draw a layout or cartogram as SVG.
    Render {
        layout: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Generate a random class member with its certificate and layout.
    Generate {
        #[arg(long)]
        size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn parse_origin(s: &str) -> Result<(i64, i64), String> {
    let (x, y) = s.split_once(',').ok_or("expected X,Y")?;
    let p = |t: &str| t.trim().parse::<i64>().map_err(|e| format!("{t:?}: {e}"));
    Ok((p(x)?, p(y)?))
}

/// Parses `args` (including the program name) and runs the subcommand.
/// Usage errors become exit code 2 with clap's message.
pub fn run_from<I, T>(args: I) -> CommandOutcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli.command),
        Err(e) if !e.use_stderr() => CommandOutcome::new(EXIT_OK, e.to_string().trim_end(), None),
        Err(e) => CommandOutcome::input_error(e.to_string().trim_end()),
    }
}

pub fn run(command: Command) -> CommandOutcome {
    match command {
        Command::Check { graph } => cmd_check(&graph),
        Command::Build { graph, origin } => cmd_build(&graph, origin),
        Command::Verify { layout } => cmd_verify(&layout),
        Command::Solve { layout, areas, tol, max_iters } => cmd_solve(&layout, &areas, tol, max_iters),
        Command::Render { layout, out } => cmd_render(&layout, &out),
        Command::Generate { size, seed } => cmd_generate(size, seed),
    }
}

fn read(path: &Path) -> Result<Vec<u8>, CommandOutcome> {
    fs::read(path).map_err(|e| CommandOutcome::input_error(format!("{}: {e}", path.display())))
}

fn read_graph(path: &Path) -> Result<PlaneGraph, CommandOutcome> {
    PlaneGraph::parse_bytes(&read(path)?).map_err(|e| CommandOutcome::input_error(format!("{}: {e}", path.display())))
}

fn read_layout(path: &Path) -> Result<Layout, CommandOutcome> {
    let bytes = read(path)?;
    let text = String::from_utf8_lossy(&bytes);
    Layout::from_json(&text).map_err(|e| CommandOutcome::input_error(format!("{}: {e}", path.display())))
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("payload serializes")
}

pub fn cmd_check(graph: &Path) -> CommandOutcome {
    let g = match read_graph(graph) {
        Ok(g) => g,
        Err(o) => return o,
    };
    match classify(&g) {
        Ok(result) => {
            let (code, msg) = match &result.verdict {
                Verdict::Member(c) => (EXIT_OK, format!("member (path {})", join(c.path.vertices()))),
                Verdict::Inconclusive => {
                    (EXIT_NEGATIVE, format!("inconclusive after {} degree-4 paths", result.tried_paths.len()))
                }
            };
            CommandOutcome::new(code, msg, Some(json(&result)))
        }
        Err(e) => CommandOutcome::input_error(e.to_string()),
    }
}

fn join(ids: &[crate::graph::VertexId]) -> String {
    ids.iter().map(|v| v.as_str()).collect::<Vec<_>>().join(",")
}

pub fn cmd_build(graph: &Path, origin: (i64, i64)) -> CommandOutcome {
    let g = match read_graph(graph) {
        Ok(g) => g,
        Err(o) => return o,
    };
    match classify_and_build(&g, origin) {
        Ok(Pipeline::Built { layout, .. }) => {
            CommandOutcome::new(EXIT_OK, format!("built {} rectangles", layout.len()), Some(layout.to_json()))
        }
        Ok(Pipeline::Inconclusive(result)) => {
            CommandOutcome::new(EXIT_NEGATIVE, "inconclusive; no layout built", Some(json(&result)))
        }
        Ok(Pipeline::Infeasible { error, .. }) => CommandOutcome::new(EXIT_INTERNAL, error.to_string(), None),
        Err(e) => CommandOutcome::input_error(e.to_string()),
    }
}

#[derive(Serialize)]
struct VerifyPayload {
    ok: bool,
    violations: Vec<Violation>,
    area_universal: Option<bool>,
    witness: Option<Segment>,
    segments: Option<usize>,
}

pub fn cmd_verify(layout: &Path) -> CommandOutcome {
    let l = match read_layout(layout) {
        Ok(l) => l,
        Err(o) => return o,
    };
    let report = verifier::validate_partition(&l);
    if !report.ok {
        let n = report.violations.len();
        let p = VerifyPayload {
            ok: false,
            violations: report.violations,
            area_universal: None,
            witness: None,
            segments: None,
        };
        return CommandOutcome::new(EXIT_INPUT, format!("invalid partition ({n} violations)"), Some(json(&p)));
    }
    let segments = verifier::extract_maximal_segments(&l).expect("validated").len();
    let (universal, witness) = verifier::is_area_universal(&l).expect("validated");
    let p = VerifyPayload {
        ok: true,
        violations: Vec::new(),
        area_universal: Some(universal),
        witness,
        segments: Some(segments),
    };
    let (code, msg) = match witness {
        None => (EXIT_OK, "valid, area-universal".to_string()),
        Some(s) => (EXIT_NEGATIVE, format!("valid, not area-universal: {s:?} is no rectangle side")),
    };
    CommandOutcome::new(code, msg, Some(json(&p)))
}

#[derive(Serialize)]
struct NotConvergedPayload<'a> {
    error: &'static str,
    max_iters: usize,
    best_error: f64,
    best: &'a CartogramLayout,
}

pub fn cmd_solve(layout: &Path, areas: &Path, tol: f64, max_iters: usize) -> CommandOutcome {
    let l = match read_layout(layout) {
        Ok(l) => l,
        Err(o) => return o,
    };
    let targets = match read(areas) {
        Ok(bytes) => match AreaAssignment::from_json(&String::from_utf8_lossy(&bytes)) {
            Ok(t) => t,
            Err(e) => return CommandOutcome::input_error(format!("{}: {e}", areas.display())),
        },
        Err(o) => return o,
    };
    match solver::solve_areas(&l, &targets, tol, max_iters) {
        Ok(c) => CommandOutcome::new(
            EXIT_OK,
            format!("converged in {} sweeps, error {:.3e}", c.sweeps, c.achieved_error),
            Some(c.to_json()),
        ),
        Err(SolveError::NotConverged { max_iters, best_error, best }) => {
            let p = NotConvergedPayload { error: "not_converged", max_iters, best_error, best: &best };
            CommandOutcome::new(EXIT_NEGATIVE, format!("not converged after {max_iters} sweeps"), Some(json(&p)))
        }
        Err(e) => CommandOutcome::input_error(e.to_string()),
    }
}

pub fn cmd_render(layout: &Path, out: &Path) -> CommandOutcome {
    let bytes = match read(layout) {
        Ok(b) => b,
        Err(o) => return o,
    };
    let text = String::from_utf8_lossy(&bytes);
    let svg = if let Ok(l) = Layout::from_json(&text) {
        let report = verifier::validate_partition(&l);
        if !report.ok {
            return CommandOutcome::input_error(format!("invalid layout ({} violations)", report.violations.len()));
        }
        render::render_layout(&l)
    } else if let Ok(c) = serde_json::from_str::<CartogramLayout>(&text) {
        let report = verifier::validate_real_partition(&c.rects, real_tolerance(&c.rects));
        if !report.ok {
            return CommandOutcome::input_error(format!("invalid cartogram ({} violations)", report.violations.len()));
        }
        render::render_rects(&c.rects)
    } else {
        return CommandOutcome::input_error(format!("{}: neither a layout nor a cartogram", layout.display()));
    };
    let count = svg.matches("<rect ").count();
    if let Err(e) = fs::write(out, &svg) {
        return CommandOutcome::input_error(format!("{}: {e}", out.display()));
    }
    let payload = serde_json::json!({ "out": out.display().to_string(), "rects": count });
    CommandOutcome::new(EXIT_OK, format!("wrote {count} rectangles to {}", out.display()), Some(json(&payload)))
}

/// Absolute tolerance for comparing real coordinates: a small fraction of
/// the drawing's span.
pub fn real_tolerance(rects: &[RealRect]) -> f64 {
    let lo = rects.iter().map(|r| r.x.min(r.y)).fold(f64::MAX, f64::min);
    let hi = rects.iter().map(|r| r.right().max(r.top())).fold(f64::MIN, f64::max);
    1e-9 * (hi - lo).abs().max(1.0)
}

pub fn cmd_generate(size: usize, seed: u64) -> CommandOutcome {
    if size < 2 {
        return CommandOutcome::input_error(format!("size must be at least 2, got {size}"));
    }
    let inst = generator::generate(size, seed);
    let n = inst.graph.vertex_count();
    let msg = if n > size {
        format!("generated {n} vertices (minimum for this row)")
    } else {
        format!("generated {n} vertices")
    };
    CommandOutcome::new(EXIT_OK, msg, Some(inst.to_json()))
}
