//! The `crystal` command line.
//!
//! Exit codes: 0 success, 1 invalid input, 2 internal error (a violated
//! invariant, always a bug).

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::arith::QuadFieldElem;
use crate::graph::Graph;
use crate::invariants::{invariant_report, is_vanishing_subgroup, VanishingSubgroup};
use crate::io::{to_canonical_json, GraphFile, PointFile};
use crate::quadric::{detect_field, on_quadric, point_to_realization, quadric_presentation, FieldKind, ProjectivePoint, QuadricError};
use crate::realization::{place, standard_point, PeriodLattice, PlacedVertex, Segment};
use crate::svg::{render, SvgOptions};
use crate::tiling::{tiling_census, CensusLimits};

#[derive(Parser, Debug)]
#[command(name = "crystal", version, about = "Standard realizations of two-dimensional topological crystals")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Svg,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the graph (connected, degrees ≥ 3) and its vanishing subgroup.
    Validate { graph: PathBuf },
    /// κ, I(H), D, squared volumes and the squared minimal energy.
    Invariants {
        graph: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Standard point and a window of the periodic pattern.
    Realize {
        graph: PathBuf,
        #[arg(long, default_value_t = 1)]
        window: u32,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Draw the period lattice basis (SVG only).
        #[arg(long)]
        show_lattice: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Equations of the graph quadric (and of H, if given).
    Quadric {
        graph: PathBuf,
        /// Also print the form in harmonic parameters and the substitution.
        #[arg(long)]
        reduced: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Check a point against the quadric and recover its realization.
    VerifyPoint { graph: PathBuf, point: PathBuf },
    /// Vanishing subgroups of bounded height and which of them tile.
    Census {
        graph: PathBuf,
        /// Height bound; defaults to 6(b₁ − 1).
        #[arg(long)]
        height: Option<u32>,
        #[arg(long)]
        tilings_only: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
}

/// Outcome of one invocation.
#[derive(Debug, Default)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Outcome {
        Outcome { code: 0, stdout, stderr: String::new() }
    }

    fn invalid(msg: impl std::fmt::Display) -> Outcome {
        Outcome { code: 1, stdout: String::new(), stderr: format!("error: {msg}\n") }
    }

    fn internal(msg: impl std::fmt::Display) -> Outcome {
        Outcome { code: 2, stdout: String::new(), stderr: format!("internal error: {msg}\n") }
    }
}

type CmdResult = Result<String, Outcome>;

fn read(path: &PathBuf) -> Result<String, Outcome> {
    std::fs::read_to_string(path).map_err(|e| Outcome::invalid(format!("{}: {e}", path.display())))
}

fn load_graph(path: &PathBuf) -> Result<(GraphFile, Graph), Outcome> {
    let f = GraphFile::parse(&read(path)?).map_err(Outcome::invalid)?;
    let g = f.graph().map_err(Outcome::invalid)?;
    g.validate().map_err(Outcome::invalid)?;
    Ok((f, g))
}

fn load_subgroup(f: &GraphFile, g: &Graph) -> Result<VanishingSubgroup, Outcome> {
    f.subgroup(g).map_err(Outcome::invalid)
}

fn only(format: Format, allowed: &[Format], cmd: &str) -> Result<(), Outcome> {
    if allowed.contains(&format) {
        Ok(())
    } else {
        Err(Outcome::invalid(format!("{cmd} does not support --format {format:?}").to_lowercase()))
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, threads: Option<&str>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: 1, stdout: String::new(), stderr: text }
            } else {
                Outcome::ok(text)
            };
        }
    };
    let threads = match threads.map(str::parse::<usize>) {
        None => None,
        Some(Ok(n)) if n > 0 => Some(n),
        Some(_) => return Outcome::invalid("CRYSTAL_THREADS must be a positive integer"),
    };
    let result = std::panic::catch_unwind(move || dispatch(cli.command, threads));
    match result {
        Ok(Ok(stdout)) => Outcome::ok(stdout),
        Ok(Err(o)) => o,
        Err(p) => {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Outcome::internal(msg)
        }
    }
}

fn dispatch(cmd: Command, threads: Option<usize>) -> CmdResult {
    match cmd {
        Command::Validate { graph } => cmd_validate(&graph),
        Command::Invariants { graph, format } => cmd_invariants(&graph, format),
        Command::Realize { graph, window, format, show_lattice, output } => {
            let out = cmd_realize(&graph, window, format, show_lattice)?;
            match output {
                Some(p) => {
                    std::fs::write(&p, out).map_err(|e| Outcome::invalid(format!("{}: {e}", p.display())))?;
                    Ok(String::new())
                }
                None => Ok(out),
            }
        }
        Command::Quadric { graph, reduced, format } => cmd_quadric(&graph, reduced, format),
        Command::VerifyPoint { graph, point } => cmd_verify_point(&graph, &point),
        Command::Census { graph, height, tilings_only, format } => {
            cmd_census(&graph, height, tilings_only, format, threads)
        }
    }
}

fn cmd_validate(path: &PathBuf) -> CmdResult {
    let (f, g) = load_graph(path)?;
    let mut out = format!(
        "ok: {} vertices, {} edges, b1 = {}\n",
        g.vertex_count(),
        g.edge_count(),
        g.betti_number()
    );
    match f.generators(&g).map_err(Outcome::invalid)? {
        Some(gens) => {
            let h = is_vanishing_subgroup(&g, &gens).map_err(Outcome::invalid)?;
            let _ = writeln!(out, "vanishing subgroup: rank {}, direct summand of corank 2", h.rank());
        }
        None if g.betti_number() == 2 => out.push_str("vanishing subgroup: H = 0\n"),
        None => out.push_str("no vanishing subgroup given\n"),
    }
    Ok(out)
}

fn cmd_invariants(path: &PathBuf, format: Format) -> CmdResult {
    only(format, &[Format::Json, Format::Text], "invariants")?;
    let (f, g) = load_graph(path)?;
    let h = load_subgroup(&f, &g)?;
    let rep = invariant_report(&g, &h);
    if format == Format::Text {
        return Ok(format!(
            "kappa = {}\nI = {}\nD = {}\nvol_albanese^2 = {}\nvol_generalized_albanese^2 = {}\nmin_energy^2 = {}\n",
            rep.kappa,
            rep.i_h,
            rep.d,
            rep.vol_albanese_sq,
            rep.vol_generalized_albanese_sq,
            rep.min_energy_sq
        ));
    }
    Ok(to_canonical_json(&rep))
}

#[derive(Serialize)]
struct BaseVertex<'a> {
    id: &'a str,
    position: &'a QuadFieldElem,
}

#[derive(Serialize)]
struct RealizeJson<'a> {
    #[serde(rename = "D")]
    d: u64,
    point: &'a [QuadFieldElem],
    lattice: &'a PeriodLattice,
    window: u32,
    base_positions: Vec<BaseVertex<'a>>,
    vertices: &'a [PlacedVertex],
    segments: &'a [Segment],
    degeneracy: &'a crate::realization::Degeneracy,
}

fn cmd_realize(path: &PathBuf, window: u32, format: Format, show_lattice: bool) -> CmdResult {
    only(format, &[Format::Json, Format::Svg], "realize")?;
    let (f, g) = load_graph(path)?;
    let h = load_subgroup(&f, &g)?;
    let z = standard_point(&g, &h).map_err(Outcome::invalid)?;
    if !on_quadric(&ProjectivePoint::from(&z), &quadric_presentation(&g, Some(&h))) {
        return Err(Outcome::internal("standard point is off the quadric"));
    }
    let pc = place(&g, &z, window).map_err(Outcome::invalid)?;
    if format == Format::Svg {
        return Ok(render(&pc, SvgOptions { show_lattice }));
    }
    let out = RealizeJson {
        d: z.d(),
        point: z.coords(),
        lattice: &pc.lattice,
        window,
        base_positions: pc.base_positions.iter().map(|(id, p)| BaseVertex { id, position: p }).collect(),
        vertices: &pc.vertices,
        segments: &pc.segments,
        degeneracy: &pc.degeneracy,
    };
    Ok(to_canonical_json(&out))
}

fn cmd_quadric(path: &PathBuf, reduced: bool, format: Format) -> CmdResult {
    only(format, &[Format::Json, Format::Text], "quadric")?;
    let (f, g) = load_graph(path)?;
    let h = match f.generators(&g).map_err(Outcome::invalid)? {
        Some(gens) => Some(is_vanishing_subgroup(&g, &gens).map_err(Outcome::invalid)?),
        None => None,
    };
    let q = quadric_presentation(&g, h.as_ref());
    if format == Format::Text {
        return Ok(q.to_text(reduced));
    }
    let mut v = q.to_json();
    if reduced {
        v["reduced"] = json!(q.reduced_form_text());
    }
    Ok(to_canonical_json(&v))
}

fn cmd_verify_point(graph: &PathBuf, point: &PathBuf) -> CmdResult {
    let (f, g) = load_graph(graph)?;
    let pf = PointFile::parse(&read(point)?).map_err(Outcome::invalid)?;
    let p = pf.point().map_err(Outcome::invalid)?;
    if p.len() != g.edge_count() {
        return Err(Outcome::invalid(format!("point has {} coordinates, graph has {} edges", p.len(), g.edge_count())));
    }
    let q = quadric_presentation(&g, None);
    let on = on_quadric(&p, &q);
    let field = detect_field(&p);
    let mut v = json!({
        "on_quadric": on,
        "D": null,
        "degenerate": null,
        "recovered_H": null,
    });
    match field {
        FieldKind::Mixed => return Err(Outcome::invalid(QuadricError::MixedFields)),
        FieldKind::Rational => {
            v["degenerate"] = json!("rank-one");
            return Ok(to_canonical_json(&v));
        }
        FieldKind::Quadratic(d) => v["D"] = json!(d),
    }
    if !on {
        return Ok(to_canonical_json(&v));
    }
    match point_to_realization(&p, &g) {
        Ok(rec) => {
            let hnf = rec.subgroup.hnf();
            let predicted = invariant_report(&g, &rec.subgroup).d;
            if predicted != rec.point.d() {
                return Err(Outcome::internal("field of the point differs from squarefree_part(kappa I)"));
            }
            v["recovered_H"] = json!(hnf);
            if let Some(gens) = f.generators(&g).map_err(Outcome::invalid)? {
                let given = is_vanishing_subgroup(&g, &gens).map_err(Outcome::invalid)?;
                v["matches_vanishing_group"] = json!(given.same_as(&rec.subgroup));
            }
        }
        Err(QuadricError::DegenerateRankOne) => v["degenerate"] = json!("rank-one"),
        Err(e) => return Err(Outcome::invalid(e)),
    }
    Ok(to_canonical_json(&v))
}

fn cmd_census(path: &PathBuf, height: Option<u32>, tilings_only: bool, format: Format, threads: Option<usize>) -> CmdResult {
    only(format, &[Format::Json, Format::Text], "census")?;
    let (_, g) = load_graph(path)?;
    let mut limits = CensusLimits::default();
    if let Some(t) = threads {
        limits.threads = t;
    }
    let rep = tiling_census(&g, height, &limits).map_err(Outcome::invalid)?;
    let records = if tilings_only { rep.tiling_records() } else { rep.records() };
    if format == Format::Json {
        let v = json!({
            "hmax": rep.census.hmax,
            "total_subgroups": rep.total(),
            "tilings": rep.tilings.len(),
            "records": records,
        });
        return Ok(to_canonical_json(&v));
    }
    let mut out = format!(
        "hmax {}: {} subgroups, {} tilings\n{:<40} {:>6} {:>4} {:>6} {:>4} {:>6}  faces\n",
        rep.census.hmax,
        rep.total(),
        rep.tilings.len(),
        "hnf",
        "height",
        "D",
        "kappa",
        "I",
        "tiling"
    );
    for r in &records {
        let hnf: Vec<String> =
            r.hnf.iter().map(|row| row.iter().map(i64::to_string).collect::<Vec<_>>().join(" ")).collect();
        let hnf = if hnf.is_empty() { "0".to_string() } else { hnf.join(" | ") };
        let faces: Vec<String> = r.face_sizes.iter().map(usize::to_string).collect();
        let _ = writeln!(
            out,
            "{:<40} {:>6} {:>4} {:>6} {:>4} {:>6}  {}",
            hnf,
            r.height,
            r.d,
            r.kappa,
            r.i,
            if r.is_tiling { "yes" } else { "no" },
            faces.join(",")
        );
    }
    Ok(out)
}
