//! Command-line entry point. Exit codes: 0 verified, 1 verification failed,
//! 2 invalid input.

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use thiserror::Error;

use crate::fib::{fib_table, identities_check};
use crate::holonomy::{
    check_flat, closed_form_corner_alt, closed_form_h, holonomy_ab, holonomy_between, matrix_text,
    type_label,
};
use crate::lightcone::{appendix_suite, generic_pair, word_suite, Check};
use crate::ospmat::{random_word, SuperMatrix};
use crate::snake::{build_snake, combo_check, extend, MAX_TILES};
use crate::superalg::{SuperRat, VarRegistry};
use crate::surface::{fan_diagonals, zigzag_diagonals, Frame, Triangulation, TriangulationJson};

#[derive(Parser, Debug)]
#[command(name = "superholo", version, about = "Super λ-lengths, osp(1|2) holonomies and double dimer covers")]
pub struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub cmd: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Orientation {
    /// Default orientation along the longest arc.
    Default,
    /// Arrows as given by the polygon source.
    File,
}

#[derive(Args, Debug, Clone)]
pub struct PolygonArgs {
    /// `fan:n`, `zigzag:n` or a path to a triangulation JSON file.
    #[arg(long)]
    pub polygon: String,
    #[arg(long, value_enum, default_value_t = Orientation::Default)]
    pub orientation: Orientation,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// λ-length of an arc in the initial coordinates.
    Lambda {
        #[command(flatten)]
        poly: PolygonArgs,
        #[arg(long, value_parser = parse_arc)]
        arc: (u32, u32),
    },
    /// Holonomy between two corners; `H_{a,b}` when the arc is the longest one.
    Holonomy {
        #[command(flatten)]
        poly: PolygonArgs,
        #[arg(long, value_parser = parse_arc)]
        arc: Option<(u32, u32)>,
    },
    /// Every face monodromy is the identity, for the default and random orientations.
    FlatCheck {
        #[command(flatten)]
        poly: PolygonArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        orientations: usize,
    },
    /// Closed form against the computed `H_{a,b}`.
    GenericCheck {
        #[command(flatten)]
        poly: PolygonArgs,
        #[arg(long, value_parser = parse_arc)]
        arc: Option<(u32, u32)>,
    },
    /// Double dimer matrix against the computed `H_{a,b}`.
    ComboCheck {
        #[command(flatten)]
        poly: PolygonArgs,
        #[arg(long, value_parser = parse_arc)]
        arc: Option<(u32, u32)>,
        #[arg(long, default_value_t = MAX_TILES)]
        max_tiles: usize,
    },
    /// Double dimer covers of the extended snake graph.
    Dimers {
        #[command(flatten)]
        poly: PolygonArgs,
        #[arg(long, value_parser = parse_arc)]
        arc: Option<(u32, u32)>,
        #[arg(long, default_value_t = MAX_TILES)]
        max_tiles: usize,
    },
    /// Super Fibonacci table with the three-route comparison.
    Fib {
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..=40))]
        n: u64,
        /// Largest `n` checked by enumerating strips.
        #[arg(long, default_value_t = 9)]
        dimer_max: usize,
    },
    /// osp(1|2) membership and Berezinian of random words and holonomies.
    OspCheck {
        #[arg(long)]
        polygon: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 500)]
        words: usize,
    },
    /// The light cone statements.
    AppendixCheck {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        words: usize,
    },
}

// vertices are labelled 1..=n on the command line
fn parse_arc(s: &str) -> Result<(u32, u32), String> {
    let (a, b) = s.split_once(',').ok_or("expected i,j")?;
    let p = |x: &str| match x.trim().parse::<u32>() {
        Ok(0) => Err("vertices are labelled from 1".to_string()),
        Ok(v) => Ok(v - 1),
        Err(e) => Err(e.to_string()),
    };
    Ok((p(a)?, p(b)?))
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("{0}")]
    Internal(String),
}

fn input<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Input(e.to_string())
}

fn internal<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Internal(e.to_string())
}

/// Polygon from `fan:n`, `zigzag:n` or a JSON file.
pub fn load_polygon(arg: &str) -> Result<Triangulation, CliError> {
    let sized = |s: &str| -> Result<u32, CliError> {
        let n: u32 = s.parse().map_err(input)?;
        if !(3..=64).contains(&n) {
            return Err(CliError::Input(format!("polygon size {n} out of range 3..=64")));
        }
        Ok(n)
    };
    if let Some(n) = arg.strip_prefix("fan:") {
        let n = sized(n)?;
        return Triangulation::new(n, &fan_diagonals(n)).map_err(input);
    }
    if let Some(n) = arg.strip_prefix("zigzag:") {
        let n = sized(n)?;
        return Triangulation::new(n, &zigzag_diagonals(n)).map_err(input);
    }
    let text = std::fs::read_to_string(arg).map_err(|e| CliError::Input(format!("{arg}: {e}")))?;
    let j: TriangulationJson = serde_json::from_str(&text).map_err(input)?;
    Triangulation::from_json(&j).map_err(input)
}

/// Triangulation and frame, oriented as requested.
fn framed(p: &PolygonArgs, arc: Option<(u32, u32)>) -> Result<(Triangulation, Frame), CliError> {
    let mut t = load_polygon(&p.polygon)?;
    let (a, b) = match arc {
        Some(ab) => ab,
        None => t
            .longest_arc()
            .ok_or_else(|| CliError::Input("no arc crosses every diagonal".into()))?,
    };
    let f = Frame::new(&t, a, b).map_err(input)?;
    if p.orientation == Orientation::Default {
        f.apply_default_orientation(&mut t).map_err(input)?;
    }
    Ok((t, f))
}

fn oriented(p: &PolygonArgs) -> Result<Triangulation, CliError> {
    let mut t = load_polygon(&p.polygon)?;
    if p.orientation == Orientation::Default {
        if let Some((a, b)) = t.longest_arc() {
            let f = Frame::new(&t, a, b).map_err(input)?;
            f.apply_default_orientation(&mut t).map_err(input)?;
        }
    }
    Ok(t)
}

fn check_vertex(t: &Triangulation, v: u32) -> Result<(), CliError> {
    if v >= t.n() {
        return Err(CliError::Input(format!("vertex {} out of range 1..={}", v + 1, t.n())));
    }
    Ok(())
}

/// Output of one command: text, JSON and whether everything verified.
struct Report {
    text: String,
    json: Value,
    ok: bool,
}

fn matrix_json(m: &SuperMatrix, reg: &VarRegistry) -> Value {
    serde_json::to_value(m.to_json(reg)).expect("serializable")
}

fn checks_report(title: &str, checks: &[Check]) -> Report {
    let mut text = format!("{title}\n");
    for c in checks {
        text += &format!("{} {}\n", if c.pass { "PASS" } else { "FAIL" }, c.name);
    }
    Report {
        text,
        json: json!({ "checks": checks }),
        ok: checks.iter().all(|c| c.pass),
    }
}

fn execute(cli: &Cli) -> Result<Report, CliError> {
    match &cli.cmd {
        Command::Lambda { poly, arc } => {
            let t = oriented(poly)?;
            check_vertex(&t, arc.0)?;
            check_vertex(&t, arc.1)?;
            if arc.0 == arc.1 {
                return Err(CliError::Input("arc endpoints coincide".into()));
            }
            let l = t.lambda_of_arc(arc.0, arc.1).map_err(internal)?;
            let reg = t.registry();
            let s = l.to_text(reg);
            Ok(Report {
                text: format!("lambda({},{}) = {s}\n", arc.0 + 1, arc.1 + 1),
                json: json!({ "arc": [arc.0 + 1, arc.1 + 1], "lambda": s, "value": l.to_json(reg) }),
                ok: true,
            })
        }
        Command::Holonomy { poly, arc } => {
            let t0 = load_polygon(&poly.polygon)?;
            let longest = t0.longest_arc();
            let along = match (arc, longest) {
                (None, _) => true,
                (Some((i, j)), Some((a, b))) => (*i, *j) == (a, b) || (*i, *j) == (b, a),
                _ => false,
            };
            let (t, res, ty) = if along {
                let (t, f) = framed(poly, *arc)?;
                let r = holonomy_ab(&t, &f).map_err(internal)?;
                let ty = type_label(&f);
                (t, r, Some(ty))
            } else {
                let (i, j) = arc.expect("arc given");
                let t = oriented(poly)?;
                check_vertex(&t, i)?;
                check_vertex(&t, j)?;
                let r = holonomy_between(&t, i, j, 0, 0).map_err(internal)?;
                (t, r, None)
            };
            let reg = t.registry();
            let osp = res.matrix.is_in_osp();
            let mut text = matrix_text(&res.matrix, reg) + "\n";
            if let Some(ty) = &ty {
                text += &format!("type {ty}\n");
            }
            text += &format!("path length {}\n", res.path_length);
            Ok(Report {
                text,
                json: json!({
                    "matrix": matrix_json(&res.matrix, reg),
                    "type": ty,
                    "path_length": res.path_length,
                }),
                ok: osp,
            })
        }
        Command::FlatCheck { poly, seed, orientations } => {
            let t = oriented(poly)?;
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let mut failure = None;
            if let Err(e) = check_flat(&t) {
                failure = Some(format!("initial orientation: {e}"));
            }
            for k in 0..*orientations {
                if failure.is_some() {
                    break;
                }
                let mut r = t.clone();
                r.randomize_orientation(&mut rng);
                if let Err(e) = check_flat(&r) {
                    failure = Some(format!("random orientation {k}: {e}"));
                }
            }
            let ok = failure.is_none();
            let text = match &failure {
                None => format!("flat: {} orientations, every face monodromy is the identity\n", orientations + 1),
                Some(f) => format!("not flat: {f}\n"),
            };
            Ok(Report { text, json: json!({ "flat": ok, "orientations": orientations + 1, "failure": failure }), ok })
        }
        Command::GenericCheck { poly, arc } => {
            let (t, f) = framed(poly, *arc)?;
            let h = holonomy_ab(&t, &f).map_err(internal)?.matrix;
            let c = closed_form_h(&t, &f).map_err(internal)?;
            let alt = closed_form_corner_alt(&t, &f).map_err(internal)?;
            let reg = t.registry();
            let mut bad = Vec::new();
            for i in 0..3 {
                for j in 0..3 {
                    if h.e[i][j] != c.e[i][j] {
                        bad.push(json!({
                            "entry": [i + 1, j + 1],
                            "holonomy": h.e[i][j].to_text(reg),
                            "closed_form": c.e[i][j].to_text(reg),
                        }));
                    }
                }
            }
            let corner = alt == h.e[2][2];
            let ok = bad.is_empty() && corner;
            let mut text = format!("arc {}-{} type {}\n", f.a + 1, f.b + 1, type_label(&f));
            text += &format!("closed form {}\n", if bad.is_empty() { "matches all nine entries" } else { "differs" });
            if let Some(b) = bad.first() {
                text += &format!("first mismatch: {b}\n");
            }
            text += &format!("(3,3) second form {}\n", if corner { "matches" } else { "differs" });
            Ok(Report {
                text,
                json: json!({ "type": type_label(&f), "mismatches": bad, "corner_form": corner }),
                ok,
            })
        }
        Command::ComboCheck { poly, arc, max_tiles } => {
            let (t, f) = framed(poly, *arc)?;
            let r = combo_check(&t, &f, *max_tiles).map_err(input)?;
            let ok = r.matches && r.corner_identity && r.boundary_free && r.classical;
            let yn = |b: bool| if b { "yes" } else { "no" };
            let text = format!(
                "tiles {}\ncovers {}\nmatches holonomy {}\ncorner identity {}\nboundary free {}\nclassical limit {}\n",
                r.tiles,
                r.covers,
                yn(r.matches),
                yn(r.corner_identity),
                yn(r.boundary_free),
                yn(r.classical)
            );
            Ok(Report { text, json: serde_json::to_value(&r).map_err(internal)?, ok })
        }
        Command::Dimers { poly, arc, max_tiles } => {
            let (t, f) = framed(poly, *arc)?;
            let x = extend(&t, &f).map_err(internal)?;
            if x.d() > *max_tiles {
                return Err(CliError::Input(format!("{} tiles exceed --max-tiles {max_tiles}", x.d())));
            }
            let g = build_snake(&x);
            let covers = g.covers(None, None);
            let mut total = SuperRat::zero();
            for c in &covers {
                total = total.add(&x.cover_weight(&g, c, false, false));
            }
            let gf = total.to_text(&x.reg);
            let list: Vec<Value> = covers
                .iter()
                .map(|c| {
                    json!({
                        "mult": c.mult,
                        "cycles": c.cycles.iter().map(|cy| json!({ "tiles": [cy.tiles.0, cy.tiles.1], "length": cy.vertices.len() })).collect::<Vec<_>>(),
                        "weight": x.cover_weight(&g, c, false, false).to_text(&x.reg),
                    })
                })
                .collect();
            let text = format!("tiles {}\ncovers {}\ngenerating function {gf}\n", x.d(), covers.len());
            Ok(Report {
                text,
                json: json!({ "graph": g, "covers": list, "generating_function": gf }),
                ok: true,
            })
        }
        Command::Fib { n, dimer_max } => {
            let n = *n as usize;
            let rows = fib_table(n, *dimer_max);
            let ids = identities_check(n);
            let mut text = format!("{:>3}  {:<22} {:<22} {:>8}  check\n", "n", "z_n", "w_n", "l_2n-4");
            for r in &rows {
                text += &format!(
                    "{:>3}  {:<22} {:<22} {:>8}  {}\n",
                    r.n,
                    r.z,
                    r.w,
                    r.lucas,
                    if r.pass() { "pass" } else { "fail" }
                );
            }
            text += &format!("identities {}\n", if ids.pass() { "pass" } else { "fail" });
            let ok = ids.pass() && rows.iter().all(|r| r.pass());
            Ok(Report { text, json: json!({ "rows": rows, "identities": ids }), ok })
        }
        Command::OspCheck { polygon, seed, words } => {
            let mut reg = VarRegistry::new();
            let evens = [reg.even("x").map_err(internal)?, reg.even("y").map_err(internal)?];
            let odds = [reg.odd("s").map_err(internal)?, reg.odd("t").map_err(internal)?];
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let mut failure: Option<String> = None;
            let mut prev = SuperMatrix::identity();
            for k in 0..*words {
                let g = random_word(&mut rng, 1 + k % 6, &evens, &odds);
                let ber = g.ber().map_err(internal)?;
                let prod = g.mul(&prev).ber().map_err(internal)?;
                if !g.is_in_osp() || !ber.is_one() || prod != ber.mul(&prev.ber().map_err(internal)?) {
                    failure = Some(format!("word {k}: {:?}", g.to_text(&reg)));
                    break;
                }
                prev = g;
            }
            let mut checked = *words;
            if let (None, Some(p)) = (&failure, polygon) {
                let t = load_polygon(p)?;
                'outer: for i in 0..t.n() {
                    for j in 0..t.n() {
                        if i == j {
                            continue;
                        }
                        let m = holonomy_between(&t, i, j, 0, 0).map_err(internal)?.matrix;
                        checked += 1;
                        if !m.is_in_osp() || !m.ber().map_err(internal)?.is_one() {
                            failure = Some(format!("holonomy {i}->{j}: {:?}", m.osp_defects()));
                            break 'outer;
                        }
                    }
                }
            }
            let ok = failure.is_none();
            let text = match &failure {
                None => format!("{checked} matrices in osp(1|2) with Berezinian 1\n"),
                Some(f) => format!("failed: {f}\n"),
            };
            Ok(Report { text, json: json!({ "checked": checked, "failure": failure }), ok })
        }
        Command::AppendixCheck { seed, words } => {
            let mut checks = appendix_suite().map_err(internal)?;
            let (r, v, w) = generic_pair();
            let evens: Vec<u16> = (0..r.n_even() as u16).collect();
            let odds: Vec<u16> = (0..r.n_odd() as u16).collect();
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let ws: Vec<SuperMatrix> = (0..*words).map(|k| random_word(&mut rng, 1 + k % 4, &evens, &odds)).collect();
            checks.extend(word_suite(&ws, &v, &w).map_err(internal)?);
            Ok(checks_report("light cone", &checks))
        }
    }
}

/// Runs the command line and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 { write!(out, "{}", e.render()) } else { write!(err, "{}", e.render()) };
            return code;
        }
    };
    match execute(&cli) {
        Ok(r) => {
            let _ = if cli.json {
                writeln!(out, "{}", serde_json::to_string_pretty(&r.json).expect("serializable"))
            } else {
                write!(out, "{}", r.text)
            };
            if r.ok {
                0
            } else {
                1
            }
        }
        Err(CliError::Input(m)) => {
            let _ = writeln!(err, "error: {m}");
            2
        }
        Err(CliError::Internal(m)) => {
            let _ = writeln!(err, "verification failed: {m}");
            1
        }
    }
}
