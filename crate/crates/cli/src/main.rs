//! Batch commands over the dimer interchange format. All outputs are
//! deterministic byte streams for fixed inputs and options.
//!
//! Exit codes: 0 on success, 1 on domain errors (with a JSON diagnostic on
//! stderr), 2 on usage errors.

use clap::{Args, Parser, Subcommand, ValueEnum};
use dimer_models::geom::{v2, LatticePolygon, Vec2};
use dimer_models::model::DimerModel;
use dimer_models::synthesis::{RemovalOptions, SynthesisTrace};
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "dimer", version, about = "Dimer models on the two-torus")]
struct Cli {
    /// Output format for reports.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct CornerArgs {
    /// Polygon corner "x,y" in the normalized frame.
    #[arg(long, value_parser = parse_vec2)]
    corner: Vec2,
    /// Zig-zag path ids "i,j" of the chosen pair.
    #[arg(long, value_parser = parse_pair)]
    pair: Option<(usize, usize)>,
    /// Origin hexagon index.
    #[arg(long)]
    origin: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Check structural validity of a model.
    Validate { model: PathBuf },
    /// Enumerate perfect matchings, height changes and the characteristic
    /// polynomial.
    Matchings {
        model: PathBuf,
        /// Index of the reference matching (default 0).
        #[arg(long, default_value_t = 0)]
        d0: usize,
    },
    /// The Newton polygon of the model.
    Polygon { model: PathBuf },
    /// Zig-zag paths as edge cycles with slopes.
    Zigzags { model: PathBuf },
    /// The consistency report.
    Check { model: PathBuf },
    /// Gulotta's properly-ordered predicate.
    ProperlyOrdered { model: PathBuf },
    /// Large-hexagon decomposition, McKay labeling and corner matching at a
    /// polygon corner.
    Hexagons {
        model: PathBuf,
        #[command(flatten)]
        corner: CornerArgs,
    },
    /// Hirzebruch-Jung data for n/q; with d, also its decomposition.
    Hj {
        n: i64,
        q: i64,
        d: Option<i64>,
    },
    /// Remove one vertex of the Newton polygon.
    RemoveVertex {
        model: PathBuf,
        #[command(flatten)]
        corner: CornerArgs,
        /// Write the resulting model here (default: stdout).
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Synthesize a consistent model for a convex lattice polygon.
    Synth {
        /// Polygon vertices "x0,y0 x1,y1 ...".
        #[arg(long)]
        polygon: String,
        /// Seed triangle size (default: smallest that contains the target).
        #[arg(long)]
        seed: Option<i64>,
        /// Write the full trace (plans and intermediate models) here.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Write the final model here (default: stdout).
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Render the fundamental domain as SVG.
    Render {
        model: PathBuf,
        /// Write the SVG here (default: stdout).
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// Highlight the k-th perfect matching.
        #[arg(long)]
        matching: Option<usize>,
        /// Highlight the i-th zig-zag path.
        #[arg(long)]
        zigzag: Option<usize>,
        /// Seed for the synthesized layout when positions are absent.
        #[arg(long, default_value_t = 0)]
        layout_seed: u64,
    },
}

fn parse_vec2(s: &str) -> Result<Vec2, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err("expected \"x,y\"".into());
    }
    let x = parts[0].trim().parse().map_err(|e| format!("{e}"))?;
    let y = parts[1].trim().parse().map_err(|e| format!("{e}"))?;
    Ok(v2(x, y))
}

fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err("expected \"i,j\"".into());
    }
    let i = parts[0].trim().parse().map_err(|e| format!("{e}"))?;
    let j = parts[1].trim().parse().map_err(|e| format!("{e}"))?;
    Ok((i, j))
}

fn parse_polygon(s: &str) -> anyhow::Result<LatticePolygon> {
    let mut pts = Vec::new();
    for tok in s.split_whitespace() {
        pts.push(parse_vec2(tok).map_err(|e| anyhow::anyhow!("bad vertex {tok:?}: {e}"))?);
    }
    Ok(LatticePolygon::hull(&pts)?)
}

fn load(path: &Path) -> anyhow::Result<DimerModel> {
    Ok(dimer_models::io::read_model(path)?)
}

fn poly_json(p: &LatticePolygon) -> Value {
    json!(p.vertices().iter().map(|v| [v.x, v.y]).collect::<Vec<_>>())
}

fn emit(format: Format, value: &Value) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(value).unwrap()),
        Format::Text => println!("{}", render_text(value, 0)),
    }
}

fn render_text(v: &Value, indent: usize) -> String {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => map
            .iter()
            .map(|(k, v)| match v {
                Value::Object(_) | Value::Array(_) => {
                    format!("{pad}{k}:\n{}", render_text(v, indent + 1))
                }
                _ => format!("{pad}{k}: {v}"),
            })
            .collect::<Vec<_>>()
            .join("\n"),
        Value::Array(items) => items
            .iter()
            .map(|x| match x {
                Value::Object(_) => render_text(x, indent),
                _ => format!("{pad}{x}"),
            })
            .collect::<Vec<_>>()
            .join("\n"),
        _ => format!("{pad}{v}"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(err) => {
            let diag = json!({ "error": err.to_string() });
            eprintln!("{diag}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> anyhow::Result<ExitCode> {
    use dimer_models::{hexagons, hj, matchings, render, synthesis, zigzag};
    match &cli.command {
        Command::Validate { model } => {
            let m = load(model)?;
            let report = m.validate();
            let value = serde_json::to_value(&report)?;
            emit(cli.format, &json!({ "valid": report.is_valid(), "report": value }));
            Ok(if report.is_valid() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Matchings { model, d0 } => {
            let m = load(model)?;
            m.validate().ensure_valid()?;
            let all = matchings::enumerate_matchings(&m);
            if all.is_empty() {
                anyhow::bail!("degenerate model: no perfect matchings");
            }
            let dref = all
                .get(*d0)
                .ok_or_else(|| anyhow::anyhow!("no matching {d0}; found {}", all.len()))?;
            let heights: Vec<[i64; 2]> = all
                .iter()
                .map(|d| {
                    let h = matchings::height_change(&m, d, dref).unwrap();
                    [h.x, h.y]
                })
                .collect();
            let z = matchings::characteristic_polynomial(&m, dref)?;
            emit(
                cli.format,
                &json!({
                    "matchings": all
                        .iter()
                        .map(|d| d.edges.iter().map(|e| e.0).collect::<Vec<_>>())
                        .collect::<Vec<_>>(),
                    "d0": d0,
                    "heights": heights,
                    "polynomial": z.rows(),
                    "nondegenerate": matchings::is_nondegenerate(&m),
                }),
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Polygon { model } => {
            let m = load(model)?;
            m.validate().ensure_valid()?;
            let p = matchings::newton_polygon(&m)?;
            emit(cli.format, &json!({ "polygon": poly_json(&p) }));
            Ok(ExitCode::SUCCESS)
        }
        Command::Zigzags { model } => {
            let m = load(model)?;
            m.validate().ensure_valid()?;
            let paths = zigzag::zigzag_paths(&m);
            emit(
                cli.format,
                &json!({
                    "paths": paths
                        .iter()
                        .map(|p| {
                            json!({
                                "id": p.id,
                                "slope": [p.slope.x, p.slope.y],
                                "edges": p.edges().iter().map(|e| e.0).collect::<Vec<_>>(),
                            })
                        })
                        .collect::<Vec<_>>()
                }),
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Check { model } => {
            let m = load(model)?;
            m.validate().ensure_valid()?;
            let report = zigzag::is_consistent(&m);
            emit(
                cli.format,
                &json!({
                    "consistent": report.is_consistent(),
                    "trivial_paths": report.trivial_paths,
                    "self_intersections": report
                        .self_intersections
                        .iter()
                        .map(|w| json!({ "path": w.z, "i": w.i, "j": w.j }))
                        .collect::<Vec<_>>(),
                    "same_direction_pairs": report
                        .same_direction_pairs
                        .iter()
                        .map(|w| {
                            json!({
                                "z": w.z,
                                "w": w.w,
                                "tau": [w.tau.x, w.tau.y],
                                "first": [w.first.0, w.first.1],
                                "second": [w.second.0, w.second.1],
                            })
                        })
                        .collect::<Vec<_>>(),
                }),
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::ProperlyOrdered { model } => {
            let m = load(model)?;
            m.validate().ensure_valid()?;
            let report = zigzag::is_properly_ordered(&m);
            emit(
                cli.format,
                &json!({
                    "properly_ordered": report.is_properly_ordered(),
                    "trivial_paths": report.trivial_paths,
                    "same_slope_shared_nodes": report
                        .same_slope_shared_nodes
                        .iter()
                        .map(|(p, q, n)| json!([p, q, n.0]))
                        .collect::<Vec<_>>(),
                    "misordered_nodes": report
                        .misordered_nodes
                        .iter()
                        .map(|n| n.0)
                        .collect::<Vec<_>>(),
                }),
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Hexagons { model, corner } => {
            let m = load(model)?.contract_divalent()?;
            m.validate().ensure_valid()?;
            if !zigzag::is_consistent(&m).is_consistent() {
                anyhow::bail!("model is not consistent");
            }
            let polygon = zigzag::polygon_from_slopes(&m)?;
            let pairs = hexagons::adjacent_pairs(&m, &polygon, corner.corner)?;
            let pair = match corner.pair {
                Some(p) if pairs.contains(&p) => p,
                Some(p) => anyhow::bail!("pair {p:?} not admissible; choices: {pairs:?}"),
                None => pairs[0],
            };
            let lat = hexagons::decompose(&m, pair.0, pair.1)?;
            let origin = corner
                .origin
                .unwrap_or_else(|| lat.face_hex[&dimer_models::FaceId(0)]);
            let (u1, u2) = polygon.corner_dirs(corner.corner).unwrap();
            let labeling = hexagons::mckay_identify(&m, &lat, origin, (u1, u2))?;
            let d = hexagons::corner_matching(&m, &lat)?;
            emit(
                cli.format,
                &json!({
                    "pair": [pair.0, pair.1],
                    "order": lat.order,
                    "n": labeling.n,
                    "q": labeling.q,
                    "origin": origin,
                    "hexagons": lat
                        .hexagons
                        .iter()
                        .map(|h| {
                            json!({
                                "id": h.id,
                                "label": labeling.label[h.id],
                                "faces": h.faces.iter().map(|f| f.0).collect::<Vec<_>>(),
                                "source": h.source.0,
                                "sink": h.sink.0,
                            })
                        })
                        .collect::<Vec<_>>(),
                    "runs": lat
                        .runs
                        .iter()
                        .map(|r| {
                            json!({
                                "edges": r.edges.iter().map(|e| e.0).collect::<Vec<_>>(),
                                "from_hexagon": r.source_hex,
                                "to_hexagon": r.sink_hex,
                            })
                        })
                        .collect::<Vec<_>>(),
                    "specials": labeling.specials.iter().collect::<Vec<_>>(),
                    "corner_matching": d.edges.iter().map(|e| e.0).collect::<Vec<_>>(),
                }),
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Hj { n, q, d } => {
            use num::bigint::BigInt;
            let hjd = hj::hj_expand(&BigInt::from(*n), &BigInt::from(*q))?;
            let mut out = json!({
                "n": n,
                "q": q,
                "b": hjd.b.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                "i": hjd.i.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                "j": hjd.j.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                "specials": hjd.specials.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            });
            if let Some(d) = d {
                let w = hj::wunram_decompose(&hjd, &BigInt::from(*d))?;
                let f = hj::dual_label(&hjd, &w.coeffs);
                out["decomposition"] = json!({
                    "d": d.to_string(),
                    "coefficients": w.coeffs.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                    "dual_label": f.to_string(),
                });
            }
            emit(cli.format, &out);
            Ok(ExitCode::SUCCESS)
        }
        Command::RemoveVertex { model, corner, out } => {
            let m = load(model)?;
            m.validate().ensure_valid()?;
            let opts = RemovalOptions {
                pair: corner.pair,
                origin: corner.origin,
            };
            let (next, plan) = synthesis::remove_vertex(&m, corner.corner, &opts)?;
            let text = dimer_models::io::to_json(&next);
            match out {
                Some(path) => std::fs::write(path, &text)?,
                None => println!("{text}"),
            }
            eprintln!(
                "{}",
                json!({
                    "corner": [plan.corner.x, plan.corner.y],
                    "pair": [plan.pair.0, plan.pair.1],
                    "origin": plan.origin,
                    "n": plan.labeling.n,
                    "q": plan.labeling.q,
                    "deleted_edges": plan.deleted_edges.iter().map(|e| e.0).collect::<Vec<_>>(),
                })
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Synth {
            polygon,
            seed,
            trace,
            out,
        } => {
            let target = parse_polygon(polygon)?;
            let result = synthesis::synthesize(&target, *seed)?;
            let text = dimer_models::io::to_json(result.final_model());
            match out {
                Some(path) => std::fs::write(path, &text)?,
                None => println!("{text}"),
            }
            if let Some(path) = trace {
                std::fs::write(path, trace_json(&result).to_string())?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Render {
            model,
            out,
            matching,
            zigzag: zz,
            layout_seed,
        } => {
            let m = load(model)?;
            m.validate().ensure_valid()?;
            let mut opts = render::RenderOptions {
                layout_seed: *layout_seed,
                ..Default::default()
            };
            if let Some(k) = matching {
                let all = matchings::enumerate_matchings(&m);
                opts.matching = Some(
                    all.get(*k)
                        .ok_or_else(|| anyhow::anyhow!("no matching {k}"))?
                        .clone(),
                );
            }
            if let Some(i) = zz {
                let paths = zigzag::zigzag_paths(&m);
                opts.zigzag = Some(
                    paths
                        .get(*i)
                        .ok_or_else(|| anyhow::anyhow!("no zig-zag path {i}"))?
                        .clone(),
                );
            }
            let svg = render::render_svg(&m, &opts);
            match out {
                Some(path) => std::fs::write(path, svg)?,
                None => print!("{svg}"),
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn trace_json(trace: &SynthesisTrace) -> Value {
    json!({
        "seed": trace.seed,
        "target": poly_json(&trace.target),
        "steps": trace
            .plans
            .iter()
            .map(|p| {
                json!({
                    "corner": [p.corner.x, p.corner.y],
                    "pair": [p.pair.0, p.pair.1],
                    "origin": p.origin,
                    "n": p.labeling.n,
                    "q": p.labeling.q,
                    "specials": p.labeling.specials.iter().collect::<Vec<_>>(),
                    "deleted_edges": p.deleted_edges.iter().map(|e| e.0).collect::<Vec<_>>(),
                })
            })
            .collect::<Vec<_>>(),
        "models": trace
            .models
            .iter()
            .map(|m| serde_json::from_str::<Value>(&dimer_models::io::to_json(m)).unwrap())
            .collect::<Vec<_>>(),
    })
}
