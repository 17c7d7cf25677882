//! Static SVG rendering of a fundamental domain: nodes, edges, and optional
//! matching or zig-zag overlays. Deterministic for a fixed layout seed.

use crate::matchings::PerfectMatching;
use crate::model::{Color, DimerModel, NodeId};
use crate::zigzag::ZigZagPath;
use std::collections::BTreeMap;
use std::fmt::Write as _;

const SIZE: f64 = 420.0;
const MARGIN: f64 = 30.0;

#[derive(Default)]
pub struct RenderOptions {
    pub matching: Option<PerfectMatching>,
    pub zigzag: Option<ZigZagPath>,
    pub layout_seed: u64,
}

/// Positions in the unit square; stored ones are used when every node has
/// one, otherwise a deterministic spring layout is synthesized.
fn layout(model: &DimerModel, seed: u64) -> BTreeMap<NodeId, (f64, f64)> {
    if model.nodes().iter().all(|n| n.pos.is_some()) {
        return model
            .nodes()
            .iter()
            .map(|n| {
                let p = n.pos.unwrap();
                let x = *p.x.numer() as f64 / *p.x.denom() as f64;
                let y = *p.y.numer() as f64 / *p.y.denom() as f64;
                (n.id, (x, y))
            })
            .collect();
    }
    // Deterministic scatter from a small LCG, then spring relaxation on the
    // torus respecting edge shifts.
    let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    let mut rand01 = move || {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        ((state >> 11) as f64) / ((1u64 << 53) as f64)
    };
    let mut pos: BTreeMap<NodeId, (f64, f64)> = model
        .nodes()
        .iter()
        .map(|n| (n.id, (rand01(), rand01())))
        .collect();
    for _ in 0..300 {
        let mut force: BTreeMap<NodeId, (f64, f64)> =
            model.nodes().iter().map(|n| (n.id, (0.0, 0.0))).collect();
        for e in model.edges() {
            let (bx, by) = pos[&e.black];
            let (wx, wy) = pos[&e.white];
            // Target: white + shift should sit near black on the cover.
            let mut dx = wx + e.shift.x as f64 - bx;
            let mut dy = wy + e.shift.y as f64 - by;
            dx -= dx.round();
            dy -= dy.round();
            let fb = force.get_mut(&e.black).unwrap();
            fb.0 += 0.12 * dx;
            fb.1 += 0.12 * dy;
            let fw = force.get_mut(&e.white).unwrap();
            fw.0 -= 0.12 * dx;
            fw.1 -= 0.12 * dy;
        }
        // Mild repulsion keeps distinct nodes apart.
        let ids: Vec<NodeId> = model.nodes().iter().map(|n| n.id).collect();
        for (ai, &a) in ids.iter().enumerate() {
            for &b in ids.iter().skip(ai + 1) {
                let (ax, ay) = pos[&a];
                let (bx, by) = pos[&b];
                let mut dx = ax - bx;
                let mut dy = ay - by;
                dx -= dx.round();
                dy -= dy.round();
                let d2 = (dx * dx + dy * dy).max(1e-4);
                let push = 0.002 / d2;
                let fa = force.get_mut(&a).unwrap();
                fa.0 += push * dx;
                fa.1 += push * dy;
                let fb = force.get_mut(&b).unwrap();
                fb.0 -= push * dx;
                fb.1 -= push * dy;
            }
        }
        for (id, f) in force {
            let p = pos.get_mut(&id).unwrap();
            p.0 = (p.0 + f.0).rem_euclid(1.0);
            p.1 = (p.1 + f.1).rem_euclid(1.0);
        }
    }
    pos
}

fn sx(x: f64) -> f64 {
    MARGIN + x * SIZE
}

fn sy(y: f64) -> f64 {
    // SVG y grows downward; flip so the torus is drawn mathematically.
    MARGIN + (1.0 - y) * SIZE
}

pub fn render_svg(model: &DimerModel, opts: &RenderOptions) -> String {
    let pos = layout(model, opts.layout_seed);
    let mut svg = String::new();
    let total = SIZE + 2.0 * MARGIN;
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{total}\" height=\"{total}\" viewBox=\"0 0 {total} {total}\">"
    );
    let _ = writeln!(
        svg,
        "  <rect x=\"{}\" y=\"{}\" width=\"{SIZE}\" height=\"{SIZE}\" fill=\"white\" stroke=\"#888\" stroke-dasharray=\"4 3\"/>",
        MARGIN, MARGIN
    );
    let highlighted: std::collections::BTreeSet<u32> = opts
        .matching
        .as_ref()
        .map(|m| m.edges.iter().map(|e| e.0).collect())
        .unwrap_or_default();
    let zz_edges: std::collections::BTreeSet<u32> = opts
        .zigzag
        .as_ref()
        .map(|z| z.edges().iter().map(|e| e.0).collect())
        .unwrap_or_default();
    // Draw each edge for the 3x3 block of deck translates so wrapped
    // segments appear inside the domain.
    for e in model.edges() {
        let (bx, by) = pos[&e.black];
        let (wx, wy) = pos[&e.white];
        for ddx in -1..=1 {
            for ddy in -1..=1 {
                let x1 = bx + ddx as f64;
                let y1 = by + ddy as f64;
                let x2 = wx + (e.shift.x + ddx) as f64;
                let y2 = wy + (e.shift.y + ddy) as f64;
                let inside = |x: f64, y: f64| (-0.02..=1.02).contains(&x) && (-0.02..=1.02).contains(&y);
                if !inside(x1, y1) && !inside(x2, y2) {
                    continue;
                }
                let (color, width) = if highlighted.contains(&e.id.0) {
                    ("#d62728", 3.0)
                } else if zz_edges.contains(&e.id.0) {
                    ("#1f77b4", 2.4)
                } else {
                    ("#333", 1.2)
                };
                let _ = writeln!(
                    svg,
                    "  <line x1=\"{:.4}\" y1=\"{:.4}\" x2=\"{:.4}\" y2=\"{:.4}\" stroke=\"{}\" stroke-width=\"{}\"/>",
                    sx(x1), sy(y1), sx(x2), sy(y2), color, width
                );
            }
        }
    }
    for n in model.nodes() {
        let (x, y) = pos[&n.id];
        let (fill, stroke) = match n.color {
            Color::Black => ("#000", "#000"),
            Color::White => ("#fff", "#000"),
        };
        let _ = writeln!(
            svg,
            "  <circle cx=\"{:.4}\" cy=\"{:.4}\" r=\"6\" fill=\"{}\" stroke=\"{}\" stroke-width=\"1.4\"/>",
            sx(x), sy(y), fill, stroke
        );
        let _ = writeln!(
            svg,
            "  <text x=\"{:.4}\" y=\"{:.4}\" font-size=\"9\" fill=\"#555\">{}</text>",
            sx(x) + 7.0,
            sy(y) - 7.0,
            n.id.0
        );
    }
    svg.push_str("</svg>\n");
    svg
}
