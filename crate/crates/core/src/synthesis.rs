//! The vertex-removal operation and the end-to-end pipeline producing a
//! consistent dimer model for an arbitrary convex lattice polygon, starting
//! from a honeycomb seed for a large enough triangle and removing one
//! extreme lattice point at a time.

use crate::error::{DimerError, Result};
use crate::geom::{v2, LatticePolygon, Vec2};
use crate::hexagons::{adjacent_pairs, decompose, mckay_identify, McKayLabeling};
use crate::model::{Color, DimerModel, Edge, EdgeId, Node, NodeId};
use crate::zigzag::{is_consistent, polygon_from_slopes};
use std::collections::{BTreeMap, BTreeSet};

/// The regular honeycomb dimer on the torus with N^2 hexagonal faces. Its
/// lattice polygon is the triangle (0,0), (N,0), (0,N).
pub fn honeycomb_seed(n: i64) -> Result<DimerModel> {
    if n < 1 {
        return Err(DimerError::BadChoice(format!(
            "honeycomb seed needs N >= 1, got {n}"
        )));
    }
    let n = n as u32;
    let cells = n * n;
    let black = |i: u32, j: u32| NodeId(i * n + j);
    let white = |i: u32, j: u32| NodeId(cells + i * n + j);
    // Edge families: 0..cells are the in-cell edges, then the two wrapped
    // neighbor families.
    let e_z = |i: u32, j: u32| EdgeId(i * n + j);
    let e_x = |i: u32, j: u32| EdgeId(cells + i * n + j);
    let e_y = |i: u32, j: u32| EdgeId(2 * cells + i * n + j);
    let mut nodes = Vec::new();
    let mut edges = Vec::new();
    let mut rotations: BTreeMap<NodeId, Vec<EdgeId>> = BTreeMap::new();
    for i in 0..n {
        for j in 0..n {
            nodes.push(Node {
                id: black(i, j),
                color: Color::Black,
                pos: None,
            });
            nodes.push(Node {
                id: white(i, j),
                color: Color::White,
                pos: None,
            });
            edges.push(Edge {
                id: e_z(i, j),
                black: black(i, j),
                white: white(i, j),
                shift: v2(0, 0),
            });
            edges.push(Edge {
                id: e_x(i, j),
                black: black((i + 1) % n, j),
                white: white(i, j),
                shift: if i + 1 == n { v2(0, 1) } else { v2(0, 0) },
            });
            edges.push(Edge {
                id: e_y(i, j),
                black: black(i, (j + 1) % n),
                white: white(i, j),
                shift: if j + 1 == n { v2(-1, 0) } else { v2(0, 0) },
            });
        }
    }
    for i in 0..n {
        for j in 0..n {
            rotations.insert(white(i, j), vec![e_z(i, j), e_x(i, j), e_y(i, j)]);
            let prev_i = (i + n - 1) % n;
            let prev_j = (j + n - 1) % n;
            rotations.insert(
                black(i, j),
                vec![e_z(i, j), e_x(prev_i, j), e_y(i, prev_j)],
            );
        }
    }
    let model = DimerModel::new(nodes, edges, rotations)?;
    model.validate().ensure_valid()?;
    Ok(model)
}

/// One vertex-removal step: the chosen pair, origin, labeling and the edges
/// deleted (the z-arrows out of the special hexagons).
#[derive(Debug, Clone)]
pub struct RemovalPlan {
    pub corner: Vec2,
    pub pair: (usize, usize),
    pub origin: usize,
    pub labeling: McKayLabeling,
    pub deleted_edges: Vec<EdgeId>,
}

/// Pins the choices of a removal step.
#[derive(Debug, Clone, Default)]
pub struct RemovalOptions {
    /// Zig-zag path ids of the pair; defaults to the smallest admissible.
    pub pair: Option<(usize, usize)>,
    /// Origin hexagon; defaults to the one containing the smallest face id.
    pub origin: Option<usize>,
}

/// Removes `corner` (a vertex of the Newton polygon, in the normalized
/// frame of `polygon_from_slopes`): deletes the z-arrows out of the special
/// hexagons, contracts divalent nodes and re-validates. The output polygon
/// is the hull of the input's lattice points minus the corner.
pub fn remove_vertex(
    model: &DimerModel,
    corner: Vec2,
    options: &RemovalOptions,
) -> Result<(DimerModel, RemovalPlan)> {
    let report = is_consistent(model);
    if !report.is_consistent() {
        return Err(DimerError::Inconsistent(
            "remove_vertex requires a consistent model".into(),
        ));
    }
    remove_vertex_unchecked(model, corner, options)
}

pub(crate) fn remove_vertex_unchecked(
    model: &DimerModel,
    corner: Vec2,
    options: &RemovalOptions,
) -> Result<(DimerModel, RemovalPlan)> {
    // Work on the divalent-contracted model so every intersection run is a
    // single edge.
    let model = model.contract_divalent()?;
    model.validate().ensure_valid()?;
    let polygon = polygon_from_slopes(&model)?;
    if !polygon.is_vertex(corner) {
        return Err(DimerError::NotAPolygonVertex(corner));
    }
    let expected = expected_polygon(&polygon, corner)?.normalize();

    let pairs = adjacent_pairs(&model, &polygon, corner)?;
    let pair = match options.pair {
        Some(p) => {
            if !pairs.contains(&p) {
                return Err(DimerError::BadChoice(format!(
                    "pair {p:?} is not admissible for corner {corner}; choices: {pairs:?}"
                )));
            }
            p
        }
        None => pairs[0],
    };
    let lat = decompose(&model, pair.0, pair.1)?;
    let origin = match options.origin {
        Some(o) => o,
        None => lat.face_hex[&crate::model::FaceId(0)],
    };
    let (u1, u2) = polygon.corner_dirs(corner).expect("corner checked");
    let labeling = mckay_identify(&model, &lat, origin, (u1, u2))?;

    // The z-arrows out of the special hexagons; with divalent nodes
    // contracted every run is a single edge.
    let mut doomed: BTreeSet<EdgeId> = BTreeSet::new();
    for hex in &lat.hexagons {
        if !labeling.specials.contains(&labeling.label[hex.id]) {
            continue;
        }
        let run = &lat.runs[hex.out_run];
        debug_assert_eq!(run.edges.len(), 1);
        doomed.extend(run.edges.iter().copied());
    }
    if doomed.len() != labeling.specials.len() {
        return Err(DimerError::Internal(format!(
            "planned {} deletions for {} specials",
            doomed.len(),
            labeling.specials.len()
        )));
    }

    let stripped = model.remove_edges(&doomed)?;
    let result = stripped.contract_divalent()?;
    result.validate().ensure_valid()?;
    let got = polygon_from_slopes(&result)?;
    if got != expected {
        return Err(DimerError::Internal(format!(
            "removal produced polygon {:?}, expected {:?}",
            got.vertices(),
            expected.vertices()
        )));
    }
    let plan = RemovalPlan {
        corner,
        pair,
        origin,
        labeling,
        deleted_edges: doomed.into_iter().collect(),
    };
    Ok((result, plan))
}

/// Hull of the polygon's lattice points with `corner` removed; errors when
/// fewer than three extreme points would remain.
pub fn expected_polygon(polygon: &LatticePolygon, corner: Vec2) -> Result<LatticePolygon> {
    let pts: Vec<Vec2> = polygon
        .lattice_points()
        .into_iter()
        .filter(|&p| p != corner)
        .collect();
    LatticePolygon::hull(&pts).map_err(|_| DimerError::PolygonWouldDegenerate(corner))
}

/// A full synthesis run: the seed size, every removal plan, and the models
/// along the way (`models[0]` is the seed, `models[i+1]` the result of
/// `plans[i]`).
#[derive(Debug)]
pub struct SynthesisTrace {
    pub seed: i64,
    pub target: LatticePolygon,
    pub plans: Vec<RemovalPlan>,
    pub models: Vec<DimerModel>,
}

impl SynthesisTrace {
    pub fn final_model(&self) -> &DimerModel {
        self.models.last().expect("trace holds at least the seed")
    }
}

/// Builds a consistent dimer model whose Newton polygon is `target` (up to
/// the shared normalization): embeds the target into the smallest triangle
/// conv{(0,0),(N,0),(0,N)} and removes extreme lattice points outside the
/// target one at a time, corners ordered by angle about the centroid.
pub fn synthesize(target: &LatticePolygon, seed_override: Option<i64>) -> Result<SynthesisTrace> {
    // Normalize the target to nonnegative coordinates at the origin.
    let minx = target.vertices().iter().map(|p| p.x).min().unwrap();
    let miny = target.vertices().iter().map(|p| p.y).min().unwrap();
    let target = target.translate(v2(-minx, -miny));
    let needed = target
        .vertices()
        .iter()
        .map(|p| p.x + p.y)
        .max()
        .unwrap();
    let seed_n = match seed_override {
        Some(s) => {
            if s < needed {
                return Err(DimerError::BadChoice(format!(
                    "seed {s} is too small; the target needs at least {needed}"
                )));
            }
            s
        }
        None => needed.max(1),
    };
    let mut models = vec![honeycomb_seed(seed_n)?];
    let mut plans = Vec::new();
    // Track the current polygon in the target's frame alongside the model,
    // whose own polygon is normalized.
    let mut poly = LatticePolygon::hull(&[v2(0, 0), v2(seed_n, 0), v2(0, seed_n)]).unwrap();
    {
        let normalized = polygon_from_slopes(models.last().unwrap())?;
        if normalized != poly.normalize() {
            return Err(DimerError::Internal(
                "honeycomb seed polygon mismatch".into(),
            ));
        }
    }
    loop {
        if poly.normalize() == target.normalize() && same_point_set(&poly, &target) {
            break;
        }
        let candidates = removable_corners(&poly, &target);
        let Some(&corner) = candidates.first() else {
            return Err(DimerError::Internal(
                "no removable corner although the target is not reached".into(),
            ));
        };
        // The model's polygon is normalized; translate the corner into its
        // frame.
        let model = models.last().unwrap().clone();
        let normalized = polygon_from_slopes(&model)?;
        let offset = poly.vertices()[0] - normalized.vertices()[0];
        let (next, plan) =
            remove_vertex_unchecked(&model, corner - offset, &RemovalOptions::default())?;
        let next_report = is_consistent(&next);
        if !next_report.is_consistent() {
            return Err(DimerError::Internal(
                "vertex removal produced an inconsistent model".into(),
            ));
        }
        poly = expected_polygon(&poly, corner)?;
        plans.push(plan);
        models.push(next);
    }
    Ok(SynthesisTrace {
        seed: seed_n,
        target,
        plans,
        models,
    })
}

fn same_point_set(a: &LatticePolygon, b: &LatticePolygon) -> bool {
    a.vertices() == b.vertices()
}

/// Extreme points of `poly` outside `target`, ordered by angle about the
/// centroid (ties by coordinates).
fn removable_corners(poly: &LatticePolygon, target: &LatticePolygon) -> Vec<Vec2> {
    let verts = poly.vertices();
    let k = verts.len() as i64;
    let sum = verts.iter().fold(v2(0, 0), |a, &b| a + b);
    let mut out: Vec<Vec2> = verts
        .iter()
        .copied()
        .filter(|&p| !target.contains(p))
        .collect();
    out.sort_by(|&a, &b| {
        let ra = a.scale(k) - sum;
        let rb = b.scale(k) - sum;
        ra.angle_cmp(rb).then(a.cmp(&b))
    });
    out
}
