//! Large-hexagon decomposition. A pair of zig-zag paths with adjacent
//! slopes cuts the torus into hexagonal cells, each carrying a source and a
//! sink vertex of the quiver; the cell lattice is a honeycomb identified
//! with the McKay quiver of a cyclic group 1/n(1,q), which drives the
//! corner perfect-matching construction and the vertex-removal step.

use crate::error::{DimerError, Result};
use crate::geom::{LatticePolygon, Vec2, ZERO};
use crate::hj::hj_expand;
use crate::matchings::PerfectMatching;
use crate::model::{Color, DimerModel, Dir, Edge, EdgeId, FaceId, Node, NodeId};
use crate::quiver::{dual_quiver, Quiver, QuiverPath};
use crate::zigzag::{path_is_minimal, zigzag_paths, Step, ZigZagPath};
use num::bigint::BigInt;
use num::ToPrimitive;
use std::collections::{BTreeMap, BTreeSet};

/// A maximal shared run of the two chosen paths: consecutive edges through
/// divalent nodes, an odd number of them, all bounding the same two faces.
#[derive(Debug, Clone)]
pub struct Run {
    pub edges: Vec<EdgeId>,
    /// Source of the terminal arrows (a quiver vertex).
    pub source_face: FaceId,
    /// Target of the terminal arrows.
    pub sink_face: FaceId,
    pub source_hex: usize,
    pub sink_hex: usize,
    /// End nodes of the run path.
    pub end_nodes: (NodeId, NodeId),
}

#[derive(Debug, Clone)]
pub struct Hexagon {
    pub id: usize,
    pub faces: Vec<FaceId>,
    pub source: FaceId,
    pub sink: FaceId,
    /// Run providing this hexagon's source (its z-arrow out).
    pub out_run: usize,
    /// Run providing this hexagon's sink.
    pub in_run: usize,
}

#[derive(Debug, Clone)]
pub struct HexagonLattice {
    pub z: usize,
    pub w: usize,
    pub hexagons: Vec<Hexagon>,
    pub runs: Vec<Run>,
    /// Which hexagon each face belongs to.
    pub face_hex: BTreeMap<FaceId, usize>,
    /// Absolute determinant of the two slopes; equals the hexagon count.
    pub order: i64,
}

/// Identification of the hexagon lattice with the McKay quiver of 1/n(1,q):
/// labels are Z/n characters, 0 at the origin hexagon, stepping by 1 along
/// x-arrows and by q along y-arrows.
#[derive(Debug, Clone)]
pub struct McKayLabeling {
    pub n: i64,
    pub q: i64,
    pub origin: usize,
    pub label: Vec<i64>,
    /// Per hexagon, the run realizing its z-arrow (multiplication by z).
    pub z_arrow_run: Vec<usize>,
    pub specials: BTreeSet<i64>,
}

/// All (z, w) candidate pairs for removing `corner`: z runs over the paths
/// whose slope is the outward normal of the boundary edge arriving at the
/// corner, w over those of the departing edge.
pub fn adjacent_pairs(
    model: &DimerModel,
    polygon: &LatticePolygon,
    corner: Vec2,
) -> Result<Vec<(usize, usize)>> {
    if !polygon.is_vertex(corner) {
        return Err(DimerError::NotAPolygonVertex(corner));
    }
    let (u1, u2) = polygon.corner_dirs(corner).expect("corner is a vertex");
    // u1 points back along the incoming edge, u2 along the outgoing one.
    let normal_in = (-u1).rot270();
    let normal_out = u2.rot270();
    let paths = zigzag_paths(model);
    let zs: Vec<usize> = paths
        .iter()
        .filter(|p| p.slope == normal_in)
        .map(|p| p.id)
        .collect();
    let ws: Vec<usize> = paths
        .iter()
        .filter(|p| p.slope == normal_out)
        .map(|p| p.id)
        .collect();
    if zs.is_empty() || ws.is_empty() {
        return Err(DimerError::Internal(format!(
            "no zig-zag paths with slopes {normal_in} / {normal_out}"
        )));
    }
    let mut out = Vec::new();
    for &a in &zs {
        for &b in &ws {
            out.push((a, b));
        }
    }
    Ok(out)
}

/// Cuts the torus along the union of the two paths and assembles the
/// hexagon cells, their runs and source/sink vertices.
pub fn decompose(model: &DimerModel, z_id: usize, w_id: usize) -> Result<HexagonLattice> {
    let paths = zigzag_paths(model);
    let z = paths
        .get(z_id)
        .ok_or_else(|| DimerError::BadChoice(format!("no zig-zag path {z_id}")))?;
    let w = paths
        .get(w_id)
        .ok_or_else(|| DimerError::BadChoice(format!("no zig-zag path {w_id}")))?;
    let order = z.slope.det(w.slope).abs();
    if order == 0 {
        return Err(DimerError::BadChoice(format!(
            "slopes {} and {} are parallel",
            z.slope, w.slope
        )));
    }
    let z_edges: BTreeSet<EdgeId> = z.edges().into_iter().collect();
    let w_edges: BTreeSet<EdgeId> = w.edges().into_iter().collect();
    let boundary: BTreeSet<EdgeId> = z_edges.union(&w_edges).copied().collect();
    let shared: BTreeSet<EdgeId> = z_edges.intersection(&w_edges).copied().collect();
    if shared.is_empty() {
        return Err(DimerError::Inconsistent(
            "chosen paths do not intersect".into(),
        ));
    }

    // Cells: faces glued across edges not on the union of the two paths.
    let faces = model.faces();
    let side_faces = model.side_faces();
    let mut parent: Vec<usize> = (0..faces.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for e in model.edges() {
        if boundary.contains(&e.id) {
            continue;
        }
        let a = side_faces[&(e.id, Dir::BlackToWhite)].0 as usize;
        let b = side_faces[&(e.id, Dir::WhiteToBlack)].0 as usize;
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        parent[ra] = rb;
    }
    let mut cluster_ids: BTreeMap<usize, usize> = BTreeMap::new();
    let mut face_hex: BTreeMap<FaceId, usize> = BTreeMap::new();
    for f in &faces {
        let root = find(&mut parent, f.id.0 as usize);
        let next = cluster_ids.len();
        let hex = *cluster_ids.entry(root).or_insert(next);
        face_hex.insert(f.id, hex);
    }
    let hex_count = cluster_ids.len();
    if hex_count as i64 != order {
        return Err(DimerError::Inconsistent(format!(
            "expected {order} hexagons from the slope determinant, found {hex_count}"
        )));
    }

    // Runs: connected components of the shared edges; each must be a path
    // with divalent interior nodes and an odd number of edges.
    let quiver = dual_quiver(model);
    let mut runs = Vec::new();
    let mut seen: BTreeSet<EdgeId> = BTreeSet::new();
    for &start in &shared {
        if seen.contains(&start) {
            continue;
        }
        let mut comp: BTreeSet<EdgeId> = BTreeSet::new();
        let mut stack = vec![start];
        while let Some(e) = stack.pop() {
            if !comp.insert(e) {
                continue;
            }
            let edge = model.edge(e);
            for node in [edge.black, edge.white] {
                for &e2 in model.rotation(node) {
                    if shared.contains(&e2) && !comp.contains(&e2) {
                        stack.push(e2);
                    }
                }
            }
        }
        seen.extend(comp.iter().copied());
        let run = order_run(model, &comp)?;
        if run.len() % 2 == 0 {
            return Err(DimerError::Inconsistent(format!(
                "shared run of {} edges; the chosen slopes are not adjacent",
                run.len()
            )));
        }
        for win in run.windows(2) {
            let shared_node = common_node(model, win[0], win[1])
                .ok_or_else(|| DimerError::Internal("run edges do not chain".into()))?;
            if model.degree(shared_node) != 2 {
                return Err(DimerError::Inconsistent(format!(
                    "run interior node {} is not divalent",
                    shared_node.0
                )));
            }
        }
        let first = quiver.arrow(run[0]);
        let last = quiver.arrow(*run.last().unwrap());
        if (first.source, first.target) != (last.source, last.target) {
            return Err(DimerError::Inconsistent(
                "terminal arrows of a shared run disagree".into(),
            ));
        }
        let (n0, nk) = if run.len() == 1 {
            let e = model.edge(run[0]);
            (e.black, e.white)
        } else {
            (
                outer_node(model, &run, run[0]),
                outer_node(model, &run, *run.last().unwrap()),
            )
        };
        runs.push(Run {
            edges: run,
            source_face: first.source,
            sink_face: first.target,
            source_hex: 0,
            sink_hex: 0,
            end_nodes: (n0, nk),
        });
    }
    if runs.len() as i64 != order {
        return Err(DimerError::Inconsistent(format!(
            "expected {order} intersection runs, found {}",
            runs.len()
        )));
    }
    for r in &mut runs {
        r.source_hex = face_hex[&r.source_face];
        r.sink_hex = face_hex[&r.sink_face];
    }

    // Each hexagon owns exactly one source and one sink.
    let mut hexagons: Vec<Hexagon> = (0..hex_count)
        .map(|id| Hexagon {
            id,
            faces: Vec::new(),
            source: FaceId(0),
            sink: FaceId(0),
            out_run: usize::MAX,
            in_run: usize::MAX,
        })
        .collect();
    for f in &faces {
        hexagons[face_hex[&f.id]].faces.push(f.id);
    }
    for (ri, r) in runs.iter().enumerate() {
        let h = &mut hexagons[r.source_hex];
        if h.out_run != usize::MAX {
            return Err(DimerError::Inconsistent(format!(
                "hexagon {} has two source runs",
                h.id
            )));
        }
        h.out_run = ri;
        h.source = r.source_face;
        let h = &mut hexagons[r.sink_hex];
        if h.in_run != usize::MAX {
            return Err(DimerError::Inconsistent(format!(
                "hexagon {} has two sink runs",
                h.id
            )));
        }
        h.in_run = ri;
        h.sink = r.sink_face;
    }

    Ok(HexagonLattice {
        z: z_id,
        w: w_id,
        hexagons,
        runs,
        face_hex,
        order,
    })
}

/// Orders a connected shared component into a path of edges.
fn order_run(model: &DimerModel, comp: &BTreeSet<EdgeId>) -> Result<Vec<EdgeId>> {
    if comp.len() == 1 {
        return Ok(vec![*comp.iter().next().unwrap()]);
    }
    let mut deg: BTreeMap<NodeId, Vec<EdgeId>> = BTreeMap::new();
    for &e in comp {
        let edge = model.edge(e);
        deg.entry(edge.black).or_default().push(e);
        deg.entry(edge.white).or_default().push(e);
    }
    let ends: Vec<NodeId> = deg
        .iter()
        .filter(|(_, es)| es.len() == 1)
        .map(|(n, _)| *n)
        .collect();
    if ends.len() != 2 || deg.values().any(|es| es.len() > 2) {
        return Err(DimerError::Inconsistent(
            "shared edges do not form a simple path".into(),
        ));
    }
    let mut ordered = Vec::new();
    let mut node = *ends.iter().min().unwrap();
    let mut prev: Option<EdgeId> = None;
    while ordered.len() < comp.len() {
        let next = deg[&node].iter().copied().find(|e| Some(*e) != prev);
        let Some(e) = next else { break };
        ordered.push(e);
        let edge = model.edge(e);
        node = if edge.black == node { edge.white } else { edge.black };
        prev = Some(e);
    }
    if ordered.len() != comp.len() {
        return Err(DimerError::Inconsistent(
            "shared edges do not form a simple path".into(),
        ));
    }
    Ok(ordered)
}

fn common_node(model: &DimerModel, a: EdgeId, b: EdgeId) -> Option<NodeId> {
    let ea = model.edge(a);
    let eb = model.edge(b);
    if ea.black == eb.black || ea.black == eb.white {
        Some(ea.black)
    } else if ea.white == eb.black || ea.white == eb.white {
        Some(ea.white)
    } else {
        None
    }
}

/// The end node of a terminal run edge not shared with its run neighbor.
fn outer_node(model: &DimerModel, run: &[EdgeId], terminal: EdgeId) -> NodeId {
    let edge = model.edge(terminal);
    let pos = run.iter().position(|&e| e == terminal).unwrap();
    let neighbor = if pos == 0 { run[1] } else { run[pos - 1] };
    let shared = common_node(model, terminal, neighbor).unwrap();
    if edge.black == shared {
        edge.white
    } else {
        edge.black
    }
}

/// The corner perfect matching of the pair: on the two paths it takes the
/// run arrows leaving the sources and the forced alternation along the
/// arcs; inside each hexagon it takes the edges crossed by no minimal
/// source-to-sink path.
pub fn corner_matching(model: &DimerModel, lat: &HexagonLattice) -> Result<PerfectMatching> {
    let paths = zigzag_paths(model);
    let z = &paths[lat.z];
    let w = &paths[lat.w];
    let quiver = dual_quiver(model);
    let mut chosen: BTreeSet<EdgeId> = BTreeSet::new();
    let mut covered: BTreeSet<NodeId> = BTreeSet::new();
    let take = |e: EdgeId,
                chosen: &mut BTreeSet<EdgeId>,
                covered: &mut BTreeSet<NodeId>|
     -> Result<()> {
        let edge = model.edge(e);
        if !covered.insert(edge.black) || !covered.insert(edge.white) {
            return Err(DimerError::Inconsistent(format!(
                "corner-matching construction covered a node twice at edge {}",
                e.0
            )));
        }
        chosen.insert(e);
        Ok(())
    };

    // Run part: every other edge starting from the ends (the arrows whose
    // source is the run's source face).
    for run in &lat.runs {
        for (k, &e) in run.edges.iter().enumerate() {
            if k % 2 == 0 {
                debug_assert_eq!(quiver.arrow(e).source, run.source_face);
                take(e, &mut chosen, &mut covered)?;
            }
        }
    }

    // Arc part: between two runs each path contributes a forced alternation
    // covering the arc's interior nodes.
    let shared: BTreeSet<EdgeId> = lat.runs.iter().flat_map(|r| r.edges.clone()).collect();
    for path in [z, w] {
        for arc in arcs_of(path, &shared)? {
            if arc.len() % 2 == 0 {
                return Err(DimerError::Inconsistent(format!(
                    "arc of even length {} on path {}",
                    arc.len(),
                    path.id
                )));
            }
            for (k, s) in arc.iter().enumerate() {
                if k % 2 == 1 {
                    take(s.edge, &mut chosen, &mut covered)?;
                }
            }
        }
    }

    // Interior part: edges not crossed by any minimal source-to-sink path.
    for hex in &lat.hexagons {
        let hex_faces: BTreeSet<FaceId> = hex.faces.iter().copied().collect();
        let boundary: BTreeSet<EdgeId> = z
            .edges()
            .into_iter()
            .chain(w.edges())
            .collect();
        let interior: BTreeSet<EdgeId> = model
            .edges()
            .iter()
            .map(|e| e.id)
            .filter(|&e| {
                let a = quiver.arrow(e);
                !boundary.contains(&e)
                    && hex_faces.contains(&a.source)
                    && hex_faces.contains(&a.target)
            })
            .collect();
        let closure: BTreeSet<EdgeId> = model
            .edges()
            .iter()
            .map(|e| e.id)
            .filter(|&e| {
                let a = quiver.arrow(e);
                hex_faces.contains(&a.source) || hex_faces.contains(&a.target)
            })
            .collect();
        let crossed = minimal_path_crossings(
            model, &quiver, &paths, hex.source, hex.sink, &closure, &interior,
        );
        for &e in interior.difference(&crossed) {
            take(e, &mut chosen, &mut covered)?;
        }
    }

    if covered.len() != model.nodes().len() {
        return Err(DimerError::Inconsistent(format!(
            "corner-matching construction covered {} of {} nodes",
            covered.len(),
            model.nodes().len()
        )));
    }
    Ok(PerfectMatching { edges: chosen })
}

/// Maximal stretches of non-shared steps along a path, in traversal order.
fn arcs_of(path: &ZigZagPath, shared: &BTreeSet<EdgeId>) -> Result<Vec<Vec<Step>>> {
    let l = path.period();
    let is_shared: Vec<bool> = path
        .steps
        .iter()
        .map(|s| shared.contains(&s.edge))
        .collect();
    let Some(k0) = is_shared.iter().position(|&b| b) else {
        return Err(DimerError::Inconsistent("path misses all runs".into()));
    };
    let mut arcs = Vec::new();
    let mut idx = k0;
    let mut walked = 0usize;
    while walked < l {
        while walked < l && is_shared[idx % l] {
            idx += 1;
            walked += 1;
        }
        let mut arc = Vec::new();
        while walked < l && !is_shared[idx % l] {
            arc.push(path.steps[idx % l]);
            idx += 1;
            walked += 1;
        }
        if !arc.is_empty() {
            arcs.push(arc);
        }
    }
    Ok(arcs)
}

/// Interior edges crossed by at least one minimal path from `source` to
/// `sink` using arrows from `closure`.
fn minimal_path_crossings(
    model: &DimerModel,
    quiver: &Quiver,
    paths: &[ZigZagPath],
    source: FaceId,
    sink: FaceId,
    closure: &BTreeSet<EdgeId>,
    interior: &BTreeSet<EdgeId>,
) -> BTreeSet<EdgeId> {
    struct Ctx<'a> {
        model: &'a DimerModel,
        quiver: &'a Quiver,
        paths: &'a [ZigZagPath],
        out_arrows: BTreeMap<FaceId, Vec<EdgeId>>,
        interior: &'a BTreeSet<EdgeId>,
        sink: FaceId,
        start: FaceId,
        crossed: BTreeSet<EdgeId>,
    }
    // Only vertex-simple candidate paths: a path revisiting a vertex either
    // carries a small loop (hence is not minimal) or winds around the
    // torus, which a source-to-sink sweep of one cell never does.
    fn dfs(ctx: &mut Ctx, at: FaceId, stack: &mut Vec<EdgeId>, visited: &mut BTreeSet<FaceId>) {
        if at == ctx.sink && !stack.is_empty() {
            let p = ctx
                .quiver
                .path(stack.clone(), ctx.start)
                .expect("dfs builds composable paths");
            if path_is_minimal(ctx.model, ctx.quiver, ctx.paths, &p) {
                for &e in stack.iter() {
                    if ctx.interior.contains(&e) {
                        ctx.crossed.insert(e);
                    }
                }
            }
            return;
        }
        let arrows = ctx.out_arrows.get(&at).cloned().unwrap_or_default();
        for e in arrows {
            let target = ctx.quiver.arrow(e).target;
            // The sink is always enterable (it terminates the path).
            if target != ctx.sink {
                if visited.contains(&target) {
                    continue;
                }
                visited.insert(target);
            }
            stack.push(e);
            dfs(ctx, target, stack, visited);
            stack.pop();
            if target != ctx.sink {
                visited.remove(&target);
            }
        }
    }
    let mut out_arrows: BTreeMap<FaceId, Vec<EdgeId>> = BTreeMap::new();
    for &e in closure {
        let a = quiver.arrow(e);
        out_arrows.entry(a.source).or_default().push(e);
    }
    let mut ctx = Ctx {
        model,
        quiver,
        paths,
        out_arrows,
        interior,
        sink,
        start: source,
        crossed: BTreeSet::new(),
    };
    let mut visited = BTreeSet::from([source]);
    dfs(&mut ctx, source, &mut Vec::new(), &mut visited);
    ctx.crossed
}

/// Reads (n, q) off the primitive corner directions by the canonical
/// unimodular normalization sending u1 to (0,1) and u2 to (n,-q) with
/// 0 < q < n and gcd(q, n) = 1.
pub fn cone_normal_form(u1: Vec2, u2: Vec2) -> Result<(i64, i64)> {
    if !u1.is_primitive() || !u2.is_primitive() {
        return Err(DimerError::BadChoice(format!(
            "corner directions {u1}, {u2} must be primitive"
        )));
    }
    let n = u1.det(u2).abs();
    if n == 0 {
        return Err(DimerError::BadChoice(
            "corner directions are collinear".into(),
        ));
    }
    if n == 1 {
        return Ok((1, 0));
    }
    let (a, b) = (u1.x, u1.y);
    let (g, r, s) = ext_gcd(a, b);
    debug_assert_eq!(g, 1);
    // M = [[-b, a], [r, s]] maps u1 to (0, 1); flip the first row's sign if
    // needed so u2 lands at positive x.
    let mx = -b * u2.x + a * u2.y;
    let my = r * u2.x + s * u2.y;
    let (mx, my) = if mx < 0 { (-mx, my) } else { (mx, my) };
    debug_assert_eq!(mx, n);
    // Shear by multiples of (0,1) to put the y-part in canonical range.
    let q = (-my).rem_euclid(n);
    if q == 0 || crate::geom::gcd(q as u64, n as u64) != 1 {
        return Err(DimerError::Internal(format!(
            "cone normalization produced q={q} for n={n}"
        )));
    }
    Ok((n, q))
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        if a < 0 {
            (-a, -1, 0)
        } else {
            (a, 1, 0)
        }
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum ArrowKind {
    X,
    Y,
    Z,
}

/// Builds the McKay identification: contracts the runs and arcs to a coarse
/// honeycomb, types each coarse arrow as x, y or z from the cyclic order at
/// the cells (counterclockwise reads x, y, z), and assigns Z/n characters
/// by walking from the origin.
pub fn mckay_identify(
    model: &DimerModel,
    lat: &HexagonLattice,
    origin: usize,
    corner_dirs: (Vec2, Vec2),
) -> Result<McKayLabeling> {
    let (n, q) = cone_normal_form(corner_dirs.0, corner_dirs.1)?;
    if n != lat.order {
        return Err(DimerError::BadChoice(format!(
            "corner determinant {n} does not match hexagon count {}",
            lat.order
        )));
    }
    if origin >= lat.hexagons.len() {
        return Err(DimerError::BadChoice(format!("no hexagon {origin}")));
    }
    let z_arrow_run: Vec<usize> = lat.hexagons.iter().map(|h| h.out_run).collect();
    if n == 1 {
        return Ok(McKayLabeling {
            n,
            q: 0,
            origin,
            label: vec![0],
            z_arrow_run,
            specials: BTreeSet::from([0]),
        });
    }
    let specials: BTreeSet<i64> = hj_expand(&BigInt::from(n), &BigInt::from(q))?
        .specials
        .iter()
        .map(|s| s.to_i64().expect("special fits in i64"))
        .collect();

    let coarse = build_coarse(model, lat)?;
    let cq = dual_quiver(&coarse.model);
    if cq.faces.len() != lat.hexagons.len() {
        return Err(DimerError::Internal(format!(
            "coarse model has {} faces for {} hexagons",
            cq.faces.len(),
            lat.hexagons.len()
        )));
    }
    // Match coarse faces to hexagons through the run arrows.
    let mut coarse_to_hex: BTreeMap<FaceId, usize> = BTreeMap::new();
    for (ri, run) in lat.runs.iter().enumerate() {
        let ce = coarse.run_edge[ri];
        let a = cq.arrow(ce);
        merge_vote(&mut coarse_to_hex, a.source, run.source_hex)?;
        merge_vote(&mut coarse_to_hex, a.target, run.sink_hex)?;
    }
    if coarse_to_hex.len() != lat.hexagons.len() {
        return Err(DimerError::Internal(
            "coarse faces do not biject with hexagons".into(),
        ));
    }

    // Outgoing coarse arrows per cell in boundary order; (z, x, y) cyclically.
    let mut typed: Vec<(usize, usize, ArrowKind)> = Vec::new();
    for face in &cq.faces {
        let hex = coarse_to_hex[&face.id];
        let outgoing: Vec<EdgeId> = face
            .sides
            .iter()
            .filter(|s| s.dir == Dir::WhiteToBlack)
            .map(|s| s.edge)
            .collect();
        if outgoing.len() != 3 {
            return Err(DimerError::Internal(format!(
                "hexagon {hex} has {} outgoing coarse arrows",
                outgoing.len()
            )));
        }
        let zpos = outgoing
            .iter()
            .position(|e| coarse.edge_run.contains_key(e))
            .ok_or_else(|| DimerError::Internal(format!("hexagon {hex} has no z-arrow")))?;
        for (k, kind) in [(0, ArrowKind::Z), (1, ArrowKind::X), (2, ArrowKind::Y)] {
            let e = outgoing[(zpos + k) % 3];
            let to = coarse_to_hex[&cq.arrow(e).target];
            typed.push((hex, to, kind));
        }
    }

    let incr = |k: ArrowKind| -> i64 {
        match k {
            ArrowKind::X => 1,
            ArrowKind::Y => q,
            ArrowKind::Z => (-1 - q).rem_euclid(n),
        }
    };
    let mut label: Vec<Option<i64>> = vec![None; lat.hexagons.len()];
    label[origin] = Some(0);
    let mut queue = std::collections::VecDeque::from([origin]);
    while let Some(h) = queue.pop_front() {
        let base = label[h].unwrap();
        for &(from, to, kind) in &typed {
            let (dst, v) = if from == h {
                (to, (base + incr(kind)).rem_euclid(n))
            } else if to == h {
                (from, (base - incr(kind)).rem_euclid(n))
            } else {
                continue;
            };
            match label[dst] {
                None => {
                    label[dst] = Some(v);
                    queue.push_back(dst);
                }
                Some(old) if old == v => {}
                Some(old) => {
                    return Err(DimerError::Internal(format!(
                        "inconsistent McKay labels at hexagon {dst}: {old} vs {v}"
                    )));
                }
            }
        }
    }
    let label: Vec<i64> = label
        .into_iter()
        .map(|l| l.ok_or_else(|| DimerError::Internal("unlabeled hexagon".into())))
        .collect::<Result<_>>()?;
    let distinct: BTreeSet<i64> = label.iter().copied().collect();
    if distinct.len() != n as usize {
        return Err(DimerError::Internal(
            "McKay labels do not biject with Z/n".into(),
        ));
    }
    Ok(McKayLabeling {
        n,
        q,
        origin,
        label,
        z_arrow_run,
        specials,
    })
}

fn merge_vote(map: &mut BTreeMap<FaceId, usize>, face: FaceId, hex: usize) -> Result<()> {
    match map.insert(face, hex) {
        None => Ok(()),
        Some(old) if old == hex => Ok(()),
        Some(old) => Err(DimerError::Internal(format!(
            "coarse face {} claimed by hexagons {old} and {hex}",
            face.0
        ))),
    }
}

struct CoarseStructure {
    model: DimerModel,
    /// Coarse edge of each run (index-aligned with the lattice's runs).
    run_edge: Vec<EdgeId>,
    /// Reverse map: coarse edge -> run index (absent for arcs).
    edge_run: BTreeMap<EdgeId, usize>,
}

/// The hexagon-cell lattice as a quiver of its own, together with the
/// collapse map sending fine paths to cell paths.
pub struct CellQuiver {
    pub quiver: Quiver,
    /// Cell index of each coarse quiver vertex.
    pub cell_of_face: BTreeMap<FaceId, usize>,
    /// Coarse quiver vertex of each cell.
    pub face_of_cell: Vec<FaceId>,
    /// Fine boundary edge -> its coarse edge and whether its dual arrow
    /// points the same way as the coarse arrow. Along a run or arc the
    /// crossing direction alternates; edges at even positions from the
    /// black coarse end are aligned.
    boundary_to_coarse: BTreeMap<EdgeId, (EdgeId, bool)>,
    /// Image cells of fine faces.
    fine_face_cell: BTreeMap<FaceId, usize>,
    /// The corner matching driving the interior part of the map.
    matching: PerfectMatching,
    /// Fine arrow endpoints, for interior/boundary classification.
    fine: Quiver,
}

impl CellQuiver {
    /// The collapse of a fine path: interior arrows outside the matching
    /// vanish into the idempotent, matched interior arrows become the
    /// cell's small loop, and boundary arrows become the connecting coarse
    /// arrow or its length-two return path, depending on direction. The map
    /// respects composition up to the coarse relations.
    pub fn collapse(&self, coarse_model: &DimerModel, p: &QuiverPath) -> Result<QuiverPath> {
        let start_cell = self.fine_face_cell[&p.source];
        let mut arrows: Vec<EdgeId> = Vec::new();
        let mut at = self.face_of_cell[start_cell];
        for &a in &p.arrows {
            let fine = self.fine.arrow(a);
            let (cs, ct) = (
                self.fine_face_cell[&fine.source],
                self.fine_face_cell[&fine.target],
            );
            match self.boundary_to_coarse.get(&a) {
                None => {
                    debug_assert_eq!(cs, ct);
                    if self.matching.contains(a) {
                        // Small loop of the current cell.
                        let lp = self
                            .quiver
                            .small_loops(coarse_model, at)
                            .into_iter()
                            .next()
                            .ok_or_else(|| {
                                DimerError::Internal("cell without a small loop".into())
                            })?;
                        arrows.extend(lp.arrows);
                    }
                }
                Some(&(ce, aligned)) => {
                    let b = self.quiver.arrow(ce);
                    if aligned {
                        if b.source != at {
                            return Err(DimerError::Internal(
                                "collapse lost track of the current cell".into(),
                            ));
                        }
                        arrows.push(ce);
                        at = b.target;
                    } else {
                        // The length-two return path around the coarse arrow.
                        let rel = self
                            .quiver
                            .relations
                            .iter()
                            .find(|r| r.arrow == ce)
                            .ok_or_else(|| {
                                DimerError::Internal("coarse arrow without relation".into())
                            })?;
                        debug_assert_eq!(rel.plus.len(), 2);
                        if rel.plus.source != at {
                            return Err(DimerError::Internal(
                                "collapse lost track of the current cell".into(),
                            ));
                        }
                        arrows.extend(rel.plus.arrows.iter().copied());
                        at = rel.plus.target;
                    }
                }
            }
        }
        self.quiver.path(arrows, self.face_of_cell[start_cell])
    }
}

/// Builds the cell-lattice quiver and the data for the collapse map, from a
/// decomposition and its corner matching.
pub fn cell_quiver(model: &DimerModel, lat: &HexagonLattice) -> Result<(DimerModel, CellQuiver)> {
    let matching = corner_matching(model, lat)?;
    let coarse = build_coarse(model, lat)?;
    let cq = dual_quiver(&coarse.model);
    let mut cell_of_face: BTreeMap<FaceId, usize> = BTreeMap::new();
    for (ri, run) in lat.runs.iter().enumerate() {
        let a = cq.arrow(coarse.run_edge[ri]);
        merge_vote(&mut cell_of_face, a.source, run.source_hex)?;
        merge_vote(&mut cell_of_face, a.target, run.sink_hex)?;
    }
    if cell_of_face.len() != lat.hexagons.len() {
        return Err(DimerError::Internal(
            "coarse faces do not biject with cells".into(),
        ));
    }
    let mut face_of_cell = vec![FaceId(0); lat.hexagons.len()];
    for (&f, &c) in &cell_of_face {
        face_of_cell[c] = f;
    }
    // Fine boundary edges -> coarse edges with alignment. A fused edge path
    // n_0 - e_0 - n_1 - ... alternates colors, so the dual arrows alternate
    // crossing direction; ordering from the black coarse end, even
    // positions align with the coarse arrow.
    let paths = zigzag_paths(model);
    let mut boundary_to_coarse: BTreeMap<EdgeId, (EdgeId, bool)> = BTreeMap::new();
    let insert_chain = |edges: &[EdgeId], ce: EdgeId, map: &mut BTreeMap<EdgeId, (EdgeId, bool)>| -> Result<()> {
        let bend = coarse.model.edge(ce).black;
        let start = if edges.len() == 1 {
            model.edge(edges[0]).black
        } else {
            outer_node(model, edges, edges[0])
        };
        let end = if edges.len() == 1 {
            model.edge(edges[0]).white
        } else {
            outer_node(model, edges, *edges.last().unwrap())
        };
        let ordered: Vec<EdgeId> = if start == bend {
            edges.to_vec()
        } else if end == bend {
            edges.iter().rev().copied().collect()
        } else {
            return Err(DimerError::Internal(
                "fused chain does not reach its coarse black end".into(),
            ));
        };
        for (k, &e) in ordered.iter().enumerate() {
            if map.insert(e, (ce, k % 2 == 0)).is_some() {
                return Err(DimerError::Internal(format!(
                    "fine edge {} lies on two fused chains",
                    e.0
                )));
            }
        }
        Ok(())
    };
    for (ri, run) in lat.runs.iter().enumerate() {
        insert_chain(&run.edges, coarse.run_edge[ri], &mut boundary_to_coarse)?;
    }
    let shared: BTreeSet<EdgeId> = lat.runs.iter().flat_map(|r| r.edges.clone()).collect();
    // Arc coarse edges were appended after the runs in traversal order;
    // rebuild the same order to map their fine edges.
    let mut next_arc = lat.runs.len() as u32;
    for pid in [lat.z, lat.w] {
        for arc in arcs_of(&paths[pid], &shared)? {
            let edges: Vec<EdgeId> = arc.iter().map(|s| s.edge).collect();
            insert_chain(&edges, EdgeId(next_arc), &mut boundary_to_coarse)?;
            next_arc += 1;
        }
    }
    let fine = dual_quiver(model);
    let fine_face_cell = lat.face_hex.clone();
    Ok((
        coarse.model,
        CellQuiver {
            quiver: cq,
            cell_of_face,
            face_of_cell,
            boundary_to_coarse,
            fine_face_cell,
            matching,
            fine,
        },
    ))
}

/// Contracts runs and arcs to single edges, producing the honeycomb of
/// hexagon cells as a dimer model in its own right. Coarse nodes are the
/// run ends; rotations are induced from the fine model.
fn build_coarse(model: &DimerModel, lat: &HexagonLattice) -> Result<CoarseStructure> {
    let paths = zigzag_paths(model);
    let shared: BTreeSet<EdgeId> = lat.runs.iter().flat_map(|r| r.edges.clone()).collect();
    let mut coarse_nodes: BTreeSet<NodeId> = BTreeSet::new();
    for r in &lat.runs {
        coarse_nodes.insert(r.end_nodes.0);
        coarse_nodes.insert(r.end_nodes.1);
    }
    struct CoarseEdge {
        black: NodeId,
        white: NodeId,
        shift: Vec2,
        run: Option<usize>,
        /// Representative fine edge at each end node, for rotations.
        rep: BTreeMap<NodeId, EdgeId>,
    }
    let mut coarse_edges: Vec<CoarseEdge> = Vec::new();
    for (ri, r) in lat.runs.iter().enumerate() {
        let (n0, nk) = r.end_nodes;
        let (bend, wend) = if model.node(n0).color == Color::Black {
            (n0, nk)
        } else {
            (nk, n0)
        };
        // Shift traversing the run from its black end.
        let ordered: Vec<EdgeId> = if model.node(n0).color == Color::Black {
            r.edges.clone()
        } else {
            r.edges.iter().rev().copied().collect()
        };
        let mut shift = ZERO;
        let mut node = bend;
        for &e in &ordered {
            let edge = model.edge(e);
            let dir = if edge.black == node {
                Dir::BlackToWhite
            } else {
                Dir::WhiteToBlack
            };
            shift += model.step_shift(e, dir);
            node = if edge.black == node {
                edge.white
            } else {
                edge.black
            };
        }
        debug_assert_eq!(node, wend);
        let mut rep = BTreeMap::new();
        rep.insert(n0, *r.edges.first().unwrap());
        rep.insert(nk, *r.edges.last().unwrap());
        coarse_edges.push(CoarseEdge {
            black: bend,
            white: wend,
            shift,
            run: Some(ri),
            rep,
        });
    }
    for pid in [lat.z, lat.w] {
        for arc in arcs_of(&paths[pid], &shared)? {
            let first = arc[0];
            let last = *arc.last().unwrap();
            let (start, _) = model.tail_head(first.edge, first.dir);
            let (_, end) = model.tail_head(last.edge, last.dir);
            let shift = arc
                .iter()
                .fold(ZERO, |acc, s| acc + model.step_shift(s.edge, s.dir));
            let (black, white, shift) = if model.node(start).color == Color::Black {
                (start, end, shift)
            } else {
                (end, start, -shift)
            };
            let mut rep = BTreeMap::new();
            rep.insert(start, first.edge);
            rep.insert(end, last.edge);
            coarse_edges.push(CoarseEdge {
                black,
                white,
                shift,
                run: None,
                rep,
            });
        }
    }

    let nodes: Vec<Node> = coarse_nodes
        .iter()
        .map(|&n| Node {
            id: n,
            color: model.node(n).color,
            pos: None,
        })
        .collect();
    let mut edges = Vec::new();
    let mut edge_run = BTreeMap::new();
    let mut run_edge = vec![EdgeId(0); lat.runs.len()];
    for (i, ce) in coarse_edges.iter().enumerate() {
        let id = EdgeId(i as u32);
        if let Some(ri) = ce.run {
            edge_run.insert(id, ri);
            run_edge[ri] = id;
        }
        edges.push(Edge {
            id,
            black: ce.black,
            white: ce.white,
            shift: ce.shift,
        });
    }
    // Rotations: order coarse edges at each node by the positions of their
    // representative fine edges in the fine rotation.
    let mut rotations: BTreeMap<NodeId, Vec<EdgeId>> = BTreeMap::new();
    for &n in &coarse_nodes {
        let fine = model.rotation(n);
        let mut here: Vec<(usize, EdgeId)> = Vec::new();
        for (i, ce) in coarse_edges.iter().enumerate() {
            if ce.black != n && ce.white != n {
                continue;
            }
            let rep = ce.rep.get(&n).copied().ok_or_else(|| {
                DimerError::Internal("coarse edge lacks a representative at its node".into())
            })?;
            let pos = fine.iter().position(|&e| e == rep).ok_or_else(|| {
                DimerError::Internal("coarse representative missing at node".into())
            })?;
            here.push((pos, EdgeId(i as u32)));
        }
        here.sort();
        if here.len() != 3 {
            return Err(DimerError::Internal(format!(
                "coarse node {} has degree {}",
                n.0,
                here.len()
            )));
        }
        rotations.insert(n, here.into_iter().map(|(_, e)| e).collect());
    }
    let coarse_model = DimerModel::new(nodes, edges, rotations)?;
    Ok(CoarseStructure {
        model: coarse_model,
        run_edge,
        edge_run,
    })
}
