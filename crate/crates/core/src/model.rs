//! The dimer model itself: a bicolored graph embedded in the two-torus,
//! stored combinatorially as a rotation system plus deck-translation data on
//! the edges. Positions are advisory metadata for rendering.

use crate::error::{DimerError, Result};
use crate::geom::{Vec2, ZERO};
use num::rational::Ratio;
use num::Zero;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, VecDeque};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Color {
    #[serde(rename = "black")]
    Black,
    #[serde(rename = "white")]
    White,
}

impl Color {
    pub fn opposite(self) -> Color {
        match self {
            Color::Black => Color::White,
            Color::White => Color::Black,
        }
    }
}

#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, Default,
)]
#[serde(transparent)]
pub struct NodeId(pub u32);

#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, Default,
)]
#[serde(transparent)]
pub struct EdgeId(pub u32);

#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, Default,
)]
#[serde(transparent)]
pub struct FaceId(pub u32);

/// A point of `T = R^2 / Z^2` with exact rational coordinates in `[0,1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TorusPosition {
    pub x: Ratio<i64>,
    pub y: Ratio<i64>,
}

impl TorusPosition {
    pub fn new(xn: i64, xd: i64, yn: i64, yd: i64) -> Result<TorusPosition> {
        if xd == 0 || yd == 0 {
            return Err(DimerError::Parse("position with zero denominator".into()));
        }
        Ok(TorusPosition {
            x: reduce_mod1(Ratio::new(xn, xd)),
            y: reduce_mod1(Ratio::new(yn, yd)),
        })
    }
}

fn reduce_mod1(r: Ratio<i64>) -> Ratio<i64> {
    let mut r = r - r.floor();
    if r < Ratio::zero() {
        r += Ratio::new(1, 1);
    }
    r
}

#[derive(Debug, Clone)]
pub struct Node {
    pub id: NodeId,
    pub color: Color,
    pub pos: Option<TorusPosition>,
}

/// An edge always joins a black node to a white one. `shift` is the deck
/// translation such that the edge's representative segment runs from
/// `pos(black)` to `pos(white) + shift` on the universal cover.
#[derive(Debug, Clone)]
pub struct Edge {
    pub id: EdgeId,
    pub black: NodeId,
    pub white: NodeId,
    pub shift: Vec2,
}

/// Traversal direction of an edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Dir {
    BlackToWhite,
    WhiteToBlack,
}

impl Dir {
    pub fn reverse(self) -> Dir {
        match self {
            Dir::BlackToWhite => Dir::WhiteToBlack,
            Dir::WhiteToBlack => Dir::BlackToWhite,
        }
    }
}

/// One directed edge-side on a face boundary. `offset` is the deck
/// translation of the edge's canonical representative in the face's frame
/// (the frame in which the face traversal started at offset zero).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Side {
    pub edge: EdgeId,
    pub dir: Dir,
    pub offset: Vec2,
}

/// A face of the dimer model: a cyclic sequence of directed edge-sides.
#[derive(Debug, Clone)]
pub struct Face {
    pub id: FaceId,
    pub sides: Vec<Side>,
    /// Total deck translation around the boundary; zero iff the face lifts to
    /// a closed disk on the universal cover.
    pub total_shift: Vec2,
}

impl Face {
    pub fn len(&self) -> usize {
        self.sides.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sides.is_empty()
    }
}

/// Doubly periodic bicolored graph with rotation system. Immutable after
/// construction; all operations are pure functions.
#[derive(Debug, Clone)]
pub struct DimerModel {
    nodes: Vec<Node>,
    edges: Vec<Edge>,
    /// Counterclockwise cyclic order of incident edges, per node.
    rotations: BTreeMap<NodeId, Vec<EdgeId>>,
    node_idx: BTreeMap<NodeId, usize>,
    edge_idx: BTreeMap<EdgeId, usize>,
}

impl DimerModel {
    /// Builds a model, checking structural well-formedness (reference
    /// integrity, rotation completeness). Geometric validity is checked
    /// separately by [`DimerModel::validate`].
    pub fn new(
        nodes: Vec<Node>,
        edges: Vec<Edge>,
        rotations: BTreeMap<NodeId, Vec<EdgeId>>,
    ) -> Result<DimerModel> {
        let mut node_idx = BTreeMap::new();
        for (i, n) in nodes.iter().enumerate() {
            if node_idx.insert(n.id, i).is_some() {
                return Err(DimerError::Parse(format!("duplicate node id {}", n.id.0)));
            }
        }
        let mut edge_idx = BTreeMap::new();
        for (i, e) in edges.iter().enumerate() {
            if edge_idx.insert(e.id, i).is_some() {
                return Err(DimerError::Parse(format!("duplicate edge id {}", e.id.0)));
            }
        }
        for e in &edges {
            let b = node_idx
                .get(&e.black)
                .ok_or_else(|| DimerError::Parse(format!("edge {} references missing node {}", e.id.0, e.black.0)))?;
            let w = node_idx
                .get(&e.white)
                .ok_or_else(|| DimerError::Parse(format!("edge {} references missing node {}", e.id.0, e.white.0)))?;
            if nodes[*b].color != Color::Black {
                return Err(DimerError::Parse(format!(
                    "edge {}: node {} is not black",
                    e.id.0, e.black.0
                )));
            }
            if nodes[*w].color != Color::White {
                return Err(DimerError::Parse(format!(
                    "edge {}: node {} is not white",
                    e.id.0, e.white.0
                )));
            }
        }
        // Every node needs a rotation listing exactly its incident edges.
        let mut incident: BTreeMap<NodeId, Vec<EdgeId>> = BTreeMap::new();
        for e in &edges {
            incident.entry(e.black).or_default().push(e.id);
            incident.entry(e.white).or_default().push(e.id);
        }
        for n in &nodes {
            let rot = rotations
                .get(&n.id)
                .ok_or_else(|| DimerError::Parse(format!("node {} has no rotation", n.id.0)))?;
            let mut a: Vec<EdgeId> = rot.clone();
            a.sort();
            let mut b = incident.remove(&n.id).unwrap_or_default();
            b.sort();
            if a != b {
                return Err(DimerError::Parse(format!(
                    "rotation at node {} does not list its incident edges exactly once",
                    n.id.0
                )));
            }
        }
        Ok(DimerModel {
            nodes,
            edges,
            rotations,
            node_idx,
            edge_idx,
        })
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[self.node_idx[&id]]
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[self.edge_idx[&id]]
    }

    pub fn rotation(&self, node: NodeId) -> &[EdgeId] {
        &self.rotations[&node]
    }

    pub fn rotations(&self) -> &BTreeMap<NodeId, Vec<EdgeId>> {
        &self.rotations
    }

    pub fn degree(&self, node: NodeId) -> usize {
        self.rotations[&node].len()
    }

    /// Endpoint of `edge` on the `color` side.
    pub fn endpoint(&self, edge: EdgeId, color: Color) -> NodeId {
        let e = self.edge(edge);
        match color {
            Color::Black => e.black,
            Color::White => e.white,
        }
    }

    /// Tail and head node of an edge traversed in direction `dir`.
    pub fn tail_head(&self, edge: EdgeId, dir: Dir) -> (NodeId, NodeId) {
        let e = self.edge(edge);
        match dir {
            Dir::BlackToWhite => (e.black, e.white),
            Dir::WhiteToBlack => (e.white, e.black),
        }
    }

    /// Homology contribution of traversing `edge` in direction `dir`:
    /// `+shift` when walking black to white, `-shift` otherwise.
    pub fn step_shift(&self, edge: EdgeId, dir: Dir) -> Vec2 {
        let s = self.edge(edge).shift;
        match dir {
            Dir::BlackToWhite => s,
            Dir::WhiteToBlack => -s,
        }
    }

    /// Successor of `edge` in the counterclockwise rotation at `node`.
    pub fn ccw_next(&self, node: NodeId, edge: EdgeId) -> EdgeId {
        let rot = &self.rotations[&node];
        let i = rot.iter().position(|&e| e == edge).expect("edge at node");
        rot[(i + 1) % rot.len()]
    }

    /// Predecessor of `edge` in the counterclockwise rotation at `node`.
    pub fn ccw_prev(&self, node: NodeId, edge: EdgeId) -> EdgeId {
        let rot = &self.rotations[&node];
        let i = rot.iter().position(|&e| e == edge).expect("edge at node");
        rot[(i + rot.len() - 1) % rot.len()]
    }

    /// Faces by rotation-system traversal, each a cyclic sequence of directed
    /// edge-sides with deck offsets. Faces keep the surface on their left;
    /// the partition of directed edge-sides is exact. Deterministic: faces
    /// are discovered in order of their smallest directed side.
    pub fn faces(&self) -> Vec<Face> {
        let mut seen: BTreeSet<(EdgeId, Dir)> = BTreeSet::new();
        let mut faces = Vec::new();
        let mut starts: Vec<(EdgeId, Dir)> = Vec::new();
        for e in &self.edges {
            starts.push((e.id, Dir::BlackToWhite));
            starts.push((e.id, Dir::WhiteToBlack));
        }
        starts.sort();
        for start in starts {
            if seen.contains(&start) {
                continue;
            }
            let mut sides = Vec::new();
            let mut cur = start;
            let mut offset = ZERO;
            loop {
                seen.insert(cur);
                let (tail, head) = self.tail_head(cur.0, cur.1);
                // Deck translation of the edge's canonical copy in this
                // face's frame: the canonical copy runs from black+0 to
                // white+shift, so a side leaving a white node at frame
                // offset h uses the copy at h - shift.
                let edge_offset = match cur.1 {
                    Dir::BlackToWhite => offset,
                    Dir::WhiteToBlack => offset - self.edge(cur.0).shift,
                };
                sides.push(Side {
                    edge: cur.0,
                    dir: cur.1,
                    offset: edge_offset,
                });
                offset += self.step_shift(cur.0, cur.1);
                let _ = tail;
                // Keep the face on the left: turn to the clockwise-adjacent
                // edge at the head node.
                let next_edge = self.ccw_prev(head, cur.0);
                let next_dir = if self.node(head).color == Color::Black {
                    Dir::BlackToWhite
                } else {
                    Dir::WhiteToBlack
                };
                cur = (next_edge, next_dir);
                if cur == start {
                    break;
                }
            }
            faces.push(Face {
                id: FaceId(faces.len() as u32),
                sides,
                total_shift: offset,
            });
        }
        faces
    }

    /// Face ids adjacent to each directed edge-side, as a lookup table.
    pub fn side_faces(&self) -> BTreeMap<(EdgeId, Dir), FaceId> {
        let mut map = BTreeMap::new();
        for f in self.faces() {
            for s in &f.sides {
                map.insert((s.edge, s.dir), f.id);
            }
        }
        map
    }

    pub fn is_connected(&self) -> bool {
        if self.nodes.is_empty() {
            return false;
        }
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::new();
        let start = self.nodes[0].id;
        seen.insert(start);
        queue.push_back(start);
        while let Some(n) = queue.pop_front() {
            for &e in &self.rotations[&n] {
                let edge = self.edge(e);
                let other = if edge.black == n { edge.white } else { edge.black };
                if seen.insert(other) {
                    queue.push_back(other);
                }
            }
        }
        seen.len() == self.nodes.len()
    }

    pub fn validate(&self) -> ValidationReport {
        let faces = self.faces();
        let v = self.nodes.len() as i64;
        let e = self.edges.len() as i64;
        let f = faces.len() as i64;
        let nontrivial_faces: Vec<FaceId> = faces
            .iter()
            .filter(|face| !face.total_shift.is_zero())
            .map(|face| face.id)
            .collect();
        let degenerate_faces: Vec<FaceId> = faces
            .iter()
            .filter(|face| face.len() < 3)
            .map(|face| face.id)
            .collect();
        let low_degree: Vec<NodeId> = self
            .nodes
            .iter()
            .filter(|n| self.degree(n.id) < 2)
            .map(|n| n.id)
            .collect();
        ValidationReport {
            bipartite: true,
            connected: self.is_connected(),
            euler: (v, e, f),
            nontrivial_faces,
            degenerate_faces,
            low_degree_nodes: low_degree,
            position_issues: self.check_positions(),
        }
    }

    /// Positions are advisory; when present they must be reduced rationals
    /// with bounded denominators. (Angular consistency with the rotation
    /// system is not enforced: exact positions of wrapped representatives
    /// are ambiguous, and the rotation system is authoritative.)
    fn check_positions(&self) -> Vec<String> {
        const DEN_LIMIT: i64 = 1_000_000;
        let mut issues = Vec::new();
        for n in &self.nodes {
            if let Some(p) = n.pos {
                for (axis, r) in [("x", p.x), ("y", p.y)] {
                    if *r.denom() > DEN_LIMIT {
                        issues.push(format!(
                            "node {}: {axis} denominator {} exceeds {}",
                            n.id.0,
                            r.denom(),
                            DEN_LIMIT
                        ));
                    }
                }
            }
        }
        issues
    }

    /// Removes every divalent node by merging its two like-colored neighbors
    /// into one node, recursively until none remain. The result, faces and
    /// matchings correspond one-to-one with the input's.
    pub fn contract_divalent(&self) -> Result<DimerModel> {
        let mut model = self.clone();
        loop {
            let div = model
                .nodes
                .iter()
                .map(|n| n.id)
                .find(|&id| model.degree(id) == 2);
            let Some(mid) = div else {
                return Ok(model);
            };
            model = model.contract_one(mid)?;
        }
    }

    /// Contracts a single divalent node `mid`: its two edges are removed and
    /// its two neighbors (which share the color opposite to `mid`) are
    /// identified. The surviving neighbor keeps the first neighbor's id.
    pub fn contract_divalent_at(&self, mid: NodeId) -> Result<DimerModel> {
        if self.degree(mid) != 2 {
            return Err(DimerError::BadChoice(format!(
                "node {} has degree {}, not 2",
                mid.0,
                self.degree(mid)
            )));
        }
        self.contract_one(mid)
    }

    fn contract_one(&self, mid: NodeId) -> Result<DimerModel> {
        let rot = &self.rotations[&mid];
        debug_assert_eq!(rot.len(), 2);
        let (ea, eb) = (rot[0], rot[1]);
        let mid_color = self.node(mid).color;
        let other = |eid: EdgeId| -> NodeId {
            let e = self.edge(eid);
            if mid_color == Color::White {
                e.black
            } else {
                e.white
            }
        };
        let (na, nb) = (other(ea), other(eb));
        if na == nb {
            return Err(DimerError::Degenerate(format!(
                "contracting divalent node {} would create a self-loop at node {}",
                mid.0, na.0
            )));
        }
        // Deck translation delta moving nb's frame onto na's: the cover copy
        // of nb glued through mid. For a white mid with edges a=(na,mid,sa)
        // and b=(nb,mid,sb), the copy of b ending at mid's lift reached from
        // na+0 is b+(sa-sb), so nb sits at translation sa-sb.
        let (sa, sb) = (self.edge(ea).shift, self.edge(eb).shift);
        let delta = match mid_color {
            Color::White => sa - sb,
            // Black mid: edges run black(mid)+0 -> white(n)+s, so mid's lift
            // seen from na is at -sa, and nb+delta must satisfy -sb+delta=-sa.
            Color::Black => sb - sa,
        };

        let mut nodes: Vec<Node> = Vec::new();
        for n in &self.nodes {
            if n.id == mid || n.id == nb {
                continue;
            }
            nodes.push(n.clone());
        }
        let mut edges: Vec<Edge> = Vec::new();
        for e in &self.edges {
            if e.id == ea || e.id == eb {
                continue;
            }
            let mut e = e.clone();
            // Re-anchor edges of nb: nb's canonical copy moves by delta, and
            // shifts are measured from the black endpoint.
            if mid_color == Color::White {
                // na, nb are black: edge runs nb+0 -> white+s; with nb at
                // translation delta the copy runs nb+delta -> white+s+delta,
                // so the re-anchored shift is s+delta... measured from the
                // merged node's frame (na at 0): s + delta.
                if e.black == nb {
                    e.shift += delta;
                    e.black = na;
                }
            } else {
                // na, nb are white: edge runs black+0 -> nb+s; nb at delta
                // means the copy of interest has s replaced by s+... the same
                // edge seen with nb re-anchored at na's frame: s - delta.
                if e.white == nb {
                    e.shift -= delta;
                    e.white = na;
                }
            }
            edges.push(e);
        }

        // Splice rotations: at na, replace ea by nb's cyclic list opened at
        // eb; drop mid entirely.
        let rot_a = &self.rotations[&na];
        let rot_b = &self.rotations[&nb];
        let pos_b = rot_b.iter().position(|&e| e == eb).unwrap();
        let spliced: Vec<EdgeId> = rot_a
            .iter()
            .flat_map(|&e| {
                if e == ea {
                    // nb's other edges, counterclockwise starting after eb.
                    (1..rot_b.len())
                        .map(|k| rot_b[(pos_b + k) % rot_b.len()])
                        .collect::<Vec<_>>()
                } else {
                    vec![e]
                }
            })
            .collect();

        let mut rotations = BTreeMap::new();
        for n in &nodes {
            if n.id == na {
                rotations.insert(na, spliced.clone());
            } else {
                rotations.insert(n.id, self.rotations[&n.id].clone());
            }
        }
        DimerModel::new(nodes, edges, rotations)
    }

    /// A copy with the given edges deleted; rotations lose the deleted
    /// entries, everything else is untouched.
    pub fn remove_edges(&self, doomed: &std::collections::BTreeSet<EdgeId>) -> Result<DimerModel> {
        let edges: Vec<Edge> = self
            .edges
            .iter()
            .filter(|e| !doomed.contains(&e.id))
            .cloned()
            .collect();
        let rotations: BTreeMap<NodeId, Vec<EdgeId>> = self
            .rotations
            .iter()
            .map(|(n, rot)| {
                (
                    *n,
                    rot.iter().copied().filter(|e| !doomed.contains(e)).collect(),
                )
            })
            .collect();
        DimerModel::new(self.nodes.clone(), edges, rotations)
    }

    /// A copy with all node colors swapped (arrows of the dual quiver
    /// reverse). Shifts are re-anchored to the new black endpoints.
    pub fn color_reversed(&self) -> DimerModel {
        let nodes = self
            .nodes
            .iter()
            .map(|n| Node {
                id: n.id,
                color: n.color.opposite(),
                pos: n.pos,
            })
            .collect();
        let edges = self
            .edges
            .iter()
            .map(|e| Edge {
                id: e.id,
                black: e.white,
                white: e.black,
                shift: -e.shift,
            })
            .collect();
        DimerModel::new(nodes, edges, self.rotations.clone()).expect("color swap stays well-formed")
    }
}

/// Outcome of the validity checks. The model is valid iff all of them pass.
#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub bipartite: bool,
    pub connected: bool,
    /// (V, E, F); valid iff V - E + F == 0.
    pub euler: (i64, i64, i64),
    /// Faces whose boundary has nonzero total deck translation.
    pub nontrivial_faces: Vec<FaceId>,
    /// Faces with boundary length < 3 (uncontracted divalent artifacts).
    pub degenerate_faces: Vec<FaceId>,
    pub low_degree_nodes: Vec<NodeId>,
    pub position_issues: Vec<String>,
}

impl ValidationReport {
    pub fn euler_ok(&self) -> bool {
        let (v, e, f) = self.euler;
        v - e + f == 0
    }

    pub fn is_valid(&self) -> bool {
        self.bipartite
            && self.connected
            && self.euler_ok()
            && self.nontrivial_faces.is_empty()
            && self.degenerate_faces.is_empty()
            && self.low_degree_nodes.is_empty()
            && self.position_issues.is_empty()
    }

    pub fn ensure_valid(&self) -> Result<()> {
        if self.is_valid() {
            Ok(())
        } else {
            Err(DimerError::Invalid(format!("{self:?}")))
        }
    }
}
