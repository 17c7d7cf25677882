//! The quiver with relations dual to a dimer model. Vertices are the dimer
//! faces, arrows are the dimer edges oriented so the white node sits on the
//! right, and for every arrow `a` the relation equates the two return paths
//! `p_plus(a)` (clockwise around the white node) and `p_minus(a)`
//! (counterclockwise around the black node).

use crate::error::{DimerError, Result};
use crate::geom::{Vec2, ZERO};
use crate::model::{Color, DimerModel, Dir, EdgeId, Face, FaceId, NodeId};
use std::collections::{BTreeMap, BTreeSet, VecDeque};

/// An arrow of the dual quiver; arrows are in bijection with dimer edges and
/// reuse their ids. `shift` is the deck translation of the target face's
/// frame relative to the source face's frame when crossing the edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Arrow {
    pub edge: EdgeId,
    pub source: FaceId,
    pub target: FaceId,
    pub shift: Vec2,
    /// Deck translation of the crossed edge's canonical copy, in the source
    /// face's frame. Needed to lift quiver paths to the universal cover.
    pub edge_offset: Vec2,
}

#[derive(Debug, Clone)]
pub struct Relation {
    pub arrow: EdgeId,
    pub plus: QuiverPath,
    pub minus: QuiverPath,
}

#[derive(Debug, Clone)]
pub struct Quiver {
    pub faces: Vec<Face>,
    arrows: BTreeMap<EdgeId, Arrow>,
    pub relations: Vec<Relation>,
}

/// A path on the quiver: arrows listed in traversal order (first arrow
/// first). The empty path is allowed and pinned to a vertex.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QuiverPath {
    pub arrows: Vec<EdgeId>,
    pub source: FaceId,
    pub target: FaceId,
}

impl QuiverPath {
    pub fn trivial(at: FaceId) -> QuiverPath {
        QuiverPath {
            arrows: Vec::new(),
            source: at,
            target: at,
        }
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }
}

impl Quiver {
    pub fn arrow(&self, id: EdgeId) -> &Arrow {
        &self.arrows[&id]
    }

    pub fn arrows(&self) -> impl Iterator<Item = &Arrow> {
        self.arrows.values()
    }

    pub fn vertex_count(&self) -> usize {
        self.faces.len()
    }

    /// Builds a path from arrows in traversal order, checking composability.
    pub fn path(&self, arrows: Vec<EdgeId>, start: FaceId) -> Result<QuiverPath> {
        let mut at = start;
        for &a in &arrows {
            let arrow = self
                .arrows
                .get(&a)
                .ok_or_else(|| DimerError::Parse(format!("no arrow {}", a.0)))?;
            if arrow.source != at {
                return Err(DimerError::Parse(format!(
                    "arrow {} does not start at face {}",
                    a.0, at.0
                )));
            }
            at = arrow.target;
        }
        Ok(QuiverPath {
            arrows,
            source: start,
            target: at,
        })
    }

    /// Total deck translation accumulated along a path.
    pub fn path_shift(&self, p: &QuiverPath) -> Vec2 {
        p.arrows
            .iter()
            .fold(ZERO, |acc, a| acc + self.arrows[a].shift)
    }

    /// Deck translations of the edge copies a path crosses, in the frame of
    /// its source face.
    pub fn path_edge_offsets(&self, p: &QuiverPath) -> Vec<(EdgeId, Vec2)> {
        let mut frame = ZERO;
        let mut out = Vec::new();
        for &a in &p.arrows {
            let arrow = &self.arrows[&a];
            out.push((a, frame + arrow.edge_offset));
            frame += arrow.shift;
        }
        out
    }

    /// All small loops based at `vertex`: for every node on the face
    /// boundary and every corner of the face at that node, the loop going
    /// once around the node.
    pub fn small_loops(&self, model: &DimerModel, vertex: FaceId) -> Vec<QuiverPath> {
        let face = &self.faces[vertex.0 as usize];
        let mut seen_nodes = BTreeSet::new();
        let mut out = Vec::new();
        for side in &face.sides {
            for node in [model.edge(side.edge).black, model.edge(side.edge).white] {
                if !seen_nodes.insert(node) {
                    continue;
                }
                out.extend(self.loops_around(model, node, vertex));
            }
        }
        out
    }

    /// The small loops based at `vertex` going once around `node`, one per
    /// corner of the face at the node.
    pub fn loops_around(&self, model: &DimerModel, node: NodeId, vertex: FaceId) -> Vec<QuiverPath> {
        let rot = model.rotation(node);
        let color = model.node(node).color;
        // Arrows circulate clockwise around white nodes and counterclockwise
        // around black ones; index the circulation accordingly.
        let order: Vec<EdgeId> = match color {
            Color::White => rot.iter().rev().copied().collect(),
            Color::Black => rot.to_vec(),
        };
        let mut out = Vec::new();
        for start in 0..order.len() {
            if self.arrows[&order[start]].source != vertex {
                continue;
            }
            let arrows: Vec<EdgeId> = (0..order.len())
                .map(|k| order[(start + k) % order.len()])
                .collect();
            if let Ok(p) = self.path(arrows, vertex) {
                debug_assert_eq!(p.target, vertex);
                out.push(p);
            }
        }
        out
    }
}

/// Extracts the dual quiver of a valid dimer model.
pub fn dual_quiver(model: &DimerModel) -> Quiver {
    let faces = model.faces();
    let mut by_side: BTreeMap<(EdgeId, Dir), (FaceId, Vec2)> = BTreeMap::new();
    for f in &faces {
        for s in &f.sides {
            by_side.insert((s.edge, s.dir), (f.id, s.offset));
        }
    }
    let mut arrows = BTreeMap::new();
    for e in model.edges() {
        let (src, src_off) = by_side[&(e.id, Dir::WhiteToBlack)];
        let (tgt, tgt_off) = by_side[&(e.id, Dir::BlackToWhite)];
        arrows.insert(
            e.id,
            Arrow {
                edge: e.id,
                source: src,
                target: tgt,
                shift: src_off - tgt_off,
                edge_offset: src_off,
            },
        );
    }
    let mut quiver = Quiver {
        faces,
        arrows,
        relations: Vec::new(),
    };
    let mut relations = Vec::new();
    for e in model.edges() {
        let plus = return_path(model, &quiver, e.id, Color::White);
        let minus = return_path(model, &quiver, e.id, Color::Black);
        debug_assert_eq!(plus.source, quiver.arrow(e.id).target);
        debug_assert_eq!(plus.target, quiver.arrow(e.id).source);
        debug_assert_eq!(minus.source, plus.source);
        debug_assert_eq!(minus.target, plus.target);
        relations.push(Relation {
            arrow: e.id,
            plus,
            minus,
        });
    }
    quiver.relations = relations;
    quiver
}

/// The return path of arrow `a` around its endpoint of the given color:
/// clockwise around the white node, counterclockwise around the black one.
/// Both run from the arrow's target to its source.
fn return_path(model: &DimerModel, quiver: &Quiver, a: EdgeId, color: Color) -> QuiverPath {
    let node = model.endpoint(a, color);
    let rot = model.rotation(node);
    let d = rot.len();
    let pos = rot.iter().position(|&e| e == a).unwrap();
    // Circulation around the node, starting after `a` and omitting it.
    let arrows: Vec<EdgeId> = match color {
        // Clockwise around white = reverse rotation order.
        Color::White => (1..d).map(|k| rot[(pos + d - k) % d]).collect(),
        // Counterclockwise around black = rotation order.
        Color::Black => (1..d).map(|k| rot[(pos + k) % d]).collect(),
    };
    let start = quiver.arrow(a).target;
    quiver
        .path(arrows, start)
        .expect("return path composes around the node")
}

/// The full rewrite-equivalence class of `p` restricted to paths of length
/// at most `max_len`, by breadth-first substitution of `p_plus(a)` and
/// `p_minus(a)` at every position. `cap` bounds the explored class size.
pub fn rewrite_equivalent(
    quiver: &Quiver,
    p: &QuiverPath,
    max_len: usize,
    cap: usize,
) -> Result<BTreeSet<QuiverPath>> {
    if p.len() > max_len {
        return Err(DimerError::BadChoice(format!(
            "path of length {} exceeds max_len {}",
            p.len(),
            max_len
        )));
    }
    let mut class: BTreeSet<QuiverPath> = BTreeSet::new();
    let mut queue = VecDeque::new();
    class.insert(p.clone());
    queue.push_back(p.clone());
    while let Some(cur) = queue.pop_front() {
        for rel in &quiver.relations {
            for (from, to) in [(&rel.plus, &rel.minus), (&rel.minus, &rel.plus)] {
                if from.is_empty() || from.len() > cur.len() {
                    continue;
                }
                for start in 0..=(cur.len() - from.len()) {
                    if cur.arrows[start..start + from.len()] != from.arrows[..] {
                        continue;
                    }
                    let mut arrows = cur.arrows[..start].to_vec();
                    arrows.extend_from_slice(&to.arrows);
                    arrows.extend_from_slice(&cur.arrows[start + from.len()..]);
                    if arrows.len() > max_len {
                        continue;
                    }
                    let cand = quiver
                        .path(arrows, cur.source)
                        .expect("substitution preserves composability");
                    debug_assert_eq!(cand.target, cur.target);
                    if class.insert(cand.clone()) {
                        if class.len() > cap {
                            return Err(DimerError::BoundedExploration { cap });
                        }
                        queue.push_back(cand);
                    }
                }
            }
        }
    }
    Ok(class)
}
