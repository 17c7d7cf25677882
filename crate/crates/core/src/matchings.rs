//! Perfect matchings: exact-cover enumeration with explicit witnesses,
//! height changes, the characteristic polynomial, the Newton polygon and
//! matching classification.

use crate::error::{DimerError, Result};
use crate::geom::{LatticePolygon, Vec2, ZERO};
use crate::model::{DimerModel, EdgeId, NodeId};
use crate::quiver::Quiver;
use std::collections::{BTreeMap, BTreeSet};

/// An edge subset covering every node exactly once.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct PerfectMatching {
    pub edges: BTreeSet<EdgeId>,
}

impl PerfectMatching {
    pub fn contains(&self, e: EdgeId) -> bool {
        self.edges.contains(&e)
    }

    /// Sum of the deck shifts of the matched edges; height changes are
    /// differences of these, rotated a quarter turn.
    pub fn shift_sum(&self, model: &DimerModel) -> Vec2 {
        self.edges
            .iter()
            .fold(ZERO, |acc, e| acc + model.edge(*e).shift)
    }

    pub fn is_matching_of(&self, model: &DimerModel) -> bool {
        let mut covered: BTreeSet<NodeId> = BTreeSet::new();
        for e in &self.edges {
            let Some(edge) = model.edges().iter().find(|x| x.id == *e) else {
                return false;
            };
            if !covered.insert(edge.black) || !covered.insert(edge.white) {
                return false;
            }
        }
        covered.len() == model.nodes().len()
    }
}

/// Streams every perfect matching to `visit`, in no particular order.
/// Backtracking exact cover: repeatedly pick the uncovered node with the
/// fewest available edges and branch on them.
pub fn visit_matchings<F: FnMut(&BTreeSet<EdgeId>)>(model: &DimerModel, visit: &mut F) {
    let mut chosen: BTreeSet<EdgeId> = BTreeSet::new();
    let mut covered: BTreeSet<NodeId> = BTreeSet::new();
    recurse(model, &mut chosen, &mut covered, visit);
}

fn recurse<F: FnMut(&BTreeSet<EdgeId>)>(
    model: &DimerModel,
    chosen: &mut BTreeSet<EdgeId>,
    covered: &mut BTreeSet<NodeId>,
    visit: &mut F,
) {
    // Minimum-remaining-candidates node.
    let mut best: Option<(usize, NodeId, Vec<EdgeId>)> = None;
    for n in model.nodes() {
        if covered.contains(&n.id) {
            continue;
        }
        let cands: Vec<EdgeId> = model
            .rotation(n.id)
            .iter()
            .copied()
            .filter(|&e| {
                let edge = model.edge(e);
                !covered.contains(&edge.black) && !covered.contains(&edge.white)
            })
            .collect();
        let k = cands.len();
        if k == 0 {
            return; // dead branch
        }
        if best.as_ref().is_none_or(|(bk, _, _)| k < *bk) {
            let node = n.id;
            best = Some((k, node, cands));
            if k == 1 {
                break;
            }
        }
    }
    let Some((_, _, cands)) = best else {
        visit(chosen);
        return;
    };
    for e in cands {
        let edge = model.edge(e);
        chosen.insert(e);
        covered.insert(edge.black);
        covered.insert(edge.white);
        recurse(model, chosen, covered, visit);
        chosen.remove(&e);
        covered.remove(&edge.black);
        covered.remove(&edge.white);
    }
}

/// Complete, duplicate-free enumeration in lexicographic order of the
/// sorted edge-id sets. With the `parallel` feature the search space is
/// partitioned across workers; the result is identical either way.
pub fn enumerate_matchings(model: &DimerModel) -> Vec<PerfectMatching> {
    #[cfg(feature = "parallel")]
    {
        enumerate_matchings_par(model)
    }
    #[cfg(not(feature = "parallel"))]
    {
        enumerate_matchings_seq(model)
    }
}

/// Sequential enumeration (also used as the benchmark baseline).
pub fn enumerate_matchings_seq(model: &DimerModel) -> Vec<PerfectMatching> {
    let mut out = Vec::new();
    visit_matchings(model, &mut |edges| {
        out.push(PerfectMatching {
            edges: edges.clone(),
        })
    });
    out.sort();
    out.dedup();
    out
}

/// Parallel enumeration: branch once at the root, solve subtrees on the
/// pool, merge and sort.
#[cfg(feature = "parallel")]
pub fn enumerate_matchings_par(model: &DimerModel) -> Vec<PerfectMatching> {
    use rayon::prelude::*;
    let Some(first) = model.nodes().first() else {
        return Vec::new();
    };
    let roots: Vec<EdgeId> = model.rotation(first.id).to_vec();
    let mut out: Vec<PerfectMatching> = roots
        .par_iter()
        .flat_map_iter(|&e| {
            let edge = model.edge(e);
            let mut chosen = BTreeSet::from([e]);
            let mut covered = BTreeSet::from([edge.black, edge.white]);
            let mut sub = Vec::new();
            recurse(model, &mut chosen, &mut covered, &mut |edges| {
                sub.push(PerfectMatching {
                    edges: edges.clone(),
                })
            });
            sub
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

/// The height change of `d` relative to `d0`: the quarter-turn of the
/// homology class of the 1-cycle carried by the superposition of the two
/// matchings. Antisymmetric, and h(d,d1) = h(d,d0) - h(d1,d0) for any d1.
pub fn height_change(
    model: &DimerModel,
    d: &PerfectMatching,
    d0: &PerfectMatching,
) -> Result<Vec2> {
    if !d.is_matching_of(model) || !d0.is_matching_of(model) {
        return Err(DimerError::BadChoice(
            "height change of matchings from a different model".into(),
        ));
    }
    Ok(height_change_unchecked(model, d, d0))
}

pub(crate) fn height_change_unchecked(
    model: &DimerModel,
    d: &PerfectMatching,
    d0: &PerfectMatching,
) -> Vec2 {
    (d0.shift_sum(model) - d.shift_sum(model)).rot90()
}

/// Laurent polynomial with nonnegative integer coefficients: exponent vector
/// -> multiplicity. The coefficient sum equals the number of matchings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharPolynomial {
    pub terms: BTreeMap<Vec2, u64>,
}

impl CharPolynomial {
    pub fn coefficient_sum(&self) -> u64 {
        self.terms.values().sum()
    }

    /// Terms as sorted `[hx, hy, coeff]` triples.
    pub fn rows(&self) -> Vec<[i64; 3]> {
        self.terms
            .iter()
            .map(|(h, c)| [h.x, h.y, *c as i64])
            .collect()
    }
}

pub fn characteristic_polynomial(
    model: &DimerModel,
    d0: &PerfectMatching,
) -> Result<CharPolynomial> {
    if !d0.is_matching_of(model) {
        return Err(DimerError::BadChoice(
            "reference is not a perfect matching of this model".into(),
        ));
    }
    let base = d0.shift_sum(model);
    let mut terms: BTreeMap<Vec2, u64> = BTreeMap::new();
    let mut tmp = PerfectMatching {
        edges: BTreeSet::new(),
    };
    visit_matchings(model, &mut |edges| {
        tmp.edges = edges.clone();
        let h = (base - tmp.edges.iter().fold(ZERO, |a, e| a + model.edge(*e).shift)).rot90();
        *terms.entry(h).or_insert(0) += 1;
    });
    if terms.is_empty() {
        return Err(DimerError::Degenerate("model has no perfect matching".into()));
    }
    Ok(CharPolynomial { terms })
}

/// Convex hull of all height changes, independent of the reference matching
/// up to translation; normalized so the lexicographically smallest vertex is
/// the origin.
pub fn newton_polygon(model: &DimerModel) -> Result<LatticePolygon> {
    let mut heights: BTreeSet<Vec2> = BTreeSet::new();
    visit_matchings(model, &mut |edges| {
        let s = edges.iter().fold(ZERO, |a, e| a + model.edge(*e).shift);
        heights.insert((-s).rot90());
    });
    if heights.is_empty() {
        return Err(DimerError::Degenerate("model has no perfect matching".into()));
    }
    let pts: Vec<Vec2> = heights.into_iter().collect();
    let poly = LatticePolygon::hull(&pts)
        .map_err(|_| DimerError::Degenerate("height changes are collinear".into()))?;
    Ok(poly.normalize())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct MatchingClass {
    pub corner: bool,
    pub multiplicity: u64,
    pub simple: bool,
}

/// Classifies `d`: corner (height change on a Newton-polygon vertex),
/// multiplicity (matchings sharing its height change), simple (the subquiver
/// of arrows not blocked by `d` is strongly connected).
pub fn classify_matching(
    model: &DimerModel,
    quiver: &Quiver,
    d: &PerfectMatching,
) -> Result<MatchingClass> {
    if !d.is_matching_of(model) {
        return Err(DimerError::BadChoice(
            "not a perfect matching of this model".into(),
        ));
    }
    let all = enumerate_matchings(model);
    let d0 = &all[0];
    let h = height_change_unchecked(model, d, d0);
    let mut heights = Vec::new();
    let mut multiplicity = 0u64;
    for m in &all {
        let hm = height_change_unchecked(model, m, d0);
        heights.push(hm);
        if hm == h {
            multiplicity += 1;
        }
    }
    let poly = LatticePolygon::hull(&heights)
        .map_err(|_| DimerError::Degenerate("height changes are collinear".into()))?;
    let corner = poly.is_vertex(h);
    let simple = allowed_subquiver_strongly_connected(quiver, d);
    Ok(MatchingClass {
        corner,
        multiplicity,
        simple,
    })
}

/// Strong connectivity of the subquiver whose arrows avoid the matching.
fn allowed_subquiver_strongly_connected(quiver: &Quiver, d: &PerfectMatching) -> bool {
    let n = quiver.vertex_count();
    if n == 0 {
        return false;
    }
    let mut fwd: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    let mut bwd: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    for a in quiver.arrows() {
        if d.contains(a.edge) {
            continue;
        }
        fwd.entry(a.source.0).or_default().push(a.target.0);
        bwd.entry(a.target.0).or_default().push(a.source.0);
    }
    let reach = |adj: &BTreeMap<u32, Vec<u32>>| -> usize {
        let mut seen = BTreeSet::from([0u32]);
        let mut stack = vec![0u32];
        while let Some(v) = stack.pop() {
            for &w in adj.get(&v).into_iter().flatten() {
                if seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        seen.len()
    };
    reach(&fwd) == n && reach(&bwd) == n
}

/// True iff every edge occurs in at least one perfect matching.
pub fn is_nondegenerate(model: &DimerModel) -> bool {
    let mut used: BTreeSet<EdgeId> = BTreeSet::new();
    visit_matchings(model, &mut |edges| {
        used.extend(edges.iter().copied());
    });
    used.len() == model.edges().len()
}
