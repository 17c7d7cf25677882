//! Bicolored multigraph isomorphism by canonical labeling: iterative
//! refinement by neighborhood multisets, with individualization when the
//! partition stalls. Shifts and rotations are not compared; this is the
//! abstract-graph view used to compare models up to relabeling.

use crate::model::{Color, DimerModel, NodeId};
use std::collections::BTreeMap;

/// A canonical certificate: two models are isomorphic as node-colored
/// multigraphs iff their certificates are equal.
pub fn canonical_certificate(model: &DimerModel) -> Vec<(usize, usize, usize)> {
    let nodes: Vec<NodeId> = model.nodes().iter().map(|n| n.id).collect();
    // Multiplicity of edges between node pairs.
    let mut mult: BTreeMap<(NodeId, NodeId), usize> = BTreeMap::new();
    for e in model.edges() {
        *mult.entry((e.black, e.white)).or_insert(0) += 1;
    }
    let neighbors: BTreeMap<NodeId, Vec<(NodeId, usize)>> = nodes
        .iter()
        .map(|&n| {
            let mut adj: BTreeMap<NodeId, usize> = BTreeMap::new();
            for (&(b, w), &m) in &mult {
                if b == n {
                    *adj.entry(w).or_insert(0) += m;
                }
                if w == n {
                    *adj.entry(b).or_insert(0) += m;
                }
            }
            (n, adj.into_iter().collect())
        })
        .collect();

    let initial: BTreeMap<NodeId, usize> = nodes
        .iter()
        .map(|&n| {
            let c = match model.node(n).color {
                Color::Black => 0usize,
                Color::White => 1usize,
            };
            (n, c)
        })
        .collect();

    best_certificate(&nodes, &neighbors, initial, &mult)
}

pub fn isomorphic(a: &DimerModel, b: &DimerModel) -> bool {
    if a.nodes().len() != b.nodes().len() || a.edges().len() != b.edges().len() {
        return false;
    }
    canonical_certificate(a) == canonical_certificate(b)
}

type Neighbors = BTreeMap<NodeId, Vec<(NodeId, usize)>>;
type ClassKey = (usize, Vec<(usize, usize)>);

fn refine(nodes: &[NodeId], neighbors: &Neighbors, classes: &mut BTreeMap<NodeId, usize>) {
    loop {
        let mut keys: BTreeMap<NodeId, ClassKey> = BTreeMap::new();
        for &n in nodes {
            let mut sig: Vec<(usize, usize)> = neighbors[&n]
                .iter()
                .map(|&(m, k)| (classes[&m], k))
                .collect();
            sig.sort();
            keys.insert(n, (classes[&n], sig));
        }
        let mut distinct: Vec<&ClassKey> = keys.values().collect();
        distinct.sort();
        distinct.dedup();
        let index: BTreeMap<&ClassKey, usize> = distinct
            .iter()
            .enumerate()
            .map(|(i, k)| (*k, i))
            .collect();
        let next: BTreeMap<NodeId, usize> = nodes.iter().map(|&n| (n, index[&keys[&n]])).collect();
        if *classes == next {
            return;
        }
        *classes = next;
    }
}

fn best_certificate(
    nodes: &[NodeId],
    neighbors: &Neighbors,
    mut classes: BTreeMap<NodeId, usize>,
    mult: &BTreeMap<(NodeId, NodeId), usize>,
) -> Vec<(usize, usize, usize)> {
    refine(nodes, neighbors, &mut classes);
    // Find the smallest non-singleton class.
    let mut by_class: BTreeMap<usize, Vec<NodeId>> = BTreeMap::new();
    for (&n, &c) in &classes {
        by_class.entry(c).or_default().push(n);
    }
    let split = by_class.iter().find(|(_, v)| v.len() > 1);
    match split {
        None => {
            // Discrete partition: read off the certificate.
            let mut cert: Vec<(usize, usize, usize)> = mult
                .iter()
                .map(|(&(b, w), &m)| (classes[&b], classes[&w], m))
                .collect();
            cert.sort();
            cert
        }
        Some((_, members)) => {
            let members = members.clone();
            let bump = classes.len();
            let mut best: Option<Vec<(usize, usize, usize)>> = None;
            for n in members {
                let mut branch = classes.clone();
                branch.insert(n, bump);
                let cert = best_certificate(nodes, neighbors, branch, mult);
                if best.as_ref().is_none_or(|b| cert < *b) {
                    best = Some(cert);
                }
            }
            best.unwrap()
        }
    }
}
