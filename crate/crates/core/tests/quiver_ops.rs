//! Path rewriting, minimality, small loops and divalent contraction.

mod common;

use common::load;
use dimer_models::geom::{v2, ZERO};
use dimer_models::iso::isomorphic;
use dimer_models::model::{DimerModel, Edge, EdgeId, Node, NodeId};
use dimer_models::quiver::{dual_quiver, rewrite_equivalent, QuiverPath};
use dimer_models::synthesis::honeycomb_seed;
use dimer_models::zigzag::is_minimal_path;
use dimer_models::Color;
use std::collections::{BTreeMap, BTreeSet};

#[test]
fn conifold_rewrite_class_of_a_relation_path() {
    let model = load("conifold");
    let quiver = dual_quiver(&model);
    // Each relation pair forms a two-element class at the length bound.
    for rel in &quiver.relations {
        let class = rewrite_equivalent(&quiver, &rel.plus, 3, 100).unwrap();
        assert_eq!(class.len(), 2);
        assert!(class.contains(&rel.plus));
        assert!(class.contains(&rel.minus));
    }
}

#[test]
fn empty_path_class_is_itself() {
    let model = load("conifold");
    let quiver = dual_quiver(&model);
    let p = QuiverPath::trivial(dimer_models::FaceId(0));
    let class = rewrite_equivalent(&quiver, &p, 3, 100).unwrap();
    assert_eq!(class.len(), 1);
}

#[test]
fn rewrite_class_is_representative_independent() {
    let model = load("pentagon");
    let quiver = dual_quiver(&model);
    for rel in quiver.relations.iter().take(4) {
        let class = rewrite_equivalent(&quiver, &rel.plus, 4, 1000).unwrap();
        for member in &class {
            let again = rewrite_equivalent(&quiver, member, 4, 1000).unwrap();
            assert_eq!(again, class);
        }
    }
}

#[test]
fn hexagon_small_loops_are_one_class() {
    let model = honeycomb_seed(1).unwrap();
    let quiver = dual_quiver(&model);
    let v = dimer_models::FaceId(0);
    let loops = quiver.small_loops(&model, v);
    // Three cyclic rotations around each of the two nodes.
    let distinct: BTreeSet<QuiverPath> = loops.iter().cloned().collect();
    assert_eq!(distinct.len(), 6);
    // The two-sided relations identify all of them, in particular the three
    // cyclic rotations of any one loop.
    let class = rewrite_equivalent(&quiver, loops.first().unwrap(), 3, 100).unwrap();
    for l in &distinct {
        assert!(class.contains(l));
    }
    let first = &loops[0];
    for rot in 1..3 {
        let mut arrows = first.arrows.clone();
        arrows.rotate_left(rot);
        let rotated = quiver.path(arrows, first.source).unwrap();
        assert!(class.contains(&rotated));
    }
}

#[test]
fn conifold_small_loops_are_one_class() {
    let model = load("conifold");
    let quiver = dual_quiver(&model);
    for vid in 0..2u32 {
        let v = dimer_models::FaceId(vid);
        let loops = quiver.small_loops(&model, v);
        assert!(!loops.is_empty());
        let class = rewrite_equivalent(&quiver, &loops[0], 4, 1000).unwrap();
        for l in &loops
        {
            assert!(class.contains(l), "loop {l:?} not in class of {:?}", loops[0]);
        }
    }
}

#[test]
fn relations_compose_to_small_loops() {
    let model = load("conifold");
    let quiver = dual_quiver(&model);
    for rel in &quiver.relations {
        let a = quiver.arrow(rel.arrow);
        assert_eq!(rel.plus.source, a.target);
        assert_eq!(rel.plus.target, a.source);
        assert_eq!(rel.minus.source, a.target);
        assert_eq!(rel.minus.target, a.source);
        // a followed by either return path is a closed loop with trivial
        // deck translation.
        for ret in [&rel.plus, &rel.minus] {
            let mut arrows = vec![rel.arrow];
            arrows.extend(ret.arrows.iter().copied());
            let loop_path = quiver.path(arrows, a.source).unwrap();
            assert_eq!(loop_path.target, a.source);
            assert_eq!(quiver.path_shift(&loop_path), ZERO);
        }
    }
}

#[test]
fn minimality_on_the_conifold() {
    let model = load("conifold");
    let quiver = dual_quiver(&model);
    // Single arrows are minimal.
    for a in quiver.arrows() {
        let p = quiver.path(vec![a.edge], a.source).unwrap();
        assert!(is_minimal_path(&model, &quiver, &p).unwrap(), "arrow {:?}", a.edge);
    }
    // Small loops are not.
    for vid in 0..2u32 {
        let v = dimer_models::FaceId(vid);
        for l in quiver.small_loops(&model, v) {
            assert!(!is_minimal_path(&model, &quiver, &l).unwrap(), "{l:?}");
        }
    }
    // Length-2 composable paths are minimal.
    let mut checked = 0;
    for a in quiver.arrows() {
        for b in quiver.arrows() {
            if b.source == a.target {
                let p = quiver.path(vec![a.edge, b.edge], a.source).unwrap();
                assert!(is_minimal_path(&model, &quiver, &p).unwrap(), "{:?}", p.arrows);
                checked += 1;
            }
        }
    }
    assert!(checked > 0);
}

#[test]
fn minimality_requires_consistency() {
    let model = load("inconsistent");
    let quiver = dual_quiver(&model);
    let a = quiver.arrows().next().unwrap();
    let p = quiver.path(vec![a.edge], a.source).unwrap();
    assert!(is_minimal_path(&model, &quiver, &p).is_err());
}

#[test]
fn rewrite_exploration_is_capped() {
    let model = load("pentagon");
    let quiver = dual_quiver(&model);
    let rel = &quiver.relations[0];
    match rewrite_equivalent(&quiver, &rel.plus, 9, 1) {
        Err(dimer_models::DimerError::BoundedExploration { cap: 1 }) => {}
        other => panic!("expected a bounded-exploration error, got {other:?}"),
    }
}

#[test]
fn intersection_window_too_small_is_an_error() {
    let model = load("conifold");
    let paths = dimer_models::zigzag::zigzag_paths(&model);
    let err = dimer_models::zigzag::cover_intersections(&model, &paths[0], &paths[1], 1);
    assert!(matches!(
        err,
        Err(dimer_models::DimerError::WindowTooSmall { .. })
    ));
}

#[test]
fn contraction_is_a_fixed_point_without_divalent_nodes() {
    let model = load("conifold");
    let back = model.contract_divalent().unwrap();
    assert_eq!(back.nodes().len(), model.nodes().len());
    assert_eq!(back.edges().len(), model.edges().len());
}

/// The single-cell honeycomb with one edge subdivided twice: a chain of two
/// divalent nodes.
fn subdivided_hexagon() -> DimerModel {
    // Nodes: B0, W1 and the chain B0 - W2 - B3 - W1 replacing edge z.
    let nodes = vec![
        Node { id: NodeId(0), color: Color::Black, pos: None },
        Node { id: NodeId(1), color: Color::White, pos: None },
        Node { id: NodeId(2), color: Color::White, pos: None },
        Node { id: NodeId(3), color: Color::Black, pos: None },
    ];
    let edges = vec![
        // x and y as in the seed.
        Edge { id: EdgeId(0), black: NodeId(0), white: NodeId(1), shift: v2(0, 1) },
        Edge { id: EdgeId(1), black: NodeId(0), white: NodeId(1), shift: v2(-1, 0) },
        // subdivided z: B0 - W2 - B3 - W1.
        Edge { id: EdgeId(2), black: NodeId(0), white: NodeId(2), shift: v2(0, 0) },
        Edge { id: EdgeId(3), black: NodeId(3), white: NodeId(2), shift: v2(0, 0) },
        Edge { id: EdgeId(4), black: NodeId(3), white: NodeId(1), shift: v2(0, 0) },
    ];
    let rotations = BTreeMap::from([
        (NodeId(0), vec![EdgeId(2), EdgeId(0), EdgeId(1)]),
        (NodeId(1), vec![EdgeId(4), EdgeId(0), EdgeId(1)]),
        (NodeId(2), vec![EdgeId(2), EdgeId(3)]),
        (NodeId(3), vec![EdgeId(3), EdgeId(4)]),
    ]);
    DimerModel::new(nodes, edges, rotations).unwrap()
}

#[test]
fn chain_contraction_is_order_independent() {
    let model = subdivided_hexagon();
    assert!(model.validate().is_valid(), "{:?}", model.validate());
    let target = honeycomb_seed(1).unwrap();
    // Contract the two divalent nodes in both orders.
    let a = model
        .contract_divalent_at(NodeId(2))
        .unwrap()
        .contract_divalent()
        .unwrap();
    let b = model
        .contract_divalent_at(NodeId(3))
        .unwrap()
        .contract_divalent()
        .unwrap();
    for m in [&a, &b] {
        assert!(m.validate().is_valid());
        assert_eq!(m.nodes().len(), 2);
        assert_eq!(m.edges().len(), 3);
        assert!(isomorphic(m, &target));
    }
}

#[test]
fn contraction_rejects_self_loop() {
    // A divalent white node whose two edges go to the same black node.
    let nodes = vec![
        Node { id: NodeId(0), color: Color::Black, pos: None },
        Node { id: NodeId(1), color: Color::White, pos: None },
        Node { id: NodeId(2), color: Color::White, pos: None },
    ];
    let edges = vec![
        Edge { id: EdgeId(0), black: NodeId(0), white: NodeId(1), shift: v2(0, 0) },
        Edge { id: EdgeId(1), black: NodeId(0), white: NodeId(1), shift: v2(1, 0) },
        Edge { id: EdgeId(2), black: NodeId(0), white: NodeId(2), shift: v2(0, 0) },
        Edge { id: EdgeId(3), black: NodeId(0), white: NodeId(2), shift: v2(0, 1) },
    ];
    let rotations = BTreeMap::from([
        (NodeId(0), vec![EdgeId(0), EdgeId(2), EdgeId(1), EdgeId(3)]),
        (NodeId(1), vec![EdgeId(0), EdgeId(1)]),
        (NodeId(2), vec![EdgeId(2), EdgeId(3)]),
    ]);
    let model = DimerModel::new(nodes, edges, rotations).unwrap();
    assert!(model.contract_divalent().is_err());
}

#[test]
fn contraction_preserves_matchings_and_polygon() {
    use dimer_models::matchings::{enumerate_matchings, newton_polygon};
    let model = load("hexagon_model1");
    let contracted = model.contract_divalent().unwrap();
    assert_eq!(contracted.nodes().len(), 6);
    assert_eq!(contracted.edges().len(), 12);
    let before = enumerate_matchings(&model);
    let after = enumerate_matchings(&contracted);
    assert_eq!(before.len(), after.len());
    assert_eq!(
        newton_polygon(&model).unwrap(),
        newton_polygon(&contracted).unwrap()
    );
}

#[test]
fn faces_partition_edge_sides() {
    for name in ["conifold", "pentagon", "p1p1_ii", "large_square_tile"] {
        let model = load(name);
        let faces = model.faces();
        let mut seen = BTreeSet::new();
        for f in &faces {
            for s in &f.sides {
                assert!(seen.insert((s.edge, s.dir)), "{name}: duplicated side");
            }
        }
        assert_eq!(seen.len(), 2 * model.edges().len(), "{name}");
    }
}
