//! Fixture-level checks of the core model operations: validation, faces,
//! matchings, heights, zig-zags and the two polygon constructions.

mod common;

use common::{load, ALL_FIXTURES, CONSISTENT_FIXTURES};
use dimer_models::geom::{v2, LatticePolygon, Vec2};
use dimer_models::matchings::{
    characteristic_polynomial, enumerate_matchings, height_change, is_nondegenerate,
};
use dimer_models::quiver::dual_quiver;
use dimer_models::zigzag::{is_consistent, is_properly_ordered, polygon_from_slopes, zigzag_paths};
use std::collections::{BTreeMap, BTreeSet};

fn unit_square() -> LatticePolygon {
    LatticePolygon::hull(&[v2(0, 0), v2(1, 0), v2(1, 1), v2(0, 1)]).unwrap()
}

#[test]
fn all_fixtures_validate() {
    for name in ALL_FIXTURES {
        let model = load(name);
        let report = model.validate();
        assert!(report.is_valid(), "{name}: {report:?}");
    }
}

#[test]
fn conifold_counts() {
    let model = load("conifold");
    let faces = model.faces();
    assert_eq!(faces.len(), 2);
    let matchings = enumerate_matchings(&model);
    assert_eq!(matchings.len(), 4);
    // Each matching is a single edge.
    for m in &matchings {
        assert_eq!(m.edges.len(), 1);
    }
}

#[test]
fn conifold_heights_and_polynomial() {
    let model = load("conifold");
    let matchings = enumerate_matchings(&model);
    let d0 = &matchings[0];
    let heights: BTreeSet<Vec2> = matchings
        .iter()
        .map(|d| height_change(&model, d, d0).unwrap())
        .collect();
    let expected: BTreeSet<Vec2> = [v2(0, 0), v2(1, 0), v2(0, 1), v2(1, 1)].into();
    assert_eq!(heights, expected);
    let z = characteristic_polynomial(&model, d0).unwrap();
    let terms: BTreeMap<Vec2, u64> = z.terms.clone();
    assert_eq!(terms.len(), 4);
    assert!(terms.values().all(|&c| c == 1));
    assert_eq!(z.coefficient_sum(), 4);
    let newton = dimer_models::matchings::newton_polygon(&model).unwrap();
    assert_eq!(newton, unit_square());
}

#[test]
fn conifold_quiver_relations() {
    let model = load("conifold");
    let quiver = dual_quiver(&model);
    assert_eq!(quiver.vertex_count(), 2);
    assert_eq!(quiver.arrows().count(), 4);
    // Arrows split two and two between the vertices, and each relation pair
    // consists of the two length-3 return paths through the other arrows:
    // outer arrows from the opposite parallel pair, middle the partner.
    for rel in &quiver.relations {
        let a = quiver.arrow(rel.arrow);
        assert_eq!(rel.plus.len(), 3);
        assert_eq!(rel.minus.len(), 3);
        assert_ne!(rel.plus, rel.minus);
        let partner: Vec<_> = quiver
            .arrows()
            .filter(|x| x.edge != rel.arrow && x.source == a.source && x.target == a.target)
            .collect();
        assert_eq!(partner.len(), 1);
        let partner = partner[0].edge;
        let opposite: BTreeSet<_> = quiver
            .arrows()
            .filter(|x| x.source == a.target && x.target == a.source)
            .map(|x| x.edge)
            .collect();
        assert_eq!(opposite.len(), 2);
        for p in [&rel.plus, &rel.minus] {
            assert_eq!(p.arrows[1], partner);
            assert!(opposite.contains(&p.arrows[0]));
            assert!(opposite.contains(&p.arrows[2]));
            assert_ne!(p.arrows[0], p.arrows[2]);
        }
        assert_ne!(rel.plus.arrows[0], rel.minus.arrows[0]);
    }
}

#[test]
fn conifold_zigzags() {
    let model = load("conifold");
    let paths = zigzag_paths(&model);
    assert_eq!(paths.len(), 4);
    let slopes: BTreeSet<Vec2> = paths.iter().map(|p| p.slope).collect();
    let expected: BTreeSet<Vec2> = [v2(1, 0), v2(-1, 0), v2(0, 1), v2(0, -1)].into();
    assert_eq!(slopes, expected);
    for p in &paths {
        assert_eq!(p.period(), 2);
    }
}

#[test]
fn conifold_is_consistent_and_properly_ordered() {
    let model = load("conifold");
    let report = is_consistent(&model);
    assert!(report.is_consistent(), "{report:?}");
    let po = is_properly_ordered(&model);
    assert!(po.is_properly_ordered(), "{po:?}");
    assert!(is_nondegenerate(&model));
}

#[test]
fn conifold_polygon_from_slopes_matches_newton() {
    let model = load("conifold");
    let from_slopes = polygon_from_slopes(&model).unwrap();
    assert_eq!(from_slopes, unit_square());
}

#[test]
fn inconsistent_fixture_verdicts() {
    let model = load("inconsistent");
    let report = is_consistent(&model);
    assert!(!report.is_consistent());
    assert!(
        !report.same_direction_pairs.is_empty(),
        "expected a same-direction double intersection, got {report:?}"
    );
    assert!(report.trivial_paths.is_empty());
    assert!(!is_properly_ordered(&model).is_properly_ordered());

    let model = load("inconsistent_trivial");
    let report = is_consistent(&model);
    assert!(!report.is_consistent());
    assert!(
        !report.trivial_paths.is_empty(),
        "expected a homologically trivial path, got {report:?}"
    );
}

#[test]
fn p1p1_ii_is_consistent() {
    let model = load("p1p1_ii");
    let report = is_consistent(&model);
    assert!(report.is_consistent(), "{report:?}");
}

#[test]
fn face_counts_follow_area() {
    // Quiver vertex count = 2 * polygon area for these models.
    for (name, faces) in [
        ("square_2x2", 8),
        ("pentagon", 7),
        ("hexagon_model1", 6),
        ("hexagon_model2", 6),
        ("hexagon_model3", 6),
        ("hexagon_model4", 6),
        ("hexagon_graph1", 6),
        ("hexagon_graph2", 6),
        ("p1p1_ii", 4),
        ("large_square_tile", 16),
    ] {
        let model = load(name);
        assert_eq!(model.faces().len(), faces, "{name}");
    }
}

#[test]
fn consistent_fixtures_are_consistent() {
    for name in CONSISTENT_FIXTURES {
        let model = load(name);
        let report = is_consistent(&model);
        assert!(report.is_consistent(), "{name}: {report:?}");
        let po = is_properly_ordered(&model);
        assert!(po.is_properly_ordered(), "{name}: {po:?}");
    }
}

#[test]
fn gulotta_on_fixtures() {
    for name in CONSISTENT_FIXTURES {
        let model = load(name);
        let a = polygon_from_slopes(&model).unwrap();
        let b = dimer_models::matchings::newton_polygon(&model).unwrap();
        assert_eq!(a, b, "{name}");
    }
}

#[test]
fn edge_double_cover_and_zero_slope_sum() {
    for name in ALL_FIXTURES {
        let model = load(name);
        let paths = zigzag_paths(&model);
        let total: usize = paths.iter().map(|p| p.period()).sum();
        assert_eq!(total, 2 * model.edges().len(), "{name}");
        let sum = paths.iter().fold(v2(0, 0), |acc, p| acc + p.slope);
        assert_eq!(sum, v2(0, 0), "{name}");
    }
}

#[test]
fn interchange_roundtrip() {
    for name in ALL_FIXTURES {
        let model = load(name);
        let text = dimer_models::io::to_json(&model);
        let back = dimer_models::io::from_json(&text).unwrap();
        assert_eq!(dimer_models::io::to_json(&back), text, "{name}");
    }
}
