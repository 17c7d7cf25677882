//! Vertex removal and synthesis: seeds, the square-to-pentagon-to-hexagon
//! chain, and polygon bookkeeping.

mod common;

use common::load;
use dimer_models::geom::{v2, LatticePolygon};
use dimer_models::matchings::newton_polygon;
use dimer_models::quiver::dual_quiver;
use dimer_models::synthesis::{honeycomb_seed, remove_vertex, synthesize, RemovalOptions};
use dimer_models::zigzag::{is_consistent, polygon_from_slopes};

fn triangle(n: i64) -> LatticePolygon {
    LatticePolygon::hull(&[v2(0, 0), v2(n, 0), v2(0, n)]).unwrap()
}

#[test]
fn honeycomb_seeds() {
    for n in 1..=3i64 {
        let model = honeycomb_seed(n).unwrap();
        assert!(model.validate().is_valid(), "N={n}");
        assert_eq!(model.faces().len() as i64, n * n, "N={n}");
        assert!(is_consistent(&model).is_consistent(), "N={n}");
        assert_eq!(polygon_from_slopes(&model).unwrap(), triangle(n), "N={n}");
        if n <= 2 {
            assert_eq!(newton_polygon(&model).unwrap(), triangle(n), "N={n}");
        }
    }
}

#[test]
fn honeycomb_quiver_counts() {
    let model = honeycomb_seed(2).unwrap();
    let quiver = dual_quiver(&model);
    assert_eq!(quiver.vertex_count(), 4);
    assert_eq!(quiver.arrows().count(), 12);
    assert_eq!(quiver.relations.len(), 12);
}

#[test]
fn single_cell_honeycomb_shapes() {
    let model = honeycomb_seed(1).unwrap();
    // One hexagonal face: each of the three edges contributes both sides.
    let faces = model.faces();
    assert_eq!(faces.len(), 1);
    assert_eq!(faces[0].len(), 6);
    // One quiver vertex, three arrows, and each relation equates the two
    // length-2 complements of its arrow.
    let quiver = dual_quiver(&model);
    assert_eq!(quiver.vertex_count(), 1);
    assert_eq!(quiver.arrows().count(), 3);
    for rel in &quiver.relations {
        assert_eq!(rel.plus.len(), 2);
        assert_eq!(rel.minus.len(), 2);
        assert_ne!(rel.plus, rel.minus);
    }
    // Three matchings, one per edge, giving Z = 1 + x + y.
    let matchings = dimer_models::matchings::enumerate_matchings(&model);
    assert_eq!(matchings.len(), 3);
    assert!(matchings.iter().all(|m| m.edges.len() == 1));
    let z = dimer_models::matchings::characteristic_polynomial(&model, &matchings[0]).unwrap();
    let expected: std::collections::BTreeMap<_, _> =
        [(v2(0, 0), 1u64), (v2(1, 0), 1), (v2(0, 1), 1)].into();
    assert_eq!(z.terms, expected);
    // Three zig-zag paths with slopes summing to zero.
    let paths = dimer_models::zigzag::zigzag_paths(&model);
    assert_eq!(paths.len(), 3);
    assert_eq!(paths.iter().fold(v2(0, 0), |a, p| a + p.slope), v2(0, 0));
}

#[test]
fn honeycomb_two_noncorner_matchings_are_not_simple() {
    // On the N=2 seed the matchings whose height change is not a polygon
    // vertex are exactly the non-simple, non-multiplicity-free ones.
    let model = honeycomb_seed(2).unwrap();
    let quiver = dual_quiver(&model);
    let all = dimer_models::matchings::enumerate_matchings(&model);
    let tri = triangle(2);
    let mut noncorner = 0;
    for d in &all {
        let class = dimer_models::matchings::classify_matching(&model, &quiver, d).unwrap();
        let h = dimer_models::matchings::height_change(&model, d, &all[0]).unwrap();
        assert_eq!(class.corner, tri.is_vertex(h));
        assert_eq!(class.corner, class.simple);
        assert_eq!(class.corner, class.multiplicity == 1);
        if !class.corner {
            noncorner += 1;
        }
    }
    assert!(noncorner > 0);
}

#[test]
fn square_removal_gives_pentagon() {
    let model = load("square_2x2");
    let (next, plan) = remove_vertex(&model, v2(0, 2), &RemovalOptions::default()).unwrap();
    assert_eq!(plan.labeling.n, 1);
    assert_eq!(plan.deleted_edges.len(), 1);
    assert!(is_consistent(&next).is_consistent());
    let pentagon =
        LatticePolygon::hull(&[v2(0, 0), v2(2, 0), v2(2, 2), v2(1, 2), v2(0, 1)]).unwrap();
    assert_eq!(polygon_from_slopes(&next).unwrap(), pentagon);
    assert_eq!(newton_polygon(&next).unwrap(), pentagon);
    assert_eq!(next.faces().len(), 7);
}

#[test]
fn pentagon_removals_give_hexagons() {
    let pentagon = load("pentagon");
    let poly = polygon_from_slopes(&pentagon).unwrap();
    let pairs =
        dimer_models::hexagons::adjacent_pairs(&pentagon, &poly, v2(2, 0)).unwrap();
    assert_eq!(pairs.len(), 4, "four choices at the lower-right corner");
    let hexagon = LatticePolygon::hull(&[
        v2(0, 0),
        v2(1, 0),
        v2(2, 1),
        v2(2, 2),
        v2(1, 2),
        v2(0, 1),
    ])
    .unwrap();
    for &pair in &pairs {
        let (next, plan) = remove_vertex(
            &pentagon,
            v2(2, 0),
            &RemovalOptions {
                pair: Some(pair),
                origin: None,
            },
        )
        .unwrap();
        assert_eq!(plan.deleted_edges.len(), 1);
        assert!(is_consistent(&next).is_consistent(), "pair {pair:?}");
        assert_eq!(polygon_from_slopes(&next).unwrap(), hexagon);
        assert_eq!(next.faces().len(), 6);
    }
}

#[test]
fn triangle_seed_refuses_corner_removal() {
    let model = honeycomb_seed(1).unwrap();
    let err = remove_vertex(&model, v2(0, 0), &RemovalOptions::default());
    assert!(err.is_err());
}

#[test]
fn synthesize_unit_square() {
    let square = LatticePolygon::hull(&[v2(0, 0), v2(1, 0), v2(1, 1), v2(0, 1)]).unwrap();
    let trace = synthesize(&square, None).unwrap();
    let model = trace.final_model();
    assert!(is_consistent(model).is_consistent());
    assert_eq!(newton_polygon(model).unwrap(), square);
    assert_eq!(model.faces().len(), 2);
}

#[test]
fn synthesize_unit_triangle_is_trivial() {
    let trace = synthesize(&triangle(1), None).unwrap();
    assert_eq!(trace.plans.len(), 0);
    assert_eq!(trace.models.len(), 1);
}

#[test]
fn removal_at_higher_order_corner() {
    // The corner at (0,2) has cone determinant 5 with parameter q = 2, so
    // removing it deletes three edges (the three special residues of 5/2).
    let tri = LatticePolygon::hull(&[v2(0, 2), v2(5, 0), v2(0, 3)]).unwrap();
    let trace = synthesize(&tri, None).unwrap();
    let model = trace.final_model();
    assert!(is_consistent(model).is_consistent());
    let normalized = polygon_from_slopes(model).unwrap();
    let offset = tri.vertices()[0] - normalized.vertices()[0];
    let (next, plan) = remove_vertex(model, v2(0, 2) - offset, &RemovalOptions::default()).unwrap();
    assert_eq!((plan.labeling.n, plan.labeling.q), (5, 2));
    // 5/2 = [3, 2]: specials {0, 2, 1}, three deletions.
    assert_eq!(plan.deleted_edges.len(), 3);
    assert!(is_consistent(&next).is_consistent());
    let expected = LatticePolygon::hull(&[v2(0, 3), v2(1, 2), v2(5, 0)])
        .unwrap()
        .translate(-offset)
        .normalize();
    assert_eq!(polygon_from_slopes(&next).unwrap(), expected);
}
