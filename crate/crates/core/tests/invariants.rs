//! Cross-module invariants on the fixture corpus.

mod common;

use common::{load, ALL_FIXTURES, CONSISTENT_FIXTURES};
use dimer_models::geom::{v2, Vec2};
use dimer_models::matchings::{
    characteristic_polynomial, enumerate_matchings, enumerate_matchings_seq, height_change,
    is_nondegenerate, newton_polygon,
};
use dimer_models::zigzag::{cover_intersections, zigzag_paths};
use std::collections::BTreeMap;

#[test]
fn height_cocycle_identity() {
    for name in ["conifold", "p1p1_ii", "hexagon_graph1"] {
        let model = load(name);
        let all = enumerate_matchings(&model);
        for d in &all {
            for d0 in &all {
                for d1 in &all {
                    let lhs = height_change(&model, d, d1).unwrap();
                    let rhs = height_change(&model, d, d0).unwrap()
                        - height_change(&model, d1, d0).unwrap();
                    assert_eq!(lhs, rhs, "{name}");
                }
            }
        }
    }
}

#[test]
fn height_change_is_antisymmetric_and_zero_on_diagonal() {
    for name in ALL_FIXTURES {
        let model = load(name);
        let all = enumerate_matchings(&model);
        for d in &all {
            assert_eq!(height_change(&model, d, d).unwrap(), v2(0, 0));
        }
        for d in &all {
            for d0 in &all {
                let h = height_change(&model, d, d0).unwrap();
                let back = height_change(&model, d0, d).unwrap();
                assert_eq!(h, -back, "{name}");
            }
        }
    }
}

#[test]
fn zigzag_inequality_bounds_heights() {
    // A matching containing every other edge of a zig-zag path sits at the
    // extreme of the Newton polygon in the slope direction: every height
    // change relative to it pairs nonpositively with the slope. (In this
    // crate's orientation frame slopes are outward normals, so the bound is
    // an upper one; swapping the two matchings gives the nonnegative form.)
    for name in CONSISTENT_FIXTURES {
        let model = load(name);
        let all = enumerate_matchings(&model);
        let paths = zigzag_paths(&model);
        let mut tested = 0;
        for z in &paths {
            let edges = z.edges();
            let half_a: Vec<_> = edges.iter().step_by(2).copied().collect();
            let half_b: Vec<_> = edges.iter().skip(1).step_by(2).copied().collect();
            for half in [half_a, half_b] {
                for d0 in &all {
                    if !half.iter().all(|e| d0.contains(*e)) {
                        continue;
                    }
                    tested += 1;
                    for d in &all {
                        let h = height_change(&model, d0, d).unwrap();
                        assert!(
                            h.dot(z.slope) >= 0,
                            "{name}: path {} d0 {:?} d {:?}",
                            z.id,
                            d0.edges,
                            d.edges
                        );
                    }
                }
            }
        }
        assert!(tested > 0, "{name}: no matching contains half a path");
    }
}

#[test]
fn cross_model_heights_are_rejected() {
    let a = load("conifold");
    let b = load("pentagon");
    let ma = enumerate_matchings(&a);
    let mb = enumerate_matchings(&b);
    assert!(height_change(&a, &ma[0], &mb[0]).is_err());
    assert!(dimer_models::matchings::characteristic_polynomial(&a, &mb[0]).is_err());
}

#[test]
fn polynomial_coefficients_sum_to_matching_count() {
    for name in CONSISTENT_FIXTURES {
        let model = load(name);
        let all = enumerate_matchings(&model);
        let z = characteristic_polynomial(&model, &all[0]).unwrap();
        assert_eq!(z.coefficient_sum() as usize, all.len(), "{name}");
    }
}

#[test]
fn newton_polygon_is_reference_independent() {
    for name in ["conifold", "pentagon", "hexagon_graph2"] {
        let model = load(name);
        let all = enumerate_matchings(&model);
        let base = newton_polygon(&model).unwrap();
        // Changing the reference translates heights; the normalized hull is
        // unchanged, and the polynomial shifts by a single monomial.
        let za = characteristic_polynomial(&model, &all[0]).unwrap();
        for d0 in all.iter().skip(1).take(3) {
            let zb = characteristic_polynomial(&model, d0).unwrap();
            let h = height_change(&model, &all[0], d0).unwrap();
            let shifted: BTreeMap<Vec2, u64> =
                za.terms.iter().map(|(k, v)| (*k + h, *v)).collect();
            assert_eq!(shifted, zb.terms, "{name}");
        }
        assert_eq!(newton_polygon(&model).unwrap(), base, "{name}");
    }
}

#[test]
fn consistency_implies_nondegenerate_and_primitive_slopes() {
    for name in CONSISTENT_FIXTURES {
        let model = load(name);
        assert!(is_nondegenerate(&model), "{name}");
        for p in zigzag_paths(&model) {
            assert!(p.slope.is_primitive(), "{name}: slope {}", p.slope);
        }
    }
}

#[test]
fn enumeration_is_worker_count_independent() {
    for name in ALL_FIXTURES {
        let model = load(name);
        assert_eq!(
            enumerate_matchings(&model),
            enumerate_matchings_seq(&model),
            "{name}"
        );
    }
}

#[test]
fn opposite_direction_double_intersections_are_allowed() {
    // The consistent non-isoradial fixture contains a pair of lifts meeting
    // twice; the two crossings are ordered oppositely along the two paths,
    // so consistency holds.
    let model = load("p1p1_ii");
    let paths = zigzag_paths(&model);
    let mut found = false;
    for z in &paths {
        for w in &paths {
            let window = dimer_models::zigzag::default_window(z, w);
            let records = cover_intersections(&model, z, w, window).unwrap();
            let mut by_tau: BTreeMap<Vec2, Vec<&dimer_models::zigzag::IntersectionRecord>> =
                BTreeMap::new();
            for r in &records {
                by_tau.entry(r.tau).or_default().push(r);
            }
            for group in by_tau.values() {
                if group.len() >= 2 {
                    found = true;
                    // Ordered along z by construction; w must be reversed.
                    for pair in group.windows(2) {
                        let dz = (2 * pair[1].i + pair[1].u) - (2 * pair[0].i + pair[0].u);
                        let dw = (2 * pair[1].j - pair[1].u) - (2 * pair[0].j - pair[0].u);
                        assert!(dz > 0);
                        assert!(dw < 0, "same-direction pair would be inconsistent");
                    }
                }
            }
        }
    }
    assert!(found, "expected a doubly intersecting pair of lifts");
}

#[test]
fn render_synthesizes_layout_deterministically() {
    let model = dimer_models::synthesis::honeycomb_seed(2).unwrap();
    let opts = dimer_models::render::RenderOptions::default();
    let a = dimer_models::render::render_svg(&model, &opts);
    let b = dimer_models::render::render_svg(&model, &opts);
    assert_eq!(a, b);
    assert_eq!(a.matches("<circle").count(), 8);
    let other = dimer_models::render::render_svg(
        &model,
        &dimer_models::render::RenderOptions {
            layout_seed: 7,
            ..Default::default()
        },
    );
    assert_ne!(a, other, "layout seed changes the synthesized layout");
}

#[test]
fn adjacent_pairs_intersect_once_per_lift() {
    // Paths with adjacent slopes in a consistent model never meet twice on
    // the cover, in either direction.
    for name in CONSISTENT_FIXTURES {
        let model = load(name).contract_divalent().unwrap();
        let poly = dimer_models::zigzag::polygon_from_slopes(&model).unwrap();
        for &corner in poly.vertices() {
            for (zi, wi) in
                dimer_models::hexagons::adjacent_pairs(&model, &poly, corner).unwrap()
            {
                let paths = zigzag_paths(&model);
                let (z, w) = (&paths[zi], &paths[wi]);
                let window = dimer_models::zigzag::default_window(z, w);
                let records = cover_intersections(&model, z, w, window).unwrap();
                let mut by_tau: BTreeMap<Vec2, usize> = BTreeMap::new();
                for r in &records {
                    *by_tau.entry(r.tau).or_insert(0) += 1;
                }
                for (tau, count) in by_tau {
                    assert!(
                        count <= 1,
                        "{name} corner {corner}: pair ({zi},{wi}) lift {tau} meets {count} times"
                    );
                }
            }
        }
    }
}
