//! Heavier randomized stress runs, ignored by default:
//! `cargo test -p dimer-models --test stress -- --ignored`

mod common;

use dimer_models::geom::{v2, LatticePolygon, Vec2};
use dimer_models::hexagons::{adjacent_pairs, decompose};
use dimer_models::matchings::newton_polygon;
use dimer_models::synthesis::{remove_vertex, synthesize, RemovalOptions};
use dimer_models::zigzag::{is_consistent, is_properly_ordered, polygon_from_slopes};

struct Lcg(u64);

impl Lcg {
    fn next(&mut self, m: u64) -> i64 {
        self.0 = self
            .0
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        ((self.0 >> 33) % m) as i64
    }
}

#[test]
#[ignore]
fn synthesis_of_many_random_polygons() {
    let mut rng = Lcg(0xDECAFBAD);
    let mut done = 0;
    while done < 40 {
        let k = 3 + rng.next(6) as usize;
        let pts: Vec<Vec2> = (0..k).map(|_| v2(rng.next(6), rng.next(6))).collect();
        let Ok(target) = LatticePolygon::hull(&pts) else {
            continue;
        };
        done += 1;
        let trace = synthesize(&target, None).expect("synthesis succeeds");
        let model = trace.final_model();
        assert!(is_consistent(model).is_consistent(), "{:?}", target.vertices());
        assert!(
            is_properly_ordered(model).is_properly_ordered(),
            "{:?}",
            target.vertices()
        );
        assert_eq!(
            polygon_from_slopes(model).unwrap(),
            trace.target.normalize(),
            "{:?}",
            target.vertices()
        );
        // The matching-side polygon agrees whenever enumeration is feasible.
        if model.edges().len() <= 48 {
            assert_eq!(
                newton_polygon(model).unwrap(),
                trace.target.normalize(),
                "{:?}",
                target.vertices()
            );
        }
    }
}

#[test]
#[ignore]
fn removals_with_every_origin_at_higher_order_corners() {
    // Build models whose polygons carry corners of order up to five and
    // remove those corners under every admissible origin.
    let targets = [
        LatticePolygon::hull(&[v2(0, 2), v2(5, 0), v2(0, 3)]).unwrap(), // (5,2) corner
        LatticePolygon::hull(&[v2(0, 1), v2(2, 1), v2(1, 2)]).unwrap(), // (2,1) corners
        LatticePolygon::hull(&[v2(0, 0), v2(3, 1), v2(1, 3)]).unwrap(), // mixed corners
    ];
    for target in targets {
        let trace = synthesize(&target, None).unwrap();
        let model = trace.final_model().clone();
        let polygon = polygon_from_slopes(&model).unwrap();
        for &corner in polygon.vertices() {
            if dimer_models::synthesis::expected_polygon(&polygon, corner).is_err() {
                continue;
            }
            let pairs = adjacent_pairs(&model, &polygon, corner).unwrap();
            for &pair in &pairs {
                let lat = decompose(&model, pair.0, pair.1).unwrap();
                let mut polys = Vec::new();
                for origin in 0..lat.hexagons.len() {
                    let (next, plan) = remove_vertex(
                        &model,
                        corner,
                        &RemovalOptions {
                            pair: Some(pair),
                            origin: Some(origin),
                        },
                    )
                    .unwrap();
                    assert!(
                        is_consistent(&next).is_consistent(),
                        "corner {corner} pair {pair:?} origin {origin}"
                    );
                    assert_eq!(plan.deleted_edges.len(), plan.labeling.specials.len());
                    polys.push(polygon_from_slopes(&next).unwrap());
                }
                // Choice of origin never changes the polygon.
                polys.dedup();
                assert_eq!(polys.len(), 1, "corner {corner} pair {pair:?}");
            }
        }
    }
}

#[test]
#[ignore]
fn intersection_records_stable_under_much_wider_windows() {
    for n in 2i64..=6 {
        let model = dimer_models::synthesis::honeycomb_seed(n).unwrap();
        let paths = dimer_models::zigzag::zigzag_paths(&model);
        for z in &paths {
            for w in &paths {
                let base = dimer_models::zigzag::default_window(z, w);
                let narrow =
                    dimer_models::zigzag::cover_intersections(&model, z, w, base).unwrap();
                let wide =
                    dimer_models::zigzag::cover_intersections(&model, z, w, 4 * base).unwrap();
                assert_eq!(narrow, wide, "N={n} pair ({},{})", z.id, w.id);
            }
        }
    }
}

#[test]
#[ignore]
fn parser_never_panics_on_mutations() {
    let base = std::fs::read_to_string(
        std::path::PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/conifold.json"),
    )
    .unwrap();
    let mut rng = Lcg(42);
    for _ in 0..4000 {
        let mut bytes = base.clone().into_bytes();
        let flips = 1 + rng.next(6) as usize;
        for _ in 0..flips {
            let pos = rng.next(bytes.len() as u64) as usize;
            bytes[pos] = b"0123456789{}[],:\"abcxyz-"[rng.next(24) as usize];
        }
        if let Ok(text) = String::from_utf8(bytes) {
            // Any outcome is fine as long as it is not a panic.
            let _ = dimer_models::io::from_json(&text);
        }
    }
}
