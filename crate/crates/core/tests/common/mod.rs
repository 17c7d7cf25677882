#![allow(dead_code)]

use dimer_models::model::DimerModel;
use std::path::PathBuf;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(format!("{name}.json"))
}

pub fn load(name: &str) -> DimerModel {
    dimer_models::io::read_model(&fixture_path(name)).expect("fixture parses")
}

pub const CONSISTENT_FIXTURES: &[&str] = &[
    "conifold",
    "p1p1_ii",
    "square_2x2",
    "pentagon",
    "hexagon_model1",
    "hexagon_model2",
    "hexagon_model3",
    "hexagon_model4",
    "hexagon_graph1",
    "hexagon_graph2",
    "large_square_tile",
];

pub const ALL_FIXTURES: &[&str] = &[
    "conifold",
    "inconsistent",
    "inconsistent_trivial",
    "p1p1_ii",
    "square_2x2",
    "pentagon",
    "hexagon_model1",
    "hexagon_model2",
    "hexagon_model3",
    "hexagon_model4",
    "hexagon_graph1",
    "hexagon_graph2",
    "large_square_tile",
];
