//! Dimer interchange format: JSON, UTF-8. The top-level object carries
//! `nodes`, `edges` and `rotations`; unknown keys are ignored. This format
//! is the contract for all CLI commands and fixtures.

use crate::error::{DimerError, Result};
use crate::geom::Vec2;
use crate::model::{Color, DimerModel, Edge, EdgeId, Node, NodeId, TorusPosition};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;

#[derive(Debug, Serialize, Deserialize)]
struct NodeRecord {
    id: u32,
    color: Color,
    /// `[x_num, x_den, y_num, y_den]`
    #[serde(skip_serializing_if = "Option::is_none")]
    pos: Option<[i64; 4]>,
}

#[derive(Debug, Serialize, Deserialize)]
struct EdgeRecord {
    id: u32,
    black: u32,
    white: u32,
    shift: [i64; 2],
}

#[derive(Debug, Serialize, Deserialize)]
struct ModelRecord {
    nodes: Vec<NodeRecord>,
    edges: Vec<EdgeRecord>,
    /// node id (as a decimal string key) -> incident edge ids, counterclockwise
    rotations: BTreeMap<String, Vec<u32>>,
}

pub fn from_json(text: &str) -> Result<DimerModel> {
    let rec: ModelRecord = serde_json::from_str(text)?;
    let mut nodes = Vec::new();
    for n in rec.nodes {
        let pos = match n.pos {
            Some([xn, xd, yn, yd]) => Some(TorusPosition::new(xn, xd, yn, yd)?),
            None => None,
        };
        nodes.push(Node {
            id: NodeId(n.id),
            color: n.color,
            pos,
        });
    }
    let mut edges = Vec::new();
    for e in rec.edges {
        edges.push(Edge {
            id: EdgeId(e.id),
            black: NodeId(e.black),
            white: NodeId(e.white),
            shift: Vec2 {
                x: e.shift[0],
                y: e.shift[1],
            },
        });
    }
    let mut rotations = BTreeMap::new();
    for (k, v) in rec.rotations {
        let id: u32 = k
            .parse()
            .map_err(|_| DimerError::Parse(format!("rotation key {k:?} is not a node id")))?;
        rotations.insert(NodeId(id), v.into_iter().map(EdgeId).collect());
    }
    DimerModel::new(nodes, edges, rotations)
}

pub fn to_json(model: &DimerModel) -> String {
    let rec = ModelRecord {
        nodes: model
            .nodes()
            .iter()
            .map(|n| NodeRecord {
                id: n.id.0,
                color: n.color,
                pos: n.pos.map(|p| [*p.x.numer(), *p.x.denom(), *p.y.numer(), *p.y.denom()]),
            })
            .collect(),
        edges: model
            .edges()
            .iter()
            .map(|e| EdgeRecord {
                id: e.id.0,
                black: e.black.0,
                white: e.white.0,
                shift: [e.shift.x, e.shift.y],
            })
            .collect(),
        rotations: model
            .rotations()
            .iter()
            .map(|(n, rot)| (n.0.to_string(), rot.iter().map(|e| e.0).collect()))
            .collect(),
    };
    serde_json::to_string_pretty(&rec).expect("model serializes")
}

pub fn read_model(path: &Path) -> Result<DimerModel> {
    let text = std::fs::read_to_string(path)?;
    from_json(&text)
}

pub fn write_model(model: &DimerModel, path: &Path) -> Result<()> {
    std::fs::write(path, to_json(model))?;
    Ok(())
}
