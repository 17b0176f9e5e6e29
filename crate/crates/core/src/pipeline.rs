//! End-to-end run from a mask file to a knowledge base.

use crate::directions::{compile_directions, DirectionScript};
use crate::doors::{resolve_target_door, DoorDirective};
use crate::error::{Error, Result, Stage};
use crate::graph::{collect_nodes, connect_nodes, NavGraph, NodeKind};
use crate::junction::{attach_landmarks, resolve_turnings, LandmarkSet, TurningNode};
use crate::mask::{load_mask, render_overlay, ColorMap, GridMask, Overlay};
use crate::medial::{skeletonize, CorridorParams, Skeleton};
use crate::route::{k_shortest_paths, optimal_path, RoutePlan};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

pub const DEFAULT_K: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub input_sha256: String,
    pub tool_version: String,
}

impl Provenance {
    pub fn for_bytes(bytes: &[u8]) -> Provenance {
        Provenance {
            input_sha256: hex::encode(Sha256::digest(bytes)),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KnowledgeBase {
    pub map_id: String,
    pub graph: NavGraph,
    /// The selected route.
    pub route: RoutePlan,
    /// The k shortest routes the selection was made from, shortest first.
    pub candidates: Vec<RoutePlan>,
    pub directions: DirectionScript,
    pub door_directive: DoorDirective,
    pub params: CorridorParams,
    pub k: usize,
    pub provenance: Provenance,
}

impl KnowledgeBase {
    /// Every node id referenced by the routes and directions exists in the
    /// graph, and the selected route is one of the candidates.
    pub fn validate(&self) -> Result<()> {
        let known = |id: usize| self.graph.nodes.get(id).is_some_and(|n| n.id == id);
        let routes = std::iter::once(&self.route).chain(self.candidates.iter());
        for plan in routes {
            if let Some(&bad) = plan.node_sequence.iter().find(|&&id| !known(id)) {
                return Err(Error::Consistency(format!("route node {bad} is not in the graph")));
            }
        }
        for ins in &self.directions.instructions {
            if !known(ins.at_node) {
                return Err(Error::Consistency(format!(
                    "instruction node {} is not in the graph",
                    ins.at_node
                )));
            }
        }
        if self.directions.instructions.len() + 2 != self.route.node_count() {
            return Err(Error::Consistency("instruction count does not match the route".into()));
        }
        if !self.candidates.is_empty() && !self.candidates.contains(&self.route) {
            return Err(Error::Consistency("selected route is not a candidate".into()));
        }
        Ok(())
    }
}

/// Every intermediate product of a run, for rendering and inspection.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub mask: GridMask,
    /// Skeleton after junction resolution.
    pub skeleton: Skeleton,
    pub turnings: Vec<TurningNode>,
    pub landmarks: LandmarkSet,
    pub kb: KnowledgeBase,
}

impl Analysis {
    pub fn overlay(&self) -> Overlay<'_> {
        Overlay {
            skeleton: Some(&self.skeleton),
            graph: Some(&self.kb.graph),
            route: Some(&self.kb.route),
        }
    }

    pub fn render(&self, colors: &ColorMap, out_path: &Path) -> Result<()> {
        render_overlay(&self.mask, colors, self.overlay(), out_path).map_err(|e| e.in_stage(Stage::Output))
    }
}

/// Runs every stage on an already loaded mask.
pub fn analyze(
    mask: GridMask,
    params: CorridorParams,
    k: usize,
    map_id: &str,
    provenance: Provenance,
) -> Result<Analysis> {
    params.validate().map_err(|e| e.in_stage(Stage::MedialAxis))?;
    if k == 0 {
        return Err(Error::Params("k must be at least 1".into()).in_stage(Stage::RoutePlanner));
    }
    let raw = skeletonize(&mask, &params).map_err(|e| e.in_stage(Stage::MedialAxis))?;

    let (turnings, skeleton) = resolve_turnings(&raw);
    let landmarks =
        attach_landmarks(&skeleton, &mask, &params).map_err(|e| e.in_stage(Stage::JunctionLabeler))?;

    let graph = collect_nodes(&skeleton, &turnings, &landmarks)
        .and_then(|nodes| connect_nodes(&skeleton, &nodes))
        .map_err(|e| e.in_stage(Stage::NavGraph))?;
    let start = graph.node_of_kind(NodeKind::Start).map(|n| n.id);
    let end = graph.node_of_kind(NodeKind::End).map(|n| n.id);
    let (Some(start), Some(end)) = (start, end) else {
        return Err(Error::Consistency("graph lacks a start or end node".into()).in_stage(Stage::NavGraph));
    };

    let candidates = k_shortest_paths(&graph, start, end, k).map_err(|e| e.in_stage(Stage::RoutePlanner))?;
    let route = optimal_path(&candidates)
        .cloned()
        .ok_or_else(|| Error::NoRoute.in_stage(Stage::RoutePlanner))?;

    let mut directions = compile_directions(&route, &graph).map_err(|e| e.in_stage(Stage::DirectionCompiler))?;
    let door_directive =
        resolve_target_door(&route, &landmarks, &graph).map_err(|e| e.in_stage(Stage::DoorResolver))?;
    directions.terminal = Some(door_directive);

    let kb = KnowledgeBase {
        map_id: map_id.to_string(),
        graph,
        route,
        candidates,
        directions,
        door_directive,
        params,
        k,
        provenance,
    };
    kb.validate().map_err(|e| e.in_stage(Stage::Output))?;
    Ok(Analysis {
        mask,
        skeleton,
        turnings,
        landmarks,
        kb,
    })
}

/// Loads `input` and runs every stage.
pub fn analyze_file(input: &Path, params: CorridorParams, colors: &ColorMap, k: usize) -> Result<Analysis> {
    let mask = load_mask(input, colors).map_err(|e| e.in_stage(Stage::MaskIo))?;
    let bytes = fs::read(input).map_err(|source| {
        Error::Read {
            path: input.to_owned(),
            source,
        }
        .in_stage(Stage::MaskIo)
    })?;
    let map_id = input
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    analyze(mask, params, k, &map_id, Provenance::for_bytes(&bytes))
}

pub fn run_pipeline(input: &Path, params: CorridorParams, colors: &ColorMap, k: usize) -> Result<KnowledgeBase> {
    analyze_file(input, params, colors, k).map(|a| a.kb)
}

/// Pretty JSON with sorted keys and every non-integer number printed with
/// three decimals, so equal knowledge bases give equal bytes.
pub fn to_canonical_json(kb: &KnowledgeBase) -> Result<String> {
    kb.validate()?;
    let value = serde_json::to_value(kb).map_err(|e| Error::Consistency(e.to_string()))?;
    let mut out = String::new();
    write_value(&mut out, &value, 0);
    out.push('\n');
    Ok(out)
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

/// Containers holding only scalars go on one line.
fn write_value(out: &mut String, value: &Value, depth: usize) {
    let pad = |out: &mut String, d: usize| out.extend(std::iter::repeat_n("  ", d));
    match value {
        Value::Null | Value::Bool(_) | Value::String(_) => out.push_str(&value.to_string()),
        Value::Number(n) => {
            if n.is_f64() {
                let s = format!("{:.3}", n.as_f64().expect("f64 number"));
                out.push_str(if s == "-0.000" { "0.000" } else { &s });
            } else {
                let _ = write!(out, "{n}");
            }
        }
        Value::Array(items) if items.iter().all(is_scalar) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_value(out, item, depth);
            }
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                pad(out, depth + 1);
                write_value(out, item, depth + 1);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            pad(out, depth);
            out.push(']');
        }
        Value::Object(map) if map.values().all(is_scalar) => {
            out.push('{');
            for (i, (key, item)) in map.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                out.push_str(&Value::String(key.clone()).to_string());
                out.push_str(": ");
                write_value(out, item, depth);
            }
            out.push('}');
        }
        Value::Object(map) => {
            // serde_json's map is ordered by key
            out.push_str("{\n");
            for (i, (key, item)) in map.iter().enumerate() {
                pad(out, depth + 1);
                out.push_str(&Value::String(key.clone()).to_string());
                out.push_str(": ");
                write_value(out, item, depth + 1);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            pad(out, depth);
            out.push('}');
        }
    }
}

pub fn emit_knowledge_base(kb: &KnowledgeBase, out: &Path) -> Result<()> {
    let text = to_canonical_json(kb).map_err(|e| e.in_stage(Stage::Output))?;
    fs::write(out, text).map_err(|source| {
        Error::Write {
            path: out.to_owned(),
            source,
        }
        .in_stage(Stage::Output)
    })
}
