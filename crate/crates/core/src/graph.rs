//! Navigation graph built by walking the skeleton from node to node.

use crate::error::{Error, Result};
use crate::geom::PixelCoord;
use crate::junction::{LandmarkSet, TurningNode};
use crate::medial::Skeleton;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::f64::consts::SQRT_2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeKind {
    Turning,
    Door,
    Start,
    End,
}

impl NodeKind {
    fn name(self) -> &'static str {
        match self {
            NodeKind::Turning => "turning",
            NodeKind::Door => "door",
            NodeKind::Start => "start",
            NodeKind::End => "end",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NavNode {
    pub id: usize,
    pub pixel: PixelCoord,
    pub kind: NodeKind,
}

/// Undirected edge stored with `a < b`; `trace` runs from node `a` to node `b`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NavEdge {
    pub a: usize,
    pub b: usize,
    pub length: f64,
    pub trace: Vec<PixelCoord>,
}

impl NavEdge {
    pub fn other(&self, id: usize) -> Option<usize> {
        if id == self.a {
            Some(self.b)
        } else if id == self.b {
            Some(self.a)
        } else {
            None
        }
    }

    /// Trace oriented to start at node `from`.
    pub fn trace_from(&self, from: usize) -> Vec<PixelCoord> {
        if from == self.a {
            self.trace.clone()
        } else {
            self.trace.iter().rev().copied().collect()
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct NavGraph {
    pub nodes: Vec<NavNode>,
    pub edges: Vec<NavEdge>,
}

impl NavGraph {
    /// A graph with only weights, for exercising the routing code. Node `i`
    /// sits at pixel `(i, 0)` and edges carry empty traces.
    pub fn from_weighted_edges(n: usize, edges: &[(usize, usize, f64)]) -> NavGraph {
        let nodes = (0..n)
            .map(|id| NavNode {
                id,
                pixel: PixelCoord::new(id as i32, 0),
                kind: NodeKind::Turning,
            })
            .collect();
        let mut best: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        for &(a, b, w) in edges {
            if a == b {
                continue;
            }
            let key = (a.min(b), a.max(b));
            best.entry(key)
                .and_modify(|cur| {
                    if w < *cur {
                        *cur = w
                    }
                })
                .or_insert(w);
        }
        let edges = best
            .into_iter()
            .map(|((a, b), length)| NavEdge {
                a,
                b,
                length,
                trace: Vec::new(),
            })
            .collect();
        NavGraph { nodes, edges }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_between(&self, a: usize, b: usize) -> Option<&NavEdge> {
        let (lo, hi) = (a.min(b), a.max(b));
        self.edges.iter().find(|e| e.a == lo && e.b == hi)
    }

    /// Neighbour lists sorted by neighbour id.
    pub fn adjacency(&self) -> Vec<Vec<(usize, f64)>> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for e in &self.edges {
            adj[e.a].push((e.b, e.length));
            adj[e.b].push((e.a, e.length));
        }
        for list in &mut adj {
            list.sort_by_key(|&(v, _)| v);
        }
        adj
    }

    pub fn node_of_kind(&self, kind: NodeKind) -> Option<&NavNode> {
        self.nodes.iter().find(|n| n.kind == kind)
    }

    pub fn node_at(&self, pixel: PixelCoord) -> Option<&NavNode> {
        self.nodes.iter().find(|n| n.pixel == pixel)
    }

    /// Node ids reachable from `from`.
    pub fn component_of(&self, from: usize) -> BTreeSet<usize> {
        let adj = self.adjacency();
        let mut seen = BTreeSet::from([from]);
        let mut stack = vec![from];
        while let Some(u) = stack.pop() {
            for &(v, _) in &adj[u] {
                if seen.insert(v) {
                    stack.push(v);
                }
            }
        }
        seen
    }
}

/// Gathers turning centres, doors, start and end into a node list with ids
/// in raster order of their pixels. A door on the end pixel becomes the end.
pub fn collect_nodes(
    skeleton: &Skeleton,
    turnings: &[TurningNode],
    landmarks: &LandmarkSet,
) -> Result<Vec<NavNode>> {
    let mut kinds: BTreeMap<PixelCoord, NodeKind> = BTreeMap::new();
    let mut claim = |pixel: PixelCoord, kind: NodeKind| -> Result<()> {
        if !skeleton.contains(pixel) {
            return Err(Error::Consistency(format!(
                "{} node {pixel} is not a skeleton pixel",
                kind.name()
            )));
        }
        match kinds.get(&pixel).copied() {
            None => {
                kinds.insert(pixel, kind);
            }
            Some(prev) if prev == kind => {}
            Some(NodeKind::Door) if kind == NodeKind::End => {
                kinds.insert(pixel, NodeKind::End);
            }
            Some(NodeKind::End) if kind == NodeKind::Door => {}
            Some(prev) => {
                return Err(Error::NodeConflict {
                    pixel,
                    first: prev.name(),
                    second: kind.name(),
                })
            }
        }
        Ok(())
    };
    for t in turnings {
        claim(t.center, NodeKind::Turning)?;
    }
    for d in &landmarks.doors {
        claim(
            d.pixel,
            if d.is_target {
                NodeKind::End
            } else {
                NodeKind::Door
            },
        )?;
    }
    claim(landmarks.start, NodeKind::Start)?;
    claim(landmarks.end, NodeKind::End)?;

    Ok(kinds
        .into_iter()
        .enumerate()
        .map(|(id, (pixel, kind))| NavNode { id, pixel, kind })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WalkEnd {
    Node(usize),
    ClosedPath,
    DeadEnd,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Walk {
    pub end: WalkEnd,
    /// Pixels from the origin node to where the walk stopped.
    pub trace: Vec<PixelCoord>,
    pub length: f64,
}

fn step_cost(a: PixelCoord, b: PixelCoord) -> f64 {
    if a.x != b.x && a.y != b.y {
        SQRT_2
    } else {
        1.0
    }
}

/// Follows the skeleton from `origin` through `first_step` until it meets
/// another node, comes back to `origin`, or runs out of pixels.
///
/// On lines that are not perfectly thin, a pixel that is also adjacent to the
/// previous pixel is a corner shortcut rather than a branch: it is only taken
/// when nothing else continues the line, and a group of mutually adjacent
/// continuations counts as one.
pub fn walk_to_next_node(
    skeleton: &Skeleton,
    node_ids: &BTreeMap<PixelCoord, usize>,
    origin: PixelCoord,
    first_step: PixelCoord,
) -> Result<Walk> {
    if !origin.is_adjacent8(first_step) || !skeleton.contains(first_step) {
        return Err(Error::Consistency(format!(
            "{first_step} is not a skeleton neighbour of {origin}"
        )));
    }
    let mut trace = vec![origin, first_step];
    let mut length = step_cost(origin, first_step);
    if let Some(&id) = node_ids.get(&first_step) {
        return Ok(Walk {
            end: WalkEnd::Node(id),
            trace,
            length,
        });
    }
    let mut visited: HashSet<PixelCoord> = trace.iter().copied().collect();
    let mut prev = origin;
    let mut cur = first_step;
    loop {
        let around: Vec<PixelCoord> = skeleton.neighbors(cur).filter(|n| *n != prev).collect();

        // nodes next to the origin are reached by their own first step
        if let Some(&n) = around.iter().find(|n| {
            **n != origin
                && node_ids.contains_key(n)
                && !visited.contains(n)
                && !(prev == origin && n.is_adjacent8(origin))
        }) {
            trace.push(n);
            length += step_cost(cur, n);
            return Ok(Walk {
                end: WalkEnd::Node(node_ids[&n]),
                trace,
                length,
            });
        }
        if trace.len() >= 3 && around.contains(&origin) && !origin.is_adjacent8(prev) {
            trace.push(origin);
            length += step_cost(cur, origin);
            return Ok(Walk {
                end: WalkEnd::ClosedPath,
                trace,
                length,
            });
        }

        let open: Vec<PixelCoord> = around.into_iter().filter(|n| !visited.contains(n)).collect();
        let straight: Vec<PixelCoord> = open.iter().copied().filter(|n| !n.is_adjacent8(prev)).collect();
        let pool = if straight.is_empty() { open } else { straight };
        let next = match pool.as_slice() {
            [] => {
                return Ok(Walk {
                    end: WalkEnd::DeadEnd,
                    trace,
                    length,
                })
            }
            [only] => *only,
            many if is_clump(many) => {
                let far = *many
                    .iter()
                    .max_by_key(|n| (n.distance_sq(prev), std::cmp::Reverse(**n)))
                    .expect("non-empty");
                visited.extend(many.iter().copied());
                far
            }
            _ => return Err(Error::UnlabeledJunction(cur)),
        };
        length += step_cost(cur, next);
        trace.push(next);
        visited.insert(next);
        prev = cur;
        cur = next;
    }
}

/// True when the points form one 8-connected group.
fn is_clump(pts: &[PixelCoord]) -> bool {
    let mut reached = vec![false; pts.len()];
    reached[0] = true;
    let mut stack = vec![0];
    while let Some(i) = stack.pop() {
        for j in 0..pts.len() {
            if !reached[j] && pts[i].is_adjacent8(pts[j]) {
                reached[j] = true;
                stack.push(j);
            }
        }
    }
    reached.into_iter().all(|r| r)
}

/// Walks out of every node in every direction and records each node pair
/// reached, keeping the shorter edge when a pair is found twice.
pub fn connect_nodes(skeleton: &Skeleton, nodes: &[NavNode]) -> Result<NavGraph> {
    if nodes.is_empty() {
        return Err(Error::Consistency("no nodes to connect".into()));
    }
    let node_ids: BTreeMap<PixelCoord, usize> = nodes.iter().map(|n| (n.pixel, n.id)).collect();
    let mut edges: BTreeMap<(usize, usize), NavEdge> = BTreeMap::new();
    for node in nodes {
        let steps: Vec<PixelCoord> = skeleton.neighbors(node.pixel).collect();
        for step in steps {
            let walk = walk_to_next_node(skeleton, &node_ids, node.pixel, step)?;
            let WalkEnd::Node(other) = walk.end else {
                continue;
            };
            if other == node.id {
                continue;
            }
            let (a, b) = (node.id.min(other), node.id.max(other));
            let trace = if a == node.id {
                walk.trace
            } else {
                walk.trace.into_iter().rev().collect()
            };
            let edge = NavEdge {
                a,
                b,
                length: walk.length,
                trace,
            };
            match edges.get(&(a, b)) {
                Some(existing) if existing.length <= edge.length => {}
                _ => {
                    edges.insert((a, b), edge);
                }
            }
        }
    }
    let graph = NavGraph {
        nodes: nodes.to_vec(),
        edges: edges.into_values().collect(),
    };
    if let (Some(s), Some(e)) = (
        graph.node_of_kind(NodeKind::Start),
        graph.node_of_kind(NodeKind::End),
    ) {
        if !graph.component_of(s.id).contains(&e.id) {
            return Err(Error::NoRoute);
        }
    }
    Ok(graph)
}
