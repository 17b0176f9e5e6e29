//! Which door on the final corridor is the target, relative to the walker.

use crate::error::{Error, Result};
use crate::geom::{Axis, PixelCoord, Side};
use crate::graph::{NavGraph, NodeKind};
use crate::junction::LandmarkSet;
use crate::route::RoutePlan;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TravelSide {
    Left,
    Right,
}

impl TravelSide {
    pub fn opposite(self) -> TravelSide {
        match self {
            TravelSide::Left => TravelSide::Right,
            TravelSide::Right => TravelSide::Left,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DoorDirective {
    pub side: TravelSide,
    /// 1-based, counted along travel among doors on the same side.
    pub ordinal: usize,
    pub corridor_axis: Axis,
}

/// Axis and sign heading of the last route step. Equal deltas count as
/// vertical.
pub fn classify_final_corridor(route: &RoutePlan, graph: &NavGraph) -> Result<(Axis, (i32, i32))> {
    let seq = &route.node_sequence;
    if seq.len() < 2 {
        return Err(Error::Consistency("a route needs at least two nodes".into()));
    }
    let from = node_pixel(graph, seq[seq.len() - 2])?;
    let to = node_pixel(graph, seq[seq.len() - 1])?;
    let (dx, dy) = (to.x - from.x, to.y - from.y);
    let axis = if dy.abs() >= dx.abs() {
        Axis::Vertical
    } else {
        Axis::Horizontal
    };
    Ok((axis, (dx.signum(), dy.signum())))
}

/// Travel-relative side of a wall tag for a walker heading along `axis` in
/// direction `heading`. `None` when the wall faces along the travel line.
pub fn travel_side(side: Side, axis: Axis, heading: (i32, i32)) -> Option<TravelSide> {
    let (hx, hy) = match axis {
        Axis::Horizontal => (heading.0.signum(), 0),
        Axis::Vertical => (0, heading.1.signum()),
    };
    // left of travel with y pointing down
    let left = (hy, -hx);
    let (nx, ny) = side.outward_normal();
    match (nx * left.0 + ny * left.1).signum() {
        1 => Some(TravelSide::Left),
        -1 => Some(TravelSide::Right),
        _ => None,
    }
}

fn node_pixel(graph: &NavGraph, id: usize) -> Result<PixelCoord> {
    graph
        .nodes
        .get(id)
        .map(|n| n.pixel)
        .ok_or_else(|| Error::Consistency(format!("route node {id} is not in the graph")))
}

/// Pixels of the final corridor, from the last route node that is not a door
/// through to the end node. Door nodes split a corridor into several edges,
/// so those edges are stitched back together.
pub fn final_corridor_trace(route: &RoutePlan, graph: &NavGraph) -> Result<Vec<PixelCoord>> {
    let seq = &route.node_sequence;
    if seq.len() < 2 {
        return Err(Error::Consistency("a route needs at least two nodes".into()));
    }
    let mut anchor = seq.len() - 2;
    while anchor > 0 {
        let kind = graph
            .nodes
            .get(seq[anchor])
            .map(|n| n.kind)
            .ok_or_else(|| Error::Consistency(format!("route node {} is not in the graph", seq[anchor])))?;
        if kind != NodeKind::Door {
            break;
        }
        anchor -= 1;
    }
    let mut trace = vec![node_pixel(graph, seq[anchor])?];
    for w in seq[anchor..].windows(2) {
        let edge = graph
            .edge_between(w[0], w[1])
            .ok_or_else(|| Error::Consistency(format!("no edge between {} and {}", w[0], w[1])))?;
        let part = edge.trace_from(w[0]);
        if part.is_empty() {
            trace.push(node_pixel(graph, w[1])?);
        } else {
            trace.extend(part.into_iter().skip(1));
        }
    }
    Ok(trace)
}

/// Side and ordinal of the target door among the doors met on the final
/// corridor.
pub fn resolve_target_door(
    route: &RoutePlan,
    landmarks: &LandmarkSet,
    graph: &NavGraph,
) -> Result<DoorDirective> {
    let (axis, heading) = classify_final_corridor(route, graph)?;
    let trace = final_corridor_trace(route, graph)?;
    let mut position: BTreeMap<PixelCoord, usize> = BTreeMap::new();
    for (i, p) in trace.iter().enumerate().skip(1) {
        position.entry(*p).or_insert(i);
    }
    let target = landmarks
        .target()
        .ok_or_else(|| Error::Consistency("no target door landmark".into()))?;
    let end = node_pixel(graph, *route.node_sequence.last().expect("checked length"))?;
    if target.pixel != end {
        return Err(Error::Consistency(format!(
            "target door at {} is not the route end {}",
            target.pixel, end
        )));
    }
    let mut met: Vec<(usize, usize, TravelSide, bool)> = landmarks
        .doors
        .iter()
        .enumerate()
        .filter_map(|(order, d)| {
            let at = *position.get(&d.pixel)?;
            let side = travel_side(d.side, axis, heading)?;
            Some((at, order, side, d.is_target))
        })
        .collect();
    met.sort();
    let target_at = met
        .iter()
        .position(|m| m.3)
        .ok_or_else(|| Error::Consistency("target door is not beside the final corridor".into()))?;
    let side = met[target_at].2;
    let ordinal = met[..=target_at].iter().filter(|m| m.2 == side).count();
    Ok(DoorDirective {
        side,
        ordinal,
        corridor_axis: axis,
    })
}
