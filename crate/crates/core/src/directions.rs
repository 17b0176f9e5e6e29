//! Turn instructions from route node triples.

use crate::doors::DoorDirective;
use crate::error::{Error, Result};
use crate::geom::PixelCoord;
use crate::graph::NavGraph;
use crate::route::RoutePlan;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    HardRight,
    NormalRight,
    LightRight,
    Straight,
    LightLeft,
    NormalLeft,
    HardLeft,
}

impl Direction {
    pub const ALL: [Direction; 7] = [
        Direction::HardRight,
        Direction::NormalRight,
        Direction::LightRight,
        Direction::Straight,
        Direction::LightLeft,
        Direction::NormalLeft,
        Direction::HardLeft,
    ];

    pub fn is_actionable(self) -> bool {
        self != Direction::Straight
    }

    pub fn mirrored(self) -> Direction {
        match self {
            Direction::HardRight => Direction::HardLeft,
            Direction::NormalRight => Direction::NormalLeft,
            Direction::LightRight => Direction::LightLeft,
            Direction::Straight => Direction::Straight,
            Direction::LightLeft => Direction::LightRight,
            Direction::NormalLeft => Direction::NormalRight,
            Direction::HardLeft => Direction::HardRight,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Direction::HardRight => "hard right",
            Direction::NormalRight => "normal right",
            Direction::LightRight => "light right",
            Direction::Straight => "straight",
            Direction::LightLeft => "light left",
            Direction::NormalLeft => "normal left",
            Direction::HardLeft => "hard left",
        }
    }
}

/// Angle at `p2` between the legs to `p1` and `p3`, in degrees. Right turns
/// (clockwise on screen, y down) give the interior angle, left turns give
/// 360 minus it, and going straight through gives 180.
pub fn triangle_angle(p1: PixelCoord, p2: PixelCoord, p3: PixelCoord) -> Result<f64> {
    if p1 == p2 {
        return Err(Error::DegenerateTriangle(p1));
    }
    if p2 == p3 {
        return Err(Error::DegenerateTriangle(p2));
    }
    let line1_sq = p1.distance_sq(p2);
    let line2_sq = p2.distance_sq(p3);
    let line3_sq = p1.distance_sq(p3);
    let (ux, uy) = ((p2.x - p1.x) as i64, (p2.y - p1.y) as i64);
    let (vx, vy) = ((p3.x - p2.x) as i64, (p3.y - p2.y) as i64);
    let cross = ux * vy - uy * vx;
    if cross == 0 {
        if ux * vx + uy * vy > 0 {
            return Ok(180.0);
        }
        // the route doubles back on itself; no bucket covers this
        return Err(Error::AngleOutOfRange(0.0));
    }
    // numerator is exact in integers
    let num = (line1_sq + line2_sq - line3_sq) as f64;
    let cos = (num / (2.0 * ((line1_sq as f64) * (line2_sq as f64)).sqrt())).clamp(-1.0, 1.0);
    let theta = cos.acos().to_degrees();
    Ok(if cross > 0 { theta } else { 360.0 - theta })
}

/// Bucket lookup. The lower ends of the first and last buckets are widened
/// to the open interval so every angle in (0, 360) has a direction.
pub fn direction_for_angle(angle: f64) -> Result<Direction> {
    if !(angle > 0.0 && angle < 360.0) {
        return Err(Error::AngleOutOfRange(angle));
    }
    let d = if angle <= 45.0 {
        Direction::HardRight
    } else if angle < 150.0 {
        Direction::NormalRight
    } else if angle < 180.0 {
        Direction::LightRight
    } else if angle == 180.0 {
        Direction::Straight
    } else if angle <= 210.0 {
        Direction::LightLeft
    } else if angle <= 315.0 {
        Direction::NormalLeft
    } else {
        Direction::HardLeft
    };
    Ok(d)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TurnInstruction {
    pub at_node: usize,
    pub angle: f64,
    pub direction: Direction,
    pub actionable: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DirectionScript {
    pub instructions: Vec<TurnInstruction>,
    pub terminal: Option<DoorDirective>,
}

impl DirectionScript {
    pub fn actionable(&self) -> impl Iterator<Item = &TurnInstruction> {
        self.instructions.iter().filter(|i| i.actionable)
    }
}

/// One instruction per interior route node.
pub fn compile_directions(route: &RoutePlan, graph: &NavGraph) -> Result<DirectionScript> {
    let seq = &route.node_sequence;
    if seq.len() < 2 {
        return Err(Error::Consistency("a route needs at least two nodes".into()));
    }
    let pixel = |id: usize| {
        graph
            .nodes
            .get(id)
            .map(|n| n.pixel)
            .ok_or_else(|| Error::Consistency(format!("route node {id} is not in the graph")))
    };
    let mut instructions = Vec::with_capacity(seq.len() - 2);
    for w in seq.windows(3) {
        let angle = triangle_angle(pixel(w[0])?, pixel(w[1])?, pixel(w[2])?)?;
        let direction = direction_for_angle(angle)?;
        instructions.push(TurnInstruction {
            at_node: w[1],
            angle,
            direction,
            actionable: direction.is_actionable(),
        });
    }
    Ok(DirectionScript {
        instructions,
        terminal: None,
    })
}
