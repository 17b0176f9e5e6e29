//! Floor-plan mask to navigation graph, route and turn-by-turn directions.
//!
//! A mask is a raster whose colours mark corridor, door, target door and
//! start pixels. [`pipeline::analyze_file`] runs every stage and returns a
//! [`pipeline::KnowledgeBase`] with the graph, the chosen route, the turn
//! instructions and a final "n-th door on your left/right" directive.

pub mod directions;
pub mod doors;
pub mod error;
pub mod geom;
pub mod graph;
pub mod junction;
pub mod mask;
pub mod medial;
pub mod pipeline;
pub mod raster;
pub mod route;

pub use directions::{Direction, DirectionScript, TurnInstruction};
pub use doors::{DoorDirective, TravelSide};
pub use error::{Error, ErrorCode, Result, Stage};
pub use geom::{Axis, PixelCoord, Side};
pub use graph::{NavEdge, NavGraph, NavNode, NodeKind};
pub use mask::{ColorMap, GridMask, PixelClass};
pub use medial::{CorridorParams, Skeleton};
pub use pipeline::{analyze, analyze_file, emit_knowledge_base, run_pipeline, to_canonical_json, Analysis, KnowledgeBase};
pub use route::RoutePlan;
