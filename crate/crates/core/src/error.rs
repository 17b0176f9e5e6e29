use crate::geom::PixelCoord;
use std::fmt;
use std::path::PathBuf;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Pipeline stage names, attached to errors by the orchestrator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    MaskIo,
    MedialAxis,
    JunctionLabeler,
    NavGraph,
    RoutePlanner,
    DirectionCompiler,
    DoorResolver,
    Output,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::MaskIo => "mask-io",
            Stage::MedialAxis => "medial-axis",
            Stage::JunctionLabeler => "junction-labeler",
            Stage::NavGraph => "nav-graph",
            Stage::RoutePlanner => "route-planner",
            Stage::DirectionCompiler => "direction-compiler",
            Stage::DoorResolver => "door-resolver",
            Stage::Output => "output",
        })
    }
}

/// Machine-readable error classes. The discriminants are the CLI exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[repr(i32)]
pub enum ErrorCode {
    Other = 1,
    BadInput = 2,
    NoCorridor = 3,
    NoRoute = 4,
    Landmark = 5,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {}: {source}", path.display())]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot decode {}: {source}", path.display())]
    Decode {
        path: PathBuf,
        source: image::ImageError,
    },
    #[error("cannot write {}: {source}", path.display())]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot encode image {}: {source}", path.display())]
    Encode {
        path: PathBuf,
        source: image::ImageError,
    },
    #[error("invalid color map: {0}")]
    ColorMap(String),
    #[error("invalid corridor parameters: {0}")]
    Params(String),
    #[error("image has zero size")]
    EmptyImage,
    #[error("no Path pixels")]
    NoPathPixels,
    #[error("no StartMarker region")]
    NoStartRegion,
    #[error("{0} StartMarker regions, expected exactly one")]
    DuplicateStartRegion(usize),
    #[error("no TargetDoor region")]
    NoTargetDoorRegion,
    #[error("{0} TargetDoor regions, expected exactly one")]
    DuplicateTargetDoorRegion(usize),
    #[error("no navigable corridor")]
    NoNavigableCorridor,
    #[error("target door unreachable from corridor")]
    TargetDoorUnreachable,
    #[error("start not on main path")]
    StartNotOnMainPath,
    #[error("node pixel {pixel} claimed as both {first} and {second}")]
    NodeConflict {
        pixel: PixelCoord,
        first: &'static str,
        second: &'static str,
    },
    #[error("unlabeled junction at {0}")]
    UnlabeledJunction(PixelCoord),
    #[error("no route exists")]
    NoRoute,
    #[error("angle {0} outside (0, 360)")]
    AngleOutOfRange(f64),
    #[error("zero-length triangle side at {0}")]
    DegenerateTriangle(PixelCoord),
    #[error("layer pixel {0} outside mask bounds")]
    OutOfBounds(PixelCoord),
    #[error("consistency error: {0}")]
    Consistency(String),
    #[error("{stage}: {source}")]
    Stage {
        stage: Stage,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub fn in_stage(self, stage: Stage) -> Error {
        match self {
            e @ Error::Stage { .. } => e,
            e => Error::Stage {
                stage,
                source: Box::new(e),
            },
        }
    }

    /// Error with any stage wrapper removed.
    pub fn root(&self) -> &Error {
        match self {
            Error::Stage { source, .. } => source.root(),
            e => e,
        }
    }

    pub fn stage(&self) -> Option<Stage> {
        match self {
            Error::Stage { stage, .. } => Some(*stage),
            _ => None,
        }
    }

    pub fn code(&self) -> ErrorCode {
        match self.root() {
            Error::Read { .. }
            | Error::Decode { .. }
            | Error::EmptyImage
            | Error::NoPathPixels
            | Error::NoStartRegion
            | Error::DuplicateStartRegion(_)
            | Error::NoTargetDoorRegion
            | Error::DuplicateTargetDoorRegion(_)
            | Error::ColorMap(_)
            | Error::Params(_) => ErrorCode::BadInput,
            Error::NoNavigableCorridor => ErrorCode::NoCorridor,
            Error::NoRoute => ErrorCode::NoRoute,
            Error::TargetDoorUnreachable
            | Error::StartNotOnMainPath
            | Error::NodeConflict { .. } => ErrorCode::Landmark,
            _ => ErrorCode::Other,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stage_wrapper_keeps_code() {
        let e = Error::NoRoute.in_stage(Stage::RoutePlanner);
        assert_eq!(e.code(), ErrorCode::NoRoute);
        assert_eq!(e.stage(), Some(Stage::RoutePlanner));
        assert_eq!(e.to_string(), "route-planner: no route exists");
        // wrapping twice keeps the innermost stage
        let e = e.in_stage(Stage::Output);
        assert_eq!(e.stage(), Some(Stage::RoutePlanner));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(Error::NoPathPixels.code() as i32, 2);
        assert_eq!(Error::NoNavigableCorridor.code() as i32, 3);
        assert_eq!(Error::NoRoute.code() as i32, 4);
        assert_eq!(Error::StartNotOnMainPath.code() as i32, 5);
        assert_eq!(Error::Consistency("x".into()).code() as i32, 1);
    }
}
