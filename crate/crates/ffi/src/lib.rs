//! C ABI over the navmap pipeline.
//!
//! Every fallible call returns a [`NavmapStatus`]. On failure the message is
//! available from [`navmap_last_error_message`] on the same thread. Strings
//! handed out by this library are released with [`navmap_string_free`] and
//! analyses with [`navmap_analysis_free`].

use navmap::mask::ColorMap;
use navmap::pipeline::{analyze_file, emit_knowledge_base, to_canonical_json, Analysis};
use navmap::{Axis, CorridorParams, Direction, Error, ErrorCode, NodeKind, TravelSide};
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NavmapStatus {
    Ok = 0,
    Other = 1,
    BadInput = 2,
    NoCorridor = 3,
    NoRoute = 4,
    Landmark = 5,
    NullArgument = 10,
    InvalidUtf8 = 11,
    OutOfRange = 12,
    Panic = 13,
}

impl From<ErrorCode> for NavmapStatus {
    fn from(code: ErrorCode) -> Self {
        match code {
            ErrorCode::Other => NavmapStatus::Other,
            ErrorCode::BadInput => NavmapStatus::BadInput,
            ErrorCode::NoCorridor => NavmapStatus::NoCorridor,
            ErrorCode::NoRoute => NavmapStatus::NoRoute,
            ErrorCode::Landmark => NavmapStatus::Landmark,
        }
    }
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NavmapParams {
    pub min_width: u32,
    pub max_width: u32,
    /// 0 means "same as max_width".
    pub door_probe: u32,
    pub k: u32,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NavmapNodeKind {
    Turning = 0,
    Door = 1,
    Start = 2,
    End = 3,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NavmapNode {
    pub id: usize,
    pub x: i32,
    pub y: i32,
    pub kind: NavmapNodeKind,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NavmapDirection {
    HardRight = 0,
    NormalRight = 1,
    LightRight = 2,
    Straight = 3,
    LightLeft = 4,
    NormalLeft = 5,
    HardLeft = 6,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NavmapInstruction {
    pub at_node: usize,
    pub angle: f64,
    pub direction: NavmapDirection,
    pub actionable: bool,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NavmapTravelSide {
    Left = 0,
    Right = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NavmapAxis {
    Vertical = 0,
    Horizontal = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NavmapDoorDirective {
    pub side: NavmapTravelSide,
    pub ordinal: u32,
    pub axis: NavmapAxis,
}

/// Opaque result of a pipeline run.
pub struct NavmapAnalysis {
    analysis: Analysis,
    colors: ColorMap,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn clear_last_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

fn fail(status: NavmapStatus, msg: &str) -> NavmapStatus {
    set_last_error(msg);
    status
}

fn fail_with(e: &Error) -> NavmapStatus {
    fail(e.code().into(), &e.to_string())
}

/// Runs `f`, turning panics into [`NavmapStatus::Panic`].
fn guard(f: impl FnOnce() -> NavmapStatus) -> NavmapStatus {
    clear_last_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => fail(NavmapStatus::Panic, "internal panic"),
    }
}

unsafe fn path_arg(p: *const c_char) -> Result<PathBuf, NavmapStatus> {
    if p.is_null() {
        return Err(fail(NavmapStatus::NullArgument, "null path"));
    }
    match CStr::from_ptr(p).to_str() {
        Ok(s) => Ok(PathBuf::from(s)),
        Err(_) => Err(fail(NavmapStatus::InvalidUtf8, "path is not valid UTF-8")),
    }
}

unsafe fn analysis_ref<'a>(a: *const NavmapAnalysis) -> Result<&'a NavmapAnalysis, NavmapStatus> {
    a.as_ref()
        .ok_or_else(|| fail(NavmapStatus::NullArgument, "null analysis"))
}

#[no_mangle]
pub extern "C" fn navmap_params_default() -> NavmapParams {
    let p = CorridorParams::default();
    NavmapParams {
        min_width: p.min_width,
        max_width: p.max_width,
        door_probe: p.door_probe,
        k: navmap::pipeline::DEFAULT_K as u32,
    }
}

/// Library version as a static nul-terminated string.
#[no_mangle]
pub extern "C" fn navmap_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn navmap_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Runs the pipeline on a mask file. `params` and `colors_path` may be null
/// for defaults. On success `*out` receives a handle to free with
/// [`navmap_analysis_free`].
///
/// # Safety
/// `path` and `colors_path` must be null or nul-terminated strings, `params`
/// null or valid, and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn navmap_analyze_file(
    path: *const c_char,
    params: *const NavmapParams,
    colors_path: *const c_char,
    out: *mut *mut NavmapAnalysis,
) -> NavmapStatus {
    guard(|| {
        if out.is_null() {
            return fail(NavmapStatus::NullArgument, "null output pointer");
        }
        *out = ptr::null_mut();
        let input = match path_arg(path) {
            Ok(p) => p,
            Err(s) => return s,
        };
        let colors = if colors_path.is_null() {
            ColorMap::default()
        } else {
            let cpath = match path_arg(colors_path) {
                Ok(p) => p,
                Err(s) => return s,
            };
            match ColorMap::from_file(&cpath) {
                Ok(c) => c,
                Err(e) => return fail_with(&e),
            }
        };
        let p = params.as_ref().copied().unwrap_or_else(|| navmap_params_default());
        let mut corridor = CorridorParams::new(p.min_width, p.max_width);
        if p.door_probe != 0 {
            corridor = corridor.with_door_probe(p.door_probe);
        }
        match analyze_file(&input, corridor, &colors, p.k as usize) {
            Ok(analysis) => {
                *out = Box::into_raw(Box::new(NavmapAnalysis { analysis, colors }));
                NavmapStatus::Ok
            }
            Err(e) => fail_with(&e),
        }
    })
}

/// # Safety
/// `analysis` must be null or a handle from [`navmap_analyze_file`] that has
/// not been freed.
#[no_mangle]
pub unsafe extern "C" fn navmap_analysis_free(analysis: *mut NavmapAnalysis) {
    if !analysis.is_null() {
        drop(Box::from_raw(analysis));
    }
}

/// Canonical knowledge-base JSON. Free `*out_json` with
/// [`navmap_string_free`].
///
/// # Safety
/// `analysis` must be a live handle and `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn navmap_analysis_to_json(
    analysis: *const NavmapAnalysis,
    out_json: *mut *mut c_char,
) -> NavmapStatus {
    guard(|| {
        if out_json.is_null() {
            return fail(NavmapStatus::NullArgument, "null output pointer");
        }
        *out_json = ptr::null_mut();
        let a = match analysis_ref(analysis) {
            Ok(a) => a,
            Err(s) => return s,
        };
        match to_canonical_json(&a.analysis.kb) {
            Ok(text) => {
                *out_json = CString::new(text).expect("json has no nul").into_raw();
                NavmapStatus::Ok
            }
            Err(e) => fail_with(&e),
        }
    })
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn navmap_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `analysis` must be a live handle and `path` a nul-terminated string.
#[no_mangle]
pub unsafe extern "C" fn navmap_analysis_write_kb(
    analysis: *const NavmapAnalysis,
    path: *const c_char,
) -> NavmapStatus {
    guard(|| {
        let a = match analysis_ref(analysis) {
            Ok(a) => a,
            Err(s) => return s,
        };
        let out = match path_arg(path) {
            Ok(p) => p,
            Err(s) => return s,
        };
        match emit_knowledge_base(&a.analysis.kb, &out) {
            Ok(()) => NavmapStatus::Ok,
            Err(e) => fail_with(&e),
        }
    })
}

/// Writes the overlay PNG.
///
/// # Safety
/// `analysis` must be a live handle and `path` a nul-terminated string.
#[no_mangle]
pub unsafe extern "C" fn navmap_analysis_render(
    analysis: *const NavmapAnalysis,
    path: *const c_char,
) -> NavmapStatus {
    guard(|| {
        let a = match analysis_ref(analysis) {
            Ok(a) => a,
            Err(s) => return s,
        };
        let out = match path_arg(path) {
            Ok(p) => p,
            Err(s) => return s,
        };
        match a.analysis.render(&a.colors, &out) {
            Ok(()) => NavmapStatus::Ok,
            Err(e) => fail_with(&e),
        }
    })
}

/// Number of nodes on the selected route, 0 for a null handle.
///
/// # Safety
/// `analysis` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn navmap_analysis_route_len(analysis: *const NavmapAnalysis) -> usize {
    analysis
        .as_ref()
        .map_or(0, |a| a.analysis.kb.route.node_count())
}

/// Total length of the selected route in pixels, NaN for a null handle.
///
/// # Safety
/// `analysis` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn navmap_analysis_route_length(analysis: *const NavmapAnalysis) -> f64 {
    analysis
        .as_ref()
        .map_or(f64::NAN, |a| a.analysis.kb.route.total_length)
}

/// # Safety
/// `analysis` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn navmap_analysis_route_node(
    analysis: *const NavmapAnalysis,
    index: usize,
    out: *mut NavmapNode,
) -> NavmapStatus {
    guard(|| {
        let a = match analysis_ref(analysis) {
            Ok(a) => a,
            Err(s) => return s,
        };
        if out.is_null() {
            return fail(NavmapStatus::NullArgument, "null output pointer");
        }
        let kb = &a.analysis.kb;
        let Some(&id) = kb.route.node_sequence.get(index) else {
            return fail(NavmapStatus::OutOfRange, "route index out of range");
        };
        let node = &kb.graph.nodes[id];
        *out = NavmapNode {
            id,
            x: node.pixel.x,
            y: node.pixel.y,
            kind: match node.kind {
                NodeKind::Turning => NavmapNodeKind::Turning,
                NodeKind::Door => NavmapNodeKind::Door,
                NodeKind::Start => NavmapNodeKind::Start,
                NodeKind::End => NavmapNodeKind::End,
            },
        };
        NavmapStatus::Ok
    })
}

/// Number of turn instructions, 0 for a null handle.
///
/// # Safety
/// `analysis` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn navmap_analysis_instruction_count(analysis: *const NavmapAnalysis) -> usize {
    analysis
        .as_ref()
        .map_or(0, |a| a.analysis.kb.directions.instructions.len())
}

/// # Safety
/// `analysis` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn navmap_analysis_instruction(
    analysis: *const NavmapAnalysis,
    index: usize,
    out: *mut NavmapInstruction,
) -> NavmapStatus {
    guard(|| {
        let a = match analysis_ref(analysis) {
            Ok(a) => a,
            Err(s) => return s,
        };
        if out.is_null() {
            return fail(NavmapStatus::NullArgument, "null output pointer");
        }
        let Some(ins) = a.analysis.kb.directions.instructions.get(index) else {
            return fail(NavmapStatus::OutOfRange, "instruction index out of range");
        };
        *out = NavmapInstruction {
            at_node: ins.at_node,
            angle: ins.angle,
            direction: match ins.direction {
                Direction::HardRight => NavmapDirection::HardRight,
                Direction::NormalRight => NavmapDirection::NormalRight,
                Direction::LightRight => NavmapDirection::LightRight,
                Direction::Straight => NavmapDirection::Straight,
                Direction::LightLeft => NavmapDirection::LightLeft,
                Direction::NormalLeft => NavmapDirection::NormalLeft,
                Direction::HardLeft => NavmapDirection::HardLeft,
            },
            actionable: ins.actionable,
        };
        NavmapStatus::Ok
    })
}

/// # Safety
/// `analysis` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn navmap_analysis_door_directive(
    analysis: *const NavmapAnalysis,
    out: *mut NavmapDoorDirective,
) -> NavmapStatus {
    guard(|| {
        let a = match analysis_ref(analysis) {
            Ok(a) => a,
            Err(s) => return s,
        };
        if out.is_null() {
            return fail(NavmapStatus::NullArgument, "null output pointer");
        }
        let d = a.analysis.kb.door_directive;
        *out = NavmapDoorDirective {
            side: match d.side {
                TravelSide::Left => NavmapTravelSide::Left,
                TravelSide::Right => NavmapTravelSide::Right,
            },
            ordinal: d.ordinal as u32,
            axis: match d.corridor_axis {
                Axis::Vertical => NavmapAxis::Vertical,
                Axis::Horizontal => NavmapAxis::Horizontal,
            },
        };
        NavmapStatus::Ok
    })
}
