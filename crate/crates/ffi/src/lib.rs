//! C ABI over `rectdual`.
//!
//! Graphs and layouts cross the boundary as opaque handles; everything else
//! is UTF-8 text (edge lists and JSON). Every function returns an
//! [`RdStatus`]. On failure a message is available from [`rd_last_error`]
//! on the same thread. Strings returned through `out` parameters are owned
//! by the caller and released with [`rd_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use rectdual::solver::{self, AreaAssignment, SolveError};
use rectdual::{classify, classify_and_build, is_area_universal, validate_partition, Layout, Pipeline, PlaneGraph};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RdStatus {
    Ok = 0,
    /// The call worked and the answer is no: inconclusive membership, a
    /// layout that is not area-universal, or a solve that did not converge.
    Negative = 1,
    NullPointer = 2,
    InvalidUtf8 = 3,
    /// Malformed edge list, layout JSON or area JSON.
    Parse = 4,
    /// Well-formed input that breaks a precondition.
    Invalid = 5,
    /// A member graph for which no layout could be built.
    Build = 6,
    Panic = 7,
}

/// Opaque plane graph.
pub struct RdGraph(PlaneGraph);

/// Opaque layout.
pub struct RdLayout(Layout);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let c = CString::new(msg.into().replace('\0', " ")).expect("nul bytes replaced");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: RdStatus, msg: impl Into<String>) -> RdStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> RdStatus) -> RdStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(RdStatus::Panic, "internal panic"),
    }
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, RdStatus> {
    if p.is_null() {
        return Err(fail(RdStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(p).to_str().map_err(|e| fail(RdStatus::InvalidUtf8, e.to_string()))
}

unsafe fn put_string(out: *mut *mut c_char, s: String) {
    *out = CString::new(s).expect("JSON has no nul bytes").into_raw();
}

macro_rules! non_null {
    ($($p:expr),+) => {
        if $($p.is_null())||+ {
            return fail(RdStatus::NullPointer, "null pointer argument");
        }
    };
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn rd_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rd_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses an edge list into a new graph handle.
///
/// # Safety
/// `edges` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rd_graph_parse(edges: *const c_char, out: *mut *mut RdGraph) -> RdStatus {
    guard(|| {
        non_null!(out);
        let s = match text(edges) {
            Ok(s) => s,
            Err(status) => return status,
        };
        match PlaneGraph::parse(s) {
            Ok(g) => {
                *out = Box::into_raw(Box::new(RdGraph(g)));
                RdStatus::Ok
            }
            Err(e) => fail(RdStatus::Parse, e.to_string()),
        }
    })
}

/// # Safety
/// `g` must be null or a handle from [`rd_graph_parse`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rd_graph_free(g: *mut RdGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Number of vertices, or 0 for a null handle.
///
/// # Safety
/// `g` must be null or a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn rd_graph_vertex_count(g: *const RdGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.vertex_count())
}

/// Classifies the graph. Writes the result JSON to `out_json` and returns
/// `Ok` for a member, `Negative` when inconclusive.
///
/// # Safety
/// `g` must be a live graph handle; `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rd_classify(g: *const RdGraph, out_json: *mut *mut c_char) -> RdStatus {
    guard(|| {
        non_null!(g, out_json);
        match classify(&(*g).0) {
            Ok(r) => {
                let member = r.is_member();
                put_string(out_json, serde_json::to_string(&r).expect("result serializes"));
                if member {
                    RdStatus::Ok
                } else {
                    RdStatus::Negative
                }
            }
            Err(e) => fail(RdStatus::Invalid, e.to_string()),
        }
    })
}

/// Builds an area-universal dual with its lower-left corner at
/// (`origin_x`, `origin_y`).
///
/// # Safety
/// `g` must be a live graph handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rd_build(
    g: *const RdGraph,
    origin_x: i64,
    origin_y: i64,
    out: *mut *mut RdLayout,
) -> RdStatus {
    guard(|| {
        non_null!(g, out);
        match classify_and_build(&(*g).0, (origin_x, origin_y)) {
            Ok(Pipeline::Built { layout, .. }) => {
                *out = Box::into_raw(Box::new(RdLayout(layout)));
                RdStatus::Ok
            }
            Ok(Pipeline::Inconclusive(_)) => fail(RdStatus::Negative, "membership inconclusive; no layout built"),
            Ok(Pipeline::Infeasible { error, .. }) => fail(RdStatus::Build, error.to_string()),
            Err(e) => fail(RdStatus::Invalid, e.to_string()),
        }
    })
}

/// Parses layout JSON into a new handle. The layout is not validated here.
///
/// # Safety
/// `json` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rd_layout_from_json(json: *const c_char, out: *mut *mut RdLayout) -> RdStatus {
    guard(|| {
        non_null!(out);
        let s = match text(json) {
            Ok(s) => s,
            Err(status) => return status,
        };
        match Layout::from_json(s) {
            Ok(l) => {
                *out = Box::into_raw(Box::new(RdLayout(l)));
                RdStatus::Ok
            }
            Err(e) => fail(RdStatus::Parse, e.to_string()),
        }
    })
}

/// # Safety
/// `l` must be a live layout handle; `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rd_layout_to_json(l: *const RdLayout, out_json: *mut *mut c_char) -> RdStatus {
    guard(|| {
        non_null!(l, out_json);
        put_string(out_json, (*l).0.to_json());
        RdStatus::Ok
    })
}

/// Number of rectangles, or 0 for a null handle.
///
/// # Safety
/// `l` must be null or a live layout handle.
#[no_mangle]
pub unsafe extern "C" fn rd_layout_len(l: *const RdLayout) -> usize {
    l.as_ref().map_or(0, |l| l.0.len())
}

/// # Safety
/// `l` must be null or a layout handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rd_layout_free(l: *mut RdLayout) {
    if !l.is_null() {
        drop(Box::from_raw(l));
    }
}

/// Validates the partition and tests area-universality. Returns `Ok` when
/// area-universal, `Negative` otherwise, `Invalid` for a broken partition.
///
/// # Safety
/// `l` must be a live layout handle.
#[no_mangle]
pub unsafe extern "C" fn rd_verify(l: *const RdLayout) -> RdStatus {
    guard(|| {
        non_null!(l);
        let layout = &(*l).0;
        let report = validate_partition(layout);
        if !report.ok {
            return fail(RdStatus::Invalid, format!("invalid partition ({} violations)", report.violations.len()));
        }
        match is_area_universal(layout) {
            Ok((true, _)) => RdStatus::Ok,
            Ok((false, w)) => fail(RdStatus::Negative, format!("segment {w:?} is no rectangle side")),
            Err(e) => fail(RdStatus::Invalid, e.to_string()),
        }
    })
}

/// Realizes the target areas in `areas_json` (`{"areas": {id: area}}`).
/// Writes the cartogram JSON on success; on `Negative` (not converged) the
/// best layout found is written instead.
///
/// # Safety
/// `l` must be a live layout handle, `areas_json` a nul-terminated string,
/// `out_json` writable.
#[no_mangle]
pub unsafe extern "C" fn rd_solve(
    l: *const RdLayout,
    areas_json: *const c_char,
    rel_tol: f64,
    max_iters: usize,
    out_json: *mut *mut c_char,
) -> RdStatus {
    guard(|| {
        non_null!(l, out_json);
        let s = match text(areas_json) {
            Ok(s) => s,
            Err(status) => return status,
        };
        let targets = match AreaAssignment::from_json(s) {
            Ok(t) => t,
            Err(e) => return fail(RdStatus::Parse, e.to_string()),
        };
        match solver::solve_areas(&(*l).0, &targets, rel_tol, max_iters) {
            Ok(c) => {
                put_string(out_json, c.to_json());
                RdStatus::Ok
            }
            Err(SolveError::NotConverged { best, max_iters, .. }) => {
                put_string(out_json, best.to_json());
                fail(RdStatus::Negative, format!("not converged after {max_iters} sweeps"))
            }
            Err(e) => fail(RdStatus::Invalid, e.to_string()),
        }
    })
}
