//! C ABI over `smallcut`.
//!
//! Handles are opaque and owned by the caller, who releases them with the
//! matching `_free` function. Every fallible call returns a
//! [`SmallcutStatus`]; on failure, [`smallcut_last_error`] describes the
//! most recent error on the calling thread. Panics are caught at the boundary
//! and reported as [`SmallcutStatus::Panic`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use smallcut::dist::DistConfig;
use smallcut::graph::{parse_graph, Graph};
use smallcut::lv::{dist_report, seq_report, Algo, LvError};
use smallcut::oracle::oracle_report;
use smallcut::report::CutReport;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SmallcutStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    /// A verifier kept rejecting until the attempt limit.
    Rejected = 4,
    /// The algorithm or simulator failed, e.g. on a disconnected graph.
    Fault = 5,
    /// The output buffer is too small; the needed length was written.
    BufferTooSmall = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SmallcutMode {
    Sequential = 0,
    Distributed = 1,
    Oracle = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SmallcutAlgo {
    CutEdges = 0,
    CutPairs = 1,
    CutVertices = 2,
    TwoEcc = 3,
    ThreeEcc = 4,
    All = 5,
}

impl From<SmallcutAlgo> for Algo {
    fn from(a: SmallcutAlgo) -> Self {
        match a {
            SmallcutAlgo::CutEdges => Algo::CutEdges,
            SmallcutAlgo::CutPairs => Algo::CutPairs,
            SmallcutAlgo::CutVertices => Algo::CutVertices,
            SmallcutAlgo::TwoEcc => Algo::TwoEcc,
            SmallcutAlgo::ThreeEcc => Algo::ThreeEcc,
            SmallcutAlgo::All => Algo::All,
        }
    }
}

/// Simulator totals of a distributed run; all zero for other modes.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SmallcutMetrics {
    pub rounds: u64,
    pub messages: u64,
    pub max_payload_bits: usize,
}

/// An undirected simple graph.
pub struct SmallcutGraph(Graph);

/// The result of one run.
pub struct SmallcutReport {
    report: CutReport,
    metrics: SmallcutMetrics,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let text = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

struct Failure(SmallcutStatus, String);

impl Failure {
    fn null(what: &str) -> Self {
        Failure(SmallcutStatus::NullPointer, format!("{what} is null"))
    }
}

impl From<LvError> for Failure {
    fn from(e: LvError) -> Self {
        let status = match e {
            LvError::GaveUp { .. } => SmallcutStatus::Rejected,
            _ => SmallcutStatus::Fault,
        };
        Failure(status, e.to_string())
    }
}

/// Run `f`, translating errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> SmallcutStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            SmallcutStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            SmallcutStatus::Panic
        }
    }
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::null("output pointer"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

/// Message of the last failed call on this thread, or null. The pointer stays
/// valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn smallcut_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Parse a graph file body (`n m` header, then `u v` lines).
///
/// # Safety
/// `text` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn smallcut_graph_parse(text: *const c_char, out: *mut *mut SmallcutGraph) -> SmallcutStatus {
    guard(|| {
        if text.is_null() {
            return Err(Failure::null("text"));
        }
        let s = CStr::from_ptr(text)
            .to_str()
            .map_err(|e| Failure(SmallcutStatus::Parse, e.to_string()))?;
        let g = parse_graph(s).map_err(|e| Failure(SmallcutStatus::Parse, e.to_string()))?;
        put(out, SmallcutGraph(g))
    })
}

/// Build a graph from `m` endpoint pairs stored flat in `endpoints`
/// (`2m` entries).
///
/// # Safety
/// `endpoints` must point to `2 * m` readable values (it may be null when
/// `m` is 0) and `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn smallcut_graph_from_edges(
    n: usize,
    endpoints: *const usize,
    m: usize,
    out: *mut *mut SmallcutGraph,
) -> SmallcutStatus {
    guard(|| {
        let flat: &[usize] = match (endpoints.is_null(), m) {
            (_, 0) => &[],
            (true, _) => return Err(Failure::null("endpoints")),
            (false, _) => std::slice::from_raw_parts(endpoints, 2 * m),
        };
        let pairs = flat.chunks_exact(2).map(|p| (p[0], p[1]));
        let g = Graph::new(n, pairs).map_err(|e| Failure(SmallcutStatus::InvalidArgument, e.to_string()))?;
        put(out, SmallcutGraph(g))
    })
}

/// # Safety
/// `graph` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn smallcut_graph_free(graph: *mut SmallcutGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// Vertex count, or 0 for a null handle.
///
/// # Safety
/// `graph` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn smallcut_graph_vertex_count(graph: *const SmallcutGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.0.n())
}

/// Edge count, or 0 for a null handle.
///
/// # Safety
/// `graph` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn smallcut_graph_edge_count(graph: *const SmallcutGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.0.m())
}

/// Compute a report. `las_vegas` repeats each stage until verified, up to
/// `max_attempts` tries (0 means the library default).
///
/// # Safety
/// `graph` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn smallcut_run(
    graph: *const SmallcutGraph,
    mode: SmallcutMode,
    algo: SmallcutAlgo,
    seed: u64,
    las_vegas: bool,
    max_attempts: usize,
    out: *mut *mut SmallcutReport,
) -> SmallcutStatus {
    guard(|| {
        let g = &graph.as_ref().ok_or_else(|| Failure::null("graph"))?.0;
        let mut cfg = DistConfig::new(seed);
        if max_attempts > 0 {
            cfg.max_attempts = max_attempts;
        }
        let result = match mode {
            SmallcutMode::Sequential => SmallcutReport {
                report: seq_report(g, seed, algo.into(), las_vegas, cfg.max_attempts)?.report,
                metrics: SmallcutMetrics::default(),
            },
            SmallcutMode::Distributed => {
                let run = dist_report(g, cfg, algo.into(), las_vegas)?;
                let m = run.session.metrics;
                SmallcutReport {
                    report: run.report,
                    metrics: SmallcutMetrics {
                        rounds: m.rounds,
                        messages: m.messages,
                        max_payload_bits: m.max_payload_bits,
                    },
                }
            }
            SmallcutMode::Oracle => {
                g.require_connected()
                    .map_err(|e| Failure(SmallcutStatus::Fault, e.to_string()))?;
                SmallcutReport {
                    report: oracle_report(g),
                    metrics: SmallcutMetrics::default(),
                }
            }
        };
        put(out, result)
    })
}

/// # Safety
/// `report` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn smallcut_report_free(report: *mut SmallcutReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// The report as JSON. Release the string with [`smallcut_string_free`].
///
/// # Safety
/// `report` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn smallcut_report_json(report: *const SmallcutReport, out: *mut *mut c_char) -> SmallcutStatus {
    guard(|| {
        let r = report.as_ref().ok_or_else(|| Failure::null("report"))?;
        if out.is_null() {
            return Err(Failure::null("output pointer"));
        }
        let json = CString::new(r.report.to_json()).expect("JSON has no NUL");
        *out = json.into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn smallcut_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Copy a list into a caller buffer. `len` always receives the full length.
unsafe fn copy_out(items: Option<&[usize]>, buf: *mut usize, cap: usize, len: *mut usize) -> Result<(), Failure> {
    let items = items.ok_or_else(|| {
        Failure(
            SmallcutStatus::InvalidArgument,
            "field not computed for this algorithm".into(),
        )
    })?;
    if len.is_null() {
        return Err(Failure::null("length pointer"));
    }
    *len = items.len();
    if items.len() > cap {
        return Err(Failure(
            SmallcutStatus::BufferTooSmall,
            format!("need {} entries, buffer holds {cap}", items.len()),
        ));
    }
    if !items.is_empty() {
        if buf.is_null() {
            return Err(Failure::null("buffer"));
        }
        ptr::copy_nonoverlapping(items.as_ptr(), buf, items.len());
    }
    Ok(())
}

/// Cut edge indices, ascending.
///
/// # Safety
/// `report` must be a live handle, `buf` must hold `cap` values (or be null
/// when `cap` is 0) and `len` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn smallcut_report_cut_edges(
    report: *const SmallcutReport,
    buf: *mut usize,
    cap: usize,
    len: *mut usize,
) -> SmallcutStatus {
    guard(|| {
        let r = report.as_ref().ok_or_else(|| Failure::null("report"))?;
        copy_out(r.report.cut_edges.as_deref(), buf, cap, len)
    })
}

/// Cut vertices, ascending.
///
/// # Safety
/// As for [`smallcut_report_cut_edges`].
#[no_mangle]
pub unsafe extern "C" fn smallcut_report_cut_vertices(
    report: *const SmallcutReport,
    buf: *mut usize,
    cap: usize,
    len: *mut usize,
) -> SmallcutStatus {
    guard(|| {
        let r = report.as_ref().ok_or_else(|| Failure::null("report"))?;
        copy_out(r.report.cut_vertices.as_deref(), buf, cap, len)
    })
}

/// Cut class id of every edge, or `SIZE_MAX` for edges in no cut pair.
/// Needs `m` entries.
///
/// # Safety
/// As for [`smallcut_report_cut_edges`].
#[no_mangle]
pub unsafe extern "C" fn smallcut_report_cut_classes(
    report: *const SmallcutReport,
    buf: *mut usize,
    cap: usize,
    len: *mut usize,
) -> SmallcutStatus {
    guard(|| {
        let r = report.as_ref().ok_or_else(|| Failure::null("report"))?;
        let labels = r.report.cut_classes.as_ref().map(|classes| {
            let mut l = vec![usize::MAX; r.report.m];
            for c in classes {
                for &e in &c.edges {
                    l[e] = c.id;
                }
            }
            l
        });
        copy_out(labels.as_deref(), buf, cap, len)
    })
}

/// Simulator totals of a distributed run.
///
/// # Safety
/// `report` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn smallcut_report_metrics(
    report: *const SmallcutReport,
    out: *mut SmallcutMetrics,
) -> SmallcutStatus {
    guard(|| {
        let r = report.as_ref().ok_or_else(|| Failure::null("report"))?;
        let out = out.as_mut().ok_or_else(|| Failure::null("output pointer"))?;
        *out = r.metrics;
        Ok(())
    })
}
