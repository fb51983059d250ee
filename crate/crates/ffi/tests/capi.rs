use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use smallcut_ffi::*;

fn parse(text: &str) -> *mut SmallcutGraph {
    let c = CString::new(text).unwrap();
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { smallcut_graph_parse(c.as_ptr(), &mut g) }, SmallcutStatus::Ok);
    g
}

fn last_error() -> String {
    let p = smallcut_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

unsafe fn cut_edges(r: *const SmallcutReport) -> Vec<usize> {
    let mut len = 0;
    let status = smallcut_report_cut_edges(r, ptr::null_mut(), 0, &mut len);
    assert!(matches!(status, SmallcutStatus::Ok | SmallcutStatus::BufferTooSmall));
    let mut buf = vec![0; len];
    assert_eq!(
        smallcut_report_cut_edges(r, buf.as_mut_ptr(), buf.len(), &mut len),
        SmallcutStatus::Ok
    );
    buf
}

#[test]
fn path_has_all_edges_as_bridges() {
    let g = parse("5 4\n0 1\n1 2\n2 3\n3 4\n");
    unsafe {
        assert_eq!((smallcut_graph_vertex_count(g), smallcut_graph_edge_count(g)), (5, 4));
        for mode in [SmallcutMode::Sequential, SmallcutMode::Distributed, SmallcutMode::Oracle] {
            let mut r = ptr::null_mut();
            assert_eq!(smallcut_run(g, mode, SmallcutAlgo::All, 1, true, 0, &mut r), SmallcutStatus::Ok);
            assert_eq!(cut_edges(r), vec![0, 1, 2, 3]);
            let mut v = [0usize; 8];
            let mut len = 0;
            assert_eq!(smallcut_report_cut_vertices(r, v.as_mut_ptr(), 8, &mut len), SmallcutStatus::Ok);
            assert_eq!(&v[..len], &[1, 2, 3]);
            smallcut_report_free(r);
        }
        smallcut_graph_free(g);
    }
}

#[test]
fn buffer_too_small_reports_length() {
    let g = parse("3 2\n0 1\n1 2\n");
    unsafe {
        let mut r = ptr::null_mut();
        smallcut_run(g, SmallcutMode::Sequential, SmallcutAlgo::CutEdges, 0, true, 0, &mut r);
        let mut one = [0usize; 1];
        let mut len = 0;
        assert_eq!(
            smallcut_report_cut_edges(r, one.as_mut_ptr(), 1, &mut len),
            SmallcutStatus::BufferTooSmall
        );
        assert_eq!(len, 2);
        smallcut_report_free(r);
        smallcut_graph_free(g);
    }
}

#[test]
fn classes_and_metrics() {
    // Cycle of four with one chord: the two triangles' outer edges pair up.
    let edges = [0usize, 1, 1, 2, 2, 3, 3, 0, 0, 2];
    let mut g = ptr::null_mut();
    unsafe {
        assert_eq!(smallcut_graph_from_edges(4, edges.as_ptr(), 5, &mut g), SmallcutStatus::Ok);
        let mut r = ptr::null_mut();
        assert_eq!(
            smallcut_run(g, SmallcutMode::Distributed, SmallcutAlgo::CutPairs, 2, true, 0, &mut r),
            SmallcutStatus::Ok
        );
        let mut labels = [0usize; 5];
        let mut len = 0;
        assert_eq!(smallcut_report_cut_classes(r, labels.as_mut_ptr(), 5, &mut len), SmallcutStatus::Ok);
        assert_eq!(labels, [0, 0, 1, 1, usize::MAX]);
        let mut m = SmallcutMetrics::default();
        assert_eq!(smallcut_report_metrics(r, &mut m), SmallcutStatus::Ok);
        assert!(m.rounds > 0 && m.messages > 0 && m.max_payload_bits > 0);
        let mut json = ptr::null_mut();
        assert_eq!(smallcut_report_json(r, &mut json), SmallcutStatus::Ok);
        assert!(CStr::from_ptr(json).to_str().unwrap().contains("\"cut_classes\""));
        smallcut_string_free(json);
        smallcut_report_free(r);
        smallcut_graph_free(g);
    }
}

#[test]
fn errors_carry_status_and_message() {
    unsafe {
        let mut g = ptr::null_mut();
        let bad = CString::new("3 1\n0 0\n").unwrap();
        assert_eq!(smallcut_graph_parse(bad.as_ptr(), &mut g), SmallcutStatus::Parse);
        assert!(g.is_null());
        assert!(!last_error().is_empty());

        assert_eq!(smallcut_graph_parse(ptr::null(), &mut g), SmallcutStatus::NullPointer);

        let g = parse("4 2\n0 1\n2 3\n");
        let mut r = ptr::null_mut();
        assert_eq!(
            smallcut_run(g, SmallcutMode::Sequential, SmallcutAlgo::All, 0, true, 0, &mut r),
            SmallcutStatus::Fault
        );
        assert!(last_error().contains("connected"), "{}", last_error());

        let edge = parse("2 1\n0 1\n");
        assert_eq!(
            smallcut_run(edge, SmallcutMode::Sequential, SmallcutAlgo::CutVertices, 0, true, 0, &mut r),
            SmallcutStatus::Ok
        );
        let mut len = 0;
        assert_eq!(
            smallcut_report_cut_edges(r, ptr::null_mut(), 0, &mut len),
            SmallcutStatus::InvalidArgument
        );
        assert!(last_error().contains("not computed"));
        smallcut_report_free(r);
        smallcut_graph_free(edge);
        smallcut_graph_free(g);
        smallcut_graph_free(ptr::null_mut());
    }
}

#[test]
fn header_compiles_as_c() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/smallcut.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in ["smallcut_graph_parse", "smallcut_run", "smallcut_report_free", "smallcut_last_error"] {
        assert!(text.contains(name), "{name} missing from header");
    }
    let Ok(status) = Command::new("cc")
        .args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c"])
        .arg(&header)
        .status()
    else {
        eprintln!("no C compiler; skipping syntax check");
        return;
    };
    assert!(status.success());
}
