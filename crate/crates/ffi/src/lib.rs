//! C ABI over the quasistrip pipeline.
//!
//! Handles are opaque and owned by the caller: everything returned through
//! an out-pointer by a `*_new`/`*_generate` call must be released with the
//! matching `*_free`. Functions report [`QsStatus`]; on any non-OK status a
//! human-readable message is available from [`qs_last_error_message`] until
//! the next failing call on the same thread.
//!
//! Callers must pass valid NUL-terminated strings, live handles, and
//! buffers at least as large as the stated capacity; handles are not
//! thread-safe to mutate concurrently.
#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};

use quasistrip::analysis::{covering_check, CoveringReport};
use quasistrip::cli::{parse_config, RunConfig};
use quasistrip::cluster::Cluster;
use quasistrip::embedding::Embedding;
use quasistrip::generator::{generate, QuasiSet};
use quasistrip::oracle::window_contains_lattice;
use quasistrip::strip::StripSpec;

/// Status code returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QsStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    ConfigError = 3,
    DimensionMismatch = 4,
    GenerationError = 5,
    BufferTooSmall = 6,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<Vec<u8>>) {
    let c = CString::new(msg).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = c);
}

/// Message for the most recent failure on this thread. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn qs_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// A parsed configuration with its cluster, embedding and strip data.
pub struct QsPipeline {
    config: RunConfig,
    cluster: Cluster,
    embedding: Embedding,
    strip: StripSpec,
}

/// A generated point set together with its covering report.
pub struct QsPatch {
    set: QuasiSet,
    report: CoveringReport,
    n: usize,
    k: usize,
}

/// Builds a pipeline from config text (same grammar as the CLI's
/// `--config` files). On success writes a handle to `out`.
#[no_mangle]
pub unsafe extern "C" fn qs_pipeline_from_config(
    text: *const c_char,
    out: *mut *mut QsPipeline,
) -> QsStatus {
    if text.is_null() || out.is_null() {
        set_error("null argument");
        return QsStatus::NullArgument;
    }
    let Ok(text) = CStr::from_ptr(text).to_str() else {
        set_error("config text is not valid UTF-8");
        return QsStatus::InvalidUtf8;
    };
    let config = match parse_config(text) {
        Ok(cfg) => cfg,
        Err(e) => {
            set_error(e.to_string());
            return QsStatus::ConfigError;
        }
    };
    match quasistrip::cli::build_pipeline(&config) {
        Ok((cluster, embedding, strip)) => {
            let handle = Box::new(QsPipeline {
                config,
                cluster,
                embedding,
                strip,
            });
            *out = Box::into_raw(handle);
            QsStatus::Ok
        }
        Err(e) => {
            set_error(e.to_string());
            QsStatus::ConfigError
        }
    }
}

#[no_mangle]
pub unsafe extern "C" fn qs_pipeline_free(pipeline: *mut QsPipeline) {
    if !pipeline.is_null() {
        drop(Box::from_raw(pipeline));
    }
}

/// Superspace dimension k (number of antipodal representative pairs).
/// Returns 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn qs_pipeline_superspace_dim(pipeline: *const QsPipeline) -> u32 {
    pipeline.as_ref().map_or(0, |p| p.cluster.k() as u32)
}

/// Physical dimension n (2 or 3). Returns 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn qs_pipeline_physical_dim(pipeline: *const QsPipeline) -> u32 {
    pipeline.as_ref().map_or(0, |p| p.cluster.n as u32)
}

/// Number of facet families, C(k, n+1). Returns 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn qs_pipeline_tuple_count(pipeline: *const QsPipeline) -> u64 {
    pipeline.as_ref().map_or(0, |p| p.strip.tuple_count() as u64)
}

/// Common norm kappa of the embedding rows. Returns 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn qs_pipeline_kappa(pipeline: *const QsPipeline) -> f64 {
    pipeline.as_ref().map_or(0.0, |p| p.embedding.kappa())
}

unsafe fn lattice_arg<'a>(
    pipeline: *const QsPipeline,
    coords: *const i32,
    len: usize,
) -> Result<(&'a QsPipeline, &'a [i32]), QsStatus> {
    let Some(p) = pipeline.as_ref() else {
        set_error("null pipeline");
        return Err(QsStatus::NullArgument);
    };
    if coords.is_null() {
        set_error("null coordinate buffer");
        return Err(QsStatus::NullArgument);
    }
    if len != p.cluster.k() {
        set_error(format!(
            "expected {} lattice coordinates, got {len}",
            p.cluster.k()
        ));
        return Err(QsStatus::DimensionMismatch);
    }
    Ok((p, std::slice::from_raw_parts(coords, len)))
}

/// Strip membership of an integer lattice point via the cofactor test.
#[no_mangle]
pub unsafe extern "C" fn qs_pipeline_strip_contains(
    pipeline: *const QsPipeline,
    coords: *const i32,
    len: usize,
    out: *mut bool,
) -> QsStatus {
    let (p, x) = match lattice_arg(pipeline, coords, len) {
        Ok(v) => v,
        Err(s) => return s,
    };
    if out.is_null() {
        set_error("null out pointer");
        return QsStatus::NullArgument;
    }
    *out = p.strip.contains_lattice(x);
    QsStatus::Ok
}

/// Window membership of an integer lattice point via the independent
/// feasibility oracle.
#[no_mangle]
pub unsafe extern "C" fn qs_pipeline_window_contains(
    pipeline: *const QsPipeline,
    coords: *const i32,
    len: usize,
    out: *mut bool,
) -> QsStatus {
    let (p, x) = match lattice_arg(pipeline, coords, len) {
        Ok(v) => v,
        Err(s) => return s,
    };
    if out.is_null() {
        set_error("null out pointer");
        return QsStatus::NullArgument;
    }
    match window_contains_lattice(&p.embedding, x) {
        Ok(v) => {
            *out = v;
            QsStatus::Ok
        }
        Err(e) => {
            set_error(e.to_string());
            QsStatus::DimensionMismatch
        }
    }
}

/// Runs generation with the pipeline's configured radius and writes a patch
/// handle to `out`.
#[no_mangle]
pub unsafe extern "C" fn qs_pipeline_generate(
    pipeline: *const QsPipeline,
    out: *mut *mut QsPatch,
) -> QsStatus {
    let Some(p) = pipeline.as_ref() else {
        set_error("null pipeline");
        return QsStatus::NullArgument;
    };
    if out.is_null() {
        set_error("null out pointer");
        return QsStatus::NullArgument;
    }
    match generate(&p.cluster, &p.embedding, &p.strip, &p.config.generation()) {
        Ok(set) => {
            let report = covering_check(&set, &p.strip, &p.embedding);
            let patch = Box::new(QsPatch {
                n: p.cluster.n,
                k: p.cluster.k(),
                set,
                report,
            });
            *out = Box::into_raw(patch);
            QsStatus::Ok
        }
        Err(e) => {
            set_error(e.to_string());
            QsStatus::GenerationError
        }
    }
}

#[no_mangle]
pub unsafe extern "C" fn qs_patch_free(patch: *mut QsPatch) {
    if !patch.is_null() {
        drop(Box::from_raw(patch));
    }
}

/// Number of points in the patch. Returns 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn qs_patch_len(patch: *const QsPatch) -> usize {
    patch.as_ref().map_or(0, |p| p.set.len())
}

/// Arithmetical neighbours that failed the covering check (always 0 for a
/// correct build). Returns u64::MAX for a null handle.
#[no_mangle]
pub unsafe extern "C" fn qs_patch_covering_violations(patch: *const QsPatch) -> u64 {
    patch
        .as_ref()
        .map_or(u64::MAX, |p| p.report.violations as u64)
}

/// Copies point coordinates into `buf`, n doubles per point, point-major.
/// `cap` is the buffer length in doubles and must be at least len * n.
#[no_mangle]
pub unsafe extern "C" fn qs_patch_positions(
    patch: *const QsPatch,
    buf: *mut f64,
    cap: usize,
) -> QsStatus {
    let Some(p) = patch.as_ref() else {
        set_error("null patch");
        return QsStatus::NullArgument;
    };
    if buf.is_null() {
        set_error("null buffer");
        return QsStatus::NullArgument;
    }
    let need = p.set.len() * p.n;
    if cap < need {
        set_error(format!("need {need} doubles, buffer holds {cap}"));
        return QsStatus::BufferTooSmall;
    }
    let out = std::slice::from_raw_parts_mut(buf, need);
    for (point, chunk) in p.set.points.iter().zip(out.chunks_exact_mut(p.n)) {
        for (dst, v) in chunk.iter_mut().zip(point.pos.iter()) {
            *dst = *v;
        }
    }
    QsStatus::Ok
}

/// Copies source lattice vectors into `buf`, k int32 per point,
/// point-major. `cap` is the buffer length in int32 and must be at least
/// len * k.
#[no_mangle]
pub unsafe extern "C" fn qs_patch_sources(
    patch: *const QsPatch,
    buf: *mut i32,
    cap: usize,
) -> QsStatus {
    let Some(p) = patch.as_ref() else {
        set_error("null patch");
        return QsStatus::NullArgument;
    };
    if buf.is_null() {
        set_error("null buffer");
        return QsStatus::NullArgument;
    }
    let need = p.set.len() * p.k;
    if cap < need {
        set_error(format!("need {need} ints, buffer holds {cap}"));
        return QsStatus::BufferTooSmall;
    }
    let out = std::slice::from_raw_parts_mut(buf, need);
    for (point, chunk) in p.set.points.iter().zip(out.chunks_exact_mut(p.k)) {
        chunk.copy_from_slice(&point.source);
    }
    QsStatus::Ok
}

/// Copies per-point occupation fractions into `buf` (one double per point).
#[no_mangle]
pub unsafe extern "C" fn qs_patch_occupations(
    patch: *const QsPatch,
    buf: *mut f64,
    cap: usize,
) -> QsStatus {
    let Some(p) = patch.as_ref() else {
        set_error("null patch");
        return QsStatus::NullArgument;
    };
    if buf.is_null() {
        set_error("null buffer");
        return QsStatus::NullArgument;
    }
    if cap < p.set.len() {
        set_error(format!("need {} doubles, buffer holds {cap}", p.set.len()));
        return QsStatus::BufferTooSmall;
    }
    let out = std::slice::from_raw_parts_mut(buf, p.set.len());
    out.copy_from_slice(&p.report.occupations);
    QsStatus::Ok
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CString;
    use std::ptr;

    const CONFIG: &str = "group = D2m:5\nshell = 1,0\nshell = tau,0\nradius = 8\n";

    unsafe fn make_pipeline(text: &str) -> *mut QsPipeline {
        let c = CString::new(text).unwrap();
        let mut out: *mut QsPipeline = ptr::null_mut();
        assert_eq!(qs_pipeline_from_config(c.as_ptr(), &mut out), QsStatus::Ok);
        assert!(!out.is_null());
        out
    }

    #[test]
    fn pipeline_reports_dimensions() {
        unsafe {
            let p = make_pipeline(CONFIG);
            assert_eq!(qs_pipeline_superspace_dim(p), 10);
            assert_eq!(qs_pipeline_physical_dim(p), 2);
            assert_eq!(qs_pipeline_tuple_count(p), 120);
            assert!(qs_pipeline_kappa(p) > 0.0);
            qs_pipeline_free(p);
        }
    }

    #[test]
    fn membership_paths_agree_over_ffi() {
        unsafe {
            let p = make_pipeline(CONFIG);
            let mut x = [0i32; 10];
            for probe in 0..10 {
                x[probe] = 1;
                let mut fast = false;
                let mut slow = false;
                assert_eq!(
                    qs_pipeline_strip_contains(p, x.as_ptr(), x.len(), &mut fast),
                    QsStatus::Ok
                );
                assert_eq!(
                    qs_pipeline_window_contains(p, x.as_ptr(), x.len(), &mut slow),
                    QsStatus::Ok
                );
                assert_eq!(fast, slow);
                x[probe] = 0;
            }
            qs_pipeline_free(p);
        }
    }

    #[test]
    fn generate_and_read_back() {
        unsafe {
            let p = make_pipeline(CONFIG);
            let mut patch: *mut QsPatch = ptr::null_mut();
            assert_eq!(qs_pipeline_generate(p, &mut patch), QsStatus::Ok);
            let len = qs_patch_len(patch);
            assert!(len > 10);
            assert_eq!(qs_patch_covering_violations(patch), 0);

            let mut pos = vec![0.0f64; len * 2];
            assert_eq!(
                qs_patch_positions(patch, pos.as_mut_ptr(), pos.len()),
                QsStatus::Ok
            );
            let mut src = vec![0i32; len * 10];
            assert_eq!(
                qs_patch_sources(patch, src.as_mut_ptr(), src.len()),
                QsStatus::Ok
            );
            let mut occ = vec![0.0f64; len];
            assert_eq!(
                qs_patch_occupations(patch, occ.as_mut_ptr(), occ.len()),
                QsStatus::Ok
            );

            // Cross-check against the library called directly.
            let cfg = parse_config(CONFIG).unwrap();
            let (c, e, s) = quasistrip::cli::build_pipeline(&cfg).unwrap();
            let q = generate(&c, &e, &s, &cfg.generation()).unwrap();
            assert_eq!(q.len(), len);
            for (i, point) in q.points.iter().enumerate() {
                assert_eq!(pos[2 * i], point.pos[0]);
                assert_eq!(pos[2 * i + 1], point.pos[1]);
                assert_eq!(&src[10 * i..10 * (i + 1)], point.source.as_slice());
            }
            assert!(occ.iter().all(|f| (0.0..=1.0).contains(f)));

            qs_patch_free(patch);
            qs_pipeline_free(p);
        }
    }

    #[test]
    fn errors_are_reported() {
        unsafe {
            let mut out: *mut QsPipeline = ptr::null_mut();
            let bad = CString::new("group = D2m:4\nshell = 1,0\n").unwrap();
            assert_eq!(
                qs_pipeline_from_config(bad.as_ptr(), &mut out),
                QsStatus::ConfigError
            );
            let msg = CStr::from_ptr(qs_last_error_message())
                .to_string_lossy()
                .into_owned();
            assert!(msg.contains("radius"), "{msg}");

            assert_eq!(
                qs_pipeline_from_config(ptr::null(), &mut out),
                QsStatus::NullArgument
            );

            let p = make_pipeline(CONFIG);
            let coords = [0i32; 4];
            let mut flag = false;
            assert_eq!(
                qs_pipeline_strip_contains(p, coords.as_ptr(), coords.len(), &mut flag),
                QsStatus::DimensionMismatch
            );

            let mut patch: *mut QsPatch = ptr::null_mut();
            assert_eq!(qs_pipeline_generate(p, &mut patch), QsStatus::Ok);
            let mut tiny = [0.0f64; 1];
            assert_eq!(
                qs_patch_positions(patch, tiny.as_mut_ptr(), tiny.len()),
                QsStatus::BufferTooSmall
            );
            qs_patch_free(patch);
            qs_pipeline_free(p);

            // Null handles are inert.
            qs_patch_free(ptr::null_mut());
            qs_pipeline_free(ptr::null_mut());
            assert_eq!(qs_patch_len(ptr::null()), 0);
        }
    }
}
