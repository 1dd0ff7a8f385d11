//! C ABI for the dynamic matching engine.
//!
//! Engines are opaque handles created by `dmwm_engine_new_plain` /
//! `dmwm_engine_new_rounded` and released by `dmwm_engine_free`. Every
//! fallible call returns a `DmwmStatus`; results go through out-pointers.
//! Handles are not thread-safe; callers must serialize access per handle.

use dynamic_mwm::{Engine, EngineError, RoundingConfig};

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DmwmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    SelfLoop = 3,
    DuplicateEdge = 4,
    UnknownEdge = 5,
    VertexOutOfRange = 6,
    InvalidWeight = 7,
    InvariantViolated = 8,
}

/// Opaque engine handle.
pub struct DmwmEngine {
    inner: Engine,
}

fn status_of(err: &EngineError) -> DmwmStatus {
    match err {
        EngineError::InvalidWeight(_) => DmwmStatus::InvalidWeight,
        EngineError::SelfLoop(_) => DmwmStatus::SelfLoop,
        EngineError::VertexOutOfRange(..) => DmwmStatus::VertexOutOfRange,
        EngineError::DuplicateEdge(..) => DmwmStatus::DuplicateEdge,
        EngineError::UnknownEdge(..) => DmwmStatus::UnknownEdge,
        _ => DmwmStatus::InvalidArgument,
    }
}

unsafe fn write_out<T>(out: *mut T, value: T) -> DmwmStatus {
    if out.is_null() {
        return DmwmStatus::NullPointer;
    }
    unsafe { out.write(value) };
    DmwmStatus::Ok
}

fn new_engine(
    n: usize,
    cfg: Result<RoundingConfig, EngineError>,
    out: *mut *mut DmwmEngine,
) -> DmwmStatus {
    if out.is_null() {
        return DmwmStatus::NullPointer;
    }
    match cfg {
        Ok(cfg) => {
            let handle = Box::new(DmwmEngine {
                inner: Engine::new(n, cfg),
            });
            unsafe { out.write(Box::into_raw(handle)) };
            DmwmStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Create a plain-mode engine on `n` vertices with level base `alpha`
/// (must be > 1).
#[no_mangle]
pub extern "C" fn dmwm_engine_new_plain(
    n: usize,
    alpha: f64,
    out: *mut *mut DmwmEngine,
) -> DmwmStatus {
    new_engine(n, RoundingConfig::plain(alpha), out)
}

/// Create a rounded-mode engine. Pass `r` in (0,1] to fix the offset, or
/// any value <= 0 to draw it from `seed`.
#[no_mangle]
pub extern "C" fn dmwm_engine_new_rounded(
    n: usize,
    alpha: f64,
    r: f64,
    seed: u64,
    out: *mut *mut DmwmEngine,
) -> DmwmStatus {
    let r = if r > 0.0 { Some(r) } else { None };
    new_engine(n, RoundingConfig::rounded(alpha, r, seed), out)
}

/// Release an engine. A null handle is a no-op.
///
/// # Safety
/// `handle` must be null or a pointer previously returned by an engine
/// constructor and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dmwm_engine_free(handle: *mut DmwmEngine) {
    if !handle.is_null() {
        drop(unsafe { Box::from_raw(handle) });
    }
}

/// Insert edge (u,v) with weight w (> 0, finite).
///
/// # Safety
/// `handle` must be a live engine pointer.
#[no_mangle]
pub unsafe extern "C" fn dmwm_engine_insert(
    handle: *mut DmwmEngine,
    u: usize,
    v: usize,
    w: f64,
) -> DmwmStatus {
    let Some(engine) = (unsafe { handle.as_mut() }) else {
        return DmwmStatus::NullPointer;
    };
    match engine.inner.insert_edge(u, v, w) {
        Ok(_) => DmwmStatus::Ok,
        Err(e) => status_of(&e),
    }
}

/// Delete a previously inserted edge (u,v).
///
/// # Safety
/// `handle` must be a live engine pointer.
#[no_mangle]
pub unsafe extern "C" fn dmwm_engine_delete(
    handle: *mut DmwmEngine,
    u: usize,
    v: usize,
) -> DmwmStatus {
    let Some(engine) = (unsafe { handle.as_mut() }) else {
        return DmwmStatus::NullPointer;
    };
    match engine.inner.delete_edge(u, v) {
        Ok(_) => DmwmStatus::Ok,
        Err(e) => status_of(&e),
    }
}

/// Total original weight of the maintained matching.
///
/// # Safety
/// `handle` must be a live engine pointer; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dmwm_engine_matching_weight(
    handle: *const DmwmEngine,
    out: *mut f64,
) -> DmwmStatus {
    let Some(engine) = (unsafe { handle.as_ref() }) else {
        return DmwmStatus::NullPointer;
    };
    unsafe { write_out(out, engine.inner.matching_weight()) }
}

/// Number of edges in the maintained matching.
///
/// # Safety
/// `handle` must be a live engine pointer; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dmwm_engine_matching_size(
    handle: *const DmwmEngine,
    out: *mut usize,
) -> DmwmStatus {
    let Some(engine) = (unsafe { handle.as_ref() }) else {
        return DmwmStatus::NullPointer;
    };
    unsafe { write_out(out, engine.inner.matching_size()) }
}

/// Mate of `v` in the maintained matching, or -1 if `v` is free.
///
/// # Safety
/// `handle` must be a live engine pointer; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dmwm_engine_mate_of(
    handle: *const DmwmEngine,
    v: usize,
    out: *mut i64,
) -> DmwmStatus {
    let Some(engine) = (unsafe { handle.as_ref() }) else {
        return DmwmStatus::NullPointer;
    };
    if v >= engine.inner.n() {
        return DmwmStatus::VertexOutOfRange;
    }
    let mate = engine.inner.mate_of(v).map(|m| m as i64).unwrap_or(-1);
    unsafe { write_out(out, mate) }
}

/// The engine's rounding offset r (0 in plain mode).
///
/// # Safety
/// `handle` must be a live engine pointer; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dmwm_engine_offset(
    handle: *const DmwmEngine,
    out: *mut f64,
) -> DmwmStatus {
    let Some(engine) = (unsafe { handle.as_ref() }) else {
        return DmwmStatus::NullPointer;
    };
    unsafe { write_out(out, engine.inner.config().offset()) }
}

/// Run the full structural invariant audit.
///
/// # Safety
/// `handle` must be a live engine pointer.
#[no_mangle]
pub unsafe extern "C" fn dmwm_engine_check_invariants(handle: *const DmwmEngine) -> DmwmStatus {
    let Some(engine) = (unsafe { handle.as_ref() }) else {
        return DmwmStatus::NullPointer;
    };
    match engine.inner.check_invariants() {
        Ok(()) => DmwmStatus::Ok,
        Err(_) => DmwmStatus::InvariantViolated,
    }
}

/// Worst-case plain-mode ratio `2a/(a-1) + 2a`; NaN if alpha <= 1.
#[no_mangle]
pub extern "C" fn dmwm_plain_ratio(alpha: f64) -> f64 {
    if alpha > 1.0 {
        dynamic_mwm::rounding::plain_ratio(alpha)
    } else {
        f64::NAN
    }
}

/// Expected rounded-mode ratio `2a^2 ln a/(a-1)^2`; NaN if alpha <= 1.
#[no_mangle]
pub extern "C" fn dmwm_rounded_ratio(alpha: f64) -> f64 {
    if alpha > 1.0 {
        dynamic_mwm::rounding::rounded_ratio(alpha)
    } else {
        f64::NAN
    }
}

/// Alpha minimizing the rounded ratio, and the ratio at that alpha.
#[no_mangle]
pub extern "C" fn dmwm_optimal_alpha(out_alpha: *mut f64, out_ratio: *mut f64) -> DmwmStatus {
    let (alpha, ratio) = dynamic_mwm::rounding::optimize_rounded_ratio();
    if out_alpha.is_null() || out_ratio.is_null() {
        return DmwmStatus::NullPointer;
    }
    unsafe {
        out_alpha.write(alpha);
        out_ratio.write(ratio);
    }
    DmwmStatus::Ok
}
