//! C interface to `frechet-sweep`.
//!
//! Curves and interval lists are opaque handles released with their `_free`
//! function. Every fallible call returns an [`FsStatus`]; on failure the
//! message is available from [`fs_last_error_message`] on the same thread.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use frechet_sweep::backend::BackendKind;
use frechet_sweep::sweep::{sweep_decide, SweepOptions};
use frechet_sweep::translation::{decide_translation_2d, DecideMode};
use frechet_sweep::{alt_godau_decide, frechet_value, parse_curve, Curve, Direction2, Error, Point2, Tolerance};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    Degenerate = 4,
    Internal = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FsMode {
    Oracle = 0,
    Events = 1,
}

/// An owned polygonal curve.
pub struct FsCurve(Curve);

/// An owned list of closed intervals.
pub struct FsIntervals(Vec<(f64, f64)>);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> FsStatus {
    match e {
        Error::Parse { .. } => FsStatus::Parse,
        Error::DegenerateInput(_) => FsStatus::Degenerate,
        Error::InvalidArgument(_) => FsStatus::InvalidArgument,
        Error::InvariantViolation(_) | Error::Io(_) => FsStatus::Internal,
    }
}

fn fail(status: FsStatus, msg: &str) -> FsStatus {
    set_error(msg);
    status
}

/// Runs `f`, mapping errors and panics to status codes.
fn guard(f: impl FnOnce() -> Result<(), (FsStatus, String)>) -> FsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            FsStatus::Ok
        }
        Ok(Err((status, msg))) => fail(status, &msg),
        Err(_) => fail(FsStatus::Internal, "internal panic"),
    }
}

fn lib_err(e: Error) -> (FsStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (FsStatus, String) {
    (FsStatus::NullPointer, format!("{what} is null"))
}

unsafe fn curve_ref<'a>(p: *const FsCurve, what: &str) -> Result<&'a Curve, (FsStatus, String)> {
    p.as_ref().map(|c| &c.0).ok_or_else(|| null(what))
}

fn check_delta(delta: f64) -> Result<(), (FsStatus, String)> {
    if delta.is_finite() && delta >= 0.0 {
        Ok(())
    } else {
        Err((
            FsStatus::InvalidArgument,
            format!("delta must be finite and non-negative, got {delta}"),
        ))
    }
}

/// Builds a curve from `n` interleaved coordinates `x0, y0, x1, y1, ...`.
///
/// # Safety
/// `xy` must point to `2 * n` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fs_curve_new(xy: *const f64, n: usize, out: *mut *mut FsCurve) -> FsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        if xy.is_null() {
            return Err(null("xy"));
        }
        let coords = std::slice::from_raw_parts(xy, 2 * n);
        let points = coords.chunks_exact(2).map(|c| Point2::new(c[0], c[1])).collect();
        let curve = Curve::new(points).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(FsCurve(curve)));
        Ok(())
    })
}

/// Parses a curve in the text file format.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fs_curve_parse(text: *const c_char, out: *mut *mut FsCurve) -> FsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        if text.is_null() {
            return Err(null("text"));
        }
        let s = CStr::from_ptr(text)
            .to_str()
            .map_err(|_| (FsStatus::Parse, "text is not UTF-8".to_string()))?;
        let parsed = parse_curve(s).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(FsCurve(parsed.curve)));
        Ok(())
    })
}

/// Number of vertices, or 0 for a null handle.
///
/// # Safety
/// `curve` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fs_curve_len(curve: *const FsCurve) -> usize {
    curve.as_ref().map_or(0, |c| c.0.len())
}

/// # Safety
/// `curve` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fs_curve_free(curve: *mut FsCurve) {
    if !curve.is_null() {
        drop(Box::from_raw(curve));
    }
}

/// Writes 1 to `out` if d_F(pi, sigma) <= delta, else 0.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fs_decide(pi: *const FsCurve, sigma: *const FsCurve, delta: f64, out: *mut i32) -> FsStatus {
    guard(|| {
        let (pi, sigma) = (curve_ref(pi, "pi")?, curve_ref(sigma, "sigma")?);
        if out.is_null() {
            return Err(null("out"));
        }
        check_delta(delta)?;
        *out = i32::from(alt_godau_decide(pi, sigma, delta));
        Ok(())
    })
}

/// Fréchet distance within `value_tol`.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fs_frechet(
    pi: *const FsCurve,
    sigma: *const FsCurve,
    value_tol: f64,
    out: *mut f64,
) -> FsStatus {
    guard(|| {
        let (pi, sigma) = (curve_ref(pi, "pi")?, curve_ref(sigma, "sigma")?);
        if out.is_null() {
            return Err(null("out"));
        }
        if !(value_tol > 0.0) {
            return Err((
                FsStatus::InvalidArgument,
                format!("value_tol must be positive, got {value_tol}"),
            ));
        }
        *out = frechet_value(pi, sigma, value_tol);
        Ok(())
    })
}

/// Feasible `λ` in `[lo, hi]` for `d_F(pi, sigma + λ(dx, dy)) <= delta`.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn fs_sweep(
    pi: *const FsCurve,
    sigma: *const FsCurve,
    dx: f64,
    dy: f64,
    delta: f64,
    lo: f64,
    hi: f64,
    out: *mut *mut FsIntervals,
) -> FsStatus {
    guard(|| {
        let (pi, sigma) = (curve_ref(pi, "pi")?, curve_ref(sigma, "sigma")?);
        if out.is_null() {
            return Err(null("out"));
        }
        check_delta(delta)?;
        let v = Direction2::new(dx, dy).map_err(lib_err)?;
        let r = sweep_decide(
            pi,
            sigma,
            v,
            (lo, hi),
            delta,
            Tolerance::default(),
            SweepOptions::default(),
        )
        .map_err(lib_err)?;
        *out = Box::into_raw(Box::new(FsIntervals(r.intervals)));
        Ok(())
    })
}

/// # Safety
/// `list` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fs_intervals_len(list: *const FsIntervals) -> usize {
    list.as_ref().map_or(0, |l| l.0.len())
}

/// # Safety
/// `list` must be live; `lo` and `hi` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fs_intervals_get(list: *const FsIntervals, k: usize, lo: *mut f64, hi: *mut f64) -> FsStatus {
    guard(|| {
        let l = list.as_ref().ok_or_else(|| null("list"))?;
        if lo.is_null() || hi.is_null() {
            return Err(null("lo/hi"));
        }
        let &(a, b) = l.0.get(k).ok_or_else(|| {
            (
                FsStatus::InvalidArgument,
                format!("index {k} out of range {}", l.0.len()),
            )
        })?;
        *lo = a;
        *hi = b;
        Ok(())
    })
}

/// # Safety
/// `list` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fs_intervals_free(list: *mut FsIntervals) {
    if !list.is_null() {
        drop(Box::from_raw(list));
    }
}

/// Is there a translation `t` with `d_F(pi, sigma + t) <= delta`? On success
/// `found` is 1 or 0 and `(tx, ty)` holds the witness when found.
///
/// # Safety
/// Handles must be live; output pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn fs_xlate2d(
    pi: *const FsCurve,
    sigma: *const FsCurve,
    delta: f64,
    mode: FsMode,
    found: *mut i32,
    tx: *mut f64,
    ty: *mut f64,
) -> FsStatus {
    guard(|| {
        let (pi, sigma) = (curve_ref(pi, "pi")?, curve_ref(sigma, "sigma")?);
        if found.is_null() || tx.is_null() || ty.is_null() {
            return Err(null("found/tx/ty"));
        }
        check_delta(delta)?;
        let mode = match mode {
            FsMode::Oracle => DecideMode::Oracle,
            FsMode::Events => DecideMode::Events,
        };
        let d = decide_translation_2d(pi, sigma, delta, mode, BackendKind::Baseline, Tolerance::default())
            .map_err(lib_err)?;
        *found = i32::from(d.feasible);
        if let Some(w) = d.witness {
            *tx = w.tx;
            *ty = w.ty;
        }
        Ok(())
    })
}

/// Message of the last failed call on this thread (empty after a success).
/// Valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn fs_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}
