// Copyright 2026 gausswit Contributors
// SPDX-License-Identifier: Apache-2.0

//! C ABI over the `gausswit` core.
//!
//! States are opaque heap handles created by `gw_state_*` and released with
//! [`gw_state_free`]. Every fallible call returns a [`GwStatus`]; on failure
//! [`gw_last_error`] describes the most recent error on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use gausswit::dynamics::{shg_state, twin_state};
use gausswit::moments::moments_of;
use gausswit::state::GaussianState;
use gausswit::transforms::{apply, beam_splitter, displace, BeamSplitterParams};
use gausswit::witnesses::WitnessReport;
use gausswit::{Complex64, Error};

/// Status codes of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GwStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Numeric = 3,
    Panic = 4,
}

/// Opaque two-mode Gaussian state.
pub struct GwState {
    inner: GaussianState,
}

/// Intensity-moment witnesses of a state.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GwWitnesses {
    pub r1: f64,
    pub r2: f64,
    pub m: f64,
}

/// Side of the moment table written by [`gw_moments`].
pub const GW_MOMENT_TABLE_SIDE: usize = 4;

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> GwStatus {
    match e {
        Error::InvalidParameter { .. } | Error::InvalidModeCount(_) => GwStatus::InvalidArgument,
        _ => GwStatus::Numeric,
    }
}

fn guard<F: FnOnce() -> Result<(), (GwStatus, String)>>(f: F) -> GwStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => GwStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            GwStatus::Panic
        }
    }
}

fn lift<T>(r: gausswit::Result<T>) -> Result<T, (GwStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (GwStatus, String) {
    (GwStatus::NullPointer, format!("{what} is null"))
}

/// # Safety
/// `out` must be null or valid for one pointer write.
unsafe fn emit(out: *mut *mut GwState, state: gausswit::Result<GaussianState>) -> Result<(), (GwStatus, String)> {
    if out.is_null() {
        return Err(null("out"));
    }
    let s = lift(state)?;
    *out = Box::into_raw(Box::new(GwState { inner: s }));
    Ok(())
}

/// # Safety
/// `state` must be null or a live handle from this library.
unsafe fn state_mut<'a>(state: *mut GwState) -> Result<&'a mut GwState, (GwStatus, String)> {
    state.as_mut().ok_or_else(|| null("state"))
}

/// # Safety
/// `state` must be null or a live handle from this library.
unsafe fn state_ref<'a>(state: *const GwState) -> Result<&'a GwState, (GwStatus, String)> {
    state.as_ref().ok_or_else(|| null("state"))
}

/// Vacuum of `modes` (1 or 2) modes.
///
/// # Safety
/// `out` must be valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn gw_state_vacuum(modes: u32, out: *mut *mut GwState) -> GwStatus {
    guard(|| emit(out, GaussianState::vacuum(modes as usize)))
}

/// Squeezed vacuum with `b_sq` photons, thermal noise `bn` and stimulating
/// field `xi`.
///
/// # Safety
/// `out` must be valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn gw_state_shg(b_sq: f64, bn: f64, xi_re: f64, xi_im: f64, out: *mut *mut GwState) -> GwStatus {
    guard(|| emit(out, shg_state(b_sq, bn, Complex64::new(xi_re, xi_im))))
}

/// Twin beam with `b_p` photons per mode, signal/idler noise and stimulating
/// fields.
///
/// # Safety
/// `out` must be valid for writing one pointer.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn gw_state_twin(
    b_p: f64,
    bs: f64,
    bi: f64,
    xi1_re: f64,
    xi1_im: f64,
    xi2_re: f64,
    xi2_im: f64,
    out: *mut *mut GwState,
) -> GwStatus {
    guard(|| {
        emit(
            out,
            twin_state(b_p, bs, bi, Complex64::new(xi1_re, xi1_im), Complex64::new(xi2_re, xi2_im)),
        )
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `state` must be null or a live handle not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn gw_state_free(state: *mut GwState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// Applies a beam splitter with transmissivity `t` and phase `theta`
/// (radians) in place.
///
/// # Safety
/// `state` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn gw_apply_beam_splitter(state: *mut GwState, t: f64, theta: f64) -> GwStatus {
    guard(|| {
        let s = state_mut(state)?;
        let bs = lift(beam_splitter(BeamSplitterParams::new(t, theta)))?;
        s.inner = apply(&s.inner, &bs);
        Ok(())
    })
}

/// Displaces both modes in place.
///
/// # Safety
/// `state` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn gw_displace(state: *mut GwState, d1_re: f64, d1_im: f64, d2_re: f64, d2_im: f64) -> GwStatus {
    guard(|| {
        let s = state_mut(state)?;
        if ![d1_re, d1_im, d2_re, d2_im].iter().all(|x| x.is_finite()) {
            return Err((GwStatus::InvalidArgument, "displacement must be finite".into()));
        }
        s.inner = displace(&s.inner, Complex64::new(d1_re, d1_im), Complex64::new(d2_re, d2_im));
        Ok(())
    })
}

/// Adds thermal noise to both modes in place.
///
/// # Safety
/// `state` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn gw_add_noise(state: *mut GwState, bn1: f64, bn2: f64) -> GwStatus {
    guard(|| {
        let s = state_mut(state)?;
        s.inner = lift(s.inner.add_noise(bn1, bn2))?;
        Ok(())
    })
}

/// Mean photon numbers of both modes.
///
/// # Safety
/// `state` must be a live handle; `n1` and `n2` valid for one write each.
#[no_mangle]
pub unsafe extern "C" fn gw_mean_photons(state: *const GwState, n1: *mut f64, n2: *mut f64) -> GwStatus {
    guard(|| {
        let s = state_ref(state)?;
        if n1.is_null() || n2.is_null() {
            return Err(null("output"));
        }
        let (a, b) = s.inner.mean_photons();
        *n1 = a;
        *n2 = b;
        Ok(())
    })
}

/// Writes `<W1^a W2^b>` to `out[a * 4 + b]` for `a + b <= 3`; other entries
/// are NaN.
///
/// # Safety
/// `state` must be a live handle; `out` valid for 16 writes.
#[no_mangle]
pub unsafe extern "C" fn gw_moments(state: *const GwState, out: *mut f64) -> GwStatus {
    guard(|| {
        let s = state_ref(state)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let m = lift(moments_of(&s.inner))?;
        let n = GW_MOMENT_TABLE_SIDE;
        let table = std::slice::from_raw_parts_mut(out, n * n);
        table.fill(f64::NAN);
        for ((a, b), v) in m.entries() {
            table[a * n + b] = v;
        }
        Ok(())
    })
}

/// Witnesses `R1`, `R2` and `M` of a state.
///
/// # Safety
/// `state` must be a live handle; `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn gw_witnesses(state: *const GwState, out: *mut GwWitnesses) -> GwStatus {
    guard(|| {
        let s = state_ref(state)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let r = lift(moments_of(&s.inner).and_then(|m| WitnessReport::from_moments(&m, None, None)))?;
        *out = GwWitnesses { r1: r.r1, r2: r.r2, m: r.m };
        Ok(())
    })
}

/// Message of the last failed call on this thread. The pointer stays valid
/// until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn gw_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn gw_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
