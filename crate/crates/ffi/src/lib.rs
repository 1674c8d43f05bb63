//! C ABI over the cnslab solvers.
//!
//! Every fallible function returns a [`CnslabStatus`]; on failure a message is stored per thread
//! and can be read with [`cnslab_last_error`]. Handles are opaque and must be released with the
//! matching `*_free` function. Panics never cross the boundary; they surface as
//! [`CnslabStatus::Panic`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use cnslab::entropy::{EntropyGenerator, EntropyKernel};
use cnslab::field::{FarField, Grid};
use cnslab::riemann::{sample, solve_riemann, RiemannData, WaveStructure};
use cnslab::viscous::{mollified_riemann_data, ViscousParams, ViscousSolver};
use cnslab::{Error, GammaLawEos, PointState};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CnslabStatus {
    Ok = 0,
    NullPointer = 1,
    Domain = 2,
    Numeric = 3,
    Config = 4,
    Io = 5,
    Parse = 6,
    BufferTooSmall = 7,
    InvalidUtf8 = 8,
    Panic = 9,
}

/// Entropy-pair engine at a fixed `gamma`.
pub struct CnslabKernel {
    inner: EntropyKernel,
}

/// Solved Riemann problem.
pub struct CnslabWaves {
    eos: GammaLawEos,
    inner: WaveStructure,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let clean = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = clean);
}

fn status_of(err: &Error) -> CnslabStatus {
    match err {
        Error::Domain(_) => CnslabStatus::Domain,
        Error::Numeric { .. } => CnslabStatus::Numeric,
        Error::Config { .. } => CnslabStatus::Config,
        Error::Io { .. } => CnslabStatus::Io,
        Error::Parse { .. } => CnslabStatus::Parse,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (CnslabStatus, String)>) -> CnslabStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            CnslabStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            CnslabStatus::Panic
        }
    }
}

fn lib<T>(r: cnslab::Result<T>) -> Result<T, (CnslabStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (CnslabStatus, String) {
    (CnslabStatus::NullPointer, format!("null pointer passed as `{what}`"))
}

/// Message of the last failed call on this thread; empty after a successful call. The pointer is
/// valid until the next cnslab call on the same thread.
#[no_mangle]
pub extern "C" fn cnslab_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn cnslab_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds an entropy kernel for `gamma > 1`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle pointer.
#[no_mangle]
pub unsafe extern "C" fn cnslab_kernel_new(gamma: f64, out: *mut *mut CnslabKernel) -> CnslabStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let eos = lib(GammaLawEos::new(gamma))?;
        let kernel = lib(EntropyKernel::new(eos))?;
        *out = Box::into_raw(Box::new(CnslabKernel { inner: kernel }));
        Ok(())
    })
}

/// Releases a kernel; null is ignored.
///
/// # Safety
/// `kernel` must come from [`cnslab_kernel_new`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn cnslab_kernel_free(kernel: *mut CnslabKernel) {
    if !kernel.is_null() {
        drop(Box::from_raw(kernel));
    }
}

/// `∫ (1 - t^2)^lambda dt`, the factor between kernel pairs and their normalized forms. Returns
/// NaN for a null handle.
///
/// # Safety
/// `kernel` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn cnslab_kernel_moment_mass(kernel: *const CnslabKernel) -> f64 {
    match kernel.as_ref() {
        Some(k) => k.inner.moment_mass(),
        None => f64::NAN,
    }
}

/// Entropy pair generated by `generator` (text form such as `"1"`, `"s"`, `"s^2/2"`,
/// `"bump(-1,2)"`) at `(rho, u)`.
///
/// # Safety
/// `kernel` must be a live handle; `generator` a NUL-terminated string; `eta` and `q` writable.
#[no_mangle]
pub unsafe extern "C" fn cnslab_entropy_pair(
    kernel: *const CnslabKernel,
    generator: *const c_char,
    rho: f64,
    u: f64,
    eta: *mut f64,
    q: *mut f64,
) -> CnslabStatus {
    guard(|| {
        let k = kernel.as_ref().ok_or_else(|| null("kernel"))?;
        if generator.is_null() {
            return Err(null("generator"));
        }
        if eta.is_null() || q.is_null() {
            return Err(null("eta/q"));
        }
        let text = CStr::from_ptr(generator)
            .to_str()
            .map_err(|e| (CnslabStatus::InvalidUtf8, e.to_string()))?;
        let gen: EntropyGenerator = lib(text.parse())?;
        let pair = lib(k.inner.pair(&gen, rho, u))?;
        *eta = pair.eta;
        *q = pair.q;
        Ok(())
    })
}

/// Solves the Riemann problem with left state `(rho_l, u_l)` and right state `(rho_r, u_r)`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cnslab_riemann_solve(
    gamma: f64,
    rho_l: f64,
    u_l: f64,
    rho_r: f64,
    u_r: f64,
    out: *mut *mut CnslabWaves,
) -> CnslabStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let eos = lib(GammaLawEos::new(gamma))?;
        let data = RiemannData {
            left: PointState::new(rho_l, u_l),
            right: PointState::new(rho_r, u_r),
        };
        let waves = lib(solve_riemann(&eos, &data))?;
        *out = Box::into_raw(Box::new(CnslabWaves { eos, inner: waves }));
        Ok(())
    })
}

/// Releases a wave structure; null is ignored.
///
/// # Safety
/// `waves` must come from [`cnslab_riemann_solve`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn cnslab_waves_free(waves: *mut CnslabWaves) {
    if !waves.is_null() {
        drop(Box::from_raw(waves));
    }
}

/// Star-region density and velocity (density 0 when a vacuum opens).
///
/// # Safety
/// `waves` must be a live handle; `rho` and `u` writable.
#[no_mangle]
pub unsafe extern "C" fn cnslab_waves_star(waves: *const CnslabWaves, rho: *mut f64, u: *mut f64) -> CnslabStatus {
    guard(|| {
        let w = waves.as_ref().ok_or_else(|| null("waves"))?;
        if rho.is_null() || u.is_null() {
            return Err(null("rho/u"));
        }
        *rho = w.inner.star_rho;
        *u = w.inner.star_u;
        Ok(())
    })
}

/// State at similarity coordinate `xi = x / t`.
///
/// # Safety
/// `waves` must be a live handle; `rho` and `u` writable.
#[no_mangle]
pub unsafe extern "C" fn cnslab_waves_sample(
    waves: *const CnslabWaves,
    xi: f64,
    rho: *mut f64,
    u: *mut f64,
) -> CnslabStatus {
    guard(|| {
        let w = waves.as_ref().ok_or_else(|| null("waves"))?;
        if rho.is_null() || u.is_null() {
            return Err(null("rho/u"));
        }
        if !xi.is_finite() {
            return Err((CnslabStatus::Domain, format!("xi must be finite, got {xi}")));
        }
        let s = sample(&w.eos, &w.inner, xi);
        *rho = s.rho;
        *u = s.u;
        Ok(())
    })
}

/// Parameters of [`cnslab_viscous_run`].
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct CnslabViscousSetup {
    pub gamma: f64,
    pub alpha: f64,
    pub epsilon: f64,
    pub rho_left: f64,
    pub u_left: f64,
    pub rho_right: f64,
    pub u_right: f64,
    pub x_min: f64,
    pub x_max: f64,
    pub n_cells: usize,
    /// Half width of the smooth transition of the initial data.
    pub mollification_width: f64,
    pub t_end: f64,
    pub cfl: f64,
}

/// Runs the viscous solver from mollified Riemann data to `t_end` and writes the final cell
/// averages into `rho` and `m`, each of length `len >= n_cells`.
///
/// # Safety
/// `setup` must be readable; `rho` and `m` must point to `len` writable doubles; `floor_events`
/// may be null.
#[no_mangle]
pub unsafe extern "C" fn cnslab_viscous_run(
    setup: *const CnslabViscousSetup,
    rho: *mut f64,
    m: *mut f64,
    len: usize,
    floor_events: *mut u64,
) -> CnslabStatus {
    guard(|| {
        let s = setup.as_ref().ok_or_else(|| null("setup"))?;
        if rho.is_null() || m.is_null() {
            return Err(null("rho/m"));
        }
        if len < s.n_cells {
            return Err((
                CnslabStatus::BufferTooSmall,
                format!("buffers hold {len} values, {} cells needed", s.n_cells),
            ));
        }
        let eos = lib(GammaLawEos::new(s.gamma))?;
        let params = lib(ViscousParams::new(s.epsilon, s.alpha))?;
        let far = lib(FarField::new(
            PointState::new(s.rho_left, s.u_left),
            PointState::new(s.rho_right, s.u_right),
        ))?;
        let grid = lib(Grid::new(s.x_min, s.x_max, s.n_cells))?;
        let initial = lib(mollified_riemann_data(&grid, &far, s.mollification_width))?;
        let solver = lib(ViscousSolver::new(eos, params, far, s.cfl))?;
        let out = lib(solver.run(&initial, s.t_end, &[], |_, _| {}))?;
        let last = out.snapshots.last().expect("run emits the initial snapshot");
        std::slice::from_raw_parts_mut(rho, s.n_cells).copy_from_slice(&last.rho);
        std::slice::from_raw_parts_mut(m, s.n_cells).copy_from_slice(&last.m);
        if let Some(f) = floor_events.as_mut() {
            *f = out.floor_events;
        }
        Ok(())
    })
}
