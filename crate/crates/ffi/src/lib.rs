//! C interface to `tatm`.
//!
//! Every call returns a [`TatmStatus`]. On failure the message is kept per
//! thread and can be copied out with [`tatm_last_error`]. Trajectories are
//! opaque handles released with [`tatm_trajectory_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use tatm::classify::Label;
use tatm::evolution::Trajectory;
use tatm::measures::concurrence_matrix;
use tatm::scenario::{Config, Scenario};
use tatm::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TatmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Config = 3,
    Physics = 4,
    BufferTooSmall = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TatmLabel {
    None = 0,
    SuddenDeath = 1,
    DeadInstants = 2,
    AlwaysLiving = 3,
}

/// Summary of a classified concurrence series. Times without a value are NaN.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct TatmVerdict {
    pub label: TatmLabel,
    pub generated: bool,
    pub first_generation_time: f64,
    pub max_value: f64,
    pub dead_intervals: usize,
    pub isolated_zeros: usize,
    pub horizon: f64,
}

/// A prepared scenario and its propagated state.
pub struct TatmTrajectory {
    scenario: Scenario,
    traj: Trajectory,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: impl Into<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into());
}

fn fail(status: TatmStatus, msg: impl Into<String>) -> TatmStatus {
    set_error(msg);
    status
}

fn from_error(e: Error) -> TatmStatus {
    match e {
        Error::Config(_) => fail(TatmStatus::Config, e.to_string()),
        _ => fail(TatmStatus::Physics, e.to_string()),
    }
}

fn guard(f: impl FnOnce() -> TatmStatus) -> TatmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => {
            if s == TatmStatus::Ok {
                set_error("");
            }
            s
        }
        Err(_) => fail(TatmStatus::Panic, "internal panic"),
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, TatmStatus> {
    if p.is_null() {
        return Err(fail(TatmStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(TatmStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn tatm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies the calling thread's last error message into `buf` (NUL
/// terminated) and returns the buffer size it needs, including the NUL.
/// Passing a null `buf` or a short `len` only reports the size.
///
/// # Safety
/// `buf` must be null or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn tatm_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        let need = msg.len() + 1;
        if !buf.is_null() && len >= need {
            ptr::copy_nonoverlapping(msg.as_ptr(), buf.cast::<u8>(), msg.len());
            *buf.add(msg.len()) = 0;
        }
        need
    })
}

/// Parses a config (TOML text), resolves scenario `name` and propagates its
/// initial state. On success `*out` owns a new handle.
///
/// # Safety
/// `config` and `name` must be NUL-terminated strings; `out` must be valid
/// for a write.
#[no_mangle]
pub unsafe extern "C" fn tatm_trajectory_new(
    config: *const c_char,
    name: *const c_char,
    out: *mut *mut TatmTrajectory,
) -> TatmStatus {
    guard(|| {
        if out.is_null() {
            return fail(TatmStatus::NullPointer, "out is null");
        }
        *out = ptr::null_mut();
        let (src, name) = match (str_arg(config, "config"), str_arg(name, "name")) {
            (Ok(s), Ok(n)) => (s, n),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        let built = Config::parse(src)
            .and_then(|cfg| cfg.scenario(name).cloned())
            .and_then(|s| Ok((s.trajectory()?, s)));
        match built {
            Ok((traj, scenario)) => {
                *out = Box::into_raw(Box::new(TatmTrajectory { scenario, traj }));
                TatmStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `h` must be null or a handle from [`tatm_trajectory_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tatm_trajectory_free(h: *mut TatmTrajectory) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Atom-atom density matrix at time `t`, row-major, as 16 interleaved
/// (re, im) pairs in `out[32]`. Basis order ee, eg, ge, gg.
///
/// # Safety
/// `h` must be a live handle and `out` valid for 32 doubles.
#[no_mangle]
pub unsafe extern "C" fn tatm_trajectory_atomic_state(h: *const TatmTrajectory, t: f64, out: *mut f64) -> TatmStatus {
    guard(|| {
        if h.is_null() || out.is_null() {
            return fail(TatmStatus::NullPointer, "handle or out is null");
        }
        let rho = (*h).traj.atomic_at(t);
        let m = rho.matrix();
        for i in 0..4 {
            for j in 0..4 {
                *out.add(2 * (4 * i + j)) = m[(i, j)].re;
                *out.add(2 * (4 * i + j) + 1) = m[(i, j)].im;
            }
        }
        TatmStatus::Ok
    })
}

/// Concurrence at each of `n` times.
///
/// # Safety
/// `h` must be a live handle; `times` and `out` valid for `n` doubles.
#[no_mangle]
pub unsafe extern "C" fn tatm_trajectory_concurrence(
    h: *const TatmTrajectory,
    times: *const f64,
    n: usize,
    out: *mut f64,
) -> TatmStatus {
    guard(|| {
        if h.is_null() || (n > 0 && (times.is_null() || out.is_null())) {
            return fail(TatmStatus::NullPointer, "handle, times or out is null");
        }
        for k in 0..n {
            *out.add(k) = concurrence_matrix((*h).traj.atomic_at(*times.add(k)).matrix());
        }
        TatmStatus::Ok
    })
}

/// Number of samples and horizon of the scenario's own time grid.
///
/// # Safety
/// `h` must be a live handle; the out pointers valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tatm_trajectory_grid(h: *const TatmTrajectory, samples: *mut usize, t_max: *mut f64) -> TatmStatus {
    guard(|| {
        if h.is_null() || samples.is_null() || t_max.is_null() {
            return fail(TatmStatus::NullPointer, "null argument");
        }
        *samples = (*h).scenario.samples;
        *t_max = (*h).scenario.t_max;
        TatmStatus::Ok
    })
}

/// Classifies the concurrence series over the scenario's grid.
///
/// # Safety
/// `h` must be a live handle and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn tatm_trajectory_classify(h: *const TatmTrajectory, out: *mut TatmVerdict) -> TatmStatus {
    guard(|| {
        if h.is_null() || out.is_null() {
            return fail(TatmStatus::NullPointer, "handle or out is null");
        }
        let h = &*h;
        let times = h.scenario.times();
        let values: Vec<f64> = times.iter().map(|&t| concurrence_matrix(h.traj.atomic_at(t).matrix())).collect();
        let probe = |t: f64| concurrence_matrix(h.traj.atomic_at(t).matrix());
        match tatm::classify::classify(&times, &values, &h.scenario.classify, Some(&probe)) {
            Ok(v) => {
                *out = TatmVerdict {
                    label: match v.label {
                        Label::None => TatmLabel::None,
                        Label::Sd => TatmLabel::SuddenDeath,
                        Label::Di => TatmLabel::DeadInstants,
                        Label::Al => TatmLabel::AlwaysLiving,
                    },
                    generated: v.generated(),
                    first_generation_time: v.first_generation_time.unwrap_or(f64::NAN),
                    max_value: v.max_value,
                    dead_intervals: v.dead_intervals.len(),
                    isolated_zeros: v.isolated_zeros.len(),
                    horizon: v.horizon,
                };
                TatmStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Concurrence of a two-qubit density matrix given as 16 interleaved
/// (re, im) pairs, row-major.
///
/// # Safety
/// `rho` must be valid for 32 doubles and `out` for a write.
#[no_mangle]
pub unsafe extern "C" fn tatm_concurrence(rho: *const f64, out: *mut f64) -> TatmStatus {
    guard(|| {
        if rho.is_null() || out.is_null() {
            return fail(TatmStatus::NullPointer, "rho or out is null");
        }
        let m = tatm::linalg::CMatrix::from_fn(4, 4, |i, j| {
            num_complex::Complex64::new(*rho.add(2 * (4 * i + j)), *rho.add(2 * (4 * i + j) + 1))
        });
        let space = tatm::space::CompositeSpace::new(vec![2, 2]).expect("qubit pair");
        match tatm::state::DensityMatrix::new(space, m).and_then(|d| tatm::measures::concurrence(&d)) {
            Ok(c) => {
                *out = c;
                TatmStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}
