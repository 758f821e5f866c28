//! C ABI for `qmb-core`.
//!
//! Models, constraint sets and filters are opaque handles created by the
//! `*_parse` / `*_new` functions and released with the matching `*_free`.
//! Every fallible call returns a [`QmbStatus`]; on failure the message is
//! available from [`qmb_last_error`] on the same thread. Strings returned
//! through `char **` outputs are owned by the caller and released with
//! [`qmb_string_free`].
//!
//! Observations are passed in the observation file format (`obs PF PE` per
//! line) and state sets as comma-separated names or `*`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use qmb_core::cli::parse;
use qmb_core::{ConstraintSet, EntailedBelief, Error, Evidence, Filter, FilterState, Proposition, Rank, TransitionModel};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QmbStatus {
    Ok = 0,
    /// A null pointer or a string that is not UTF-8.
    InvalidArgument = 1,
    InvalidInput = 2,
    InconsistentEvidence = 3,
    CapExceeded = 4,
    Unsafe = 5,
    DomainMismatch = 6,
    Panic = 7,
}

/// Verdict of [`qmb_constraints_belief`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QmbEntailed {
    Believed = 0,
    NotBelieved = 1,
    Undetermined = 2,
}

/// Rank reported for an infinitely implausible event.
pub const QMB_RANK_INFINITE: u64 = u64::MAX;

pub struct QmbModel(Arc<TransitionModel>);

pub struct QmbConstraints(ConstraintSet);

pub struct QmbFilter {
    model: Arc<TransitionModel>,
    state: FilterState,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let message = CString::new(message.replace('\0', " ")).unwrap();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(message));
}

struct Failure(QmbStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::InconsistentEvidence { .. } => QmbStatus::InconsistentEvidence,
            Error::CapExceeded { .. } => QmbStatus::CapExceeded,
            Error::UnsafeConstraints { .. } => QmbStatus::Unsafe,
            Error::Algebra(qmb_core::AlgebraError::DomainMismatch { .. }) => QmbStatus::DomainMismatch,
            _ => QmbStatus::InvalidInput,
        };
        Failure(status, e.to_string())
    }
}

fn invalid(what: &str) -> Failure {
    Failure(QmbStatus::InvalidArgument, what.to_string())
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> QmbStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            QmbStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            QmbStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(invalid(&format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| invalid(&format!("{what} is not UTF-8")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| invalid(&format!("{what} is null")))
}

unsafe fn output<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| invalid(&format!("{what} is null")))
}

fn owned_string(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

unsafe fn query(
    space: &qmb_core::StateSpace,
    observations: *const c_char,
    prop: *const c_char,
) -> Result<(Evidence, Proposition), Failure> {
    let e = parse::parse_observations(text(observations, "observations")?, space)?;
    let a = space.parse_set(text(prop, "prop")?)?;
    Ok((e, a))
}

/// The message of the last failed call on this thread, or null. The pointer
/// stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn qmb_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn qmb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses and validates a model.
///
/// # Safety
/// `source` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn qmb_model_parse(source: *const c_char, out: *mut *mut QmbModel) -> QmbStatus {
    guard(|| {
        let out = output(out, "out")?;
        let m = parse::load_model(text(source, "source")?)?;
        *out = Box::into_raw(Box::new(QmbModel(Arc::new(m))));
        Ok(())
    })
}

/// # Safety
/// `model` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qmb_model_free(model: *mut QmbModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Number of states in the model's state space.
///
/// # Safety
/// `model` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn qmb_model_state_count(model: *const QmbModel) -> usize {
    model.as_ref().map_or(0, |m| m.0.space().len())
}

/// Writes the model in the model file format.
///
/// # Safety
/// `model` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn qmb_model_render(model: *const QmbModel, out: *mut *mut c_char) -> QmbStatus {
    guard(|| {
        let m = handle(model, "model")?;
        *output(out, "out")? = owned_string(parse::render_model(&m.0));
        Ok(())
    })
}

/// Whether `prop` is believed at time `at` given the observations.
///
/// # Safety
/// `model` must be a live handle, the strings NUL-terminated and `out`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn qmb_model_believes(
    model: *const QmbModel,
    observations: *const c_char,
    at: usize,
    prop: *const c_char,
    out: *mut bool,
) -> QmbStatus {
    guard(|| {
        let m = &handle(model, "model")?.0;
        let out = output(out, "out")?;
        let (e, a) = query(m.space(), observations, prop)?;
        *out = m.believes(&e, &a, at)?;
        Ok(())
    })
}

/// Conditional kappa rank of `prop` at time `at`; [`QMB_RANK_INFINITE`]
/// for an impossible event.
///
/// # Safety
/// As for [`qmb_model_believes`].
#[no_mangle]
pub unsafe extern "C" fn qmb_model_rank(
    model: *const QmbModel,
    observations: *const c_char,
    at: usize,
    prop: *const c_char,
    out: *mut u64,
) -> QmbStatus {
    guard(|| {
        let m = &handle(model, "model")?.0;
        let out = output(out, "out")?;
        let (e, a) = query(m.space(), observations, prop)?;
        *out = match qmb_core::oracle::conditional_kappa(m, &e, &a, at)? {
            Rank::Finite(r) => r,
            Rank::Infinite => QMB_RANK_INFINITE,
        };
        Ok(())
    })
}

/// Starts a filter at time 0. The filter keeps its own reference to the
/// model, so the model handle may be freed first.
///
/// # Safety
/// `model` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qmb_filter_new(model: *const QmbModel, out: *mut *mut QmbFilter) -> QmbStatus {
    guard(|| {
        let m = Arc::clone(&handle(model, "model")?.0);
        let out = output(out, "out")?;
        let state = Filter::new(&m)?.init();
        *out = Box::into_raw(Box::new(QmbFilter { model: m, state }));
        Ok(())
    })
}

/// # Safety
/// `filter` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qmb_filter_free(filter: *mut QmbFilter) {
    if !filter.is_null() {
        drop(Box::from_raw(filter));
    }
}

/// Advances the filter by one observation, a state set such as `PF,PE`.
/// On failure the filter is left unchanged.
///
/// # Safety
/// `filter` must be a live handle and `observation` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn qmb_filter_step(filter: *mut QmbFilter, observation: *const c_char) -> QmbStatus {
    guard(|| {
        let f = filter.as_mut().ok_or_else(|| invalid("filter is null"))?;
        let obs = f.model.space().parse_set(text(observation, "observation")?)?;
        f.state = Filter::new(&f.model)?.step(&f.state, &obs)?;
        Ok(())
    })
}

/// Current time of the filter.
///
/// # Safety
/// `filter` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn qmb_filter_time(filter: *const QmbFilter) -> usize {
    filter.as_ref().map_or(0, |f| f.state.time())
}

/// Whether `prop` is believed about the current state.
///
/// # Safety
/// `filter` must be a live handle, `prop` NUL-terminated and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qmb_filter_believes(filter: *const QmbFilter, prop: *const c_char, out: *mut bool) -> QmbStatus {
    guard(|| {
        let f = handle(filter, "filter")?;
        let out = output(out, "out")?;
        let a = f.model.space().parse_set(text(prop, "prop")?)?;
        *out = Filter::new(&f.model)?.believes(&f.state, &a)?;
        Ok(())
    })
}

/// Writes the current vector as tab-separated `state=value` pairs.
///
/// # Safety
/// `filter` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qmb_filter_render(filter: *const QmbFilter, normalize: bool, out: *mut *mut c_char) -> QmbStatus {
    guard(|| {
        let f = handle(filter, "filter")?;
        *output(out, "out")? = owned_string(f.state.render(f.model.space(), normalize));
        Ok(())
    })
}

/// Parses a constraint file.
///
/// # Safety
/// `source` must be NUL-terminated and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qmb_constraints_parse(source: *const c_char, out: *mut *mut QmbConstraints) -> QmbStatus {
    guard(|| {
        let out = output(out, "out")?;
        let c = parse::parse_constraints(text(source, "source")?)?;
        *out = Box::into_raw(Box::new(QmbConstraints(c)));
        Ok(())
    })
}

/// # Safety
/// `constraints` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qmb_constraints_free(constraints: *mut QmbConstraints) {
    if !constraints.is_null() {
        drop(Box::from_raw(constraints));
    }
}

/// Returns [`QmbStatus::Unsafe`] with the witness in [`qmb_last_error`] if
/// the constraints are unsafe.
///
/// # Safety
/// `constraints` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn qmb_constraints_check_safe(constraints: *const QmbConstraints) -> QmbStatus {
    guard(|| Ok(handle(constraints, "constraints")?.0.ensure_safe()?))
}

/// The belief shared by every Markovian kappa measure satisfying the
/// constraints.
///
/// # Safety
/// `constraints` must be a live handle, the strings NUL-terminated and
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qmb_constraints_belief(
    constraints: *const QmbConstraints,
    observations: *const c_char,
    at: usize,
    prop: *const c_char,
    out: *mut QmbEntailed,
) -> QmbStatus {
    guard(|| {
        let c = &handle(constraints, "constraints")?.0;
        let out = output(out, "out")?;
        let (e, a) = query(c.space(), observations, prop)?;
        *out = match c.entailed_belief(&e, &a, at)? {
            EntailedBelief::Believed => QmbEntailed::Believed,
            EntailedBelief::NotBelieved => QmbEntailed::NotBelieved,
            EntailedBelief::Undetermined => QmbEntailed::Undetermined,
        };
        Ok(())
    })
}

/// Builds a kappa model satisfying the constraints; the same seed always
/// gives the same model.
///
/// # Safety
/// `constraints` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qmb_constraints_sample(constraints: *const QmbConstraints, seed: u64, out: *mut *mut QmbModel) -> QmbStatus {
    guard(|| {
        let c = &handle(constraints, "constraints")?.0;
        let out = output(out, "out")?;
        let m = c.sample_consistent_kappa(seed)?;
        *out = Box::into_raw(Box::new(QmbModel(Arc::new(m))));
        Ok(())
    })
}
