//! C ABI over `urnkit`.
//!
//! Every function returns a [`UrnStatus`] and writes results through out
//! pointers. Objects are opaque handles released with their `_free`
//! function; strings returned through `char **` are released with
//! [`urn_string_free`]. After a failure, [`urn_last_error_message`] describes
//! it on the calling thread.
//!
//! States are arrays of counts in color-index order, which is the row order
//! of the transition matrix. For two-color urns that is `{white, black}`;
//! for the r-pills urn it is `{n_1, ..., n_r}`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use urnkit::closed_form;
use urnkit::dp::{self, AbsorptionDistribution};
use urnkit::montecarlo::{self, EmpiricalDistribution, SimConfig};
use urnkit::rational::{self, ExactRational};
use urnkit::cli::spec_file::SpecFile;
use urnkit::{ModelPreset, State, UrnError, UrnSpec};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UrnStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidSpec = 3,
    InvalidArgument = 4,
    InvalidState = 5,
    NonTerminating = 6,
    QuadratureFailure = 7,
    OutOfRange = 8,
    Panic = 9,
}

/// An urn: transition matrix, absorbing walls and draw weights.
pub struct UrnModel {
    spec: UrnSpec,
}

/// Exact law of the absorbing state, entries ordered by state.
pub struct UrnDistribution {
    dist: AbsorptionDistribution,
    states: Vec<State>,
}

/// Simulated absorbing-state counts, entries ordered by state.
pub struct UrnEmpirical {
    emp: EmpiricalDistribution,
    states: Vec<State>,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

struct Failure(UrnStatus, String);

impl From<UrnError> for Failure {
    fn from(e: UrnError) -> Self {
        let status = match e {
            UrnError::InvalidSpec(_) => UrnStatus::InvalidSpec,
            UrnError::InvalidArgument(_)
            | UrnError::DimensionMismatch(..)
            | UrnError::CapExceeded { .. } => UrnStatus::InvalidArgument,
            UrnError::AbsorbingState(_)
            | UrnError::NegativeCount { .. }
            | UrnError::CountOverflow { .. }
            | UrnError::NoDrawableBall(_)
            | UrnError::IllegalStep { .. } => UrnStatus::InvalidState,
            UrnError::NonTerminating { .. } => UrnStatus::NonTerminating,
            UrnError::QuadratureFailure { .. } => UrnStatus::QuadratureFailure,
        };
        Failure(status, e.to_string())
    }
}

fn set_last_error(message: &str) {
    let text = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = text);
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> UrnStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_last_error("");
            UrnStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_last_error(&message);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            UrnStatus::Panic
        }
    }
}

fn null() -> Failure {
    Failure(UrnStatus::NullPointer, "null pointer argument".into())
}

unsafe fn get<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(null)
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null());
    }
    out.write(value);
    Ok(())
}

unsafe fn put_box<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null());
    }
    out.write(Box::into_raw(Box::new(value)));
    Ok(())
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null());
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(UrnStatus::InvalidUtf8, "string is not valid UTF-8".into()))
}

unsafe fn counts(p: *const u32, len: usize) -> Result<State, Failure> {
    if p.is_null() {
        return Err(null());
    }
    Ok(State::new(std::slice::from_raw_parts(p, len).to_vec()))
}

unsafe fn put_string(out: *mut *mut c_char, value: String) -> Result<(), Failure> {
    let c = CString::new(value).map_err(|_| Failure(UrnStatus::InvalidArgument, "interior NUL".into()))?;
    if out.is_null() {
        return Err(null());
    }
    out.write(c.into_raw());
    Ok(())
}

unsafe fn put_rational(out: *mut *mut c_char, value: urnkit::Result<ExactRational>) -> Result<(), Failure> {
    put_string(out, rational::format(&value?))
}

fn checked_start(spec: &UrnSpec, state: State) -> Result<State, Failure> {
    if state.colors() != spec.colors() {
        let len = state.colors();
        return Err(UrnError::DimensionMismatch(state, spec.colors(), len).into());
    }
    Ok(state)
}

fn entry<T>(items: &[T], index: usize) -> Result<&T, Failure> {
    items.get(index).ok_or_else(|| {
        Failure(UrnStatus::OutOfRange, format!("index {index} out of range for {} entries", items.len()))
    })
}

unsafe fn copy_state(state: &State, out: *mut u32, len: usize) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null());
    }
    if len != state.colors() {
        return Err(Failure(
            UrnStatus::InvalidArgument,
            format!("buffer holds {len} counts, state has {}", state.colors()),
        ));
    }
    std::slice::from_raw_parts_mut(out, len).copy_from_slice(state.counts());
    Ok(())
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn urn_status_str(status: UrnStatus) -> *const c_char {
    let s: &'static CStr = match status {
        UrnStatus::Ok => c"ok",
        UrnStatus::NullPointer => c"null pointer",
        UrnStatus::InvalidUtf8 => c"invalid UTF-8",
        UrnStatus::InvalidSpec => c"invalid urn specification",
        UrnStatus::InvalidArgument => c"invalid argument",
        UrnStatus::InvalidState => c"invalid state",
        UrnStatus::NonTerminating => c"process does not terminate",
        UrnStatus::QuadratureFailure => c"quadrature did not reach its tolerance",
        UrnStatus::OutOfRange => c"index out of range",
        UrnStatus::Panic => c"internal panic",
    };
    s.as_ptr()
}

/// Message for the last failed call on this thread; empty after a success.
/// Valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn urn_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn urn_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Named urn: `pills`, `rpills:R`, `pills-variant`, `cannibal`,
/// `cannibal-unmodified`, `okcorral` or `sampling`.
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn urn_model_from_preset(name: *const c_char, out: *mut *mut UrnModel) -> UrnStatus {
    guard(|| {
        let preset: ModelPreset = text(name)?.parse()?;
        put_box(out, UrnModel { spec: preset.spec() })
    })
}

/// Urn from the JSON form
/// `{"colors", "matrix", "absorbing_caps", "weight_mode"}`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn urn_model_from_json(json: *const c_char, out: *mut *mut UrnModel) -> UrnStatus {
    guard(|| {
        let spec = SpecFile::parse(text(json)?)?;
        put_box(out, UrnModel { spec })
    })
}

/// # Safety
/// `model` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn urn_model_to_json(model: *const UrnModel, out: *mut *mut c_char) -> UrnStatus {
    guard(|| put_string(out, SpecFile::render(&get(model)?.spec)))
}

/// # Safety
/// `model` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn urn_model_colors(model: *const UrnModel, out: *mut usize) -> UrnStatus {
    guard(|| put(out, get(model)?.spec.colors()))
}

/// # Safety
/// `model` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn urn_model_free(model: *mut UrnModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Exact absorption distribution from the state `counts[0..len]`.
///
/// # Safety
/// `model` must be a live handle, `counts` must point to `len` values and
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn urn_solve(
    model: *const UrnModel,
    counts_ptr: *const u32,
    len: usize,
    out: *mut *mut UrnDistribution,
) -> UrnStatus {
    guard(|| {
        let spec = &get(model)?.spec;
        let start = checked_start(spec, counts(counts_ptr, len)?)?;
        let dist = dp::absorption_distribution(spec, &start)?;
        let states = dist.entries().keys().cloned().collect();
        put_box(out, UrnDistribution { dist, states })
    })
}

/// Number of absorbing states with positive probability.
///
/// # Safety
/// `dist` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn urn_distribution_len(dist: *const UrnDistribution, out: *mut usize) -> UrnStatus {
    guard(|| put(out, get(dist)?.states.len()))
}

/// Copies the counts of entry `index` into `out[0..len]`; `len` must equal
/// the number of colors.
///
/// # Safety
/// `dist` must be a live handle; `out` must have room for `len` values.
#[no_mangle]
pub unsafe extern "C" fn urn_distribution_state(
    dist: *const UrnDistribution,
    index: usize,
    out: *mut u32,
    len: usize,
) -> UrnStatus {
    guard(|| copy_state(entry(&get(dist)?.states, index)?, out, len))
}

/// Probability of entry `index`, rounded to the nearest double.
///
/// # Safety
/// `dist` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn urn_distribution_probability(
    dist: *const UrnDistribution,
    index: usize,
    out: *mut f64,
) -> UrnStatus {
    guard(|| {
        let d = get(dist)?;
        let state = entry(&d.states, index)?;
        put(out, rational::to_f64(&d.dist.entries()[state]))
    })
}

/// Exact probability of entry `index` as `"num/den"` (or an integer).
///
/// # Safety
/// `dist` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn urn_distribution_probability_str(
    dist: *const UrnDistribution,
    index: usize,
    out: *mut *mut c_char,
) -> UrnStatus {
    guard(|| {
        let d = get(dist)?;
        let state = entry(&d.states, index)?;
        put_string(out, rational::format(&d.dist.entries()[state]))
    })
}

/// `sum P{state} v1^(last count) v2^(first count)`; for two colors, `v1`
/// marks black balls and `v2` white balls.
///
/// # Safety
/// `dist` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn urn_distribution_pgf(
    dist: *const UrnDistribution,
    v1: f64,
    v2: f64,
    out: *mut f64,
) -> UrnStatus {
    guard(|| {
        if !(v1.is_finite() && v2.is_finite()) {
            return Err(Failure(UrnStatus::InvalidArgument, "pgf arguments must be finite".into()));
        }
        put(out, dp::pgf_eval(&get(dist)?.dist, v1, v2))
    })
}

/// Exact factorial moment `E(X (X-1) ... (X-order+1))` of the first count.
///
/// # Safety
/// `dist` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn urn_distribution_factorial_moment(
    dist: *const UrnDistribution,
    order: usize,
    out: *mut *mut c_char,
) -> UrnStatus {
    guard(|| {
        let report = dp::white_marginal_moments(&get(dist)?.dist, order)?;
        put_string(out, rational::format(&report.factorial_moments[order - 1]))
    })
}

/// Exact mean and variance of the first count.
///
/// # Safety
/// `dist` must be a live handle; both out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn urn_distribution_mean_variance(
    dist: *const UrnDistribution,
    mean_out: *mut *mut c_char,
    variance_out: *mut *mut c_char,
) -> UrnStatus {
    guard(|| {
        if mean_out.is_null() || variance_out.is_null() {
            return Err(null());
        }
        let report = dp::white_marginal_moments(&get(dist)?.dist, 1)?;
        put_string(mean_out, rational::format(&report.mean))?;
        put_string(variance_out, rational::format(&report.variance))
    })
}

/// # Safety
/// `dist` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn urn_distribution_free(dist: *mut UrnDistribution) {
    if !dist.is_null() {
        drop(Box::from_raw(dist));
    }
}

/// Runs `replications` seeded simulations from `counts[0..len]`. The counts
/// depend only on the inputs, not on thread scheduling.
///
/// # Safety
/// `model` must be a live handle, `counts` must point to `len` values and
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn urn_simulate(
    model: *const UrnModel,
    counts_ptr: *const u32,
    len: usize,
    replications: u64,
    seed: u64,
    out: *mut *mut UrnEmpirical,
) -> UrnStatus {
    guard(|| {
        let spec = get(model)?.spec.clone();
        let start = checked_start(&spec, counts(counts_ptr, len)?)?;
        let emp = montecarlo::run_batch(&SimConfig { spec, start, replications, seed })?;
        let states = emp.counts().keys().cloned().collect();
        put_box(out, UrnEmpirical { emp, states })
    })
}

/// # Safety
/// `emp` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn urn_empirical_len(emp: *const UrnEmpirical, out: *mut usize) -> UrnStatus {
    guard(|| put(out, get(emp)?.states.len()))
}

/// # Safety
/// `emp` must be a live handle; `out` must have room for `len` values.
#[no_mangle]
pub unsafe extern "C" fn urn_empirical_state(
    emp: *const UrnEmpirical,
    index: usize,
    out: *mut u32,
    len: usize,
) -> UrnStatus {
    guard(|| copy_state(entry(&get(emp)?.states, index)?, out, len))
}

/// Number of replications absorbed at entry `index`, and the 99% half-width
/// of its frequency.
///
/// # Safety
/// `emp` must be a live handle; both out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn urn_empirical_count(
    emp: *const UrnEmpirical,
    index: usize,
    count_out: *mut u64,
    half_width_out: *mut f64,
) -> UrnStatus {
    guard(|| {
        if count_out.is_null() || half_width_out.is_null() {
            return Err(null());
        }
        let e = get(emp)?;
        let state = entry(&e.states, index)?;
        put(count_out, e.emp.count(state))?;
        put(half_width_out, e.emp.half_width_99(state))
    })
}

/// # Safety
/// `emp` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn urn_empirical_free(emp: *mut UrnEmpirical) {
    if !emp.is_null() {
        drop(Box::from_raw(emp));
    }
}

/// Pills urn pgf of the single-unit count (`n` single, `m >= 1` double-unit
/// pills), accurate to 1e-10.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn urn_pills_pgf(n: u32, m: u32, v: f64, out: *mut f64) -> UrnStatus {
    guard(|| put(out, closed_form::pills_pgf(n, m, v)?))
}

/// r-pills pgf of the single-unit count, `counts = {n_1, ..., n_r}` with
/// `r >= 3`, accurate to 1e-8.
///
/// # Safety
/// `counts` must point to `len` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn urn_rpills_pgf(counts_ptr: *const u32, len: usize, v: f64, out: *mut f64) -> UrnStatus {
    guard(|| {
        let state = counts(counts_ptr, len)?;
        put(out, closed_form::rpills_pgf(state.counts(), v)?)
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn urn_pills_expectation(n: u32, m: u32, out: *mut *mut c_char) -> UrnStatus {
    guard(|| put_rational(out, closed_form::pills_expectation(n, m)))
}

/// Pills variant started with `n` white and `2m` black balls.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn urn_variant_pills_expectation(n: u32, m: u32, out: *mut *mut c_char) -> UrnStatus {
    guard(|| put_rational(out, closed_form::variant_pills_expectation(n, m)))
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn urn_cannibal_pmf(n: u32, m: u32, k: u32, out: *mut *mut c_char) -> UrnStatus {
    guard(|| put_rational(out, closed_form::cannibal_pmf(n, m, k)))
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn urn_okcorral_survive_prob(n: u32, m: u32, out: *mut *mut c_char) -> UrnStatus {
    guard(|| put_rational(out, closed_form::okcorral_survive_prob(n, m)))
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn urn_okcorral_survivor_pmf(n: u32, m: u32, k: u32, out: *mut *mut c_char) -> UrnStatus {
    guard(|| put_rational(out, closed_form::okcorral_survivor_pmf(n, m, k)))
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn urn_sampling_survive_prob(n: u32, m: u32, out: *mut *mut c_char) -> UrnStatus {
    guard(|| put_rational(out, closed_form::sampling_survive_prob(n, m)))
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn urn_sampling_pmf(n: u32, m: u32, k: u32, out: *mut *mut c_char) -> UrnStatus {
    guard(|| put_rational(out, closed_form::sampling_pmf(n, m, k)))
}
