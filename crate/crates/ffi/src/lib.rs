//! C ABI over pflab-core.
//!
//! Every entry point returns a [`PflabStatus`]. Results go through out
//! pointers, and the message of the last failure on the calling thread is
//! available from [`pflab_last_error`]. Specs are opaque handles owned by the
//! caller and released with [`pflab_spec_free`].

use num_traits::ToPrimitive;
use pflab_core::dims::{minimax_det_regret, pfl_dim, set_state_budget};
use pflab_core::game::{play_game, GameSpec, SpecFile, StrategyConfig, Threshold};
use pflab_core::harness::replicate;
use pflab_core::measure_dims::{minimax_rand_regret, pms_dim};
use pflab_core::{adversaries, learners, Error, Rational};
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Status codes returned by every function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PflabStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidSpec = 4,
    BudgetExceeded = 5,
    Unsupported = 6,
    GameError = 7,
    Overflow = 8,
    Panic = 9,
}

/// A parsed game spec with its configured strategies.
pub struct PflabSpec {
    file: SpecFile,
    spec: GameSpec,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> PflabStatus {
    match e {
        Error::Parse(_) | Error::Io { .. } => PflabStatus::Parse,
        Error::InvalidSpec(_) | Error::AdmissibleEmpty | Error::TreeSpecMismatch(_) => {
            PflabStatus::InvalidSpec
        }
        Error::BudgetExceeded { .. } | Error::GridTooLarge { .. } => PflabStatus::BudgetExceeded,
        Error::Unsupported(_) => PflabStatus::Unsupported,
        _ => PflabStatus::GameError,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (PflabStatus, String)>) -> PflabStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PflabStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            PflabStatus::Panic
        }
    }
}

fn core<T>(r: pflab_core::Result<T>) -> Result<T, (PflabStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (PflabStatus, String) {
    (PflabStatus::NullPointer, format!("{what} is null"))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, (PflabStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (PflabStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn spec_ref<'a>(p: *const PflabSpec) -> Result<&'a PflabSpec, (PflabStatus, String)> {
    p.as_ref().ok_or_else(|| null("spec"))
}

fn write_rational(r: &Rational, num: *mut i64, den: *mut u64) -> Result<(), (PflabStatus, String)> {
    if num.is_null() || den.is_null() {
        return Err(null("output"));
    }
    let overflow = || (PflabStatus::Overflow, format!("{r} does not fit 64 bits"));
    let n = r.numer().to_i64().ok_or_else(overflow)?;
    let d = r.denom().to_u64().ok_or_else(overflow)?;
    // SAFETY: both pointers were checked non-null above.
    unsafe {
        *num = n;
        *den = d;
    }
    Ok(())
}

fn write<T>(out: *mut T, v: T) -> Result<(), (PflabStatus, String)> {
    if out.is_null() {
        return Err(null("output"));
    }
    // SAFETY: non-null, and the caller guarantees it points to a writable T.
    unsafe { *out = v };
    Ok(())
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn pflab_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |c| c.as_ptr()))
}

/// Parses a TOML spec. On success `*out` owns a new handle.
///
/// # Safety
/// `toml` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pflab_spec_parse(
    toml: *const c_char,
    out: *mut *mut PflabSpec,
) -> PflabStatus {
    guard(|| {
        let src = text(toml, "toml")?;
        let file = core(SpecFile::parse(src))?;
        let spec = core(file.to_spec())?;
        write(out, Box::into_raw(Box::new(PflabSpec { file, spec })))
    })
}

/// Releases a handle from [`pflab_spec_parse`]. Null is ignored.
///
/// # Safety
/// `spec` must come from `pflab_spec_parse` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pflab_spec_free(spec: *mut PflabSpec) {
    if !spec.is_null() {
        drop(Box::from_raw(spec));
    }
}

/// Label count, instance count and horizon of a spec.
///
/// # Safety
/// `spec` must be a live handle; outputs must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn pflab_spec_shape(
    spec: *const PflabSpec,
    labels: *mut u32,
    instances: *mut u32,
    horizon: *mut u32,
) -> PflabStatus {
    guard(|| {
        let s = &spec_ref(spec)?.spec;
        write(labels, s.n_labels as u32)?;
        write(instances, s.n_instances as u32)?;
        write(horizon, s.horizon as u32)
    })
}

/// Caps memoised solver states for subsequent calls; zero removes the cap.
#[no_mangle]
pub extern "C" fn pflab_set_state_budget(limit: u64) {
    set_state_budget((limit > 0).then_some(limit));
}

/// Largest number of mistakes an adversary forces in `depth` rounds.
///
/// # Safety
/// `spec` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pflab_pfl_dim(
    spec: *const PflabSpec,
    depth: u32,
    out: *mut u32,
) -> PflabStatus {
    guard(|| {
        let s = spec_ref(spec)?;
        write(out, core(pfl_dim(&s.spec, depth as usize))?)
    })
}

/// Deterministic minimax regret over `depth` rounds.
///
/// # Safety
/// `spec` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pflab_det_regret(
    spec: *const PflabSpec,
    depth: u32,
    out: *mut u32,
) -> PflabStatus {
    guard(|| {
        let s = spec_ref(spec)?;
        write(out, core(minimax_det_regret(&s.spec, depth as usize))?)
    })
}

/// Measure-scale dimension at scale `gamma_num / gamma_den` over a grid of
/// resolution `grid`.
///
/// # Safety
/// `spec` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pflab_pms_dim(
    spec: *const PflabSpec,
    depth: u32,
    gamma_num: u64,
    gamma_den: u64,
    grid: u32,
    out: *mut u32,
) -> PflabStatus {
    guard(|| {
        let s = spec_ref(spec)?;
        let gamma = core(Threshold::new(gamma_num, gamma_den))?;
        write(
            out,
            core(pms_dim(&s.spec, depth as usize, gamma, grid))?.value,
        )
    })
}

/// Randomized minimax regret over `depth` rounds, restricted to the grid, as
/// `*num / *den`.
///
/// # Safety
/// `spec` must be a live handle; outputs must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn pflab_rand_regret(
    spec: *const PflabSpec,
    depth: u32,
    grid: u32,
    num: *mut i64,
    den: *mut u64,
) -> PflabStatus {
    guard(|| {
        let s = spec_ref(spec)?;
        write_rational(
            &core(minimax_rand_regret(&s.spec, depth as usize, grid))?,
            num,
            den,
        )
    })
}

unsafe fn strategy(
    name: *const c_char,
    fallback: &Option<StrategyConfig>,
    what: &str,
) -> Result<StrategyConfig, (PflabStatus, String)> {
    if name.is_null() {
        return fallback
            .clone()
            .ok_or_else(|| (PflabStatus::Parse, format!("spec configures no {what}")));
    }
    Ok(StrategyConfig {
        name: text(name, what)?.to_owned(),
        params: Default::default(),
    })
}

/// Plays a learner against an adversary and reports the expected regret.
/// A null name selects the strategy configured in the spec.
///
/// # Safety
/// `spec` must be a live handle, names null or nul-terminated, outputs valid.
#[no_mangle]
pub unsafe extern "C" fn pflab_play(
    spec: *const PflabSpec,
    learner: *const c_char,
    adversary: *const c_char,
    regret_num: *mut i64,
    regret_den: *mut u64,
) -> PflabStatus {
    guard(|| {
        let s = spec_ref(spec)?;
        let lc = strategy(learner, &s.file.learner, "learner")?;
        let ac = strategy(adversary, &s.file.adversary, "adversary")?;
        let l = core(learners::learner_from_config(&s.spec, &lc))?;
        let a = core(adversaries::adversary_from_config(&s.spec, &ac))?;
        let outcome = core(play_game(&s.spec, l, a))?;
        write_rational(&outcome.expected_regret, regret_num, regret_den)
    })
}

/// Number of replication checks; ids run from 1 to this value.
#[no_mangle]
pub extern "C" fn pflab_check_count() -> u32 {
    replicate::CHECKS.len() as u32
}

/// Runs one replication check. A failed check is reported through `passed`,
/// not the status.
///
/// # Safety
/// `passed` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pflab_run_check(id: u32, passed: *mut bool) -> PflabStatus {
    guard(|| {
        let check = replicate::CHECKS
            .iter()
            .find(|c| c.id == id as usize)
            .ok_or_else(|| (PflabStatus::Parse, format!("no check with id {id}")))?;
        write(passed, replicate::run_check(check).passed)
    })
}
