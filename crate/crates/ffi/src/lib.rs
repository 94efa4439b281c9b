//! C interface to `submax-lie`.
//!
//! Objects cross the boundary as opaque handles owned by the caller and
//! released with the matching `*_free` function. Every fallible call returns
//! an [`SmlStatus`]; the message for the last failure on the calling thread is
//! available from [`sml_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, UnwindSafe};
use std::ptr;

use submax_lie::actions::weyl_conjugacy_search;
use submax_lie::commuting::{p_rank, NamedSet};
use submax_lie::nilradical::FieldSpec;
use submax_lie::ordering::paper_order;
use submax_lie::report::to_json;
use submax_lie::roots::{is_ideal, Rank, RootSet};
use submax_lie::solver::{lt_fiber, FiberProblem, SolutionSet, Strategy};
use submax_lie::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SmlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    /// A search budget ran out before the answer was certain.
    Refused = 3,
    Internal = 4,
}

/// Opaque set of positive roots of A_n.
pub struct SmlRootSet(RootSet);

/// Opaque result of an LT-fiber computation.
pub struct SmlFiber(SolutionSet);

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SmlStrategy {
    Search = 0,
    Replay = 1,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let c = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(err: Error) -> SmlStatus {
    let status = match err {
        Error::BudgetExceeded { .. } => SmlStatus::Refused,
        _ => SmlStatus::InvalidArgument,
    };
    set_error(err.to_string());
    status
}

fn guard(f: impl FnOnce() -> SmlStatus + UnwindSafe) -> SmlStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    catch_unwind(f).unwrap_or_else(|_| {
        set_error("internal panic");
        SmlStatus::Internal
    })
}

unsafe fn text<'a>(s: *const c_char) -> Result<&'a str, SmlStatus> {
    if s.is_null() {
        set_error("null string argument");
        return Err(SmlStatus::NullPointer);
    }
    CStr::from_ptr(s).to_str().map_err(|_| {
        set_error("string argument is not UTF-8");
        SmlStatus::InvalidArgument
    })
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

fn resolve(rank: Rank, spec: &str) -> Result<(RootSet, Option<NamedSet>), Error> {
    match spec.parse::<NamedSet>() {
        Ok(tag) => Ok((tag.resolve(rank)?, Some(tag))),
        Err(_) => Ok((RootSet::parse(rank, spec)?, None)),
    }
}

macro_rules! out_ref {
    ($p:expr) => {
        match $p.as_mut() {
            Some(r) => r,
            None => {
                set_error("null output pointer");
                return SmlStatus::NullPointer;
            }
        }
    };
}

macro_rules! handle {
    ($p:expr) => {
        match $p.as_ref() {
            Some(r) => r,
            None => {
                set_error("null handle");
                return SmlStatus::NullPointer;
            }
        }
    };
}

macro_rules! tryc {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(err) => return fail(err),
        }
    };
}

/// Message for the last failed call on this thread, or NULL. Owned by the
/// library and valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn sml_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn sml_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// p-rank of the nilradical of a Borel subalgebra of type A_n.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sml_p_rank(n: u32, out: *mut u32) -> SmlStatus {
    guard(|| {
        let out = out_ref!(out);
        let rank = tryc!(Rank::new(n as usize));
        *out = p_rank(rank) as u32;
        SmlStatus::Ok
    })
}

/// Parses a named set (`rad:k`, `odd`, `ev-low`, `ev-high`) or a root list
/// such as `"1-3,2-4"`.
///
/// # Safety
/// `spec` must be a NUL-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sml_root_set_new(n: u32, spec: *const c_char, out: *mut *mut SmlRootSet) -> SmlStatus {
    guard(|| {
        let out = out_ref!(out);
        *out = ptr::null_mut();
        let spec = match text(spec) {
            Ok(s) => s,
            Err(status) => return status,
        };
        let rank = tryc!(Rank::new(n as usize));
        let (set, _) = tryc!(resolve(rank, spec));
        *out = Box::into_raw(Box::new(SmlRootSet(set)));
        SmlStatus::Ok
    })
}

/// # Safety
/// `set` must come from [`sml_root_set_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn sml_root_set_free(set: *mut SmlRootSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// # Safety
/// `set` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sml_root_set_len(set: *const SmlRootSet, out: *mut usize) -> SmlStatus {
    guard(|| {
        let set = handle!(set);
        *out_ref!(out) = set.0.len();
        SmlStatus::Ok
    })
}

/// # Safety
/// `set` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sml_root_set_is_ideal(set: *const SmlRootSet, out: *mut bool) -> SmlStatus {
    guard(|| {
        let set = handle!(set);
        *out_ref!(out) = is_ideal(&set.0);
        SmlStatus::Ok
    })
}

/// JSON array of roots; free with [`sml_string_free`].
///
/// # Safety
/// `set` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sml_root_set_to_json(set: *const SmlRootSet, out: *mut *mut c_char) -> SmlStatus {
    guard(|| {
        let set = handle!(set);
        *out_ref!(out) = into_c_string(set.0.to_json());
        SmlStatus::Ok
    })
}

/// Looks for a permutation of `1..=n+1` sending every root of `a` to a
/// positive root of `b`. On success `*found` says whether one exists and, if
/// so, its images are written to `images[0..n+1]`.
///
/// # Safety
/// Handles must be live; `found` must be valid for writes and `images` for
/// `images_len` writes.
#[no_mangle]
pub unsafe extern "C" fn sml_weyl_conjugacy_search(
    a: *const SmlRootSet,
    b: *const SmlRootSet,
    found: *mut bool,
    images: *mut u32,
    images_len: usize,
) -> SmlStatus {
    guard(|| {
        let (a, b) = (handle!(a), handle!(b));
        let found = out_ref!(found);
        let w = tryc!(weyl_conjugacy_search(&a.0, &b.0));
        *found = w.is_some();
        if let Some(w) = w {
            let imgs = w.images();
            if images.is_null() || images_len < imgs.len() {
                set_error(format!("image buffer needs {} entries", imgs.len()));
                return SmlStatus::InvalidArgument;
            }
            for (k, x) in imgs.into_iter().enumerate() {
                *images.add(k) = x as u32;
            }
        }
        SmlStatus::Ok
    })
}

/// All elementary subalgebras of `u` over `F_p` with leading-term set `lt`
/// under the standard order. `budget` bounds the search nodes; 0 means the
/// library default. An incomplete answer is returned with status `Refused`
/// and still stored in `*out`.
///
/// # Safety
/// `lt` must be a NUL-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sml_lt_fiber(
    n: u32,
    p: u32,
    lt: *const c_char,
    strategy: SmlStrategy,
    budget: u64,
    out: *mut *mut SmlFiber,
) -> SmlStatus {
    guard(|| {
        let out = out_ref!(out);
        *out = ptr::null_mut();
        let lt = match text(lt) {
            Ok(s) => s,
            Err(status) => return status,
        };
        let rank = tryc!(Rank::new(n as usize));
        let field = tryc!(FieldSpec::new(p, rank));
        let order = tryc!(paper_order(rank));
        let (pivots, tag) = tryc!(resolve(rank, lt));
        let strategy = match strategy {
            SmlStrategy::Search => Strategy::Search,
            SmlStrategy::Replay => Strategy::Replay,
        };
        let mut problem = FiberProblem::new(&field, &order, pivots, strategy);
        problem.case = tag;
        if budget > 0 {
            problem = problem.with_budget(budget);
        }
        let sols = tryc!(lt_fiber(&problem));
        let complete = sols.complete;
        *out = Box::into_raw(Box::new(SmlFiber(sols)));
        if complete {
            SmlStatus::Ok
        } else {
            set_error("the fiber is incomplete");
            SmlStatus::Refused
        }
    })
}

/// # Safety
/// `fiber` must come from [`sml_lt_fiber`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn sml_fiber_free(fiber: *mut SmlFiber) {
    if !fiber.is_null() {
        drop(Box::from_raw(fiber));
    }
}

/// # Safety
/// `fiber` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sml_fiber_solution_count(fiber: *const SmlFiber, out: *mut usize) -> SmlStatus {
    guard(|| {
        let fiber = handle!(fiber);
        *out_ref!(out) = fiber.0.len();
        SmlStatus::Ok
    })
}

/// # Safety
/// `fiber` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sml_fiber_is_complete(fiber: *const SmlFiber, out: *mut bool) -> SmlStatus {
    guard(|| {
        let fiber = handle!(fiber);
        *out_ref!(out) = fiber.0.complete;
        SmlStatus::Ok
    })
}

/// Report in the same JSON shape as the command line; free with
/// [`sml_string_free`].
///
/// # Safety
/// `fiber` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sml_fiber_to_json(fiber: *const SmlFiber, out: *mut *mut c_char) -> SmlStatus {
    guard(|| {
        let fiber = handle!(fiber);
        *out_ref!(out) = into_c_string(to_json("fiber", &fiber.0));
        SmlStatus::Ok
    })
}
