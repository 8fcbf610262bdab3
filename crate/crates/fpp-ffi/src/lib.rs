//! C ABI over the core engine: opaque handles, integer status codes, and
//! caller-freed strings. Every entry point is panic-safe; failures set a
//! thread-local message retrievable with `fpp_last_error`.

use fpp_core::abelian::{abelian_cover_h1, abelianization};
use fpp_core::catalog::make_named_group;
use fpp_core::census::{count_homomorphisms_reduced, quotient_profile};
use fpp_core::catalog::GroupCatalogEntry;
use fpp_core::coset::{enumerate_cosets, CosetTable, Strategy};
use fpp_core::error::EngineError;
use fpp_core::lowindex::low_index_subgroups;
use fpp_core::presentation::{parse_presentation, Presentation};
use fpp_core::rewrite::reidemeister_schreier;
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum FppStatus {
    /// Success.
    Ok = 0,
    /// A computation failed (enumeration did not close, internal error).
    ComputeError = 1,
    /// Malformed input: presentation text, word, or target name.
    InputError = 2,
    /// A configured budget or limit was exceeded.
    BudgetExceeded = 3,
    /// A required pointer argument was null.
    NullArgument = 4,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg).unwrap_or_else(|_| CString::new("invalid error text").unwrap());
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &EngineError) -> FppStatus {
    match e.exit_code() {
        2 => FppStatus::InputError,
        3 => FppStatus::BudgetExceeded,
        _ => FppStatus::ComputeError,
    }
}

fn fail(e: EngineError) -> FppStatus {
    let s = status_of(&e);
    set_error(e.to_string());
    s
}

/// Run a closure with panics converted to `ComputeError`.
fn guarded(f: impl FnOnce() -> FppStatus) -> FppStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_error("internal panic".to_string());
            FppStatus::ComputeError
        }
    }
}

/// # Safety
/// `ptr` must be null or a valid NUL-terminated string.
unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, FppStatus> {
    if ptr.is_null() {
        set_error("null string argument".into());
        return Err(FppStatus::NullArgument);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error("string is not valid UTF-8".into());
        FppStatus::InputError
    })
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s)
        .unwrap_or_else(|_| CString::new("").unwrap())
        .into_raw()
}

/// A finitely presented group. Created by `fpp_presentation_parse`,
/// destroyed by `fpp_presentation_free`.
pub struct FppPresentation {
    inner: Arc<Presentation>,
}

/// A complete coset table. Created by `fpp_cosets`, destroyed by
/// `fpp_coset_table_free`.
pub struct FppCosetTable {
    inner: CosetTable,
}

/// Last error message for this thread, or null if none. Free the result
/// with `fpp_string_free`.
#[no_mangle]
pub extern "C" fn fpp_last_error() -> *mut c_char {
    LAST_ERROR.with(|e| match &*e.borrow() {
        Some(c) => c.clone().into_raw(),
        None => std::ptr::null_mut(),
    })
}

/// Free a string returned by this library. Null is a no-op.
///
/// # Safety
/// `s` must be a pointer previously returned by this library, used at most
/// once.
#[no_mangle]
pub unsafe extern "C" fn fpp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parse `< gens | relators >` text (commutator shorthand `(u, v)` allowed)
/// into a presentation handle written to `out`.
///
/// # Safety
/// `text` must be a valid NUL-terminated string; `out` must be a valid
/// pointer.
#[no_mangle]
pub unsafe extern "C" fn fpp_presentation_parse(
    text: *const c_char,
    out: *mut *mut FppPresentation,
) -> FppStatus {
    guarded(|| {
        if out.is_null() {
            set_error("null output pointer".into());
            return FppStatus::NullArgument;
        }
        let text = match read_str(text) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let parse = || -> Result<Presentation, EngineError> {
            let body = fpp_core::register::expand_commutators(text)?;
            Ok(parse_presentation("G", &body)?)
        };
        match parse() {
            Ok(p) => {
                *out = Box::into_raw(Box::new(FppPresentation { inner: Arc::new(p) }));
                FppStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `p` must be a handle from `fpp_presentation_parse`, used at most once.
#[no_mangle]
pub unsafe extern "C" fn fpp_presentation_free(p: *mut FppPresentation) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Number of generators; 0 if `p` is null.
///
/// # Safety
/// `p` must be null or a valid presentation handle.
#[no_mangle]
pub unsafe extern "C" fn fpp_presentation_rank(p: *const FppPresentation) -> u32 {
    if p.is_null() {
        return 0;
    }
    (*p).inner.rank() as u32
}

/// Render the presentation in the native grammar. Free with
/// `fpp_string_free`.
///
/// # Safety
/// `p` must be null or a valid presentation handle.
#[no_mangle]
pub unsafe extern "C" fn fpp_presentation_format(p: *const FppPresentation) -> *mut c_char {
    if p.is_null() {
        return std::ptr::null_mut();
    }
    to_c_string((*p).inner.format())
}

/// Abelianization invariants as a display string like `"Z^2 x Z/6"`,
/// written to `out`. Free with `fpp_string_free`.
///
/// # Safety
/// `p` must be a valid presentation handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn fpp_abelianization(
    p: *const FppPresentation,
    out: *mut *mut c_char,
) -> FppStatus {
    guarded(|| {
        if p.is_null() || out.is_null() {
            set_error("null argument".into());
            return FppStatus::NullArgument;
        }
        let inv = abelianization(&(*p).inner).invariants;
        *out = to_c_string(inv.display());
        FppStatus::Ok
    })
}

/// First homology of the finite abelian cover (the commutator subgroup),
/// written to `out` as a display string. Free with `fpp_string_free`.
///
/// # Safety
/// `p` must be a valid presentation handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn fpp_abelian_cover_h1(
    p: *const FppPresentation,
    coset_limit: usize,
    out: *mut *mut c_char,
) -> FppStatus {
    guarded(|| {
        if p.is_null() || out.is_null() {
            set_error("null argument".into());
            return FppStatus::NullArgument;
        }
        match abelian_cover_h1(
            &(*p).inner,
            coset_limit,
            fpp_core::rewrite::DEFAULT_TIETZE_BUDGET,
        ) {
            Ok(inv) => {
                *out = to_c_string(inv.display());
                FppStatus::Ok
            }
            Err(e) => fail(e.into()),
        }
    })
}

/// Enumerate the cosets of the subgroup generated by `words` (an array of
/// `n_words` NUL-terminated word strings; 0 words = the trivial subgroup).
/// Writes a table handle to `out`.
///
/// # Safety
/// `p` must be a valid presentation handle; `words` must point to `n_words`
/// valid strings; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn fpp_cosets(
    p: *const FppPresentation,
    words: *const *const c_char,
    n_words: usize,
    limit: usize,
    out: *mut *mut FppCosetTable,
) -> FppStatus {
    guarded(|| {
        if p.is_null() || out.is_null() || (n_words > 0 && words.is_null()) {
            set_error("null argument".into());
            return FppStatus::NullArgument;
        }
        let pres = &(*p).inner;
        let mut ws = Vec::with_capacity(n_words);
        for i in 0..n_words {
            let text = match read_str(*words.add(i)) {
                Ok(t) => t,
                Err(s) => return s,
            };
            let parse = || -> Result<fpp_core::word::Word, EngineError> {
                let body = fpp_core::register::expand_commutators(text)?;
                Ok(pres.parse_word(&body)?)
            };
            match parse() {
                Ok(w) => ws.push(w),
                Err(e) => return fail(e),
            }
        }
        match enumerate_cosets(pres, &ws, limit, Strategy::Hlt) {
            Ok(t) => {
                *out = Box::into_raw(Box::new(FppCosetTable { inner: t }));
                FppStatus::Ok
            }
            Err(e) => fail(e.into()),
        }
    })
}

/// # Safety
/// `t` must be a handle from `fpp_cosets`, used at most once.
#[no_mangle]
pub unsafe extern "C" fn fpp_coset_table_free(t: *mut FppCosetTable) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Subgroup index; 0 if `t` is null.
///
/// # Safety
/// `t` must be null or a valid coset table handle.
#[no_mangle]
pub unsafe extern "C" fn fpp_coset_table_index(t: *const FppCosetTable) -> u64 {
    if t.is_null() {
        return 0;
    }
    (*t).inner.index() as u64
}

/// 1 if the subgroup is normal, 0 otherwise (or if `t` is null).
///
/// # Safety
/// `t` must be null or a valid coset table handle.
#[no_mangle]
pub unsafe extern "C" fn fpp_coset_table_is_normal(t: *const FppCosetTable) -> i32 {
    if t.is_null() {
        return 0;
    }
    (*t).inner.is_normal() as i32
}

/// Present the subgroup of `t` on Schreier generators, Tietze-simplified,
/// written to `out` in the native grammar. Free with `fpp_string_free`.
///
/// # Safety
/// `t` must be a valid coset table handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn fpp_coset_table_subgroup_presentation(
    t: *const FppCosetTable,
    out: *mut *mut c_char,
) -> FppStatus {
    guarded(|| {
        if t.is_null() || out.is_null() {
            set_error("null argument".into());
            return FppStatus::NullArgument;
        }
        let mut rp = reidemeister_schreier(&(*t).inner);
        rp.simplify(fpp_core::rewrite::DEFAULT_TIETZE_BUDGET);
        *out = to_c_string(rp.presentation.format());
        FppStatus::Ok
    })
}

/// Number of conjugacy classes of subgroups of index at most `max_index`,
/// written to `out`.
///
/// # Safety
/// `p` must be a valid presentation handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn fpp_low_index_class_count(
    p: *const FppPresentation,
    max_index: usize,
    node_budget: u64,
    out: *mut u64,
) -> FppStatus {
    guarded(|| {
        if p.is_null() || out.is_null() {
            set_error("null argument".into());
            return FppStatus::NullArgument;
        }
        match low_index_subgroups(&(*p).inner, max_index, node_budget) {
            Ok(classes) => {
                *out = classes.len() as u64;
                FppStatus::Ok
            }
            Err(e) => fail(e.into()),
        }
    })
}

/// Homomorphism and epimorphism counts onto the named catalog target
/// (e.g. "S3", "Q8", "G27", "Z13xsZ4_faithful").
///
/// # Safety
/// `p` must be a valid presentation handle; `target`, `out_hom`, `out_epi`
/// must be valid.
#[no_mangle]
pub unsafe extern "C" fn fpp_hom_count(
    p: *const FppPresentation,
    target: *const c_char,
    budget: u64,
    out_hom: *mut u64,
    out_epi: *mut u64,
) -> FppStatus {
    guarded(|| {
        if p.is_null() || out_hom.is_null() || out_epi.is_null() {
            set_error("null argument".into());
            return FppStatus::NullArgument;
        }
        let name = match read_str(target) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let q = match make_named_group(name) {
            Ok(q) => q,
            Err(e) => return fail(e.into()),
        };
        match count_homomorphisms_reduced(&(*p).inner, &q, budget) {
            Ok((hom, epi)) => {
                *out_hom = hom;
                *out_epi = epi;
                FppStatus::Ok
            }
            Err(e) => fail(e.into()),
        }
    })
}

/// Distinct-kernel quotient count |Epi| / |Aut| onto the named catalog
/// target, written to `out`.
///
/// # Safety
/// `p` must be a valid presentation handle; `target` and `out` must be
/// valid.
#[no_mangle]
pub unsafe extern "C" fn fpp_quotient_count(
    p: *const FppPresentation,
    target: *const c_char,
    budget: u64,
    out: *mut u64,
) -> FppStatus {
    guarded(|| {
        if p.is_null() || out.is_null() {
            set_error("null argument".into());
            return FppStatus::NullArgument;
        }
        let name = match read_str(target) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let run = || -> Result<u64, EngineError> {
            let entry = GroupCatalogEntry::build(make_named_group(name)?)?;
            Ok(quotient_profile(&(*p).inner, &entry, budget)?.quotient_count)
        };
        match run() {
            Ok(q) => {
                *out = q;
                FppStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}
