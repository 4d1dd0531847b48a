//! C ABI over morphkit.
//!
//! Every call returns an `MkStatus`. On anything but `MK_STATUS_OK` the
//! message is available from `mk_last_error` on the same thread. Handles and
//! strings returned through out-parameters are owned by the caller and must be
//! released with the matching `*_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use morphkit::factorbasis::is_reducible;
use morphkit::factorization::{is_factor, is_left_factor, uniqueness_report, Caps};
use morphkit::incidence::{classify_symbolic, IncidenceMatrix, VerdictKind};
use morphkit::morphisms::compose;
use morphkit::text::parse_morphism_any;
use morphkit::{Error, Morphism};

/// Opaque morphism handle.
pub struct MkMorphism(Morphism);

/// Opaque incidence matrix handle.
pub struct MkMatrix(IncidenceMatrix);

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MkStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Alphabet = 4,
    NotParikhPositive = 5,
    Truncated = 6,
    Contract = 7,
    InvalidMatrix = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MkVerdict {
    ExclusivelyReducible = 0,
    ExclusivelyIrreducible = 1,
    NotExclusivelyIrreducible = 2,
    Mixed = 3,
    Unknown = 4,
}

impl From<VerdictKind> for MkVerdict {
    fn from(k: VerdictKind) -> Self {
        match k {
            VerdictKind::ExclusivelyReducible => MkVerdict::ExclusivelyReducible,
            VerdictKind::ExclusivelyIrreducible => MkVerdict::ExclusivelyIrreducible,
            VerdictKind::NotExclusivelyIrreducible => MkVerdict::NotExclusivelyIrreducible,
            VerdictKind::Mixed => MkVerdict::Mixed,
            VerdictKind::Unknown => MkVerdict::Unknown,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

struct Failure(MkStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Parse { .. } => MkStatus::Parse,
            Error::EmptyAlphabet
            | Error::DuplicateSymbol(_)
            | Error::UnknownSymbol(_)
            | Error::EmptyWord
            | Error::AlphabetMismatch(_) => MkStatus::Alphabet,
            Error::NotParikhPositive => MkStatus::NotParikhPositive,
            Error::Truncated(_) | Error::BoundsInsufficient(_) => MkStatus::Truncated,
            Error::Contract(_) => MkStatus::Contract,
            Error::InvalidMatrix(_) => MkStatus::InvalidMatrix,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(MkStatus::NullArgument, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> MkStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            MkStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            MkStatus::Panic
        }
    }
}

unsafe fn text<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s).to_str().map_err(|e| Failure(MkStatus::InvalidUtf8, format!("{what}: {e}")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn put<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

fn c_string(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s).map(CString::into_raw).map_err(|_| Failure(MkStatus::Contract, "output contains a NUL byte".into()))
}

fn boxed(phi: Morphism) -> *mut MkMorphism {
    Box::into_raw(Box::new(MkMorphism(phi)))
}

fn json(value: &impl serde::Serialize) -> Result<*mut c_char, Failure> {
    let s = serde_json::to_string(value).map_err(|e| Failure(MkStatus::Contract, e.to_string()))?;
    c_string(s)
}

/// Message for the last failing call on this thread; empty after a success.
/// The pointer stays valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn mk_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn mk_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses `a->ab; b->ba` or the JSON object form.
///
/// # Safety
/// `text_in` must be a NUL-terminated string, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mk_morphism_parse(text_in: *const c_char, out: *mut *mut MkMorphism) -> MkStatus {
    guard(|| {
        let phi = parse_morphism_any(text(text_in, "text")?, None)?;
        put(out, boxed(phi), "out")
    })
}

/// # Safety
/// `m` must be null or a handle from this library, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn mk_morphism_free(m: *mut MkMorphism) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// # Safety
/// `m` must be a valid handle, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mk_morphism_to_string(m: *const MkMorphism, out: *mut *mut c_char) -> MkStatus {
    guard(|| {
        let m = handle(m, "morphism")?;
        put(out, c_string(m.0.to_string())?, "out")
    })
}

/// # Safety
/// `m` must be a valid handle, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mk_is_reducible(m: *const MkMorphism, out: *mut bool) -> MkStatus {
    guard(|| {
        let m = handle(m, "morphism")?;
        put(out, is_reducible(&m.0)?.reducible, "out")
    })
}

/// Full reducibility report as JSON, including the witness split.
///
/// # Safety
/// `m` must be a valid handle, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mk_reducibility_json(m: *const MkMorphism, out: *mut *mut c_char) -> MkStatus {
    guard(|| {
        let m = handle(m, "morphism")?;
        put(out, json(&is_reducible(&m.0)?)?, "out")
    })
}

/// `phi2 ∘ phi1`: `phi1` is applied first.
///
/// # Safety
/// Both handles must be valid, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mk_compose(
    phi2: *const MkMorphism,
    phi1: *const MkMorphism,
    out: *mut *mut MkMorphism,
) -> MkStatus {
    guard(|| {
        let (phi2, phi1) = (handle(phi2, "phi2")?, handle(phi1, "phi1")?);
        put(out, boxed(compose(&phi2.0, &phi1.0)?), "out")
    })
}

/// # Safety
/// `m` must be a valid handle, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mk_reverse(m: *const MkMorphism, out: *mut *mut MkMorphism) -> MkStatus {
    guard(|| {
        let m = handle(m, "morphism")?;
        put(out, boxed(m.0.reversed()), "out")
    })
}

/// Whether `phi = psi2 ∘ mu ∘ psi1` for some `psi1`, `psi2`. When found and
/// `witness_json` is not null, the witness is written there as JSON,
/// otherwise it is set to null.
///
/// # Safety
/// Both handles must be valid, `found` a valid pointer, `witness_json` null
/// or a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mk_is_factor(
    mu: *const MkMorphism,
    phi: *const MkMorphism,
    found: *mut bool,
    witness_json: *mut *mut c_char,
) -> MkStatus {
    guard(|| {
        let (mu, phi) = (handle(mu, "mu")?, handle(phi, "phi")?);
        let w = is_factor(&mu.0, &phi.0, Caps::default())?;
        put(found, w.is_some(), "found")?;
        if !witness_json.is_null() {
            let s = match &w {
                Some(w) => json(w)?,
                None => ptr::null_mut(),
            };
            witness_json.write(s);
        }
        Ok(())
    })
}

/// Solves `phi = mu ∘ psi1`; `psi1` is set to null when no split exists.
///
/// # Safety
/// Both handles must be valid, `psi1` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mk_is_left_factor(
    mu: *const MkMorphism,
    phi: *const MkMorphism,
    psi1: *mut *mut MkMorphism,
) -> MkStatus {
    guard(|| {
        let (mu, phi) = (handle(mu, "mu")?, handle(phi, "phi")?);
        let split = is_left_factor(&mu.0, &phi.0)?;
        put(psi1, split.map_or(ptr::null_mut(), |s| boxed(s.psi1)), "psi1")
    })
}

/// Uniqueness report as JSON.
///
/// # Safety
/// `m` must be a valid handle, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mk_uniqueness_json(m: *const MkMorphism, out: *mut *mut c_char) -> MkStatus {
    guard(|| {
        let m = handle(m, "morphism")?;
        put(out, json(&uniqueness_report(&m.0, Caps::default())?)?, "out")
    })
}

/// Parses rows separated by `;`, entries by spaces: `8 4; 10 6`.
///
/// # Safety
/// `text_in` must be a NUL-terminated string, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mk_matrix_parse(text_in: *const c_char, out: *mut *mut MkMatrix) -> MkStatus {
    guard(|| {
        let p: IncidenceMatrix = text(text_in, "text")?.parse()?;
        put(out, Box::into_raw(Box::new(MkMatrix(p))), "out")
    })
}

/// # Safety
/// `p` must be null or a handle from this library, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn mk_matrix_free(p: *mut MkMatrix) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Incidence matrix of a Parikh-positive endomorphism.
///
/// # Safety
/// `m` must be a valid handle, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mk_incidence(m: *const MkMorphism, out: *mut *mut MkMatrix) -> MkStatus {
    guard(|| {
        let m = handle(m, "morphism")?;
        let p = morphkit::incidence::incidence(&m.0)?;
        put(out, Box::into_raw(Box::new(MkMatrix(p))), "out")
    })
}

/// Rule-based verdict. `details_json`, when not null, receives the rule and
/// any witnesses as JSON.
///
/// # Safety
/// `p` must be a valid handle, `verdict` a valid pointer, `details_json`
/// null or a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mk_classify_symbolic(
    p: *const MkMatrix,
    verdict: *mut MkVerdict,
    details_json: *mut *mut c_char,
) -> MkStatus {
    guard(|| {
        let p = handle(p, "matrix")?;
        let v = classify_symbolic(&p.0);
        put(verdict, v.kind.into(), "verdict")?;
        if !details_json.is_null() {
            details_json.write(json(&v)?);
        }
        Ok(())
    })
}
