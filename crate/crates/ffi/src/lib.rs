//! C interface to `nnrep`.
//!
//! Objects are opaque heap handles released with the matching `*_free`
//! function. Every fallible call returns an [`NnrepStatus`]; on failure the
//! message is available from [`nnrep_last_error`] on the same thread until the
//! next failing call. Strings returned through out-pointers are owned by the
//! caller and must be released with [`nnrep_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use nnrep::cli::{construct, Method};
use nnrep::ptf::{compile_ptf, verify_ptf, SignPolynomial};
use nnrep::representation::classify;
use nnrep::{verify_knn, verify_nn, BooleanFunction, Error, FunctionSpec, Label, NNRepresentation};

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NnrepStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidArgument = 4,
    Tie = 5,
    NotWellDefined = 6,
    Construction = 7,
    ResourceLimit = 8,
    Panic = 9,
}

pub struct NnrepFunction(BooleanFunction);

pub struct NnrepRepresentation(NNRepresentation);

pub struct NnrepPolynomial(SignPolynomial);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> NnrepStatus {
    match e {
        Error::MalformedSpec(..) | Error::InvalidRational(_) | Error::Format(_) => {
            NnrepStatus::Parse
        }
        Error::Tie => NnrepStatus::Tie,
        Error::NotWellDefined => NnrepStatus::NotWellDefined,
        Error::Construction(_) | Error::CompileInvariant(_) | Error::NotApplicable { .. } => {
            NnrepStatus::Construction
        }
        Error::ArityTooLarge { .. } | Error::SearchLimit(_) => NnrepStatus::ResourceLimit,
        _ => NnrepStatus::InvalidArgument,
    }
}

struct Fail(NnrepStatus);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        set_error(e.to_string());
        Fail(status_of(&e))
    }
}

fn guard(body: impl FnOnce() -> Result<(), Fail>) -> NnrepStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => NnrepStatus::Ok,
        Ok(Err(Fail(status))) => status,
        Err(_) => {
            set_error("internal panic");
            NnrepStatus::Panic
        }
    }
}

unsafe fn borrow<'a, T>(p: *const T) -> Result<&'a T, Fail> {
    if p.is_null() {
        set_error("null pointer argument");
        return Err(Fail(NnrepStatus::NullPointer));
    }
    Ok(&*p)
}

unsafe fn out<'a, T>(p: *mut T) -> Result<&'a mut T, Fail> {
    if p.is_null() {
        set_error("null output pointer");
        return Err(Fail(NnrepStatus::NullPointer));
    }
    Ok(&mut *p)
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Fail> {
    let s = CStr::from_ptr(borrow(p)?);
    s.to_str().map_err(|_| {
        set_error("string is not valid UTF-8");
        Fail(NnrepStatus::InvalidUtf8)
    })
}

fn owned_string(s: String) -> *mut c_char {
    // JSON never contains interior NULs.
    CString::new(s).unwrap_or_default().into_raw()
}

/// Message of the most recent failure on this thread. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn nnrep_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be null or a string obtained from this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn nnrep_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a function spec such as `maj:5` or `table:2:8`.
///
/// # Safety
/// `spec` must be a NUL-terminated string and `out_fn` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn nnrep_function_parse(
    spec: *const c_char,
    out_fn: *mut *mut NnrepFunction,
) -> NnrepStatus {
    guard(|| {
        let slot = out(out_fn)?;
        let f = text(spec)?.parse::<FunctionSpec>()?.function();
        *slot = Box::into_raw(Box::new(NnrepFunction(f)));
        Ok(())
    })
}

/// # Safety
/// `f` must be null or a handle from [`nnrep_function_parse`], freed once.
#[no_mangle]
pub unsafe extern "C" fn nnrep_function_free(f: *mut NnrepFunction) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Number of variables, or 0 for a null handle.
///
/// # Safety
/// `f` must be null or a live function handle.
#[no_mangle]
pub unsafe extern "C" fn nnrep_function_arity(f: *const NnrepFunction) -> usize {
    f.as_ref().map_or(0, |f| f.0.arity())
}

/// Value of the function at the input whose bit i is x_{i+1}.
///
/// # Safety
/// `f` must be a live function handle and `value` writable.
#[no_mangle]
pub unsafe extern "C" fn nnrep_function_eval(
    f: *const NnrepFunction,
    input: u32,
    value: *mut bool,
) -> NnrepStatus {
    guard(|| {
        let f = &borrow(f)?.0;
        let slot = out(value)?;
        if f.arity() < 32 && input >> f.arity() != 0 {
            set_error(format!(
                "input {input} out of range for arity {}",
                f.arity()
            ));
            return Err(Fail(NnrepStatus::InvalidArgument));
        }
        *slot = f.eval(input);
        Ok(())
    })
}

/// Builds a representation. `method` is one of `symmetric`, `threshold`,
/// `majority-bnn`, `parity-bnn`, `covering`.
///
/// # Safety
/// `spec` and `method` must be NUL-terminated strings, `out_rep` writable.
#[no_mangle]
pub unsafe extern "C" fn nnrep_construct(
    spec: *const c_char,
    method: *const c_char,
    out_rep: *mut *mut NnrepRepresentation,
) -> NnrepStatus {
    guard(|| {
        let slot = out(out_rep)?;
        let spec = text(spec)?.parse::<FunctionSpec>()?;
        let method = match text(method)? {
            "symmetric" => Method::Symmetric,
            "threshold" => Method::Threshold,
            "majority-bnn" => Method::MajorityBnn,
            "parity-bnn" => Method::ParityBnn,
            "covering" => Method::Covering,
            other => {
                set_error(format!("unknown construction `{other}`"));
                return Err(Fail(NnrepStatus::InvalidArgument));
            }
        };
        let rep = construct(&spec, method)?;
        *slot = Box::into_raw(Box::new(NnrepRepresentation(rep)));
        Ok(())
    })
}

/// # Safety
/// `json` must be a NUL-terminated string and `out_rep` writable.
#[no_mangle]
pub unsafe extern "C" fn nnrep_representation_from_json(
    json: *const c_char,
    out_rep: *mut *mut NnrepRepresentation,
) -> NnrepStatus {
    guard(|| {
        let slot = out(out_rep)?;
        let rep = NNRepresentation::from_json(text(json)?)?;
        *slot = Box::into_raw(Box::new(NnrepRepresentation(rep)));
        Ok(())
    })
}

/// Canonical JSON of a representation; release with [`nnrep_string_free`].
///
/// # Safety
/// `rep` must be a live handle and `out_json` writable.
#[no_mangle]
pub unsafe extern "C" fn nnrep_representation_to_json(
    rep: *const NnrepRepresentation,
    out_json: *mut *mut c_char,
) -> NnrepStatus {
    guard(|| {
        let rep = &borrow(rep)?.0;
        *out(out_json)? = owned_string(rep.to_json());
        Ok(())
    })
}

/// Number of prototypes, or 0 for a null handle.
///
/// # Safety
/// `rep` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn nnrep_representation_size(rep: *const NnrepRepresentation) -> usize {
    rep.as_ref().map_or(0, |r| r.0.size())
}

/// # Safety
/// `rep` must be null or a handle from this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn nnrep_representation_free(rep: *mut NnrepRepresentation) {
    if !rep.is_null() {
        drop(Box::from_raw(rep));
    }
}

/// Checks `rep` against `f` on every input. `k == 0` selects the
/// nearest-neighbor rule; otherwise the k-NN rule.
///
/// # Safety
/// Handles must be live and `ok` writable.
#[no_mangle]
pub unsafe extern "C" fn nnrep_verify(
    f: *const NnrepFunction,
    rep: *const NnrepRepresentation,
    k: usize,
    ok: *mut bool,
) -> NnrepStatus {
    guard(|| {
        let f = &borrow(f)?.0;
        let rep = &borrow(rep)?.0;
        let slot = out(ok)?;
        let report = if k == 0 {
            verify_nn(f, rep)?
        } else {
            verify_knn(f, rep, k)?
        };
        *slot = report.ok;
        Ok(())
    })
}

/// Classifies one Boolean point given as `len` bytes, each 0 or 1. Writes 1
/// for positive and 0 for negative. Ties report [`NnrepStatus::Tie`] or
/// [`NnrepStatus::NotWellDefined`].
///
/// # Safety
/// `bits` must point to `len` readable bytes, `label` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nnrep_classify(
    rep: *const NnrepRepresentation,
    bits: *const u8,
    len: usize,
    k: usize,
    label: *mut i32,
) -> NnrepStatus {
    guard(|| {
        let rep = &borrow(rep)?.0;
        let slot = out(label)?;
        let bits = if len == 0 {
            &[][..]
        } else {
            std::slice::from_raw_parts(borrow(bits)?, len)
        };
        if bits.iter().any(|&b| b > 1) {
            set_error("point coordinates must be 0 or 1");
            return Err(Fail(NnrepStatus::InvalidArgument));
        }
        let a: Vec<bool> = bits.iter().map(|&b| b == 1).collect();
        *slot = match classify(rep, &a, k)? {
            Label::Positive => 1,
            Label::Negative => 0,
        };
        Ok(())
    })
}

/// Compiles a verified representation into a sign polynomial.
///
/// # Safety
/// Handles must be live and `out_poly` writable.
#[no_mangle]
pub unsafe extern "C" fn nnrep_compile_ptf(
    f: *const NnrepFunction,
    rep: *const NnrepRepresentation,
    out_poly: *mut *mut NnrepPolynomial,
) -> NnrepStatus {
    guard(|| {
        let f = &borrow(f)?.0;
        let rep = &borrow(rep)?.0;
        let slot = out(out_poly)?;
        let (poly, _) = compile_ptf(f, rep)?;
        *slot = Box::into_raw(Box::new(NnrepPolynomial(poly)));
        Ok(())
    })
}

/// Checks the polynomial's sign against `f` on every input.
///
/// # Safety
/// Handles must be live and `ok` writable.
#[no_mangle]
pub unsafe extern "C" fn nnrep_polynomial_verify(
    f: *const NnrepFunction,
    poly: *const NnrepPolynomial,
    ok: *mut bool,
) -> NnrepStatus {
    guard(|| {
        let f = &borrow(f)?.0;
        let poly = &borrow(poly)?.0;
        let slot = out(ok)?;
        if f.arity() != poly.n {
            set_error("polynomial and function arities differ");
            return Err(Fail(NnrepStatus::InvalidArgument));
        }
        *slot = verify_ptf(f, poly);
        Ok(())
    })
}

/// Number of monomials, or 0 for a null handle.
///
/// # Safety
/// `poly` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn nnrep_polynomial_term_count(poly: *const NnrepPolynomial) -> usize {
    poly.as_ref().map_or(0, |p| p.0.term_count())
}

/// Canonical JSON of a polynomial; release with [`nnrep_string_free`].
///
/// # Safety
/// `poly` must be a live handle and `out_json` writable.
#[no_mangle]
pub unsafe extern "C" fn nnrep_polynomial_to_json(
    poly: *const NnrepPolynomial,
    out_json: *mut *mut c_char,
) -> NnrepStatus {
    guard(|| {
        let poly = &borrow(poly)?.0;
        *out(out_json)? = owned_string(poly.to_json());
        Ok(())
    })
}

/// # Safety
/// `poly` must be null or a handle from this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn nnrep_polynomial_free(poly: *mut NnrepPolynomial) {
    if !poly.is_null() {
        drop(Box::from_raw(poly));
    }
}
