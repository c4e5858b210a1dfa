//! C ABI for `rsrepair`.
//!
//! Handles are opaque and owned by the caller, who releases them with the
//! matching `_free` function. Every fallible call returns an [`RsrStatus`];
//! on failure [`rsr_last_error`] describes the most recent error on the
//! calling thread. Field elements cross the boundary as `uint16_t`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use rsrepair::cli::random_codeword;
use rsrepair::format::{read_scheme_file, write_scheme_file};
use rsrepair::schemes::{build, BuildParams, ConstructionId};
use rsrepair::{Error, FieldElem, FieldTower, PolyF, RepairScheme};

/// Result of every fallible call. Library failures map one to one onto
/// the library's error names.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RsrStatus {
    Ok = 0,
    NullPointer,
    InvalidUtf8,
    BufferTooSmall,
    Panic,
    NonIrreducibleModulus,
    DegreeNotDividing,
    NoDefaultModulus,
    ElementOutOfRange,
    SingularGram,
    NotInSpan,
    DependentBasis,
    DuplicatePoint,
    AlphaNotInS,
    AlphaStarInS,
    MessageDegreeTooHigh,
    InvalidDimensions,
    ZeroMultiplier,
    LengthMismatch,
    TooLargeToEnumerate,
    DegreeTooHigh,
    RankDeficientAtStar,
    InvalidScheme,
    PointNotInCode,
    NotADualCodeword,
    KTooLarge,
    AMustBeWholeField,
    OddExtension,
    NTooLarge,
    KEqualsN,
    UnknownConstruction,
    LocalityTooSmall,
    SearchSpaceTooLarge,
    NoValidTuple,
    WrongCode,
    Parse,
    Io,
}

impl From<&Error> for RsrStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::NonIrreducibleModulus { .. } => RsrStatus::NonIrreducibleModulus,
            Error::DegreeNotDividing { .. } => RsrStatus::DegreeNotDividing,
            Error::NoDefaultModulus { .. } => RsrStatus::NoDefaultModulus,
            Error::ElementOutOfRange { .. } => RsrStatus::ElementOutOfRange,
            Error::SingularGram => RsrStatus::SingularGram,
            Error::NotInSpan => RsrStatus::NotInSpan,
            Error::DependentBasis => RsrStatus::DependentBasis,
            Error::DuplicatePoint { .. } => RsrStatus::DuplicatePoint,
            Error::AlphaNotInS => RsrStatus::AlphaNotInS,
            Error::AlphaStarInS => RsrStatus::AlphaStarInS,
            Error::MessageDegreeTooHigh { .. } => RsrStatus::MessageDegreeTooHigh,
            Error::InvalidDimensions { .. } => RsrStatus::InvalidDimensions,
            Error::ZeroMultiplier { .. } => RsrStatus::ZeroMultiplier,
            Error::LengthMismatch { .. } => RsrStatus::LengthMismatch,
            Error::TooLargeToEnumerate { .. } => RsrStatus::TooLargeToEnumerate,
            Error::DegreeTooHigh { .. } => RsrStatus::DegreeTooHigh,
            Error::RankDeficientAtStar { .. } => RsrStatus::RankDeficientAtStar,
            Error::InvalidScheme(_) => RsrStatus::InvalidScheme,
            Error::PointNotInCode { .. } => RsrStatus::PointNotInCode,
            Error::NotADualCodeword { .. } => RsrStatus::NotADualCodeword,
            Error::KTooLarge { .. } => RsrStatus::KTooLarge,
            Error::AMustBeWholeField => RsrStatus::AMustBeWholeField,
            Error::OddExtension { .. } => RsrStatus::OddExtension,
            Error::NTooLarge { .. } => RsrStatus::NTooLarge,
            Error::KEqualsN => RsrStatus::KEqualsN,
            Error::UnknownConstruction(_) => RsrStatus::UnknownConstruction,
            Error::LocalityTooSmall { .. } => RsrStatus::LocalityTooSmall,
            Error::SearchSpaceTooLarge { .. } => RsrStatus::SearchSpaceTooLarge,
            Error::NoValidTuple { .. } => RsrStatus::NoValidTuple,
            Error::WrongCode => RsrStatus::WrongCode,
            Error::Parse { .. } => RsrStatus::Parse,
            Error::Io(_) => RsrStatus::Io,
        }
    }
}

/// A field tower GF(2^m) over GF(2^d).
pub struct RsrTower(FieldTower);

/// A validated repair scheme together with its code.
pub struct RsrScheme(RepairScheme);

/// Construction parameters; zero means "not given".
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct RsrBuildParams {
    pub m: u32,
    pub d: u32,
    pub modulus: u32,
    pub n: usize,
    pub k: usize,
}

struct Failure(RsrStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(RsrStatus::from(&e), format!("{}: {e}", e.name()))
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> RsrStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => RsrStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("panic inside rsrepair".into());
            RsrStatus::Panic
        }
    }
}

fn null() -> Failure {
    Failure(RsrStatus::NullPointer, "null pointer argument".into())
}

unsafe fn as_ref<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(null)
}

unsafe fn as_str<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null());
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(RsrStatus::InvalidUtf8, "string is not UTF-8".into()))
}

unsafe fn slice<'a, T>(p: *const T, len: usize) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null());
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn slice_mut<'a, T>(p: *mut T, len: usize) -> Result<&'a mut [T], Failure> {
    if len == 0 {
        return Ok(&mut []);
    }
    if p.is_null() {
        return Err(null());
    }
    Ok(std::slice::from_raw_parts_mut(p, len))
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null());
    }
    out.write(value);
    Ok(())
}

fn elems(values: &[u16], tower: &FieldTower) -> Result<Vec<FieldElem>, Failure> {
    values
        .iter()
        .map(|&v| tower.field().elem(v as u32).map_err(Failure::from))
        .collect()
}

fn copy_out(dst: &mut [u16], src: &[FieldElem]) -> Result<(), Failure> {
    if dst.len() < src.len() {
        return Err(Failure(
            RsrStatus::BufferTooSmall,
            format!("buffer holds {} symbols, need {}", dst.len(), src.len()),
        ));
    }
    for (d, s) in dst.iter_mut().zip(src) {
        *d = s.0;
    }
    Ok(())
}

/// Message of the last failed call on this thread, or NULL. Release it
/// with [`rsr_string_free`].
#[no_mangle]
pub extern "C" fn rsr_last_error() -> *mut c_char {
    LAST_ERROR.with(|e| match e.borrow().as_ref() {
        Some(c) => c.clone().into_raw(),
        None => ptr::null_mut(),
    })
}

/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rsr_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Creates GF(2^m) over GF(2^d). `modulus` 0 selects the built-in one.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn rsr_tower_new(m: u32, d: u32, modulus: u32, out: *mut *mut RsrTower) -> RsrStatus {
    guard(|| {
        let modulus = (modulus != 0).then_some(modulus);
        let tower = FieldTower::new(m, d, modulus)?;
        write(out, Box::into_raw(Box::new(RsrTower(tower))))
    })
}

/// # Safety
/// `tower` must be NULL or a handle from [`rsr_tower_new`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rsr_tower_free(tower: *mut RsrTower) {
    if !tower.is_null() {
        drop(Box::from_raw(tower));
    }
}

/// `a * b` in the tower's field.
///
/// # Safety
/// `tower` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn rsr_tower_mul(tower: *const RsrTower, a: u16, b: u16, out: *mut u16) -> RsrStatus {
    guard(|| {
        let t = &as_ref(tower)?.0;
        let v = elems(&[a, b], t)?;
        write(out, t.field().mul(v[0], v[1]).0)
    })
}

/// Trace of `x` down to the subfield.
///
/// # Safety
/// `tower` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn rsr_tower_trace(tower: *const RsrTower, x: u16, out: *mut u16) -> RsrStatus {
    guard(|| {
        let t = &as_ref(tower)?.0;
        let x = elems(&[x], t)?[0];
        write(out, t.trace(x).0)
    })
}

/// Builds a named construction (`trace`, `two_coset`, `naive`,
/// `hdfs14_10`). `params` may be NULL for `hdfs14_10`.
///
/// # Safety
/// `construction` must be a NUL-terminated string, `params` NULL or valid,
/// and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn rsr_scheme_build(
    construction: *const c_char,
    params: *const RsrBuildParams,
    out: *mut *mut RsrScheme,
) -> RsrStatus {
    guard(|| {
        let id: ConstructionId = as_str(construction)?.parse()?;
        let p = params.as_ref().copied().unwrap_or_default();
        let nz32 = |v: u32| (v != 0).then_some(v);
        let nz = |v: usize| (v != 0).then_some(v);
        let scheme = build(
            id,
            &BuildParams {
                m: nz32(p.m),
                d: nz32(p.d),
                modulus: nz32(p.modulus),
                n: nz(p.n),
                k: nz(p.k),
            },
        )?;
        write(out, Box::into_raw(Box::new(RsrScheme(scheme))))
    })
}

/// Loads and validates a scheme file.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn rsr_scheme_load(path: *const c_char, out: *mut *mut RsrScheme) -> RsrStatus {
    guard(|| {
        let scheme = read_scheme_file(Path::new(as_str(path)?))?;
        write(out, Box::into_raw(Box::new(RsrScheme(scheme))))
    })
}

/// # Safety
/// `scheme` must be a live handle and `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn rsr_scheme_save(scheme: *const RsrScheme, path: *const c_char) -> RsrStatus {
    guard(|| {
        let s = &as_ref(scheme)?.0;
        write_scheme_file(Path::new(as_str(path)?), s)?;
        Ok(())
    })
}

/// # Safety
/// `scheme` must be NULL or a live handle, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rsr_scheme_free(scheme: *mut RsrScheme) {
    if !scheme.is_null() {
        drop(Box::from_raw(scheme));
    }
}

/// Code length `n`, dimension `k`, and tower degrees `m`, `d`. Any output
/// pointer may be NULL.
///
/// # Safety
/// `scheme` must be a live handle; non-NULL outputs must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn rsr_scheme_params(
    scheme: *const RsrScheme,
    n: *mut usize,
    k: *mut usize,
    m: *mut u32,
    d: *mut u32,
) -> RsrStatus {
    guard(|| {
        let code = as_ref(scheme)?.0.code();
        let t = code.tower();
        for (p, v) in [(n, code.n()), (k, code.k())] {
            if !p.is_null() {
                p.write(v);
            }
        }
        for (p, v) in [(m, t.m()), (d, t.d())] {
            if !p.is_null() {
                p.write(v);
            }
        }
        Ok(())
    })
}

/// Validation report as JSON. Release it with [`rsr_string_free`].
///
/// # Safety
/// `scheme` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn rsr_scheme_report_json(scheme: *const RsrScheme, out: *mut *mut c_char) -> RsrStatus {
    guard(|| {
        let report = as_ref(scheme)?.0.validate()?;
        let text = serde_json::to_string(&report).map_err(|e| Failure(RsrStatus::Io, e.to_string()))?;
        let c = CString::new(text).map_err(|e| Failure(RsrStatus::Io, e.to_string()))?;
        write(out, c.into_raw())
    })
}

/// Bits downloaded to repair position `star`.
///
/// # Safety
/// `scheme` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn rsr_scheme_bandwidth_bits(scheme: *const RsrScheme, star: usize, out: *mut usize) -> RsrStatus {
    guard(|| {
        let s = &as_ref(scheme)?.0;
        let bits = s.plan(star)?.subsymbols() * s.tower().d() as usize;
        write(out, bits)
    })
}

/// Encodes `message` (k coefficients, lowest degree first) into
/// `codeword`, which must hold at least n symbols.
///
/// # Safety
/// `message` must hold `message_len` symbols and `codeword` `codeword_len`.
#[no_mangle]
pub unsafe extern "C" fn rsr_scheme_encode(
    scheme: *const RsrScheme,
    message: *const u16,
    message_len: usize,
    codeword: *mut u16,
    codeword_len: usize,
) -> RsrStatus {
    guard(|| {
        let code = as_ref(scheme)?.0.code();
        let msg = elems(slice(message, message_len)?, code.tower())?;
        let word = code.encode(&PolyF::from_coeffs(msg))?;
        copy_out(slice_mut(codeword, codeword_len)?, &word)
    })
}

/// Writes a random codeword determined by `seed`.
///
/// # Safety
/// `codeword` must hold `codeword_len` symbols.
#[no_mangle]
pub unsafe extern "C" fn rsr_scheme_random_codeword(
    scheme: *const RsrScheme,
    seed: u64,
    codeword: *mut u16,
    codeword_len: usize,
) -> RsrStatus {
    guard(|| {
        let word = random_codeword(as_ref(scheme)?.0.code(), seed)?;
        copy_out(slice_mut(codeword, codeword_len)?, &word)
    })
}

/// Rebuilds `codeword[star]` from trace queries to the other positions.
/// The value stored at `star` is never read. `bits` may be NULL.
///
/// # Safety
/// `codeword` must hold `codeword_len` symbols; `symbol` must be valid for
/// writes and `bits` NULL or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn rsr_scheme_repair(
    scheme: *const RsrScheme,
    codeword: *const u16,
    codeword_len: usize,
    star: usize,
    symbol: *mut u16,
    bits: *mut usize,
) -> RsrStatus {
    guard(|| {
        let s = &as_ref(scheme)?.0;
        let word = elems(slice(codeword, codeword_len)?, s.tower())?;
        let tr = s.repair(&word, star)?;
        write(symbol, tr.reconstructed.0)?;
        if !bits.is_null() {
            bits.write(tr.downloaded_bits);
        }
        Ok(())
    })
}
