//! C ABI over the `kisslat` core crate.
//!
//! Every fallible function returns a [`KlStatus`]; on failure the message is
//! available from [`kl_last_error_message`] on the same thread. Handles are
//! opaque and must be released with their `*_free` function. Strings returned
//! through `char **` out-parameters are owned by the caller and must be
//! released with [`kl_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use kisslat::asymptotics::BoundsSnapshot;
use kisslat::binary_codes::BinaryCode;
use kisslat::certify::{self, CertifyOptions, Format};
use kisslat::lattice::{self, EnumerationOptions, LatticeBasis};
use kisslat::Error;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Field = 4,
    RankDeficient = 5,
    Guard = 6,
    SearchExhausted = 7,
    InvalidCode = 8,
    Mismatch = 9,
    Domain = 10,
    Precondition = 11,
    UnknownFormat = 12,
    BufferTooSmall = 13,
    Panic = 14,
}

/// Opaque binary code.
pub struct KlCode(BinaryCode);

/// Opaque lattice basis.
pub struct KlLattice(LatticeBasis);

/// Short-vector counts up to a norm cap. `min_norm` is 0 when no nonzero
/// vector lies within the cap.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct KlShortVectors {
    pub min_norm: u64,
    pub kissing: u64,
}

/// Constants of the asymptotic bound.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct KlBoundsConstants {
    pub e3_half: f64,
    pub kissing_exponent_constant: f64,
    pub rho0_q64: f64,
    pub delta0: f64,
    pub e3_zero_low: f64,
    pub e3_zero_high: f64,
    pub suggested_c0: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> KlStatus {
    match e {
        Error::Parse { .. } => KlStatus::Parse,
        Error::Field(_) => KlStatus::Field,
        Error::RankDeficient { .. } => KlStatus::RankDeficient,
        Error::Guard { .. } => KlStatus::Guard,
        Error::SearchExhausted { .. } => KlStatus::SearchExhausted,
        Error::InvalidCode(_) => KlStatus::InvalidCode,
        Error::Mismatch(_) => KlStatus::Mismatch,
        Error::Domain(_) => KlStatus::Domain,
        Error::Precondition(_) => KlStatus::Precondition,
        Error::UnknownFormat(_) => KlStatus::UnknownFormat,
        Error::Stage { source, .. } => status_of(source),
    }
}

fn fail(status: KlStatus, message: &str) -> KlStatus {
    set_error(message);
    status
}

fn guard(f: impl FnOnce() -> Result<(), KlStatus>) -> KlStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            KlStatus::Ok
        }
        Ok(Err(status)) => status,
        Err(_) => fail(KlStatus::Panic, "internal panic"),
    }
}

fn core<T>(r: kisslat::Result<T>) -> Result<T, KlStatus> {
    r.map_err(|e| fail(status_of(&e), &e.to_string()))
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, KlStatus> {
    if p.is_null() {
        return Err(fail(KlStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(KlStatus::InvalidUtf8, "string argument is not UTF-8"))
}

unsafe fn ref_arg<'a, T>(p: *const T) -> Result<&'a T, KlStatus> {
    p.as_ref()
        .ok_or_else(|| fail(KlStatus::NullPointer, "null handle"))
}

unsafe fn out_arg<'a, T>(p: *mut T) -> Result<&'a mut T, KlStatus> {
    p.as_mut()
        .ok_or_else(|| fail(KlStatus::NullPointer, "null output pointer"))
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

/// Message of the last failed call on this thread; empty after a success.
/// Valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn kl_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn kl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must be null or a string returned by this library, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn kl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a code in the `binary-code n=<n> k=<k>` text format.
///
/// # Safety
/// `text` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kl_code_parse(text: *const c_char, out: *mut *mut KlCode) -> KlStatus {
    guard(|| {
        let out = out_arg(out)?;
        let code = core(BinaryCode::parse(str_arg(text)?))?;
        *out = Box::into_raw(Box::new(KlCode(code)));
        Ok(())
    })
}

/// # Safety
/// `code` must be null or a handle from [`kl_code_parse`], freed at most once.
#[no_mangle]
pub unsafe extern "C" fn kl_code_free(code: *mut KlCode) {
    if !code.is_null() {
        drop(Box::from_raw(code));
    }
}

/// Length n; 0 for a null handle.
///
/// # Safety
/// `code` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn kl_code_length(code: *const KlCode) -> usize {
    code.as_ref().map_or(0, |c| c.0.n())
}

/// Dimension k; 0 for a null handle.
///
/// # Safety
/// `code` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn kl_code_dimension(code: *const KlCode) -> usize {
    code.as_ref().map_or(0, |c| c.0.k())
}

/// # Safety
/// `code` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kl_code_is_self_orthogonal(
    code: *const KlCode,
    out: *mut bool,
) -> KlStatus {
    guard(|| {
        let out = out_arg(out)?;
        *out = ref_arg(code)?.0.is_self_orthogonal();
        Ok(())
    })
}

/// Writes A_0..A_n into `counts`, which must hold at least n + 1 entries.
///
/// # Safety
/// `code` must be a live handle and `counts` must point to `len` writable
/// `uint64_t` values.
#[no_mangle]
pub unsafe extern "C" fn kl_code_weight_distribution(
    code: *const KlCode,
    counts: *mut u64,
    len: usize,
) -> KlStatus {
    guard(|| {
        let code = &ref_arg(code)?.0;
        if counts.is_null() {
            return Err(fail(KlStatus::NullPointer, "null output buffer"));
        }
        if len < code.n() + 1 {
            return Err(fail(KlStatus::BufferTooSmall, "buffer shorter than n + 1"));
        }
        let wd = core(code.weight_distribution())?;
        let out = std::slice::from_raw_parts_mut(counts, len);
        out.fill(0);
        out[..wd.counts().len()].copy_from_slice(wd.counts());
        Ok(())
    })
}

/// Hermite basis of the span lattice of `code`.
///
/// # Safety
/// `code` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kl_lattice_build(
    code: *const KlCode,
    out: *mut *mut KlLattice,
) -> KlStatus {
    guard(|| {
        let out = out_arg(out)?;
        let basis = core(lattice::build_span_basis(&ref_arg(code)?.0))?;
        *out = Box::into_raw(Box::new(KlLattice(basis)));
        Ok(())
    })
}

/// Parses a basis in the `lattice n=<n>` text format.
///
/// # Safety
/// `text` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kl_lattice_parse(
    text: *const c_char,
    out: *mut *mut KlLattice,
) -> KlStatus {
    guard(|| {
        let out = out_arg(out)?;
        let basis = core(LatticeBasis::parse(str_arg(text)?))?;
        *out = Box::into_raw(Box::new(KlLattice(basis)));
        Ok(())
    })
}

/// # Safety
/// `lattice` must be null or a handle from this library, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn kl_lattice_free(lattice: *mut KlLattice) {
    if !lattice.is_null() {
        drop(Box::from_raw(lattice));
    }
}

/// Dimension; 0 for a null handle.
///
/// # Safety
/// `lattice` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn kl_lattice_dimension(lattice: *const KlLattice) -> usize {
    lattice.as_ref().map_or(0, |l| l.0.n())
}

/// Text form of the basis.
///
/// # Safety
/// `lattice` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kl_lattice_to_text(
    lattice: *const KlLattice,
    out: *mut *mut c_char,
) -> KlStatus {
    guard(|| {
        let out = out_arg(out)?;
        *out = into_c_string(ref_arg(lattice)?.0.to_text());
        Ok(())
    })
}

/// Membership of the integer vector `x` of length `len`.
///
/// # Safety
/// `lattice` must be a live handle, `x` must point to `len` readable
/// `int64_t` values and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn kl_lattice_contains(
    lattice: *const KlLattice,
    x: *const i64,
    len: usize,
    out: *mut bool,
) -> KlStatus {
    guard(|| {
        let basis = &ref_arg(lattice)?.0;
        let out = out_arg(out)?;
        if x.is_null() {
            return Err(fail(KlStatus::NullPointer, "null vector"));
        }
        if len != basis.n() {
            return Err(fail(
                KlStatus::Mismatch,
                "vector length differs from the dimension",
            ));
        }
        *out = lattice::membership_span(basis, std::slice::from_raw_parts(x, len));
        Ok(())
    })
}

/// Counts nonzero vectors of norm at most `cap`.
///
/// # Safety
/// `lattice` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kl_lattice_short_vectors(
    lattice: *const KlLattice,
    cap: u64,
    workers: usize,
    out: *mut KlShortVectors,
) -> KlStatus {
    guard(|| {
        let out = out_arg(out)?;
        let report = core(lattice::enumerate_short(
            &ref_arg(lattice)?.0,
            cap,
            EnumerationOptions {
                workers: workers.max(1),
                allow_large: false,
            },
        ))?;
        *out = KlShortVectors {
            min_norm: report.min_norm.unwrap_or(0),
            kissing: report.kissing,
        };
        Ok(())
    })
}

/// Runs the certification pipeline on a code text. `cap` = 0 selects the
/// default cap; `format` is `"json"` or `"csv-summary"`.
///
/// # Safety
/// `code_text` and `format` must be valid NUL-terminated strings and `out` a
/// valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kl_certify(
    code_text: *const c_char,
    seed: u64,
    cap: u64,
    format: *const c_char,
    out: *mut *mut c_char,
) -> KlStatus {
    guard(|| {
        let out = out_arg(out)?;
        let text = str_arg(code_text)?;
        let format: Format = core(str_arg(format)?.parse())?;
        let options = CertifyOptions {
            seed,
            cap: (cap != 0).then_some(cap),
            ..CertifyOptions::default()
        };
        let cert = core(certify::certify(text, options))?;
        *out = into_c_string(certify::emit(&cert, format));
        Ok(())
    })
}

/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kl_bounds_constants(out: *mut KlBoundsConstants) -> KlStatus {
    guard(|| {
        let out = out_arg(out)?;
        let s = BoundsSnapshot::compute();
        *out = KlBoundsConstants {
            e3_half: s.e3_half,
            kissing_exponent_constant: s.kissing_exponent_constant,
            rho0_q64: s.rho0_q64,
            delta0: s.delta0,
            e3_zero_low: s.e3_zero_low,
            e3_zero_high: s.e3_zero_high,
            suggested_c0: s.suggested_c0,
        };
        Ok(())
    })
}
