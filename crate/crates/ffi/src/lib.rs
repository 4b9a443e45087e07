//! C ABI for divfree-core.
//!
//! Varieties and volume forms are opaque handles. Every call returns a
//! [`DfStatus`]; results are written through out-pointers, strings are
//! NUL-terminated UTF-8 JSON owned by the caller and released with
//! [`df_string_free`]. The message of the last failure on the calling thread
//! is available from [`df_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use divfree_core::cohomology::{cohomology, TruncationParams};
use divfree_core::descriptor::Descriptor;
use divfree_core::fields::{make_catalog_volume, VectorField, VolumeForm};
use divfree_core::liealg::{default_lie_params, surface_theorem};
use divfree_core::rings::Ring;
use divfree_core::slspan::spanning_set_report;
use divfree_core::Error;

/// Status codes; the nonzero values match the exit codes of the CLI where
/// they overlap.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DfStatus {
    Ok = 0,
    /// Null pointer or invalid UTF-8.
    InvalidArgument = 1,
    /// Descriptor, parse or tangency error.
    Validation = 2,
    /// Internal consistency check failed.
    Inconsistent = 3,
    ResourceCap = 4,
    Panic = 5,
}

/// Opaque coordinate ring of a catalog variety.
pub struct DfRing {
    ring: Ring,
}

/// Opaque certified volume form.
pub struct DfVolume {
    vol: VolumeForm,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> DfStatus {
    match e {
        Error::ResourceCap(_) => DfStatus::ResourceCap,
        Error::Inconsistent(_) | Error::BrokenCertificate(_) | Error::CertificateSearch(_) | Error::WindowMismatch(_) => {
            DfStatus::Inconsistent
        }
        _ => DfStatus::Validation,
    }
}

enum Failure {
    Arg(&'static str),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> DfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => DfStatus::Ok,
        Ok(Err(Failure::Arg(m))) => {
            set_error(m);
            DfStatus::InvalidArgument
        }
        Ok(Err(Failure::Core(e))) => {
            set_error(&e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("panic inside divfree");
            DfStatus::Panic
        }
    }
}

unsafe fn input<'a>(s: *const c_char) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(Failure::Arg("null string argument"));
    }
    CStr::from_ptr(s).to_str().map_err(|_| Failure::Arg("argument is not UTF-8"))
}

unsafe fn write_json(out: *mut *mut c_char, value: &serde_json::Value) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Arg("null out-pointer"));
    }
    let c = CString::new(value.to_string()).map_err(|_| Failure::Arg("output contains NUL"))?;
    *out = c.into_raw();
    Ok(())
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().ok_or(Failure::Arg("null handle"))
}

/// Message of the last failed call on this thread; valid until the next call.
#[no_mangle]
pub extern "C" fn df_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Version string of the library, statically allocated.
#[no_mangle]
pub extern "C" fn df_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn df_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a ring from a JSON descriptor
/// `{"kind", "n", "p_coefficients", "lines"}`.
///
/// # Safety
/// `descriptor` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn df_ring_new(descriptor: *const c_char, out: *mut *mut DfRing) -> DfStatus {
    guard(|| {
        if out.is_null() {
            return Err(Failure::Arg("null out-pointer"));
        }
        let ring = Descriptor::from_json_str(input(descriptor)?)?.ring()?;
        *out = Box::into_raw(Box::new(DfRing { ring }));
        Ok(())
    })
}

/// # Safety
/// `ring` must come from [`df_ring_new`] or be null.
#[no_mangle]
pub unsafe extern "C" fn df_ring_free(ring: *mut DfRing) {
    if !ring.is_null() {
        drop(Box::from_raw(ring));
    }
}

/// Truncated cohomology as a JSON report with field `"betti"`.
///
/// # Safety
/// `ring` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn df_cohomology(
    ring: *const DfRing,
    max_degree: i64,
    neg_cap: i32,
    slack: i64,
    out: *mut *mut c_char,
) -> DfStatus {
    guard(|| {
        let r = handle(ring)?;
        if max_degree < 1 || neg_cap < 0 || slack < 0 {
            return Err(Failure::Core(Error::InvalidDescriptor("window must be positive".into())));
        }
        let report = cohomology(&r.ring, &TruncationParams { max_degree, neg_cap, slack })?;
        write_json(out, &report.to_json())
    })
}

/// # Safety
/// `ring` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn df_volume_new(ring: *const DfRing, out: *mut *mut DfVolume) -> DfStatus {
    guard(|| {
        let r = handle(ring)?;
        if out.is_null() {
            return Err(Failure::Arg("null out-pointer"));
        }
        let vol = make_catalog_volume(&r.ring)?;
        *out = Box::into_raw(Box::new(DfVolume { vol }));
        Ok(())
    })
}

/// # Safety
/// `vol` must come from [`df_volume_new`] or be null.
#[no_mangle]
pub unsafe extern "C" fn df_volume_free(vol: *mut DfVolume) {
    if !vol.is_null() {
        drop(Box::from_raw(vol));
    }
}

/// Divergence of a field given as `var=expr;var=expr`, as JSON
/// `{"divergence": "..."}`.
///
/// # Safety
/// `vol` must be a live handle, `field` NUL-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn df_divergence(vol: *const DfVolume, field: *const c_char, out: *mut *mut c_char) -> DfStatus {
    guard(|| {
        let v = handle(vol)?;
        let f = VectorField::parse_spec(v.vol.ring(), input(field)?)?;
        let div = v.vol.divergence(&f)?;
        write_json(out, &serde_json::json!({ "divergence": div.to_string() }))
    })
}

/// Both sides of the quotient formula on a surface at default truncations.
///
/// # Safety
/// `vol` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn df_surface_theorem(vol: *const DfVolume, out: *mut *mut c_char) -> DfStatus {
    guard(|| {
        let v = handle(vol)?;
        let r = surface_theorem(&v.vol, &TruncationParams::default(), &default_lie_params())?;
        write_json(out, &serde_json::to_value(&r).map_err(Error::from)?)
    })
}

/// Spanning set of Λ²(sl_n) with rank and verdict, as JSON.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn df_sl_span(n: u32, out: *mut *mut c_char) -> DfStatus {
    guard(|| {
        if !(2..=6).contains(&n) {
            return Err(Failure::Core(Error::InvalidDescriptor("n must lie in 2..=6".into())));
        }
        let r = spanning_set_report(n as usize)?;
        write_json(out, &serde_json::to_value(&r).map_err(Error::from)?)
    })
}
