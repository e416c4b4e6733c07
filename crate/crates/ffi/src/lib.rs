//! C ABI over `hilbert-core`.
//!
//! Conventions:
//! - every fallible function returns a [`HilbStatus`]; details of the last
//!   failure on the calling thread are available from [`hilb_last_error`];
//! - catalogs and surfaces are opaque handles released with their `_free`
//!   function;
//! - strings returned through `char **out` are owned by the caller and must
//!   be released with [`hilb_string_free`];
//! - big integers cross the boundary as decimal strings, structured values
//!   as JSON;
//! - partitions are passed as literals such as `"1,3"` (any order).

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use hilbert_core::decision::{aut_shape, decide};
use hilbert_core::invariants::{euler_char_tuple, hodge_p0_tuple, poincare_polynomial_tuple};
use hilbert_core::partitions::colored_count;
use hilbert_core::{Catalog, Error, Partition, StructuralClass, SurfaceInvariants};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HilbStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Arguments violate the operation's contract (bad partition literal,
    /// partitions of different size, out-of-range index).
    Usage = 3,
    /// Unknown surface, invalid parameters, failed validation, missing
    /// Hodge data, unreadable catalog.
    Data = 4,
    Panic = 5,
}

/// Opaque surface catalog.
pub struct HilbCatalog {
    inner: Catalog,
}

/// Opaque base surface.
pub struct HilbSurface {
    inner: SurfaceInvariants,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

enum Failure {
    Status(HilbStatus, String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn status_of(e: &Error) -> HilbStatus {
    match e {
        Error::Usage(_) | Error::DimensionMismatch { .. } | Error::OutOfRange { .. } => HilbStatus::Usage,
        _ => HilbStatus::Data,
    }
}

fn guard<F>(f: F) -> HilbStatus
where
    F: FnOnce() -> Result<(), Failure>,
{
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error("");
            HilbStatus::Ok
        }
        Ok(Err(Failure::Status(s, msg))) => {
            set_last_error(&msg);
            s
        }
        Ok(Err(Failure::Core(e))) => {
            set_last_error(&e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_last_error("internal panic");
            HilbStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::Status(HilbStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure::Status(HilbStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn ref_arg<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref()
        .ok_or_else(|| Failure::Status(HilbStatus::NullPointer, format!("{what} is null")))
}

fn out_check<T>(out: *mut T) -> Result<(), Failure> {
    if out.is_null() {
        Err(Failure::Status(HilbStatus::NullPointer, "output pointer is null".into()))
    } else {
        Ok(())
    }
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|_| Failure::Status(HilbStatus::Data, "result contains NUL".into()))?;
    *out = c.into_raw();
    Ok(())
}

fn partition(literal: &str) -> Result<Partition, Failure> {
    Ok(Partition::parse_literal(literal)?.0)
}

/// `"g=2,d=3"` → map; empty string → no parameters.
fn params(literal: &str) -> Result<BTreeMap<String, i64>, Failure> {
    let mut m = BTreeMap::new();
    for item in literal.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| Failure::Status(HilbStatus::Usage, format!("expected name=value, got `{item}`")))?;
        let v = v
            .trim()
            .parse()
            .map_err(|_| Failure::Status(HilbStatus::Usage, format!("`{v}` is not an integer")))?;
        m.insert(k.trim().to_string(), v);
    }
    Ok(m)
}

/// Library version, a static string; do not free.
#[no_mangle]
pub extern "C" fn hilb_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message for the most recent failure on this thread (empty after a
/// success). Valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn hilb_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn hilb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// The built-in catalog.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hilb_catalog_builtin(out: *mut *mut HilbCatalog) -> HilbStatus {
    guard(|| {
        out_check(out)?;
        *out = Box::into_raw(Box::new(HilbCatalog {
            inner: Catalog::builtin().clone(),
        }));
        Ok(())
    })
}

/// Loads a catalog file.
///
/// # Safety
/// `path` must be a NUL-terminated string, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hilb_catalog_open(path: *const c_char, out: *mut *mut HilbCatalog) -> HilbStatus {
    guard(|| {
        out_check(out)?;
        let path = str_arg(path, "path")?;
        let inner = Catalog::from_path(Path::new(path))?;
        *out = Box::into_raw(Box::new(HilbCatalog { inner }));
        Ok(())
    })
}

/// # Safety
/// `catalog` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn hilb_catalog_free(catalog: *mut HilbCatalog) {
    if !catalog.is_null() {
        drop(Box::from_raw(catalog));
    }
}

/// Instantiates catalog row `name`; `params` is `"g=2"`-style or null.
///
/// # Safety
/// Pointers must be valid; `params` may be null.
#[no_mangle]
pub unsafe extern "C" fn hilb_catalog_lookup(
    catalog: *const HilbCatalog,
    name: *const c_char,
    params_literal: *const c_char,
    out: *mut *mut HilbSurface,
) -> HilbStatus {
    guard(|| {
        out_check(out)?;
        let catalog = ref_arg(catalog, "catalog")?;
        let name = str_arg(name, "name")?;
        let p = if params_literal.is_null() {
            BTreeMap::new()
        } else {
            params(str_arg(params_literal, "params")?)?
        };
        let inner = catalog.inner.lookup(name, &p)?;
        *out = Box::into_raw(Box::new(HilbSurface { inner }));
        Ok(())
    })
}

/// A generic surface with the given Betti numbers (`χ = 2b0 − 2b1 + b2`).
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hilb_surface_synthetic(b0: u32, b1: u32, b2: u32, out: *mut *mut HilbSurface) -> HilbStatus {
    guard(|| {
        out_check(out)?;
        let inner = SurfaceInvariants::synthetic(b0, b1, b2).validated()?;
        *out = Box::into_raw(Box::new(HilbSurface { inner }));
        Ok(())
    })
}

/// Parses a surface record in catalog syntax (TOML) and validates it.
///
/// # Safety
/// `toml` must be a NUL-terminated string, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hilb_surface_from_toml(toml: *const c_char, out: *mut *mut HilbSurface) -> HilbStatus {
    guard(|| {
        out_check(out)?;
        let inner = SurfaceInvariants::from_toml(str_arg(toml, "toml")?)?.validated()?;
        *out = Box::into_raw(Box::new(HilbSurface { inner }));
        Ok(())
    })
}

/// Switches `surface` to Kummer mode (parts stand for `Kum^{n+1}(A)`).
/// Fails unless the surface has the invariants of an abelian surface.
///
/// # Safety
/// `surface` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn hilb_surface_set_kummer(surface: *mut HilbSurface) -> HilbStatus {
    guard(|| {
        let s = surface
            .as_mut()
            .ok_or_else(|| Failure::Status(HilbStatus::NullPointer, "surface is null".into()))?;
        let mut k = s.inner.clone();
        k.structural_class = StructuralClass::AbelianForKummer;
        s.inner = k.validated()?;
        Ok(())
    })
}

/// # Safety
/// `surface` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn hilb_surface_free(surface: *mut HilbSurface) {
    if !surface.is_null() {
        drop(Box::from_raw(surface));
    }
}

/// The surface record as JSON.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn hilb_surface_json(surface: *const HilbSurface, out: *mut *mut c_char) -> HilbStatus {
    guard(|| {
        out_check(out)?;
        let s = ref_arg(surface, "surface")?;
        write_string(out, serde_json::to_string(&s.inner).expect("surface serializes"))
    })
}

/// `χ(S^[a])` as a decimal string.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn hilb_euler_char(
    surface: *const HilbSurface,
    partition_literal: *const c_char,
    out: *mut *mut c_char,
) -> HilbStatus {
    guard(|| {
        out_check(out)?;
        let s = ref_arg(surface, "surface")?;
        let a = partition(str_arg(partition_literal, "partition")?)?;
        write_string(out, euler_char_tuple(&s.inner, &a).to_string())
    })
}

/// Betti numbers of `S^[a]` as JSON: `{"coefficients": ["1", "0", …]}`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn hilb_poincare_json(
    surface: *const HilbSurface,
    partition_literal: *const c_char,
    out: *mut *mut c_char,
) -> HilbStatus {
    guard(|| {
        out_check(out)?;
        let s = ref_arg(surface, "surface")?;
        let a = partition(str_arg(partition_literal, "partition")?)?;
        let poly = poincare_polynomial_tuple(&s.inner, &a)?;
        write_string(out, serde_json::to_string(&poly).expect("polynomial serializes"))
    })
}

/// `h^{p,0}(S^[a])` as a decimal string.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn hilb_hodge_p0(
    surface: *const HilbSurface,
    partition_literal: *const c_char,
    p: u32,
    out: *mut *mut c_char,
) -> HilbStatus {
    guard(|| {
        out_check(out)?;
        let s = ref_arg(surface, "surface")?;
        let a = partition(str_arg(partition_literal, "partition")?)?;
        write_string(out, hodge_p0_tuple(&s.inner, &a, p)?.to_string())
    })
}

/// The verdict for `S^[a]` vs `S^[b]` as JSON.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn hilb_decide_json(
    surface: *const HilbSurface,
    a_literal: *const c_char,
    b_literal: *const c_char,
    out: *mut *mut c_char,
) -> HilbStatus {
    guard(|| {
        out_check(out)?;
        let s = ref_arg(surface, "surface")?;
        let a = partition(str_arg(a_literal, "a")?)?;
        let b = partition(str_arg(b_literal, "b")?)?;
        write_string(out, serde_json::to_string(&decide(&s.inner, &a, &b)?).expect("verdict serializes"))
    })
}

/// Rendered automorphism-group shape, e.g. `"Aut(S^[2])^2 ⋊ S_2"`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn hilb_aut_shape(partition_literal: *const c_char, out: *mut *mut c_char) -> HilbStatus {
    guard(|| {
        out_check(out)?;
        let a = partition(str_arg(partition_literal, "partition")?)?;
        write_string(out, aut_shape(&a).render())
    })
}

/// `p_k(n)`, the number of k-coloured partitions of `n` (any integer `k`),
/// as a decimal string.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hilb_colored_count(k: i64, n: u32, out: *mut *mut c_char) -> HilbStatus {
    guard(|| {
        out_check(out)?;
        write_string(out, colored_count(k, n).to_string())
    })
}
