//! C ABI for the `heegaard` library.
//!
//! Manifolds live behind the opaque [`HgManifold`] handle. Every function
//! returns an [`HgStatus`]; on failure a description is available from
//! [`hg_last_error_message`] on the same thread. Strings handed out by the
//! library are NUL-terminated UTF-8 JSON and must be released with
//! [`hg_string_free`]. No function unwinds across the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::atomic::{AtomicU64, Ordering};

use heegaard::cli::report::{self, HomologyReport, PartitionReport, Theory, WilsonReport};
use heegaard::cli::{LinkFile, ManifoldFile, DEFAULT_MAX_TORSION};
use heegaard::exactalg::IntMatrix;
use heegaard::gluing::{self, GluingData};
use heegaard::homology;
use heegaard::invariants;
use num_bigint::BigInt;

/// Opaque handle to validated gluing data.
pub struct HgManifold {
    gd: GluingData,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidManifold = 4,
    InvalidArgument = 5,
    TorsionTooLarge = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HgTheory {
    ChernSimons = 0,
    Bf = 1,
}

impl From<HgTheory> for Theory {
    fn from(t: HgTheory) -> Self {
        match t {
            HgTheory::ChernSimons => Theory::Cs,
            HgTheory::Bf => Theory::Bf,
        }
    }
}

static MAX_TORSION: AtomicU64 = AtomicU64::new(DEFAULT_MAX_TORSION);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

struct Error(HgStatus, String);

type Res<T> = Result<T, Error>;

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', "?")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn guard(body: impl FnOnce() -> Res<()>) -> HgStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_last_error("");
            HgStatus::Ok
        }
        Ok(Err(Error(status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(&format!("internal error: {msg}"));
            HgStatus::Panic
        }
    }
}

fn nonnull<'a, T>(p: *const T, what: &str) -> Res<&'a T> {
    // SAFETY: callers pass either NULL or a pointer obtained from this library.
    unsafe { p.as_ref() }.ok_or_else(|| Error(HgStatus::NullPointer, format!("{what} is NULL")))
}

fn c_str<'a>(p: *const c_char, what: &str) -> Res<&'a str> {
    if p.is_null() {
        return Err(Error(HgStatus::NullPointer, format!("{what} is NULL")));
    }
    // SAFETY: non-null and NUL-terminated per the API contract.
    unsafe { CStr::from_ptr(p) }
        .to_str()
        .map_err(|e| Error(HgStatus::InvalidUtf8, format!("{what}: {e}")))
}

fn write_out<T>(out: *mut T, value: T, what: &str) -> Res<()> {
    if out.is_null() {
        return Err(Error(HgStatus::NullPointer, format!("{what} is NULL")));
    }
    // SAFETY: non-null, and the caller provides writable storage.
    unsafe { out.write(value) };
    Ok(())
}

fn give_manifold(out: *mut *mut HgManifold, gd: GluingData) -> Res<()> {
    if out.is_null() {
        return Err(Error(HgStatus::NullPointer, "out is NULL".into()));
    }
    let handle = Box::into_raw(Box::new(HgManifold { gd }));
    // SAFETY: checked non-null above.
    unsafe { out.write(handle) };
    Ok(())
}

fn give_json<T: serde::Serialize>(out: *mut *mut c_char, value: &T) -> Res<()> {
    let text = serde_json::to_string(value).expect("report types always serialize");
    let c = CString::new(text).expect("JSON has no NUL bytes");
    if out.is_null() {
        return Err(Error(HgStatus::NullPointer, "out is NULL".into()));
    }
    // SAFETY: checked non-null above.
    unsafe { out.write(c.into_raw()) };
    Ok(())
}

fn level(k: u64) -> Res<u64> {
    if k == 0 {
        return Err(Error(
            HgStatus::InvalidArgument,
            "level must be at least 1".into(),
        ));
    }
    Ok(k)
}

fn check_cap(theory: Theory, order: &BigInt) -> Res<()> {
    let cap = BigInt::from(MAX_TORSION.load(Ordering::Relaxed));
    let work = match theory {
        Theory::Cs => order.clone(),
        Theory::Bf => order * order,
    };
    if work > cap {
        return Err(Error(
            HgStatus::TorsionTooLarge,
            format!("torsion order {order} is too large: {work} terms exceed the limit {cap}"),
        ));
    }
    Ok(())
}

fn invalid(e: impl std::fmt::Display) -> Error {
    Error(HgStatus::InvalidManifold, e.to_string())
}

fn bad_arg(e: impl std::fmt::Display) -> Error {
    Error(HgStatus::InvalidArgument, e.to_string())
}

/// Parses a manifold description (explicit blocks or a construction).
///
/// # Safety
///
/// `json` must be NULL or a NUL-terminated string; `out` must be NULL or
/// writable.
#[no_mangle]
pub unsafe extern "C" fn hg_manifold_from_json(
    json: *const c_char,
    out: *mut *mut HgManifold,
) -> HgStatus {
    guard(|| {
        let text = c_str(json, "json")?;
        let file =
            ManifoldFile::from_json(text).map_err(|e| Error(HgStatus::Parse, e.to_string()))?;
        give_manifold(out, file.resolve().map_err(invalid)?)
    })
}

/// The lens space `L(p, q)`.
///
/// # Safety
///
/// `out` must be NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn hg_manifold_lens(p: i64, q: i64, out: *mut *mut HgManifold) -> HgStatus {
    guard(|| give_manifold(out, gluing::lens(p, q).map_err(invalid)?))
}

/// Builds a manifold from four row-major `genus × genus` blocks.
///
/// # Safety
///
/// Each block pointer must be NULL or point to `genus * genus` readable
/// values; `out` must be NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn hg_manifold_from_blocks(
    genus: usize,
    r: *const i64,
    p: *const i64,
    s: *const i64,
    q: *const i64,
    out: *mut *mut HgManifold,
) -> HgStatus {
    guard(|| {
        let len = genus
            .checked_mul(genus)
            .ok_or_else(|| bad_arg("genus is too large"))?;
        let block = |ptr: *const i64, name: &str| -> Res<IntMatrix> {
            if ptr.is_null() {
                return Err(Error(
                    HgStatus::NullPointer,
                    format!("block {name} is NULL"),
                ));
            }
            // SAFETY: the caller provides genus² readable entries.
            let data = unsafe { std::slice::from_raw_parts(ptr, len) };
            IntMatrix::new(
                genus,
                genus,
                data.iter().copied().map(BigInt::from).collect(),
            )
            .map_err(bad_arg)
        };
        let gd = gluing::validate(
            genus,
            block(r, "R")?,
            block(p, "P")?,
            block(s, "S")?,
            block(q, "Q")?,
        )
        .map_err(invalid)?;
        give_manifold(out, gd)
    })
}

/// Releases a handle. NULL is ignored.
///
/// # Safety
///
/// `m` must be NULL or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn hg_manifold_free(m: *mut HgManifold) {
    if !m.is_null() {
        // SAFETY: produced by Box::into_raw in this library and freed once.
        drop(unsafe { Box::from_raw(m) });
    }
}

/// Genus of the splitting, or 0 for NULL.
///
/// # Safety
///
/// `m` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hg_manifold_genus(m: *const HgManifold) -> usize {
    // SAFETY: NULL or a live handle.
    unsafe { m.as_ref() }.map_or(0, |m| m.gd.genus())
}

/// `{"free_rank":…,"invariant_factors":[…],"h2_rank":…}`.
///
/// # Safety
///
/// `m` must be NULL or a live handle; `out` must be NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn hg_homology_json(m: *const HgManifold, out: *mut *mut c_char) -> HgStatus {
    guard(|| give_json(out, &HomologyReport::of(&nonnull(m, "manifold")?.gd)))
}

/// Linking-form matrix of `"a/b"` strings.
///
/// # Safety
///
/// `m` must be NULL or a live handle; `out` must be NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn hg_linking_form_json(
    m: *const HgManifold,
    out: *mut *mut c_char,
) -> HgStatus {
    guard(|| {
        let gd = &nonnull(m, "manifold")?.gd;
        let h = homology::h1(gd);
        give_json(out, &report::linking_form_report(gd, &h))
    })
}

fn partition(gd: &GluingData, theory: HgTheory, k: u64) -> Res<PartitionReport> {
    let k = level(k)?;
    let theory = Theory::from(theory);
    let order = homology::h1(gd).torsion_order();
    check_cap(theory, &order)?;
    let sum = match theory {
        Theory::Cs => invariants::z_cs(gd, k),
        Theory::Bf => invariants::z_bf(gd, k),
    }
    .map_err(bad_arg)?;
    Ok(PartitionReport::new(theory, k, &order, &sum))
}

/// Numerical value of a partition function, computed from its exact form.
///
/// # Safety
///
/// `m` must be NULL or a live handle; `re` and `im` must be NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn hg_partition(
    m: *const HgManifold,
    theory: HgTheory,
    level: u64,
    re: *mut f64,
    im: *mut f64,
) -> HgStatus {
    guard(|| {
        let r = partition(&nonnull(m, "manifold")?.gd, theory, level)?;
        write_out(re, r.value.re, "re")?;
        write_out(im, r.value.im, "im")
    })
}

/// Exact partition function: raw terms, reduced terms and value.
///
/// # Safety
///
/// `m` must be NULL or a live handle; `out` must be NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn hg_partition_json(
    m: *const HgManifold,
    theory: HgTheory,
    level: u64,
    out: *mut *mut c_char,
) -> HgStatus {
    guard(|| give_json(out, &partition(&nonnull(m, "manifold")?.gd, theory, level)?))
}

/// Wilson-loop expectation value. Links are JSON link descriptions;
/// `link2_json` may be NULL for Chern–Simons and is required for BF.
///
/// # Safety
///
/// `m` must be NULL or a live handle; the link strings must be NULL or
/// NUL-terminated; `out` must be NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn hg_wilson_json(
    m: *const HgManifold,
    theory: HgTheory,
    level: u64,
    link_json: *const c_char,
    link2_json: *const c_char,
    mutual_linking: i64,
    out: *mut *mut c_char,
) -> HgStatus {
    guard(|| {
        let gd = &nonnull(m, "manifold")?.gd;
        let k = self::level(level)?;
        let parse = |p: *const c_char, what: &str| -> Res<_> {
            LinkFile::from_json(c_str(p, what)?)
                .map(|l| l.to_presentation())
                .map_err(|e| Error(HgStatus::Parse, format!("{what}: {e}")))
        };
        let l1 = parse(link_json, "link_json")?;
        let th = Theory::from(theory);
        check_cap(th, &homology::h1(gd).torsion_order())?;
        let result = match th {
            Theory::Cs => invariants::wilson_cs(gd, k, &l1),
            Theory::Bf => {
                let l2 = parse(link2_json, "link2_json")?;
                invariants::wilson_bf(gd, k, &l1, &l2, &BigInt::from(mutual_linking))
            }
        }
        .map_err(bad_arg)?;
        give_json(out, &WilsonReport::new(th, k, &result))
    })
}

/// Largest number of torsion terms a sum may visit (`|T|` for Chern–Simons,
/// `|T|²` for BF). Applies process-wide. Defaults to 1000000.
#[no_mangle]
pub extern "C" fn hg_set_max_torsion(limit: u64) {
    MAX_TORSION.store(limit, Ordering::Relaxed);
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
///
/// `s` must be NULL or a string from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn hg_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: produced by CString::into_raw in this library.
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Message for the most recent failure on this thread, or an empty string.
/// Valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn hg_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}
