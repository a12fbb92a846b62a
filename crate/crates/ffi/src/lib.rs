//! C ABI for fcakit.
//!
//! Contexts, lattices and exploration sessions are opaque handles created
//! by `fca_*_new`/`fca_*_build`/`fca_*_start` style functions and released
//! with the matching `fca_*_free`. Fallible functions return an
//! [`FcaStatus`]; on failure a message is available from
//! [`fca_last_error_message`] on the same thread. Strings returned through
//! out-parameters are owned by the caller and released with
//! [`fca_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use fcakit::exploration::{ExplorationError, ExplorationSession};
use fcakit::implications::{listing_order, render_implication, render_listing};
use fcakit::layout::build_scene;
use fcakit::{parse_cxt, stem_base, write_cxt, BitSet, ConceptLattice, FormalContext, ImplicationReport, LatticeError};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FcaStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    IoError = 4,
    OutOfRange = 5,
    InvalidArgument = 6,
    TooLarge = 7,
    NoQuestion = 8,
    InvalidCounterexample = 9,
    NotFinished = 10,
    Panic = 99,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FcaFormat {
    Dot = 0,
    Svg = 1,
    Json = 2,
}

pub struct FcaContext {
    inner: FormalContext,
}

pub struct FcaLattice {
    inner: ConceptLattice,
}

pub struct FcaExploration {
    inner: ExplorationSession,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(FcaStatus, String);

type Outcome = Result<(), Failure>;

fn fail(status: FcaStatus, message: impl Into<String>) -> Failure {
    Failure(status, message.into())
}

fn set_error(message: Option<String>) {
    LAST_ERROR.with(|e| {
        *e.borrow_mut() = message.map(|m| CString::new(m.replace('\0', " ")).expect("no nul"));
    });
}

/// Runs `f`, records its error message and converts panics.
fn guard(f: impl FnOnce() -> Outcome) -> FcaStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error(None);
            FcaStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_error(Some(message));
            status
        }
        Err(_) => {
            set_error(Some("internal error".into()));
            FcaStatus::Panic
        }
    }
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref()
        .ok_or_else(|| fail(FcaStatus::NullArgument, format!("{what} is null")))
}

unsafe fn borrow_mut<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut()
        .ok_or_else(|| fail(FcaStatus::NullArgument, format!("{what} is null")))
}

unsafe fn c_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(fail(FcaStatus::NullArgument, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(FcaStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn put<T>(out: *mut T, value: T) -> Outcome {
    if out.is_null() {
        return Err(fail(FcaStatus::NullArgument, "output pointer is null"));
    }
    out.write(value);
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Outcome {
    let c = CString::new(s).map_err(|_| fail(FcaStatus::InvalidArgument, "string contains NUL"))?;
    put(out, c.into_raw())
}

unsafe fn put_handle<T>(out: *mut *mut T, value: T) -> Outcome {
    put(out, Box::into_raw(Box::new(value)))
}

/// Message of the last failed call on this thread, or null. Valid until
/// the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn fca_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |m| m.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn fca_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fca_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses CXT text.
///
/// # Safety
/// `data` must point to `len` readable bytes; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fca_context_parse_cxt(
    data: *const u8,
    len: usize,
    out: *mut *mut FcaContext,
) -> FcaStatus {
    guard(|| {
        if data.is_null() && len > 0 {
            return Err(fail(FcaStatus::NullArgument, "data is null"));
        }
        let bytes = if len == 0 { &[][..] } else { std::slice::from_raw_parts(data, len) };
        let inner = parse_cxt(bytes).map_err(|e| fail(FcaStatus::ParseError, e.to_string()))?;
        put_handle(out, FcaContext { inner })
    })
}

/// Reads and parses a CXT file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fca_context_load(path: *const c_char, out: *mut *mut FcaContext) -> FcaStatus {
    guard(|| {
        let path = c_str(path, "path")?;
        let bytes = std::fs::read(path).map_err(|e| fail(FcaStatus::IoError, format!("{path}: {e}")))?;
        let inner = parse_cxt(&bytes).map_err(|e| fail(FcaStatus::ParseError, format!("{path}: {e}")))?;
        put_handle(out, FcaContext { inner })
    })
}

/// # Safety
/// `ctx` must be null or a live context handle.
#[no_mangle]
pub unsafe extern "C" fn fca_context_free(ctx: *mut FcaContext) {
    if !ctx.is_null() {
        drop(Box::from_raw(ctx));
    }
}

/// Number of objects; 0 for a null handle.
///
/// # Safety
/// `ctx` must be null or a live context handle.
#[no_mangle]
pub unsafe extern "C" fn fca_context_object_count(ctx: *const FcaContext) -> usize {
    ctx.as_ref().map_or(0, |c| c.inner.object_count())
}

/// Number of attributes; 0 for a null handle.
///
/// # Safety
/// `ctx` must be null or a live context handle.
#[no_mangle]
pub unsafe extern "C" fn fca_context_attribute_count(ctx: *const FcaContext) -> usize {
    ctx.as_ref().map_or(0, |c| c.inner.attribute_count())
}

/// # Safety
/// `ctx` must be a live context handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fca_context_object_name(
    ctx: *const FcaContext,
    index: usize,
    out: *mut *mut c_char,
) -> FcaStatus {
    guard(|| {
        let ctx = &borrow(ctx, "ctx")?.inner;
        let name = ctx
            .objects()
            .get(index)
            .ok_or_else(|| fail(FcaStatus::OutOfRange, format!("object {index} out of range")))?;
        put_string(out, name.clone())
    })
}

/// # Safety
/// `ctx` must be a live context handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fca_context_attribute_name(
    ctx: *const FcaContext,
    index: usize,
    out: *mut *mut c_char,
) -> FcaStatus {
    guard(|| {
        let ctx = &borrow(ctx, "ctx")?.inner;
        let name = ctx
            .attributes()
            .get(index)
            .ok_or_else(|| fail(FcaStatus::OutOfRange, format!("attribute {index} out of range")))?;
        put_string(out, name.clone())
    })
}

/// # Safety
/// `ctx` must be a live context handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fca_context_has(
    ctx: *const FcaContext,
    object: usize,
    attribute: usize,
    out: *mut bool,
) -> FcaStatus {
    guard(|| {
        let ctx = &borrow(ctx, "ctx")?.inner;
        if object >= ctx.object_count() || attribute >= ctx.attribute_count() {
            return Err(fail(FcaStatus::OutOfRange, "cell out of range"));
        }
        put(out, ctx.has(object, attribute))
    })
}

/// # Safety
/// `ctx` must be a live context handle not used concurrently.
#[no_mangle]
pub unsafe extern "C" fn fca_context_set_incidence(
    ctx: *mut FcaContext,
    object: usize,
    attribute: usize,
    value: bool,
) -> FcaStatus {
    guard(|| {
        let ctx = borrow_mut(ctx, "ctx")?;
        ctx.inner = ctx
            .inner
            .set_incidence(object, attribute, value)
            .map_err(|e| fail(FcaStatus::OutOfRange, e.to_string()))?;
        Ok(())
    })
}

/// Canonical CXT text of the context.
///
/// # Safety
/// `ctx` must be a live context handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fca_context_write_cxt(ctx: *const FcaContext, out: *mut *mut c_char) -> FcaStatus {
    guard(|| put_string(out, write_cxt(&borrow(ctx, "ctx")?.inner)))
}

/// # Safety
/// `ctx` must be a live context handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fca_context_concept_count(ctx: *const FcaContext, out: *mut usize) -> FcaStatus {
    guard(|| put(out, borrow(ctx, "ctx")?.inner.concept_count()))
}

/// The canonical implication base in listing format, one line per
/// implication.
///
/// # Safety
/// `ctx` must be a live context handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fca_context_implications(ctx: *const FcaContext, out: *mut *mut c_char) -> FcaStatus {
    guard(|| {
        let ctx = &borrow(ctx, "ctx")?.inner;
        put_string(out, render_listing(ctx, &stem_base(ctx)))
    })
}

/// Builds the concept lattice, failing with `TooLarge` past
/// `max_concepts` concepts (0 means no limit).
///
/// # Safety
/// `ctx` must be a live context handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fca_lattice_build(
    ctx: *const FcaContext,
    max_concepts: usize,
    out: *mut *mut FcaLattice,
) -> FcaStatus {
    guard(|| {
        let ctx = &borrow(ctx, "ctx")?.inner;
        let limit = if max_concepts == 0 { usize::MAX - 1 } else { max_concepts };
        let inner = ConceptLattice::build_bounded(ctx, limit, &|| false).map_err(|e| match e {
            LatticeError::TooLarge { .. } => fail(FcaStatus::TooLarge, e.to_string()),
            other => fail(FcaStatus::InvalidArgument, other.to_string()),
        })?;
        put_handle(out, FcaLattice { inner })
    })
}

/// # Safety
/// `lattice` must be null or a live lattice handle.
#[no_mangle]
pub unsafe extern "C" fn fca_lattice_free(lattice: *mut FcaLattice) {
    if !lattice.is_null() {
        drop(Box::from_raw(lattice));
    }
}

/// Number of concepts; 0 for a null handle.
///
/// # Safety
/// `lattice` must be null or a live lattice handle.
#[no_mangle]
pub unsafe extern "C" fn fca_lattice_size(lattice: *const FcaLattice) -> usize {
    lattice.as_ref().map_or(0, |l| l.inner.len())
}

/// Number of cover edges; 0 for a null handle.
///
/// # Safety
/// `lattice` must be null or a live lattice handle.
#[no_mangle]
pub unsafe extern "C" fn fca_lattice_cover_count(lattice: *const FcaLattice) -> usize {
    lattice.as_ref().map_or(0, |l| l.inner.covers().len())
}

/// Line diagram as DOT, SVG or JSON.
///
/// # Safety
/// `lattice` must be a live lattice handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fca_lattice_render(
    lattice: *const FcaLattice,
    format: FcaFormat,
    out: *mut *mut c_char,
) -> FcaStatus {
    guard(|| {
        let scene = build_scene(&borrow(lattice, "lattice")?.inner);
        let text = match format {
            FcaFormat::Dot => scene.to_dot(),
            FcaFormat::Svg => scene.to_svg(),
            FcaFormat::Json => scene.to_json(),
        };
        put_string(out, text)
    })
}

/// Starts exploring a copy of `ctx`.
///
/// # Safety
/// `ctx` must be a live context handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fca_exploration_start(ctx: *const FcaContext, out: *mut *mut FcaExploration) -> FcaStatus {
    guard(|| {
        let inner = ExplorationSession::start(&borrow(ctx, "ctx")?.inner);
        put_handle(out, FcaExploration { inner })
    })
}

/// # Safety
/// `session` must be null or a live exploration handle.
#[no_mangle]
pub unsafe extern "C" fn fca_exploration_free(session: *mut FcaExploration) {
    if !session.is_null() {
        drop(Box::from_raw(session));
    }
}

/// True when no question is pending (also for a null handle).
///
/// # Safety
/// `session` must be null or a live exploration handle.
#[no_mangle]
pub unsafe extern "C" fn fca_exploration_is_finished(session: *const FcaExploration) -> bool {
    session.as_ref().is_none_or(|s| s.inner.is_finished())
}

/// The pending question as `premise ==> conclusion`.
///
/// # Safety
/// `session` must be a live exploration handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fca_exploration_question(
    session: *const FcaExploration,
    out: *mut *mut c_char,
) -> FcaStatus {
    guard(|| {
        let s = &borrow(session, "session")?.inner;
        let q = s.question().ok_or_else(|| fail(FcaStatus::NoQuestion, "exploration is finished"))?;
        put_string(out, render_implication(s.context(), q))
    })
}

fn exploration_failure(e: ExplorationError) -> Failure {
    let status = match e {
        ExplorationError::NoPendingQuestion => FcaStatus::NoQuestion,
        ExplorationError::NotFinished => FcaStatus::NotFinished,
        ExplorationError::Context(_) => FcaStatus::InvalidArgument,
        _ => FcaStatus::InvalidCounterexample,
    };
    fail(status, e.to_string())
}

/// Accepts the pending question.
///
/// # Safety
/// `session` must be a live exploration handle not used concurrently.
#[no_mangle]
pub unsafe extern "C" fn fca_exploration_accept(session: *mut FcaExploration) -> FcaStatus {
    guard(|| {
        borrow_mut(session, "session")?
            .inner
            .accept()
            .map_err(exploration_failure)
    })
}

/// Rejects the pending question with a new object named `name` having the
/// attributes at the `count` indices in `attributes`.
///
/// # Safety
/// `session` must be a live exploration handle not used concurrently;
/// `name` a NUL-terminated string; `attributes` must point to `count`
/// readable values.
#[no_mangle]
pub unsafe extern "C" fn fca_exploration_counterexample(
    session: *mut FcaExploration,
    name: *const c_char,
    attributes: *const usize,
    count: usize,
) -> FcaStatus {
    guard(|| {
        let s = &mut borrow_mut(session, "session")?.inner;
        let name = c_str(name, "name")?;
        if attributes.is_null() && count > 0 {
            return Err(fail(FcaStatus::NullArgument, "attributes is null"));
        }
        let indices = if count == 0 { &[][..] } else { std::slice::from_raw_parts(attributes, count) };
        let intent = BitSet::from_indices(s.context().attribute_count(), indices.iter().copied())
            .map_err(|i| fail(FcaStatus::OutOfRange, format!("attribute {i} out of range")))?;
        s.reject_with_counterexample(name, &intent).map_err(exploration_failure)
    })
}

/// Copy of the session's current context.
///
/// # Safety
/// `session` must be a live exploration handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fca_exploration_context(
    session: *const FcaExploration,
    out: *mut *mut FcaContext,
) -> FcaStatus {
    guard(|| {
        let inner = borrow(session, "session")?.inner.context().clone();
        put_handle(out, FcaContext { inner })
    })
}

/// Accepted implications in listing format. Fails with `NotFinished`
/// while a question is pending.
///
/// # Safety
/// `session` must be a live exploration handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fca_exploration_implications(
    session: *const FcaExploration,
    out: *mut *mut c_char,
) -> FcaStatus {
    guard(|| {
        let s = &borrow(session, "session")?.inner;
        let (ctx, mut accepted) = s.result().map_err(exploration_failure)?;
        accepted.sort_by(listing_order);
        let reports: Vec<ImplicationReport> = accepted
            .into_iter()
            .enumerate()
            .map(|(i, imp)| ImplicationReport::new(&ctx, i + 1, imp).expect("attributes of ctx"))
            .collect();
        put_string(out, render_listing(&ctx, &reports))
    })
}
