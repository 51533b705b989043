//! C interface to svgforge.
//!
//! Documents cross the boundary as opaque `SvgfDocument` handles. Every
//! fallible call returns an [`SvgfStatus`]; on failure a message is available
//! from [`svgf_last_error`] until the next failing call on the same thread.
//! Strings returned by the library must be released with [`svgf_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use svgforge::classify::ColorCategory;
use svgforge::rewards::{total_reward, MatchSemantics};
use svgforge::{classify, normalize_document, parse_document, serialize_document, DifficultyLevel, Level, RewardParams};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SvgfStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    NormalizeError = 4,
    SerializeError = 5,
    InvalidArgument = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SvgfColorCategory {
    Monochrome = 0,
    Multicolor = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SvgfLevel {
    MonocolorEasy = 0,
    MonocolorDifficult = 1,
    MulticolorEasy = 2,
    MulticolorDifficult = 3,
    OutOfRange = 4,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SvgfSemantics {
    /// Saturates at beta once the generated count reaches the reference.
    ProseConsistent = 0,
    /// `max(beta, beta * exp(-gamma * (N - N_gt)))` taken literally.
    LiteralFormula = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvgfClassification {
    pub color_category: SvgfColorCategory,
    pub level: SvgfLevel,
    pub command_count: u64,
    pub path_count: u64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvgfReward {
    pub integrity: f64,
    pub match_reward: f64,
    pub total: f64,
    pub n_generated: u64,
    pub n_reference: u64,
}

/// A normalized document.
pub struct SvgfDocument {
    inner: svgforge::Document,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let mut bytes = message.into().into_bytes();
    bytes.retain(|&b| b != 0);
    let c = CString::new(bytes).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: SvgfStatus, message: impl Into<String>) -> SvgfStatus {
    set_error(message);
    status
}

fn guarded(f: impl FnOnce() -> SvgfStatus) -> SvgfStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| fail(SvgfStatus::Panic, "internal panic"))
}

/// # Safety
/// `ptr` is null or a NUL-terminated string.
unsafe fn read_str<'a>(ptr: *const c_char, name: &str) -> Result<&'a str, SvgfStatus> {
    if ptr.is_null() {
        return Err(fail(SvgfStatus::NullArgument, format!("{name} is null")));
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|e| fail(SvgfStatus::InvalidUtf8, format!("{name} is not UTF-8: {e}")))
}

/// Parses and normalizes `svg`, storing a new handle in `*out`.
///
/// # Safety
/// `svg` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn svgf_normalize(svg: *const c_char, out: *mut *mut SvgfDocument) -> SvgfStatus {
    guarded(|| {
        if out.is_null() {
            return fail(SvgfStatus::NullArgument, "out is null");
        }
        *out = ptr::null_mut();
        let text = match read_str(svg, "svg") {
            Ok(t) => t,
            Err(status) => return status,
        };
        let raw = match parse_document(text) {
            Ok((raw, _)) => raw,
            Err(e) => return fail(SvgfStatus::ParseError, e.to_string()),
        };
        match normalize_document(&raw) {
            Ok((doc, _)) => {
                *out = Box::into_raw(Box::new(SvgfDocument { inner: doc }));
                SvgfStatus::Ok
            }
            Err(e) => fail(SvgfStatus::NormalizeError, e.to_string()),
        }
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `doc` must come from [`svgf_normalize`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn svgf_document_free(doc: *mut SvgfDocument) {
    if !doc.is_null() {
        drop(Box::from_raw(doc));
    }
}

/// Canonical SVG text of a document, released with [`svgf_string_free`].
///
/// # Safety
/// `doc` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn svgf_document_serialize(doc: *const SvgfDocument, out: *mut *mut c_char) -> SvgfStatus {
    guarded(|| {
        if doc.is_null() || out.is_null() {
            return fail(SvgfStatus::NullArgument, "doc or out is null");
        }
        *out = ptr::null_mut();
        match serialize_document(&(*doc).inner) {
            Ok(text) => {
                *out = CString::new(text).expect("serialized SVG has no NUL").into_raw();
                SvgfStatus::Ok
            }
            Err(e) => fail(SvgfStatus::SerializeError, e.to_string()),
        }
    })
}

/// # Safety
/// `s` must come from this library and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn svgf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `doc` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn svgf_document_classify(
    doc: *const SvgfDocument,
    out: *mut SvgfClassification,
) -> SvgfStatus {
    guarded(|| {
        if doc.is_null() || out.is_null() {
            return fail(SvgfStatus::NullArgument, "doc or out is null");
        }
        let c = classify(&(*doc).inner);
        *out = SvgfClassification {
            color_category: match c.color_category {
                ColorCategory::Monochrome => SvgfColorCategory::Monochrome,
                ColorCategory::Multicolor => SvgfColorCategory::Multicolor,
            },
            level: match c.level {
                Level::Difficulty(DifficultyLevel::MonocolorEasy) => SvgfLevel::MonocolorEasy,
                Level::Difficulty(DifficultyLevel::MonocolorDifficult) => SvgfLevel::MonocolorDifficult,
                Level::Difficulty(DifficultyLevel::MulticolorEasy) => SvgfLevel::MulticolorEasy,
                Level::Difficulty(DifficultyLevel::MulticolorDifficult) => SvgfLevel::MulticolorDifficult,
                Level::OutOfRange => SvgfLevel::OutOfRange,
            },
            command_count: c.command_count as u64,
            path_count: c.path_count as u64,
        };
        SvgfStatus::Ok
    })
}

/// 1 if `svg` parses and normalizes to a non-empty document, else 0.
///
/// # Safety
/// `svg` must be null or a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn svgf_integrity(svg: *const c_char) -> u8 {
    if svg.is_null() {
        return 0;
    }
    catch_unwind(|| svgforge::rewards::integrity_indicator_bytes(CStr::from_ptr(svg).to_bytes())).unwrap_or(0)
}

/// Integrity plus path-count matching reward of `generated` against `reference`.
///
/// `semantics` is an [`SvgfSemantics`] value.
///
/// # Safety
/// `generated` and `reference` must be NUL-terminated strings and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn svgf_reward(
    generated: *const c_char,
    reference: *const c_char,
    alpha: f64,
    beta: f64,
    gamma: f64,
    semantics: u32,
    out: *mut SvgfReward,
) -> SvgfStatus {
    guarded(|| {
        if out.is_null() {
            return fail(SvgfStatus::NullArgument, "out is null");
        }
        let (generated, reference) = match (read_str(generated, "generated"), read_str(reference, "reference")) {
            (Ok(g), Ok(r)) => (g, r),
            (Err(status), _) | (_, Err(status)) => return status,
        };
        let semantics = match semantics {
            s if s == SvgfSemantics::ProseConsistent as u32 => MatchSemantics::ProseConsistent,
            s if s == SvgfSemantics::LiteralFormula as u32 => MatchSemantics::LiteralFormula,
            other => return fail(SvgfStatus::InvalidArgument, format!("unknown semantics {other}")),
        };
        let params = match RewardParams::new(alpha, beta, gamma, semantics) {
            Ok(p) => p,
            Err(e) => return fail(SvgfStatus::InvalidArgument, e.to_string()),
        };
        match total_reward(generated, reference, &params) {
            Ok(b) => {
                *out = SvgfReward {
                    integrity: b.integrity,
                    match_reward: b.match_,
                    total: b.total,
                    n_generated: b.n_generated as u64,
                    n_reference: b.n_reference as u64,
                };
                SvgfStatus::Ok
            }
            Err(e) => fail(SvgfStatus::InvalidArgument, e.to_string()),
        }
    })
}

/// Message of the last failure on this thread, or null.
///
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn svgf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn svgf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
