//! C interface to `cfm-core`.
//!
//! Forms and matrices are opaque handles created by `cfm_*_new`/`parse`
//! functions and released with the matching `*_free`. Every fallible call
//! returns a [`CfmStatus`]; on failure `cfm_last_error` describes the problem.
//! Strings returned by the library are owned by the caller and released with
//! `cfm_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cfm_core::canonical::{sample, validate_membership};
use cfm_core::cells::{cell_count, cell_of_matrix, euler_characteristic};
use cfm_core::parse::parse;
use cfm_core::poincare::poincare_polynomial;
use cfm_core::{CanonicalForm, CfmError, Field, MatrixF, Scalar, Tolerance};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CfmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidExpression = 4,
    Membership = 5,
    Numeric = 6,
    Shape = 7,
    Format = 8,
    BufferTooSmall = 9,
    Overflow = 10,
    Internal = 11,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CfmField {
    Real = 1,
    Complex = 2,
    Quaternion = 4,
}

impl From<CfmField> for Field {
    fn from(f: CfmField) -> Field {
        match f {
            CfmField::Real => Field::Real,
            CfmField::Complex => Field::Complex,
            CfmField::Quaternion => Field::Quaternion,
        }
    }
}

/// Zero and orthogonality tolerances; pass `NULL` for the defaults.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct CfmTolerance {
    pub eps_zero: f64,
    pub eps_orth: f64,
}

/// Opaque canonical form.
pub struct CfmForm(CanonicalForm);

/// Opaque matrix over R, C or H.
pub struct CfmMatrix(MatrixF);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let text = CString::new(msg.into().replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(text));
}

fn status_of(err: &CfmError) -> CfmStatus {
    match err {
        CfmError::Syntax { .. } | CfmError::Preset(_) => CfmStatus::Parse,
        CfmError::Structure(_) => CfmStatus::InvalidExpression,
        CfmError::Membership(_) => CfmStatus::Membership,
        CfmError::Numeric(_) | CfmError::Degenerate(_) => CfmStatus::Numeric,
        CfmError::Shape(_) | CfmError::TagMismatch(..) => CfmStatus::Shape,
        CfmError::Format(_) | CfmError::Json(_) | CfmError::Io(_) => CfmStatus::Format,
    }
}

struct Failure(CfmStatus, String);

impl From<CfmError> for Failure {
    fn from(e: CfmError) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

type Outcome = Result<(), Failure>;

/// Runs `body`, translating errors and panics into a status and last-error text.
fn guard(body: impl FnOnce() -> Outcome) -> CfmStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => CfmStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            CfmStatus::Internal
        }
    }
}

fn null() -> Failure {
    Failure(CfmStatus::NullPointer, "null pointer argument".into())
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null());
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure(CfmStatus::InvalidUtf8, "string is not UTF-8".into()))
}

unsafe fn form_ref<'a>(p: *const CfmForm) -> Result<&'a CanonicalForm, Failure> {
    p.as_ref().map(|f| &f.0).ok_or_else(null)
}

unsafe fn matrix_ref<'a>(p: *const CfmMatrix) -> Result<&'a MatrixF, Failure> {
    p.as_ref().map(|m| &m.0).ok_or_else(null)
}

unsafe fn tolerance(p: *const CfmTolerance) -> Result<Tolerance, Failure> {
    match p.as_ref() {
        None => Ok(Tolerance::default()),
        Some(t) => Ok(Tolerance::new(t.eps_zero, t.eps_orth)?),
    }
}

unsafe fn store<T>(out: *mut T, value: T) -> Outcome {
    if out.is_null() {
        return Err(null());
    }
    out.write(value);
    Ok(())
}

fn owned_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("no interior nul").into_raw()
}

/// Message for the most recent failure on this thread, or `NULL`. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn cfm_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by the library.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn cfm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a DSL expression or `preset:` invocation.
///
/// # Safety
/// `expr` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cfm_form_parse(expr: *const c_char, out: *mut *mut CfmForm) -> CfmStatus {
    guard(|| {
        let f = parse(text(expr)?)?;
        f.expr.validate()?;
        store(out, Box::into_raw(Box::new(CfmForm(f))))
    })
}

/// # Safety
/// `form` must come from `cfm_form_parse` and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn cfm_form_free(form: *mut CfmForm) {
    if !form.is_null() {
        drop(Box::from_raw(form));
    }
}

/// The form printed in the DSL; free with `cfm_string_free`.
///
/// # Safety
/// `form` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn cfm_form_to_string(form: *const CfmForm) -> *mut c_char {
    match form.as_ref() {
        Some(f) => owned_string(f.0.expr.to_string()),
        None => ptr::null_mut(),
    }
}

/// # Safety
/// `form` must be a live handle and `rows`, `cols` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn cfm_form_shape(form: *const CfmForm, rows: *mut usize, cols: *mut usize) -> CfmStatus {
    guard(|| {
        let f = form_ref(form)?;
        store(rows, f.expr.rows())?;
        store(cols, f.expr.width())
    })
}

/// Dimension over F of the manifold of members.
///
/// # Safety
/// `form` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cfm_form_dimension(form: *const CfmForm, out: *mut usize) -> CfmStatus {
    guard(|| store(out, form_ref(form)?.expr.dimension()?))
}

/// # Safety
/// `form` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cfm_form_cell_count(form: *const CfmForm, out: *mut u64) -> CfmStatus {
    guard(|| {
        let n = cell_count(&form_ref(form)?.expr)?;
        let n = u64::try_from(n).map_err(|_| Failure(CfmStatus::Overflow, format!("{n} cells overflow 64 bits")))?;
        store(out, n)
    })
}

/// # Safety
/// `form` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cfm_form_euler(form: *const CfmForm, field: CfmField, out: *mut i64) -> CfmStatus {
    guard(|| store(out, euler_characteristic(&form_ref(form)?.expr, field.into())?))
}

/// Writes the Poincaré polynomial coefficients (constant term first) into
/// `coeffs`. `len` receives the number of coefficients; if it exceeds
/// `capacity` nothing is written and `CFM_STATUS_BUFFER_TOO_SMALL` is returned.
///
/// # Safety
/// `coeffs` must hold `capacity` values (it may be `NULL` when `capacity` is 0).
#[no_mangle]
pub unsafe extern "C" fn cfm_form_poincare(
    form: *const CfmForm,
    field: CfmField,
    coeffs: *mut i64,
    capacity: usize,
    len: *mut usize,
) -> CfmStatus {
    guard(|| {
        let p = poincare_polynomial(&form_ref(form)?.expr, field.into())?;
        let c = p.coeffs();
        store(len, c.len())?;
        if c.len() > capacity {
            return Err(Failure(CfmStatus::BufferTooSmall, format!("{} coefficients needed", c.len())));
        }
        if !c.is_empty() {
            if coeffs.is_null() {
                return Err(null());
            }
            ptr::copy_nonoverlapping(c.as_ptr(), coeffs, c.len());
        }
        Ok(())
    })
}

/// Builds a matrix from `rows·cols·d` doubles in row-major order, where `d`
/// is the real dimension of `field` and each entry lists its real components.
///
/// # Safety
/// `data` must hold `rows·cols·d` doubles and `out` be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cfm_matrix_new(
    field: CfmField,
    rows: usize,
    cols: usize,
    data: *const f64,
    out: *mut *mut CfmMatrix,
) -> CfmStatus {
    guard(|| {
        let field = Field::from(field);
        let d = field.real_dim();
        let n = rows.checked_mul(cols).and_then(|x| x.checked_mul(d)).ok_or_else(|| {
            Failure(CfmStatus::Overflow, "matrix size overflows".into())
        })?;
        if data.is_null() && n > 0 {
            return Err(null());
        }
        let raw = if n == 0 { &[][..] } else { std::slice::from_raw_parts(data, n) };
        let entries = raw.chunks(d).map(|c| Scalar::from_components(field, c)).collect::<Result<Vec<_>, _>>()?;
        let m = MatrixF::new(field, rows, cols, entries)?;
        store(out, Box::into_raw(Box::new(CfmMatrix(m))))
    })
}

/// Parses the JSON matrix format used by the `cfm` command.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cfm_matrix_from_json(json: *const c_char, out: *mut *mut CfmMatrix) -> CfmStatus {
    guard(|| {
        let m = MatrixF::from_json(text(json)?)?;
        store(out, Box::into_raw(Box::new(CfmMatrix(m))))
    })
}

/// # Safety
/// `m` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn cfm_matrix_to_json(m: *const CfmMatrix) -> *mut c_char {
    match m.as_ref() {
        Some(m) => owned_string(m.0.to_json()),
        None => ptr::null_mut(),
    }
}

/// # Safety
/// `m` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn cfm_matrix_free(m: *mut CfmMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// # Safety
/// `m` must be a live handle and the out pointers valid.
#[no_mangle]
pub unsafe extern "C" fn cfm_matrix_shape(
    m: *const CfmMatrix,
    rows: *mut usize,
    cols: *mut usize,
    field: *mut CfmField,
) -> CfmStatus {
    guard(|| {
        let m = matrix_ref(m)?;
        store(rows, m.rows())?;
        store(cols, m.cols())?;
        let f = match m.field() {
            Field::Real => CfmField::Real,
            Field::Complex => CfmField::Complex,
            Field::Quaternion => CfmField::Quaternion,
        };
        store(field, f)
    })
}

/// Copies the real components of entry `(row, col)` (0-based) into `parts`,
/// which must hold the field's real dimension of doubles.
///
/// # Safety
/// `m` must be a live handle and `parts` large enough.
#[no_mangle]
pub unsafe extern "C" fn cfm_matrix_get(m: *const CfmMatrix, row: usize, col: usize, parts: *mut f64) -> CfmStatus {
    guard(|| {
        let m = matrix_ref(m)?;
        if row >= m.rows() || col >= m.cols() {
            return Err(Failure(CfmStatus::Shape, format!("entry ({row}, {col}) outside {}x{}", m.rows(), m.cols())));
        }
        if parts.is_null() {
            return Err(null());
        }
        let c = m.get(row, col).components();
        ptr::copy_nonoverlapping(c.as_ptr(), parts, c.len());
        Ok(())
    })
}

/// Seeded member of the form.
///
/// # Safety
/// `form` must be a live handle, `tol` valid or `NULL`, and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cfm_sample(
    form: *const CfmForm,
    field: CfmField,
    seed: u64,
    tol: *const CfmTolerance,
    out: *mut *mut CfmMatrix,
) -> CfmStatus {
    guard(|| {
        let m = sample(&form_ref(form)?.expr, field.into(), seed, &tolerance(tol)?)?;
        store(out, Box::into_raw(Box::new(CfmMatrix(m))))
    })
}

/// Membership check. Returns `CFM_STATUS_OK` when the check ran, with the
/// verdict in `passed`; `report` (if not `NULL`) receives the JSON report,
/// to be freed with `cfm_string_free`.
///
/// # Safety
/// Handles must be live; `passed` must be valid; `report` may be `NULL`.
#[no_mangle]
pub unsafe extern "C" fn cfm_check(
    form: *const CfmForm,
    m: *const CfmMatrix,
    tol: *const CfmTolerance,
    passed: *mut bool,
    report: *mut *mut c_char,
) -> CfmStatus {
    guard(|| {
        let r = validate_membership(matrix_ref(m)?, form_ref(form)?, &tolerance(tol)?);
        store(passed, r.passed)?;
        if !report.is_null() {
            let json = serde_json::to_string(&r).map_err(CfmError::from)?;
            report.write(owned_string(json));
        }
        Ok(())
    })
}

/// Symbol of the cell containing the member `m`; free with `cfm_string_free`.
///
/// # Safety
/// Handles must be live and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cfm_cell_of(
    form: *const CfmForm,
    m: *const CfmMatrix,
    tol: *const CfmTolerance,
    out: *mut *mut c_char,
) -> CfmStatus {
    guard(|| {
        let symbol = cell_of_matrix(matrix_ref(m)?, &form_ref(form)?.expr, &tolerance(tol)?)?;
        store(out, owned_string(symbol.to_string()))
    })
}
