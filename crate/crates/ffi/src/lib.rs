//! C ABI over the `stabmagic` library.
//!
//! States and unitaries cross the boundary as opaque handles created by the
//! `sm_*_from_*` constructors and released with the matching `*_free`.
//! Every fallible function returns a status code (`SM_OK` on success) and
//! writes its result through an out-pointer; the message for the most
//! recent failure on the calling thread is available from
//! [`sm_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use num_complex::Complex64;
use stabmagic::circuit::{run_circuit, CircuitSpec};
use stabmagic::{Error, StateVector, UnitaryMatrix};

pub const SM_OK: c_int = 0;
pub const SM_ERR_NULL_POINTER: c_int = 1;
pub const SM_ERR_INVALID_ARGUMENT: c_int = 2;
pub const SM_ERR_DIMENSION: c_int = 3;
pub const SM_ERR_UNSUPPORTED: c_int = 4;
pub const SM_ERR_NUMERICAL: c_int = 5;
pub const SM_ERR_PANIC: c_int = 6;

/// Opaque pure state.
pub struct SmState(StateVector);

/// Opaque unitary.
pub struct SmUnitary(UnitaryMatrix);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> c_int {
    match e {
        Error::DimensionMismatch { .. } | Error::QubitOutOfRange { .. } => SM_ERR_DIMENSION,
        Error::Unsupported(_) => SM_ERR_UNSUPPORTED,
        Error::Numerical(_)
        | Error::NotConverged(_)
        | Error::Infeasible
        | Error::Verification(_) => SM_ERR_NUMERICAL,
        _ => SM_ERR_INVALID_ARGUMENT,
    }
}

enum Fail {
    Null(&'static str),
    Lib(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

/// Runs `f`, converting errors and panics into status codes.
fn guard<F: FnOnce() -> Result<(), Fail>>(f: F) -> c_int {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SM_OK,
        Ok(Err(Fail::Null(what))) => {
            set_error(&format!("null pointer: {what}"));
            SM_ERR_NULL_POINTER
        }
        Ok(Err(Fail::Lib(e))) => {
            set_error(&e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic");
            SM_ERR_PANIC
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or(Fail::Null(what))
}

unsafe fn out<'a, T>(p: *mut T, what: &'static str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or(Fail::Null(what))
}

unsafe fn slice<'a>(p: *const f64, len: usize, what: &'static str) -> Result<&'a [f64], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Fail::Null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn string<'a>(p: *const c_char, what: &'static str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail::Null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail::Lib(Error::InvalidParameter(format!("{what} is not UTF-8"))))
}

fn complex(re: &[f64], im: &[f64]) -> Vec<Complex64> {
    re.iter().zip(im).map(|(&r, &i)| Complex64::new(r, i)).collect()
}

/// Message for the last failed call on this thread. The pointer stays valid
/// until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn sm_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Builds a normalized state from `len = 2^n` real and imaginary parts.
///
/// # Safety
/// `re` and `im` must point to `len` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sm_state_from_amplitudes(
    re: *const f64,
    im: *const f64,
    len: usize,
    out_state: *mut *mut SmState,
) -> c_int {
    guard(|| {
        let o = out(out_state, "out_state")?;
        let amps = complex(slice(re, len, "re")?, slice(im, len, "im")?);
        *o = Box::into_raw(Box::new(SmState(StateVector::new(amps)?)));
        Ok(())
    })
}

/// # Safety
/// `state` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn sm_state_free(state: *mut SmState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// Number of qubits, or 0 for a null handle.
///
/// # Safety
/// `state` must be a valid handle or null.
#[no_mangle]
pub unsafe extern "C" fn sm_state_num_qubits(state: *const SmState) -> usize {
    state.as_ref().map_or(0, |s| s.0.n())
}

/// Copies the `2^n` amplitudes into `re`/`im`, each of capacity `len`.
///
/// # Safety
/// `re` and `im` must be writable for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn sm_state_amplitudes(
    state: *const SmState,
    re: *mut f64,
    im: *mut f64,
    len: usize,
) -> c_int {
    guard(|| {
        let s = deref(state, "state")?;
        let amps = s.0.amplitudes();
        if len != amps.len() {
            return Err(Error::InvalidParameter(format!(
                "buffer holds {len} values, state has {}",
                amps.len()
            ))
            .into());
        }
        if re.is_null() || im.is_null() {
            return Err(Fail::Null("re/im"));
        }
        for (k, a) in amps.iter().enumerate() {
            *re.add(k) = a.re;
            *im.add(k) = a.im;
        }
        Ok(())
    })
}

/// Library gate by name (`t`, `h`, `rz`, `ccz`, `qft`, ...). `qubits` is
/// only used by size-generic gates and may be 0 otherwise.
///
/// # Safety
/// `name` must be a NUL-terminated string; `params` must hold `num_params`
/// doubles.
#[no_mangle]
pub unsafe extern "C" fn sm_unitary_from_gate(
    name: *const c_char,
    params: *const f64,
    num_params: usize,
    qubits: usize,
    out_unitary: *mut *mut SmUnitary,
) -> c_int {
    guard(|| {
        let o = out(out_unitary, "out_unitary")?;
        let gate: stabmagic::gates::Gate = string(name, "name")?.parse()?;
        let n = gate.num_qubits().unwrap_or(qubits);
        let u = stabmagic::gates::gate_matrix(gate, slice(params, num_params, "params")?, n)?;
        *o = Box::into_raw(Box::new(SmUnitary(u)));
        Ok(())
    })
}

/// Dense unitary from `dim * dim` row-major entries; unitarity is checked.
///
/// # Safety
/// `re` and `im` must point to `dim * dim` doubles.
#[no_mangle]
pub unsafe extern "C" fn sm_unitary_from_matrix(
    re: *const f64,
    im: *const f64,
    dim: usize,
    out_unitary: *mut *mut SmUnitary,
) -> c_int {
    guard(|| {
        let o = out(out_unitary, "out_unitary")?;
        let len = dim.checked_mul(dim).ok_or(Fail::Lib(Error::InvalidParameter(
            "dimension overflow".into(),
        )))?;
        let entries = complex(slice(re, len, "re")?, slice(im, len, "im")?);
        *o = Box::into_raw(Box::new(SmUnitary(UnitaryMatrix::from_row_major(dim, &entries)?)));
        Ok(())
    })
}

/// Unitary of a circuit in the text format (one gate per line). `qubits = 0`
/// infers the register size.
///
/// # Safety
/// `text` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn sm_unitary_from_circuit(
    text: *const c_char,
    qubits: usize,
    out_unitary: *mut *mut SmUnitary,
) -> c_int {
    guard(|| {
        let o = out(out_unitary, "out_unitary")?;
        let spec = CircuitSpec::parse(string(text, "text")?, (qubits > 0).then_some(qubits))?;
        *o = Box::into_raw(Box::new(SmUnitary(run_circuit(&spec)?)));
        Ok(())
    })
}

/// # Safety
/// `unitary` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn sm_unitary_free(unitary: *mut SmUnitary) {
    if !unitary.is_null() {
        drop(Box::from_raw(unitary));
    }
}

/// # Safety
/// `unitary` must be a valid handle or null.
#[no_mangle]
pub unsafe extern "C" fn sm_unitary_num_qubits(unitary: *const SmUnitary) -> usize {
    unitary.as_ref().map_or(0, |u| u.0.n())
}

/// `(U (x) I)|psi>`, acting on the leading qubits of `state`.
///
/// # Safety
/// Handles must be valid; `out_state` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sm_unitary_apply(
    unitary: *const SmUnitary,
    state: *const SmState,
    out_state: *mut *mut SmState,
) -> c_int {
    guard(|| {
        let u = deref(unitary, "unitary")?;
        let s = deref(state, "state")?;
        let o = out(out_state, "out_state")?;
        *o = Box::into_raw(Box::new(SmState(u.0.apply_leading(&s.0)?)));
        Ok(())
    })
}

/// Stabilizer Rényi entropy `M_alpha` in bits.
///
/// # Safety
/// `state` must be valid; `out_value` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sm_sre(state: *const SmState, alpha: f64, out_value: *mut f64) -> c_int {
    guard(|| {
        let s = deref(state, "state")?;
        let o = out(out_value, "out_value")?;
        *o = stabmagic::sre::renyi_entropy(&s.0, alpha)?.value;
        Ok(())
    })
}

/// Writes the `4^n` Pauli expectations, indexed by `(x_mask << n) | z_mask`.
///
/// # Safety
/// `buf` must be writable for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn sm_pauli_spectrum(
    state: *const SmState,
    buf: *mut f64,
    len: usize,
) -> c_int {
    guard(|| {
        let s = deref(state, "state")?;
        let sp = stabmagic::pauli::full_spectrum(&s.0)?;
        let vals = sp.values();
        if len != vals.len() {
            return Err(Error::InvalidParameter(format!(
                "buffer holds {len} values, spectrum has {}",
                vals.len()
            ))
            .into());
        }
        if buf.is_null() {
            return Err(Fail::Null("buf"));
        }
        std::slice::from_raw_parts_mut(buf, len).copy_from_slice(vals);
        Ok(())
    })
}

/// Stabilizer nullity of a state.
///
/// # Safety
/// `state` must be valid; `out_value` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sm_stabilizer_nullity(
    state: *const SmState,
    out_value: *mut usize,
) -> c_int {
    guard(|| {
        let s = deref(state, "state")?;
        let o = out(out_value, "out_value")?;
        *o = stabmagic::sre::stabilizer_nullity(&s.0, stabmagic::sre::NULLITY_TOL)?;
        Ok(())
    })
}

/// T-count lower bounds for a unitary on at most 4 qubits: the Choi-state
/// 2-SRE (bits), the bound derived from it, and the nullity bound.
///
/// # Safety
/// `unitary` must be valid; all out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn sm_tcount_bound(
    unitary: *const SmUnitary,
    out_choi_sre: *mut f64,
    out_sre_bound: *mut u64,
    out_nullity_bound: *mut u64,
) -> c_int {
    guard(|| {
        let u = deref(unitary, "unitary")?;
        let (c, s, n) = (
            out(out_choi_sre, "out_choi_sre")?,
            out(out_sre_bound, "out_sre_bound")?,
            out(out_nullity_bound, "out_nullity_bound")?,
        );
        let r = stabmagic::tcount::tcount_lower_bound(&u.0, "ffi")?;
        *c = r.choi_sre;
        *s = r.sre_bound;
        *n = r.nullity_bound;
        Ok(())
    })
}

/// Strict amortized `M_alpha`: maximum over stabilizer inputs with `n`
/// ancillas. Two-qubit unitaries need `allow_large != 0`.
///
/// # Safety
/// `unitary` must be valid; `out_value` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sm_strict_amortized_sre(
    unitary: *const SmUnitary,
    alpha: f64,
    allow_large: c_int,
    out_value: *mut f64,
) -> c_int {
    guard(|| {
        let u = deref(unitary, "unitary")?;
        let o = out(out_value, "out_value")?;
        *o = stabmagic::amortize::strict_amortized_sre(&u.0, alpha, allow_large != 0)?.value;
        Ok(())
    })
}

/// Variational lower bound on the amortized `M_alpha` with `ancillas`
/// extra qubits; deterministic for a fixed `seed` and `restarts`.
///
/// # Safety
/// `unitary` must be valid; `out_value` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sm_amortized_sre_lower_bound(
    unitary: *const SmUnitary,
    alpha: f64,
    ancillas: usize,
    restarts: usize,
    seed: u64,
    out_value: *mut f64,
) -> c_int {
    guard(|| {
        let u = deref(unitary, "unitary")?;
        let o = out(out_value, "out_value")?;
        *o = stabmagic::amortize::amortized_sre_lower_bound(&u.0, alpha, ancillas, restarts, seed)?
            .best_value;
        Ok(())
    })
}

/// Robustness of magic (not its logarithm) for states on at most 3 qubits.
///
/// # Safety
/// `state` must be valid; `out_value` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sm_robustness_of_magic(
    state: *const SmState,
    out_value: *mut f64,
) -> c_int {
    guard(|| {
        let s = deref(state, "state")?;
        let o = out(out_value, "out_value")?;
        let basis = stabmagic::stabilizer::StabilizerSet::shared(s.0.n(), false)?;
        *o = stabmagic::decomp::robustness_of_magic(&s.0, &basis)?.0;
        Ok(())
    })
}

/// Stabilizer extent for states on at most 3 qubits.
///
/// # Safety
/// `state` must be valid; `out_value` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sm_stabilizer_extent(state: *const SmState, out_value: *mut f64) -> c_int {
    guard(|| {
        let s = deref(state, "state")?;
        let o = out(out_value, "out_value")?;
        let basis = stabmagic::stabilizer::StabilizerSet::shared(s.0.n(), false)?;
        *o = stabmagic::decomp::stabilizer_extent(&s.0, &basis)?.0;
        Ok(())
    })
}
