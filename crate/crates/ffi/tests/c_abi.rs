use std::ffi::{CStr, CString};
use std::ptr;

use stabmagic_ffi::*;

const T_SRE: f64 = 0.415_037_499_278_843_8; // 2 - log2(3)

fn plus_t() -> *mut SmState {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let re = [h, 0.5];
    let im = [0.0, 0.5];
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { sm_state_from_amplitudes(re.as_ptr(), im.as_ptr(), 2, &mut s) }, SM_OK);
    s
}

fn gate(name: &str, params: &[f64], qubits: usize) -> *mut SmUnitary {
    let c = CString::new(name).unwrap();
    let mut u = ptr::null_mut();
    let rc = unsafe { sm_unitary_from_gate(c.as_ptr(), params.as_ptr(), params.len(), qubits, &mut u) };
    assert_eq!(rc, SM_OK, "{name}");
    u
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(sm_last_error_message()) }.to_string_lossy().into_owned()
}

#[test]
fn state_sre_and_spectrum() {
    let s = plus_t();
    unsafe {
        assert_eq!(sm_state_num_qubits(s), 1);
        let mut v = 0.0;
        assert_eq!(sm_sre(s, 2.0, &mut v), SM_OK);
        assert!((v - T_SRE).abs() < 1e-12);
        let mut sp = [0.0; 4];
        assert_eq!(sm_pauli_spectrum(s, sp.as_mut_ptr(), 4), SM_OK);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        // index (x << n) | z: I, Z, X, Y
        for (a, b) in sp.iter().zip([1.0, 0.0, h, h]) {
            assert!((a - b).abs() < 1e-12, "{sp:?}");
        }
        let mut k = 0usize;
        assert_eq!(sm_stabilizer_nullity(s, &mut k), SM_OK);
        assert_eq!(k, 1);
        sm_state_free(s);
    }
}

#[test]
fn gate_application_matches_amplitude_constructor() {
    let t = gate("t", &[], 0);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut plus = ptr::null_mut();
    unsafe {
        assert_eq!(sm_state_from_amplitudes([h, h].as_ptr(), [0.0, 0.0].as_ptr(), 2, &mut plus), SM_OK);
        let mut out = ptr::null_mut();
        assert_eq!(sm_unitary_apply(t, plus, &mut out), SM_OK);
        let (mut re, mut im) = ([0.0; 2], [0.0; 2]);
        assert_eq!(sm_state_amplitudes(out, re.as_mut_ptr(), im.as_mut_ptr(), 2), SM_OK);
        let ratio = num_complex::Complex64::new(re[1], im[1]) / num_complex::Complex64::new(re[0], im[0]);
        assert!((ratio.arg() - std::f64::consts::FRAC_PI_4).abs() < 1e-12);
        sm_state_free(out);
        sm_state_free(plus);
        sm_unitary_free(t);
    }
}

#[test]
fn tcount_table() {
    let cases: [(&str, usize, u64, u64); 4] = [("t", 0, 1, 1), ("ccz", 0, 4, 3), ("qft", 3, 6, 4), ("cnot", 0, 0, 0)];
    for (name, q, sre_b, null_b) in cases {
        let u = gate(name, &[], q);
        let (mut c, mut s, mut n) = (0.0, 0u64, 0u64);
        assert_eq!(unsafe { sm_tcount_bound(u, &mut c, &mut s, &mut n) }, SM_OK);
        assert_eq!((s, n), (sre_b, null_b), "{name}");
        unsafe { sm_unitary_free(u) };
    }
}

#[test]
fn amortized_values() {
    let t = gate("t", &[], 0);
    unsafe {
        let mut v = 0.0;
        assert_eq!(sm_strict_amortized_sre(t, 2.0, 0, &mut v), SM_OK);
        assert!((v - T_SRE).abs() < 1e-12);
        assert_eq!(sm_amortized_sre_lower_bound(t, 2.0, 1, 4, 3, &mut v), SM_OK);
        assert!(v <= T_SRE + 1e-9 && v > T_SRE - 1e-6, "{v}");
        sm_unitary_free(t);
    }
}

#[test]
fn convex_measures() {
    let s = plus_t();
    unsafe {
        let mut r = 0.0;
        assert_eq!(sm_robustness_of_magic(s, &mut r), SM_OK);
        assert!((r - 2f64.sqrt()).abs() < 1e-6);
        let mut xi = 0.0;
        assert_eq!(sm_stabilizer_extent(s, &mut xi), SM_OK);
        let sec = 1.0 / (std::f64::consts::PI / 8.0).cos();
        assert!((xi - sec * sec).abs() < 1e-6);
        sm_state_free(s);
    }
}

#[test]
fn matrix_and_circuit_constructors() {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut u = ptr::null_mut();
    unsafe {
        assert_eq!(
            sm_unitary_from_matrix([h, h, h, -h].as_ptr(), [0.0; 4].as_ptr(), 2, &mut u),
            SM_OK
        );
        assert_eq!(sm_unitary_num_qubits(u), 1);
        sm_unitary_free(u);
        assert_eq!(
            sm_unitary_from_matrix([1.0, 1.0, 0.0, 1.0].as_ptr(), [0.0; 4].as_ptr(), 2, &mut u),
            SM_ERR_INVALID_ARGUMENT
        );
        assert!(last_error().contains("unitary"));
        let text = CString::new("h 0\ncnot 0 1\n").unwrap();
        assert_eq!(sm_unitary_from_circuit(text.as_ptr(), 0, &mut u), SM_OK);
        assert_eq!(sm_unitary_num_qubits(u), 2);
        sm_unitary_free(u);
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut v = 0.0;
        assert_eq!(sm_sre(ptr::null(), 2.0, &mut v), SM_ERR_NULL_POINTER);
        assert!(last_error().contains("state"));
        let mut s = ptr::null_mut();
        assert_eq!(
            sm_state_from_amplitudes([1.0, 1.0].as_ptr(), [0.0, 0.0].as_ptr(), 2, &mut s),
            SM_ERR_INVALID_ARGUMENT
        );
        assert!(s.is_null());
        assert_eq!(
            sm_state_from_amplitudes([1.0, 0.0, 0.0].as_ptr(), [0.0; 3].as_ptr(), 3, &mut s),
            SM_ERR_INVALID_ARGUMENT
        );
        let bad = CString::new("nonsense").unwrap();
        let mut u = ptr::null_mut();
        assert_eq!(sm_unitary_from_gate(bad.as_ptr(), ptr::null(), 0, 0, &mut u), SM_ERR_INVALID_ARGUMENT);
        let s = plus_t();
        let mut buf = [0.0; 3];
        assert_eq!(sm_pauli_spectrum(s, buf.as_mut_ptr(), 3), SM_ERR_INVALID_ARGUMENT);
        let t = gate("t", &[], 0);
        assert_eq!(sm_amortized_sre_lower_bound(t, 2.0, 4, 1, 1, &mut v), SM_ERR_UNSUPPORTED);
        sm_unitary_free(t);
        sm_state_free(s);
        sm_state_free(ptr::null_mut());
    }
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/stabmagic.h")).unwrap();
    for f in [
        "sm_last_error_message",
        "sm_state_from_amplitudes",
        "sm_state_free",
        "sm_unitary_from_gate",
        "sm_unitary_from_matrix",
        "sm_unitary_from_circuit",
        "sm_unitary_apply",
        "sm_sre",
        "sm_pauli_spectrum",
        "sm_tcount_bound",
        "sm_amortized_sre_lower_bound",
        "typedef struct SmState SmState",
        "#define SM_ERR_PANIC 6",
    ] {
        assert!(header.contains(f), "{f}");
    }
}
