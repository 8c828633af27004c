//! Named gates and their exact matrices.
//!
//! Rotation conventions:
//!
//! - `rz`, `rx`, `ry` take the full angle, `R_P(theta) = exp(-i theta P)`, so
//!   `rz(pi/8)` equals `T` up to a global phase;
//! - `rzh`, `rxh`, `ryh` are the textbook half-angle rotations
//!   `exp(-i theta P / 2)`;
//! - `phase(theta) = diag(1, e^{i theta})`;
//! - `ccrz(theta)` applies `diag(1, e^{i theta})` to qubit 2 when qubits 0
//!   and 1 are both set, so `ccrz(pi) = CCZ`.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, FRAC_PI_8, PI};
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::state::UnitaryMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gate {
    I,
    H,
    S,
    Sdg,
    T,
    Tdg,
    SqrtT,
    X,
    Y,
    Z,
    Phase,
    Rx,
    Ry,
    Rz,
    Rxh,
    Ryh,
    Rzh,
    Cnot,
    Cz,
    Swap,
    Ccz,
    Ccrz,
    Qft,
}

impl Gate {
    pub const ALL: [Gate; 23] = [
        Gate::I,
        Gate::H,
        Gate::S,
        Gate::Sdg,
        Gate::T,
        Gate::Tdg,
        Gate::SqrtT,
        Gate::X,
        Gate::Y,
        Gate::Z,
        Gate::Phase,
        Gate::Rx,
        Gate::Ry,
        Gate::Rz,
        Gate::Rxh,
        Gate::Ryh,
        Gate::Rzh,
        Gate::Cnot,
        Gate::Cz,
        Gate::Swap,
        Gate::Ccz,
        Gate::Ccrz,
        Gate::Qft,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Gate::I => "id",
            Gate::H => "h",
            Gate::S => "s",
            Gate::Sdg => "sdg",
            Gate::T => "t",
            Gate::Tdg => "tdg",
            Gate::SqrtT => "sqrt_t",
            Gate::X => "x",
            Gate::Y => "y",
            Gate::Z => "z",
            Gate::Phase => "phase",
            Gate::Rx => "rx",
            Gate::Ry => "ry",
            Gate::Rz => "rz",
            Gate::Rxh => "rxh",
            Gate::Ryh => "ryh",
            Gate::Rzh => "rzh",
            Gate::Cnot => "cnot",
            Gate::Cz => "cz",
            Gate::Swap => "swap",
            Gate::Ccz => "ccz",
            Gate::Ccrz => "ccrz",
            Gate::Qft => "qft",
        }
    }

    pub fn num_params(self) -> usize {
        match self {
            Gate::Phase
            | Gate::Rx
            | Gate::Ry
            | Gate::Rz
            | Gate::Rxh
            | Gate::Ryh
            | Gate::Rzh
            | Gate::Ccrz => 1,
            _ => 0,
        }
    }

    /// Native qubit count; `None` for the variable-size QFT.
    pub fn num_qubits(self) -> Option<usize> {
        match self {
            Gate::Cnot | Gate::Cz | Gate::Swap => Some(2),
            Gate::Ccz | Gate::Ccrz => Some(3),
            Gate::Qft => None,
            _ => Some(1),
        }
    }

    /// True for the gates that are Clifford for every parameter value.
    pub fn is_clifford(self) -> bool {
        matches!(
            self,
            Gate::I
                | Gate::H
                | Gate::S
                | Gate::Sdg
                | Gate::X
                | Gate::Y
                | Gate::Z
                | Gate::Cnot
                | Gate::Cz
                | Gate::Swap
        )
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Gate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        let alias = match lower.as_str() {
            "i" | "id" => Some(Gate::I),
            "cx" => Some(Gate::Cnot),
            "sqrtt" | "sqrt-t" | "rt" => Some(Gate::SqrtT),
            "p" | "u1" => Some(Gate::Phase),
            "tdag" => Some(Gate::Tdg),
            "sdag" => Some(Gate::Sdg),
            _ => None,
        };
        if let Some(g) = alias {
            return Ok(g);
        }
        Gate::ALL
            .into_iter()
            .find(|g| g.name() == lower)
            .ok_or_else(|| Error::UnknownGate(s.to_string()))
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn mat(dim: usize, entries: &[Complex64]) -> DMatrix<Complex64> {
    DMatrix::from_row_slice(dim, dim, entries)
}

fn diag(phases: &[f64]) -> DMatrix<Complex64> {
    DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        phases.len(),
        phases.iter().map(|&p| Complex64::from_polar(1.0, p)),
    ))
}

/// `exp(-i theta P)` for a single-qubit Pauli matrix `P`.
fn pauli_rotation(p: &DMatrix<Complex64>, theta: f64) -> DMatrix<Complex64> {
    let id = DMatrix::<Complex64>::identity(2, 2);
    id * c(theta.cos(), 0.0) + p * c(0.0, -theta.sin())
}

fn pauli_x() -> DMatrix<Complex64> {
    mat(2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)])
}

fn pauli_y() -> DMatrix<Complex64> {
    mat(2, &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)])
}

fn qft_matrix(n: usize) -> DMatrix<Complex64> {
    let d = 1usize << n;
    let norm = (d as f64).sqrt().recip();
    DMatrix::from_fn(d, d, |k, j| {
        // exact reduction of jk mod d keeps the phases on the d-th roots
        let e = (j * k) % d;
        Complex64::from_polar(norm, 2.0 * PI * e as f64 / d as f64)
    })
}

/// Matrix of a named gate acting on `n` qubits.
///
/// For fixed-size gates `n` must equal the native size; `qft` accepts any
/// `n >= 1`.
pub fn build_gate(name: &str, params: &[f64], n: usize) -> Result<UnitaryMatrix> {
    let gate: Gate = name.parse()?;
    gate_matrix(gate, params, n)
}

pub fn gate_matrix(gate: Gate, params: &[f64], n: usize) -> Result<UnitaryMatrix> {
    let arity_err = || Error::GateArity {
        name: gate.name().to_string(),
        expected: gate.num_params(),
        qubits: gate.num_qubits().unwrap_or(n),
    };
    if params.len() != gate.num_params() {
        return Err(arity_err());
    }
    match gate.num_qubits() {
        Some(k) if k != n => return Err(arity_err()),
        None if n == 0 => return Err(arity_err()),
        _ => {}
    }
    let theta = params.first().copied().unwrap_or(0.0);
    let r = FRAC_1_SQRT_2;
    let m = match gate {
        Gate::I => DMatrix::identity(2, 2),
        Gate::H => mat(2, &[c(r, 0.0), c(r, 0.0), c(r, 0.0), c(-r, 0.0)]),
        Gate::S => mat(2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 1.0)]),
        Gate::Sdg => mat(2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, -1.0)]),
        Gate::T => diag(&[0.0, FRAC_PI_4]),
        Gate::Tdg => diag(&[0.0, -FRAC_PI_4]),
        Gate::SqrtT => diag(&[0.0, FRAC_PI_8]),
        Gate::X => pauli_x(),
        Gate::Y => pauli_y(),
        Gate::Z => mat(2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]),
        Gate::Phase => diag(&[0.0, theta]),
        Gate::Rx => pauli_rotation(&pauli_x(), theta),
        Gate::Ry => pauli_rotation(&pauli_y(), theta),
        Gate::Rz => diag(&[-theta, theta]),
        Gate::Rxh => pauli_rotation(&pauli_x(), theta / 2.0),
        Gate::Ryh => pauli_rotation(&pauli_y(), theta / 2.0),
        Gate::Rzh => diag(&[-theta / 2.0, theta / 2.0]),
        Gate::Cnot => {
            let mut m = DMatrix::identity(4, 4);
            m.swap_rows(2, 3);
            m
        }
        Gate::Cz => diag(&[0.0, 0.0, 0.0, PI]),
        Gate::Swap => {
            let mut m = DMatrix::identity(4, 4);
            m.swap_rows(1, 2);
            m
        }
        Gate::Ccz => diag(&[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, PI]),
        Gate::Ccrz => diag(&[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, theta]),
        Gate::Qft => qft_matrix(n),
    };
    let m = clean_roundoff(m);
    Ok(UnitaryMatrix::from_raw(n, m))
}

/// Snaps entries within 1e-15 of 0 or +-1 (real or imaginary) onto them so
/// diagonal Cliffords are exact.
fn clean_roundoff(mut m: DMatrix<Complex64>) -> DMatrix<Complex64> {
    let snap = |v: f64| {
        for t in [-1.0, 0.0, 1.0] {
            if (v - t).abs() < 1e-15 {
                return t;
            }
        }
        v
    };
    for z in m.iter_mut() {
        *z = c(snap(z.re), snap(z.im));
    }
    m
}

/// Embeds a `k`-qubit matrix on `targets` (ordered; `targets[0]` is the
/// gate's most significant qubit) into an `n`-qubit operator.
pub fn embed(gate: &UnitaryMatrix, targets: &[usize], n: usize) -> Result<UnitaryMatrix> {
    let k = gate.n();
    if targets.len() != k {
        return Err(Error::InvalidParameter(format!(
            "{} targets for a {k}-qubit gate",
            targets.len()
        )));
    }
    for (i, &t) in targets.iter().enumerate() {
        if t >= n {
            return Err(Error::QubitOutOfRange { index: t, n });
        }
        if targets[..i].contains(&t) {
            return Err(Error::InvalidParameter(format!("repeated target qubit {t}")));
        }
    }
    let bits: Vec<usize> = targets.iter().map(|&t| n - 1 - t).collect();
    let target_mask: usize = bits.iter().map(|b| 1usize << b).sum();
    let local_of = |idx: usize| {
        bits.iter()
            .fold(0usize, |acc, &b| (acc << 1) | ((idx >> b) & 1))
    };
    let spread = |local: usize| {
        bits.iter()
            .enumerate()
            .fold(0usize, |acc, (pos, &b)| acc | (((local >> (k - 1 - pos)) & 1) << b))
    };
    let d = 1usize << n;
    let g = gate.matrix();
    let mut out = DMatrix::zeros(d, d);
    for col in 0..d {
        let rest = col & !target_mask;
        let lc = local_of(col);
        for lr in 0..(1usize << k) {
            let v = g[(lr, lc)];
            if v != c(0.0, 0.0) {
                out[(rest | spread(lr), col)] = v;
            }
        }
    }
    Ok(UnitaryMatrix::from_raw(n, out))
}
