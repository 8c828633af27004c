//! Nonstabilizerness ("magic") of pure states and unitaries.
//!
//! The crate computes stabilizer Rényi entropies from full Pauli spectra,
//! amortized and strict-amortized magic of unitaries, convex magic measures
//! (robustness of magic, stabilizer extent) over enumerated stabilizer
//! states, and T-count lower bounds from Choi-state entropies.
//!
//! Conventions used throughout:
//!
//! - qubit 0 is the most significant bit of a basis index;
//! - a Pauli string is stored as `(x_mask, z_mask)` and denotes the Hermitian
//!   operator `i^{|x & z|} X^x Z^z`, so every expectation value is real;
//! - entropies are in bits, angles in radians.

pub mod amortize;
pub mod circuit;
pub mod cli;
pub mod decomp;
pub mod error;
pub mod gates;
pub mod hamiltonian;
pub mod io;
pub mod pauli;
pub mod sre;
pub mod stabilizer;
pub mod state;
pub mod tcount;

pub use error::{Error, Result};
pub use pauli::{PauliSpectrum, PauliString};
pub use state::{StateVector, UnitaryMatrix};

pub use num_complex::Complex64;

/// `2 - log2(3)`, the amortized 2-SRE of the T gate.
pub fn t_gate_amortized_sre() -> f64 {
    2.0 - 3f64.log2()
}

/// `5 - log2(11)`, the amortized 2-SRE of the CCZ gate.
pub fn ccz_amortized_sre() -> f64 {
    5.0 - 11f64.log2()
}
