//! Convex magic measures over enumerated stabilizer states: robustness of
//! magic (LP) and stabilizer extent (complex l1 minimization), plus their
//! strict amortized versions for single-qubit unitaries.

mod extent;
mod rom;
pub mod simplex;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

pub use extent::{stabilizer_extent, ExtentSolution, ExtentSolver, ADMM_MAX_ITER, ADMM_TOL};
pub use rom::{robustness_of_magic, RomSolver};

use crate::error::{Error, Result};
use crate::stabilizer::StabilizerSet;
use crate::state::{StateVector, UnitaryMatrix};

/// A decomposition over the basis of all `n`-qubit stabilizer states.
///
/// Coefficients are real for robustness of magic and complex for the
/// extent. `basis_indices[k]` indexes into the enumeration order.
#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition {
    pub basis_n: usize,
    pub basis_indices: Vec<usize>,
    pub coefficients: Vec<Complex64>,
    pub objective: f64,
    /// Max-norm constraint violation.
    pub residual: f64,
}

#[derive(Serialize)]
struct DecompositionJson<'a> {
    objective: f64,
    basis_indices: &'a [usize],
    coefficients_re: Vec<f64>,
    coefficients_im: Vec<f64>,
    residual: f64,
}

impl Decomposition {
    pub fn new(
        basis_n: usize,
        basis_indices: Vec<usize>,
        coefficients: Vec<Complex64>,
        objective: f64,
        residual: f64,
    ) -> Self {
        Self {
            basis_n,
            basis_indices,
            coefficients,
            objective,
            residual,
        }
    }

    pub fn l1_norm(&self) -> f64 {
        self.coefficients.iter().map(|c| c.norm()).sum()
    }

    pub fn to_json(&self) -> Result<String> {
        let j = DecompositionJson {
            objective: self.objective,
            basis_indices: &self.basis_indices,
            coefficients_re: self.coefficients.iter().map(|c| c.re).collect(),
            coefficients_im: self.coefficients.iter().map(|c| c.im).collect(),
            residual: self.residual,
        };
        Ok(serde_json::to_string_pretty(&j)?)
    }
}

/// Result of a strict amortized maximization.
#[derive(Clone, Debug, PartialEq)]
pub struct StrictMax {
    /// In bits.
    pub value: f64,
    /// Index of the maximizing input in the `2n`-qubit stabilizer set.
    pub argmax: usize,
}

fn strict_inputs(u: &UnitaryMatrix) -> Result<std::sync::Arc<StabilizerSet>> {
    if u.n() != 1 {
        return Err(Error::Unsupported(format!(
            "strict amortized RoM/extent only for single-qubit unitaries, got n = {}",
            u.n()
        )));
    }
    StabilizerSet::shared(2, false)
}

/// First index of the maximum, so ties follow enumeration order.
fn argmax(vals: &[f64]) -> StrictMax {
    let mut best = StrictMax {
        value: f64::NEG_INFINITY,
        argmax: 0,
    };
    for (i, &v) in vals.iter().enumerate() {
        if v > best.value {
            best = StrictMax { value: v, argmax: i };
        }
    }
    best
}

/// `max_{phi in STAB_2} log2 R((U (x) I)|phi>)` for single-qubit `U`.
pub fn strict_amortized_log_rom(u: &UnitaryMatrix) -> Result<StrictMax> {
    let set = strict_inputs(u)?;
    let solver = RomSolver::new(&set)?;
    let vals = set
        .states()
        .par_iter()
        .map(|phi| {
            let out = u.apply_leading(phi)?;
            Ok(solver.solve(&out)?.0.log2().max(0.0))
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(argmax(&vals))
}

/// `max_{phi in STAB_2} log2 xi((U (x) I)|phi>)` for single-qubit `U`.
pub fn strict_amortized_log_extent(u: &UnitaryMatrix) -> Result<StrictMax> {
    let set = strict_inputs(u)?;
    let solver = ExtentSolver::new(&set)?;
    let vals = set
        .states()
        .par_iter()
        .map(|phi| {
            let out = u.apply_leading(phi)?;
            Ok(solver.solve(&out)?.extent.log2().max(0.0))
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(argmax(&vals))
}

/// Convenience wrapper returning only the value in bits.
pub fn log_rom(state: &StateVector) -> Result<f64> {
    let set = StabilizerSet::shared(state.n(), false)?;
    Ok(robustness_of_magic(state, &set)?.0.log2())
}
