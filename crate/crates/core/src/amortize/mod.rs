//! Amortized stabilizer Rényi entropy of unitaries.
//!
//! The amortized value maximizes `M_alpha((U (x) I_m)|phi>) - M_alpha(|phi>)`
//! over all inputs and ancilla counts; the strict value restricts `|phi>` to
//! stabilizer states, where the subtracted term vanishes.

mod lemmas;
mod optimizer;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

pub use lemmas::{
    a_matrix, b_matrix, direct_min_eigenvalue, outer_product_sum, pauli_pow4, verify_psd_lemmas,
    PsdReport,
};
pub use optimizer::{
    amortized_sre_lower_bound, amortized_sre_lower_bound_with, OptimizerOptions,
    OptimizerReport, RestartResult, DEFAULT_RESTARTS, GRAD_TOL, MAX_ITER, MAX_TOTAL_QUBITS,
};

use crate::error::{Error, Result};
use crate::gates::build_gate;
use crate::pauli::full_spectrum;
use crate::sre::renyi_entropy;
use crate::stabilizer::StabilizerSet;
use crate::state::{StateVector, UnitaryMatrix};

/// `M_alpha((U (x) I_m)|phi>) - M_alpha(|phi>)` for `phi` on `n + m` qubits.
pub fn sre_generation_gap(
    u: &UnitaryMatrix,
    m: usize,
    phi: &StateVector,
    alpha: f64,
) -> Result<f64> {
    if phi.n() != u.n() + m {
        return Err(Error::DimensionMismatch {
            expected: u.n() + m,
            got: phi.n(),
        });
    }
    let out = u.apply_leading(phi)?;
    Ok(renyi_entropy(&out, alpha)?.value - renyi_entropy(phi, alpha)?.value)
}

/// Exact maximum over enumerated stabilizer inputs.
#[derive(Clone, Debug, PartialEq)]
pub struct StrictSre {
    /// In bits.
    pub value: f64,
    pub argmax: usize,
    pub maximizer: StateVector,
}

/// `max_{phi in STAB_{n+m}} M_alpha((U (x) I_m)|phi>)`.
pub fn strict_sre_with_ancillas(
    u: &UnitaryMatrix,
    alpha: f64,
    m: usize,
    allow_large: bool,
) -> Result<StrictSre> {
    let set = StabilizerSet::shared(u.n() + m, allow_large)?;
    let vals = set
        .states()
        .par_iter()
        .map(|phi| Ok(renyi_entropy(&u.apply_leading(phi)?, alpha)?.value))
        .collect::<Result<Vec<f64>>>()?;
    let mut best = 0;
    for (i, v) in vals.iter().enumerate() {
        if *v > vals[best] {
            best = i;
        }
    }
    Ok(StrictSre {
        value: vals[best],
        argmax: best,
        maximizer: set.get(best).clone(),
    })
}

/// Strict amortized SRE with `m = n`: `n = 1` uses the 60 states of
/// `STAB_2`, `n = 2` the 36720 states of `STAB_4` and needs `allow_large`.
pub fn strict_amortized_sre(
    u: &UnitaryMatrix,
    alpha: f64,
    allow_large: bool,
) -> Result<StrictSre> {
    match u.n() {
        1 => strict_sre_with_ancillas(u, alpha, 1, false),
        2 => strict_sre_with_ancillas(u, alpha, 2, allow_large),
        n => Err(Error::Unsupported(format!(
            "strict amortized SRE only for n <= 2, got {n}"
        ))),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum InequalityGate {
    T,
    Ccz,
}

impl std::str::FromStr for InequalityGate {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "t" => Ok(Self::T),
            "ccz" => Ok(Self::Ccz),
            other => Err(Error::InvalidParameter(format!(
                "inequality gate must be t or ccz, got '{other}'"
            ))),
        }
    }
}

impl InequalityGate {
    /// `(a, b)` in `a R_2(out) - b R_2(in) >= 0`.
    pub fn weights(self) -> (f64, f64) {
        match self {
            Self::T => (4.0, 3.0),
            Self::Ccz => (32.0, 11.0),
        }
    }

    pub fn ancilla_range(self) -> &'static [usize] {
        match self {
            Self::T => &[0, 1, 2],
            Self::Ccz => &[0, 1],
        }
    }

    pub fn unitary(self) -> UnitaryMatrix {
        match self {
            Self::T => build_gate("t", &[], 1),
            Self::Ccz => build_gate("ccz", &[], 3),
        }
        .expect("library gate")
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct R2InequalityReport {
    pub gate: InequalityGate,
    pub trials: usize,
    pub seed: u64,
    /// Minimum over all trials and ancilla counts.
    pub min_value: f64,
    /// `(m, min over trials)`.
    pub min_per_m: Vec<(usize, f64)>,
    /// The combination at the equality case `|+>` (T) or `|+++>` (CCZ).
    pub equality_case: f64,
}

/// `a R_2((U (x) I)|psi>) - b R_2(|psi>)`.
pub fn r2_combination(gate: InequalityGate, psi: &StateVector) -> Result<f64> {
    let u = gate.unitary();
    let (a, b) = gate.weights();
    let out = u.apply_leading(psi)?;
    Ok(a * full_spectrum(&out)?.r_alpha(2.0) - b * full_spectrum(psi)?.r_alpha(2.0))
}

/// Evaluates the R_2 inequality on `trials` Haar-random states per ancilla
/// count.
pub fn verify_r2_inequalities(
    gate: InequalityGate,
    trials: usize,
    seed: u64,
) -> Result<R2InequalityReport> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be >= 1".into()));
    }
    let n = gate.unitary().n();
    let mut min_per_m = Vec::new();
    for &m in gate.ancilla_range() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(m as u64);
        let states: Vec<StateVector> = (0..trials)
            .map(|_| StateVector::haar_random(n + m, &mut rng))
            .collect();
        let vals = states
            .par_iter()
            .map(|psi| r2_combination(gate, psi))
            .collect::<Result<Vec<f64>>>()?;
        min_per_m.push((m, vals.iter().copied().fold(f64::INFINITY, f64::min)));
    }
    let equality_case = r2_combination(gate, &StateVector::plus(n))?;
    Ok(R2InequalityReport {
        gate,
        trials,
        seed,
        min_value: min_per_m.iter().map(|x| x.1).fold(f64::INFINITY, f64::min),
        min_per_m,
        equality_case,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn phase_state(phi: f64) -> StateVector {
        StateVector::new(vec![
            Complex64::new(FRAC_1_SQRT_2, 0.0),
            Complex64::from_polar(FRAC_1_SQRT_2, phi),
        ])
        .unwrap()
    }

    #[test]
    fn generation_gap_examples() {
        let t = build_gate("t", &[], 1).unwrap();
        let g = sre_generation_gap(&t, 0, &StateVector::plus(1), 2.0).unwrap();
        assert!((g - (2.0 - 3f64.log2())).abs() < 1e-12);
        let sq = build_gate("sqrt_t", &[], 1).unwrap();
        let g = sre_generation_gap(&sq, 0, &phase_state(PI / 10.0), 2.0).unwrap();
        let want = ((7.0 + (2.0 * PI / 5.0).cos()) / (7.0 + (9.0 * PI / 10.0).cos())).log2();
        assert!((g - want).abs() < 1e-12);
        assert!(g > 3.0 - 7f64.log2());
        let h = build_gate("h", &[], 1).unwrap();
        let g = sre_generation_gap(&h, 1, &StateVector::plus(2), 2.0).unwrap();
        assert!(g.abs() < 1e-12);
        assert!(sre_generation_gap(&t, 1, &StateVector::plus(1), 2.0).is_err());
    }

    #[test]
    fn strict_values() {
        let t = build_gate("t", &[], 1).unwrap();
        let s = strict_amortized_sre(&t, 2.0, false).unwrap();
        assert!((s.value - (2.0 - 3f64.log2())).abs() < 1e-12);
        let h = build_gate("h", &[], 1).unwrap();
        assert!(strict_amortized_sre(&h, 2.0, false).unwrap().value.abs() < 1e-12);
        let sq = build_gate("sqrt_t", &[], 1).unwrap();
        assert!(strict_amortized_sre(&sq, 2.0, false).unwrap().value >= 3.0 - 7f64.log2() - 1e-12);
        let cx = build_gate("cnot", &[], 2).unwrap();
        assert!(strict_amortized_sre(&cx, 2.0, false).is_err());
    }

    #[test]
    fn r2_equality_cases_and_small_random_run() {
        let r = verify_r2_inequalities(InequalityGate::T, 50, 1).unwrap();
        assert!(r.equality_case.abs() < 1e-12);
        assert!(r.min_value >= -1e-9);
        let r = verify_r2_inequalities(InequalityGate::Ccz, 20, 1).unwrap();
        assert!(r.equality_case.abs() < 1e-12);
        assert!(r.min_value >= -1e-9);
        let plus0 = StateVector::plus(1).tensor(&StateVector::zero(1));
        assert!(r2_combination(InequalityGate::T, &plus0).unwrap().abs() < 1e-12);
    }
}
