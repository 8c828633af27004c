//! Stabilizer Rényi entropies and related Pauli-spectrum quantities.
//!
//! With `Xi_P = e_P^2 / 2^n`, the alpha-SRE of a pure state is
//! `M_alpha = log2(sum_P Xi_P^alpha) / (1 - alpha) - n`, and in terms of the
//! raw moment `R_alpha = sum_P |e_P|^{2 alpha}`,
//! `M_alpha = (log2 R_alpha - n alpha) / (1 - alpha) - n`. For `alpha = 2`
//! this is `n - log2 R_2`. `alpha = 1` is the Shannon limit.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::pauli::{full_spectrum, PauliSpectrum};
use crate::stabilizer::StabilizerSet;
use crate::state::{StateVector, UnitaryMatrix};

/// Default `tol` for [`stabilizer_nullity`].
pub const NULLITY_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SreValue {
    pub alpha: f64,
    /// `M_alpha` in bits.
    pub value: f64,
    /// `R_alpha = sum_P |e_P|^{2 alpha}` (for `alpha = 1`, `sum_P e_P^2`).
    pub r_alpha: f64,
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !alpha.is_finite() || alpha < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "alpha must be a finite number >= 0, got {alpha}"
        )));
    }
    Ok(())
}

/// `M_alpha` from a precomputed spectrum.
pub fn renyi_from_spectrum(sp: &PauliSpectrum, alpha: f64) -> Result<SreValue> {
    check_alpha(alpha)?;
    let n = sp.n() as f64;
    if alpha == 1.0 {
        let dim = (1u64 << sp.n()) as f64;
        let mut h = 0.0;
        for &e in sp.values() {
            let xi = e * e / dim;
            if xi > 0.0 {
                h -= xi * xi.log2();
            }
        }
        return Ok(SreValue {
            alpha,
            value: h - n,
            r_alpha: sp.purity_sum(),
        });
    }
    let r = sp.r_alpha(alpha);
    let value = if alpha == 2.0 {
        n - r.log2()
    } else {
        (r.log2() - n * alpha) / (1.0 - alpha) - n
    };
    Ok(SreValue {
        alpha,
        value,
        r_alpha: r,
    })
}

/// `M_alpha(|psi>)`.
pub fn renyi_entropy(state: &StateVector, alpha: f64) -> Result<SreValue> {
    check_alpha(alpha)?;
    renyi_from_spectrum(&full_spectrum(state)?, alpha)
}

/// `R_2 = sum_P e_P^4`.
pub fn r2_sum(state: &StateVector) -> Result<f64> {
    Ok(full_spectrum(state)?.r_alpha(2.0))
}

/// `n - log2 |{P : |e_P| >= 1 - tol}|`; the counted set must have
/// power-of-two size.
pub fn stabilizer_nullity(state: &StateVector, tol: f64) -> Result<usize> {
    nullity_from_spectrum(&full_spectrum(state)?, tol)
}

pub fn nullity_from_spectrum(sp: &PauliSpectrum, tol: f64) -> Result<usize> {
    let count = sp.count_unit(tol);
    if !count.is_power_of_two() {
        return Err(Error::Numerical(format!(
            "{count} Pauli strings reach |e_P| >= 1 - {tol:e}; not a power of two"
        )));
    }
    let log = count.trailing_zeros() as usize;
    if log > sp.n() {
        return Err(Error::Numerical(format!(
            "{count} unit expectations exceed 2^{}",
            sp.n()
        )));
    }
    Ok(sp.n() - log)
}

/// Mean of `M_alpha(U|phi>)` over all pure stabilizer states `|phi>`.
pub fn nonstabilizing_power(u: &UnitaryMatrix, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let set = StabilizerSet::shared(u.n(), false)?;
    let vals = set
        .states()
        .par_iter()
        .map(|phi| renyi_entropy(&u.apply(phi)?, alpha).map(|v| v.value))
        .collect::<Result<Vec<f64>>>()?;
    // index-order summation keeps the result independent of the thread pool
    Ok(vals.iter().sum::<f64>() / vals.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::build_gate;
    use crate::state::choi_state;
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
    fn t_plus_and_boost_example() {
        let m = renyi_entropy(&phase_state(PI / 4.0), 2.0).unwrap();
        assert!((m.value - (2.0 - 3f64.log2())).abs() < 1e-12);
        assert!((m.r_alpha - 1.5).abs() < 1e-12);
        let psi = phase_state(PI / 10.0);
        let m = renyi_entropy(&psi, 2.0).unwrap().value;
        assert!((m - (3.0 - (7.0 + (2.0 * PI / 5.0).cos()).log2())).abs() < 1e-12);
        let sq = build_gate("sqrt_t", &[], 1).unwrap();
        let m = renyi_entropy(&sq.apply(&psi).unwrap(), 2.0).unwrap().value;
        assert!((m - (3.0 - (7.0 + (9.0 * PI / 10.0).cos()).log2())).abs() < 1e-12);
    }

    #[test]
    fn r2_examples() {
        assert!((r2_sum(&phase_state(PI / 4.0)).unwrap() - 1.5).abs() < 1e-12);
        assert!((r2_sum(&phase_state(PI / 8.0)).unwrap() - 1.75).abs() < 1e-12);
        let ccz = build_gate("ccz", &[], 3).unwrap();
        let r = r2_sum(&ccz.apply(&StateVector::plus(3)).unwrap()).unwrap();
        assert!((r - 2.75).abs() < 1e-12);
    }

    #[test]
    fn stabilizer_states_have_zero_sre_for_all_alpha() {
        let r = FRAC_1_SQRT_2;
        let bell = StateVector::new(vec![
            Complex64::new(r, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(r, 0.0),
        ])
        .unwrap();
        for alpha in [0.0, 0.5, 1.0, 2.0, 3.0] {
            assert!(renyi_entropy(&bell, alpha).unwrap().value.abs() < 1e-12);
            assert!(renyi_entropy(&StateVector::zero(3), alpha).unwrap().value.abs() < 1e-12);
        }
    }

    #[test]
    fn relation_between_value_and_r_alpha() {
        let psi = phase_state(0.3);
        for alpha in [0.5, 3.0] {
            let v = renyi_entropy(&psi, alpha).unwrap();
            let want = (v.r_alpha.log2() - alpha) / (1.0 - alpha) - 1.0;
            assert!((v.value - want).abs() < 1e-12);
        }
    }

    #[test]
    fn negative_alpha_rejected() {
        assert!(matches!(
            renyi_entropy(&StateVector::zero(1), -1.0),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn nullity_examples() {
        let t = build_gate("t", &[], 1).unwrap();
        assert_eq!(stabilizer_nullity(&choi_state(&t), NULLITY_TOL).unwrap(), 1);
        let h = build_gate("h", &[], 1).unwrap();
        assert_eq!(stabilizer_nullity(&choi_state(&h), NULLITY_TOL).unwrap(), 0);
        let ccz = build_gate("ccz", &[], 3).unwrap();
        assert_eq!(stabilizer_nullity(&choi_state(&ccz), NULLITY_TOL).unwrap(), 3);
    }

    #[test]
    fn nullity_rejects_non_power_of_two_counts() {
        // with a huge tolerance every one of the 4 strings of T|+> except
        // Z counts: {I, X, Y} has size 3
        assert!(stabilizer_nullity(&phase_state(PI / 4.0), 0.5).is_err());
    }

    #[test]
    fn nonstabilizing_power_examples() {
        let h = build_gate("h", &[], 1).unwrap();
        assert!(nonstabilizing_power(&h, 2.0).unwrap().abs() < 1e-12);
        let sq = build_gate("sqrt_t", &[], 1).unwrap();
        let want = 4.0 / 6.0 * (3.0 - 7f64.log2());
        assert!((nonstabilizing_power(&sq, 2.0).unwrap() - want).abs() < 1e-12);
        assert!(nonstabilizing_power(&UnitaryMatrix::identity(4), 2.0).is_err());
    }
}
