//! Robustness of magic as a linear program in the Pauli-coefficient basis.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::simplex::LinearProgram;
use super::Decomposition;
use crate::error::{Error, Result};
use crate::pauli::full_spectrum;
use crate::stabilizer::StabilizerSet;
use crate::state::StateVector;

/// Reusable LP data for one stabilizer basis.
///
/// Column `i` holds the Pauli spectrum of stabilizer state `i`, so the
/// constraint `sum_i q_i |s_i><s_i| = |psi><psi|` becomes
/// `sum_i q_i e_P(s_i) = e_P(psi)` for all `4^n` strings `P`.
pub struct RomSolver<'a> {
    basis: &'a StabilizerSet,
    spectra: DMatrix<f64>,
}

impl<'a> RomSolver<'a> {
    pub fn new(basis: &'a StabilizerSet) -> Result<Self> {
        let n = basis.n();
        let rows = 1usize << (2 * n);
        let mut spectra = DMatrix::zeros(rows, basis.count());
        for (i, s) in basis.states().iter().enumerate() {
            let sp = full_spectrum(s)?;
            for (r, v) in sp.values().iter().enumerate() {
                spectra[(r, i)] = v.round();
            }
        }
        Ok(Self { basis, spectra })
    }

    pub fn basis(&self) -> &StabilizerSet {
        self.basis
    }

    /// Returns `R(psi)` and an optimal quasi-probability decomposition.
    pub fn solve(&self, state: &StateVector) -> Result<(f64, Decomposition)> {
        let n = self.basis.n();
        if state.n() != n {
            return Err(Error::DimensionMismatch {
                expected: 1 << n,
                got: state.dim(),
            });
        }
        state.check_normalized()?;
        if let Some(i) = self.basis.find(state) {
            let d = Decomposition::new(
                n,
                vec![i],
                vec![Complex64::new(1.0, 0.0)],
                1.0,
                0.0,
            );
            return Ok((1.0, d));
        }
        let target = full_spectrum(state)?;
        let (rows, count) = self.spectra.shape();
        let mut a = DMatrix::zeros(rows, 2 * count);
        a.view_mut((0, 0), (rows, count)).copy_from(&self.spectra);
        a.view_mut((0, count), (rows, count))
            .copy_from(&(-&self.spectra));
        let lp = LinearProgram::new(a, target.values().to_vec(), vec![1.0; 2 * count])?;
        let sol = lp.solve()?;
        let q: Vec<f64> = (0..count).map(|i| sol.x[i] - sol.x[count + i]).collect();
        let idx: Vec<usize> = (0..count).filter(|&i| q[i].abs() > 1e-14).collect();
        let coeffs: Vec<Complex64> = idx.iter().map(|&i| Complex64::new(q[i], 0.0)).collect();
        let objective: f64 = q.iter().map(|v| v.abs()).sum();
        let residual = density_residual(self.basis, &idx, &coeffs, state);
        Ok((objective, Decomposition::new(n, idx, coeffs, objective, residual)))
    }
}

/// `max |sum_i q_i s_i s_i^dag - psi psi^dag|` entrywise.
fn density_residual(
    basis: &StabilizerSet,
    idx: &[usize],
    q: &[Complex64],
    psi: &StateVector,
) -> f64 {
    let d = psi.dim();
    let a = psi.amplitudes();
    let mut rho = DMatrix::<Complex64>::from_fn(d, d, |r, c| -a[r] * a[c].conj());
    for (&i, &w) in idx.iter().zip(q) {
        let s = basis.get(i).amplitudes();
        for r in 0..d {
            for c in 0..d {
                rho[(r, c)] += w * s[r] * s[c].conj();
            }
        }
    }
    rho.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

/// `R(psi)` over `basis`.
pub fn robustness_of_magic(
    state: &StateVector,
    basis: &StabilizerSet,
) -> Result<(f64, Decomposition)> {
    RomSolver::new(basis)?.solve(state)
}
