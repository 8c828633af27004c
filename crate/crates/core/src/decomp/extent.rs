//! Stabilizer extent by complex basis pursuit.
//!
//! `min ||c||_1  s.t.  A c = psi` where the columns of `A` are the basis
//! states. Scaled-form ADMM on `x - z = 0`, with `x` projected onto the
//! affine constraint set and `z` soft-thresholded. The optimum is certified
//! by a dual point `y` with `max_j |<phi_j|y>| <= 1`, for which
//! `Re <y, psi> <= min ||c||_1`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::Decomposition;
use crate::error::{Error, Result};
use crate::stabilizer::StabilizerSet;
use crate::state::StateVector;

pub const ADMM_TOL: f64 = 1e-9;
pub const ADMM_MAX_ITER: usize = 200_000;
const RELAX: f64 = 1.6;
/// Iterations between certificate checks and penalty updates.
const CHECK_EVERY: usize = 20;
/// The penalty is frozen after this many iterations so ADMM's convergence
/// guarantee applies to the tail.
const ADAPT_UNTIL: usize = 2_000;

/// Full solver output, including the dual certificate.
#[derive(Clone, Debug)]
pub struct ExtentSolution {
    /// `xi = ||c||_1^2` at the returned feasible point.
    pub extent: f64,
    pub l1: f64,
    /// Certified lower bound on `min ||c||_1`.
    pub dual_l1: f64,
    pub iterations: usize,
    pub decomposition: Decomposition,
}

impl ExtentSolution {
    /// `l1 - dual_l1`, an upper bound on the suboptimality of `l1`.
    pub fn gap(&self) -> f64 {
        self.l1 - self.dual_l1
    }

    /// Certified lower bound on the extent.
    pub fn extent_lower_bound(&self) -> f64 {
        self.dual_l1.max(0.0).powi(2)
    }
}

pub struct ExtentSolver<'a> {
    basis: &'a StabilizerSet,
    a: DMatrix<Complex64>,
    /// `A^dag (A A^dag)^{-1}`
    pinv: DMatrix<Complex64>,
    /// `(A A^dag)^{-1}`
    gram_inv: DMatrix<Complex64>,
    pub tol: f64,
    pub max_iter: usize,
}

impl<'a> ExtentSolver<'a> {
    pub fn new(basis: &'a StabilizerSet) -> Result<Self> {
        let d = 1usize << basis.n();
        let a = DMatrix::from_fn(d, basis.count(), |r, c| basis.get(c).amplitudes()[r]);
        let gram = &a * a.adjoint();
        let gram_inv = gram
            .cholesky()
            .ok_or_else(|| Error::Numerical("stabilizer basis does not span".into()))?
            .inverse();
        let pinv = a.adjoint() * &gram_inv;
        Ok(Self {
            basis,
            a,
            pinv,
            gram_inv,
            tol: ADMM_TOL,
            max_iter: ADMM_MAX_ITER,
        })
    }

    pub fn basis(&self) -> &StabilizerSet {
        self.basis
    }

    fn project(&self, v: &DVector<Complex64>, b: &DVector<Complex64>) -> DVector<Complex64> {
        let r = &self.a * v - b;
        v - &self.pinv * r
    }

    pub fn solve(&self, state: &StateVector) -> Result<ExtentSolution> {
        let n = self.basis.n();
        if state.n() != n {
            return Err(Error::DimensionMismatch {
                expected: 1 << n,
                got: state.dim(),
            });
        }
        state.check_normalized()?;
        if let Some(i) = self.basis.find(state) {
            let phase = self.basis.get(i).inner(state)?;
            let phase = phase / phase.norm();
            let dec = Decomposition::new(n, vec![i], vec![phase], 1.0, 0.0);
            return Ok(ExtentSolution {
                extent: 1.0,
                l1: 1.0,
                dual_l1: 1.0,
                iterations: 0,
                decomposition: dec,
            });
        }
        let b = DVector::from_column_slice(state.amplitudes());
        let count = self.basis.count();
        let mut rho = 1.0;
        let mut x = &self.pinv * &b;
        let mut z = x.clone();
        let mut u = DVector::<Complex64>::zeros(count);
        // x is always feasible, so its l1 norm is an upper bound
        let l1_of = |v: &DVector<Complex64>| v.iter().map(|c| c.norm()).sum::<f64>();
        let mut best_x = x.clone();
        let mut l1 = l1_of(&x);
        let mut dual_l1 = 0.0f64;
        let mut iterations = 0;
        let mut converged = false;
        while iterations < self.max_iter {
            iterations += 1;
            x = self.project(&(&z - &u), &b);
            let z_old = z.clone();
            let x_hat = &x * Complex64::new(RELAX, 0.0) + &z_old * Complex64::new(1.0 - RELAX, 0.0);
            let kappa = 1.0 / rho;
            z = DVector::from_iterator(
                count,
                (&x_hat + &u).iter().map(|v| {
                    let m = v.norm();
                    if m <= kappa {
                        Complex64::new(0.0, 0.0)
                    } else {
                        v * ((m - kappa) / m)
                    }
                }),
            );
            u += &x_hat - &z;
            if iterations % CHECK_EVERY != 0 {
                continue;
            }
            let cand = l1_of(&x);
            if cand < l1 {
                l1 = cand;
                best_x.copy_from(&x);
            }
            dual_l1 = dual_l1.max(self.dual_bound(&(&u * Complex64::new(rho, 0.0)), &b));
            if l1 - dual_l1 <= self.tol * l1 {
                converged = true;
                break;
            }
            let r = (&x - &z).norm();
            let s = rho * (&z - &z_old).norm();
            if iterations > ADAPT_UNTIL {
                continue;
            }
            if r > 10.0 * s {
                rho *= 2.0;
                u /= Complex64::new(2.0, 0.0);
            } else if s > 10.0 * r {
                rho /= 2.0;
                u *= Complex64::new(2.0, 0.0);
            }
        }
        if !converged {
            return Err(Error::NotConverged(format!(
                "extent ADMM gap {:e} above tolerance {:e} after {} iterations",
                l1 - dual_l1,
                self.tol,
                self.max_iter
            )));
        }
        let x = best_x;

        let idx: Vec<usize> = (0..count).filter(|&i| x[i].norm() > 1e-14).collect();
        let coeffs: Vec<Complex64> = idx.iter().map(|&i| x[i]).collect();
        let residual = (&self.a * &x - &b)
            .iter()
            .map(|v| v.norm())
            .fold(0.0, f64::max);
        let extent = l1 * l1;
        Ok(ExtentSolution {
            extent,
            l1,
            dual_l1,
            iterations,
            decomposition: Decomposition::new(n, idx, coeffs, extent, residual),
        })
    }

    /// Lower bound from the multiplier estimate `lambda`, which approximates
    /// `A^dag y` at the optimum.
    fn dual_bound(&self, lambda: &DVector<Complex64>, b: &DVector<Complex64>) -> f64 {
        let y = &self.gram_inv * (&self.a * lambda);
        let scale = (self.a.adjoint() * &y)
            .iter()
            .map(|v| v.norm())
            .fold(0.0, f64::max);
        if scale == 0.0 {
            return 0.0;
        }
        y.dotc(b).re / scale
    }
}

/// `xi(psi)` over `basis`.
pub fn stabilizer_extent(
    state: &StateVector,
    basis: &StabilizerSet,
) -> Result<(f64, Decomposition)> {
    let sol = ExtentSolver::new(basis)?.solve(state)?;
    Ok((sol.extent, sol.decomposition))
}
