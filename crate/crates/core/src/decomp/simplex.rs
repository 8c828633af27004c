//! Dense two-phase revised simplex with Bland's anti-cycling rule.
//!
//! Solves `min c^T x  s.t.  A x = b, x >= 0`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

type Lu = nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>;

/// Pivot elements smaller than this are treated as zero.
const PIVOT_EPS: f64 = 1e-9;
/// Reduced costs above `-COST_EPS` count as nonnegative.
const COST_EPS: f64 = 1e-10;
/// Phase-one objective above this means the system is infeasible.
const FEAS_EPS: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub objective: f64,
    pub pivots: usize,
}

/// Standard-form linear program.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    pub a: DMatrix<f64>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
    pub max_pivots: usize,
}

impl LinearProgram {
    pub fn new(a: DMatrix<f64>, b: Vec<f64>, c: Vec<f64>) -> Result<Self> {
        if a.nrows() != b.len() || a.ncols() != c.len() {
            return Err(Error::InvalidParameter(format!(
                "LP shape mismatch: A is {}x{}, b has {}, c has {}",
                a.nrows(),
                a.ncols(),
                b.len(),
                c.len()
            )));
        }
        Ok(Self {
            a,
            b,
            c,
            max_pivots: 1_000_000,
        })
    }

    pub fn solve(&self) -> Result<LpSolution> {
        Revised::new(self).run()
    }
}

/// Revised simplex state. The basis matrix is refactorized from the
/// original columns on every iteration, which keeps degenerate pivoting
/// sequences from accumulating error.
struct Revised<'a> {
    /// `[A | I]` with rows scaled so that `b >= 0`.
    a: DMatrix<f64>,
    b: DVector<f64>,
    basis: Vec<usize>,
    /// Number of original (non-artificial) columns.
    n: usize,
    pivots: usize,
    lp: &'a LinearProgram,
}

impl<'a> Revised<'a> {
    fn new(lp: &'a LinearProgram) -> Self {
        let (m, n) = lp.a.shape();
        let mut a = DMatrix::zeros(m, n + m);
        let mut b = DVector::zeros(m);
        for i in 0..m {
            let s = if lp.b[i] < 0.0 { -1.0 } else { 1.0 };
            for j in 0..n {
                a[(i, j)] = s * lp.a[(i, j)];
            }
            a[(i, n + i)] = 1.0;
            b[i] = s * lp.b[i];
        }
        Self {
            a,
            b,
            basis: (n..n + m).collect(),
            n,
            pivots: 0,
            lp,
        }
    }

    /// LU factors of the basis matrix and of its transpose.
    fn basis_lu(&self) -> Result<(Lu, Lu)> {
        let m = self.basis.len();
        let bm = DMatrix::from_fn(m, m, |r, c| self.a[(r, self.basis[c])]);
        let lut = bm.transpose().lu();
        let lu = bm.lu();
        if !lu.is_invertible() {
            return Err(Error::Numerical("singular simplex basis".into()));
        }
        Ok((lu, lut))
    }

    /// Bland's rule over columns `< allowed` with cost vector `cost`.
    fn optimize(&mut self, cost: &[f64], allowed: usize) -> Result<DVector<f64>> {
        let m = self.basis.len();
        loop {
            if self.pivots > self.lp.max_pivots {
                return Err(Error::NotConverged(format!(
                    "simplex exceeded {} pivots",
                    self.lp.max_pivots
                )));
            }
            let (lu, lut) = self.basis_lu()?;
            let xb = lu.solve(&self.b).expect("invertible");
            let cb = DVector::from_iterator(m, self.basis.iter().map(|&j| cost[j]));
            let y = lut
                .solve(&cb)
                .ok_or_else(|| Error::Numerical("singular simplex basis".into()))?;
            let mut in_basis = vec![false; self.a.ncols()];
            for &j in &self.basis {
                in_basis[j] = true;
            }
            let entering = (0..allowed).find(|&j| {
                !in_basis[j] && cost[j] - self.a.column(j).dot(&y) < -COST_EPS
            });
            let Some(col) = entering else {
                return Ok(xb);
            };
            let d = lu.solve(&self.a.column(col).into_owned()).expect("invertible");
            let mut best: Option<(usize, f64)> = None;
            for i in 0..m {
                if d[i] > PIVOT_EPS {
                    let ratio = xb[i].max(0.0) / d[i];
                    best = match best {
                        Some((bi, br))
                            if !(ratio < br - 1e-13
                                || ((ratio - br).abs() <= 1e-13
                                    && self.basis[i] < self.basis[bi])) =>
                        {
                            Some((bi, br))
                        }
                        _ => Some((i, ratio)),
                    };
                }
            }
            let Some((row, _)) = best else {
                return Err(Error::Numerical("linear program is unbounded".into()));
            };
            self.basis[row] = col;
            self.pivots += 1;
        }
    }

    fn run(mut self) -> Result<LpSolution> {
        let n = self.n;
        let total = self.a.ncols();
        let mut phase1 = vec![0.0; total];
        for c in phase1.iter_mut().skip(n) {
            *c = 1.0;
        }
        let xb = self.optimize(&phase1, total)?;
        let infeas: f64 = (0..self.basis.len())
            .filter(|&i| self.basis[i] >= n)
            .map(|i| xb[i].max(0.0))
            .sum();
        if infeas > FEAS_EPS {
            return Err(Error::Infeasible);
        }
        // swap zero-valued artificials for original columns; rows where no
        // swap exists are linearly dependent and get dropped
        while let Some(row) = (0..self.basis.len()).find(|&i| self.basis[i] >= n) {
            let (_, lut) = self.basis_lu()?;
            let mut e = DVector::zeros(self.basis.len());
            e[row] = 1.0;
            let w = lut.solve(&e).expect("invertible");
            let replacement = (0..n).find(|&j| {
                !self.basis.contains(&j) && self.a.column(j).dot(&w).abs() > 1e-7
            });
            match replacement {
                Some(j) => self.basis[row] = j,
                None => {
                    let art = self.basis[row];
                    let drop_row = (0..self.a.nrows())
                        .find(|&r| self.a[(r, art)] == 1.0)
                        .expect("artificial column has a unit entry");
                    self.a = self.a.clone().remove_row(drop_row);
                    self.b = self.b.clone().remove_row(drop_row);
                    self.basis.remove(row);
                }
            }
        }
        let mut cost = self.lp.c.clone();
        cost.extend(std::iter::repeat_n(0.0, total - n));
        let xb = self.optimize(&cost, n)?;
        let mut x = vec![0.0; n];
        for (i, &j) in self.basis.iter().enumerate() {
            x[j] = xb[i].max(0.0);
        }
        let objective = x.iter().zip(&self.lp.c).map(|(a, b)| a * b).sum();
        Ok(LpSolution {
            x,
            objective,
            pivots: self.pivots,
        })
    }
}
