//! Numerical checks of the positive-semidefiniteness lemmas behind the
//! amortized T and CCZ values.
//!
//! `B = sum_{P in {I,X,Y,Z}} P^{(x)4}`, `B_- = I + Z^{(x)4} - X^{(x)4} - Y^{(x)4}`
//! and `A = I^{(x)4} + Z^{(x)4}`, all real `16 x 16`.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

pub const EIG_TOL: f64 = 1e-10;

#[derive(Clone, Debug, Serialize)]
pub struct PsdReport {
    pub b_min_eig: f64,
    pub b_minus_min_eig: f64,
    /// `max |lambda - 4|` over nonzero eigenvalues of `B`.
    pub b_nonzero_eig_dev: f64,
    /// `max |B/2 - sum of four outer products|`, for `+` and `-`.
    pub identity_residual_plus: f64,
    pub identity_residual_minus: f64,
    pub commutator_norm: f64,
    pub two_a_minus_b_min_eig: f64,
    /// Smallest eigenvalue of `8 A^{(x)3} - B^{(x)3}` on 12 qubits, if run.
    pub direct_min_eig: Option<f64>,
}

/// `Y (x) Y`, which is real even though `Y` is not.
fn y_pair() -> DMatrix<f64> {
    // Y (x) Y = -(|00><11| + |11><00|) + |01><10| + |10><01|
    let mut m = DMatrix::zeros(4, 4);
    m[(0, 3)] = -1.0;
    m[(3, 0)] = -1.0;
    m[(1, 2)] = 1.0;
    m[(2, 1)] = 1.0;
    m
}

fn pow4(p: &DMatrix<f64>) -> DMatrix<f64> {
    let p2 = p.kronecker(p);
    p2.kronecker(&p2)
}

fn single(k: usize) -> DMatrix<f64> {
    match k {
        0 => DMatrix::identity(2, 2),
        1 => DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]),
        _ => DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]),
    }
}

/// `P^{(x)4}` for `P` in `I, X, Y, Z` (index 0..4).
pub fn pauli_pow4(k: usize) -> DMatrix<f64> {
    match k {
        2 => {
            let yy = y_pair();
            yy.kronecker(&yy)
        }
        3 => pow4(&single(2)),
        _ => pow4(&single(k)),
    }
}

/// `sum_P s_P P^{(x)4}` with `s_P = sign` on `X`, `Y`.
pub fn b_matrix(sign: f64) -> DMatrix<f64> {
    pauli_pow4(0) + pauli_pow4(1) * sign + pauli_pow4(2) * sign + pauli_pow4(3)
}

pub fn a_matrix() -> DMatrix<f64> {
    pauli_pow4(0) + pauli_pow4(3)
}

/// The four rank-one terms `(|a> + s|b>)(<a| + s<b|)`.
pub fn outer_product_sum(sign: f64) -> DMatrix<f64> {
    let pairs = [(0b0000, 0b1111), (0b0011, 0b1100), (0b0101, 0b1010), (0b0110, 0b1001)];
    let mut m = DMatrix::zeros(16, 16);
    for (a, b) in pairs {
        let mut v = DVector::zeros(16);
        v[a] = 1.0;
        v[b] = sign;
        m += &v * v.transpose();
    }
    m
}

fn min_eig(m: &DMatrix<f64>) -> f64 {
    m.clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

fn require(ok: bool, what: &str, value: f64) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Verification(format!("{what}: offending value {value:e}")))
    }
}

/// Matrix-free `8 A^{(x)3} - B^{(x)3}` in the natural 12-qubit ordering
/// `sum_{P' in Z-type} 8 P'^{(x)4} - sum_{P' in P_3} P'^{(x)4}`, where the
/// four copies of the 3-qubit register are laid out one after another. Each
/// `P'^{(x)4}` is `X^{xxxx} Z^{zzzz}` (the Hermitian phases cancel in the
/// fourth power).
fn direct_apply(v: &[f64], out: &mut [f64]) {
    let rep = |mask: usize| mask | (mask << 3) | (mask << 6) | (mask << 9);
    out.iter_mut().for_each(|o| *o = 0.0);
    for x in 0..8usize {
        for z in 0..8usize {
            let (xr, zr) = (rep(x), rep(z));
            let w = if x == 0 { 8.0 - 1.0 } else { -1.0 };
            for (j, &vj) in v.iter().enumerate() {
                let s = if (zr & j).count_ones() % 2 == 0 { w } else { -w };
                out[j ^ xr] += s * vj;
            }
        }
    }
}

/// Lanczos with full reorthogonalization; returns the smallest Ritz value.
/// Stops early on an invariant subspace, in which case the Ritz values are
/// exact eigenvalues.
pub fn direct_min_eigenvalue(seed: u64, max_steps: usize) -> f64 {
    let d = 1usize << 12;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut q: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
    let nq = q.iter().map(|x| x * x).sum::<f64>().sqrt();
    q.iter_mut().for_each(|x| *x /= nq);
    let mut basis: Vec<Vec<f64>> = vec![q];
    let mut alphas = Vec::new();
    let mut betas = Vec::new();
    let mut w = vec![0.0; d];
    for k in 0..max_steps {
        direct_apply(&basis[k], &mut w);
        let a: f64 = w.iter().zip(&basis[k]).map(|(x, y)| x * y).sum();
        alphas.push(a);
        for _ in 0..2 {
            for b in &basis {
                let c: f64 = w.iter().zip(b).map(|(x, y)| x * y).sum();
                w.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
            }
        }
        let beta = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if beta < 1e-9 || k + 1 == max_steps {
            break;
        }
        betas.push(beta);
        basis.push(w.iter().map(|x| x / beta).collect());
    }
    let k = alphas.len();
    let t = DMatrix::from_fn(k, k, |i, j| {
        if i == j {
            alphas[i]
        } else if i + 1 == j {
            betas[i]
        } else if j + 1 == i {
            betas[j]
        } else {
            0.0
        }
    });
    min_eig(&t)
}

/// Runs all 16x16 checks, plus the 4096-dimensional one when `direct`.
pub fn verify_psd_lemmas(direct: bool) -> Result<PsdReport> {
    let b = b_matrix(1.0);
    let bm = b_matrix(-1.0);
    let a = a_matrix();
    let b_min = min_eig(&b);
    let bm_min = min_eig(&bm);
    require(b_min >= -EIG_TOL, "min eigenvalue of B", b_min)?;
    require(bm_min >= -EIG_TOL, "min eigenvalue of B_-", bm_min)?;
    let dev = b
        .clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .filter(|l| l.abs() > 1e-9)
        .map(|l| (l - 4.0).abs())
        .fold(0.0, f64::max);
    require(dev < 1e-10, "nonzero eigenvalue of B differs from 4", dev)?;
    let res_p = (&b * 0.5 - outer_product_sum(1.0)).amax();
    let res_m = (&bm * 0.5 - outer_product_sum(-1.0)).amax();
    require(res_p < 1e-14, "outer-product identity (+)", res_p)?;
    require(res_m < 1e-14, "outer-product identity (-)", res_m)?;
    let comm = (&a * &b - &b * &a).norm();
    require(comm < 1e-12, "commutator of A and B", comm)?;
    let ab_min = min_eig(&(&a * 2.0 - &b));
    require(ab_min >= -EIG_TOL, "min eigenvalue of 2A - B", ab_min)?;
    let direct_min_eig = if direct {
        let v = direct_min_eigenvalue(7, 60);
        require(v >= -1e-8, "min eigenvalue of 8 A^3 - B^3", v)?;
        Some(v)
    } else {
        None
    };
    Ok(PsdReport {
        b_min_eig: b_min,
        b_minus_min_eig: bm_min,
        b_nonzero_eig_dev: dev,
        identity_residual_plus: res_p,
        identity_residual_minus: res_m,
        commutator_norm: comm,
        two_a_minus_b_min_eig: ab_min,
        direct_min_eig,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::PauliString;

    /// `P^{(x)4}` from a complex 4-qubit Pauli string matrix.
    fn pow4_oracle(label: char) -> DMatrix<f64> {
        let s: String = std::iter::repeat_n(label, 4).collect();
        let p = PauliString::from_label(&s).unwrap();
        let mut m = DMatrix::zeros(16, 16);
        for j in 0..16 {
            let e = crate::pauli::apply_pauli(&crate::StateVector::basis(4, j), &p).unwrap();
            for (i, a) in e.amplitudes().iter().enumerate() {
                assert!(a.im.abs() < 1e-15);
                m[(i, j)] = a.re;
            }
        }
        m
    }

    #[test]
    fn fourth_powers_match_pauli_strings() {
        for (k, c) in ['I', 'X', 'Y', 'Z'].into_iter().enumerate() {
            assert_eq!(pauli_pow4(k), pow4_oracle(c), "{c}");
        }
    }

    #[test]
    fn lemmas_hold() {
        let r = verify_psd_lemmas(false).unwrap();
        assert!(r.b_min_eig >= -1e-10 && r.b_minus_min_eig >= -1e-10);
        assert!(r.identity_residual_plus < 1e-14);
        assert!(r.two_a_minus_b_min_eig >= -1e-10);
    }

    #[test]
    fn direct_operator_has_spectrum_zero_and_64() {
        // 8 A^3 - B^3 takes only the values 0 and 64
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let v: Vec<f64> = (0..4096).map(|_| rng.random_range(-1.0..1.0)).collect();
        let mut mv = vec![0.0; 4096];
        let mut mmv = vec![0.0; 4096];
        direct_apply(&v, &mut mv);
        direct_apply(&mv, &mut mmv);
        let err = mmv
            .iter()
            .zip(&mv)
            .map(|(a, b)| (a - 64.0 * b).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-9);
        let lam = direct_min_eigenvalue(3, 60);
        assert!(lam.abs() < 1e-9, "{lam}");
    }
}
