//! Dense pure states and unitaries.
//!
//! Basis index `k` of an `n`-qubit register stores qubit 0 in bit `n - 1`
//! (most significant) and qubit `n - 1` in bit 0.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Tolerance on `|<psi|psi> - 1|` accepted by validating constructors.
pub const NORM_TOL: f64 = 1e-8;

/// Tolerance on `||U^dag U - I||_F` accepted by [`UnitaryMatrix::new`].
pub const UNITARY_TOL: f64 = 1e-9;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Amplitudes of an `n`-qubit pure state.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|0...0>` on `n` qubits.
    pub fn zero(n: usize) -> Self {
        Self::basis(n, 0)
    }

    /// Computational basis state `|index>`.
    pub fn basis(n: usize, index: usize) -> Self {
        let mut amps = vec![ZERO; 1 << n];
        amps[index] = ONE;
        Self { n, amps }
    }

    /// `|+>^{\otimes n}`.
    pub fn plus(n: usize) -> Self {
        let a = Complex64::new((1usize << n) as f64, 0.0).sqrt().inv();
        Self {
            n,
            amps: vec![a; 1 << n],
        }
    }

    /// Builds a state from amplitudes, checking length and normalization.
    pub fn new(amps: Vec<Complex64>) -> Result<Self> {
        let n = qubits_for_len(amps.len())?;
        let s = Self { n, amps };
        let nrm = s.norm_sqr();
        if (nrm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(nrm));
        }
        Ok(s)
    }

    /// Builds a state from arbitrary nonzero amplitudes, rescaling to unit norm.
    pub fn normalized(amps: Vec<Complex64>) -> Result<Self> {
        let n = qubits_for_len(amps.len())?;
        let nrm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !nrm.is_finite() || nrm <= 0.0 {
            return Err(Error::NotNormalized(nrm * nrm));
        }
        Ok(Self {
            n,
            amps: amps.into_iter().map(|a| a / nrm).collect(),
        })
    }

    /// Skips validation; callers guarantee a power-of-two length.
    pub(crate) fn from_raw(n: usize, amps: Vec<Complex64>) -> Self {
        debug_assert_eq!(amps.len(), 1 << n);
        Self { n, amps }
    }

    /// Haar-random pure state.
    pub fn haar_random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let amps: Vec<Complex64> = (0..1usize << n)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        Self::normalized(amps).expect("gaussian vector is nonzero")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Fails with [`Error::NotNormalized`] when the norm drifted beyond [`NORM_TOL`].
    pub fn check_normalized(&self) -> Result<()> {
        let nrm = self.norm_sqr();
        if (nrm - 1.0).abs() > NORM_TOL {
            Err(Error::NotNormalized(nrm))
        } else {
            Ok(())
        }
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        self.same_size(other)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|<self|other>|^2`.
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// `self ⊗ other`; `self` occupies the leading (more significant) qubits.
    pub fn tensor(&self, other: &StateVector) -> StateVector {
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        StateVector::from_raw(self.n + other.n, amps)
    }

    /// Multiplies by a global phase so the first non-negligible amplitude is
    /// real and positive.
    pub fn canonical_phase(mut self) -> Self {
        if let Some(first) = self.amps.iter().find(|a| a.norm() > 1e-12).copied() {
            let phase = first.conj() / first.norm();
            for a in &mut self.amps {
                *a *= phase;
            }
        }
        self
    }

    fn same_size(&self, other: &StateVector) -> Result<()> {
        if self.n != other.n {
            Err(Error::DimensionMismatch {
                expected: self.n,
                got: other.n,
            })
        } else {
            Ok(())
        }
    }
}

/// An `n`-qubit unitary stored as a dense `2^n x 2^n` matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryMatrix {
    n: usize,
    mat: DMatrix<Complex64>,
}

impl UnitaryMatrix {
    /// Validates shape and unitarity.
    pub fn new(mat: DMatrix<Complex64>) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::InvalidParameter(format!(
                "matrix is {}x{}, expected square",
                mat.nrows(),
                mat.ncols()
            )));
        }
        let n = qubits_for_len(mat.nrows())?;
        let u = Self { n, mat };
        let dev = u.unitarity_deviation();
        if dev > UNITARY_TOL {
            return Err(Error::NotUnitary(dev));
        }
        Ok(u)
    }

    /// From `dim * dim` entries in row-major order; validates unitarity.
    pub fn from_row_major(dim: usize, entries: &[Complex64]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::InvalidParameter(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                entries.len()
            )));
        }
        Self::new(DMatrix::from_row_slice(dim, dim, entries))
    }

    pub(crate) fn from_raw(n: usize, mat: DMatrix<Complex64>) -> Self {
        debug_assert_eq!(mat.nrows(), 1 << n);
        Self { n, mat }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_raw(n, DMatrix::identity(1 << n, 1 << n))
    }

    /// Diagonal unitary from phases `e^{i phi_k}`.
    pub fn diagonal_phases(phases: &[f64]) -> Result<Self> {
        let n = qubits_for_len(phases.len())?;
        let mut mat = DMatrix::zeros(phases.len(), phases.len());
        for (k, &phi) in phases.iter().enumerate() {
            mat[(k, k)] = Complex64::from_polar(1.0, phi);
        }
        Ok(Self::from_raw(n, mat))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.mat
    }

    /// `||U^dag U - I||_F`.
    pub fn unitarity_deviation(&self) -> f64 {
        let prod = self.mat.adjoint() * &self.mat;
        (prod - DMatrix::<Complex64>::identity(self.dim(), self.dim())).norm()
    }

    pub fn dagger(&self) -> Self {
        Self::from_raw(self.n, self.mat.adjoint())
    }

    /// Matrix product `self * rhs` (apply `rhs` first).
    pub fn compose(&self, rhs: &UnitaryMatrix) -> Result<Self> {
        if self.n != rhs.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: rhs.n,
            });
        }
        Ok(Self::from_raw(self.n, &self.mat * &rhs.mat))
    }

    /// `self ⊗ rhs`.
    pub fn tensor(&self, rhs: &UnitaryMatrix) -> Self {
        Self::from_raw(self.n + rhs.n, self.mat.kronecker(&rhs.mat))
    }

    /// `U|psi>` for a state on exactly `n` qubits.
    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        if state.n() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: state.n(),
            });
        }
        self.apply_leading(state)
    }

    /// `(U ⊗ I_{2^m})|psi>` where `psi` has `n + m` qubits and `U` acts on the
    /// leading `n` of them.
    pub fn apply_leading(&self, state: &StateVector) -> Result<StateVector> {
        if state.n() < self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: state.n(),
            });
        }
        let d = self.dim();
        let tail = 1usize << (state.n() - self.n);
        let src = state.amplitudes();
        let mut out = vec![ZERO; src.len()];
        for i in 0..d {
            for k in 0..d {
                let u = self.mat[(i, k)];
                if u == ZERO {
                    continue;
                }
                let (dst, from) = (&mut out[i * tail..(i + 1) * tail], &src[k * tail..(k + 1) * tail]);
                for (o, s) in dst.iter_mut().zip(from) {
                    *o += u * s;
                }
            }
        }
        Ok(StateVector::from_raw(state.n(), out))
    }

    /// Max entrywise distance, ignoring nothing (global phase included).
    pub fn max_abs_diff(&self, other: &UnitaryMatrix) -> f64 {
        self.mat
            .iter()
            .zip(other.mat.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Distance after removing the best global phase, `min_phi ||U - e^{i phi} V||_max`
    /// evaluated at the phase of `tr(V^dag U)`.
    pub fn phase_insensitive_diff(&self, other: &UnitaryMatrix) -> f64 {
        let tr: Complex64 = (other.mat.adjoint() * &self.mat).trace();
        let phase = if tr.norm() > 1e-12 { tr / tr.norm() } else { ONE };
        self.mat
            .iter()
            .zip(other.mat.iter())
            .map(|(a, b)| (a - phase * b).norm())
            .fold(0.0, f64::max)
    }
}

/// Choi state `(U ⊗ I) 2^{-n/2} sum_i |i>|i>` on `2n` qubits; the first
/// register carries `U`.
pub fn choi_state(u: &UnitaryMatrix) -> StateVector {
    let d = u.dim();
    let scale = (d as f64).sqrt().recip();
    let m = u.matrix();
    let mut amps = Vec::with_capacity(d * d);
    for a in 0..d {
        for b in 0..d {
            amps.push(m[(a, b)] * scale);
        }
    }
    StateVector::from_raw(2 * u.n(), amps)
}

pub(crate) fn qubits_for_len(len: usize) -> Result<usize> {
    if len == 0 || !len.is_power_of_two() {
        return Err(Error::InvalidParameter(format!(
            "length {len} is not a power of two"
        )));
    }
    Ok(len.trailing_zeros() as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rejects_unnormalized() {
        let err = StateVector::new(vec![ONE, ONE]).unwrap_err();
        assert!(matches!(err, Error::NotNormalized(_)));
        assert!(StateVector::new(vec![ONE, ONE, ONE]).is_err());
    }

    #[test]
    fn tensor_orders_leading_qubits_first() {
        let one = StateVector::basis(1, 1);
        let zero = StateVector::zero(1);
        // |1>|0> = |10> = index 2
        assert_eq!(one.tensor(&zero), StateVector::basis(2, 2));
    }

    #[test]
    fn apply_leading_matches_kron() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let psi = StateVector::haar_random(3, &mut rng);
        let h = DMatrix::from_row_slice(
            2,
            2,
            &[ONE, ONE, ONE, -ONE].map(|c| c / 2f64.sqrt()),
        );
        let u = UnitaryMatrix::new(h).unwrap();
        let full = u.tensor(&UnitaryMatrix::identity(2));
        let a = u.apply_leading(&psi).unwrap();
        let b = full.apply(&psi).unwrap();
        for (x, y) in a.amplitudes().iter().zip(b.amplitudes()) {
            assert!((x - y).norm() < 1e-14);
        }
    }

    #[test]
    fn choi_of_identity_is_bell_pair() {
        let phi = choi_state(&UnitaryMatrix::identity(1));
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let want = [r, 0.0, 0.0, r];
        for (a, w) in phi.amplitudes().iter().zip(want) {
            assert!((a - Complex64::new(w, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn choi_second_register_is_maximally_mixed() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        // random 2-qubit unitary from QR of a gaussian matrix
        let g = DMatrix::from_fn(4, 4, |_, _| {
            Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        });
        let q = g.qr().q();
        let u = UnitaryMatrix::new(q).unwrap();
        let phi = choi_state(&u);
        assert!((phi.norm_sqr() - 1.0).abs() < 1e-12);
        // rho_B[b, b'] = sum_a phi[a, b] conj(phi[a, b'])
        let a = phi.amplitudes();
        for b in 0..4 {
            for bp in 0..4 {
                let v: Complex64 = (0..4).map(|x| a[x * 4 + b] * a[x * 4 + bp].conj()).sum();
                let want = if b == bp { 0.25 } else { 0.0 };
                assert!((v - Complex64::new(want, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn canonical_phase_makes_first_amplitude_positive() {
        let s = StateVector::normalized(vec![Complex64::new(0.0, 0.0), Complex64::new(0.0, -1.0)])
            .unwrap()
            .canonical_phase();
        assert!((s.amplitudes()[1] - ONE).norm() < 1e-15);
    }
}
