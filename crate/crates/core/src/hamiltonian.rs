//! Disordered Heisenberg chains and their time evolution.
//!
//! `H = sum_k (X_k X_{k+1} + Y_k Y_{k+1} + delta Z_k Z_{k+1}) + sum_k h_k Z_k`
//! with `h_k` uniform in `[-W, W]`. Sites are qubits `0..N`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::UnitaryMatrix;

/// Tolerance on `max |H - H^dag|` accepted by [`Evolver::new`].
pub const HERMITIAN_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    #[default]
    Periodic,
    Open,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HamiltonianSpec {
    pub sites: usize,
    pub delta: f64,
    pub disorder: f64,
    pub seed: u64,
    pub boundary: Boundary,
}

impl HamiltonianSpec {
    /// Local fields `h_k`, reproducible from `seed`.
    pub fn fields(&self) -> Vec<f64> {
        if self.disorder == 0.0 {
            return vec![0.0; self.sites];
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        (0..self.sites)
            .map(|_| rng.random_range(-self.disorder..=self.disorder))
            .collect()
    }

    /// Nearest-neighbour bonds `(k, k+1)`, with `(N-1, 0)` when periodic.
    pub fn bonds(&self) -> Vec<(usize, usize)> {
        let mut b: Vec<(usize, usize)> = (0..self.sites - 1).map(|k| (k, k + 1)).collect();
        if self.boundary == Boundary::Periodic {
            b.push((self.sites - 1, 0));
        }
        b
    }
}

/// A dense Hermitian matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Hermitian {
    n: usize,
    mat: DMatrix<Complex64>,
}

impl Hermitian {
    pub fn new(mat: DMatrix<Complex64>) -> Result<Self> {
        let n = crate::state::qubits_for_len(mat.nrows())?;
        if mat.nrows() != mat.ncols() {
            return Err(Error::InvalidParameter("Hamiltonian must be square".into()));
        }
        let dev = hermitian_deviation(&mat);
        if dev > HERMITIAN_TOL {
            return Err(Error::NotHermitian(dev));
        }
        Ok(Self { n, mat })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.mat
    }
}

fn hermitian_deviation(m: &DMatrix<Complex64>) -> f64 {
    let mut dev = 0.0f64;
    for i in 0..m.nrows() {
        for j in i..m.ncols() {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    dev
}

/// Builds the chain Hamiltonian directly on basis states.
pub fn heisenberg_hamiltonian(spec: &HamiltonianSpec) -> Result<Hermitian> {
    if spec.sites < 2 {
        return Err(Error::InvalidParameter(format!(
            "chain needs at least 2 sites, got {}",
            spec.sites
        )));
    }
    if spec.disorder < 0.0 || !spec.disorder.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "disorder width must be >= 0, got {}",
            spec.disorder
        )));
    }
    if spec.sites > 12 {
        return Err(Error::Unsupported(format!("{} sites", spec.sites)));
    }
    let n = spec.sites;
    let d = 1usize << n;
    let bit = |q: usize| 1usize << (n - 1 - q);
    let fields = spec.fields();
    let bonds = spec.bonds();
    let mut mat = DMatrix::<Complex64>::zeros(d, d);
    for j in 0..d {
        let mut diag = 0.0;
        for &(a, b) in &bonds {
            let (ba, bb) = (bit(a), bit(b));
            let same = ((j & ba) != 0) == ((j & bb) != 0);
            diag += if same { spec.delta } else { -spec.delta };
            // XX + YY = 2 (|01><10| + |10><01|) on the bond
            if !same {
                mat[(j ^ ba ^ bb, j)] += Complex64::new(2.0, 0.0);
            }
        }
        for (k, h) in fields.iter().enumerate() {
            diag += if j & bit(k) == 0 { *h } else { -*h };
        }
        mat[(j, j)] += Complex64::new(diag, 0.0);
    }
    Hermitian::new(mat)
}

/// Cached eigendecomposition for evaluating `exp(-i H t)` at many times.
pub struct Evolver {
    n: usize,
    vectors: DMatrix<Complex64>,
    values: Vec<f64>,
}

impl Evolver {
    pub fn new(h: &Hermitian) -> Result<Self> {
        let dev = hermitian_deviation(h.matrix());
        if dev > HERMITIAN_TOL {
            return Err(Error::NotHermitian(dev));
        }
        let eig = h.matrix().clone().symmetric_eigen();
        Ok(Self {
            n: h.n(),
            values: eig.eigenvalues.iter().copied().collect(),
            vectors: eig.eigenvectors,
        })
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.values
    }

    /// `V diag(e^{-i lambda t}) V^dag`.
    pub fn at(&self, t: f64) -> UnitaryMatrix {
        let mut scaled = self.vectors.clone();
        for (k, lam) in self.values.iter().enumerate() {
            let ph = Complex64::from_polar(1.0, -lam * t);
            for v in scaled.column_mut(k).iter_mut() {
                *v *= ph;
            }
        }
        UnitaryMatrix::from_raw(self.n, scaled * self.vectors.adjoint())
    }
}

/// `exp(-i H t)`.
pub fn evolve(h: &Hermitian, t: f64) -> Result<UnitaryMatrix> {
    Ok(Evolver::new(h)?.at(t))
}
