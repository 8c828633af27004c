//! Pauli strings and full Pauli expectation spectra.
//!
//! A [`PauliString`] `(x, z)` denotes `i^{|x & z|} X^x Z^z`. With this phase
//! every string is Hermitian and `<psi|P|psi>` is real.

use std::fmt;
use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::state::StateVector;

/// Largest imaginary residue tolerated in an expectation value.
pub const IMAG_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    x: usize,
    z: usize,
}

impl PauliString {
    pub fn new(n: usize, x_mask: usize, z_mask: usize) -> Result<Self> {
        let limit = 1usize << n;
        if x_mask >= limit || z_mask >= limit {
            return Err(Error::InvalidParameter(format!(
                "mask exceeds {n} qubits (x={x_mask}, z={z_mask})"
            )));
        }
        Ok(Self {
            n,
            x: x_mask,
            z: z_mask,
        })
    }

    pub fn identity(n: usize) -> Self {
        Self { n, x: 0, z: 0 }
    }

    /// Parses a label such as `"XIZY"`; character `k` acts on qubit `k`.
    pub fn from_label(label: &str) -> Result<Self> {
        let n = label.chars().count();
        let (mut x, mut z) = (0usize, 0usize);
        for (q, c) in label.chars().enumerate() {
            let bit = 1usize << (n - 1 - q);
            match c.to_ascii_uppercase() {
                'I' => {}
                'X' => x |= bit,
                'Z' => z |= bit,
                'Y' => {
                    x |= bit;
                    z |= bit;
                }
                other => {
                    return Err(Error::InvalidParameter(format!(
                        "invalid Pauli character `{other}`"
                    )))
                }
            }
        }
        Ok(Self { n, x, z })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn x_mask(&self) -> usize {
        self.x
    }

    pub fn z_mask(&self) -> usize {
        self.z
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// Row-major spectrum index (x outer, z inner).
    pub fn index(&self) -> usize {
        (self.x << self.n) | self.z
    }

    /// `i^{|x & z|}`.
    pub fn hermitian_phase(&self) -> Complex64 {
        i_pow((self.x & self.z).count_ones())
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in 0..self.n {
            let bit = 1usize << (self.n - 1 - q);
            let c = match (self.x & bit != 0, self.z & bit != 0) {
                (false, false) => 'I',
                (true, false) => 'X',
                (false, true) => 'Z',
                (true, true) => 'Y',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

pub(crate) fn i_pow(k: u32) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

#[inline]
fn parity_sign(v: usize) -> f64 {
    if v.count_ones().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

fn check_qubits(state: &StateVector, p: &PauliString) -> Result<()> {
    if state.n() != p.n {
        return Err(Error::DimensionMismatch {
            expected: p.n,
            got: state.n(),
        });
    }
    Ok(())
}

/// `P|psi>` in `O(2^n)`.
pub fn apply_pauli(state: &StateVector, p: &PauliString) -> Result<StateVector> {
    check_qubits(state, p)?;
    let phase = p.hermitian_phase();
    let src = state.amplitudes();
    let mut out = vec![Complex64::new(0.0, 0.0); src.len()];
    for (j, a) in src.iter().enumerate() {
        out[j ^ p.x] = phase * parity_sign(p.z & j) * a;
    }
    Ok(StateVector::from_raw(state.n(), out))
}

/// Raw complex `<psi|P|psi>` without any normalization check.
fn expectation_complex(amps: &[Complex64], p: &PauliString) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (j, a) in amps.iter().enumerate() {
        acc += amps[j ^ p.x].conj() * a * parity_sign(p.z & j);
    }
    acc * p.hermitian_phase()
}

fn real_part_checked(v: Complex64) -> Result<f64> {
    if v.im.abs() > IMAG_TOL {
        return Err(Error::Numerical(format!(
            "Pauli expectation has imaginary residue {:e}",
            v.im
        )));
    }
    Ok(v.re)
}

/// `<psi|P|psi>`, a real number in `[-1, 1]`.
pub fn expectation(state: &StateVector, p: &PauliString) -> Result<f64> {
    check_qubits(state, p)?;
    state.check_normalized()?;
    real_part_checked(expectation_complex(state.amplitudes(), p))
}

/// All `4^n` expectations `e_P`, indexed `(x << n) | z`.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliSpectrum {
    n: usize,
    values: Vec<f64>,
}

impl PauliSpectrum {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, x_mask: usize, z_mask: usize) -> f64 {
        self.values[(x_mask << self.n) | z_mask]
    }

    pub fn of(&self, p: &PauliString) -> f64 {
        self.values[p.index()]
    }

    /// `(PauliString, e_P)` pairs in index order.
    pub fn iter(&self) -> impl Iterator<Item = (PauliString, f64)> + '_ {
        let n = self.n;
        let mask = (1usize << n) - 1;
        self.values.iter().enumerate().map(move |(k, &v)| {
            (
                PauliString {
                    n,
                    x: k >> n,
                    z: k & mask,
                },
                v,
            )
        })
    }

    /// `sum_P e_P^2`, equal to `2^n` for pure states.
    pub fn purity_sum(&self) -> f64 {
        self.values.iter().map(|e| e * e).sum()
    }

    /// `R_alpha = sum_P |e_P|^{2 alpha}`; for `alpha = 0` counts the
    /// support (`|e_P| > ZERO_TOL`).
    pub fn r_alpha(&self, alpha: f64) -> f64 {
        if alpha == 0.0 {
            return self.values.iter().filter(|e| e.abs() > ZERO_TOL).count() as f64;
        }
        if alpha == 2.0 {
            return self.values.iter().map(|e| (e * e) * (e * e)).sum();
        }
        self.values.iter().map(|e| (e * e).powf(alpha)).sum()
    }

    /// Number of strings with `|e_P| >= 1 - tol`.
    pub fn count_unit(&self, tol: f64) -> usize {
        self.values.iter().filter(|e| e.abs() >= 1.0 - tol).count()
    }

    /// CSV with header `x_mask,z_mask,expectation` and 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "x_mask,z_mask,expectation")?;
        for (p, v) in self.iter() {
            writeln!(w, "{},{},{:.16e}", p.x, p.z, v)?;
        }
        Ok(())
    }
}

/// Below this magnitude an expectation is treated as exactly zero where a
/// support count is needed.
pub const ZERO_TOL: f64 = 1e-10;

/// In-place unnormalized Walsh-Hadamard transform:
/// `out[z] = sum_j (-1)^{|z & j|} in[j]`.
pub fn walsh_hadamard(buf: &mut [Complex64]) {
    let len = buf.len();
    debug_assert!(len.is_power_of_two());
    let mut h = 1;
    while h < len {
        for block in buf.chunks_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (u, v) = (*a, *b);
                *a = u + v;
                *b = u - v;
            }
        }
        h <<= 1;
    }
}

/// Full spectrum via one Walsh-Hadamard transform per `x` mask, `O(4^n n)`.
pub fn full_spectrum(state: &StateVector) -> Result<PauliSpectrum> {
    state.check_normalized()?;
    spectrum_fast_unchecked(state)
}

pub(crate) fn spectrum_fast_unchecked(state: &StateVector) -> Result<PauliSpectrum> {
    let n = state.n();
    let d = 1usize << n;
    let amps = state.amplitudes();
    let mut values = vec![0.0; d * d];
    values
        .par_chunks_mut(d)
        .enumerate()
        .try_for_each(|(x, row)| -> Result<()> {
            let mut c: Vec<Complex64> = (0..d).map(|j| amps[j ^ x].conj() * amps[j]).collect();
            walsh_hadamard(&mut c);
            for (z, (slot, f)) in row.iter_mut().zip(&c).enumerate() {
                *slot = real_part_checked(i_pow((x & z).count_ones()) * f)?;
            }
            Ok(())
        })?;
    Ok(PauliSpectrum { n, values })
}

/// Reference path: one `O(2^n)` expectation per string, `O(8^n)` total.
pub fn full_spectrum_naive(state: &StateVector) -> Result<PauliSpectrum> {
    state.check_normalized()?;
    let n = state.n();
    let d = 1usize << n;
    let mut values = Vec::with_capacity(d * d);
    for x in 0..d {
        for z in 0..d {
            let p = PauliString { n, x, z };
            values.push(real_part_checked(expectation_complex(state.amplitudes(), &p))?);
        }
    }
    Ok(PauliSpectrum { n, values })
}

/// Serial spectrum without checks, real parts only. For small states inside
/// already-parallel loops.
pub(crate) fn spectrum_serial(amps: &[Complex64]) -> Vec<f64> {
    let d = amps.len();
    let mut values = vec![0.0; d * d];
    let mut c = vec![Complex64::new(0.0, 0.0); d];
    for x in 0..d {
        for (j, slot) in c.iter_mut().enumerate() {
            *slot = amps[j ^ x].conj() * amps[j];
        }
        walsh_hadamard(&mut c);
        for z in 0..d {
            values[x * d + z] = (i_pow((x & z).count_ones()) * c[z]).re;
        }
    }
    values
}

/// `sum_P coeffs[P] P|psi>` with `coeffs` indexed like a spectrum.
pub(crate) fn pauli_combination_apply(coeffs: &[f64], amps: &[Complex64]) -> Vec<Complex64> {
    let d = amps.len();
    debug_assert_eq!(coeffs.len(), d * d);
    let mut out = vec![Complex64::new(0.0, 0.0); d];
    let mut g = vec![Complex64::new(0.0, 0.0); d];
    for x in 0..d {
        let row = &coeffs[x * d..(x + 1) * d];
        if row.iter().all(|&v| v == 0.0) {
            continue;
        }
        for (z, slot) in g.iter_mut().enumerate() {
            *slot = i_pow((x & z).count_ones()) * row[z];
        }
        // g[k] = sum_z c_{x,z} phase (-1)^{z.k}; then (P psi)[k] uses k ^ x
        walsh_hadamard(&mut g);
        for (k, o) in out.iter_mut().enumerate() {
            *o += g[k ^ x] * amps[k ^ x];
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const S: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn t_plus() -> StateVector {
        StateVector::new(vec![c(S, 0.0), Complex64::from_polar(S, std::f64::consts::FRAC_PI_4)])
            .unwrap()
    }

    #[test]
    fn apply_single_qubit_paulis() {
        let zero = StateVector::zero(1);
        let z = PauliString::from_label("Z").unwrap();
        let x = PauliString::from_label("X").unwrap();
        let y = PauliString::from_label("Y").unwrap();
        assert_eq!(apply_pauli(&zero, &z).unwrap(), zero);
        assert_eq!(apply_pauli(&zero, &x).unwrap(), StateVector::basis(1, 1));
        let yz = apply_pauli(&zero, &y).unwrap();
        assert!((yz.amplitudes()[1] - c(0.0, 1.0)).norm() < 1e-15);
        assert!(yz.amplitudes()[0].norm() < 1e-15);
    }

    #[test]
    fn label_roundtrip_and_qubit_order() {
        let p = PauliString::from_label("XIZ").unwrap();
        assert_eq!(p.x_mask(), 0b100);
        assert_eq!(p.z_mask(), 0b001);
        assert_eq!(p.to_string(), "XIZ");
    }

    #[test]
    fn dimension_mismatch() {
        let p = PauliString::from_label("XX").unwrap();
        assert!(matches!(
            apply_pauli(&StateVector::zero(1), &p),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(expectation(&StateVector::zero(3), &p).is_err());
    }

    #[test]
    fn expectation_examples() {
        let plus = StateVector::plus(1);
        let x = PauliString::from_label("X").unwrap();
        let z = PauliString::from_label("Z").unwrap();
        assert!((expectation(&plus, &x).unwrap() - 1.0).abs() < 1e-15);
        assert!((expectation(&t_plus(), &x).unwrap() - S).abs() < 1e-15);
        assert!(expectation(&t_plus(), &z).unwrap().abs() < 1e-15);
    }

    #[test]
    fn non_normalized_expectation_rejected() {
        let raw = StateVector::from_raw(1, vec![c(1.0, 0.0), c(1.0, 0.0)]);
        let x = PauliString::from_label("X").unwrap();
        assert!(matches!(expectation(&raw, &x), Err(Error::NotNormalized(_))));
    }

    #[test]
    fn spectrum_examples() {
        let sp = full_spectrum(&StateVector::plus(1)).unwrap();
        // index order: I (x0 z0), Z (x0 z1), X (x1 z0), Y (x1 z1)
        let expect = [1.0, 0.0, 1.0, 0.0];
        for (a, b) in sp.values().iter().zip(expect) {
            assert!((a - b).abs() < 1e-15);
        }
        let sp = full_spectrum(&t_plus()).unwrap();
        let expect = [1.0, 0.0, S, S];
        for (a, b) in sp.values().iter().zip(expect) {
            assert!((a - b).abs() < 1e-15, "{:?}", sp.values());
        }
    }

    #[test]
    fn fast_matches_naive_on_random_three_qubits() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let psi = StateVector::haar_random(3, &mut rng);
        let a = full_spectrum(&psi).unwrap();
        let b = full_spectrum_naive(&psi).unwrap();
        for (x, y) in a.values().iter().zip(b.values()) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn csv_header_and_digits() {
        let sp = full_spectrum(&StateVector::zero(1)).unwrap();
        let mut buf = Vec::new();
        sp.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("x_mask,z_mask,expectation"));
        assert_eq!(lines.next(), Some("0,0,1.0000000000000000e0"));
        assert_eq!(text.lines().count(), 5);
    }

    #[test]
    fn walsh_hadamard_matches_definition() {
        let input: Vec<Complex64> = (0..8).map(|k| c(k as f64, (k * k) as f64)).collect();
        let mut fast = input.clone();
        walsh_hadamard(&mut fast);
        for (z, f) in fast.iter().enumerate() {
            let direct: Complex64 = input
                .iter()
                .enumerate()
                .map(|(j, v)| v * parity_sign(z & j))
                .sum();
            assert!((direct - f).norm() < 1e-12);
        }
    }

    #[test]
    fn combination_apply_matches_term_by_term() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let psi = StateVector::haar_random(3, &mut rng);
        let d = 8;
        let coeffs: Vec<f64> = (0..d * d).map(|k| ((k * 7) % 5) as f64 - 2.0).collect();
        let fast = pauli_combination_apply(&coeffs, psi.amplitudes());
        let mut slow = vec![Complex64::new(0.0, 0.0); d];
        for x in 0..d {
            for z in 0..d {
                let p = PauliString::new(3, x, z).unwrap();
                let v = apply_pauli(&psi, &p).unwrap();
                for (s, a) in slow.iter_mut().zip(v.amplitudes()) {
                    *s += a * coeffs[x * d + z];
                }
            }
        }
        for k in 0..d {
            assert!((fast[k] - slow[k]).norm() < 1e-12);
        }
        let sp = spectrum_serial(psi.amplitudes());
        let full = full_spectrum(&psi).unwrap();
        for (a, b) in sp.iter().zip(full.values()) {
            assert!((a - b).abs() < 1e-14);
        }
    }
}
