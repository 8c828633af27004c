//! Enumeration of all pure `n`-qubit stabilizer states.
//!
//! Every stabilizer state has the form
//! `2^{-k/2} sum_{y in F_2^k} i^{l(y)} (-1)^{q(y)} |r + B y>` where `r + span(B)`
//! is an affine subspace of `F_2^n`, `l` is a linear form and `q` a quadratic
//! form over the coset coordinates `y`. Taking `r` as the smallest element of
//! its coset and `B` as a canonical basis makes the map from
//! `(subspace, coset, l, q)` to states injective, and fixes the global phase
//! so the first nonzero amplitude is real and positive.

use std::collections::{BTreeSet, HashMap};
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::full_spectrum;
use crate::state::StateVector;

/// Largest `n` enumerated without the explicit large-set opt-in.
pub const MAX_DEFAULT_QUBITS: usize = 3;
/// Largest `n` enumerated at all.
pub const MAX_QUBITS: usize = 4;

/// Environment variable naming a directory for cached enumerations.
pub const CACHE_DIR_ENV: &str = "STABMAGIC_CACHE_DIR";

const CACHE_MAGIC: &[u8; 8] = b"STABSET\0";
const CACHE_VERSION: u32 = 1;

/// `2^n prod_{k=1}^n (2^k + 1)`.
pub fn stabilizer_count(n: usize) -> usize {
    (1..=n).fold(1usize << n, |acc, k| acc * ((1usize << k) + 1))
}

/// The canonical list of pure stabilizer states on `n` qubits.
#[derive(Clone, Debug)]
pub struct StabilizerSet {
    n: usize,
    states: Vec<StateVector>,
}

impl StabilizerSet {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn count(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[StateVector] {
        &self.states
    }

    pub fn get(&self, i: usize) -> &StateVector {
        &self.states[i]
    }

    /// Process-wide shared enumeration; `n = 4` requires `allow_large`.
    /// Reads and writes the on-disk cache when [`CACHE_DIR_ENV`] is set.
    pub fn shared(n: usize, allow_large: bool) -> Result<Arc<StabilizerSet>> {
        check_range(n, allow_large)?;
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<StabilizerSet>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(s) = cache.lock().expect("cache poisoned").get(&n) {
            return Ok(Arc::clone(s));
        }
        let built = Arc::new(match std::env::var_os(CACHE_DIR_ENV) {
            Some(dir) if !dir.is_empty() => Self::load_or_build(Path::new(&dir), n, allow_large)?,
            _ => enumerate_unchecked(n),
        });
        cache
            .lock()
            .expect("cache poisoned")
            .entry(n)
            .or_insert_with(|| Arc::clone(&built));
        Ok(built)
    }

    /// Index of the entry equal to `state` up to global phase.
    pub fn find(&self, state: &StateVector) -> Option<usize> {
        self.states
            .iter()
            .position(|s| s.fidelity(state).map(|f| f > 1.0 - 1e-9).unwrap_or(false))
    }

    /// Writes the binary cache: magic, version, `n`, count, then
    /// little-endian `(re, im)` pairs.
    pub fn write_cache(&self, path: &Path) -> Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        w.write_all(CACHE_MAGIC)?;
        w.write_all(&CACHE_VERSION.to_le_bytes())?;
        w.write_all(&(self.n as u32).to_le_bytes())?;
        w.write_all(&(self.count() as u64).to_le_bytes())?;
        for s in &self.states {
            for a in s.amplitudes() {
                w.write_all(&a.re.to_le_bytes())?;
                w.write_all(&a.im.to_le_bytes())?;
            }
        }
        w.flush()?;
        Ok(())
    }

    /// Reads a cache written by [`write_cache`](Self::write_cache), rejecting
    /// mismatched versions, sizes and counts.
    pub fn read_cache(path: &Path, n: usize) -> Result<Self> {
        let mut r = BufReader::new(File::open(path)?);
        let bad = |m: &str| Error::Verification(format!("stabilizer cache {}: {m}", path.display()));
        let mut magic = [0u8; 8];
        r.read_exact(&mut magic)?;
        if &magic != CACHE_MAGIC {
            return Err(bad("bad magic"));
        }
        let mut b4 = [0u8; 4];
        r.read_exact(&mut b4)?;
        if u32::from_le_bytes(b4) != CACHE_VERSION {
            return Err(bad("format version mismatch"));
        }
        r.read_exact(&mut b4)?;
        if u32::from_le_bytes(b4) as usize != n {
            return Err(bad("qubit count mismatch"));
        }
        let mut b8 = [0u8; 8];
        r.read_exact(&mut b8)?;
        let count = u64::from_le_bytes(b8) as usize;
        if count != stabilizer_count(n) {
            return Err(bad("state count mismatch"));
        }
        let d = 1usize << n;
        let mut states = Vec::with_capacity(count);
        for _ in 0..count {
            let mut amps = Vec::with_capacity(d);
            for _ in 0..d {
                r.read_exact(&mut b8)?;
                let re = f64::from_le_bytes(b8);
                r.read_exact(&mut b8)?;
                let im = f64::from_le_bytes(b8);
                amps.push(Complex64::new(re, im));
            }
            states.push(StateVector::new(amps)?);
        }
        Ok(Self { n, states })
    }

    /// Loads `dir/stab_n{n}_v{VERSION}.bin` if present, otherwise enumerates
    /// and writes it.
    pub fn load_or_build(dir: &Path, n: usize, allow_large: bool) -> Result<Self> {
        check_range(n, allow_large)?;
        let path = dir.join(format!("stab_n{n}_v{CACHE_VERSION}.bin"));
        if path.exists() {
            if let Ok(set) = Self::read_cache(&path, n) {
                return Ok(set);
            }
        }
        let set = enumerate_unchecked(n);
        std::fs::create_dir_all(dir)?;
        set.write_cache(&path)?;
        Ok(set)
    }
}

fn check_range(n: usize, allow_large: bool) -> Result<()> {
    let max = if allow_large { MAX_QUBITS } else { MAX_DEFAULT_QUBITS };
    if n == 0 || n > max {
        let hint = if n == MAX_QUBITS {
            " (4 qubits needs the large-set opt-in)"
        } else {
            ""
        };
        return Err(Error::Unsupported(format!(
            "stabilizer enumeration for {n} qubits{hint}"
        )));
    }
    Ok(())
}

/// Enumerates stabilizer states for `1 <= n <= 3`.
pub fn enumerate_stabilizer_states(n: usize) -> Result<StabilizerSet> {
    enumerate_stabilizer_states_gated(n, false)
}

/// As [`enumerate_stabilizer_states`], additionally allowing `n = 4`
/// (36720 states) when `allow_large` is set.
pub fn enumerate_stabilizer_states_gated(n: usize, allow_large: bool) -> Result<StabilizerSet> {
    check_range(n, allow_large)?;
    Ok(enumerate_unchecked(n))
}

/// Linear subspaces of `F_2^n` as membership bitsets, ordered by dimension
/// then bitset value.
fn linear_subspaces(n: usize) -> Vec<u64> {
    let d = 1usize << n;
    let mut found: BTreeSet<(u32, u64)> = BTreeSet::new();
    let mut frontier = vec![1u64]; // {0}
    found.insert((0, 1));
    while let Some(sub) = frontier.pop() {
        for v in 0..d {
            if sub >> v & 1 == 1 {
                continue;
            }
            let mut grown = sub;
            for s in 0..d {
                if sub >> s & 1 == 1 {
                    grown |= 1u64 << (s ^ v);
                }
            }
            let key = (grown.count_ones().trailing_zeros(), grown);
            if found.insert(key) {
                frontier.push(grown);
            }
        }
    }
    found.into_iter().map(|(_, s)| s).collect()
}

fn members(set: u64, d: usize) -> impl Iterator<Item = usize> {
    (0..d).filter(move |&x| set >> x & 1 == 1)
}

/// Greedy basis: repeatedly take the smallest member outside the current span.
fn canonical_basis(set: u64, d: usize) -> Vec<usize> {
    let mut span = 1u64;
    let mut basis = Vec::new();
    for x in members(set, d) {
        if span >> x & 1 == 0 {
            let mut grown = span;
            for s in members(span, d) {
                grown |= 1u64 << (s ^ x);
            }
            span = grown;
            basis.push(x);
        }
    }
    basis
}

fn enumerate_unchecked(n: usize) -> StabilizerSet {
    let d = 1usize << n;
    let mut states = Vec::with_capacity(stabilizer_count(n));
    for sub in linear_subspaces(n) {
        let basis = canonical_basis(sub, d);
        let k = basis.len();
        let size = 1usize << k;
        let amp = (size as f64).sqrt().recip();
        let offsets: Vec<usize> = (0..size)
            .map(|y| {
                basis
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| y >> i & 1 == 1)
                    .fold(0, |acc, (_, b)| acc ^ b)
            })
            .collect();
        let quad_terms: Vec<(usize, usize)> =
            (0..k).flat_map(|i| (i..k).map(move |j| (i, j))).collect();
        let reps = (0..d).filter(|&r| members(sub, d).all(|s| r ^ s >= r));
        for r in reps {
            for lin in 0..size {
                for quad in 0..(1usize << quad_terms.len()) {
                    let mut amps = vec![Complex64::new(0.0, 0.0); d];
                    for (y, off) in offsets.iter().enumerate() {
                        let l = (lin & y).count_ones() & 1;
                        let q = quad_terms
                            .iter()
                            .enumerate()
                            .filter(|(t, (i, j))| {
                                quad >> t & 1 == 1 && y >> i & 1 == 1 && y >> j & 1 == 1
                            })
                            .count()
                            & 1;
                        let sign = if q == 1 { -amp } else { amp };
                        amps[r ^ off] = if l == 1 {
                            Complex64::new(0.0, sign)
                        } else {
                            Complex64::new(sign, 0.0)
                        };
                    }
                    states.push(StateVector::from_raw(n, amps));
                }
            }
        }
    }
    assert_eq!(
        states.len(),
        stabilizer_count(n),
        "stabilizer enumeration count mismatch for n = {n}"
    );
    StabilizerSet { n, states }
}

/// True iff exactly `2^n` Pauli strings have `|e_P| >= 1 - 1e-8`.
pub fn is_stabilizer_state(state: &StateVector) -> bool {
    let owned;
    let s = if state.check_normalized().is_ok() {
        state
    } else {
        match StateVector::normalized(state.amplitudes().to_vec()) {
            Ok(v) => {
                owned = v;
                &owned
            }
            Err(_) => return false,
        }
    };
    match full_spectrum(s) {
        Ok(sp) => sp.count_unit(1e-8) == 1usize << s.n(),
        Err(_) => false,
    }
}
