//! State and unitary input: JSON files, named presets, circuit files.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circuit::{run_circuit, CircuitSpec};
use crate::error::{Error, Result};
use crate::gates::build_gate;
use crate::state::{StateVector, UnitaryMatrix};

/// `{"n": .., "re": [..], "im": [..]}`
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateJson {
    pub n: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl From<&StateVector> for StateJson {
    fn from(s: &StateVector) -> Self {
        Self {
            n: s.n(),
            re: s.amplitudes().iter().map(|a| a.re).collect(),
            im: s.amplitudes().iter().map(|a| a.im).collect(),
        }
    }
}

impl StateJson {
    pub fn into_state(self) -> Result<StateVector> {
        let d = 1usize << self.n;
        if self.re.len() != d || self.im.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: self.re.len().max(self.im.len()),
            });
        }
        StateVector::new(
            self.re
                .into_iter()
                .zip(self.im)
                .map(|(r, i)| Complex64::new(r, i))
                .collect(),
        )
    }
}

/// Preset names accepted by [`preset_state`].
pub const PRESETS: [&str; 8] = [
    "zero",
    "plus",
    "t-plus",
    "sqrt-t-plus",
    "magic-pi10",
    "bell",
    "ccz-plus",
    "haar",
];

fn phase_state(phi: f64) -> StateVector {
    StateVector::from_raw(
        1,
        vec![
            Complex64::new(FRAC_1_SQRT_2, 0.0),
            Complex64::from_polar(FRAC_1_SQRT_2, phi),
        ],
    )
}

/// Named states. `zero`, `plus` and `haar` take `n` qubits (`haar` seeded
/// by `seed`); the rest have fixed size.
pub fn preset_state(name: &str, n: usize, seed: u64) -> Result<StateVector> {
    use rand::SeedableRng;
    Ok(match name {
        "zero" => StateVector::zero(n),
        "plus" => StateVector::plus(n),
        "t-plus" => phase_state(PI / 4.0),
        "sqrt-t-plus" => phase_state(PI / 8.0),
        "magic-pi10" => phase_state(PI / 10.0),
        "bell" => StateVector::from_raw(
            2,
            vec![
                Complex64::new(FRAC_1_SQRT_2, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(FRAC_1_SQRT_2, 0.0),
            ],
        ),
        "ccz-plus" => build_gate("ccz", &[], 3)?.apply(&StateVector::plus(3))?,
        "haar" => {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            StateVector::haar_random(n, &mut rng)
        }
        other => {
            return Err(Error::InvalidParameter(format!(
                "unknown state preset '{other}' (known: {})",
                PRESETS.join(", ")
            )))
        }
    })
}

pub fn read_state_json(path: &Path) -> Result<StateVector> {
    let text = std::fs::read_to_string(path)?;
    let j: StateJson = serde_json::from_str(&text)?;
    j.into_state()
}

pub fn write_state_json(state: &StateVector) -> Result<String> {
    Ok(serde_json::to_string_pretty(&StateJson::from(state))?)
}

pub fn read_circuit(path: &Path, n: Option<usize>) -> Result<UnitaryMatrix> {
    let text = std::fs::read_to_string(path)?;
    run_circuit(&CircuitSpec::parse(&text, n)?)
}

/// Resolves a state argument: a preset name, a `.json` state file, or a
/// circuit file applied to `|0...0>`.
pub fn load_state(arg: &str, n: usize, seed: u64) -> Result<StateVector> {
    let path = Path::new(arg);
    if PRESETS.contains(&arg) {
        return preset_state(arg, n, seed);
    }
    if !path.exists() {
        return preset_state(arg, n, seed);
    }
    if path.extension().is_some_and(|e| e == "json") {
        return read_state_json(path);
    }
    let u = read_circuit(path, None)?;
    u.apply(&StateVector::zero(u.n()))
}
