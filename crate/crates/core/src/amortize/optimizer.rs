//! Riemannian gradient ascent on the unit sphere for
//! `f(phi) = M_alpha((U (x) I_m)|phi>) - M_alpha(|phi>)`.
//!
//! States are treated as real vectors in `R^{2d}` with inner product
//! `Re <a, b>`. Since `e_P = <psi|P|psi>`, the ambient gradient of `e_P` is
//! `2 P|psi>`, and the chain rule through `M_alpha(e)` gives a single
//! Pauli-weighted sum. The output term is pulled back through `W^dag`.

use std::time::Instant;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::io::StateJson;
use crate::pauli::{pauli_combination_apply, spectrum_serial};
use crate::state::{StateVector, UnitaryMatrix};

pub const GRAD_TOL: f64 = 1e-8;
pub const MAX_ITER: usize = 10_000;
pub const DEFAULT_RESTARTS: usize = 20;
/// Largest `n + m` accepted by [`amortized_sre_lower_bound`].
pub const MAX_TOTAL_QUBITS: usize = 4;

const FD_STEP: f64 = 1e-5;
const FD_REL_TOL: f64 = 1e-4;
const ARMIJO: f64 = 1e-4;

#[derive(Clone, Debug, Serialize)]
pub struct RestartResult {
    pub value: f64,
    pub iterations: usize,
    pub final_gradient_norm: f64,
    pub converged: bool,
}

#[derive(Clone, Debug)]
pub struct OptimizerReport {
    pub alpha: f64,
    pub m: usize,
    pub best_value: f64,
    pub best_state: StateVector,
    pub restarts_run: usize,
    /// Iterations of the best restart.
    pub iterations: usize,
    pub final_gradient_norm: f64,
    pub converged: bool,
    pub seed: u64,
    pub wall_time_s: f64,
    pub restarts: Vec<RestartResult>,
}

#[derive(Serialize)]
struct ReportJson<'a> {
    alpha: f64,
    m: usize,
    best_value: f64,
    best_state: StateJson,
    restarts_run: usize,
    iterations: usize,
    final_gradient_norm: f64,
    converged: bool,
    seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    wall_time_s: Option<f64>,
    restarts: &'a [RestartResult],
}

impl OptimizerReport {
    /// JSON export. Wall time is optional so that repeated runs can produce
    /// identical files.
    pub fn to_json(&self, with_wall_time: bool) -> Result<String> {
        let j = ReportJson {
            alpha: self.alpha,
            m: self.m,
            best_value: self.best_value,
            best_state: StateJson::from(&self.best_state),
            restarts_run: self.restarts_run,
            iterations: self.iterations,
            final_gradient_norm: self.final_gradient_norm,
            converged: self.converged,
            seed: self.seed,
            wall_time_s: with_wall_time.then_some(self.wall_time_s),
            restarts: &self.restarts,
        };
        Ok(serde_json::to_string_pretty(&j)?)
    }
}

/// Options for [`amortized_sre_lower_bound_with`].
#[derive(Clone, Debug)]
pub struct OptimizerOptions {
    pub max_iter: usize,
    pub grad_tol: f64,
    /// Extra deterministic starting points tried before the random ones.
    pub warm_starts: Vec<StateVector>,
}

impl Default for OptimizerOptions {
    fn default() -> Self {
        Self {
            max_iter: MAX_ITER,
            grad_tol: GRAD_TOL,
            warm_starts: Vec::new(),
        }
    }
}

/// `M_alpha` and its derivative with respect to each `e_P`.
fn sre_and_derivative(amps: &[Complex64], alpha: f64) -> (f64, Vec<f64>) {
    let d = amps.len();
    let n = d.trailing_zeros() as f64;
    let e = spectrum_serial(amps);
    if alpha == 1.0 {
        let df = d as f64;
        let mut h = 0.0;
        let mut de = vec![0.0; e.len()];
        for (k, &v) in e.iter().enumerate() {
            let xi = v * v / df;
            if xi > 0.0 {
                let l = xi.log2();
                h -= xi * l;
                de[k] = -(2.0 * v / df) * (l + std::f64::consts::LOG2_E);
            }
        }
        return (h - n, de);
    }
    let pow = |v: f64| {
        if alpha == 2.0 {
            v * v * v * v
        } else {
            v.abs().powf(2.0 * alpha)
        }
    };
    let r: f64 = e.iter().map(|&v| pow(v)).sum();
    let m = (r.log2() - n * alpha) / (1.0 - alpha) - n;
    let scale = 2.0 * alpha / ((1.0 - alpha) * r * std::f64::consts::LN_2);
    let de = e
        .iter()
        .map(|&v| {
            if v == 0.0 {
                0.0
            } else if alpha == 2.0 {
                scale * v * v * v
            } else {
                scale * v.signum() * v.abs().powf(2.0 * alpha - 1.0)
            }
        })
        .collect();
    (m, de)
}

/// Objective `f = M(W phi) - M(phi)` with `W = U (x) I`.
pub(crate) struct GapObjective<'a> {
    u: &'a UnitaryMatrix,
    udag: UnitaryMatrix,
    alpha: f64,
    total: usize,
}

impl<'a> GapObjective<'a> {
    pub(crate) fn new(u: &'a UnitaryMatrix, m: usize, alpha: f64) -> Self {
        Self {
            u,
            udag: u.dagger(),
            alpha,
            total: u.n() + m,
        }
    }

    fn leading(&self, u: &UnitaryMatrix, amps: &[Complex64]) -> Vec<Complex64> {
        u.apply_leading(&StateVector::from_raw(self.total, amps.to_vec()))
            .expect("dimensions checked at construction")
            .into_amplitudes()
    }

    pub(crate) fn value(&self, amps: &[Complex64]) -> f64 {
        let out = self.leading(self.u, amps);
        let (mo, _) = sre_and_derivative(&out, self.alpha);
        let (mi, _) = sre_and_derivative(amps, self.alpha);
        mo - mi
    }

    /// Value and Riemannian gradient at a unit vector.
    pub(crate) fn value_and_grad(&self, amps: &[Complex64]) -> (f64, Vec<Complex64>) {
        let out = self.leading(self.u, amps);
        let (mo, deo) = sre_and_derivative(&out, self.alpha);
        let (mi, dei) = sre_and_derivative(amps, self.alpha);
        let go = pauli_combination_apply(&deo, &out);
        let go = self.leading(&self.udag, &go);
        let gi = pauli_combination_apply(&dei, amps);
        let mut g: Vec<Complex64> = go
            .iter()
            .zip(&gi)
            .map(|(a, b)| (a - b) * 2.0)
            .collect();
        let radial: f64 = re_dot(amps, &g);
        for (gk, a) in g.iter_mut().zip(amps) {
            *gk -= a * radial;
        }
        (mo - mi, g)
    }
}

fn re_dot(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.re * y.re + x.im * y.im).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    re_dot(a, a).sqrt()
}

fn retract(amps: &[Complex64], dir: &[Complex64], step: f64) -> Vec<Complex64> {
    let mut v: Vec<Complex64> = amps.iter().zip(dir).map(|(a, g)| a + g * step).collect();
    let nv = norm(&v);
    for x in v.iter_mut() {
        *x /= nv;
    }
    v
}

/// Central-difference check of the directional derivative along `dir`.
pub(crate) fn check_gradient(
    obj: &GapObjective,
    amps: &[Complex64],
    dir: &[Complex64],
) -> Result<(f64, f64)> {
    let (_, g) = obj.value_and_grad(amps);
    let analytic = re_dot(&g, dir);
    let fp = obj.value(&retract(amps, dir, FD_STEP));
    let fm = obj.value(&retract(amps, dir, -FD_STEP));
    let numeric = (fp - fm) / (2.0 * FD_STEP);
    let err = (analytic - numeric).abs();
    let scale = analytic.abs().max(numeric.abs());
    if err > FD_REL_TOL * scale + 1e-7 {
        return Err(Error::Verification(format!(
            "gradient check failed: analytic {analytic:e}, finite difference {numeric:e}"
        )));
    }
    Ok((analytic, numeric))
}

fn tangent_random(amps: &[Complex64], rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    let n = amps.len().trailing_zeros() as usize;
    let mut v = StateVector::haar_random(n, rng).into_amplitudes();
    let radial = re_dot(amps, &v);
    for (x, a) in v.iter_mut().zip(amps) {
        *x -= a * radial;
    }
    let nv = norm(&v);
    v.iter_mut().for_each(|x| *x /= nv);
    v
}

fn ascend(
    obj: &GapObjective,
    start: Vec<Complex64>,
    rng: &mut ChaCha8Rng,
    opts: &OptimizerOptions,
) -> Result<(RestartResult, Vec<Complex64>)> {
    let mut phi = start;
    let (mut f, mut g) = obj.value_and_grad(&phi);
    // validate the analytic gradient on the first iterate
    let gn0 = norm(&g);
    if gn0 > 0.0 {
        let dir: Vec<Complex64> = g.iter().map(|x| x / gn0).collect();
        check_gradient(obj, &phi, &dir)?;
    }
    let dir = tangent_random(&phi, rng);
    check_gradient(obj, &phi, &dir)?;

    let mut prev: Option<(Vec<Complex64>, Vec<Complex64>)> = None;
    let mut iterations = 0;
    let mut converged = false;
    let mut gn = gn0;
    while iterations < opts.max_iter {
        if gn < opts.grad_tol {
            converged = true;
            break;
        }
        let mut step = match &prev {
            None => 1.0,
            Some((pphi, pg)) => {
                let s: Vec<Complex64> = phi.iter().zip(pphi).map(|(a, b)| a - b).collect();
                let y: Vec<Complex64> = g.iter().zip(pg).map(|(a, b)| a - b).collect();
                let sy = re_dot(&s, &y).abs();
                if sy > 0.0 {
                    (re_dot(&s, &s) / sy).clamp(1e-6, 1e4)
                } else {
                    1.0
                }
            }
        };
        let mut accepted = None;
        for _ in 0..60 {
            let cand = retract(&phi, &g, step);
            let fc = obj.value(&cand);
            if fc >= f + ARMIJO * step * gn * gn {
                accepted = Some(cand);
                break;
            }
            step *= 0.5;
        }
        let Some(next) = accepted else {
            // no ascent at machine precision: stationary within rounding
            converged = gn < 1e-5;
            break;
        };
        iterations += 1;
        let (fn_, gnext) = obj.value_and_grad(&next);
        prev = Some((std::mem::replace(&mut phi, next), std::mem::replace(&mut g, gnext)));
        f = fn_;
        gn = norm(&g);
    }
    if gn < opts.grad_tol {
        converged = true;
    }
    Ok((
        RestartResult {
            value: f,
            iterations,
            final_gradient_norm: gn,
            converged,
        },
        phi,
    ))
}

/// Variational lower bound on the amortized `alpha`-SRE of `u` with `m`
/// ancillas, best over `restarts` Haar-random starts.
pub fn amortized_sre_lower_bound(
    u: &UnitaryMatrix,
    alpha: f64,
    m: usize,
    restarts: usize,
    seed: u64,
) -> Result<OptimizerReport> {
    amortized_sre_lower_bound_with(u, alpha, m, restarts, seed, &OptimizerOptions::default())
}

pub fn amortized_sre_lower_bound_with(
    u: &UnitaryMatrix,
    alpha: f64,
    m: usize,
    restarts: usize,
    seed: u64,
    opts: &OptimizerOptions,
) -> Result<OptimizerReport> {
    let total = u.n() + m;
    if total > MAX_TOTAL_QUBITS {
        return Err(Error::Unsupported(format!(
            "n + m = {total} exceeds {MAX_TOTAL_QUBITS}"
        )));
    }
    if restarts == 0 {
        return Err(Error::InvalidParameter("restarts must be >= 1".into()));
    }
    if !alpha.is_finite() || alpha <= 0.5 {
        return Err(Error::InvalidParameter(format!(
            "optimizer needs a finite alpha > 1/2 (smooth objective), got {alpha}"
        )));
    }
    for w in &opts.warm_starts {
        if w.n() != total {
            return Err(Error::DimensionMismatch {
                expected: total,
                got: w.n(),
            });
        }
    }
    let started = Instant::now();
    let obj = GapObjective::new(u, m, alpha);
    let runs = opts.warm_starts.len() + restarts;
    let results = (0..runs)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(r as u64);
            let start = match opts.warm_starts.get(r) {
                Some(w) => w.amplitudes().to_vec(),
                None => StateVector::haar_random(total, &mut rng).into_amplitudes(),
            };
            ascend(&obj, start, &mut rng, opts)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut best = 0;
    for (i, (r, _)) in results.iter().enumerate() {
        if r.value > results[best].0.value {
            best = i;
        }
    }
    let (br, bs) = &results[best];
    let best_state = StateVector::normalized(bs.clone())?;
    Ok(OptimizerReport {
        alpha,
        m,
        best_value: br.value,
        best_state,
        restarts_run: runs,
        iterations: br.iterations,
        final_gradient_norm: br.final_gradient_norm,
        converged: br.converged,
        seed,
        wall_time_s: started.elapsed().as_secs_f64(),
        restarts: results.into_iter().map(|(r, _)| r).collect(),
    })
}
