//! T-count lower bounds from Choi-state entropies, and parameter scans.
//!
//! `t(U) >= M_2(Phi_U) / (2 - log2 3)`, rounded up. The nullity of the Choi
//! state gives the baseline bound.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::amortize::{
    amortized_sre_lower_bound_with, strict_amortized_sre, OptimizerOptions,
};
use crate::decomp::{strict_amortized_log_extent, strict_amortized_log_rom};
use crate::error::{Error, Result};
use crate::gates::build_gate;
use crate::hamiltonian::{heisenberg_hamiltonian, Boundary, Evolver, HamiltonianSpec};
use crate::pauli::full_spectrum;
use crate::sre::{nullity_from_spectrum, renyi_from_spectrum, NULLITY_TOL};
use crate::state::{choi_state, StateVector, UnitaryMatrix};
use crate::t_gate_amortized_sre;

/// Largest unitary size accepted (Choi state on `2n` qubits).
pub const MAX_BOUND_QUBITS: usize = 4;
/// Slack subtracted before rounding up, so exact integers stay put.
pub const CEIL_SLACK: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub gate: String,
    pub n: usize,
    /// `M_2` of the Choi state, in bits.
    pub choi_sre: f64,
    pub sre_bound: u64,
    pub nullity_bound: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub disorder: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub note: &'static str,
}

const NOTE: &str = "Choi-state bound; the amortized-SRE bound may be larger";

/// `ceil(sre / (2 - log2 3) - slack)`, clamped at 0.
pub fn sre_to_tcount(sre: f64) -> u64 {
    let v = (sre / t_gate_amortized_sre() - CEIL_SLACK).ceil();
    if v <= 0.0 {
        0
    } else {
        v as u64
    }
}

pub fn tcount_lower_bound(u: &UnitaryMatrix, label: &str) -> Result<BoundReport> {
    if u.n() > MAX_BOUND_QUBITS {
        return Err(Error::Unsupported(format!(
            "T-count bound for {} qubits exceeds the {MAX_BOUND_QUBITS}-qubit guard",
            u.n()
        )));
    }
    let sp = full_spectrum(&choi_state(u))?;
    let choi_sre = renyi_from_spectrum(&sp, 2.0)?.value;
    let nullity = nullity_from_spectrum(&sp, NULLITY_TOL)?;
    Ok(BoundReport {
        gate: label.to_string(),
        n: u.n(),
        choi_sre,
        sre_bound: sre_to_tcount(choi_sre),
        nullity_bound: nullity as u64,
        theta: None,
        t: None,
        delta: None,
        disorder: None,
        seed: None,
        note: NOTE,
    })
}

/// `%.12g`-style formatting.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    let s = if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let mut s = format!("{x:.decimals$}");
        if s.contains('.') {
            s = s.trim_end_matches('0').trim_end_matches('.').to_string();
        }
        s
    } else {
        let s = format!("{x:.11e}");
        let (mant, e) = s.split_once('e').expect("exponent");
        let mant = if mant.contains('.') {
            mant.trim_end_matches('0').trim_end_matches('.')
        } else {
            mant
        };
        format!("{mant}e{e}")
    };
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RzRow {
    pub theta: f64,
    pub amortized_sre_lb: f64,
    pub strict_sre: f64,
    pub strict_log_rom: f64,
    pub strict_log_extent: f64,
}

/// The four curves for `R_z(theta) = exp(-i theta Z)` at each grid point.
///
/// The optimizer is warm-started at the strict maximizer (a feasible
/// point), so the amortized column is never below the strict one.
pub fn scan_rz(theta_grid: &[f64], m: usize, restarts: usize, seed: u64) -> Result<Vec<RzRow>> {
    for &th in theta_grid {
        if !(0.0..=std::f64::consts::FRAC_PI_2 + 1e-12).contains(&th) {
            return Err(Error::InvalidParameter(format!(
                "theta {th} outside [0, pi/2]"
            )));
        }
    }
    let mut rows = theta_grid
        .par_iter()
        .map(|&theta| {
            let u = build_gate("rz", &[theta], 1)?;
            let strict = strict_amortized_sre(&u, 2.0, false)?;
            let warm_starts = match m {
                0 => Vec::new(),
                1 => vec![strict.maximizer.clone()],
                _ => vec![strict.maximizer.tensor(&StateVector::zero(m - 1))],
            };
            let opts = OptimizerOptions {
                warm_starts,
                ..OptimizerOptions::default()
            };
            let lb = amortized_sre_lower_bound_with(&u, 2.0, m, restarts, seed, &opts)?;
            Ok(RzRow {
                theta,
                amortized_sre_lb: lb.best_value.max(0.0),
                strict_sre: strict.value,
                strict_log_rom: strict_amortized_log_rom(&u)?.value,
                strict_log_extent: strict_amortized_log_extent(&u)?.value,
            })
        })
        .collect::<Result<Vec<RzRow>>>()?;
    rows.sort_by(|a, b| a.theta.total_cmp(&b.theta));
    Ok(rows)
}

pub fn write_rz_csv<W: Write>(rows: &[RzRow], mut w: W) -> Result<()> {
    writeln!(w, "theta,amortized_sre_lb,strict_sre,strict_log_rom,strict_log_extent")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{}",
            fmt_sig(r.theta),
            fmt_sig(r.amortized_sre_lb),
            fmt_sig(r.strict_sre),
            fmt_sig(r.strict_log_rom),
            fmt_sig(r.strict_log_extent)
        )?;
    }
    Ok(())
}

/// Disorder widths used when none are given.
pub const DEFAULT_DISORDER: [f64; 4] = [0.5, 1.0, 2.0, 5.0];
pub const DEFAULT_DELTA: f64 = 0.2;
pub const DEFAULT_SITES: usize = 4;

/// `t = 0, 0.1, ..., 3`.
pub fn default_time_grid() -> Vec<f64> {
    (0..=30).map(|k| k as f64 / 10.0).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HeisenbergRow {
    pub w: f64,
    pub t: f64,
    pub choi_sre: f64,
    pub sre_bound: u64,
    pub nullity_bound: u64,
    pub seed: u64,
}

/// Both bounds for `exp(-i H t)` on every `(W, t)` pair.
pub fn scan_heisenberg(
    sites: usize,
    delta: f64,
    w_list: &[f64],
    t_grid: &[f64],
    seed: u64,
    boundary: Boundary,
) -> Result<Vec<HeisenbergRow>> {
    if sites > MAX_BOUND_QUBITS {
        return Err(Error::Unsupported(format!(
            "{sites} sites exceeds the {MAX_BOUND_QUBITS}-qubit Choi guard"
        )));
    }
    let mut rows = Vec::new();
    for &w in w_list {
        let spec = HamiltonianSpec {
            sites,
            delta,
            disorder: w,
            seed,
            boundary,
        };
        let ev = Evolver::new(&heisenberg_hamiltonian(&spec)?)?;
        let part = t_grid
            .par_iter()
            .map(|&t| {
                let r = tcount_lower_bound(&ev.at(t), "heisenberg")?;
                Ok(HeisenbergRow {
                    w,
                    t,
                    choi_sre: r.choi_sre,
                    sre_bound: r.sre_bound,
                    nullity_bound: r.nullity_bound,
                    seed,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        rows.extend(part);
    }
    rows.sort_by(|a, b| a.w.total_cmp(&b.w).then(a.t.total_cmp(&b.t)));
    Ok(rows)
}

pub fn write_heisenberg_csv<W: Write>(rows: &[HeisenbergRow], mut w: W) -> Result<()> {
    writeln!(w, "W,t,choi_sre,sre_bound,nullity_bound,seed")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            fmt_sig(r.w),
            fmt_sig(r.t),
            fmt_sig(r.choi_sre),
            r.sre_bound,
            r.nullity_bound,
            r.seed
        )?;
    }
    Ok(())
}

/// Earliest sampled time after which `sre_bound > nullity_bound` holds at
/// every later sample, per disorder width. `None` if the last sample fails.
pub fn crossover_times(rows: &[HeisenbergRow]) -> Vec<(f64, Option<f64>)> {
    let mut ws: Vec<f64> = rows.iter().map(|r| r.w).collect();
    ws.dedup();
    ws.iter()
        .map(|&w| {
            let mut series: Vec<&HeisenbergRow> = rows.iter().filter(|r| r.w == w).collect();
            series.sort_by(|a, b| a.t.total_cmp(&b.t));
            let mut start = None;
            for r in series.iter().rev() {
                if r.sre_bound > r.nullity_bound {
                    start = Some(r.t);
                } else {
                    break;
                }
            }
            (w, start)
        })
        .collect()
}

/// Bound table for the doubly-controlled phase `diag(1, ..., 1, e^{i theta})`.
pub fn tcount_bound_ccrz(theta_grid: &[f64]) -> Result<Vec<BoundReport>> {
    let mut rows = theta_grid
        .par_iter()
        .map(|&theta| {
            let u = build_gate("ccrz", &[theta], 3)?;
            let mut r = tcount_lower_bound(&u, "ccrz")?;
            r.theta = Some(theta);
            Ok(r)
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|a, b| a.theta.unwrap_or(0.0).total_cmp(&b.theta.unwrap_or(0.0)));
    Ok(rows)
}

pub fn write_bounds_csv<W: Write>(rows: &[BoundReport], mut w: W) -> Result<()> {
    writeln!(w, "gate,n,theta,choi_sre,sre_bound,nullity_bound")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            r.gate,
            r.n,
            r.theta.map(fmt_sig).unwrap_or_default(),
            fmt_sig(r.choi_sre),
            r.sre_bound,
            r.nullity_bound
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::Gate;
    use std::f64::consts::PI;

    #[test]
    fn fmt_sig_examples() {
        assert_eq!(fmt_sig(0.0), "0");
        assert_eq!(fmt_sig(1.0), "1");
        assert_eq!(fmt_sig(2.0 - 3f64.log2()), "0.415037499279");
        assert_eq!(fmt_sig(PI), "3.14159265359");
        assert_eq!(fmt_sig(1.5e-7), "1.5e-7");
        assert_eq!(fmt_sig(-2.5), "-2.5");
        assert_eq!(fmt_sig(-1e-300 * 1e-30), "0");
    }

    #[test]
    fn rounding_keeps_exact_multiples() {
        assert_eq!(sre_to_tcount(0.0), 0);
        assert_eq!(sre_to_tcount(-1e-15), 0);
        assert_eq!(sre_to_tcount(t_gate_amortized_sre()), 1);
        assert_eq!(sre_to_tcount(3.0 * t_gate_amortized_sre()), 3);
        assert_eq!(sre_to_tcount(3.0 * t_gate_amortized_sre() + 1e-6), 4);
    }

    #[test]
    fn gate_table() {
        let t = tcount_lower_bound(&build_gate("t", &[], 1).unwrap(), "t").unwrap();
        assert_eq!((t.sre_bound, t.nullity_bound), (1, 1));
        let ccz = tcount_lower_bound(&build_gate("ccz", &[], 3).unwrap(), "ccz").unwrap();
        assert!((ccz.choi_sre - (5.0 - 11f64.log2())).abs() < 1e-9);
        assert_eq!((ccz.sre_bound, ccz.nullity_bound), (4, 3));
        let q3 = tcount_lower_bound(&build_gate("qft", &[], 3).unwrap(), "qft3").unwrap();
        assert_eq!((q3.sre_bound, q3.nullity_bound), (6, 4));
        // known decompositions: T-count 7 for CCZ, 3 for controlled-S
        assert!(ccz.sre_bound <= 7);
        let q2 = tcount_lower_bound(&build_gate("qft", &[], 2).unwrap(), "qft2").unwrap();
        assert!(q2.sre_bound <= 3);
    }

    #[test]
    fn cliffords_give_zero() {
        for g in Gate::ALL.iter().filter(|g| g.is_clifford()) {
            let n = g.num_qubits().unwrap_or(1);
            let u = crate::gates::gate_matrix(*g, &[], n).unwrap();
            let r = tcount_lower_bound(&u, g.name()).unwrap();
            assert_eq!((r.sre_bound, r.nullity_bound), (0, 0), "{}", g.name());
        }
    }

    #[test]
    fn clifford_dressing_preserves_choi_sre() {
        let t = build_gate("t", &[], 1).unwrap();
        let h = build_gate("h", &[], 1).unwrap();
        let s = build_gate("s", &[], 1).unwrap();
        let dressed = h.compose(&t).unwrap().compose(&s).unwrap();
        let a = tcount_lower_bound(&t, "t").unwrap().choi_sre;
        let b = tcount_lower_bound(&dressed, "hts").unwrap().choi_sre;
        assert!((a - b).abs() < 1e-9);
    }

    #[test]
    fn size_guard() {
        assert!(tcount_lower_bound(&UnitaryMatrix::identity(5), "id").is_err());
    }

    #[test]
    fn ccrz_table() {
        let grid: Vec<f64> = (0..=8).map(|k| 2.0 * PI / 3.0 + k as f64 * PI / 12.0).collect();
        for r in tcount_bound_ccrz(&grid).unwrap() {
            assert!(r.sre_bound >= 4, "theta {:?}: {}", r.theta, r.sre_bound);
        }
        let zero = tcount_bound_ccrz(&[0.0]).unwrap();
        assert_eq!(zero[0].sre_bound, 0);
        let pi = tcount_bound_ccrz(&[PI]).unwrap();
        assert_eq!(pi[0].sre_bound, 4);
    }

    #[test]
    fn heisenberg_small_scan() {
        let rows = scan_heisenberg(3, 0.2, &[1.0], &[0.0, 0.5, 1.0], 7, Boundary::Periodic).unwrap();
        assert_eq!(rows.len(), 3);
        assert_eq!((rows[0].sre_bound, rows[0].nullity_bound), (0, 0));
        let mut buf = Vec::new();
        write_heisenberg_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("W,t,choi_sre,sre_bound,nullity_bound,seed"));
        let first: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!((first[0], first[1], first[3], first[4], first[5]), ("1", "0", "0", "0", "7"));
        assert!(first[2].parse::<f64>().unwrap().abs() < 1e-12);
    }
}
