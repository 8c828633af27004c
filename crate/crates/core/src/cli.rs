//! Command-line front end. [`dispatch`] returns the process exit code:
//! 0 on success, 1 on numerical failure, 2 on usage errors.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::amortize::{
    amortized_sre_lower_bound, strict_amortized_sre, strict_sre_with_ancillas,
    verify_psd_lemmas, verify_r2_inequalities, InequalityGate, DEFAULT_RESTARTS,
};
use crate::circuit::parse_angle;
use crate::decomp::{
    robustness_of_magic, strict_amortized_log_extent, strict_amortized_log_rom, ExtentSolver,
};
use crate::error::{Error, Result};
use crate::gates::{gate_matrix, Gate};
use crate::hamiltonian::Boundary;
use crate::io::{load_state, read_circuit};
use crate::pauli::full_spectrum;
use crate::sre::{nonstabilizing_power, renyi_entropy};
use crate::stabilizer::{stabilizer_count, StabilizerSet, CACHE_DIR_ENV};
use crate::state::{StateVector, UnitaryMatrix};
use crate::tcount::{
    crossover_times, default_time_grid, fmt_sig, scan_heisenberg, scan_rz, tcount_bound_ccrz,
    tcount_lower_bound, write_bounds_csv, write_heisenberg_csv, write_rz_csv, DEFAULT_DELTA,
    DEFAULT_DISORDER, DEFAULT_SITES,
};

const AFTER_HELP: &str = "Units: entropies and log-measures in bits, angles in radians. \
Angles accept expressions such as pi/8 or 3*pi/4. R_z(theta) = exp(-i theta Z), so T equals \
R_z(pi/8) up to a global phase; rzh/rxh/ryh use the half-angle convention exp(-i theta P/2).";

#[derive(Parser, Debug)]
#[command(name = "stabmagic", version, about = "Stabilizer Renyi entropies, amortized magic and T-count lower bounds", after_help = AFTER_HELP)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// RNG seed; 0 derives one from system entropy and prints it.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write machine-readable output here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Output format.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// A unitary given by a library gate or a circuit file.
#[derive(Args, Debug, Clone)]
pub struct UnitaryArgs {
    /// Library gate name (t, sqrt_t, h, s, rz, rzh, ccz, ccrz, qft, cnot, ...).
    #[arg(long)]
    pub gate: Option<String>,
    /// Gate parameters in radians, comma separated.
    #[arg(long, value_delimiter = ',', value_parser = angle)]
    pub params: Vec<f64>,
    /// Number of qubits for size-generic gates (qft).
    #[arg(long)]
    pub qubits: Option<usize>,
    /// Circuit file, one `name[(params)] q0 q1 ...` per line.
    #[arg(long, conflicts_with = "gate")]
    pub circuit: Option<PathBuf>,
}

fn angle(s: &str) -> std::result::Result<f64, String> {
    parse_angle(s).map_err(|e| e.to_string())
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// alpha-SRE M_alpha (bits) of a state, optionally after a gate.
    #[command(after_help = AFTER_HELP)]
    Sre {
        #[command(flatten)]
        unitary: UnitaryArgs,
        /// Preset (zero, plus, t-plus, sqrt-t-plus, magic-pi10, bell, ccz-plus, haar), .json state, or circuit file.
        #[arg(long, default_value = "plus")]
        input: String,
        /// Qubits for the zero/plus/haar presets (default: the gate size, else 1).
        #[arg(long)]
        input_qubits: Option<usize>,
        /// Renyi index (>= 0; 1 is the Shannon limit).
        #[arg(long, default_value_t = 2.0)]
        alpha: f64,
    },
    /// Full Pauli spectrum <P> as CSV (x_mask,z_mask,expectation).
    #[command(after_help = AFTER_HELP)]
    Spectrum {
        #[command(flatten)]
        unitary: UnitaryArgs,
        #[arg(long, default_value = "plus")]
        input: String,
        #[arg(long)]
        input_qubits: Option<usize>,
    },
    /// Robustness of magic (LP over all stabilizer states, n <= 3).
    #[command(after_help = AFTER_HELP)]
    Rom {
        #[arg(long, default_value = "t-plus")]
        input: String,
        #[arg(long)]
        input_qubits: Option<usize>,
    },
    /// Stabilizer extent with a dual optimality certificate (n <= 3).
    #[command(after_help = AFTER_HELP)]
    Extent {
        #[arg(long, default_value = "t-plus")]
        input: String,
        #[arg(long)]
        input_qubits: Option<usize>,
    },
    /// Variational lower bound on the amortized alpha-SRE (bits).
    #[command(after_help = AFTER_HELP)]
    Amortize {
        #[command(flatten)]
        unitary: UnitaryArgs,
        #[arg(long, default_value_t = 2.0)]
        alpha: f64,
        /// Ancilla qubits m (default: n); n + m <= 4.
        #[arg(long)]
        ancillas: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_RESTARTS)]
        restarts: usize,
        /// Include wall time in the JSON report (makes output run-dependent).
        #[arg(long)]
        timing: bool,
    },
    /// Strict amortized value: maximum over stabilizer inputs (bits).
    #[command(after_help = AFTER_HELP)]
    Strict {
        #[command(flatten)]
        unitary: UnitaryArgs,
        #[arg(long, default_value_t = 2.0)]
        alpha: f64,
        /// sre (any n <= 2), rom or extent (single-qubit only).
        #[arg(long, value_enum, default_value_t = Measure::Sre)]
        measure: Measure,
        /// Allow the 36720-state 4-qubit enumeration.
        #[arg(long)]
        allow_large: bool,
    },
    /// T-count lower bounds from the Choi-state 2-SRE and nullity.
    #[command(after_help = AFTER_HELP)]
    Tcount {
        #[command(flatten)]
        unitary: UnitaryArgs,
    },
    /// Scan R_z(theta): amortized lower bound, strict SRE, strict log-RoM and log-extent.
    #[command(after_help = AFTER_HELP)]
    ScanRz {
        #[arg(long, default_value_t = 33)]
        points: usize,
        /// Upper end of the grid (radians, <= pi/2).
        #[arg(long, value_parser = angle, default_value = "pi/4")]
        theta_max: f64,
        #[arg(long, default_value_t = 1)]
        ancillas: usize,
        #[arg(long, default_value_t = DEFAULT_RESTARTS)]
        restarts: usize,
    },
    /// T-count bounds for disordered Heisenberg evolution exp(-iHt).
    #[command(after_help = AFTER_HELP)]
    ScanHeisenberg {
        #[arg(long, default_value_t = DEFAULT_SITES)]
        sites: usize,
        #[arg(long, default_value_t = DEFAULT_DELTA)]
        delta: f64,
        /// Disorder widths W, comma separated.
        #[arg(long, value_delimiter = ',')]
        disorder: Vec<f64>,
        /// Largest time (the grid is 0, dt, ..., t_max).
        #[arg(long, default_value_t = 3.0)]
        t_max: f64,
        #[arg(long, default_value_t = 30)]
        t_steps: usize,
        #[arg(long, value_enum, default_value_t = BoundaryArg::Periodic)]
        boundary: BoundaryArg,
    },
    /// T-count bound for the doubly-controlled phase diag(1,...,1,e^{i theta}).
    #[command(after_help = AFTER_HELP)]
    Ccrz {
        #[arg(long, value_parser = angle, default_value = "2*pi/3")]
        theta_min: f64,
        #[arg(long, value_parser = angle, default_value = "4*pi/3")]
        theta_max: f64,
        #[arg(long, default_value_t = 17)]
        points: usize,
    },
    /// Nonstabilizing power: mean M_alpha(U|phi>) over stabilizer inputs (bits).
    #[command(after_help = AFTER_HELP)]
    NonstabPower {
        #[command(flatten)]
        unitary: UnitaryArgs,
        #[arg(long, default_value_t = 2.0)]
        alpha: f64,
    },
    /// Enumerate stabilizer states; writes the binary cache when a cache dir is set.
    #[command(after_help = AFTER_HELP)]
    EnumerateStab {
        #[arg(long)]
        qubits: usize,
        #[arg(long)]
        allow_large: bool,
        /// Cache directory (default: $STABMAGIC_CACHE_DIR).
        #[arg(long)]
        cache_dir: Option<PathBuf>,
    },
    /// Runs the inequality, PSD and structural property suites.
    #[command(after_help = AFTER_HELP)]
    Verify {
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        /// Skip the 4096-dimensional direct eigenvalue check.
        #[arg(long)]
        skip_direct: bool,
    },
    /// Amortized-SRE lower bounds for U and U^dagger side by side (no assertion).
    #[command(after_help = AFTER_HELP)]
    DaggerCompare {
        #[command(flatten)]
        unitary: UnitaryArgs,
        #[arg(long)]
        ancillas: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_RESTARTS)]
        restarts: usize,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Measure {
    Sre,
    Rom,
    Extent,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum BoundaryArg {
    Periodic,
    Open,
}

impl From<BoundaryArg> for Boundary {
    fn from(b: BoundaryArg) -> Self {
        match b {
            BoundaryArg::Periodic => Boundary::Periodic,
            BoundaryArg::Open => Boundary::Open,
        }
    }
}

/// Parses `argv` (including the program name) and runs the command.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// 2 for bad input, 1 for numerical failures.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Numerical(_)
        | Error::NotConverged(_)
        | Error::Infeasible
        | Error::Verification(_)
        | Error::NotNormalized(_)
        | Error::NotUnitary(_)
        | Error::NotHermitian(_) => 1,
        _ => 2,
    }
}

struct Ctx {
    output: Option<PathBuf>,
    format: Option<Format>,
}

impl Ctx {
    fn emit(&self, text: &str) -> Result<()> {
        match &self.output {
            Some(p) => std::fs::write(p, text)?,
            None => print!("{text}"),
        }
        Ok(())
    }

    fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }
}

fn effective_seed(seed: u64) -> u64 {
    if seed != 0 {
        return seed;
    }
    let t = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_nanos() as u64)
        .unwrap_or(1);
    let mut rng = ChaCha8Rng::seed_from_u64(t ^ u64::from(std::process::id()));
    rand::Rng::random::<u64>(&mut rng).max(1)
}

fn resolve_unitary(a: &UnitaryArgs) -> Result<Option<(UnitaryMatrix, String)>> {
    if let Some(path) = &a.circuit {
        let u = read_circuit(path, a.qubits)?;
        return Ok(Some((u, path.display().to_string())));
    }
    let Some(name) = &a.gate else {
        return Ok(None);
    };
    let gate: Gate = name.parse()?;
    let n = match (gate.num_qubits(), a.qubits) {
        (Some(k), _) => k,
        (None, Some(q)) => q,
        (None, None) => {
            return Err(Error::InvalidParameter(format!(
                "gate {} needs --qubits",
                gate.name()
            )))
        }
    };
    let u = gate_matrix(gate, &a.params, n)?;
    let label = if gate.num_qubits().is_none() {
        format!("{}{}", gate.name(), n)
    } else {
        gate.name().to_string()
    };
    Ok(Some((u, label)))
}

fn require_unitary(a: &UnitaryArgs) -> Result<(UnitaryMatrix, String)> {
    resolve_unitary(a)?
        .ok_or_else(|| Error::InvalidParameter("a --gate or --circuit is required".into()))
}

fn input_state(
    input: &str,
    input_qubits: Option<usize>,
    u: Option<&UnitaryMatrix>,
    seed: u64,
) -> Result<StateVector> {
    let n = input_qubits.or(u.map(|u| u.n())).unwrap_or(1);
    load_state(input, n, seed)
}

fn run(cli: Cli) -> Result<()> {
    if let Some(t) = cli.global.threads {
        // a second build in the same process (tests) is harmless
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build_global();
    }
    let seed = effective_seed(cli.global.seed);
    eprintln!("seed: {seed}");
    let ctx = Ctx {
        output: cli.global.output.clone(),
        format: cli.global.format,
    };
    match cli.command {
        Command::Sre {
            unitary,
            input,
            input_qubits,
            alpha,
        } => {
            let u = resolve_unitary(&unitary)?;
            let psi = input_state(&input, input_qubits, u.as_ref().map(|x| &x.0), seed)?;
            let state = match &u {
                Some((u, _)) => u.apply_leading(&psi)?,
                None => psi,
            };
            let v = renyi_entropy(&state, alpha)?;
            match ctx.format_or(Format::Json) {
                Format::Json => ctx.emit(&format!(
                    "{}\n",
                    serde_json::to_string_pretty(&json!({
                        "alpha": alpha, "value": v.value, "r_alpha": v.r_alpha,
                        "n": state.n(), "units": "bits", "seed": seed
                    }))?
                )),
                Format::Csv => ctx.emit(&format!(
                    "alpha,value,r_alpha\n{},{},{}\n",
                    fmt_sig(alpha),
                    fmt_sig(v.value),
                    fmt_sig(v.r_alpha)
                )),
            }
        }
        Command::Spectrum {
            unitary,
            input,
            input_qubits,
        } => {
            let u = resolve_unitary(&unitary)?;
            let psi = input_state(&input, input_qubits, u.as_ref().map(|x| &x.0), seed)?;
            let state = match &u {
                Some((u, _)) => u.apply_leading(&psi)?,
                None => psi,
            };
            let sp = full_spectrum(&state)?;
            let mut buf = Vec::new();
            sp.write_csv(&mut buf)?;
            ctx.emit(&String::from_utf8(buf).expect("ascii"))
        }
        Command::Rom { input, input_qubits } => {
            let psi = input_state(&input, input_qubits, None, seed)?;
            let set = StabilizerSet::shared(psi.n(), false)?;
            let (r, d) = robustness_of_magic(&psi, &set)?;
            let dec: serde_json::Value = serde_json::from_str(&d.to_json()?)?;
            ctx.emit(&format!(
                "{}\n",
                serde_json::to_string_pretty(&json!({
                    "robustness": r, "log2_robustness": r.log2(), "decomposition": dec
                }))?
            ))
        }
        Command::Extent { input, input_qubits } => {
            let psi = input_state(&input, input_qubits, None, seed)?;
            let set = StabilizerSet::shared(psi.n(), false)?;
            let sol = ExtentSolver::new(&set)?.solve(&psi)?;
            let dec: serde_json::Value = serde_json::from_str(&sol.decomposition.to_json()?)?;
            ctx.emit(&format!(
                "{}\n",
                serde_json::to_string_pretty(&json!({
                    "extent": sol.extent, "log2_extent": sol.extent.log2(),
                    "certified_lower_bound": sol.extent_lower_bound(),
                    "l1_gap": sol.gap(), "iterations": sol.iterations,
                    "decomposition": dec
                }))?
            ))
        }
        Command::Amortize {
            unitary,
            alpha,
            ancillas,
            restarts,
            timing,
        } => {
            let (u, _) = require_unitary(&unitary)?;
            let m = ancillas.unwrap_or(u.n());
            let rep = amortized_sre_lower_bound(&u, alpha, m, restarts, seed)?;
            eprintln!("wall time: {:.3} s", rep.wall_time_s);
            ctx.emit(&format!("{}\n", rep.to_json(timing)?))
        }
        Command::Strict {
            unitary,
            alpha,
            measure,
            allow_large,
        } => {
            let (u, label) = require_unitary(&unitary)?;
            let out = match measure {
                Measure::Sre => {
                    let s = strict_amortized_sre(&u, alpha, allow_large)?;
                    json!({"gate": label, "measure": "sre", "alpha": alpha, "value": s.value,
                           "argmax": s.argmax, "maximizer": crate::io::StateJson::from(&s.maximizer)})
                }
                Measure::Rom => {
                    let s = strict_amortized_log_rom(&u)?;
                    json!({"gate": label, "measure": "log_rom", "value": s.value, "argmax": s.argmax})
                }
                Measure::Extent => {
                    let s = strict_amortized_log_extent(&u)?;
                    json!({"gate": label, "measure": "log_extent", "value": s.value, "argmax": s.argmax})
                }
            };
            ctx.emit(&format!("{}\n", serde_json::to_string_pretty(&out)?))
        }
        Command::Tcount { unitary } => {
            let (u, label) = require_unitary(&unitary)?;
            let r = tcount_lower_bound(&u, &label)?;
            match ctx.format_or(Format::Json) {
                Format::Json => ctx.emit(&format!("{}\n", serde_json::to_string_pretty(&r)?)),
                Format::Csv => {
                    let mut buf = Vec::new();
                    write_bounds_csv(&[r], &mut buf)?;
                    ctx.emit(&String::from_utf8(buf).expect("ascii"))
                }
            }
        }
        Command::ScanRz {
            points,
            theta_max,
            ancillas,
            restarts,
        } => {
            if points < 2 {
                return Err(Error::InvalidParameter("--points must be >= 2".into()));
            }
            let grid: Vec<f64> = (0..points)
                .map(|k| theta_max * k as f64 / (points - 1) as f64)
                .collect();
            let rows = scan_rz(&grid, ancillas, restarts, seed)?;
            match ctx.format_or(Format::Csv) {
                Format::Csv => {
                    let mut buf = Vec::new();
                    write_rz_csv(&rows, &mut buf)?;
                    ctx.emit(&String::from_utf8(buf).expect("ascii"))
                }
                Format::Json => ctx.emit(&format!("{}\n", serde_json::to_string_pretty(&rows)?)),
            }
        }
        Command::ScanHeisenberg {
            sites,
            delta,
            disorder,
            t_max,
            t_steps,
            boundary,
        } => {
            let w_list = if disorder.is_empty() {
                DEFAULT_DISORDER.to_vec()
            } else {
                disorder
            };
            let grid = if t_steps == 30 && t_max == 3.0 {
                default_time_grid()
            } else {
                (0..=t_steps.max(1))
                    .map(|k| t_max * k as f64 / t_steps.max(1) as f64)
                    .collect()
            };
            let rows = scan_heisenberg(sites, delta, &w_list, &grid, seed, boundary.into())?;
            for (w, t) in crossover_times(&rows) {
                match t {
                    Some(t) => eprintln!("W = {w}: sre_bound > nullity_bound for all sampled t >= {t}"),
                    None => eprintln!("W = {w}: no crossover on this grid"),
                }
            }
            match ctx.format_or(Format::Csv) {
                Format::Csv => {
                    let mut buf = Vec::new();
                    write_heisenberg_csv(&rows, &mut buf)?;
                    ctx.emit(&String::from_utf8(buf).expect("ascii"))
                }
                Format::Json => ctx.emit(&format!("{}\n", serde_json::to_string_pretty(&rows)?)),
            }
        }
        Command::Ccrz {
            theta_min,
            theta_max,
            points,
        } => {
            let grid: Vec<f64> = if points <= 1 {
                vec![theta_min]
            } else {
                (0..points)
                    .map(|k| theta_min + (theta_max - theta_min) * k as f64 / (points - 1) as f64)
                    .collect()
            };
            let rows = tcount_bound_ccrz(&grid)?;
            match ctx.format_or(Format::Csv) {
                Format::Csv => {
                    let mut buf = Vec::new();
                    write_bounds_csv(&rows, &mut buf)?;
                    ctx.emit(&String::from_utf8(buf).expect("ascii"))
                }
                Format::Json => ctx.emit(&format!("{}\n", serde_json::to_string_pretty(&rows)?)),
            }
        }
        Command::NonstabPower { unitary, alpha } => {
            let (u, label) = require_unitary(&unitary)?;
            let v = nonstabilizing_power(&u, alpha)?;
            ctx.emit(&format!(
                "{}\n",
                serde_json::to_string_pretty(&json!({"gate": label, "alpha": alpha, "value": v}))?
            ))
        }
        Command::EnumerateStab {
            qubits,
            allow_large,
            cache_dir,
        } => {
            let dir = cache_dir.or_else(|| std::env::var_os(CACHE_DIR_ENV).map(PathBuf::from));
            let set = match &dir {
                Some(d) => StabilizerSet::load_or_build(d, qubits, allow_large)?,
                None => crate::stabilizer::enumerate_stabilizer_states_gated(qubits, allow_large)?,
            };
            let out = json!({
                "n": qubits, "count": set.count(), "expected": stabilizer_count(qubits),
                "cache_dir": dir.map(|d| d.display().to_string())
            });
            ctx.emit(&format!("{}\n", serde_json::to_string_pretty(&out)?))
        }
        Command::Verify { trials, skip_direct } => {
            let checks = verify_suite(trials, seed, !skip_direct)?;
            let failed = checks.iter().filter(|c| !c.pass).count();
            let text = match ctx.format_or(Format::Csv) {
                Format::Json => format!("{}\n", serde_json::to_string_pretty(&checks)?),
                Format::Csv => {
                    let mut s = String::from("check,pass,detail\n");
                    for c in &checks {
                        let _ = writeln!(s, "{},{},\"{}\"", c.name, c.pass, c.detail);
                    }
                    s
                }
            };
            ctx.emit(&text)?;
            for c in &checks {
                eprintln!("{} {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail);
            }
            if failed > 0 {
                return Err(Error::Verification(format!("{failed} check(s) failed")));
            }
            Ok(())
        }
        Command::DaggerCompare {
            unitary,
            ancillas,
            restarts,
        } => {
            let (u, label) = require_unitary(&unitary)?;
            let m = ancillas.unwrap_or(u.n());
            let a = amortized_sre_lower_bound(&u, 2.0, m, restarts, seed)?;
            let b = amortized_sre_lower_bound(&u.dagger(), 2.0, m, restarts, seed)?;
            let out = json!({
                "gate": label, "m": m, "restarts": restarts, "seed": seed,
                "lower_bound_u": a.best_value, "lower_bound_u_dagger": b.best_value,
                "difference": a.best_value - b.best_value,
                "note": "variational lower bounds only; no equality is asserted"
            });
            ctx.emit(&format!("{}\n", serde_json::to_string_pretty(&out)?))
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

fn check(name: &str, pass: bool, detail: String) -> Check {
    Check {
        name: name.into(),
        pass,
        detail,
    }
}

/// The numerical suites behind the `verify` subcommand.
pub fn verify_suite(trials: usize, seed: u64, direct: bool) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for gate in [InequalityGate::T, InequalityGate::Ccz] {
        let r = verify_r2_inequalities(gate, trials, seed)?;
        out.push(check(
            &format!("r2_inequality_{gate:?}").to_lowercase(),
            r.min_value >= -1e-9 && r.equality_case.abs() < 1e-9,
            format!("min {:e}, equality case {:e}", r.min_value, r.equality_case),
        ));
    }
    let psd = verify_psd_lemmas(direct);
    out.push(match psd {
        Ok(p) => check(
            "psd_lemmas",
            true,
            format!(
                "min eig B {:e}, B- {:e}, 2A-B {:e}, direct {:?}",
                p.b_min_eig, p.b_minus_min_eig, p.two_a_minus_b_min_eig, p.direct_min_eig
            ),
        ),
        Err(e) => check("psd_lemmas", false, e.to_string()),
    });
    let counts: Vec<usize> = (1..=3)
        .map(|n| StabilizerSet::shared(n, false).map(|s| s.count()))
        .collect::<Result<_>>()?;
    out.push(check(
        "stabilizer_counts",
        counts == [6, 60, 1080],
        format!("{counts:?}"),
    ));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for n in 1..=4 {
        for _ in 0..10 {
            let psi = StateVector::haar_random(n, &mut rng);
            let s = full_spectrum(&psi)?.purity_sum();
            worst = worst.max((s - (1u64 << n) as f64).abs());
        }
    }
    out.push(check("purity_sum", worst < 1e-9, format!("max deviation {worst:e}")));
    // additivity and Clifford invariance
    let mut worst_add: f64 = 0.0;
    let mut worst_cliff: f64 = 0.0;
    let cliff = gate_matrix(Gate::H, &[], 1)?
        .tensor(&gate_matrix(Gate::S, &[], 1)?)
        .compose(&gate_matrix(Gate::Cnot, &[], 2)?)?;
    for alpha in [0.5, 1.0, 2.0, 3.0] {
        for _ in 0..5 {
            let a = StateVector::haar_random(1, &mut rng);
            let b = StateVector::haar_random(1, &mut rng);
            let ab = a.tensor(&b);
            let lhs = renyi_entropy(&ab, alpha)?.value;
            let rhs = renyi_entropy(&a, alpha)?.value + renyi_entropy(&b, alpha)?.value;
            worst_add = worst_add.max((lhs - rhs).abs());
            let c = renyi_entropy(&cliff.apply(&ab)?, alpha)?.value;
            worst_cliff = worst_cliff.max((c - lhs).abs());
        }
    }
    out.push(check("sre_additivity", worst_add < 1e-9, format!("{worst_add:e}")));
    out.push(check("sre_clifford_invariance", worst_cliff < 1e-9, format!("{worst_cliff:e}")));
    for (name, g, p) in [("t", Gate::T, vec![]), ("rz_pi16", Gate::Rz, vec![PI / 16.0])] {
        let u = gate_matrix(g, &p, 1)?;
        let s2 = strict_sre_with_ancillas(&u, 2.0, 1, false)?.value;
        let s3 = strict_sre_with_ancillas(&u, 2.0, 2, false)?.value;
        out.push(check(
            &format!("stab3_equals_stab2_{name}"),
            (s2 - s3).abs() < 1e-9,
            format!("STAB_2 {s2}, STAB_3 {s3}"),
        ));
    }
    let (u1, u2) = nonstab_counterexample()?;
    let m12 = nonstabilizing_power(&u1.compose(&u2)?, 2.0)?;
    let m1 = nonstabilizing_power(&u1, 2.0)?;
    let m2 = nonstabilizing_power(&u2, 2.0)?;
    out.push(check(
        "nonstab_power_superadditive_example",
        m12 > m1 + m2,
        format!("M(U1U2) {m12:.6} vs M(U1) + M(U2) {:.6}", m1 + m2),
    ));
    Ok(out)
}

/// `U1 = R_z(pi) R_x(pi/2) R_z(pi/10)` in the half-angle convention, `U2 = sqrt(T)`.
pub fn nonstab_counterexample() -> Result<(UnitaryMatrix, UnitaryMatrix)> {
    let rz = |t: f64| gate_matrix(Gate::Rzh, &[t], 1);
    let u1 = rz(PI)?
        .compose(&gate_matrix(Gate::Rxh, &[PI / 2.0], 1)?)?
        .compose(&rz(PI / 10.0)?)?;
    Ok((u1, gate_matrix(Gate::SqrtT, &[], 1)?))
}

/// Output of `stabmagic sre` for a gate applied to a preset, for doc tests
/// and scripting.
pub fn sre_of(gate: &str, input: &str, alpha: f64) -> Result<f64> {
    let g: Gate = gate.parse()?;
    let u = gate_matrix(g, &[], g.num_qubits().unwrap_or(1))?;
    let psi = load_state(input, u.n(), 1)?;
    Ok(renyi_entropy(&u.apply_leading(&psi)?, alpha)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_to_string(args: &[&str]) -> (i32, String) {
        let dir = std::env::temp_dir().join(format!(
            "stabmagic-cli-{}-{}",
            std::process::id(),
            args.join("_").replace(['/', '*', ' '], "")
        ));
        std::fs::create_dir_all(&dir).unwrap();
        let out = dir.join("out");
        let mut argv = vec!["stabmagic"];
        argv.extend_from_slice(args);
        let out_s = out.to_str().unwrap().to_string();
        argv.push("--output");
        argv.push(&out_s);
        let code = dispatch(argv);
        let text = std::fs::read_to_string(&out).unwrap_or_default();
        std::fs::remove_dir_all(&dir).unwrap();
        (code, text)
    }

    #[test]
    fn sre_t_plus() {
        let (code, text) = run_to_string(&["sre", "--gate", "t", "--input", "plus", "--alpha", "2", "--seed", "1"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert!((v["value"].as_f64().unwrap() - (2.0 - 3f64.log2())).abs() < 1e-12);
    }

    #[test]
    fn tcount_qft3() {
        let (code, text) = run_to_string(&["tcount", "--gate", "qft", "--qubits", "3", "--seed", "1"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["sre_bound"], 6);
        assert_eq!(v["nullity_bound"], 4);
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(dispatch(["stabmagic", "no-such-command"]), 2);
        assert_eq!(dispatch(["stabmagic", "tcount", "--gate", "bogus", "--seed", "1"]), 2);
        assert_eq!(dispatch(["stabmagic", "tcount", "--gate", "qft", "--seed", "1"]), 2);
    }

    #[test]
    fn seeded_runs_are_identical() {
        let args = ["amortize", "--gate", "t", "--ancillas", "1", "--restarts", "2", "--seed", "5"];
        let (c1, a) = run_to_string(&args);
        let (c2, b) = run_to_string(&args);
        assert_eq!((c1, c2), (0, 0));
        assert_eq!(a, b);
    }

    #[test]
    fn counterexample_superadditive() {
        let (u1, u2) = nonstab_counterexample().unwrap();
        let m12 = nonstabilizing_power(&u1.compose(&u2).unwrap(), 2.0).unwrap();
        let m1 = nonstabilizing_power(&u1, 2.0).unwrap();
        let m2 = nonstabilizing_power(&u2, 2.0).unwrap();
        assert!(m12 > m1 + m2, "{m12} vs {m1} + {m2}");
    }

    #[test]
    fn sre_of_matches() {
        assert!((sre_of("t", "plus", 2.0).unwrap() - (2.0 - 3f64.log2())).abs() < 1e-12);
    }
}
