//! Gate-list circuits and their text format.
//!
//! One gate per line: `name[(param, ...)] q0 [q1 [q2 ...]]`. Text after `#`
//! is ignored. An optional `qubits N` line fixes the register size,
//! otherwise it is one more than the largest index used. Parameters accept
//! plain numbers and multiples of `pi` (`pi/8`, `-3*pi/4`, `0.5pi`).

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::gates::{embed, gate_matrix, Gate};
use crate::state::UnitaryMatrix;

#[derive(Clone, Debug, PartialEq)]
pub struct GateOp {
    pub gate: Gate,
    pub params: Vec<f64>,
    pub targets: Vec<usize>,
}

impl GateOp {
    pub fn new(gate: Gate, params: &[f64], targets: &[usize]) -> Self {
        Self {
            gate,
            params: params.to_vec(),
            targets: targets.to_vec(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CircuitSpec {
    pub n: usize,
    pub ops: Vec<GateOp>,
}

impl CircuitSpec {
    pub fn new(n: usize) -> Self {
        Self { n, ops: Vec::new() }
    }

    pub fn push(&mut self, gate: Gate, params: &[f64], targets: &[usize]) -> &mut Self {
        self.ops.push(GateOp::new(gate, params, targets));
        self
    }

    /// Parses the text format; `n` overrides the inferred register size.
    pub fn parse(text: &str, n: Option<usize>) -> Result<Self> {
        let mut declared = n;
        let mut ops = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let perr = |msg: String| Error::Parse {
                line: lineno + 1,
                msg,
            };
            if let Some(rest) = line.strip_prefix("qubits") {
                let k = rest
                    .trim()
                    .parse::<usize>()
                    .map_err(|e| perr(format!("bad qubit count: {e}")))?;
                declared.get_or_insert(k);
                continue;
            }
            let (head, tail) = match line.find('(') {
                Some(open) => {
                    let close = line[open..]
                        .find(')')
                        .map(|c| open + c)
                        .ok_or_else(|| perr("unclosed parameter list".into()))?;
                    (&line[..close + 1], &line[close + 1..])
                }
                None => match line.find(char::is_whitespace) {
                    Some(sp) => (&line[..sp], &line[sp..]),
                    None => (line, ""),
                },
            };
            let (name, params) = match head.find('(') {
                Some(open) => {
                    let inner = &head[open + 1..head.len() - 1];
                    let params = inner
                        .split(',')
                        .filter(|s| !s.trim().is_empty())
                        .map(parse_angle)
                        .collect::<Result<Vec<f64>>>()
                        .map_err(|e| perr(e.to_string()))?;
                    (head[..open].trim(), params)
                }
                None => (head.trim(), Vec::new()),
            };
            let gate = Gate::from_str(name).map_err(|e| perr(e.to_string()))?;
            let targets = tail
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|s| !s.is_empty())
                .map(|s| {
                    s.trim_start_matches('q')
                        .parse::<usize>()
                        .map_err(|e| perr(format!("bad qubit index `{s}`: {e}")))
                })
                .collect::<Result<Vec<usize>>>()?;
            if targets.is_empty() {
                return Err(perr(format!("gate `{name}` has no target qubits")));
            }
            ops.push(GateOp {
                gate,
                params,
                targets,
            });
        }
        let inferred = ops
            .iter()
            .flat_map(|op| op.targets.iter())
            .map(|&t| t + 1)
            .max()
            .unwrap_or(1);
        Ok(Self {
            n: declared.unwrap_or(inferred),
            ops,
        })
    }
}

/// Parses `1.25`, `pi`, `-pi/8`, `3*pi/4`, `0.5pi`, `2pi/3`.
pub fn parse_angle(s: &str) -> Result<f64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::InvalidParameter(format!("cannot parse angle `{s}`"));
    if let Ok(v) = t.parse::<f64>() {
        return Ok(v);
    }
    let lower = t.to_ascii_lowercase();
    let idx = lower.find("pi").ok_or_else(bad)?;
    let (pre, post) = (&lower[..idx], &lower[idx + 2..]);
    let pre = pre.trim_end_matches('*');
    let coeff = match pre {
        "" | "+" => 1.0,
        "-" => -1.0,
        p => p.parse::<f64>().map_err(|_| bad())?,
    };
    let denom = match post {
        "" => 1.0,
        p => p
            .strip_prefix('/')
            .ok_or_else(bad)?
            .parse::<f64>()
            .map_err(|_| bad())?,
    };
    Ok(coeff * std::f64::consts::PI / denom)
}

/// Product `G_k ... G_1` of the embedded gates (first listed gate applied first).
pub fn run_circuit(spec: &CircuitSpec) -> Result<UnitaryMatrix> {
    let mut u = UnitaryMatrix::identity(spec.n);
    for op in &spec.ops {
        let k = op.gate.num_qubits().unwrap_or(op.targets.len());
        let g = gate_matrix(op.gate, &op.params, k)?;
        let full = embed(&g, &op.targets, spec.n)?;
        u = full.compose(&u)?;
    }
    Ok(u)
}
