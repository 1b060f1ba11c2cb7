//! Named gates and plain-text circuit descriptions.
//!
//! Circuit files hold one gate per line as `GATE q[,q2]`. Lines starting with
//! `#` are comments; a `# circuit: <name>` line names the circuit and a
//! `# dim: 3` line switches the file to qutrit gates.

use std::fmt;
use std::str::FromStr;

use crate::error::{Result, SimError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gate {
    X(usize),
    Y(usize),
    Z(usize),
    H(usize),
    S(usize),
    Sdg(usize),
    Cnot(usize, usize),
    Cz(usize, usize),
    Swap(usize, usize),
    /// Qutrit shift `|j> -> |j+1>`.
    Shift(usize),
    /// Qutrit phase `|j> -> w^j |j>`.
    Phase(usize),
    /// Qutrit `|c, t> -> |c, t + c>`.
    Sum(usize, usize),
    /// Qutrit `|c, t> -> |c, t - c>`.
    Diff(usize, usize),
    /// Qutrit discrete Fourier transform.
    Fourier(usize),
}

impl Gate {
    /// Build a gate from its file name and target list, checking arity.
    pub fn from_name(name: &str, targets: &[usize]) -> Result<Self> {
        let one = |f: fn(usize) -> Gate, gate: &'static str| {
            if targets.len() != 1 {
                return Err(SimError::Arity {
                    gate,
                    expected: 1,
                    found: targets.len(),
                });
            }
            Ok(f(targets[0]))
        };
        let two = |f: fn(usize, usize) -> Gate, gate: &'static str| {
            if targets.len() != 2 {
                return Err(SimError::Arity {
                    gate,
                    expected: 2,
                    found: targets.len(),
                });
            }
            if targets[0] == targets[1] {
                return Err(SimError::RepeatedTarget(targets[0]));
            }
            Ok(f(targets[0], targets[1]))
        };
        match name.to_ascii_uppercase().as_str() {
            "X" => one(Gate::X, "X"),
            "Y" => one(Gate::Y, "Y"),
            "Z" => one(Gate::Z, "Z"),
            "H" => one(Gate::H, "H"),
            "S" => one(Gate::S, "S"),
            "SDG" => one(Gate::Sdg, "SDG"),
            "CNOT" | "CX" => two(Gate::Cnot, "CNOT"),
            "CZ" => two(Gate::Cz, "CZ"),
            "SWAP" => two(Gate::Swap, "SWAP"),
            "SHIFT" => one(Gate::Shift, "SHIFT"),
            "PHASE" => one(Gate::Phase, "PHASE"),
            "SUM" => two(Gate::Sum, "SUM"),
            "DIFF" => two(Gate::Diff, "DIFF"),
            "FOURIER" => one(Gate::Fourier, "FOURIER"),
            other => Err(SimError::Parse {
                line: 0,
                msg: format!("unknown gate {other}"),
            }),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Gate::X(_) => "X",
            Gate::Y(_) => "Y",
            Gate::Z(_) => "Z",
            Gate::H(_) => "H",
            Gate::S(_) => "S",
            Gate::Sdg(_) => "SDG",
            Gate::Cnot(..) => "CNOT",
            Gate::Cz(..) => "CZ",
            Gate::Swap(..) => "SWAP",
            Gate::Shift(_) => "SHIFT",
            Gate::Phase(_) => "PHASE",
            Gate::Sum(..) => "SUM",
            Gate::Diff(..) => "DIFF",
            Gate::Fourier(_) => "FOURIER",
        }
    }

    pub fn targets(&self) -> Vec<usize> {
        match *self {
            Gate::X(q)
            | Gate::Y(q)
            | Gate::Z(q)
            | Gate::H(q)
            | Gate::S(q)
            | Gate::Sdg(q)
            | Gate::Shift(q)
            | Gate::Phase(q)
            | Gate::Fourier(q) => vec![q],
            Gate::Cnot(a, b)
            | Gate::Cz(a, b)
            | Gate::Swap(a, b)
            | Gate::Sum(a, b)
            | Gate::Diff(a, b) => vec![a, b],
        }
    }

    /// Local dimension the gate acts on.
    pub fn dim(&self) -> usize {
        match self {
            Gate::Shift(_) | Gate::Phase(_) | Gate::Sum(..) | Gate::Diff(..) | Gate::Fourier(_) => 3,
            _ => 2,
        }
    }

    /// Same gate with targets relabelled through `map`.
    pub fn remap(&self, map: &[usize]) -> Gate {
        match *self {
            Gate::X(q) => Gate::X(map[q]),
            Gate::Y(q) => Gate::Y(map[q]),
            Gate::Z(q) => Gate::Z(map[q]),
            Gate::H(q) => Gate::H(map[q]),
            Gate::S(q) => Gate::S(map[q]),
            Gate::Sdg(q) => Gate::Sdg(map[q]),
            Gate::Cnot(a, b) => Gate::Cnot(map[a], map[b]),
            Gate::Cz(a, b) => Gate::Cz(map[a], map[b]),
            Gate::Swap(a, b) => Gate::Swap(map[a], map[b]),
            Gate::Shift(q) => Gate::Shift(map[q]),
            Gate::Phase(q) => Gate::Phase(map[q]),
            Gate::Sum(a, b) => Gate::Sum(map[a], map[b]),
            Gate::Diff(a, b) => Gate::Diff(map[a], map[b]),
            Gate::Fourier(q) => Gate::Fourier(map[q]),
        }
    }

    /// Gate sequence implementing the inverse.
    pub fn inverse(&self) -> Vec<Gate> {
        match *self {
            Gate::S(q) => vec![Gate::Sdg(q)],
            Gate::Sdg(q) => vec![Gate::S(q)],
            Gate::Shift(q) => vec![Gate::Shift(q), Gate::Shift(q)],
            Gate::Phase(q) => vec![Gate::Phase(q), Gate::Phase(q)],
            Gate::Sum(a, b) => vec![Gate::Diff(a, b)],
            Gate::Diff(a, b) => vec![Gate::Sum(a, b)],
            Gate::Fourier(q) => vec![Gate::Fourier(q); 3],
            g => vec![g],
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = self.targets();
        match t.as_slice() {
            [a] => write!(f, "{} {}", self.name(), a),
            [a, b] => write!(f, "{} {},{}", self.name(), a, b),
            _ => unreachable!(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    pub name: String,
    pub dim: usize,
    pub gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(name: impl Into<String>, dim: usize) -> Self {
        Self {
            name: name.into(),
            dim,
            gates: Vec::new(),
        }
    }

    pub fn push(&mut self, gate: Gate) -> &mut Self {
        self.gates.push(gate);
        self
    }

    /// Number of qudits touched (max index + 1).
    pub fn width(&self) -> usize {
        self.gates
            .iter()
            .flat_map(|g| g.targets())
            .max()
            .map_or(0, |m| m + 1)
    }

    pub fn inverse(&self) -> Circuit {
        Circuit {
            name: format!("{}-inverse", self.name),
            dim: self.dim,
            gates: self.gates.iter().rev().flat_map(|g| g.inverse()).collect(),
        }
    }

    /// Relabel qudit `j` to `map[j]`.
    pub fn remap(&self, map: &[usize]) -> Circuit {
        Circuit {
            name: self.name.clone(),
            dim: self.dim,
            gates: self.gates.iter().map(|g| g.remap(map)).collect(),
        }
    }
}

impl FromStr for Circuit {
    type Err = SimError;

    fn from_str(s: &str) -> Result<Self> {
        let mut circuit = Circuit::new("unnamed", 2);
        for (idx, raw) in s.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                let comment = comment.trim();
                if let Some(name) = comment.strip_prefix("circuit:") {
                    circuit.name = name.trim().to_string();
                } else if let Some(dim) = comment.strip_prefix("dim:") {
                    circuit.dim = dim.trim().parse().map_err(|_| SimError::Parse {
                        line: line_no,
                        msg: format!("bad dimension {dim:?}"),
                    })?;
                }
                continue;
            }
            let (name, rest) = line.split_once(char::is_whitespace).ok_or(SimError::Parse {
                line: line_no,
                msg: "expected `GATE q[,q2]`".into(),
            })?;
            let targets = rest
                .split(',')
                .map(|t| t.trim().parse::<usize>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| SimError::Parse {
                    line: line_no,
                    msg: e.to_string(),
                })?;
            let gate = Gate::from_name(name, &targets).map_err(|e| match e {
                SimError::Parse { msg, .. } => SimError::Parse { line: line_no, msg },
                other => other,
            })?;
            if gate.dim() != circuit.dim {
                return Err(SimError::Parse {
                    line: line_no,
                    msg: format!("{} is not a dimension-{} gate", gate.name(), circuit.dim),
                });
            }
            circuit.gates.push(gate);
        }
        Ok(circuit)
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# circuit: {}", self.name)?;
        if self.dim != 2 {
            writeln!(f, "# dim: {}", self.dim)?;
        }
        for g in &self.gates {
            writeln!(f, "{g}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_prints() {
        let text = "# circuit: demo\nH 0\nCNOT 0,1\n\nCZ 1,2\n";
        let c: Circuit = text.parse().unwrap();
        assert_eq!(c.name, "demo");
        assert_eq!(c.gates, vec![Gate::H(0), Gate::Cnot(0, 1), Gate::Cz(1, 2)]);
        assert_eq!(c.to_string(), text.replace("\n\n", "\n"));
    }

    #[test]
    fn arity_and_dimension_errors() {
        assert!(matches!(
            "CNOT 0".parse::<Circuit>(),
            Err(SimError::Arity { expected: 2, .. })
        ));
        assert!(matches!(
            "SUM 0,1".parse::<Circuit>(),
            Err(SimError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            "CZ 1,1".parse::<Circuit>(),
            Err(SimError::RepeatedTarget(1))
        ));
        assert!("# dim: 3\nSUM 0,1\nFOURIER 1".parse::<Circuit>().is_ok());
    }
}
