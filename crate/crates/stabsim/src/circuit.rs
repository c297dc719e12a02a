//! Circuit text format, parser, and T-gate gadgetization.
//!
//! Grammar (one statement per line, `#` starts a comment):
//!
//! ```text
//!   d <prime>            dimension, required first
//!   n <int>              data qudit count, required second
//!   X <q> [a]            X^a (a defaults to 1); same for Z and P
//!   H <q>
//!   CSUM <control> <target>
//!   T <q>                the non-Clifford diagonal gate M_d
//!   MEASURE <q>          computational-basis measurement
//! ```
//!
//! Gadgetization rewrites each T into a magic-state injection: a fresh
//! ancilla (initialized from the shared approximate magic state), a
//! Z (x) Z^{-1} measurement on (data, ancilla), an X^{-k} recovery, a
//! CSUM^{-1}, and a C_d^k Clifford correction. The correction beyond X^{-k}
//! is forced by U X^{-k} = C^{-k} U; the dense oracle validates the whole
//! pipeline in the tests.

use crate::field::check_dimension;
use crate::{Error, Result};

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Gate {
    X { q: usize, a: i64 },
    Z { q: usize, a: i64 },
    P { q: usize, a: i64 },
    H { q: usize },
    Csum { control: usize, target: usize },
    T { q: usize },
    Measure { q: usize },
}

#[derive(Clone, Debug)]
pub struct Circuit {
    pub d: u64,
    pub n: usize,
    pub gates: Vec<Gate>,
}

impl Circuit {
    pub fn t_count(&self) -> usize {
        self.gates.iter().filter(|g| matches!(g, Gate::T { .. })).count()
    }

    pub fn measure_count(&self) -> usize {
        self.gates.iter().filter(|g| matches!(g, Gate::Measure { .. })).count()
    }

    /// Parse the text format; errors carry 1-based line numbers.
    pub fn parse(text: &str) -> Result<Circuit> {
        let mut d: Option<u64> = None;
        let mut n: Option<usize> = None;
        let mut gates = Vec::new();

        let syntax = |line: usize, msg: &str| Error::Syntax { line, msg: msg.to_string() };

        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let stmt = raw.split('#').next().unwrap_or("").trim();
            if stmt.is_empty() {
                continue;
            }
            let mut tok = stmt.split_whitespace();
            let kw = tok.next().unwrap();
            let rest: Vec<&str> = tok.collect();

            if d.is_none() {
                if kw != "d" {
                    return Err(syntax(line, "expected `d <prime>` as the first statement"));
                }
                let v: u64 = rest
                    .first()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| syntax(line, "expected `d <prime>`"))?;
                if rest.len() != 1 {
                    return Err(syntax(line, "expected `d <prime>`"));
                }
                d = Some(check_dimension(v)?);
                continue;
            }
            if n.is_none() {
                if kw != "n" {
                    return Err(syntax(line, "expected `n <count>` as the second statement"));
                }
                let v: usize = rest
                    .first()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| syntax(line, "expected `n <count>`"))?;
                if rest.len() != 1 {
                    return Err(syntax(line, "expected `n <count>`"));
                }
                n = Some(v);
                continue;
            }
            let nq = n.unwrap();
            let parse_qudit = |s: &str| -> Result<usize> {
                let q: usize = s.parse().map_err(|_| syntax(line, "malformed qudit index"))?;
                if q >= nq {
                    return Err(Error::IndexOutOfRange { line, q, n: nq });
                }
                Ok(q)
            };
            let parse_power = |rest: &[&str]| -> Result<i64> {
                match rest.get(1) {
                    None => Ok(1),
                    Some(s) => s.parse().map_err(|_| syntax(line, "malformed gate power")),
                }
            };

            match kw {
                "X" | "Z" | "P" => {
                    if rest.is_empty() || rest.len() > 2 {
                        return Err(syntax(line, "expected `<gate> <qudit> [power]`"));
                    }
                    let q = parse_qudit(rest[0])?;
                    let a = parse_power(&rest)?;
                    gates.push(match kw {
                        "X" => Gate::X { q, a },
                        "Z" => Gate::Z { q, a },
                        _ => Gate::P { q, a },
                    });
                }
                "H" => {
                    if rest.len() != 1 {
                        return Err(syntax(line, "expected `H <qudit>`"));
                    }
                    gates.push(Gate::H { q: parse_qudit(rest[0])? });
                }
                "CSUM" => {
                    if rest.len() != 2 {
                        return Err(syntax(line, "expected `CSUM <control> <target>`"));
                    }
                    let control = parse_qudit(rest[0])?;
                    let target = parse_qudit(rest[1])?;
                    if control == target {
                        return Err(Error::SameQudit { line });
                    }
                    gates.push(Gate::Csum { control, target });
                }
                "T" => {
                    if rest.len() != 1 {
                        return Err(syntax(line, "expected `T <qudit>`"));
                    }
                    gates.push(Gate::T { q: parse_qudit(rest[0])? });
                }
                "MEASURE" => {
                    if rest.len() != 1 {
                        return Err(syntax(line, "expected `MEASURE <qudit>`"));
                    }
                    gates.push(Gate::Measure { q: parse_qudit(rest[0])? });
                }
                _ => return Err(syntax(line, "unknown statement")),
            }
        }
        let d = d.ok_or_else(|| syntax(1, "missing `d <prime>` header"))?;
        let n = n.ok_or_else(|| syntax(1, "missing `n <count>` header"))?;
        Ok(Circuit { d, n, gates })
    }
}

impl std::fmt::Display for Circuit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "d {}", self.d)?;
        writeln!(f, "n {}", self.n)?;
        for g in &self.gates {
            match g {
                Gate::X { q, a } => writeln!(f, "X {q} {a}")?,
                Gate::Z { q, a } => writeln!(f, "Z {q} {a}")?,
                Gate::P { q, a } => writeln!(f, "P {q} {a}")?,
                Gate::H { q } => writeln!(f, "H {q}")?,
                Gate::Csum { control, target } => writeln!(f, "CSUM {control} {target}")?,
                Gate::T { q } => writeln!(f, "T {q}")?,
                Gate::Measure { q } => writeln!(f, "MEASURE {q}")?,
            }
        }
        Ok(())
    }
}

/// One operation of the gadgetized (Clifford + measurement) circuit.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Op {
    /// A Clifford gate on the widened register (never T).
    Clifford(Gate),
    /// Magic-state injection replacing `T data`: measure Z (x) Z^{-1} on
    /// (data, ancilla) with outcome omega^k, recover with X^{-k} on data,
    /// undo the entangler with CSUM^{-1}, then apply C_d^k on data.
    Gadget {
        data: usize,
        ancilla: usize,
    },
    Measure {
        q: usize,
    },
}

/// Clifford-only rewrite of a Clifford+T circuit on n + t qudits.
#[derive(Clone, Debug)]
pub struct GadgetizedCircuit {
    pub d: u64,
    /// Data qudits 0..n; ancilla i sits at n + i in T order.
    pub n: usize,
    pub t: usize,
    pub ops: Vec<Op>,
}

impl GadgetizedCircuit {
    pub fn total_qudits(&self) -> usize {
        self.n + self.t
    }

    pub fn gadget_count(&self) -> usize {
        self.ops.iter().filter(|op| matches!(op, Op::Gadget { .. })).count()
    }
}

/// Replace every T gate by an injection gadget on a fresh ancilla.
pub fn gadgetize(c: &Circuit) -> GadgetizedCircuit {
    let mut ops = Vec::with_capacity(c.gates.len());
    let mut next_ancilla = c.n;
    for g in &c.gates {
        match *g {
            Gate::T { q } => {
                ops.push(Op::Gadget { data: q, ancilla: next_ancilla });
                next_ancilla += 1;
            }
            Gate::Measure { q } => ops.push(Op::Measure { q }),
            other => ops.push(Op::Clifford(other)),
        }
    }
    GadgetizedCircuit { d: c.d, n: c.n, t: next_ancilla - c.n, ops }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_minimal_t_circuit() {
        let c = Circuit::parse("d 3\nn 1\nT 0\nMEASURE 0\n").unwrap();
        assert_eq!(c.d, 3);
        assert_eq!(c.n, 1);
        assert_eq!(c.t_count(), 1);
        assert_eq!(c.gates, vec![Gate::T { q: 0 }, Gate::Measure { q: 0 }]);
    }

    #[test]
    fn parses_powers_and_comments() {
        let text = "# full example\nd 5\nn 2\nX 0 3\nZ 1    # implicit power 1\nP 0 -2\nH 1\nCSUM 0 1\n\nMEASURE 1\n";
        let c = Circuit::parse(text).unwrap();
        assert_eq!(c.gates[0], Gate::X { q: 0, a: 3 });
        assert_eq!(c.gates[1], Gate::Z { q: 1, a: 1 });
        assert_eq!(c.gates[2], Gate::P { q: 0, a: -2 });
        assert_eq!(c.measure_count(), 1);
    }

    #[test]
    fn rejects_composite_dimension() {
        assert!(matches!(Circuit::parse("d 4\nn 1\n"), Err(Error::NonPrimeDimension(4))));
        assert!(matches!(Circuit::parse("d 2\nn 1\n"), Err(Error::NonPrimeDimension(2))));
    }

    #[test]
    fn rejects_same_qudit_csum() {
        let err = Circuit::parse("d 3\nn 2\nCSUM 0 0\n").unwrap_err();
        assert!(matches!(err, Error::SameQudit { line: 3 }));
    }

    #[test]
    fn rejects_out_of_range_indices_with_line() {
        let err = Circuit::parse("d 3\nn 2\nH 0\nX 5\n").unwrap_err();
        assert!(matches!(err, Error::IndexOutOfRange { line: 4, q: 5, n: 2 }));
    }

    #[test]
    fn rejects_malformed_statements() {
        for bad in [
            "n 1\nd 3\n",          // header order
            "d 3\nn 1\nY 0\n",     // unknown gate
            "d 3\nn 1\nH\n",       // missing operand
            "d 3\nn 1\nX 0 1 2\n", // trailing operand
            "d x\nn 1\n",          // malformed dimension
            "",                    // empty
        ] {
            assert!(matches!(Circuit::parse(bad), Err(Error::Syntax { .. })), "{bad:?}");
        }
    }

    #[test]
    fn display_round_trips() {
        let text = "d 3\nn 2\nX 0 2\nH 1\nCSUM 1 0\nT 0\nMEASURE 0\n";
        let c = Circuit::parse(text).unwrap();
        let c2 = Circuit::parse(&c.to_string()).unwrap();
        assert_eq!(c.gates, c2.gates);
        assert_eq!((c.d, c.n), (c2.d, c2.n));
    }

    #[test]
    fn gadgetize_without_t_is_identity_shaped() {
        let c = Circuit::parse("d 3\nn 2\nH 0\nCSUM 0 1\nMEASURE 0\n").unwrap();
        let g = gadgetize(&c);
        assert_eq!(g.t, 0);
        assert_eq!(g.total_qudits(), 2);
        assert_eq!(
            g.ops,
            vec![
                Op::Clifford(Gate::H { q: 0 }),
                Op::Clifford(Gate::Csum { control: 0, target: 1 }),
                Op::Measure { q: 0 },
            ]
        );
    }

    #[test]
    fn gadgetize_assigns_fresh_ancillas_in_order() {
        let c = Circuit::parse("d 3\nn 2\nT 0\nH 0\nT 1\nT 0\nMEASURE 0\n").unwrap();
        let g = gadgetize(&c);
        assert_eq!(g.t, 3);
        assert_eq!(g.gadget_count(), 3);
        assert_eq!(g.total_qudits(), 5);
        let gadgets: Vec<_> = g
            .ops
            .iter()
            .filter_map(|op| match op {
                Op::Gadget { data, ancilla } => Some((*data, *ancilla)),
                _ => None,
            })
            .collect();
        assert_eq!(gadgets, vec![(0, 2), (1, 3), (0, 4)]);
        assert!(g.ops.iter().all(|op| !matches!(op, Op::Clifford(Gate::T { .. }))));
    }
}
