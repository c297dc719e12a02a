//! Anything the parser accepts must gadgetize without panicking, with the
//! structural invariants intact: no T gates survive, one gadget and one
//! fresh ancilla per T, all indices in range.

#![no_main]

use libfuzzer_sys::fuzz_target;
use stabsim::circuit::{gadgetize, Circuit, Gate, Op};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(circuit) = Circuit::parse(text) else {
        return;
    };
    let g = gadgetize(&circuit);
    assert_eq!(g.t, circuit.t_count());
    assert_eq!(g.gadget_count(), g.t);
    assert_eq!(g.total_qudits(), circuit.n + g.t);
    let mut next_ancilla = circuit.n;
    for op in &g.ops {
        match *op {
            Op::Clifford(gate) => {
                assert!(!matches!(gate, Gate::T { .. } | Gate::Measure { .. }));
                let in_range = |q: usize| q < circuit.n;
                match gate {
                    Gate::X { q, .. } | Gate::Z { q, .. } | Gate::P { q, .. } | Gate::H { q } => {
                        assert!(in_range(q))
                    }
                    Gate::Csum { control, target } => {
                        assert!(in_range(control) && in_range(target) && control != target)
                    }
                    _ => unreachable!(),
                }
            }
            Op::Gadget { data, ancilla } => {
                assert!(data < circuit.n);
                assert_eq!(ancilla, next_ancilla);
                next_ancilla += 1;
            }
            Op::Measure { q } => assert!(q < circuit.n),
        }
    }
});
