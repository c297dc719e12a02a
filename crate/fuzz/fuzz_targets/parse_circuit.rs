//! The parser must never panic on arbitrary input: any byte string either
//! parses into a validated circuit or returns a structured error.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(circuit) = stabsim::circuit::Circuit::parse(text) {
        // A parsed circuit round-trips through its own text rendering.
        let rendered = circuit.to_string();
        let again =
            stabsim::circuit::Circuit::parse(&rendered).expect("rendered circuit must re-parse");
        assert_eq!(circuit.d, again.d);
        assert_eq!(circuit.n, again.n);
        assert_eq!(circuit.gates, again.gates);
    }
});
