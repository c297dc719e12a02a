//! Exact simulation of qudit Clifford+T circuits (odd prime dimension `d`)
//! by stabilizer-rank decomposition.
//!
//! A circuit over the gate set {X, Z, P, H, CSUM} plus the non-Clifford
//! diagonal gate T (the qudit analogue of the qubit T gate) is simulated by
//! replacing every T with a magic-state injection gadget and expanding the
//! `t`-fold magic ancilla in a superposition of `chi = d^k` stabilizer
//! states indexed by a random linear code. Measurement outcomes are then
//! sampled exactly, one qudit at a time, from pairwise inner products of
//! canonical-form stabilizer states.
//!
//! The crate keeps every phase and magnitude that arises along the way in
//! an exact form: amplitudes live in the ring generated by `e^{2*pi*i/8d^2}`
//! and half-integer powers of `d`, so stabilizer inner products come out
//! bit-exact rather than floating-point approximate.

pub mod approx;
pub mod check;
pub mod circuit;
pub mod clifford;
pub mod dense;
pub mod field;
pub mod inner;
pub mod linalg;
pub mod magic;
pub mod sim;
pub mod stab;

#[cfg(test)]
pub(crate) mod testutil;

pub use circuit::{Circuit, GadgetizedCircuit, Gate};
pub use field::{ExactPhase, Fp};
pub use sim::{SampleRecord, SimConfig, Simulator};
pub use stab::StabilizerState;

/// Errors shared across the crate.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("dimension {0} is not an odd prime")]
    NonPrimeDimension(u64),
    #[error("inverse of zero modulo {0}")]
    ZeroInverse(u64),
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: qudit index {q} out of range (n = {n})")]
    IndexOutOfRange { line: usize, q: usize, n: usize },
    #[error("line {line}: CSUM control and target must differ")]
    SameQudit { line: usize },
    #[error("dense expansion needs {needed} amplitudes, cap is {cap}")]
    CapExceeded { needed: u128, cap: u128 },
    #[error(
        "target error delta = {delta} is outside (0, 1); any delta in (0, 1) is reachable \
         (k = t yields the exact ancilla), while the dimension bound alone only guarantees \
         delta >= {delta_max:.3e} for these parameters"
    )]
    InfeasiblePrecision { delta: f64, delta_max: f64 },
    #[error("no code with small enough normalization found after {0} trials")]
    NoCodeFound(usize),
    #[error(
        "orbit representative p = {p} has vanishing overlap with the magic state for d = {d}; \
         choose a different p"
    )]
    DegenerateOrbit { d: u64, p: u64 },
    #[error("code normalization Z(L) has non-negligible imaginary part {0:.3e}")]
    NonRealZ(f64),
    #[error("degenerate state: every measurement outcome has vanishing probability")]
    DegenerateNorm,
}

pub type Result<T> = std::result::Result<T, Error>;
