//! Shared helpers for unit tests: random gate words applied simultaneously
//! to a canonical-form state and its dense oracle twin.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::dense::{mat_h, mat_p, mat_x, mat_z, CMat, DenseState};
use crate::stab::StabilizerState;

pub(crate) fn gate_mats(d: u64) -> (CMat, CMat, CMat, CMat) {
    (mat_x(d), mat_z(d), mat_p(d), mat_h(d))
}

/// Apply one uniformly random generator gate to both representations.
pub(crate) fn random_gate(
    rng: &mut ChaCha12Rng,
    s: &mut StabilizerState,
    o: &mut DenseState,
    mats: &(CMat, CMat, CMat, CMat),
    n: usize,
    d: u64,
) {
    match rng.gen_range(0..5) {
        0 => {
            let q = rng.gen_range(0..n);
            let a = rng.gen_range(1..d as i64);
            s.apply_x(q, a);
            for _ in 0..a {
                o.apply_single(q, &mats.0);
            }
        }
        1 => {
            let q = rng.gen_range(0..n);
            let a = rng.gen_range(1..d as i64);
            s.apply_z(q, a);
            for _ in 0..a {
                o.apply_single(q, &mats.1);
            }
        }
        2 => {
            let q = rng.gen_range(0..n);
            let a = rng.gen_range(1..d as i64);
            s.apply_p(q, a);
            for _ in 0..a {
                o.apply_single(q, &mats.2);
            }
        }
        3 => {
            let q = rng.gen_range(0..n);
            s.apply_h(q);
            o.apply_single(q, &mats.3);
        }
        _ => {
            if n >= 2 {
                let c = rng.gen_range(0..n);
                let mut t = rng.gen_range(0..n);
                while t == c {
                    t = rng.gen_range(0..n);
                }
                s.apply_csum(c, t);
                o.apply_csum(c, t);
            }
        }
    }
}

/// A random stabilizer state reached by `len` generator gates from a random
/// basis state, together with its dense twin.
pub(crate) fn random_stab_pair(
    rng: &mut ChaCha12Rng,
    n: usize,
    d: u64,
    len: usize,
) -> (StabilizerState, DenseState) {
    let mats = gate_mats(d);
    let x: Vec<u64> = (0..n).map(|_| rng.gen_range(0..d)).collect();
    let mut s = StabilizerState::basis_state(&x, d);
    let mut o = DenseState::basis(d, n, &x).unwrap();
    for _ in 0..len {
        random_gate(rng, &mut s, &mut o, &mats, n, d);
    }
    (s, o)
}

/// Deterministic sub-rng for reproducible per-case streams.
pub(crate) fn rng(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}
