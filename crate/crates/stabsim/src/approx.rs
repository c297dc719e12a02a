//! Random-code construction of the approximate t-fold magic state |L>,
//! exact evaluation of its normalization Z(L), and the rejection loop that
//! certifies fidelity from Z.
//!
//! A k-dimensional code L in F_d^t selects which orbit-state products
//! |x~> = tensor_l |x~_{x_l}> enter the superposition; Z(L) is the sum over
//! codewords of products of orbit overlaps, and the certified fidelity is
//! |<L|M^{t}>|^2 = d^k |alpha|^{2t} / Z(L).

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha12Rng;

use crate::linalg::FpMatrix;
use crate::magic::OrbitDecomposition;
use crate::stab::StabilizerState;
use crate::{Error, Result};

/// A k-dimensional linear code in F_d^t with generators in standard form
/// [1_k | G].
#[derive(Clone, Debug)]
pub struct LinearCode {
    t: usize,
    k: usize,
    d: u64,
    gstd: FpMatrix,
}

impl LinearCode {
    /// The trivial code {0^t}.
    pub fn trivial(t: usize, d: u64) -> Self {
        LinearCode { t, k: 0, d, gstd: FpMatrix::zeros(0, t, d) }
    }

    /// All of F_d^t (k = t; the standard-form tail is empty).
    pub fn full(t: usize, d: u64) -> Self {
        LinearCode { t, k: t, d, gstd: FpMatrix::zeros(t, 0, d) }
    }

    pub fn from_standard_form(gstd: FpMatrix, t: usize) -> Self {
        let k = gstd.rows();
        assert_eq!(gstd.cols(), t - k);
        LinearCode { t, k, d: gstd.modulus(), gstd }
    }

    pub fn len(&self) -> usize {
        self.t
    }

    pub fn is_empty(&self) -> bool {
        self.t == 0
    }

    pub fn dimension(&self) -> usize {
        self.k
    }

    pub fn field(&self) -> u64 {
        self.d
    }

    /// Number of codewords d^k.
    pub fn size(&self) -> u64 {
        self.d.pow(self.k as u32)
    }

    /// Generators as the k x t matrix [1_k | G].
    pub fn generator_matrix(&self) -> FpMatrix {
        let mut g = FpMatrix::zeros(self.k, self.t, self.d);
        for i in 0..self.k {
            g.set(i, i, 1);
        }
        g.set_block(0, self.k, &self.gstd);
        g
    }

    /// Codeword for a message in Z_d^k: (msg | msg G).
    pub fn codeword(&self, msg: &[u64]) -> Vec<u64> {
        debug_assert_eq!(msg.len(), self.k);
        let d = self.d;
        let mut x = Vec::with_capacity(self.t);
        x.extend_from_slice(msg);
        for c in 0..self.t - self.k {
            let mut acc = 0u64;
            for r in 0..self.k {
                acc = (acc + msg[r] * self.gstd.get(r, c)) % d;
            }
            x.push(acc);
        }
        x
    }

    /// Visit every codeword in lexicographic message order.
    pub fn for_each_codeword(&self, mut f: impl FnMut(&[u64])) {
        let d = self.d;
        let k = self.k;
        let mut msg = vec![0u64; k];
        loop {
            f(&self.codeword(&msg));
            let mut pos = k;
            loop {
                if pos == 0 {
                    return;
                }
                pos -= 1;
                msg[pos] += 1;
                if msg[pos] < d {
                    break;
                }
                msg[pos] = 0;
            }
        }
    }
}

/// Smallest delta the k <= t dimension bound alone can promise:
/// d^{1-t} |alpha|^{-2t} (k = t itself yields the exact state).
pub fn delta_max(t: usize, alpha_abs: f64, d: u64) -> f64 {
    (d as f64).powi(1 - t as i32) * alpha_abs.powi(-2 * (t as i32))
}

/// Code dimension k = ceil(1 - 2t log_d |alpha| - log_d delta), clamped to
/// [0, t]. At the clamp the full code gives the exact ancilla, so every
/// delta in (0, 1) remains attainable.
pub fn choose_k(t: usize, delta: f64, alpha_abs: f64, d: u64) -> Result<usize> {
    assert!(alpha_abs > 0.0 && alpha_abs <= 1.0, "alpha magnitude out of range");
    if !(delta > 0.0 && delta < 1.0) || !delta.is_finite() {
        return Err(Error::InfeasiblePrecision { delta, delta_max: delta_max(t, alpha_abs, d) });
    }
    let ln_d = (d as f64).ln();
    let raw = 1.0 - 2.0 * t as f64 * alpha_abs.ln() / ln_d - delta.ln() / ln_d;
    let k = raw.ceil().max(0.0) as usize;
    Ok(k.min(t))
}

/// Uniformly random standard-form code: the k x (t-k) tail is i.i.d.
/// uniform over Z_d. This is the ensemble the acceptance analysis is stated
/// for (it is not uniform over all k-dimensional subspaces).
pub fn sample_code(t: usize, k: usize, d: u64, rng: &mut ChaCha12Rng) -> LinearCode {
    assert!(k <= t);
    let mut gstd = FpMatrix::zeros(k, t - k, d);
    for r in 0..k {
        for c in 0..t - k {
            gstd.set(r, c, rng.gen_range(0..d));
        }
    }
    LinearCode { t, k, d, gstd }
}

/// Z(L) = sum_{x in L} prod_l <0~|x~_{x_l}>, evaluated from the orbit
/// overlap phases: a zero digit contributes 1 and a nonzero digit j
/// contributes beta_j / sqrt(d). The sum is real because codewords pair
/// with their negatives; a non-negligible imaginary part signals corrupted
/// beta data and is reported as an error.
pub fn z_of_code(code: &LinearCode, betas: &[Complex64]) -> Result<f64> {
    let d = code.d;
    assert_eq!(betas.len(), d as usize);
    let isq = 1.0 / (d as f64).sqrt();
    let weights: Vec<Complex64> = (0..d as usize)
        .map(|j| if j == 0 { Complex64::new(1.0, 0.0) } else { betas[j] * isq })
        .collect();
    let mut acc = Complex64::new(0.0, 0.0);
    code.for_each_codeword(|x| {
        let mut term = Complex64::new(1.0, 0.0);
        for &digit in x {
            term *= weights[digit as usize];
        }
        acc += term;
    });
    if acc.im.abs() > 1e-10 * acc.re.abs().max(1.0) {
        return Err(Error::NonRealZ(acc.im));
    }
    Ok(acc.re)
}

/// A sampled code together with its certificate data.
#[derive(Clone, Debug)]
pub struct ApproxStateCert {
    pub code: LinearCode,
    pub z: f64,
    pub fidelity: f64,
    pub delta: f64,
    pub accepted: bool,
}

/// Rejection-sample codes until Z(L) <= (1 + d^k |alpha|^{2t})(1 + delta).
/// Returns the certificate and the number of trials used. The certified
/// fidelity is computed directly from Z rather than from the bound chain.
pub fn find_code(
    t: usize,
    delta: f64,
    orbit: &OrbitDecomposition,
    rng: &mut ChaCha12Rng,
    max_trials: Option<usize>,
) -> Result<(ApproxStateCert, usize)> {
    let d = orbit.states[0].dim();
    let alpha_abs = orbit.alpha.norm();
    let k = choose_k(t, delta, alpha_abs, d)?;
    let weight = (d as f64).powi(k as i32) * alpha_abs.powi(2 * t as i32);
    let threshold = (1.0 + weight) * (1.0 + delta);
    let trials = max_trials.unwrap_or_else(|| (1.0 / delta).ceil() as usize);
    for trial in 1..=trials {
        let code = if k == t { LinearCode::full(t, d) } else { sample_code(t, k, d, rng) };
        let z = z_of_code(&code, &orbit.betas)?;
        if z > 0.0 && z <= threshold {
            let fidelity = weight / z;
            return Ok((ApproxStateCert { code, z, fidelity, delta, accepted: true }, trial));
        }
    }
    Err(Error::NoCodeFound(trials))
}

/// Expand the certified code into the explicit superposition
/// |L> = (d^k Z)^{-1/2} sum_{x in L} |x~>: one canonical-form product state
/// per codeword, all with the same scalar coefficient.
///
/// The uniform coefficient carries an extra unit factor (alpha/|alpha|)^t
/// so that <L|M^{t}> is real positive; for the full code this makes |L>
/// equal the exact magic ancilla including its global phase.
pub fn build_approx_state(
    cert: &ApproxStateCert,
    orbit: &OrbitDecomposition,
) -> Vec<(Complex64, StabilizerState)> {
    let code = &cert.code;
    let unit = orbit.alpha / orbit.alpha.norm();
    let coeff = unit.powu(code.len() as u32) / ((code.size() as f64) * cert.z).sqrt();
    let mut terms = Vec::with_capacity(code.size() as usize);
    code.for_each_codeword(|x| {
        let mut state = orbit.states[x[0] as usize].clone();
        for &digit in &x[1..] {
            state = state.tensor(&orbit.states[digit as usize]);
        }
        terms.push((coeff, state));
    });
    terms
}
