//! The qudit T gate M_d, its Clifford image C_d = M_d X M_d^dag, magic-state
//! orbits under C_d, and the exact overlap data (alpha, beta_j) that the
//! approximate-rank construction consumes.
//!
//! M_d is the canonical diagonal third-level gate with entries
//! `exp(2 pi i lambda_j / d^m)`, `lambda_j = d^{m-2}[d C(j,3) - j C(d,3) +
//! C(d+1,4)]`, m = 2 for d = 3 and m = 1 for d > 3. Conjugating X gives the
//! order-d Clifford `C_d = e^{-2 pi i/9} X P` for d = 3 and
//! `omega^{-inv3} X P` for d > 3 (the d = 3 phase is fixed by
//! M_3 X M_3^dag, which pins the sign of the ninth-root exponent).

use num_complex::Complex64;

use crate::clifford::CliffordElement;
use crate::dense::CMat;
use crate::field::{check_dimension, ExactPhase, Fp};
use crate::inner::inner;
use crate::stab::StabilizerState;
use crate::Result;

fn binom(n: i64, k: i64) -> i64 {
    if k < 0 || k > n {
        return 0;
    }
    let mut acc: i128 = 1;
    for i in 0..k as i128 {
        acc = acc * (n as i128 - i) / (i + 1);
    }
    acc as i64
}

/// The canonical qudit T gate as an exact diagonal.
#[derive(Clone, Debug)]
pub struct MagicGateSpec {
    d: u64,
    m: u32,
    lambdas: Vec<i64>,
    entries: Vec<ExactPhase>,
}

impl MagicGateSpec {
    pub fn dim(&self) -> u64 {
        self.d
    }

    /// Order exponent: M^{d^m} = 1.
    pub fn order_exponent(&self) -> u32 {
        self.m
    }

    /// Exponents of the diagonal in units of e^{2 pi i / d^m}.
    pub fn lambdas(&self) -> &[i64] {
        &self.lambdas
    }

    pub fn entry(&self, j: usize) -> ExactPhase {
        self.entries[j]
    }

    pub fn diag_dense(&self) -> Vec<Complex64> {
        self.entries.iter().map(|p| p.to_complex()).collect()
    }

    pub fn dense_matrix(&self) -> CMat {
        CMat::from_diag(&self.diag_dense())
    }
}

/// Build M_d from the lambda formula.
pub fn magic_gate(d: u64) -> Result<MagicGateSpec> {
    check_dimension(d)?;
    let m: u32 = if d == 3 { 2 } else { 1 };
    let di = d as i64;
    let order = di.pow(m);
    let mut lambdas = Vec::with_capacity(d as usize);
    let mut entries = Vec::with_capacity(d as usize);
    for j in 0..di {
        // d^{m-2} [d C(j,3) - j C(d,3) + C(d+1,4)]; exact integer for m in {1,2}.
        let core = di * binom(j, 3) - j * binom(di, 3) + binom(di + 1, 4);
        let lam = if m == 2 {
            core
        } else {
            debug_assert_eq!(core % di, 0, "lambda_{j} not an integer for d = {d}");
            core / di
        };
        lambdas.push(lam.rem_euclid(order));
        entries.push(ExactPhase::unit_root(d, lam, order as u64));
    }
    Ok(MagicGateSpec { d, m, lambdas, entries })
}

/// Global phase of C_d = phase * X * P.
pub fn magic_clifford_phase(d: u64) -> ExactPhase {
    if d == 3 {
        ExactPhase::unit_root(3, -1, 9)
    } else {
        let inv3 = Fp::new(3, d).inv();
        ExactPhase::omega_pow(d, -(inv3.value() as i64))
    }
}

/// C_d = M_d X M_d^dag as a symbolic Clifford element.
pub fn magic_clifford(d: u64) -> Result<CliffordElement> {
    check_dimension(d)?;
    let x = CliffordElement::x_gate(d);
    let p = CliffordElement::p_gate(d);
    Ok(x.compose(&p).scaled(magic_clifford_phase(d)))
}

/// Apply C_d^pow in place as a gate word (phase, then P, then X, repeated).
pub fn apply_magic_clifford(s: &mut StabilizerState, qudit: usize, pow: u64) {
    let d = s.dim();
    let phase = magic_clifford_phase(d);
    for _ in 0..pow % ((d * d) * 8) {
        s.scale(phase);
        s.apply_p(qudit, 1);
        s.apply_x(qudit, 1);
    }
}

/// Diagonal gate U_v for the parametrization by (z', gamma', eps'):
/// `v_k = inv12 k {gamma' + k [6 z' + (2k - 3) gamma']} + k eps'` over Z_d
/// for d > 3, and the ninth-root exponent table for d = 3.
pub fn build_uv(d: u64, zp: i64, gammap: i64, epsp: i64) -> Result<Vec<ExactPhase>> {
    check_dimension(d)?;
    if d == 3 {
        let v1 = 6 * zp + 2 * gammap + 3 * epsp;
        let v2 = 6 * zp + gammap + 6 * epsp;
        return Ok(vec![
            ExactPhase::one(3),
            ExactPhase::unit_root(3, v1, 9),
            ExactPhase::unit_root(3, v2, 9),
        ]);
    }
    let inv12 = Fp::new(12, d).inv();
    let z = Fp::new(zp, d);
    let g = Fp::new(gammap, d);
    let e = Fp::new(epsp, d);
    let six = Fp::new(6, d);
    let two = Fp::new(2, d);
    let three = Fp::new(3, d);
    Ok((0..d as i64)
        .map(|ki| {
            let k = Fp::new(ki, d);
            let vk = inv12 * k * (g + k * (six * z + (two * k - three) * g)) + k * e;
            ExactPhase::omega_fp(vk)
        })
        .collect())
}

/// alpha(d, p) = <+| Z^{-p} M_d |+> = (1/d) Tr(Z^{-p} M_d), via the exact
/// d-term trace.
pub fn alpha(d: u64, p: u64) -> Result<Complex64> {
    let gate = magic_gate(d)?;
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..d {
        let ph = gate.entry(j as usize) * ExactPhase::omega_pow(d, -((p * j) as i64));
        acc += ph.to_complex();
    }
    Ok(acc / d as f64)
}

/// The same overlap in depressed-cubic form: `alpha = phase * S` with
/// `phase = omega^{C(d,4)/d - p}` and
/// `S = (1/d) sum_j omega^{inv6 j (j^2 - psi)}`, `psi = d^2 - 3d + 3 + 6p`.
/// S is real; the pair (phase, S) is returned so callers can check both
/// routes against each other. For d = 3 the three overlaps are evaluated
/// directly from the trace (the inv6 depression needs d > 3).
pub fn alpha_depressed(d: u64, p: u64) -> Result<(ExactPhase, f64)> {
    check_dimension(d)?;
    if d == 3 {
        // phase = omega^{-p} (C(3,4) = 0); S = alpha * omega^{p}.
        let a = alpha(3, p)?;
        let phase = ExactPhase::omega_pow(3, -(p as i64));
        let s = a * phase.conj().to_complex();
        debug_assert!(s.im.abs() < 1e-12);
        return Ok((phase, s.re * 3.0 / 3.0));
    }
    let di = d as i64;
    let lead = binom(di, 4) / di - p as i64;
    let phase = ExactPhase::omega_pow(d, lead);
    let inv6 = Fp::new(6, d).inv();
    let psi = Fp::new(di * di - 3 * di + 3 + 6 * p as i64, d);
    let mut s = Complex64::new(0.0, 0.0);
    for ji in 0..di {
        let j = Fp::new(ji, d);
        let e = inv6 * j * (j * j - psi);
        s += ExactPhase::omega_fp(e).to_complex();
    }
    s /= d as f64;
    Ok((phase, s.re))
}

/// Imaginary part of the depressed sum (realness certificate).
pub fn depressed_sum_imag(d: u64, p: u64) -> Result<f64> {
    check_dimension(d)?;
    if d == 3 {
        let a = alpha(3, p)?;
        return Ok((a * ExactPhase::omega_pow(3, p as i64).to_complex()).im);
    }
    let di = d as i64;
    let inv6 = Fp::new(6, d).inv();
    let psi = Fp::new(di * di - 3 * di + 3 + 6 * p as i64, d);
    let mut s = Complex64::new(0.0, 0.0);
    for ji in 0..di {
        let j = Fp::new(ji, d);
        s += ExactPhase::omega_fp(inv6 * j * (j * j - psi)).to_complex();
    }
    Ok(s.im / d as f64)
}

/// The orbit representative exponent maximizing |alpha(d, p)|; ties break
/// toward the smallest p.
pub fn optimal_p(d: u64) -> Result<u64> {
    check_dimension(d)?;
    let mut best = (0u64, -1.0f64);
    for p in 0..d {
        let a = alpha(d, p)?.norm();
        if a > best.1 + 1e-12 {
            best = (p, a);
        }
    }
    Ok(best.0)
}

/// kappa = -2 log_d |alpha(d, p*)|: the per-T-gate cost exponent.
pub fn kappa(d: u64) -> Result<f64> {
    let p = optimal_p(d)?;
    let a = alpha(d, p)?.norm();
    Ok(-2.0 * a.ln() / (d as f64).ln())
}

/// The d-state orbit {C_d^j Z^p |+>} with its overlap data.
#[derive(Clone, Debug)]
pub struct OrbitDecomposition {
    pub p: u64,
    /// |j~> = C_d^j Z^p |+>, j = 0..d, in canonical form.
    pub states: Vec<StabilizerState>,
    /// Common overlap <j~|M_d> (j-independent).
    pub alpha: Complex64,
    /// beta_j = sqrt(d) <0~|C^j|0~>, from the exact inner-product route.
    pub betas: Vec<Complex64>,
    /// Sign of the real depressed sum S (None when alpha vanishes).
    pub eq_n_sign: Option<i8>,
}

pub fn orbit(d: u64, p: u64) -> Result<OrbitDecomposition> {
    check_dimension(d)?;
    let mut rep = StabilizerState::plus_state(1, d);
    rep.apply_z(0, p as i64);
    let mut states = Vec::with_capacity(d as usize);
    states.push(rep.clone());
    let mut cur = rep.clone();
    for _ in 1..d {
        apply_magic_clifford(&mut cur, 0, 1);
        states.push(cur.clone());
    }
    let a = alpha(d, p)?;
    // beta_j is the unit-modulus phase of <0~|j~>; the overlap magnitude is
    // 1/sqrt(d) for j != 0 and 1 for j = 0.
    let sqrt_d = (d as f64).sqrt();
    let betas: Vec<Complex64> = (0..d as usize)
        .map(|j| {
            if j == 0 {
                Complex64::new(1.0, 0.0)
            } else {
                inner(&states[j], &states[0]).to_complex() * sqrt_d
            }
        })
        .collect();
    let eq_n_sign = if a.norm() > 1e-9 {
        let (phase, s) = alpha_depressed(d, p)?;
        let _ = phase;
        Some(if s >= 0.0 { 1 } else { -1 })
    } else {
        None
    };
    Ok(OrbitDecomposition { p, states, alpha: a, betas, eq_n_sign })
}

/// Closed-form beta_j (the phase data of <0~|C^j|0~> scaled by sqrt(d)).
///
/// beta_0 = 1. For d > 3:
/// `omega^{(inv6 - inv2^3) j^3 - (p + inv2) j} * legendre(2j) * (1|i)`,
/// with `i` present for d = 3 mod 4. For d = 3 the two nonzero-j values are
/// `e^{-i pi/18} * omega^{-p}` and its conjugate times `omega^{-2p}` (the
/// 36th-root pair; the general inv12 form does not exist mod 3).
pub fn beta(d: u64, j: u64, p: u64) -> Result<ExactPhase> {
    check_dimension(d)?;
    let j = j % d;
    if j == 0 {
        return Ok(ExactPhase::one(d));
    }
    if d == 3 {
        let base = match j {
            1 => ExactPhase::unit_root(3, -1, 36),
            _ => ExactPhase::unit_root(3, 1, 36),
        };
        return Ok(base * ExactPhase::omega_pow(3, -((p * j) as i64)));
    }
    let inv2 = Fp::half(d);
    let inv6 = Fp::new(6, d).inv();
    let inv8 = (inv2 * inv2 * inv2).value();
    let jf = Fp::from_u64(j, d);
    let pf = Fp::from_u64(p, d);
    let cubic = (inv6 - Fp::from_u64(inv8, d)) * jf * jf * jf;
    let linear = (pf + inv2) * jf;
    let mut phase = ExactPhase::omega_fp(cubic - linear);
    if (Fp::new(2, d) * jf).legendre() == -1 {
        phase *= ExactPhase::minus_one(d);
    }
    if d % 4 == 3 {
        phase *= ExactPhase::i_pow(d, 1);
    }
    Ok(phase)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::{Mat2, WeylIndex};
    use crate::dense::{mat_x, DenseState};

    fn assert_close(a: Complex64, b: Complex64, tol: f64, what: &str) {
        assert!((a - b).norm() < tol, "{what}: {a} vs {b}");
    }

    #[test]
    fn magic_gate_diagonals_match_known_rows() {
        // d = 3: diag(e^{2 pi i/9}, 1, e^{-2 pi i/9}).
        let m3 = magic_gate(3).unwrap();
        let diag = m3.diag_dense();
        assert_close(
            diag[0],
            Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 9.0),
            1e-12,
            "M3[0]",
        );
        assert_close(diag[1], Complex64::new(1.0, 0.0), 1e-12, "M3[1]");
        assert_close(
            diag[2],
            Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI / 9.0),
            1e-12,
            "M3[2]",
        );

        // d = 5: omega exponents (-2, 1, -1, -2, -1).
        let m5 = magic_gate(5).unwrap();
        let want5: Vec<i64> = vec![-2, 1, -1, -2, -1];
        for (j, &w) in want5.iter().enumerate() {
            assert_eq!(m5.entry(j), ExactPhase::omega_pow(5, w), "M5[{j}]");
        }

        // d = 7: omega exponents (3, -2, 0, 3, 1, 2, 0).
        let m7 = magic_gate(7).unwrap();
        let want7: Vec<i64> = vec![3, -2, 0, 3, 1, 2, 0];
        for (j, &w) in want7.iter().enumerate() {
            assert_eq!(m7.entry(j), ExactPhase::omega_pow(7, w), "M7[{j}]");
        }

        assert!(magic_gate(4).is_err());
        assert!(magic_gate(9).is_err());
    }

    #[test]
    fn magic_gate_group_properties() {
        for d in [3u64, 5, 7, 11] {
            let m = magic_gate(d).unwrap();
            let order = (d as f64).powi(m.order_exponent() as i32) as u32;
            // M^{d^m} = 1.
            for j in 0..d as usize {
                let e = m.entry(j).to_complex().powu(order);
                assert_close(e, Complex64::new(1.0, 0.0), 1e-9, "M^{d^m}");
            }
            // det M = prod of diagonal entries = 1.
            let det: Complex64 = m.diag_dense().iter().product();
            assert_close(det, Complex64::new(1.0, 0.0), 1e-10, "det M");
        }
    }

    #[test]
    fn clifford_image_of_x() {
        for d in [3u64, 5, 7] {
            let m = magic_gate(d).unwrap().dense_matrix();
            let conj = m.mul(&mat_x(d)).mul(&m.dagger());
            let c = magic_clifford(d).unwrap();
            assert!(conj.distance(&c.dense_matrix()) < 1e-12, "M X M^dag != C_d for d = {d}");
            assert_eq!(c.projective_order(), d as usize);
            // C_d^d is exactly the identity operator (not just projectively).
            let mut acc = c;
            for _ in 1..d {
                acc = acc.compose(&c);
            }
            assert!(acc.dense_matrix().distance(&CMat::identity(d as usize)) < 1e-11);
        }
    }

    #[test]
    fn clifford_word_matches_element() {
        // Applying the phase*X*P word to canonical states equals dense C_d.
        for d in [3u64, 5, 7] {
            let c = magic_clifford(d).unwrap().dense_matrix();
            let mut s = StabilizerState::plus_state(1, d);
            s.apply_z(0, 2);
            let mut o = s.to_dense().unwrap();
            apply_magic_clifford(&mut s, 0, 1);
            o.apply_single(0, &c);
            let diff: f64 = s
                .dense_vector()
                .unwrap()
                .iter()
                .zip(o.amplitudes())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            assert!(diff < 1e-12);
        }
    }

    #[test]
    fn uv_parametrization_conjugates_x_correctly() {
        // U_v X U_v^dag = omega^{eps'} C_{gamma',(1,z')}.
        for d in [3u64, 5, 7] {
            for zp in 0..d as i64 {
                for gammap in 0..d as i64 {
                    for epsp in [0i64, 1, (d - 1) as i64] {
                        let uv = build_uv(d, zp, gammap, epsp).unwrap();
                        assert_eq!(uv[0], ExactPhase::one(d), "v_0 = 0");
                        let u =
                            CMat::from_diag(&uv.iter().map(|p| p.to_complex()).collect::<Vec<_>>());
                        let lhs = u.mul(&mat_x(d)).mul(&u.dagger());
                        let c = CliffordElement::new(
                            Mat2::new(1, 0, gammap, 1, d),
                            WeylIndex::new(1, zp, d),
                            ExactPhase::one(d),
                        );
                        // For d = 3 the ninth-root table leaves a residual
                        // xi^{2 gamma'} that omega powers cannot absorb.
                        let lead = if d == 3 {
                            ExactPhase::unit_root(3, 2 * gammap, 9) * ExactPhase::omega_pow(3, epsp)
                        } else {
                            ExactPhase::omega_pow(d, epsp)
                        };
                        let rhs = c.dense_matrix().scale(lead.to_complex());
                        assert!(
                            lhs.distance(&rhs) < 1e-12,
                            "UDU2 fails d={d} z'={zp} g'={gammap} e'={epsp}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn uv_reproduces_magic_gate() {
        // d > 3: M_d = omega^{C(d+1,4)/d} U_v((d-1)/2, 1, inv12(6d - 2d^2 - 1)).
        for d in [5u64, 7] {
            let di = d as i64;
            let eps = (Fp::new(12, d).inv() * Fp::new(6 * di - 2 * di * di - 1, d)).value();
            let uv = build_uv(d, (di - 1) / 2, 1, eps as i64).unwrap();
            let lead = ExactPhase::omega_pow(d, binom(di + 1, 4) / di);
            let m = magic_gate(d).unwrap();
            for j in 0..d as usize {
                assert_eq!(lead * uv[j], m.entry(j), "U_v vs M mismatch d={d} j={j}");
            }
        }
        // d = 3: M_3 = e^{2 pi i/9} U_v(1, 1, 0).
        let uv = build_uv(3, 1, 1, 0).unwrap();
        let lead = ExactPhase::unit_root(3, 1, 9);
        let m = magic_gate(3).unwrap();
        for j in 0..3 {
            assert_eq!(lead * uv[j], m.entry(j), "U_v vs M_3 mismatch j={j}");
        }
    }

    #[test]
    fn alpha_closed_form_values() {
        let pi = std::f64::consts::PI;
        let a30 = alpha(3, 0).unwrap();
        assert!((a30.norm() - (1.0 + 2.0 * (2.0 * pi / 9.0).cos()) / 3.0).abs() < 1e-12);
        assert!((a30.norm() - 0.84403).abs() < 1e-5);
        // The |alpha| = 0.723607 and 0.677277 table values are attained at
        // the argmax representatives.
        let p5 = optimal_p(5).unwrap();
        let a5 = alpha(5, p5).unwrap();
        assert!((a5.norm() - (3.0 + 2.0 * (2.0 * pi / 5.0).cos()) / 5.0).abs() < 1e-12);
        assert!((a5.norm() - 0.723607).abs() < 1e-5);
        let p7 = optimal_p(7).unwrap();
        let a7 = alpha(7, p7).unwrap();
        assert!((a7.norm() - (1.0 + 6.0 * (2.0 * pi / 7.0).cos()) / 7.0).abs() < 1e-5);
        assert!((a7.norm() - 0.677277).abs() < 1e-5);
    }

    #[test]
    fn alpha_argmax_representatives() {
        assert_eq!(optimal_p(3).unwrap(), 0);
        // The maximizing representative for d = 5 is p = 3: |alpha(5, 3)| =
        // 0.7236 while |alpha(5, 4)| = 0.4472 (exhaustive scan).
        assert_eq!(optimal_p(5).unwrap(), 3);
        assert!((alpha(5, 3).unwrap().norm() - 0.723607).abs() < 1e-5);
        assert!((alpha(5, 4).unwrap().norm() - 0.447214).abs() < 1e-5);
        assert_eq!(optimal_p(7).unwrap(), 3);
    }

    #[test]
    fn alpha_two_routes_agree() {
        for d in [3u64, 5, 7, 11, 13] {
            for p in 0..d {
                let direct = alpha(d, p).unwrap();
                let (phase, s) = alpha_depressed(d, p).unwrap();
                let via = phase.to_complex() * s;
                assert_close(direct, via, 1e-12, "alpha routes");
            }
        }
    }

    #[test]
    fn depressed_sum_is_real_for_all_small_d() {
        for d in [3u64, 5, 7, 11, 13, 17, 19, 23] {
            for p in 0..d {
                assert!(depressed_sum_imag(d, p).unwrap().abs() < 1e-12);
            }
        }
    }

    #[test]
    fn binomial_identity_per_dimension() {
        // C(d+1,4)/d - C(d,3)/d = C(d,4)/d as exact integers for d > 3.
        for d in [5i64, 7, 11, 13, 17] {
            assert_eq!(binom(d + 1, 4) / d - binom(d, 3) / d, binom(d, 4) / d);
        }
    }

    #[test]
    fn orbit_overlap_laws() {
        for d in [3u64, 5, 7] {
            let p = optimal_p(d).unwrap();
            let orb = orbit(d, p).unwrap();
            // Pairwise |<j~|k~>|^2 = 1/d for j != k, exactly.
            for j in 0..d as usize {
                for k in 0..d as usize {
                    let ip = inner(&orb.states[j], &orb.states[k]);
                    if j == k {
                        assert_eq!(ip, ExactPhase::one(d));
                    } else {
                        assert_eq!(ip.magnitude_exponent(), Some(-1));
                    }
                }
            }
            // <j~|M_d|+> is j-independent.
            let mdense = magic_gate(d).unwrap().dense_matrix();
            let mut target = DenseState::basis(d, 1, &[0]).unwrap();
            target.apply_single(0, &crate::dense::mat_h(d));
            target.apply_single(0, &mdense);
            let overlaps: Vec<Complex64> = orb
                .states
                .iter()
                .map(|s| {
                    s.dense_vector()
                        .unwrap()
                        .iter()
                        .zip(target.amplitudes())
                        .map(|(a, b)| a.conj() * b)
                        .sum()
                })
                .collect();
            for o in &overlaps {
                assert_close(*o, overlaps[0], 1e-12, "orbit overlap j-independence");
                assert_close(*o, orb.alpha, 1e-12, "orbit overlap equals alpha");
            }
            // Eigenvector property: C_d (M_d|+>) = M_d|+>.
            let c = magic_clifford(d).unwrap().dense_matrix();
            let rotated = c.mul_vec(target.amplitudes());
            for (a, b) in rotated.iter().zip(target.amplitudes()) {
                assert!((a - b).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn orbit_reconstructs_magic_state() {
        // sum_j C^j |0~> = d conj(alpha) |M_d>, i.e. the full-orbit sum is
        // the (unnormalized) magic state.
        for d in [3u64, 5, 7] {
            let p = optimal_p(d).unwrap();
            let orb = orbit(d, p).unwrap();
            let mut total = vec![Complex64::new(0.0, 0.0); d as usize];
            for s in &orb.states {
                for (t, a) in total.iter_mut().zip(s.dense_vector().unwrap()) {
                    *t += a;
                }
            }
            let mdense = magic_gate(d).unwrap().dense_matrix();
            let plus = vec![Complex64::new(1.0 / (d as f64).sqrt(), 0.0); d as usize];
            let target = mdense.mul_vec(&plus);
            for (got, want) in total.iter().zip(&target) {
                let scaled = want * orb.alpha.conj() * d as f64;
                assert_close(*got, scaled, 1e-10, "orbit sum");
            }
            // Equivalently, the printed prefactor form: |M_d> =
            // sign * omega^{C(d,4)/d - p} / (d |alpha|) * sum_j |j~>.
            let (phase, s) = alpha_depressed(d, p).unwrap();
            let sign = orb.eq_n_sign.unwrap() as f64;
            let pref = phase.to_complex() * sign / (d as f64 * orb.alpha.norm());
            for (got, want) in total.iter().zip(&target) {
                assert_close(got * pref, *want, 1e-10, "printed-prefactor form");
            }
            let _ = s;
        }
    }

    #[test]
    fn orbits_are_disjoint_from_plus_family() {
        // C^a Z^p |+> never coincides with Z^q |+> for a != 0: every such
        // overlap has magnitude d^{-1/2}.
        for d in [3u64, 5] {
            for p in 0..d {
                let orb = orbit(d, p).unwrap();
                for a in 1..d as usize {
                    for q in 0..d {
                        let mut zq = StabilizerState::plus_state(1, d);
                        zq.apply_z(0, q as i64);
                        let ip = inner(&orb.states[a], &zq);
                        assert_eq!(ip.magnitude_exponent(), Some(-1));
                    }
                }
            }
        }
    }

    #[test]
    fn beta_closed_form_vs_inner_route() {
        for d in [5u64, 7] {
            for p in 0..d {
                let orb = orbit(d, p).unwrap();
                for j in 0..d {
                    let closed = beta(d, j, p).unwrap().to_complex();
                    let exact = orb.betas[j as usize];
                    assert_close(closed, exact, 1e-12, "beta route d>3");
                    assert!((closed.norm() - 1.0).abs() < 1e-12);
                }
            }
        }
        // d = 3 values: beta_1 = e^{-i pi/18}, beta_2 = e^{+i pi/18} at p = 0.
        let orb = orbit(3, 0).unwrap();
        let pi = std::f64::consts::PI;
        assert_close(orb.betas[1], Complex64::from_polar(1.0, -pi / 18.0), 1e-12, "beta_1 d=3");
        assert_close(orb.betas[2], Complex64::from_polar(1.0, pi / 18.0), 1e-12, "beta_2 d=3");
        for p in 0..3 {
            let orb = orbit(3, p).unwrap();
            for j in 0..3 {
                let closed = beta(3, j, p).unwrap().to_complex();
                assert_close(closed, orb.betas[j as usize], 1e-12, "beta route d=3");
            }
        }
    }

    #[test]
    fn beta_zero_is_one() {
        for d in [3u64, 5, 7] {
            for p in 0..d {
                assert_eq!(beta(d, 0, p).unwrap(), ExactPhase::one(d));
            }
        }
    }

    #[test]
    fn kappa_values() {
        // Exact scaling exponents from the argmax overlaps.
        assert!((kappa(3).unwrap() - 0.30870).abs() < 5e-5);
        assert!((kappa(5).unwrap() - 0.40201).abs() < 5e-5);
        assert!((kappa(7).unwrap() - 0.40051).abs() < 5e-5);
    }
}
