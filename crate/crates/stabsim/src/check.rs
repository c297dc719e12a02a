//! Self-validation suites for the `check` CLI subcommand: dual-route and
//! oracle cross-checks runnable outside the test harness.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::approx::{build_approx_state, find_code, sample_code, z_of_code, LinearCode};
use crate::dense::{mat_h, mat_p, mat_x, mat_z, DenseState};
use crate::field::{quadratic_gauss_sum, Fp};
use crate::inner::inner;
use crate::magic::{alpha, alpha_depressed, beta, magic_clifford, magic_gate, optimal_p, orbit};
use crate::stab::StabilizerState;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum CheckLevel {
    Fast,
    Full,
}

#[derive(Clone, Debug)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: usize,
    pub failed: usize,
    pub notes: Vec<String>,
}

impl SuiteResult {
    fn new(name: &'static str) -> Self {
        SuiteResult { name, passed: 0, failed: 0, notes: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            if self.notes.len() < 8 {
                self.notes.push(what());
            }
        }
    }

    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

fn brute_gauss(f: i64, g: i64, d: u64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..d as i64 {
        let e = (f * j * (j - 1) / 2 + g * j) as f64;
        acc += Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * e / d as f64);
    }
    acc
}

fn suite_gauss_sums() -> SuiteResult {
    let mut s = SuiteResult::new("gauss-sums");
    for d in [3u64, 5, 7, 11, 13] {
        for f in 0..d {
            for g in 0..d {
                let closed = quadratic_gauss_sum(Fp::from_u64(f, d), Fp::from_u64(g, d))
                    .value(d)
                    .to_complex();
                let diff = (closed - brute_gauss(f as i64, g as i64, d)).norm();
                s.check(diff < 1e-12, || format!("d={d} f={f} g={g}: {diff:.2e}"));
            }
        }
    }
    s
}

fn suite_overlap_table() -> SuiteResult {
    let mut s = SuiteResult::new("overlap-table");
    for d in [3u64, 5, 7] {
        let p = optimal_p(d).unwrap();
        // Both alpha routes agree for every representative.
        for pp in 0..d {
            let direct = alpha(d, pp).unwrap();
            let (phase, re) = alpha_depressed(d, pp).unwrap();
            let diff = (direct - phase.to_complex() * re).norm();
            s.check(diff < 1e-12, || format!("alpha routes d={d} p={pp}: {diff:.2e}"));
        }
        // The argmax really is the maximum.
        let best = alpha(d, p).unwrap().norm();
        for pp in 0..d {
            let a = alpha(d, pp).unwrap().norm();
            s.check(a <= best + 1e-12, || format!("argmax violated d={d} p={pp}"));
        }
        // Z over the whole field equals d |alpha|^2.
        let orb = orbit(d, p).unwrap();
        let z = z_of_code(&LinearCode::full(1, d), &orb.betas).unwrap();
        let want = d as f64 * orb.alpha.norm_sqr();
        s.check((z - want).abs() < 1e-12, || format!("Z(F_{d}) = {z} vs {want}"));
        // Closed-form beta against the inner-product route.
        for pp in 0..d {
            let orb = orbit(d, pp).unwrap();
            for j in 0..d {
                let closed = beta(d, j, pp).unwrap().to_complex();
                let diff = (closed - orb.betas[j as usize]).norm();
                s.check(diff < 1e-12, || format!("beta d={d} j={j} p={pp}: {diff:.2e}"));
            }
        }
    }
    s
}

fn suite_orbit_identities() -> SuiteResult {
    let mut s = SuiteResult::new("orbit-identities");
    for d in [3u64, 5, 7] {
        let p = optimal_p(d).unwrap();
        let orb = orbit(d, p).unwrap();
        // Pairwise overlaps: |<j~|k~>|^2 = 1/d off the diagonal, exactly.
        for j in 0..d as usize {
            for k in 0..d as usize {
                let ip = inner(&orb.states[j], &orb.states[k]);
                let ok = if j == k {
                    ip == crate::field::ExactPhase::one(d)
                } else {
                    ip.magnitude_exponent() == Some(-1)
                };
                s.check(ok, || format!("orbit overlap d={d} ({j},{k})"));
            }
        }
        // Orbit sum reconstructs the magic state: sum_j |j~> = d conj(a) |M>.
        let mgate = magic_gate(d).unwrap();
        let mut target = DenseState::basis(d, 1, &[0]).unwrap();
        target.apply_single(0, &mat_h(d));
        target.apply_single(0, &mgate.dense_matrix());
        let mut total = vec![Complex64::new(0.0, 0.0); d as usize];
        for st in &orb.states {
            for (acc, a) in total.iter_mut().zip(st.dense_vector().unwrap()) {
                *acc += a;
            }
        }
        let scale = orb.alpha.conj() * d as f64;
        let diff = total
            .iter()
            .zip(target.amplitudes())
            .map(|(got, want)| (got - want * scale).norm())
            .fold(0.0, f64::max);
        s.check(diff < 1e-10, || format!("orbit sum d={d}: {diff:.2e}"));
        // C_d fixes the magic state.
        let c = magic_clifford(d).unwrap().dense_matrix();
        let rotated = c.mul_vec(target.amplitudes());
        let fix = rotated
            .iter()
            .zip(target.amplitudes())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        s.check(fix < 1e-12, || format!("eigenvector property d={d}: {fix:.2e}"));
    }
    s
}

fn random_word(
    rng: &mut ChaCha12Rng,
    s: &mut StabilizerState,
    o: &mut DenseState,
    n: usize,
    d: u64,
    len: usize,
) {
    let mats = (mat_x(d), mat_z(d), mat_p(d), mat_h(d));
    for _ in 0..len {
        match rng.gen_range(0..5) {
            0 => {
                let q = rng.gen_range(0..n);
                s.apply_x(q, 1);
                o.apply_single(q, &mats.0);
            }
            1 => {
                let q = rng.gen_range(0..n);
                s.apply_z(q, 1);
                o.apply_single(q, &mats.1);
            }
            2 => {
                let q = rng.gen_range(0..n);
                s.apply_p(q, 1);
                o.apply_single(q, &mats.2);
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
}

fn suite_canonical_vs_dense() -> SuiteResult {
    let mut s = SuiteResult::new("canonical-vs-dense");
    let mut rng = ChaCha12Rng::seed_from_u64(0xCAFE);
    for d in [3u64, 5] {
        for _ in 0..60 {
            let n = rng.gen_range(1..=3);
            let mut st = StabilizerState::basis_state(&vec![0; n], d);
            let mut o = DenseState::basis(d, n, &vec![0; n]).unwrap();
            let len = rng.gen_range(1..=40);
            random_word(&mut rng, &mut st, &mut o, n, d, len);
            let diff = st
                .dense_vector()
                .unwrap()
                .iter()
                .zip(o.amplitudes())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            s.check(diff < 1e-10, || format!("word d={d} n={n}: {diff:.2e}"));
        }
    }
    s
}

fn suite_inner_vs_dense() -> SuiteResult {
    let mut s = SuiteResult::new("inner-vs-dense");
    let mut rng = ChaCha12Rng::seed_from_u64(0xBEEF);
    for d in [3u64, 5] {
        for _ in 0..100 {
            let n = rng.gen_range(1..=4);
            let mut s1 = StabilizerState::basis_state(&vec![0; n], d);
            let mut o1 = DenseState::basis(d, n, &vec![0; n]).unwrap();
            let len1 = rng.gen_range(0..25);
            random_word(&mut rng, &mut s1, &mut o1, n, d, len1);
            let mut s2 = StabilizerState::basis_state(&vec![0; n], d);
            let mut o2 = DenseState::basis(d, n, &vec![0; n]).unwrap();
            let len2 = rng.gen_range(0..25);
            random_word(&mut rng, &mut s2, &mut o2, n, d, len2);
            let exact = inner(&s1, &s2).to_complex();
            let dense = o2.inner(&o1);
            s.check((exact - dense).norm() < 1e-10, || {
                format!("inner d={d} n={n}: {:.2e}", (exact - dense).norm())
            });
        }
    }
    s
}

fn suite_code_fidelity() -> SuiteResult {
    let mut s = SuiteResult::new("code-fidelity");
    let d = 3u64;
    let p = optimal_p(d).unwrap();
    let orb = orbit(d, p).unwrap();
    let mut rng = ChaCha12Rng::seed_from_u64(0xF1DE);
    let mgate = magic_gate(d).unwrap().dense_matrix();
    for t in 2..=6usize {
        for _ in 0..3 {
            let k = rng.gen_range(0..=t.min(3));
            let code = sample_code(t, k, d, &mut rng);
            let z = match z_of_code(&code, &orb.betas) {
                Ok(z) => z,
                Err(e) => {
                    s.check(false, || format!("Z eval failed: {e}"));
                    continue;
                }
            };
            let cert = crate::approx::ApproxStateCert {
                code,
                z,
                fidelity: (d as f64).powi(k as i32) * orb.alpha.norm().powi(2 * t as i32) / z,
                delta: 0.0,
                accepted: true,
            };
            let terms = build_approx_state(&cert, &orb);
            let total = (d as usize).pow(t as u32);
            let mut dense_l = vec![Complex64::new(0.0, 0.0); total];
            for (c, st) in &terms {
                for (acc, a) in dense_l.iter_mut().zip(st.dense_vector().unwrap()) {
                    *acc += c * a;
                }
            }
            let mut target = DenseState::basis(d, t, &vec![0; t]).unwrap();
            for q in 0..t {
                target.apply_single(q, &mat_h(d));
                target.apply_single(q, &mgate);
            }
            let overlap: Complex64 =
                dense_l.iter().zip(target.amplitudes()).map(|(a, b)| a.conj() * b).sum();
            let diff = (overlap.norm_sqr() - cert.fidelity).abs();
            s.check(diff < 1e-10, || format!("fidelity identity t={t} k={k}: {diff:.2e}"));
        }
    }
    // The rejection loop accepts and certifies above target.
    let mut rng = ChaCha12Rng::seed_from_u64(0xF1DF);
    match find_code(6, 0.05, &orb, &mut rng, Some(400)) {
        Ok((cert, _)) => {
            s.check(cert.fidelity >= 0.95 - 1e-9, || {
                format!("accepted fidelity {} below target", cert.fidelity)
            });
        }
        Err(e) => s.check(false, || format!("find_code failed: {e}")),
    }
    s
}

/// Run the requested validation suites.
pub fn run_checks(level: CheckLevel) -> Vec<SuiteResult> {
    let mut out = vec![suite_gauss_sums(), suite_overlap_table(), suite_orbit_identities()];
    if level == CheckLevel::Full {
        out.push(suite_canonical_vs_dense());
        out.push(suite_inner_vs_dense());
        out.push(suite_code_fidelity());
    }
    out
}
