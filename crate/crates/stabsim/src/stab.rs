//! Canonical-form n-qudit stabilizer states and in-place Clifford gates.
//!
//! A state is stored as
//!
//! ```text
//!   amp * sum_{u in Z_d^k} omega^{inv2 * u^T Q u + L u} |G u + h>
//! ```
//!
//! with G an n x k matrix of full column rank over Z_d, Q symmetric, and
//! `amp` an exact phase carrying the d^{-k/2} normalization. X, Z, P and
//! CSUM only touch the data; H either introduces a fresh summation
//! variable (rank-preserving branch) or forces one variable to be summed
//! out through a closed-form quadratic Gauss sum (rank-dropping branch),
//! after which Gaussian elimination restores full column rank.

use num_complex::Complex64;

use crate::dense::DenseState;
use crate::field::{weighted_square_sum, ExactPhase, Fp};
use crate::linalg::{FpMatrix, FpVector};
use crate::Result;

#[derive(Clone, Debug)]
pub struct StabilizerState {
    n: usize,
    d: u64,
    g: FpMatrix,
    h: FpVector,
    q: FpMatrix,
    l: FpVector,
    amp: ExactPhase,
}

impl StabilizerState {
    /// |x>: the k = 0 canonical form.
    pub fn basis_state(x: &[u64], d: u64) -> Self {
        let n = x.len();
        StabilizerState {
            n,
            d,
            g: FpMatrix::zeros(n, 0, d),
            h: FpVector::from_vec(x.to_vec(), d),
            q: FpMatrix::zeros(0, 0, d),
            l: FpVector::zeros(0, d),
            amp: ExactPhase::one(d),
        }
    }

    /// Uniform superposition |+>^n: k = n, G = 1, amplitude d^{-n/2}.
    pub fn plus_state(n: usize, d: u64) -> Self {
        StabilizerState {
            n,
            d,
            g: FpMatrix::identity(n, d),
            h: FpVector::zeros(n, d),
            q: FpMatrix::zeros(n, n, d),
            l: FpVector::zeros(n, d),
            amp: ExactPhase::sqrt_d_pow(d, -(n as i64)),
        }
    }

    /// The zero vector (kept in canonical shape with a zero amplitude flag).
    pub fn zero_state(n: usize, d: u64) -> Self {
        let mut s = StabilizerState::basis_state(&vec![0; n], d);
        s.amp = ExactPhase::zero(d);
        s
    }

    pub fn num_qudits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> u64 {
        self.d
    }

    /// Affine dimension k of the support.
    pub fn k(&self) -> usize {
        self.g.cols()
    }

    pub fn is_zero(&self) -> bool {
        self.amp.is_zero()
    }

    pub fn amplitude(&self) -> ExactPhase {
        self.amp
    }

    pub fn support(&self) -> (&FpMatrix, &FpVector) {
        (&self.g, &self.h)
    }

    pub fn quadratic_data(&self) -> (&FpMatrix, &FpVector) {
        (&self.q, &self.l)
    }

    pub fn scale(&mut self, p: ExactPhase) {
        self.amp *= p;
    }

    /// Change of summation variables u = M u' + c; M must have full column
    /// rank so the affine support is reparametrized, not collapsed.
    fn substitute(&mut self, m: &FpMatrix, c: &FpVector) {
        let d = self.d;
        let inv2 = Fp::half(d).value();
        // Constant phase: inv2 * c^T Q c + L c.
        let qc = self.q.mul_vec(c);
        let e = (inv2 * qc.dot(c) % d + self.l.dot(c)) % d;
        self.amp *= ExactPhase::omega_pow(d, e as i64);
        // L' = (c^T Q + L) M, using Q symmetric.
        let mut row = qc.clone();
        for i in 0..row.len() {
            let v = row.get(i);
            row.set(i, v + self.l.get(i));
        }
        self.l = m.vec_mul(&row);
        self.q = m.transpose().mul(&self.q).mul(m);
        self.h = self.h.add(&self.g.mul_vec(c));
        self.g = self.g.mul(m);
    }

    /// Sum the variable `j` out of the phase. Requires column j of G to be
    /// zero, so the sum over u_j is a pure quadratic Gauss sum
    /// `sum_s omega^{inv2 a s^2 + b(w) s}` with a = Q_jj and
    /// b(w) = sum_m Q_jm w_m + L_j.
    fn sum_out_var(&mut self, j: usize) {
        let d = self.d;
        let k = self.k();
        debug_assert!((0..self.n).all(|r| self.g.get(r, j) == 0));
        let a = Fp::from_u64(self.q.get(j, j), d);
        let b0 = Fp::from_u64(self.l.get(j), d);
        let brow: Vec<u64> = (0..k).filter(|&m| m != j).map(|m| self.q.get(j, m)).collect();

        self.g.remove_col(j);
        self.q.remove_row_col(j);
        self.l.remove(j);

        let inv2 = Fp::half(d);
        if !a.is_zero() {
            let inva = a.inv();
            // sum_s = omega^{-inv2 inva b0^2} * legendre(inv2 a) * eps * sqrt(d),
            // with the w-dependent part of -inv2 inva b(w)^2 folded into Q, L.
            let km = self.k();
            for m in 0..km {
                let bm = Fp::from_u64(brow[m], d);
                for nn in 0..km {
                    let bn = Fp::from_u64(brow[nn], d);
                    let cur = Fp::from_u64(self.q.get(m, nn), d);
                    self.q.set(m, nn, (cur - inva * bm * bn).value());
                }
                let cur = Fp::from_u64(self.l.get(m), d);
                self.l.set(m, (cur - inva * b0 * bm).value());
            }
            let e = -(inv2 * inva * b0 * b0);
            self.amp *= ExactPhase::omega_fp(e) * weighted_square_sum(inv2 * a);
        } else {
            // sum_s omega^{b(w) s} = d * delta_{b(w), 0}.
            self.amp = self.amp.scale_d_pow(1);
            if brow.iter().all(|&v| v == 0) {
                if !b0.is_zero() {
                    self.amp = ExactPhase::zero(d);
                }
                return;
            }
            // Impose the linear constraint sum_m brow_m w_m + b0 = 0.
            let km = self.k();
            let piv = brow.iter().position(|&v| v != 0).unwrap();
            let invp = Fp::from_u64(brow[piv], d).inv();
            let mut m2 = FpMatrix::zeros(km, km - 1, d);
            let mut c2 = FpVector::zeros(km, d);
            c2.set(piv, (-(invp * b0)).value());
            let mut col = 0;
            for mm in 0..km {
                if mm == piv {
                    continue;
                }
                m2.set(mm, col, 1);
                let bm = Fp::from_u64(brow[mm], d);
                m2.set(piv, col, (-(invp * bm)).value());
                col += 1;
            }
            self.substitute(&m2, &c2);
        }
    }

    /// Restore full column rank of G, summing out redundant variables.
    fn canonicalize(&mut self) {
        loop {
            if self.is_zero() {
                return;
            }
            let ns = self.g.nullspace();
            if ns.cols() == 0 {
                return;
            }
            let k = self.k();
            let r = ns.col_vector(0);
            let piv = (0..k).position(|i| r.get(i) != 0).unwrap();
            let inv = Fp::from_u64(r.get(piv), self.d).inv().value();
            let r = r.scaled(inv);
            // M = identity with column piv replaced by r; G M zeroes col piv.
            let mut m = FpMatrix::identity(k, self.d);
            for i in 0..k {
                m.set(i, piv, r.get(i));
            }
            self.substitute(&m, &FpVector::zeros(k, self.d));
            self.sum_out_var(piv);
        }
    }

    pub fn apply_x(&mut self, qudit: usize, a: i64) {
        if self.is_zero() {
            return;
        }
        let af = Fp::new(a, self.d);
        let cur = Fp::from_u64(self.h.get(qudit), self.d);
        self.h.set(qudit, (cur + af).value());
    }

    pub fn apply_z(&mut self, qudit: usize, a: i64) {
        if self.is_zero() {
            return;
        }
        let d = self.d;
        let af = Fp::new(a, d);
        for m in 0..self.k() {
            let gm = Fp::from_u64(self.g.get(qudit, m), d);
            let cur = Fp::from_u64(self.l.get(m), d);
            self.l.set(m, (cur + af * gm).value());
        }
        let hi = Fp::from_u64(self.h.get(qudit), d);
        self.amp *= ExactPhase::omega_fp(af * hi);
    }

    /// P^a adds a * x(x-1)/2 to the phase on one qudit, with x = g_i.u + h_i.
    pub fn apply_p(&mut self, qudit: usize, a: i64) {
        if self.is_zero() {
            return;
        }
        let d = self.d;
        let af = Fp::new(a, d);
        if af.is_zero() {
            return;
        }
        let inv2 = Fp::half(d);
        let k = self.k();
        let grow: Vec<Fp> = (0..k).map(|m| Fp::from_u64(self.g.get(qudit, m), d)).collect();
        let hi = Fp::from_u64(self.h.get(qudit), d);
        // Quadratic: Q += a g g^T; linear: L += a inv2 (2h - 1) g;
        // constant: a inv2 (h^2 - h).
        let coef = af * inv2 * (Fp::new(2, d) * hi - Fp::one(d));
        for m in 0..k {
            for nn in 0..k {
                let cur = Fp::from_u64(self.q.get(m, nn), d);
                self.q.set(m, nn, (cur + af * grow[m] * grow[nn]).value());
            }
            let cur = Fp::from_u64(self.l.get(m), d);
            self.l.set(m, (cur + coef * grow[m]).value());
        }
        self.amp *= ExactPhase::omega_fp(af * inv2 * (hi * hi - hi));
    }

    /// CSUM^pow with control c and target t: x_t += pow * x_c.
    pub fn apply_csum_pow(&mut self, control: usize, target: usize, pow: i64) {
        assert_ne!(control, target);
        if self.is_zero() {
            return;
        }
        let d = self.d;
        let pf = Fp::new(pow, d);
        for m in 0..self.k() {
            let gc = Fp::from_u64(self.g.get(control, m), d);
            let gt = Fp::from_u64(self.g.get(target, m), d);
            self.g.set(target, m, (gt + pf * gc).value());
        }
        let hc = Fp::from_u64(self.h.get(control), d);
        let ht = Fp::from_u64(self.h.get(target), d);
        self.h.set(target, (ht + pf * hc).value());
    }

    pub fn apply_csum(&mut self, control: usize, target: usize) {
        self.apply_csum_pow(control, target, 1);
    }

    /// The Hadamard: replace x_i by a fresh variable v with cross phase
    /// v * (g_i . u + h_i), then re-canonicalize (the Gauss-sum branch fires
    /// exactly when the old row was a combination of the remaining rows).
    pub fn apply_h(&mut self, qudit: usize) {
        if self.is_zero() {
            return;
        }
        let d = self.d;
        let k = self.k();
        let grow: Vec<u64> = (0..k).map(|m| self.g.get(qudit, m)).collect();
        let hi = self.h.get(qudit);

        let mut g2 = FpMatrix::zeros(self.n, k + 1, d);
        for r in 0..self.n {
            if r == qudit {
                continue;
            }
            for c in 0..k {
                g2.set(r, c, self.g.get(r, c));
            }
        }
        g2.set(qudit, k, 1);
        let mut q2 = FpMatrix::zeros(k + 1, k + 1, d);
        q2.set_block(0, 0, &self.q);
        for m in 0..k {
            q2.set(k, m, grow[m]);
            q2.set(m, k, grow[m]);
        }
        let mut l2 = FpVector::zeros(k + 1, d);
        for m in 0..k {
            l2.set(m, self.l.get(m));
        }
        l2.set(k, hi);

        self.g = g2;
        self.q = q2;
        self.l = l2;
        self.h.set(qudit, 0);
        self.amp *= ExactPhase::sqrt_d_pow(d, -1);
        self.canonicalize();
    }

    /// Project onto the affine constraint `coeff . x = val`, coefficients
    /// indexed by physical qudit. Returns the unnormalized projected state.
    pub fn project_linear(&self, coeff: &[u64], val: u64) -> StabilizerState {
        let d = self.d;
        assert_eq!(coeff.len(), self.n);
        if self.is_zero() {
            return self.clone();
        }
        let cvec = FpVector::from_vec(coeff.to_vec(), d);
        let row = self.g.vec_mul(&cvec);
        let cst = Fp::from_u64(cvec.dot(&self.h), d);
        let target = Fp::from_u64(val % d, d) - cst;
        if row.is_zero() {
            return if target.is_zero() {
                self.clone()
            } else {
                StabilizerState::zero_state(self.n, d)
            };
        }
        let k = self.k();
        let piv = (0..k).position(|m| row.get(m) != 0).unwrap();
        let invp = Fp::from_u64(row.get(piv), d).inv();
        let mut m2 = FpMatrix::zeros(k, k - 1, d);
        let mut c2 = FpVector::zeros(k, d);
        c2.set(piv, (invp * target).value());
        let mut col = 0;
        for mm in 0..k {
            if mm == piv {
                continue;
            }
            m2.set(mm, col, 1);
            let rm = Fp::from_u64(row.get(mm), d);
            m2.set(piv, col, (-(invp * rm)).value());
            col += 1;
        }
        let mut out = self.clone();
        out.substitute(&m2, &c2);
        out
    }

    /// Apply |v><v| on one qudit.
    pub fn project_qudit(&self, qudit: usize, v: u64) -> StabilizerState {
        let mut coeff = vec![0u64; self.n];
        coeff[qudit] = 1;
        self.project_linear(&coeff, v)
    }

    /// Kronecker product; `self` holds the more significant qudits.
    pub fn tensor(&self, other: &StabilizerState) -> StabilizerState {
        assert_eq!(self.d, other.d);
        let d = self.d;
        let (n1, k1) = (self.n, self.k());
        let (n2, k2) = (other.n, other.k());
        let mut g = FpMatrix::zeros(n1 + n2, k1 + k2, d);
        g.set_block(0, 0, &self.g);
        g.set_block(n1, k1, &other.g);
        let mut q = FpMatrix::zeros(k1 + k2, k1 + k2, d);
        q.set_block(0, 0, &self.q);
        q.set_block(k1, k1, &other.q);
        StabilizerState {
            n: n1 + n2,
            d,
            g,
            h: self.h.concat(&other.h),
            q,
            l: self.l.concat(&other.l),
            amp: self.amp * other.amp,
        }
    }

    /// Phase exponent inv2 u^T Q u + L u at one point of the lattice.
    fn phase_exponent(&self, u: &FpVector) -> u64 {
        let d = self.d;
        let inv2 = Fp::half(d).value();
        (inv2 * self.q.mul_vec(u).dot(u) % d + self.l.dot(u)) % d
    }

    /// Literal expansion into d^n complex amplitudes (testing bridge).
    pub fn dense_vector(&self) -> Result<Vec<Complex64>> {
        let total = DenseState::check_cap(self.d, self.n)?;
        let d = self.d;
        let k = self.k();
        let mut amps = vec![Complex64::new(0.0, 0.0); total];
        if self.is_zero() {
            return Ok(amps);
        }
        let mut u = FpVector::zeros(k, d);
        loop {
            let x = self.g.mul_vec(&u).add(&self.h);
            let idx = x.iter().fold(0usize, |acc, v| acc * d as usize + v as usize);
            let ph = self.amp * ExactPhase::omega_pow(d, self.phase_exponent(&u) as i64);
            amps[idx] += ph.to_complex();
            // Odometer over Z_d^k.
            let mut pos = k;
            loop {
                if pos == 0 {
                    return Ok(amps);
                }
                pos -= 1;
                let v = u.get(pos) + 1;
                if v < d {
                    u.set(pos, v);
                    break;
                }
                u.set(pos, 0);
            }
        }
    }

    pub fn to_dense(&self) -> Result<DenseState> {
        Ok(DenseState::from_amplitudes(self.d, self.n, self.dense_vector()?))
    }

    /// Structural invariants: G full column rank, shapes consistent.
    pub fn assert_canonical(&self) {
        assert!(self.k() <= self.n, "k exceeds n");
        assert_eq!(self.g.rank(), self.k(), "G lost full column rank");
        assert_eq!(self.h.len(), self.n);
        assert_eq!(self.q.rows(), self.k());
        assert_eq!(self.q.cols(), self.k());
        assert_eq!(self.l.len(), self.k());
        for i in 0..self.k() {
            for j in 0..self.k() {
                assert_eq!(self.q.get(i, j), self.q.get(j, i), "Q not symmetric");
            }
        }
    }
}
