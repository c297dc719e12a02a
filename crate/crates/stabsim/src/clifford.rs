//! Symbolic single-qudit Heisenberg-Weyl and Clifford group elements with
//! exact global-phase tracking, plus their dense realizations.
//!
//! A Clifford element is stored as (F, chi, phase) with F in SL(2, Z_d) and
//! chi a displacement index: the operator is phase * D_chi * U_F. Products
//! are computed symbolically; the phase correction that the two-kernel
//! product picks up (a Legendre-symbol fourth root of unity when both
//! factors and their product have nonzero upper-right F entry) is evaluated
//! in closed form from the underlying Gauss sum, so composition matches the
//! dense matrix product exactly, global phase included.

use num_complex::Complex64;

use crate::dense::CMat;
use crate::field::{unit_gauss_factor, ExactPhase, Fp};

/// Displacement index of a Heisenberg-Weyl operator D_(x,z) = tau^{xz} X^x Z^z.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct WeylIndex {
    pub x: Fp,
    pub z: Fp,
}

impl WeylIndex {
    pub fn new(x: i64, z: i64, d: u64) -> Self {
        WeylIndex { x: Fp::new(x, d), z: Fp::new(z, d) }
    }

    pub fn zero(d: u64) -> Self {
        WeylIndex::new(0, 0, d)
    }

    pub fn modulus(&self) -> u64 {
        self.x.modulus()
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    pub fn add(&self, other: &WeylIndex) -> WeylIndex {
        WeylIndex { x: self.x + other.x, z: self.z + other.z }
    }
}

/// Symplectic inner product <a.b> = z_a x_b - x_a z_b.
pub fn symplectic_product(a: &WeylIndex, b: &WeylIndex) -> Fp {
    a.z * b.x - a.x * b.z
}

/// D_a D_b = tau^{<a.b>} D_{a+b}.
pub fn weyl_compose(a: &WeylIndex, b: &WeylIndex) -> (WeylIndex, ExactPhase) {
    let s = symplectic_product(a, b);
    (a.add(b), ExactPhase::tau_pow(a.modulus(), s.value() as i64))
}

/// 2x2 matrix [[a, b], [c, e]] over Z_d; Clifford elements require det = 1.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Mat2 {
    pub a: Fp,
    pub b: Fp,
    pub c: Fp,
    pub e: Fp,
}

impl Mat2 {
    pub fn new(a: i64, b: i64, c: i64, e: i64, d: u64) -> Self {
        Mat2 { a: Fp::new(a, d), b: Fp::new(b, d), c: Fp::new(c, d), e: Fp::new(e, d) }
    }

    pub fn identity(d: u64) -> Self {
        Mat2::new(1, 0, 0, 1, d)
    }

    pub fn modulus(&self) -> u64 {
        self.a.modulus()
    }

    pub fn det(&self) -> Fp {
        self.a * self.e - self.b * self.c
    }

    pub fn mul(&self, other: &Mat2) -> Mat2 {
        Mat2 {
            a: self.a * other.a + self.b * other.c,
            b: self.a * other.b + self.b * other.e,
            c: self.c * other.a + self.e * other.c,
            e: self.c * other.b + self.e * other.e,
        }
    }

    pub fn apply(&self, v: &WeylIndex) -> WeylIndex {
        WeylIndex { x: self.a * v.x + self.b * v.z, z: self.c * v.x + self.e * v.z }
    }

    pub fn is_identity(&self) -> bool {
        *self == Mat2::identity(self.modulus())
    }
}

/// A single-qudit Clifford unitary phase * D_chi * U_F.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct CliffordElement {
    f: Mat2,
    chi: WeylIndex,
    phase: ExactPhase,
}

impl CliffordElement {
    pub fn new(f: Mat2, chi: WeylIndex, phase: ExactPhase) -> Self {
        assert_eq!(f.det().value(), 1, "Clifford F matrix must have det 1");
        CliffordElement { f, chi, phase }
    }

    pub fn identity(d: u64) -> Self {
        CliffordElement::new(Mat2::identity(d), WeylIndex::zero(d), ExactPhase::one(d))
    }

    /// X = D_(1,0).
    pub fn x_gate(d: u64) -> Self {
        CliffordElement::new(Mat2::identity(d), WeylIndex::new(1, 0, d), ExactPhase::one(d))
    }

    /// Z = D_(0,1).
    pub fn z_gate(d: u64) -> Self {
        CliffordElement::new(Mat2::identity(d), WeylIndex::new(0, 1, d), ExactPhase::one(d))
    }

    /// P with F_P = [[1,0],[1,1]], chi = (0, (d-1)/2); equals diag omega^{j(j-1)/2}.
    pub fn p_gate(d: u64) -> Self {
        CliffordElement::new(
            Mat2::new(1, 0, 1, 1, d),
            WeylIndex::new(0, (d as i64 - 1) / 2, d),
            ExactPhase::one(d),
        )
    }

    /// H with F_H = [[0, d-1], [1, 0]]; equals the DFT matrix omega^{jk}/sqrt(d).
    pub fn h_gate(d: u64) -> Self {
        CliffordElement::new(Mat2::new(0, -1, 1, 0, d), WeylIndex::zero(d), ExactPhase::one(d))
    }

    pub fn modulus(&self) -> u64 {
        self.f.modulus()
    }

    pub fn f_matrix(&self) -> &Mat2 {
        &self.f
    }

    pub fn chi(&self) -> &WeylIndex {
        &self.chi
    }

    pub fn global_phase(&self) -> ExactPhase {
        self.phase
    }

    pub fn scaled(&self, extra: ExactPhase) -> Self {
        CliffordElement { phase: self.phase * extra, ..*self }
    }

    /// Phase correction mu with U_{F1} U_{F2} = mu * U_{F1 F2}. Nontrivial
    /// only when b1, b2 and b are all nonzero, where summing the inner index
    /// of the kernel product leaves the Gauss factor of 2^-1 b inv(b1) inv(b2).
    fn kernel_cocycle(f1: &Mat2, f2: &Mat2) -> ExactPhase {
        let d = f1.modulus();
        if f1.b.is_zero() || f2.b.is_zero() {
            return ExactPhase::one(d);
        }
        let b = f1.mul(f2).b;
        if b.is_zero() {
            return ExactPhase::one(d);
        }
        unit_gauss_factor(Fp::half(d) * b * f1.b.inv() * f2.b.inv())
    }

    /// Group product; the dense matrix of the result equals the product of
    /// the dense matrices exactly, global phase included.
    pub fn compose(&self, other: &CliffordElement) -> CliffordElement {
        let d = self.modulus();
        let f = self.f.mul(&other.f);
        let shifted = self.f.apply(&other.chi);
        let chi = self.chi.add(&shifted);
        let sp = symplectic_product(&self.chi, &shifted);
        let phase = self.phase
            * other.phase
            * ExactPhase::tau_pow(d, sp.value() as i64)
            * Self::kernel_cocycle(&self.f, &other.f);
        CliffordElement { f, chi, phase }
    }

    /// Conjugation action on displacements:
    /// C D_a C^dag = omega^{<chi . F a>} D_{F a}.
    pub fn conjugate_weyl(&self, a: &WeylIndex) -> (WeylIndex, ExactPhase) {
        let fa = self.f.apply(a);
        let s = symplectic_product(&self.chi, &fa);
        (fa, ExactPhase::omega_fp(s))
    }

    /// Smallest m >= 1 with self^m proportional to the identity.
    pub fn projective_order(&self) -> usize {
        let d = self.modulus();
        let cap = (4 * d * d * d) as usize;
        let mut acc = *self;
        for m in 1..=cap {
            if acc.f.is_identity() && acc.chi.is_zero() {
                return m;
            }
            acc = acc.compose(self);
        }
        unreachable!("projective order exceeded group-order cap");
    }

    /// Dense d x d matrix: phase * D_chi * U_F with U_F given by the
    /// standard quadratic kernels (split on b = 0).
    pub fn dense_matrix(&self) -> CMat {
        let uf = dense_uf(&self.f);
        let dchi = dense_weyl(&self.chi);
        dchi.mul(&uf).scale(self.phase.to_complex())
    }
}

/// Dense D_(x,z) = tau^{xz} X^x Z^z: |j> -> tau^{xz} omega^{zj} |j + x>.
pub fn dense_weyl(a: &WeylIndex) -> CMat {
    let d = a.modulus();
    let n = d as usize;
    let lead = ExactPhase::tau_pow(d, (a.x * a.z).value() as i64);
    let mut m = CMat::zeros(n);
    for j in 0..n {
        let ph = lead * ExactPhase::omega_pow(d, (a.z.value() as i64) * j as i64);
        m.set((j + a.x.value() as usize) % n, j, ph.to_complex());
    }
    m
}

fn dense_uf(f: &Mat2) -> CMat {
    let d = f.modulus();
    let n = d as usize;
    let mut m = CMat::zeros(n);
    if f.b.is_zero() {
        // U_F |k> = tau^{a c k^2} |a k>.
        for k in 0..n {
            let kf = Fp::from_u64(k as u64, d);
            let e = f.a * f.c * kf * kf;
            let ph = ExactPhase::tau_pow(d, e.value() as i64);
            m.set((f.a.value() as usize * k) % n, k, ph.to_complex());
        }
    } else {
        // U_F[j,k] = tau^{inv(b)(a k^2 - 2jk + e j^2)} / sqrt(d).
        let invb = f.b.inv();
        let s = Complex64::new(1.0 / (d as f64).sqrt(), 0.0);
        for j in 0..n {
            for k in 0..n {
                let jf = Fp::from_u64(j as u64, d);
                let kf = Fp::from_u64(k as u64, d);
                let two = Fp::new(2, d);
                let e = invb * (f.a * kf * kf - two * jf * kf + f.e * jf * jf);
                let ph = ExactPhase::tau_pow(d, e.value() as i64);
                m.set(j, k, ph.to_complex() * s);
            }
        }
    }
    m
}
