//! Exact inner products of canonical-form stabilizer states in O(n^3).
//!
//! `<s2|s1>` is computed by intersecting the two affine supports, pulling
//! the phase difference back to intersection coordinates, diagonalizing the
//! resulting quadratic form over Z_d and factoring the lattice sum into one
//! closed-form quadratic Gauss sum per coordinate. The result is an
//! [`ExactPhase`], so magnitudes are exactly 0 or d^{-m/2} by construction.

use crate::field::{square_linear_sum, ExactPhase, FastMod, Fp};
use crate::linalg::{FpMatrix, FpVector};
use crate::stab::StabilizerState;

/// A stabilizer state with its quadratic phase expressed in the physical
/// x-coordinates instead of the lattice coordinates: the state is
/// `amp * sum_{x in A} omega^{inv2 x^T Qt x + Lt x} |x>`.
///
/// Converting once per state lets a batch of pairwise inner products skip
/// the per-pair change of variables.
#[derive(Clone, Debug)]
pub struct XForm {
    n: usize,
    d: u64,
    g: FpMatrix,
    h: FpVector,
    qt: FpMatrix,
    lt: FpVector,
    amp: ExactPhase,
    zero: bool,
}

/// Parametrized intersection of two affine supports, with the affine maps
/// sending intersection coordinates back to each state's lattice.
#[derive(Clone, Debug)]
pub struct AffineIntersection {
    pub empty: bool,
    pub gc: FpMatrix,
    pub hc: FpVector,
    pub pullback1: (FpMatrix, FpVector),
    pub pullback2: (FpMatrix, FpVector),
}

impl XForm {
    /// Apply the diagonal gate Z_q^delta in place. In x-coordinates a
    /// diagonal phase gate only shifts the linear coefficient on its qudit,
    /// so powers of a measured diagonal observable are free to absorb here.
    pub fn shift_linear(&mut self, qudit: usize, delta: i64) {
        let d = self.d;
        let v = Fp::new(delta, d) + Fp::from_u64(self.lt.get(qudit), d);
        self.lt.set(qudit, v.value());
    }
}

impl AffineIntersection {
    fn empty(n: usize, d: u64) -> Self {
        AffineIntersection {
            empty: true,
            gc: FpMatrix::zeros(n, 0, d),
            hc: FpVector::zeros(n, d),
            pullback1: (FpMatrix::zeros(0, 0, d), FpVector::zeros(0, d)),
            pullback2: (FpMatrix::zeros(0, 0, d), FpVector::zeros(0, d)),
        }
    }

    /// Dimension of the intersection.
    pub fn kc(&self) -> usize {
        self.gc.cols()
    }
}

/// Solve G1 u1 - G2 u2 = h2 - h1 and package the solution set. The
/// w-parametrization is injective because both G's have full column rank.
/// One augmented elimination yields consistency, a particular solution and
/// the nullspace basis together.
pub fn intersect_affine(
    g1: &FpMatrix,
    h1: &FpVector,
    g2: &FpMatrix,
    h2: &FpVector,
) -> AffineIntersection {
    let d = g1.modulus();
    let n = g1.rows();
    let (k1, k2) = (g1.cols(), g2.cols());
    let kk = k1 + k2;
    let mut aug = FpMatrix::zeros(n, kk + 1, d);
    aug.set_block(0, 0, g1);
    for r in 0..n {
        for c in 0..k2 {
            let v = g2.get(r, c);
            aug.set(r, k1 + c, (d - v) % d);
        }
        aug.set(r, kk, (h2.get(r) + d - h1.get(r)) % d);
    }
    let pivots = aug.rref(kk);
    for r in pivots.len()..n {
        if aug.get(r, kk) != 0 {
            return AffineIntersection::empty(n, d);
        }
    }
    // Particular solution.
    let mut y0 = FpVector::zeros(kk, d);
    for &(pr, pc) in &pivots {
        y0.set(pc, aug.get(pr, kk));
    }
    // Nullspace basis from the free columns of the echelon form.
    let mut is_pivot = vec![false; kk];
    for &(_, pc) in &pivots {
        is_pivot[pc] = true;
    }
    let free_cols: Vec<usize> = (0..kk).filter(|&c| !is_pivot[c]).collect();
    let nu = free_cols.len();
    let mut n1 = FpMatrix::zeros(k1, nu, d);
    let mut n2 = FpMatrix::zeros(k2, nu, d);
    for (bi, &fc) in free_cols.iter().enumerate() {
        let set = |m1: &mut FpMatrix, m2: &mut FpMatrix, idx: usize, v: u64| {
            if idx < k1 {
                m1.set(idx, bi, v);
            } else {
                m2.set(idx - k1, bi, v);
            }
        };
        set(&mut n1, &mut n2, fc, 1);
        for &(pr, pc) in &pivots {
            let v = aug.get(pr, fc);
            if v != 0 {
                set(&mut n1, &mut n2, pc, d - v);
            }
        }
    }
    let mut c1 = FpVector::zeros(k1, d);
    let mut c2 = FpVector::zeros(k2, d);
    for r in 0..k1 {
        c1.set(r, y0.get(r));
    }
    for r in 0..k2 {
        c2.set(r, y0.get(k1 + r));
    }
    let gc = g1.mul(&n1);
    let hc = g1.mul_vec(&c1).add(h1);
    AffineIntersection { empty: false, gc, hc, pullback1: (n1, c1), pullback2: (n2, c2) }
}

/// Congruence diagonalization of a symmetric matrix over Z_d (d odd):
/// returns invertible P and the diagonal Lambda with P^T Q P = diag(Lambda).
///
/// If a pivot diagonal entry vanishes but its row still has a nonzero
/// off-diagonal entry, that row/column is added into the pivot first
/// (choosing the scale so the new diagonal entry is nonzero, which always
/// succeeds in odd characteristic).
pub fn diagonalize_quadratic(q: &FpMatrix) -> (FpMatrix, FpVector) {
    let d = q.modulus();
    let k = q.rows();
    debug_assert_eq!(k, q.cols());
    let mut a = q.clone();
    let mut p = FpMatrix::identity(k, d);

    // Symmetric column+row elementary op: col[i] += t col[j] (and same rows).
    let add_sym = |a: &mut FpMatrix, p: &mut FpMatrix, i: usize, j: usize, t: u64| {
        for r in 0..k {
            let v = (a.get(r, i) + t * a.get(r, j)) % d;
            a.set(r, i, v);
        }
        for c in 0..k {
            let v = (a.get(i, c) + t * a.get(j, c)) % d;
            a.set(i, c, v);
        }
        for r in 0..p.rows() {
            let v = (p.get(r, i) + t * p.get(r, j)) % d;
            p.set(r, i, v);
        }
    };

    for i in 0..k {
        if a.get(i, i) == 0 {
            if let Some(j) = (i + 1..k).find(|&j| a.get(i, j) != 0) {
                // q_jj + 2t q_ij != 0 for t = 1 or t = 2 since q_ij != 0.
                let t = if (a.get(j, j) + 2 * a.get(i, j)) % d != 0 { 1 } else { 2 };
                add_sym(&mut a, &mut p, i, j, t);
            } else {
                continue;
            }
        }
        let inv = Fp::from_u64(a.get(i, i), d).inv();
        for j in i + 1..k {
            let f = Fp::from_u64(a.get(i, j), d) * inv;
            if f.is_zero() {
                continue;
            }
            add_sym(&mut a, &mut p, j, i, (-f).value());
        }
    }
    let lambda = FpVector::from_vec((0..k).map(|i| a.get(i, i)).collect(), d);
    (p, lambda)
}

/// Convert a canonical-form state to x-coordinates. For G of full column
/// rank, any left inverse R gives Qt = R^T Q R and Lt = (L - h^T Qt G) R,
/// and the leftover constant is divided out of the amplitude.
pub fn x_form(s: &StabilizerState) -> XForm {
    let d = s.dim();
    let n = s.num_qudits();
    let (g, h) = s.support();
    if s.is_zero() {
        return XForm {
            n,
            d,
            g: g.clone(),
            h: h.clone(),
            qt: FpMatrix::zeros(n, n, d),
            lt: FpVector::zeros(n, d),
            amp: ExactPhase::zero(d),
            zero: true,
        };
    }
    let (q, l) = s.quadratic_data();
    let k = s.k();
    if k == 0 {
        return XForm {
            n,
            d,
            g: g.clone(),
            h: h.clone(),
            qt: FpMatrix::zeros(n, n, d),
            lt: FpVector::zeros(n, d),
            amp: s.amplitude(),
            zero: false,
        };
    }
    let r = g.left_inverse();
    let qt = r.transpose().mul(q).mul(&r);
    // Lt = (L - h^T Qt G) R.
    let htqtg = g.vec_mul(&qt.mul_vec(h));
    let mut lrow = FpVector::zeros(k, d);
    for i in 0..k {
        let v = Fp::from_u64(l.get(i), d) - Fp::from_u64(htqtg.get(i), d);
        lrow.set(i, v.value());
    }
    let lt = r.vec_mul(&lrow);
    // c0 = inv2 h^T Qt h + Lt h gets divided out.
    let inv2 = Fp::half(d).value();
    let c0 = (inv2 * qt.mul_vec(h).dot(h) % d + lt.dot(h)) % d;
    let amp = s.amplitude() * ExactPhase::omega_pow(d, -(c0 as i64));
    XForm { n, d, g: g.clone(), h: h.clone(), qt, lt, amp, zero: false }
}

/// Reusable buffers for the allocation-free inner-product kernel.
#[derive(Default)]
struct Scratch {
    aug: Vec<u64>,
    pivots: Vec<(usize, usize)>,
    free_cols: Vec<usize>,
    gc: Vec<u64>,
    hc: Vec<u64>,
    dq: Vec<u64>,
    dl: Vec<u64>,
    dq_gc: Vec<u64>,
    qw: Vec<u64>,
    hc_dq: Vec<u64>,
    lw: Vec<u64>,
}

thread_local! {
    static SCRATCH: std::cell::RefCell<Scratch> = Default::default();
}

/// `<x2|x1>` for two x-form states, exactly.
///
/// Hot path of every measurement: runs the affine intersection, phase
/// pullback and diagonalization on thread-local scratch so a Gram matrix of
/// pairs costs no allocation.
pub fn inner_x(x1: &XForm, x2: &XForm) -> ExactPhase {
    let d = x1.d;
    let n = x1.n;
    debug_assert_eq!(n, x2.n);
    debug_assert_eq!(d, x2.d);
    if x1.zero || x2.zero {
        return ExactPhase::zero(d);
    }
    SCRATCH.with(|s| inner_x_scratch(x1, x2, &mut s.borrow_mut()))
}

fn inner_x_scratch(x1: &XForm, x2: &XForm, s: &mut Scratch) -> ExactPhase {
    let d = x1.d;
    let n = x1.n;
    let md = FastMod::new(d);
    // Accumulated dot products are reduced before they could overflow the
    // 32-bit range the fast reduction needs.
    let acc_cap: u64 = (1 << 32) - d * d;
    let (k1, k2) = (x1.g.cols(), x2.g.cols());
    let kk = k1 + k2;
    let w = kk + 1;

    // Intersection system [G1 | -G2 | h2 - h1], one in-place elimination.
    s.aug.clear();
    s.aug.resize(n * w, 0);
    for r in 0..n {
        for c in 0..k1 {
            s.aug[r * w + c] = x1.g.get(r, c);
        }
        for c in 0..k2 {
            let v = x2.g.get(r, c);
            s.aug[r * w + k1 + c] = if v == 0 { 0 } else { d - v };
        }
        let hv = x2.h.get(r) + d - x1.h.get(r);
        s.aug[r * w + kk] = if hv >= d { hv - d } else { hv };
    }
    s.pivots.clear();
    {
        let aug = &mut s.aug;
        let mut row = 0;
        for col in 0..kk {
            if row == n {
                break;
            }
            let Some(p) = (row..n).find(|&i| aug[i * w + col] != 0) else {
                continue;
            };
            if p != row {
                for c in 0..w {
                    aug.swap(p * w + c, row * w + c);
                }
            }
            let inv = Fp::from_u64(aug[row * w + col], d).inv().value();
            if inv != 1 {
                for c in col..w {
                    aug[row * w + c] = md.rem(aug[row * w + c] * inv);
                }
            }
            for i in 0..n {
                let f = aug[i * w + col];
                if i != row && f != 0 {
                    let neg = d - f;
                    for c in col..w {
                        aug[i * w + c] = md.rem(aug[i * w + c] + neg * aug[row * w + c]);
                    }
                }
            }
            s.pivots.push((row, col));
            row += 1;
        }
    }
    for r in s.pivots.len()..n {
        if s.aug[r * w + kk] != 0 {
            return ExactPhase::zero(d);
        }
    }
    s.free_cols.clear();
    {
        let mut next = 0;
        for c in 0..kk {
            if next < s.pivots.len() && s.pivots[next].1 == c {
                next += 1;
            } else {
                s.free_cols.push(c);
            }
        }
    }
    let kc = s.free_cols.len();

    // hc = G1 c1 + h1 with c1 the top of the particular solution; the
    // columns of Gc are G1 applied to the u1-part of each nullspace vector.
    s.hc.clear();
    s.hc.resize(n, 0);
    for r in 0..n {
        let mut acc = 0u64;
        for &(pr, pc) in s.pivots.iter() {
            if pc < k1 {
                acc += x1.g.get(r, pc) * s.aug[pr * w + kk];
                if acc >= acc_cap {
                    acc = md.rem(acc);
                }
            }
        }
        s.hc[r] = md.rem(acc + x1.h.get(r));
    }
    s.gc.clear();
    s.gc.resize(n * kc, 0);
    for (bi, &fc) in s.free_cols.iter().enumerate() {
        for r in 0..n {
            let mut acc = if fc < k1 { x1.g.get(r, fc) } else { 0 };
            for &(pr, pc) in s.pivots.iter() {
                if pc < k1 {
                    let v = s.aug[pr * w + fc];
                    if v != 0 {
                        acc += x1.g.get(r, pc) * (d - v);
                        if acc >= acc_cap {
                            acc = md.rem(acc);
                        }
                    }
                }
            }
            s.gc[r * kc + bi] = md.rem(acc);
        }
    }

    // dQ = Qt1 - Qt2, dL = Lt1 - Lt2.
    s.dq.clear();
    s.dq.resize(n * n, 0);
    for r in 0..n {
        for c in 0..n {
            let v = x1.qt.get(r, c) + d - x2.qt.get(r, c);
            s.dq[r * n + c] = if v >= d { v - d } else { v };
        }
    }
    s.dl.clear();
    s.dl.extend((0..n).map(|i| {
        let v = x1.lt.get(i) + d - x2.lt.get(i);
        if v >= d {
            v - d
        } else {
            v
        }
    }));

    // Pullback: Qw = Gc^T dQ Gc, Lw = (hc^T dQ + dL) Gc,
    // cw = inv2 hc^T dQ hc + dL hc.
    s.dq_gc.clear();
    s.dq_gc.resize(n * kc, 0);
    for r in 0..n {
        for j in 0..kc {
            let mut acc = 0u64;
            for t in 0..n {
                acc += s.dq[r * n + t] * s.gc[t * kc + j];
                if acc >= acc_cap {
                    acc = md.rem(acc);
                }
            }
            s.dq_gc[r * kc + j] = md.rem(acc);
        }
    }
    s.qw.clear();
    s.qw.resize(kc * kc, 0);
    for i in 0..kc {
        for j in 0..kc {
            let mut acc = 0u64;
            for r in 0..n {
                acc += s.gc[r * kc + i] * s.dq_gc[r * kc + j];
                if acc >= acc_cap {
                    acc = md.rem(acc);
                }
            }
            s.qw[i * kc + j] = md.rem(acc);
        }
    }
    s.hc_dq.clear();
    s.hc_dq.resize(n, 0);
    for t in 0..n {
        let mut acc = 0u64;
        for r in 0..n {
            acc += s.hc[r] * s.dq[r * n + t];
            if acc >= acc_cap {
                acc = md.rem(acc);
            }
        }
        s.hc_dq[t] = md.rem(acc);
    }
    s.lw.clear();
    s.lw.resize(kc, 0);
    for j in 0..kc {
        let mut acc = 0u64;
        for r in 0..n {
            acc += (s.hc_dq[r] + s.dl[r]) * s.gc[r * kc + j];
            if acc >= acc_cap {
                acc = md.rem(acc);
            }
        }
        s.lw[j] = md.rem(acc);
    }
    let inv2 = Fp::half(d);
    let mut cw = 0u64;
    for r in 0..n {
        cw += (md.rem(inv2.value() * s.hc_dq[r]) + s.dl[r]) * s.hc[r];
        if cw >= acc_cap {
            cw = md.rem(cw);
        }
    }
    cw = md.rem(cw);

    // Diagonalize Qw in place, carrying Lw through the same column ops.
    {
        let q = &mut s.qw;
        let r = &mut s.lw;
        for i in 0..kc {
            if q[i * kc + i] == 0 {
                if let Some(j) = (i + 1..kc).find(|&j| q[i * kc + j] != 0) {
                    let t = if md.rem(q[j * kc + j] + 2 * q[i * kc + j]) != 0 { 1 } else { 2 };
                    for x in 0..kc {
                        q[x * kc + i] = md.rem(q[x * kc + i] + t * q[x * kc + j]);
                    }
                    for x in 0..kc {
                        q[i * kc + x] = md.rem(q[i * kc + x] + t * q[j * kc + x]);
                    }
                    r[i] = md.rem(r[i] + t * r[j]);
                } else {
                    continue;
                }
            }
            let inv = Fp::from_u64(q[i * kc + i], d).inv();
            for j in i + 1..kc {
                let f = Fp::from_u64(q[i * kc + j], d) * inv;
                if f.is_zero() {
                    continue;
                }
                let t = (-f).value();
                for x in 0..kc {
                    q[x * kc + j] = md.rem(q[x * kc + j] + t * q[x * kc + i]);
                }
                for x in 0..kc {
                    q[j * kc + x] = md.rem(q[j * kc + x] + t * q[i * kc + x]);
                }
                r[j] = md.rem(r[j] + t * r[i]);
            }
        }
    }

    let mut acc = x2.amp.conj() * x1.amp * ExactPhase::omega_pow(d, cw as i64);
    for i in 0..kc {
        let a = inv2 * Fp::from_u64(s.qw[i * kc + i], d);
        let b = Fp::from_u64(s.lw[i], d);
        acc *= square_linear_sum(a, b).value(d);
        if acc.is_zero() {
            return acc;
        }
    }
    acc
}

/// `<s2|s1>` as an exact phase.
pub fn inner(s1: &StabilizerState, s2: &StabilizerState) -> ExactPhase {
    inner_x(&x_form(s1), &x_form(s2))
}
