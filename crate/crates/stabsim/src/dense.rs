//! Brute-force statevector simulation over (Z_d)^n, used as the ground
//! truth oracle for everything else in the crate.
//!
//! Indexing convention: qudit 0 is the most significant digit of the basis
//! index, so |x_0 x_1 ... x_{n-1}> sits at sum_i x_i d^{n-1-i}. The canonical
//! form code shares this convention.

use num_complex::Complex64;

use crate::{Error, Result};

/// Maximum number of amplitudes a dense expansion may allocate.
pub const DENSE_CAP: u128 = 1_000_000;

/// Dense complex square matrix (row-major), sized for single-qudit oracles.
#[derive(Clone, Debug)]
pub struct CMat {
    n: usize,
    a: Vec<Complex64>,
}

impl CMat {
    pub fn zeros(n: usize) -> Self {
        CMat { n, a: vec![Complex64::new(0.0, 0.0); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMat::zeros(n);
        for i in 0..n {
            m.a[i * n + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_diag(diag: &[Complex64]) -> Self {
        let mut m = CMat::zeros(diag.len());
        for (i, &v) in diag.iter().enumerate() {
            m.set(i, i, v);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.a[r * self.n + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Complex64) {
        self.a[r * self.n + c] = v;
    }

    pub fn mul(&self, other: &CMat) -> CMat {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = CMat::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let v = self.get(r, k);
                if v.norm_sqr() == 0.0 {
                    continue;
                }
                for c in 0..n {
                    let cur = out.get(r, c);
                    out.set(r, c, cur + v * other.get(k, c));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.n, v.len());
        (0..self.n).map(|r| (0..self.n).map(|c| self.get(r, c) * v[c]).sum()).collect()
    }

    pub fn dagger(&self) -> CMat {
        let mut out = CMat::zeros(self.n);
        for r in 0..self.n {
            for c in 0..self.n {
                out.set(c, r, self.get(r, c).conj());
            }
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> CMat {
        CMat { n: self.n, a: self.a.iter().map(|&v| v * s).collect() }
    }

    /// Max entrywise distance to another matrix.
    pub fn distance(&self, other: &CMat) -> f64 {
        assert_eq!(self.n, other.n);
        self.a.iter().zip(&other.a).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.mul(&self.dagger()).distance(&CMat::identity(self.n)) < tol
    }
}

fn omega(d: u64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / d as f64)
}

/// X |j> = |j+1 mod d>.
pub fn mat_x(d: u64) -> CMat {
    let n = d as usize;
    let mut m = CMat::zeros(n);
    for j in 0..n {
        m.set((j + 1) % n, j, Complex64::new(1.0, 0.0));
    }
    m
}

/// Z |j> = omega^j |j>.
pub fn mat_z(d: u64) -> CMat {
    let w = omega(d);
    CMat::from_diag(&(0..d).map(|j| w.powu(j as u32)).collect::<Vec<_>>())
}

/// P |j> = omega^{j(j-1)/2} |j>.
pub fn mat_p(d: u64) -> CMat {
    let w = omega(d);
    CMat::from_diag(
        &(0..d as i64)
            .map(|j| w.powi((j * (j - 1) / 2).rem_euclid(d as i64) as i32))
            .collect::<Vec<_>>(),
    )
}

/// H |j> = d^{-1/2} sum_k omega^{jk} |k>.
pub fn mat_h(d: u64) -> CMat {
    let n = d as usize;
    let w = omega(d);
    let s = 1.0 / (d as f64).sqrt();
    let mut m = CMat::zeros(n);
    for j in 0..n {
        for k in 0..n {
            m.set(k, j, w.powu((j * k % n) as u32) * s);
        }
    }
    m
}

/// Full complex statevector on n qudits of dimension d.
#[derive(Clone, Debug)]
pub struct DenseState {
    d: u64,
    n: usize,
    amps: Vec<Complex64>,
}

impl DenseState {
    pub fn check_cap(d: u64, n: usize) -> Result<usize> {
        let needed = (d as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
        if needed > DENSE_CAP {
            return Err(Error::CapExceeded { needed, cap: DENSE_CAP });
        }
        Ok(needed as usize)
    }

    pub fn basis(d: u64, n: usize, x: &[u64]) -> Result<Self> {
        assert_eq!(x.len(), n);
        let total = Self::check_cap(d, n)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); total];
        let idx = x.iter().fold(0usize, |acc, &v| acc * d as usize + (v % d) as usize);
        amps[idx] = Complex64::new(1.0, 0.0);
        Ok(DenseState { d, n, amps })
    }

    pub fn from_amplitudes(d: u64, n: usize, amps: Vec<Complex64>) -> Self {
        assert_eq!(amps.len(), (d as usize).pow(n as u32));
        DenseState { d, n, amps }
    }

    pub fn dim(&self) -> u64 {
        self.d
    }

    pub fn num_qudits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn inner(&self, other: &DenseState) -> Complex64 {
        assert_eq!(self.amps.len(), other.amps.len());
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn distance(&self, other: &DenseState) -> f64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    fn stride(&self, q: usize) -> usize {
        (self.d as usize).pow((self.n - 1 - q) as u32)
    }

    pub fn apply_single(&mut self, q: usize, m: &CMat) {
        assert!(q < self.n);
        assert_eq!(m.dim(), self.d as usize);
        let d = self.d as usize;
        let stride = self.stride(q);
        let period = stride * d;
        let mut scratch = vec![Complex64::new(0.0, 0.0); d];
        let mut block = 0;
        while block < self.amps.len() {
            for offset in 0..stride {
                for j in 0..d {
                    scratch[j] = self.amps[block + offset + j * stride];
                }
                for r in 0..d {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for c in 0..d {
                        acc += m.get(r, c) * scratch[c];
                    }
                    self.amps[block + offset + r * stride] = acc;
                }
            }
            block += period;
        }
    }

    /// CSUM with control c and target t: |a>_c |b>_t -> |a>_c |b + a*pow>_t.
    pub fn apply_csum_pow(&mut self, c: usize, t: usize, pow: i64) {
        assert!(c != t && c < self.n && t < self.n);
        let d = self.d as usize;
        let sc = self.stride(c);
        let st = self.stride(t);
        let shift = pow.rem_euclid(self.d as i64) as usize;
        let mut out = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for (idx, &amp) in self.amps.iter().enumerate() {
            let a = idx / sc % d;
            let b = idx / st % d;
            let b2 = (b + a * shift) % d;
            out[idx - b * st + b2 * st] = amp;
        }
        self.amps = out;
    }

    pub fn apply_csum(&mut self, c: usize, t: usize) {
        self.apply_csum_pow(c, t, 1);
    }

    /// Apply one circuit gate literally (T is the diagonal magic gate).
    /// MEASURE statements are ignored here; measurement statistics come
    /// from [`DenseState::exact_distribution`].
    pub fn apply_gate(&mut self, g: &crate::circuit::Gate) -> crate::Result<()> {
        use crate::circuit::Gate;
        let d = self.d;
        match *g {
            Gate::X { q, a } => {
                let m = mat_x(d);
                for _ in 0..a.rem_euclid(d as i64) {
                    self.apply_single(q, &m);
                }
            }
            Gate::Z { q, a } => {
                let m = mat_z(d);
                for _ in 0..a.rem_euclid(d as i64) {
                    self.apply_single(q, &m);
                }
            }
            Gate::P { q, a } => {
                let m = mat_p(d);
                for _ in 0..a.rem_euclid(d as i64) {
                    self.apply_single(q, &m);
                }
            }
            Gate::H { q } => self.apply_single(q, &mat_h(d)),
            Gate::Csum { control, target } => self.apply_csum(control, target),
            Gate::T { q } => {
                let m = crate::magic::magic_gate(d)?.dense_matrix();
                self.apply_single(q, &m);
            }
            Gate::Measure { .. } => {}
        }
        Ok(())
    }

    /// Joint Born distribution over the listed qudits (mixed-radix order).
    pub fn exact_distribution(&self, qudits: &[usize]) -> Vec<f64> {
        let d = self.d as usize;
        let cells = d.pow(qudits.len() as u32);
        let mut probs = vec![0.0; cells];
        for (idx, amp) in self.amps.iter().enumerate() {
            let mut cell = 0;
            for &q in qudits {
                cell = cell * d + idx / self.stride(q) % d;
            }
            probs[cell] += amp.norm_sqr();
        }
        probs
    }
}

/// Run a circuit's unitary part on |0...0> (measurements skipped).
pub fn run_circuit(c: &crate::circuit::Circuit) -> crate::Result<DenseState> {
    let mut s = DenseState::basis(c.d, c.n, &vec![0; c.n])?;
    for g in &c.gates {
        s.apply_gate(g)?;
    }
    Ok(s)
}

/// Exact output distribution over the circuit's MEASURE statements, in
/// statement order. Faithful for circuits whose measurements are terminal.
pub fn circuit_distribution(c: &crate::circuit::Circuit) -> crate::Result<Vec<f64>> {
    let s = run_circuit(c)?;
    let measured: Vec<usize> = c
        .gates
        .iter()
        .filter_map(|g| match g {
            crate::circuit::Gate::Measure { q } => Some(*q),
            _ => None,
        })
        .collect();
    Ok(s.exact_distribution(&measured))
}
