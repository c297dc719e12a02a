//! Exact arithmetic over Z_d for odd prime `d`: scalars, Legendre symbols,
//! exact phases in the cyclotomic group of order `8d^2`, and closed-form
//! quadratic Gauss sums.
//!
//! Everything downstream (canonical forms, inner products, magic-state
//! overlaps) reduces to products of the values constructed here, so these
//! are kept exact: a phase is an integer exponent of `e^{2*pi*i/(8d^2)}`
//! together with a half-integer power of `d`. The order `8d^2` is the
//! smallest that simultaneously contains `omega = e^{2*pi*i/d}`,
//! `tau = omega^{(d+1)/2}`, the ninth roots needed by the `d = 3` T gate,
//! the imaginary unit from Gauss sums, and `-1`.

use num_complex::Complex64;

use crate::{Error, Result};

/// Trial-division primality check for the small odd moduli used here.
pub fn is_odd_prime(d: u64) -> bool {
    // Fast path for the dimensions that appear in hot per-scalar checks.
    if matches!(d, 3 | 5 | 7 | 11 | 13) {
        return true;
    }
    if d < 3 || d % 2 == 0 {
        return false;
    }
    let mut f = 3;
    while f * f <= d {
        if d % f == 0 {
            return false;
        }
        f += 2;
    }
    true
}

/// Validate a qudit dimension, returning it on success.
pub fn check_dimension(d: u64) -> Result<u64> {
    if is_odd_prime(d) {
        Ok(d)
    } else {
        Err(Error::NonPrimeDimension(d))
    }
}

/// Division-free reduction mod d for operands below 2^32 (multiply-high
/// trick; exact in that range for our small prime moduli).
#[derive(Copy, Clone, Debug)]
pub(crate) struct FastMod {
    d: u64,
    magic: u64,
}

impl FastMod {
    #[inline]
    pub(crate) fn new(d: u64) -> Self {
        debug_assert!(d > 1 && d < (1 << 32));
        FastMod { d, magic: u64::MAX / d + 1 }
    }

    /// x mod d for x < 2^32.
    #[inline]
    pub(crate) fn rem(&self, x: u64) -> u64 {
        debug_assert!(x < (1 << 32));
        let low = self.magic.wrapping_mul(x);
        ((low as u128 * self.d as u128) >> 64) as u64
    }
}

/// An element of Z_d, `d` an odd prime.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct Fp {
    v: u64,
    d: u64,
}

impl Fp {
    pub fn new(v: i64, d: u64) -> Self {
        debug_assert!(is_odd_prime(d), "modulus {d} must be an odd prime");
        Fp { v: v.rem_euclid(d as i64) as u64, d }
    }

    pub fn from_u64(v: u64, d: u64) -> Self {
        debug_assert!(is_odd_prime(d), "modulus {d} must be an odd prime");
        Fp { v: v % d, d }
    }

    pub fn zero(d: u64) -> Self {
        Fp::from_u64(0, d)
    }

    pub fn one(d: u64) -> Self {
        Fp::from_u64(1, d)
    }

    #[inline]
    pub fn value(self) -> u64 {
        self.v
    }

    #[inline]
    pub fn modulus(self) -> u64 {
        self.d
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.v == 0
    }

    pub fn pow(self, mut e: u64) -> Self {
        let mut base = self.v;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % self.d;
            }
            base = base * base % self.d;
            e >>= 1;
        }
        Fp { v: acc, d: self.d }
    }

    /// Multiplicative inverse; errors on zero.
    pub fn inverse(self) -> Result<Self> {
        if self.v == 0 {
            return Err(Error::ZeroInverse(self.d));
        }
        // Fermat: a^(d-2) for prime d.
        Ok(self.pow(self.d - 2))
    }

    /// Inverse of an element known to be nonzero.
    pub fn inv(self) -> Self {
        self.inverse().expect("inverse of zero")
    }

    /// Legendre symbol: +1 for nonzero squares, -1 for non-squares, 0 for 0.
    pub fn legendre(self) -> i32 {
        if self.v == 0 {
            return 0;
        }
        let e = self.pow((self.d - 1) / 2).v;
        if e == 1 {
            1
        } else {
            -1
        }
    }

    /// The inverse of 2 mod d, i.e. (d+1)/2.
    pub fn half(d: u64) -> Self {
        Fp::from_u64((d + 1) / 2, d)
    }
}

impl std::ops::Add for Fp {
    type Output = Fp;
    #[inline]
    fn add(self, rhs: Fp) -> Fp {
        debug_assert_eq!(self.d, rhs.d);
        Fp { v: (self.v + rhs.v) % self.d, d: self.d }
    }
}

impl std::ops::Sub for Fp {
    type Output = Fp;
    #[inline]
    fn sub(self, rhs: Fp) -> Fp {
        debug_assert_eq!(self.d, rhs.d);
        Fp { v: (self.v + self.d - rhs.v) % self.d, d: self.d }
    }
}

impl std::ops::Mul for Fp {
    type Output = Fp;
    #[inline]
    fn mul(self, rhs: Fp) -> Fp {
        debug_assert_eq!(self.d, rhs.d);
        Fp { v: self.v * rhs.v % self.d, d: self.d }
    }
}

impl std::ops::Neg for Fp {
    type Output = Fp;
    #[inline]
    fn neg(self) -> Fp {
        Fp { v: (self.d - self.v) % self.d, d: self.d }
    }
}

impl std::fmt::Display for Fp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.v)
    }
}

/// An exact complex number of the form `d^{s/2} * e^{2*pi*i*r/(8d^2)}`, or 0.
///
/// Closed under multiplication and conjugation. Stabilizer-state amplitudes,
/// Gauss sums and inner products all land in this set, so equality checks on
/// them are exact integer comparisons.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct ExactPhase {
    d: u64,
    /// Exponent of the primitive root e^{2*pi*i/(8d^2)}, reduced mod 8d^2.
    root: u64,
    /// Half-integer power of d: the magnitude is d^(half_d/2).
    half_d: i64,
    zero: bool,
}

impl ExactPhase {
    fn order(d: u64) -> u64 {
        8 * d * d
    }

    pub fn one(d: u64) -> Self {
        ExactPhase { d, root: 0, half_d: 0, zero: false }
    }

    pub fn zero(d: u64) -> Self {
        ExactPhase { d, root: 0, half_d: 0, zero: true }
    }

    /// `e^{2*pi*i*e/(8d^2)}`.
    pub fn primitive_root_pow(d: u64, e: i64) -> Self {
        let m = Self::order(d) as i64;
        ExactPhase { d, root: e.rem_euclid(m) as u64, half_d: 0, zero: false }
    }

    /// `omega^e` with `omega = e^{2*pi*i/d}`.
    pub fn omega_pow(d: u64, e: i64) -> Self {
        Self::primitive_root_pow(d, e.rem_euclid(d as i64) * (8 * d) as i64)
    }

    pub fn omega_fp(a: Fp) -> Self {
        Self::omega_pow(a.modulus(), a.value() as i64)
    }

    /// `tau^e` with `tau = e^{(d+1)*pi*i/d} = omega^{(d+1)/2}`.
    pub fn tau_pow(d: u64, e: i64) -> Self {
        let half = ((d + 1) / 2) as i64;
        Self::omega_pow(d, e.rem_euclid(d as i64) * half)
    }

    /// `i^e`.
    pub fn i_pow(d: u64, e: i64) -> Self {
        Self::primitive_root_pow(d, e.rem_euclid(4) * (2 * d * d) as i64)
    }

    pub fn minus_one(d: u64) -> Self {
        Self::i_pow(d, 2)
    }

    /// `d^{s/2}` as a phaseless magnitude.
    pub fn sqrt_d_pow(d: u64, s: i64) -> Self {
        ExactPhase { d, root: 0, half_d: s, zero: false }
    }

    /// `e^{2*pi*i*num/den}` for den dividing 8d^2.
    pub fn unit_root(d: u64, num: i64, den: u64) -> Self {
        let m = Self::order(d);
        assert_eq!(m % den, 0, "denominator {den} does not divide {m}");
        Self::primitive_root_pow(d, num * (m / den) as i64)
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.zero
    }

    pub fn modulus(self) -> u64 {
        self.d
    }

    /// Magnitude exponent s with |phase| = d^{s/2}; None for zero.
    pub fn magnitude_exponent(self) -> Option<i64> {
        if self.zero {
            None
        } else {
            Some(self.half_d)
        }
    }

    pub fn conj(self) -> Self {
        if self.zero {
            return self;
        }
        let m = Self::order(self.d);
        ExactPhase { root: (m - self.root) % m, ..self }
    }

    /// Scale by d^k (an integer power, i.e. half_d += 2k).
    pub fn scale_d_pow(self, k: i64) -> Self {
        if self.zero {
            return self;
        }
        ExactPhase { half_d: self.half_d + 2 * k, ..self }
    }

    pub fn to_complex(self) -> Complex64 {
        if self.zero {
            return Complex64::new(0.0, 0.0);
        }
        let mag = (self.d as f64).powf(self.half_d as f64 / 2.0);
        let arg = 2.0 * std::f64::consts::PI * self.root as f64 / Self::order(self.d) as f64;
        Complex64::from_polar(mag, arg)
    }
}

impl std::ops::Mul for ExactPhase {
    type Output = ExactPhase;
    fn mul(self, rhs: ExactPhase) -> ExactPhase {
        assert_eq!(self.d, rhs.d, "phase moduli differ");
        if self.zero || rhs.zero {
            return ExactPhase::zero(self.d);
        }
        ExactPhase {
            d: self.d,
            root: (self.root + rhs.root) % Self::order(self.d),
            half_d: self.half_d + rhs.half_d,
            zero: false,
        }
    }
}

impl std::ops::MulAssign for ExactPhase {
    fn mul_assign(&mut self, rhs: ExactPhase) {
        *self = *self * rhs;
    }
}

/// `sum_n omega^{c n^2}` over n in Z_d for nonzero c:
/// `legendre(c) * sqrt(d)` for d = 1 mod 4, times `i` for d = 3 mod 4.
pub fn weighted_square_sum(c: Fp) -> ExactPhase {
    let d = c.modulus();
    assert!(!c.is_zero(), "square-sum coefficient must be nonzero");
    let mut p = ExactPhase::sqrt_d_pow(d, 1);
    if c.legendre() == -1 {
        p *= ExactPhase::minus_one(d);
    }
    if d % 4 == 3 {
        p *= ExactPhase::i_pow(d, 1);
    }
    p
}

/// Like [`weighted_square_sum`] but without the `sqrt(d)` magnitude; this is
/// the unit-modulus factor `legendre(c) * (1 or i)`.
pub fn unit_gauss_factor(c: Fp) -> ExactPhase {
    weighted_square_sum(c) * ExactPhase::sqrt_d_pow(c.modulus(), -1)
}

/// Result of a quadratic Gauss sum: either a closed-form phase of magnitude
/// `sqrt(d)`, or the degenerate `f = 0` branch that collapses to a Kronecker
/// delta (`d` if the linear coefficient vanishes, else 0).
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum QuadGaussSum {
    Closed(ExactPhase),
    Kronecker { arg: Fp },
}

impl QuadGaussSum {
    pub fn is_kronecker(&self) -> bool {
        matches!(self, QuadGaussSum::Kronecker { .. })
    }

    /// The value of the sum as an exact phase (0 or d in the Kronecker case).
    pub fn value(&self, d: u64) -> ExactPhase {
        match self {
            QuadGaussSum::Closed(p) => *p,
            QuadGaussSum::Kronecker { arg } => {
                if arg.is_zero() {
                    ExactPhase::sqrt_d_pow(d, 2)
                } else {
                    ExactPhase::zero(d)
                }
            }
        }
    }
}

/// `sum_{j in Z_d} omega^{f j(j-1)/2 + g j}`, evaluated in closed form.
///
/// For f != 0, completing the square gives
/// `omega^{-inv2 f (invf (g) - inv2)^2} * legendre(inv2 f) * sqrt(d) * (1|i)`;
/// for f = 0 the sum is `d * delta_{g,0}`.
pub fn quadratic_gauss_sum(f: Fp, g: Fp) -> QuadGaussSum {
    let d = f.modulus();
    debug_assert_eq!(d, g.modulus());
    if f.is_zero() {
        return QuadGaussSum::Kronecker { arg: g };
    }
    let inv2 = Fp::half(d);
    let invf = f.inv();
    // f j(j-1)/2 + g j = inv2 f j^2 + (g - inv2 f) j; complete the square.
    let shift = invf * g - inv2;
    let expo = -(inv2 * f * shift * shift);
    let phase = ExactPhase::omega_fp(expo) * weighted_square_sum(inv2 * f);
    QuadGaussSum::Closed(phase)
}

/// `sum_{s in Z_d} omega^{a s^2 + b s}` with the quadratic coefficient given
/// directly (not in the j(j-1)/2 normalization). Returns the same enum.
pub fn square_linear_sum(a: Fp, b: Fp) -> QuadGaussSum {
    let d = a.modulus();
    if a.is_zero() {
        return QuadGaussSum::Kronecker { arg: b };
    }
    let inva = a.inv();
    let inv2 = Fp::half(d);
    // a(s + inv2 inva b)^2 = a s^2 + b s + inv4 inva b^2.
    let inv4 = inv2 * inv2;
    let expo = -(inv4 * inva * b * b);
    QuadGaussSum::Closed(ExactPhase::omega_fp(expo) * weighted_square_sum(a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Literal d-term evaluation of `sum_j omega^{f j(j-1)/2 + g j}`.
    pub(crate) fn brute_gauss(f: i64, g: i64, d: u64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..d as i64 {
            let e = (f * j * (j - 1) / 2 + g * j) as f64;
            acc += Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * e / d as f64);
        }
        acc
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(Fp::new(1, 5).inverse().unwrap().value(), 1);
        assert_eq!(Fp::new(2, 5).inverse().unwrap().value(), 3);
        assert_eq!(Fp::new(3, 7).inverse().unwrap().value(), 5);
        assert!(matches!(Fp::new(0, 5).inverse(), Err(Error::ZeroInverse(5))));
    }

    #[test]
    fn legendre_examples() {
        assert_eq!(Fp::new(0, 5).legendre(), 0);
        assert_eq!(Fp::new(4, 5).legendre(), 1);
        assert_eq!(Fp::new(2, 5).legendre(), -1);
    }

    #[test]
    fn primality_check() {
        for d in [3, 5, 7, 11, 13, 97] {
            assert!(is_odd_prime(d));
        }
        for d in [0, 1, 2, 4, 9, 15, 49] {
            assert!(!is_odd_prime(d));
        }
        assert!(matches!(check_dimension(4), Err(Error::NonPrimeDimension(4))));
    }

    #[test]
    fn gauss_sum_kronecker_branch() {
        let d = 5;
        let s = quadratic_gauss_sum(Fp::zero(d), Fp::zero(d));
        assert!(s.is_kronecker());
        let v = s.value(d).to_complex();
        assert!((v.re - 5.0).abs() < 1e-12 && v.im.abs() < 1e-12);
        let s = quadratic_gauss_sum(Fp::zero(d), Fp::new(2, d));
        assert!(s.value(d).is_zero());
    }

    #[test]
    fn gauss_sum_pure_squares() {
        // sum_n e^{2 pi i n^2/5} = sqrt(5): f = 2, g = 1 gives exponent n^2.
        let v = quadratic_gauss_sum(Fp::new(2, 5), Fp::new(1, 5)).value(5).to_complex();
        assert!((v.re - 5f64.sqrt()).abs() < 1e-12 && v.im.abs() < 1e-12);
        // sum_n e^{2 pi i n^2/3} = i sqrt(3).
        let v = quadratic_gauss_sum(Fp::new(2, 3), Fp::new(1, 3)).value(3).to_complex();
        assert!(v.re.abs() < 1e-12 && (v.im - 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn gauss_sum_matches_brute_force_all_small_d() {
        for d in [3u64, 5, 7, 11, 13] {
            for f in 0..d {
                for g in 0..d {
                    let closed =
                        quadratic_gauss_sum(Fp::from_u64(f, d), Fp::from_u64(g, d)).value(d);
                    let brute = brute_gauss(f as i64, g as i64, d);
                    let diff = (closed.to_complex() - brute).norm();
                    assert!(diff < 1e-12, "gauss sum mismatch d={d} f={f} g={g}: {diff:.3e}");
                }
            }
        }
    }

    #[test]
    fn square_linear_sum_matches_brute_force() {
        for d in [3u64, 5, 7] {
            for a in 0..d {
                for b in 0..d {
                    let closed = square_linear_sum(Fp::from_u64(a, d), Fp::from_u64(b, d));
                    let mut brute = Complex64::new(0.0, 0.0);
                    for s in 0..d as i64 {
                        let e = (a as i64 * s * s + b as i64 * s) as f64;
                        brute +=
                            Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * e / d as f64);
                    }
                    let diff = (closed.value(d).to_complex() - brute).norm();
                    assert!(diff < 1e-12, "d={d} a={a} b={b}: {diff:.3e}");
                }
            }
        }
    }

    #[test]
    fn exact_phase_embeddings() {
        // tau = e^{(d+1) pi i / d}.
        for d in [3u64, 5, 7] {
            let tau = ExactPhase::tau_pow(d, 1).to_complex();
            let want =
                Complex64::from_polar(1.0, (d as f64 + 1.0) * std::f64::consts::PI / d as f64);
            assert!((tau - want).norm() < 1e-12);
        }
        let xi = ExactPhase::unit_root(3, 1, 9).to_complex();
        let want = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 9.0);
        assert!((xi - want).norm() < 1e-12);
        let i = ExactPhase::i_pow(7, 1).to_complex();
        assert!((i - Complex64::new(0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn large_magnitude_conversion_is_accurate() {
        // Half-integer d-power magnitudes stay good to 1e-12 relative error
        // across |s| <= 64.
        for d in [3u64, 13] {
            for s in (-64..=64).step_by(8) {
                let p = ExactPhase::sqrt_d_pow(d, s) * ExactPhase::primitive_root_pow(d, 5);
                let want = (d as f64).powf(s as f64 / 2.0);
                let got = p.to_complex().norm();
                assert!(((got - want) / want).abs() < 1e-12, "d={d} s={s}");
            }
        }
    }

    proptest! {
        #[test]
        fn legendre_is_multiplicative(a in 1u64..13, b in 1u64..13) {
            let d = 13;
            let fa = Fp::from_u64(a, d);
            let fb = Fp::from_u64(b, d);
            prop_assert_eq!(fa.legendre() * fb.legendre(), (fa * fb).legendre());
        }

        #[test]
        fn inverse_is_involutive(a in 1u64..11, d_idx in 0usize..3) {
            let d = [3u64, 7, 11][d_idx];
            if a % d != 0 {
                let fa = Fp::from_u64(a, d);
                prop_assert_eq!(fa.inv().inv(), fa);
            }
        }

        #[test]
        fn phase_mul_is_complex_mul(
            r1 in 0i64..72, s1 in -4i64..4, r2 in 0i64..72, s2 in -4i64..4,
        ) {
            let d = 3;
            let p1 = ExactPhase::primitive_root_pow(d, r1) * ExactPhase::sqrt_d_pow(d, s1);
            let p2 = ExactPhase::primitive_root_pow(d, r2) * ExactPhase::sqrt_d_pow(d, s2);
            let lhs = (p1 * p2).to_complex();
            let rhs = p1.to_complex() * p2.to_complex();
            prop_assert!((lhs - rhs).norm() < 1e-10 * (1.0 + rhs.norm()));
        }

        #[test]
        fn phase_mul_associative_commutative(
            ra in 0i64..200, rb in 0i64..200, rc in 0i64..200,
        ) {
            let d = 5;
            let a = ExactPhase::primitive_root_pow(d, ra);
            let b = ExactPhase::primitive_root_pow(d, rb) * ExactPhase::sqrt_d_pow(d, 1);
            let c = ExactPhase::primitive_root_pow(d, rc);
            prop_assert_eq!((a * b) * c, a * (b * c));
            prop_assert_eq!(a * b, b * a);
        }
    }
}
