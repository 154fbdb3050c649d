//! Trigonometric-polynomial scalars on the torus of basic coordinates.
//!
//! A basic function is stored by its finitely many Fourier coefficients
//! against the orthonormal characters `e_m(u) = exp(2 pi i <m, u>)`. All
//! arithmetic is exact on the coefficient level: products are full
//! convolutions (the support of `f * g` is the Minkowski sum of the supports),
//! and nothing is truncated until an operator is assembled on a finite basis.

use crate::scalar::{two_pi, Scalar, C};
use num_complex::Complex;
use std::collections::BTreeMap;
use std::fmt;

/// Hard cap on the number of basic coordinates a model may use.
pub const MAX_DIMS: usize = 4;

/// A single Fourier mode, i.e. an integer frequency vector.
///
/// Always stored padded to [`MAX_DIMS`]; entries past the active dimension
/// count of the owning [`FourierScalar`] stay zero.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Mode(pub [i32; MAX_DIMS]);

impl Mode {
    /// The zero frequency.
    pub fn zero() -> Self {
        Mode([0; MAX_DIMS])
    }

    /// Build from the leading entries, padding with zeros.
    pub fn from_slice(m: &[i32]) -> Self {
        let mut a = [0i32; MAX_DIMS];
        a[..m.len()].copy_from_slice(m);
        Mode(a)
    }

    /// Component-wise negation.
    pub fn neg(&self) -> Self {
        let mut a = self.0;
        for x in &mut a {
            *x = -*x;
        }
        Mode(a)
    }

    /// Component-wise sum.
    pub fn add(&self, other: &Mode) -> Self {
        let mut a = self.0;
        for (x, y) in a.iter_mut().zip(other.0.iter()) {
            *x += *y;
        }
        Mode(a)
    }

    /// Largest absolute frequency over all axes.
    pub fn sup_norm(&self) -> i32 {
        self.0.iter().map(|x| x.abs()).max().unwrap_or(0)
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// Finite Fourier sum `sum_m c_m e_m` over `dims` torus coordinates.
///
/// Zero coefficients are never stored, so `terms.is_empty()` is the canonical
/// zero test.
#[derive(Clone, PartialEq, Debug)]
pub struct FourierScalar<S: Scalar = f64> {
    dims: u8,
    terms: BTreeMap<Mode, C<S>>,
}

impl<S: Scalar> FourierScalar<S> {
    /// The zero function.
    pub fn zero(dims: usize) -> Self {
        assert!(dims <= MAX_DIMS, "at most {MAX_DIMS} coordinates supported");
        FourierScalar { dims: dims as u8, terms: BTreeMap::new() }
    }

    /// A constant function.
    pub fn constant(dims: usize, c: C<S>) -> Self {
        let mut f = Self::zero(dims);
        f.set(Mode::zero(), c);
        f
    }

    /// The real constant `x`.
    pub fn constant_re(dims: usize, x: S) -> Self {
        Self::constant(dims, Complex::new(x, S::zero()))
    }

    /// A single character `c * e_m`.
    pub fn monomial(dims: usize, mode: Mode, c: C<S>) -> Self {
        let mut f = Self::zero(dims);
        f.set(mode, c);
        f
    }

    /// Number of torus coordinates the function lives on.
    pub fn dims(&self) -> usize {
        self.dims as usize
    }

    /// Coefficient of `e_m` (zero when absent).
    pub fn coeff(&self, mode: &Mode) -> C<S> {
        self.terms.get(mode).copied().unwrap_or_else(|| Complex::new(S::zero(), S::zero()))
    }

    /// Overwrite one coefficient, pruning exact zeros.
    pub fn set(&mut self, mode: Mode, c: C<S>) {
        if c.re == S::zero() && c.im == S::zero() {
            self.terms.remove(&mode);
        } else {
            self.terms.insert(mode, c);
        }
    }

    /// Add `c` to one coefficient.
    pub fn add_term(&mut self, mode: Mode, c: C<S>) {
        let cur = self.coeff(&mode);
        self.set(mode, cur + c);
    }

    /// Iterate over the stored `(mode, coefficient)` pairs in mode order.
    pub fn iter(&self) -> impl Iterator<Item = (&Mode, &C<S>)> {
        self.terms.iter()
    }

    /// True when no coefficient is stored.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of stored terms.
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Largest `|m_j|` over the support, 0 for the zero function.
    pub fn bandwidth(&self) -> i32 {
        self.terms.keys().map(Mode::sup_norm).max().unwrap_or(0)
    }

    /// Pointwise sum.
    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.dims, other.dims);
        let mut out = self.clone();
        for (m, c) in other.iter() {
            out.add_term(*m, *c);
        }
        out
    }

    /// Pointwise difference.
    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in other.iter() {
            out.add_term(*m, -*c);
        }
        out
    }

    /// Multiply every coefficient by `c`.
    pub fn scale(&self, c: C<S>) -> Self {
        if c.re == S::zero() && c.im == S::zero() {
            return Self::zero(self.dims());
        }
        let mut out = Self::zero(self.dims());
        for (m, a) in self.iter() {
            out.set(*m, *a * c);
        }
        out
    }

    /// Multiply by a real scalar.
    pub fn scale_re(&self, x: S) -> Self {
        self.scale(Complex::new(x, S::zero()))
    }

    /// Pointwise product, i.e. exact convolution of coefficients.
    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.dims, other.dims);
        let mut out = Self::zero(self.dims());
        for (m1, c1) in self.iter() {
            for (m2, c2) in other.iter() {
                out.add_term(m1.add(m2), *c1 * *c2);
            }
        }
        out
    }

    /// Partial derivative along coordinate `axis`: multiplies `c_m` by
    /// `2 pi i m_axis`.
    pub fn differentiate(&self, axis: usize) -> Self {
        assert!(axis < self.dims());
        let tp = two_pi::<S>();
        let mut out = Self::zero(self.dims());
        for (m, c) in self.iter() {
            let factor = Complex::new(S::zero(), tp * S::from_i32(m.0[axis]).unwrap());
            out.set(*m, *c * factor);
        }
        out
    }

    /// Complex conjugate of the function: `c_m -> conj(c_{-m})`.
    pub fn conjugate(&self) -> Self {
        let mut out = Self::zero(self.dims());
        for (m, c) in self.iter() {
            out.set(m.neg(), c.conj());
        }
        out
    }

    /// Whether the function is real valued up to `tol` on coefficients.
    pub fn is_real(&self, tol: S) -> bool {
        for (m, c) in self.iter() {
            let mirror = self.coeff(&m.neg()).conj();
            if (*c - mirror).norm() > tol {
                return false;
            }
        }
        true
    }

    /// `L^2` pairing against the unit-volume torus, conjugate linear in
    /// `self`: `sum_m conj(a_m) b_m`.
    pub fn inner(&self, other: &Self) -> C<S> {
        let mut acc = Complex::new(S::zero(), S::zero());
        for (m, c) in self.iter() {
            acc = acc + c.conj() * other.coeff(m);
        }
        acc
    }

    /// `L^2` norm squared.
    pub fn norm_sq(&self) -> S {
        self.terms.values().map(|c| c.norm_sqr()).fold(S::zero(), |a, b| a + b)
    }

    /// Sum of coefficient magnitudes.
    pub fn l1_norm(&self) -> S {
        self.terms.values().map(|c| c.norm()).fold(S::zero(), |a, b| a + b)
    }

    /// Drop every mode with `sup_norm > bandwidth`; reports whether anything
    /// was dropped.
    pub fn truncate(&self, bandwidth: i32) -> (Self, bool) {
        let mut out = Self::zero(self.dims());
        let mut dropped = false;
        for (m, c) in self.iter() {
            if m.sup_norm() <= bandwidth {
                out.set(*m, *c);
            } else {
                dropped = true;
            }
        }
        (out, dropped)
    }

    /// `exp(self)` as a truncated power series, cut to `bandwidth` at the end.
    ///
    /// The series runs until the l1 mass of a term falls below `1e-18` of the
    /// accumulated sum (or 60 terms). With the small deformation amplitudes
    /// used by the callers the dropped tail is far below solver tolerances.
    pub fn exp_truncated(&self, bandwidth: i32) -> Self {
        let mut sum = Self::constant_re(self.dims(), S::one());
        let mut term = Self::constant_re(self.dims(), S::one());
        for k in 1..=60u32 {
            term = term.mul(self).scale_re(S::one() / S::from_u32(k).unwrap());
            sum = sum.add(&term);
            let tiny = S::lit(1e-18) * sum.l1_norm().max(S::one());
            if term.l1_norm() < tiny {
                break;
            }
        }
        sum.truncate(bandwidth).0
    }
}

impl<S: Scalar> fmt::Display for FourierScalar<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.iter() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({:.6}{:+.6}i)e{m}", c.re, c.im)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn convolution_is_exact_minkowski_sum() {
        let mut f: FourierScalar = FourierScalar::zero(2);
        f.set(Mode::from_slice(&[1, 0]), c(1.0, 0.0));
        f.set(Mode::from_slice(&[0, 2]), c(0.0, 1.0));
        let mut g: FourierScalar = FourierScalar::zero(2);
        g.set(Mode::from_slice(&[-1, 0]), c(2.0, 0.0));
        let p = f.mul(&g);
        assert_eq!(p.coeff(&Mode::zero()), c(2.0, 0.0));
        assert_eq!(p.coeff(&Mode::from_slice(&[-1, 2])), c(0.0, 2.0));
        assert_eq!(p.term_count(), 2);
    }

    #[test]
    fn differentiate_multiplies_by_frequency() {
        let f: FourierScalar =
            FourierScalar::monomial(1, Mode::from_slice(&[3]), c(1.0, 0.0));
        let df = f.differentiate(0);
        let expect = 2.0 * std::f64::consts::PI * 3.0;
        let got = df.coeff(&Mode::from_slice(&[3]));
        assert!((got - c(0.0, expect)).norm() < 1e-15);
    }

    #[test]
    fn conjugate_and_realness() {
        // cos(2 pi t) = (e_1 + e_{-1})/2 is real.
        let mut f: FourierScalar = FourierScalar::zero(1);
        f.set(Mode::from_slice(&[1]), c(0.5, 0.0));
        f.set(Mode::from_slice(&[-1]), c(0.5, 0.0));
        assert!(f.is_real(0.0));
        assert_eq!(f.conjugate(), f);
        // sin needs the antisymmetric imaginary pair.
        let mut s: FourierScalar = FourierScalar::zero(1);
        s.set(Mode::from_slice(&[1]), c(0.0, -0.5));
        s.set(Mode::from_slice(&[-1]), c(0.0, 0.5));
        assert!(s.is_real(0.0));
        // e_1 alone is not real.
        let e1: FourierScalar =
            FourierScalar::monomial(1, Mode::from_slice(&[1]), c(1.0, 0.0));
        assert!(!e1.is_real(1e-12));
    }

    #[test]
    fn zero_terms_are_pruned() {
        let mut f: FourierScalar = FourierScalar::zero(1);
        f.set(Mode::from_slice(&[1]), c(1.0, 0.0));
        f.add_term(Mode::from_slice(&[1]), c(-1.0, 0.0));
        assert!(f.is_zero());
        assert_eq!(f.term_count(), 0);
    }

    #[test]
    fn exp_of_zero_is_one() {
        let f: FourierScalar = FourierScalar::zero(1);
        let e = f.exp_truncated(4);
        assert_eq!(e.coeff(&Mode::zero()), c(1.0, 0.0));
        assert_eq!(e.term_count(), 1);
    }

    #[test]
    fn exp_matches_pointwise_value() {
        // f = 0.3 cos(2 pi t); check exp(f)(0) = e^{0.3} via coefficient sum.
        let mut f: FourierScalar = FourierScalar::zero(1);
        f.set(Mode::from_slice(&[1]), c(0.15, 0.0));
        f.set(Mode::from_slice(&[-1]), c(0.15, 0.0));
        let e = f.exp_truncated(40);
        let at_zero: Complex64 = e.iter().map(|(_, c)| *c).sum();
        assert!((at_zero.re - 0.3f64.exp()).abs() < 1e-12);
        assert!(at_zero.im.abs() < 1e-15);
    }
}
