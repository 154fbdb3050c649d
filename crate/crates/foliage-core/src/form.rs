//! Basic differential forms with trigonometric-polynomial coefficients.
//!
//! A form is a finite sum `sum_w f_w(u) w` over canonical coframe words `w`
//! with [`FourierScalar`] coefficients. The unitary coframe is orthonormal,
//! so the `L^2` pairing splits over words and modes.

use crate::fourier::FourierScalar;
use crate::scalar::{inv_sqrt2, Scalar, C};
use crate::word::{CoframeWord, Letter, RealWord};
use num_complex::Complex;
use std::collections::BTreeMap;
use std::fmt;

/// A basic form on a model with complex codimension `n` whose coefficients
/// depend on `dims` torus coordinates.
#[derive(Clone, PartialEq, Debug)]
pub struct BasicForm<S: Scalar = f64> {
    n: usize,
    dims: usize,
    terms: BTreeMap<CoframeWord, FourierScalar<S>>,
}

impl<S: Scalar> BasicForm<S> {
    /// The zero form.
    pub fn zero(n: usize, dims: usize) -> Self {
        BasicForm { n, dims, terms: BTreeMap::new() }
    }

    /// The constant function 1.
    pub fn one(n: usize, dims: usize) -> Self {
        Self::from_scalar(n, FourierScalar::constant_re(dims, S::one()))
    }

    /// Degree-0 form from a scalar function.
    pub fn from_scalar(n: usize, f: FourierScalar<S>) -> Self {
        let dims = f.dims();
        let mut out = Self::zero(n, dims);
        out.set_word(CoframeWord::empty(), f);
        out
    }

    /// A single word with a function coefficient.
    pub fn monomial(n: usize, word: CoframeWord, f: FourierScalar<S>) -> Self {
        let dims = f.dims();
        let mut out = Self::zero(n, dims);
        out.set_word(word, f);
        out
    }

    /// A single word with a constant complex coefficient.
    pub fn word_const(n: usize, dims: usize, word: CoframeWord, c: C<S>) -> Self {
        Self::monomial(n, word, FourierScalar::constant(dims, c))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    /// Coefficient function of a word (zero when absent).
    pub fn coeff(&self, word: &CoframeWord) -> FourierScalar<S> {
        self.terms.get(word).cloned().unwrap_or_else(|| FourierScalar::zero(self.dims))
    }

    /// Overwrite one word coefficient, pruning zero functions.
    pub fn set_word(&mut self, word: CoframeWord, f: FourierScalar<S>) {
        if f.is_zero() {
            self.terms.remove(&word);
        } else {
            debug_assert_eq!(f.dims(), self.dims);
            self.terms.insert(word, f);
        }
    }

    /// Add to one word coefficient.
    pub fn add_word(&mut self, word: CoframeWord, f: &FourierScalar<S>) {
        let cur = self.coeff(&word);
        self.set_word(word, cur.add(f));
    }

    /// Stored `(word, coefficient)` pairs in canonical word order.
    pub fn terms(&self) -> impl Iterator<Item = (&CoframeWord, &FourierScalar<S>)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest Fourier bandwidth over all coefficients.
    pub fn bandwidth(&self) -> i32 {
        self.terms.values().map(FourierScalar::bandwidth).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!((self.n, self.dims), (other.n, other.dims));
        let mut out = self.clone();
        for (w, f) in other.terms() {
            out.add_word(*w, f);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Complex::new(-S::one(), S::zero())))
    }

    pub fn scale(&self, c: C<S>) -> Self {
        let mut out = Self::zero(self.n, self.dims);
        for (w, f) in self.terms() {
            out.set_word(*w, f.scale(c));
        }
        out
    }

    pub fn scale_re(&self, x: S) -> Self {
        self.scale(Complex::new(x, S::zero()))
    }

    /// Multiply every coefficient by the function `g`.
    pub fn scale_fn(&self, g: &FourierScalar<S>) -> Self {
        let mut out = Self::zero(self.n, self.dims);
        for (w, f) in self.terms() {
            out.set_word(*w, f.mul(g));
        }
        out
    }

    /// Wedge product.
    pub fn wedge(&self, other: &Self) -> Self {
        debug_assert_eq!((self.n, self.dims), (other.n, other.dims));
        let mut out = Self::zero(self.n, self.dims);
        for (w1, f1) in self.terms() {
            for (w2, f2) in other.terms() {
                if let Some((sign, w)) = w1.wedge(w2) {
                    let mut prod = f1.mul(f2);
                    if sign < 0 {
                        prod = prod.scale_re(-S::one());
                    }
                    out.add_word(w, &prod);
                }
            }
        }
        out
    }

    /// Interior product by the frame vector that `v` names letter-wise.
    ///
    /// `v` must be of pure degree 1. A term `f omega^a` of `v` acts as
    /// `f iota(V_a)` (removing `omega^a` letters) and `f conj-omega^a` acts as
    /// `f iota(conj-V_a)`; coefficients multiply by convolution. With this
    /// convention the adjoint law reads
    /// `<<contract(v, a), b>> = <<a, conj_coeffs(v) ^ b>>`.
    pub fn contract(v: &Self, a: &Self) -> Self {
        debug_assert_eq!((v.n, v.dims), (a.n, a.dims));
        let mut out = Self::zero(a.n, a.dims);
        for (wv, fv) in v.terms() {
            assert_eq!(wv.degree(), 1, "contraction argument must be a 1-form");
            let letter = wv.letters()[0];
            for (wa, fa) in a.terms() {
                if let Some((sign, rest)) = wa.contract(letter) {
                    let mut prod = fv.mul(fa);
                    if sign < 0 {
                        prod = prod.scale_re(-S::one());
                    }
                    out.add_word(rest, &prod);
                }
            }
        }
        out
    }

    /// Letter sets swapped (`omega^a <-> conj-omega^a`), coefficients kept.
    /// Only meaningful for contraction arguments, hence restricted to 1-forms.
    pub fn word_swap(&self) -> Self {
        let mut out = Self::zero(self.n, self.dims);
        for (w, f) in self.terms() {
            assert_eq!(w.degree(), 1, "word_swap is defined on 1-forms");
            let l = w.letters()[0];
            out.add_word(CoframeWord::letter(l.index, !l.barred), f);
        }
        out
    }

    /// Coefficient functions conjugated, words untouched. This is the form
    /// whose wedge is adjoint to `contract(self, .)`.
    pub fn conj_coeffs(&self) -> Self {
        let mut out = Self::zero(self.n, self.dims);
        for (w, f) in self.terms() {
            out.set_word(*w, f.conjugate());
        }
        out
    }

    /// Complex conjugate form.
    pub fn conjugate(&self) -> Self {
        let mut out = Self::zero(self.n, self.dims);
        for (w, f) in self.terms() {
            let (sign, cw) = w.conjugate();
            let mut cf = f.conjugate();
            if sign < 0 {
                cf = cf.scale_re(-S::one());
            }
            out.add_word(cw, &cf);
        }
        out
    }

    /// Whether the form equals its own conjugate up to `tol` in `L^2`.
    pub fn is_real(&self, tol: S) -> bool {
        self.conjugate().sub(self).norm_sq() <= tol * tol
    }

    /// Projection onto words of bidegree `(r, s)`.
    pub fn bidegree_project(&self, r: usize, s: usize) -> Self {
        let mut out = Self::zero(self.n, self.dims);
        for (w, f) in self.terms() {
            if w.bidegree() == (r, s) {
                out.set_word(*w, f.clone());
            }
        }
        out
    }

    /// Projection onto words of total degree `j`.
    pub fn degree_project(&self, j: usize) -> Self {
        let mut out = Self::zero(self.n, self.dims);
        for (w, f) in self.terms() {
            if w.degree() == j {
                out.set_word(*w, f.clone());
            }
        }
        out
    }

    /// The almost complex structure extended as a derivation: multiplication
    /// by `i (s - r)` on bidegree `(r, s)`.
    pub fn j_apply(&self) -> Self {
        let mut out = Self::zero(self.n, self.dims);
        for (w, f) in self.terms() {
            let (r, s) = w.bidegree();
            let factor = Complex::new(
                S::zero(),
                S::from_isize(s as isize - r as isize).unwrap(),
            );
            out.set_word(*w, f.scale(factor));
        }
        out
    }

    /// The Weil operator `i^{r-s}` on bidegree `(r, s)`; `inverse` applies
    /// `i^{s-r}`.
    pub fn c_weil(&self, inverse: bool) -> Self {
        let i = Complex::new(S::zero(), S::one());
        let mut out = Self::zero(self.n, self.dims);
        for (w, f) in self.terms() {
            let (r, s) = w.bidegree();
            let mut k = r as isize - s as isize;
            if inverse {
                k = -k;
            }
            let factor = match k.rem_euclid(4) {
                0 => Complex::new(S::one(), S::zero()),
                1 => i,
                2 => Complex::new(-S::one(), S::zero()),
                _ => -i,
            };
            out.set_word(*w, f.scale(factor));
        }
        out
    }

    /// Hermitian `L^2` pairing, conjugate linear in `self`.
    pub fn inner(&self, other: &Self) -> C<S> {
        debug_assert_eq!((self.n, self.dims), (other.n, other.dims));
        let mut acc = Complex::new(S::zero(), S::zero());
        for (w, f) in self.terms() {
            if let Some(g) = other.terms.get(w) {
                acc = acc + f.inner(g);
            }
        }
        acc
    }

    pub fn norm_sq(&self) -> S {
        self.terms.values().map(FourierScalar::norm_sq).fold(S::zero(), |a, b| a + b)
    }

    pub fn norm(&self) -> S {
        self.norm_sq().sqrt()
    }

    /// Drop coefficients beyond the given Fourier bandwidth; reports whether
    /// anything was dropped.
    pub fn truncate(&self, bandwidth: i32) -> (Self, bool) {
        let mut out = Self::zero(self.n, self.dims);
        let mut dropped = false;
        for (w, f) in self.terms() {
            let (tf, d) = f.truncate(bandwidth);
            dropped |= d;
            out.set_word(*w, tf);
        }
        (out, dropped)
    }

    /// Expansion over the real coframe `theta^a`, `J theta^a`:
    /// `omega^a = (theta^a + i J theta^a)/sqrt2`.
    pub fn expand_real(&self) -> BTreeMap<RealWord, FourierScalar<S>> {
        let half = inv_sqrt2::<S>();
        let i = Complex::new(S::zero(), S::one());
        let mut out: BTreeMap<RealWord, FourierScalar<S>> = BTreeMap::new();
        for (w, f) in self.terms() {
            // Expand letter by letter.
            let mut partial: Vec<(C<S>, RealWord)> =
                vec![(Complex::new(S::one(), S::zero()), RealWord::empty())];
            for l in w.letters() {
                let theta = RealWord::letter(l.index, false);
                let jtheta = RealWord::letter(l.index, true);
                let jcoef = if l.barred { -i } else { i };
                let mut next = Vec::with_capacity(partial.len() * 2);
                for (c, rw) in &partial {
                    for (lc, lw) in
                        [(Complex::new(half, S::zero()), theta), (jcoef * half, jtheta)]
                    {
                        if let Some((sign, merged)) = rw.wedge(&lw) {
                            let mut cc = *c * lc;
                            if sign < 0 {
                                cc = -cc;
                            }
                            next.push((cc, merged));
                        }
                    }
                }
                partial = next;
            }
            for (c, rw) in partial {
                let entry = out.entry(rw).or_insert_with(|| FourierScalar::zero(self.dims));
                *entry = entry.add(&f.scale(c));
                if entry.is_zero() {
                    out.remove(&rw);
                }
            }
        }
        out
    }

    /// Sum of coefficient magnitudes in the real-coframe expansion.
    pub fn real_l1_norm(&self) -> S {
        self.expand_real()
            .values()
            .map(FourierScalar::l1_norm)
            .fold(S::zero(), |a, b| a + b)
    }

    /// Wedge with a single letter on the left (cheap helper).
    pub fn wedge_letter_left(&self, letter: Letter) -> Self {
        let lw = Self::word_const(
            self.n,
            self.dims,
            CoframeWord::letter(letter.index, letter.barred),
            Complex::new(S::one(), S::zero()),
        );
        lw.wedge(self)
    }
}

impl<S: Scalar> fmt::Display for BasicForm<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (w, c) in self.terms() {
            if !first {
                write!(f, "  +  ")?;
            }
            first = false;
            write!(f, "[{c}] {w}")?;
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

    fn o(n: usize, dims: usize, idx: usize) -> BasicForm {
        BasicForm::word_const(n, dims, CoframeWord::letter(idx, false), c(1.0, 0.0))
    }

    fn ob(n: usize, dims: usize, idx: usize) -> BasicForm {
        BasicForm::word_const(n, dims, CoframeWord::letter(idx, true), c(1.0, 0.0))
    }

    #[test]
    fn odd_form_squares_to_zero() {
        let a = o(2, 2, 1).add(&ob(2, 2, 2).scale(c(0.3, -1.7)));
        assert!(a.wedge(&a).is_zero());
    }

    #[test]
    fn contract_removes_matching_letter() {
        let w11 = o(1, 1, 1).wedge(&ob(1, 1, 1));
        let got = BasicForm::contract(&o(1, 1, 1), &w11);
        assert_eq!(got, ob(1, 1, 1));
        // Contracting a function gives zero.
        let f = BasicForm::one(1, 1);
        assert!(BasicForm::contract(&o(1, 1, 1), &f).is_zero());
    }

    #[test]
    fn wedge_contract_anticommutator_is_identity() {
        // eps(omega^a) iota(V_a) + iota(V_a) eps(omega^a) = id on every word.
        let n = 2;
        let v = o(n, 2, 1);
        for w in CoframeWord::all(n) {
            let phi = BasicForm::word_const(n, 2, w, c(1.0, 0.0));
            let one_way = v.wedge(&BasicForm::contract(&v, &phi));
            let other = BasicForm::contract(&v, &v.wedge(&phi));
            assert_eq!(one_way.add(&other), phi, "failed on word {w}");
        }
    }

    #[test]
    fn contraction_wedge_adjointness() {
        let n = 2;
        let dims = 2;
        let mut vf = FourierScalar::zero(dims);
        vf.set(crate::fourier::Mode::from_slice(&[1, 0]), c(0.4, 0.9));
        let v = BasicForm::monomial(n, CoframeWord::letter(2, true), vf);
        let a = o(n, dims, 1)
            .wedge(&ob(n, dims, 2))
            .add(&o(n, dims, 2).wedge(&ob(n, dims, 1)).scale(c(0.0, 2.0)));
        let b = o(n, dims, 1).scale(c(1.5, -0.5));
        let lhs = BasicForm::contract(&v, &a).inner(&b);
        let rhs = a.inner(&v.conj_coeffs().wedge(&b));
        assert!((lhs - rhs).norm() < 1e-14);
    }

    #[test]
    fn unitary_words_are_orthonormal() {
        let n = 2;
        for w1 in CoframeWord::all(n) {
            for w2 in CoframeWord::all(n) {
                let f1 = BasicForm::word_const(n, 2, w1, c(1.0, 0.0));
                let f2 = BasicForm::word_const(n, 2, w2, c(1.0, 0.0));
                let expect = if w1 == w2 { c(1.0, 0.0) } else { c(0.0, 0.0) };
                assert_eq!(f1.inner(&f2), expect);
            }
        }
    }

    #[test]
    fn conjugation_flips_letter_families() {
        let w = o(1, 1, 1).wedge(&ob(1, 1, 1)).scale(c(0.0, 1.0));
        // conj(i o1^ob1) = -i ob1^o1 = i o1^ob1 ... sign (-1)^{rs} = -1.
        let expect = o(1, 1, 1).wedge(&ob(1, 1, 1)).scale(c(0.0, 1.0));
        assert_eq!(w.conjugate(), expect);
        let v = o(2, 2, 1).scale(c(2.0, 3.0));
        assert_eq!(v.conjugate(), ob(2, 2, 1).scale(c(2.0, -3.0)));
    }

    #[test]
    fn weil_and_j_scalars() {
        let omega1 = o(1, 1, 1);
        assert_eq!(omega1.j_apply(), omega1.scale(c(0.0, -1.0)));
        assert_eq!(omega1.c_weil(false), omega1.scale(c(0.0, 1.0)));
        assert_eq!(omega1.c_weil(true), omega1.scale(c(0.0, -1.0)));
        let mixed = o(2, 2, 1).wedge(&ob(2, 2, 1));
        assert_eq!(mixed.j_apply(), BasicForm::zero(2, 2));
        assert_eq!(mixed.c_weil(false), mixed);
    }

    #[test]
    fn projections_partition_the_form() {
        let a = o(2, 2, 1)
            .add(&ob(2, 2, 2))
            .add(&o(2, 2, 1).wedge(&ob(2, 2, 1)))
            .add(&BasicForm::one(2, 2));
        let mut rebuilt = BasicForm::zero(2, 2);
        for r in 0..=2 {
            for s in 0..=2 {
                rebuilt = rebuilt.add(&a.bidegree_project(r, s));
            }
        }
        assert_eq!(rebuilt, a);
        assert_eq!(a.degree_project(1), o(2, 2, 1).add(&ob(2, 2, 2)));
    }

    #[test]
    fn real_expansion_of_unitary_letters() {
        // omega^1 = (theta^1 + i J theta^1)/sqrt2.
        let om = o(1, 1, 1);
        let ex = om.expand_real();
        let th = ex.get(&RealWord::letter(1, false)).unwrap();
        let jt = ex.get(&RealWord::letter(1, true)).unwrap();
        let r = 1.0 / 2.0f64.sqrt();
        assert!((th.coeff(&crate::fourier::Mode::zero()) - c(r, 0.0)).norm() < 1e-15);
        assert!((jt.coeff(&crate::fourier::Mode::zero()) - c(0.0, r)).norm() < 1e-15);
        assert!((om.real_l1_norm() - 2.0 * r).abs() < 1e-15);

        // omega^1 ^ conj(omega^1) = -i theta^1 ^ J theta^1.
        let w11 = o(1, 1, 1).wedge(&ob(1, 1, 1));
        let ex2 = w11.expand_real();
        assert_eq!(ex2.len(), 1);
        let (rw, coef) = ex2.iter().next().unwrap();
        let (sign, merged) =
            RealWord::letter(1, false).wedge(&RealWord::letter(1, true)).unwrap();
        assert_eq!(sign, 1);
        assert_eq!(*rw, merged);
        assert!((coef.coeff(&crate::fourier::Mode::zero()) - c(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn word_swap_keeps_coefficients() {
        let v = o(2, 2, 1).scale(c(0.0, 2.0)).add(&ob(2, 2, 2).scale(c(1.0, 1.0)));
        let sw = v.word_swap();
        assert_eq!(sw, ob(2, 2, 1).scale(c(0.0, 2.0)).add(&o(2, 2, 2).scale(c(1.0, 1.0))));
    }

    #[test]
    fn algebra_works_in_f32_too() {
        let one = Complex::<f32>::new(1.0, 0.0);
        let a: BasicForm<f32> =
            BasicForm::word_const(1, 1, CoframeWord::letter(1, false), one);
        let b: BasicForm<f32> =
            BasicForm::word_const(1, 1, CoframeWord::letter(1, true), one);
        let w = a.wedge(&b);
        assert!((w.norm() - 1.0).abs() < 1e-6);
        assert_eq!(BasicForm::contract(&a, &w), b);
    }
}
