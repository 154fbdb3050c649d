//! Hodge star on basic forms.
//!
//! The transverse volume form is `nu = i^n omega^1 ^ conj-omega^1 ^ ... ^
//! omega^n ^ conj-omega^n`, equal to the product of the real-coframe area
//! elements `theta^a ^ J theta^a` and of unit norm. The star used throughout
//! is complex linear on words and on Fourier coefficients, commutes with
//! conjugation, sends bidegree `(r, s)` to `(n - s, n - r)` and squares to
//! `(-1)^{r+s}` (the transverse dimension `2n` is even). It is fixed on words
//! by the pairing rule `phi ^ star(conj psi) = <<psi, phi>> nu`.

use crate::form::BasicForm;
use crate::scalar::{Scalar, C};
use crate::word::CoframeWord;
use num_complex::Complex;

/// Coefficient of the canonical full word in `nu`:
/// `i^n (-1)^{n(n-1)/2}`.
pub fn volume_coef<S: Scalar>(n: usize) -> C<S> {
    let i = Complex::new(S::zero(), S::one());
    let mut c = Complex::new(S::one(), S::zero());
    for _ in 0..n {
        c = c * i;
    }
    if (n * (n - 1) / 2) % 2 == 1 {
        c = -c;
    }
    c
}

/// The volume form as a basic form.
pub fn volume_form<S: Scalar>(n: usize, dims: usize) -> BasicForm<S> {
    let all: Vec<usize> = (1..=n).collect();
    let full = CoframeWord::from_sets(&all, &all);
    BasicForm::monomial(
        n,
        full,
        crate::fourier::FourierScalar::constant(dims, volume_coef::<S>(n)),
    )
}

/// Apply the star word by word.
///
/// For a word `u` with holomorphic set `A` and antiholomorphic set `B`, the
/// image word has holomorphic set `B^c` and antiholomorphic set `A^c`; the
/// coefficient is `nu_coef / (sigma_c sigma_w)` where `sigma_c = (-1)^{|A||B|}`
/// is the conjugation reorder sign of `u` and `sigma_w` the merge sign of the
/// swapped word against the image word.
pub fn hodge_star<S: Scalar>(a: &BasicForm<S>) -> BasicForm<S> {
    let n = a.n();
    let full: u32 = {
        let lo = (1u32 << n) - 1;
        lo | (lo << 16)
    };
    let mut out = BasicForm::zero(n, a.dims());
    let nu = volume_coef::<S>(n);
    for (u, f) in a.terms() {
        let mask = u.mask();
        let holo = mask & 0xFFFF;
        let anti = mask >> 16;
        // Swap the families of u, then complement inside 1..=n.
        let swapped = CoframeWord::from_mask((anti & 0xFFFF) | (holo << 16));
        let image = CoframeWord::from_mask(full & !swapped.mask());
        let (sigma_c, _) = u.conjugate();
        let (sigma_w, merged) = swapped
            .wedge(&image)
            .expect("swapped word and its complement are disjoint");
        debug_assert_eq!(merged.mask(), full);
        let sign = S::from_i32(sigma_c * sigma_w).unwrap();
        let coef = nu * Complex::new(S::one() / sign, S::zero());
        out.add_word(image, &f.scale(coef));
    }
    out
}
