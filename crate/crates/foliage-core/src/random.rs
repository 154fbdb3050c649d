//! Deterministic pseudo-random test forms.
//!
//! Every generator is a pure function of its seed, so identity sweeps and
//! reports are reproducible run to run and across platforms.

use crate::assemble::{modes_up_to, Component};
use crate::form::BasicForm;
use crate::fourier::FourierScalar;
use crate::model::FoliationModel;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random form over a component: every word, every mode with sup-norm at
/// most `bandwidth`, coefficients uniform in the complex unit square.
pub fn random_form(
    model: &FoliationModel,
    bandwidth: i32,
    component: Component,
    seed: u64,
) -> BasicForm {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = model.zero_form();
    for w in component.words(model.n()) {
        let mut f = FourierScalar::zero(model.dims());
        for m in modes_up_to(model.dims(), bandwidth) {
            let re: f64 = rng.gen_range(-1.0..1.0);
            let im: f64 = rng.gen_range(-1.0..1.0);
            f.add_term(m, Complex64::new(re, im));
        }
        out.add_word(w, &f);
    }
    out
}

/// Random real-valued function (`c_{-m} = conj(c_m)`) of the given bandwidth.
pub fn random_real_function(model: &FoliationModel, bandwidth: i32, seed: u64) -> FourierScalar {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut f = FourierScalar::zero(model.dims());
    for m in modes_up_to(model.dims(), bandwidth) {
        let re: f64 = rng.gen_range(-1.0..1.0);
        let im: f64 = rng.gen_range(-1.0..1.0);
        f.add_term(m, Complex64::new(re, im));
    }
    f.add(&f.conjugate()).scale_re(0.5)
}
