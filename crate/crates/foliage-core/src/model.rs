//! The built-in foliation models and leafwise metric deformations.
//!
//! Each model is a torus suspension carrying a transversely Hermitian
//! foliation, described entirely by constant structure data in a unitary
//! coframe `omega^1..omega^n`:
//!
//! * `carriere`: the hyperbolic torus-bundle flow, complex codimension 1,
//!   basic functions in one circle coordinate;
//! * `product_j1`: the product of two such flows with the product complex
//!   structure (transversely Kahler);
//! * `product_j2`: the same product with the complex structure that pairs the
//!   two factors (not integrable, not Kahler);
//! * `taut_torus`: a linear flow control case with closed coframe and zero
//!   mean curvature.
//!
//! The real coframe is implicit in the unitary one: `theta^a` and
//! `J theta^a` are the real and imaginary parts of `sqrt2 omega^a`, so the
//! complex structure never needs a separate action table.

use crate::error::{FoliageError, Result};
use crate::form::BasicForm;
use crate::fourier::{FourierScalar, Mode};
use crate::scalar::{inv_sqrt2, Scalar, C};
use crate::word::CoframeWord;
use num_complex::Complex;
use serde::Deserialize;

/// Structural flags established at load time.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModelFlags {
    /// Transversely Hermitian (always true for the built-ins).
    pub hermitian: bool,
    /// The fundamental 2-form is closed.
    pub kahler: bool,
    /// The almost complex structure is integrable (no (0,2)-part in any
    /// `d omega^a`).
    pub integrable: bool,
    /// The basic mean curvature vanishes identically as given (stronger than
    /// tautness of the class, which survives deformation).
    pub kappa_zero: bool,
}

/// The (1,0)/(0,1) split of the basic mean curvature and the matching
/// contraction arguments for the dual vector fields.
#[derive(Clone, Debug)]
pub struct MeanCurvatureParts<S: Scalar = f64> {
    /// `kappa_B^{1,0}`.
    pub kappa10: BasicForm<S>,
    /// `kappa_B^{0,1}`.
    pub kappa01: BasicForm<S>,
    /// Contraction argument for `H^{1,0} = (kappa^{0,1})^sharp`; letter-swapped
    /// copy of `kappa01`, so `contract(h10, .)` is the interior product by
    /// the (1,0) mean curvature field.
    pub h10: BasicForm<S>,
    /// Contraction argument for `H^{0,1}`.
    pub h01: BasicForm<S>,
}

/// A transversely Hermitian foliation model on truncated basic forms.
#[derive(Clone, Debug)]
pub struct FoliationModel<S: Scalar = f64> {
    name: String,
    n: usize,
    dims: usize,
    /// `d omega^a` for `a = 1..=n`; antiholomorphic letters differentiate by
    /// conjugation.
    d_omega: Vec<BasicForm<S>>,
    /// `d u_j` for each basic coordinate, as constant 1-forms.
    coord_diff: Vec<BasicForm<S>>,
    /// Current basic mean curvature 1-form.
    kappa: BasicForm<S>,
    /// Accumulated leafwise deformation potential, if any.
    deformation: Option<FourierScalar<S>>,
    lambda: Option<S>,
    matrix: Option<[i64; 4]>,
    flags: ModelFlags,
}

/// Holonomy matrix accepted by the hyperbolic models.
pub const DEFAULT_MATRIX: [i64; 4] = [2, 1, 1, 1];

fn check_matrix(m: [i64; 4]) -> Result<()> {
    let [a, b, c, d] = m;
    let det = a * d - b * c;
    if det != 1 {
        return Err(FoliageError::InvalidMatrix(format!(
            "[[{a},{b}],[{c},{d}]] must have determinant 1, got {det}"
        )));
    }
    if a + d <= 2 {
        return Err(FoliageError::InvalidMatrix(format!(
            "[[{a},{b}],[{c},{d}]] must be hyperbolic (trace > 2), got trace {}",
            a + d
        )));
    }
    Ok(())
}

/// Dominant eigenvalue of the holonomy matrix (determinant 1, trace > 2).
fn dominant_eigenvalue<S: Scalar>(m: [i64; 4]) -> S {
    let tr = S::from_i64(m[0] + m[3]).unwrap();
    let four = S::lit(4.0);
    (tr + (tr * tr - four).sqrt()) / S::lit(2.0)
}

impl<S: Scalar> FoliationModel<S> {
    pub fn name(&self) -> &str {
        &self.name
    }

    /// Complex codimension.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of basic torus coordinates.
    pub fn dims(&self) -> usize {
        self.dims
    }

    /// `d omega^a` (1-based index).
    pub fn d_omega(&self, a: usize) -> &BasicForm<S> {
        &self.d_omega[a - 1]
    }

    /// `d u_j` (0-based coordinate index).
    pub fn coord_diff(&self, j: usize) -> &BasicForm<S> {
        &self.coord_diff[j]
    }

    /// Basic mean curvature 1-form (deformed when applicable).
    pub fn kappa(&self) -> &BasicForm<S> {
        &self.kappa
    }

    pub fn flags(&self) -> ModelFlags {
        self.flags
    }

    pub fn lambda(&self) -> Option<S> {
        self.lambda
    }

    pub fn holonomy_matrix(&self) -> Option<[i64; 4]> {
        self.matrix
    }

    /// Accumulated leafwise deformation potential.
    pub fn deformation(&self) -> Option<&FourierScalar<S>> {
        self.deformation.as_ref()
    }

    /// Whether the model carries a leafwise deformation.
    pub fn is_deformed(&self) -> bool {
        self.deformation.is_some()
    }

    /// The weight `e^{-f}` of the deformed leafwise volume, truncated to the
    /// given bandwidth; the constant 1 when undeformed.
    pub fn weight(&self, bandwidth: i32) -> FourierScalar<S> {
        match &self.deformation {
            None => FourierScalar::constant_re(self.dims, S::one()),
            Some(f) => f.scale_re(-S::one()).exp_truncated(bandwidth),
        }
    }

    /// Zero form with matching shape.
    pub fn zero_form(&self) -> BasicForm<S> {
        BasicForm::zero(self.n, self.dims)
    }

    /// Constant-one function with matching shape.
    pub fn one_form(&self) -> BasicForm<S> {
        BasicForm::one(self.n, self.dims)
    }

    /// The fundamental 2-form `-i sum_a omega^a ^ conj-omega^a`.
    pub fn omega_form(&self) -> BasicForm<S> {
        let mut out = self.zero_form();
        let minus_i = Complex::new(S::zero(), -S::one());
        for a in 1..=self.n {
            out.add_word(
                CoframeWord::from_sets(&[a], &[a]),
                &FourierScalar::constant(self.dims, minus_i),
            );
        }
        out
    }

    /// Exterior derivative of a scalar function, `sum_j (d_j f) du_j`.
    pub fn d_scalar(&self, f: &FourierScalar<S>) -> BasicForm<S> {
        let mut out = self.zero_form();
        for j in 0..self.dims {
            let df = f.differentiate(j);
            if !df.is_zero() {
                out = out.add(&self.coord_diff[j].scale_fn(&df));
            }
        }
        out
    }

    /// The bidegree split of the mean curvature and its dual contraction
    /// arguments.
    pub fn mean_curvature_parts(&self) -> MeanCurvatureParts<S> {
        let kappa10 = self.kappa.bidegree_project(1, 0);
        let kappa01 = self.kappa.bidegree_project(0, 1);
        let h10 = kappa01.word_swap();
        let h01 = kappa10.word_swap();
        MeanCurvatureParts { kappa10, kappa01, h10, h01 }
    }

    /// Deform the leafwise metric by the conformal potential `f`.
    ///
    /// Only the basic mean curvature moves: `kappa' = kappa + d_B f`. The
    /// transverse metric, the complex structure and every primal differential
    /// stay fixed; adjoints pick up the weight `e^{-f}` through `kappa'`.
    pub fn deform_leafwise(&self, f: &FourierScalar<S>) -> Result<Self> {
        if f.dims() != self.dims {
            return Err(FoliageError::Parse(format!(
                "deformation potential has {} coordinates, model has {}",
                f.dims(),
                self.dims
            )));
        }
        if !f.is_real(S::lit(1e-12)) {
            return Err(FoliageError::NotReal(format!("{f}")));
        }
        let mut out = self.clone();
        out.kappa = self.kappa.add(&self.d_scalar(f));
        out.deformation = Some(match &self.deformation {
            None => f.clone(),
            Some(g) => g.add(f),
        });
        Ok(out)
    }
}

/// Constant 1-form builder in the unitary coframe.
fn const_one_form<S: Scalar>(
    n: usize,
    dims: usize,
    terms: &[(usize, bool, C<S>)],
) -> BasicForm<S> {
    let mut out = BasicForm::zero(n, dims);
    for &(idx, barred, c) in terms {
        out.add_word(CoframeWord::letter(idx, barred), &FourierScalar::constant(dims, c));
    }
    out
}

/// `theta^a = (omega^a + conj-omega^a)/sqrt2` as a constant form.
fn theta<S: Scalar>(n: usize, dims: usize, a: usize) -> BasicForm<S> {
    let h = inv_sqrt2::<S>();
    const_one_form(
        n,
        dims,
        &[(a, false, Complex::new(h, S::zero())), (a, true, Complex::new(h, S::zero()))],
    )
}

/// `J theta^a = -i (omega^a - conj-omega^a)/sqrt2` as a constant form.
fn j_theta<S: Scalar>(n: usize, dims: usize, a: usize) -> BasicForm<S> {
    let h = inv_sqrt2::<S>();
    const_one_form(
        n,
        dims,
        &[(a, false, Complex::new(S::zero(), -h)), (a, true, Complex::new(S::zero(), h))],
    )
}

/// Build the hyperbolic flow model (complex codimension 1).
///
/// Structure: `d theta = log(lambda) Jtheta ^ theta`, `d Jtheta = 0`,
/// `kappa = log(lambda) Jtheta`, basic functions on one circle coordinate
/// with `du = Jtheta`.
fn carriere<S: Scalar>(m: [i64; 4]) -> Result<FoliationModel<S>> {
    check_matrix(m)?;
    let lambda = dominant_eigenvalue::<S>(m);
    let log_l = lambda.ln();
    let (n, dims) = (1, 1);
    let h = inv_sqrt2::<S>();
    // d omega^1 = -(i log(lambda)/sqrt2) omega^1 ^ conj-omega^1.
    let d_o1 = BasicForm::word_const(
        n,
        dims,
        CoframeWord::from_sets(&[1], &[1]),
        Complex::new(S::zero(), -log_l * h),
    );
    let jt = j_theta::<S>(n, dims, 1);
    let model = FoliationModel {
        name: "carriere".into(),
        n,
        dims,
        d_omega: vec![d_o1],
        coord_diff: vec![jt.clone()],
        kappa: jt.scale_re(log_l),
        deformation: None,
        lambda: Some(lambda),
        matrix: Some(m),
        flags: ModelFlags { hermitian: true, kahler: true, integrable: true, kappa_zero: false },
    };
    Ok(model)
}

/// Product of two hyperbolic flows with the per-factor complex structure.
fn product_j1<S: Scalar>(m: [i64; 4]) -> Result<FoliationModel<S>> {
    check_matrix(m)?;
    let lambda = dominant_eigenvalue::<S>(m);
    let log_l = lambda.ln();
    let (n, dims) = (2, 2);
    let h = inv_sqrt2::<S>();
    let d_omega = (1..=2)
        .map(|a| {
            BasicForm::word_const(
                n,
                dims,
                CoframeWord::from_sets(&[a], &[a]),
                Complex::new(S::zero(), -log_l * h),
            )
        })
        .collect();
    let jt1 = j_theta::<S>(n, dims, 1);
    let jt2 = j_theta::<S>(n, dims, 2);
    let model = FoliationModel {
        name: "product_j1".into(),
        n,
        dims,
        d_omega,
        coord_diff: vec![jt1.clone(), jt2.clone()],
        kappa: jt1.add(&jt2).scale_re(log_l),
        deformation: None,
        lambda: Some(lambda),
        matrix: Some(m),
        flags: ModelFlags { hermitian: true, kahler: true, integrable: true, kappa_zero: false },
    };
    Ok(model)
}

/// Product of two hyperbolic flows with the factor-pairing complex structure:
/// `theta^1 = S_1`, `J theta^1 = S_2`, `theta^2 = T_1`, `J theta^2 = T_2`
/// in terms of the per-factor real coframes `(S_a, T_a)`.
fn product_j2<S: Scalar>(m: [i64; 4]) -> Result<FoliationModel<S>> {
    check_matrix(m)?;
    let lambda = dominant_eigenvalue::<S>(m);
    let log_l = lambda.ln();
    let (n, dims) = (2, 2);
    // Real coframe in unitary letters:
    //   S_1 = theta^1, S_2 = J theta^1, T_1 = theta^2, T_2 = J theta^2.
    let s1 = theta::<S>(n, dims, 1);
    let s2 = j_theta::<S>(n, dims, 1);
    let t1 = theta::<S>(n, dims, 2);
    let t2 = j_theta::<S>(n, dims, 2);
    // Factor structure: d S_a = log(lambda) T_a ^ S_a, d T_a = 0.
    let d_s1 = t1.wedge(&s1).scale_re(log_l);
    let d_s2 = t2.wedge(&s2).scale_re(log_l);
    // omega^1 = (S_1 + i S_2)/sqrt2, omega^2 = (T_1 + i T_2)/sqrt2.
    let i = Complex::new(S::zero(), S::one());
    let h = inv_sqrt2::<S>();
    let d_o1 = d_s1.add(&d_s2.scale(i)).scale_re(h);
    let d_o2 = BasicForm::zero(n, dims);
    let model = FoliationModel {
        name: "product_j2".into(),
        n,
        dims,
        d_omega: vec![d_o1, d_o2],
        coord_diff: vec![t1.clone(), t2.clone()],
        kappa: t1.add(&t2).scale_re(log_l),
        deformation: None,
        lambda: Some(lambda),
        matrix: Some(m),
        flags: ModelFlags { hermitian: true, kahler: false, integrable: false, kappa_zero: false },
    };
    Ok(model)
}

/// Linear flow on a 3-torus: closed coframe, zero mean curvature, two basic
/// coordinates.
fn taut_torus<S: Scalar>() -> Result<FoliationModel<S>> {
    let (n, dims) = (1, 2);
    let th = theta::<S>(n, dims, 1);
    let jt = j_theta::<S>(n, dims, 1);
    let model = FoliationModel {
        name: "taut_torus".into(),
        n,
        dims,
        d_omega: vec![BasicForm::zero(n, dims)],
        coord_diff: vec![th, jt],
        kappa: BasicForm::zero(n, dims),
        deformation: None,
        lambda: None,
        matrix: None,
        flags: ModelFlags { hermitian: true, kahler: true, integrable: true, kappa_zero: true },
    };
    Ok(model)
}

/// Names of the built-in models.
pub const BUILTIN_MODELS: [&str; 4] = ["carriere", "product_j1", "product_j2", "taut_torus"];

/// Build a built-in model by name; `matrix` overrides the holonomy matrix of
/// the hyperbolic models (row major `[a, b, c, d]`).
pub fn build_model<S: Scalar>(
    name: &str,
    matrix: Option<[i64; 4]>,
) -> Result<FoliationModel<S>> {
    let m = matrix.unwrap_or(DEFAULT_MATRIX);
    let model = match name {
        "carriere" => carriere::<S>(m)?,
        "product_j1" => product_j1::<S>(m)?,
        "product_j2" => product_j2::<S>(m)?,
        "taut_torus" => taut_torus::<S>()?,
        other => return Err(FoliageError::UnknownModel(other.into())),
    };
    validate(&model)?;
    Ok(model)
}

/// Structural invariants checked on every freshly built model.
pub fn validate<S: Scalar>(model: &FoliationModel<S>) -> Result<()> {
    let tol = S::lit(1e-10);
    let fail = |what: &str| {
        Err(FoliageError::InvalidMatrix(format!(
            "model `{}` failed structural check: {what}",
            model.name()
        )))
    };

    // Coordinate differentials must be closed constant 1-forms.
    for j in 0..model.dims() {
        let du = model.coord_diff(j);
        if du.bandwidth() != 0 {
            return fail("coordinate differential is not constant");
        }
        if crate::ops::d_b(model, du).norm() > tol {
            return fail("coordinate differential is not closed");
        }
    }

    // d_B must square to zero on every generator word.
    for w in CoframeWord::all(model.n()) {
        let phi = BasicForm::word_const(
            model.n(),
            model.dims(),
            w,
            Complex::new(S::one(), S::zero()),
        );
        if crate::ops::d_b(model, &crate::ops::d_b(model, &phi)).norm() > tol {
            return fail("exterior derivative does not square to zero");
        }
    }

    // Mean curvature must be a real closed 1-form.
    if !model.kappa().is_real(tol) {
        return fail("mean curvature is not real");
    }
    if crate::ops::d_b(model, model.kappa()).norm() > tol {
        return fail("mean curvature is not closed");
    }

    // Flag consistency.
    let kahler_now = crate::ops::d_b(model, &model.omega_form()).norm() <= tol;
    if kahler_now != model.flags().kahler {
        return fail("kahler flag does not match d of the fundamental form");
    }
    let mut integrable_now = true;
    for a in 1..=model.n() {
        let d_oa = model.d_omega(a);
        let bad = (0..=model.n())
            .filter_map(|s| if s >= 2 { Some(d_oa.bidegree_project(0, s)) } else { None })
            .any(|p| p.norm() > tol);
        if bad {
            integrable_now = false;
        }
    }
    if integrable_now != model.flags().integrable {
        return fail("integrability flag does not match the structure equations");
    }
    Ok(())
}

/// On-disk model description.
#[derive(Debug, Deserialize)]
pub struct ModelConfig {
    /// Built-in model name.
    pub name: String,
    /// Optional holonomy matrix `[a, b, c, d]`.
    pub matrix: Option<Vec<i64>>,
    /// Optional leafwise deformation, a list of Fourier terms of the real
    /// potential.
    #[serde(default)]
    pub deformation: Vec<DeformationTerm>,
}

/// One Fourier term of a deformation potential.
#[derive(Debug, Deserialize)]
pub struct DeformationTerm {
    /// Frequency vector (length = model coordinate count).
    pub mode: Vec<i32>,
    pub re: f64,
    pub im: f64,
}

/// Parse a TOML model config.
pub fn parse_config(text: &str) -> Result<ModelConfig> {
    toml::from_str(text).map_err(|e| FoliageError::Parse(e.to_string()))
}

/// Build a model from config text: name, optional matrix, optional
/// deformation.
pub fn build_model_from_config(text: &str) -> Result<FoliationModel<f64>> {
    let cfg = parse_config(text)?;
    let matrix = match &cfg.matrix {
        None => None,
        Some(v) if v.len() == 4 => Some([v[0], v[1], v[2], v[3]]),
        Some(v) => {
            return Err(FoliageError::Parse(format!(
                "matrix needs 4 integers, got {}",
                v.len()
            )))
        }
    };
    let model = build_model::<f64>(&cfg.name, matrix)?;
    if cfg.deformation.is_empty() {
        return Ok(model);
    }
    let mut f = FourierScalar::zero(model.dims());
    for term in &cfg.deformation {
        if term.mode.len() != model.dims() {
            return Err(FoliageError::Parse(format!(
                "deformation mode {:?} must have {} entries",
                term.mode,
                model.dims()
            )));
        }
        f.add_term(Mode::from_slice(&term.mode), Complex::new(term.re, term.im));
    }
    model.deform_leafwise(&f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::RealWord;

    #[test]
    fn default_matrix_eigenvalue() {
        let model = build_model::<f64>("carriere", None).unwrap();
        let expect = (3.0 + 5.0f64.sqrt()) / 2.0;
        assert!((model.lambda().unwrap() - expect).abs() < 1e-14);
    }

    #[test]
    fn invalid_matrices_are_rejected() {
        assert!(build_model::<f64>("carriere", Some([1, 0, 0, 1])).is_err());
        assert!(build_model::<f64>("carriere", Some([2, 1, 1, 2])).is_err());
        assert!(build_model::<f64>("nope", None).is_err());
    }

    #[test]
    fn flags_match_the_catalog() {
        for (name, kahler, integrable, kappa_zero) in [
            ("carriere", true, true, false),
            ("product_j1", true, true, false),
            ("product_j2", false, false, false),
            ("taut_torus", true, true, true),
        ] {
            let m = build_model::<f64>(name, None).unwrap();
            assert_eq!(m.flags().kahler, kahler, "{name}");
            assert_eq!(m.flags().integrable, integrable, "{name}");
            assert_eq!(m.flags().kappa_zero, kappa_zero, "{name}");
        }
    }

    #[test]
    fn kappa_is_real_and_splits() {
        for name in BUILTIN_MODELS {
            let m = build_model::<f64>(name, None).unwrap();
            assert!(m.kappa().is_real(1e-14), "{name}");
            let parts = m.mean_curvature_parts();
            assert!(
                parts.kappa10.add(&parts.kappa01).sub(m.kappa()).norm() < 1e-14,
                "{name}"
            );
            assert!(
                parts.kappa10.conjugate().sub(&parts.kappa01).norm() < 1e-14,
                "{name}"
            );
        }
    }

    #[test]
    fn j2_mean_curvature_is_proportional_to_omega2() {
        let m = build_model::<f64>("product_j2", None).unwrap();
        let parts = m.mean_curvature_parts();
        let log_l = m.lambda().unwrap().ln();
        // kappa^{1,0} = log(lambda) (1 - i)/sqrt2 omega^2.
        let expect = BasicForm::word_const(
            2,
            2,
            CoframeWord::letter(2, false),
            num_complex::Complex64::new(log_l / 2f64.sqrt(), -log_l / 2f64.sqrt()),
        );
        assert!(parts.kappa10.sub(&expect).norm() < 1e-14);
    }

    #[test]
    fn deformation_shifts_kappa_by_exact_term() {
        // f = cos(2 pi t) on the carriere model:
        // kappa' = (log lambda - 2 pi sin(2 pi t)) J theta.
        let m = build_model::<f64>("carriere", None).unwrap();
        let mut f = FourierScalar::zero(1);
        f.set(Mode::from_slice(&[1]), num_complex::Complex64::new(0.5, 0.0));
        f.set(Mode::from_slice(&[-1]), num_complex::Complex64::new(0.5, 0.0));
        let dm = m.deform_leafwise(&f).unwrap();
        let real = dm.kappa().expand_real();
        assert!(!real.contains_key(&RealWord::letter(1, false)));
        let jt_part = real.get(&RealWord::letter(1, true)).unwrap();
        let log_l = m.lambda().unwrap().ln();
        let pi = std::f64::consts::PI;
        assert!(
            (jt_part.coeff(&Mode::zero()) - num_complex::Complex64::new(log_l, 0.0)).norm()
                < 1e-14
        );
        // -2 pi sin(2 pi t) = pi i e_1 - pi i e_{-1}.
        assert!(
            (jt_part.coeff(&Mode::from_slice(&[1])) - num_complex::Complex64::new(0.0, pi))
                .norm()
                < 1e-14
        );
        assert!(dm.kappa().is_real(1e-14));
        // Exactness: kappa' - kappa = d_B f.
        let diff = dm.kappa().sub(m.kappa());
        assert!(diff.sub(&m.d_scalar(&f)).norm() < 1e-15);
    }

    #[test]
    fn complex_deformation_is_rejected() {
        let m = build_model::<f64>("taut_torus", None).unwrap();
        let f = FourierScalar::monomial(
            2,
            Mode::from_slice(&[1, 0]),
            num_complex::Complex64::new(1.0, 0.0),
        );
        assert!(matches!(m.deform_leafwise(&f), Err(FoliageError::NotReal(_))));
    }

    #[test]
    fn config_round_trip() {
        let text = r#"
name = "carriere"
matrix = [2, 1, 1, 1]

[[deformation]]
mode = [1]
re = 0.25
im = 0.0

[[deformation]]
mode = [-1]
re = 0.25
im = 0.0
"#;
        let m = build_model_from_config(text).unwrap();
        assert!(m.is_deformed());
        assert_eq!(m.name(), "carriere");
        let bad = r#"
name = "carriere"

[[deformation]]
mode = [1]
re = 0.25
im = 0.5
"#;
        assert!(build_model_from_config(bad).is_err());
    }
}
