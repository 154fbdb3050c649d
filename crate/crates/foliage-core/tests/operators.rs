//! Closed-form oracles for the model operators.
//!
//! Every expected value below is derived by hand from the model definitions
//! (holonomy stretch factors, flat-torus Fourier calculus, coframe
//! combinatorics) and frozen here; the tests then check the assembled
//! operators against them.

use foliage_core::assemble::Component;
use foliage_core::cohomology::eta_class;
use foliage_core::form::BasicForm;
use foliage_core::fourier::{FourierScalar, Mode};
use foliage_core::model::build_model;
use foliage_core::ops::{self, LaplacianKind, OperatorKind};
use foliage_core::report::operator_export_text;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Tolerance for values that are exact up to rounding in a handful of
/// floating-point operations.
const ORACLE_TOL: f64 = 1e-12;

/// Tolerance for quantities that must vanish identically (no cancellation
/// is involved, only exact coefficient arithmetic).
const EXACT_ZERO_TOL: f64 = 1e-14;

/// Truncation bandwidth; the oracle statements are per-mode exact, so a
/// small band suffices.
const K: i32 = 3;

fn log_stretch(name: &str) -> f64 {
    let m = build_model::<f64>(name, None).unwrap();
    m.lambda().unwrap().ln()
}

#[test]
fn mean_curvature_norms_match_the_holonomy_stretch() {
    // One hyperbolic factor contributes `log(lambda) dt`; two orthogonal
    // factors add in quadrature.  The linear flow is taut.
    let log_l = log_stretch("carriere");
    let cases = [
        ("carriere", log_l),
        ("product_j1", 2.0f64.sqrt() * log_l),
        ("product_j2", 2.0f64.sqrt() * log_l),
        ("taut_torus", 0.0),
    ];
    for (name, expected) in cases {
        let m = build_model::<f64>(name, None).unwrap();
        let got = m.kappa().norm();
        assert!(
            (got - expected).abs() <= ORACLE_TOL,
            "{name}: |kappa| = {got}, expected {expected}"
        );
    }
}

#[test]
fn mean_curvature_is_closed_and_is_minus_d_t_of_one() {
    for name in foliage_core::BUILTIN_MODELS {
        let m = build_model::<f64>(name, None).unwrap();
        let closed = ops::d_b(&m, m.kappa()).norm();
        assert!(closed <= EXACT_ZERO_TOL, "{name}: |d_B kappa| = {closed}");
        let defect = ops::d_t(&m, &m.one_form()).add(m.kappa()).norm();
        assert!(defect <= EXACT_ZERO_TOL, "{name}: |d_T(1) + kappa| = {defect}");
    }
}

#[test]
fn flat_model_laplacian_has_the_flat_spectrum() {
    // On the linear flow the basic complex is the flat Fourier calculus, so
    // `lap_B e_m = 4 pi^2 |m|^2 e_m` exactly.
    let m = build_model::<f64>("taut_torus", None).unwrap();
    for mode in [[1, 0], [2, -1], [0, 3]] {
        let e = BasicForm::from_scalar(
            m.n(),
            FourierScalar::monomial(m.dims(), Mode::from_slice(&mode), Complex64::new(1.0, 0.0)),
        );
        let eig = 4.0 * PI * PI * ((mode[0] * mode[0] + mode[1] * mode[1]) as f64);
        let defect = ops::laplacian(&m, LaplacianKind::Basic, &e)
            .sub(&e.scale_re(eig))
            .norm();
        assert!(
            defect <= eig.max(1.0) * ORACLE_TOL,
            "mode {mode:?}: |lap_B e - 4pi^2|m|^2 e| = {defect}"
        );
    }
}

#[test]
fn fundamental_form_has_unit_frames_and_detects_the_kahler_models() {
    for name in foliage_core::BUILTIN_MODELS {
        let m = build_model::<f64>(name, None).unwrap();
        let omega = m.omega_form();
        let expected = (m.n() as f64).sqrt();
        let got = omega.norm();
        assert!(
            (got - expected).abs() <= ORACLE_TOL,
            "{name}: |omega| = {got}, expected {expected}"
        );
        let d_omega = ops::d_b(&m, &omega).norm();
        if m.flags().kahler {
            assert!(d_omega <= EXACT_ZERO_TOL, "{name}: |d_B omega| = {d_omega}");
        } else {
            assert!(d_omega > 0.1, "{name}: |d_B omega| = {d_omega} should be far from zero");
        }
    }
}

#[test]
fn weil_operator_scales_words_by_their_bidegree_phase() {
    // `C` multiplies an `(r, s)` word by `i^(r - s)`.
    let m = build_model::<f64>("product_j1", None).unwrap();
    let i_unit = Complex64::new(0.0, 1.0);
    for word in foliage_core::word::CoframeWord::all(m.n()) {
        let a = BasicForm::word_const(m.n(), m.dims(), word, Complex64::new(1.0, 0.0));
        let (r, s) = word.bidegree();
        let phase = i_unit.powi(r as i32 - s as i32);
        let defect = a.c_weil(false).sub(&a.scale(phase)).norm();
        assert!(defect <= EXACT_ZERO_TOL, "word {word:?}: |C a - i^(r-s) a| = {defect}");
        let round_trip = a.c_weil(false).c_weil(true).sub(&a).norm();
        assert!(round_trip <= EXACT_ZERO_TOL, "word {word:?}: C^-1 C != id");
    }
}

#[test]
fn eta_form_norms_match_the_stretch_oracle() {
    // eta = del_B kappa^(0,1).  For one hyperbolic factor the coefficient
    // arithmetic gives |eta| = log(lambda)^2 / 2; two factors scale it by
    // sqrt(2); it vanishes identically when kappa is holomorphic or zero.
    let log_l = log_stretch("carriere");
    let cases = [
        ("carriere", log_l * log_l / 2.0),
        ("product_j1", 2.0f64.sqrt() * log_l * log_l / 2.0),
        ("product_j2", 0.0),
        ("taut_torus", 0.0),
    ];
    for (name, expected) in cases {
        let m = build_model::<f64>(name, None).unwrap();
        let eta = eta_class(&m, K).unwrap();
        let got = eta.form.norm();
        assert!(
            (got - expected).abs() <= ORACLE_TOL,
            "{name}: |eta| = {got}, expected {expected}"
        );
        assert_eq!(eta.trivial, expected == 0.0, "{name}: eta triviality verdict");
    }
}

#[test]
fn exterior_derivative_export_matches_the_hand_computation() {
    // Functions at K = 1 on the hyperbolic flow carry modes (0,0), (1,0),
    // (-1,0); d_B of a mode splits 2 pi i across the two unit coframe
    // letters, so the degree-0 block has exactly four entries of magnitude
    // pi * sqrt(2).
    let m = build_model::<f64>("carriere", None).unwrap();
    let text = operator_export_text(&m, 1, OperatorKind::DB, Component::Degree(0));
    let mut header_lines = 0usize;
    let mut entries: Vec<f64> = Vec::new();
    for line in text.lines() {
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() == 4 {
            if let (Ok(re), Ok(im)) = (fields[2].parse::<f64>(), fields[3].parse::<f64>()) {
                entries.push(re.hypot(im));
                continue;
            }
        }
        header_lines += 1;
    }
    assert!(text.starts_with("foliage-operator/1"), "missing format tag");
    assert!(header_lines >= 8, "header got folded into the entries");
    assert_eq!(entries.len(), 4, "entry count: {text}");
    let expected = PI * 2.0f64.sqrt();
    for v in entries {
        assert!(
            (v - expected).abs() <= ORACLE_TOL,
            "entry magnitude {v}, expected {expected}"
        );
    }
}
