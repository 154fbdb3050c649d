//! Basic cohomology tables and the secondary invariants of the mean
//! curvature: the Álvarez class, the `eta` class, and automorphy of the
//! holonomy-invariant structure under the mean curvature flow.
//!
//! Harmonic spaces are realized as joint kernels of first-order constraint
//! pairs (`ker d ∩ ker delta` and friends). The two notions agree: every
//! Laplacian in play is the square of its constraint pair with respect to
//! the relevant (possibly weighted) pairing.

use crate::assemble::Component;
use crate::error::{FoliageError, Result};
use crate::form::BasicForm;
use crate::kernel::{
    lstsq, stable_joint_kernel, ConstraintOp, KernelSpace,
};
use crate::model::FoliationModel;
use crate::ops;
use faer::complex_native::c64;
use faer::Mat;
use num_complex::Complex64;

/// Residuals below this are a trivial cohomology class.
pub const CLASS_TOL: f64 = 1e-8;
/// Operator identities and residual witnesses must vanish to this tolerance.
pub const RESIDUAL_TOL: f64 = 1e-10;
/// Bandwidth headroom used when expanding the weight `exp(-f)`.
pub const WEIGHT_BANDWIDTH_PAD: i32 = 4;

/// The named harmonic spaces the tables are built from.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum HarmonicKind {
    /// `ker d_B ∩ ker delta_B`.
    Basic,
    /// `ker d_T ∩ ker delta_T`.
    Twisted,
    /// `ker delbar_B ∩ ker delbar_B^*` (Dolbeault).
    Dolbeault,
    /// `ker del_B ∩ ker delbar_B ∩ ker (del delbar)^*` (Bott–Chern type).
    DelDelbar,
    /// `ker (del delbar) ∩ ker del_B^* ∩ ker delbar_B^*` (Aeppli type).
    Aeppli,
}

/// Harmonic space of one component, with truncation-stability enforced.
pub fn harmonic_space(
    model: &FoliationModel,
    k: i32,
    component: Component,
    kind: HarmonicKind,
) -> Result<KernelSpace> {
    let what = format!("{kind:?} harmonic space on {component}");
    let run = |ops_list: &[ConstraintOp<'_>]| {
        stable_joint_kernel(model, k, component, ops_list, &what)
    };
    match kind {
        HarmonicKind::Basic => run(&[
            ConstraintOp {
                op: &|x| ops::d_b(model, x),
                codomain: shift_degree(component, 1),
            },
            ConstraintOp {
                op: &|x| ops::delta_b(model, x),
                codomain: shift_degree(component, -1),
            },
        ]),
        HarmonicKind::Twisted => run(&[
            ConstraintOp {
                op: &|x| ops::d_t(model, x),
                codomain: shift_degree(component, 1),
            },
            ConstraintOp {
                op: &|x| ops::delta_t(model, x),
                codomain: shift_degree(component, -1),
            },
        ]),
        HarmonicKind::Dolbeault => run(&[
            ConstraintOp {
                op: &|x| ops::delbar_b(model, x),
                codomain: shift_bidegree(component, 0, 1),
            },
            ConstraintOp {
                op: &|x| ops::delbar_b_star(model, x),
                codomain: shift_bidegree(component, 0, -1),
            },
        ]),
        HarmonicKind::DelDelbar => run(&[
            ConstraintOp {
                op: &|x| ops::del_b(model, x),
                codomain: shift_bidegree(component, 1, 0),
            },
            ConstraintOp {
                op: &|x| ops::delbar_b(model, x),
                codomain: shift_bidegree(component, 0, 1),
            },
            ConstraintOp {
                op: &|x| ops::del_delbar_star(model, x),
                codomain: shift_bidegree(component, -1, -1),
            },
        ]),
        HarmonicKind::Aeppli => run(&[
            ConstraintOp {
                op: &|x| ops::del_delbar(model, x),
                codomain: shift_bidegree(component, 1, 1),
            },
            ConstraintOp {
                op: &|x| ops::del_b_star(model, x),
                codomain: shift_bidegree(component, -1, 0),
            },
            ConstraintOp {
                op: &|x| ops::delbar_b_star(model, x),
                codomain: shift_bidegree(component, 0, -1),
            },
        ]),
    }
}

fn shift_degree(c: Component, dj: i32) -> Component {
    match c {
        Component::Degree(j) => Component::Degree(j + dj),
        Component::Bidegree(r, s) => Component::Degree(r + s + dj),
        Component::Full => Component::Full,
    }
}

fn shift_bidegree(c: Component, dr: i32, ds: i32) -> Component {
    match c {
        Component::Bidegree(r, s) => Component::Bidegree(r + dr, s + ds),
        Component::Degree(j) => Component::Degree(j + dr + ds),
        Component::Full => Component::Full,
    }
}

/// Basic Betti numbers `b_0 .. b_{2n}`.
pub fn betti_table(model: &FoliationModel, k: i32) -> Result<Vec<usize>> {
    (0..=2 * model.n() as i32)
        .map(|j| Ok(harmonic_space(model, k, Component::Degree(j), HarmonicKind::Basic)?.dim))
        .collect()
}

/// A bidegree-indexed table, `table[r][s]`.
pub type BidegreeTable = Vec<Vec<usize>>;

fn bidegree_table(model: &FoliationModel, k: i32, kind: HarmonicKind) -> Result<BidegreeTable> {
    let n = model.n() as i32;
    (0..=n)
        .map(|r| {
            (0..=n)
                .map(|s| {
                    Ok(harmonic_space(model, k, Component::Bidegree(r, s), kind)?.dim)
                })
                .collect()
        })
        .collect()
}

/// Dolbeault numbers `h^{r,s}`.
pub fn dolbeault_table(model: &FoliationModel, k: i32) -> Result<BidegreeTable> {
    require_hermitian(model)?;
    bidegree_table(model, k, HarmonicKind::Dolbeault)
}

/// Bott–Chern-type numbers from the `del delbar` triple kernel.
pub fn bott_chern_table(model: &FoliationModel, k: i32) -> Result<BidegreeTable> {
    require_hermitian(model)?;
    bidegree_table(model, k, HarmonicKind::DelDelbar)
}

/// Aeppli-type numbers.
pub fn aeppli_table(model: &FoliationModel, k: i32) -> Result<BidegreeTable> {
    require_hermitian(model)?;
    bidegree_table(model, k, HarmonicKind::Aeppli)
}

fn require_hermitian(model: &FoliationModel) -> Result<()> {
    if !model.flags().hermitian {
        return Err(FoliageError::Capability {
            required: "hermitian transverse structure".into(),
            model: model.name().into(),
        });
    }
    Ok(())
}

/// Weighted pairing `<<phi, psi>>_w = <<exp(-f) phi, psi>>`; the plain
/// pairing on undeformed models.
pub fn weighted_inner(
    model: &FoliationModel,
    k: i32,
    a: &BasicForm,
    b: &BasicForm,
) -> Complex64 {
    match model.deformation() {
        None => a.inner(b),
        Some(_) => {
            let w = model.weight(k + WEIGHT_BANDWIDTH_PAD);
            a.scale_fn(&w).inner(b)
        }
    }
}

/// The Álvarez class of the mean curvature.
pub struct AlvarezClass {
    /// Class verdict: is `kappa` exact (trivial class)?
    pub trivial: bool,
    /// `min_g |kappa - d_B g|` over truncated basic functions — the
    /// deformation-invariant size of the class.
    pub distance: f64,
    /// The same distance relative to `|kappa|`.
    pub exactness_residual: f64,
    /// Weighted norm of the projection of `kappa` onto the degree-one
    /// harmonic space, relative to the weighted norm of `kappa`.
    pub harmonic_fraction: f64,
    /// The harmonic part itself.
    pub harmonic_part: BasicForm,
}

/// Compute the Álvarez class at truncation `k`.
pub fn alvarez_class(model: &FoliationModel, k: i32) -> Result<AlvarezClass> {
    let kappa = model.kappa();
    if kappa.norm() <= RESIDUAL_TOL {
        return Ok(AlvarezClass {
            trivial: true,
            distance: 0.0,
            exactness_residual: 0.0,
            harmonic_fraction: 0.0,
            harmonic_part: model.zero_form(),
        });
    }
    // Exactness residual: kappa against the image of d_B on functions.
    // d_B is mode-diagonal on every model, so this assembly is exact.
    let d0 = crate::assemble::assemble(model, crate::ops::OperatorKind::DB, k, Component::Degree(0));
    debug_assert_eq!(d0.truncation_loss, 0.0);
    let (b, lost) = d0.codomain.project(kappa);
    debug_assert!(lost == 0.0, "mean curvature must live inside any band");
    let (_, res) = lstsq(&d0.mat, &b, 1e-12);
    let distance = res;
    let exactness_residual = res / kappa.norm();

    // Weighted projection onto the harmonic 1-forms.
    let h1 = harmonic_space(model, k, Component::Degree(1), HarmonicKind::Basic)?;
    let m = h1.dim;
    let mut harmonic_part = model.zero_form();
    let mut harmonic_fraction = 0.0;
    if m > 0 {
        let mut gram = Mat::<c64>::zeros(m, m);
        let mut rhs = vec![Complex64::new(0.0, 0.0); m];
        for i in 0..m {
            for j in 0..m {
                let v = weighted_inner(model, k, &h1.reps[i], &h1.reps[j]);
                gram[(i, j)] = c64::new(v.re, v.im);
            }
            rhs[i] = weighted_inner(model, k, &h1.reps[i], kappa);
        }
        let (c, _) = lstsq(&gram, &rhs, 1e-12);
        for (i, ci) in c.iter().enumerate() {
            harmonic_part = harmonic_part.add(&h1.reps[i].scale(*ci));
        }
        let pn = weighted_inner(model, k, &harmonic_part, &harmonic_part)
            .re
            .max(0.0)
            .sqrt();
        let kn = weighted_inner(model, k, kappa, kappa).re.max(0.0).sqrt();
        harmonic_fraction = if kn > 0.0 { pn / kn } else { 0.0 };
    }
    Ok(AlvarezClass {
        trivial: exactness_residual <= CLASS_TOL,
        distance,
        exactness_residual,
        harmonic_fraction,
        harmonic_part,
    })
}

/// The `eta` class `del_B kappa^{0,1}` and its triviality in the
/// `del delbar` sense.
pub struct EtaClass {
    pub form: BasicForm,
    pub trivial: bool,
    /// `min_h |del delbar h - eta|` — the deformation-invariant size of the
    /// class.
    pub distance: f64,
    /// The same distance relative to `|eta|` (zero when `eta` vanishes).
    pub residual: f64,
}

/// Compute the `eta` class at truncation `k`.
pub fn eta_class(model: &FoliationModel, k: i32) -> Result<EtaClass> {
    require_hermitian(model)?;
    let parts = model.mean_curvature_parts();
    let form = ops::del_b(model, &parts.kappa01);
    if form.norm() <= RESIDUAL_TOL {
        return Ok(EtaClass {
            form,
            trivial: true,
            distance: 0.0,
            residual: 0.0,
        });
    }
    // Potential equation del delbar h = eta over truncated functions;
    // del delbar is mode-diagonal, the assembly is exact.
    let dd = crate::assemble::FormBasis::for_model(model, k, Component::Degree(0));
    let cod = crate::assemble::FormBasis::for_model(model, k, Component::Bidegree(1, 1));
    let mut m = Mat::<c64>::zeros(cod.len(), dd.len());
    for j in 0..dd.len() {
        let (col, lost) = cod.project(&ops::del_delbar(model, &dd.form(j)));
        debug_assert!(lost == 0.0);
        for (i, v) in col.iter().enumerate() {
            if v.norm_sqr() > 0.0 {
                m[(i, j)] = c64::new(v.re, v.im);
            }
        }
    }
    let (b, lost) = cod.project(&form);
    debug_assert!(lost == 0.0, "eta is a band-limited (1,1)-form");
    let (_, res) = lstsq(&m, &b, 1e-12);
    let residual = res / form.norm();
    Ok(EtaClass {
        form,
        trivial: residual <= CLASS_TOL,
        distance: res,
        residual,
    })
}

/// Automorphy diagnostics of the mean curvature flow.
pub struct AutomorphyReport {
    /// Verdict: does the flow of `kappa^sharp` preserve the transverse
    /// complex structure (`[L_{kappa}, J] = 0`)?
    pub automorphic: bool,
    /// Operator norm of `[L_{kappa}, J]` over the truncated band.
    pub lie_residual: f64,
    /// Operator norm of the anticommutator `{delbar_B, H^{1,0} contraction}`.
    pub contract_residual: f64,
    /// Off-bidegree mass of the basic Laplacian: norm of
    /// `lap_B - sum_(r,s) P_(r,s) lap_B P_(r,s)`.
    pub laplacian_residual: f64,
    /// Real-coframe l1 norm of `{delbar_B, H^{1,0}} kappa^{1,0}`, the
    /// concrete obstruction witness.
    pub witness_l1: f64,
}

/// Operator norm of `op` on the truncated full band: exact per-mode blocks
/// on undeformed models, a truncated assembly otherwise.
pub fn operator_norm(
    model: &FoliationModel,
    k: i32,
    op: &dyn Fn(&BasicForm) -> BasicForm,
) -> f64 {
    let words = Component::Full.words(model.n());
    if model.is_deformed() {
        let basis = crate::assemble::FormBasis::for_model(model, k, Component::Full);
        let mut m = Mat::<c64>::zeros(basis.len(), basis.len());
        for j in 0..basis.len() {
            let (col, _) = basis.project(&op(&basis.form(j)));
            for (i, v) in col.iter().enumerate() {
                if v.norm_sqr() > 0.0 {
                    m[(i, j)] = c64::new(v.re, v.im);
                }
            }
        }
        crate::kernel::with_linalg_pool(|| m.singular_values())
            .first()
            .copied()
            .unwrap_or(0.0)
    } else {
        let mut worst = 0.0f64;
        for mode in crate::assemble::modes_up_to(model.dims(), k) {
            let (block, leak) = crate::assemble::mode_block(model, op, mode, &words, &words);
            debug_assert!(leak < 1e-10);
            let top = crate::kernel::with_linalg_pool(|| block.singular_values())
                .first()
                .copied()
                .unwrap_or(0.0);
            worst = worst.max(top);
        }
        worst
    }
}

/// Run the automorphy diagnostics at truncation `k`.
pub fn automorphic_test(model: &FoliationModel, k: i32) -> Result<AutomorphyReport> {
    let lie_residual = operator_norm(model, k, &|x| ops::lie_j_commutator(model, x));
    let anti = |x: &BasicForm| {
        ops::delbar_b(model, &ops::h10_contract(model, x))
            .add(&ops::h10_contract(model, &ops::delbar_b(model, x)))
    };
    let contract_residual = operator_norm(model, k, &anti);
    let off_diagonal = |x: &BasicForm| {
        let lap = ops::laplacian(model, ops::LaplacianKind::Basic, x);
        let n = model.n();
        let mut diag = model.zero_form();
        for r in 0..=n {
            for s in 0..=n {
                diag = diag.add(&ops::laplacian(
                    model,
                    ops::LaplacianKind::Basic,
                    &x.bidegree_project(r, s),
                )
                .bidegree_project(r, s));
            }
        }
        lap.sub(&diag)
    };
    let laplacian_residual = operator_norm(model, k, &off_diagonal);
    let witness = anti(&model.mean_curvature_parts().kappa10);
    let witness_l1 = witness.real_l1_norm();
    Ok(AutomorphyReport {
        automorphic: lie_residual <= RESIDUAL_TOL,
        lie_residual,
        contract_residual,
        laplacian_residual,
        witness_l1,
    })
}

/// Tautness diagnostic: the top basic class survives iff the foliation is
/// taut; equivalently the Álvarez class vanishes.
pub fn is_taut(model: &FoliationModel, k: i32) -> Result<bool> {
    let top = harmonic_space(
        model,
        k,
        Component::Degree(2 * model.n() as i32),
        HarmonicKind::Basic,
    )?;
    Ok(top.dim > 0)
}

/// Solve `del delbar h = g` in the least-squares sense over truncated
/// functions; returns the potential and the relative residual.
pub fn ddc_solve(model: &FoliationModel, k: i32, g: &BasicForm) -> Result<(BasicForm, f64)> {
    require_hermitian(model)?;
    let dom = crate::assemble::FormBasis::for_model(model, k, Component::Degree(0));
    let cod = crate::assemble::FormBasis::for_model(model, k, Component::Bidegree(1, 1));
    let mut m = Mat::<c64>::zeros(cod.len(), dom.len());
    for j in 0..dom.len() {
        let (col, _) = cod.project(&ops::del_delbar(model, &dom.form(j)));
        for (i, v) in col.iter().enumerate() {
            if v.norm_sqr() > 0.0 {
                m[(i, j)] = c64::new(v.re, v.im);
            }
        }
    }
    let (b, lost) = cod.project(g);
    if lost > RESIDUAL_TOL {
        return Err(FoliageError::Parse(format!(
            "right-hand side exceeds the K={k} band by {lost:.3e}"
        )));
    }
    let gn = g.norm();
    let (x, res) = lstsq(&m, &b, 1e-12);
    let h = dom.unproject(&x);
    Ok((h, if gn > 0.0 { res / gn } else { res }))
}

/// Kernel dimension of `del delbar` restricted to functions — the dimension
/// of the space of "pluriharmonic" truncated functions, reported alongside
/// the tables.
pub fn pluriharmonic_function_dim(model: &FoliationModel, k: i32) -> Result<usize> {
    Ok(harmonic_space(model, k, Component::Bidegree(0, 0), HarmonicKind::DelDelbar)?.dim)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::build_model;

    #[test]
    fn carriere_tables_and_classes() {
        let m = build_model::<f64>("carriere", None).unwrap();
        assert_eq!(betti_table(&m, 4).unwrap(), vec![1, 1, 0]);
        let dol = dolbeault_table(&m, 4).unwrap();
        assert_eq!(dol, vec![vec![1, 1], vec![0, 0]]);
        let bc = bott_chern_table(&m, 4).unwrap();
        assert_eq!(bc[1][1], 1);
        assert_eq!(bc[0][0], 1);
        let xi = alvarez_class(&m, 4).unwrap();
        assert!(!xi.trivial);
        assert!((xi.exactness_residual - 1.0).abs() < 1e-9);
        assert!((xi.harmonic_fraction - 1.0).abs() < 1e-9);
        let eta = eta_class(&m, 4).unwrap();
        assert!(!eta.trivial);
        let log_l = m.lambda().unwrap().ln();
        assert!((eta.form.norm() - log_l * log_l / 2.0).abs() < 1e-12);
        assert!(eta.residual > 0.9);
        assert!(!is_taut(&m, 4).unwrap());
        let auto = automorphic_test(&m, 3).unwrap();
        assert!(!auto.automorphic);
        assert!((auto.witness_l1 - log_l.powi(3) / 2.0).abs() < 1e-10);
    }

    #[test]
    fn taut_torus_is_taut_and_trivial() {
        let m = build_model::<f64>("taut_torus", None).unwrap();
        assert_eq!(betti_table(&m, 3).unwrap(), vec![1, 2, 1]);
        let xi = alvarez_class(&m, 3).unwrap();
        assert!(xi.trivial && xi.exactness_residual == 0.0);
        let eta = eta_class(&m, 3).unwrap();
        assert!(eta.trivial && eta.form.norm() == 0.0);
        assert!(is_taut(&m, 3).unwrap());
        let auto = automorphic_test(&m, 3).unwrap();
        assert!(auto.automorphic);
        assert!(auto.lie_residual < 1e-12);
        assert!(auto.laplacian_residual < 1e-10);
    }
}
