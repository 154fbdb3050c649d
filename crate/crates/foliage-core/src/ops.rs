//! The operator calculus on basic forms.
//!
//! Primal operators (`d_B`, its twisted companion `d_T = d_B - eps(kappa)`,
//! the bidegree pieces `del`, `delbar` of both) act by exact Leibniz
//! expansion against the model structure equations. Codifferentials come from
//! the star conjugation rules
//!
//! ```text
//! delta_B  = -star d_T  star        delta_T  = -star d_B  star
//! del_B^*  = -star delbar_T star    delbar_B^* = -star del_T star
//! del_T^*  = -star delbar_B star    delbar_T^* = -star del_B star
//! ```
//!
//! which swap the basic/twisted pair and the bar. On an undeformed model
//! these are the `L^2` adjoints; after a leafwise deformation the same
//! formulas (with the deformed mean curvature inside `d_T`) produce the
//! adjoints of the weighted pairing.

use crate::error::{FoliageError, Result};
use crate::form::BasicForm;
use crate::model::FoliationModel;
use crate::scalar::Scalar;
use crate::star::hodge_star;
use crate::word::{CoframeWord, Letter};
use num_complex::Complex;

/// Every operator the assembler and the CLI can name.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum OperatorKind {
    DB,
    DT,
    DelB,
    DelbarB,
    DelT,
    DelbarT,
    DeltaB,
    DeltaT,
    DelBStar,
    DelbarBStar,
    DelTStar,
    DelbarTStar,
    L,
    Lambda,
    J,
    C,
    Dc,
    DcStar,
    EpsKappa,
    EpsKappa10,
    EpsKappa01,
    H10Contract,
    H01Contract,
    KappaSharpContract,
    LapB,
    LapT,
    BoxB,
    BoxbarB,
    LapDelQ,
    LapDelbarQ,
    LapDelDelbar,
    LapDc,
}

impl OperatorKind {
    pub const ALL: [OperatorKind; 32] = [
        OperatorKind::DB,
        OperatorKind::DT,
        OperatorKind::DelB,
        OperatorKind::DelbarB,
        OperatorKind::DelT,
        OperatorKind::DelbarT,
        OperatorKind::DeltaB,
        OperatorKind::DeltaT,
        OperatorKind::DelBStar,
        OperatorKind::DelbarBStar,
        OperatorKind::DelTStar,
        OperatorKind::DelbarTStar,
        OperatorKind::L,
        OperatorKind::Lambda,
        OperatorKind::J,
        OperatorKind::C,
        OperatorKind::Dc,
        OperatorKind::DcStar,
        OperatorKind::EpsKappa,
        OperatorKind::EpsKappa10,
        OperatorKind::EpsKappa01,
        OperatorKind::H10Contract,
        OperatorKind::H01Contract,
        OperatorKind::KappaSharpContract,
        OperatorKind::LapB,
        OperatorKind::LapT,
        OperatorKind::BoxB,
        OperatorKind::BoxbarB,
        OperatorKind::LapDelQ,
        OperatorKind::LapDelbarQ,
        OperatorKind::LapDelDelbar,
        OperatorKind::LapDc,
    ];

    /// CLI / export spelling.
    pub fn name(&self) -> &'static str {
        match self {
            OperatorKind::DB => "d_B",
            OperatorKind::DT => "d_T",
            OperatorKind::DelB => "del_B",
            OperatorKind::DelbarB => "delbar_B",
            OperatorKind::DelT => "del_T",
            OperatorKind::DelbarT => "delbar_T",
            OperatorKind::DeltaB => "delta_B",
            OperatorKind::DeltaT => "delta_T",
            OperatorKind::DelBStar => "del_B_star",
            OperatorKind::DelbarBStar => "delbar_B_star",
            OperatorKind::DelTStar => "del_T_star",
            OperatorKind::DelbarTStar => "delbar_T_star",
            OperatorKind::L => "L",
            OperatorKind::Lambda => "Lambda",
            OperatorKind::J => "J",
            OperatorKind::C => "C",
            OperatorKind::Dc => "d_c",
            OperatorKind::DcStar => "d_c_star",
            OperatorKind::EpsKappa => "eps_kappa",
            OperatorKind::EpsKappa10 => "eps_kappa_10",
            OperatorKind::EpsKappa01 => "eps_kappa_01",
            OperatorKind::H10Contract => "h10_contract",
            OperatorKind::H01Contract => "h01_contract",
            OperatorKind::KappaSharpContract => "kappa_sharp_contract",
            OperatorKind::LapB => "lap_B",
            OperatorKind::LapT => "lap_T",
            OperatorKind::BoxB => "box_B",
            OperatorKind::BoxbarB => "boxbar_B",
            OperatorKind::LapDelQ => "lap_del_Q",
            OperatorKind::LapDelbarQ => "lap_delbar_Q",
            OperatorKind::LapDelDelbar => "lap_del_delbar",
            OperatorKind::LapDc => "lap_dc",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .find(|k| k.name() == s)
            .copied()
            .ok_or_else(|| FoliageError::UnknownOperator(s.into()))
    }

    /// Total-degree shift of the operator.
    pub fn degree_shift(&self) -> isize {
        match self {
            OperatorKind::DB
            | OperatorKind::DT
            | OperatorKind::DelB
            | OperatorKind::DelbarB
            | OperatorKind::DelT
            | OperatorKind::DelbarT
            | OperatorKind::Dc
            | OperatorKind::EpsKappa
            | OperatorKind::EpsKappa10
            | OperatorKind::EpsKappa01 => 1,
            OperatorKind::DeltaB
            | OperatorKind::DeltaT
            | OperatorKind::DelBStar
            | OperatorKind::DelbarBStar
            | OperatorKind::DelTStar
            | OperatorKind::DelbarTStar
            | OperatorKind::DcStar
            | OperatorKind::H10Contract
            | OperatorKind::H01Contract
            | OperatorKind::KappaSharpContract => -1,
            OperatorKind::L => 2,
            OperatorKind::Lambda => -2,
            _ => 0,
        }
    }

    /// Bidegree shift when the operator is bidegree pure.
    pub fn bidegree_shift(&self) -> Option<(isize, isize)> {
        match self {
            OperatorKind::DelB | OperatorKind::DelT | OperatorKind::EpsKappa10 => Some((1, 0)),
            OperatorKind::DelbarB | OperatorKind::DelbarT | OperatorKind::EpsKappa01 => {
                Some((0, 1))
            }
            OperatorKind::DelBStar | OperatorKind::DelTStar | OperatorKind::H10Contract => {
                Some((-1, 0))
            }
            OperatorKind::DelbarBStar
            | OperatorKind::DelbarTStar
            | OperatorKind::H01Contract => Some((0, -1)),
            OperatorKind::L => Some((1, 1)),
            OperatorKind::Lambda => Some((-1, -1)),
            OperatorKind::J
            | OperatorKind::C
            | OperatorKind::BoxB
            | OperatorKind::BoxbarB
            | OperatorKind::LapDelQ
            | OperatorKind::LapDelbarQ
            | OperatorKind::LapDelDelbar => Some((0, 0)),
            _ => None,
        }
    }
}

/// Exterior derivative of a single letter.
fn d_letter<S: Scalar>(model: &FoliationModel<S>, l: Letter) -> BasicForm<S> {
    if l.barred {
        model.d_omega(l.index).conjugate()
    } else {
        model.d_omega(l.index).clone()
    }
}

/// Basic exterior derivative.
pub fn d_b<S: Scalar>(model: &FoliationModel<S>, a: &BasicForm<S>) -> BasicForm<S> {
    let mut out = model.zero_form();
    let one = Complex::new(S::one(), S::zero());
    for (w, f) in a.terms() {
        // df ^ w
        let word_form = BasicForm::word_const(model.n(), model.dims(), *w, one);
        out = out.add(&model.d_scalar(f).wedge(&word_form));
        // f dw via Leibniz over letters: the term for letter i is
        // (-1)^i  l_0 ^ ... ^ l_{i-1} ^ d(l_i) ^ l_{i+1} ^ ... .
        let letters = w.letters();
        for i in 0..letters.len() {
            let mut pre = 0u32;
            let mut suf = 0u32;
            for (j, lj) in letters.iter().enumerate() {
                match j.cmp(&i) {
                    std::cmp::Ordering::Less => pre |= lj.bit(),
                    std::cmp::Ordering::Greater => suf |= lj.bit(),
                    std::cmp::Ordering::Equal => {}
                }
            }
            let pre_f =
                BasicForm::word_const(model.n(), model.dims(), CoframeWord::from_mask(pre), one);
            let suf_f =
                BasicForm::word_const(model.n(), model.dims(), CoframeWord::from_mask(suf), one);
            let mut term = pre_f.wedge(&d_letter(model, letters[i])).wedge(&suf_f);
            if i % 2 == 1 {
                term = term.scale_re(-S::one());
            }
            out = out.add(&term.scale_fn(f));
        }
    }
    out
}

/// Twisted derivative `d_T = d_B - eps(kappa)`.
pub fn d_t<S: Scalar>(model: &FoliationModel<S>, a: &BasicForm<S>) -> BasicForm<S> {
    d_b(model, a).sub(&model.kappa().wedge(a))
}

/// Bidegree-shift slice of an operator: apply `op` to each pure component and
/// keep the `(r + dr, s + ds)` part of the image.
fn bidegree_slice<S: Scalar>(
    a: &BasicForm<S>,
    dr: isize,
    ds: isize,
    op: impl Fn(&BasicForm<S>) -> BasicForm<S>,
) -> BasicForm<S> {
    let n = a.n() as isize;
    let mut out = BasicForm::zero(a.n(), a.dims());
    let mut seen = std::collections::BTreeSet::new();
    for (w, _) in a.terms() {
        let (r, s) = w.bidegree();
        if !seen.insert((r, s)) {
            continue;
        }
        let (tr, ts) = (r as isize + dr, s as isize + ds);
        if tr < 0 || ts < 0 || tr > n || ts > n {
            continue;
        }
        let img = op(&a.bidegree_project(r, s));
        out = out.add(&img.bidegree_project(tr as usize, ts as usize));
    }
    out
}

/// `(1,0)` part of `d_B`.
pub fn del_b<S: Scalar>(model: &FoliationModel<S>, a: &BasicForm<S>) -> BasicForm<S> {
    bidegree_slice(a, 1, 0, |x| d_b(model, x))
}

/// `(0,1)` part of `d_B`.
pub fn delbar_b<S: Scalar>(model: &FoliationModel<S>, a: &BasicForm<S>) -> BasicForm<S> {
    bidegree_slice(a, 0, 1, |x| d_b(model, x))
}

/// `(1,0)` part of `d_T`, equal to `del_B - eps(kappa^{1,0})`.
pub fn del_t<S: Scalar>(model: &FoliationModel<S>, a: &BasicForm<S>) -> BasicForm<S> {
    bidegree_slice(a, 1, 0, |x| d_t(model, x))
}

/// `(0,1)` part of `d_T`.
pub fn delbar_t<S: Scalar>(model: &FoliationModel<S>, a: &BasicForm<S>) -> BasicForm<S> {
    bidegree_slice(a, 0, 1, |x| d_t(model, x))
}

fn minus_star_op_star<S: Scalar>(
    a: &BasicForm<S>,
    op: impl Fn(&BasicForm<S>) -> BasicForm<S>,
) -> BasicForm<S> {
    hodge_star(&op(&hodge_star(a))).scale_re(-S::one())
}

/// Codifferential of `d_B`.
pub fn delta_b<S: Scalar>(model: &FoliationModel<S>, a: &BasicForm<S>) -> BasicForm<S> {
    minus_star_op_star(a, |x| d_t(model, x))
}

/// Codifferential of `d_T`.
pub fn delta_t<S: Scalar>(model: &FoliationModel<S>, a: &BasicForm<S>) -> BasicForm<S> {
    minus_star_op_star(a, |x| d_b(model, x))
}

/// Adjoint of `del_B`.
pub fn del_b_star<S: Scalar>(model: &FoliationModel<S>, a: &BasicForm<S>) -> BasicForm<S> {
    minus_star_op_star(a, |x| delbar_t(model, x))
}

/// Adjoint of `delbar_B`.
pub fn delbar_b_star<S: Scalar>(model: &FoliationModel<S>, a: &BasicForm<S>) -> BasicForm<S> {
    minus_star_op_star(a, |x| del_t(model, x))
}

/// Adjoint of `del_T`.
pub fn del_t_star<S: Scalar>(model: &FoliationModel<S>, a: &BasicForm<S>) -> BasicForm<S> {
    minus_star_op_star(a, |x| delbar_b(model, x))
}

/// Adjoint of `delbar_T`.
pub fn delbar_t_star<S: Scalar>(model: &FoliationModel<S>, a: &BasicForm<S>) -> BasicForm<S> {
    minus_star_op_star(a, |x| del_b(model, x))
}

/// Lefschetz raising operator, wedge with the fundamental form.
pub fn lefschetz_l<S: Scalar>(model: &FoliationModel<S>, a: &BasicForm<S>) -> BasicForm<S> {
    model.omega_form().wedge(a)
}

/// Lefschetz lowering operator, the `L^2` adjoint of `lefschetz_l`:
/// `-i sum_a iota(V_a) iota(conj-V_a)`.
pub fn lambda_dual<S: Scalar>(model: &FoliationModel<S>, a: &BasicForm<S>) -> BasicForm<S> {
    let mut out = model.zero_form();
    for idx in 1..=model.n() {
        let inner = contract_letter(a, Letter { index: idx, barred: true });
        let outer = contract_letter(&inner, Letter { index: idx, barred: false });
        out = out.add(&outer);
    }
    out.scale(Complex::new(S::zero(), -S::one()))
}

/// Interior product by a single frame vector.
fn contract_letter<S: Scalar>(a: &BasicForm<S>, l: Letter) -> BasicForm<S> {
    let mut out = BasicForm::zero(a.n(), a.dims());
    for (w, f) in a.terms() {
        if let Some((sign, rest)) = w.contract(l) {
            let g = if sign < 0 { f.scale_re(-S::one()) } else { f.clone() };
            out.add_word(rest, &g);
        }
    }
    out
}

/// `d_c = i (delbar_B - del_B)`; equals `C^{-1} d_B C` when the structure is
/// integrable.
pub fn d_c_op<S: Scalar>(model: &FoliationModel<S>, a: &BasicForm<S>) -> BasicForm<S> {
    delbar_b(model, a)
        .sub(&del_b(model, a))
        .scale(Complex::new(S::zero(), S::one()))
}

/// Adjoint of `d_c`: `i (del_B^* - delbar_B^*)`.
pub fn d_c_star_op<S: Scalar>(model: &FoliationModel<S>, a: &BasicForm<S>) -> BasicForm<S> {
    del_b_star(model, a)
        .sub(&delbar_b_star(model, a))
        .scale(Complex::new(S::zero(), S::one()))
}

/// Interior product by the mean curvature field `kappa^sharp`.
pub fn kappa_sharp_contract<S: Scalar>(
    model: &FoliationModel<S>,
    a: &BasicForm<S>,
) -> BasicForm<S> {
    if model.kappa().is_zero() {
        return model.zero_form();
    }
    BasicForm::contract(&model.kappa().word_swap(), a)
}

/// Interior product by `H^{1,0} = (kappa^{0,1})^sharp`.
pub fn h10_contract<S: Scalar>(model: &FoliationModel<S>, a: &BasicForm<S>) -> BasicForm<S> {
    let h10 = model.mean_curvature_parts().h10;
    if h10.is_zero() {
        return model.zero_form();
    }
    BasicForm::contract(&h10, a)
}

/// Interior product by `H^{0,1}`.
pub fn h01_contract<S: Scalar>(model: &FoliationModel<S>, a: &BasicForm<S>) -> BasicForm<S> {
    let h01 = model.mean_curvature_parts().h01;
    if h01.is_zero() {
        return model.zero_form();
    }
    BasicForm::contract(&h01, a)
}

/// Lie derivative along the mean curvature field, by the Cartan formula.
pub fn lie_kappa<S: Scalar>(model: &FoliationModel<S>, a: &BasicForm<S>) -> BasicForm<S> {
    let ik = |x: &BasicForm<S>| kappa_sharp_contract(model, x);
    d_b(model, &ik(a)).add(&ik(&d_b(model, a)))
}

/// `[L_{kappa^sharp}, J]`, the automorphy witness of the mean curvature.
pub fn lie_j_commutator<S: Scalar>(model: &FoliationModel<S>, a: &BasicForm<S>) -> BasicForm<S> {
    lie_kappa(model, &a.j_apply()).sub(&lie_kappa(model, a).j_apply())
}

/// Derivation-extension oracle for `J`:
/// `sum_a eps(J theta^a) iota(E_a) + eps(theta^a) iota(J E_a)` over the real
/// frame. Exists to cross-check the bidegree scalar rule.
pub fn j_frame_sum<S: Scalar>(model: &FoliationModel<S>, a: &BasicForm<S>) -> BasicForm<S> {
    let n = model.n();
    let dims = model.dims();
    let h = crate::scalar::inv_sqrt2::<S>();
    let i = Complex::new(S::zero(), S::one());
    let mut out = model.zero_form();
    for idx in 1..=n {
        // theta^a and J theta^a as forms.
        let mut th = BasicForm::zero(n, dims);
        th.add_word(
            CoframeWord::letter(idx, false),
            &crate::fourier::FourierScalar::constant(dims, Complex::new(h, S::zero())),
        );
        th.add_word(
            CoframeWord::letter(idx, true),
            &crate::fourier::FourierScalar::constant(dims, Complex::new(h, S::zero())),
        );
        let mut jth = BasicForm::zero(n, dims);
        jth.add_word(
            CoframeWord::letter(idx, false),
            &crate::fourier::FourierScalar::constant(dims, -i * h),
        );
        jth.add_word(
            CoframeWord::letter(idx, true),
            &crate::fourier::FourierScalar::constant(dims, i * h),
        );
        // iota(E_a) uses theta^a as the letter-matching argument, iota(J E_a)
        // uses J theta^a.
        out = out.add(&jth.wedge(&BasicForm::contract(&th, a)));
        out = out.add(&th.wedge(&BasicForm::contract(&jth, a)));
    }
    out
}

/// Named Laplacian variants.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum LaplacianKind {
    Basic,
    Twisted,
    Box,
    Boxbar,
    DelQ,
    DelbarQ,
    DelDelbar,
    Dc,
}

/// Apply a Laplacian.
pub fn laplacian<S: Scalar>(
    model: &FoliationModel<S>,
    which: LaplacianKind,
    a: &BasicForm<S>,
) -> BasicForm<S> {
    match which {
        LaplacianKind::Basic => d_b(model, &delta_b(model, a)).add(&delta_b(model, &d_b(model, a))),
        LaplacianKind::Twisted => {
            d_t(model, &delta_t(model, a)).add(&delta_t(model, &d_t(model, a)))
        }
        LaplacianKind::Box => {
            del_b(model, &del_b_star(model, a)).add(&del_b_star(model, &del_b(model, a)))
        }
        LaplacianKind::Boxbar => delbar_b(model, &delbar_b_star(model, a))
            .add(&delbar_b_star(model, &delbar_b(model, a))),
        LaplacianKind::DelQ => {
            del_b(model, &del_t_star(model, a)).add(&del_t_star(model, &del_b(model, a)))
        }
        LaplacianKind::DelbarQ => delbar_b(model, &delbar_t_star(model, a))
            .add(&delbar_t_star(model, &delbar_b(model, a))),
        LaplacianKind::DelDelbar => {
            let dd = |x: &BasicForm<S>| del_b(model, &delbar_b(model, x));
            let dd_star = |x: &BasicForm<S>| delbar_b_star(model, &del_b_star(model, x));
            dd(&dd_star(a)).add(&dd_star(&dd(a)))
        }
        LaplacianKind::Dc => {
            d_c_op(model, &d_c_star_op(model, a)).add(&d_c_star_op(model, &d_c_op(model, a)))
        }
    }
}

/// `del_B delbar_B` (used by the class tests and the potential solver).
pub fn del_delbar<S: Scalar>(model: &FoliationModel<S>, a: &BasicForm<S>) -> BasicForm<S> {
    del_b(model, &delbar_b(model, a))
}

/// Adjoint of `del_B delbar_B`.
pub fn del_delbar_star<S: Scalar>(model: &FoliationModel<S>, a: &BasicForm<S>) -> BasicForm<S> {
    delbar_b_star(model, &del_b_star(model, a))
}

/// The real coframe letter `theta^a` expressed in the complex coframe.
pub fn theta_form<S: Scalar>(m: &FoliationModel<S>, a: usize) -> BasicForm<S> {
    let h = Complex::new(S::lit(std::f64::consts::FRAC_1_SQRT_2), S::zero());
    let mut out = m.zero_form();
    out.add_word(
        CoframeWord::letter(a, false),
        &crate::fourier::FourierScalar::constant(m.dims(), h),
    );
    out.add_word(
        CoframeWord::letter(a, true),
        &crate::fourier::FourierScalar::constant(m.dims(), h),
    );
    out
}

/// The rotated coframe letter `J theta^a`.
pub fn j_theta_form<S: Scalar>(m: &FoliationModel<S>, a: usize) -> BasicForm<S> {
    let h = S::lit(std::f64::consts::FRAC_1_SQRT_2);
    let mut out = m.zero_form();
    out.add_word(
        CoframeWord::letter(a, false),
        &crate::fourier::FourierScalar::constant(m.dims(), Complex::new(S::zero(), -h)),
    );
    out.add_word(
        CoframeWord::letter(a, true),
        &crate::fourier::FourierScalar::constant(m.dims(), Complex::new(S::zero(), h)),
    );
    out
}

/// Apply any named operator.
pub fn apply<S: Scalar>(
    model: &FoliationModel<S>,
    kind: OperatorKind,
    a: &BasicForm<S>,
) -> BasicForm<S> {
    match kind {
        OperatorKind::DB => d_b(model, a),
        OperatorKind::DT => d_t(model, a),
        OperatorKind::DelB => del_b(model, a),
        OperatorKind::DelbarB => delbar_b(model, a),
        OperatorKind::DelT => del_t(model, a),
        OperatorKind::DelbarT => delbar_t(model, a),
        OperatorKind::DeltaB => delta_b(model, a),
        OperatorKind::DeltaT => delta_t(model, a),
        OperatorKind::DelBStar => del_b_star(model, a),
        OperatorKind::DelbarBStar => delbar_b_star(model, a),
        OperatorKind::DelTStar => del_t_star(model, a),
        OperatorKind::DelbarTStar => delbar_t_star(model, a),
        OperatorKind::L => lefschetz_l(model, a),
        OperatorKind::Lambda => lambda_dual(model, a),
        OperatorKind::J => a.j_apply(),
        OperatorKind::C => a.c_weil(false),
        OperatorKind::Dc => d_c_op(model, a),
        OperatorKind::DcStar => d_c_star_op(model, a),
        OperatorKind::EpsKappa => model.kappa().wedge(a),
        OperatorKind::EpsKappa10 => model.mean_curvature_parts().kappa10.wedge(a),
        OperatorKind::EpsKappa01 => model.mean_curvature_parts().kappa01.wedge(a),
        OperatorKind::H10Contract => h10_contract(model, a),
        OperatorKind::H01Contract => h01_contract(model, a),
        OperatorKind::KappaSharpContract => kappa_sharp_contract(model, a),
        OperatorKind::LapB => laplacian(model, LaplacianKind::Basic, a),
        OperatorKind::LapT => laplacian(model, LaplacianKind::Twisted, a),
        OperatorKind::BoxB => laplacian(model, LaplacianKind::Box, a),
        OperatorKind::BoxbarB => laplacian(model, LaplacianKind::Boxbar, a),
        OperatorKind::LapDelQ => laplacian(model, LaplacianKind::DelQ, a),
        OperatorKind::LapDelbarQ => laplacian(model, LaplacianKind::DelbarQ, a),
        OperatorKind::LapDelDelbar => laplacian(model, LaplacianKind::DelDelbar, a),
        OperatorKind::LapDc => laplacian(model, LaplacianKind::Dc, a),
    }
}
