//! The Lefschetz `sl2` structure on basic forms: the raising operator `L`,
//! the lowering operator `Lambda`, the counting operator, primitive
//! decomposition, and hard-Lefschetz rank checks.
//!
//! `L` and `Lambda` act on coframe words alone — they commute with every
//! Fourier coefficient — so the representation theory happens on the
//! `4^n`-dimensional word space and extends coefficient-wise.

use crate::assemble::Component;
use crate::cohomology::{harmonic_space, weighted_inner, HarmonicKind};
use crate::error::{FoliageError, Result};
use crate::form::BasicForm;
use crate::fourier::FourierScalar;
use crate::kernel::{kernel_svd, lstsq, rank};
use crate::model::FoliationModel;
use crate::ops;
use crate::word::CoframeWord;
use faer::complex_native::c64;
use faer::Mat;
use num_complex::Complex64;

/// The counting operator `B = sum_d (n - d) P_d`.
pub fn counting_operator(model: &FoliationModel, a: &BasicForm) -> BasicForm {
    let n = model.n();
    let mut out = model.zero_form();
    for d in 0..=2 * n {
        out = out.add(&a.degree_project(d).scale_re(n as f64 - d as f64));
    }
    out
}

/// Residuals of the `sl2` commutation relations on the truncated band.
pub struct Sl2Residuals {
    /// `|[Lambda, L] - B|`.
    pub bracket_counting: f64,
    /// `|[B, L] + 2 L|`.
    pub bracket_raise: f64,
    /// `|[B, Lambda] - 2 Lambda|`.
    pub bracket_lower: f64,
}

/// Verify the `sl2` relations as operator norms at truncation `k`.
pub fn sl2_check(model: &FoliationModel, k: i32) -> Sl2Residuals {
    let comm_ll = |x: &BasicForm| {
        ops::lambda_dual(model, &ops::lefschetz_l(model, x))
            .sub(&ops::lefschetz_l(model, &ops::lambda_dual(model, x)))
            .sub(&counting_operator(model, x))
    };
    let comm_bl = |x: &BasicForm| {
        counting_operator(model, &ops::lefschetz_l(model, x))
            .sub(&ops::lefschetz_l(model, &counting_operator(model, x)))
            .add(&ops::lefschetz_l(model, x).scale_re(2.0))
    };
    let comm_blam = |x: &BasicForm| {
        counting_operator(model, &ops::lambda_dual(model, x))
            .sub(&ops::lambda_dual(model, &counting_operator(model, x)))
            .sub(&ops::lambda_dual(model, x).scale_re(2.0))
    };
    Sl2Residuals {
        bracket_counting: crate::cohomology::operator_norm(model, k, &comm_ll),
        bracket_raise: crate::cohomology::operator_norm(model, k, &comm_bl),
        bracket_lower: crate::cohomology::operator_norm(model, k, &comm_blam),
    }
}

/// Word-space matrix of a coefficient-blind operator.
fn word_matrix(model: &FoliationModel, op: &dyn Fn(&BasicForm) -> BasicForm) -> Mat<c64> {
    let words = CoframeWord::all(model.n());
    let mut m = Mat::<c64>::zeros(words.len(), words.len());
    for (j, w) in words.iter().enumerate() {
        let img = op(&BasicForm::word_const(
            model.n(),
            model.dims(),
            *w,
            Complex64::new(1.0, 0.0),
        ));
        for (iw, f) in img.terms() {
            let i = words.iter().position(|x| x == iw).expect("image stays in the word space");
            let c = f.coeff(&crate::fourier::Mode::zero());
            m[(i, j)] = c64::new(c.re, c.im);
        }
    }
    m
}

/// A primitive decomposition `a = sum_j L^j p[j]` with `Lambda p[j] = 0`.
pub struct PrimitiveDecomposition {
    /// `p[j]` is the primitive form wedged by the `j`-th Lefschetz power.
    pub primitives: Vec<BasicForm>,
    /// Reconstruction defect `|a - sum_j L^j p[j]|`.
    pub residual: f64,
}

/// Decompose a form into Lefschetz powers of primitive forms.
pub fn primitive_decompose(
    model: &FoliationModel,
    a: &BasicForm,
) -> Result<PrimitiveDecomposition> {
    let n = model.n();
    let words = CoframeWord::all(n);
    let nw = words.len();
    let l_mat = word_matrix(model, &|x| ops::lefschetz_l(model, x));
    let lam_mat = word_matrix(model, &|x| ops::lambda_dual(model, x));

    // Primitive word vectors, tagged with the Lefschetz powers applied to
    // them; the columns L^j p enumerate a basis of the whole word space.
    let prim = kernel_svd(&lam_mat, 1e-12);
    // Columns are (power j, raised vector L^j p, primitive vector p).
    let mut cols: Vec<(usize, Vec<Complex64>, Vec<Complex64>)> = Vec::new();
    for c in 0..prim.dim {
        let p: Vec<Complex64> = (0..nw).map(|r| prim.basis[(r, c)].to_num_complex()).collect();
        let mut v = p.clone();
        for j in 0..=n {
            if v.iter().any(|x| x.norm_sqr() > 1e-24) {
                cols.push((j, v.clone(), p.clone()));
            }
            // v <- L v
            let mut next = vec![Complex64::new(0.0, 0.0); nw];
            for (col, vc) in v.iter().enumerate() {
                if vc.norm_sqr() == 0.0 {
                    continue;
                }
                for row in 0..nw {
                    let lv = l_mat[(row, col)].to_num_complex();
                    if lv.norm_sqr() > 0.0 {
                        next[row] += lv * vc;
                    }
                }
            }
            v = next;
        }
    }
    let mut basis = Mat::<c64>::zeros(nw, cols.len());
    for (j, (_, v, _)) in cols.iter().enumerate() {
        for r in 0..nw {
            basis[(r, j)] = c64::new(v[r].re, v[r].im);
        }
    }

    // Solve per mode and reassemble the primitive pieces.
    let mut primitives = vec![model.zero_form(); n + 1];
    let mut modes: std::collections::BTreeSet<crate::fourier::Mode> = Default::default();
    for (_, f) in a.terms() {
        for (m, _) in f.iter() {
            modes.insert(*m);
        }
    }
    for mode in modes {
        let mut v = vec![Complex64::new(0.0, 0.0); nw];
        for (w, f) in a.terms() {
            let i = words.iter().position(|x| x == w).unwrap();
            v[i] = f.coeff(&mode);
        }
        let (x, res) = lstsq(&basis, &v, 1e-12);
        if res > 1e-9 * v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt().max(1.0) {
            return Err(FoliageError::InvalidMatrix(format!(
                "primitive expansion failed at residual {res:.3e}"
            )));
        }
        for (ci, (j, _, pv)) in cols.iter().enumerate() {
            if x[ci].norm_sqr() == 0.0 {
                continue;
            }
            for (r, pc) in pv.iter().enumerate() {
                let coef = x[ci] * pc;
                if coef.norm_sqr() > 0.0 {
                    primitives[*j].add_word(
                        words[r],
                        &FourierScalar::monomial(model.dims(), mode, coef),
                    );
                }
            }
        }
    }

    // Reconstruction check.
    let mut recon = model.zero_form();
    for (j, p) in primitives.iter().enumerate() {
        let mut t = p.clone();
        for _ in 0..j {
            t = ops::lefschetz_l(model, &t);
        }
        recon = recon.add(&t);
    }
    let residual = recon.sub(a).norm();
    Ok(PrimitiveDecomposition {
        primitives,
        residual,
    })
}

/// Where a Lefschetz power map is evaluated.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum LefschetzLevel {
    /// `L^(n-j)` on degree-`j` words (pointwise on forms).
    Forms,
    /// The induced map on basic cohomology via harmonic representatives;
    /// requires the transverse Kähler structure.
    Cohomology,
}

/// Rank evidence for the hard-Lefschetz map `L^(n-j)` out of degree `j`.
pub struct LefschetzRank {
    pub j: usize,
    pub power: usize,
    pub rank: usize,
    pub domain_dim: usize,
    pub codomain_dim: usize,
    /// Whether the map is an isomorphism of the two spaces.
    pub bijective: bool,
}

/// Rank of `L^(n-j)`: on word spaces (`Forms`) or on basic cohomology
/// (`Cohomology`, transversely Kähler models only).
pub fn lefschetz_rank(
    model: &FoliationModel,
    k: i32,
    j: usize,
    level: LefschetzLevel,
) -> Result<LefschetzRank> {
    let n = model.n();
    if j > n {
        return Err(FoliageError::ComponentOutOfRange(format!("degree {j}"), 2 * n));
    }
    let power = n - j;
    match level {
        LefschetzLevel::Forms => {
            let l_mat = word_matrix(model, &|x| ops::lefschetz_l(model, x));
            let dom: Vec<usize> = index_of_degree(model.n(), j);
            let cod: Vec<usize> = index_of_degree(model.n(), 2 * n - j);
            // L^power restricted to degree-j columns.
            let mut m = Mat::<c64>::zeros(CoframeWord::all(n).len(), dom.len());
            for (c, &wi) in dom.iter().enumerate() {
                m[(wi, c)] = c64::new(1.0, 0.0);
            }
            let mut cur = m;
            for _ in 0..power {
                cur = &l_mat * &cur;
            }
            let mut restr = Mat::<c64>::zeros(cod.len(), dom.len());
            for (r, &wi) in cod.iter().enumerate() {
                for c in 0..dom.len() {
                    restr[(r, c)] = cur[(wi, c)];
                }
            }
            let rk = rank(&restr, 1e-10);
            Ok(LefschetzRank {
                j,
                power,
                rank: rk,
                domain_dim: dom.len(),
                codomain_dim: cod.len(),
                bijective: rk == dom.len() && dom.len() == cod.len(),
            })
        }
        LefschetzLevel::Cohomology => {
            if !model.flags().kahler {
                return Err(FoliageError::Capability {
                    required: "transverse Kahler structure".into(),
                    model: model.name().into(),
                });
            }
            let dom = harmonic_space(model, k, Component::Degree(j as i32), HarmonicKind::Basic)?;
            let cod = harmonic_space(
                model,
                k,
                Component::Degree((2 * n - j) as i32),
                HarmonicKind::Basic,
            )?;
            // Class of L^power h_i, expanded against the harmonic basis of
            // the target degree in the weighted pairing.
            let mut m = Mat::<c64>::zeros(cod.dim, dom.dim);
            for (c, h) in dom.reps.iter().enumerate() {
                let mut img = h.clone();
                for _ in 0..power {
                    img = ops::lefschetz_l(model, &img);
                }
                for (r, g) in cod.reps.iter().enumerate() {
                    let v = weighted_inner(model, k, g, &img);
                    m[(r, c)] = c64::new(v.re, v.im);
                }
            }
            let rk = rank(&m, 1e-10);
            Ok(LefschetzRank {
                j,
                power,
                rank: rk,
                domain_dim: dom.dim,
                codomain_dim: cod.dim,
                bijective: rk == dom.dim && dom.dim == cod.dim,
            })
        }
    }
}

fn index_of_degree(n: usize, d: usize) -> Vec<usize> {
    CoframeWord::all(n)
        .iter()
        .enumerate()
        .filter(|(_, w)| w.degree() == d)
        .map(|(i, _)| i)
        .collect()
}
