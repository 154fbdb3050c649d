//! Dense kernel, rank, and least-squares machinery on assembled operators.
//!
//! Two computation paths share one interface:
//!
//! * **Exact per-mode path** (undeformed models): every operator is
//!   mode-diagonal, so a joint kernel decomposes as a direct sum over modes
//!   of small word-space blocks. Each block is exact — no truncation enters
//!   at all — and kernels come from singular value decompositions with a
//!   tight relative cut.
//! * **Truncated path** (leafwise-deformed models): deformed codifferentials
//!   couple modes, so operators are assembled over the whole truncated basis
//!   and images falling outside the band are dropped (and accounted). True
//!   weighted-harmonic forms have superexponentially decaying Fourier tails,
//!   so they appear as near-kernel vectors; a looser cut separates them from
//!   the order-one spectral gap, and dimension stability under growing `K`
//!   is checked by the callers.

use crate::assemble::{mode_block, modes_up_to, Component, FormBasis};
use crate::error::{FoliageError, Result};
use crate::form::BasicForm;
use crate::model::FoliationModel;
use faer::complex_native::c64;
use faer::{Mat, Side};
use num_complex::Complex64;

/// Relative singular-value cut on the exact per-mode path.
pub const EXACT_KERNEL_TOL: f64 = 1e-9;
/// Relative cut on the truncated path, sized to absorb the Fourier tails of
/// weighted-harmonic representatives while staying far below the order-one
/// spectral gap of the mode blocks.
pub const TRUNCATED_KERNEL_TOL: f64 = 1e-4;

static KERNEL_TOL_OVERRIDE: std::sync::atomic::AtomicU64 = std::sync::atomic::AtomicU64::new(0);

/// Override the relative singular-value cut used for harmonic kernels;
/// `None` (or zero) restores the built-in per-path defaults. Process-wide,
/// meant for the command-line `--tol` knob.
pub fn set_kernel_tol_override(tol: Option<f64>) {
    KERNEL_TOL_OVERRIDE.store(
        tol.map_or(0, f64::to_bits),
        std::sync::atomic::Ordering::Relaxed,
    );
}

/// The active override, if any.
pub fn kernel_tol_override() -> Option<f64> {
    match KERNEL_TOL_OVERRIDE.load(std::sync::atomic::Ordering::Relaxed) {
        0 => None,
        bits => Some(f64::from_bits(bits)),
    }
}

/// Worker stack size for the linear-algebra pool. The divide-and-conquer
/// singular value decomposition recurses with sizeable frames (especially in
/// unoptimized builds), which overflows the 2 MiB default worker stacks.
const LINALG_STACK_BYTES: usize = 32 * 1024 * 1024;

static LINALG_POOL: std::sync::OnceLock<rayon::ThreadPool> = std::sync::OnceLock::new();

/// Run `f` on the shared wide-stack thread pool. All dense decompositions
/// and parallel sweeps go through here so nested work inherits the pool.
/// `FOLIAGE_THREADS` caps the worker count (default: all cores).
pub fn with_linalg_pool<R: Send>(f: impl FnOnce() -> R + Send) -> R {
    let pool = LINALG_POOL.get_or_init(|| {
        let mut b = rayon::ThreadPoolBuilder::new().stack_size(LINALG_STACK_BYTES);
        if let Some(t) = std::env::var("FOLIAGE_THREADS")
            .ok()
            .and_then(|v| v.parse::<usize>().ok())
        {
            b = b.num_threads(t);
        }
        b.build().expect("thread pool construction cannot fail")
    });
    pool.install(f)
}

/// Stack matrices vertically. All must share a column count.
pub fn stack_vertical(mats: &[Mat<c64>]) -> Mat<c64> {
    let cols = mats.first().map_or(0, |m| m.ncols());
    let rows: usize = mats.iter().map(|m| m.nrows()).sum();
    let mut out = Mat::<c64>::zeros(rows, cols);
    let mut at = 0;
    for m in mats {
        assert_eq!(m.ncols(), cols, "stacked blocks must share width");
        for i in 0..m.nrows() {
            for j in 0..cols {
                out[(at + i, j)] = m[(i, j)];
            }
        }
        at += m.nrows();
    }
    out
}

/// Largest entrywise deviation from conjugate symmetry.
pub fn hermitian_defect(a: &Mat<c64>) -> f64 {
    let mut d = 0.0f64;
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            let x = a[(i, j)].to_num_complex() - a[(j, i)].to_num_complex().conj();
            d = d.max(x.norm());
        }
    }
    d
}

/// Numerical rank at a relative singular-value cut.
pub fn rank(a: &Mat<c64>, rel_tol: f64) -> usize {
    if a.nrows() == 0 || a.ncols() == 0 {
        return 0;
    }
    let sv = with_linalg_pool(|| a.singular_values());
    let top = sv.first().copied().unwrap_or(0.0);
    if top <= 0.0 {
        return 0;
    }
    sv.iter().filter(|s| **s > rel_tol * top).count()
}

/// A computed null space.
pub struct Kernel {
    pub dim: usize,
    /// Columns span the kernel (orthonormal).
    pub basis: Mat<c64>,
    /// Largest singular value counted as zero.
    pub kept: f64,
    /// Smallest singular value counted as nonzero (`inf` if none).
    pub dropped: f64,
}

/// Kernel via singular value decomposition. Wide matrices are padded with
/// zero rows so the right factor is square and the null space is complete.
pub fn kernel_svd(a: &Mat<c64>, rel_tol: f64) -> Kernel {
    let n = a.ncols();
    if n == 0 {
        return Kernel {
            dim: 0,
            basis: Mat::zeros(0, 0),
            kept: 0.0,
            dropped: f64::INFINITY,
        };
    }
    let work;
    let a = if a.nrows() < n {
        let mut p = Mat::<c64>::zeros(n, n);
        for i in 0..a.nrows() {
            for j in 0..n {
                p[(i, j)] = a[(i, j)];
            }
        }
        work = p;
        &work
    } else {
        a
    };
    let svd = with_linalg_pool(|| a.svd());
    let s = svd.s_diagonal();
    let v = svd.v();
    let top = if s.nrows() > 0 { s[0].re } else { 0.0 };
    let cut = rel_tol * top;
    let mut dim = 0;
    let mut kept = 0.0f64;
    let mut dropped = f64::INFINITY;
    for i in 0..n {
        let sv = if i < s.nrows() { s[i].re } else { 0.0 };
        if sv <= cut {
            dim += 1;
            kept = kept.max(sv);
        } else {
            dropped = dropped.min(sv);
        }
    }
    let mut basis = Mat::<c64>::zeros(n, dim);
    for (c, i) in ((n - dim)..n).enumerate() {
        for r in 0..n {
            basis[(r, c)] = v[(r, i)];
        }
    }
    Kernel {
        dim,
        basis,
        kept,
        dropped,
    }
}

/// Kernel of a Hermitian positive-semidefinite block via eigendecomposition.
pub fn kernel_hermitian(a: &Mat<c64>, rel_tol: f64) -> Result<Kernel> {
    let n = a.ncols();
    if n == 0 {
        return Ok(Kernel {
            dim: 0,
            basis: Mat::zeros(0, 0),
            kept: 0.0,
            dropped: f64::INFINITY,
        });
    }
    let mut scale = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            scale = scale.max(a[(i, j)].to_num_complex().norm());
        }
    }
    let defect = hermitian_defect(a);
    if defect > 1e-11 * scale.max(1.0) {
        return Err(FoliageError::InvalidMatrix(format!(
            "block is not Hermitian (defect {defect:.3e})"
        )));
    }
    let eig = a.selfadjoint_eigendecomposition(Side::Lower);
    let vals = eig.s().column_vector().to_owned();
    let vecs = eig.u();
    let mut top = 0.0f64;
    for i in 0..n {
        top = top.max(vals[i].re.abs());
    }
    let cut = rel_tol * top;
    let mut idx = Vec::new();
    let mut kept = 0.0f64;
    let mut dropped = f64::INFINITY;
    for i in 0..n {
        let v = vals[i].re.abs();
        if v <= cut || top == 0.0 {
            idx.push(i);
            kept = kept.max(v);
        } else {
            dropped = dropped.min(v);
        }
    }
    let mut basis = Mat::<c64>::zeros(n, idx.len());
    for (c, &i) in idx.iter().enumerate() {
        for r in 0..n {
            basis[(r, c)] = vecs[(r, i)];
        }
    }
    Ok(Kernel {
        dim: idx.len(),
        basis,
        kept,
        dropped,
    })
}

/// Minimum-norm least squares `min_x |A x - b|` by singular value
/// pseudoinverse. Returns the solution and the residual norm.
pub fn lstsq(a: &Mat<c64>, b: &[Complex64], rel_tol: f64) -> (Vec<Complex64>, f64) {
    let (m, n) = (a.nrows(), a.ncols());
    assert_eq!(b.len(), m);
    if n == 0 || m == 0 {
        let res = b.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        return (vec![Complex64::new(0.0, 0.0); n], res);
    }
    let svd = with_linalg_pool(|| a.svd());
    let (u, s, v) = (svd.u(), svd.s_diagonal(), svd.v());
    let top = if s.nrows() > 0 { s[0].re } else { 0.0 };
    let cut = rel_tol * top;
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for i in 0..s.nrows() {
        let sv = s[i].re;
        if sv <= cut || sv == 0.0 {
            continue;
        }
        // (u_i^H b) / s_i * v_i
        let mut dot = Complex64::new(0.0, 0.0);
        for r in 0..m {
            dot += u[(r, i)].to_num_complex().conj() * b[r];
        }
        dot /= sv;
        for r in 0..n {
            x[r] += dot * v[(r, i)].to_num_complex();
        }
    }
    let mut res = 0.0f64;
    let mut ax = vec![Complex64::new(0.0, 0.0); m];
    for j in 0..n {
        if x[j].norm_sqr() == 0.0 {
            continue;
        }
        for i in 0..m {
            ax[i] += a[(i, j)].to_num_complex() * x[j];
        }
    }
    for i in 0..m {
        res += (ax[i] - b[i]).norm_sqr();
    }
    (x, res.sqrt())
}

/// An operator together with the component its image lives in.
pub struct ConstraintOp<'a> {
    pub op: &'a dyn Fn(&BasicForm) -> BasicForm,
    pub codomain: Component,
}

/// A joint kernel realized as explicit basic forms.
pub struct KernelSpace {
    pub dim: usize,
    pub reps: Vec<BasicForm>,
    /// Largest in-band mass dropped by image truncation (zero on the exact
    /// path).
    pub truncation_loss: f64,
    /// Worst singular-value gap evidence over all blocks: largest value
    /// counted as zero and smallest counted as nonzero.
    pub kept: f64,
    pub dropped: f64,
}

/// Joint kernel of a family of operators on the `K`-truncated component.
///
/// Undeformed models use the exact per-mode path; deformed models assemble
/// over the full band and truncate images.
pub fn joint_kernel(
    model: &FoliationModel,
    k: i32,
    component: Component,
    ops: &[ConstraintOp<'_>],
) -> KernelSpace {
    if model.is_deformed() {
        joint_kernel_truncated(model, k, component, ops)
    } else {
        joint_kernel_exact(model, k, component, ops)
    }
}

fn joint_kernel_exact(
    model: &FoliationModel,
    k: i32,
    component: Component,
    ops: &[ConstraintOp<'_>],
) -> KernelSpace {
    let domain_words = component.words(model.n());
    let mut dim = 0;
    let mut reps = Vec::new();
    let mut kept = 0.0f64;
    let mut dropped = f64::INFINITY;
    if domain_words.is_empty() {
        return KernelSpace {
            dim,
            reps,
            truncation_loss: 0.0,
            kept,
            dropped,
        };
    }
    for mode in modes_up_to(model.dims(), k) {
        let mut blocks = Vec::new();
        for c in ops {
            let cod = c.codomain.words(model.n());
            if cod.is_empty() {
                continue;
            }
            let (m, leak) = mode_block(model, c.op, mode, &domain_words, &cod);
            debug_assert!(
                leak < 1e-10,
                "operator leaked {leak} off mode {mode:?} on an undeformed model"
            );
            blocks.push(m);
        }
        let ker = if blocks.is_empty() {
            // No constraints: the whole block is kernel.
            let n = domain_words.len();
            let mut basis = Mat::<c64>::zeros(n, n);
            for i in 0..n {
                basis[(i, i)] = c64::new(1.0, 0.0);
            }
            Kernel {
                dim: n,
                basis,
                kept: 0.0,
                dropped: f64::INFINITY,
            }
        } else {
            kernel_svd(
                &stack_vertical(&blocks),
                kernel_tol_override().unwrap_or(EXACT_KERNEL_TOL),
            )
        };
        dim += ker.dim;
        kept = kept.max(ker.kept);
        dropped = dropped.min(ker.dropped);
        for c in 0..ker.dim {
            let mut f = BasicForm::zero(model.n(), model.dims());
            for (r, w) in domain_words.iter().enumerate() {
                let v = ker.basis[(r, c)].to_num_complex();
                if v.norm_sqr() > 0.0 {
                    f.add_word(
                        *w,
                        &crate::fourier::FourierScalar::monomial(model.dims(), mode, v),
                    );
                }
            }
            reps.push(f);
        }
    }
    KernelSpace {
        dim,
        reps,
        truncation_loss: 0.0,
        kept,
        dropped,
    }
}

fn joint_kernel_truncated(
    model: &FoliationModel,
    k: i32,
    component: Component,
    ops: &[ConstraintOp<'_>],
) -> KernelSpace {
    let domain = FormBasis::for_model(model, k, component);
    let mut blocks = Vec::new();
    let mut loss = 0.0f64;
    for c in ops {
        let cod = FormBasis::for_model(model, k, c.codomain);
        if cod.is_empty() {
            continue;
        }
        let mut m = Mat::<c64>::zeros(cod.len(), domain.len());
        for j in 0..domain.len() {
            let (col, l) = cod.project(&(c.op)(&domain.form(j)));
            loss = loss.max(l);
            for (i, v) in col.iter().enumerate() {
                if v.norm_sqr() > 0.0 {
                    m[(i, j)] = c64::new(v.re, v.im);
                }
            }
        }
        blocks.push(m);
    }
    let ker = if blocks.is_empty() {
        let n = domain.len();
        let mut basis = Mat::<c64>::zeros(n, n);
        for i in 0..n {
            basis[(i, i)] = c64::new(1.0, 0.0);
        }
        Kernel {
            dim: n,
            basis,
            kept: 0.0,
            dropped: f64::INFINITY,
        }
    } else {
        kernel_svd(
            &stack_vertical(&blocks),
            kernel_tol_override().unwrap_or(TRUNCATED_KERNEL_TOL),
        )
    };
    let reps = (0..ker.dim)
        .map(|c| domain.unproject_col(&ker.basis, c))
        .collect();
    KernelSpace {
        dim: ker.dim,
        reps,
        truncation_loss: loss,
        kept: ker.kept,
        dropped: ker.dropped,
    }
}

/// Joint kernel with a truncation-stability guarantee: dimensions at `k` and
/// `k + 2` must agree, otherwise the computation has not converged.
pub fn stable_joint_kernel(
    model: &FoliationModel,
    k: i32,
    component: Component,
    ops: &[ConstraintOp<'_>],
    what: &str,
) -> Result<KernelSpace> {
    let a = joint_kernel(model, k, component, ops);
    let b = joint_kernel(model, k + 2, component, ops);
    if a.dim != b.dim {
        return Err(FoliageError::NotConverged {
            what: format!("{what}: dimension {} at K={k} vs {} at K={}", a.dim, b.dim, k + 2),
            k,
        });
    }
    Ok(a)
}
