//! Assembly of operators into finite matrices over a Fourier-truncated basis.
//!
//! A basis element is a pair `(mode, word)`: the Fourier monomial `e_mode`
//! times a unitary coframe word. Elements are grouped by mode (modes in
//! lexicographic order, sup-norm at most `K`), words in their canonical
//! enumeration order inside each mode. The monomial basis is orthonormal, so
//! matrix adjoints are honest operator adjoints.
//!
//! Every differential operator of an undeformed model is mode-diagonal;
//! leafwise deformations couple modes through the deformed mean curvature,
//! so assembled images can fall outside the truncation. That loss is
//! reported, never silently dropped.

use crate::error::{FoliageError, Result};
use crate::form::BasicForm;
use crate::fourier::{FourierScalar, Mode};
use crate::model::FoliationModel;
use crate::ops::{self, OperatorKind};
use crate::word::CoframeWord;
use faer::complex_native::c64;
use faer::Mat;
use num_complex::Complex64;
use std::fmt;

/// Which slice of the form space a basis spans.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Component {
    /// All words of one total degree.
    Degree(i32),
    /// All words of one bidegree.
    Bidegree(i32, i32),
    /// Every word.
    Full,
}

impl Component {
    /// Parse `"full"`, a degree like `"2"`, or a bidegree like `"1,1"`.
    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("full") {
            return Ok(Component::Full);
        }
        let bad = || FoliageError::Parse(format!("component `{s}` (want `full`, `j`, or `r,s`)"));
        if let Some((a, b)) = t.split_once(',') {
            let r = a.trim().parse::<i32>().map_err(|_| bad())?;
            let s = b.trim().parse::<i32>().map_err(|_| bad())?;
            Ok(Component::Bidegree(r, s))
        } else {
            Ok(Component::Degree(t.parse::<i32>().map_err(|_| bad())?))
        }
    }

    /// The words the component contains, in canonical order.
    pub fn words(&self, n: usize) -> Vec<CoframeWord> {
        match *self {
            Component::Full => CoframeWord::all(n),
            Component::Degree(j) => {
                if j < 0 || j as usize > 2 * n {
                    Vec::new()
                } else {
                    CoframeWord::all_of_degree(n, j as usize)
                }
            }
            Component::Bidegree(r, s) => {
                if r < 0 || s < 0 || r as usize > n || s as usize > n {
                    Vec::new()
                } else {
                    CoframeWord::all_of_bidegree(n, r as usize, s as usize)
                }
            }
        }
    }

    /// Component of the image of `kind` applied to this component.
    pub fn codomain(&self, kind: OperatorKind) -> Component {
        match *self {
            Component::Full => Component::Full,
            Component::Degree(j) => Component::Degree(j + kind.degree_shift() as i32),
            Component::Bidegree(r, s) => match kind.bidegree_shift() {
                Some((dr, ds)) => Component::Bidegree(r + dr as i32, s + ds as i32),
                None => Component::Degree(r + s + kind.degree_shift() as i32),
            },
        }
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Component::Full => write!(f, "full"),
            Component::Degree(j) => write!(f, "{j}"),
            Component::Bidegree(r, s) => write!(f, "{r},{s}"),
        }
    }
}

/// All lattice modes of sup-norm at most `k`, lexicographically ordered.
pub fn modes_up_to(dims: usize, k: i32) -> Vec<Mode> {
    let mut out = Vec::new();
    let mut cur = [0i32; crate::fourier::MAX_DIMS];
    fn rec(
        dims: usize,
        k: i32,
        j: usize,
        cur: &mut [i32; crate::fourier::MAX_DIMS],
        out: &mut Vec<Mode>,
    ) {
        if j == dims {
            out.push(Mode(*cur));
            return;
        }
        for v in -k..=k {
            cur[j] = v;
            rec(dims, k, j + 1, cur, out);
        }
    }
    rec(dims, k, 0, &mut cur, &mut out);
    out.sort();
    out
}

/// An ordered `(mode, word)` basis of a truncated component.
#[derive(Clone, Debug)]
pub struct FormBasis {
    n: usize,
    dims: usize,
    k: i32,
    component: Component,
    modes: Vec<Mode>,
    words: Vec<CoframeWord>,
}

impl FormBasis {
    pub fn new(n: usize, dims: usize, k: i32, component: Component) -> Self {
        FormBasis {
            n,
            dims,
            k,
            component,
            modes: modes_up_to(dims, k),
            words: component.words(n),
        }
    }

    pub fn for_model(model: &FoliationModel, k: i32, component: Component) -> Self {
        Self::new(model.n(), model.dims(), k, component)
    }

    pub fn len(&self) -> usize {
        self.modes.len() * self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn k(&self) -> i32 {
        self.k
    }

    pub fn component(&self) -> Component {
        self.component
    }

    pub fn words(&self) -> &[CoframeWord] {
        &self.words
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    pub fn element(&self, i: usize) -> (Mode, CoframeWord) {
        let w = self.words.len();
        (self.modes[i / w], self.words[i % w])
    }

    /// Unit basis form at index `i`.
    pub fn form(&self, i: usize) -> BasicForm {
        let (m, w) = self.element(i);
        BasicForm::monomial(
            self.n,
            w,
            FourierScalar::monomial(self.dims, m, Complex64::new(1.0, 0.0)),
        )
    }

    pub fn index_of(&self, mode: Mode, word: CoframeWord) -> Option<usize> {
        let wi = self.words.iter().position(|w| *w == word)?;
        let mi = self.modes.binary_search(&mode).ok()?;
        Some(mi * self.words.len() + wi)
    }

    /// Coefficient vector of a form, plus the squared mass that fell outside
    /// the basis (out-of-band modes or words outside the component).
    pub fn project(&self, a: &BasicForm) -> (Vec<Complex64>, f64) {
        let mut v = vec![Complex64::new(0.0, 0.0); self.len()];
        let mut lost = 0.0;
        for (w, f) in a.terms() {
            let wi = self.words.iter().position(|x| x == w);
            for (m, c) in f.iter() {
                match (wi, self.modes.binary_search(m).ok()) {
                    (Some(wi), Some(mi)) => v[mi * self.words.len() + wi] = *c,
                    _ => lost += c.norm_sqr(),
                }
            }
        }
        (v, lost.sqrt())
    }

    /// Rebuild the form a coefficient vector represents.
    pub fn unproject(&self, v: &[Complex64]) -> BasicForm {
        let mut out = BasicForm::zero(self.n, self.dims);
        for (i, c) in v.iter().enumerate() {
            if c.norm_sqr() > 0.0 {
                let (m, w) = self.element(i);
                out.add_word(w, &FourierScalar::monomial(self.dims, m, *c));
            }
        }
        out
    }

    /// Rebuild the form held in one column of a matrix.
    pub fn unproject_col(&self, mat: &Mat<c64>, col: usize) -> BasicForm {
        let v: Vec<Complex64> = (0..mat.nrows())
            .map(|i| mat[(i, col)].to_num_complex())
            .collect();
        self.unproject(&v)
    }
}

/// An operator matrix between two truncated bases.
pub struct AssembledOperator {
    pub kind: OperatorKind,
    pub domain: FormBasis,
    pub codomain: FormBasis,
    pub mat: Mat<c64>,
    /// Largest per-column norm of image content falling outside the codomain
    /// truncation. Zero on every undeformed model.
    pub truncation_loss: f64,
}

/// Assemble a named operator over the `K`-truncated component basis.
pub fn assemble(
    model: &FoliationModel,
    kind: OperatorKind,
    k: i32,
    component: Component,
) -> AssembledOperator {
    let domain = FormBasis::for_model(model, k, component);
    let codomain = FormBasis::for_model(model, k, component.codomain(kind));
    let mut mat = Mat::<c64>::zeros(codomain.len(), domain.len());
    let mut loss = 0.0f64;
    let cols: Vec<(Vec<Complex64>, f64)> = (0..domain.len())
        .map(|j| codomain.project(&ops::apply(model, kind, &domain.form(j))))
        .collect();
    for (j, (col, l)) in cols.iter().enumerate() {
        loss = loss.max(*l);
        for (i, c) in col.iter().enumerate() {
            if c.norm_sqr() > 0.0 {
                mat[(i, j)] = c64::new(c.re, c.im);
            }
        }
    }
    AssembledOperator {
        kind,
        domain,
        codomain,
        mat,
        truncation_loss: loss,
    }
}

/// Assemble the block of an operator at a single mode: domain and codomain
/// are word spaces at that mode. Only meaningful when the operator is
/// mode-diagonal (every undeformed model); mode leakage is returned so
/// callers can assert it vanishes.
pub fn mode_block(
    model: &FoliationModel,
    op: &dyn Fn(&BasicForm) -> BasicForm,
    mode: Mode,
    domain_words: &[CoframeWord],
    codomain_words: &[CoframeWord],
) -> (Mat<c64>, f64) {
    let mut mat = Mat::<c64>::zeros(codomain_words.len(), domain_words.len());
    let mut leak = 0.0f64;
    for (j, w) in domain_words.iter().enumerate() {
        let phi = BasicForm::monomial(
            model.n(),
            *w,
            FourierScalar::monomial(model.dims(), mode, Complex64::new(1.0, 0.0)),
        );
        let img = op(&phi);
        let mut seen = 0.0;
        for (iw, f) in img.terms() {
            let pos = codomain_words.iter().position(|x| x == iw);
            for (m, c) in f.iter() {
                if *m == mode {
                    if let Some(i) = pos {
                        mat[(i, j)] = c64::new(c.re, c.im);
                        seen += c.norm_sqr();
                    }
                }
            }
        }
        leak = leak.max((img.norm_sq() - seen).max(0.0).sqrt());
    }
    (mat, leak)
}

impl AssembledOperator {
    /// Serialize in the sparse text exchange format.
    pub fn write_export(&self, model_name: &str, out: &mut dyn std::io::Write) -> Result<()> {
        writeln!(
            out,
            "%%foliage-operator model={} kind={} K={} component={} rows={} cols={}",
            model_name,
            self.kind.name(),
            self.domain.k(),
            self.domain.component(),
            self.mat.nrows(),
            self.mat.ncols()
        )?;
        for i in 0..self.mat.nrows() {
            for j in 0..self.mat.ncols() {
                let v = self.mat[(i, j)];
                if v.re != 0.0 || v.im != 0.0 {
                    writeln!(out, "{} {} {:.17e} {:.17e}", i, j, v.re, v.im)?;
                }
            }
        }
        Ok(())
    }
}
