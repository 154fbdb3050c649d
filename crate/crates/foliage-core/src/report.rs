//! Deterministic JSON reports for the command-line harness.
//!
//! Reports serialize with a fixed field order and a fixed floating-point
//! rendering (17 significant digits, scientific notation), so two runs with
//! the same inputs produce byte-identical output.

use crate::assemble::Component;
use crate::cohomology::{
    alvarez_class, aeppli_table, automorphic_test, bott_chern_table, dolbeault_table, eta_class,
    harmonic_space, is_taut, pluriharmonic_function_dim, HarmonicKind, CLASS_TOL, RESIDUAL_TOL,
};
use crate::error::Result;
use crate::identities::{run_all, IdentityOutcome, IdentityStatus, CATALOG, IDENTITY_TOL};
use crate::kernel::{kernel_tol_override, EXACT_KERNEL_TOL, TRUNCATED_KERNEL_TOL};
use crate::model::FoliationModel;
use crate::sl2::{lefschetz_rank, primitive_decompose, sl2_check, LefschetzLevel};
use serde::Serialize;
use std::io;

/// Schema tag carried by every report.
pub const SCHEMA: &str = "foliage-report/1";

/// Every tolerance that any reported verdict depends on.
#[derive(Serialize, Clone, Debug)]
pub struct Thresholds {
    pub identity_tol: f64,
    pub exact_kernel_tol: f64,
    pub truncated_kernel_tol: f64,
    pub kernel_tol_override: Option<f64>,
    pub class_tol: f64,
    pub residual_tol: f64,
}

impl Thresholds {
    fn current() -> Self {
        Thresholds {
            identity_tol: IDENTITY_TOL,
            exact_kernel_tol: EXACT_KERNEL_TOL,
            truncated_kernel_tol: TRUNCATED_KERNEL_TOL,
            kernel_tol_override: kernel_tol_override(),
            class_tol: CLASS_TOL,
            residual_tol: RESIDUAL_TOL,
        }
    }
}

/// Echo of the inputs that produced a report.
#[derive(Serialize, Clone, Debug)]
pub struct ConfigEcho {
    pub model: String,
    pub k: i32,
    pub deformation: Option<String>,
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub thresholds: Thresholds,
}

impl ConfigEcho {
    pub fn new(model: &FoliationModel, k: i32) -> Self {
        ConfigEcho {
            model: model.name().to_string(),
            k,
            deformation: model.deformation().map(|f| f.to_string()),
            seed: None,
            trials: None,
            thresholds: Thresholds::current(),
        }
    }
}

/// Structure flags plus the computed cohomological verdicts.
#[derive(Serialize, Clone, Debug)]
pub struct StructureFlags {
    pub hermitian: bool,
    pub integrable: bool,
    pub kahler: bool,
    pub taut: bool,
    pub xi_trivial: bool,
    pub eta_trivial: bool,
    pub automorphic: bool,
}

/// The dimension tables.
#[derive(Serialize, Clone, Debug, PartialEq, Eq)]
pub struct CohomologyTables {
    pub betti: Vec<usize>,
    pub dolbeault: Option<Vec<Vec<usize>>>,
    pub bott_chern: Option<Vec<Vec<usize>>>,
    pub aeppli: Option<Vec<Vec<usize>>>,
}

/// Scalar diagnostics behind the verdict flags.
#[derive(Serialize, Clone, Debug)]
pub struct ClassDiagnostics {
    pub xi_distance: f64,
    pub xi_exactness_residual: f64,
    pub xi_harmonic_fraction: f64,
    pub eta_norm: f64,
    pub eta_distance: f64,
    pub eta_residual: f64,
    pub automorphy_lie: f64,
    pub automorphy_contract: f64,
    pub automorphy_laplacian: f64,
    pub automorphy_witness_l1: f64,
    pub pluriharmonic_functions: usize,
}

/// Numerical-rank evidence for one harmonic space: the spectral gap that
/// separated "zero" from "nonzero" singular values.
#[derive(Serialize, Clone, Debug)]
pub struct KernelEvidence {
    pub component: String,
    pub dim: usize,
    /// Largest singular value classified as zero.
    pub max_zero_singular_value: f64,
    /// Smallest singular value classified as nonzero (absent when the
    /// constraint matrix had full kernel).
    pub min_nonzero_singular_value: Option<f64>,
    /// In-band mass lost to image truncation while assembling constraints.
    pub truncation_loss: f64,
}

/// Truncation cross-check metadata.
#[derive(Serialize, Clone, Debug)]
pub struct Stability {
    pub k: i32,
    pub cross_checked_k: i32,
}

/// Full cohomology report.
#[derive(Serialize, Debug)]
pub struct CohomologyReport {
    pub schema: &'static str,
    pub kind: &'static str,
    pub config: ConfigEcho,
    pub flags: StructureFlags,
    pub tables: CohomologyTables,
    pub diagnostics: ClassDiagnostics,
    pub kernel_evidence: Vec<KernelEvidence>,
    pub stability: Stability,
}

fn clamp_gap(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

/// Compute every table, class and verdict for one model at truncation `k`.
pub fn cohomology_report(model: &FoliationModel, k: i32) -> Result<CohomologyReport> {
    let n = model.n();
    let flags = model.flags();

    let mut betti = Vec::with_capacity(2 * n + 1);
    let mut kernel_evidence = Vec::with_capacity(2 * n + 1);
    for j in 0..=2 * n {
        let comp = Component::Degree(j as i32);
        let space = harmonic_space(model, k, comp, HarmonicKind::Basic)?;
        betti.push(space.dim);
        kernel_evidence.push(KernelEvidence {
            component: comp.to_string(),
            dim: space.dim,
            max_zero_singular_value: space.kept,
            min_nonzero_singular_value: clamp_gap(space.dropped),
            truncation_loss: space.truncation_loss,
        });
    }
    let (dolbeault, bott_chern, aeppli) = if flags.hermitian {
        (
            Some(dolbeault_table(model, k)?),
            Some(bott_chern_table(model, k)?),
            Some(aeppli_table(model, k)?),
        )
    } else {
        (None, None, None)
    };

    let xi = alvarez_class(model, k)?;
    let eta = eta_class(model, k)?;
    let auto = automorphic_test(model, k)?;
    let taut = is_taut(model, k)?;

    Ok(CohomologyReport {
        schema: SCHEMA,
        kind: "cohomology",
        config: ConfigEcho::new(model, k),
        flags: StructureFlags {
            hermitian: flags.hermitian,
            integrable: flags.integrable,
            kahler: flags.kahler,
            taut,
            xi_trivial: xi.trivial,
            eta_trivial: eta.trivial,
            automorphic: auto.automorphic,
        },
        tables: CohomologyTables {
            betti,
            dolbeault,
            bott_chern,
            aeppli,
        },
        diagnostics: ClassDiagnostics {
            xi_distance: xi.distance,
            xi_exactness_residual: xi.exactness_residual,
            xi_harmonic_fraction: xi.harmonic_fraction,
            eta_norm: eta.form.norm(),
            eta_distance: eta.distance,
            eta_residual: eta.residual,
            automorphy_lie: auto.lie_residual,
            automorphy_contract: auto.contract_residual,
            automorphy_laplacian: auto.laplacian_residual,
            automorphy_witness_l1: auto.witness_l1,
            pluriharmonic_functions: pluriharmonic_function_dim(model, k)?,
        },
        kernel_evidence,
        stability: Stability {
            k,
            cross_checked_k: k + 2,
        },
    })
}

/// One catalog entry's outcome, flattened for serialization.
#[derive(Serialize, Clone, Debug)]
pub struct IdentityEntry {
    pub id: String,
    pub statement: String,
    /// Structural level the identity lives at.
    pub level: String,
    pub applicable: bool,
    pub status: String,
    pub pass: bool,
    pub max_residual: f64,
    pub skip_reason: Option<String>,
}

/// Presentation name for the structure level an identity requires.
fn identity_level(id: &str) -> &'static str {
    use crate::identities::ModelClass;
    let class = CATALOG
        .iter()
        .find(|s| s.id == id)
        .map(|s| s.class)
        .unwrap_or(ModelClass::All);
    match class {
        ModelClass::All => "Riemannian",
        ModelClass::Hermitian | ModelClass::IntegrableHermitian => "Hermitian",
        // The Laplacian-splitting trichotomy is the one check whose content
        // is the automorphy verdict itself.
        ModelClass::Kahler if id == "I20" => "Kahler+automorphic",
        ModelClass::Kahler => "Kahler",
        ModelClass::Taut => "taut",
    }
}

impl From<&IdentityOutcome> for IdentityEntry {
    fn from(o: &IdentityOutcome) -> Self {
        let (status, skip_reason) = match &o.status {
            IdentityStatus::Passed => ("passed".to_string(), None),
            IdentityStatus::Failed => ("failed".to_string(), None),
            IdentityStatus::Skipped(r) => ("skipped".to_string(), Some(r.clone())),
        };
        IdentityEntry {
            id: o.id.to_string(),
            statement: o.statement.to_string(),
            level: identity_level(o.id).to_string(),
            applicable: !matches!(o.status, IdentityStatus::Skipped(_)),
            pass: matches!(o.status, IdentityStatus::Passed),
            status,
            max_residual: o.residual,
            skip_reason,
        }
    }
}

/// Identity-sweep report.
#[derive(Serialize, Debug)]
pub struct IdentitiesReport {
    pub schema: &'static str,
    pub kind: &'static str,
    pub config: ConfigEcho,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub identities: Vec<IdentityEntry>,
}

/// Run the identity catalog and package the outcomes.
pub fn identities_report(
    model: &FoliationModel,
    k: i32,
    trials: usize,
    seed: u64,
) -> IdentitiesReport {
    let outcomes = run_all(model, k, trials, seed);
    let identities: Vec<IdentityEntry> = outcomes.iter().map(IdentityEntry::from).collect();
    let mut config = ConfigEcho::new(model, k);
    config.seed = Some(seed);
    config.trials = Some(trials);
    IdentitiesReport {
        schema: SCHEMA,
        kind: "identities",
        config,
        passed: identities.iter().filter(|e| e.status == "passed").count(),
        failed: identities.iter().filter(|e| e.status == "failed").count(),
        skipped: identities.iter().filter(|e| e.status == "skipped").count(),
        identities,
    }
}

/// One hard-Lefschetz rank row.
#[derive(Serialize, Clone, Debug)]
pub struct LefschetzEntry {
    pub j: usize,
    pub power: usize,
    pub rank: usize,
    pub domain_dim: usize,
    pub codomain_dim: usize,
    pub bijective: bool,
}

/// `sl2` relation residuals.
#[derive(Serialize, Clone, Debug)]
pub struct Sl2Evidence {
    pub bracket_counting: f64,
    pub bracket_raise: f64,
    pub bracket_lower: f64,
}

/// Lefschetz-structure report.
#[derive(Serialize, Debug)]
pub struct LefschetzReport {
    pub schema: &'static str,
    pub kind: &'static str,
    pub config: ConfigEcho,
    pub sl2: Sl2Evidence,
    pub forms: Vec<LefschetzEntry>,
    pub cohomology: Option<Vec<LefschetzEntry>>,
    pub cohomology_note: Option<String>,
    pub primitive_residual: f64,
    pub hard_lefschetz_forms: bool,
    pub hard_lefschetz_cohomology: Option<bool>,
}

/// Rank the Lefschetz powers on words and (where defined) on cohomology.
pub fn lefschetz_report(model: &FoliationModel, k: i32, seed: u64) -> Result<LefschetzReport> {
    let n = model.n();
    let r = sl2_check(model, k.min(2));
    let mut forms = Vec::new();
    for j in 0..=n {
        let e = lefschetz_rank(model, k, j, LefschetzLevel::Forms)?;
        forms.push(LefschetzEntry {
            j: e.j,
            power: e.power,
            rank: e.rank,
            domain_dim: e.domain_dim,
            codomain_dim: e.codomain_dim,
            bijective: e.bijective,
        });
    }
    let (cohomology, cohomology_note) = if model.flags().kahler {
        let mut rows = Vec::new();
        for j in 0..=n {
            let e = lefschetz_rank(model, k, j, LefschetzLevel::Cohomology)?;
            rows.push(LefschetzEntry {
                j: e.j,
                power: e.power,
                rank: e.rank,
                domain_dim: e.domain_dim,
                codomain_dim: e.codomain_dim,
                bijective: e.bijective,
            });
        }
        (Some(rows), None)
    } else {
        (
            None,
            Some(format!(
                "the induced map on basic cohomology needs a transversely Kahler structure, \
                 `{}` does not carry one",
                model.name()
            )),
        )
    };
    let probe = crate::random::random_form(model, k.min(2), Component::Full, seed);
    let decomp = primitive_decompose(model, &probe)?;
    let hard_lefschetz_forms = forms.iter().all(|e| e.bijective);
    let hard_lefschetz_cohomology = cohomology
        .as_ref()
        .map(|rows| rows.iter().all(|e| e.bijective));
    Ok(LefschetzReport {
        schema: SCHEMA,
        kind: "lefschetz",
        config: {
            let mut c = ConfigEcho::new(model, k);
            c.seed = Some(seed);
            c
        },
        sl2: Sl2Evidence {
            bracket_counting: r.bracket_counting,
            bracket_raise: r.bracket_raise,
            bracket_lower: r.bracket_lower,
        },
        forms,
        cohomology,
        cohomology_note,
        primitive_residual: decomp.residual,
        hard_lefschetz_forms,
        hard_lefschetz_cohomology,
    })
}

/// Before/after summary used by the deformation report.
#[derive(Serialize, Clone, Debug)]
pub struct DeformSummary {
    pub tables: CohomologyTables,
    pub xi_trivial: bool,
    pub xi_distance: f64,
    pub eta_trivial: bool,
    pub eta_distance: f64,
    pub automorphic: bool,
    pub taut: bool,
}

/// What stayed fixed under the leafwise deformation.
#[derive(Serialize, Clone, Debug)]
pub struct InvarianceVerdicts {
    pub betti: bool,
    pub dolbeault: bool,
    pub bott_chern: bool,
    pub aeppli: bool,
    pub xi_verdict: bool,
    pub xi_distance_drift: f64,
    pub eta_verdict: bool,
    pub eta_distance_drift: f64,
    pub automorphy_preserved: bool,
}

/// Deformation comparison report.
#[derive(Serialize, Debug)]
pub struct DeformReport {
    pub schema: &'static str,
    pub kind: &'static str,
    pub config: ConfigEcho,
    pub base: DeformSummary,
    pub deformed: DeformSummary,
    pub invariance: InvarianceVerdicts,
}

fn deform_summary(model: &FoliationModel, k: i32) -> Result<DeformSummary> {
    let rep = cohomology_report(model, k)?;
    Ok(DeformSummary {
        tables: rep.tables,
        xi_trivial: rep.flags.xi_trivial,
        xi_distance: rep.diagnostics.xi_distance,
        eta_trivial: rep.flags.eta_trivial,
        eta_distance: rep.diagnostics.eta_distance,
        automorphic: rep.flags.automorphic,
        taut: rep.flags.taut,
    })
}

/// Compare a model against its leafwise deformation at the same truncation.
pub fn deform_report(
    base: &FoliationModel,
    deformed: &FoliationModel,
    k: i32,
) -> Result<DeformReport> {
    let b = deform_summary(base, k)?;
    let d = deform_summary(deformed, k)?;
    let invariance = InvarianceVerdicts {
        betti: b.tables.betti == d.tables.betti,
        dolbeault: b.tables.dolbeault == d.tables.dolbeault,
        bott_chern: b.tables.bott_chern == d.tables.bott_chern,
        aeppli: b.tables.aeppli == d.tables.aeppli,
        xi_verdict: b.xi_trivial == d.xi_trivial,
        xi_distance_drift: (b.xi_distance - d.xi_distance).abs(),
        eta_verdict: b.eta_trivial == d.eta_trivial,
        eta_distance_drift: (b.eta_distance - d.eta_distance).abs(),
        automorphy_preserved: b.automorphic == d.automorphic,
    };
    Ok(DeformReport {
        schema: SCHEMA,
        kind: "deform",
        config: ConfigEcho::new(deformed, k),
        base: b,
        deformed: d,
        invariance,
    })
}

/// Identity suites before and after a leafwise deformation.
#[derive(Serialize, Debug)]
pub struct DeformIdentitiesReport {
    pub schema: &'static str,
    pub kind: &'static str,
    pub config: ConfigEcho,
    pub base: IdentitiesReport,
    pub deformed: IdentitiesReport,
    /// No identity moved from passed to failed (moving to skipped is
    /// legitimate: some checks only apply to the exact metric or to an
    /// actually taut model).
    pub no_new_failures: bool,
}

/// Run the identity catalog on a model and on its deformation.
pub fn deform_identities_report(
    base: &FoliationModel,
    deformed: &FoliationModel,
    k: i32,
    trials: usize,
    seed: u64,
) -> DeformIdentitiesReport {
    let b = identities_report(base, k, trials, seed);
    let d = identities_report(deformed, k, trials, seed);
    let no_new_failures = b
        .identities
        .iter()
        .zip(d.identities.iter())
        .all(|(x, y)| !(x.status == "passed" && y.status == "failed"));
    let mut config = ConfigEcho::new(deformed, k);
    config.seed = Some(seed);
    config.trials = Some(trials);
    DeformIdentitiesReport {
        schema: SCHEMA,
        kind: "deform-identities",
        config,
        base: b,
        deformed: d,
        no_new_failures,
    }
}

/// Sparse text export of one assembled operator: a self-describing header,
/// then one `row col re im` line per nonzero entry, row-major, zero-based.
pub fn operator_export_text(
    model: &FoliationModel,
    k: i32,
    op: crate::ops::OperatorKind,
    component: Component,
) -> String {
    use std::fmt::Write as _;
    let a = crate::assemble::assemble(model, op, k, component);
    let rows = a.codomain.len();
    let cols = a.domain.len();
    let mut nonzero = Vec::new();
    for i in 0..rows {
        for j in 0..cols {
            let z = a.mat[(i, j)];
            if z.re != 0.0 || z.im != 0.0 {
                nonzero.push((i, j, z.re, z.im));
            }
        }
    }
    let mut out = String::new();
    let _ = writeln!(out, "foliage-operator/1");
    let _ = writeln!(out, "model {}", model.name());
    let _ = writeln!(out, "kind {}", op.name());
    let _ = writeln!(out, "K {k}");
    let _ = writeln!(out, "component {component}");
    let _ = writeln!(out, "codomain {}", component.codomain(op));
    let _ = writeln!(out, "rows {rows}");
    let _ = writeln!(out, "cols {cols}");
    let _ = writeln!(out, "nonzeros {}", nonzero.len());
    let _ = writeln!(out, "truncation_loss {:.16e}", a.truncation_loss);
    for (i, j, re, im) in nonzero {
        let _ = writeln!(out, "{i} {j} {re:.16e} {im:.16e}");
    }
    out
}

/// Pretty JSON with every float rendered to 17 significant digits.
struct SciPretty<'a> {
    inner: serde_json::ser::PrettyFormatter<'a>,
}

impl serde_json::ser::Formatter for SciPretty<'_> {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        write!(writer, "{value:.16e}")
    }

    fn begin_array<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.inner.begin_array(writer)
    }

    fn end_array<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.inner.end_array(writer)
    }

    fn begin_array_value<W>(&mut self, writer: &mut W, first: bool) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.inner.begin_array_value(writer, first)
    }

    fn end_array_value<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.inner.end_array_value(writer)
    }

    fn begin_object<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.inner.begin_object(writer)
    }

    fn end_object<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.inner.end_object(writer)
    }

    fn begin_object_key<W>(&mut self, writer: &mut W, first: bool) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.inner.begin_object_key(writer, first)
    }

    fn end_object_key<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.inner.end_object_key(writer)
    }

    fn begin_object_value<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.inner.begin_object_value(writer)
    }

    fn end_object_value<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.inner.end_object_value(writer)
    }
}

/// Serialize any report to its canonical byte representation.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let fmt = SciPretty {
        inner: serde_json::ser::PrettyFormatter::new(),
    };
    let mut ser = serde_json::Serializer::with_formatter(&mut out, fmt);
    value
        .serialize(&mut ser)
        .expect("reports contain only finite numbers and UTF-8 strings");
    out.push(b'\n');
    String::from_utf8(out).expect("serde_json emits UTF-8")
}
