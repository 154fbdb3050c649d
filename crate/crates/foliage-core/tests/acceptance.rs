//! The acceptance gate.
//!
//! Nine shipping criteria, run sequentially in one test so the kernel
//! tolerance override and the timing measurements cannot interleave.  Each
//! criterion prints exactly one PASS/FAIL line (with the computed evidence);
//! the test fails if any criterion does.  A FAIL line reports the computed
//! and required values side by side — the suite never silently relaxes a
//! requirement to stay green.

use foliage_core::assemble::{assemble, Component};
use foliage_core::cohomology::{
    alvarez_class, automorphic_test, betti_table, bott_chern_table, ddc_solve, dolbeault_table,
    eta_class,
};
use foliage_core::form::BasicForm;
use foliage_core::fourier::FourierScalar;
use foliage_core::identities::run_all;
use foliage_core::identities::IdentityStatus;
use foliage_core::kernel::set_kernel_tol_override;
use foliage_core::model::{build_model, FoliationModel};
use foliage_core::ops::{self, OperatorKind};
use foliage_core::random::{random_form, random_real_function};
use foliage_core::sl2::{lefschetz_rank, LefschetzLevel};
use foliage_core::star::hodge_star;
use foliage_core::word::CoframeWord;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

/// Residual bound for the identity sweep (criterion 5).
const SWEEP_TOL: f64 = 1e-10;

/// Relative bound for the potential round-trips and the Laplacian matrix
/// comparison (criterion 8).
const ROUND_TRIP_TOL: f64 = 1e-10;

/// Relative accuracy required of the automorphy obstruction witness
/// (criterion 4).
const WITNESS_REL_TOL: f64 = 1e-9;

/// Exact coefficient arithmetic: rounding noise only.
const WORD_LAW_TOL: f64 = 1e-13;

/// `kappa' - kappa = d_B f` holds in exact arithmetic.
const KAPPA_EXACT_TOL: f64 = 1e-12;

/// l1 size the random leafwise deformations are normalized to.
const DEFORMATION_SIZE: f64 = 0.15;

/// Random forms per identity in the acceptance sweep.
const SWEEP_TRIALS: usize = 20;

/// Collected evidence for one criterion.
struct Criterion {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Criterion {
    fn new() -> Self {
        Criterion { failures: Vec::new(), notes: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: String) {
        if !ok {
            self.failures.push(what);
        }
    }

    fn note(&mut self, what: String) {
        self.notes.push(what);
    }

    fn line(&self, index: usize, label: &str) -> String {
        let verdict = if self.failures.is_empty() { "PASS" } else { "FAIL" };
        let mut out = format!("criterion {index}: {verdict} — {label}");
        for n in &self.notes {
            out.push_str(&format!("\n    note: {n}"));
        }
        for f in &self.failures {
            out.push_str(&format!("\n    defect: {f}"));
        }
        out
    }
}

fn model(name: &str) -> FoliationModel {
    build_model::<f64>(name, None).expect("built-in model")
}

fn err_str(e: foliage_core::FoliageError) -> String {
    e.to_string()
}

/// Criterion 1: the hyperbolic-flow tables at K = 8 under a 1e-8 kernel
/// cut, inside ten seconds.
fn criterion_1() -> Criterion {
    let mut c = Criterion::new();
    set_kernel_tol_override(Some(1e-8));
    let started = Instant::now();
    let run = (|| -> Result<(), String> {
        let m = build_model::<f64>("carriere", Some([2, 1, 1, 1])).map_err(err_str)?;
        let betti = betti_table(&m, 8).map_err(err_str)?;
        let dol = dolbeault_table(&m, 8).map_err(err_str)?;
        let bc = bott_chern_table(&m, 8).map_err(err_str)?;
        c.check(betti == vec![1, 1, 0], format!("betti {betti:?}, required [1, 1, 0]"));
        c.check(
            dol == vec![vec![1, 1], vec![0, 0]],
            format!("dolbeault {dol:?}, required [[1, 1], [0, 0]]"),
        );
        c.check(bc[0][0] == 1, format!("h_dd^(0,0) = {}, required 1", bc[0][0]));
        c.check(bc[1][1] == 1, format!("h_dd^(1,1) = {}, required 1", bc[1][1]));
        Ok(())
    })();
    set_kernel_tol_override(None);
    if let Err(e) = run {
        c.check(false, e);
    }
    let dt = started.elapsed().as_secs_f64();
    c.check(dt < 10.0, format!("runtime {dt:.2}s, required < 10s"));
    c.note(format!("K=8, tol 1e-8, runtime {dt:.2}s"));
    c
}

/// Criterion 2: both product models at K = 6, inside sixty seconds; the
/// ambiguously labelled reference triple is reported, not asserted.
fn criterion_2() -> Criterion {
    let mut c = Criterion::new();
    let started = Instant::now();
    let run = (|| -> Result<(), String> {
        let j1 = model("product_j1");
        let betti = betti_table(&j1, 6).map_err(err_str)?;
        let dol = dolbeault_table(&j1, 6).map_err(err_str)?;
        let bc = bott_chern_table(&j1, 6).map_err(err_str)?;
        c.check(
            betti == vec![1, 2, 1, 0, 0],
            format!("product_j1 betti {betti:?}, required [1, 2, 1, 0, 0]"),
        );
        c.check(
            dol == vec![vec![1, 2, 1], vec![0, 0, 0], vec![0, 0, 0]],
            format!("product_j1 dolbeault {dol:?}, required [[1, 2, 1], [0, 0, 0], [0, 0, 0]]"),
        );
        c.note(format!(
            "product_j1 del-delbar diagonal computed ({}, {}, {}); the reference triple \
             (1, 2, 1) carries a duplicated bidegree label, so it is reported here and \
             not asserted",
            bc[0][0], bc[1][1], bc[2][2]
        ));

        let j2 = model("product_j2");
        let dol2 = dolbeault_table(&j2, 6).map_err(err_str)?;
        let bc2 = bott_chern_table(&j2, 6).map_err(err_str)?;
        for (r, s, want) in [(0usize, 1usize, 1usize), (1, 0, 1), (1, 1, 2), (2, 0, 1), (0, 2, 1)] {
            c.check(
                dol2[r][s] == want,
                format!("product_j2 h^({r},{s}) = {}, required {want}", dol2[r][s]),
            );
        }
        c.check(
            bc2[0][0] == 1,
            format!("product_j2 h_dd^(0,0) = {}, required 1", bc2[0][0]),
        );
        c.check(
            bc2[1][1] == 1,
            format!("product_j2 h_dd^(1,1) = {}, required 1", bc2[1][1]),
        );
        Ok(())
    })();
    if let Err(e) = run {
        c.check(false, e);
    }
    let dt = started.elapsed().as_secs_f64();
    c.check(dt < 60.0, format!("runtime {dt:.2}s, required < 60s"));
    c.note(format!("K=6, runtime {dt:.2}s"));
    c
}

/// Criterion 3: tautness-obstruction (Álvarez) and eta class verdicts, with
/// residual evidence.
fn criterion_3() -> Criterion {
    let mut c = Criterion::new();
    let run = (|| -> Result<(), String> {
        let cases = [
            ("carriere", false, false),
            ("product_j1", false, false),
            ("product_j2", false, true),
            ("taut_torus", true, true),
        ];
        for (name, xi_trivial, eta_trivial) in cases {
            let m = model(name);
            let xi = alvarez_class(&m, 4).map_err(err_str)?;
            let eta = eta_class(&m, 4).map_err(err_str)?;
            c.check(
                xi.trivial == xi_trivial,
                format!("{name}: xi trivial = {}, required {xi_trivial}", xi.trivial),
            );
            c.check(
                eta.trivial == eta_trivial,
                format!("{name}: eta trivial = {}, required {eta_trivial}", eta.trivial),
            );
            c.note(format!(
                "{name}: xi distance {:.3e} (exactness residual {:.3e}), eta distance {:.3e} \
                 (|eta| = {:.6})",
                xi.distance,
                xi.exactness_residual,
                eta.distance,
                eta.form.norm()
            ));
        }
        Ok(())
    })();
    if let Err(e) = run {
        c.check(false, e);
    }
    c
}

/// Criterion 4: automorphy verdicts and the closed-form obstruction witness.
fn criterion_4() -> Criterion {
    let mut c = Criterion::new();
    let run = (|| -> Result<(), String> {
        let cases = [("carriere", false), ("product_j2", true), ("taut_torus", true)];
        for (name, automorphic) in cases {
            let m = model(name);
            let rep = automorphic_test(&m, 4).map_err(err_str)?;
            c.check(
                rep.automorphic == automorphic,
                format!("{name}: automorphic = {}, required {automorphic}", rep.automorphic),
            );
            c.note(format!(
                "{name}: lie residual {:.3e}, witness l1 {:.12}",
                rep.lie_residual, rep.witness_l1
            ));
        }
        let m = model("carriere");
        let log_l = m.lambda().unwrap().ln();
        let expected = log_l.powi(3) / 2.0;
        let rep = automorphic_test(&m, 4).map_err(err_str)?;
        let rel = (rep.witness_l1 - expected).abs() / expected;
        c.check(
            rel <= WITNESS_REL_TOL,
            format!(
                "carriere witness l1 = {:.15}, required log(lambda)^3/2 = {expected:.15} \
                 (relative error {rel:.3e})",
                rep.witness_l1
            ),
        );
        Ok(())
    })();
    if let Err(e) = run {
        c.check(false, e);
    }
    c
}

/// Criterion 5: the I1–I19 sweep at K = 4 with twenty random forms per
/// identity, on every model that admits each identity.
fn criterion_5() -> Criterion {
    let mut c = Criterion::new();
    let expected_skips: &[(&str, &[&str])] = &[
        ("carriere", &[]),
        ("product_j1", &[]),
        ("product_j2", &["I14", "I19"]),
        ("taut_torus", &[]),
    ];
    for (name, skips) in expected_skips {
        let m = model(name);
        let outcomes = run_all(&m, 4, SWEEP_TRIALS, 2026);
        let mut applicable = 0usize;
        let mut worst = 0.0f64;
        let mut skipped: Vec<&str> = Vec::new();
        for o in &outcomes {
            let id_num: usize = o.id[1..].parse().unwrap();
            if id_num > 19 {
                continue;
            }
            match &o.status {
                IdentityStatus::Passed => {
                    applicable += 1;
                    worst = worst.max(o.residual);
                    c.check(
                        o.residual <= SWEEP_TOL,
                        format!("{name}/{}: residual {:.3e} over 1e-10", o.id, o.residual),
                    );
                }
                IdentityStatus::Failed => {
                    c.check(false, format!("{name}/{}: residual {:.3e}", o.id, o.residual));
                }
                IdentityStatus::Skipped(_) => skipped.push(o.id),
            }
        }
        c.check(
            skipped == *skips,
            format!("{name}: skipped {skipped:?}, expected {skips:?}"),
        );
        c.note(format!(
            "{name}: {applicable} identities x {SWEEP_TRIALS} forms, worst residual {worst:.3e}"
        ));
    }
    c
}

/// Criterion 6: hard-Lefschetz ranks on cohomology, and the bidegree sums
/// against the Betti numbers on the hyperbolic flow.
fn criterion_6() -> Criterion {
    let mut c = Criterion::new();
    let run = (|| -> Result<(), String> {
        let taut = model("taut_torus");
        let r = lefschetz_rank(&taut, 4, 0, LefschetzLevel::Cohomology).map_err(err_str)?;
        c.check(
            r.rank == 1 && r.bijective,
            format!(
                "taut_torus L: H^0 -> H^2 rank {} of {} -> {}, required a rank-1 bijection",
                r.rank, r.domain_dim, r.codomain_dim
            ),
        );
        let car = model("carriere");
        let r = lefschetz_rank(&car, 4, 0, LefschetzLevel::Cohomology).map_err(err_str)?;
        c.check(
            r.rank == 0,
            format!("carriere L: H^0 -> H^2 rank {}, required 0", r.rank),
        );
        c.note(format!(
            "carriere L: H^0 -> H^2 maps a {}-dimensional space into a {}-dimensional one",
            r.domain_dim, r.codomain_dim
        ));

        let betti = betti_table(&car, 4).map_err(err_str)?;
        let dol = dolbeault_table(&car, 4).map_err(err_str)?;
        for j in 0..betti.len() {
            let sum: usize = (0..=1usize)
                .flat_map(|r| (0..=1usize).map(move |s| (r, s)))
                .filter(|(r, s)| r + s == j)
                .map(|(r, s)| dol[r][s])
                .sum();
            c.check(
                sum == betti[j],
                format!("carriere degree {j}: sum of h^(r,s) = {sum}, betti = {}", betti[j]),
            );
        }
        Ok(())
    })();
    if let Err(e) = run {
        c.check(false, e);
    }
    c
}

/// What must stay fixed under a leafwise deformation.
#[derive(Clone, PartialEq)]
struct Snapshot {
    betti: Option<Vec<usize>>,
    dolbeault: Option<Vec<Vec<usize>>>,
    bott_chern: Option<Vec<Vec<usize>>>,
    xi_trivial: bool,
    eta_trivial: bool,
    automorphic: bool,
}

fn snapshot(m: &FoliationModel, k: i32, tables: bool) -> Result<Snapshot, String> {
    Ok(Snapshot {
        betti: if tables { Some(betti_table(m, k).map_err(err_str)?) } else { None },
        dolbeault: if tables { Some(dolbeault_table(m, k).map_err(err_str)?) } else { None },
        bott_chern: if tables { Some(bott_chern_table(m, k).map_err(err_str)?) } else { None },
        xi_trivial: alvarez_class(m, k).map_err(err_str)?.trivial,
        eta_trivial: eta_class(m, k).map_err(err_str)?.trivial,
        automorphic: automorphic_test(m, k).map_err(err_str)?.automorphic,
    })
}

/// Criterion 7: five seeded leafwise deformations per model; the tables and
/// verdicts of criteria 1–4 must not move, and the mean curvature must
/// shift by exactly `d_B f`.
fn criterion_7() -> Criterion {
    let mut c = Criterion::new();
    // The compared integer tables are band-stable from K = 2 up (checked
    // against the K = 6 values), so the twenty deformation sweeps run at the
    // smallest sufficient band.
    let specs = [
        ("carriere", 4, true),
        ("product_j1", 2, true),
        ("product_j2", 2, true),
        ("taut_torus", 3, false),
    ];
    for (name, k, tables) in specs {
        let base_model = model(name);
        let base = match snapshot(&base_model, k, tables) {
            Ok(s) => s,
            Err(e) => {
                c.check(false, format!("{name}: base snapshot failed: {e}"));
                continue;
            }
        };
        let mut unchanged = 0usize;
        for seed in 1..=5u64 {
            let raw = random_real_function(&base_model, 2, 1000 + seed);
            let f = raw.scale_re(DEFORMATION_SIZE / raw.l1_norm());
            let deformed = match base_model.deform_leafwise(&f) {
                Ok(d) => d,
                Err(e) => {
                    c.check(false, format!("{name} seed {seed}: {e}"));
                    continue;
                }
            };
            let shift = deformed
                .kappa()
                .sub(base_model.kappa())
                .sub(&base_model.d_scalar(&f))
                .norm();
            c.check(
                shift <= KAPPA_EXACT_TOL,
                format!("{name} seed {seed}: |kappa' - kappa - d_B f| = {shift:.3e}"),
            );
            let snap = match snapshot(&deformed, k, tables) {
                Ok(s) => s,
                Err(e) => {
                    c.check(false, format!("{name} seed {seed}: deformed snapshot failed: {e}"));
                    continue;
                }
            };
            if snap == base {
                unchanged += 1;
            }
            if snap.betti != base.betti {
                c.check(false, format!(
                    "{name} seed {seed}: betti moved {:?} -> {:?}",
                    base.betti, snap.betti
                ));
            }
            if snap.dolbeault != base.dolbeault {
                c.check(false, format!(
                    "{name} seed {seed}: dolbeault moved {:?} -> {:?}",
                    base.dolbeault, snap.dolbeault
                ));
            }
            if snap.bott_chern != base.bott_chern {
                c.check(false, format!(
                    "{name} seed {seed}: bott-chern moved {:?} -> {:?}",
                    base.bott_chern, snap.bott_chern
                ));
            }
            c.check(
                snap.xi_trivial == base.xi_trivial,
                format!(
                    "{name} seed {seed}: xi verdict flipped {} -> {}",
                    base.xi_trivial, snap.xi_trivial
                ),
            );
            c.check(
                snap.eta_trivial == base.eta_trivial,
                format!(
                    "{name} seed {seed}: eta verdict flipped {} -> {}",
                    base.eta_trivial, snap.eta_trivial
                ),
            );
            c.check(
                snap.automorphic == base.automorphic,
                format!(
                    "{name} seed {seed}: automorphy flipped {} -> {}",
                    base.automorphic, snap.automorphic
                ),
            );
        }
        c.note(format!("{name}: {unchanged} of 5 deformations left every compared value fixed"));
    }
    c
}

/// Criterion 8: twenty potential round-trips through the least-squares
/// solver on the linear flow, and the two Laplacian matrices agreeing
/// entrywise.
fn criterion_8() -> Criterion {
    let mut c = Criterion::new();
    let run = (|| -> Result<(), String> {
        let m = model("taut_torus");
        let mut worst = 0.0f64;
        for seed in 0..20u64 {
            let u = random_form(&m, 4, Component::Degree(0), 4000 + seed);
            let g = ops::del_delbar(&m, &u);
            let (_, res) = ddc_solve(&m, 4, &g).map_err(err_str)?;
            worst = worst.max(res);
            c.check(
                res <= ROUND_TRIP_TOL,
                format!("seed {seed}: round-trip relative residual {res:.3e}"),
            );
        }
        c.note(format!("20 round-trips, worst relative residual {worst:.3e}"));

        let a = assemble(&m, OperatorKind::parse("lap_dc").map_err(err_str)?, 4, Component::Full);
        let b = assemble(&m, OperatorKind::parse("lap_B").map_err(err_str)?, 4, Component::Full);
        let mut diff = 0.0f64;
        let mut scale = 0.0f64;
        for i in 0..a.mat.nrows() {
            for j in 0..a.mat.ncols() {
                let x = a.mat[(i, j)].to_num_complex();
                let y = b.mat[(i, j)].to_num_complex();
                diff += (x - y).norm_sqr();
                scale += y.norm_sqr();
            }
        }
        let rel = diff.sqrt() / scale.sqrt().max(1.0);
        c.check(
            rel <= ROUND_TRIP_TOL,
            format!("lap_dc vs lap_B matrix residual {rel:.3e}, required <= 1e-10"),
        );
        c.note(format!("lap_dc vs lap_B Frobenius residual {rel:.3e} on the full K=4 band"));
        Ok(())
    })();
    if let Err(e) = run {
        c.check(false, e);
    }
    c
}

fn sparse_form_3(rng: &mut ChaCha8Rng) -> BasicForm {
    let (n, dims) = (3usize, 1usize);
    let mut out = BasicForm::zero(n, dims);
    for _ in 0..6 {
        let holo: u32 = rng.gen_range(0..8);
        let anti: u32 = rng.gen_range(0..8);
        let word = CoframeWord::from_mask(holo | (anti << 16));
        let re: f64 = rng.gen_range(-1.0..1.0);
        let im: f64 = rng.gen_range(-1.0..1.0);
        out.add_word(word, &FourierScalar::constant(dims, Complex64::new(re, im)));
    }
    out
}

/// Criterion 9: the word-law suite — wedge/contraction adjointness, the
/// doubled-star sign, and the scalar `J` rule against its frame sum —
/// exhaustively for n <= 2 and fuzzed at n = 3.
fn criterion_9() -> Criterion {
    let mut c = Criterion::new();
    let mut checked = 0usize;
    for n in [1usize, 2] {
        let dims = 2;
        let words = CoframeWord::all(n);
        for index in 1..=n {
            for barred in [false, true] {
                let lf = BasicForm::word_const(
                    n,
                    dims,
                    CoframeWord::letter(index, barred),
                    Complex64::new(1.0, 0.0),
                );
                for &w1 in &words {
                    let a = BasicForm::word_const(n, dims, w1, Complex64::new(1.0, 0.0));
                    for &w2 in &words {
                        let b = BasicForm::word_const(n, dims, w2, Complex64::new(1.0, 0.0));
                        let r1 = (BasicForm::contract(&lf, &a).inner(&b)
                            - a.inner(&lf.wedge(&b)))
                        .norm();
                        let r2 = (lf.wedge(&a).inner(&b)
                            - a.inner(&BasicForm::contract(&lf, &b)))
                        .norm();
                        checked += 1;
                        c.check(
                            r1 <= WORD_LAW_TOL && r2 <= WORD_LAW_TOL,
                            format!("adjointness defect at n={n}, words {w1:?}, {w2:?}"),
                        );
                    }
                }
            }
        }
        for &w in &words {
            let a = BasicForm::word_const(n, dims, w, Complex64::new(1.0, 0.0));
            let sign = if w.degree() % 2 == 0 { 1.0 } else { -1.0 };
            let r = hodge_star(&hodge_star(&a)).sub(&a.scale_re(sign)).norm();
            checked += 1;
            c.check(r <= WORD_LAW_TOL, format!("double-star defect {r:.3e} at n={n}, {w:?}"));
        }
    }
    for name in ["carriere", "product_j1"] {
        let m = model(name);
        for w in CoframeWord::all(m.n()) {
            let a = BasicForm::word_const(m.n(), m.dims(), w, Complex64::new(1.0, 0.0));
            let r = ops::j_frame_sum(&m, &a).sub(&a.j_apply()).norm();
            checked += 1;
            c.check(r <= WORD_LAW_TOL, format!("J frame-sum defect {r:.3e} on {name}, {w:?}"));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for t in 0..20 {
        let a = sparse_form_3(&mut rng);
        let b = sparse_form_3(&mut rng);
        let lf = BasicForm::word_const(
            3,
            1,
            CoframeWord::letter(rng.gen_range(1..=3), rng.gen()),
            Complex64::new(1.0, 0.0),
        );
        let scale = (a.norm() * b.norm()).max(1.0);
        let r1 = (BasicForm::contract(&lf, &a).inner(&b) - a.inner(&lf.wedge(&b))).norm();
        let r2 = (hodge_star(&a).inner(&hodge_star(&b)) - a.inner(&b)).norm();
        checked += 1;
        c.check(
            r1 <= WORD_LAW_TOL * scale && r2 <= WORD_LAW_TOL * scale,
            format!("fuzz trial {t}: adjointness {r1:.3e}, star pairing {r2:.3e}"),
        );
    }
    c.note(format!("{checked} word-law instances checked (exhaustive n <= 2, fuzzed n = 3)"));
    c
}

#[test]
fn acceptance_gate() {
    let criteria: Vec<(&str, fn() -> Criterion)> = vec![
        ("hyperbolic flow tables at K=8, tol 1e-8, under 10s", criterion_1),
        ("product model tables at K=6 under 60s", criterion_2),
        ("Alvarez and eta class verdicts with residual evidence", criterion_3),
        ("automorphy verdicts and the obstruction witness", criterion_4),
        ("identity sweep I1-I19, K=4, 20 forms per identity", criterion_5),
        ("Lefschetz ranks on cohomology and bidegree-to-Betti sums", criterion_6),
        ("leafwise deformation invariance, 5 seeds per model", criterion_7),
        ("potential round-trips and the d_c Laplacian match", criterion_8),
        ("word-law property suite", criterion_9),
    ];
    let mut lines = Vec::new();
    let mut all_ok = true;
    for (i, (label, f)) in criteria.iter().enumerate() {
        let crit = f();
        all_ok &= crit.failures.is_empty();
        let line = crit.line(i + 1, label);
        println!("{line}");
        lines.push(line);
    }
    assert!(
        all_ok,
        "\nthe acceptance gate is red:\n{}",
        lines.join("\n")
    );
}
