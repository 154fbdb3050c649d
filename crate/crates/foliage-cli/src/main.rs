//! `foliage` — transverse exterior calculus on Fourier-truncated basic forms.
//!
//! Every subcommand loads one foliation model (built-in or TOML config),
//! optionally applies a leafwise metric deformation, runs one analysis, and
//! emits a deterministic JSON report (stdout, or `--out PATH`).
//!
//! Exit codes: `0` success, `1` computational failure (identity failures,
//! rank instability, missing structure), `2` invalid input (unknown model or
//! operator, spec syntax, non-real deformation).

#![forbid(unsafe_code)]

use clap::{Args, Parser, Subcommand, ValueEnum};
use foliage_core::assemble::Component;
use foliage_core::error::FoliageError;
use foliage_core::fourier::{FourierScalar, Mode};
use foliage_core::model::{build_model, build_model_from_config, FoliationModel};
use foliage_core::report;
use foliage_core::scalar::C;
use foliage_core::{OperatorKind, BUILTIN_MODELS};
use std::process::ExitCode;

/// Default Fourier truncation bandwidth.
const DEFAULT_BANDWIDTH: i32 = 4;

#[derive(Parser)]
#[command(
    name = "foliage",
    version,
    about = "Transverse exterior calculus of Riemannian foliations on Fourier-truncated basic forms"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct ModelArgs {
    /// Built-in model (`carriere`, `product_j1`, `product_j2`, `taut_torus`)
    /// or a path to a TOML model config
    #[arg(long)]
    model: String,

    /// Holonomy matrix override `a,b,c,d` for the hyperbolic built-ins
    #[arg(long, value_name = "A,B,C,D")]
    matrix: Option<String>,

    /// Fourier truncation bandwidth
    #[arg(long = "K", value_name = "K", default_value_t = DEFAULT_BANDWIDTH)]
    k: i32,

    /// Leafwise metric deformation, as semicolon-separated Fourier terms
    /// `m1,...:re:im` (one integer per torus coordinate) or `@path` to a
    /// file of such terms; must define a real function
    #[arg(long, value_name = "SPEC")]
    f: Option<String>,

    /// Override the relative singular-value cut for harmonic kernels
    #[arg(long)]
    tol: Option<f64>,

    /// Write the report here instead of stdout
    #[arg(long, value_name = "PATH")]
    out: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ThenWhat {
    Cohomology,
    Identities,
}

#[derive(Subcommand)]
enum Cmd {
    /// Betti, Dolbeault, Bott-Chern and Aeppli tables, the mean-curvature
    /// classes, and the structure verdicts
    Cohomology(ModelArgs),

    /// Sweep the operator-identity catalog over random truncated forms
    Identities {
        #[command(flatten)]
        model: ModelArgs,

        /// Random forms per identity
        #[arg(long, default_value_t = 4)]
        trials: usize,

        /// Random seed
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },

    /// sl2 commutator residuals, Lefschetz power ranks on words and on
    /// basic cohomology, and a primitive decomposition round-trip
    Lefschetz {
        #[command(flatten)]
        model: ModelArgs,

        /// Random seed for the decomposition probe
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },

    /// Compare a model against its leafwise deformation (`--f` required)
    Deform {
        #[command(flatten)]
        model: ModelArgs,

        /// Which analysis to compare before/after the deformation
        #[arg(long, value_enum, default_value = "cohomology")]
        then: ThenWhat,

        /// Random forms per identity (`--then identities`)
        #[arg(long, default_value_t = 4)]
        trials: usize,

        /// Random seed (`--then identities`)
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },

    /// Export one assembled operator matrix as a sparse text listing
    ExportOp {
        #[command(flatten)]
        model: ModelArgs,

        /// Operator name, e.g. `d_B`, `delbar_T_star`, `lap_B`, `Lambda`
        #[arg(long, value_name = "OP")]
        kind: String,

        /// Domain component: `full`, a degree `j`, or a bidegree `r,s`
        #[arg(long, default_value = "full")]
        component: String,
    },
}

fn main() -> ExitCode {
    // The compute pool honors FOLIAGE_THREADS; validate it up front so a
    // typo is a usage error instead of a silently ignored setting.
    if let Ok(v) = std::env::var("FOLIAGE_THREADS") {
        if v.parse::<usize>().is_err() {
            eprintln!("error: FOLIAGE_THREADS must be a positive integer, got `{v}`");
            return ExitCode::from(2);
        }
    }
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_for(&e))
        }
    }
}

/// Usage-level mistakes exit 2; genuine computational failures exit 1.
fn exit_for(e: &FoliageError) -> u8 {
    match e {
        FoliageError::Parse(_)
        | FoliageError::NotReal(_)
        | FoliageError::UnknownModel(_)
        | FoliageError::UnknownOperator(_)
        | FoliageError::InvalidMatrix(_)
        | FoliageError::ComponentOutOfRange(..) => 2,
        FoliageError::Capability { .. }
        | FoliageError::NotConverged { .. }
        | FoliageError::Io(_) => 1,
    }
}

/// Emit the report and return the process exit code.
fn run(cmd: Cmd) -> Result<u8, FoliageError> {
    match cmd {
        Cmd::Cohomology(args) => {
            let (model, k) = load(&args, DeformUse::Apply)?;
            emit(&args, report::to_json(&report::cohomology_report(&model, k)?))?;
            Ok(0)
        }
        Cmd::Identities {
            model: args,
            trials,
            seed,
        } => {
            let (model, k) = load(&args, DeformUse::Apply)?;
            let rep = report::identities_report(&model, k, trials, seed);
            let failed = rep.failed;
            emit(&args, report::to_json(&rep))?;
            Ok(if failed > 0 { 1 } else { 0 })
        }
        Cmd::Lefschetz { model: args, seed } => {
            let (model, k) = load(&args, DeformUse::Apply)?;
            emit(&args, report::to_json(&report::lefschetz_report(&model, k, seed)?))?;
            Ok(0)
        }
        Cmd::Deform {
            model: args,
            then,
            trials,
            seed,
        } => {
            let (base, k) = load(&args, DeformUse::Ignore)?;
            let spec = args.f.as_deref().ok_or_else(|| {
                FoliageError::Parse("`deform` needs a deformation, pass --f".into())
            })?;
            let f = parse_fourier(spec, base.dims())?;
            check_bandwidth(&f, k)?;
            let deformed = base.deform_leafwise(&f)?;
            match then {
                ThenWhat::Cohomology => {
                    emit(
                        &args,
                        report::to_json(&report::deform_report(&base, &deformed, k)?),
                    )?;
                    Ok(0)
                }
                ThenWhat::Identities => {
                    let rep =
                        report::deform_identities_report(&base, &deformed, k, trials, seed);
                    let failed = rep.base.failed + rep.deformed.failed;
                    emit(&args, report::to_json(&rep))?;
                    Ok(if failed > 0 { 1 } else { 0 })
                }
            }
        }
        Cmd::ExportOp {
            model: args,
            kind,
            component,
        } => {
            let (model, k) = load(&args, DeformUse::Apply)?;
            let op = OperatorKind::parse(&kind).map_err(|_| {
                FoliageError::Parse(format!(
                    "unknown operator `{kind}` (valid: {})",
                    OperatorKind::ALL.map(|o| o.name()).join(", ")
                ))
            })?;
            let component = Component::parse(&component)?;
            emit(&args, report::operator_export_text(&model, k, op, component))?;
            Ok(0)
        }
    }
}

/// Write the report to `--out` when given, stdout otherwise.
fn emit(args: &ModelArgs, json: String) -> Result<(), FoliageError> {
    match &args.out {
        Some(path) => std::fs::write(path, json).map_err(FoliageError::Io),
        None => {
            print!("{json}");
            Ok(())
        }
    }
}

/// Whether `load` should fold `--f` into the returned model.
#[derive(PartialEq)]
enum DeformUse {
    Apply,
    Ignore,
}

/// Build the model named by the arguments and apply `--f` when requested.
fn load(args: &ModelArgs, deform: DeformUse) -> Result<(FoliationModel, i32), FoliageError> {
    foliage_core::kernel::set_kernel_tol_override(args.tol);
    let matrix = args.matrix.as_deref().map(parse_matrix).transpose()?;
    let looks_like_path = args.model.contains('/') || args.model.contains('.');
    let model = if BUILTIN_MODELS.contains(&args.model.as_str()) {
        build_model::<f64>(&args.model, matrix)?
    } else if looks_like_path {
        if matrix.is_some() {
            return Err(FoliageError::Parse(
                "--matrix applies only to built-in models".into(),
            ));
        }
        let text = std::fs::read_to_string(&args.model).map_err(|e| {
            FoliageError::Parse(format!("cannot read model config `{}`: {e}", args.model))
        })?;
        build_model_from_config(&text)?
    } else {
        return Err(FoliageError::Parse(format!(
            "unknown model `{}` (built-ins: {}; or pass a TOML config path)",
            args.model,
            BUILTIN_MODELS.join(", ")
        )));
    };
    let model = match (&args.f, deform) {
        (Some(spec), DeformUse::Apply) => {
            let f = parse_fourier(spec, model.dims())?;
            check_bandwidth(&f, args.k)?;
            model.deform_leafwise(&f)?
        }
        _ => model,
    };
    Ok((model, args.k))
}

/// A deformation wider than the truncation band cannot be represented.
fn check_bandwidth(f: &FourierScalar, k: i32) -> Result<(), FoliageError> {
    if f.bandwidth() > k {
        return Err(FoliageError::NotConverged {
            what: format!(
                "deformation bandwidth {} exceeds the truncation",
                f.bandwidth()
            ),
            k,
        });
    }
    Ok(())
}

/// Parse `a,b,c,d` into a row-major integer matrix.
fn parse_matrix(s: &str) -> Result<[i64; 4], FoliageError> {
    let bad = || FoliageError::Parse(format!("matrix `{s}` (want four integers `a,b,c,d`)"));
    let parts: Vec<i64> = s
        .split(',')
        .map(|p| p.trim().parse::<i64>())
        .collect::<Result<_, _>>()
        .map_err(|_| bad())?;
    parts.try_into().map_err(|_| bad())
}

/// Parse a deformation spec: semicolon- or newline-separated terms
/// `m1,...,m_dims:re:im`, or `@path` naming a file of such terms.
fn parse_fourier(spec: &str, dims: usize) -> Result<FourierScalar, FoliageError> {
    let text = match spec.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| {
            FoliageError::Parse(format!("cannot read deformation file `{path}`: {e}"))
        })?,
        None => spec.to_string(),
    };
    let mut f = FourierScalar::zero(dims);
    for term in text.split([';', '\n']).map(str::trim) {
        if term.is_empty() {
            continue;
        }
        let bad =
            || FoliageError::Parse(format!("deformation term `{term}` (want `m1,...:re:im`)"));
        let fields: Vec<&str> = term.split(':').collect();
        let [mode_text, re_text, im_text] = fields.as_slice() else {
            return Err(bad());
        };
        let mode: Vec<i32> = mode_text
            .split(',')
            .map(|p| p.trim().parse::<i32>())
            .collect::<Result<_, _>>()
            .map_err(|_| bad())?;
        if mode.len() != dims {
            return Err(FoliageError::Parse(format!(
                "deformation term `{term}` has {} mode indices, the model has {dims} coordinates",
                mode.len()
            )));
        }
        let re: f64 = re_text.trim().parse().map_err(|_| bad())?;
        let im: f64 = im_text.trim().parse().map_err(|_| bad())?;
        f.add_term(Mode::from_slice(&mode), C::new(re, im));
    }
    Ok(f)
}
