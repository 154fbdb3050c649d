//! Transverse exterior calculus for Riemannian and Hermitian foliations,
//! realized as exact linear algebra on Fourier-truncated basic forms.
//!
//! The crate models the basic de Rham and Dolbeault complexes of a foliated
//! torus bundle: forms are finite Fourier sums over the basic coordinates
//! with anticommuting unitary-coframe words, every differential-geometric
//! operator (exterior derivatives, their twisted variants, codifferentials,
//! Lefschetz operators, the Weil rotation) acts exactly on that space, and
//! cohomology invariants come out of dense kernel computations on assembled
//! operator blocks.

#![forbid(unsafe_code)]

pub mod assemble;
pub mod cohomology;
pub mod error;
pub mod form;
pub mod fourier;
pub mod identities;
pub mod kernel;
pub mod model;
pub mod ops;
pub mod random;
pub mod report;
pub mod scalar;
pub mod sl2;
pub mod star;
pub mod word;

pub use error::{FoliageError, Result};
pub use form::BasicForm;
pub use fourier::{FourierScalar, Mode};
pub use model::{build_model, FoliationModel, ModelFlags, BUILTIN_MODELS};
pub use ops::{apply, LaplacianKind, OperatorKind};
pub use scalar::Scalar;
pub use word::{CoframeWord, Letter, RealWord};

/// Single-precision instantiation of the scalar algebra.
pub type FourierScalar32 = fourier::FourierScalar<f32>;
/// Single-precision instantiation of the form algebra.
pub type BasicForm32 = form::BasicForm<f32>;
