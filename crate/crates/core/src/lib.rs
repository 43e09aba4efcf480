//! Fiedler-like pencils and structure-preserving Rosenbrock linearizations
//! of rational matrices given in realization form
//! `G(λ) = P(λ) + C(λE - A)⁻¹B`.
//!
//! Pencils are stored as a pair `(X, Y)` whose value at `λ` is `X + λY`.
//! A pencil written `λM_τ - M_σ` therefore has `Y = M_τ` and `X = -M_σ`.

pub mod app;
pub mod corpus;
pub mod error;
pub mod json;
pub mod pencils;
pub mod polymat;
pub mod random;
pub mod realize;
pub mod recover;
pub mod scalar;
pub mod structured;
pub mod tuples;
pub mod verify;

pub use error::{Error, Result};
pub use pencils::{BlockPencil, GfprRecipe, Path};
pub use polymat::{MatrixPolynomial, PolyMatrix, StructureTag};
pub use realize::{Realization, RealizationKind};
pub use scalar::{Ring, C64, CMat};
pub use tuples::IndexTuple;
pub use verify::Tolerances;
