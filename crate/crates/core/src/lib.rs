//! Lie-algebra Dolbeault cohomology, Kuranishi families and deformations of
//! cohomology classes.
//!
//! The crate works with a complex Lie algebra `𝔤_ℂ = 𝔤^{1,0} ⊕ 𝔤^{0,1}` given
//! by structure constants in a type-split frame. Everything downstream is
//! finite-dimensional linear algebra on invariant forms:
//!
//! * [`algebra`] holds the algebra, module words, bigraded bases, forms and
//!   truncated polynomial families.
//! * [`calculus`] implements `d`, `∂`, `∂̄`, contractions, Lie derivatives, the
//!   Frölicher–Nijenhuis bracket and the deformed operators.
//! * [`spectral`] assembles operator matrices, Moore–Penrose inverses,
//!   harmonic spaces and Hodge numbers.
//! * [`kuranishi`] builds the Kuranishi family and gauge-normalizes complex
//!   structures.
//! * [`classes`] deforms cohomology classes along a family and reports jump
//!   loci.
//! * [`workbench`] provides the catalog, reports and the `liedolb` CLI.

pub mod algebra;
pub mod calculus;
pub mod classes;
pub mod error;
pub mod kuranishi;
pub mod par;
pub mod spectral;
pub mod workbench;

pub use num_complex::Complex64 as C64;

pub use algebra::{
    build_algebra, BasisLabel, Form, FormSpace, LieAlgebra, Metric, ModuleSpec, Monomial,
    PolyForm, PolyScalar,
};
pub use error::{Error, Result};
