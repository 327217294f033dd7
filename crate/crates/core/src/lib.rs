//! Exact computations around Weyl group elements of minimal length in their
//! twisted conjugacy classes.
//!
//! The crate is organised bottom-up:
//!
//! - [`coxeter`]: finite Weyl groups realised as permutations of their root sets.
//! - [`conj`]: twisted conjugacy classes, minimal-length subsets, stabilizers and
//!   the classical-type class representatives with their stabilizer generators.
//! - [`paths`]: the graph on a minimal-length set, based paths, rewriting moves and
//!   the loop homomorphism into the stabilizer.
//! - [`braid`]: Artin groups with Garside normal forms.
//! - [`hecke`]: Iwahori–Hecke algebras over integer Laurent polynomials and the
//!   twisted trace polynomials.
//! - [`field`] and [`flagvar`]: finite fields, full flags and the type-A point
//!   counts and maps between the varieties attached to Weyl elements.
//! - [`param`]: companion-matrix parametrisation of cyclic pairs and the Gram
//!   coordinate elimination for symplectic and orthogonal forms.
//!
//! Polynomial and Hecke arithmetic are generic over the coefficient ring; the
//! aliases below fix the integer instantiation used throughout.

pub mod braid;
pub mod conj;
pub mod coxeter;
pub mod field;
pub mod flagvar;
pub mod hecke;
pub mod matrix;
pub mod param;
pub mod paths;
pub mod poly;

/// Integer Laurent polynomials in `q`.
pub type Poly = poly::LaurentPoly<i64>;
/// Hecke algebra elements with integer Laurent coefficients.
pub type HeckeInt = hecke::HeckeElement<i64>;

pub use braid::BraidElement;
pub use conj::{BulletConjClass, PartitionSignature, StabilizerGroup};
pub use coxeter::{CoxeterSystem, WeylElement, Word};
pub use field::{Fe, FiniteField};
pub use matrix::Mat;
pub use param::Twist;
pub use paths::{GammaGraph, Path};
