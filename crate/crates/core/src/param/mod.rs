//! Explicit orbit-space coordinates.
//!
//! [`cyclic`] parametrises `SL_n`-orbits of (twisted) linear maps with a
//! normalised cyclic vector by the coefficients of the companion matrix.
//! [`gram`] is the coordinate system for symplectic and orthogonal forms: a
//! triangular solve from free inputs, and a verifier that rebuilds the Gram
//! matrix and the semilinear map and checks every relation on it.

mod cyclic;
mod gram;


pub use cyclic::{CoeffVector, CyclicPair, CyclicSpace};
pub use gram::{
    dimension_formula, gram_batch, gram_reports, gram_seeded, gram_solve, gram_verify, random_free,
    BatchReport, CheckTally, Form, GramConfig, GramReport, GramSystem, Var,
};

use crate::field::{Fe, FieldError, FiniteField};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParamError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("matrix has determinant {0}, not 1")]
    Determinant(Fe),
    #[error("vector is not cyclic")]
    NotCyclic,
    #[error("iterates span volume {0}, not 1")]
    Volume(Fe),
    #[error("constant coefficient is {0}, expected (-1)^(n-1)")]
    ConstantTerm(Fe),
    #[error("block sizes must be positive and non-increasing: {0:?}")]
    Blocks(Vec<usize>),
    #[error("even orthogonal forms need an even number of blocks, got {0}")]
    OddBlockCount(usize),
    #[error("orthogonal forms are not supported in characteristic 2")]
    Characteristic2,
    #[error("the value of the quadratic form on the complement must be nonzero")]
    DegenerateComplement,
    #[error("expected {expected} free inputs, got {got}")]
    FreeInputs { expected: usize, got: usize },
    #[error("{var} enters its equation with non-unit coefficient {coefficient}")]
    NotTriangular { var: String, coefficient: Fe },
}

/// How the iterating map twists scalars: `x ↦ x^p` (semilinear) or not at
/// all (the linear, untwisted mode).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Twist {
    Frobenius,
    Trivial,
}

impl Twist {
    /// `a^(p^e)`, or `a` when untwisted.
    pub fn apply(self, f: &FiniteField, a: Fe, e: u32) -> Fe {
        match self {
            Twist::Frobenius => f.frobenius_pow(a, e),
            Twist::Trivial => a,
        }
    }
}
