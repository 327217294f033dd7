//! Split `SL_n` over finite fields: full flags, relative position, the point
//! sets of the varieties attached to permutations, the maps between them and
//! the counting identity against Hecke traces.
//!
//! Everything here is the split case with trivial diagram twist. A
//! [`SpecialLinear`] fixes `n`, a prime `q` and a level `m`; points live over
//! `GF(q^m)` and the Frobenius is `x ↦ x^q` entrywise.

mod count;
mod cover;
mod flags;
mod isotropy;
mod suite;
mod varieties;


pub use count::{count_matrix, quotient_count_sl2, verify_53, CountComparison, CountMatrix};
pub use cover::{CosetPoint, TorusData, UStarPattern};
pub use flags::FlagPoint;
pub use isotropy::{IsotropyReport, UStarReport};
pub use suite::{
    has_braid_configuration, reduced_words, sigma_identity_suite, Identity, SuiteReport, Tally,
};

use crate::coxeter::{CoxeterError, CoxeterSystem, ElementTable, PermView, WeylElement};
use crate::field::{FieldError, FiniteField};
use crate::matrix::{special_linear_group, Mat};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FlagError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Coxeter(#[from] CoxeterError),
    #[error("rank must be at least 2, got {0}")]
    Rank(usize),
    #[error(
        "length condition fails: l({w}) = {lw}, l(a) + l(b) = {sum}, l({w_prime}) = {lw_prime}"
    )]
    Lengths {
        w: String,
        lw: usize,
        sum: usize,
        w_prime: String,
        lw_prime: usize,
    },
    #[error("generator {0} is not a left descent of {1}")]
    NotLeftDescent(String, String),
    #[error("point does not lie on the variety of {0}")]
    NotOnVariety(String),
    #[error("path step {0} is not an edge")]
    BadStep(usize),
}

/// `SL_n` over `GF(q^m)` with Frobenius `x ↦ x^q`.
#[derive(Debug, Clone)]
pub struct SpecialLinear {
    n: usize,
    q: u32,
    level: u32,
    field: FiniteField,
    sys: CoxeterSystem,
    table: ElementTable,
}

impl SpecialLinear {
    /// `q` must be prime so that `GF(q)` sits inside every level as `0..q`.
    pub fn new(n: usize, q: u32, level: u32) -> Result<Self, FlagError> {
        if n < 2 {
            return Err(FlagError::Rank(n));
        }
        let field = FiniteField::new(q, level)?;
        let sys = CoxeterSystem::parse(&format!("A{}", n - 1))?;
        let table = ElementTable::new(&sys);
        Ok(SpecialLinear {
            n,
            q,
            level,
            field,
            sys,
            table,
        })
    }

    /// Same group and `q` at another level.
    pub fn at_level(&self, level: u32) -> Result<Self, FlagError> {
        let field = FiniteField::new(self.q, level)?;
        Ok(SpecialLinear {
            field,
            level,
            ..self.clone()
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// `q^m`.
    pub fn field_size(&self) -> u64 {
        self.field.size() as u64
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn system(&self) -> &CoxeterSystem {
        &self.sys
    }

    pub fn table(&self) -> &ElementTable {
        &self.table
    }

    fn view(&self) -> &PermView {
        self.sys.perm_view().expect("type A has a permutation view")
    }

    /// Position permutation of `w`; `ẇ e_k = ±e_{π(k)}`.
    pub fn perm_of(&self, w: &WeylElement) -> Vec<usize> {
        self.view().to_perm(&self.sys, w)
    }

    pub fn element_of(&self, perm: &[usize]) -> WeylElement {
        self.view()
            .from_perm(&self.sys, perm)
            .expect("every permutation lies in type A")
    }

    /// Entrywise `x ↦ x^q`.
    pub fn frobenius(&self, g: &Mat) -> Mat {
        g.frobenius(&self.field, self.q as u64)
    }

    /// Entrywise `x ↦ x^(q^s)`.
    pub fn frobenius_power(&self, g: &Mat, s: u32) -> Mat {
        g.frobenius(&self.field, (self.q as u64).pow(s))
    }

    pub fn mul(&self, a: &Mat, b: &Mat) -> Mat {
        a.mul(&self.field, b)
    }

    pub fn inverse(&self, a: &Mat) -> Mat {
        a.inverse(&self.field)
            .expect("group elements are invertible")
    }

    /// `SL_n(GF(q))`, the fixed points of the Frobenius.
    pub fn rational_group(&self) -> Vec<Mat> {
        let base = FiniteField::prime(self.q).expect("q is prime");
        special_linear_group(&base, self.n)
    }

    /// `SL_n(GF(q^m))`.
    pub fn full_group(&self) -> Vec<Mat> {
        special_linear_group(&self.field, self.n)
    }
}
