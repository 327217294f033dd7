//! Pairs `(g, v)` with `v ∧ F'v ∧ ⋯ ∧ F'^{n-1}v = e_1 ∧ ⋯ ∧ e_n`, where
//! `F' = g ∘ Frob` (or `F' = g` untwisted), and their companion coefficients.

use super::{ParamError, Twist};
use crate::field::{Fe, FiniteField};
use crate::matrix::Mat;
use rand::Rng;
use serde::Serialize;

/// `(a_1, …, a_{n-1})`; the constant coefficient is forced.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CoeffVector(pub Vec<Fe>);

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CyclicPair {
    matrix: Mat,
    vector: Vec<Fe>,
}

impl CyclicPair {
    pub fn matrix(&self) -> &Mat {
        &self.matrix
    }

    pub fn vector(&self) -> &[Fe] {
        &self.vector
    }
}

/// `GF(p^k)^n` with the iteration mode fixed.
#[derive(Debug, Clone)]
pub struct CyclicSpace {
    field: FiniteField,
    n: usize,
    twist: Twist,
}

impl CyclicSpace {
    pub fn new(field: FiniteField, n: usize, twist: Twist) -> Result<Self, ParamError> {
        if n < 2 {
            return Err(ParamError::Dimension {
                expected: 2,
                got: n,
            });
        }
        Ok(CyclicSpace { field, n, twist })
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn twist_vec(&self, v: &[Fe]) -> Vec<Fe> {
        v.iter()
            .map(|&a| self.twist.apply(&self.field, a, 1))
            .collect()
    }

    fn twist_mat(&self, m: &Mat) -> Mat {
        m.map(|a| self.twist.apply(&self.field, a, 1))
    }

    fn mat_vec(&self, m: &Mat, v: &[Fe]) -> Vec<Fe> {
        let f = &self.field;
        (0..self.n)
            .map(|r| f.sum((0..self.n).map(|c| f.mul(m.get(r, c), v[c]))))
            .collect()
    }

    /// `F'(v) = g · Frob(v)`.
    pub fn step(&self, g: &Mat, v: &[Fe]) -> Vec<Fe> {
        self.mat_vec(g, &self.twist_vec(v))
    }

    /// Columns `v, F'v, …, F'^{n-1}v`.
    fn iterates(&self, g: &Mat, v: &[Fe]) -> Mat {
        let mut cols = vec![v.to_vec()];
        while cols.len() < self.n {
            let next = self.step(g, cols.last().expect("nonempty"));
            cols.push(next);
        }
        let data = (0..self.n)
            .flat_map(|r| cols.iter().map(move |c| c[r]))
            .collect();
        Mat::from_rows(self.n, self.n, data)
    }

    /// Checks `det g = 1` and the volume normalisation.
    pub fn pair(&self, g: Mat, v: Vec<Fe>) -> Result<CyclicPair, ParamError> {
        let n = self.n;
        if g.rows() != n || g.cols() != n {
            return Err(ParamError::Dimension {
                expected: n,
                got: g.rows(),
            });
        }
        if v.len() != n {
            return Err(ParamError::Dimension {
                expected: n,
                got: v.len(),
            });
        }
        let det = g.det(&self.field);
        if det != self.field.one() {
            return Err(ParamError::Determinant(det));
        }
        match self.iterates(&g, &v).det(&self.field) {
            Fe(0) => Err(ParamError::NotCyclic),
            d if d != self.field.one() => Err(ParamError::Volume(d)),
            _ => Ok(CyclicPair {
                matrix: g,
                vector: v,
            }),
        }
    }

    /// Coefficients of `F'^n v` in the iterate basis. The constant
    /// coefficient is checked to be `(-1)^{n-1}`.
    pub fn mu(&self, pair: &CyclicPair) -> Result<CoeffVector, ParamError> {
        let f = &self.field;
        let basis = self.iterates(&pair.matrix, &pair.vector);
        let inv = basis.inverse(f).ok_or(ParamError::NotCyclic)?;
        let top = self.step(&pair.matrix, &basis.column(self.n - 1));
        let coeffs = self.mat_vec(&inv, &top);
        let sign = if self.n % 2 == 1 {
            f.one()
        } else {
            f.neg(f.one())
        };
        if coeffs[0] != sign {
            return Err(ParamError::ConstantTerm(coeffs[0]));
        }
        Ok(CoeffVector(coeffs[1..].to_vec()))
    }

    /// Companion matrix on the standard basis with `v = e_1`.
    pub fn tau(&self, a: &CoeffVector) -> Result<CyclicPair, ParamError> {
        let (f, n) = (&self.field, self.n);
        if a.0.len() != n - 1 {
            return Err(ParamError::Dimension {
                expected: n - 1,
                got: a.0.len(),
            });
        }
        let mut g = Mat::zero(n, n);
        for k in 0..n - 1 {
            g.set(k + 1, k, f.one());
        }
        let sign = if n % 2 == 1 { f.one() } else { f.neg(f.one()) };
        g.set(0, n - 1, sign);
        for (k, &c) in a.0.iter().enumerate() {
            g.set(k + 1, n - 1, c);
        }
        let mut v = vec![f.zero(); n];
        v[0] = f.one();
        self.pair(g, v)
    }

    /// `x · (g, v) = (x g Frob(x)⁻¹, x v)`.
    pub fn conjugate(&self, x: &Mat, pair: &CyclicPair) -> CyclicPair {
        let f = &self.field;
        let twisted_inv = self.twist_mat(x).inverse(f).expect("x is invertible");
        CyclicPair {
            matrix: x.mul(f, &pair.matrix).mul(f, &twisted_inv),
            vector: self.mat_vec(x, &pair.vector),
        }
    }

    /// The element of `SL_n` carrying `first` to `second`, if any. It is
    /// unique because it must map one iterate basis onto the other.
    pub fn orbit_equivalent(&self, first: &CyclicPair, second: &CyclicPair) -> Option<Mat> {
        let f = &self.field;
        let b1 = self.iterates(&first.matrix, &first.vector);
        let b2 = self.iterates(&second.matrix, &second.vector);
        let x = b2.mul(f, &b1.inverse(f)?);
        (self.conjugate(&x, first) == *second).then_some(x)
    }

    /// Uniform element of `SL_n` by rejection and rescaling of one column.
    pub fn random_special_linear<R: Rng>(&self, rng: &mut R) -> Mat {
        let (f, n) = (&self.field, self.n);
        loop {
            let data = (0..n * n).map(|_| Fe(rng.gen_range(0..f.size()))).collect();
            let mut m = Mat::from_rows(n, n, data);
            let Some(scale) = f.inv(m.det(f)) else {
                continue;
            };
            for r in 0..n {
                m.set(r, 0, f.mul(m.get(r, 0), scale));
            }
            return m;
        }
    }

    pub fn random_coefficients<R: Rng>(&self, rng: &mut R) -> CoeffVector {
        CoeffVector(
            (1..self.n)
                .map(|_| Fe(rng.gen_range(0..self.field.size())))
                .collect(),
        )
    }
}
