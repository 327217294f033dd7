//! Dense matrices over a [`FiniteField`].

use crate::field::{Fe, FiniteField};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Fe>,
}

impl Mat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![Fe(0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, Fe(1));
        }
        m
    }

    /// Row-major entries.
    pub fn from_rows(rows: usize, cols: usize, data: Vec<Fe>) -> Self {
        assert_eq!(
            data.len(),
            rows * cols,
            "entry count does not match the shape"
        );
        Mat { rows, cols, data }
    }

    pub fn diagonal(entries: &[Fe]) -> Self {
        let mut m = Self::zero(entries.len(), entries.len());
        for (i, &e) in entries.iter().enumerate() {
            m.set(i, i, e);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Fe] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> Fe {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Fe) {
        self.data[r * self.cols + c] = v;
    }

    pub fn column(&self, c: usize) -> Vec<Fe> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn diagonal_entries(&self) -> Vec<Fe> {
        (0..self.rows.min(self.cols))
            .map(|i| self.get(i, i))
            .collect()
    }

    pub fn mul(&self, f: &FiniteField, rhs: &Mat) -> Mat {
        assert_eq!(self.cols, rhs.rows, "shape mismatch");
        let mut out = Mat::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.0 == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    let cur = out.get(i, j);
                    out.set(i, j, f.add(cur, f.mul(a, rhs.get(k, j))));
                }
            }
        }
        out
    }

    /// Entrywise map, used for Frobenius twists.
    pub fn map(&self, mut op: impl FnMut(Fe) -> Fe) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| op(x)).collect(),
        }
    }

    /// Entrywise `x ↦ x^q`.
    pub fn frobenius(&self, f: &FiniteField, q: u64) -> Mat {
        self.map(|x| f.pow_u(x, q))
    }

    /// Columns `range` as a new matrix.
    pub fn column_block(&self, start: usize, end: usize) -> Mat {
        let data = (0..self.rows)
            .flat_map(|r| (start..end).map(move |c| (r, c)))
            .map(|(r, c)| self.get(r, c))
            .collect();
        Mat {
            rows: self.rows,
            cols: end - start,
            data,
        }
    }

    pub fn hconcat(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows, "row counts differ");
        let cols = self.cols + other.cols;
        let data = (0..self.rows)
            .flat_map(|r| {
                (0..self.cols)
                    .map(move |c| self.get(r, c))
                    .chain((0..other.cols).map(move |c| other.get(r, c)))
            })
            .collect();
        Mat {
            rows: self.rows,
            cols,
            data,
        }
    }

    /// Row echelon form by elimination; returns the rank and the product of
    /// the pivots with the sign of the row permutation.
    fn eliminate(&self, f: &FiniteField) -> (usize, Fe) {
        let mut m = self.clone();
        let mut rank = 0;
        let mut det = Fe(1);
        for c in 0..m.cols {
            let Some(pivot) = (rank..m.rows).find(|&r| m.get(r, c).0 != 0) else {
                det = Fe(0);
                continue;
            };
            if pivot != rank {
                for j in 0..m.cols {
                    let (a, b) = (m.get(pivot, j), m.get(rank, j));
                    m.set(pivot, j, b);
                    m.set(rank, j, a);
                }
                det = f.neg(det);
            }
            let pv = m.get(rank, c);
            det = f.mul(det, pv);
            let inv = f.inv(pv).expect("pivot is nonzero");
            for r in rank + 1..m.rows {
                let factor = f.mul(m.get(r, c), inv);
                if factor.0 == 0 {
                    continue;
                }
                for j in c..m.cols {
                    let v = f.sub(m.get(r, j), f.mul(factor, m.get(rank, j)));
                    m.set(r, j, v);
                }
            }
            rank += 1;
            if rank == m.rows {
                break;
            }
        }
        (rank, det)
    }

    pub fn rank(&self, f: &FiniteField) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        self.eliminate(f).0
    }

    pub fn det(&self, f: &FiniteField) -> Fe {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        match self.rows {
            0 => Fe(1),
            1 => self.get(0, 0),
            2 => f.sub(
                f.mul(self.get(0, 0), self.get(1, 1)),
                f.mul(self.get(0, 1), self.get(1, 0)),
            ),
            _ => {
                let (rank, det) = self.eliminate(f);
                if rank < self.rows {
                    Fe(0)
                } else {
                    det
                }
            }
        }
    }

    /// Gauss–Jordan inverse; `None` if singular.
    pub fn inverse(&self, f: &FiniteField) -> Option<Mat> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Mat::identity(n);
        for c in 0..n {
            let pivot = (c..n).find(|&r| a.get(r, c).0 != 0)?;
            for j in 0..n {
                let (x, y) = (a.get(pivot, j), a.get(c, j));
                a.set(pivot, j, y);
                a.set(c, j, x);
                let (x, y) = (inv.get(pivot, j), inv.get(c, j));
                inv.set(pivot, j, y);
                inv.set(c, j, x);
            }
            let pinv = f.inv(a.get(c, c))?;
            for j in 0..n {
                a.set(c, j, f.mul(a.get(c, j), pinv));
                inv.set(c, j, f.mul(inv.get(c, j), pinv));
            }
            for r in 0..n {
                let factor = a.get(r, c);
                if r == c || factor.0 == 0 {
                    continue;
                }
                for j in 0..n {
                    a.set(r, j, f.sub(a.get(r, j), f.mul(factor, a.get(c, j))));
                    inv.set(r, j, f.sub(inv.get(r, j), f.mul(factor, inv.get(c, j))));
                }
            }
        }
        Some(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self.get(i, j).0 == u32::from(i == j)))
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.rows).all(|i| (0..i.min(self.cols)).all(|j| self.get(i, j).0 == 0))
    }

    pub fn is_upper_unitriangular(&self) -> bool {
        self.is_upper_triangular() && self.diagonal_entries().iter().all(|d| d.0 == 1)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).0 == 0))
    }

    /// Elementary unipotent `1 + a·E_{ij}`.
    pub fn root_element(n: usize, i: usize, j: usize, a: Fe) -> Mat {
        let mut m = Mat::identity(n);
        m.set(i, j, a);
        m
    }
}

/// All `n × n` matrices of determinant one, by exhaustive enumeration.
pub fn special_linear_group(f: &FiniteField, n: usize) -> Vec<Mat> {
    use rayon::prelude::*;
    let q = f.size() as u64;
    let total = q.pow((n * n) as u32);
    (0..total)
        .into_par_iter()
        .filter_map(|code| {
            let mut c = code;
            let data = (0..n * n)
                .map(|_| {
                    let d = (c % q) as u32;
                    c /= q;
                    Fe(d)
                })
                .collect();
            let m = Mat::from_rows(n, n, data);
            (m.det(f).0 == 1).then_some(m)
        })
        .collect()
}

/// `|SL_n(GF(q))| = q^(n(n-1)/2) Π_{i=2..n} (q^i - 1)`.
pub fn special_linear_order(q: u64, n: usize) -> u64 {
    let pairs = (n * (n - 1) / 2) as u32;
    (2..=n as u32).fold(q.pow(pairs), |acc, i| acc * (q.pow(i) - 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn random_matrix(f: &FiniteField, n: usize, seed: &[u32]) -> Mat {
        Mat::from_rows(
            n,
            n,
            seed.iter().take(n * n).map(|&s| Fe(s % f.size())).collect(),
        )
    }

    #[test]
    fn group_orders_match_the_formula() {
        for (p, k, n) in [(2, 1, 2), (3, 1, 2), (2, 2, 2), (2, 1, 3), (5, 1, 2)] {
            let f = FiniteField::new(p, k).unwrap();
            let g = special_linear_group(&f, n);
            assert_eq!(g.len() as u64, special_linear_order(f.size() as u64, n));
        }
        assert_eq!(special_linear_order(2, 3), 168);
        assert_eq!(special_linear_order(4, 3), 60480);
    }

    #[test]
    fn rank_of_rectangular_blocks() {
        let f = FiniteField::prime(3).unwrap();
        let m = Mat::from_rows(2, 3, [1, 2, 0, 2, 1, 0].map(Fe).to_vec());
        assert_eq!(m.rank(&f), 1);
        assert_eq!(Mat::identity(3).column_block(0, 2).rank(&f), 2);
        assert_eq!(Mat::identity(2).hconcat(&Mat::identity(2)).rank(&f), 2);
    }

    proptest! {
        #[test]
        fn determinant_is_multiplicative(a in prop::collection::vec(0u32..64, 16), b in prop::collection::vec(0u32..64, 16), k in 1u32..4) {
            let f = FiniteField::new(2, k).unwrap();
            for n in 2..=4 {
                let (x, y) = (random_matrix(&f, n, &a), random_matrix(&f, n, &b));
                prop_assert_eq!(x.mul(&f, &y).det(&f), f.mul(x.det(&f), y.det(&f)));
                let full = x.rank(&f) == n;
                prop_assert_eq!(full, x.det(&f).0 != 0);
                match x.inverse(&f) {
                    Some(inv) => prop_assert!(x.mul(&f, &inv).is_identity() && full),
                    None => prop_assert!(!full),
                }
            }
        }

        #[test]
        fn frobenius_is_a_ring_map(a in prop::collection::vec(0u32..9, 9), b in prop::collection::vec(0u32..9, 9)) {
            let f = FiniteField::new(3, 2).unwrap();
            let (x, y) = (random_matrix(&f, 3, &a), random_matrix(&f, 3, &b));
            prop_assert_eq!(x.mul(&f, &y).frobenius(&f, 3), x.frobenius(&f, 3).mul(&f, &y.frobenius(&f, 3)));
        }
    }
}
