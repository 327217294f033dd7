//! Full flags, relative position and the Tits section.

use super::SpecialLinear;
use crate::coxeter::WeylElement;
use crate::field::Fe;
use crate::matrix::Mat;
use serde::Serialize;

/// A full flag `V_1 ⊂ … ⊂ V_n`, where `V_i` is spanned by the first `i`
/// columns of `basis`.
///
/// The basis is canonical: column `j` has its last nonzero entry (the pivot)
/// equal to 1 and vanishes at the pivots of the earlier columns.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FlagPoint {
    basis: Mat,
}

impl FlagPoint {
    pub fn basis(&self) -> &Mat {
        &self.basis
    }
}

/// Upper-triangular positions `(a, b)`, `a < b`, inverted by `π`; these
/// carry the unipotent factor `U ∩ ẇU⁻ẇ⁻¹` that parametrises a Bruhat cell.
pub(super) fn inversion_positions(perm: &[usize]) -> Vec<(usize, usize)> {
    let inv = invert(perm);
    let n = perm.len();
    (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .filter(|&(a, b)| inv[a] > inv[b])
        .collect()
}

/// Upper-triangular positions kept by `π`: the pattern of `U ∩ ẇUẇ⁻¹`.
pub(super) fn kept_positions(perm: &[usize]) -> Vec<(usize, usize)> {
    let inv = invert(perm);
    let n = perm.len();
    (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .filter(|&(a, b)| inv[a] < inv[b])
        .collect()
}

pub(super) fn invert(perm: &[usize]) -> Vec<usize> {
    let mut out = vec![0; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        out[p] = i;
    }
    out
}

/// Upper-triangular positions ordered by increasing `b - a`.
pub(super) fn by_height(mut positions: Vec<(usize, usize)>) -> Vec<(usize, usize)> {
    positions.sort_by_key(|&(a, b)| (b - a, a));
    positions
}

impl SpecialLinear {
    /// Canonical flag spanned by the columns of an invertible matrix.
    pub fn flag_of(&self, g: &Mat) -> FlagPoint {
        let f = &self.field;
        let n = self.n;
        let mut cols: Vec<Vec<Fe>> = Vec::with_capacity(n);
        let mut pivots: Vec<usize> = Vec::with_capacity(n);
        for j in 0..n {
            let mut v = g.column(j);
            for (b, &p) in cols.iter().zip(&pivots) {
                let c = v[p];
                if c.0 != 0 {
                    for (x, &y) in v.iter_mut().zip(b) {
                        *x = f.sub(*x, f.mul(c, y));
                    }
                }
            }
            let p = (0..n)
                .rev()
                .find(|&r| v[r].0 != 0)
                .expect("columns are independent");
            let s = f.inv(v[p]).expect("pivot is nonzero");
            v.iter_mut().for_each(|x| *x = f.mul(*x, s));
            cols.push(v);
            pivots.push(p);
        }
        let data = (0..n)
            .flat_map(|r| cols.iter().map(move |c| c[r]))
            .collect();
        FlagPoint {
            basis: Mat::from_rows(n, n, data),
        }
    }

    /// The flag `g·E` for the coordinate flag `E`.
    pub fn standard_flag(&self) -> FlagPoint {
        self.flag_of(&Mat::identity(self.n))
    }

    /// A determinant-one matrix whose columns span the flag.
    pub fn flag_representative(&self, flag: &FlagPoint) -> Mat {
        let f = &self.field;
        let d = flag.basis.det(f);
        let scale = f.inv(d).expect("basis is invertible");
        let mut g = flag.basis.clone();
        let last = self.n - 1;
        for r in 0..self.n {
            g.set(r, last, f.mul(g.get(r, last), scale));
        }
        g
    }

    /// All flags over the current level, one Bruhat cell `U_w ẇ E` at a time.
    pub fn flags(&self) -> Vec<FlagPoint> {
        let q = self.field.size();
        let mut out = Vec::new();
        for w in self.table.elements() {
            let perm = self.perm_of(w);
            let cell = inversion_positions(&perm);
            let pm = permutation_matrix(&perm);
            let total = (q as u64).pow(cell.len() as u32);
            for code in 0..total {
                let mut u = Mat::identity(self.n);
                let mut c = code;
                for &(a, b) in &cell {
                    u.set(a, b, Fe((c % q as u64) as u32));
                    c /= q as u64;
                }
                out.push(self.flag_of(&self.mul(&u, &pm)));
            }
        }
        out.sort();
        out
    }

    /// `g·B`.
    pub fn act(&self, g: &Mat, flag: &FlagPoint) -> FlagPoint {
        self.flag_of(&self.mul(g, &flag.basis))
    }

    /// `B ↦ F(B)`.
    pub fn frobenius_flag(&self, flag: &FlagPoint) -> FlagPoint {
        // Entrywise powers keep the canonical shape.
        FlagPoint {
            basis: self.frobenius(&flag.basis),
        }
    }

    /// `B ↦ F^s(B)`.
    pub fn frobenius_flag_power(&self, flag: &FlagPoint, s: u32) -> FlagPoint {
        FlagPoint {
            basis: self.frobenius_power(&flag.basis, s),
        }
    }

    /// Relative position of two flags: the `w` with `(B, B') = g(E, ẇE)`.
    pub fn rel_pos(&self, b: &FlagPoint, b_prime: &FlagPoint) -> WeylElement {
        let h = self.mul(&self.inverse(&b.basis), &b_prime.basis);
        self.element_of(&self.bruhat_cell(&h))
    }

    /// Relative position read off `dim(V_i ∩ V'_j) = i + j - rank[V_i | V'_j]`:
    /// column `j` of the permutation sits in the row where that dimension
    /// first jumps.
    pub fn rel_pos_by_ranks(&self, b: &FlagPoint, b_prime: &FlagPoint) -> WeylElement {
        let n = self.n;
        let f = &self.field;
        let dim = |i: usize, j: usize| -> usize {
            if i == 0 || j == 0 {
                return 0;
            }
            let m = b
                .basis
                .column_block(0, i)
                .hconcat(&b_prime.basis.column_block(0, j));
            i + j - m.rank(f)
        };
        let perm: Vec<usize> = (1..=n)
            .map(|j| {
                (1..=n)
                    .find(|&i| dim(i, j) - dim(i, j - 1) == 1)
                    .expect("dimension jumps once")
                    - 1
            })
            .collect();
        self.element_of(&perm)
    }

    /// Row of the pivot in each column after reducing `h ∈ BẇB` to a
    /// monomial matrix; this is the permutation `π` of `w`.
    pub fn bruhat_cell(&self, h: &Mat) -> Vec<usize> {
        self.bruhat_reduce(h).0
    }

    /// `(π, L)` with `L` upper unitriangular and `L·h ∈ ẇB`.
    pub(super) fn bruhat_reduce(&self, h: &Mat) -> (Vec<usize>, Mat) {
        let f = &self.field;
        let n = self.n;
        let mut m = h.clone();
        let mut left = Mat::identity(n);
        let mut pivots: Vec<usize> = Vec::with_capacity(n);
        for j in 0..n {
            // Subtracting multiples of earlier columns clears the rows they
            // own; each earlier column is a single entry by now, so the
            // column operation only touches that row.
            for &r in &pivots {
                m.set(r, j, Fe(0));
            }
            let r = (0..n)
                .rev()
                .find(|&r| m.get(r, j).0 != 0)
                .expect("h is invertible");
            let pv = m.get(r, j);
            for above in 0..r {
                let c = m.get(above, j);
                if c.0 == 0 {
                    continue;
                }
                let factor = f.div(c, pv).expect("pivot is nonzero");
                for col in 0..n {
                    m.set(
                        above,
                        col,
                        f.sub(m.get(above, col), f.mul(factor, m.get(r, col))),
                    );
                    left.set(
                        above,
                        col,
                        f.sub(left.get(above, col), f.mul(factor, left.get(r, col))),
                    );
                }
            }
            pivots.push(r);
        }
        (pivots, left)
    }

    /// Tits representative: the product of `ṡ_i` (the block `[[0,1],[-1,0]]`
    /// at `i, i+1`) along a reduced word.
    pub fn tits(&self, w: &WeylElement) -> Mat {
        let f = &self.field;
        self.sys
            .reduced_word(w)
            .letters()
            .iter()
            .fold(Mat::identity(self.n), |acc, &i| {
                let mut s = Mat::identity(self.n);
                s.set(i, i, Fe(0));
                s.set(i + 1, i + 1, Fe(0));
                s.set(i, i + 1, f.one());
                s.set(i + 1, i, f.neg(f.one()));
                self.mul(&acc, &s)
            })
    }
}

/// `P e_k = e_{π(k)}`.
pub(super) fn permutation_matrix(perm: &[usize]) -> Mat {
    let n = perm.len();
    let mut m = Mat::zero(n, n);
    for (k, &p) in perm.iter().enumerate() {
        m.set(p, k, Fe(1));
    }
    m
}
