//! Permutation realisations of the classical types.
//!
//! Type `A_{n-1}` acts on positions `0..n`. Types B/C/D act on positions
//! `0..2n` commuting with `J(x) = 2n-1-x`; position `x < n` stands for `+ε_x`
//! and position `J(x)` for `-ε_x`.

use super::{CoxeterError, CoxeterSystem, WeylElement};
use std::collections::HashMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PermViewKind {
    Symmetric,
    SignedB,
    SignedD,
}

#[derive(Debug, Clone)]
pub struct PermView {
    kind: PermViewKind,
    /// Number of coordinates `n` (not the number of positions).
    n: usize,
    generator_perms: Vec<Vec<usize>>,
    root_vectors: Vec<Vec<i64>>,
    root_lookup: HashMap<Vec<i64>, usize>,
}

impl PermView {
    pub(super) fn new(sys: &CoxeterSystem, kind: PermViewKind) -> Result<Self, CoxeterError> {
        let rank = sys.rank();
        let n = match kind {
            PermViewKind::Symmetric => rank + 1,
            _ => rank,
        };
        let simple: Vec<Vec<i64>> = (0..rank)
            .map(|i| {
                let mut v = vec![0i64; n];
                if i + 1 < n {
                    v[i] = 1;
                    v[i + 1] = -1;
                } else {
                    v[i] = 1;
                }
                if kind == PermViewKind::SignedD && i == rank - 1 {
                    v = vec![0; n];
                    v[n - 2] = 1;
                    v[n - 1] = 1;
                }
                v
            })
            .collect();
        let root_vectors: Vec<Vec<i64>> = (0..2 * sys.num_positive_roots())
            .map(|k| {
                let mut v = vec![0i64; n];
                for (i, &c) in sys.root(k).iter().enumerate() {
                    for (t, x) in v.iter_mut().enumerate() {
                        *x += c * simple[i][t];
                    }
                }
                v
            })
            .collect();
        let root_lookup = root_vectors
            .iter()
            .cloned()
            .enumerate()
            .map(|(k, v)| (v, k))
            .collect();
        let degree = if kind == PermViewKind::Symmetric {
            n
        } else {
            2 * n
        };
        let j = |x: usize| degree - 1 - x;
        let swap = |a: usize, b: usize, c: Option<(usize, usize)>| {
            let mut p: Vec<usize> = (0..degree).collect();
            p.swap(a, b);
            if let Some((x, y)) = c {
                p.swap(x, y);
            }
            p
        };
        let mut generator_perms: Vec<Vec<usize>> = (0..n - 1)
            .map(|i| match kind {
                PermViewKind::Symmetric => swap(i, i + 1, None),
                _ => swap(i, i + 1, Some((j(i), j(i + 1)))),
            })
            .collect();
        match kind {
            PermViewKind::Symmetric => {}
            PermViewKind::SignedB => generator_perms.push(swap(n - 1, n, None)),
            PermViewKind::SignedD => {
                // s_{(n-1)'} = s_n s_{n-1} s_n.
                let sn = swap(n - 1, n, None);
                let prod = compose(&compose(&sn, &generator_perms[n - 2]), &sn);
                generator_perms.push(prod);
            }
        }
        let view = PermView {
            kind,
            n,
            generator_perms,
            root_vectors,
            root_lookup,
        };
        for (i, g) in view.generator_perms.iter().enumerate() {
            if view.from_perm(sys, g)? != *sys.generator(i) {
                return Err(CoxeterError::NotInGroup);
            }
        }
        Ok(view)
    }

    pub fn kind(&self) -> PermViewKind {
        self.kind
    }

    /// Number of coordinates `n`.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of permuted positions (`n` or `2n`).
    pub fn degree(&self) -> usize {
        match self.kind {
            PermViewKind::Symmetric => self.n,
            _ => 2 * self.n,
        }
    }

    /// `J(x) = 2n-1-x` on signed positions.
    pub fn mirror(&self, x: usize) -> usize {
        self.degree() - 1 - x
    }

    pub fn generator_perm(&self, i: usize) -> &[usize] {
        &self.generator_perms[i]
    }

    /// Permutation of positions induced by `w`.
    pub fn to_perm(&self, sys: &CoxeterSystem, w: &WeylElement) -> Vec<usize> {
        sys.reduced_word(w)
            .letters()
            .iter()
            .fold((0..self.degree()).collect(), |acc: Vec<usize>, &i| {
                compose(&acc, &self.generator_perms[i])
            })
    }

    /// Group element realising a permutation of positions.
    pub fn from_perm(
        &self,
        sys: &CoxeterSystem,
        perm: &[usize],
    ) -> Result<WeylElement, CoxeterError> {
        let degree = self.degree();
        let mut seen = vec![false; degree];
        if perm.len() != degree
            || perm
                .iter()
                .any(|&x| x >= degree || std::mem::replace(&mut seen[x], true))
        {
            return Err(CoxeterError::NotInGroup);
        }
        let signed = self.kind != PermViewKind::Symmetric;
        if signed && (0..degree).any(|x| perm[self.mirror(x)] != self.mirror(perm[x])) {
            return Err(CoxeterError::NotInGroup);
        }
        // Image of ε_x as (coordinate, sign).
        let image: Vec<(usize, i64)> = (0..self.n)
            .map(|x| {
                let p = perm[x];
                if !signed || p < self.n {
                    (p, 1)
                } else {
                    (self.mirror(p), -1)
                }
            })
            .collect();
        let mut root_perm = Vec::with_capacity(self.root_vectors.len());
        for v in &self.root_vectors {
            let mut img = vec![0i64; self.n];
            for (x, &c) in v.iter().enumerate() {
                let (y, s) = image[x];
                img[y] += s * c;
            }
            let k = self.root_lookup.get(&img).ok_or(CoxeterError::NotInGroup)?;
            root_perm.push(*k as u16);
        }
        sys.element_from_root_perm(root_perm)
    }
}

/// `(a ∘ b)(x) = a(b(x))`.
pub fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&x| a[x]).collect()
}
