//! The covering `X̃_w = {g'U*_w : g'⁻¹F(g') ∈ ẇU*}`, the maps `σ̃_i`, and the
//! torus `T*_w`.

use super::flags::{by_height, kept_positions, permutation_matrix, FlagPoint};
use super::{FlagError, SpecialLinear};
use crate::coxeter::WeylElement;
use crate::field::{Fe, FiniteField};
use crate::matrix::Mat;
use crate::Poly;
use serde::Serialize;
use std::collections::BTreeSet;

/// Positions `(a, b)`, `a < b`, of the subgroup `U*_w = U* ∩ ẇU*ẇ⁻¹`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UStarPattern {
    positions: Vec<(usize, usize)>,
}

impl UStarPattern {
    pub fn positions(&self) -> &[(usize, usize)] {
        &self.positions
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.positions.contains(&(a, b))
    }
}

/// A coset `g'U*_w`, stored through its canonical representative.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CosetPoint {
    rep: Mat,
}

impl CosetPoint {
    pub fn representative(&self) -> &Mat {
        &self.rep
    }
}

/// `T*_w` as its list of diagonals, computed over the level `GF(q^e)` with
/// `e` the order of `w`, where all of it is rational.
#[derive(Debug, Clone)]
pub struct TorusData {
    pub w: WeylElement,
    pub level: u32,
    pub diagonals: Vec<Vec<Fe>>,
}

impl TorusData {
    pub fn order(&self) -> usize {
        self.diagonals.len()
    }
}

/// All determinant-one diagonals over `field`.
fn diagonal_torus(field: &FiniteField, n: usize) -> Vec<Vec<Fe>> {
    let units: Vec<Fe> = field.units().collect();
    let mut out = vec![vec![]];
    for _ in 0..n - 1 {
        out = out
            .into_iter()
            .flat_map(|d: Vec<Fe>| units.iter().map(move |&u| [d.clone(), vec![u]].concat()))
            .collect();
    }
    out.into_iter()
        .map(|mut d| {
            let prod = d.iter().fold(field.one(), |acc, &x| field.mul(acc, x));
            d.push(field.inv(prod).expect("units"));
            d
        })
        .collect()
}

impl SpecialLinear {
    pub fn ustar_pattern(&self, w: &WeylElement) -> UStarPattern {
        UStarPattern {
            positions: kept_positions(&self.perm_of(w)),
        }
    }

    /// Canonical representative of `g'U*_w`: write `g' = g_0 b` with `g_0`
    /// the canonical basis of the flag `g'E`, then clear the entries of `b`
    /// at the `U*_w` positions by column operations, lowest height first.
    pub fn coset(&self, w: &WeylElement, g: &Mat) -> CosetPoint {
        let f = &self.field;
        let flag = self.flag_of(g);
        let mut b = self.mul(&self.inverse(flag.basis()), g);
        debug_assert!(b.is_upper_triangular());
        for (a, c) in by_height(kept_positions(&self.perm_of(w))) {
            let x = b.get(a, c);
            if x.0 == 0 {
                continue;
            }
            // Column c -= (x / b_aa) column a; rows below a are untouched.
            let factor = f.div(x, b.get(a, a)).expect("diagonal is nonzero");
            for r in 0..=a {
                b.set(r, c, f.sub(b.get(r, c), f.mul(factor, b.get(r, a))));
            }
        }
        CosetPoint {
            rep: self.mul(flag.basis(), &b),
        }
    }

    /// `g'⁻¹F(g') ∈ ẇU*`.
    pub fn in_cover(&self, w: &WeylElement, g: &Mat) -> bool {
        self.cover_unipotent(w, g).is_upper_unitriangular()
    }

    /// `u = ẇ⁻¹g'⁻¹F(g')`; unipotent upper triangular on the cover.
    pub fn cover_unipotent(&self, w: &WeylElement, g: &Mat) -> Mat {
        let wd = self.tits(w);
        let lhs = self.mul(&self.inverse(&wd), &self.inverse(g));
        self.mul(&lhs, &self.frobenius(g))
    }

    /// `π_w: X̃_w → X_w`, `g'U*_w ↦ g'B*`.
    pub fn cover_projection(&self, point: &CosetPoint) -> FlagPoint {
        self.flag_of(&point.rep)
    }

    /// Points of `X̃_w` over the level.
    ///
    /// For `B = g_0E ∈ X_w` with `det g_0 = 1` factor `g_0⁻¹F(g_0) = u'ẇb` with
    /// `u'` in the cell pattern and `b ∈ B*`. A coset over `B` is `g_0u't` with
    /// `t` diagonal, and it lies on the cover exactly when
    /// `t_{π(k)}⁻¹ b_kk t_k^q = 1` for every `k`.
    pub fn x_tilde_points(&self, w: &WeylElement) -> Vec<CosetPoint> {
        self.x_tilde_points_over(w, &self.x_w_points(w))
    }

    /// Cover points lying over the given points of `X_w`.
    pub fn x_tilde_points_over(&self, w: &WeylElement, base: &[FlagPoint]) -> Vec<CosetPoint> {
        let f = &self.field;
        let perm = self.perm_of(w);
        let wd = self.tits(w);
        let torus = diagonal_torus(f, self.n);
        let mut out = BTreeSet::new();
        for flag in base {
            let g0 = self.flag_representative(flag);
            let m = self.mul(&self.inverse(&g0), &self.frobenius(&g0));
            let u_prime = self.cell_factor(&perm, &m);
            let b = self.mul(&self.inverse(&wd), &self.mul(&self.inverse(&u_prime), &m));
            debug_assert!(b.is_upper_triangular());
            let base = self.mul(&g0, &u_prime);
            for t in &torus {
                let ok = (0..self.n).all(|k| {
                    let lhs = f.mul(b.get(k, k), f.pow_u(t[k], self.q as u64));
                    lhs == t[perm[k]]
                });
                if ok {
                    out.insert(self.coset(w, &self.mul(&base, &Mat::diagonal(t))));
                }
            }
        }
        out.into_iter().collect()
    }

    /// Same set by scanning all of `SL_n` over the level.
    pub fn x_tilde_points_brute(&self, w: &WeylElement) -> Vec<CosetPoint> {
        let set: BTreeSet<CosetPoint> = self
            .full_group()
            .into_iter()
            .filter(|g| self.in_cover(w, g))
            .map(|g| self.coset(w, &g))
            .collect();
        set.into_iter().collect()
    }

    /// The unique `u'` in the cell pattern of `π` with `u'⁻¹h ∈ ẇB`.
    fn cell_factor(&self, perm: &[usize], h: &Mat) -> Mat {
        let (found, left) = self.bruhat_reduce(h);
        debug_assert_eq!(found, perm);
        let mut u = self.inverse(&left);
        // Move the part of u lying in U ∩ ẇUẇ⁻¹ across ẇ.
        let f = &self.field;
        for (a, c) in by_height(kept_positions(perm)) {
            let x = u.get(a, c);
            if x.0 == 0 {
                continue;
            }
            for r in 0..=a {
                u.set(r, c, f.sub(u.get(r, c), f.mul(x, u.get(r, a))));
            }
        }
        debug_assert!(kept_positions(perm)
            .iter()
            .all(|&(a, c)| u.get(a, c).0 == 0));
        u
    }

    /// `Ψ` on the cover: `g'U*_w ↦ F(g')U*_w`.
    pub fn psi_tilde(&self, w: &WeylElement, point: &CosetPoint) -> CosetPoint {
        self.coset(w, &self.frobenius(&point.rep))
    }

    /// `u = u_! u^!` with `u_!` in the root subgroup at `(i, i+1)` and `u^!`
    /// vanishing there.
    pub fn u_factor(&self, u: &Mat, i: usize) -> (Mat, Mat) {
        let f = &self.field;
        let bang = Mat::root_element(self.n, i, i + 1, u.get(i, i + 1));
        let inv = Mat::root_element(self.n, i, i + 1, f.neg(u.get(i, i + 1)));
        (bang, self.mul(&inv, u))
    }

    /// `σ̃_i: X̃_w → X̃_{w'}`, `w = s_i b`, `w' = b s_i`:
    /// `g'U*_w ↦ g'ẇu_!ḃ⁻¹U*_{w'}` with `u = ẇ⁻¹g'⁻¹F(g')`.
    pub fn sigma_tilde(
        &self,
        w: &WeylElement,
        i: usize,
        point: &CosetPoint,
    ) -> Result<(WeylElement, CosetPoint), FlagError> {
        if !self.sys.is_left_descent(w, i) {
            return Err(FlagError::NotLeftDescent(
                self.sys.label(i).to_string(),
                self.sys.format_element(w),
            ));
        }
        self.sigma_tilde_on(w, i, &point.rep)
    }

    /// `σ̃_i` evaluated on an arbitrary representative of the coset.
    pub(super) fn sigma_tilde_on(
        &self,
        w: &WeylElement,
        i: usize,
        rep: &Mat,
    ) -> Result<(WeylElement, CosetPoint), FlagError> {
        let (b, w_prime) = self.split(w, self.sys.generator(i))?;
        let u = self.cover_unipotent(w, rep);
        if !u.is_upper_unitriangular() {
            return Err(FlagError::NotOnVariety(self.sys.format_element(w)));
        }
        let (bang, _) = self.u_factor(&u, i);
        let g = self.mul(
            &self.mul(rep, &self.tits(w)),
            &self.mul(&bang, &self.inverse(&self.tits(&b))),
        );
        Ok((w_prime.clone(), self.coset(&w_prime, &g)))
    }

    /// Right action of `t ∈ T` on cosets, `g'U*_w ↦ g't U*_w`.
    pub fn torus_act(&self, w: &WeylElement, point: &CosetPoint, t: &[Fe]) -> CosetPoint {
        self.coset(w, &self.mul(&point.rep, &Mat::diagonal(t)))
    }

    /// `T*_w = {t : ẇ⁻¹tẇ = F(t)}` over the level `GF(q^{ord w})`.
    pub fn torus(&self, w: &WeylElement) -> Result<TorusData, FlagError> {
        let level = self.sys.order_of(w) as u32;
        let big = self.at_level(level)?;
        let perm = self.perm_of(w);
        let f = big.field();
        let diagonals = diagonal_torus(f, self.n)
            .into_iter()
            .filter(|t| (0..self.n).all(|k| t[perm[k]] == f.pow_u(t[k], self.q as u64)))
            .collect();
        Ok(TorusData {
            w: w.clone(),
            level,
            diagonals,
        })
    }

    /// `|T*_w|` as a polynomial in `q` from the cycle type of `w`:
    /// `Π (q^c - 1)` over cycles, divided by `q - 1`.
    pub fn torus_order_polynomial(&self, w: &WeylElement) -> Poly {
        let mut cycles = cycle_lengths(&self.perm_of(w));
        cycles.sort_unstable();
        let first = cycles.remove(0);
        let geometric = Poly::from_terms((0..first as i32).map(|e| (e, 1)));
        cycles.iter().fold(geometric, |acc, &c| {
            &acc * &(&Poly::monomial(1, c as i32) - &Poly::one())
        })
    }

    /// `|{t : ẇ⁻¹tẇ = t}|` over `field`: the torus with `F` replaced by the identity.
    pub fn torus_fixed_count(&self, w: &WeylElement, field: &FiniteField) -> usize {
        let perm = self.perm_of(w);
        diagonal_torus(field, self.n)
            .iter()
            .filter(|t| (0..self.n).all(|k| t[perm[k]] == t[k]))
            .count()
    }

    /// Permutation matrix of `w` without signs.
    pub fn permutation_matrix(&self, w: &WeylElement) -> Mat {
        permutation_matrix(&self.perm_of(w))
    }
}

fn cycle_lengths(perm: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; perm.len()];
    let mut out = Vec::new();
    for start in 0..perm.len() {
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = perm[x];
            len += 1;
        }
        if len > 0 {
            out.push(len);
        }
    }
    out
}
