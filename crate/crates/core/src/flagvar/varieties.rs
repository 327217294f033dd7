//! Point sets `X_w` at a fixed level and the maps `Ψ`, `σ(a)`, `T_ι`.

use super::flags::FlagPoint;
use super::{FlagError, SpecialLinear};
use crate::coxeter::WeylElement;
use crate::field::Fe;
use crate::matrix::Mat;
use crate::paths::{vertices, Path, PathError};
use std::collections::BTreeMap;

impl SpecialLinear {
    /// Flags over the current level with `rel_pos(B, F(B)) = w`.
    pub fn x_w_points(&self, w: &WeylElement) -> Vec<FlagPoint> {
        self.flags()
            .into_iter()
            .filter(|b| self.rel_pos(b, &self.frobenius_flag(b)) == *w)
            .collect()
    }

    /// Every flag of the level sorted into its `X_w`, keyed by element index.
    pub fn bruhat_partition(&self) -> BTreeMap<usize, Vec<FlagPoint>> {
        let mut out: BTreeMap<usize, Vec<FlagPoint>> = BTreeMap::new();
        for b in self.flags() {
            let w = self.rel_pos(&b, &self.frobenius_flag(&b));
            out.entry(self.table.index_of(&w)).or_default().push(b);
        }
        out
    }

    /// `Ψ: X_w → X_w`, `B ↦ F(B)`.
    pub fn psi(&self, flag: &FlagPoint) -> FlagPoint {
        self.frobenius_flag(flag)
    }

    /// Inverse of `Ψ` on the level, `F^(m-1)`.
    pub fn psi_inverse(&self, flag: &FlagPoint) -> FlagPoint {
        self.frobenius_flag_power(flag, self.level - 1)
    }

    fn check_on_variety(&self, w: &WeylElement, flag: &FlagPoint) -> Result<(), FlagError> {
        if self.rel_pos(flag, &self.frobenius_flag(flag)) != *w {
            return Err(FlagError::NotOnVariety(self.sys.format_element(w)));
        }
        Ok(())
    }

    /// `(b, w')` for `w = ab`, `w' = ba`, after checking
    /// `l(w) = l(a) + l(b) = l(w')`.
    pub fn split(
        &self,
        w: &WeylElement,
        a: &WeylElement,
    ) -> Result<(WeylElement, WeylElement), FlagError> {
        let sys = &self.sys;
        let b = sys.mul(&sys.inverse(a), w);
        let w_prime = sys.mul(&b, a);
        let sum = a.length() + b.length();
        if sum != w.length() || w_prime.length() != w.length() {
            return Err(FlagError::Lengths {
                w: sys.format_element(w),
                lw: w.length(),
                sum,
                w_prime: sys.format_element(&w_prime),
                lw_prime: w_prime.length(),
            });
        }
        Ok((b, w_prime))
    }

    /// Flags in position `s_i` from `flag`.
    fn neighbours(&self, flag: &FlagPoint, i: usize) -> impl Iterator<Item = FlagPoint> + '_ {
        let f = &self.field;
        let base = flag.basis().clone();
        let mut swap = Mat::identity(self.n);
        swap.set(i, i, Fe(0));
        swap.set(i + 1, i + 1, Fe(0));
        swap.set(i, i + 1, f.one());
        swap.set(i + 1, i, f.one());
        f.elements().map(move |x| {
            let mut u = Mat::identity(self.n);
            u.set(i, i + 1, x);
            self.flag_of(&self.mul(&base, &self.mul(&u, &swap)))
        })
    }

    /// `σ(a): X_{ab} → X_{ba}`: the unique `B'` with `(B, B')` in position
    /// `a` and `(B', F(B))` in position `b`, found along the gallery of
    /// type `(word(a), word(b))`.
    pub fn sigma(
        &self,
        w: &WeylElement,
        a: &WeylElement,
        flag: &FlagPoint,
    ) -> Result<FlagPoint, FlagError> {
        self.split(w, a)?;
        self.check_on_variety(w, flag)?;
        let target = self.frobenius_flag(flag);
        let mut current = flag.clone();
        let mut remaining = w.clone();
        for &i in self.sys.reduced_word(a).letters() {
            remaining = self.sys.left_mul_gen(i, &remaining);
            // The gallery is unique because word(a)word(b) is reduced.
            current = self
                .neighbours(&current, i)
                .find(|c| self.rel_pos(c, &target) == remaining)
                .expect("a reduced gallery always continues");
        }
        Ok(current)
    }

    /// `σ_i = σ(s_i)`, defined when `i` is a left descent of `w` and the
    /// conjugate `s_i w s_i` has the same length.
    pub fn sigma_i(
        &self,
        w: &WeylElement,
        i: usize,
        flag: &FlagPoint,
    ) -> Result<FlagPoint, FlagError> {
        if !self.sys.is_left_descent(w, i) {
            return Err(FlagError::NotLeftDescent(
                self.sys.label(i).to_string(),
                self.sys.format_element(w),
            ));
        }
        self.sigma(w, self.sys.generator(i), flag)
    }

    /// Inverse of `σ_i: X_{w'} → X_w` where `w = s_i w' s_i`; computed as
    /// `Ψ⁻¹ ∘ σ(b)` with `w = b s_i`.
    pub fn sigma_i_inverse(
        &self,
        w: &WeylElement,
        i: usize,
        flag: &FlagPoint,
    ) -> Result<FlagPoint, FlagError> {
        let b = self.sys.right_mul_gen(w, i);
        let w_prime = self.sys.left_mul_gen(i, &b);
        if b.length() + 1 != w.length() || w_prime.length() != w.length() {
            return Err(FlagError::Lengths {
                w: self.sys.format_element(w),
                lw: w.length(),
                sum: b.length() + 1,
                w_prime: self.sys.format_element(&w_prime),
                lw_prime: w_prime.length(),
            });
        }
        let moved = self.sigma(w, &b, flag)?;
        Ok(self.psi_inverse(&moved))
    }

    /// `T_ι`: composition of `σ_i` along positive steps and `σ_i⁻¹` along
    /// negative ones.
    pub fn t_path(&self, path: &Path, flag: &FlagPoint) -> Result<FlagPoint, FlagError> {
        let verts = vertices(&self.sys, path).map_err(|e| match e {
            PathError::InvalidStep { index, .. } => FlagError::BadStep(index),
            _ => FlagError::BadStep(0),
        })?;
        self.check_on_variety(&path.base, flag)?;
        path.steps
            .iter()
            .zip(&verts)
            .try_fold(flag.clone(), |cur, (step, w)| {
                if step.positive {
                    self.sigma_i(w, step.gen, &cur)
                } else {
                    self.sigma_i_inverse(w, step.gen, &cur)
                }
            })
    }
}
