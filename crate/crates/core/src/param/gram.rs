//! Gram coordinates for a symplectic or orthogonal space with a
//! semilinear isometry.
//!
//! Blocks `r = 0..σ` have sizes `p_0 ≥ p_1 ≥ ⋯`. Each block carries vectors
//! `w^r_i` (`i < p_r`) and `z^r_j` (`1 ≤ j ≤ p_r`); the map sends
//! `w^r_i ↦ w^r_{i+1}`, `w^r_{p_r-1} ↦ z^r_{p_r}`, `z^r_j ↦ z^r_{j-1}` and
//! `z^r_1 ↦ z^r_0`, where `z^r_0` is expanded in the basis with the
//! coefficient variables. The coordinates are the pairings of `w^t_0` with
//! the `z`'s plus those coefficients.

use super::{ParamError, Twist};
use crate::field::{Fe, FiniteField};
use crate::matrix::Mat;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::cmp::{Ordering, Reverse};
use std::collections::BTreeMap;
use std::ops::Range;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Form {
    /// Alternating bilinear form, no quadratic form.
    Symplectic,
    /// Quadratic form on an even-dimensional space.
    EvenOrthogonal,
    /// Quadratic form on an odd-dimensional space. `complement` is the value
    /// of the quadratic form on the fixed vector orthogonal to the basis.
    OddOrthogonal { complement: Fe },
}

impl Form {
    /// `(x, y) = sign · (y, x)`.
    fn sign(self, f: &FiniteField) -> Fe {
        match self {
            Form::Symplectic => f.neg(f.one()),
            _ => f.one(),
        }
    }

    fn quadratic(self) -> bool {
        self != Form::Symplectic
    }

    fn odd(self) -> bool {
        matches!(self, Form::OddOrthogonal { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GramConfig {
    pub form: Form,
    pub blocks: Vec<usize>,
    pub twist: Twist,
}

/// One coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Var {
    /// `(w^b_0, z^b_h)`, `1 ≤ h < p_b`.
    SameBlock { block: usize, h: usize },
    /// `(w^from_0, z^to_h)` with `from < to`, `1 ≤ h < p_to`.
    LaterBlock { from: usize, to: usize, h: usize },
    /// `(w^from_0, z^to_h)` with `from > to`, `1 ≤ h ≤ p_from`.
    EarlierBlock { from: usize, to: usize, h: usize },
    /// Coefficient of `w^block_i` in `z^target_0`.
    WCoeff {
        target: usize,
        block: usize,
        i: usize,
    },
    /// Coefficient of `z^block_j` in `z^target_0`.
    ZCoeff {
        target: usize,
        block: usize,
        j: usize,
    },
    /// Coefficient of the complement vector in `z^target_0` (odd dimension).
    ComplementCoeff { target: usize },
}

impl GramConfig {
    pub fn validate(&self, f: &FiniteField) -> Result<(), ParamError> {
        let b = &self.blocks;
        if b.is_empty() || b.contains(&0) || b.windows(2).any(|x| x[0] < x[1]) {
            return Err(ParamError::Blocks(b.clone()));
        }
        if self.form == Form::EvenOrthogonal && b.len() % 2 == 1 {
            return Err(ParamError::OddBlockCount(b.len()));
        }
        if self.form.quadratic() && f.characteristic() == 2 {
            return Err(ParamError::Characteristic2);
        }
        if let Form::OddOrthogonal { complement } = self.form {
            if complement.0 == 0 || complement.0 >= f.size() {
                return Err(ParamError::DegenerateComplement);
            }
        }
        Ok(())
    }

    fn count(&self) -> usize {
        self.blocks.len()
    }

    fn size(&self, r: usize) -> usize {
        self.blocks[r]
    }

    /// Dimension of the space.
    pub fn dimension(&self) -> usize {
        2 * self.blocks.iter().sum::<usize>() + usize::from(self.form.odd())
    }

    /// Every coordinate, in a fixed order.
    pub fn all_variables(&self) -> Vec<Var> {
        let s = self.count();
        let mut out = self.pairing_variables();
        for target in 0..s {
            for block in 0..s {
                out.extend((0..self.size(block)).map(|i| Var::WCoeff { target, block, i }));
                out.extend((1..=self.size(block)).map(|j| Var::ZCoeff { target, block, j }));
            }
            if self.form.odd() {
                out.push(Var::ComplementCoeff { target });
            }
        }
        out
    }

    fn pairing_variables(&self) -> Vec<Var> {
        let s = self.count();
        let mut out = Vec::new();
        for block in 0..s {
            out.extend((1..self.size(block)).map(|h| Var::SameBlock { block, h }));
        }
        for from in 0..s {
            for to in from + 1..s {
                out.extend((1..self.size(to)).map(|h| Var::LaterBlock { from, to, h }));
            }
        }
        for from in 0..s {
            for to in 0..from {
                out.extend((1..=self.size(from)).map(|h| Var::EarlierBlock { from, to, h }));
            }
        }
        out
    }

    /// The inputs of the triangular solve: all pairings, the top `z`
    /// coefficients `ZCoeff{target ≤ block, j = p_block}` (strictly below the
    /// diagonal when a quadratic form is present) and the complement
    /// coefficients.
    pub fn free_variables(&self) -> Vec<Var> {
        let s = self.count();
        let mut out = self.pairing_variables();
        for target in 0..s {
            for block in target..s {
                if block > target || !self.form.quadratic() {
                    out.push(Var::ZCoeff {
                        target,
                        block,
                        j: self.size(block),
                    });
                }
            }
        }
        if self.form.odd() {
            out.extend((0..s).map(|target| Var::ComplementCoeff { target }));
        }
        out
    }

    pub fn dependent_variables(&self) -> Vec<Var> {
        let free: std::collections::BTreeSet<Var> = self.free_variables().into_iter().collect();
        self.all_variables()
            .into_iter()
            .filter(|v| !free.contains(v))
            .collect()
    }
}

/// `Σ_r (2r-1) p_r` over 1-based `r`, less the number of blocks for even
/// orthogonal forms.
pub fn dimension_formula(blocks: &[usize], form: Form) -> usize {
    let total: usize = blocks
        .iter()
        .enumerate()
        .map(|(r, &p)| (2 * r + 1) * p)
        .sum();
    if form == Form::EvenOrthogonal {
        total - blocks.len()
    } else {
        total
    }
}

/// A full assignment of coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GramSystem {
    pub config: GramConfig,
    values: BTreeMap<Var, Fe>,
}

impl GramSystem {
    /// An arbitrary assignment; every coordinate of `config` must be given.
    pub fn from_values(config: GramConfig, values: BTreeMap<Var, Fe>) -> Result<Self, ParamError> {
        let expected = config.all_variables();
        if expected.len() != values.len() || expected.iter().any(|v| !values.contains_key(v)) {
            return Err(ParamError::FreeInputs {
                expected: expected.len(),
                got: values.len(),
            });
        }
        Ok(GramSystem { config, values })
    }

    pub fn get(&self, var: Var) -> Option<Fe> {
        self.values.get(&var).copied()
    }

    pub fn values(&self) -> &BTreeMap<Var, Fe> {
        &self.values
    }

    /// Copy with `var` shifted by `delta`.
    pub fn perturbed(&self, f: &FiniteField, var: Var, delta: Fe) -> Self {
        let mut out = self.clone();
        if let Some(v) = out.values.get_mut(&var) {
            *v = f.add(*v, delta);
        }
        out
    }
}

/// Evaluates the coordinate equations on an assignment.
struct Equations<'a> {
    f: &'a FiniteField,
    cfg: &'a GramConfig,
    values: &'a BTreeMap<Var, Fe>,
}

impl Equations<'_> {
    fn val(&self, var: Var) -> Fe {
        self.values[&var]
    }

    fn tw(&self, a: Fe, e: usize) -> Fe {
        self.cfg.twist.apply(self.f, a, e as u32)
    }

    fn add(&self, a: Fe, b: Fe) -> Fe {
        self.f.add(a, b)
    }

    fn mul(&self, a: Fe, b: Fe) -> Fe {
        self.f.mul(a, b)
    }

    fn p(&self, r: usize) -> usize {
        self.cfg.size(r)
    }

    fn sign(&self) -> Fe {
        self.cfg.form.sign(self.f)
    }

    /// `(ξ, ξ)` and `Q(ξ)`; zero when there is no complement.
    fn complement(&self) -> (Fe, Fe) {
        match self.cfg.form {
            Form::OddOrthogonal { complement } => (self.f.add(complement, complement), complement),
            _ => (self.f.zero(), self.f.zero()),
        }
    }

    fn complement_coeff(&self, target: usize) -> Fe {
        if self.cfg.form.odd() {
            self.val(Var::ComplementCoeff { target })
        } else {
            self.f.zero()
        }
    }

    fn z(&self, target: usize, block: usize, j: usize) -> Fe {
        self.val(Var::ZCoeff { target, block, j })
    }

    fn w(&self, target: usize, block: usize, i: usize) -> Fe {
        self.val(Var::WCoeff { target, block, i })
    }

    /// Pairing of `w` at level `s` against the `z` coefficients of `target`,
    /// minus the transported pairing one level down. With `literal` the
    /// right side carries an extra factor `sign`.
    fn pairing_with_w(&self, t: usize, s: usize, h: usize, literal: bool) -> Fe {
        let ps = self.p(s);
        let e = ps - h;
        let mut acc = self.z(t, s, h);
        for j in 1..h {
            acc = self.add(
                acc,
                self.mul(
                    self.tw(
                        self.val(Var::SameBlock {
                            block: s,
                            h: ps + j - h,
                        }),
                        e,
                    ),
                    self.z(t, s, j),
                ),
            );
        }
        for r in 0..s {
            for j in 1..=h {
                let c = self.val(Var::EarlierBlock {
                    from: s,
                    to: r,
                    h: ps + j - h,
                });
                acc = self.add(acc, self.mul(self.tw(c, e), self.z(t, r, j)));
            }
        }
        for r in s + 1..self.cfg.count() {
            let top = (self.p(r) + h) as isize - ps as isize;
            for j in 1..top.max(0) as usize {
                let c = self.val(Var::LaterBlock {
                    from: s,
                    to: r,
                    h: ps + j - h,
                });
                acc = self.add(acc, self.mul(self.tw(c, e), self.z(t, r, j)));
            }
        }
        let rhs = match s.cmp(&t) {
            Ordering::Less if e < self.p(t) => self.tw(
                self.val(Var::LaterBlock {
                    from: s,
                    to: t,
                    h: e,
                }),
                e,
            ),
            Ordering::Less => self.f.zero(),
            Ordering::Greater => self.tw(
                self.val(Var::EarlierBlock {
                    from: s,
                    to: t,
                    h: e,
                }),
                e,
            ),
            Ordering::Equal => self.tw(self.val(Var::SameBlock { block: t, h: e }), e),
        };
        let rhs = if literal {
            self.mul(rhs, self.sign())
        } else {
            rhs
        };
        self.f.sub(acc, rhs)
    }

    /// Pairing of `z^target_0` with `z^s_{p_s-h}` through the `w`
    /// coefficients, minus its required value.
    fn pairing_with_z(&self, t: usize, s: usize, h: usize) -> Fe {
        let ps = self.p(s);
        let mut acc = self.w(t, s, h);
        for i in 0..h {
            acc = self.add(
                acc,
                self.mul(
                    self.tw(
                        self.val(Var::SameBlock {
                            block: s,
                            h: ps + i - h,
                        }),
                        i,
                    ),
                    self.w(t, s, i),
                ),
            );
        }
        for r in 0..s {
            for i in 0..h {
                let c = self.val(Var::LaterBlock {
                    from: r,
                    to: s,
                    h: ps + i - h,
                });
                acc = self.add(acc, self.mul(self.tw(c, i), self.w(t, r, i)));
            }
        }
        for r in s + 1..self.cfg.count() {
            let top = (self.p(r) + h) as isize - ps as isize;
            for i in 0..=top.max(-1) {
                let i = i as usize;
                let c = self.val(Var::EarlierBlock {
                    from: r,
                    to: s,
                    h: ps + i - h,
                });
                acc = self.add(acc, self.mul(self.tw(c, i), self.w(t, r, i)));
            }
        }
        let rhs = match (h, s.cmp(&t)) {
            (0, Ordering::Greater) => self.mul(
                self.tw(
                    self.val(Var::EarlierBlock {
                        from: s,
                        to: t,
                        h: ps,
                    }),
                    ps,
                ),
                self.sign(),
            ),
            (0, Ordering::Equal) => self.sign(),
            _ => self.f.zero(),
        };
        self.f.sub(acc, rhs)
    }

    /// `(w^r_i, z^r2_j)` written through the pairing variables.
    fn weight(&self, r: usize, i: usize, r2: usize, j: usize) -> Option<Fe> {
        let k = i + j;
        match r.cmp(&r2) {
            Ordering::Less if k < self.p(r2) => Some(self.tw(
                self.val(Var::LaterBlock {
                    from: r,
                    to: r2,
                    h: k,
                }),
                i,
            )),
            Ordering::Greater if k <= self.p(r) => Some(self.tw(
                self.val(Var::EarlierBlock {
                    from: r,
                    to: r2,
                    h: k,
                }),
                i,
            )),
            Ordering::Equal if k < self.p(r) => {
                Some(self.tw(self.val(Var::SameBlock { block: r, h: k }), i))
            }
            Ordering::Equal if k == self.p(r) => Some(self.f.one()),
            _ => None,
        }
    }

    fn weighted_sum(&self, mut term: impl FnMut(usize, usize, usize, usize, bool) -> Fe) -> Fe {
        let s = self.cfg.count();
        let mut acc = self.f.zero();
        for r in 0..s {
            for i in 0..self.p(r) {
                for r2 in 0..s {
                    for j in 1..=self.p(r2) {
                        if let Some(c) = self.weight(r, i, r2, j) {
                            let inner = r == r2 && i + j < self.p(r);
                            acc = self.add(acc, self.mul(c, term(r, i, r2, j, inner)));
                        }
                    }
                }
            }
        }
        acc
    }

    /// `(z^t_0, z^t2_0)` in coordinates.
    fn mutual(&self, t: usize, t2: usize) -> Fe {
        let sign = self.sign();
        let sum = self.weighted_sum(|r, i, r2, j, _| {
            self.add(
                self.mul(self.w(t, r, i), self.z(t2, r2, j)),
                self.mul(sign, self.mul(self.w(t2, r, i), self.z(t, r2, j))),
            )
        });
        let (zeta, _) = self.complement();
        self.add(
            sum,
            self.mul(
                zeta,
                self.mul(self.complement_coeff(t), self.complement_coeff(t2)),
            ),
        )
    }

    /// `Q(z^t_0)` in coordinates. `literal = Some(t2)` reads the
    /// same-block inner terms with the `z` coefficients of `t2`.
    fn isotropy(&self, t: usize, literal: Option<usize>) -> Fe {
        let sum = self.weighted_sum(|r, i, r2, j, inner| {
            let other = if inner { literal.unwrap_or(t) } else { t };
            self.mul(self.w(t, r, i), self.z(other, r2, j))
        });
        let (_, zeta0) = self.complement();
        let u = self.complement_coeff(t);
        self.add(sum, self.mul(zeta0, self.mul(u, u)))
    }
}

/// Sets `var` so that the linear `equation` vanishes. The coefficient of
/// `var` must be `±1`, so no division happens.
fn solve_for(
    f: &FiniteField,
    cfg: &GramConfig,
    values: &mut BTreeMap<Var, Fe>,
    var: Var,
    equation: impl Fn(&Equations) -> Fe,
) -> Result<(), ParamError> {
    let at = |x: Fe, values: &mut BTreeMap<Var, Fe>| {
        values.insert(var, x);
        equation(&Equations { f, cfg, values })
    };
    let r0 = at(f.zero(), values);
    let r1 = at(f.one(), values);
    let coefficient = f.sub(r1, r0);
    if coefficient != f.one() && coefficient != f.neg(f.one()) {
        return Err(ParamError::NotTriangular {
            var: format!("{var:?}"),
            coefficient,
        });
    }
    values.insert(var, f.neg(f.mul(r0, coefficient)));
    Ok(())
}

/// Fills in the dependent coordinates from `free` (ordered as
/// [`GramConfig::free_variables`]).
pub fn gram_solve(
    f: &FiniteField,
    cfg: &GramConfig,
    free: &[Fe],
) -> Result<GramSystem, ParamError> {
    cfg.validate(f)?;
    let names = cfg.free_variables();
    if names.len() != free.len() {
        return Err(ParamError::FreeInputs {
            expected: names.len(),
            got: free.len(),
        });
    }
    let mut values: BTreeMap<Var, Fe> = cfg
        .all_variables()
        .into_iter()
        .map(|v| (v, f.zero()))
        .collect();
    values.extend(names.into_iter().zip(free.iter().copied()));
    let s = cfg.count();

    // z coefficients below the top level, by level then block.
    for t in 0..s {
        let mut order: Vec<(usize, usize)> = (0..s)
            .flat_map(|b| (1..cfg.size(b)).map(move |h| (h, b)))
            .collect();
        order.sort();
        for (h, b) in order {
            solve_for(
                f,
                cfg,
                &mut values,
                Var::ZCoeff {
                    target: t,
                    block: b,
                    j: h,
                },
                |e| e.pairing_with_w(t, b, h, false),
            )?;
        }
    }
    // w coefficients, by level then block from the last.
    for t in 0..s {
        let mut order: Vec<(usize, Reverse<usize>)> = (0..s)
            .flat_map(|b| (0..cfg.size(b)).map(move |h| (h, Reverse(b))))
            .collect();
        order.sort();
        for (h, Reverse(b)) in order {
            solve_for(
                f,
                cfg,
                &mut values,
                Var::WCoeff {
                    target: t,
                    block: b,
                    i: h,
                },
                |e| e.pairing_with_z(t, b, h),
            )?;
        }
    }
    if cfg.form.quadratic() {
        for t in 0..s {
            solve_for(
                f,
                cfg,
                &mut values,
                Var::ZCoeff {
                    target: t,
                    block: t,
                    j: cfg.size(t),
                },
                |e| e.isotropy(t, None),
            )?;
        }
    }
    // Top coefficients below the diagonal, by distance from it.
    for gap in 1..s {
        for t in 0..s - gap {
            let t2 = t + gap;
            solve_for(
                f,
                cfg,
                &mut values,
                Var::ZCoeff {
                    target: t2,
                    block: t,
                    j: cfg.size(t),
                },
                |e| e.mutual(t, t2),
            )?;
        }
    }
    Ok(GramSystem {
        config: cfg.clone(),
        values,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum BasisVec {
    W(usize, usize),
    Z(usize, usize),
    Complement,
}

/// The space spanned by the basis with its Gram matrix, the values of the
/// quadratic form on the basis and the images of the basis vectors.
struct Model<'a> {
    f: &'a FiniteField,
    twist: Twist,
    basis: Vec<BasisVec>,
    index: BTreeMap<BasisVec, usize>,
    gram: Vec<Vec<Fe>>,
    quad: Vec<Fe>,
    images: Vec<Vec<Fe>>,
    tops: Vec<Vec<Fe>>,
}

impl<'a> Model<'a> {
    fn build(f: &'a FiniteField, sys: &GramSystem) -> Self {
        let cfg = &sys.config;
        let s = cfg.count();
        let get = |v: Var| sys.values[&v];
        let tw = |a: Fe, e: usize| cfg.twist.apply(f, a, e as u32);
        let mut basis = Vec::new();
        for r in 0..s {
            basis.extend((0..cfg.size(r)).map(|i| BasisVec::W(r, i)));
        }
        for r in 0..s {
            basis.extend((1..=cfg.size(r)).map(|j| BasisVec::Z(r, j)));
        }
        if cfg.form.odd() {
            basis.push(BasisVec::Complement);
        }
        let index: BTreeMap<BasisVec, usize> =
            basis.iter().enumerate().map(|(k, &b)| (b, k)).collect();
        let dim = basis.len();

        // Pairings of w's with z's case by case on the block order.
        let table = |t: usize, i: usize, r: usize, j: usize| -> Fe {
            let (pt, pr) = (cfg.size(t), cfg.size(r));
            match t.cmp(&r) {
                Ordering::Equal if i + j < pr => tw(get(Var::SameBlock { block: r, h: i + j }), i),
                Ordering::Equal if i + j == pr => f.one(),
                Ordering::Less if i + j < pr => tw(
                    get(Var::LaterBlock {
                        from: t,
                        to: r,
                        h: i + j,
                    }),
                    i,
                ),
                Ordering::Greater if i + j <= pt => tw(
                    get(Var::EarlierBlock {
                        from: t,
                        to: r,
                        h: i + j,
                    }),
                    i,
                ),
                _ => f.zero(),
            }
        };
        let sign = cfg.form.sign(f);
        let mut gram = vec![vec![f.zero(); dim]; dim];
        let mut quad = vec![f.zero(); dim];
        for (a, &x) in basis.iter().enumerate() {
            for (b, &y) in basis.iter().enumerate() {
                gram[a][b] = match (x, y) {
                    (BasisVec::W(t, i), BasisVec::Z(r, j)) => table(t, i, r, j),
                    (BasisVec::Z(r, j), BasisVec::W(t, i)) => f.mul(sign, table(t, i, r, j)),
                    _ => f.zero(),
                };
            }
        }
        if let Form::OddOrthogonal { complement } = cfg.form {
            let k = index[&BasisVec::Complement];
            gram[k][k] = f.add(complement, complement);
            quad[k] = complement;
        }
        let tops: Vec<Vec<Fe>> = (0..s)
            .map(|t| {
                basis
                    .iter()
                    .map(|&b| match b {
                        BasisVec::W(r, i) => get(Var::WCoeff {
                            target: t,
                            block: r,
                            i,
                        }),
                        BasisVec::Z(r, j) => get(Var::ZCoeff {
                            target: t,
                            block: r,
                            j,
                        }),
                        BasisVec::Complement => get(Var::ComplementCoeff { target: t }),
                    })
                    .collect()
            })
            .collect();
        let unit = |b: BasisVec| {
            let mut v = vec![f.zero(); dim];
            v[index[&b]] = f.one();
            v
        };
        let images = basis
            .iter()
            .filter(|&&b| b != BasisVec::Complement)
            .map(|&b| match b {
                BasisVec::W(r, i) if i + 1 < cfg.size(r) => unit(BasisVec::W(r, i + 1)),
                BasisVec::W(r, _) => unit(BasisVec::Z(r, cfg.size(r))),
                BasisVec::Z(r, 1) => tops[r].clone(),
                BasisVec::Z(r, j) => unit(BasisVec::Z(r, j - 1)),
                BasisVec::Complement => unreachable!(),
            })
            .collect();
        Model {
            f,
            twist: cfg.twist,
            basis,
            index,
            gram,
            quad,
            images,
            tops,
        }
    }

    fn unit(&self, b: BasisVec) -> Vec<Fe> {
        let mut v = vec![self.f.zero(); self.basis.len()];
        v[self.index[&b]] = self.f.one();
        v
    }

    fn pair(&self, x: &[Fe], y: &[Fe]) -> Fe {
        let f = self.f;
        f.sum(x.iter().enumerate().flat_map(|(a, &xa)| {
            y.iter()
                .enumerate()
                .map(move |(b, &yb)| f.mul(f.mul(xa, yb), self.gram[a][b]))
        }))
    }

    fn quadratic(&self, x: &[Fe]) -> Fe {
        let f = self.f;
        let diagonal = f.sum(
            x.iter()
                .zip(&self.quad)
                .map(|(&a, &q)| f.mul(f.mul(a, a), q)),
        );
        let cross = f.sum((0..x.len()).flat_map(|a| {
            (a + 1..x.len()).map(move |b| f.mul(f.mul(x[a], x[b]), self.gram[a][b]))
        }));
        f.add(diagonal, cross)
    }

    fn frob(&self, a: Fe) -> Fe {
        self.twist.apply(self.f, a, 1)
    }

    fn rank(&self, rows: &[Vec<Fe>]) -> usize {
        let cols = rows.first().map_or(0, Vec::len);
        Mat::from_rows(rows.len(), cols, rows.concat()).rank(self.f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckTally {
    pub name: String,
    pub evaluated: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct GramReport {
    pub config: GramConfig,
    pub free_count: usize,
    pub dimension_formula: usize,
    pub checks: Vec<CheckTally>,
    /// Whether the first family still holds with the sign factor on its
    /// right side.
    pub literal_sign_reading_holds: bool,
    /// Whether the isotropy equation holds when its same-block inner terms
    /// use another target's coefficients (`None` without a quadratic form).
    pub literal_cross_reading_holds: Option<bool>,
}

impl GramReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.failed == 0)
    }
}

#[derive(Default)]
struct Checks(Vec<CheckTally>);

impl Checks {
    fn run(&mut self, name: &str, outcomes: impl IntoIterator<Item = bool>) {
        let (mut evaluated, mut failed) = (0, 0);
        for ok in outcomes {
            evaluated += 1;
            failed += usize::from(!ok);
        }
        self.0.push(CheckTally {
            name: name.to_string(),
            evaluated,
            failed,
        });
    }
}

/// Checks the coordinate equations, then rebuilds the space and checks
/// that the map is a semilinear isometry of the form (and of the quadratic
/// form) carrying the basis to a basis.
pub fn gram_verify(f: &FiniteField, sys: &GramSystem) -> GramReport {
    let cfg = &sys.config;
    let s = cfg.count();
    let eqs = Equations {
        f,
        cfg,
        values: &sys.values,
    };
    let zero = f.zero();
    let mut checks = Checks::default();

    // `(target, block, h)` with `1 ≤ h < p_block`.
    let levels = || {
        (0..s).flat_map(move |t| (0..s).flat_map(move |b| (1..cfg.size(b)).map(move |h| (t, b, h))))
    };
    checks.run(
        "w-pairings",
        levels().map(|(t, b, h)| eqs.pairing_with_w(t, b, h, false) == zero),
    );
    let w_levels =
        (0..s).flat_map(|t| (0..s).flat_map(move |b| (0..cfg.size(b)).map(move |h| (t, b, h))));
    checks.run(
        "z-pairings",
        w_levels.map(|(t, b, h)| eqs.pairing_with_z(t, b, h) == zero),
    );
    let upper: Vec<(usize, usize)> = (0..s)
        .flat_map(|t| (t + 1..s).map(move |t2| (t, t2)))
        .collect();
    checks.run(
        "mutual",
        upper.iter().map(|&(t, t2)| eqs.mutual(t, t2) == zero),
    );
    if cfg.form.quadratic() {
        checks.run("isotropy", (0..s).map(|t| eqs.isotropy(t, None) == zero));
    }

    let model = Model::build(f, sys);
    let w = |r, i| model.unit(BasisVec::W(r, i));
    let z = |r, j| model.unit(BasisVec::Z(r, j));
    let image_pairs =
        || (0..model.images.len()).flat_map(|a| (0..model.images.len()).map(move |b| (a, b)));
    let involves_top = |a: usize| matches!(model.basis[a], BasisVec::Z(_, 1));
    checks.run(
        "transport",
        image_pairs()
            .filter(|&(a, b)| !involves_top(a) && !involves_top(b))
            .map(|(a, b)| {
                model.pair(&model.images[a], &model.images[b]) == model.frob(model.gram[a][b])
            }),
    );
    checks.run(
        "top-with-w",
        levels().map(|(t, b, h)| {
            let ps = cfg.size(b);
            model.pair(&model.tops[t], &w(b, ps - h))
                == model.frob(model.pair(&z(t, 1), &w(b, ps - h - 1)))
        }),
    );
    let mut top_with_z = Vec::new();
    for t in 0..s {
        for b in 0..s {
            let ps = cfg.size(b);
            top_with_z.extend((1..ps).map(|h| model.pair(&model.tops[t], &z(b, ps - h)) == zero));
            top_with_z.push(
                model.pair(&model.tops[t], &z(b, ps))
                    == model.frob(model.pair(&z(t, 1), &w(b, ps - 1))),
            );
        }
    }
    checks.run("top-with-z", top_with_z);
    checks.run(
        "tops-orthogonal",
        upper
            .iter()
            .map(|&(t, t2)| model.pair(&model.tops[t], &model.tops[t2]) == zero),
    );
    if cfg.form.quadratic() {
        checks.run(
            "tops-isotropic",
            (0..s).map(|t| model.quadratic(&model.tops[t]) == zero),
        );
    }
    checks.run(
        "isometry",
        image_pairs()
            .map(|(a, b)| {
                model.pair(&model.images[a], &model.images[b]) == model.frob(model.gram[a][b])
            })
            .chain((0..model.images.len()).map(|a| {
                !cfg.form.quadratic()
                    || model.quadratic(&model.images[a]) == model.frob(model.quad[a])
            })),
    );
    checks.run(
        "nondegenerate",
        std::iter::once(model.rank(&model.gram) == model.basis.len()),
    );
    checks.run(
        "image-basis",
        std::iter::once(model.rank(&model.images) == model.images.len()),
    );

    let literal_sign_reading_holds =
        levels().all(|(t, b, h)| eqs.pairing_with_w(t, b, h, true) == zero);
    let literal_cross_reading_holds = cfg
        .form
        .quadratic()
        .then(|| (0..s).all(|t| (0..s).all(|t2| eqs.isotropy(t, Some(t2)) == zero)));
    GramReport {
        config: cfg.clone(),
        free_count: cfg.free_variables().len(),
        dimension_formula: dimension_formula(&cfg.blocks, cfg.form),
        checks: checks.0,
        literal_sign_reading_holds,
        literal_cross_reading_holds,
    }
}

pub fn random_free<R: Rng>(f: &FiniteField, cfg: &GramConfig, rng: &mut R) -> Vec<Fe> {
    cfg.free_variables()
        .iter()
        .map(|_| Fe(rng.gen_range(0..f.size())))
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct BatchReport {
    pub config: GramConfig,
    pub field: (u32, u32),
    pub seeds: (u64, u64),
    pub free_count: usize,
    pub dimension_formula: usize,
    pub passed: usize,
    pub failed: usize,
    /// Seeds on which the literal sign reading of the first family fails.
    pub literal_sign_failures: usize,
    pub literal_cross_failures: usize,
}

impl BatchReport {
    pub fn pass(&self) -> bool {
        self.failed == 0 && self.free_count == self.dimension_formula
    }
}

/// Solves and verifies from the free inputs drawn by a ChaCha stream seeded
/// with `seed`.
pub fn gram_seeded(f: &FiniteField, cfg: &GramConfig, seed: u64) -> Result<GramReport, ParamError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let free = random_free(f, cfg, &mut rng);
    gram_solve(f, cfg, &free).map(|sys| gram_verify(f, &sys))
}

/// [`gram_seeded`] over a seed range, in seed order.
pub fn gram_reports(
    f: &FiniteField,
    cfg: &GramConfig,
    seeds: Range<u64>,
) -> Result<Vec<GramReport>, ParamError> {
    cfg.validate(f)?;
    seeds
        .into_par_iter()
        .map(|seed| gram_seeded(f, cfg, seed))
        .collect()
}

/// Aggregate of [`gram_reports`].
pub fn gram_batch(
    f: &FiniteField,
    cfg: &GramConfig,
    seeds: Range<u64>,
) -> Result<BatchReport, ParamError> {
    let reports = gram_reports(f, cfg, seeds.clone())?;
    let passed = reports.iter().filter(|r| r.pass()).count();
    Ok(BatchReport {
        config: cfg.clone(),
        field: (f.characteristic(), f.degree()),
        seeds: (seeds.start, seeds.end),
        free_count: cfg.free_variables().len(),
        dimension_formula: dimension_formula(&cfg.blocks, cfg.form),
        passed,
        failed: reports.len() - passed,
        literal_sign_failures: reports
            .iter()
            .filter(|r| !r.literal_sign_reading_holds)
            .count(),
        literal_cross_failures: reports
            .iter()
            .filter(|r| r.literal_cross_reading_holds == Some(false))
            .count(),
    })
}
