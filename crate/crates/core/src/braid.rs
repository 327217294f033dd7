//! Artin braid groups of finite Weyl groups with Garside normal forms.
//!
//! An element is `Δ^k · a_1 ⋯ a_r` with `Δ` the lift of `w0` and the `a_j`
//! simple elements (lifts of Weyl elements) in left-greedy form: no left
//! descent of `a_{j+1}` can be moved onto `a_j` while staying simple, no `a_j`
//! is trivial and `a_1 ≠ Δ`.

use crate::coxeter::{CoxeterError, CoxeterSystem, WeylElement};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BraidError {
    #[error(transparent)]
    Coxeter(#[from] CoxeterError),
    #[error("malformed braid literal `{0}`")]
    Malformed(String),
    #[error("no e ≤ {0} gives a trivial twisted product divisible by Δ")]
    NoGoodPower(u64),
}

/// A braid group element in Garside normal form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BraidElement {
    delta_power: i64,
    factors: Vec<WeylElement>,
}

impl BraidElement {
    pub fn delta_power(&self) -> i64 {
        self.delta_power
    }

    /// The left-greedy simple factors after the `Δ`-power.
    pub fn factors(&self) -> &[WeylElement] {
        &self.factors
    }

    pub fn is_identity(&self) -> bool {
        self.delta_power == 0 && self.factors.is_empty()
    }

    /// Whether the element lies in the positive monoid.
    pub fn is_positive(&self) -> bool {
        self.delta_power >= 0
    }

    /// Length in the positive monoid (`Σ l(a_j) + k·l(w0)`); meaningful for
    /// positive elements.
    pub fn positive_length(&self, sys: &CoxeterSystem) -> i64 {
        self.delta_power * sys.num_positive_roots() as i64
            + self.factors.iter().map(|a| a.length() as i64).sum::<i64>()
    }
}

/// Braid group operations relative to a Coxeter system.
#[derive(Debug, Clone, Copy)]
pub struct BraidGroup<'a> {
    sys: &'a CoxeterSystem,
}

impl<'a> BraidGroup<'a> {
    pub fn new(sys: &'a CoxeterSystem) -> Self {
        BraidGroup { sys }
    }

    pub fn system(&self) -> &'a CoxeterSystem {
        self.sys
    }

    pub fn identity(&self) -> BraidElement {
        BraidElement {
            delta_power: 0,
            factors: Vec::new(),
        }
    }

    pub fn delta(&self) -> BraidElement {
        self.delta_pow(1)
    }

    pub fn delta_pow(&self, k: i64) -> BraidElement {
        BraidElement {
            delta_power: k,
            factors: Vec::new(),
        }
    }

    /// The canonical positive lift `ŵ`.
    pub fn embed_hat(&self, w: &WeylElement) -> BraidElement {
        let mut b = self.identity();
        self.push_simple(&mut b, w.clone());
        b
    }

    /// `ŝ_i` or its inverse.
    pub fn generator(&self, i: usize, positive: bool) -> BraidElement {
        let s = self.sys.generator(i);
        if positive {
            self.embed_hat(s)
        } else {
            // ŝ⁻¹ = Δ⁻¹ · (w0 s)^.
            let mut b = self.delta_pow(-1);
            self.push_simple(&mut b, self.sys.mul(self.sys.longest_element(), s));
            b
        }
    }

    /// Product of signed letters `(i, positive?)`.
    pub fn from_signed_word(&self, letters: &[(usize, bool)]) -> BraidElement {
        letters.iter().fold(self.identity(), |acc, &(i, pos)| {
            self.mul(&acc, &self.generator(i, pos))
        })
    }

    pub fn from_positive_word(&self, letters: &[usize]) -> BraidElement {
        let mut b = self.identity();
        for &i in letters {
            self.push_simple(&mut b, self.sys.generator(i).clone());
        }
        b
    }

    /// Parses signed dotted literals such as `"1.2.-1"`.
    pub fn parse(&self, s: &str) -> Result<BraidElement, BraidError> {
        let s = s.trim();
        if s.is_empty() || s == "e" {
            return Ok(self.identity());
        }
        let letters = s
            .split('.')
            .map(|t| {
                let t = t.trim();
                let (body, pos) = match t.strip_prefix('-') {
                    Some(b) => (b, false),
                    None => (t, true),
                };
                Ok((self.sys.parse_letter(body)?, pos))
            })
            .collect::<Result<Vec<_>, BraidError>>()?;
        Ok(self.from_signed_word(&letters))
    }

    /// Renders as `Δ^k·[word][word]…`.
    pub fn format(&self, b: &BraidElement) -> String {
        let mut out = String::new();
        if b.delta_power != 0 {
            out.push_str(&format!("Δ^{}", b.delta_power));
        }
        for a in &b.factors {
            out.push_str(&format!("[{}]", self.sys.format_element(a)));
        }
        if out.is_empty() {
            out.push('e');
        }
        out
    }

    /// Conjugation by `Δ^k` on simple factors: `a ↦ w0^k a w0^k`.
    fn twist(&self, a: &WeylElement, k: i64) -> WeylElement {
        if k.rem_euclid(2) == 0 {
            a.clone()
        } else {
            let w0 = self.sys.longest_element();
            self.sys.mul(&self.sys.mul(w0, a), w0)
        }
    }

    /// Right-multiplies the positive part by a simple element and restores
    /// left-greedy form.
    fn push_simple(&self, b: &mut BraidElement, x: WeylElement) {
        if x.is_identity() {
            return;
        }
        b.factors.push(x);
        let mut k = b.factors.len() - 1;
        while k > 0 {
            let changed = self.fix_pair(&mut b.factors, k - 1);
            if !changed {
                break;
            }
            k -= 1;
        }
        self.clean(b);
    }

    /// Moves generators from the head of `factors[k+1]` onto `factors[k]`
    /// while the product stays simple. Returns whether anything moved.
    fn fix_pair(&self, factors: &mut [WeylElement], k: usize) -> bool {
        let sys = self.sys;
        let mut changed = false;
        loop {
            let (left, right) = factors.split_at_mut(k + 1);
            let (a, b) = (&mut left[k], &mut right[0]);
            let movable = sys
                .left_descents(b)
                .into_iter()
                .find(|&i| !sys.is_right_descent(a, i));
            match movable {
                Some(i) => {
                    *a = sys.right_mul_gen(a, i);
                    *b = sys.left_mul_gen(i, b);
                    changed = true;
                }
                None => return changed,
            }
        }
    }

    /// Drops trivial factors, absorbs leading `Δ`s and re-sweeps if needed.
    fn clean(&self, b: &mut BraidElement) {
        loop {
            b.factors.retain(|a| !a.is_identity());
            let w0 = self.sys.longest_element();
            let lead = b.factors.iter().take_while(|a| *a == w0).count();
            if lead > 0 {
                // Δ·x = τ(x)·Δ: moving Δ to the front twists what preceded it;
                // nothing precedes leading factors, so just count them.
                b.factors.drain(..lead);
                b.delta_power += lead as i64;
            }
            let mut dirty = false;
            for k in 0..b.factors.len().saturating_sub(1) {
                if self.fix_pair(&mut b.factors, k) {
                    dirty = true;
                }
            }
            if !dirty {
                return;
            }
        }
    }

    pub fn mul(&self, x: &BraidElement, y: &BraidElement) -> BraidElement {
        // Δ^a P Δ^b Q = Δ^{a+b} τ^b(P) Q with τ(P) = Δ^{-1} P Δ.
        let mut out = BraidElement {
            delta_power: x.delta_power + y.delta_power,
            factors: x
                .factors
                .iter()
                .map(|a| self.twist(a, y.delta_power))
                .collect(),
        };
        for q in &y.factors {
            self.push_simple(&mut out, q.clone());
        }
        out
    }

    pub fn inverse(&self, x: &BraidElement) -> BraidElement {
        // a⁻¹ = ∂(a) Δ⁻¹ with ∂(a) = a⁻¹ w0.
        let sys = self.sys;
        let mut out = self.identity();
        for a in x.factors.iter().rev() {
            let complement = sys.mul(&sys.inverse(a), sys.longest_element());
            out = self.mul(&out, &self.embed_hat(&complement));
            out = self.mul(&out, &self.delta_pow(-1));
        }
        self.mul(&out, &self.delta_pow(-x.delta_power))
    }

    pub fn power(&self, x: &BraidElement, k: u64) -> BraidElement {
        (0..k).fold(self.identity(), |acc, _| self.mul(&acc, x))
    }

    pub fn equal(&self, a: &BraidElement, b: &BraidElement) -> bool {
        a == b
    }

    /// `Some(a⁻¹ b)` when `a` left-divides `b` in the positive monoid sense,
    /// i.e. the quotient is positive.
    pub fn left_divisible(&self, a: &BraidElement, b: &BraidElement) -> Option<BraidElement> {
        let q = self.mul(&self.inverse(a), b);
        q.is_positive().then_some(q)
    }

    /// Image in `W`.
    pub fn project(&self, b: &BraidElement) -> WeylElement {
        let sys = self.sys;
        let mut w = if b.delta_power.rem_euclid(2) == 1 {
            sys.longest_element().clone()
        } else {
            sys.identity()
        };
        for a in &b.factors {
            w = sys.mul(&w, a);
        }
        w
    }

    /// Conjugation of generators induced by `•`.
    pub fn bullet_apply(&self, b: &BraidElement, k: i64) -> BraidElement {
        let mut out = self.delta_pow(b.delta_power);
        for a in &b.factors {
            self.push_simple(&mut out, self.sys.bullet_apply(a, k));
        }
        out
    }
}

/// Outcome of the good-element search.
#[derive(Debug, Clone)]
pub struct GoodElement {
    pub w: WeylElement,
    pub e: u64,
    /// `z` with `ŵ ŵ^• ⋯ ŵ^{•^{e-1}} = Δ z`.
    pub z: BraidElement,
    pub product: BraidElement,
}

/// Smallest `d ≥ 1` with `w w^• ⋯ w^{•^{d-1}} = 1`.
pub fn twisted_order(sys: &CoxeterSystem, w: &WeylElement) -> u64 {
    let mut acc = w.clone();
    let mut d = 1;
    while !acc.is_identity() {
        acc = sys.mul(&acc, &sys.bullet_apply(w, d as i64));
        d += 1;
    }
    d
}

/// Searches `e` among multiples of the twisted order, up to `max_e`, with
/// `ŵ ŵ^• ⋯ ŵ^{•^{e-1}}` left-divisible by `Δ`.
pub fn good_element_check(
    sys: &CoxeterSystem,
    w: &WeylElement,
    max_e: u64,
) -> Result<GoodElement, BraidError> {
    let bg = BraidGroup::new(sys);
    let d = twisted_order(sys, w);
    let mut product = bg.identity();
    let mut e = 0;
    while e + d <= max_e {
        for k in e..e + d {
            product = bg.mul(&product, &bg.embed_hat(&sys.bullet_apply(w, k as i64)));
        }
        e += d;
        if let Some(z) = bg.left_divisible(&bg.delta(), &product) {
            return Ok(GoodElement {
                w: w.clone(),
                e,
                z,
                product,
            });
        }
    }
    Err(BraidError::NoGoodPower(max_e))
}

/// Runs [`good_element_check`] on each candidate in order and returns the
/// first success.
pub fn good_element_in_class(
    sys: &CoxeterSystem,
    candidates: &[WeylElement],
    max_e: u64,
) -> Result<GoodElement, BraidError> {
    candidates
        .iter()
        .find_map(|w| good_element_check(sys, w, max_e).ok())
        .ok_or(BraidError::NoGoodPower(max_e))
}

impl fmt::Display for BraidElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Δ^{}·{} factors", self.delta_power, self.factors.len())
    }
}

/// Applies random braid relations to a positive word; used to test normal-form
/// uniqueness. Returns the rewritten word.
pub fn shuffle_by_braid_moves<R: rand::Rng>(
    sys: &CoxeterSystem,
    word: &[usize],
    moves: usize,
    rng: &mut R,
) -> Vec<usize> {
    let mut w = word.to_vec();
    for _ in 0..moves {
        let mut sites: Vec<(usize, usize, usize, usize)> = Vec::new();
        for start in 0..w.len() {
            for j in 0..sys.rank() {
                let i = w[start];
                if i == j {
                    continue;
                }
                let m = sys.m(i, j) as usize;
                if start + m <= w.len()
                    && (0..m).all(|t| w[start + t] == if t % 2 == 0 { i } else { j })
                {
                    sites.push((start, m, i, j));
                }
            }
        }
        if sites.is_empty() {
            break;
        }
        let (start, m, i, j) = sites[rng.gen_range(0..sites.len())];
        for t in 0..m {
            w[start + t] = if t % 2 == 0 { j } else { i };
        }
    }
    w
}
