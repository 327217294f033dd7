//! Iwahori–Hecke algebra with basis `t_w` and the twisted trace polynomials
//! `n_{w,w'}`.
//!
//! `t_w t_s = t_{ws}` when `l(ws) > l(w)`, otherwise `q t_{ws} + (q-1) t_w`.

use crate::coxeter::{CoxeterSystem, ElementTable, WeylElement};
use crate::poly::{Coefficient, LaurentPoly};
use rayon::prelude::*;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HeckeError {
    #[error("elements belong to different Coxeter systems")]
    MismatchedSystems,
}

/// Finite linear combination of basis elements, keyed by table index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeckeElement<C> {
    system_id: u64,
    terms: BTreeMap<usize, LaurentPoly<C>>,
}

impl<C: Coefficient> HeckeElement<C> {
    pub fn system_id(&self) -> u64 {
        self.system_id
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `(table index, coefficient)` pairs in table order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &LaurentPoly<C>)> {
        self.terms.iter().map(|(&k, p)| (k, p))
    }

    fn add_at(&mut self, k: usize, p: &LaurentPoly<C>) {
        if p.is_zero() {
            return;
        }
        let slot = self.terms.entry(k).or_default();
        *slot += p;
        if slot.is_zero() {
            self.terms.remove(&k);
        }
    }
}

/// The algebra attached to a system and its element table.
pub struct HeckeAlgebra<'a> {
    sys: &'a CoxeterSystem,
    table: &'a ElementTable,
}

impl<'a> HeckeAlgebra<'a> {
    pub fn new(sys: &'a CoxeterSystem, table: &'a ElementTable) -> Self {
        HeckeAlgebra { sys, table }
    }

    pub fn zero<C: Coefficient>(&self) -> HeckeElement<C> {
        HeckeElement {
            system_id: self.sys.id(),
            terms: BTreeMap::new(),
        }
    }

    pub fn basis<C: Coefficient>(&self, w: &WeylElement) -> HeckeElement<C> {
        self.basis_index(self.table.index_of(w))
    }

    pub fn basis_index<C: Coefficient>(&self, k: usize) -> HeckeElement<C> {
        let mut out = self.zero();
        out.add_at(k, &LaurentPoly::one());
        out
    }

    pub fn coefficient<C: Coefficient>(
        &self,
        x: &HeckeElement<C>,
        w: &WeylElement,
    ) -> LaurentPoly<C> {
        x.terms
            .get(&self.table.index_of(w))
            .cloned()
            .unwrap_or_default()
    }

    /// `(element, coefficient)` pairs.
    pub fn expand<'x, C: Coefficient>(
        &'x self,
        x: &'x HeckeElement<C>,
    ) -> impl Iterator<Item = (&'a WeylElement, &'x LaurentPoly<C>)> + 'x {
        x.terms.iter().map(|(&k, p)| (self.table.element(k), p))
    }

    pub fn add<C: Coefficient>(
        &self,
        a: &HeckeElement<C>,
        b: &HeckeElement<C>,
    ) -> Result<HeckeElement<C>, HeckeError> {
        self.check(a)?;
        self.check(b)?;
        let mut out = a.clone();
        for (&k, p) in &b.terms {
            out.add_at(k, p);
        }
        Ok(out)
    }

    pub fn scale<C: Coefficient>(
        &self,
        a: &HeckeElement<C>,
        c: &LaurentPoly<C>,
    ) -> HeckeElement<C> {
        let mut out = self.zero();
        for (&k, p) in &a.terms {
            out.add_at(k, &(p * c));
        }
        out
    }

    fn check<C>(&self, x: &HeckeElement<C>) -> Result<(), HeckeError> {
        if x.system_id == self.sys.id() {
            Ok(())
        } else {
            Err(HeckeError::MismatchedSystems)
        }
    }

    /// Right multiplication of a dense vector by `t_{s_i}`.
    fn right_mul_gen_dense<C: Coefficient>(
        &self,
        v: &[LaurentPoly<C>],
        i: usize,
    ) -> Vec<LaurentPoly<C>> {
        let q = LaurentPoly::<C>::q();
        let q_minus_one = &q - &LaurentPoly::one();
        let mut out = vec![LaurentPoly::zero(); v.len()];
        for (k, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let ks = self.table.right_gen(k, i);
            if self.table.length(ks) > self.table.length(k) {
                out[ks] += c;
            } else {
                out[ks] += &(&q * c);
                out[k] += &(&q_minus_one * c);
            }
        }
        out
    }

    /// Dense vector times `t_w` for the element with table index `k`.
    fn right_mul_basis_dense<C: Coefficient>(
        &self,
        mut v: Vec<LaurentPoly<C>>,
        k: usize,
    ) -> Vec<LaurentPoly<C>> {
        for &i in self.table.word(k).letters() {
            v = self.right_mul_gen_dense(&v, i);
        }
        v
    }

    fn to_dense<C: Coefficient>(&self, x: &HeckeElement<C>) -> Vec<LaurentPoly<C>> {
        let mut v = vec![LaurentPoly::zero(); self.table.len()];
        for (&k, p) in &x.terms {
            v[k] = p.clone();
        }
        v
    }

    fn element_from_dense<C: Coefficient>(&self, v: Vec<LaurentPoly<C>>) -> HeckeElement<C> {
        HeckeElement {
            system_id: self.sys.id(),
            terms: v
                .into_iter()
                .enumerate()
                .filter(|(_, p)| !p.is_zero())
                .collect(),
        }
    }

    /// Product in the algebra.
    pub fn t_multiply<C: Coefficient>(
        &self,
        a: &HeckeElement<C>,
        b: &HeckeElement<C>,
    ) -> Result<HeckeElement<C>, HeckeError> {
        self.check(a)?;
        self.check(b)?;
        let dense_a = self.to_dense(a);
        let mut acc = vec![LaurentPoly::zero(); self.table.len()];
        for (&k, coeff) in &b.terms {
            let part = self.right_mul_basis_dense(dense_a.clone(), k);
            for (slot, p) in acc.iter_mut().zip(part) {
                if !p.is_zero() {
                    *slot += &(&p * coeff);
                }
            }
        }
        Ok(self.element_from_dense(acc))
    }

    /// Trace of `t_y ↦ t_w t_{y•} t_{w'⁻¹}`, where `t_{w'⁻¹}` is the basis
    /// element of the inverse element. Computed column by column in parallel.
    pub fn n_trace<C: Coefficient>(
        &self,
        w: &WeylElement,
        w_prime: &WeylElement,
    ) -> LaurentPoly<C> {
        let kw = self.table.index_of(w);
        let kwi = self.table.inverse(self.table.index_of(w_prime));
        (0..self.table.len())
            .into_par_iter()
            .map(|y| {
                let mut v = vec![LaurentPoly::zero(); self.table.len()];
                v[kw] = LaurentPoly::one();
                let v = self.right_mul_basis_dense(v, self.table.bullet(y));
                let v = self.right_mul_basis_dense(v, kwi);
                v[y].clone()
            })
            .reduce(LaurentPoly::zero, |a, b| a + b)
    }

    /// `|{y : w y• w'⁻¹ = y}|`, the value of `n_{w,w'}` at `q = 1`.
    pub fn fixed_point_count(&self, w: &WeylElement, w_prime: &WeylElement) -> usize {
        let kw = self.table.index_of(w);
        let kwi = self.table.inverse(self.table.index_of(w_prime));
        (0..self.table.len())
            .filter(|&y| {
                self.table
                    .mul(self.table.mul(kw, self.table.bullet(y)), kwi)
                    == y
            })
            .count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    type P = LaurentPoly<i64>;

    fn q() -> P {
        P::q()
    }

    fn setup(name: &str) -> (CoxeterSystem, ElementTable) {
        let sys = CoxeterSystem::parse(name).unwrap();
        let table = ElementTable::new(&sys);
        (sys, table)
    }

    #[test]
    fn quadratic_relation_and_length_additivity() {
        let (sys, table) = setup("A1");
        let h = HeckeAlgebra::new(&sys, &table);
        let s = sys.generator(0).clone();
        let ts: HeckeElement<i64> = h.basis(&s);
        let sq = h.t_multiply(&ts, &ts).unwrap();
        assert_eq!(h.coefficient(&sq, &sys.identity()), q());
        assert_eq!(h.coefficient(&sq, &s), &q() - &P::one());

        let (sys, table) = setup("A2");
        let h = HeckeAlgebra::new(&sys, &table);
        let t1: HeckeElement<i64> = h.basis(sys.generator(0));
        let t2 = h.basis(sys.generator(1));
        assert_eq!(h.t_multiply(&t1, &t2).unwrap(), h.basis(&sys.eval(&[0, 1])));
        let one = h.basis(&sys.identity());
        for w in table.elements() {
            let tw: HeckeElement<i64> = h.basis(w);
            assert_eq!(h.t_multiply(&one, &tw).unwrap(), tw);
            assert_eq!(h.t_multiply(&tw, &one).unwrap(), tw);
        }
    }

    #[test]
    fn a1_traces() {
        let (sys, table) = setup("A1");
        let h = HeckeAlgebra::new(&sys, &table);
        let s = sys.generator(0).clone();
        let e = sys.identity();
        assert_eq!(h.n_trace::<i64>(&s, &s), &(&q() * &q()) + &P::one());
        assert_eq!(h.n_trace::<i64>(&s, &e), &q() - &P::one());
        assert_eq!(h.n_trace::<i64>(&e, &e), P::constant(2));
    }

    #[test]
    fn products_stay_polynomial_in_rank_three() {
        for name in ["A3", "B3", "A2", "G2"] {
            let (sys, table) = setup(name);
            let h = HeckeAlgebra::new(&sys, &table);
            for a in table.elements() {
                let ta: HeckeElement<i64> = h.basis(a);
                for b in table.elements() {
                    let prod = h.t_multiply(&ta, &h.basis(b)).unwrap();
                    assert!(prod.terms().all(|(_, p)| p.is_polynomial()));
                    if a.length() + b.length() == sys.mul(a, b).length() {
                        assert_eq!(prod, h.basis(&sys.mul(a, b)));
                    }
                }
            }
        }
    }

    #[test]
    fn traces_are_polynomials_with_fixed_point_value() {
        for name in ["A2", "B2", "A2*", "G2", "A3"] {
            let (sys, table) = setup(name);
            let h = HeckeAlgebra::new(&sys, &table);
            let trivial = h.n_trace::<i64>(&sys.identity(), &sys.identity());
            if name.ends_with('*') {
                // Only the twist-fixed elements contribute.
                assert_eq!(trivial, P::constant(2));
            } else {
                assert_eq!(trivial, P::constant(table.len() as i64));
            }
            let step = if name == "A3" { 5 } else { 1 };
            for w in table.elements().iter().step_by(step) {
                for w2 in table.elements().iter().step_by(step) {
                    let n = h.n_trace::<i64>(w, w2);
                    assert!(n.is_polynomial(), "{name}");
                    assert_eq!(n.specialize(&1i64), Ok(h.fixed_point_count(w, w2) as i64));
                    assert!(n.degree().unwrap_or(0) as usize <= w.length() + w2.length());
                }
            }
        }
    }

    #[test]
    fn generic_coefficients_agree_with_integers() {
        use num_rational::Ratio;
        let (sys, table) = setup("B2");
        let h = HeckeAlgebra::new(&sys, &table);
        let w = sys.eval(&[0, 1]);
        let a = h.n_trace::<i64>(&w, &w);
        let b = h.n_trace::<Ratio<i64>>(&w, &w);
        let lifted = P::from_terms(b.terms().map(|(e, c)| (e, c.to_integer())));
        assert_eq!(a, lifted);
    }

    #[test]
    fn mismatched_systems_are_rejected() {
        let (sys, table) = setup("A2");
        let (sys2, table2) = setup("B2");
        let h = HeckeAlgebra::new(&sys, &table);
        let h2 = HeckeAlgebra::new(&sys2, &table2);
        let a: HeckeElement<i64> = h.basis(&sys.identity());
        let b = h2.basis(&sys2.identity());
        assert_eq!(h.t_multiply(&a, &b), Err(HeckeError::MismatchedSystems));
    }

    fn combo(len: usize) -> impl Strategy<Value = Vec<(usize, i64, i32)>> {
        prop::collection::vec((0..len, -3i64..4, 0i32..3), 1..4)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn associativity_on_b3(x in combo(48), y in combo(48), z in combo(48)) {
            let (sys, table) = setup("B3");
            let h = HeckeAlgebra::new(&sys, &table);
            let build = |terms: &[(usize, i64, i32)]| {
                terms.iter().fold(h.zero::<i64>(), |acc, &(k, c, e)| {
                    h.add(&acc, &h.scale(&h.basis_index(k), &P::monomial(c, e))).unwrap()
                })
            };
            let (a, b, c) = (build(&x), build(&y), build(&z));
            let left = h.t_multiply(&h.t_multiply(&a, &b).unwrap(), &c).unwrap();
            let right = h.t_multiply(&a, &h.t_multiply(&b, &c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }
    }

    #[test]
    fn associativity_exhaustive_on_a2() {
        let (sys, table) = setup("A2");
        let h = HeckeAlgebra::new(&sys, &table);
        let els = table.elements();
        for a in els {
            for b in els {
                let ab: HeckeElement<i64> = h.t_multiply(&h.basis(a), &h.basis(b)).unwrap();
                for c in els {
                    let bc = h.t_multiply(&h.basis(b), &h.basis(c)).unwrap();
                    assert_eq!(
                        h.t_multiply(&ab, &h.basis(c)).unwrap(),
                        h.t_multiply(&h.basis(a), &bc).unwrap()
                    );
                }
            }
        }
    }
}
