//! Laurent polynomials in one indeterminate `q` over a commutative ring.

use num_traits::{Num, One, Zero};
use serde::{Serialize, Serializer};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use thiserror::Error;

/// Coefficient rings usable in [`LaurentPoly`].
pub trait Coefficient:
    Clone + PartialEq + Zero + One + Neg<Output = Self> + Sub<Output = Self> + Send + Sync
{
}

impl<C> Coefficient for C where
    C: Clone + PartialEq + Zero + One + Neg<Output = C> + Sub<Output = C> + Send + Sync
{
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpecializeError {
    #[error("negative powers of q cannot be evaluated exactly at this value")]
    NotExact,
    #[error("q = 0 with negative exponents present")]
    ZeroDenominator,
}

/// `Σ c_k q^k` with finitely many nonzero `c_k`. Zero coefficients are never
/// stored, so derived equality is equality of polynomials.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly<C> {
    terms: BTreeMap<i32, C>,
}

impl<C: Coefficient> LaurentPoly<C> {
    pub fn zero() -> Self {
        LaurentPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        Self::monomial(c, 0)
    }

    /// `q` itself.
    pub fn q() -> Self {
        Self::monomial(C::one(), 1)
    }

    pub fn monomial(c: C, exp: i32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        LaurentPoly { terms }
    }

    /// From `(exponent, coefficient)` pairs; repeated exponents add up.
    pub fn from_terms(pairs: impl IntoIterator<Item = (i32, C)>) -> Self {
        let mut out = Self::zero();
        for (e, c) in pairs {
            out.add_term(e, c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exp: i32) -> C {
        self.terms.get(&exp).cloned().unwrap_or_else(C::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &C)> {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    /// Highest exponent, `None` for zero.
    pub fn degree(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    pub fn min_exponent(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    /// No negative exponents.
    pub fn is_polynomial(&self) -> bool {
        self.min_exponent().is_none_or(|e| e >= 0)
    }

    pub fn add_term(&mut self, exp: i32, c: C) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(exp).or_insert_with(C::zero);
        *slot = slot.clone() + c;
        if slot.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::from_terms(self.terms.iter().map(|(&e, x)| (e, x.clone() * c.clone())))
    }

    /// Multiplies by `q^k`.
    pub fn shift(&self, k: i32) -> Self {
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .map(|(&e, c)| (e + k, c.clone()))
                .collect(),
        }
    }

    /// Evaluates at `value`. Negative powers are cleared by multiplying through
    /// by a power of `value` and dividing once at the end; the division must
    /// be exact.
    pub fn specialize<T>(&self, value: &T) -> Result<T, SpecializeError>
    where
        T: Num + Clone + From<C>,
    {
        let shift = self.min_exponent().map_or(0, |e| (-e).max(0));
        let mut acc = T::zero();
        let top = self.degree().unwrap_or(0) + shift;
        // Horner over the shifted exponents 0..=top.
        for e in (0..=top).rev() {
            acc = acc * value.clone() + T::from(self.coefficient(e - shift));
        }
        if shift == 0 {
            return Ok(acc);
        }
        let denom = num_traits::pow(value.clone(), shift as usize);
        if denom.is_zero() {
            return Err(SpecializeError::ZeroDenominator);
        }
        let quot = acc.clone() / denom.clone();
        if quot.clone() * denom != acc {
            return Err(SpecializeError::NotExact);
        }
        Ok(quot)
    }
}

impl<C: Coefficient> Default for LaurentPoly<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coefficient> Add for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;

    fn add(self, rhs: &LaurentPoly<C>) -> LaurentPoly<C> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<C: Coefficient> Add for LaurentPoly<C> {
    type Output = LaurentPoly<C>;

    fn add(mut self, rhs: LaurentPoly<C>) -> LaurentPoly<C> {
        self += &rhs;
        self
    }
}

impl<C: Coefficient> AddAssign<&LaurentPoly<C>> for LaurentPoly<C> {
    fn add_assign(&mut self, rhs: &LaurentPoly<C>) {
        for (&e, c) in &rhs.terms {
            self.add_term(e, c.clone());
        }
    }
}

impl<C: Coefficient> Neg for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;

    fn neg(self) -> LaurentPoly<C> {
        LaurentPoly {
            terms: self.terms.iter().map(|(&e, c)| (e, -c.clone())).collect(),
        }
    }
}

impl<C: Coefficient> Neg for LaurentPoly<C> {
    type Output = LaurentPoly<C>;

    fn neg(self) -> LaurentPoly<C> {
        -&self
    }
}

impl<C: Coefficient> Sub for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;

    fn sub(self, rhs: &LaurentPoly<C>) -> LaurentPoly<C> {
        self + &(-rhs)
    }
}

impl<C: Coefficient> Sub for LaurentPoly<C> {
    type Output = LaurentPoly<C>;

    fn sub(self, rhs: LaurentPoly<C>) -> LaurentPoly<C> {
        &self - &rhs
    }
}

impl<C: Coefficient> Mul for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;

    fn mul(self, rhs: &LaurentPoly<C>) -> LaurentPoly<C> {
        let mut out = LaurentPoly::zero();
        for (&a, x) in &self.terms {
            for (&b, y) in &rhs.terms {
                out.add_term(a + b, x.clone() * y.clone());
            }
        }
        out
    }
}

impl<C: Coefficient> Mul for LaurentPoly<C> {
    type Output = LaurentPoly<C>;

    fn mul(self, rhs: LaurentPoly<C>) -> LaurentPoly<C> {
        &self * &rhs
    }
}

/// Renders as `q^2+1`, `q-1`, `-2q^-1+3`, `0`; highest exponent first.
impl<C: Coefficient + fmt::Display> fmt::Display for LaurentPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&e, c) in self.terms.iter().rev() {
            let text = c.to_string();
            let (negative, magnitude) = match text.strip_prefix('-') {
                Some(m) => (true, m.to_string()),
                None => (false, text),
            };
            if negative {
                write!(f, "-")?;
            } else if !first {
                write!(f, "+")?;
            }
            first = false;
            let unit = magnitude == "1";
            match e {
                0 => write!(f, "{magnitude}")?,
                _ => {
                    if !unit {
                        write!(f, "{magnitude}")?;
                    }
                    if e == 1 {
                        write!(f, "q")?;
                    } else {
                        write!(f, "q^{e}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl<C: Coefficient + fmt::Display> Serialize for LaurentPoly<C> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;
    use proptest::prelude::*;

    type P = LaurentPoly<i64>;

    fn poly_strategy() -> impl Strategy<Value = P> {
        prop::collection::vec((-3i32..4, -5i64..6), 0..5).prop_map(P::from_terms)
    }

    #[test]
    fn rendering() {
        let q = P::q();
        let one = P::one();
        assert_eq!((&(&q * &q) + &one).to_string(), "q^2+1");
        assert_eq!((&q - &one).to_string(), "q-1");
        assert_eq!(P::from_terms([(-1, -2), (0, 3)]).to_string(), "3-2q^-1");
        assert_eq!(P::zero().to_string(), "0");
        assert_eq!(P::monomial(-1, 3).to_string(), "-q^3");
    }

    #[test]
    fn specialization_examples() {
        let q = P::q();
        let q2p1 = &(&q * &q) + &P::one();
        assert_eq!(q2p1.specialize(&2i64), Ok(5));
        assert_eq!((&q - &P::one()).specialize(&3i64), Ok(2));
        let inv = P::monomial(1, -1);
        assert_eq!(inv.specialize(&2i64), Err(SpecializeError::NotExact));
        assert_eq!(
            inv.specialize(&Ratio::from_integer(2i64)),
            Ok(Ratio::new(1, 2))
        );
        assert_eq!(inv.specialize(&0i64), Err(SpecializeError::ZeroDenominator));
        assert_eq!(P::from_terms([(-1, 4), (1, 1)]).specialize(&2i64), Ok(4));
    }

    proptest! {
        #[test]
        fn ring_axioms(a in poly_strategy(), b in poly_strategy(), c in poly_strategy()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert!((&a - &a).is_zero());
            prop_assert!(a.terms().all(|(_, c)| *c != 0));
        }

        #[test]
        fn value_at_one_is_coefficient_sum(a in poly_strategy()) {
            let sum: i64 = a.terms().map(|(_, c)| *c).sum();
            prop_assert_eq!(a.specialize(&1i64), Ok(sum));
        }

        #[test]
        fn specialize_is_a_ring_map(a in poly_strategy(), b in poly_strategy(), x in 1i64..5) {
            let at = |p: &P| p.specialize(&Ratio::from_integer(x)).unwrap();
            prop_assert_eq!(at(&(&a * &b)), at(&a) * at(&b));
            prop_assert_eq!(at(&(&a + &b)), at(&a) + at(&b));
        }
    }
}
