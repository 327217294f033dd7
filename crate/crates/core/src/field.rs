//! Finite fields `GF(p^k)` with log/exp tables.
//!
//! An element is stored as the integer `Σ c_i p^i` of its coefficient vector
//! in the basis `1, x, .., x^(k-1)` modulo a primitive polynomial, so the
//! prime field sits inside as `0..p`.

use serde::Serialize;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field of size {0} is larger than supported")]
    TooLarge(u64),
}

/// Field element handle; only meaningful together with its [`FiniteField`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Fe(pub u32);

impl fmt::Display for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

const MAX_SIZE: u64 = 1 << 22;
const ADD_TABLE_LIMIT: u32 = 1024;

#[derive(Debug, Clone)]
pub struct FiniteField {
    p: u32,
    k: u32,
    size: u32,
    /// Low-to-high coefficients of the monic modulus (leading 1 omitted).
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    add_table: Option<Vec<u32>>,
    neg: Vec<u32>,
}

fn is_prime(p: u32) -> bool {
    p >= 2
        && (2..)
            .take_while(|d| d * d <= p)
            .all(|d| !p.is_multiple_of(d))
}

fn digits(mut a: u32, p: u32, k: u32) -> Vec<u32> {
    (0..k)
        .map(|_| {
            let d = a % p;
            a /= p;
            d
        })
        .collect()
}

fn undigits(ds: &[u32], p: u32) -> u32 {
    ds.iter().rev().fold(0, |acc, &d| acc * p + d)
}

fn add_digits(a: u32, b: u32, p: u32, k: u32) -> u32 {
    if p == 2 {
        return a ^ b;
    }
    let s: Vec<u32> = digits(a, p, k)
        .iter()
        .zip(digits(b, p, k))
        .map(|(x, y)| (x + y) % p)
        .collect();
    undigits(&s, p)
}

/// Multiplies the coefficient vector by `x` modulo `x^k + Σ m_i x^i`.
fn times_x(v: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let k = v.len();
    let top = v[k - 1];
    let mut out = vec![0; k];
    for i in (1..k).rev() {
        out[i] = v[i - 1];
    }
    for (o, &m) in out.iter_mut().zip(modulus) {
        *o = (*o + (p - m) * top) % p;
    }
    out
}

/// Powers of `x` if `modulus` is primitive, `None` otherwise.
fn power_cycle(modulus: &[u32], p: u32, size: u32) -> Option<Vec<u32>> {
    let k = modulus.len();
    let mut v = vec![0; k];
    v[0] = 1;
    let mut exp = Vec::with_capacity(size as usize - 1);
    for step in 0..size - 1 {
        let code = undigits(&v, p);
        if step > 0 && code == 1 {
            return None;
        }
        exp.push(code);
        v = times_x(&v, modulus, p);
    }
    (undigits(&v, p) == 1).then_some(exp)
}

impl FiniteField {
    pub fn new(p: u32, k: u32) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if k == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let size64 = (p as u64).saturating_pow(k);
        if size64 > MAX_SIZE {
            return Err(FieldError::TooLarge(size64));
        }
        let size = size64 as u32;
        // Lexicographically first primitive modulus; the constant term must be nonzero.
        let (modulus, exp) = (0..size)
            .map(|code| digits(code, p, k))
            .filter(|m| m[0] != 0)
            .find_map(|m| power_cycle(&m, p, size).map(|e| (m, e)))
            .expect("a primitive polynomial exists in every degree");
        let mut log = vec![0; size as usize];
        for (i, &e) in exp.iter().enumerate() {
            log[e as usize] = i as u32;
        }
        let neg = (0..size)
            .map(|a| {
                undigits(
                    &digits(a, p, k)
                        .iter()
                        .map(|&d| (p - d) % p)
                        .collect::<Vec<_>>(),
                    p,
                )
            })
            .collect();
        let add_table = (size <= ADD_TABLE_LIMIT && p != 2).then(|| {
            (0..size)
                .flat_map(|a| (0..size).map(move |b| add_digits(a, b, p, k)))
                .collect()
        });
        Ok(FiniteField {
            p,
            k,
            size,
            modulus,
            exp,
            log,
            add_table,
            neg,
        })
    }

    /// Prime field `GF(p)`.
    pub fn prime(p: u32) -> Result<Self, FieldError> {
        Self::new(p, 1)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> Fe {
        Fe(0)
    }

    pub fn one(&self) -> Fe {
        Fe(1)
    }

    /// Image of an integer in the prime field.
    pub fn from_int(&self, i: i64) -> Fe {
        Fe(i.rem_euclid(self.p as i64) as u32)
    }

    /// Generator of the multiplicative group.
    pub fn primitive(&self) -> Fe {
        Fe(self.exp[1 % self.exp.len()])
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.size).map(Fe)
    }

    pub fn units(&self) -> impl Iterator<Item = Fe> + '_ {
        self.exp.iter().map(|&e| Fe(e))
    }

    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        if self.p == 2 {
            return Fe(a.0 ^ b.0);
        }
        match &self.add_table {
            Some(t) => Fe(t[(a.0 * self.size + b.0) as usize]),
            None => Fe(add_digits(a.0, b.0, self.p, self.k)),
        }
    }

    pub fn neg(&self, a: Fe) -> Fe {
        Fe(self.neg[a.0 as usize])
    }

    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.0 == 0 || b.0 == 0 {
            return Fe(0);
        }
        let n = self.exp.len() as u32;
        let s = self.log[a.0 as usize] + self.log[b.0 as usize];
        Fe(self.exp[(if s >= n { s - n } else { s }) as usize])
    }

    /// `None` for zero.
    pub fn inv(&self, a: Fe) -> Option<Fe> {
        if a.0 == 0 {
            return None;
        }
        let n = self.exp.len() as u32;
        Some(Fe(self.exp[((n - self.log[a.0 as usize]) % n) as usize]))
    }

    pub fn div(&self, a: Fe, b: Fe) -> Option<Fe> {
        self.inv(b).map(|ib| self.mul(a, ib))
    }

    /// `a^e` for any integer `e`; `0^e` with `e <= 0` is taken to be `1` only for `e = 0`.
    pub fn pow(&self, a: Fe, e: i64) -> Option<Fe> {
        if a.0 == 0 {
            return match e {
                0 => Some(Fe(1)),
                e if e > 0 => Some(Fe(0)),
                _ => None,
            };
        }
        let n = self.exp.len() as i64;
        let l = (self.log[a.0 as usize] as i64 * e.rem_euclid(n)).rem_euclid(n);
        Some(Fe(self.exp[l as usize]))
    }

    /// `a^n` for natural `n`.
    pub fn pow_u(&self, a: Fe, n: u64) -> Fe {
        if a.0 == 0 {
            return if n == 0 { Fe(1) } else { Fe(0) };
        }
        let m = self.exp.len() as u64;
        Fe(self.exp[((self.log[a.0 as usize] as u64 * (n % m)) % m) as usize])
    }

    /// Absolute Frobenius `a ↦ a^p`.
    pub fn frobenius(&self, a: Fe) -> Fe {
        self.pow_u(a, self.p as u64)
    }

    /// `a ↦ a^(p^e)`.
    pub fn frobenius_pow(&self, a: Fe, e: u32) -> Fe {
        (0..e % self.k).fold(a, |x, _| self.frobenius(x))
    }

    /// Multiplicative order; `None` for zero.
    pub fn order(&self, a: Fe) -> Option<u64> {
        if a.0 == 0 {
            return None;
        }
        let n = self.exp.len() as u64;
        let l = self.log[a.0 as usize] as u64;
        Some(n / gcd(n, l))
    }

    pub fn is_zero(&self, a: Fe) -> bool {
        a.0 == 0
    }

    pub fn sum(&self, it: impl IntoIterator<Item = Fe>) -> Fe {
        it.into_iter().fold(Fe(0), |acc, x| self.add(acc, x))
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
