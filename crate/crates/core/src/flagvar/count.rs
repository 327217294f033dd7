//! Point counts of `{(g, B, B') : (B, gBg⁻¹) ∈ O_w, (B', gB'g⁻¹) ∈ O_{w'}}`
//! against specialised Hecke traces.

use super::{FlagError, SpecialLinear};
use crate::coxeter::WeylElement;
use crate::hecke::HeckeAlgebra;
use crate::matrix::{special_linear_order, Mat};
use crate::Poly;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};

/// `N_s(w, w')` for every pair, from one pass over `SL_n(GF(q^s))`.
#[derive(Debug, Clone)]
pub struct CountMatrix {
    pub n: usize,
    pub q: u32,
    pub s: u32,
    pub group_order: u64,
    pub elements: Vec<WeylElement>,
    /// `counts[i][j] = Σ_g a_i(g) a_j(g)` with `a_w(g) = #{B : rel_pos(B, gB) = w}`.
    pub counts: Vec<Vec<u64>>,
}

impl CountMatrix {
    pub fn get(&self, w: &WeylElement, w_prime: &WeylElement) -> Option<u64> {
        let i = self.elements.iter().position(|x| x == w)?;
        let j = self.elements.iter().position(|x| x == w_prime)?;
        Some(self.counts[i][j])
    }
}

/// Counts over `SL_n(GF(q^s))` and all flags over `GF(q^s)`.
pub fn count_matrix(n: usize, q: u32, s: u32) -> Result<CountMatrix, FlagError> {
    let sl = SpecialLinear::new(n, q, s)?;
    let elements: Vec<WeylElement> = sl.table().elements().to_vec();
    let by_perm: HashMap<Vec<usize>, usize> = elements
        .iter()
        .enumerate()
        .map(|(k, w)| (sl.perm_of(w), k))
        .collect();
    let flags: Vec<(Mat, Mat)> = sl
        .flags()
        .into_iter()
        .map(|b| {
            let g = b.basis().clone();
            (sl.inverse(&g), g)
        })
        .collect();
    let size = elements.len();
    let group = sl.full_group();
    let counts = group
        .par_iter()
        .map(|g| {
            let mut a = vec![0u64; size];
            for (inv, basis) in &flags {
                let h = sl.mul(inv, &sl.mul(g, basis));
                a[by_perm[&sl.bruhat_cell(&h)]] += 1;
            }
            let mut m = vec![vec![0u64; size]; size];
            for i in 0..size {
                for j in 0..size {
                    m[i][j] = a[i] * a[j];
                }
            }
            m
        })
        .reduce(
            || vec![vec![0u64; size]; size],
            |mut x, y| {
                for (rx, ry) in x.iter_mut().zip(&y) {
                    for (a, b) in rx.iter_mut().zip(ry) {
                        *a += b;
                    }
                }
                x
            },
        );
    Ok(CountMatrix {
        n,
        q,
        s,
        group_order: group.len() as u64,
        elements,
        counts,
    })
}

/// One comparison `N_s = |SL_n(GF(q^s))| · n_{w,w'}(q^s)`.
#[derive(Debug, Clone, Serialize)]
pub struct CountComparison {
    #[serde(rename = "type")]
    pub kind: String,
    pub n: usize,
    pub q: u32,
    pub s: u32,
    pub w: String,
    #[serde(rename = "w'")]
    pub w_prime: String,
    #[serde(rename = "N_s")]
    pub n_s: u64,
    pub group_order: u64,
    pub trace: String,
    pub hecke_value: i64,
    pub pass: bool,
}

/// Checks every pair in `pairs` (all pairs when `None`) against the traces.
pub fn verify_53(
    matrix: &CountMatrix,
    pairs: Option<&[(WeylElement, WeylElement)]>,
) -> Vec<CountComparison> {
    let sl =
        SpecialLinear::new(matrix.n, matrix.q, 1).expect("parameters were valid for the count");
    let sys = sl.system();
    let hecke = HeckeAlgebra::new(sys, sl.table());
    let all: Vec<(WeylElement, WeylElement)>;
    let pairs = match pairs {
        Some(p) => p,
        None => {
            all = matrix
                .elements
                .iter()
                .flat_map(|a| matrix.elements.iter().map(move |b| (a.clone(), b.clone())))
                .collect();
            &all
        }
    };
    let value = (matrix.q as i64).pow(matrix.s);
    let expected_order = special_linear_order(value as u64, matrix.n);
    let mut traces: BTreeMap<(WeylElement, WeylElement), Poly> = BTreeMap::new();
    pairs
        .iter()
        .map(|(w, w_prime)| {
            let trace = traces
                .entry((w.clone(), w_prime.clone()))
                .or_insert_with(|| hecke.n_trace(w, w_prime))
                .clone();
            let hecke_value = trace.specialize(&value).expect("traces are polynomials");
            let n_s = matrix.get(w, w_prime).expect("pair lies in the matrix");
            let pass = matrix.group_order == expected_order
                && i128::from(n_s) == i128::from(matrix.group_order) * i128::from(hecke_value);
            CountComparison {
                kind: format!("A{}", matrix.n - 1),
                n: matrix.n,
                q: matrix.q,
                s: matrix.s,
                w: sys.format_element(w),
                w_prime: sys.format_element(w_prime),
                n_s,
                group_order: matrix.group_order,
                trace: trace.to_string(),
                hecke_value,
                pass,
            }
        })
        .collect()
}

/// `Σ_{h ∈ SL_2(GF(q))} #{B ∈ X_w : F^s(B) = hB} · #{B' ∈ X_{w'} : F^s(B') = hB'}`
/// together with `|SL_2(GF(q))|`; the quotient is the orbit count.
///
/// A flag with `F^s(B) = hB` satisfies `F^{s·ord(h)}(B) = B`, so it is
/// found at level `s·ord(h)`. One representative per conjugacy class of `h`
/// suffices since conjugating `h` by `x ∈ SL_2(GF(q))` moves the flags by `x`.
pub fn quotient_count_sl2(
    q: u32,
    s: u32,
    w: &WeylElement,
    w_prime: &WeylElement,
) -> Result<(u64, u64), FlagError> {
    let base = SpecialLinear::new(2, q, 1)?;
    let group = base.rational_group();
    let classes = conjugacy_classes(&base, &group);
    let mut levels: HashMap<u32, SpecialLinear> = HashMap::new();
    let mut total = 0u64;
    for (rep, size) in classes {
        let level = s * matrix_order(&base, &rep);
        if let std::collections::hash_map::Entry::Vacant(slot) = levels.entry(level) {
            slot.insert(base.at_level(level)?);
        }
        let sl = &levels[&level];
        let count = |target: &WeylElement| {
            sl.flags()
                .into_iter()
                .filter(|b| sl.frobenius_flag_power(b, s) == sl.act(&rep, b))
                .filter(|b| sl.rel_pos(b, &sl.frobenius_flag(b)) == *target)
                .count() as u64
        };
        total += size * count(w) * count(w_prime);
    }
    Ok((total, group.len() as u64))
}

fn matrix_order(sl: &SpecialLinear, g: &Mat) -> u32 {
    let mut x = g.clone();
    let mut k = 1;
    while !x.is_identity() {
        x = sl.mul(&x, g);
        k += 1;
    }
    k
}

/// `(representative, class size)` for each conjugacy class.
fn conjugacy_classes(sl: &SpecialLinear, group: &[Mat]) -> Vec<(Mat, u64)> {
    let mut seen: std::collections::BTreeSet<Mat> = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for g in group {
        if seen.contains(g) {
            continue;
        }
        let class: std::collections::BTreeSet<Mat> = group
            .iter()
            .map(|x| sl.mul(&sl.mul(x, g), &sl.inverse(x)))
            .collect();
        out.push((g.clone(), class.len() as u64));
        seen.extend(class);
    }
    out
}
