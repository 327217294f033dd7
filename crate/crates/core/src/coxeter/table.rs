//! Exhaustive element tables for groups small enough to list.

use super::{CoxeterSystem, WeylElement, Word};
use rayon::prelude::*;
use std::collections::HashMap;

/// All elements of a finite Weyl group, sorted by `(length, ShortLex word)`,
/// with generator multiplication tables.
#[derive(Debug, Clone)]
pub struct ElementTable {
    elements: Vec<WeylElement>,
    words: Vec<Word>,
    index: HashMap<WeylElement, usize>,
    left: Vec<Vec<u32>>,
    right: Vec<Vec<u32>>,
    bullet: Vec<u32>,
    inverse: Vec<u32>,
}

impl ElementTable {
    /// Breadth-first enumeration. Intended for `|W|` up to a few hundred thousand.
    pub fn new(sys: &CoxeterSystem) -> Self {
        let rank = sys.rank();
        let mut by_len: Vec<Vec<WeylElement>> = vec![vec![sys.identity()]];
        let mut seen: HashMap<WeylElement, ()> = HashMap::new();
        seen.insert(sys.identity(), ());
        loop {
            let last = by_len.last().expect("nonempty");
            let mut next = Vec::new();
            for w in last {
                for i in 0..rank {
                    if !sys.is_right_descent(w, i) {
                        let v = sys.right_mul_gen(w, i);
                        if seen.insert(v.clone(), ()).is_none() {
                            next.push(v);
                        }
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            by_len.push(next);
        }
        let mut keyed: Vec<(Word, WeylElement)> = by_len
            .into_par_iter()
            .flat_map_iter(|layer| {
                layer
                    .into_iter()
                    .map(|w| (sys.reduced_word(&w), w))
                    .collect::<Vec<_>>()
            })
            .collect();
        keyed.par_sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(&b.0)));
        let (words, elements): (Vec<Word>, Vec<WeylElement>) = keyed.into_iter().unzip();
        let index: HashMap<WeylElement, usize> = elements
            .iter()
            .cloned()
            .enumerate()
            .map(|(k, w)| (w, k))
            .collect();
        let lookup = |w: &WeylElement| index[w] as u32;
        let left = (0..rank)
            .map(|i| {
                elements
                    .par_iter()
                    .map(|w| lookup(&sys.left_mul_gen(i, w)))
                    .collect()
            })
            .collect();
        let right = (0..rank)
            .map(|i| {
                elements
                    .par_iter()
                    .map(|w| lookup(&sys.right_mul_gen(w, i)))
                    .collect()
            })
            .collect();
        let bullet = elements
            .par_iter()
            .map(|w| lookup(&sys.bullet_apply(w, 1)))
            .collect();
        let inverse = elements
            .par_iter()
            .map(|w| lookup(&sys.inverse(w)))
            .collect();
        ElementTable {
            elements,
            words,
            index,
            left,
            right,
            bullet,
            inverse,
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[WeylElement] {
        &self.elements
    }

    pub fn element(&self, k: usize) -> &WeylElement {
        &self.elements[k]
    }

    /// ShortLex reduced word of element `k`.
    pub fn word(&self, k: usize) -> &Word {
        &self.words[k]
    }

    pub fn index_of(&self, w: &WeylElement) -> usize {
        self.index[w]
    }

    pub fn try_index_of(&self, w: &WeylElement) -> Option<usize> {
        self.index.get(w).copied()
    }

    pub fn length(&self, k: usize) -> usize {
        self.elements[k].length()
    }

    /// Index of `s_i · w_k`.
    pub fn left_gen(&self, i: usize, k: usize) -> usize {
        self.left[i][k] as usize
    }

    /// Index of `w_k · s_i`.
    pub fn right_gen(&self, k: usize, i: usize) -> usize {
        self.right[i][k] as usize
    }

    pub fn bullet(&self, k: usize) -> usize {
        self.bullet[k] as usize
    }

    pub fn inverse(&self, k: usize) -> usize {
        self.inverse[k] as usize
    }

    /// Index of `w_a · w_b`, computed by right-multiplying along `b`'s word.
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.words[b]
            .letters()
            .iter()
            .fold(a, |acc, &i| self.right_gen(acc, i))
    }

    pub fn identity(&self) -> usize {
        0
    }

    /// Index of the longest element.
    pub fn longest(&self) -> usize {
        self.elements.len() - 1
    }
}
