//! Finite Weyl groups realised as permutations of their root sets.
//!
//! A [`CoxeterSystem`] owns a crystallographic root system built by closing the
//! simple roots under the simple reflections. Elements are root permutations, so
//! products cost `O(#roots)` and lengths are inversion counts.
//!
//! Composition follows functions: `(uv)(α) = u(v(α))`, and a word
//! `s_{i1} s_{i2} … s_{ik}` evaluates to `s_{i1} ∘ s_{i2} ∘ … ∘ s_{ik}`.

mod perm_view;
mod table;

pub use perm_view::{PermView, PermViewKind};
pub use table::ElementTable;

use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::hash::{DefaultHasher, Hash, Hasher};
use thiserror::Error;

/// Upper bound on positive roots before a Cartan matrix is declared infinite.
const ROOT_CAP: usize = 20_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoxeterError {
    #[error("unknown system specification `{0}`")]
    UnknownSystem(String),
    #[error("rank {rank} is not valid for type {family}")]
    InvalidRank { family: String, rank: usize },
    #[error("bullet {0:?} is not a diagram automorphism")]
    NotAutomorphism(Vec<usize>),
    #[error("type {0} has no nontrivial diagram automorphism")]
    NoFlip(String),
    #[error("Coxeter matrix defines an infinite group")]
    Infinite,
    #[error("bond order {0} is not crystallographic")]
    NonCrystallographic(u32),
    #[error("Coxeter matrix is malformed: {0}")]
    MalformedMatrix(String),
    #[error("letter `{0}` is not a generator label")]
    BadLetter(String),
    #[error("generator index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("elements belong to different systems")]
    MismatchedSystems,
    #[error("permutation is not an element of the group")]
    NotInGroup,
}

/// Isogeny family label of a system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TypeTag {
    A,
    B,
    C,
    D,
    Generic,
}

/// How the diagram automorphism `•` is chosen at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BulletSpec {
    Identity,
    /// The nontrivial involution of the diagram (A_n, D_n, E6).
    Flip,
    Explicit(Vec<usize>),
}

/// Sequence of generator indices (internal, 0-based).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Word(pub Vec<usize>);

impl Word {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word(self.0.iter().chain(&other.0).copied().collect())
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }
}

/// A group element: the permutation it induces on the root set.
///
/// Root indices `0..N` are the positive roots and `N + k` is the negative of
/// root `k`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeylElement {
    system: u64,
    perm: Box<[u16]>,
    length: u32,
}

impl WeylElement {
    pub fn length(&self) -> usize {
        self.length as usize
    }

    pub fn is_identity(&self) -> bool {
        self.length == 0
    }

    /// Image of the root with index `root`.
    pub fn image(&self, root: usize) -> usize {
        self.perm[root] as usize
    }

    pub fn root_permutation(&self) -> &[u16] {
        &self.perm
    }

    pub fn system_id(&self) -> u64 {
        self.system
    }
}

impl fmt::Debug for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "WeylElement(len={}, simple images={:?})",
            self.length,
            &self.perm[..self.perm.len().min(8)]
        )
    }
}

/// A finite Weyl group with its root system and diagram automorphism.
#[derive(Debug, Clone)]
pub struct CoxeterSystem {
    id: u64,
    name: String,
    tag: TypeTag,
    rank: usize,
    labels: Vec<String>,
    coxeter_matrix: Vec<Vec<u32>>,
    cartan: Vec<Vec<i64>>,
    roots: Vec<Vec<i64>>,
    n_pos: usize,
    generators: Vec<WeylElement>,
    bullet: Vec<usize>,
    bullet_roots: Option<Vec<u16>>,
    w0: WeylElement,
    w0_twist: Vec<usize>,
    degrees: Option<Vec<u64>>,
    perm_view: Option<PermView>,
}

impl CoxeterSystem {
    /// Builds a system of a named family. B and C share the signed-permutation
    /// realisation; the tag only records the intended label.
    pub fn new(tag: TypeTag, rank: usize, bullet: BulletSpec) -> Result<Self, CoxeterError> {
        let family = match tag {
            TypeTag::A => "A",
            TypeTag::B => "B",
            TypeTag::C => "C",
            TypeTag::D => "D",
            TypeTag::Generic => {
                return Err(CoxeterError::UnknownSystem("generic needs a matrix".into()))
            }
        };
        Self::named(family, rank, bullet)
    }

    /// Parses strings such as `"B4"`, `"A3*"` (trailing `*` selects the flip)
    /// or `"E8"`.
    pub fn parse(spec: &str) -> Result<Self, CoxeterError> {
        let spec = spec.trim();
        let (body, bullet) = match spec.strip_suffix('*') {
            Some(b) => (b, BulletSpec::Flip),
            None => (spec, BulletSpec::Identity),
        };
        let split = body
            .find(|c: char| c.is_ascii_digit())
            .ok_or_else(|| CoxeterError::UnknownSystem(spec.into()))?;
        let (family, rank) = body.split_at(split);
        let rank: usize = rank
            .parse()
            .map_err(|_| CoxeterError::UnknownSystem(spec.into()))?;
        Self::named(&family.to_ascii_uppercase(), rank, bullet)
    }

    fn named(family: &str, rank: usize, bullet: BulletSpec) -> Result<Self, CoxeterError> {
        let bad_rank = || CoxeterError::InvalidRank {
            family: family.to_string(),
            rank,
        };
        let mut edges: Vec<(usize, usize, u32)> = Vec::new();
        let chain = |edges: &mut Vec<(usize, usize, u32)>, len: usize| {
            for i in 1..len {
                edges.push((i - 1, i, 3));
            }
        };
        let (tag, degrees): (TypeTag, Vec<u64>) = match family {
            "A" => {
                if rank < 1 {
                    return Err(bad_rank());
                }
                chain(&mut edges, rank);
                (TypeTag::A, (2..=rank as u64 + 1).collect())
            }
            "B" | "C" => {
                if rank < 2 {
                    return Err(bad_rank());
                }
                chain(&mut edges, rank);
                edges.last_mut().expect("rank >= 2").2 = 4;
                let tag = if family == "B" {
                    TypeTag::B
                } else {
                    TypeTag::C
                };
                (tag, (1..=rank as u64).map(|i| 2 * i).collect())
            }
            "D" => {
                if rank < 4 {
                    return Err(bad_rank());
                }
                chain(&mut edges, rank - 1);
                edges.push((rank - 3, rank - 1, 3));
                let mut d: Vec<u64> = (1..rank as u64).map(|i| 2 * i).collect();
                d.push(rank as u64);
                (TypeTag::D, d)
            }
            "E" => {
                if !(6..=8).contains(&rank) {
                    return Err(bad_rank());
                }
                // Bourbaki labels: chain 1-3-4-…-n with 2 attached to 4.
                edges.push((0, 2, 3));
                for i in 3..rank {
                    edges.push((i - 1, i, 3));
                }
                edges.push((1, 3, 3));
                let d = match rank {
                    6 => vec![2, 5, 6, 8, 9, 12],
                    7 => vec![2, 6, 8, 10, 12, 14, 18],
                    _ => vec![2, 8, 12, 14, 18, 20, 24, 30],
                };
                (TypeTag::Generic, d)
            }
            "F" => {
                if rank != 4 {
                    return Err(bad_rank());
                }
                edges.extend([(0, 1, 3), (1, 2, 4), (2, 3, 3)]);
                (TypeTag::Generic, vec![2, 6, 8, 12])
            }
            "G" => {
                if rank != 2 {
                    return Err(bad_rank());
                }
                edges.push((0, 1, 6));
                (TypeTag::Generic, vec![2, 6])
            }
            _ => return Err(CoxeterError::UnknownSystem(format!("{family}{rank}"))),
        };
        let mut m = vec![vec![2u32; rank]; rank];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1;
        }
        for &(i, j, o) in &edges {
            m[i][j] = o;
            m[j][i] = o;
        }
        let mut labels: Vec<String> = (1..=rank).map(|i| i.to_string()).collect();
        if tag == TypeTag::D {
            labels[rank - 1] = format!("{}'", rank - 1);
        }
        let bullet = match bullet {
            BulletSpec::Flip => {
                let flip: Vec<usize> = match (family, rank) {
                    ("A", _) => (0..rank).rev().collect(),
                    ("D", _) => {
                        let mut p: Vec<usize> = (0..rank).collect();
                        p.swap(rank - 2, rank - 1);
                        p
                    }
                    ("E", 6) => vec![5, 1, 4, 3, 2, 0],
                    _ => return Err(CoxeterError::NoFlip(format!("{family}{rank}"))),
                };
                if flip.iter().enumerate().all(|(i, &j)| i == j) {
                    return Err(CoxeterError::NoFlip(format!("{family}{rank}")));
                }
                BulletSpec::Explicit(flip)
            }
            other => other,
        };
        let star = if matches!(bullet, BulletSpec::Identity) {
            ""
        } else {
            "*"
        };
        let mut sys =
            Self::from_coxeter_matrix(&format!("{family}{rank}{star}"), &m, labels, bullet)?;
        sys.tag = tag;
        sys.degrees = Some(degrees);
        sys.perm_view = match tag {
            TypeTag::A => Some(PermView::new(&sys, PermViewKind::Symmetric)?),
            TypeTag::B | TypeTag::C => Some(PermView::new(&sys, PermViewKind::SignedB)?),
            TypeTag::D => Some(PermView::new(&sys, PermViewKind::SignedD)?),
            TypeTag::Generic => None,
        };
        Ok(sys)
    }

    /// D4 labelled `0,1,2,3` with `0` the trivalent node and `1,2,3` the
    /// pairwise commuting leaves.
    pub fn d4_trivalent() -> Self {
        let mut m = vec![vec![2u32; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1;
        }
        for leaf in 1..4 {
            m[0][leaf] = 3;
            m[leaf][0] = 3;
        }
        let labels = (0..4).map(|i| i.to_string()).collect();
        let mut sys = Self::from_coxeter_matrix("D4", &m, labels, BulletSpec::Identity)
            .expect("D4 is a finite crystallographic diagram");
        sys.degrees = Some(vec![2, 4, 6, 4]);
        sys
    }

    /// Builds a system from a Coxeter matrix with bond orders in `{2,3,4,6}`.
    /// Bonds of order 4 and 6 make the lower-indexed node long.
    pub fn from_coxeter_matrix(
        name: &str,
        m: &[Vec<u32>],
        labels: Vec<String>,
        bullet: BulletSpec,
    ) -> Result<Self, CoxeterError> {
        let rank = m.len();
        if rank == 0 {
            return Err(CoxeterError::MalformedMatrix("empty".into()));
        }
        if labels.len() != rank {
            return Err(CoxeterError::MalformedMatrix(
                "label count differs from rank".into(),
            ));
        }
        let mut cartan = vec![vec![0i64; rank]; rank];
        for i in 0..rank {
            if m[i].len() != rank {
                return Err(CoxeterError::MalformedMatrix("not square".into()));
            }
            for j in 0..rank {
                if m[i][j] != m[j][i] {
                    return Err(CoxeterError::MalformedMatrix("not symmetric".into()));
                }
                if i == j {
                    if m[i][j] != 1 {
                        return Err(CoxeterError::MalformedMatrix("diagonal must be 1".into()));
                    }
                    cartan[i][i] = 2;
                    continue;
                }
                // Cartan entry A[i][j] = <α_i^∨, α_j>.
                let (a, b) = match m[i][j] {
                    2 => (0, 0),
                    3 => (-1, -1),
                    4 => (-1, -2),
                    6 => (-1, -3),
                    0 => return Err(CoxeterError::Infinite),
                    o => return Err(CoxeterError::NonCrystallographic(o)),
                };
                if i < j {
                    cartan[i][j] = a;
                    cartan[j][i] = b;
                }
            }
        }
        let bullet = match bullet {
            BulletSpec::Identity => (0..rank).collect(),
            BulletSpec::Explicit(p) => p,
            BulletSpec::Flip => return Err(CoxeterError::NoFlip(name.into())),
        };
        let mut seen = vec![false; rank];
        let is_perm = bullet.len() == rank
            && bullet
                .iter()
                .all(|&j| j < rank && !std::mem::replace(&mut seen[j], true));
        if !is_perm || (0..rank).any(|i| (0..rank).any(|j| m[bullet[i]][bullet[j]] != m[i][j])) {
            return Err(CoxeterError::NotAutomorphism(bullet));
        }

        let roots = close_roots(&cartan)?;
        let n_pos = roots.len() / 2;
        let index: HashMap<Vec<i64>, usize> = roots
            .iter()
            .cloned()
            .enumerate()
            .map(|(k, r)| (r, k))
            .collect();
        // Equal Cartan matrices give the same root numbering, so their
        // elements are interchangeable.
        let id = {
            let mut h = DefaultHasher::new();
            cartan.hash(&mut h);
            h.finish()
        };
        let generators: Vec<WeylElement> = (0..rank)
            .map(|i| {
                let perm: Box<[u16]> = roots
                    .iter()
                    .map(|r| {
                        let pairing: i64 = (0..rank).map(|j| cartan[i][j] * r[j]).sum();
                        let mut img = r.clone();
                        img[i] -= pairing;
                        index[&img] as u16
                    })
                    .collect();
                WeylElement {
                    system: id,
                    perm,
                    length: 1,
                }
            })
            .collect();
        // A root permutation for `•` exists when it preserves the Cartan matrix.
        let bullet_roots = (0..rank)
            .all(|i| (0..rank).all(|j| cartan[bullet[i]][bullet[j]] == cartan[i][j]))
            .then(|| {
                roots
                    .iter()
                    .map(|r| {
                        let mut img = vec![0i64; rank];
                        for (i, &c) in r.iter().enumerate() {
                            img[bullet[i]] = c;
                        }
                        index[&img] as u16
                    })
                    .collect()
            });
        let identity_perm: Box<[u16]> = (0..roots.len() as u16).collect();
        let mut sys = CoxeterSystem {
            id,
            name: name.to_string(),
            tag: TypeTag::Generic,
            rank,
            labels,
            coxeter_matrix: m.to_vec(),
            cartan,
            roots,
            n_pos,
            generators,
            bullet,
            bullet_roots,
            w0: WeylElement {
                system: id,
                perm: identity_perm,
                length: 0,
            },
            w0_twist: Vec::new(),
            degrees: None,
            perm_view: None,
        };
        let mut w0 = sys.identity();
        while let Some(i) = (0..rank).find(|&i| !sys.is_right_descent(&w0, i)) {
            w0 = sys.mul(&w0, &sys.generators[i]);
        }
        sys.w0_twist = (0..rank)
            .map(|i| {
                let c = sys.mul(&sys.mul(&w0, &sys.generators[i]), &w0);
                (0..rank)
                    .find(|&j| sys.generators[j] == c)
                    .expect("w0 normalises simple reflections")
            })
            .collect();
        sys.w0 = w0;
        Ok(sys)
    }

    /// Whether `perm` is induced by a linear map of the root lattice.
    fn is_linear_root_perm(&self, perm: &[u16]) -> bool {
        (0..self.roots.len()).all(|k| {
            let mut img = vec![0i64; self.rank];
            for (j, &c) in self.roots[k].iter().enumerate() {
                if c != 0 {
                    let s = &self.roots[perm[j] as usize];
                    for (t, v) in img.iter_mut().enumerate() {
                        *v += c * s[t];
                    }
                }
            }
            img == self.roots[perm[k] as usize]
        })
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn type_tag(&self) -> TypeTag {
        self.tag
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn coxeter_matrix(&self) -> &[Vec<u32>] {
        &self.coxeter_matrix
    }

    pub fn m(&self, i: usize, j: usize) -> u32 {
        self.coxeter_matrix[i][j]
    }

    pub fn cartan_matrix(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    /// Positive roots in simple-root coordinates, simple roots first.
    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.roots[..self.n_pos]
    }

    pub fn num_positive_roots(&self) -> usize {
        self.n_pos
    }

    pub fn root(&self, k: usize) -> &[i64] {
        &self.roots[k]
    }

    /// Matrix of `s_i` on the root lattice in simple-root coordinates
    /// (columns are images of simple roots).
    pub fn simple_action(&self, i: usize) -> Vec<Vec<i64>> {
        let mut mat = vec![vec![0i64; self.rank]; self.rank];
        for j in 0..self.rank {
            mat[j][j] = 1;
            mat[i][j] -= self.cartan[i][j];
        }
        mat
    }

    pub fn bullet(&self) -> &[usize] {
        &self.bullet
    }

    pub fn bullet_of(&self, i: usize) -> usize {
        self.bullet[i]
    }

    /// Smallest `δ ≥ 1` with `•^δ = 1`.
    pub fn bullet_order(&self) -> usize {
        let mut p: Vec<usize> = self.bullet.clone();
        let mut k = 1;
        while p.iter().enumerate().any(|(i, &j)| i != j) {
            p = p.iter().map(|&j| self.bullet[j]).collect();
            k += 1;
        }
        k
    }

    pub fn degrees(&self) -> Option<&[u64]> {
        self.degrees.as_deref()
    }

    /// Group order from the degrees when known.
    pub fn order(&self) -> Option<u128> {
        self.degrees
            .as_ref()
            .map(|d| d.iter().map(|&x| x as u128).product())
    }

    pub fn perm_view(&self) -> Option<&PermView> {
        self.perm_view.as_ref()
    }

    pub fn identity(&self) -> WeylElement {
        WeylElement {
            system: self.id,
            perm: (0..self.roots.len() as u16).collect(),
            length: 0,
        }
    }

    pub fn generator(&self, i: usize) -> &WeylElement {
        &self.generators[i]
    }

    pub fn generators(&self) -> &[WeylElement] {
        &self.generators
    }

    pub fn longest_element(&self) -> &WeylElement {
        &self.w0
    }

    /// `i ↦ i*` with `w0 s_i w0 = s_{i*}`.
    pub fn w0_twist(&self) -> &[usize] {
        &self.w0_twist
    }

    fn element_from_perm(&self, perm: Box<[u16]>) -> WeylElement {
        let length = perm[..self.n_pos]
            .iter()
            .filter(|&&p| p as usize >= self.n_pos)
            .count() as u32;
        WeylElement {
            system: self.id,
            perm,
            length,
        }
    }

    /// Product `ab`. Panics on elements of another system; see [`Self::multiply`].
    pub fn mul(&self, a: &WeylElement, b: &WeylElement) -> WeylElement {
        assert!(
            a.system == self.id && b.system == self.id,
            "element of another system"
        );
        let perm: Box<[u16]> = b.perm.iter().map(|&k| a.perm[k as usize]).collect();
        self.element_from_perm(perm)
    }

    pub fn multiply(&self, a: &WeylElement, b: &WeylElement) -> Result<WeylElement, CoxeterError> {
        if a.system != self.id || b.system != self.id {
            return Err(CoxeterError::MismatchedSystems);
        }
        Ok(self.mul(a, b))
    }

    pub fn inverse(&self, a: &WeylElement) -> WeylElement {
        let mut perm = vec![0u16; a.perm.len()].into_boxed_slice();
        for (k, &img) in a.perm.iter().enumerate() {
            perm[img as usize] = k as u16;
        }
        WeylElement {
            system: a.system,
            perm,
            length: a.length,
        }
    }

    pub fn invert(&self, a: &WeylElement) -> Result<WeylElement, CoxeterError> {
        if a.system != self.id {
            return Err(CoxeterError::MismatchedSystems);
        }
        Ok(self.inverse(a))
    }

    /// `s_i w`.
    pub fn left_mul_gen(&self, i: usize, w: &WeylElement) -> WeylElement {
        self.mul(&self.generators[i], w)
    }

    /// `w s_i`.
    pub fn right_mul_gen(&self, w: &WeylElement, i: usize) -> WeylElement {
        self.mul(w, &self.generators[i])
    }

    pub fn power(&self, w: &WeylElement, k: u64) -> WeylElement {
        let mut acc = self.identity();
        for _ in 0..k {
            acc = self.mul(&acc, w);
        }
        acc
    }

    /// Multiplicative order of `w`.
    pub fn order_of(&self, w: &WeylElement) -> u64 {
        let mut acc = w.clone();
        let mut k = 1;
        while !acc.is_identity() {
            acc = self.mul(&acc, w);
            k += 1;
        }
        k
    }

    pub fn length(&self, w: &WeylElement) -> usize {
        w.length()
    }

    /// `i ∈ car(w)`, i.e. `w(α_i) < 0`.
    pub fn is_right_descent(&self, w: &WeylElement, i: usize) -> bool {
        w.perm[i] as usize >= self.n_pos
    }

    /// `i ∈ cl(w)`, i.e. `w⁻¹(α_i) < 0`.
    pub fn is_left_descent(&self, w: &WeylElement, i: usize) -> bool {
        let pos = w
            .perm
            .iter()
            .position(|&p| p as usize == i)
            .expect("permutation");
        pos >= self.n_pos
    }

    pub fn left_descents(&self, w: &WeylElement) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        for (k, &img) in w.perm.iter().enumerate() {
            if (img as usize) < self.rank && k >= self.n_pos {
                out.insert(img as usize);
            }
        }
        out
    }

    pub fn right_descents(&self, w: &WeylElement) -> BTreeSet<usize> {
        (0..self.rank)
            .filter(|&i| self.is_right_descent(w, i))
            .collect()
    }

    /// Evaluates `s_{i1} ∘ … ∘ s_{ik}`.
    pub fn evaluate(&self, word: &Word) -> Result<WeylElement, CoxeterError> {
        let mut w = self.identity();
        for &i in &word.0 {
            if i >= self.rank {
                return Err(CoxeterError::IndexOutOfRange(i));
            }
            w = self.mul(&w, &self.generators[i]);
        }
        Ok(w)
    }

    /// Evaluation of a word already known to be in range.
    pub fn eval(&self, letters: &[usize]) -> WeylElement {
        letters
            .iter()
            .fold(self.identity(), |w, &i| self.mul(&w, &self.generators[i]))
    }

    /// ShortLex-minimal reduced word: repeatedly strip the smallest left descent.
    pub fn reduced_word(&self, w: &WeylElement) -> Word {
        let mut letters = Vec::with_capacity(w.length());
        let mut cur = w.clone();
        while !cur.is_identity() {
            let i = *self
                .left_descents(&cur)
                .iter()
                .next()
                .expect("nonidentity has a descent");
            letters.push(i);
            cur = self.left_mul_gen(i, &cur);
        }
        Word(letters)
    }

    pub fn is_reduced(&self, word: &Word) -> Result<bool, CoxeterError> {
        Ok(self.evaluate(word)?.length() == word.len())
    }

    /// Generators occurring in a (any) reduced word of `w`.
    pub fn support(&self, w: &WeylElement) -> BTreeSet<usize> {
        self.reduced_word(w).0.into_iter().collect()
    }

    /// `w^{•^k}`; `k` may be negative.
    pub fn bullet_apply(&self, w: &WeylElement, k: i64) -> WeylElement {
        let delta = self.bullet_order() as i64;
        let k = k.rem_euclid(delta);
        if k == 0 {
            return w.clone();
        }
        let mut map: Vec<usize> = (0..self.rank).collect();
        for _ in 0..k {
            map = map.iter().map(|&j| self.bullet[j]).collect();
        }
        if let Some(br) = &self.bullet_roots {
            // σ w σ⁻¹ with σ the root permutation of •, iterated k times.
            let mut perm: Vec<u16> = w.perm.to_vec();
            for _ in 0..k {
                let mut next = vec![0u16; perm.len()];
                for (x, &y) in perm.iter().enumerate() {
                    next[br[x] as usize] = br[y as usize];
                }
                perm = next;
            }
            return WeylElement {
                system: self.id,
                perm: perm.into_boxed_slice(),
                length: w.length,
            };
        }
        let word = self.reduced_word(w);
        self.eval(&word.0.iter().map(|&i| map[i]).collect::<Vec<_>>())
    }

    /// Twisted conjugate `a⁻¹ w a^•`.
    pub fn bullet_conjugate(&self, w: &WeylElement, a: &WeylElement) -> WeylElement {
        self.mul(&self.mul(&self.inverse(a), w), &self.bullet_apply(a, 1))
    }

    /// Elementary move `s_i w s_{i•}`.
    pub fn elementary_move(&self, w: &WeylElement, i: usize) -> WeylElement {
        self.mul(&self.left_mul_gen(i, w), &self.generators[self.bullet[i]])
    }

    pub fn parse_letter(&self, s: &str) -> Result<usize, CoxeterError> {
        let s = s.trim();
        self.labels
            .iter()
            .position(|l| l == s)
            .ok_or_else(|| CoxeterError::BadLetter(s.to_string()))
    }

    /// Parses dotted label words; `""` and `"e"` denote the empty word.
    pub fn parse_word(&self, s: &str) -> Result<Word, CoxeterError> {
        let s = s.trim();
        if s.is_empty() || s == "e" {
            return Ok(Word::default());
        }
        s.split('.')
            .map(|t| self.parse_letter(t))
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }

    pub fn parse_element(&self, s: &str) -> Result<WeylElement, CoxeterError> {
        self.evaluate(&self.parse_word(s)?)
    }

    pub fn format_word(&self, word: &Word) -> String {
        word.0
            .iter()
            .map(|&i| self.labels[i].as_str())
            .collect::<Vec<_>>()
            .join(".")
    }

    /// Canonical text form: the dotted ShortLex word.
    pub fn format_element(&self, w: &WeylElement) -> String {
        self.format_word(&self.reduced_word(w))
    }

    /// Sort key `(length, ShortLex word)`.
    pub fn shortlex_key(&self, w: &WeylElement) -> (usize, Word) {
        (w.length(), self.reduced_word(w))
    }

    /// Builds an element from a root permutation after checking linearity.
    pub fn element_from_root_perm(&self, perm: Vec<u16>) -> Result<WeylElement, CoxeterError> {
        if perm.len() != self.roots.len() || !self.is_linear_root_perm(&perm) {
            return Err(CoxeterError::NotInGroup);
        }
        // Linear root permutations may still involve a diagram symmetry;
        // reject those by rebuilding from the reduced word.
        let cand = self.element_from_perm(perm.into_boxed_slice());
        let rebuilt = self.eval(&self.reduced_word(&cand).0);
        if rebuilt != cand {
            return Err(CoxeterError::NotInGroup);
        }
        Ok(cand)
    }
}

/// Positive roots closed under simple reflections, followed by negatives.
fn close_roots(cartan: &[Vec<i64>]) -> Result<Vec<Vec<i64>>, CoxeterError> {
    let rank = cartan.len();
    let mut pos: Vec<Vec<i64>> = Vec::new();
    let mut seen: HashMap<Vec<i64>, ()> = HashMap::new();
    let mut queue = VecDeque::new();
    for i in 0..rank {
        let mut e = vec![0i64; rank];
        e[i] = 1;
        seen.insert(e.clone(), ());
        queue.push_back(e);
    }
    while let Some(r) = queue.pop_front() {
        pos.push(r.clone());
        if pos.len() > ROOT_CAP {
            return Err(CoxeterError::Infinite);
        }
        for (i, row) in cartan.iter().enumerate() {
            let pairing: i64 = row.iter().zip(&r).map(|(a, b)| a * b).sum();
            if pairing == 0 {
                continue;
            }
            let mut img = r.clone();
            img[i] -= pairing;
            if img.iter().all(|&c| c >= 0) && img.iter().any(|&c| c > 0) && !seen.contains_key(&img)
            {
                seen.insert(img.clone(), ());
                queue.push_back(img);
            }
        }
    }
    pos.sort_by(|a, b| {
        let ha: i64 = a.iter().sum();
        let hb: i64 = b.iter().sum();
        ha.cmp(&hb).then_with(|| b.cmp(a))
    });
    let neg: Vec<Vec<i64>> = pos.iter().map(|r| r.iter().map(|c| -c).collect()).collect();
    pos.extend(neg);
    Ok(pos)
}
