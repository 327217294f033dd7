//! Twisted conjugacy classes `{a⁻¹ w a^•}`, their minimal-length subsets,
//! ellipticity, stabilizers `W_w = {z : z⁻¹ w z^• = w}`, and the explicit
//! representatives and stabilizer generators for the signed-permutation types.

use crate::coxeter::{
    CoxeterError, CoxeterSystem, ElementTable, PermViewKind, TypeTag, WeylElement,
};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConjError {
    #[error(transparent)]
    Coxeter(#[from] CoxeterError),
    #[error("invalid partition signature: {0}")]
    InvalidPartition(String),
    #[error("system {0} has no signed-permutation realisation")]
    NotSignedType(String),
}

/// A full twisted conjugacy class.
#[derive(Debug, Clone)]
pub struct BulletConjClass {
    system_id: u64,
    /// Sorted by `(length, ShortLex word)`.
    elements: Vec<WeylElement>,
    min_length: usize,
    c_min: Vec<WeylElement>,
}

impl BulletConjClass {
    fn from_elements(sys: &CoxeterSystem, elements: Vec<WeylElement>) -> Self {
        let mut keyed: Vec<_> = elements
            .into_iter()
            .map(|w| (sys.shortlex_key(&w), w))
            .collect();
        keyed.sort_by(|a, b| a.0.cmp(&b.0));
        let elements: Vec<WeylElement> = keyed.into_iter().map(|(_, w)| w).collect();
        let min_length = elements[0].length();
        let c_min = elements
            .iter()
            .take_while(|w| w.length() == min_length)
            .cloned()
            .collect();
        BulletConjClass {
            system_id: sys.id(),
            elements,
            min_length,
            c_min,
        }
    }

    pub fn elements(&self) -> &[WeylElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn min_length(&self) -> usize {
        self.min_length
    }

    pub fn c_min(&self) -> &[WeylElement] {
        &self.c_min
    }

    /// ShortLex-least element of minimal length.
    pub fn representative(&self) -> &WeylElement {
        &self.c_min[0]
    }

    pub fn contains(&self, w: &WeylElement) -> bool {
        w.system_id() == self.system_id && self.elements.contains(w)
    }
}

/// Closure of `{w}` under `w ↦ s_i w s_{i•}`.
pub fn bullet_class(sys: &CoxeterSystem, w: &WeylElement) -> BulletConjClass {
    let mut seen: HashSet<WeylElement> = HashSet::from([w.clone()]);
    let mut queue = VecDeque::from([w.clone()]);
    while let Some(x) = queue.pop_front() {
        for i in 0..sys.rank() {
            let y = sys.elementary_move(&x, i);
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    BulletConjClass::from_elements(sys, seen.into_iter().collect())
}

/// Partition of `W` into twisted classes, ordered by representative.
pub fn all_classes(sys: &CoxeterSystem, table: &ElementTable) -> Vec<BulletConjClass> {
    let mut class_of = vec![usize::MAX; table.len()];
    let mut members: Vec<Vec<usize>> = Vec::new();
    for start in 0..table.len() {
        if class_of[start] != usize::MAX {
            continue;
        }
        let id = members.len();
        class_of[start] = id;
        let mut list = vec![start];
        let mut head = 0;
        while head < list.len() {
            let x = list[head];
            head += 1;
            for i in 0..sys.rank() {
                let y = table.right_gen(table.left_gen(i, x), sys.bullet_of(i));
                if class_of[y] == usize::MAX {
                    class_of[y] = id;
                    list.push(y);
                }
            }
        }
        members.push(list);
    }
    members
        .into_iter()
        .map(|ids| {
            BulletConjClass::from_elements(
                sys,
                ids.into_iter().map(|k| table.element(k).clone()).collect(),
            )
        })
        .collect()
}

/// Smallest `•`-stable subset of `I` containing `set`.
pub fn bullet_closure(sys: &CoxeterSystem, set: &BTreeSet<usize>) -> BTreeSet<usize> {
    let mut out = set.clone();
    loop {
        let next: BTreeSet<usize> = out
            .iter()
            .map(|&i| sys.bullet_of(i))
            .chain(out.iter().copied())
            .collect();
        if next == out {
            return out;
        }
        out = next;
    }
}

/// True iff no element lies in a proper `•`-stable standard parabolic subgroup.
pub fn is_bullet_elliptic(sys: &CoxeterSystem, class: &BulletConjClass) -> bool {
    class
        .elements()
        .iter()
        .all(|w| bullet_closure(sys, &sys.support(w)).len() == sys.rank())
}

/// Whether `w` reaches a strictly shorter element through elementary moves
/// that never increase length. Minimal-length elements return `false`.
pub fn descends_by_moves(sys: &CoxeterSystem, w: &WeylElement) -> bool {
    let mut seen: HashSet<WeylElement> = HashSet::from([w.clone()]);
    let mut queue = VecDeque::from([w.clone()]);
    while let Some(x) = queue.pop_front() {
        for i in 0..sys.rank() {
            let y = sys.elementary_move(&x, i);
            if y.length() < w.length() {
                return true;
            }
            if y.length() == w.length() && seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    false
}

/// `W_w` together with a generating set.
#[derive(Debug, Clone)]
pub struct StabilizerGroup {
    base: WeylElement,
    /// Sorted by `(length, ShortLex word)`.
    elements: Vec<WeylElement>,
    generators: Vec<(WeylElement, String)>,
}

impl StabilizerGroup {
    pub fn base(&self) -> &WeylElement {
        &self.base
    }

    pub fn elements(&self) -> &[WeylElement] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Generators with provenance tags.
    pub fn generators(&self) -> &[(WeylElement, String)] {
        &self.generators
    }

    pub fn contains(&self, z: &WeylElement) -> bool {
        self.elements
            .binary_search_by(|x| x.length().cmp(&z.length()))
            .is_ok()
            && self.elements.contains(z)
    }

    /// Coefficients of `Σ t^{l(z)}` indexed by exponent.
    pub fn length_generating_function(&self) -> Vec<u64> {
        let max = self.elements.iter().map(|z| z.length()).max().unwrap_or(0);
        let mut coeffs = vec![0u64; max + 1];
        for z in &self.elements {
            coeffs[z.length()] += 1;
        }
        coeffs
    }

    pub fn is_abelian(&self, sys: &CoxeterSystem) -> bool {
        self.generators.iter().all(|(a, _)| {
            self.generators
                .iter()
                .all(|(b, _)| sys.mul(a, b) == sys.mul(b, a))
        })
    }
}

/// Whether `z⁻¹ w z^• = w`, i.e. `w z^• = z w`.
pub fn stabilizes(sys: &CoxeterSystem, z: &WeylElement, w: &WeylElement) -> bool {
    sys.mul(w, &sys.bullet_apply(z, 1)) == sys.mul(z, w)
}

/// `W_w` by a scan of the whole group; generators are chosen greedily in
/// table order and tagged `"greedy"`.
pub fn stabilizer(sys: &CoxeterSystem, table: &ElementTable, w: &WeylElement) -> StabilizerGroup {
    let members: Vec<usize> = (0..table.len())
        .filter(|&k| {
            let z = table.element(k);
            sys.mul(w, table.element(table.bullet(k))) == sys.mul(z, w)
        })
        .collect();
    let mut generated: BTreeSet<usize> = BTreeSet::from([table.identity()]);
    let mut gens: Vec<usize> = Vec::new();
    for &k in &members {
        if !generated.contains(&k) {
            gens.push(k);
            generated = generate_subgroup(table, &gens);
        }
    }
    StabilizerGroup {
        base: w.clone(),
        elements: members.iter().map(|&k| table.element(k).clone()).collect(),
        generators: gens
            .into_iter()
            .map(|k| (table.element(k).clone(), "greedy".to_string()))
            .collect(),
    }
}

/// Subgroup generated by table indices, by closure under right multiplication.
pub fn generate_subgroup(table: &ElementTable, gens: &[usize]) -> BTreeSet<usize> {
    let mut seen = BTreeSet::from([table.identity()]);
    let mut queue = VecDeque::from([table.identity()]);
    while let Some(x) = queue.pop_front() {
        for &g in gens {
            let y = table.mul(x, g);
            if seen.insert(y) {
                queue.push_back(y);
            }
        }
    }
    seen
}

/// Parts `p_1 ≥ p_2 ≥ … ≥ p_σ > 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PartitionSignature {
    parts: Vec<usize>,
}

impl PartitionSignature {
    pub fn new(parts: Vec<usize>) -> Result<Self, ConjError> {
        if parts.is_empty() || parts.contains(&0) {
            return Err(ConjError::InvalidPartition(format!(
                "{parts:?} has a zero or no part"
            )));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(ConjError::InvalidPartition(format!(
                "{parts:?} is not weakly decreasing"
            )));
        }
        Ok(PartitionSignature { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Part `p_r` for `r` in `1..=σ`.
    pub fn part(&self, r: usize) -> usize {
        self.parts[r - 1]
    }

    pub fn sigma(&self) -> usize {
        self.parts.len()
    }

    pub fn n(&self) -> usize {
        self.parts.iter().sum()
    }

    /// `p_{<r} = p_1 + … + p_{r-1}` for `r` in `1..=σ+1`.
    pub fn before(&self, r: usize) -> usize {
        self.parts[..r - 1].iter().sum()
    }

    /// Sizes `m_1, …, m_e` of the maximal runs of equal parts.
    pub fn multiplicities(&self) -> Vec<usize> {
        let mut out: Vec<usize> = Vec::new();
        for (k, p) in self.parts.iter().enumerate() {
            if k > 0 && self.parts[k - 1] == *p {
                *out.last_mut().expect("run started") += 1;
            } else {
                out.push(1);
            }
        }
        out
    }

    /// All partitions of `n`, in reverse lexicographic order.
    pub fn all(n: usize) -> Vec<PartitionSignature> {
        fn rec(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<PartitionSignature>) {
            if n == 0 {
                out.push(PartitionSignature { parts: cur.clone() });
                return;
            }
            for p in (1..=max.min(n)).rev() {
                cur.push(p);
                rec(n - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, n, &mut Vec::new(), &mut out);
        out
    }
}

/// Signed permutation of `0..2n` for the cycle `w_r` (`r` in `1..=σ`).
///
/// With `a_k = p_{<r} + k` the cycle runs `a_{p-1} → … → a_0 → J(a_{p-1}) → … →
/// J(a_0) → a_{p-1}`, so that `ε_{a_k} ↦ ε_{a_{k-1}}` and `ε_{a_0} ↦ -ε_{a_{p-1}}`.
pub fn cycle_perm(p: &PartitionSignature, r: usize) -> Vec<usize> {
    let n = p.n();
    let j = |x: usize| 2 * n - 1 - x;
    let start = p.before(r);
    let len = p.part(r);
    let mut perm: Vec<usize> = (0..2 * n).collect();
    for k in 0..len {
        let a = start + k;
        let target = if k == 0 { j(start + len - 1) } else { a - 1 };
        perm[a] = target;
        perm[j(a)] = j(target);
    }
    perm
}

/// Involution `h_r` exchanging blocks `r` and `r+1` (requires `p_r = p_{r+1}`).
pub fn block_swap_perm(p: &PartitionSignature, r: usize) -> Vec<usize> {
    let n = p.n();
    let j = |x: usize| 2 * n - 1 - x;
    let (a, b) = (p.before(r), p.before(r + 1));
    let mut perm: Vec<usize> = (0..2 * n).collect();
    for k in 0..p.part(r) {
        perm[a + k] = b + k;
        perm[b + k] = a + k;
        perm[j(a + k)] = j(b + k);
        perm[j(b + k)] = j(a + k);
    }
    perm
}

/// `(a ∘ b)(x) = a(b(x))`.
pub fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&x| a[x]).collect()
}

pub fn invert_perm(a: &[usize]) -> Vec<usize> {
    let mut out = vec![0; a.len()];
    for (x, &y) in a.iter().enumerate() {
        out[y] = x;
    }
    out
}

/// Whether the system is realised by signed permutations with the D parity
/// constraint.
fn signed_kind(sys: &CoxeterSystem) -> Result<PermViewKind, ConjError> {
    match sys.perm_view().map(|v| v.kind()) {
        Some(k @ (PermViewKind::SignedB | PermViewKind::SignedD)) => Ok(k),
        _ => Err(ConjError::NotSignedType(sys.name().to_string())),
    }
}

fn check_partition(sys: &CoxeterSystem, p: &PartitionSignature) -> Result<PermViewKind, ConjError> {
    let kind = signed_kind(sys)?;
    if p.n() != sys.perm_view().expect("signed").n() {
        return Err(ConjError::InvalidPartition(format!(
            "{:?} does not sum to {}",
            p.parts(),
            sys.rank()
        )));
    }
    if kind == PermViewKind::SignedD && p.sigma() % 2 == 1 {
        return Err(ConjError::InvalidPartition(format!(
            "{:?} has an odd number of parts",
            p.parts()
        )));
    }
    Ok(kind)
}

/// The element `w = w_1 ⋯ w_σ` with its cycle factors.
#[derive(Debug, Clone)]
pub struct ClassicalElement {
    pub partition: PartitionSignature,
    pub w: WeylElement,
    pub perm: Vec<usize>,
    /// Signed permutations of the factors `w_1, …, w_σ`.
    pub factor_perms: Vec<Vec<usize>>,
}

pub fn classical_w(
    sys: &CoxeterSystem,
    p: &PartitionSignature,
) -> Result<ClassicalElement, ConjError> {
    check_partition(sys, p)?;
    let factor_perms: Vec<Vec<usize>> = (1..=p.sigma()).map(|r| cycle_perm(p, r)).collect();
    let perm = factor_perms
        .iter()
        .fold((0..2 * p.n()).collect::<Vec<_>>(), |acc, f| {
            compose(&acc, f)
        });
    let w = sys.perm_view().expect("signed").from_perm(sys, &perm)?;
    Ok(ClassicalElement {
        partition: p.clone(),
        w,
        perm,
        factor_perms,
    })
}

/// A stabilizer generator with its name (`"w_2"`, `"h'_1"`, …).
#[derive(Debug, Clone)]
pub struct NamedGenerator {
    pub name: String,
    pub perm: Vec<usize>,
    pub element: WeylElement,
}

/// Named stabilizer generators of `classical_w(p)`.
///
/// Type B/C: `w_σ`, `w_r` when `p_r > p_{r+1}`, `h_r` when `p_r = p_{r+1}`.
/// Type D (elements of the even subgroup): `w'_r = w_r w_σ` replaces `w_r`, and
/// when `p_{σ-1} = p_σ` the pair `w'_{σ-1}` is replaced by `h'_{σ-1}`, the
/// conjugate of `h_{σ-1}` by the cycle `w_σ`. With the cycle orientation used
/// here (`w_r` is the inverse of the cycle read off left to right) that
/// conjugate is `w_σ h_{σ-1} w_σ⁻¹`.
pub fn classical_generators(
    sys: &CoxeterSystem,
    p: &PartitionSignature,
) -> Result<Vec<NamedGenerator>, ConjError> {
    let kind = check_partition(sys, p)?;
    let view = sys.perm_view().expect("signed");
    let sigma = p.sigma();
    let w_sigma = cycle_perm(p, sigma);
    let mut out: Vec<(String, Vec<usize>)> = Vec::new();
    match kind {
        PermViewKind::SignedB => {
            out.push((format!("w_{sigma}"), w_sigma));
            for r in 1..sigma {
                if p.part(r) > p.part(r + 1) {
                    out.push((format!("w_{r}"), cycle_perm(p, r)));
                }
            }
            for r in 1..sigma {
                if p.part(r) == p.part(r + 1) {
                    out.push((format!("h_{r}"), block_swap_perm(p, r)));
                }
            }
        }
        _ => {
            let primed = |r: usize| compose(&cycle_perm(p, r), &w_sigma);
            out.push((format!("w'_{sigma}"), primed(sigma)));
            let tail_equal = sigma >= 2 && p.part(sigma - 1) == p.part(sigma);
            let last_w = if tail_equal { sigma - 2 } else { sigma - 1 };
            for r in 1..=last_w {
                if p.part(r) > p.part(r + 1) {
                    out.push((format!("w'_{r}"), primed(r)));
                }
            }
            if tail_equal {
                let h = block_swap_perm(p, sigma - 1);
                let conj = compose(&compose(&w_sigma, &h), &invert_perm(&w_sigma));
                out.push((format!("h'_{}", sigma - 1), conj));
            }
            let last_h = if tail_equal { sigma - 1 } else { sigma - 2 };
            for r in 1..=last_h.min(sigma - 1) {
                if p.part(r) == p.part(r + 1) {
                    out.push((format!("h_{r}"), block_swap_perm(p, r)));
                }
            }
        }
    }
    out.into_iter()
        .map(|(name, perm)| {
            let element = view.from_perm(sys, &perm)?;
            Ok(NamedGenerator {
                name,
                perm,
                element,
            })
        })
        .collect()
}

/// Aggregate facts about a class used by the surjectivity harness.
#[derive(Debug, Clone, Serialize)]
pub struct LoopImageHypotheses {
    pub elliptic: bool,
    pub c_min_size: usize,
    pub stabilizer_order: usize,
    /// Non-elliptic classes are skipped by the harness.
    pub skip: bool,
}

pub fn verify_12a_hypotheses(
    sys: &CoxeterSystem,
    table: &ElementTable,
    class: &BulletConjClass,
) -> LoopImageHypotheses {
    let elliptic = is_bullet_elliptic(sys, class);
    LoopImageHypotheses {
        elliptic,
        c_min_size: class.c_min().len(),
        stabilizer_order: stabilizer(sys, table, class.representative()).order(),
        skip: !elliptic,
    }
}

/// Per-class summary row.
#[derive(Debug, Clone, Serialize)]
pub struct ClassReport {
    pub representative: String,
    pub size: usize,
    pub min_length: usize,
    pub c_min_size: usize,
    pub elliptic: bool,
    pub stabilizer_order: usize,
    pub stabilizer_poincare: Vec<u64>,
}

pub fn class_report(
    sys: &CoxeterSystem,
    table: &ElementTable,
    class: &BulletConjClass,
) -> ClassReport {
    let stab = stabilizer(sys, table, class.representative());
    ClassReport {
        representative: sys.format_element(class.representative()),
        size: class.len(),
        min_length: class.min_length(),
        c_min_size: class.c_min().len(),
        elliptic: is_bullet_elliptic(sys, class),
        stabilizer_order: stab.order(),
        stabilizer_poincare: stab.length_generating_function(),
    }
}

/// Cycle type of a signed permutation: `(length of the cycle on ±ε, negative?)`
/// multiset, used to cross-check class enumeration against partitions.
pub fn signed_cycle_type(perm: &[usize]) -> BTreeMap<(usize, bool), usize> {
    let deg = perm.len();
    let n = deg / 2;
    let mut seen = vec![false; deg];
    let mut out = BTreeMap::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut x = start;
        let mut len = 0;
        let mut negative = false;
        loop {
            seen[x] = true;
            seen[deg - 1 - x] = true;
            x = perm[x];
            len += 1;
            if x == deg - 1 - start {
                negative = true;
            }
            if x == start {
                break;
            }
        }
        let cyc = if negative { len / 2 } else { len };
        *out.entry((cyc, negative)).or_insert(0) += 1;
    }
    out
}

/// Returns `Ok(())` when `sys` is a signed-permutation type.
pub fn require_signed(sys: &CoxeterSystem) -> Result<(), ConjError> {
    if matches!(sys.type_tag(), TypeTag::B | TypeTag::C | TypeTag::D) {
        Ok(())
    } else {
        Err(ConjError::NotSignedType(sys.name().to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn d4() -> (CoxeterSystem, ElementTable) {
        let s = CoxeterSystem::d4_trivalent();
        let t = ElementTable::new(&s);
        (s, t)
    }

    #[test]
    fn small_classes() {
        let a1 = CoxeterSystem::parse("A1").unwrap();
        assert_eq!(bullet_class(&a1, a1.generator(0)).len(), 1);
        let a2 = CoxeterSystem::parse("A2").unwrap();
        let c = bullet_class(&a2, &a2.eval(&[0, 1]));
        assert_eq!(c.elements(), &[a2.eval(&[0, 1]), a2.eval(&[1, 0])]);
        // Oracle: all a⁻¹ w a.
        let t = ElementTable::new(&a2);
        let w = a2.eval(&[0, 1]);
        let brute: BTreeSet<_> = t
            .elements()
            .iter()
            .map(|a| a2.bullet_conjugate(&w, a))
            .collect();
        assert_eq!(brute.len(), c.len());
        assert!(brute.iter().all(|x| c.contains(x)));
        assert!(!is_bullet_elliptic(
            &a2,
            &bullet_class(&a2, a2.generator(0))
        ));
        assert!(!is_bullet_elliptic(&a2, &bullet_class(&a2, &a2.identity())));
    }

    #[test]
    fn d4_class_and_stabilizer() {
        let (s, t) = d4();
        let w = s.eval(&[0, 1, 0, 2, 0, 3]);
        let c = bullet_class(&s, &w);
        assert_eq!(c.len(), 12);
        assert_eq!(c.c_min().len(), 12);
        assert!(c
            .elements()
            .iter()
            .all(|x| x.length() == 6 && s.order_of(x) == 4));
        assert!(is_bullet_elliptic(&s, &c));
        let v = s.eval(&[1, 0, 2, 0, 3, 0]);
        let stab = stabilizer(&s, &t, &v);
        assert_eq!(stab.order(), 16);
        assert!(!stab.is_abelian(&s));
        assert_eq!(
            stab.length_generating_function(),
            vec![1, 0, 1, 0, 1, 0, 10, 0, 1, 0, 1, 0, 1]
        );
        let h = verify_12a_hypotheses(&s, &t, &c);
        assert!(h.elliptic && !h.skip);
        assert_eq!((h.c_min_size, h.stabilizer_order), (12, 16));
    }

    #[test]
    fn non_minimal_elements_descend() {
        for spec in ["A3", "B3", "D4", "A3*", "B4"] {
            let s = CoxeterSystem::parse(spec).unwrap();
            let t = ElementTable::new(&s);
            for c in all_classes(&s, &t) {
                for w in c.elements() {
                    assert_eq!(
                        descends_by_moves(&s, w),
                        w.length() > c.min_length(),
                        "{spec}"
                    );
                }
            }
        }
    }

    #[test]
    fn stabilizer_order_divides_group_order() {
        for spec in ["A3*", "B3", "D4"] {
            let s = CoxeterSystem::parse(spec).unwrap();
            let t = ElementTable::new(&s);
            for c in all_classes(&s, &t) {
                let w = c.representative();
                let st = stabilizer(&s, &t, w);
                assert_eq!(t.len() % st.order(), 0);
                assert_eq!(c.len() * st.order(), t.len(), "orbit-stabilizer");
                if s.bullet_apply(w, 1) == *w {
                    assert!(st.contains(w));
                }
                let gens: Vec<usize> = st.generators().iter().map(|(g, _)| t.index_of(g)).collect();
                assert_eq!(generate_subgroup(&t, &gens).len(), st.order());
            }
        }
    }

    #[test]
    fn b_classes_match_signed_cycle_types() {
        // Classes of W(B_n) correspond to pairs of partitions; check the count.
        let s = CoxeterSystem::parse("B3").unwrap();
        let t = ElementTable::new(&s);
        let classes = all_classes(&s, &t);
        assert_eq!(classes.len(), 10);
        let view = s.perm_view().unwrap();
        for c in &classes {
            let types: BTreeSet<_> = c
                .elements()
                .iter()
                .map(|w| signed_cycle_type(&view.to_perm(&s, w)))
                .collect();
            assert_eq!(types.len(), 1);
            let ty = types.into_iter().next().unwrap();
            let all_negative = ty.keys().all(|&(_, neg)| neg);
            assert_eq!(all_negative, is_bullet_elliptic(&s, c));
        }
    }

    #[test]
    fn partitions() {
        assert_eq!(PartitionSignature::all(4).len(), 5);
        assert_eq!(PartitionSignature::all(5).len(), 7);
        let p = PartitionSignature::new(vec![3, 3, 2, 1, 1]).unwrap();
        assert_eq!(p.multiplicities(), vec![2, 1, 2]);
        assert_eq!(p.before(3), 6);
        assert!(PartitionSignature::new(vec![1, 2]).is_err());
        assert!(PartitionSignature::new(vec![2, 0]).is_err());
    }

    #[test]
    fn classical_examples() {
        let b2 = CoxeterSystem::parse("B2").unwrap();
        let e = classical_w(&b2, &PartitionSignature::new(vec![2]).unwrap()).unwrap();
        assert!(is_bullet_elliptic(&b2, &bullet_class(&b2, &e.w)));
        let d4 = CoxeterSystem::parse("D4").unwrap();
        let e = classical_w(&d4, &PartitionSignature::new(vec![3, 1]).unwrap()).unwrap();
        assert!(is_bullet_elliptic(&d4, &bullet_class(&d4, &e.w)));
        assert!(classical_w(&d4, &PartitionSignature::new(vec![2, 1, 1]).unwrap()).is_err());
        assert!(classical_w(&d4, &PartitionSignature::new(vec![2, 1]).unwrap()).is_err());
    }

    proptest! {
        #[test]
        fn classes_are_closed(word in proptest::collection::vec(0usize..3, 0..12)) {
            let s = CoxeterSystem::parse("A3*").unwrap();
            let w = s.eval(&word);
            let c = bullet_class(&s, &w);
            prop_assert!(c.contains(&w));
            for x in c.elements() {
                for i in 0..3 {
                    prop_assert!(c.contains(&s.elementary_move(x, i)));
                }
            }
            prop_assert!(c.c_min().iter().all(|x| x.length() == c.min_length()));
        }
    }
}
