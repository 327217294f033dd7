//! The graph `Γ_C` on a minimal-length set, based paths in it, the rewriting
//! moves, and the loop homomorphism into the stabilizer `W_w`.
//!
//! A step `(i, +)` from `w` is allowed when `i ∈ cl(w)`, a step `(i, −)` when
//! `i• ∈ car(w)`; both lead to `s_i w s_{i•}` and must preserve length.

mod builtin;
mod search;

pub use builtin::{
    d4_example, iota_b, iota_b_prime, iota_d_double_prime, iota_d_tilde, BuiltinError, D4Example,
};
pub use search::{equivalence_search, replay, SearchOutcome};

use crate::braid::{BraidElement, BraidGroup};
use crate::conj::{generate_subgroup, stabilizer, BulletConjClass};
use crate::coxeter::{CoxeterError, CoxeterSystem, ElementTable, WeylElement};
use serde::Serialize;
use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PathError {
    #[error(transparent)]
    Coxeter(#[from] CoxeterError),
    #[error("step {index} ({label}) is not an edge of the graph")]
    InvalidStep { index: usize, label: String },
    #[error("move {kind:?} does not match at position {position}")]
    PatternMismatch { position: usize, kind: MoveKind },
    #[error("paths cannot be concatenated: endpoint differs from base")]
    NotComposable,
    #[error("the graph is disconnected")]
    Disconnected,
    #[error("malformed path literal `{0}`")]
    Malformed(String),
}

/// Signed edge label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Step {
    pub gen: usize,
    pub positive: bool,
}

impl Step {
    pub fn pos(gen: usize) -> Self {
        Step {
            gen,
            positive: true,
        }
    }

    pub fn neg(gen: usize) -> Self {
        Step {
            gen,
            positive: false,
        }
    }

    pub fn inverse(self) -> Self {
        Step {
            gen: self.gen,
            positive: !self.positive,
        }
    }
}

/// `[w_1; *_1, …, *_{t-1}]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Path {
    pub base: WeylElement,
    pub steps: Vec<Step>,
}

impl Path {
    pub fn new(base: WeylElement, steps: Vec<Step>) -> Self {
        Path { base, steps }
    }

    pub fn empty(base: WeylElement) -> Self {
        Path {
            base,
            steps: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

/// Target of a single step, if it is an edge.
pub fn step_target(sys: &CoxeterSystem, w: &WeylElement, step: Step) -> Option<WeylElement> {
    let allowed = if step.positive {
        sys.is_left_descent(w, step.gen)
    } else {
        sys.is_right_descent(w, sys.bullet_of(step.gen))
    };
    if !allowed {
        return None;
    }
    let next = sys.elementary_move(w, step.gen);
    (next.length() == w.length()).then_some(next)
}

/// Vertices `w_1, …, w_t` visited by a valid path.
pub fn vertices(sys: &CoxeterSystem, path: &Path) -> Result<Vec<WeylElement>, PathError> {
    let mut out = Vec::with_capacity(path.len() + 1);
    out.push(path.base.clone());
    for (index, &step) in path.steps.iter().enumerate() {
        let cur = out.last().expect("nonempty");
        let next = step_target(sys, cur, step).ok_or_else(|| PathError::InvalidStep {
            index,
            label: format_step(sys, step),
        })?;
        out.push(next);
    }
    Ok(out)
}

pub fn validate(sys: &CoxeterSystem, path: &Path) -> Result<(), PathError> {
    vertices(sys, path).map(|_| ())
}

pub fn endpoint(sys: &CoxeterSystem, path: &Path) -> Result<WeylElement, PathError> {
    Ok(vertices(sys, path)?.pop().expect("nonempty"))
}

/// `z_ι = s_{i_1} ⋯ s_{i_{t-1}}` of a valid path.
pub fn z_of_path(sys: &CoxeterSystem, path: &Path) -> Result<WeylElement, PathError> {
    validate(sys, path)?;
    Ok(sys.eval(&path.steps.iter().map(|s| s.gen).collect::<Vec<_>>()))
}

/// `z̃_ι = ŝ_{i_1}^{ε_1} ⋯` of a valid path.
pub fn braid_of_path(sys: &CoxeterSystem, path: &Path) -> Result<BraidElement, PathError> {
    validate(sys, path)?;
    let letters: Vec<(usize, bool)> = path.steps.iter().map(|s| (s.gen, s.positive)).collect();
    Ok(BraidGroup::new(sys).from_signed_word(&letters))
}

pub fn concat(sys: &CoxeterSystem, a: &Path, b: &Path) -> Result<Path, PathError> {
    if endpoint(sys, a)? != b.base {
        return Err(PathError::NotComposable);
    }
    Ok(Path {
        base: a.base.clone(),
        steps: a.steps.iter().chain(&b.steps).copied().collect(),
    })
}

/// The same edges traversed backwards.
pub fn reverse(sys: &CoxeterSystem, path: &Path) -> Result<Path, PathError> {
    Ok(Path {
        base: endpoint(sys, path)?,
        steps: path.steps.iter().rev().map(|s| s.inverse()).collect(),
    })
}

/// Rewriting moves. `Cancel*` remove an adjacent pair `i, ī` or `ī, i`;
/// `Braid*` replace an alternating block of `m(i,j)` letters of one sign by the
/// other alternating block; `Insert*` are the inverses of the cancellations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum MoveKind {
    CancelPosNeg,
    CancelNegPos,
    BraidPositive,
    BraidNegative,
    InsertPosNeg(usize),
    InsertNegPos(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Move {
    pub position: usize,
    pub kind: MoveKind,
}

impl Move {
    /// The move undoing this one, given the path it was applied to.
    pub fn undo(&self, before: &Path) -> Move {
        let kind = match self.kind {
            MoveKind::CancelPosNeg => MoveKind::InsertPosNeg(before.steps[self.position].gen),
            MoveKind::CancelNegPos => MoveKind::InsertNegPos(before.steps[self.position].gen),
            MoveKind::InsertPosNeg(_) => MoveKind::CancelPosNeg,
            MoveKind::InsertNegPos(_) => MoveKind::CancelNegPos,
            k => k,
        };
        Move {
            position: self.position,
            kind,
        }
    }
}

/// Applies one move and checks that the result is still a valid path.
pub fn apply_move(
    sys: &CoxeterSystem,
    path: &Path,
    position: usize,
    kind: MoveKind,
) -> Result<Path, PathError> {
    let verts = vertices(sys, path)?;
    apply_move_at(sys, path, &verts, position, kind)
}

/// As [`apply_move`], given the vertices of `path`; only the rewritten window
/// is re-walked.
pub(crate) fn apply_move_at(
    sys: &CoxeterSystem,
    path: &Path,
    verts: &[WeylElement],
    position: usize,
    kind: MoveKind,
) -> Result<Path, PathError> {
    let mismatch = PathError::PatternMismatch { position, kind };
    let steps = &path.steps;
    let mut out = steps.clone();
    match kind {
        MoveKind::CancelPosNeg | MoveKind::CancelNegPos => {
            let first_positive = kind == MoveKind::CancelPosNeg;
            if position + 1 >= steps.len() {
                return Err(mismatch);
            }
            let (a, b) = (steps[position], steps[position + 1]);
            if a.gen != b.gen || a.positive != first_positive || b.positive == first_positive {
                return Err(mismatch);
            }
            out.drain(position..position + 2);
        }
        MoveKind::InsertPosNeg(i) | MoveKind::InsertNegPos(i) => {
            if position > steps.len() || i >= sys.rank() {
                return Err(mismatch);
            }
            let first_positive = matches!(kind, MoveKind::InsertPosNeg(_));
            out.splice(
                position..position,
                [
                    Step {
                        gen: i,
                        positive: first_positive,
                    },
                    Step {
                        gen: i,
                        positive: !first_positive,
                    },
                ],
            );
        }
        MoveKind::BraidPositive | MoveKind::BraidNegative => {
            let sign = kind == MoveKind::BraidPositive;
            if position + 1 >= steps.len() {
                return Err(mismatch);
            }
            let (i, j) = (steps[position].gen, steps[position + 1].gen);
            if i == j {
                return Err(mismatch);
            }
            let m = sys.m(i, j) as usize;
            if position + m > steps.len() {
                return Err(mismatch);
            }
            for t in 0..m {
                let expect = if t % 2 == 0 { i } else { j };
                if steps[position + t].gen != expect || steps[position + t].positive != sign {
                    return Err(mismatch);
                }
                out[position + t] = Step {
                    gen: if t % 2 == 0 { j } else { i },
                    positive: sign,
                };
            }
        }
    }
    // The window replaced `removed` letters by `out.len() - steps.len() + removed`.
    let removed = match kind {
        MoveKind::CancelPosNeg | MoveKind::CancelNegPos => 2,
        MoveKind::InsertPosNeg(_) | MoveKind::InsertNegPos(_) => 0,
        MoveKind::BraidPositive | MoveKind::BraidNegative => {
            sys.m(steps[position].gen, steps[position + 1].gen) as usize
        }
    };
    let added = out.len() + removed - steps.len();
    let mut cur = verts[position].clone();
    for &step in &out[position..position + added] {
        cur = step_target(sys, &cur, step).ok_or(mismatch.clone())?;
    }
    if cur != verts[position + removed] {
        return Err(mismatch);
    }
    Ok(Path {
        base: path.base.clone(),
        steps: out,
    })
}

/// Repeatedly cancels the leftmost adjacent `i, ī` or `ī, i` pair.
pub fn free_reduce(path: &Path) -> (Path, Vec<Move>) {
    let mut steps = path.steps.clone();
    let mut moves = Vec::new();
    let mut k = 0;
    while k + 1 < steps.len() {
        if steps[k].gen == steps[k + 1].gen && steps[k].positive != steps[k + 1].positive {
            let kind = if steps[k].positive {
                MoveKind::CancelPosNeg
            } else {
                MoveKind::CancelNegPos
            };
            moves.push(Move { position: k, kind });
            steps.drain(k..k + 2);
            k = k.saturating_sub(1);
        } else {
            k += 1;
        }
    }
    (
        Path {
            base: path.base.clone(),
            steps,
        },
        moves,
    )
}

/// Graph on `C_min`: one edge `(u, i)` for each `i ∈ cl(u)`, pointing to
/// `s_i u s_{i•}`.
#[derive(Debug, Clone)]
pub struct GammaGraph {
    vertices: Vec<WeylElement>,
    index: HashMap<WeylElement, usize>,
    /// `(from, gen, to)` as vertex indices.
    edges: Vec<(usize, usize, usize)>,
}

impl GammaGraph {
    pub fn vertices(&self) -> &[WeylElement] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize, usize)] {
        &self.edges
    }

    pub fn index_of(&self, w: &WeylElement) -> Option<usize> {
        self.index.get(w).copied()
    }

    /// Steps leaving vertex `u`, sorted by label then sign, as
    /// `(step, target, edge id)`.
    pub fn incident(&self, u: usize) -> Vec<(Step, usize, usize)> {
        let mut out: Vec<(Step, usize, usize)> = Vec::new();
        for (e, &(from, gen, to)) in self.edges.iter().enumerate() {
            if from == u {
                out.push((Step::pos(gen), to, e));
            }
            if to == u {
                out.push((Step::neg(gen), from, e));
            }
        }
        out.sort_by_key(|&(s, t, _)| (s.gen, !s.positive, t));
        out
    }

    pub fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return true;
        }
        let mut seen = vec![false; self.vertices.len()];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for (_, v, _) in self.incident(u) {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    queue.push_back(v);
                }
            }
        }
        count == self.vertices.len()
    }
}

pub fn gamma_graph(sys: &CoxeterSystem, class: &BulletConjClass) -> GammaGraph {
    let vertices = class.c_min().to_vec();
    let index: HashMap<WeylElement, usize> = vertices
        .iter()
        .cloned()
        .enumerate()
        .map(|(k, w)| (w, k))
        .collect();
    let mut edges = Vec::new();
    for (u, w) in vertices.iter().enumerate() {
        for i in sys.left_descents(w) {
            let to = sys.elementary_move(w, i);
            edges.push((u, i, index[&to]));
        }
    }
    GammaGraph {
        vertices,
        index,
        edges,
    }
}

/// A generator of the loop image with the loop that produced it.
#[derive(Debug, Clone)]
pub struct LoopCertificate {
    pub z: WeylElement,
    pub path: Path,
}

/// Subgroup of `W_w` generated by `z`-values of the fundamental loops at `base`.
#[derive(Debug, Clone)]
pub struct TauImage {
    pub base: WeylElement,
    pub certificates: Vec<LoopCertificate>,
    /// Table indices of the generated subgroup.
    pub elements: BTreeSet<usize>,
}

impl TauImage {
    pub fn order(&self) -> usize {
        self.elements.len()
    }
}

/// BFS spanning tree from `base` (ties broken by label, sign, then target
/// ShortLex position) and one loop per non-tree edge.
pub fn tau_image(
    sys: &CoxeterSystem,
    table: &ElementTable,
    graph: &GammaGraph,
    base: &WeylElement,
) -> Result<TauImage, PathError> {
    let root = graph.index_of(base).ok_or(PathError::Disconnected)?;
    let n = graph.vertices.len();
    let mut tree_path: Vec<Option<Vec<Step>>> = vec![None; n];
    let mut tree_edges = BTreeSet::new();
    tree_path[root] = Some(Vec::new());
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        for (step, v, e) in graph.incident(u) {
            if tree_path[v].is_none() {
                let mut p = tree_path[u].clone().expect("visited");
                p.push(step);
                tree_path[v] = Some(p);
                tree_edges.insert(e);
                queue.push_back(v);
            }
        }
    }
    if tree_path.iter().any(|p| p.is_none()) {
        return Err(PathError::Disconnected);
    }
    let mut certificates = Vec::new();
    for (e, &(from, gen, to)) in graph.edges.iter().enumerate() {
        if tree_edges.contains(&e) {
            continue;
        }
        let mut steps = tree_path[from].clone().expect("connected");
        steps.push(Step::pos(gen));
        steps.extend(
            tree_path[to]
                .as_ref()
                .expect("connected")
                .iter()
                .rev()
                .map(|s| s.inverse()),
        );
        let path = Path::new(base.clone(), steps);
        let z = z_of_path(sys, &path)?;
        certificates.push(LoopCertificate { z, path });
    }
    let gens: Vec<usize> = certificates.iter().map(|c| table.index_of(&c.z)).collect();
    let elements = generate_subgroup(table, &gens);
    Ok(TauImage {
        base: base.clone(),
        certificates,
        elements,
    })
}

/// Per-base-point comparison of the loop image with `W_w`.
#[derive(Debug, Clone, Serialize)]
pub struct BaseReport {
    pub base: String,
    pub image_order: usize,
    pub stabilizer_order: usize,
    pub equal: bool,
}

#[derive(Debug, Clone)]
pub struct LoopImageReport {
    pub holds: bool,
    pub per_base: Vec<BaseReport>,
    /// Certificates at the ShortLex-least base point.
    pub witnesses: Vec<LoopCertificate>,
}

/// Checks at every base point that the loop image equals `W_w`.
pub fn verify_conjecture_12a(
    sys: &CoxeterSystem,
    table: &ElementTable,
    class: &BulletConjClass,
) -> Result<LoopImageReport, PathError> {
    let graph = gamma_graph(sys, class);
    if !graph.is_connected() {
        return Err(PathError::Disconnected);
    }
    let mut per_base = Vec::new();
    let mut witnesses = Vec::new();
    for (k, w) in graph.vertices().iter().enumerate() {
        let image = tau_image(sys, table, &graph, w)?;
        let stab = stabilizer(sys, table, w);
        let stab_set: BTreeSet<usize> = stab.elements().iter().map(|z| table.index_of(z)).collect();
        let equal = image.elements == stab_set;
        per_base.push(BaseReport {
            base: sys.format_element(w),
            image_order: image.order(),
            stabilizer_order: stab.order(),
            equal,
        });
        if k == 0 {
            witnesses = image.certificates;
        }
    }
    Ok(LoopImageReport {
        holds: per_base.iter().all(|b| b.equal),
        per_base,
        witnesses,
    })
}

pub fn format_step(sys: &CoxeterSystem, step: Step) -> String {
    let mut s = sys.label(step.gen).to_string();
    if !step.positive {
        s.push('~');
    }
    s
}

/// `[base; l1,l2~,…]` with `~` marking a barred letter.
pub fn format_path(sys: &CoxeterSystem, path: &Path) -> String {
    let steps: Vec<String> = path.steps.iter().map(|&s| format_step(sys, s)).collect();
    format!("[{}; {}]", sys.format_element(&path.base), steps.join(","))
}

pub fn parse_path(sys: &CoxeterSystem, text: &str) -> Result<Path, PathError> {
    let malformed = || PathError::Malformed(text.to_string());
    let inner = text
        .trim()
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(malformed)?;
    let (base, rest) = inner.split_once(';').ok_or_else(malformed)?;
    let base = sys.parse_element(base)?;
    let steps = rest
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            let (label, positive) = match t.strip_suffix('~') {
                Some(l) => (l, false),
                None => (t, true),
            };
            Ok(Step {
                gen: sys.parse_letter(label)?,
                positive,
            })
        })
        .collect::<Result<Vec<_>, PathError>>()?;
    Ok(Path { base, steps })
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.gen, if self.positive { "" } else { "~" })
    }
}

#[cfg(test)]
mod tests;
