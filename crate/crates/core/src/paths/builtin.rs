//! Explicit paths in `Γ_C` whose `z`-values are the named stabilizer generators
//! of the classical representatives.
//!
//! Letters are written with the 1-based node numbering of types B and D; in
//! type D the node `n` stands for the primed node `(n-1)'`.

use super::{Path, Step};
use crate::conj::{classical_w, ConjError, PartitionSignature};
use crate::coxeter::{CoxeterSystem, TypeTag, WeylElement};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BuiltinError {
    #[error(transparent)]
    Conj(#[from] ConjError),
    #[error("system {0} has the wrong type for this path")]
    WrongType(String),
    #[error("index r = {r} out of range for {sigma} parts")]
    BadIndex { r: usize, sigma: usize },
    #[error("parts p_{r} and p_{next} must be equal", next = .r + 1)]
    UnequalParts { r: usize },
    #[error("leaf labels must be three distinct nodes other than 0")]
    BadLeaves,
}

fn require(sys: &CoxeterSystem, tag: TypeTag) -> Result<(), BuiltinError> {
    if sys.type_tag() == tag || (tag == TypeTag::B && sys.type_tag() == TypeTag::C) {
        Ok(())
    } else {
        Err(BuiltinError::WrongType(sys.name().to_string()))
    }
}

fn base(sys: &CoxeterSystem, p: &PartitionSignature) -> Result<WeylElement, BuiltinError> {
    Ok(classical_w(sys, p)?.w)
}

fn to_steps(letters: impl IntoIterator<Item = (usize, bool)>) -> Vec<Step> {
    letters
        .into_iter()
        .map(|(l, positive)| Step {
            gen: l - 1,
            positive,
        })
        .collect()
}

fn check_r(p: &PartitionSignature, r: usize) -> Result<(), BuiltinError> {
    if r == 0 || r > p.sigma() {
        return Err(BuiltinError::BadIndex {
            r,
            sigma: p.sigma(),
        });
    }
    Ok(())
}

/// `a, a+1, …, n-1, n, n-1, …, a-p_r+1` with `a = p_1 + ⋯ + p_r`.
/// Its `z`-value is the cycle `w_r`.
pub fn iota_b(sys: &CoxeterSystem, p: &PartitionSignature, r: usize) -> Result<Path, BuiltinError> {
    require(sys, TypeTag::B)?;
    check_r(p, r)?;
    let n = p.n();
    let a = p.before(r + 1);
    let letters = (a..=n)
        .chain((a + 1 - p.part(r)..n).rev())
        .map(|l| (l, true));
    Ok(Path::new(base(sys, p)?, to_steps(letters)))
}

/// Swap of two equal adjacent cycles: blocks `B_k = (a-k, …, a+p-2-2k)` for
/// `k < p-1`, the middle run `a+p-1, a+p-3, …, a-p+1`, then the blocks again in
/// reverse order, each reversed and barred.
fn swap_letters(a: usize, p: usize) -> Vec<(usize, bool)> {
    let blocks: Vec<Vec<usize>> = (0..p.saturating_sub(1))
        .map(|k| (a - k..=a + p - 2 - 2 * k).collect())
        .collect();
    let mut out: Vec<(usize, bool)> = blocks.iter().flatten().map(|&l| (l, true)).collect();
    out.extend((0..p).map(|t| (a + p - 1 - 2 * t, true)));
    for block in blocks.iter().rev() {
        out.extend(block.iter().rev().map(|&l| (l, false)));
    }
    out
}

/// Path with `z`-value `h_r`, the swap of the equal cycles `r` and `r+1`.
/// Valid in types B and D since it only uses the type-A nodes.
pub fn iota_b_prime(
    sys: &CoxeterSystem,
    p: &PartitionSignature,
    r: usize,
) -> Result<Path, BuiltinError> {
    if !matches!(sys.type_tag(), TypeTag::B | TypeTag::C | TypeTag::D) {
        return Err(BuiltinError::WrongType(sys.name().to_string()));
    }
    if r == 0 || r >= p.sigma() {
        return Err(BuiltinError::BadIndex {
            r,
            sigma: p.sigma(),
        });
    }
    if p.part(r) != p.part(r + 1) {
        return Err(BuiltinError::UnequalParts { r });
    }
    let letters = swap_letters(p.before(r + 1), p.part(r));
    Ok(Path::new(base(sys, p)?, to_steps(letters)))
}

/// Type D: `a, …, n-1, (n-1)', n-2, …, a-p_r+1, n-1, …, n-p_σ+1`.
/// Its `z`-value is `w'_r = w_r w_σ`. When `r = σ` and `p_σ = 1` the word
/// degenerates to `(n-1)'`, which is not a loop; there `w'_σ = w_σ² = 1` and the
/// empty loop is returned.
pub fn iota_d_double_prime(
    sys: &CoxeterSystem,
    p: &PartitionSignature,
    r: usize,
) -> Result<Path, BuiltinError> {
    require(sys, TypeTag::D)?;
    check_r(p, r)?;
    if r == p.sigma() && p.part(r) == 1 {
        return Ok(Path::empty(base(sys, p)?));
    }
    let n = p.n();
    let a = p.before(r + 1);
    let mut letters: Vec<usize> = (a..n).collect();
    letters.push(n);
    letters.extend((a + 1 - p.part(r)..=n - 2).rev());
    letters.extend((n + 1 - p.part(p.sigma())..n).rev());
    Ok(Path::new(
        base(sys, p)?,
        to_steps(letters.into_iter().map(|l| (l, true))),
    ))
}

/// Type D with `p_{σ-1} = p_σ = p`: the swap path conjugated by `w_σ`, whose
/// `z`-value is `h'_{σ-1}`. With `P = n - p`, the first block is
/// `(n-1)', n-2, …, P, P+1, …, n-2`, the blocks `P-k, …, n-2-2k` follow for
/// `0 < k < p-1`, and the middle run is `(n-1)', n-3, n-5, …, n-2p+1`.
pub fn iota_d_tilde(sys: &CoxeterSystem, p: &PartitionSignature) -> Result<Path, BuiltinError> {
    require(sys, TypeTag::D)?;
    let sigma = p.sigma();
    if sigma < 2 {
        return Err(BuiltinError::BadIndex {
            r: sigma.saturating_sub(1),
            sigma,
        });
    }
    let len = p.part(sigma);
    if p.part(sigma - 1) != len {
        return Err(BuiltinError::UnequalParts { r: sigma - 1 });
    }
    let n = p.n();
    let big_p = n - len;
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    if len >= 2 {
        let mut first = vec![n];
        first.extend((big_p..=n - 2).rev());
        first.extend(big_p + 1..=n - 2);
        blocks.push(first);
        blocks.extend((1..len - 1).map(|k| (big_p - k..=n - 2 - 2 * k).collect()));
    }
    let mut letters: Vec<(usize, bool)> = blocks.iter().flatten().map(|&l| (l, true)).collect();
    letters.push((n, true));
    letters.extend((1..len).map(|t| (n - 1 - 2 * t, true)));
    for block in blocks.iter().rev() {
        letters.extend(block.iter().rev().map(|&l| (l, false)));
    }
    Ok(Path::new(base(sys, p)?, to_steps(letters)))
}

/// The three loops at `w = s_i s_0 s_j s_0 s_k s_0` in the trivalent `D_4`.
#[derive(Debug, Clone)]
pub struct D4Example {
    pub w: WeylElement,
    pub iota: Path,
    pub iota_prime: Path,
    pub iota_double_prime: Path,
    /// `i, 0, j, 0, k, 0` as letters.
    pub product_word: Vec<usize>,
}

pub fn d4_example(
    sys: &CoxeterSystem,
    i: usize,
    j: usize,
    k: usize,
) -> Result<D4Example, BuiltinError> {
    let leaves = [i, j, k];
    if sys.rank() != 4 || leaves.iter().any(|&x| x == 0 || x > 3) || i == j || j == k || i == k {
        return Err(BuiltinError::BadLeaves);
    }
    let product_word = vec![i, 0, j, 0, k, 0];
    let w = sys.eval(&product_word);
    let p = |v: &[(usize, bool)]| {
        Path::new(
            w.clone(),
            v.iter()
                .map(|&(gen, positive)| Step { gen, positive })
                .collect(),
        )
    };
    Ok(D4Example {
        iota: p(&[(0, false), (i, true), (j, true), (0, true)]),
        iota_prime: p(&[(j, true), (k, true)]),
        iota_double_prime: p(&[
            (i, true),
            (0, true),
            (k, true),
            (i, true),
            (0, false),
            (i, false),
        ]),
        w,
        product_word,
    })
}
