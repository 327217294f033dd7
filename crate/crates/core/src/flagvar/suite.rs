//! Exhaustive checks of the composition identities among `Ψ`, `σ(a)`, `σ_i`
//! and `σ̃_i` over every point at a range of levels.

use super::cover::CosetPoint;
use super::flags::FlagPoint;
use super::{FlagError, SpecialLinear};
use crate::coxeter::{CoxeterSystem, WeylElement};
use serde::Serialize;
use std::collections::BTreeMap;

/// Which identity a tally refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Identity {
    /// `σ(b)σ(a) = Ψ` on `X_{ab}`.
    SplitThenSwap,
    /// `σ(a)σ(b) = Ψ` on `X_{ba}`.
    SwapThenSplit,
    /// Both alternating products of `σ_i`, `σ_j` equal `σ_v`.
    BraidFlags,
    /// `σ_{i_k}⋯σ_{i_1} = Ψ` along a reduced word of `w`.
    ReducedWordFlags,
    /// `σ̃_{i_k}⋯σ̃_{i_1} = Ψ` along a reduced word of `w`.
    ReducedWordCover,
    /// Both alternating products of `σ̃_i`, `σ̃_j` agree.
    BraidCover,
    /// `π ∘ σ̃_i = σ_i ∘ π`.
    CoverProjection,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Tally {
    /// Number of `(w, data)` configurations the identity applies to.
    pub cases: usize,
    /// Number of points checked.
    pub points: usize,
    pub failures: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub n: usize,
    pub q: u32,
    pub levels: Vec<u32>,
    pub tallies: BTreeMap<Identity, Tally>,
}

impl SuiteReport {
    pub fn pass(&self) -> bool {
        self.tallies.values().all(|t| t.failures == 0)
    }

    pub fn tally(&self, id: Identity) -> Tally {
        self.tallies.get(&id).cloned().unwrap_or_default()
    }
}

/// Every reduced word of `w`, each as its letter sequence.
pub fn reduced_words(sys: &CoxeterSystem, w: &WeylElement) -> Vec<Vec<usize>> {
    if w.is_identity() {
        return vec![vec![]];
    }
    sys.left_descents(w)
        .into_iter()
        .flat_map(|i| {
            reduced_words(sys, &sys.left_mul_gen(i, w))
                .into_iter()
                .map(move |mut rest| {
                    rest.insert(0, i);
                    rest
                })
        })
        .collect()
}

/// Conjugates visited by `σ_{i_1}, …, σ_{i_k}` starting from `w`, if every
/// step is defined (left descent, length kept).
fn conjugation_chain(
    sys: &CoxeterSystem,
    w: &WeylElement,
    letters: &[usize],
) -> Option<Vec<WeylElement>> {
    let mut out = vec![w.clone()];
    for &i in letters {
        let cur = out.last().expect("nonempty");
        if !sys.is_left_descent(cur, i) {
            return None;
        }
        let next = sys.elementary_move(cur, i);
        if next.length() != w.length() {
            return None;
        }
        out.push(next);
    }
    Some(out)
}

fn alternating(i: usize, j: usize, m: usize) -> Vec<usize> {
    (0..m).map(|k| if k % 2 == 0 { i } else { j }).collect()
}

/// Some pair of left descents admits both alternating chains.
pub fn has_braid_configuration(sys: &CoxeterSystem, w: &WeylElement) -> bool {
    let descents: Vec<usize> = sys.left_descents(w).into_iter().collect();
    descents.iter().enumerate().any(|(x, &i)| {
        descents[x + 1..].iter().any(|&j| {
            let m = sys.m(i, j) as usize;
            conjugation_chain(sys, w, &alternating(i, j, m)).is_some()
                && conjugation_chain(sys, w, &alternating(j, i, m)).is_some()
        })
    })
}

struct Runner<'a> {
    sl: &'a SpecialLinear,
    tallies: &'a mut BTreeMap<Identity, Tally>,
}

impl Runner<'_> {
    fn record(&mut self, id: Identity, points: usize, failures: usize) {
        let t = self.tallies.entry(id).or_default();
        t.cases += 1;
        t.points += points;
        t.failures += failures;
    }

    fn flags_along(
        &self,
        chain: &[WeylElement],
        letters: &[usize],
        b: &FlagPoint,
    ) -> Result<FlagPoint, FlagError> {
        letters
            .iter()
            .zip(chain)
            .try_fold(b.clone(), |cur, (&i, w)| self.sl.sigma_i(w, i, &cur))
    }

    fn cover_along(
        &self,
        chain: &[WeylElement],
        letters: &[usize],
        p: &CosetPoint,
    ) -> Result<CosetPoint, FlagError> {
        letters
            .iter()
            .zip(chain)
            .try_fold(p.clone(), |cur, (&i, w)| {
                Ok(self.sl.sigma_tilde(w, i, &cur)?.1)
            })
    }

    fn splits(
        &mut self,
        w: &WeylElement,
        parts: &BTreeMap<usize, Vec<FlagPoint>>,
    ) -> Result<(), FlagError> {
        let sl = self.sl;
        let sys = sl.system();
        let points = parts
            .get(&sl.table().index_of(w))
            .map(Vec::as_slice)
            .unwrap_or(&[]);
        for a in sl.table().elements() {
            let Ok((b, w_prime)) = sl.split(w, a) else {
                continue;
            };
            let mut failures = 0;
            for p in points {
                let there = sl.sigma(w, a, p)?;
                failures += usize::from(sl.sigma(&w_prime, &b, &there)? != sl.psi(p));
            }
            self.record(Identity::SplitThenSwap, points.len(), failures);
            let others = parts
                .get(&sl.table().index_of(&w_prime))
                .map(Vec::as_slice)
                .unwrap_or(&[]);
            let mut failures = 0;
            for p in others {
                let back = sl.sigma(&w_prime, &b, p)?;
                failures += usize::from(sl.sigma(w, a, &back)? != sl.psi(p));
            }
            self.record(Identity::SwapThenSplit, others.len(), failures);
            debug_assert_eq!(sys.mul(a, &b), *w);
        }
        Ok(())
    }

    fn reduced_word_checks(
        &mut self,
        w: &WeylElement,
        points: &[FlagPoint],
        cover: Option<&[CosetPoint]>,
    ) -> Result<(), FlagError> {
        let sl = self.sl;
        for word in reduced_words(sl.system(), w) {
            let Some(chain) = conjugation_chain(sl.system(), w, &word) else {
                continue;
            };
            let mut failures = 0;
            for p in points {
                failures += usize::from(self.flags_along(&chain, &word, p)? != sl.psi(p));
            }
            self.record(Identity::ReducedWordFlags, points.len(), failures);
            if let Some(cover) = cover {
                let mut failures = 0;
                for p in cover {
                    failures +=
                        usize::from(self.cover_along(&chain, &word, p)? != sl.psi_tilde(w, p));
                }
                self.record(Identity::ReducedWordCover, cover.len(), failures);
            }
        }
        Ok(())
    }

    fn braid_checks(
        &mut self,
        w: &WeylElement,
        points: &[FlagPoint],
        cover: Option<&[CosetPoint]>,
    ) -> Result<(), FlagError> {
        let sl = self.sl;
        let sys = sl.system();
        let descents: Vec<usize> = sys.left_descents(w).into_iter().collect();
        for (x, &i) in descents.iter().enumerate() {
            for &j in &descents[x + 1..] {
                let m = sys.m(i, j) as usize;
                let (first, second) = (alternating(i, j, m), alternating(j, i, m));
                let (Some(c1), Some(c2)) = (
                    conjugation_chain(sys, w, &first),
                    conjugation_chain(sys, w, &second),
                ) else {
                    continue;
                };
                let v = sys.eval(&first);
                let mut failures = 0;
                for p in points {
                    let direct = sl.sigma(w, &v, p)?;
                    let one = self.flags_along(&c1, &first, p)?;
                    let two = self.flags_along(&c2, &second, p)?;
                    failures += usize::from(one != direct || two != direct);
                }
                self.record(Identity::BraidFlags, points.len(), failures);
                if let Some(cover) = cover {
                    let mut failures = 0;
                    for p in cover {
                        let one = self.cover_along(&c1, &first, p)?;
                        let two = self.cover_along(&c2, &second, p)?;
                        failures += usize::from(one != two);
                    }
                    self.record(Identity::BraidCover, cover.len(), failures);
                }
            }
        }
        Ok(())
    }

    fn projection_checks(
        &mut self,
        w: &WeylElement,
        cover: &[CosetPoint],
    ) -> Result<(), FlagError> {
        let sl = self.sl;
        for i in sl.system().left_descents(w) {
            if sl.system().elementary_move(w, i).length() != w.length() {
                continue;
            }
            let mut failures = 0;
            for p in cover {
                let (_, moved) = sl.sigma_tilde(w, i, p)?;
                let below = sl.sigma_i(w, i, &sl.cover_projection(p))?;
                failures += usize::from(sl.cover_projection(&moved) != below);
            }
            self.record(Identity::CoverProjection, cover.len(), failures);
        }
        Ok(())
    }
}

/// Runs the identities over all points at levels `1..=max_level`.
///
/// With `braid_only` just the two braid identities run, which is what the
/// larger groups are used for.
pub fn sigma_identity_suite(
    n: usize,
    q: u32,
    max_level: u32,
    braid_only: bool,
) -> Result<SuiteReport, FlagError> {
    let mut tallies = BTreeMap::new();
    let base = SpecialLinear::new(n, q, 1)?;
    for level in 1..=max_level {
        let sl = base.at_level(level)?;
        let parts = sl.bruhat_partition();
        let mut runner = Runner {
            sl: &sl,
            tallies: &mut tallies,
        };
        for w in sl.table().elements() {
            let points = parts
                .get(&sl.table().index_of(w))
                .cloned()
                .unwrap_or_default();
            if braid_only && !has_braid_configuration(sl.system(), w) {
                continue;
            }
            let cover = sl.x_tilde_points_over(w, &points);
            if !braid_only {
                runner.splits(w, &parts)?;
                runner.reduced_word_checks(w, &points, Some(&cover))?;
                runner.projection_checks(w, &cover)?;
            }
            runner.braid_checks(w, &points, Some(&cover))?;
        }
    }
    Ok(SuiteReport {
        n,
        q,
        levels: (1..=max_level).collect(),
        tallies,
    })
}
