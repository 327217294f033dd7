//! Bounded search for a move sequence relating two paths.

use super::{
    apply_move, apply_move_at, braid_of_path, endpoint, free_reduce, vertices, Move, MoveKind,
    Path, PathError, Step,
};
use crate::braid::BraidGroup;
use crate::coxeter::CoxeterSystem;
use serde::Serialize;
use std::collections::HashMap;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum SearchOutcome {
    /// Applying `moves` to the first path in order yields the second.
    Equivalent { moves: Vec<Move> },
    /// Different endpoints or different braid images; moves preserve both.
    Inequivalent { reason: String },
    /// The depth or state budget ran out.
    Unknown { explored: usize },
}

/// States reached from one side, with the moves that reached them.
type Frontier = HashMap<Vec<Step>, Vec<Move>>;

fn neighbours(sys: &CoxeterSystem, path: &Path, max_len: usize, slack: usize) -> Vec<(Path, Move)> {
    let mut out = Vec::new();
    let verts = vertices(sys, path).expect("search states are valid paths");
    let mut try_move = |position: usize, kind: MoveKind| {
        if let Ok(next) = apply_move_at(sys, path, &verts, position, kind) {
            out.push((next, Move { position, kind }));
        }
    };
    for position in 0..path.steps.len().saturating_sub(1) {
        for kind in [
            MoveKind::BraidPositive,
            MoveKind::BraidNegative,
            MoveKind::CancelPosNeg,
            MoveKind::CancelNegPos,
        ] {
            try_move(position, kind);
        }
    }
    if slack > 0 && path.steps.len() + 2 <= max_len {
        for position in 0..=path.steps.len() {
            for gen in 0..sys.rank() {
                try_move(position, MoveKind::InsertPosNeg(gen));
                try_move(position, MoveKind::InsertNegPos(gen));
            }
        }
    }
    out
}

/// Inverts a recorded move list: given the moves taking `start` to some state,
/// returns moves taking that state back to `start`.
fn invert_moves(sys: &CoxeterSystem, start: &Path, moves: &[Move]) -> Vec<Move> {
    let mut cur = start.clone();
    let mut undo = Vec::with_capacity(moves.len());
    for m in moves {
        undo.push(m.undo(&cur));
        cur = apply_move(sys, &cur, m.position, m.kind).expect("recorded move replays");
    }
    undo.reverse();
    undo
}

/// Bidirectional breadth-first search over single moves, starting from the
/// freely reduced forms of both paths. `depth` bounds the number of moves on
/// each side, `max_states` the number of stored states. A first pass uses only
/// braid moves and cancellations; a second pass also inserts `i ī` pairs while
/// the path stays within two letters of the longer reduced input.
pub fn equivalence_search(
    sys: &CoxeterSystem,
    a: &Path,
    b: &Path,
    depth: usize,
    max_states: usize,
) -> Result<SearchOutcome, PathError> {
    if a.base != b.base || endpoint(sys, a)? != endpoint(sys, b)? {
        return Ok(SearchOutcome::Inequivalent {
            reason: "endpoints differ".into(),
        });
    }
    let group = BraidGroup::new(sys);
    if !group.equal(&braid_of_path(sys, a)?, &braid_of_path(sys, b)?) {
        return Ok(SearchOutcome::Inequivalent {
            reason: "braid images differ".into(),
        });
    }
    match search_pass(sys, a, b, depth, max_states, 0) {
        SearchOutcome::Equivalent { moves } => Ok(SearchOutcome::Equivalent { moves }),
        SearchOutcome::Unknown { explored } => match search_pass(sys, a, b, depth, max_states, 2) {
            SearchOutcome::Unknown { explored: more } => Ok(SearchOutcome::Unknown {
                explored: explored + more,
            }),
            found => Ok(found),
        },
        other => Ok(other),
    }
}

fn search_pass(
    sys: &CoxeterSystem,
    a: &Path,
    b: &Path,
    depth: usize,
    max_states: usize,
    slack: usize,
) -> SearchOutcome {
    let (ra, ma) = free_reduce(a);
    let (rb, mb) = free_reduce(b);
    let mut sides: [Frontier; 2] = [
        HashMap::from([(ra.steps.clone(), ma)]),
        HashMap::from([(rb.steps.clone(), mb)]),
    ];
    let mut layers: [Vec<Vec<Step>>; 2] = [vec![ra.steps.clone()], vec![rb.steps.clone()]];
    let starts = [a, b];
    let max_len = ra.steps.len().max(rb.steps.len()) + slack;

    let meet = |sides: &[Frontier; 2]| -> Option<Vec<Move>> {
        let (small, large, flipped) = if sides[0].len() <= sides[1].len() {
            (&sides[0], &sides[1], false)
        } else {
            (&sides[1], &sides[0], true)
        };
        let key = small.keys().filter(|k| large.contains_key(*k)).min()?;
        let (from_a, from_b) = if flipped {
            (&large[key], &small[key])
        } else {
            (&small[key], &large[key])
        };
        let mut moves = from_a.clone();
        moves.extend(invert_moves(sys, b, from_b));
        Some(moves)
    };

    for round in 0..=2 * depth {
        if let Some(moves) = meet(&sides) {
            return SearchOutcome::Equivalent { moves };
        }
        if round == 2 * depth {
            break;
        }
        let side = round % 2;
        let mut next_layer = Vec::new();
        for steps in std::mem::take(&mut layers[side]) {
            let path = Path::new(starts[side].base.clone(), steps.clone());
            let prefix = sides[side][&steps].clone();
            for (next, mv) in neighbours(sys, &path, max_len, slack) {
                if sides[side].contains_key(&next.steps) {
                    continue;
                }
                let mut all = prefix.clone();
                all.push(mv);
                sides[side].insert(next.steps.clone(), all);
                next_layer.push(next.steps);
                if sides[0].len() + sides[1].len() > max_states {
                    return SearchOutcome::Unknown {
                        explored: sides[0].len() + sides[1].len(),
                    };
                }
            }
        }
        layers[side] = next_layer;
    }
    SearchOutcome::Unknown {
        explored: sides[0].len() + sides[1].len(),
    }
}

/// Replays a move list, returning the final path.
pub fn replay(sys: &CoxeterSystem, start: &Path, moves: &[Move]) -> Result<Path, PathError> {
    moves.iter().try_fold(start.clone(), |p, m| {
        apply_move(sys, &p, m.position, m.kind)
    })
}
