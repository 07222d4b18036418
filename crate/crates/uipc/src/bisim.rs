//! Bisimulations between finite models: the greatest full bisimulation, the
//! depth-bounded preorders and equivalences, and the equivalent game view.
//!
//! Conventions for the bounded relations, with `observed` the variable set
//! the relation may inspect:
//!
//! * depth 0: `a <= b` iff every observed atom true at `a` is true at `b`;
//! * depth n+1: `a <= b` iff every successor of `b` is matched by some
//!   successor of `a` that is depth-n *equivalent* to it;
//! * depth-n equivalence is `<=` in both directions.

use crate::kripke::{KripkeModel, ModelError, ModelUniverse, PointedModel};
use crate::syntax::VarSet;
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BisimError {
    #[error("observed variable `{var}` is not in the signature of {side} model")]
    ObservedOutsideSignature { var: String, side: &'static str },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// A witnessing relation between the nodes of two models.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BisimRelation {
    pub observed: VarSet,
    pub pairs: Vec<(usize, usize)>,
}

impl BisimRelation {
    pub fn contains(&self, w: usize, v: usize) -> bool {
        self.pairs.binary_search(&(w, v)).is_ok()
    }
}

fn check_observed(
    a: &KripkeModel,
    b: &KripkeModel,
    observed: &VarSet,
) -> Result<(), BisimError> {
    for var in observed.iter() {
        if !a.signature().contains(var) {
            return Err(BisimError::ObservedOutsideSignature {
                var: var.to_string(),
                side: "the left",
            });
        }
        if !b.signature().contains(var) {
            return Err(BisimError::ObservedOutsideSignature {
                var: var.to_string(),
                side: "the right",
            });
        }
    }
    Ok(())
}

/// The largest bisimulation between two models that agrees on `observed`,
/// computed as a greatest fixpoint by pruning the pair graph.
pub fn max_bisimulation(
    a: &KripkeModel,
    b: &KripkeModel,
    observed: &VarSet,
) -> Result<BisimRelation, BisimError> {
    check_observed(a, b, observed)?;
    let (na, nb) = (a.size(), b.size());
    // alive[w] = mask over b-nodes still considered bisimilar to w
    let mut alive: Vec<u64> = (0..na)
        .map(|w| {
            let mut mask = 0u64;
            for v in 0..nb {
                if a.atoms_at(w, observed) == b.atoms_at(v, observed) {
                    mask |= 1 << v;
                }
            }
            mask
        })
        .collect();

    loop {
        let mut changed = false;
        for w in 0..na {
            let mut rest = alive[w];
            while rest != 0 {
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                if !forth_back_ok(a, b, &alive, w, v) {
                    alive[w] &= !(1 << v);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }

    let mut pairs = Vec::new();
    for (w, mask) in alive.iter().enumerate() {
        for v in 0..nb {
            if mask & (1 << v) != 0 {
                pairs.push((w, v));
            }
        }
    }
    Ok(BisimRelation {
        observed: observed.clone(),
        pairs,
    })
}

fn forth_back_ok(a: &KripkeModel, b: &KripkeModel, alive: &[u64], w: usize, v: usize) -> bool {
    // forth: every successor of w has an alive partner above v
    let mut rest = a.up_mask(w);
    while rest != 0 {
        let w2 = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        if alive[w2] & b.up_mask(v) == 0 {
            return false;
        }
    }
    // back: every successor of v has an alive partner above w
    let mut rest = b.up_mask(v);
    while rest != 0 {
        let v2 = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        let mut found = false;
        let mut ws = a.up_mask(w);
        while ws != 0 {
            let w2 = ws.trailing_zeros() as usize;
            ws &= ws - 1;
            if alive[w2] & (1 << v2) != 0 {
                found = true;
                break;
            }
        }
        if !found {
            return false;
        }
    }
    true
}

/// Memoized checker for the depth-bounded relations between two fixed models.
pub struct BoundedChecker<'a> {
    a: &'a KripkeModel,
    b: &'a KripkeModel,
    observed: VarSet,
    // memo key: (left node, right node, depth); separate tables per direction
    le_ab: HashMap<(usize, usize, u32), bool>,
    le_ba: HashMap<(usize, usize, u32), bool>,
}

impl<'a> BoundedChecker<'a> {
    pub fn new(
        a: &'a KripkeModel,
        b: &'a KripkeModel,
        observed: &VarSet,
    ) -> Result<Self, BisimError> {
        check_observed(a, b, observed)?;
        Ok(BoundedChecker {
            a,
            b,
            observed: observed.clone(),
            le_ab: HashMap::new(),
            le_ba: HashMap::new(),
        })
    }

    pub fn le(&mut self, w: usize, v: usize, n: u32) -> bool {
        self.le_dir(w, v, n, false)
    }

    pub fn sim(&mut self, w: usize, v: usize, n: u32) -> bool {
        self.le_dir(w, v, n, false) && self.le_dir(v, w, n, true)
    }

    // `swapped` means the roles of the two models are exchanged.
    fn le_dir(&mut self, w: usize, v: usize, n: u32, swapped: bool) -> bool {
        let memo = if swapped { &self.le_ba } else { &self.le_ab };
        if let Some(&res) = memo.get(&(w, v, n)) {
            return res;
        }
        let (ma, mb) = if swapped {
            (self.b, self.a)
        } else {
            (self.a, self.b)
        };
        let res = if n == 0 {
            ma.atoms_at(w, &self.observed) & !mb.atoms_at(v, &self.observed) == 0
        } else {
            let mut ok = true;
            let mut bs = mb.up_mask(v);
            'outer: while bs != 0 {
                let v2 = bs.trailing_zeros() as usize;
                bs &= bs - 1;
                let mut as_ = ma.up_mask(w);
                while as_ != 0 {
                    let w2 = as_.trailing_zeros() as usize;
                    as_ &= as_ - 1;
                    let fwd = self.le_dir(w2, v2, n - 1, swapped);
                    let bwd = self.le_dir(v2, w2, n - 1, !swapped);
                    if fwd && bwd {
                        continue 'outer;
                    }
                }
                ok = false;
                break;
            }
            ok
        };
        let memo = if swapped {
            &mut self.le_ba
        } else {
            &mut self.le_ab
        };
        memo.insert((w, v, n), res);
        res
    }
}

/// Depth-`n` directed comparison of two pointed models.
pub fn bounded_le(
    a: &PointedModel,
    b: &PointedModel,
    n: u32,
    observed: &VarSet,
) -> Result<bool, BisimError> {
    let mut checker = BoundedChecker::new(&a.model, &b.model, observed)?;
    Ok(checker.le(a.point, b.point, n))
}

/// Depth-`n` equivalence: the directed comparison both ways.
pub fn bounded_bisimilar(
    a: &PointedModel,
    b: &PointedModel,
    n: u32,
    observed: &VarSet,
) -> Result<bool, BisimError> {
    let mut checker = BoundedChecker::new(&a.model, &b.model, observed)?;
    Ok(checker.sim(a.point, b.point, n))
}

/// One move of the game transcript.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GameMove {
    /// Challenger moved in the named model; defender answered in the other.
    Round {
        round: u32,
        challenger_side: &'static str,
        challenger_to: usize,
        defender_to: usize,
    },
    /// Challenger has a move the defender cannot answer.
    DefenderStuck {
        round: u32,
        challenger_side: &'static str,
        challenger_to: usize,
    },
    AtomsDisagree,
}

/// Value of the `n`-round back-and-forth game, evaluated by direct minimax
/// over moves. The defender wins iff the points are depth-`n` equivalent;
/// this is a deliberately independent implementation used to cross-check the
/// relational definition.
pub fn game_value(
    a: &PointedModel,
    b: &PointedModel,
    n: u32,
    observed: &VarSet,
) -> Result<bool, BisimError> {
    check_observed(&a.model, &b.model, observed)?;
    Ok(game_rec(&a.model, &b.model, a.point, b.point, n, observed))
}

fn game_rec(
    ma: &KripkeModel,
    mb: &KripkeModel,
    w: usize,
    v: usize,
    n: u32,
    observed: &VarSet,
) -> bool {
    if ma.atoms_at(w, observed) != mb.atoms_at(v, observed) {
        return false;
    }
    if n == 0 {
        return true;
    }
    // challenger picks a side and a successor; defender must answer with a
    // successor on the other side that keeps the game winnable
    let mut ws = ma.up_mask(w);
    while ws != 0 {
        let w2 = ws.trailing_zeros() as usize;
        ws &= ws - 1;
        let mut answered = false;
        let mut vs = mb.up_mask(v);
        while vs != 0 {
            let v2 = vs.trailing_zeros() as usize;
            vs &= vs - 1;
            if game_rec(ma, mb, w2, v2, n - 1, observed) {
                answered = true;
                break;
            }
        }
        if !answered {
            return false;
        }
    }
    let mut vs = mb.up_mask(v);
    while vs != 0 {
        let v2 = vs.trailing_zeros() as usize;
        vs &= vs - 1;
        let mut answered = false;
        let mut ws = ma.up_mask(w);
        while ws != 0 {
            let w2 = ws.trailing_zeros() as usize;
            ws &= ws - 1;
            if game_rec(ma, mb, w2, v2, n - 1, observed) {
                answered = true;
                break;
            }
        }
        if !answered {
            return false;
        }
    }
    true
}

/// Game transcript for display: either a winning strategy trace for the
/// defender (one representative challenger line) or the refutation.
pub fn game_trace(
    a: &PointedModel,
    b: &PointedModel,
    n: u32,
    observed: &VarSet,
) -> Result<Vec<GameMove>, BisimError> {
    check_observed(&a.model, &b.model, observed)?;
    let mut trace = Vec::new();
    trace_rec(&a.model, &b.model, a.point, b.point, n, observed, 1, &mut trace);
    Ok(trace)
}

#[allow(clippy::too_many_arguments)]
fn trace_rec(
    ma: &KripkeModel,
    mb: &KripkeModel,
    w: usize,
    v: usize,
    n: u32,
    observed: &VarSet,
    round: u32,
    out: &mut Vec<GameMove>,
) -> bool {
    if ma.atoms_at(w, observed) != mb.atoms_at(v, observed) {
        out.push(GameMove::AtomsDisagree);
        return false;
    }
    if n == 0 {
        return true;
    }
    // find the first challenger move, if any, that refutes the position
    let mut ws = ma.up_mask(w);
    while ws != 0 {
        let w2 = ws.trailing_zeros() as usize;
        ws &= ws - 1;
        if answer_on_right(ma, mb, w2, v, n - 1, observed).is_none() {
            out.push(GameMove::DefenderStuck {
                round,
                challenger_side: "left",
                challenger_to: w2,
            });
            return false;
        }
    }
    let mut vs = mb.up_mask(v);
    while vs != 0 {
        let v2 = vs.trailing_zeros() as usize;
        vs &= vs - 1;
        if answer_on_left(ma, mb, w, v2, n - 1, observed).is_none() {
            out.push(GameMove::DefenderStuck {
                round,
                challenger_side: "right",
                challenger_to: v2,
            });
            return false;
        }
    }
    // defender wins; record one representative exchange per round, following
    // the first proper (non-stuttering) challenger move when one exists
    let ws = ma.up_mask(w) & !(1 << w);
    if ws != 0 {
        let w2 = ws.trailing_zeros() as usize;
        let v2 = answer_on_right(ma, mb, w2, v, n - 1, observed).unwrap();
        out.push(GameMove::Round {
            round,
            challenger_side: "left",
            challenger_to: w2,
            defender_to: v2,
        });
        trace_rec(ma, mb, w2, v2, n - 1, observed, round + 1, out);
        return true;
    }
    let vs = mb.up_mask(v) & !(1 << v);
    if vs != 0 {
        let v2 = vs.trailing_zeros() as usize;
        let w2 = answer_on_left(ma, mb, w, v2, n - 1, observed).unwrap();
        out.push(GameMove::Round {
            round,
            challenger_side: "right",
            challenger_to: v2,
            defender_to: w2,
        });
        trace_rec(ma, mb, w2, v2, n - 1, observed, round + 1, out);
    }
    true
}

fn answer_on_right(
    ma: &KripkeModel,
    mb: &KripkeModel,
    w2: usize,
    v: usize,
    n: u32,
    observed: &VarSet,
) -> Option<usize> {
    let mut vs = mb.up_mask(v);
    while vs != 0 {
        let v2 = vs.trailing_zeros() as usize;
        vs &= vs - 1;
        if game_rec(ma, mb, w2, v2, n, observed) {
            return Some(v2);
        }
    }
    None
}

fn answer_on_left(
    ma: &KripkeModel,
    mb: &KripkeModel,
    w: usize,
    v2: usize,
    n: u32,
    observed: &VarSet,
) -> Option<usize> {
    let mut ws = ma.up_mask(w);
    while ws != 0 {
        let w2 = ws.trailing_zeros() as usize;
        ws &= ws - 1;
        if game_rec(ma, mb, w2, v2, n, observed) {
            return Some(w2);
        }
    }
    None
}

/// Bisimilarity classes of every point of a universe, computed in one
/// signature-refinement pass over the disjoint union of all models.
///
/// Two points are assigned the same class iff they are bisimilar with
/// respect to `observed`. Class ids are dense and deterministic.
#[derive(Debug)]
pub struct UniverseClasses {
    pub class_of: Vec<u32>,
    pub class_count: usize,
}

pub fn classify_universe(u: &ModelUniverse, observed: &VarSet) -> UniverseClasses {
    let n = u.point_count();
    // initial partition: observed atoms at the point
    let mut class_of: Vec<u32> = Vec::with_capacity(n);
    let mut first_ids: HashMap<u64, u32> = HashMap::new();
    for i in 0..n {
        let (mi, w) = u.point_coords(i);
        let key = u.models()[mi].atoms_at(w, observed);
        let next = first_ids.len() as u32;
        let id = *first_ids.entry(key).or_insert(next);
        class_of.push(id);
    }
    let mut count = first_ids.len();

    loop {
        let mut ids: HashMap<(u32, Vec<u32>), u32> = HashMap::new();
        let mut next: Vec<u32> = Vec::with_capacity(n);
        for i in 0..n {
            let mut succ: Vec<u32> = u.successors(i).map(|j| class_of[j]).collect();
            succ.sort_unstable();
            succ.dedup();
            let key = (class_of[i], succ);
            let fresh = ids.len() as u32;
            let id = *ids.entry(key).or_insert(fresh);
            next.push(id);
        }
        let new_count = ids.len();
        class_of = next;
        if new_count == count {
            break;
        }
        count = new_count;
    }

    UniverseClasses {
        class_of,
        class_count: count,
    }
}

/// Directed depth-bounded comparison of every pair of points of a universe.
///
/// `le(i, j)` holds iff point `i` is below point `j` in the depth-`n`
/// preorder over `observed`. Computed level by level on the disjoint union.
pub struct BoundedMatrix {
    n_points: usize,
    words_per_row: usize,
    le: Vec<u64>,
}

impl BoundedMatrix {
    pub fn compute(u: &ModelUniverse, observed: &VarSet, depth: u32) -> BoundedMatrix {
        let n = u.point_count();
        let words = n.div_ceil(64);
        let atoms: Vec<u64> = (0..n)
            .map(|i| {
                let (mi, w) = u.point_coords(i);
                u.models()[mi].atoms_at(w, observed)
            })
            .collect();

        // depth 0: atom inclusion
        let mut le = vec![0u64; n * words];
        for i in 0..n {
            for j in 0..n {
                if atoms[i] & !atoms[j] == 0 {
                    le[i * words + j / 64] |= 1 << (j % 64);
                }
            }
        }

        let succs: Vec<Vec<usize>> = (0..n).map(|i| u.successors(i).collect()).collect();

        for _ in 0..depth {
            // sim = le & transpose(le)
            let mut sim = vec![0u64; n * words];
            for i in 0..n {
                for j in 0..n {
                    if le[i * words + j / 64] >> (j % 64) & 1 == 1
                        && le[j * words + i / 64] >> (i % 64) & 1 == 1
                    {
                        sim[i * words + j / 64] |= 1 << (j % 64);
                    }
                }
            }
            let mut next = vec![0u64; n * words];
            for i in 0..n {
                'pair: for j in 0..n {
                    for &j2 in &succs[j] {
                        let matched = succs[i]
                            .iter()
                            .any(|&i2| sim[i2 * words + j2 / 64] >> (j2 % 64) & 1 == 1);
                        if !matched {
                            continue 'pair;
                        }
                    }
                    next[i * words + j / 64] |= 1 << (j % 64);
                }
            }
            le = next;
        }

        BoundedMatrix {
            n_points: n,
            words_per_row: words,
            le,
        }
    }

    pub fn le(&self, i: usize, j: usize) -> bool {
        self.le[i * self.words_per_row + j / 64] >> (j % 64) & 1 == 1
    }

    pub fn sim(&self, i: usize, j: usize) -> bool {
        self.le(i, j) && self.le(j, i)
    }

    pub fn len(&self) -> usize {
        self.n_points
    }

    pub fn is_empty(&self) -> bool {
        self.n_points == 0
    }
}
