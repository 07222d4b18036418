//! Depth-bounded equivalence-class bases: for a signature and a depth bound,
//! one representative formula per equivalence class of formulas up to that
//! implication depth, together with the bounded theory of a pointed model.
//!
//! Construction is layered. Layer 0 is the closure of the variables and the
//! two constants under meet and join modulo equivalence; layer k+1 closes
//! layer k plus all implications between layer-k representatives. Soundness
//! of the layering: every depth k+1 formula distributes into a lattice
//! combination of depth-0 atoms and implications whose sides have depth at
//! most k, and equivalence is a congruence for the implication.
//!
//! Equivalence dedup is driven by forcing fingerprints over a fixed internal
//! model universe. A fingerprint mismatch always separates classes (the
//! universe contains real models); a fingerprint match is conclusive only
//! when the universe is known to realize every bounded-bisimilarity class at
//! the working depth, and otherwise is confirmed by the prover.

use crate::bisim::BoundedMatrix;
use crate::config::Session;
use crate::kripke::{enumerate_universe, ModelError, ModelUniverse, PointedModel};
use crate::prover::ProverError;
use crate::syntax::{Formula, VarSet};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BasisError {
    #[error("basis for {{{sig}}} at depth {depth} exceeds the class cap of {cap}")]
    ClassCapExceeded { sig: String, depth: u32, cap: usize },
    #[error("basis construction exceeded its work budget of {budget} operations")]
    OpBudgetExceeded { budget: u64 },
    #[error(transparent)]
    Prover(#[from] ProverError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Representatives of the finitely many equivalence classes of formulas over
/// a signature with implication depth bounded by `depth`.
///
/// Representatives are pairwise inequivalent, each is the smallest member
/// discovered (by size, then printed form), and the list is sorted by that
/// same key.
#[derive(Debug)]
pub struct TheoryBasis {
    sig: VarSet,
    depth: u32,
    reps: Vec<Formula>,
    // forcing fingerprints over the internal universe, aligned with `reps`
    fps: Vec<Vec<u64>>,
    fp_exact: bool,
}

impl TheoryBasis {
    pub fn signature(&self) -> &VarSet {
        &self.sig
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn reps(&self) -> &[Formula] {
        &self.reps
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    /// Entailment between representatives. A fingerprint non-inclusion is a
    /// concrete countermodel, hence conclusive; an inclusion is conclusive
    /// when the fingerprints are exact and otherwise confirmed by the prover.
    pub fn rep_entails(
        &self,
        i: usize,
        j: usize,
        session: &Session,
    ) -> Result<bool, ProverError> {
        let included = self.fps[i]
            .iter()
            .zip(&self.fps[j])
            .all(|(a, b)| a & !b == 0);
        if !included {
            return Ok(false);
        }
        if self.fp_exact {
            return Ok(true);
        }
        session.prover().ipc_entails(&self.reps[i], &self.reps[j])
    }
}

/// The set of basis classes forced at a pointed model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheorySet {
    pub members: Vec<usize>,
}

impl TheorySet {
    pub fn is_subset(&self, other: &TheorySet) -> bool {
        self.members.iter().all(|m| other.members.binary_search(m).is_ok())
    }

    pub fn contains(&self, class: usize) -> bool {
        self.members.binary_search(&class).is_ok()
    }
}

/// Which basis classes does this pointed model force?
pub fn theory_of(m: &PointedModel, basis: &TheoryBasis) -> Result<TheorySet, ModelError> {
    let mut members = Vec::new();
    for (i, rep) in basis.reps.iter().enumerate() {
        if m.model.forcing_mask(rep)? & (1 << m.point) != 0 {
            members.push(i);
        }
    }
    Ok(TheorySet { members })
}

// Is fingerprint equality conclusive for formulas of depth <= n over k
// variables, against the internal universe used below? True exactly when
// every depth-n bisimilarity class of pointed models is realized within the
// universe's node bound:
//   - any signature at depth 0: single-node models carry every valuation;
//   - one variable up to depth 3: all classes realized by <= 4 nodes;
//   - two variables at depth 1: all 13 classes realized by <= 4 nodes.
fn fingerprint_exact(sig_len: usize, depth: u32) -> bool {
    matches!(
        (sig_len, depth),
        (0, _) | (_, 0) | (1, 1..=3) | (2, 1)
    )
}

fn fp_universe_nodes(sig_len: usize) -> usize {
    if sig_len <= 2 {
        4
    } else {
        3
    }
}

struct ClassEntry {
    rep: Formula,
    size: usize,
    fp: Vec<u64>,
}

struct Builder<'s> {
    session: &'s Session,
    u: ModelUniverse,
    words: usize,
    classes: Vec<ClassEntry>,
    by_fp: HashMap<Vec<u64>, Vec<usize>>,
    fp_exact: bool,
    ops_left: u64,
    sig: VarSet,
    depth: u32,
}

enum Candidate<'a> {
    Meet(&'a Formula, &'a Formula),
    Join(&'a Formula, &'a Formula),
    Imp(&'a Formula, &'a Formula),
    Atom(Formula),
}

impl Candidate<'_> {
    fn size(&self) -> usize {
        match self {
            Candidate::Meet(a, b) | Candidate::Join(a, b) | Candidate::Imp(a, b) => {
                a.size() + b.size() + 1
            }
            Candidate::Atom(f) => f.size(),
        }
    }

    fn build(&self) -> Formula {
        match self {
            Candidate::Meet(a, b) => Formula::and((*a).clone(), (*b).clone()),
            Candidate::Join(a, b) => Formula::or((*a).clone(), (*b).clone()),
            Candidate::Imp(a, b) => Formula::imp((*a).clone(), (*b).clone()),
            Candidate::Atom(f) => f.clone(),
        }
    }
}

impl<'s> Builder<'s> {
    fn charge(&mut self, amount: u64) -> Result<(), BasisError> {
        if self.ops_left < amount {
            return Err(BasisError::OpBudgetExceeded {
                budget: self.session.config.basis_op_budget,
            });
        }
        self.ops_left -= amount;
        Ok(())
    }

    fn classify(&mut self, fp: Vec<u64>, candidate: Candidate) -> Result<usize, BasisError> {
        self.charge(self.words as u64 + 8)?;
        if let Some(bucket) = self.by_fp.get(&fp) {
            let bucket = bucket.clone();
            if self.fp_exact {
                let idx = bucket[0];
                self.maybe_shrink_rep(idx, &candidate);
                return Ok(idx);
            }
            for idx in bucket {
                let formula = candidate.build();
                self.charge(1_000)?;
                if self
                    .session
                    .prover()
                    .ipc_equiv(&formula, &self.classes[idx].rep)?
                {
                    self.maybe_shrink_rep(idx, &candidate);
                    return Ok(idx);
                }
            }
        }
        // genuinely new class
        let idx = self.classes.len();
        if idx + 1 > self.session.config.basis_cap {
            return Err(BasisError::ClassCapExceeded {
                sig: self.sig.to_string(),
                depth: self.depth,
                cap: self.session.config.basis_cap,
            });
        }
        let formula = candidate.build();
        self.classes.push(ClassEntry {
            size: formula.size(),
            rep: formula,
            fp: fp.clone(),
        });
        self.by_fp.entry(fp).or_default().push(idx);
        Ok(idx)
    }

    fn maybe_shrink_rep(&mut self, idx: usize, candidate: &Candidate) {
        let cand_size = candidate.size();
        let current = &self.classes[idx];
        if cand_size > current.size {
            return;
        }
        let formula = candidate.build();
        if cand_size < current.size
            || formula.to_string() < current.rep.to_string()
        {
            self.classes[idx].rep = formula;
            self.classes[idx].size = cand_size;
        }
    }

    fn model_mask(&self, fp: &[u64], model_idx: usize) -> u64 {
        let model = &self.u.models()[model_idx];
        let mut mask = 0u64;
        for w in 0..model.size() {
            let point = self.u.point_index(model_idx, w);
            if fp[point / 64] >> (point % 64) & 1 == 1 {
                mask |= 1 << w;
            }
        }
        mask
    }

    fn imp_fp(&mut self, a: usize, b: usize) -> Result<Vec<u64>, BasisError> {
        self.charge(self.u.point_count() as u64)?;
        let mut fp = vec![0u64; self.words];
        for mi in 0..self.u.models().len() {
            let model = &self.u.models()[mi];
            let am = self.model_mask(&self.classes[a].fp, mi);
            let bm = self.model_mask(&self.classes[b].fp, mi);
            let bad = am & !bm;
            for w in 0..model.size() {
                if model.up_mask(w) & bad == 0 {
                    let point = self.u.point_index(mi, w);
                    fp[point / 64] |= 1 << (point % 64);
                }
            }
        }
        Ok(fp)
    }

    /// Close the current class set under meet and join. Pairs are processed
    /// in a deterministic order over a growing list.
    fn lattice_closure(&mut self) -> Result<(), BasisError> {
        let mut j = 1;
        while j < self.classes.len() {
            for i in 0..j {
                self.charge(2 * self.words as u64)?;
                let meet: Vec<u64> = self.classes[i]
                    .fp
                    .iter()
                    .zip(&self.classes[j].fp)
                    .map(|(x, y)| x & y)
                    .collect();
                let join: Vec<u64> = self.classes[i]
                    .fp
                    .iter()
                    .zip(&self.classes[j].fp)
                    .map(|(x, y)| x | y)
                    .collect();
                // split borrows: candidates reference reps by clone-on-build
                let (ri, rj) = (self.classes[i].rep.clone(), self.classes[j].rep.clone());
                self.classify(meet, Candidate::Meet(&ri, &rj))?;
                self.classify(join, Candidate::Join(&ri, &rj))?;
            }
            j += 1;
        }
        Ok(())
    }
}

/// Build the representative basis for `sig` at implication depth `depth`.
pub fn build_basis(
    sig: &VarSet,
    depth: u32,
    session: &Session,
) -> Result<TheoryBasis, BasisError> {
    let u = enumerate_universe(sig, fp_universe_nodes(sig.len()), session.config.universe_cap)?;
    let words = u.point_count().div_ceil(64);
    let fp_exact = fingerprint_exact(sig.len(), depth);
    let mut builder = Builder {
        session,
        u,
        words,
        classes: Vec::new(),
        by_fp: HashMap::new(),
        fp_exact,
        ops_left: session.config.basis_op_budget,
        sig: sig.clone(),
        depth,
    };

    // layer 0: constants and variables, closed under meet and join
    let bot_fp = vec![0u64; words];
    let mut top_fp = vec![0u64; words];
    for i in 0..builder.u.point_count() {
        top_fp[i / 64] |= 1 << (i % 64);
    }
    builder.classify(bot_fp, Candidate::Atom(Formula::Bot))?;
    builder.classify(top_fp, Candidate::Atom(Formula::Top))?;
    for var in sig.iter() {
        let f = Formula::var(var);
        let mut fp = vec![0u64; words];
        for mi in 0..builder.u.models().len() {
            let mask = builder.u.models()[mi].val_mask(var).unwrap_or(0);
            for w in 0..builder.u.models()[mi].size() {
                if mask & (1 << w) != 0 {
                    let point = builder.u.point_index(mi, w);
                    fp[point / 64] |= 1 << (point % 64);
                }
            }
        }
        builder.classify(fp, Candidate::Atom(f))?;
    }
    builder.lattice_closure()?;

    for _ in 0..depth {
        let layer_len = builder.classes.len();
        for a in 0..layer_len {
            for b in 0..layer_len {
                if a == b {
                    // a -> a is the unit, already present
                    continue;
                }
                let fp = builder.imp_fp(a, b)?;
                let (ra, rb) = (builder.classes[a].rep.clone(), builder.classes[b].rep.clone());
                builder.classify(fp, Candidate::Imp(&ra, &rb))?;
            }
        }
        builder.lattice_closure()?;
    }

    // sort representatives by (size, printed form)
    let mut order: Vec<usize> = (0..builder.classes.len()).collect();
    let keys: Vec<(usize, String)> = builder
        .classes
        .iter()
        .map(|c| (c.size, c.rep.to_string()))
        .collect();
    order.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
    let mut reps = Vec::with_capacity(order.len());
    let mut fps = Vec::with_capacity(order.len());
    for idx in order {
        reps.push(builder.classes[idx].rep.clone());
        fps.push(builder.classes[idx].fp.clone());
    }

    Ok(TheoryBasis {
        sig: sig.clone(),
        depth,
        reps,
        fps,
        fp_exact,
    })
}

/// One counterexample to the theory/bounded-comparison correspondence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoryViolation {
    pub left: usize,
    pub right: usize,
    pub bounded_le: bool,
    pub theory_included: bool,
}

/// Report of an exhaustive correspondence check over a universe.
#[derive(Debug)]
pub struct TheoriesReport {
    pub observed: VarSet,
    pub depth: u32,
    pub pairs_checked: usize,
    pub violations: Vec<TheoryViolation>,
}

/// For every ordered pair of points of `u`, compare the depth-`n` bounded
/// relation with inclusion of depth-`n` theories over `observed`. The two
/// computations share nothing: one walks successor structure, the other
/// evaluates representative formulas.
pub fn check_theories_prop(
    u: &ModelUniverse,
    n: u32,
    observed: &VarSet,
    session: &Session,
) -> Result<TheoriesReport, BasisError> {
    let basis = build_basis(observed, n, session)?;
    let words = basis.len().div_ceil(64).max(1);

    // theory bitmask per point
    let mut theories: Vec<Vec<u64>> = Vec::with_capacity(u.point_count());
    for mi in 0..u.models().len() {
        let model = &u.models()[mi];
        let rep_masks: Result<Vec<u64>, ModelError> = basis
            .reps()
            .iter()
            .map(|rep| model.forcing_mask(rep))
            .collect();
        let rep_masks = rep_masks?;
        for w in 0..model.size() {
            let mut t = vec![0u64; words];
            for (ri, mask) in rep_masks.iter().enumerate() {
                if mask & (1 << w) != 0 {
                    t[ri / 64] |= 1 << (ri % 64);
                }
            }
            theories.push(t);
        }
    }

    let matrix = BoundedMatrix::compute(u, observed, n);
    let mut violations = Vec::new();
    let mut pairs = 0usize;
    for i in 0..u.point_count() {
        for j in 0..u.point_count() {
            pairs += 1;
            let le = matrix.le(i, j);
            let incl = theories[i]
                .iter()
                .zip(&theories[j])
                .all(|(a, b)| a & !b == 0);
            if le != incl {
                violations.push(TheoryViolation {
                    left: i,
                    right: j,
                    bounded_le: le,
                    theory_included: incl,
                });
            }
        }
    }

    Ok(TheoriesReport {
        observed: observed.clone(),
        depth: n,
        pairs_checked: pairs,
        violations,
    })
}

/// Semantic count of depth-`depth` equivalence classes over `sig`:
/// the number of upward-closed unions of depth-`depth` bisimilarity classes
/// of pointed models with at most `max_nodes` nodes.
///
/// When the node bound realizes every bisimilarity class at that depth, this
/// equals the number of formula equivalence classes; it serves as an oracle
/// for `build_basis` that shares none of its machinery.
pub fn count_classes_semantic(
    sig: &VarSet,
    depth: u32,
    max_nodes: usize,
    cap: usize,
) -> Result<u64, ModelError> {
    let u = enumerate_universe(sig, max_nodes, cap)?;
    let matrix = BoundedMatrix::compute(&u, sig, depth);

    // quotient points by mutual comparison
    let mut rep_of_class: Vec<usize> = Vec::new();
    for i in 0..u.point_count() {
        if !rep_of_class.iter().any(|&r| matrix.sim(r, i)) {
            rep_of_class.push(i);
        }
    }
    let k = rep_of_class.len();
    assert!(k <= 60, "class poset too large to count upsets exactly");

    // strict order between class representatives
    let le = |a: usize, b: usize| matrix.le(rep_of_class[a], rep_of_class[b]);
    let mut up_masks = vec![0u64; k];
    for (a, mask) in up_masks.iter_mut().enumerate() {
        for b in 0..k {
            if le(a, b) {
                *mask |= 1 << b;
            }
        }
    }

    fn count_upsets(avail: u64, up_masks: &[u64], memo: &mut HashMap<u64, u64>) -> u64 {
        if avail == 0 {
            return 1;
        }
        if let Some(&v) = memo.get(&avail) {
            return v;
        }
        // pick an available element minimal among available ones
        let mut x = avail.trailing_zeros() as usize;
        'search: loop {
            for y in 0..up_masks.len() {
                if y != x
                    && avail >> y & 1 == 1
                    && up_masks[y] >> x & 1 == 1
                    && up_masks[x] >> y & 1 == 0
                {
                    x = y;
                    continue 'search;
                }
            }
            break;
        }
        let without_x = avail & !(1 << x);
        let without_up = avail & !up_masks[x];
        let result = count_upsets(without_x, up_masks, memo)
            + count_upsets(without_up, up_masks, memo);
        memo.insert(avail, result);
        result
    }

    let full = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
    Ok(count_upsets(full, &up_masks, &mut HashMap::new()))
}
