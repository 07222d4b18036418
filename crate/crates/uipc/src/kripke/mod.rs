//! Finite intuitionistic Kripke models: construction, forcing, semantic
//! classes over enumerated universes, and the on-disk model format.
//!
//! Node sets are capped at 64 so that node sets fit in a machine word; every
//! per-model computation below works on bitmasks.

mod enumerate;
mod format;

pub use enumerate::enumerate_universe;
pub use format::{format_model, parse_model};

use crate::syntax::{Formula, VarSet};
use std::collections::BTreeMap;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("relation is not reflexive at node {node}")]
    NotReflexive { node: usize },
    #[error("relation is not transitive: {a} <= {b} <= {c} but not {a} <= {c}")]
    NotTransitive { a: usize, b: usize, c: usize },
    #[error("valuation of `{var}` is not upward closed: {lo} <= {hi} but only {lo} satisfies it")]
    ValuationNotUpwardClosed { var: String, lo: usize, hi: usize },
    #[error("node index {node} out of range for a model with {size} nodes")]
    NodeOutOfRange { node: usize, size: usize },
    #[error("unknown variable `{var}` (model signature: {sig})")]
    UnknownVariable { var: String, sig: String },
    #[error("variable `{var}` is not in the model signature")]
    VariableOutsideSignature { var: String },
    #[error("models must have between 1 and 64 nodes, got {size}")]
    BadSize { size: usize },
    #[error("universe enumeration exceeded the cap of {cap} pointed models")]
    UniverseCapExceeded { cap: usize },
    #[error("universes with more than {max} nodes per model exceed the enumeration budget")]
    UniverseTooLarge { max: usize },
    #[error("model file, line {line}: {message}")]
    Format { line: usize, message: String },
}

/// Finite preordered node set with persistent valuations.
///
/// `up[w]` is the bitmask of all `v` with `w <= v`; it always contains `w`
/// itself. Valuations map each signature variable to an upward-closed mask.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct KripkeModel {
    size: usize,
    up: Vec<u64>,
    sig: VarSet,
    val: BTreeMap<String, u64>,
}

impl KripkeModel {
    /// Build a model from generating order pairs. The reflexive-transitive
    /// closure is taken automatically; upward closure of the valuations is
    /// validated, not repaired.
    pub fn new(
        size: usize,
        pairs: &[(usize, usize)],
        sig: VarSet,
        valuation: &BTreeMap<String, Vec<usize>>,
    ) -> Result<KripkeModel, ModelError> {
        if size == 0 || size > 64 {
            return Err(ModelError::BadSize { size });
        }
        let mut up = vec![0u64; size];
        for (i, mask) in up.iter_mut().enumerate() {
            *mask |= 1 << i;
        }
        for &(a, b) in pairs {
            for &n in [a, b].iter() {
                if n >= size {
                    return Err(ModelError::NodeOutOfRange { node: n, size });
                }
            }
            up[a] |= 1 << b;
        }
        // Reflexive-transitive closure by iterated mask propagation.
        loop {
            let mut changed = false;
            for w in 0..size {
                let mut reach = up[w];
                let mut rest = reach;
                while rest != 0 {
                    let v = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    reach |= up[v];
                }
                if reach != up[w] {
                    up[w] = reach;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }

        let mut val = BTreeMap::new();
        for var in sig.iter() {
            let mut mask = 0u64;
            if let Some(nodes) = valuation.get(var) {
                for &n in nodes {
                    if n >= size {
                        return Err(ModelError::NodeOutOfRange { node: n, size });
                    }
                    mask |= 1 << n;
                }
            }
            val.insert(var.to_string(), mask);
        }
        for (var, _) in valuation {
            if !sig.contains(var) {
                return Err(ModelError::VariableOutsideSignature { var: var.clone() });
            }
        }

        let model = KripkeModel { size, up, sig, val };
        model.validate_valuations()?;
        Ok(model)
    }

    /// Build a model from an explicit relation, validating reflexivity and
    /// transitivity instead of closing.
    pub fn from_relation(
        size: usize,
        relation: &[(usize, usize)],
        sig: VarSet,
        valuation: &BTreeMap<String, Vec<usize>>,
    ) -> Result<KripkeModel, ModelError> {
        if size == 0 || size > 64 {
            return Err(ModelError::BadSize { size });
        }
        let mut up = vec![0u64; size];
        for &(a, b) in relation {
            for &n in [a, b].iter() {
                if n >= size {
                    return Err(ModelError::NodeOutOfRange { node: n, size });
                }
            }
            up[a] |= 1 << b;
        }
        for (w, mask) in up.iter().enumerate() {
            if mask & (1 << w) == 0 {
                return Err(ModelError::NotReflexive { node: w });
            }
        }
        for a in 0..size {
            let mut rest = up[a];
            while rest != 0 {
                let b = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                if up[b] & !up[a] != 0 {
                    let c = (up[b] & !up[a]).trailing_zeros() as usize;
                    return Err(ModelError::NotTransitive { a, b, c });
                }
            }
        }
        let mut val = BTreeMap::new();
        for var in sig.iter() {
            let mut mask = 0u64;
            if let Some(nodes) = valuation.get(var) {
                for &n in nodes {
                    mask |= 1 << n;
                }
            }
            val.insert(var.to_string(), mask);
        }
        let model = KripkeModel { size, up, sig, val };
        model.validate_valuations()?;
        Ok(model)
    }

    pub(crate) fn from_masks(size: usize, up: Vec<u64>, sig: VarSet, val: BTreeMap<String, u64>) -> KripkeModel {
        KripkeModel { size, up, sig, val }
    }

    fn validate_valuations(&self) -> Result<(), ModelError> {
        for (var, &mask) in &self.val {
            for w in 0..self.size {
                if mask & (1 << w) != 0 && self.up[w] & !mask != 0 {
                    let hi = (self.up[w] & !mask).trailing_zeros() as usize;
                    return Err(ModelError::ValuationNotUpwardClosed {
                        var: var.clone(),
                        lo: w,
                        hi,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn signature(&self) -> &VarSet {
        &self.sig
    }

    /// Bitmask of successors of `w` (including `w`).
    pub fn up_mask(&self, w: usize) -> u64 {
        self.up[w]
    }

    /// Bitmask of nodes where `var` holds.
    pub fn val_mask(&self, var: &str) -> Option<u64> {
        self.val.get(var).copied()
    }

    fn all_mask(&self) -> u64 {
        if self.size == 64 {
            u64::MAX
        } else {
            (1u64 << self.size) - 1
        }
    }

    /// Bitmask of nodes forcing `phi`, computed bottom-up over the formula.
    pub fn forcing_mask(&self, phi: &Formula) -> Result<u64, ModelError> {
        Ok(match phi {
            Formula::Var(v) => match self.val.get(v) {
                Some(&mask) => mask,
                None => {
                    return Err(ModelError::UnknownVariable {
                        var: v.clone(),
                        sig: self.sig.to_string(),
                    })
                }
            },
            Formula::Bot => 0,
            Formula::Top => self.all_mask(),
            Formula::And(l, r) => self.forcing_mask(l)? & self.forcing_mask(r)?,
            Formula::Or(l, r) => self.forcing_mask(l)? | self.forcing_mask(r)?,
            Formula::Imp(l, r) => {
                let bad = self.forcing_mask(l)? & !self.forcing_mask(r)?;
                let mut mask = 0u64;
                for w in 0..self.size {
                    if self.up[w] & bad == 0 {
                        mask |= 1 << w;
                    }
                }
                mask
            }
        })
    }

    /// Atom mask at a node, restricted to `observed` (in sorted var order:
    /// bit i corresponds to the i-th observed variable).
    pub fn atoms_at(&self, w: usize, observed: &VarSet) -> u64 {
        let mut key = 0u64;
        for (i, var) in observed.iter().enumerate() {
            if let Some(&mask) = self.val.get(var) {
                if mask & (1 << w) != 0 {
                    key |= 1 << i;
                }
            }
        }
        key
    }
}

/// A model with a distinguished node.
#[derive(Debug, Clone)]
pub struct PointedModel {
    pub model: Arc<KripkeModel>,
    pub point: usize,
}

impl PointedModel {
    pub fn new(model: Arc<KripkeModel>, point: usize) -> Result<PointedModel, ModelError> {
        if point >= model.size() {
            return Err(ModelError::NodeOutOfRange {
                node: point,
                size: model.size(),
            });
        }
        Ok(PointedModel { model, point })
    }
}

/// Does the pointed model force the formula?
pub fn forces(m: &PointedModel, phi: &Formula) -> Result<bool, ModelError> {
    Ok(m.model.forcing_mask(phi)? & (1 << m.point) != 0)
}

/// Is the set of nodes forcing `phi` upward closed? Kripke monotonicity says
/// this always holds; the check exists so tests can say so exhaustively.
pub fn persistence_check(m: &KripkeModel, phi: &Formula) -> Result<bool, ModelError> {
    let mask = m.forcing_mask(phi)?;
    for w in 0..m.size() {
        if mask & (1 << w) != 0 && m.up_mask(w) & !mask != 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All pointed models over a signature up to a node bound, reduced up to
/// isomorphism, in a deterministic order.
#[derive(Debug)]
pub struct ModelUniverse {
    pub signature: VarSet,
    pub max_nodes: usize,
    models: Vec<Arc<KripkeModel>>,
    /// Index of the first point of each model in the flat point list.
    point_base: Vec<usize>,
    /// Flat list of (model index, node).
    points: Vec<(usize, usize)>,
}

impl ModelUniverse {
    pub(crate) fn from_models(sig: VarSet, max_nodes: usize, models: Vec<KripkeModel>) -> ModelUniverse {
        let models: Vec<Arc<KripkeModel>> = models.into_iter().map(Arc::new).collect();
        let mut point_base = Vec::with_capacity(models.len());
        let mut points = Vec::new();
        for (i, m) in models.iter().enumerate() {
            point_base.push(points.len());
            for w in 0..m.size() {
                points.push((i, w));
            }
        }
        ModelUniverse {
            signature: sig,
            max_nodes,
            models,
            point_base,
            points,
        }
    }

    pub fn models(&self) -> &[Arc<KripkeModel>] {
        &self.models
    }

    pub fn point_count(&self) -> usize {
        self.points.len()
    }

    pub fn point(&self, i: usize) -> PointedModel {
        let (m, w) = self.points[i];
        PointedModel {
            model: Arc::clone(&self.models[m]),
            point: w,
        }
    }

    /// (model index, node) of point `i`.
    pub fn point_coords(&self, i: usize) -> (usize, usize) {
        self.points[i]
    }

    pub fn point_index(&self, model_idx: usize, node: usize) -> usize {
        self.point_base[model_idx] + node
    }

    /// Point indices of all successors of point `i` within its model.
    pub fn successors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        let (m, w) = self.points[i];
        let base = self.point_base[m];
        let mask = self.models[m].up_mask(w);
        (0..self.models[m].size()).filter_map(move |v| {
            if mask & (1 << v) != 0 {
                Some(base + v)
            } else {
                None
            }
        })
    }
}

/// A set of points of some universe, as a bit vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PointSet {
    words: Vec<u64>,
    universe_len: usize,
}

impl PointSet {
    pub fn empty(universe_len: usize) -> PointSet {
        PointSet {
            words: vec![0; universe_len.div_ceil(64)],
            universe_len,
        }
    }

    pub fn full(universe_len: usize) -> PointSet {
        let mut s = PointSet::empty(universe_len);
        for i in 0..universe_len {
            s.insert(i);
        }
        s
    }

    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] & (1 << (i % 64)) != 0
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn universe_len(&self) -> usize {
        self.universe_len
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.universe_len).filter(move |&i| self.contains(i))
    }

    pub fn union(&self, other: &PointSet) -> PointSet {
        debug_assert_eq!(self.universe_len, other.universe_len);
        PointSet {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a | b)
                .collect(),
            universe_len: self.universe_len,
        }
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }
}

/// The set of points of `u` forcing `phi`.
pub fn semantic_class(phi: &Formula, u: &ModelUniverse) -> Result<PointSet, ModelError> {
    if !phi.vars().is_subset(&u.signature) {
        let extra = phi.vars().difference(&u.signature);
        let var = extra.iter().next().unwrap_or("?").to_string();
        return Err(ModelError::UnknownVariable {
            var,
            sig: u.signature.to_string(),
        });
    }
    let mut set = PointSet::empty(u.point_count());
    for (mi, model) in u.models().iter().enumerate() {
        let mask = model.forcing_mask(phi)?;
        let base = u.point_base[mi];
        for w in 0..model.size() {
            if mask & (1 << w) != 0 {
                set.insert(base + w);
            }
        }
    }
    Ok(set)
}
