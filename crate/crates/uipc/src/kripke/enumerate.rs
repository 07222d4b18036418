//! Exhaustive enumeration of pointed models over a signature, up to
//! isomorphism.
//!
//! For each node count up to the bound we enumerate all labeled preorders
//! (reflexive transitive relations), attach every persistent valuation, and
//! keep one representative per isomorphism class. Isomorphism is canonical
//! labeling: the lexicographically least encoding over all node
//! permutations. The resulting order is deterministic.

use super::{KripkeModel, ModelError, ModelUniverse};
use crate::syntax::VarSet;
use std::collections::BTreeMap;

// Enumerating labeled preorders scans all off-diagonal bit patterns, which is
// 2^(n^2-n); beyond five nodes that is no longer a desk-scale computation.
const MAX_ENUMERABLE_NODES: usize = 5;

pub fn enumerate_universe(
    sig: &VarSet,
    max_nodes: usize,
    cap: usize,
) -> Result<ModelUniverse, ModelError> {
    if max_nodes == 0 {
        return Err(ModelError::BadSize { size: 0 });
    }
    if max_nodes > MAX_ENUMERABLE_NODES {
        return Err(ModelError::UniverseTooLarge {
            max: MAX_ENUMERABLE_NODES,
        });
    }

    let vars: Vec<String> = sig.iter().map(|s| s.to_string()).collect();
    let mut canonical: BTreeMap<Vec<u64>, KripkeModel> = BTreeMap::new();
    let mut point_count = 0usize;

    for n in 1..=max_nodes {
        let perms = permutations(n);
        for up in preorders(n) {
            let upsets = upward_closed_sets(n, &up);
            let mut choice = vec![0usize; vars.len()];
            loop {
                let val_masks: Vec<u64> = choice.iter().map(|&c| upsets[c]).collect();
                let enc = canonical_encoding(n, &up, &val_masks, &perms);
                if !canonical.contains_key(&enc) {
                    let model = decode(n, &enc, &vars, sig);
                    point_count += n;
                    if point_count > cap {
                        return Err(ModelError::UniverseCapExceeded { cap });
                    }
                    canonical.insert(enc, model);
                }
                // odometer over valuation choices
                let mut i = 0;
                loop {
                    if i == choice.len() {
                        break;
                    }
                    choice[i] += 1;
                    if choice[i] < upsets.len() {
                        break;
                    }
                    choice[i] = 0;
                    i += 1;
                }
                if choice.iter().all(|&c| c == 0) {
                    break;
                }
                if vars.is_empty() {
                    break;
                }
            }
        }
    }

    let models: Vec<KripkeModel> = canonical.into_values().collect();
    Ok(ModelUniverse::from_models(sig.clone(), max_nodes, models))
}

/// All reflexive transitive `up`-mask vectors on `n` labeled nodes.
fn preorders(n: usize) -> Vec<Vec<u64>> {
    let off_diag = n * n - n;
    let mut out = Vec::new();
    for bits in 0u64..(1u64 << off_diag) {
        let mut up = vec![0u64; n];
        let mut k = 0;
        for (w, mask) in up.iter_mut().enumerate() {
            *mask |= 1 << w;
            for v in 0..n {
                if v != w {
                    if bits >> k & 1 == 1 {
                        *mask |= 1 << v;
                    }
                    k += 1;
                }
            }
        }
        if is_transitive(n, &up) {
            out.push(up);
        }
    }
    out
}

fn is_transitive(n: usize, up: &[u64]) -> bool {
    for a in 0..n {
        let mut rest = up[a];
        while rest != 0 {
            let b = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if up[b] & !up[a] != 0 {
                return false;
            }
        }
    }
    true
}

fn upward_closed_sets(n: usize, up: &[u64]) -> Vec<u64> {
    (0u64..(1u64 << n))
        .filter(|&s| (0..n).all(|w| s & (1 << w) == 0 || up[w] & !s == 0))
        .collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut items: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    heap_permute(&mut items, n, &mut out);
    out
}

fn heap_permute(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == 1 {
        out.push(items.clone());
        return;
    }
    for i in 0..k {
        heap_permute(items, k - 1, out);
        if k % 2 == 0 {
            items.swap(i, k - 1);
        } else {
            items.swap(0, k - 1);
        }
    }
}

fn apply_perm_mask(mask: u64, perm: &[usize]) -> u64 {
    let mut out = 0u64;
    for (from, &to) in perm.iter().enumerate() {
        if mask & (1 << from) != 0 {
            out |= 1 << to;
        }
    }
    out
}

/// Encoding: `[n, up'[0], .., up'[n-1], val'[0], .., val'[k-1]]`, minimized
/// over all permutations of node labels.
fn canonical_encoding(n: usize, up: &[u64], vals: &[u64], perms: &[Vec<usize>]) -> Vec<u64> {
    let mut best: Option<Vec<u64>> = None;
    for perm in perms {
        let mut enc = Vec::with_capacity(1 + n + vals.len());
        enc.push(n as u64);
        let mut permuted_up = vec![0u64; n];
        for w in 0..n {
            permuted_up[perm[w]] = apply_perm_mask(up[w], perm);
        }
        enc.extend_from_slice(&permuted_up);
        for &v in vals {
            enc.push(apply_perm_mask(v, perm));
        }
        if best.as_ref().map_or(true, |b| enc < *b) {
            best = Some(enc);
        }
    }
    best.unwrap()
}

fn decode(n: usize, enc: &[u64], vars: &[String], sig: &VarSet) -> KripkeModel {
    let up = enc[1..1 + n].to_vec();
    let mut val = BTreeMap::new();
    for (i, var) in vars.iter().enumerate() {
        val.insert(var.clone(), enc[1 + n + i]);
    }
    KripkeModel::from_masks(n, up, sig.clone(), val)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kripke::{forces, semantic_class};
    use crate::syntax::parse;

    #[test]
    fn empty_signature_counts() {
        let u = enumerate_universe(&VarSet::new(), 1, 10_000).unwrap();
        assert_eq!(u.models().len(), 1);
        assert_eq!(u.point_count(), 1);

        // On two labeled nodes there are 4 preorders; up to isomorphism:
        // discrete, chain, and the two-element cluster.
        assert_eq!(preorders(2).len(), 4);
        let u = enumerate_universe(&VarSet::new(), 2, 10_000).unwrap();
        let two_node = u.models().iter().filter(|m| m.size() == 2).count();
        assert_eq!(two_node, 3);
        assert_eq!(u.models().len(), 4);
    }

    #[test]
    fn labeled_preorder_counts_match_known_values() {
        assert_eq!(preorders(1).len(), 1);
        assert_eq!(preorders(2).len(), 4);
        assert_eq!(preorders(3).len(), 29);
        assert_eq!(preorders(4).len(), 355);
    }

    #[test]
    fn one_variable_single_node() {
        let sig = VarSet::singleton("p");
        let u = enumerate_universe(&sig, 1, 10_000).unwrap();
        assert_eq!(u.point_count(), 2);
        let class = semantic_class(&parse("p").unwrap(), &u).unwrap();
        assert_eq!(class.len(), 1);
        let m = u.point(class.iter().next().unwrap());
        assert!(forces(&m, &parse("p").unwrap()).unwrap());
    }

    #[test]
    fn semantic_class_extremes() {
        let sig: VarSet = ["p", "q"].into_iter().collect();
        let u = enumerate_universe(&sig, 2, 100_000).unwrap();
        assert_eq!(semantic_class(&parse("T").unwrap(), &u).unwrap().len(), u.point_count());
        assert!(semantic_class(&parse("F").unwrap(), &u).unwrap().is_empty());
    }

    #[test]
    fn cap_and_size_errors() {
        let sig: VarSet = ["p", "q"].into_iter().collect();
        assert!(matches!(
            enumerate_universe(&sig, 3, 5),
            Err(ModelError::UniverseCapExceeded { cap: 5 })
        ));
        assert!(matches!(
            enumerate_universe(&sig, 6, 1_000_000),
            Err(ModelError::UniverseTooLarge { .. })
        ));
    }

    #[test]
    fn isomorphic_points_force_alike() {
        // Spot check: every universe member's forcing of a fixed formula list
        // is invariant under re-encoding the model (canonical form is stable).
        let sig = VarSet::singleton("p");
        let u = enumerate_universe(&sig, 3, 100_000).unwrap();
        let formulas: Vec<_> = ["p", "~p", "~~p", "p \\/ ~p"]
            .iter()
            .map(|s| parse(s).unwrap())
            .collect();
        for model in u.models() {
            let perms = permutations(model.size());
            let up: Vec<u64> = (0..model.size()).map(|w| model.up_mask(w)).collect();
            let vals: Vec<u64> = vec![model.val_mask("p").unwrap()];
            let enc = canonical_encoding(model.size(), &up, &vals, &perms);
            let recoded = decode(model.size(), &enc, &["p".to_string()], &sig);
            for f in &formulas {
                assert_eq!(
                    model.forcing_mask(f).unwrap().count_ones(),
                    recoded.forcing_mask(f).unwrap().count_ones()
                );
            }
        }
    }
}
