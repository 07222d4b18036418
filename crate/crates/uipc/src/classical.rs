//! Uniform interpolants for classical propositional logic, by substituting
//! every truth-value vector for the eliminated variables.
//!
//! The right interpolant of `psi` with respect to `ps` is the disjunction of
//! all variants `psi[ps := bs]` over `bs` in `{F, T}^ps`; the left
//! interpolant is the corresponding conjunction. Both are returned in a
//! constant-propagated form by default, with the raw substitution form
//! available for audit.

use crate::syntax::{Formula, VarSet};
use std::collections::BTreeMap;

/// All substitution variants of `psi`, one per truth-value vector over `ps`,
/// in binary counting order (all-false first) over the sorted variables.
fn variants(psi: &Formula, ps: &VarSet) -> Vec<Formula> {
    let vars: Vec<&str> = ps.iter().collect();
    let count = 1u64 << vars.len();
    (0..count)
        .map(|bits| {
            let map: BTreeMap<String, Formula> = vars
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    let value = if bits >> i & 1 == 1 {
                        Formula::Top
                    } else {
                        Formula::Bot
                    };
                    (v.to_string(), value)
                })
                .collect();
            psi.substitute(&map)
        })
        .collect()
}

/// Raw right interpolant: the disjunction of all variants, unsimplified.
pub fn cpc_right_ui_raw(psi: &Formula, ps: &VarSet) -> Formula {
    Formula::disj(variants(psi, ps))
}

/// Raw left interpolant: the conjunction of all variants, unsimplified.
pub fn cpc_left_ui_raw(theta: &Formula, qs: &VarSet) -> Formula {
    Formula::conj(variants(theta, qs))
}

/// Right uniform interpolant of `psi` with respect to `ps`, with constants
/// propagated.
pub fn cpc_right_ui(psi: &Formula, ps: &VarSet) -> Formula {
    simplify_constants(&cpc_right_ui_raw(psi, ps))
}

/// Left uniform interpolant of `theta` with respect to `qs`, with constants
/// propagated.
pub fn cpc_left_ui(theta: &Formula, qs: &VarSet) -> Formula {
    simplify_constants(&cpc_left_ui_raw(theta, qs))
}

/// Bottom-up constant propagation plus syntactic idempotence: `x /\ T = x`,
/// `x \/ F = x`, `F -> x = T`, `x /\ x = x`, and the rest of the unit and
/// absorbing laws. Purely structural; never changes the classical or
/// intuitionistic meaning.
pub fn simplify_constants(f: &Formula) -> Formula {
    match f {
        Formula::Var(_) | Formula::Bot | Formula::Top => f.clone(),
        Formula::And(l, r) => {
            let (l, r) = (simplify_constants(l), simplify_constants(r));
            match (&l, &r) {
                (Formula::Bot, _) | (_, Formula::Bot) => Formula::Bot,
                (Formula::Top, _) => r,
                (_, Formula::Top) => l,
                _ if l == r => l,
                _ => Formula::and(l, r),
            }
        }
        Formula::Or(l, r) => {
            let (l, r) = (simplify_constants(l), simplify_constants(r));
            match (&l, &r) {
                (Formula::Top, _) | (_, Formula::Top) => Formula::Top,
                (Formula::Bot, _) => r,
                (_, Formula::Bot) => l,
                _ if l == r => l,
                _ => Formula::or(l, r),
            }
        }
        Formula::Imp(l, r) => {
            let (l, r) = (simplify_constants(l), simplify_constants(r));
            match (&l, &r) {
                (Formula::Bot, _) => Formula::Top,
                (_, Formula::Top) => Formula::Top,
                (Formula::Top, _) => r,
                _ => Formula::imp(l, r),
            }
        }
    }
}
