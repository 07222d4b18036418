//! Semantic synthesis of uniform interpolants.
//!
//! To eliminate `p` from `phi` on the right, take the class of all pointed
//! models of `phi` in a bounded universe, close it under bisimilarity that
//! ignores `p`, and express the closure as a disjunction, over its realized
//! bounded theories, of the conjunction of each theory. The left interpolant
//! restricts instead of closing. Candidates found this way are then verified
//! independently: the variable condition and the entailment direction exactly
//! via the prover, consequence-minimality against all representatives up to a
//! recorded depth, and semantic agreement with the class operator on the
//! universe used. Because verification is independent, a bound that turns out
//! too small can make synthesis fail (and the bounds deepen), but never lets
//! a wrong candidate through.

use crate::bisim::{classify_universe, BisimError, BoundedMatrix};
use crate::config::Session;
use crate::kripke::{semantic_class, ModelError, ModelUniverse, PointSet};
use crate::prover::ProverError;
use crate::syntax::{Formula, VarSet};
use crate::theories::{BasisError, TheoryBasis};
use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Right,
    Left,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Right => "right",
            Side::Left => "left",
        })
    }
}

#[derive(Debug, Error)]
pub enum UiError {
    #[error("no certified interpolant within {rounds} deepening rounds; best uncertified candidate: {}", .best.candidate)]
    DeepeningExhausted { rounds: u32, best: Box<UiResult> },
    #[error("the antecedent does not entail the consequent")]
    NotEntailed,
    #[error("certification failed: {check}")]
    CertificationFailed { check: String },
    #[error("formula uses variable `{var}`, which is outside the declared variables")]
    VariableOutsideScope { var: String },
    #[error(transparent)]
    Basis(#[from] BasisError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Prover(#[from] ProverError),
    #[error(transparent)]
    Bisim(#[from] BisimError),
}

/// Close `k` under bisimilarity that ignores `var`: all points of `u` with a
/// partner in `k` that agrees on every other signature variable.
pub fn class_exists(k: &PointSet, var: &str, u: &ModelUniverse) -> PointSet {
    class_exists_observed(k, &u.signature.remove(var), u)
}

pub fn class_exists_observed(k: &PointSet, observed: &VarSet, u: &ModelUniverse) -> PointSet {
    let classes = classify_universe(u, observed);
    let mut hit = vec![false; classes.class_count];
    for i in k.iter() {
        hit[classes.class_of[i] as usize] = true;
    }
    let mut out = PointSet::empty(u.point_count());
    for i in 0..u.point_count() {
        if hit[classes.class_of[i] as usize] {
            out.insert(i);
        }
    }
    out
}

/// Restrict `k` under the same notion: all points of `u` whose every partner
/// lies in `k`.
pub fn class_forall(k: &PointSet, var: &str, u: &ModelUniverse) -> PointSet {
    class_forall_observed(k, &u.signature.remove(var), u)
}

pub fn class_forall_observed(k: &PointSet, observed: &VarSet, u: &ModelUniverse) -> PointSet {
    let classes = classify_universe(u, observed);
    let mut all_in = vec![true; classes.class_count];
    for i in 0..u.point_count() {
        if !k.contains(i) {
            all_in[classes.class_of[i] as usize] = false;
        }
    }
    let mut out = PointSet::empty(u.point_count());
    for i in 0..u.point_count() {
        if all_in[classes.class_of[i] as usize] {
            out.insert(i);
        }
    }
    out
}

/// The distinct bounded theories realized by members of `k`, each as a
/// sorted list of basis class indices, in deterministic order.
fn realized_theories(
    k: &PointSet,
    basis: &TheoryBasis,
    u: &ModelUniverse,
) -> Result<Vec<Vec<usize>>, ModelError> {
    let mut theories: BTreeSet<Vec<usize>> = BTreeSet::new();
    for mi in 0..u.models().len() {
        let model = &u.models()[mi];
        let mut rep_masks: Option<Vec<u64>> = None;
        for w in 0..model.size() {
            let point = u.point_index(mi, w);
            if !k.contains(point) {
                continue;
            }
            if rep_masks.is_none() {
                let computed: Result<Vec<u64>, ModelError> = basis
                    .reps()
                    .iter()
                    .map(|rep| model.forcing_mask(rep))
                    .collect();
                rep_masks = Some(computed?);
            }
            let masks = rep_masks.as_ref().unwrap();
            let members: Vec<usize> = masks
                .iter()
                .enumerate()
                .filter_map(|(ri, mask)| {
                    if mask & (1 << w) != 0 {
                        Some(ri)
                    } else {
                        None
                    }
                })
                .collect();
            theories.insert(members);
        }
    }
    Ok(theories.into_iter().collect())
}

/// The canonical defining formula of a class of points: the disjunction,
/// over theories realized in `k`, of the conjunction of each theory's
/// representatives. Empty `k` yields `F`.
pub fn synthesize_chi(
    k: &PointSet,
    basis: &TheoryBasis,
    u: &ModelUniverse,
) -> Result<Formula, ModelError> {
    let theories = realized_theories(k, basis, u)?;
    Ok(Formula::disj(theories.into_iter().map(|tau| {
        Formula::conj(tau.into_iter().map(|i| basis.reps()[i].clone()))
    })))
}

/// Equivalence-preserving reduction of the disjunction-of-theories form.
/// Each conjunction collapses to a member that entails all the others (such
/// a member is equivalent to the whole conjunction), absorbed disjuncts are
/// dropped, and a candidate equivalent to a constant becomes that constant.
/// Every reduction step is justified by the prover or by the basis ordering,
/// so the result is always equivalent to the raw formula.
fn prune_candidate(
    theories: &[Vec<usize>],
    basis: &TheoryBasis,
    session: &Session,
) -> Result<Formula, ProverError> {
    let mut disjuncts: Vec<Formula> = Vec::new();
    for tau in theories {
        let mut minimal = None;
        'members: for &c in tau {
            for &j in tau {
                if j != c && !basis.rep_entails(c, j, session)? {
                    continue 'members;
                }
            }
            minimal = Some(c);
            break;
        }
        let formula = match minimal {
            Some(c) => basis.reps()[c].clone(),
            None => Formula::conj(tau.iter().map(|&i| basis.reps()[i].clone())),
        };
        if !disjuncts.contains(&formula) {
            disjuncts.push(formula);
        }
    }

    // drop any disjunct entailed by the disjunction of the others
    loop {
        let mut dropped = false;
        let mut idx = 0;
        while idx < disjuncts.len() {
            if disjuncts.len() == 1 {
                break;
            }
            let rest: Vec<Formula> = disjuncts
                .iter()
                .enumerate()
                .filter_map(|(i, f)| if i != idx { Some(f.clone()) } else { None })
                .collect();
            let rest_disj = Formula::disj(rest);
            if session.prover().ipc_entails(&disjuncts[idx], &rest_disj)? {
                disjuncts.remove(idx);
                dropped = true;
            } else {
                idx += 1;
            }
        }
        if !dropped {
            break;
        }
    }

    let candidate = Formula::disj(disjuncts);
    if session.prover().ipc_entails(&Formula::Top, &candidate)? {
        return Ok(Formula::Top);
    }
    if session.prover().ipc_entails(&candidate, &Formula::Bot)? {
        return Ok(Formula::Bot);
    }
    Ok(candidate)
}

/// A single-variable interpolation request. `None` bounds fall back to the
/// formula depth, the configured universe bound, and the configured
/// verification depth.
#[derive(Debug, Clone)]
pub struct UiRequest {
    pub phi: Formula,
    pub eliminate: String,
    pub side: Side,
    pub depth_bound: Option<u32>,
    pub universe_bound: Option<usize>,
    pub verify_depth: Option<u32>,
}

impl UiRequest {
    pub fn new(phi: Formula, eliminate: impl Into<String>, side: Side) -> UiRequest {
        UiRequest {
            phi,
            eliminate: eliminate.into(),
            side,
            depth_bound: None,
            universe_bound: None,
            verify_depth: None,
        }
    }
}

/// Outcome of the bounded consequence-minimality check (condition 3). The
/// requested depth may be lowered when the representative family for the
/// retained variables exceeds the class cap; the certificate then records
/// both depths and the reason, never silently.
#[derive(Debug, Clone)]
pub struct Condition3Report {
    pub requested_depth: u32,
    pub effective_depth: Option<u32>,
    pub reps_checked: usize,
    pub passed: Option<bool>,
    pub degraded: Option<String>,
}

impl Condition3Report {
    pub fn passed_at_requested_depth(&self) -> bool {
        self.passed == Some(true) && self.effective_depth == Some(self.requested_depth)
    }
}

/// Machine-checkable record of which verification conditions a candidate
/// passed, and at which bounds.
#[derive(Debug, Clone)]
pub struct Certificate {
    /// Candidate mentions only retained variables (exact).
    pub var_condition: bool,
    /// Entailment in the side's direction (exact, via the prover).
    pub entailment: bool,
    /// Bounded consequence-minimality (right) or antecedent-maximality (left).
    pub condition3: Condition3Report,
    /// Candidate's class coincides with the class-operator image on the
    /// universe used (bounded).
    pub semantic_equality: bool,
    pub depth_used: u32,
    pub universe_nodes_used: usize,
    pub rounds_used: u32,
    /// The unreduced disjunction-of-theories form, kept for audit.
    pub raw_candidate: Formula,
}

impl Certificate {
    /// The two exactness-critical checks; a result is only emitted as a
    /// candidate when both hold.
    pub fn certified(&self) -> bool {
        self.var_condition && self.entailment
    }
}

#[derive(Debug, Clone)]
pub struct UiResult {
    pub candidate: Formula,
    pub certificate: Certificate,
}

fn full_certificate_for_identity(phi: &Formula, m: u32) -> Certificate {
    Certificate {
        var_condition: true,
        entailment: true,
        condition3: Condition3Report {
            requested_depth: m,
            effective_depth: Some(m),
            reps_checked: 0,
            passed: Some(true),
            degraded: None,
        },
        semantic_equality: true,
        depth_used: 0,
        universe_nodes_used: 0,
        rounds_used: 0,
        raw_candidate: phi.clone(),
    }
}

fn check_condition3(
    phi: &Formula,
    candidate: &Formula,
    retained: &VarSet,
    requested: u32,
    side: Side,
    session: &Session,
) -> Result<Condition3Report, UiError> {
    let mut degraded: Option<String> = None;
    let mut chosen: Option<(Arc<TheoryBasis>, u32)> = None;
    let mut depth = requested as i64;
    while depth >= 0 {
        match session.basis(retained, depth as u32) {
            Ok(basis) => {
                chosen = Some((basis, depth as u32));
                break;
            }
            Err(
                err @ (BasisError::ClassCapExceeded { .. } | BasisError::OpBudgetExceeded { .. }),
            ) => {
                if degraded.is_none() {
                    degraded = Some(err.to_string());
                }
                depth -= 1;
            }
            Err(other) => return Err(other.into()),
        }
    }
    let Some((basis, effective)) = chosen else {
        return Ok(Condition3Report {
            requested_depth: requested,
            effective_depth: None,
            reps_checked: 0,
            passed: None,
            degraded,
        });
    };

    let prover = session.prover();
    let mut passed = true;
    for theta in basis.reps() {
        let broken = match side {
            Side::Right => {
                prover.ipc_entails(phi, theta)? && !prover.ipc_entails(candidate, theta)?
            }
            Side::Left => {
                prover.ipc_entails(theta, phi)? && !prover.ipc_entails(theta, candidate)?
            }
        };
        if broken {
            passed = false;
        }
    }
    Ok(Condition3Report {
        requested_depth: requested,
        effective_depth: Some(effective),
        reps_checked: basis.len(),
        passed: Some(passed),
        degraded,
    })
}

/// Synthesize and verify a single-variable uniform interpolant, deepening
/// the depth and universe bounds until the entailment direction certifies or
/// the round budget runs out.
pub fn uniform_interpolant(req: &UiRequest, session: &Session) -> Result<UiResult, UiError> {
    let phi_vars = req.phi.vars();
    let verify_depth = req
        .verify_depth
        .unwrap_or(session.config.default_verify_depth);
    if !phi_vars.contains(&req.eliminate) {
        // nothing to eliminate: the formula is its own interpolant
        return Ok(UiResult {
            candidate: req.phi.clone(),
            certificate: full_certificate_for_identity(&req.phi, verify_depth),
        });
    }
    let retained = phi_vars.remove(&req.eliminate);
    let start_depth = req.depth_bound.unwrap_or_else(|| req.phi.depth());
    let start_nodes = req
        .universe_bound
        .unwrap_or(session.config.default_universe_nodes);

    let mut best: Option<UiResult> = None;
    let mut last_feasible_depth: Option<u32> = None;
    for round in 0..session.config.deepening_rounds {
        let target_depth = start_depth + round;
        let nodes = start_nodes + round as usize;
        let u = session.universe(&phi_vars, nodes)?;
        let phi_class = semantic_class(&req.phi, &u)?;
        let image = match req.side {
            Side::Right => class_exists(&phi_class, &req.eliminate, &u),
            Side::Left => class_forall(&phi_class, &req.eliminate, &u),
        };
        // When deepening pushes the representative family past its cap, hold
        // the depth at the feasibility frontier and keep growing the
        // universe. A request whose starting depth is already infeasible
        // propagates the resource error untouched.
        let (basis, depth) = match session.basis(&retained, target_depth) {
            Ok(basis) => {
                last_feasible_depth = Some(target_depth);
                (basis, target_depth)
            }
            Err(
                err @ (BasisError::ClassCapExceeded { .. } | BasisError::OpBudgetExceeded { .. }),
            ) => match last_feasible_depth {
                Some(depth) => (session.basis(&retained, depth)?, depth),
                None => return Err(err.into()),
            },
            Err(other) => return Err(other.into()),
        };
        let theories = realized_theories(&image, &basis, &u)?;
        let raw = Formula::disj(
            theories
                .iter()
                .map(|tau| Formula::conj(tau.iter().map(|&i| basis.reps()[i].clone()))),
        );
        let candidate = prune_candidate(&theories, &basis, session)?;

        let var_condition = candidate.vars().is_subset(&retained);
        let prover = session.prover();
        let entailment = match req.side {
            Side::Right => prover.ipc_entails(&req.phi, &candidate)?,
            Side::Left => prover.ipc_entails(&candidate, &req.phi)?,
        };
        let semantic_equality = semantic_class(&candidate, &u)? == image;
        let condition3 = check_condition3(
            &req.phi,
            &candidate,
            &retained,
            verify_depth,
            req.side,
            session,
        )?;

        let result = UiResult {
            candidate,
            certificate: Certificate {
                var_condition,
                entailment,
                condition3,
                semantic_equality,
                depth_used: depth,
                universe_nodes_used: nodes,
                rounds_used: round + 1,
                raw_candidate: raw,
            },
        };
        if result.certificate.certified() {
            return Ok(result);
        }
        best = Some(result);
    }
    Err(UiError::DeepeningExhausted {
        rounds: session.config.deepening_rounds,
        best: Box::new(best.expect("at least one round ran")),
    })
}

/// Optional bound overrides for set elimination, applied to every
/// single-variable step.
#[derive(Debug, Clone, Default)]
pub struct UiBounds {
    pub depth: Option<u32>,
    pub universe: Option<usize>,
    pub verify: Option<u32>,
}

/// Eliminate a set of variables by iterating the single-variable operation
/// in sorted order, then verify the composite result against the original
/// formula with a fresh certificate.
pub fn uniform_interpolant_set(
    phi: &Formula,
    eliminate: &VarSet,
    side: Side,
    session: &Session,
) -> Result<UiResult, UiError> {
    uniform_interpolant_set_with(phi, eliminate, side, &UiBounds::default(), session)
}

pub fn uniform_interpolant_set_with(
    phi: &Formula,
    eliminate: &VarSet,
    side: Side,
    bounds: &UiBounds,
    session: &Session,
) -> Result<UiResult, UiError> {
    let retained = phi.vars().difference(eliminate);
    let verify_depth = bounds.verify.unwrap_or(session.config.default_verify_depth);

    let mut current = phi.clone();
    let mut depth_used = 0;
    let mut nodes_used = 0;
    let mut rounds_used = 0;
    let mut raw = phi.clone();
    let mut stepped = false;
    for var in eliminate.iter() {
        if !current.vars().contains(var) {
            continue;
        }
        let step = uniform_interpolant(
            &UiRequest {
                phi: current.clone(),
                eliminate: var.to_string(),
                side,
                depth_bound: bounds.depth,
                universe_bound: bounds.universe,
                verify_depth: bounds.verify,
            },
            session,
        )?;
        depth_used = depth_used.max(step.certificate.depth_used);
        nodes_used = nodes_used.max(step.certificate.universe_nodes_used);
        rounds_used = rounds_used.max(step.certificate.rounds_used);
        raw = step.certificate.raw_candidate.clone();
        current = step.candidate;
        stepped = true;
    }

    let var_condition = current.vars().is_subset(&retained);
    let prover = session.prover();
    let entailment = match side {
        Side::Right => prover.ipc_entails(phi, &current)?,
        Side::Left => prover.ipc_entails(&current, phi)?,
    };
    let condition3 = check_condition3(phi, &current, &retained, verify_depth, side, session)?;

    // composite semantic check: iterate the class operator over one universe
    // covering the original signature
    let semantic_equality = if stepped {
        let phi_vars = phi.vars();
        let nodes = nodes_used.max(
            bounds
                .universe
                .unwrap_or(session.config.default_universe_nodes),
        );
        let u = session.universe(&phi_vars, nodes)?;
        let mut image = semantic_class(phi, &u)?;
        let mut observed = phi_vars.clone();
        for var in eliminate.iter() {
            if !phi_vars.contains(var) {
                continue;
            }
            observed = observed.remove(var);
            image = match side {
                Side::Right => class_exists_observed(&image, &observed, &u),
                Side::Left => class_forall_observed(&image, &observed, &u),
            };
        }
        semantic_class(&current, &u)? == image
    } else {
        true
    };

    Ok(UiResult {
        candidate: current,
        certificate: Certificate {
            var_condition,
            entailment,
            condition3,
            semantic_equality,
            depth_used,
            universe_nodes_used: nodes_used,
            rounds_used,
            raw_candidate: raw,
        },
    })
}

/// Interpolant for a specific entailment: the right uniform interpolant of
/// the antecedent with respect to the variables absent from the consequent.
/// Both entailments and the variable condition are verified before the
/// result is returned.
pub fn craig_interpolant(
    psi: &Formula,
    theta: &Formula,
    session: &Session,
) -> Result<Formula, UiError> {
    if !session.prover().ipc_entails(psi, theta)? {
        return Err(UiError::NotEntailed);
    }
    let eliminate = psi.vars().difference(&theta.vars());
    let result = uniform_interpolant_set(psi, &eliminate, Side::Right, session)?;
    let candidate = result.candidate;

    if !candidate
        .vars()
        .is_subset(&psi.vars().intersection(&theta.vars()))
    {
        return Err(UiError::CertificationFailed {
            check: "interpolant mentions variables outside both sides".into(),
        });
    }
    if !session.prover().ipc_entails(psi, &candidate)? {
        return Err(UiError::CertificationFailed {
            check: "antecedent does not entail the interpolant".into(),
        });
    }
    if !session.prover().ipc_entails(&candidate, theta)? {
        return Err(UiError::CertificationFailed {
            check: "interpolant does not entail the consequent".into(),
        });
    }
    Ok(candidate)
}

/// An instance of the existential-closure axiom schema: the first-order
/// condition `Psi` (an existential conjunction of equations and inequations
/// over terms) together with its quantifier-free counterpart `Psi'` built
/// from computed interpolants, and the universal sentence asserting that the
/// second implies the first.
#[derive(Debug, Clone)]
pub struct AxiomInstance {
    pub xs: VarSet,
    pub y: String,
    pub phis: Vec<Formula>,
    pub psis: Vec<Formula>,
    /// Right interpolant of the conjunction of the `phis`, `y` eliminated.
    pub exists_part: UiResult,
    /// Left interpolants of `conj(phis) -> psi_j`, `y` eliminated.
    pub forall_parts: Vec<UiResult>,
    pub psi_text: String,
    pub psi_prime_text: String,
    pub sentence_text: String,
}

fn equation(f: &Formula, negated: bool) -> String {
    let printed = f.to_string();
    let wrapped = match f {
        Formula::Var(_) | Formula::Bot | Formula::Top => printed,
        _ => format!("({printed})"),
    };
    if negated {
        format!("{wrapped} \u{2260} T")
    } else {
        format!("{wrapped} = T")
    }
}

fn conjoin(parts: Vec<String>) -> String {
    if parts.is_empty() {
        "T = T".to_string()
    } else {
        parts.join(" \u{2227} ")
    }
}

/// Compute one axiom instance for variables `xs`, bound variable `y`, and
/// term lists `phis`, `psis` (all over `xs` and `y`).
pub fn model_completion_axiom(
    xs: &VarSet,
    y: &str,
    phis: &[Formula],
    psis: &[Formula],
    session: &Session,
) -> Result<AxiomInstance, UiError> {
    let mut scope = xs.clone();
    scope.insert(y);
    for f in phis.iter().chain(psis) {
        let extra = f.vars().difference(&scope);
        let outside: Option<String> = extra.iter().next().map(|v| v.to_string());
        if let Some(var) = outside {
            return Err(UiError::VariableOutsideScope { var });
        }
    }

    let conj_phi = Formula::conj(phis.iter().cloned());
    let exists_part =
        uniform_interpolant(&UiRequest::new(conj_phi.clone(), y, Side::Right), session)?;
    let mut forall_parts = Vec::with_capacity(psis.len());
    for psi in psis {
        let implication = Formula::imp(conj_phi.clone(), psi.clone());
        forall_parts.push(uniform_interpolant(
            &UiRequest::new(implication, y, Side::Left),
            session,
        )?);
    }

    for part in std::iter::once(&exists_part).chain(&forall_parts) {
        if !part.candidate.vars().is_subset(xs) {
            return Err(UiError::CertificationFailed {
                check: "computed interpolant mentions the bound variable".into(),
            });
        }
    }

    let psi_text = format!(
        "\u{2203}{y}. ({})",
        conjoin(
            phis.iter()
                .map(|f| equation(f, false))
                .chain(psis.iter().map(|f| equation(f, true)))
                .collect()
        )
    );
    let psi_prime_text = conjoin(
        std::iter::once(equation(&exists_part.candidate, false))
            .chain(forall_parts.iter().map(|p| equation(&p.candidate, true)))
            .collect(),
    );
    let inner = format!("{psi_prime_text} \u{2192} {psi_text}");
    let sentence_text = if xs.is_empty() {
        inner
    } else {
        format!("\u{2200}{xs}. ({inner})")
    };

    Ok(AxiomInstance {
        xs: xs.clone(),
        y: y.to_string(),
        phis: phis.to_vec(),
        psis: psis.to_vec(),
        exists_part,
        forall_parts,
        psi_text,
        psi_prime_text,
        sentence_text,
    })
}

/// Is the image of `phi`'s class under the side's operator closed upward in
/// the depth-`n` bounded preorder over the retained variables? Holds
/// whenever the bound is high enough for the image to be definable at that
/// depth.
pub fn image_upward_closed(
    phi: &Formula,
    eliminate: &str,
    side: Side,
    n: u32,
    u: &ModelUniverse,
) -> Result<bool, UiError> {
    let observed = u.signature.remove(eliminate);
    let phi_class = semantic_class(phi, u)?;
    let image = match side {
        Side::Right => class_exists_observed(&phi_class, &observed, u),
        Side::Left => class_forall_observed(&phi_class, &observed, u),
    };
    let matrix = BoundedMatrix::compute(u, &observed, n);
    for i in image.iter() {
        for j in 0..u.point_count() {
            if matrix.le(i, j) && !image.contains(j) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{Config, Session};
    use crate::syntax::parse;

    fn session() -> Session {
        Session::new(Config::default())
    }

    fn vs(names: &[&str]) -> VarSet {
        names.iter().copied().collect()
    }

    #[test]
    fn class_operator_examples() {
        let s = session();
        let sig = vs(&["p", "q"]);
        let u = s.universe(&sig, 2).unwrap();

        let all = PointSet::full(u.point_count());
        assert_eq!(class_exists(&all, "p", &u), all);
        assert_eq!(class_forall(&all, "p", &u), all);

        let none = PointSet::empty(u.point_count());
        assert_eq!(class_exists(&none, "p", &u), none);
        assert_eq!(class_forall(&none, "p", &u), none);

        // closing the models of p \/ q under bisimilarity that ignores p
        // reaches every model; restricting keeps exactly the models of q
        let k = semantic_class(&parse("p \\/ q").unwrap(), &u).unwrap();
        assert_eq!(class_exists(&k, "p", &u), all);
        let q_class = semantic_class(&parse("q").unwrap(), &u).unwrap();
        assert_eq!(class_forall(&k, "p", &u), q_class);
    }

    #[test]
    fn class_operator_sandwich() {
        // every class sits between its restriction and its closure
        let s = session();
        let sig = vs(&["p", "q"]);
        let u = s.universe(&sig, 3).unwrap();
        for text in ["p", "p -> q", "p /\\ q", "~p", "p \\/ q"] {
            let k = semantic_class(&parse(text).unwrap(), &u).unwrap();
            assert!(k.is_subset(&class_exists(&k, "p", &u)), "at {text}");
            assert!(class_forall(&k, "p", &u).is_subset(&k), "at {text}");
        }
    }

    #[test]
    fn synthesize_examples() {
        let s = session();
        let sig = vs(&["q"]);
        let u = s.universe(&sig, 2).unwrap();
        let basis = s.basis(&sig, 0).unwrap();

        let none = PointSet::empty(u.point_count());
        assert_eq!(synthesize_chi(&none, &basis, &u).unwrap(), Formula::Bot);

        let empty_sig_basis = s.basis(&vs(&[]), 0).unwrap();
        let all = PointSet::full(u.point_count());
        assert_eq!(
            synthesize_chi(&all, &empty_sig_basis, &u).unwrap(),
            Formula::Top
        );

        let q_class = semantic_class(&parse("q").unwrap(), &u).unwrap();
        let chi = synthesize_chi(&q_class, &basis, &u).unwrap();
        assert!(s.prover().ipc_equiv(&chi, &parse("q").unwrap()).unwrap());
    }

    #[test]
    fn right_interpolant_of_q_imp_p() {
        let s = session();
        let req = UiRequest::new(parse("q -> p").unwrap(), "p", Side::Right);
        let r = uniform_interpolant(&req, &s).unwrap();
        assert!(s.prover().ipc_equiv(&r.candidate, &Formula::Top).unwrap());
        assert!(r.certificate.certified());
        assert!(r.certificate.semantic_equality);
        assert_eq!(r.certificate.condition3.passed, Some(true));
    }

    #[test]
    fn right_interpolant_of_conjunction_chain() {
        let s = session();
        let req = UiRequest::new(parse("(q -> p) /\\ (p -> r)").unwrap(), "p", Side::Right);
        let r = uniform_interpolant(&req, &s).unwrap();
        assert!(s
            .prover()
            .ipc_equiv(&r.candidate, &parse("q -> r").unwrap())
            .unwrap());
        assert!(r.certificate.certified());
        assert!(r.certificate.semantic_equality);
    }

    #[test]
    fn left_interpolants() {
        let s = session();
        let r = uniform_interpolant(
            &UiRequest::new(parse("p \\/ q").unwrap(), "p", Side::Left),
            &s,
        )
        .unwrap();
        assert!(s
            .prover()
            .ipc_equiv(&r.candidate, &parse("q").unwrap())
            .unwrap());
        assert!(r.certificate.certified());

        let r = uniform_interpolant(&UiRequest::new(parse("p").unwrap(), "p", Side::Left), &s)
            .unwrap();
        assert!(s.prover().ipc_equiv(&r.candidate, &Formula::Bot).unwrap());
    }

    #[test]
    fn degenerate_variable_absent() {
        let s = session();
        let phi = parse("q -> r").unwrap();
        let r = uniform_interpolant(&UiRequest::new(phi.clone(), "p", Side::Right), &s).unwrap();
        assert_eq!(r.candidate, phi);
        assert!(r.certificate.certified());
        assert_eq!(r.certificate.rounds_used, 0);
    }

    #[test]
    fn set_elimination() {
        let s = session();
        let r = uniform_interpolant_set(
            &parse("p /\\ q /\\ r").unwrap(),
            &vs(&["p", "q"]),
            Side::Right,
            &s,
        )
        .unwrap();
        assert!(s
            .prover()
            .ipc_equiv(&r.candidate, &parse("r").unwrap())
            .unwrap());
        assert!(r.certificate.certified());
        assert!(r.certificate.semantic_equality);

        // empty set: identity
        let phi = parse("p -> q").unwrap();
        let r = uniform_interpolant_set(&phi, &vs(&[]), Side::Right, &s).unwrap();
        assert_eq!(r.candidate, phi);
    }

    #[test]
    fn set_elimination_order_independent() {
        let s = session();
        let phi = parse("(p -> q) /\\ (q -> r) /\\ p").unwrap();
        let forward = uniform_interpolant_set(&phi, &vs(&["p", "q"]), Side::Right, &s).unwrap();
        // iterate by hand in the opposite order
        let step_q =
            uniform_interpolant(&UiRequest::new(phi.clone(), "q", Side::Right), &s).unwrap();
        let step_p =
            uniform_interpolant(&UiRequest::new(step_q.candidate, "p", Side::Right), &s).unwrap();
        assert!(s
            .prover()
            .ipc_equiv(&forward.candidate, &step_p.candidate)
            .unwrap());
    }

    #[test]
    fn craig_examples() {
        let s = session();
        let c =
            craig_interpolant(&parse("p /\\ q").unwrap(), &parse("q \\/ r").unwrap(), &s).unwrap();
        assert!(s.prover().ipc_equiv(&c, &parse("q").unwrap()).unwrap());

        let c = craig_interpolant(&parse("q").unwrap(), &parse("q").unwrap(), &s).unwrap();
        assert!(s.prover().ipc_equiv(&c, &parse("q").unwrap()).unwrap());

        let c = craig_interpolant(&parse("F").unwrap(), &parse("r").unwrap(), &s).unwrap();
        assert!(s.prover().ipc_equiv(&c, &Formula::Bot).unwrap());

        assert!(matches!(
            craig_interpolant(&parse("p").unwrap(), &parse("q").unwrap(), &s),
            Err(UiError::NotEntailed)
        ));
    }

    #[test]
    fn axiom_instances() {
        let s = session();

        // single trivially-true term, no inequations
        let inst = model_completion_axiom(&vs(&[]), "y", &[Formula::Top], &[], &s).unwrap();
        assert_eq!(inst.psi_prime_text, "T = T");
        assert_eq!(inst.exists_part.candidate, Formula::Top);

        // phi = y, psi = x
        let inst = model_completion_axiom(
            &vs(&["x"]),
            "y",
            &[parse("y").unwrap()],
            &[parse("x").unwrap()],
            &s,
        )
        .unwrap();
        assert_eq!(inst.psi_prime_text, "T = T \u{2227} x \u{2260} T");
        assert!(inst.sentence_text.starts_with("\u{2200}x. ("));
        assert!(inst.exists_part.candidate.vars().is_subset(&vs(&["x"])));

        // phi = x -> y, psi = y: both parts go through the full pipeline
        let inst = model_completion_axiom(
            &vs(&["x"]),
            "y",
            &[parse("x -> y").unwrap()],
            &[parse("y").unwrap()],
            &s,
        )
        .unwrap();
        assert!(inst.exists_part.certificate.certified());
        assert!(inst.forall_parts[0].certificate.certified());
        assert!(inst.forall_parts[0].candidate.vars().is_subset(&vs(&["x"])));

        // scope validation
        assert!(matches!(
            model_completion_axiom(&vs(&["x"]), "y", &[parse("z").unwrap()], &[], &s),
            Err(UiError::VariableOutsideScope { .. })
        ));
    }

    #[test]
    fn certified_results_unique_up_to_equivalence() {
        let s = session();
        let phi = parse("(q -> p) /\\ (p -> r)").unwrap();
        let mut req = UiRequest::new(phi.clone(), "p", Side::Right);
        let a = uniform_interpolant(&req, &s).unwrap();
        req.universe_bound = Some(4);
        let b = uniform_interpolant(&req, &s).unwrap();
        assert!(s.prover().ipc_equiv(&a.candidate, &b.candidate).unwrap());

        let phi1 = parse("~~p \\/ q").unwrap();
        let mut req = UiRequest::new(phi1.clone(), "p", Side::Right);
        let a = uniform_interpolant(&req, &s).unwrap();
        req.universe_bound = Some(4);
        let b = uniform_interpolant(&req, &s).unwrap();
        assert!(s.prover().ipc_equiv(&a.candidate, &b.candidate).unwrap());
    }

    #[test]
    fn deepening_exhaustion_reports_best_candidate() {
        let mut config = Config::default();
        config.deepening_rounds = 1;
        let s = Session::new(config);
        // the starting universe misses one depth-1 model class, so the first
        // round cannot certify; with a single round allowed, the pipeline
        // reports its best uncertified attempt
        let req = UiRequest::new(parse("p /\\ q -> r").unwrap(), "p", Side::Right);
        match uniform_interpolant(&req, &s) {
            Err(UiError::DeepeningExhausted { rounds: 1, best }) => {
                assert!(!best.certificate.entailment);
                assert!(best.certificate.var_condition);
            }
            other => panic!("expected exhaustion, got {other:?}"),
        }
    }

    #[test]
    fn two_retained_variables_at_depth_two_hit_the_class_cap() {
        // The class count over two variables explodes beyond any feasible cap
        // at implication depth 2, so a request pinned to that depth reports a
        // resource error rather than an answer.
        let s = session();
        let mut req = UiRequest::new(
            parse("(q -> p) /\\ (p -> r)").unwrap(),
            "p",
            Side::Right,
        );
        req.depth_bound = Some(2);
        match uniform_interpolant(&req, &s) {
            Err(UiError::Basis(
                BasisError::ClassCapExceeded { .. } | BasisError::OpBudgetExceeded { .. },
            )) => {}
            other => panic!("expected a basis resource error, got {other:?}"),
        }
    }

    #[test]
    fn image_closure_probe() {
        let s = session();
        let u = s.universe(&vs(&["p", "q"]), 3).unwrap();
        for text in ["q -> p", "p \\/ q", "p /\\ q"] {
            let phi = parse(text).unwrap();
            let n = phi.depth().max(1);
            assert!(
                image_upward_closed(&phi, "p", Side::Right, n, &u).unwrap(),
                "right at {text}"
            );
            assert!(
                image_upward_closed(&phi, "p", Side::Left, n, &u).unwrap(),
                "left at {text}"
            );
        }
    }

    #[test]
    fn agrees_with_classical_projection_on_literal_conjunctions() {
        // on conjunctions of literals the intuitionistic and classical
        // interpolants coincide classically
        let s = session();
        for text in ["p /\\ q", "p /\\ ~q", "p /\\ q /\\ r", "~p /\\ r", "q /\\ p /\\ ~r"] {
            let phi = parse(text).unwrap();
            if !phi.vars().contains("p") {
                continue;
            }
            let classical = crate::classical::cpc_right_ui(&phi, &vs(&["p"]));
            let intuitionistic =
                uniform_interpolant(&UiRequest::new(phi.clone(), "p", Side::Right), &s)
                    .unwrap()
                    .candidate;
            let iff = Formula::and(
                Formula::imp(classical.clone(), intuitionistic.clone()),
                Formula::imp(intuitionistic, classical),
            );
            assert!(crate::prover::Prover::cpc_valid(&iff), "at {text}");
        }
    }
}
