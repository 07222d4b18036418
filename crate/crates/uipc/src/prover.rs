//! Decision procedures: intuitionistic entailment by terminating
//! contraction-free backward proof search, and classical validity by truth
//! tables.
//!
//! The intuitionistic search works on sequents `Γ ⊢ G` where `Γ` is a set.
//! Left rules are keyed on the shape of the antecedent of an implication, so
//! no rule ever needs contraction and every rule application strictly
//! decreases a well-founded weight; the search therefore terminates on every
//! input. Sequents are interned and memoized, so repeated queries over a
//! shared `Prover` amortize well.

use crate::syntax::Formula;
use std::collections::HashMap;
use std::sync::Mutex;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProverError {
    #[error("proof search exceeded the step budget of {budget} rule applications")]
    StepBudgetExceeded { budget: u64 },
}

/// A sequent: finite antecedent multiset and one succedent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sequent {
    pub antecedents: Vec<Formula>,
    pub succedent: Formula,
}

/// Interned formula node. Children are indices into the interner arena, so
/// sequent keys hash quickly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Node {
    Var(u32),
    Bot,
    Top,
    And(u32, u32),
    Or(u32, u32),
    Imp(u32, u32),
}

#[derive(Default)]
struct Interner {
    nodes: Vec<Node>,
    index: HashMap<Node, u32>,
    sym_names: Vec<String>,
    sym_index: HashMap<String, u32>,
}

impl Interner {
    fn intern_node(&mut self, node: Node) -> u32 {
        if let Some(&id) = self.index.get(&node) {
            return id;
        }
        let id = self.nodes.len() as u32;
        self.nodes.push(node);
        self.index.insert(node, id);
        id
    }

    fn intern(&mut self, f: &Formula) -> u32 {
        let node = match f {
            Formula::Var(name) => {
                let sym = match self.sym_index.get(name) {
                    Some(&s) => s,
                    None => {
                        let s = self.sym_names.len() as u32;
                        self.sym_names.push(name.clone());
                        self.sym_index.insert(name.clone(), s);
                        s
                    }
                };
                Node::Var(sym)
            }
            Formula::Bot => Node::Bot,
            Formula::Top => Node::Top,
            Formula::And(l, r) => {
                let (l, r) = (self.intern(l), self.intern(r));
                Node::And(l, r)
            }
            Formula::Or(l, r) => {
                let (l, r) = (self.intern(l), self.intern(r));
                Node::Or(l, r)
            }
            Formula::Imp(l, r) => {
                let (l, r) = (self.intern(l), self.intern(r));
                Node::Imp(l, r)
            }
        };
        self.intern_node(node)
    }
}

struct SearchState {
    interner: Interner,
    memo: HashMap<(Box<[u32]>, u32), bool>,
}

/// Entailment oracle. Cheap to share; queries behave like a pure function.
pub struct Prover {
    state: Mutex<SearchState>,
    step_budget: u64,
}

impl Prover {
    pub fn new(step_budget: u64) -> Prover {
        Prover {
            state: Mutex::new(SearchState {
                interner: Interner::default(),
                memo: HashMap::new(),
            }),
            step_budget,
        }
    }

    /// Does `phi ⊢ psi` hold intuitionistically?
    pub fn ipc_entails(&self, phi: &Formula, psi: &Formula) -> Result<bool, ProverError> {
        self.prove_sequent(&Sequent {
            antecedents: vec![phi.clone()],
            succedent: psi.clone(),
        })
    }

    /// Mutual intuitionistic entailment.
    pub fn ipc_equiv(&self, phi: &Formula, psi: &Formula) -> Result<bool, ProverError> {
        Ok(self.ipc_entails(phi, psi)? && self.ipc_entails(psi, phi)?)
    }

    /// Is `phi` an intuitionistic theorem?
    pub fn ipc_valid(&self, phi: &Formula) -> Result<bool, ProverError> {
        self.ipc_entails(&Formula::Top, phi)
    }

    /// Decide a sequent by backward search.
    pub fn prove_sequent(&self, sequent: &Sequent) -> Result<bool, ProverError> {
        let mut state = self.state.lock().unwrap();
        let mut gamma: Vec<u32> = sequent
            .antecedents
            .iter()
            .map(|f| state.interner.intern(f))
            .collect();
        gamma.sort_unstable();
        gamma.dedup();
        let goal = state.interner.intern(&sequent.succedent);
        let mut steps = self.step_budget;
        search(&mut state, gamma, goal, &mut steps).map_err(|_| ProverError::StepBudgetExceeded {
            budget: self.step_budget,
        })
    }

    /// Classical validity by exhaustive truth-table evaluation.
    pub fn cpc_valid(phi: &Formula) -> bool {
        let vars: Vec<String> = phi.vars().iter().map(|s| s.to_string()).collect();
        let n = vars.len();
        debug_assert!(n < 30, "truth table over {n} variables");
        for assignment in 0u64..(1u64 << n) {
            if !eval_classical(phi, &vars, assignment) {
                return false;
            }
        }
        true
    }

    /// Classical entailment `phi ⊨ psi`.
    pub fn cpc_entails(phi: &Formula, psi: &Formula) -> bool {
        Self::cpc_valid(&Formula::imp(phi.clone(), psi.clone()))
    }
}

fn eval_classical(f: &Formula, vars: &[String], assignment: u64) -> bool {
    match f {
        Formula::Var(v) => {
            let i = vars.iter().position(|w| w == v).expect("var in table");
            assignment >> i & 1 == 1
        }
        Formula::Bot => false,
        Formula::Top => true,
        Formula::And(l, r) => {
            eval_classical(l, vars, assignment) && eval_classical(r, vars, assignment)
        }
        Formula::Or(l, r) => {
            eval_classical(l, vars, assignment) || eval_classical(r, vars, assignment)
        }
        Formula::Imp(l, r) => {
            !eval_classical(l, vars, assignment) || eval_classical(r, vars, assignment)
        }
    }
}

struct Budget;

const TOP: u32 = u32::MAX; // never a real id; used as a sentinel nowhere, kept out

fn search(
    state: &mut SearchState,
    mut gamma: Vec<u32>,
    goal: u32,
    steps: &mut u64,
) -> Result<bool, Budget> {
    let _ = TOP;
    if *steps == 0 {
        return Err(Budget);
    }
    *steps -= 1;

    gamma.sort_unstable();
    gamma.dedup();
    let key = (gamma.clone().into_boxed_slice(), goal);
    if let Some(&known) = state.memo.get(&key) {
        return Ok(known);
    }

    let result = search_inner(state, gamma, goal, steps)?;
    state.memo.insert(key, result);
    Ok(result)
}

fn search_inner(
    state: &mut SearchState,
    mut gamma: Vec<u32>,
    goal: u32,
    steps: &mut u64,
) -> Result<bool, Budget> {
    // Saturate with the invertible left rules. Each pass either removes a
    // formula or replaces it with strictly lighter material.
    loop {
        if state.interner.nodes[goal as usize] == Node::Top {
            return Ok(true);
        }
        if gamma.binary_search(&goal).is_ok() {
            return Ok(true);
        }

        let mut changed = false;
        let mut i = 0;
        while i < gamma.len() {
            let id = gamma[i];
            match state.interner.nodes[id as usize] {
                Node::Bot => return Ok(true),
                Node::Top => {
                    gamma.remove(i);
                    changed = true;
                }
                Node::And(a, b) => {
                    gamma.remove(i);
                    insert_sorted(&mut gamma, a);
                    insert_sorted(&mut gamma, b);
                    changed = true;
                }
                Node::Imp(lhs, rhs) => match state.interner.nodes[lhs as usize] {
                    _ if state.interner.nodes[rhs as usize] == Node::Top => {
                        // x -> T carries no information
                        gamma.remove(i);
                        changed = true;
                    }
                    Node::Bot => {
                        gamma.remove(i);
                        changed = true;
                    }
                    Node::Top => {
                        gamma.remove(i);
                        insert_sorted(&mut gamma, rhs);
                        changed = true;
                    }
                    Node::Var(_) if gamma.binary_search(&lhs).is_ok() => {
                        gamma.remove(i);
                        insert_sorted(&mut gamma, rhs);
                        changed = true;
                    }
                    Node::And(a, b) => {
                        // (a /\ b) -> c  ~>  a -> (b -> c)
                        gamma.remove(i);
                        let inner = state.interner.intern_node(Node::Imp(b, rhs));
                        let curried = state.interner.intern_node(Node::Imp(a, inner));
                        insert_sorted(&mut gamma, curried);
                        changed = true;
                    }
                    Node::Or(a, b) => {
                        // (a \/ b) -> c  ~>  a -> c, b -> c
                        gamma.remove(i);
                        let left = state.interner.intern_node(Node::Imp(a, rhs));
                        let right = state.interner.intern_node(Node::Imp(b, rhs));
                        insert_sorted(&mut gamma, left);
                        insert_sorted(&mut gamma, right);
                        changed = true;
                    }
                    _ => i += 1,
                },
                _ => i += 1,
            }
        }
        if !changed {
            break;
        }
    }

    // Invertible right rules.
    match state.interner.nodes[goal as usize] {
        Node::And(a, b) => {
            return Ok(search(state, gamma.clone(), a, steps)? && search(state, gamma, b, steps)?);
        }
        Node::Imp(a, b) => {
            insert_sorted(&mut gamma, a);
            return search(state, gamma, b, steps);
        }
        _ => {}
    }

    // Disjunctions on the left split the search; both branches must close.
    if let Some(i) = gamma
        .iter()
        .position(|&id| matches!(state.interner.nodes[id as usize], Node::Or(_, _)))
    {
        let id = gamma[i];
        let (a, b) = match state.interner.nodes[id as usize] {
            Node::Or(a, b) => (a, b),
            _ => unreachable!(),
        };
        let mut left = gamma.clone();
        left.remove(i);
        let mut right = left.clone();
        insert_sorted(&mut left, a);
        insert_sorted(&mut right, b);
        return Ok(search(state, left, goal, steps)? && search(state, right, goal, steps)?);
    }

    // Choice phase: right disjunction introduction and the one
    // non-invertible left implication rule, tried in deterministic order.
    if let Node::Or(a, b) = state.interner.nodes[goal as usize] {
        if search(state, gamma.clone(), a, steps)? || search(state, gamma.clone(), b, steps)? {
            return Ok(true);
        }
    }

    for i in 0..gamma.len() {
        let id = gamma[i];
        if let Node::Imp(lhs, rhs) = state.interner.nodes[id as usize] {
            if let Node::Imp(a, b) = state.interner.nodes[lhs as usize] {
                // ((a -> b) -> c) on the left:
                //   premise 1:  Γ, b -> c  ⊢  a -> b
                //   premise 2:  Γ, c       ⊢  goal
                let mut rest = gamma.clone();
                rest.remove(i);
                let mut first = rest.clone();
                let bc = state.interner.intern_node(Node::Imp(b, rhs));
                insert_sorted(&mut first, bc);
                if search(state, first, lhs, steps)? {
                    let mut second = rest;
                    insert_sorted(&mut second, rhs);
                    if search(state, second, goal, steps)? {
                        return Ok(true);
                    }
                }
                let _ = a;
            }
        }
    }

    Ok(false)
}

fn insert_sorted(v: &mut Vec<u32>, x: u32) {
    if let Err(i) = v.binary_search(&x) {
        v.insert(i, x);
    }
}
