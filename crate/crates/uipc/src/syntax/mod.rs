//! Formula syntax: abstract syntax tree, variable sets, structural measures,
//! substitution and printing.
//!
//! Formulas are built from named variables, the constants `T` and `F`, and the
//! binary connectives `/\`, `\/`, `->`. Negation `~x` is surface sugar for
//! `x -> F`. Top is a primitive of depth 0, so it does not count as an
//! implication nesting the way `F -> F` would.

mod parser;

pub use parser::{parse, ParseError};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Propositional formula over named variables.
///
/// Structural equality (`==`) is plain tree equality; logical equivalence is
/// the business of the prover.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Var(String),
    Bot,
    Top,
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
}

/// True iff `name` is a valid variable identifier: `[a-zA-Z][a-zA-Z0-9_]*`,
/// excluding the reserved constants `T` and `F`.
pub fn is_identifier(name: &str) -> bool {
    if name == "T" || name == "F" {
        return false;
    }
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Formula {
    /// Variable with the given name. Panics if the name is not a valid
    /// identifier; user-facing input goes through `parse`, which reports
    /// errors instead.
    pub fn var(name: impl Into<String>) -> Formula {
        let name = name.into();
        assert!(is_identifier(&name), "invalid variable name: {name:?}");
        Formula::Var(name)
    }

    pub fn and(l: Formula, r: Formula) -> Formula {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Formula {
        Formula::Or(Box::new(l), Box::new(r))
    }

    pub fn imp(l: Formula, r: Formula) -> Formula {
        Formula::Imp(Box::new(l), Box::new(r))
    }

    pub fn neg(f: Formula) -> Formula {
        Formula::imp(f, Formula::Bot)
    }

    /// N-ary conjunction, folded right-associatively. Empty input yields `T`.
    pub fn conj(items: impl IntoIterator<Item = Formula>) -> Formula {
        let items: Vec<Formula> = items.into_iter().collect();
        match items.split_last() {
            None => Formula::Top,
            Some((last, init)) => init
                .iter()
                .rev()
                .fold(last.clone(), |acc, f| Formula::and(f.clone(), acc)),
        }
    }

    /// N-ary disjunction, folded right-associatively. Empty input yields `F`.
    pub fn disj(items: impl IntoIterator<Item = Formula>) -> Formula {
        let items: Vec<Formula> = items.into_iter().collect();
        match items.split_last() {
            None => Formula::Bot,
            Some((last, init)) => init
                .iter()
                .rev()
                .fold(last.clone(), |acc, f| Formula::or(f.clone(), acc)),
        }
    }

    /// Implication nesting depth: variables and constants have depth 0,
    /// `/\` and `\/` take the max of their children, `->` adds one.
    pub fn depth(&self) -> u32 {
        match self {
            Formula::Var(_) | Formula::Bot | Formula::Top => 0,
            Formula::And(l, r) | Formula::Or(l, r) => l.depth().max(r.depth()),
            Formula::Imp(l, r) => 1 + l.depth().max(r.depth()),
        }
    }

    /// Number of AST nodes; used as the primary key when picking the
    /// smallest representative of an equivalence class.
    pub fn size(&self) -> usize {
        match self {
            Formula::Var(_) | Formula::Bot | Formula::Top => 1,
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Imp(l, r) => 1 + l.size() + r.size(),
        }
    }

    /// The set of variable names occurring in the formula.
    pub fn vars(&self) -> VarSet {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        VarSet { names: out }
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Var(v) => {
                out.insert(v.clone());
            }
            Formula::Bot | Formula::Top => {}
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Imp(l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
        }
    }

    /// Simultaneous substitution: every occurrence of a mapped variable is
    /// replaced in one pass, so `substitute(p, {p -> q, q -> p})` is `q`.
    pub fn substitute(&self, map: &BTreeMap<String, Formula>) -> Formula {
        match self {
            Formula::Var(v) => match map.get(v) {
                Some(f) => f.clone(),
                None => self.clone(),
            },
            Formula::Bot | Formula::Top => self.clone(),
            Formula::And(l, r) => Formula::and(l.substitute(map), r.substitute(map)),
            Formula::Or(l, r) => Formula::or(l.substitute(map), r.substitute(map)),
            Formula::Imp(l, r) => Formula::imp(l.substitute(map), r.substitute(map)),
        }
    }
}

// Precedence levels for printing: -> is 1 (right-assoc), \/ is 2 (left),
// /\ is 3 (left), ~ is 4. A child is parenthesized when its level is below
// the context's requirement, which keeps output minimal and round-trippable.
fn write_prec(f: &Formula, min: u8, out: &mut String) {
    match f {
        Formula::Var(v) => out.push_str(v),
        Formula::Bot => out.push('F'),
        Formula::Top => out.push('T'),
        Formula::Imp(l, r) if **r == Formula::Bot => {
            // negation sugar
            out.push('~');
            write_prec(l, 4, out);
        }
        Formula::Imp(l, r) => {
            let paren = min > 1;
            if paren {
                out.push('(');
            }
            write_prec(l, 2, out);
            out.push_str(" -> ");
            write_prec(r, 1, out);
            if paren {
                out.push(')');
            }
        }
        Formula::Or(l, r) => {
            let paren = min > 2;
            if paren {
                out.push('(');
            }
            write_prec(l, 2, out);
            out.push_str(" \\/ ");
            write_prec(r, 3, out);
            if paren {
                out.push(')');
            }
        }
        Formula::And(l, r) => {
            let paren = min > 3;
            if paren {
                out.push('(');
            }
            write_prec(l, 3, out);
            out.push_str(" /\\ ");
            write_prec(r, 4, out);
            if paren {
                out.push(')');
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        write_prec(self, 1, &mut s);
        f.write_str(&s)
    }
}

/// Finite set of variable names with sorted, deterministic iteration order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct VarSet {
    names: BTreeSet<String>,
}

impl VarSet {
    pub fn new() -> VarSet {
        VarSet::default()
    }

    pub fn singleton(name: impl Into<String>) -> VarSet {
        let mut names = BTreeSet::new();
        names.insert(name.into());
        VarSet { names }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.names.contains(name)
    }

    pub fn insert(&mut self, name: impl Into<String>) {
        self.names.insert(name.into());
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.names.iter().map(|s| s.as_str())
    }

    pub fn union(&self, other: &VarSet) -> VarSet {
        VarSet {
            names: self.names.union(&other.names).cloned().collect(),
        }
    }

    pub fn difference(&self, other: &VarSet) -> VarSet {
        VarSet {
            names: self.names.difference(&other.names).cloned().collect(),
        }
    }

    pub fn intersection(&self, other: &VarSet) -> VarSet {
        VarSet {
            names: self.names.intersection(&other.names).cloned().collect(),
        }
    }

    pub fn is_subset(&self, other: &VarSet) -> bool {
        self.names.is_subset(&other.names)
    }

    pub fn remove(&self, name: &str) -> VarSet {
        let mut names = self.names.clone();
        names.remove(name);
        VarSet { names }
    }

    /// Position of `name` in the sorted order, if present.
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

impl FromIterator<String> for VarSet {
    fn from_iter<T: IntoIterator<Item = String>>(iter: T) -> Self {
        VarSet {
            names: iter.into_iter().collect(),
        }
    }
}

impl<'a> FromIterator<&'a str> for VarSet {
    fn from_iter<T: IntoIterator<Item = &'a str>>(iter: T) -> Self {
        VarSet {
            names: iter.into_iter().map(|s| s.to_string()).collect(),
        }
    }
}

impl fmt::Display for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for name in &self.names {
            if !first {
                f.write_str(",")?;
            }
            f.write_str(name)?;
            first = false;
        }
        Ok(())
    }
}
