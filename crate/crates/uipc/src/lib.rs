//! A workbench for computing and verifying uniform interpolants in
//! intuitionistic and classical propositional logic.
//!
//! The pieces fit together like this: [`syntax`] supplies formulas, [`prover`]
//! decides entailment, [`kripke`] enumerates and evaluates finite models,
//! [`bisim`] computes (bounded) bisimulations between them, [`theories`]
//! enumerates depth-bounded equivalence-class bases, and [`quantifiers`]
//! combines all of those to synthesize uniform interpolants semantically and
//! to verify the results with machine-checkable certificates.

pub mod bisim;
pub mod classical;
pub mod config;
pub mod kripke;
pub mod prover;
pub mod quantifiers;
pub mod syntax;
pub mod theories;

pub use config::{Config, Session};
pub use prover::{Prover, ProverError, Sequent};
pub use syntax::{parse, Formula, ParseError, VarSet};
