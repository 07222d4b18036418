//! Resource limits and the session object shared by the search-heavy
//! operations.

use crate::kripke::{enumerate_universe, ModelError, ModelUniverse};
use crate::prover::Prover;
use crate::syntax::VarSet;
use crate::theories::{build_basis, BasisError, TheoryBasis};
use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

/// Tunable limits. Environment variables `UIPC_STEP_BUDGET`,
/// `UIPC_MODELS_CAP` and `UIPC_BASIS_CAP` override the defaults;
/// command-line flags override both.
#[derive(Debug, Clone)]
pub struct Config {
    /// Maximum proof-search rule applications per entailment query.
    pub step_budget: u64,
    /// Maximum number of pointed models in an enumerated universe.
    pub universe_cap: usize,
    /// Maximum number of equivalence classes per basis layer.
    pub basis_cap: usize,
    /// Coarse work budget for basis construction, in fingerprint word
    /// operations. Guards against closures that would only reach the class
    /// cap after unbounded amounts of work.
    pub basis_op_budget: u64,
    /// Rounds of (depth, universe-size) deepening in interpolant synthesis.
    pub deepening_rounds: u32,
    /// Starting universe bound for interpolant synthesis.
    pub default_universe_nodes: usize,
    /// Depth of the representative family used for the bounded
    /// consequence-minimality check.
    pub default_verify_depth: u32,
}

impl Default for Config {
    fn default() -> Config {
        Config {
            step_budget: 10_000_000,
            universe_cap: 200_000,
            basis_cap: 20_000,
            basis_op_budget: 4_000_000_000,
            deepening_rounds: 5,
            default_universe_nodes: 3,
            default_verify_depth: 2,
        }
    }
}

impl Config {
    /// Defaults with environment overrides applied.
    pub fn from_env() -> Config {
        let mut cfg = Config::default();
        if let Some(v) = read_env("UIPC_STEP_BUDGET") {
            cfg.step_budget = v;
        }
        if let Some(v) = read_env("UIPC_MODELS_CAP") {
            cfg.universe_cap = v as usize;
        }
        if let Some(v) = read_env("UIPC_BASIS_CAP") {
            cfg.basis_cap = v as usize;
        }
        cfg
    }
}

fn read_env(name: &str) -> Option<u64> {
    std::env::var(name).ok()?.trim().parse().ok()
}

/// A configuration plus the shared prover (with its memo tables) and caches
/// for enumerated universes and bases. All deduction-dependent operations
/// take a `&Session`. Cached values depend only on their keys and the fixed
/// configuration, so caching never changes a result.
pub struct Session {
    pub config: Config,
    prover: Prover,
    universes: Mutex<BTreeMap<(VarSet, usize), Result<Arc<ModelUniverse>, ModelError>>>,
    bases: Mutex<BTreeMap<(VarSet, u32), Result<Arc<TheoryBasis>, BasisError>>>,
}

impl Session {
    pub fn new(config: Config) -> Session {
        let prover = Prover::new(config.step_budget);
        Session {
            config,
            prover,
            universes: Mutex::new(BTreeMap::new()),
            bases: Mutex::new(BTreeMap::new()),
        }
    }

    pub fn prover(&self) -> &Prover {
        &self.prover
    }

    /// Enumerated universe over `sig` with the given node bound, cached.
    pub fn universe(
        &self,
        sig: &VarSet,
        max_nodes: usize,
    ) -> Result<Arc<ModelUniverse>, ModelError> {
        let key = (sig.clone(), max_nodes);
        if let Some(cached) = self.universes.lock().unwrap().get(&key) {
            return cached.clone();
        }
        let result =
            enumerate_universe(sig, max_nodes, self.config.universe_cap).map(Arc::new);
        self.universes.lock().unwrap().insert(key, result.clone());
        result
    }

    /// Representative basis for `sig` at `depth`, cached (including failed
    /// attempts, so a capped construction is only paid for once).
    pub fn basis(&self, sig: &VarSet, depth: u32) -> Result<Arc<TheoryBasis>, BasisError> {
        let key = (sig.clone(), depth);
        if let Some(cached) = self.bases.lock().unwrap().get(&key) {
            return cached.clone();
        }
        let result = build_basis(sig, depth, self).map(Arc::new);
        self.bases.lock().unwrap().insert(key, result.clone());
        result
    }
}

impl Default for Session {
    fn default() -> Session {
        Session::new(Config::default())
    }
}
