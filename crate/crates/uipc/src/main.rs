//! Command-line front end. Every subcommand prints in a stable textual
//! format and exits 0 on success, 1 on a logical negative, 2 on a usage or
//! input error, and 3 when a resource limit was hit.

use clap::{Parser, Subcommand, ValueEnum};
use std::collections::BTreeMap;
use std::process::ExitCode;
use uipc::bisim::{self, GameMove};
use uipc::classical;
use uipc::config::{Config, Session};
use uipc::kripke::{self, forces, semantic_class, ModelError, PointedModel};
use uipc::prover::{Prover, ProverError};
use uipc::quantifiers::{self, Side, UiError, UiRequest};
use uipc::syntax::{is_identifier, parse, Formula, ParseError, VarSet};
use uipc::theories::{self, BasisError};

#[derive(Parser)]
#[command(
    name = "uipc",
    version,
    about = "Uniform interpolation workbench for intuitionistic and classical propositional logic",
    propagate_version = true
)]
struct Cli {
    /// Proof search step budget (overrides UIPC_STEP_BUDGET)
    #[arg(long, global = true)]
    step_budget: Option<u64>,
    /// Maximum pointed models per universe (overrides UIPC_MODELS_CAP)
    #[arg(long, global = true)]
    models_cap: Option<usize>,
    /// Maximum classes per basis layer (overrides UIPC_BASIS_CAP)
    #[arg(long, global = true)]
    basis_cap: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Logic {
    Ipc,
    Cpc,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Right,
    Left,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Side {
        match s {
            SideArg::Right => Side::Right,
            SideArg::Left => Side::Left,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Decide validity of PHI, or the entailment PHI |- PSI
    Prove {
        #[arg(long, value_enum)]
        logic: Logic,
        phi: String,
        psi: Option<String>,
        /// On failure, search for and print a countermodel
        #[arg(long)]
        countermodel: bool,
        /// Node bound for the countermodel search
        #[arg(long, default_value_t = 4)]
        models: usize,
    },
    /// Compute a uniform interpolant of PHI
    Ui {
        #[arg(long, value_enum)]
        logic: Logic,
        #[arg(long, value_enum)]
        side: SideArg,
        /// Comma-separated variables to eliminate
        #[arg(long)]
        eliminate: String,
        /// Starting basis depth (defaults to the formula depth)
        #[arg(long)]
        depth: Option<u32>,
        /// Starting universe node bound
        #[arg(long)]
        models: Option<usize>,
        /// Depth of the family used for the minimality check
        #[arg(long)]
        verify_depth: Option<u32>,
        /// Print the verification certificate
        #[arg(long)]
        certificate: bool,
        /// Print only the interpolant, one line
        #[arg(long)]
        raw: bool,
        phi: String,
    },
    /// Compare two pointed models up to bisimilarity
    Bisim {
        /// Comma-separated observed variables
        #[arg(long)]
        observed: String,
        /// Bounded comparison at this depth (full bisimilarity if absent)
        #[arg(long)]
        depth: Option<u32>,
        /// Print a game transcript (requires --depth)
        #[arg(long)]
        game: bool,
        model_a: String,
        model_b: String,
    },
    /// Enumerate equivalence-class representatives up to a depth
    Basis {
        #[arg(long)]
        vars: String,
        #[arg(long)]
        depth: u32,
        #[arg(long)]
        count_only: bool,
    },
    /// Run exhaustive property checks and report violations
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Render an existential-closure axiom instance
    Axiom {
        /// Comma-separated free variables
        #[arg(long)]
        vars: String,
        /// The variable bound by the existential
        #[arg(long)]
        bound: String,
        /// Semicolon-separated terms required equal to T
        #[arg(long)]
        phi: String,
        /// Semicolon-separated terms required different from T
        #[arg(long, default_value = "")]
        psi: String,
    },
    /// Enumerate all models over a signature up to isomorphism
    Models {
        #[arg(long)]
        vars: String,
        #[arg(long)]
        max_nodes: usize,
        #[arg(long)]
        count_only: bool,
    },
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Bounded comparison versus theory inclusion, all pairs of a universe
    Theories {
        #[arg(long)]
        vars: String,
        /// Observed variables (defaults to --vars)
        #[arg(long)]
        observed: Option<String>,
        #[arg(long)]
        depth: u32,
        #[arg(long, default_value_t = 3)]
        nodes: usize,
    },
    /// Forced sets are upward closed, for all models and representatives
    Persistence {
        #[arg(long)]
        vars: String,
        #[arg(long, default_value_t = 3)]
        nodes: usize,
        #[arg(long, default_value_t = 2)]
        formula_depth: u32,
    },
    /// Bisimilar points force the same formulas over the observed variables
    BisimForm {
        #[arg(long)]
        vars: String,
        #[arg(long)]
        observed: Option<String>,
        #[arg(long, default_value_t = 3)]
        nodes: usize,
        #[arg(long, default_value_t = 2)]
        rep_depth: u32,
    },
}

enum Failure {
    Usage(String),
    Resource(String),
}

impl Failure {
    fn report(&self) -> (i32, &str) {
        match self {
            Failure::Usage(m) => (2, m.as_str()),
            Failure::Resource(m) => (3, m.as_str()),
        }
    }
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Failure {
        Failure::Usage(e.to_string())
    }
}

impl From<ModelError> for Failure {
    fn from(e: ModelError) -> Failure {
        match e {
            ModelError::UniverseCapExceeded { .. } | ModelError::UniverseTooLarge { .. } => {
                Failure::Resource(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<ProverError> for Failure {
    fn from(e: ProverError) -> Failure {
        Failure::Resource(e.to_string())
    }
}

impl From<BasisError> for Failure {
    fn from(e: BasisError) -> Failure {
        match e {
            BasisError::ClassCapExceeded { .. } | BasisError::OpBudgetExceeded { .. } => {
                Failure::Resource(e.to_string())
            }
            BasisError::Prover(inner) => inner.into(),
            BasisError::Model(inner) => inner.into(),
        }
    }
}

impl From<bisim::BisimError> for Failure {
    fn from(e: bisim::BisimError) -> Failure {
        match e {
            bisim::BisimError::Model(inner) => inner.into(),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Failure {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut config = Config::from_env();
    if let Some(v) = cli.step_budget {
        config.step_budget = v;
    }
    if let Some(v) = cli.models_cap {
        config.universe_cap = v;
    }
    if let Some(v) = cli.basis_cap {
        config.basis_cap = v;
    }
    let session = Session::new(config);

    match run(cli.command, &session) {
        Ok(code) => ExitCode::from(code as u8),
        Err(failure) => {
            let (code, message) = failure.report();
            eprintln!("error: {message}");
            ExitCode::from(code as u8)
        }
    }
}

fn parse_var_list(text: &str) -> Result<VarSet, Failure> {
    let mut set = VarSet::new();
    for name in text.split(',') {
        let name = name.trim();
        if name.is_empty() {
            continue;
        }
        if !is_identifier(name) {
            return Err(Failure::Usage(format!("invalid variable name `{name}`")));
        }
        set.insert(name);
    }
    Ok(set)
}

fn parse_formula_list(text: &str) -> Result<Vec<Formula>, Failure> {
    text.split(';')
        .map(|s| s.trim())
        .filter(|s| !s.is_empty())
        .map(|s| parse(s).map_err(Failure::from))
        .collect()
}

fn run(command: Command, session: &Session) -> Result<i32, Failure> {
    match command {
        Command::Prove {
            logic,
            phi,
            psi,
            countermodel,
            models,
        } => cmd_prove(logic, &phi, psi.as_deref(), countermodel, models, session),
        Command::Ui {
            logic,
            side,
            eliminate,
            depth,
            models,
            verify_depth,
            certificate,
            raw,
            phi,
        } => cmd_ui(
            logic,
            side.into(),
            &eliminate,
            depth,
            models,
            verify_depth,
            certificate,
            raw,
            &phi,
            session,
        ),
        Command::Bisim {
            observed,
            depth,
            game,
            model_a,
            model_b,
        } => cmd_bisim(&observed, depth, game, &model_a, &model_b),
        Command::Basis {
            vars,
            depth,
            count_only,
        } => {
            let sig = parse_var_list(&vars)?;
            let basis = session.basis(&sig, depth)?;
            if count_only {
                println!("{}", basis.len());
            } else {
                for rep in basis.reps() {
                    println!("{rep}");
                }
            }
            Ok(0)
        }
        Command::Verify(v) => cmd_verify(v, session),
        Command::Axiom {
            vars,
            bound,
            phi,
            psi,
        } => cmd_axiom(&vars, &bound, &phi, &psi, session),
        Command::Models {
            vars,
            max_nodes,
            count_only,
        } => {
            let sig = parse_var_list(&vars)?;
            let u = session.universe(&sig, max_nodes)?;
            if count_only {
                println!("models: {}", u.models().len());
                println!("pointed: {}", u.point_count());
            } else {
                for (i, model) in u.models().iter().enumerate() {
                    if i > 0 {
                        println!();
                    }
                    print!("{}", kripke::format_model(model, None));
                }
            }
            Ok(0)
        }
    }
}

fn cmd_prove(
    logic: Logic,
    phi_text: &str,
    psi_text: Option<&str>,
    countermodel: bool,
    models: usize,
    session: &Session,
) -> Result<i32, Failure> {
    let phi = parse(phi_text)?;
    let psi = psi_text.map(parse).transpose()?;

    let holds = match (&logic, &psi) {
        (Logic::Ipc, Some(psi)) => session.prover().ipc_entails(&phi, psi)?,
        (Logic::Ipc, None) => session.prover().ipc_valid(&phi)?,
        (Logic::Cpc, Some(psi)) => Prover::cpc_entails(&phi, psi),
        (Logic::Cpc, None) => Prover::cpc_valid(&phi),
    };

    if holds {
        println!("holds");
        return Ok(0);
    }
    println!("does not hold");
    if countermodel {
        let (antecedent, consequent) = match psi {
            Some(psi) => (phi, psi),
            None => (Formula::Top, phi),
        };
        match logic {
            Logic::Ipc => print_ipc_countermodel(&antecedent, &consequent, models, session)?,
            Logic::Cpc => print_cpc_countermodel(&antecedent, &consequent),
        }
    }
    Ok(1)
}

fn print_ipc_countermodel(
    antecedent: &Formula,
    consequent: &Formula,
    models: usize,
    session: &Session,
) -> Result<(), Failure> {
    let sig = antecedent.vars().union(&consequent.vars());
    let u = session.universe(&sig, models)?;
    let good = semantic_class(antecedent, &u)?;
    let bad = semantic_class(consequent, &u)?;
    for i in good.iter() {
        if !bad.contains(i) {
            let point = u.point(i);
            println!("countermodel:");
            print!("{}", kripke::format_model(&point.model, Some(point.point)));
            return Ok(());
        }
    }
    println!("no countermodel within {models} nodes");
    Ok(())
}

fn print_cpc_countermodel(antecedent: &Formula, consequent: &Formula) {
    let sig = antecedent.vars().union(&consequent.vars());
    let vars: Vec<&str> = sig.iter().collect();
    for bits in 0u64..(1 << vars.len()) {
        let map: BTreeMap<String, Formula> = vars
            .iter()
            .enumerate()
            .map(|(i, v)| {
                (
                    v.to_string(),
                    if bits >> i & 1 == 1 {
                        Formula::Top
                    } else {
                        Formula::Bot
                    },
                )
            })
            .collect();
        if Prover::cpc_valid(&antecedent.substitute(&map))
            && !Prover::cpc_valid(&consequent.substitute(&map))
        {
            println!("countermodel:");
            println!("nodes: 1");
            for (i, v) in vars.iter().enumerate() {
                if bits >> i & 1 == 1 {
                    println!("val: {v} 0");
                } else {
                    println!("val: {v}");
                }
            }
            println!("point: 0");
            return;
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_ui(
    logic: Logic,
    side: Side,
    eliminate: &str,
    depth: Option<u32>,
    models: Option<usize>,
    verify_depth: Option<u32>,
    certificate: bool,
    raw: bool,
    phi_text: &str,
    session: &Session,
) -> Result<i32, Failure> {
    let phi = parse(phi_text)?;
    let eliminate = parse_var_list(eliminate)?;

    match logic {
        Logic::Cpc => {
            let (result, raw_form) = match side {
                Side::Right => (
                    classical::cpc_right_ui(&phi, &eliminate),
                    classical::cpc_right_ui_raw(&phi, &eliminate),
                ),
                Side::Left => (
                    classical::cpc_left_ui(&phi, &eliminate),
                    classical::cpc_left_ui_raw(&phi, &eliminate),
                ),
            };
            if raw {
                println!("{result}");
            } else {
                println!("interpolant: {result}");
            }
            if certificate {
                println!("certificate:");
                println!("  var-condition: pass");
                println!("  entailment: pass");
                println!("  substitution-form: {raw_form}");
            }
            Ok(0)
        }
        Logic::Ipc => {
            let outcome = if eliminate.len() == 1 {
                let var = eliminate.iter().next().unwrap().to_string();
                let request = UiRequest {
                    phi,
                    eliminate: var,
                    side,
                    depth_bound: depth,
                    universe_bound: models,
                    verify_depth,
                };
                quantifiers::uniform_interpolant(&request, session)
            } else {
                let bounds = quantifiers::UiBounds {
                    depth,
                    universe: models,
                    verify: verify_depth,
                };
                quantifiers::uniform_interpolant_set_with(&phi, &eliminate, side, &bounds, session)
            };
            match outcome {
                Ok(result) => {
                    if raw {
                        println!("{}", result.candidate);
                    } else {
                        println!("interpolant: {}", result.candidate);
                    }
                    if certificate {
                        print_certificate(&result.certificate);
                    }
                    Ok(0)
                }
                Err(UiError::DeepeningExhausted { rounds, best }) => {
                    println!("uncertified candidate: {}", best.candidate);
                    println!("deepening budget of {rounds} rounds exhausted");
                    if certificate {
                        print_certificate(&best.certificate);
                    }
                    Ok(1)
                }
                Err(UiError::Basis(e)) => Err(e.into()),
                Err(UiError::Model(e)) => Err(e.into()),
                Err(UiError::Prover(e)) => Err(e.into()),
                Err(UiError::Bisim(e)) => Err(e.into()),
                Err(other) => Err(Failure::Usage(other.to_string())),
            }
        }
    }
}

fn print_certificate(cert: &quantifiers::Certificate) {
    println!("certificate:");
    println!(
        "  var-condition: {}",
        if cert.var_condition { "pass" } else { "fail" }
    );
    println!(
        "  entailment: {}",
        if cert.entailment { "pass" } else { "fail" }
    );
    let c3 = &cert.condition3;
    match (c3.effective_depth, c3.passed) {
        (Some(eff), Some(ok)) if eff == c3.requested_depth => {
            println!(
                "  condition-3: {} (depth {}, {} representatives)",
                if ok { "pass" } else { "fail" },
                eff,
                c3.reps_checked
            );
        }
        (Some(eff), Some(ok)) => {
            println!(
                "  condition-3: {} (depth {} of requested {}; {})",
                if ok { "pass" } else { "fail" },
                eff,
                c3.requested_depth,
                c3.degraded.as_deref().unwrap_or("degraded")
            );
        }
        _ => {
            println!(
                "  condition-3: not checked ({})",
                c3.degraded.as_deref().unwrap_or("no feasible family")
            );
        }
    }
    println!(
        "  semantic-equality: {} (universe bound {})",
        if cert.semantic_equality { "pass" } else { "fail" },
        cert.universe_nodes_used
    );
    println!(
        "  parameters: depth={} models={} rounds={}",
        cert.depth_used, cert.universe_nodes_used, cert.rounds_used
    );
    println!("  raw-candidate-size: {}", cert.raw_candidate.size());
}

fn load_pointed_model(path: &str) -> Result<PointedModel, Failure> {
    let text = std::fs::read_to_string(path)?;
    let (model, point) = kripke::parse_model(&text)?;
    let point = point.ok_or_else(|| {
        Failure::Usage(format!("model file `{path}` is missing a `point:` line"))
    })?;
    PointedModel::new(std::sync::Arc::new(model), point).map_err(Failure::from)
}

fn cmd_bisim(
    observed: &str,
    depth: Option<u32>,
    game: bool,
    path_a: &str,
    path_b: &str,
) -> Result<i32, Failure> {
    let observed = parse_var_list(observed)?;
    let a = load_pointed_model(path_a)?;
    let b = load_pointed_model(path_b)?;

    if game && depth.is_none() {
        return Err(Failure::Usage("--game requires --depth".into()));
    }

    match depth {
        None => {
            let relation = bisim::max_bisimulation(&a.model, &b.model, &observed)?;
            let related = relation.contains(a.point, b.point);
            println!("{}", if related { "bisimilar" } else { "not bisimilar" });
            println!("relation:");
            for (w, v) in &relation.pairs {
                println!("{w} {v}");
            }
            Ok(if related { 0 } else { 1 })
        }
        Some(n) => {
            let related = bisim::bounded_bisimilar(&a, &b, n, &observed)?;
            println!(
                "{} at depth {n}",
                if related { "bisimilar" } else { "not bisimilar" }
            );
            if game {
                println!("game ({n} rounds):");
                let trace = bisim::game_trace(&a, &b, n, &observed)?;
                for entry in &trace {
                    match entry {
                        GameMove::Round {
                            round,
                            challenger_side,
                            challenger_to,
                            defender_to,
                        } => println!(
                            "round {round}: challenger {challenger_side} -> {challenger_to}; defender -> {defender_to}"
                        ),
                        GameMove::DefenderStuck {
                            round,
                            challenger_side,
                            challenger_to,
                        } => println!(
                            "round {round}: challenger {challenger_side} -> {challenger_to}; defender stuck"
                        ),
                        GameMove::AtomsDisagree => println!("atoms disagree at the start"),
                    }
                }
                println!(
                    "{}",
                    if related {
                        "defender wins"
                    } else {
                        "challenger wins"
                    }
                );
            }
            Ok(if related { 0 } else { 1 })
        }
    }
}

fn cmd_verify(v: VerifyCommand, session: &Session) -> Result<i32, Failure> {
    match v {
        VerifyCommand::Theories {
            vars,
            observed,
            depth,
            nodes,
        } => {
            let sig = parse_var_list(&vars)?;
            let observed = match observed {
                Some(o) => parse_var_list(&o)?,
                None => sig.clone(),
            };
            let u = session.universe(&sig, nodes)?;
            let report = theories::check_theories_prop(&u, depth, &observed, session)?;
            println!("pairs: {}", report.pairs_checked);
            println!("violations: {}", report.violations.len());
            for violation in &report.violations {
                println!(
                    "points {} {}: bounded-le {} but theory-inclusion {}",
                    violation.left, violation.right, violation.bounded_le, violation.theory_included
                );
            }
            Ok(if report.violations.is_empty() { 0 } else { 1 })
        }
        VerifyCommand::Persistence {
            vars,
            nodes,
            formula_depth,
        } => {
            let sig = parse_var_list(&vars)?;
            let u = session.universe(&sig, nodes)?;
            let basis = session.basis(&sig, formula_depth)?;
            let mut checked = 0usize;
            let mut violations = 0usize;
            for model in u.models() {
                for rep in basis.reps() {
                    checked += 1;
                    if !kripke::persistence_check(model, rep)? {
                        violations += 1;
                        println!("violation: formula {rep} on model of size {}", model.size());
                    }
                }
            }
            println!("checked: {checked}");
            println!("violations: {violations}");
            Ok(if violations == 0 { 0 } else { 1 })
        }
        VerifyCommand::BisimForm {
            vars,
            observed,
            nodes,
            rep_depth,
        } => {
            let sig = parse_var_list(&vars)?;
            let observed = match observed {
                Some(o) => parse_var_list(&o)?,
                None => sig.clone(),
            };
            let u = session.universe(&sig, nodes)?;
            let basis = session.basis(&observed, rep_depth)?;
            let classes = bisim::classify_universe(&u, &observed);
            let mut pairs = 0usize;
            let mut violations = 0usize;
            for i in 0..u.point_count() {
                for j in 0..u.point_count() {
                    if classes.class_of[i] != classes.class_of[j] {
                        continue;
                    }
                    pairs += 1;
                    let a = u.point(i);
                    let b = u.point(j);
                    for rep in basis.reps() {
                        if forces(&a, rep)? != forces(&b, rep)? {
                            violations += 1;
                            println!("violation: points {i} {j} disagree on {rep}");
                        }
                    }
                }
            }
            println!("pairs: {pairs}");
            println!("violations: {violations}");
            Ok(if violations == 0 { 0 } else { 1 })
        }
    }
}

fn cmd_axiom(
    vars: &str,
    bound: &str,
    phi: &str,
    psi: &str,
    session: &Session,
) -> Result<i32, Failure> {
    let xs = parse_var_list(vars)?;
    if !is_identifier(bound) {
        return Err(Failure::Usage(format!("invalid variable name `{bound}`")));
    }
    let phis = parse_formula_list(phi)?;
    let psis = parse_formula_list(psi)?;
    match quantifiers::model_completion_axiom(&xs, bound, &phis, &psis, session) {
        Ok(instance) => {
            println!("psi: {}", instance.psi_text);
            println!("psi': {}", instance.psi_prime_text);
            println!("sentence: {}", instance.sentence_text);
            Ok(0)
        }
        Err(UiError::Basis(e)) => Err(e.into()),
        Err(UiError::Model(e)) => Err(e.into()),
        Err(UiError::Prover(e)) => Err(e.into()),
        Err(UiError::Bisim(e)) => Err(e.into()),
        Err(UiError::DeepeningExhausted { rounds, .. }) => Err(Failure::Usage(format!(
            "no certified interpolant within {rounds} deepening rounds"
        ))),
        Err(other) => Err(Failure::Usage(other.to_string())),
    }
}
