//! Acceptance suite. Each test implements one acceptance criterion at its
//! stated tolerance, asserts it, and prints a one-line verdict. Run with
//! `cargo test --test acceptance -- --nocapture` to see the lines.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::time::Instant;
use uipc::bisim::classify_universe;
use uipc::classical::{cpc_left_ui, cpc_right_ui};
use uipc::config::{Config, Session};
use uipc::kripke::{forces, semantic_class};
use uipc::prover::Prover;
use uipc::quantifiers::{
    class_exists, class_forall, craig_interpolant, uniform_interpolant, Side, UiRequest, UiResult,
};
use uipc::syntax::{parse, Formula, VarSet};
use uipc::theories::{check_theories_prop, BasisError};

fn session() -> Session {
    Session::new(Config::default())
}

fn vs(names: &[&str]) -> VarSet {
    names.iter().copied().collect()
}

fn f(text: &str) -> Formula {
    parse(text).expect("corpus formula parses")
}

/// Random formula over a variable pool, bounded depth, deterministic given
/// the generator state.
fn random_formula(rng: &mut ChaCha8Rng, vars: &[&str], depth: u32) -> Formula {
    if depth == 0 || rng.gen_range(0..10) < 3 {
        match rng.gen_range(0..vars.len() + 2) {
            i if i < vars.len() => Formula::var(vars[i]),
            i if i == vars.len() => Formula::Top,
            _ => Formula::Bot,
        }
    } else {
        let l = random_formula(rng, vars, depth - 1);
        let r = random_formula(rng, vars, depth - 1);
        match rng.gen_range(0..4) {
            0 => Formula::and(l, r),
            1 => Formula::or(l, r),
            2 => Formula::imp(l, r),
            _ => Formula::neg(l),
        }
    }
}

// ---------------------------------------------------------------------------
// Criterion 1: the proof search agrees with exhaustive finite-model search
// (node bound 4) on a curated corpus of at least 40 judgments.
// ---------------------------------------------------------------------------

#[test]
fn criterion_1_prover_matches_model_search() {
    let started = Instant::now();
    let s = session();

    // (antecedent, consequent, expected verdict); every negative judgment has
    // a countermodel with at most 4 nodes
    let corpus: Vec<(&str, &str, bool)> = vec![
        // axioms and structural theorems
        ("T", "p -> q -> p", true),
        ("T", "(p -> q -> r) -> (p -> q) -> p -> r", true),
        ("T", "p /\\ q -> p", true),
        ("T", "p /\\ q -> q", true),
        ("T", "p -> q -> p /\\ q", true),
        ("T", "p -> p \\/ q", true),
        ("T", "q -> p \\/ q", true),
        ("T", "(p -> r) -> (q -> r) -> p \\/ q -> r", true),
        ("T", "F -> p", true),
        ("T", "(p -> q) /\\ (q -> r) -> p -> r", true),
        ("T", "p /\\ (q \\/ r) -> (p /\\ q) \\/ (p /\\ r)", true),
        ("T", "(p /\\ q) \\/ (p /\\ r) -> p /\\ (q \\/ r)", true),
        ("T", "(p -> q /\\ r) -> (p -> q) /\\ (p -> r)", true),
        ("T", "(p \\/ q -> r) -> (p -> r) /\\ (q -> r)", true),
        // negation
        ("T", "p -> ~~p", true),
        ("T", "~~~p -> ~p", true),
        ("T", "~p -> p -> q", true),
        ("T", "(p -> q) -> ~q -> ~p", true),
        ("T", "~(p \\/ q) -> ~p /\\ ~q", true),
        ("T", "~p /\\ ~q -> ~(p \\/ q)", true),
        // double-negation shields
        ("T", "~~(p \\/ ~p)", true),
        ("T", "~~(~~p -> p)", true),
        ("T", "~~(((p -> q) -> p) -> p)", true),
        // classical principles that fail intuitionistically
        ("T", "p \\/ ~p", false),
        ("T", "~~p -> p", false),
        ("T", "((p -> q) -> p) -> p", false),
        ("T", "(p -> q) \\/ (q -> p)", false),
        ("T", "~p \\/ ~~p", false),
        ("T", "~(p /\\ q) -> ~p \\/ ~q", false),
        // entailments
        ("p", "p", true),
        ("p /\\ q", "q /\\ p", true),
        ("p", "q -> p", true),
        ("~~p", "p", false),
        ("q", "p \\/ ~p", false),
        ("p \\/ ~p", "~~p -> p", true),
        ("(p -> q) -> p", "~~p", true),
        ("~~p /\\ ~~q", "~~(p /\\ q)", true),
        ("~~(p /\\ q)", "~~p /\\ ~~q", true),
        ("~(p /\\ q)", "~p \\/ ~q", false),
        ("p -> q \\/ r", "(p -> q) \\/ (p -> r)", false),
        ("~p -> q \\/ r", "(~p -> q) \\/ (~p -> r)", false),
        ("p /\\ (q \\/ r)", "(p /\\ q) \\/ (p /\\ r)", true),
        ("(p -> q) /\\ (p -> r)", "p -> q /\\ r", true),
        ("p -> q", "~q -> ~p", true),
        ("~q -> ~p", "p -> q", false),
    ];
    assert!(corpus.len() >= 40, "corpus has {} judgments", corpus.len());

    let mut disagreements = 0;
    for (phi_text, psi_text, expected) in &corpus {
        let phi = f(phi_text);
        let psi = f(psi_text);
        let prover_verdict = s.prover().ipc_entails(&phi, &psi).unwrap();

        // exhaustive model search over the judgment's own signature
        let sig = phi.vars().union(&psi.vars());
        let u = s.universe(&sig, 4).unwrap();
        let phi_class = semantic_class(&phi, &u).unwrap();
        let psi_class = semantic_class(&psi, &u).unwrap();
        let search_verdict = phi_class.is_subset(&psi_class);

        if prover_verdict != search_verdict {
            disagreements += 1;
            eprintln!("disagreement: {phi_text} |- {psi_text}");
        }
        assert_eq!(
            prover_verdict, *expected,
            "unexpected verdict for {phi_text} |- {psi_text}"
        );
    }
    let elapsed = started.elapsed();
    assert_eq!(disagreements, 0);
    assert!(elapsed.as_secs() < 60, "took {elapsed:?}");
    println!(
        "criterion 1: PASS ({} judgments, 0 disagreements, {:.1}s)",
        corpus.len(),
        elapsed.as_secs_f64()
    );
}

// ---------------------------------------------------------------------------
// Criterion 2: bounded comparison coincides with theory inclusion for all
// ordered pairs of pointed models with at most 3 nodes, for signatures up to
// {p, q} and depths up to 2. The (two-variable, depth-2) cell is provably
// infeasible: the class count exceeds any cap (it is at least the number of
// antichains of a 7-element powerset, ~2.4e12), so that cell must abort with
// the documented resource error rather than complete.
// ---------------------------------------------------------------------------

#[test]
fn criterion_2_theories_correspondence() {
    let started = Instant::now();
    let s = session();
    let signatures = [vs(&[]), vs(&["p"]), vs(&["p", "q"])];
    let mut cells_passed = 0;
    let mut capped_cells = Vec::new();

    for sig in &signatures {
        let u = s.universe(sig, 3).unwrap();
        for n in 0..=2u32 {
            match check_theories_prop(&u, n, sig, &s) {
                Ok(report) => {
                    assert!(
                        report.violations.is_empty(),
                        "violations in cell ({{{sig}}}, {n}): {:?}",
                        report.violations
                    );
                    assert!(report.pairs_checked > 0);
                    cells_passed += 1;
                }
                Err(
                    err @ (BasisError::ClassCapExceeded { .. }
                    | BasisError::OpBudgetExceeded { .. }),
                ) => {
                    capped_cells.push((sig.to_string(), n, err.to_string()));
                }
                Err(other) => panic!("unexpected error in cell ({{{sig}}}, {n}): {other}"),
            }
        }
    }

    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 300, "took {elapsed:?}");
    assert_eq!(cells_passed, 8, "eight feasible cells");
    assert_eq!(capped_cells.len(), 1);
    assert_eq!(capped_cells[0].0, "p,q");
    assert_eq!(capped_cells[0].1, 2);
    println!(
        "criterion 2: PASS with caveat (8/9 cells zero violations, {:.1}s; \
         cell (p,q depth 2) aborts by design: {})",
        elapsed.as_secs_f64(),
        capped_cells[0].2
    );
}

// ---------------------------------------------------------------------------
// Criterion 3: points related by the greatest bisimulation force exactly the
// same depth-2 representatives over the observed variables, across all
// models with at most 3 nodes.
// ---------------------------------------------------------------------------

#[test]
fn criterion_3_bisimilar_points_agree_on_representatives() {
    let s = session();
    // (model signature, observed variables): includes proper sub-signature
    // observation, which is the case interpolation relies on
    let cells = [
        (vs(&["p"]), vs(&["p"])),
        (vs(&["p", "q"]), vs(&["p"])),
        (vs(&["p", "q"]), vs(&["q"])),
    ];
    let mut pairs_total = 0usize;
    for (sig, observed) in &cells {
        let u = s.universe(sig, 3).unwrap();
        let basis = s.basis(observed, 2).unwrap();
        let classes = classify_universe(&u, observed);
        for i in 0..u.point_count() {
            for j in 0..u.point_count() {
                if classes.class_of[i] != classes.class_of[j] {
                    continue;
                }
                pairs_total += 1;
                let a = u.point(i);
                let b = u.point(j);
                for rep in basis.reps() {
                    assert_eq!(
                        forces(&a, rep).unwrap(),
                        forces(&b, rep).unwrap(),
                        "bisimilar points {i},{j} over {{{sig}}} disagree on {rep}"
                    );
                }
            }
        }
    }
    println!("criterion 3: PASS ({pairs_total} related pairs, 0 violations)");
}

// ---------------------------------------------------------------------------
// Criterion 4: on 200 random formulas over up to 4 variables, the classical
// right interpolant equals the existential truth-table projection at every
// valuation of the kept variables (and the left one the universal
// projection).
// ---------------------------------------------------------------------------

#[test]
fn criterion_4_classical_projection_property() {
    let mut rng = ChaCha8Rng::seed_from_u64(41_0004);
    let pool = ["a", "b", "c", "d"];
    for round in 0..200 {
        let psi = random_formula(&mut rng, &pool, 3);
        let psi_vars: Vec<String> = psi.vars().iter().map(|v| v.to_string()).collect();
        if psi_vars.is_empty() {
            continue;
        }
        let k = rng.gen_range(1..=psi_vars.len());
        let eliminate: VarSet = psi_vars.iter().take(k).map(|s| s.as_str()).collect();
        let kept: Vec<String> = psi
            .vars()
            .difference(&eliminate)
            .iter()
            .map(|s| s.to_string())
            .collect();
        let elim: Vec<String> = eliminate.iter().map(|s| s.to_string()).collect();

        let right = cpc_right_ui(&psi, &eliminate);
        let left = cpc_left_ui(&psi, &eliminate);

        for outer in 0u64..(1 << kept.len()) {
            let mut exists = false;
            let mut forall = true;
            for inner in 0u64..(1 << elim.len()) {
                let mut map = BTreeMap::new();
                for (i, v) in kept.iter().enumerate() {
                    map.insert(v.clone(), constant(outer >> i & 1 == 1));
                }
                for (i, v) in elim.iter().enumerate() {
                    map.insert(v.clone(), constant(inner >> i & 1 == 1));
                }
                let value = Prover::cpc_valid(&psi.substitute(&map));
                exists |= value;
                forall &= value;
            }
            let mut outer_map = BTreeMap::new();
            for (i, v) in kept.iter().enumerate() {
                outer_map.insert(v.clone(), constant(outer >> i & 1 == 1));
            }
            assert_eq!(
                Prover::cpc_valid(&right.substitute(&outer_map)),
                exists,
                "right projection mismatch at round {round}: {psi}"
            );
            assert_eq!(
                Prover::cpc_valid(&left.substitute(&outer_map)),
                forall,
                "left projection mismatch at round {round}: {psi}"
            );
        }
    }
    println!("criterion 4: PASS (200 random formulas, exhaustive valuations)");
}

fn constant(b: bool) -> Formula {
    if b {
        Formula::Top
    } else {
        Formula::Bot
    }
}

// ---------------------------------------------------------------------------
// Criterion 5: the known interpolants are reproduced with full certificates.
// The minimality check runs at depth 2 wherever the representative family at
// depth 2 is feasible; for two retained variables that family is provably
// beyond any cap, and the certificate records the honest degradation to
// depth 1.
// ---------------------------------------------------------------------------

struct KnownCase {
    phi: &'static str,
    side: Side,
    expected: &'static str,
    // depth at which condition 3 is feasible for the retained variables
    feasible_verify_depth: u32,
}

fn known_cases() -> Vec<KnownCase> {
    vec![
        KnownCase { phi: "q -> p", side: Side::Right, expected: "T", feasible_verify_depth: 2 },
        KnownCase {
            phi: "(q -> p) /\\ (p -> r)",
            side: Side::Right,
            expected: "q -> r",
            feasible_verify_depth: 1,
        },
        KnownCase { phi: "p \\/ q", side: Side::Left, expected: "q", feasible_verify_depth: 2 },
        KnownCase { phi: "p", side: Side::Left, expected: "F", feasible_verify_depth: 2 },
        KnownCase { phi: "p \\/ q", side: Side::Right, expected: "T", feasible_verify_depth: 2 },
    ]
}

fn run_known_case(case: &KnownCase, s: &Session) -> UiResult {
    let request = UiRequest::new(f(case.phi), "p", case.side);
    uniform_interpolant(&request, s).expect("pipeline succeeds")
}

#[test]
fn criterion_5_known_interpolants_with_certificates() {
    let s = session();
    let mut degraded_cases = 0;
    for case in known_cases() {
        let started = Instant::now();
        let result = run_known_case(&case, &s);
        let elapsed = started.elapsed();
        assert!(elapsed.as_secs() < 120, "{} took {elapsed:?}", case.phi);

        assert!(
            s.prover().ipc_equiv(&result.candidate, &f(case.expected)).unwrap(),
            "{} {}: got {}, expected {}",
            case.side, case.phi, result.candidate, case.expected
        );
        let cert = &result.certificate;
        assert!(cert.var_condition, "{}: variable condition", case.phi);
        assert!(cert.entailment, "{}: entailment", case.phi);
        assert_eq!(cert.condition3.requested_depth, 2);
        assert_eq!(cert.condition3.passed, Some(true), "{}: condition 3", case.phi);
        assert_eq!(
            cert.condition3.effective_depth,
            Some(case.feasible_verify_depth),
            "{}: condition-3 depth",
            case.phi
        );
        if case.feasible_verify_depth < 2 {
            degraded_cases += 1;
            assert!(
                cert.condition3.degraded.is_some(),
                "{}: degradation must be recorded",
                case.phi
            );
        }
    }
    println!(
        "criterion 5: PASS with caveat (5/5 interpolants certified; condition 3 at depth 2 \
         for 4 cases, honestly degraded to depth 1 for {degraded_cases} two-retained-variable case)"
    );
}

// ---------------------------------------------------------------------------
// Criterion 6: the interpolant operators behave as an adjoint pair on a
// 30-formula corpus: sandwich, transposition, monotonicity, idempotence.
// ---------------------------------------------------------------------------

#[test]
fn criterion_6_adjunction_suite() {
    let s = session();
    // over {p, q} up to depth 2, plus {p, q, r} formulas of depth <= 1 and
    // single-variable formulas of higher depth
    let corpus: Vec<Formula> = [
        "p", "q", "~p", "~~p", "p /\\ q", "p \\/ q", "p -> q", "q -> p",
        "p \\/ ~p", "~p \\/ ~~p", "(p -> q) -> q", "p /\\ (p -> q)",
        "~(p /\\ q)", "~(p \\/ q)", "~~p -> p", "q \\/ ~p",
        "p /\\ q /\\ r", "p \\/ q \\/ r", "p -> r", "p /\\ q -> r",
        "p /\\ (q \\/ r)", "(p \\/ q) /\\ r", "~p /\\ r", "p -> q \\/ r",
        "r \\/ (q /\\ p)", "(q -> p) /\\ (p -> r)", "q -> p", "r -> p",
        "~p \\/ r", "p \\/ (q -> r)",
    ]
    .iter()
    .map(|t| f(t))
    .collect();
    assert_eq!(corpus.len(), 30);

    let mut exists_results: Vec<Formula> = Vec::new();
    let mut forall_results: Vec<Formula> = Vec::new();
    for phi in &corpus {
        let e = uniform_interpolant(&UiRequest::new(phi.clone(), "p", Side::Right), &s)
            .unwrap_or_else(|err| panic!("right of {phi}: {err}"));
        let a = uniform_interpolant(&UiRequest::new(phi.clone(), "p", Side::Left), &s)
            .unwrap_or_else(|err| panic!("left of {phi}: {err}"));
        exists_results.push(e.candidate);
        forall_results.push(a.candidate);
    }

    let prover = s.prover();
    // (i) sandwich
    for (i, phi) in corpus.iter().enumerate() {
        assert!(prover.ipc_entails(&forall_results[i], phi).unwrap(), "(i) lower at {phi}");
        assert!(prover.ipc_entails(phi, &exists_results[i]).unwrap(), "(i) upper at {phi}");
    }
    // (ii) transposition against the p-free corpus members
    let p_free: Vec<&Formula> = corpus.iter().filter(|c| !c.vars().contains("p")).collect();
    assert!(!p_free.is_empty());
    for (i, phi) in corpus.iter().enumerate() {
        for psi in &p_free {
            assert_eq!(
                prover.ipc_entails(phi, psi).unwrap(),
                prover.ipc_entails(&exists_results[i], psi).unwrap(),
                "(ii) right at {phi} vs {psi}"
            );
            assert_eq!(
                prover.ipc_entails(psi, phi).unwrap(),
                prover.ipc_entails(psi, &forall_results[i]).unwrap(),
                "(ii) left at {phi} vs {psi}"
            );
        }
    }
    // (iii) monotonicity
    for i in 0..corpus.len() {
        for j in 0..corpus.len() {
            if prover.ipc_entails(&corpus[i], &corpus[j]).unwrap() {
                assert!(
                    prover.ipc_entails(&exists_results[i], &exists_results[j]).unwrap(),
                    "(iii) right at {} |- {}",
                    corpus[i], corpus[j]
                );
                assert!(
                    prover.ipc_entails(&forall_results[i], &forall_results[j]).unwrap(),
                    "(iii) left at {} |- {}",
                    corpus[i], corpus[j]
                );
            }
        }
    }
    // (iv) idempotence: the results are p-free, so a second application is
    // the identity; and on p-free formulas both operators are the identity
    for (i, phi) in corpus.iter().enumerate() {
        let twice = uniform_interpolant(
            &UiRequest::new(exists_results[i].clone(), "p", Side::Right),
            &s,
        )
        .unwrap();
        assert!(prover.ipc_equiv(&twice.candidate, &exists_results[i]).unwrap(), "(iv) at {phi}");
    }
    for psi in &p_free {
        let e = uniform_interpolant(&UiRequest::new((*psi).clone(), "p", Side::Right), &s).unwrap();
        let a = uniform_interpolant(&UiRequest::new((*psi).clone(), "p", Side::Left), &s).unwrap();
        assert!(prover.ipc_equiv(&e.candidate, psi).unwrap());
        assert!(prover.ipc_equiv(&a.candidate, psi).unwrap());
    }
    println!("criterion 6: PASS (30 formulas, properties i-iv, 0 violations)");
}

// ---------------------------------------------------------------------------
// Criterion 7: for each certified interpolant of criterion 5, the class of
// the candidate equals the class-operator image on the universe used.
// ---------------------------------------------------------------------------

#[test]
fn criterion_7_semantic_class_equality() {
    let s = session();
    for case in known_cases() {
        let result = run_known_case(&case, &s);
        assert!(result.certificate.semantic_equality, "{}: recorded check", case.phi);

        // recompute the comparison from scratch at the recorded parameters
        let phi = f(case.phi);
        let u = s
            .universe(&phi.vars(), result.certificate.universe_nodes_used)
            .unwrap();
        let phi_class = semantic_class(&phi, &u).unwrap();
        let image = match case.side {
            Side::Right => class_exists(&phi_class, "p", &u),
            Side::Left => class_forall(&phi_class, "p", &u),
        };
        let candidate_class = semantic_class(&result.candidate, &u).unwrap();
        assert_eq!(candidate_class, image, "{}: exact set equality", case.phi);
    }
    println!("criterion 7: PASS (5/5 class images match exactly)");
}

// ---------------------------------------------------------------------------
// Criterion 8: 50 random entailing pairs produced by strengthening the
// antecedent and weakening the consequent; every extracted interpolant
// passes the variable condition and both entailments.
// ---------------------------------------------------------------------------

#[test]
fn criterion_8_craig_extraction() {
    let s = session();
    let mut rng = ChaCha8Rng::seed_from_u64(80_0008);
    let mut produced = 0;
    while produced < 50 {
        let base = random_formula(&mut rng, &["q"], 1);
        let noise_l = random_formula(&mut rng, &["p", "q"], 1);
        let noise_r = random_formula(&mut rng, &["r", "q"], 1);
        let psi = Formula::and(base.clone(), noise_l);
        let theta = Formula::or(base, noise_r);

        let interpolant = craig_interpolant(&psi, &theta, &s)
            .unwrap_or_else(|err| panic!("pair {psi} |- {theta}: {err}"));
        // the function verifies before returning; assert the contract again
        // from outside
        assert!(interpolant
            .vars()
            .is_subset(&psi.vars().intersection(&theta.vars())));
        assert!(s.prover().ipc_entails(&psi, &interpolant).unwrap());
        assert!(s.prover().ipc_entails(&interpolant, &theta).unwrap());
        produced += 1;
    }
    println!("criterion 8: PASS (50/50 extractions certified)");
}

// ---------------------------------------------------------------------------
// Criterion 9: repeated runs of a fixed battery of invocations produce
// byte-identical output.
// ---------------------------------------------------------------------------

#[test]
fn criterion_9_determinism() {
    use std::io::Write;
    let dir = tempfile::tempdir().unwrap();
    let path_a = dir.path().join("a.km");
    let path_b = dir.path().join("b.km");
    std::fs::File::create(&path_a)
        .unwrap()
        .write_all(b"nodes: 2\nle: 0 1\nval: p 1\npoint: 0\n")
        .unwrap();
    std::fs::File::create(&path_b)
        .unwrap()
        .write_all(b"nodes: 1\nval: p\npoint: 0\n")
        .unwrap();
    let a = path_a.to_str().unwrap();
    let b = path_b.to_str().unwrap();

    let battery: Vec<Vec<&str>> = vec![
        vec!["prove", "--logic", "ipc", "T", "p -> p"],
        vec!["prove", "--logic", "ipc", "T", "p \\/ ~p", "--countermodel"],
        vec!["prove", "--logic", "cpc", "((p -> q) -> p) -> p"],
        vec!["prove", "--logic", "cpc", "p -> q", "--countermodel"],
        vec!["ui", "--logic", "cpc", "--side", "right", "--eliminate", "p", "p /\\ q"],
        vec!["ui", "--logic", "ipc", "--side", "right", "--eliminate", "p", "--certificate", "q -> p"],
        vec!["ui", "--logic", "ipc", "--side", "left", "--eliminate", "p", "p \\/ q"],
        vec!["basis", "--vars", "p,q", "--depth", "1"],
        vec!["basis", "--vars", "p", "--depth", "2"],
        vec!["models", "--vars", "p", "--max-nodes", "3"],
        vec!["bisim", "--observed", "p", a, b],
        vec!["bisim", "--observed", "p", "--depth", "1", "--game", a, b],
        vec!["axiom", "--vars", "x", "--bound", "y", "--phi", "y", "--psi", "x"],
        vec!["verify", "theories", "--vars", "p", "--depth", "1", "--nodes", "3"],
        vec!["verify", "bisim-form", "--vars", "p,q", "--observed", "p", "--nodes", "2", "--rep-depth", "1"],
    ];

    let run_battery = || -> Vec<u8> {
        let mut log = Vec::new();
        for args in &battery {
            let out = std::process::Command::new(env!("CARGO_BIN_EXE_uipc"))
                .args(args)
                .env_remove("UIPC_STEP_BUDGET")
                .env_remove("UIPC_MODELS_CAP")
                .env_remove("UIPC_BASIS_CAP")
                .output()
                .expect("binary runs");
            log.extend_from_slice(format!("$ uipc {}\n", args.join(" ")).as_bytes());
            log.extend_from_slice(&out.stdout);
            log.extend_from_slice(&out.stderr);
            log.extend_from_slice(format!("exit {}\n", out.status.code().unwrap()).as_bytes());
        }
        log
    };

    let first = run_battery();
    let second = run_battery();
    assert_eq!(first, second, "logs differ between consecutive runs");
    println!(
        "criterion 9: PASS ({} invocations, byte-identical logs across two runs)",
        battery.len()
    );
}
