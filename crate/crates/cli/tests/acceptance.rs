//! Acceptance suite: one pass/fail line per criterion, exit status 1 if any fails.

mod support;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use monadlang_core::closure::{emptiness, is_empty};
use monadlang_core::construct::{complement, intersection, powerset};
use monadlang_core::fixtures;
use monadlang_core::infty::powerset_eval_infty_omega;
use monadlang_core::moore::moore_syntactic;
use monadlang_core::mso::{compile, satisfiable, Environment, MsoExpr};
use monadlang_core::omega::{
    count_letters, eval_unboundedness_algebra, is_aperiodic, satisfies_identity, AbstractCount, FiniteSemigroup,
    OmegaTerm, Unbounded,
};
use monadlang_core::pointed::{fo2_definable, preceq, validate_point};
use monadlang_core::term::ground_terms;
use monadlang_core::words::{powerset_eval_word, word_term};
use monadlang_core::{Language, Monad};

use support::*;

type Verdict = Result<String, String>;

fn check(cond: bool, ok: impl Into<String>, err: impl Into<String>) -> Verdict {
    if cond {
        Ok(ok.into())
    } else {
        Err(err.into())
    }
}

fn within(elapsed: Duration, limit: Duration, what: &str) -> Verdict {
    check(
        elapsed < limit,
        format!("{what} in {:.3}s", elapsed.as_secs_f64()),
        format!("{what} took {:.3}s (limit {:.0}s)", elapsed.as_secs_f64(), limit.as_secs_f64()),
    )
}

/// Minimising the 4-element first-letter recogniser gives 2 elements, and
/// membership agrees on every ground term with at most 6 operation nodes.
fn c1_moore_correctness() -> Verdict {
    let l = fixtures::begins_with_a_4_lang();
    let start = Instant::now();
    let m = moore_syntactic(&l).map_err(|e| e.to_string())?.language;
    let elapsed = start.elapsed();
    if m.algebra().len() != 2 {
        return Err(format!("minimised size {} (expected 2)", m.algebra().len()));
    }
    let terms = ground_terms(l.algebra().signature(), l.alphabet(), 6);
    let bad = terms.iter().filter(|(t, _)| l.contains(t).unwrap() != m.contains(t).unwrap()).count();
    check(bad == 0, format!("size 2, {} terms agree", terms.len()), format!("{bad} of {} terms disagree", terms.len()))?;
    within(elapsed, Duration::from_secs(1), "minimised").map(|t| format!("size 2, {} terms agree, {t}", terms.len()))
}

/// Moore partitions of 100 random word recognisers equal the context oracle.
fn c2_moore_vs_oracle() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut mismatches, mut merged) = (0, 0);
    for _ in 0..100 {
        let l = random_word_language(&mut rng, 5);
        let syn = moore_syntactic(&l).map_err(|e| e.to_string())?;
        merged += usize::from(syn.language.algebra().len() < l.algebra().len());
        if named_blocks(l.algebra(), syn.partition.blocks()) != word_syntactic_oracle(&l, 4) {
            mismatches += 1;
        }
    }
    check(
        mismatches == 0,
        format!("100 languages ({merged} not already minimal), 0 mismatches"),
        format!("{mismatches} mismatches of 100"),
    )
}

/// Powerset tables equal pointwise enumeration; ω on sets equals the
/// ultimately periodic enumeration.
fn c3_powerset() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut mismatches = 0;
    let mut checked = 0;
    for _ in 0..100 {
        let alg = random_word_language(&mut rng, 4).algebra().clone();
        let p = powerset(&alg).map_err(|e| e.to_string())?;
        let subsets = all_subsets(alg.len());
        let index = |s: &BTreeSet<usize>| p.sets.iter().position(|(_, t)| t == s).expect("every subset is an element");
        for s in &subsets {
            for t in &subsets {
                let expect: BTreeSet<usize> = s.iter().flat_map(|&x| t.iter().map(move |&y| (x, y))).map(|(x, y)| alg.mul(0, x, y)).collect();
                let table = &p.sets[p.algebra.mul(0, index(s), index(t))].1;
                checked += 1;
                if *table != expect || powerset_eval_word(&alg, s, t) != expect {
                    mismatches += 1;
                }
            }
        }
    }
    for _ in 0..20 {
        let alg = random_wilke(&mut rng, 4);
        let p = powerset(&alg).map_err(|e| e.to_string())?;
        for s in all_subsets(alg.len()) {
            let expect = omega_oracle(&alg, &s, 4);
            let i = p.sets.iter().position(|(_, t)| *t == s).expect("every subset is an element");
            checked += 1;
            if p.sets[p.algebra.eval(1, &[i])].1 != expect || powerset_eval_infty_omega(&alg, &s, false) != expect {
                mismatches += 1;
            }
        }
    }
    check(mismatches == 0, format!("{checked} entries, 0 mismatches"), format!("{mismatches} of {checked} entries differ"))
}

fn random_expr(rng: &mut impl Rng, depth: usize) -> MsoExpr {
    const TERMS: [&str; 6] = ["0", "1", "concat(0,1)", "concat(1,0)", "concat(0,0)", "concat(1,1)"];
    let leaf = |rng: &mut dyn rand::RngCore| MsoExpr::base(if rng.gen_bool(0.5) { "zeros" } else { "zeros-then-ones" });
    if depth == 0 {
        return leaf(rng);
    }
    match rng.gen_range(0..6) {
        0 => leaf(rng),
        1 => MsoExpr::not(random_expr(rng, depth - 1)),
        2 => MsoExpr::and(random_expr(rng, depth - 1), random_expr(rng, depth - 1)),
        3 => MsoExpr::or(random_expr(rng, depth - 1), random_expr(rng, depth - 1)),
        4 => {
            let sub = [("0", *TERMS.choose(rng).unwrap()), ("1", *TERMS.choose(rng).unwrap())];
            MsoExpr::inv_image(random_expr(rng, depth - 1), &sub)
        }
        _ if depth >= 2 => {
            // projection: substitute into three letters, then relabel onto {0, 1}
            let sub = [("0", *TERMS.choose(rng).unwrap()), ("1", *TERMS.choose(rng).unwrap()), ("2", *TERMS.choose(rng).unwrap())];
            let onto = [["0", "1", "0"], ["0", "1", "1"], ["1", "0", "0"], ["0", "0", "1"], ["1", "1", "0"], ["1", "0", "1"]];
            let m = onto.choose(rng).unwrap();
            let inner = MsoExpr::inv_image(random_expr(rng, depth - 2), &sub);
            MsoExpr::image(inner, &[("0", m[0]), ("1", m[1]), ("2", m[2])])
        }
        _ => MsoExpr::not(random_expr(rng, depth - 1)),
    }
}

fn expr_dfa(e: &MsoExpr) -> Dfa {
    match e {
        MsoExpr::Base { name } if name == "zeros" => zeros_dfa(),
        MsoExpr::Base { .. } => zeros_then_ones_dfa(),
        MsoExpr::Not { arg } => expr_dfa(arg).not(),
        MsoExpr::And { left, right } => expr_dfa(left).product(&expr_dfa(right), true),
        MsoExpr::Or { left, right } => expr_dfa(left).product(&expr_dfa(right), false),
        MsoExpr::InvImage { arg, sub } => {
            let words = sub
                .iter()
                .map(|(k, t)| {
                    let w = t.trim_start_matches("concat(").trim_end_matches(')').split(',').map(String::from).collect();
                    (k.clone(), w)
                })
                .collect();
            expr_dfa(arg).inverse(&words)
        }
        MsoExpr::Image { arg, map } => expr_dfa(arg).image(map),
    }
}

fn c4_mso() -> Verdict {
    let start = Instant::now();
    let env = Environment::new()
        .with("inf-a", fixtures::infinitely_many_a_lang())
        .and_then(|e| e.with("fin-a", fixtures::finitely_many_a_lang()))
        .and_then(|e| e.with("begins-b", fixtures::begins_with_b_lang()))
        .map_err(|e| e.to_string())?;
    let both = MsoExpr::and(MsoExpr::base("inf-a"), MsoExpr::base("fin-a"));
    if satisfiable(&both, &env).map_err(|e| e.to_string())?.is_some() {
        return Err("infinitely ∧ finitely many a reported satisfiable".into());
    }
    let e = MsoExpr::and(MsoExpr::base("inf-a"), MsoExpr::base("begins-b"));
    let w = satisfiable(&e, &env).map_err(|e| e.to_string())?.ok_or("infinitely many a ∧ begins with b reported unsatisfiable")?;
    let sig = fixtures::infinitely_many_a().signature().clone();
    match up_word(&w, &sig) {
        UpWord::Infinite(prefix, period) if format!("{prefix}{period}").starts_with('b') && period.contains('a') => {}
        other => return Err(format!("witness {} denotes {other:?}", w.to_text(&sig))),
    }

    let env = Environment::new()
        .with("zeros", fixtures::zeros())
        .and_then(|e| e.with("zeros-then-ones", fixtures::zeros_then_ones()))
        .map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let words: Vec<Vec<&str>> = (1..=8usize)
        .flat_map(|n| (0..1usize << n).map(move |m| (0..n).map(|i| if m >> i & 1 == 1 { "1" } else { "0" }).collect()))
        .collect();
    let (mut mismatches, mut proper) = (0, 0);
    for _ in 0..50 {
        let expr = random_expr(&mut rng, 4);
        let l = compile(&expr, &env).map_err(|e| format!("{e} compiling {}", serde_json::to_string(&expr).unwrap()))?;
        let dfa = expr_dfa(&expr);
        let mut accepted = 0;
        for w in &words {
            let verdict = l.contains(&word_term(w).unwrap()).unwrap();
            accepted += usize::from(verdict);
            if verdict != dfa.accepts(w) {
                mismatches += 1;
            }
        }
        proper += usize::from(accepted > 0 && accepted < words.len());
    }
    let summary = format!("witness verified, 50 expressions ({proper} neither empty nor full) × 510 words agree");
    check(mismatches == 0, &summary, format!("{mismatches} word verdicts disagree"))?;
    within(start.elapsed(), Duration::from_secs(10), "decided").map(|t| format!("{summary}, {t}"))
}

fn c5_fo2() -> Verdict {
    let cases = [
        ("successor_query", fixtures::successor_query(), false),
        ("followed_by_two_a", fixtures::followed_by_two_a(), true),
        ("label_a", fixtures::label_a(), true),
    ];
    let mut parts = Vec::new();
    for (name, l, expected) in cases {
        let start = Instant::now();
        let report = fo2_definable(&l).map_err(|e| e.to_string())?;
        let elapsed = start.elapsed();
        if report.definable != expected {
            return Err(format!("{name}: definable = {}", report.definable));
        }
        within(elapsed, Duration::from_secs(1), name)?;
        let file = fixtures_dir().join(format!("{name}.lang.json"));
        let run = monadlang(&["fo2", file.to_str().unwrap()]);
        if run.code != if expected { 0 } else { 1 } {
            return Err(format!("{name}: CLI exit {}", run.code));
        }
        parts.push(format!("{name} {}", if expected { "yes" } else { "no" }));
    }
    let run = monadlang(&["fo2", "--json", fixtures_dir().join("successor_query.lang.json").to_str().unwrap()]);
    check(run.stdout.contains("\"condition\""), parts.join(", "), "failing condition missing from report")
}

fn c6_preceq() -> Verdict {
    let mut algebras: Vec<(String, monadlang_core::Algebra)> = Vec::new();
    for (name, l) in fixtures::languages() {
        if *l.algebra().monad() == Monad::Point {
            algebras.push((name.to_string(), l.algebra().clone()));
            let syn = moore_syntactic(&l).map_err(|e| e.to_string())?.language;
            algebras.push((format!("{name} (syntactic)"), syn.algebra().clone()));
        }
    }
    algebras.push(("trivial".into(), fixtures::trivial(Monad::Point)));
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut random = 0;
    while random < 30 {
        let n = rng.gen_range(2..=3);
        let alg = random_point_algebra(&mut rng, n);
        if validate_point(&alg).is_empty() {
            algebras.push((format!("random {random}"), alg));
            random += 1;
        }
    }
    algebras.retain(|(_, a)| a.len() <= 4);
    let mut mismatches = Vec::new();
    let mut strict = 0;
    for (name, alg) in &algebras {
        let fast: BTreeSet<_> = preceq(alg).pairs().into_iter().collect();
        strict += usize::from(fast.len() < alg.len() * alg.len());
        if fast != preceq_oracle(alg, 5) {
            mismatches.push(name.clone());
        }
    }
    check(
        mismatches.is_empty(),
        format!("{} algebras ({strict} with a non-total order), 0 mismatches", algebras.len()),
        format!("mismatch on {}", mismatches.join(", ")),
    )
}

fn c7_identities() -> Verdict {
    let p = OmegaTerm::parse;
    let holds = |alg: &monadlang_core::Algebra, l: &str, r: &str| {
        satisfies_identity(&FiniteSemigroup::from_algebra(alg).unwrap(), &p(l).unwrap(), &p(r).unwrap()).unwrap()
    };
    let z2_fails = !holds(&fixtures::z2(), "(x)^#", "(x)^# . x");
    let u1_passes = holds(&fixtures::u1(), "(x)^#", "(x)^# . x");
    let z2_commutes = holds(&fixtures::z2(), "x . y", "y . x");
    let syn = moore_syntactic(&fixtures::contains_a()).map_err(|e| e.to_string())?.language;
    let aperiodic = is_aperiodic(&FiniteSemigroup::from_algebra(syn.algebra()).unwrap());
    check(
        z2_fails && u1_passes && z2_commutes && aperiodic,
        "Z2 fails x^# = x^#x, U1 passes, Z2 commutative, contains-a aperiodic",
        format!("Z2 fails: {z2_fails}, U1 passes: {u1_passes}, Z2 commutes: {z2_commutes}, aperiodic: {aperiodic}"),
    )
}

fn closed_terms(letters: &[&str], depth: usize) -> Vec<Vec<OmegaTerm>> {
    let mut by_depth: Vec<Vec<OmegaTerm>> = vec![letters.iter().map(|a| OmegaTerm::constant(a)).collect()];
    for d in 1..=depth {
        let below: Vec<OmegaTerm> = by_depth.iter().flatten().cloned().collect();
        let mut level = Vec::new();
        for s in &below {
            if s.depth() == d - 1 {
                level.push(OmegaTerm::ipow(s.clone()));
            }
            for t in &below {
                if s.depth().max(t.depth()) == d - 1 {
                    level.push(OmegaTerm::concat(s.clone(), t.clone()));
                }
            }
        }
        by_depth.push(level);
    }
    by_depth
}

fn c8_unboundedness() -> Verdict {
    let ev = |s: &str| eval_unboundedness_algebra(&OmegaTerm::parse_closed(s).unwrap()).unwrap();
    let values = (ev("(1)^#"), ev("(0)^#"), ev("(0 . 1)"));
    if values != (Unbounded::Infinity, Unbounded::Zero, Unbounded::One) {
        return Err(format!("values {values:?}"));
    }
    let mut checked = 0;
    let mut bad = 0;
    // every concatenation of depth ≤ 4 over one letter, marked and unmarked
    let unary: Vec<OmegaTerm> = closed_terms(&["a"], 3).into_iter().flatten().collect();
    for marked in [BTreeSet::from(["a".to_string()]), BTreeSet::new()] {
        let count: Vec<AbstractCount> = unary.iter().map(|t| count_letters(t, &marked).unwrap()).collect();
        for (i, s) in unary.iter().enumerate() {
            for (j, t) in unary.iter().enumerate() {
                checked += 1;
                if count_letters(&OmegaTerm::concat(s.clone(), t.clone()), &marked).unwrap() != count[i] + count[j] {
                    bad += 1;
                }
            }
        }
    }
    // every concatenation of depth ≤ 3 over two letters, `a` marked
    let binary: Vec<OmegaTerm> = closed_terms(&["a", "b"], 2).into_iter().flatten().collect();
    let marked = BTreeSet::from(["a".to_string()]);
    for s in &binary {
        for t in &binary {
            checked += 1;
            let whole = count_letters(&OmegaTerm::concat(s.clone(), t.clone()), &marked).unwrap();
            if whole != count_letters(s, &marked).unwrap() + count_letters(t, &marked).unwrap() {
                bad += 1;
            }
        }
    }
    check(bad == 0, format!("ipow(1)=∞, ipow(0)=0, concat(0,1)=1; additive on {checked} concatenations"), format!("{bad} of {checked} concatenations not additive"))
}

fn c9_trees() -> Verdict {
    let l = fixtures::true_trees();
    let sig = l.algebra().signature().clone();
    let w = emptiness(&l).map_err(|e| e.to_string())?;
    let witness = w.witness().ok_or("true-tree language reported empty")?;
    if !bool_value(witness, &sig) {
        return Err(format!("witness {} evaluates to false", witness.to_text(&sig)));
    }
    if !is_empty(&intersection(&l, &complement(&l)).map_err(|e| e.to_string())?).map_err(|e| e.to_string())? {
        return Err("language ∧ complement nonempty".into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut mismatches, mut merged) = (0, 0);
    let total = 40;
    for i in 0..total {
        let l: Language = random_tree_language(&mut rng, 2 + i % 4);
        let syn = moore_syntactic(&l).map_err(|e| e.to_string())?;
        merged += usize::from(syn.partition.blocks().iter().any(|b| b.len() > 1));
        if named_blocks(l.algebra(), syn.partition.blocks()) != tree_syntactic_oracle(&l, 4) {
            mismatches += 1;
        }
    }
    check(
        mismatches == 0,
        format!("witness {} evaluates to 1, L ∧ ¬L empty, {total} automata ({merged} with merged states) match", witness.to_text(&sig)),
        format!("{mismatches} of {total} automata mismatch"),
    )
}

fn c10_determinism() -> Verdict {
    let dir = fixtures_dir();
    let mut files: Vec<_> = std::fs::read_dir(&dir).map_err(|e| e.to_string())?.map(|e| e.unwrap().path()).collect();
    files.sort();
    let mut runs = 0;
    let mut differ = Vec::new();
    for f in &files {
        let name = f.file_name().unwrap().to_str().unwrap().to_string();
        let path = f.to_str().unwrap().to_string();
        let mut commands: Vec<Vec<String>> = Vec::new();
        let v = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        if name.ends_with(".mso.json") {
            commands.push(v(&["mso-sat", &path]));
        } else {
            commands.push(v(&["validate", &path]));
            commands.push(v(&["powerset", &path]));
            commands.push(v(&["identity", &path, "x . y", "y . x"]));
            commands.push(v(&["eval", &path, "a"]));
            if name.ends_with(".lang.json") {
                for c in ["minimize", "empty", "fo2"] {
                    commands.push(v(&[c, &path]));
                }
                commands.push(v(&["equivalent", &path, &path]));
            }
        }
        for mut c in commands {
            c.push("--json".into());
            let args: Vec<&str> = c.iter().map(String::as_str).collect();
            let (a, b) = (monadlang(&args), monadlang(&args));
            runs += 1;
            if a.stdout != b.stdout || a.code != b.code || a.stdout.is_empty() {
                differ.push(format!("{} {name}", c[0]));
            }
        }
    }
    check(differ.is_empty(), format!("{runs} command/fixture pairs byte-identical"), format!("differ: {}", differ.join(", ")))
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 10] = [
        ("Moore correctness", c1_moore_correctness),
        ("Moore vs oracle", c2_moore_vs_oracle),
        ("Powerset soundness", c3_powerset),
        ("MSO decisions", c4_mso),
        ("FO² verdicts", c5_fo2),
        ("⪯ fixpoint vs oracle", c6_preceq),
        ("Identity checks", c7_identities),
        ("Unboundedness", c8_unboundedness),
        ("Tree instance", c9_trees),
        ("Determinism", c10_determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let verdict = std::panic::catch_unwind(run).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        match verdict {
            Ok(msg) => println!("PASS {:>2} {name}: {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {msg}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
