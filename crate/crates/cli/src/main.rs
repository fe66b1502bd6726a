//! `monadlang`: decision procedures over algebra, language and expression documents.
//!
//! Exit status: 0 for a positive verdict, 1 for a negative one, 2 when an
//! input cannot be read, parsed or processed, 3 when `--oracle-depth`
//! finds a disagreement with the brute-force cross-check.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use monadlang_core::closure::emptiness;
use monadlang_core::construct::{distinguishing_term, powerset};
use monadlang_core::io::{
    algebra_to_doc, language_to_doc, read_document, read_language, read_mso, write_algebra, write_language, Document,
};
use monadlang_core::moore::moore_syntactic;
use monadlang_core::mso::compile;
use monadlang_core::omega::{identity_counterexample, language_identity_counterexample, FiniteSemigroup, OmegaTerm};
use monadlang_core::pointed::{fo2_definable, preceq, preceq_bruteforce};
use monadlang_core::term::ground_terms;
use monadlang_core::validate::validate;
use monadlang_core::{Algebra, Alphabet, Error, Language, Letter, Morphism, Term};

#[derive(Parser, Debug)]
#[command(name = "monadlang", version, about = "Finite algebras for languages of words, ∞-words, pointed words, trees and chains")]
struct Cli {
    /// Print a machine-readable JSON report.
    #[arg(long, global = true)]
    json: bool,
    /// Include witnesses for negative verdicts in text reports.
    #[arg(long, global = true)]
    witness: bool,
    /// Maximum number of axiom violations listed by `validate`.
    #[arg(long, global = true, default_value_t = 5, value_name = "N")]
    max_report_violations: usize,
    /// Cross-check against brute-force enumeration of ground terms with at
    /// most K nodes (pointed words of length at most K for `fo2`).
    #[arg(long, global = true, value_name = "K")]
    oracle_depth: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the axioms of the instance; exits 0 when all hold.
    Validate { file: PathBuf },
    /// Compute the syntactic morphism of a language.
    Minimize {
        file: PathBuf,
        /// Write the syntactic language document here.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Decide emptiness; exits 0 when the language is empty.
    Empty { file: PathBuf },
    /// Decide language equivalence; exits 0 when equal.
    Equivalent { first: PathBuf, second: PathBuf },
    /// Check an identity of ω-terms such as `(x)^# . x` = `(x)^#`; exits 0 when it holds.
    Identity { file: PathBuf, lhs: String, rhs: String },
    /// Decide two-variable first-order definability of a pointed-word language; exits 0 when definable.
    Fo2 { file: PathBuf },
    /// Decide satisfiability of an expression document; exits 0 when satisfiable.
    MsoSat { file: PathBuf },
    /// Evaluate a ground term; for a language, exits 0 when it is accepted.
    Eval { file: PathBuf, term: String },
    /// Build the powerset algebra.
    Powerset {
        file: PathBuf,
        /// Write the powerset algebra document here.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::Minimize { .. } => "minimize",
            Command::Empty { .. } => "empty",
            Command::Equivalent { .. } => "equivalent",
            Command::Identity { .. } => "identity",
            Command::Fo2 { .. } => "fo2",
            Command::MsoSat { .. } => "mso-sat",
            Command::Eval { .. } => "eval",
            Command::Powerset { .. } => "powerset",
        }
    }
}

/// A verdict with its exit code, JSON report and text report.
struct Outcome {
    code: u8,
    json: Value,
    text: String,
}

impl Outcome {
    fn verdict(positive: bool, json: Value, text: String) -> Outcome {
        Outcome { code: if positive { 0 } else { 1 }, json, text }
    }
}

/// Brute-force comparison counts.
struct Oracle {
    limit: usize,
    checked: usize,
    mismatches: usize,
    first: Option<String>,
}

impl Oracle {
    fn new(limit: usize) -> Oracle {
        Oracle { limit, checked: 0, mismatches: 0, first: None }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.mismatches += 1;
            self.first.get_or_insert_with(what);
        }
    }

    fn attach(self, mut out: Outcome) -> Outcome {
        out.json["oracle"] = json!({
            "limit": self.limit,
            "checked": self.checked,
            "mismatches": self.mismatches,
            "first_mismatch": self.first,
        });
        out.text.push_str(&format!("oracle: {} checked, {} mismatches\n", self.checked, self.mismatches));
        if let Some(first) = &self.first {
            out.text.push_str(&format!("  first mismatch: {first}\n"));
        }
        if self.mismatches > 0 {
            out.code = 3;
        }
        out
    }
}

fn term_text(l: &Language, t: &Term) -> String {
    t.to_text(l.algebra().signature())
}

fn table_text(alg: &Algebra) -> String {
    alg.entries().iter().map(|(shape, v)| format!("  {} = {}\n", alg.shape_string(shape.op, &shape.args), alg.name(*v))).collect()
}

fn names(alg: &Algebra, elems: &[usize]) -> Vec<String> {
    elems.iter().map(|&e| alg.name(e).to_string()).collect()
}

/// An algebra as a morphism whose letters are its own elements.
fn identity_morphism(alg: &Algebra) -> Result<Morphism, Error> {
    let letters = alg.elements().iter().map(|e| Letter { name: e.name.clone(), sort: e.sort }).collect();
    Morphism::new(Alphabet::new(letters)?, alg.clone(), (0..alg.len()).collect())
}

fn write_output(path: &Option<PathBuf>, text: &str) -> Result<(), Error> {
    if let Some(p) = path {
        fs::write(p, text).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
    }
    Ok(())
}

fn cmd_validate(cli: &Cli, file: &Path) -> Result<Outcome, Error> {
    let doc = read_document(file)?;
    let alg = doc.algebra();
    let report = validate(alg);
    let shown = &report.violations[..report.violations.len().min(cli.max_report_violations)];
    let json = json!({
        "monad": report.monad,
        "elements": alg.len(),
        "ok": report.is_ok(),
        "complete_axioms": report.complete_axioms,
        "violation_count": report.violations.len(),
        "violations": shown,
    });
    let mut text = if report.is_ok() {
        format!("ok: {} algebra with {} elements\n", report.monad, alg.len())
    } else {
        format!("invalid: {} violation(s) in {} algebra\n", report.violations.len(), report.monad)
    };
    for v in shown {
        text.push_str(&format!("  {}: {}\n", v.axiom, v.detail));
        if cli.witness {
            text.push_str(&format!("    witness: {}\n", v.witness.join(", ")));
        }
    }
    if shown.len() < report.violations.len() {
        text.push_str(&format!("  ... {} more\n", report.violations.len() - shown.len()));
    }
    if !report.complete_axioms {
        text.push_str("note: the checked axioms are necessary but not sufficient for this instance\n");
    }
    Ok(Outcome::verdict(report.is_ok(), json, text))
}

fn cmd_minimize(cli: &Cli, file: &Path, output: &Option<PathBuf>) -> Result<Outcome, Error> {
    let l = read_language(file)?;
    let syn = moore_syntactic(&l)?;
    let m = &syn.language;
    let classes: Vec<Vec<String>> = syn.partition.blocks().iter().map(|b| names(l.algebra(), b)).collect();
    write_output(output, &write_language(m))?;
    let json = json!({
        "original_size": l.algebra().len(),
        "size": m.algebra().len(),
        "classes": classes,
        "language": language_to_doc(m),
    });
    let mut text = format!("syntactic algebra: {} elements (from {})\n", m.algebra().len(), l.algebra().len());
    for (b, class) in classes.iter().enumerate() {
        text.push_str(&format!("  {} <- {{{}}}\n", m.algebra().name(b), class.join(", ")));
    }
    text.push_str("table:\n");
    text.push_str(&table_text(m.algebra()));
    text.push_str(&format!("accepting: {{{}}}\n", names(m.algebra(), &m.accepting().iter().copied().collect::<Vec<_>>()).join(", ")));
    let out = Outcome::verdict(true, json, text);
    Ok(match cli.oracle_depth {
        Some(k) => {
            let mut oracle = Oracle::new(k);
            for (t, _) in ground_terms(l.algebra().signature(), l.alphabet(), k) {
                let ok = l.contains(&t)? == m.contains(&t)?;
                oracle.check(ok, || term_text(&l, &t));
            }
            oracle.attach(out)
        }
        None => out,
    })
}

fn cmd_empty(cli: &Cli, file: &Path) -> Result<Outcome, Error> {
    let l = read_language(file)?;
    let e = emptiness(&l)?;
    let witness = e.witness().map(|t| term_text(&l, t));
    let json = json!({ "empty": e.is_empty(), "witness": witness });
    let text = match &witness {
        None => "empty\n".to_string(),
        Some(w) => format!("nonempty\nwitness: {w}\n"),
    };
    let out = Outcome::verdict(e.is_empty(), json, text);
    Ok(match cli.oracle_depth {
        Some(k) => {
            let mut oracle = Oracle::new(k);
            if let Some(t) = e.witness() {
                oracle.check(l.contains(t)?, || format!("witness {} rejected", term_text(&l, t)));
            }
            for (t, _) in ground_terms(l.algebra().signature(), l.alphabet(), k) {
                let ok = !(e.is_empty() && l.contains(&t)?);
                oracle.check(ok, || format!("{} accepted", term_text(&l, &t)));
            }
            oracle.attach(out)
        }
        None => out,
    })
}

fn cmd_equivalent(cli: &Cli, first: &Path, second: &Path) -> Result<Outcome, Error> {
    let l1 = read_language(first)?;
    let l2 = read_language(second)?;
    let d = distinguishing_term(&l1, &l2)?;
    let json = match &d {
        None => json!({ "equivalent": true, "distinguishing_term": null }),
        Some(t) => json!({
            "equivalent": false,
            "distinguishing_term": term_text(&l1, t),
            "in_first": l1.contains(t)?,
            "in_second": l2.contains(t)?,
        }),
    };
    let text = match &d {
        None => "equivalent\n".to_string(),
        Some(t) if cli.witness => {
            let side = if l1.contains(t)? { "first" } else { "second" };
            format!("not equivalent\ndistinguishing term (only in {side}): {}\n", term_text(&l1, t))
        }
        Some(_) => "not equivalent\n".to_string(),
    };
    let out = Outcome::verdict(d.is_none(), json, text);
    Ok(match cli.oracle_depth {
        Some(k) => {
            let mut oracle = Oracle::new(k);
            for (t, _) in ground_terms(l1.algebra().signature(), l1.alphabet(), k) {
                let differ = l1.contains(&t)? != l2.contains(&t)?;
                oracle.check(!(differ && d.is_none()), || format!("{} separates the languages", term_text(&l1, &t)));
            }
            oracle.attach(out)
        }
        None => out,
    })
}

fn cmd_identity(cli: &Cli, file: &Path, lhs: &str, rhs: &str) -> Result<Outcome, Error> {
    let (l, r) = (OmegaTerm::parse(lhs)?, OmegaTerm::parse(rhs)?);
    let cex = match read_document(file)? {
        Document::Language(lang) => language_identity_counterexample(&lang, &l, &r)?,
        doc => identity_counterexample(&FiniteSemigroup::from_algebra(doc.algebra())?, &l, &r)?,
    };
    let json = json!({ "lhs": l.to_string(), "rhs": r.to_string(), "holds": cex.is_none(), "counterexample": cex });
    let mut text = match &cex {
        None => format!("holds: {l} = {r}\n"),
        Some(_) => format!("fails: {l} = {r}\n"),
    };
    if let (Some(c), true) = (&cex, cli.witness) {
        let vals: Vec<String> = c.valuation.iter().map(|(v, e)| format!("{v} := {e}")).collect();
        text.push_str(&format!("  valuation: {}\n  lhs = {}, rhs = {}\n", vals.join(", "), c.lhs, c.rhs));
    }
    Ok(Outcome::verdict(cex.is_none(), json, text))
}

fn cmd_fo2(cli: &Cli, file: &Path) -> Result<Outcome, Error> {
    let l = read_language(file)?;
    let report = fo2_definable(&l)?;
    let json = serde_json::to_value(&report).expect("report serialises");
    let mut text = format!(
        "{}\n  syntactic algebra: {} elements; left monoid: {} ({}in DA); right monoid: {} ({}in DA)\n",
        if report.definable { "definable" } else { "not definable" },
        report.syntactic_size,
        report.left_monoid_size,
        if report.left_in_da { "" } else { "not " },
        report.right_monoid_size,
        if report.right_in_da { "" } else { "not " },
    );
    if let Some(f) = &report.failure {
        text.push_str(&format!("  failing condition: {}\n", f.condition));
        if cli.witness {
            text.push_str(&format!(
                "    a = {}, b = {}, c = {}, n = {}; values {}, {}, {}\n",
                f.a, f.b, f.c, f.n, f.values[0], f.values[1], f.values[2]
            ));
        }
    }
    let out = Outcome::verdict(report.definable, json, text);
    Ok(match cli.oracle_depth {
        Some(k) => {
            let syn = moore_syntactic(&l)?;
            let alg = syn.language.algebra();
            let (fast, slow) = (preceq(alg), preceq_bruteforce(alg, k));
            let mut oracle = Oracle::new(k);
            for a in 0..alg.len() {
                for b in 0..alg.len() {
                    oracle.check(fast.holds(a, b) == slow.holds(a, b), || {
                        format!("{} ⪯ {}: fixpoint {}, enumeration {}", alg.name(a), alg.name(b), fast.holds(a, b), slow.holds(a, b))
                    });
                }
            }
            oracle.attach(out)
        }
        None => out,
    })
}

fn cmd_mso_sat(file: &Path) -> Result<Outcome, Error> {
    let (expr, env) = read_mso(file)?;
    let l = compile(&expr, &env)?;
    let e = emptiness(&l)?;
    let witness = e.witness().map(|t| term_text(&l, t));
    let json = json!({
        "satisfiable": !e.is_empty(),
        "witness": witness,
        "recogniser_size": l.algebra().len(),
        "alphabet": l.alphabet().letters().iter().map(|x| x.name.clone()).collect::<Vec<_>>(),
    });
    let text = match &witness {
        None => "unsatisfiable\n".to_string(),
        Some(w) => format!("satisfiable\nwitness: {w}\n"),
    };
    Ok(Outcome::verdict(!e.is_empty(), json, text))
}

fn cmd_eval(file: &Path, term: &str) -> Result<Outcome, Error> {
    let doc = read_document(file)?;
    let (h, lang) = match &doc {
        Document::Algebra(a) => (identity_morphism(a)?, None),
        Document::Morphism(h) => (h.clone(), None),
        Document::Language(l) => (l.morphism().clone(), Some(l)),
    };
    let t = Term::parse(term, h.target().signature())?;
    let v = h.evaluate(&t)?;
    let name = h.target().name(v).to_string();
    let accepted = lang.map(|l| l.accepts(v));
    let json = json!({ "term": t.to_text(h.target().signature()), "value": name, "accepted": accepted });
    let text = match accepted {
        None => format!("{name}\n"),
        Some(true) => format!("{name}\naccepted\n"),
        Some(false) => format!("{name}\nrejected\n"),
    };
    Ok(Outcome::verdict(accepted.unwrap_or(true), json, text))
}

fn cmd_powerset(file: &Path, output: &Option<PathBuf>) -> Result<Outcome, Error> {
    let doc = read_document(file)?;
    let p = powerset(doc.algebra())?;
    write_output(output, &write_algebra(&p.algebra))?;
    let json = json!({ "size": p.algebra.len(), "algebra": algebra_to_doc(&p.algebra) });
    let mut text = format!("powerset algebra: {} elements\n", p.algebra.len());
    text.push_str(&table_text(&p.algebra));
    Ok(Outcome::verdict(true, json, text))
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    match &cli.command {
        Command::Validate { file } => cmd_validate(cli, file),
        Command::Minimize { file, output } => cmd_minimize(cli, file, output),
        Command::Empty { file } => cmd_empty(cli, file),
        Command::Equivalent { first, second } => cmd_equivalent(cli, first, second),
        Command::Identity { file, lhs, rhs } => cmd_identity(cli, file, lhs, rhs),
        Command::Fo2 { file } => cmd_fo2(cli, file),
        Command::MsoSat { file } => cmd_mso_sat(file),
        Command::Eval { file, term } => cmd_eval(file, term),
        Command::Powerset { file, output } => cmd_powerset(file, output),
    }
}

fn error_json(e: &Error) -> Value {
    match e {
        Error::Syntax { line, column, msg } => json!({ "message": msg, "line": line, "column": column }),
        other => json!({ "message": other.to_string() }),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command = cli.command.name();
    match run(&cli) {
        Ok(out) => {
            if cli.json {
                let mut report = json!({ "command": command });
                if let (Value::Object(dst), Value::Object(src)) = (&mut report, out.json) {
                    dst.extend(src);
                }
                println!("{}", serde_json::to_string_pretty(&report).expect("report serialises"));
            } else {
                print!("{}", out.text);
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            if cli.json {
                let report = json!({ "command": command, "error": error_json(&e) });
                println!("{}", serde_json::to_string_pretty(&report).expect("report serialises"));
            }
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
