//! Writes the bundled fixtures as JSON documents.
//!
//! Usage: `cargo run -p monadlang --example write_fixtures [DIR]` (default `crates/cli/fixtures`).

use std::collections::BTreeMap;
use std::path::PathBuf;

use monadlang_core::fixtures;
use monadlang_core::io::{write_algebra, write_language, LanguageRef, MsoDoc};
use monadlang_core::mso::MsoExpr;

fn mso(expr: MsoExpr, env: &[(&str, &str)]) -> String {
    let env: BTreeMap<String, LanguageRef> =
        env.iter().map(|(k, f)| (k.to_string(), LanguageRef::Path(format!("{f}.lang.json")))).collect();
    let mut s = serde_json::to_string_pretty(&MsoDoc { expr, env }).expect("documents serialise");
    s.push('\n');
    s
}

fn main() -> std::io::Result<()> {
    let dir = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("crates/cli/fixtures"));
    std::fs::create_dir_all(&dir)?;
    for (name, alg) in fixtures::algebras() {
        std::fs::write(dir.join(format!("{name}.alg.json")), write_algebra(&alg))?;
    }
    for (name, l) in fixtures::languages() {
        std::fs::write(dir.join(format!("{name}.lang.json")), write_language(&l))?;
    }
    let base = MsoExpr::base;
    let docs = [
        (
            "inf_and_fin",
            mso(
                MsoExpr::and(base("inf-a"), base("fin-a")),
                &[("inf-a", "infinitely_many_a"), ("fin-a", "finitely_many_a")],
            ),
        ),
        (
            "inf_and_begins_b",
            mso(
                MsoExpr::and(base("inf-a"), base("begins-b")),
                &[("inf-a", "infinitely_many_a"), ("begins-b", "begins_with_b")],
            ),
        ),
        (
            "ones_after_zeros",
            mso(
                MsoExpr::and(base("zeros-then-ones"), MsoExpr::not(base("zeros"))),
                &[("zeros", "zeros"), ("zeros-then-ones", "zeros_then_ones")],
            ),
        ),
    ];
    for (name, text) in docs {
        std::fs::write(dir.join(format!("{name}.mso.json")), text)?;
    }
    Ok(())
}
