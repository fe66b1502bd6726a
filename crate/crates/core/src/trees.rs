//! Two tree instances: ranked trees over a ranked alphabet, whose finite
//! algebras are deterministic bottom-up tree automata, and two-sorted
//! forests and contexts.

use serde_json::Value;

use crate::algebra::{Algebra, Elem};
use crate::error::{Error, Result};
use crate::monad::{pointwise, ElemSet};
use crate::signature::{OpId, Operation, Signature, Slot};
use crate::validate::{associativity, violation, Violation};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RankedSymbol {
    pub name: String,
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RankedAlphabet {
    pub symbols: Vec<RankedSymbol>,
}

impl RankedAlphabet {
    pub fn new(symbols: &[(&str, usize)]) -> Result<RankedAlphabet> {
        let symbols: Vec<RankedSymbol> =
            symbols.iter().map(|(n, r)| RankedSymbol { name: n.to_string(), rank: *r }).collect();
        for (i, s) in symbols.iter().enumerate() {
            if symbols[..i].iter().any(|t| t.name == s.name) {
                return Err(Error::Schema(format!("duplicate ranked symbol `{}`", s.name)));
            }
            if !s.name.bytes().all(crate::term::is_ident_byte) || s.name.is_empty() {
                return Err(Error::Schema(format!("invalid ranked symbol name `{}`", s.name)));
            }
        }
        Ok(RankedAlphabet { symbols })
    }

    /// Reads `{"alphabet": [{"name": .., "rank": ..}, ..]}`.
    pub fn from_params(params: &Value) -> Result<RankedAlphabet> {
        let list = params
            .get("alphabet")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Schema("ranked instance needs params.alphabet".into()))?;
        let mut symbols = Vec::new();
        for entry in list {
            let name = entry.get("name").and_then(Value::as_str);
            let rank = entry.get("rank").and_then(Value::as_u64);
            match (name, rank) {
                (Some(n), Some(r)) => symbols.push((n, r as usize)),
                _ => return Err(Error::Schema("ranked symbol needs `name` and `rank`".into())),
            }
        }
        RankedAlphabet::new(&symbols)
    }
}

/// One sort; one operation per symbol, with `rank` single slots.
pub fn ranked_instance(sigma: &RankedAlphabet) -> Signature {
    Signature {
        monad: "ranked".into(),
        sorts: vec!["t".into()],
        ops: sigma.symbols.iter().map(|s| Operation::new(&s.name, vec![Slot::Single(0); s.rank], 0)).collect(),
    }
}

/// `{ f(a1..an) : ai ∈ Si }`.
pub fn powerset_eval_ranked(alg: &Algebra, op: OpId, args: &[&ElemSet]) -> ElemSet {
    pointwise(alg, op, args)
}

pub const FOREST: usize = 0;
pub const CONTEXT: usize = 1;
pub const CONCAT_FF: OpId = 0;
pub const CONCAT_FC: OpId = 1;
pub const CONCAT_CF: OpId = 2;
pub const SUBST_CC: OpId = 3;
pub const SUBST_CF: OpId = 4;

/// Sorts `forest` and `context`. `concat_*` place a forest beside a forest
/// or context; `subst_*` plug a context or forest into the port of a context.
pub fn forest_signature() -> Signature {
    let (f, c) = (Slot::Single(FOREST), Slot::Single(CONTEXT));
    Signature {
        monad: "forest".into(),
        sorts: vec!["forest".into(), "context".into()],
        ops: vec![
            Operation::new("concat_ff", vec![f, f], FOREST),
            Operation::new("concat_fc", vec![f, c], CONTEXT),
            Operation::new("concat_cf", vec![c, f], CONTEXT),
            Operation::new("subst_cc", vec![c, c], CONTEXT),
            Operation::new("subst_cf", vec![c, f], FOREST),
        ],
    }
}

/// Equational laws of forests and contexts. Necessary conditions only.
pub fn validate_forest(alg: &Algebra) -> Vec<Violation> {
    let mut out = associativity(alg, CONCAT_FF, "forest-associativity");
    out.extend(associativity(alg, SUBST_CC, "context-associativity"));
    let forests = alg.of_sort(FOREST).to_vec();
    let contexts = alg.of_sort(CONTEXT).to_vec();
    let m = |op: OpId, x: Elem, y: Elem| alg.mul(op, x, y);
    let mut check = |axiom: &str, witness: &[Elem], lhs: Elem, rhs: Elem, text: &str| {
        if lhs != rhs {
            let names: Vec<&str> = witness.iter().map(|e| alg.name(*e)).collect();
            out.push(violation(
                alg,
                axiom,
                witness,
                format!("{text} at ({}): {} vs {}", names.join(","), alg.name(lhs), alg.name(rhs)),
            ));
        }
    };
    for &a in &contexts {
        for &b in &contexts {
            for &c in &forests {
                check("action", &[a, b, c], m(SUBST_CF, m(SUBST_CC, a, b), c), m(SUBST_CF, a, m(SUBST_CF, b, c)), "(a∘b)c = a(bc)");
            }
        }
    }
    for &c in &forests {
        for &a in &contexts {
            for &d in &forests {
                check("insertion-left", &[c, a, d], m(SUBST_CF, m(CONCAT_FC, c, a), d), m(CONCAT_FF, c, m(SUBST_CF, a, d)), "(c+a)d = c+ad");
                check("insertion-right", &[a, c, d], m(SUBST_CF, m(CONCAT_CF, a, c), d), m(CONCAT_FF, m(SUBST_CF, a, d), c), "(a+c)d = ad+c");
                check("mixed-associativity", &[c, a, d], m(CONCAT_CF, m(CONCAT_FC, c, a), d), m(CONCAT_FC, c, m(CONCAT_CF, a, d)), "(c+a)+d = c+(a+d)");
            }
            for &b in &contexts {
                check("insertion-left-context", &[c, a, b], m(SUBST_CC, m(CONCAT_FC, c, a), b), m(CONCAT_FC, c, m(SUBST_CC, a, b)), "(c+a)∘b = c+(a∘b)");
                check("insertion-right-context", &[a, c, b], m(SUBST_CC, m(CONCAT_CF, a, c), b), m(CONCAT_CF, m(SUBST_CC, a, b), c), "(a+c)∘b = (a∘b)+c");
            }
        }
        for &d in &forests {
            for &a in &contexts {
                check("mixed-associativity", &[c, d, a], m(CONCAT_FC, m(CONCAT_FF, c, d), a), m(CONCAT_FC, c, m(CONCAT_FC, d, a)), "(c+d)+a = c+(d+a)");
                check("mixed-associativity", &[a, c, d], m(CONCAT_CF, m(CONCAT_CF, a, c), d), m(CONCAT_CF, a, m(CONCAT_FF, c, d)), "(a+c)+d = a+(c+d)");
            }
        }
    }
    out
}
