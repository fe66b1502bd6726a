//! The monad instances and their per-instance behaviour: signature,
//! axiom checks and powerset evaluation.

use std::collections::BTreeSet;

use serde_json::{json, Value};

use crate::algebra::{Algebra, Elem};
use crate::chains::{self, ChainVariant};
use crate::error::{Error, Result};
use crate::signature::{OpId, Signature, Slot};
use crate::trees::{self, RankedAlphabet};
use crate::validate::Violation;
use crate::{infty, pointed, words};

pub type ElemSet = BTreeSet<Elem>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Monad {
    /// Nonempty finite words; algebras are semigroups.
    Word,
    /// Finite and infinite words; Wilke-style reducts.
    Infty,
    /// Pointed words; left and right extension maps.
    Point,
    /// Ranked trees over a fixed ranked alphabet.
    Ranked(RankedAlphabet),
    /// Two-sorted forests and contexts.
    Forest,
    /// Countable chains of the given kind.
    Chain(ChainVariant),
}

impl Monad {
    pub fn id(&self) -> &'static str {
        match self {
            Monad::Word => "word",
            Monad::Infty => "infty",
            Monad::Point => "point",
            Monad::Ranked(_) => "ranked",
            Monad::Forest => "forest",
            Monad::Chain(v) => v.id(),
        }
    }

    pub fn signature(&self) -> Signature {
        match self {
            Monad::Word => words::signature(),
            Monad::Infty => infty::signature(),
            Monad::Point => pointed::signature(),
            Monad::Ranked(sigma) => trees::ranked_instance(sigma),
            Monad::Forest => trees::forest_signature(),
            Monad::Chain(v) => chains::chain_instance(*v),
        }
    }

    /// Instance parameters as stored under `"params"` in documents.
    pub fn params(&self) -> Value {
        match self {
            Monad::Ranked(sigma) => json!({
                "alphabet": sigma.symbols.iter().map(|s| json!({"name": s.name, "rank": s.rank})).collect::<Vec<_>>()
            }),
            _ => json!({}),
        }
    }

    pub fn from_id(id: &str, params: &Value) -> Result<Monad> {
        Ok(match id {
            "word" => Monad::Word,
            "infty" => Monad::Infty,
            "point" => Monad::Point,
            "forest" => Monad::Forest,
            "ranked" => Monad::Ranked(RankedAlphabet::from_params(params)?),
            other => match ChainVariant::from_id(other) {
                Some(v) => Monad::Chain(v),
                None => return Err(Error::UnknownMonad(other.to_string())),
            },
        })
    }

    /// Whether the checked axioms are known to characterise the reducts
    /// that extend to genuine algebras of the monad.
    pub fn axioms_complete(&self) -> bool {
        matches!(self, Monad::Word | Monad::Ranked(_))
    }

    pub(crate) fn axioms(&self, alg: &Algebra) -> Vec<Violation> {
        match self {
            Monad::Word => words::validate_semigroup(alg),
            Monad::Infty => infty::validate_wilke(alg),
            Monad::Point => pointed::validate_point(alg),
            Monad::Ranked(_) => Vec::new(),
            Monad::Forest => trees::validate_forest(alg),
            Monad::Chain(_) => chains::validate_chain(alg),
        }
    }

    /// Pointwise value of `op` applied to subsets of the carrier of `alg`:
    /// the set of values of all shapes whose arguments are pointwise members.
    pub fn powerset_op(&self, alg: &Algebra, op: OpId, args: &[&ElemSet]) -> Result<ElemSet> {
        let operation = alg.signature().op(op);
        if operation.slots.iter().any(|s| matches!(s, Slot::Set(_))) {
            return Err(Error::PowersetUnsupported(operation.name.clone()));
        }
        if args.iter().any(|s| s.is_empty()) {
            return Ok(ElemSet::new());
        }
        match (self, operation.name.as_str()) {
            (Monad::Infty, "omega") => Ok(infty::powerset_eval_infty_omega(alg, args[0], false)),
            (Monad::Chain(_), "omega") => Ok(infty::powerset_eval_infty_omega(alg, args[0], false)),
            (Monad::Chain(_), "romega") => Ok(infty::powerset_eval_infty_omega(alg, args[0], true)),
            _ => Ok(pointwise(alg, op, args)),
        }
    }
}

/// `{ op(a1..an) : ai in Si }` for an all-single-slot operation.
pub(crate) fn pointwise(alg: &Algebra, op: OpId, args: &[&ElemSet]) -> ElemSet {
    let lists: Vec<Vec<Elem>> = args.iter().map(|s| s.iter().copied().collect()).collect();
    let mut out = ElemSet::new();
    if lists.iter().any(Vec::is_empty) {
        return out;
    }
    let mut cursor = vec![0usize; lists.len()];
    let mut current: Vec<Elem> = lists.iter().map(|l| l[0]).collect();
    loop {
        out.insert(alg.eval(op, &current));
        let mut i = lists.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            cursor[i] += 1;
            if cursor[i] < lists[i].len() {
                current[i] = lists[i][cursor[i]];
                break;
            }
            cursor[i] = 0;
            current[i] = lists[i][0];
        }
    }
}
