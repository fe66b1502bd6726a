//! Countable chains: well-ordered (product and ω-power), scattered (adds
//! the reverse power) and arbitrary countable (adds dense shuffles of
//! nonempty sets).

use crate::algebra::{Algebra, Arg, Elem};
use crate::error::Result;
use crate::monad::ElemSet;
use crate::signature::{OpId, Operation, Signature, Slot};
use crate::validate::{associativity, violation, wilke, Violation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChainVariant {
    Well,
    Scattered,
    Countable,
}

pub const CONCAT: OpId = 0;
pub const OMEGA: OpId = 1;
pub const ROMEGA: OpId = 2;
pub const SHUFFLE: OpId = 3;

impl ChainVariant {
    pub const ALL: [ChainVariant; 3] = [ChainVariant::Well, ChainVariant::Scattered, ChainVariant::Countable];

    pub fn id(self) -> &'static str {
        match self {
            ChainVariant::Well => "chain-well",
            ChainVariant::Scattered => "chain-scattered",
            ChainVariant::Countable => "chain-countable",
        }
    }

    pub fn from_id(id: &str) -> Option<ChainVariant> {
        ChainVariant::ALL.into_iter().find(|v| v.id() == id)
    }
}

pub fn chain_instance(variant: ChainVariant) -> Signature {
    let s = Slot::Single(0);
    let mut ops = vec![Operation::new("concat", vec![s, s], 0), Operation::new("omega", vec![s], 0)];
    if variant != ChainVariant::Well {
        ops.push(Operation::new("romega", vec![s], 0));
    }
    if variant == ChainVariant::Countable {
        ops.push(Operation::new("shuffle", vec![Slot::Set(0)], 0));
    }
    Signature { monad: variant.id().into(), sorts: vec!["s".into()], ops }
}

/// Wilke axioms for `omega`, their mirror for `romega`, and identities of
/// shuffles: with `e = shuffle(Y)`, `e·e = e`, `e·y·e = e` for `y ∈ Y`,
/// `e^ω = e^-ω = e`, `shuffle({e}) = e` and `shuffle(Y ∪ {e}) = e`.
/// Necessary conditions only.
pub fn validate_chain(alg: &Algebra) -> Vec<Violation> {
    let ops = alg.signature().ops.len();
    let mut out = associativity(alg, CONCAT, "associativity");
    out.extend(wilke(alg, CONCAT, OMEGA, false));
    if ops > ROMEGA {
        out.extend(wilke(alg, CONCAT, ROMEGA, true));
    }
    if ops > SHUFFLE {
        out.extend(shuffle_identities(alg));
    }
    out
}

fn shuffle_identities(alg: &Algebra) -> Vec<Violation> {
    let name = |e: Elem| alg.name(e).to_string();
    let shuffle = |set: Vec<Elem>| alg.apply(SHUFFLE, &[Arg::set(set)]);
    let mut out = Vec::new();
    for args in alg.shapes(SHUFFLE) {
        let ys = args[0].elems().to_vec();
        let e = alg.apply(SHUFFLE, &args);
        let set_name = format!("{{{}}}", ys.iter().map(|y| name(*y)).collect::<Vec<_>>().join(","));
        let mut witness = ys.clone();
        witness.push(e);
        let mut fail = |axiom: &str, got: Elem, what: String| {
            if got != e {
                out.push(violation(
                    alg,
                    axiom,
                    &witness,
                    format!("e = shuffle({set_name}) = {}, but {what} = {}", name(e), name(got)),
                ));
            }
        };
        fail("shuffle-idempotent", alg.mul(CONCAT, e, e), "e·e".into());
        for &y in &ys {
            fail("shuffle-absorb", alg.mul(CONCAT, alg.mul(CONCAT, e, y), e), format!("e·{}·e", name(y)));
        }
        fail("shuffle-power", alg.eval(OMEGA, &[e]), "e^ω".into());
        fail("shuffle-power", alg.eval(ROMEGA, &[e]), "e^-ω".into());
        fail("shuffle-singleton", shuffle(vec![e]), "shuffle({e})".into());
        let mut with_e = ys.clone();
        with_e.push(e);
        fail("shuffle-union", shuffle(with_e), "shuffle(Y∪{e})".into());
    }
    out
}

/// Powerset value of a chain shape; shuffle shapes are unsupported.
pub fn powerset_eval_chain(alg: &Algebra, op: OpId, args: &[&ElemSet]) -> Result<ElemSet> {
    alg.monad().powerset_op(alg, op, args)
}
