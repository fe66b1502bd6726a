//! Finite and infinite words. Finite algebras are one-sorted Wilke-style
//! reducts with a binary product and an ω-power.

use crate::algebra::{Algebra, Elem};
use crate::error::{Error, Result};
use crate::monad::ElemSet;
use crate::signature::{OpId, Operation, Signature, Slot};
use crate::term::Term;
use crate::validate::{associativity, wilke, Violation};
use crate::words::word_term;

pub const CONCAT: OpId = 0;
pub const OMEGA: OpId = 1;

pub fn signature() -> Signature {
    Signature {
        monad: "infty".into(),
        sorts: vec!["s".into()],
        ops: vec![
            Operation::new("concat", vec![Slot::Single(0), Slot::Single(0)], 0),
            Operation::new("omega", vec![Slot::Single(0)], 0),
        ],
    }
}

/// The term for `u·v^ω` (just `v^ω` when `u` is empty).
pub fn up_term<S: AsRef<str>>(u: &[S], v: &[S]) -> Result<Term> {
    let period = Term::app(OMEGA, vec![word_term(v)?]);
    if u.is_empty() {
        return Ok(period);
    }
    Ok(Term::app(CONCAT, vec![word_term(u)?, period]))
}

/// [`up_term`] over the characters of two strings.
pub fn up_term_str(u: &str, v: &str) -> Result<Term> {
    let split = |s: &str| s.chars().map(String::from).collect::<Vec<_>>();
    up_term(&split(u), &split(v))
}

/// Associativity, `(xy)^ω = x(yx)^ω` and `(x^n)^ω = x^ω`. Necessary
/// conditions only.
pub fn validate_wilke(alg: &Algebra) -> Vec<Violation> {
    let mut out = associativity(alg, CONCAT, "associativity");
    out.extend(wilke(alg, CONCAT, OMEGA, false));
    out
}

fn op_named(alg: &Algebra, name: &str) -> Result<OpId> {
    alg.signature().op_id(name).ok_or_else(|| Error::UnknownOp(name.to_string()))
}

/// Closure of `s` under the binary product.
pub fn concat_closure(alg: &Algebra, concat: OpId, s: &ElemSet) -> ElemSet {
    let mut closed = s.clone();
    let mut frontier: Vec<Elem> = s.iter().copied().collect();
    while let Some(x) = frontier.pop() {
        let current: Vec<Elem> = closed.iter().copied().collect();
        for y in current {
            for v in [alg.mul(concat, x, y), alg.mul(concat, y, x)] {
                if closed.insert(v) {
                    frontier.push(v);
                }
            }
        }
    }
    closed
}

/// Values of all ∞-words formed by an infinite sequence of members of `s`:
/// `{ q^ω, p·q^ω : p, q ∈ ⟨s⟩ }`. With `mirror`, the reverse power and
/// `{ q^-ω, q^-ω·p }` are used. Requires `concat` and `omega` (resp.
/// `romega`) in the signature.
pub fn powerset_eval_infty_omega(alg: &Algebra, s: &ElemSet, mirror: bool) -> ElemSet {
    let concat = op_named(alg, "concat").expect("instance has concat");
    let power = op_named(alg, if mirror { "romega" } else { "omega" }).expect("instance has an ω-power");
    let closed = concat_closure(alg, concat, s);
    let mut out = ElemSet::new();
    for &q in &closed {
        let qw = alg.eval(power, &[q]);
        out.insert(qw);
        for &p in &closed {
            out.insert(if mirror { alg.mul(concat, qw, p) } else { alg.mul(concat, p, qw) });
        }
    }
    out
}

/// Powerset value of any infty shape.
pub fn powerset_eval_infty(alg: &Algebra, op: OpId, args: &[&ElemSet]) -> Result<ElemSet> {
    alg.monad().powerset_op(alg, op, args)
}
