//! Nonempty finite words. Algebras are semigroups; the only generator
//! shape is the binary product.

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::monad::{pointwise, ElemSet};
use crate::signature::{Operation, Signature, Slot};
use crate::term::Term;
use crate::validate::{associativity, Violation};

pub const CONCAT: usize = 0;

pub fn signature() -> Signature {
    Signature {
        monad: "word".into(),
        sorts: vec!["s".into()],
        ops: vec![Operation::new("concat", vec![Slot::Single(0), Slot::Single(0)], 0)],
    }
}

/// Left-associated product of the letters of `w`.
pub fn word_term<S: AsRef<str>>(w: &[S]) -> Result<Term> {
    let mut letters = w.iter().map(|l| Term::letter(l.as_ref()));
    let first = letters.next().ok_or(Error::EmptyWord)?;
    Ok(letters.fold(first, |acc, l| Term::app(CONCAT, vec![acc, l])))
}

/// [`word_term`] over the characters of a string.
pub fn word_term_str(w: &str) -> Result<Term> {
    let letters: Vec<String> = w.chars().map(String::from).collect();
    word_term(&letters)
}

/// Associativity over all triples; complete for semigroups.
pub fn validate_semigroup(alg: &Algebra) -> Vec<Violation> {
    associativity(alg, CONCAT, "associativity")
}

/// `{ s·t : s ∈ S, t ∈ T }`.
pub fn powerset_eval_word(alg: &Algebra, s: &ElemSet, t: &ElemSet) -> ElemSet {
    pointwise(alg, CONCAT, &[s, t])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn word_terms_are_left_associated() {
        let sig = signature();
        assert_eq!(word_term_str("a").unwrap(), Term::letter("a"));
        assert_eq!(word_term_str("ab").unwrap().to_text(&sig), "concat(a,b)");
        assert_eq!(word_term_str("abc").unwrap().to_text(&sig), "concat(concat(a,b),c)");
        assert_eq!(word_term_str(""), Err(Error::EmptyWord));
    }

    #[test]
    fn semigroup_axioms() {
        assert!(validate_semigroup(&fixtures::z2()).is_empty());
        assert!(validate_semigroup(&fixtures::u1()).is_empty());
        let bad = validate_semigroup(&fixtures::non_associative());
        assert!(bad.iter().any(|v| v.witness == ["a", "a", "a"]));
    }

    #[test]
    fn powerset_products() {
        let z2 = fixtures::z2();
        let (o, e) = (z2.lookup("o").unwrap(), z2.lookup("e").unwrap());
        let set = |v: &[usize]| v.iter().copied().collect::<ElemSet>();
        assert_eq!(powerset_eval_word(&z2, &set(&[o]), &set(&[o, e])), set(&[o, e]));
        assert_eq!(powerset_eval_word(&z2, &set(&[]), &set(&[o])), set(&[]));
        assert_eq!(powerset_eval_word(&z2, &set(&[e]), &set(&[e])), set(&[e]));
    }
}
