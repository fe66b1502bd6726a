//! ω-terms over a concatenation and the idempotent power `#`, their
//! evaluation in finite semigroups, identity checking, and letter counting
//! in profinite words.
//!
//! Text syntax: identifiers (`[A-Za-z0-9_']+`), `(s . t)` for products
//! (dots may also chain at top level or inside parentheses), and `(s)^#`
//! or `x^#` for idempotent powers.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::Add;

use serde::Serialize;

use crate::algebra::{Algebra, Elem};
use crate::error::{Error, Result};
use crate::monad::Monad;
use crate::morphism::Language;
use crate::term::is_ident_byte;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum OmegaTerm {
    Var(String),
    /// A carrier element (in evaluation) or a letter (in counting).
    Const(String),
    Concat(Box<OmegaTerm>, Box<OmegaTerm>),
    Ipow(Box<OmegaTerm>),
}

impl OmegaTerm {
    pub fn var(name: &str) -> OmegaTerm {
        OmegaTerm::Var(name.into())
    }

    pub fn constant(name: &str) -> OmegaTerm {
        OmegaTerm::Const(name.into())
    }

    pub fn concat(s: OmegaTerm, t: OmegaTerm) -> OmegaTerm {
        OmegaTerm::Concat(Box::new(s), Box::new(t))
    }

    pub fn ipow(t: OmegaTerm) -> OmegaTerm {
        OmegaTerm::Ipow(Box::new(t))
    }

    /// Parses with every identifier read as a variable.
    pub fn parse(text: &str) -> Result<OmegaTerm> {
        Parser::run(text, false)
    }

    /// Parses with every identifier read as a constant (a closed term).
    pub fn parse_closed(text: &str) -> Result<OmegaTerm> {
        Parser::run(text, true)
    }

    /// Variables in order of first occurrence.
    pub fn vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            OmegaTerm::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone())
                }
            }
            OmegaTerm::Const(_) => {}
            OmegaTerm::Concat(s, t) => {
                s.collect_vars(out);
                t.collect_vars(out);
            }
            OmegaTerm::Ipow(t) => t.collect_vars(out),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            OmegaTerm::Var(_) | OmegaTerm::Const(_) => 0,
            OmegaTerm::Concat(s, t) => 1 + s.depth().max(t.depth()),
            OmegaTerm::Ipow(t) => 1 + t.depth(),
        }
    }
}

impl fmt::Display for OmegaTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OmegaTerm::Var(x) | OmegaTerm::Const(x) => write!(f, "{x}"),
            OmegaTerm::Concat(s, t) => write!(f, "({s} . {t})"),
            OmegaTerm::Ipow(t) => write!(f, "({t})^#"),
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    closed: bool,
}

impl Parser<'_> {
    fn run(text: &str, closed: bool) -> Result<OmegaTerm> {
        let mut p = Parser { src: text.as_bytes(), pos: 0, closed };
        let t = p.chain()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("trailing input"));
        }
        Ok(t)
    }

    fn error(&self, msg: &str) -> Error {
        Error::Parse { pos: self.pos, msg: msg.into() }
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(s.as_bytes()) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn chain(&mut self) -> Result<OmegaTerm> {
        let mut t = self.factor()?;
        while self.eat(".") {
            t = OmegaTerm::concat(t, self.factor()?);
        }
        Ok(t)
    }

    fn factor(&mut self) -> Result<OmegaTerm> {
        let mut t = if self.eat("(") {
            let inner = self.chain()?;
            if !self.eat(")") {
                return Err(self.error("expected `)`"));
            }
            inner
        } else {
            self.skip_ws();
            let start = self.pos;
            while self.src.get(self.pos).is_some_and(|b| is_ident_byte(*b)) {
                self.pos += 1;
            }
            if start == self.pos {
                return Err(self.error("expected identifier or `(`"));
            }
            let name = String::from_utf8_lossy(&self.src[start..self.pos]).into_owned();
            if self.closed {
                OmegaTerm::Const(name)
            } else {
                OmegaTerm::Var(name)
            }
        };
        while self.eat("^#") {
            t = OmegaTerm::ipow(t);
        }
        Ok(t)
    }
}

/// A finite semigroup given by its multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSemigroup {
    names: Vec<String>,
    table: Vec<Vec<usize>>,
}

impl FiniteSemigroup {
    pub fn new(names: Vec<String>, table: Vec<Vec<usize>>) -> FiniteSemigroup {
        assert_eq!(names.len(), table.len());
        assert!(table.iter().all(|r| r.len() == names.len() && r.iter().all(|&v| v < names.len())));
        FiniteSemigroup { names, table }
    }

    /// The `concat` operation of a one-sorted algebra.
    pub fn from_algebra(alg: &Algebra) -> Result<FiniteSemigroup> {
        let sig = alg.signature();
        let concat = sig
            .op_id("concat")
            .filter(|_| sig.sorts.len() == 1)
            .ok_or_else(|| Error::UnsupportedInstance(format!("`{}` has no one-sorted concatenation", sig.monad)))?;
        let n = alg.len();
        Ok(FiniteSemigroup {
            names: (0..n).map(|e| alg.name(e).to_string()).collect(),
            table: (0..n).map(|x| (0..n).map(|y| alg.mul(concat, x, y)).collect()).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, x: usize) -> &str {
        &self.names[x]
    }

    pub fn lookup(&self, name: &str) -> Result<usize> {
        self.names.iter().position(|n| n == name).ok_or_else(|| Error::UnknownElement(name.into()))
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x][y]
    }

    pub fn is_associative(&self) -> bool {
        let n = self.len();
        (0..n).all(|x| (0..n).all(|y| (0..n).all(|z| self.mul(self.mul(x, y), z) == self.mul(x, self.mul(y, z)))))
    }

    /// A two-sided identity, if present.
    pub fn identity(&self) -> Option<usize> {
        (0..self.len()).find(|&e| (0..self.len()).all(|x| self.mul(e, x) == x && self.mul(x, e) == x))
    }

    /// The monoid obtained by adjoining a fresh identity `1` (as the last element).
    pub fn with_identity(&self) -> FiniteSemigroup {
        let n = self.len();
        let mut name = "1".to_string();
        while self.names.contains(&name) {
            name.push('\'');
        }
        let mut names = self.names.clone();
        names.push(name);
        let mut table: Vec<Vec<usize>> = self
            .table
            .iter()
            .enumerate()
            .map(|(x, row)| {
                let mut r = row.clone();
                r.push(x);
                r
            })
            .collect();
        table.push((0..=n).collect());
        FiniteSemigroup { names, table }
    }

    /// `x, x², …` up to the first repetition, with index and period.
    fn powers(&self, x: usize) -> (Vec<usize>, usize, usize) {
        let mut powers = vec![x];
        loop {
            let next = self.mul(*powers.last().unwrap(), x);
            if let Some(pos) = powers.iter().position(|&p| p == next) {
                return (powers.clone(), pos + 1, powers.len() - pos);
            }
            powers.push(next);
        }
    }

    /// The unique idempotent among the powers of `x`.
    pub fn idempotent_power(&self, x: usize) -> usize {
        let (powers, index, _) = self.powers(x);
        *powers[index - 1..].iter().find(|&&p| self.mul(p, p) == p).expect("cycle contains an idempotent")
    }
}

/// Idempotent power in the concatenation of a one-sorted algebra.
pub fn idempotent_power(alg: &Algebra, x: Elem) -> Result<Elem> {
    Ok(FiniteSemigroup::from_algebra(alg)?.idempotent_power(x))
}

pub type Valuation = BTreeMap<String, usize>;

pub fn eval_term(sg: &FiniteSemigroup, t: &OmegaTerm, valuation: &Valuation) -> Result<usize> {
    Ok(match t {
        OmegaTerm::Var(x) => *valuation.get(x).ok_or_else(|| Error::UnboundVariable(x.clone()))?,
        OmegaTerm::Const(c) => sg.lookup(c)?,
        OmegaTerm::Concat(s, t) => sg.mul(eval_term(sg, s, valuation)?, eval_term(sg, t, valuation)?),
        OmegaTerm::Ipow(t) => sg.idempotent_power(eval_term(sg, t, valuation)?),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub valuation: BTreeMap<String, String>,
    pub lhs: String,
    pub rhs: String,
}

/// First valuation (in lexicographic order of variables and elements) on
/// which the two sides differ.
pub fn identity_counterexample(sg: &FiniteSemigroup, lhs: &OmegaTerm, rhs: &OmegaTerm) -> Result<Option<Counterexample>> {
    let mut vars = lhs.vars();
    for v in rhs.vars() {
        if !vars.contains(&v) {
            vars.push(v);
        }
    }
    vars.sort();
    let n = sg.len();
    let mut digits = vec![0usize; vars.len()];
    if n == 0 {
        return Ok(None);
    }
    loop {
        let valuation: Valuation = vars.iter().cloned().zip(digits.iter().copied()).collect();
        let (l, r) = (eval_term(sg, lhs, &valuation)?, eval_term(sg, rhs, &valuation)?);
        if l != r {
            return Ok(Some(Counterexample {
                valuation: valuation.into_iter().map(|(k, v)| (k, sg.name(v).to_string())).collect(),
                lhs: sg.name(l).to_string(),
                rhs: sg.name(r).to_string(),
            }));
        }
        let mut i = digits.len();
        loop {
            if i == 0 {
                return Ok(None);
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < n {
                break;
            }
            digits[i] = 0;
        }
    }
}

pub fn satisfies_identity(sg: &FiniteSemigroup, lhs: &OmegaTerm, rhs: &OmegaTerm) -> Result<bool> {
    Ok(identity_counterexample(sg, lhs, rhs)?.is_none())
}

fn parse_identity(text_l: &str, text_r: &str) -> (OmegaTerm, OmegaTerm) {
    (OmegaTerm::parse(text_l).expect("valid term"), OmegaTerm::parse(text_r).expect("valid term"))
}

/// `x^# = x^# · x`.
pub fn is_aperiodic(sg: &FiniteSemigroup) -> bool {
    let (l, r) = parse_identity("x^#", "x^# . x");
    satisfies_identity(sg, &l, &r).expect("closed under valuation")
}

/// `(xyz)^# · y · (xyz)^# = (xyz)^#`, evaluated in the monoid (a fresh
/// identity is adjoined when `sg` has none).
pub fn in_da(sg: &FiniteSemigroup) -> bool {
    let m = if sg.identity().is_some() { sg.clone() } else { sg.with_identity() };
    let (l, r) = parse_identity("(x . y . z)^# . y . (x . y . z)^#", "(x . y . z)^#");
    satisfies_identity(&m, &l, &r).expect("closed under valuation")
}

/// Identity satisfaction by a word language, decided on its syntactic
/// semigroup. Constants name syntactic elements.
pub fn language_identity_counterexample(
    l: &Language,
    lhs: &OmegaTerm,
    rhs: &OmegaTerm,
) -> Result<Option<Counterexample>> {
    if *l.algebra().monad() != Monad::Word {
        return Err(Error::UnsupportedInstance(format!(
            "identities are checked on word languages, not `{}`",
            l.algebra().monad().id()
        )));
    }
    let syn = crate::moore::moore_syntactic(l)?;
    identity_counterexample(&FiniteSemigroup::from_algebra(syn.language.algebra())?, lhs, rhs)
}

pub fn language_satisfies_identity(l: &Language, lhs: &OmegaTerm, rhs: &OmegaTerm) -> Result<bool> {
    Ok(language_identity_counterexample(l, lhs, rhs)?.is_none())
}

/// A number of letters: finite or unbounded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum AbstractCount {
    Finite(u64),
    Infinite,
}

impl Add for AbstractCount {
    type Output = AbstractCount;

    fn add(self, other: AbstractCount) -> AbstractCount {
        match (self, other) {
            (AbstractCount::Finite(a), AbstractCount::Finite(b)) => {
                a.checked_add(b).map_or(AbstractCount::Infinite, AbstractCount::Finite)
            }
            _ => AbstractCount::Infinite,
        }
    }
}

impl fmt::Display for AbstractCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AbstractCount::Finite(n) => write!(f, "{n}"),
            AbstractCount::Infinite => write!(f, "∞"),
        }
    }
}

/// Number of occurrences of marked letters in the profinite word denoted
/// by a closed term: an idempotent power of a word with a marked letter has
/// unboundedly many.
pub fn count_letters(t: &OmegaTerm, marked: &BTreeSet<String>) -> Result<AbstractCount> {
    Ok(match t {
        OmegaTerm::Var(x) => return Err(Error::OpenTerm(x.clone())),
        OmegaTerm::Const(c) => AbstractCount::Finite(u64::from(marked.contains(c))),
        OmegaTerm::Concat(s, t) => count_letters(s, marked)? + count_letters(t, marked)?,
        OmegaTerm::Ipow(t) => match count_letters(t, marked)? {
            AbstractCount::Finite(0) => AbstractCount::Finite(0),
            _ => AbstractCount::Infinite,
        },
    })
}

/// The three-element algebra detecting unboundedly many ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Unbounded {
    Zero,
    One,
    Infinity,
}

impl Unbounded {
    pub fn concat(self, other: Unbounded) -> Unbounded {
        self.max(other)
    }

    pub fn ipow(self) -> Unbounded {
        match self {
            Unbounded::Zero => Unbounded::Zero,
            _ => Unbounded::Infinity,
        }
    }

    fn max(self, other: Unbounded) -> Unbounded {
        let rank = |u: Unbounded| u as u8;
        if rank(self) >= rank(other) {
            self
        } else {
            other
        }
    }
}

impl fmt::Display for Unbounded {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Unbounded::Zero => "0",
            Unbounded::One => "1",
            Unbounded::Infinity => "∞",
        })
    }
}

/// Value of a closed term over `{0, 1}`: no ones, boundedly many, or unboundedly many.
pub fn eval_unboundedness_algebra(t: &OmegaTerm) -> Result<Unbounded> {
    check_binary(t)?;
    Ok(match count_letters(t, &BTreeSet::from(["1".to_string()]))? {
        AbstractCount::Finite(0) => Unbounded::Zero,
        AbstractCount::Finite(_) => Unbounded::One,
        AbstractCount::Infinite => Unbounded::Infinity,
    })
}

fn check_binary(t: &OmegaTerm) -> Result<()> {
    match t {
        OmegaTerm::Var(x) => Err(Error::OpenTerm(x.clone())),
        OmegaTerm::Const(c) if c == "0" || c == "1" => Ok(()),
        OmegaTerm::Const(c) => Err(Error::BadLetter(c.clone())),
        OmegaTerm::Concat(s, t) => check_binary(s).and(check_binary(t)),
        OmegaTerm::Ipow(t) => check_binary(t),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn sg(alg: &Algebra) -> FiniteSemigroup {
        FiniteSemigroup::from_algebra(alg).unwrap()
    }

    #[test]
    fn parse_and_display() {
        let t = OmegaTerm::parse("(x)^# . x").unwrap();
        assert_eq!(t, OmegaTerm::concat(OmegaTerm::ipow(OmegaTerm::var("x")), OmegaTerm::var("x")));
        assert_eq!(t.to_string(), "((x)^# . x)");
        assert_eq!(OmegaTerm::parse(&t.to_string()).unwrap(), t);
        assert!(OmegaTerm::parse("(x . ").is_err());
        assert!(OmegaTerm::parse("x y").is_err());
    }

    #[test]
    fn idempotent_powers() {
        let z2 = fixtures::z2();
        let (o, e) = (z2.lookup("o").unwrap(), z2.lookup("e").unwrap());
        assert_eq!(idempotent_power(&z2, o).unwrap(), e);
        assert_eq!(idempotent_power(&z2, e).unwrap(), e);
        let u1 = fixtures::u1();
        let zero = u1.lookup("0").unwrap();
        assert_eq!(idempotent_power(&u1, zero).unwrap(), zero);
    }

    #[test]
    fn evaluation() {
        let s = sg(&fixtures::z2());
        let o = s.lookup("o").unwrap();
        let e = s.lookup("e").unwrap();
        let val: Valuation = [("x".into(), o), ("y".into(), o)].into();
        assert_eq!(eval_term(&s, &OmegaTerm::parse("x . y").unwrap(), &val).unwrap(), e);
        assert_eq!(eval_term(&s, &OmegaTerm::parse("x^#").unwrap(), &val).unwrap(), e);
        assert_eq!(eval_term(&s, &OmegaTerm::constant("e"), &val).unwrap(), e);
        assert_eq!(eval_term(&s, &OmegaTerm::var("z"), &val), Err(Error::UnboundVariable("z".into())));
    }

    #[test]
    fn identities() {
        let z2 = sg(&fixtures::z2());
        let p = |s: &str| OmegaTerm::parse(s).unwrap();
        assert!(satisfies_identity(&z2, &p("x . y"), &p("y . x")).unwrap());
        assert!(!satisfies_identity(&z2, &p("x^#"), &p("x^# . x")).unwrap());
        assert!(satisfies_identity(&z2, &p("x"), &p("x")).unwrap());
        assert!(!is_aperiodic(&z2));
        assert!(is_aperiodic(&sg(&fixtures::u1())));
        assert!(is_aperiodic(&sg(&fixtures::trivial(Monad::Word))));
        assert!(!in_da(&z2));
        assert!(in_da(&sg(&fixtures::trivial(Monad::Word))));
    }

    #[test]
    fn language_identities() {
        let p = |s: &str| OmegaTerm::parse(s).unwrap();
        let odd = fixtures::parity_odd();
        assert!(language_satisfies_identity(&odd, &p("x . y"), &p("y . x")).unwrap());
        assert!(!language_satisfies_identity(&odd, &p("x^#"), &p("x^# . x")).unwrap());
        assert!(language_satisfies_identity(&fixtures::contains_a(), &p("x^#"), &p("x^# . x")).unwrap());
        let inf = fixtures::infinitely_many_a_lang();
        assert!(matches!(language_satisfies_identity(&inf, &p("x"), &p("x")), Err(Error::UnsupportedInstance(_))));
    }

    #[test]
    fn counting() {
        let c = |s: &str| OmegaTerm::parse_closed(s).unwrap();
        let ones = BTreeSet::from(["1".to_string()]);
        assert_eq!(count_letters(&c("1^#"), &ones).unwrap(), AbstractCount::Infinite);
        assert_eq!(count_letters(&c("0^#"), &ones).unwrap(), AbstractCount::Finite(0));
        assert_eq!(count_letters(&c("0^# . (1 . 1)"), &ones).unwrap(), AbstractCount::Finite(2));
        assert_eq!(count_letters(&OmegaTerm::var("x"), &ones), Err(Error::OpenTerm("x".into())));
        assert_eq!(eval_unboundedness_algebra(&c("1^#")).unwrap(), Unbounded::Infinity);
        assert_eq!(eval_unboundedness_algebra(&c("0^#")).unwrap(), Unbounded::Zero);
        assert_eq!(eval_unboundedness_algebra(&c("0 . 1")).unwrap(), Unbounded::One);
        assert_eq!(eval_unboundedness_algebra(&c("2")), Err(Error::BadLetter("2".into())));
    }
}
