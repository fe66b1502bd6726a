//! Ground terms: finite trees of generator shapes with letters at the leaves.
//!
//! Text syntax: a bare identifier is a letter, `op(t1, ..., tn)` applies an
//! operation (nullary operations are written `op()`), and a set slot takes
//! `{t1, ..., tk}`.

use std::fmt;

use crate::error::{Error, Result};
use crate::morphism::Alphabet;
use crate::signature::{OpId, Signature, Slot, SortId};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Letter(String),
    Apply(OpId, Vec<TermArg>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TermArg {
    One(Term),
    Set(Vec<Term>),
}

impl Term {
    pub fn letter(name: &str) -> Term {
        Term::Letter(name.to_string())
    }

    /// Applies an operation whose slots are all single.
    pub fn app(op: OpId, args: Vec<Term>) -> Term {
        Term::Apply(op, args.into_iter().map(TermArg::One).collect())
    }

    /// Number of operation nodes.
    pub fn size(&self) -> usize {
        match self {
            Term::Letter(_) => 0,
            Term::Apply(_, args) => {
                1 + args
                    .iter()
                    .map(|a| match a {
                        TermArg::One(t) => t.size(),
                        TermArg::Set(ts) => ts.iter().map(Term::size).sum(),
                    })
                    .sum::<usize>()
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Letter(_) => 0,
            Term::Apply(_, args) => {
                1 + args
                    .iter()
                    .flat_map(|a| match a {
                        TermArg::One(t) => std::slice::from_ref(t),
                        TermArg::Set(ts) => ts.as_slice(),
                    })
                    .map(Term::depth)
                    .max()
                    .unwrap_or(0)
            }
        }
    }

    /// Letters occurring in the term, in order of first occurrence.
    pub fn letters(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_letters(&mut out);
        out
    }

    fn collect_letters<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Term::Letter(l) => {
                if !out.contains(&l.as_str()) {
                    out.push(l)
                }
            }
            Term::Apply(_, args) => {
                for a in args {
                    match a {
                        TermArg::One(t) => t.collect_letters(out),
                        TermArg::Set(ts) => ts.iter().for_each(|t| t.collect_letters(out)),
                    }
                }
            }
        }
    }

    /// Replaces every letter by the term `f` returns for it.
    pub fn substitute(&self, f: &dyn Fn(&str) -> Option<Term>) -> Result<Term> {
        Ok(match self {
            Term::Letter(l) => f(l).ok_or_else(|| Error::UnknownLetter(l.clone()))?,
            Term::Apply(op, args) => Term::Apply(
                *op,
                args.iter()
                    .map(|a| {
                        Ok(match a {
                            TermArg::One(t) => TermArg::One(t.substitute(f)?),
                            TermArg::Set(ts) => {
                                TermArg::Set(ts.iter().map(|t| t.substitute(f)).collect::<Result<_>>()?)
                            }
                        })
                    })
                    .collect::<Result<_>>()?,
            ),
        })
    }

    /// Sort of the term given the sorts of its letters; checks slot sorts.
    pub fn sort(&self, sig: &Signature, alphabet: &Alphabet) -> Result<SortId> {
        match self {
            Term::Letter(l) => alphabet.sort_of(l),
            Term::Apply(op, args) => {
                let operation = sig.ops.get(*op).ok_or_else(|| Error::UnknownOp(format!("#{op}")))?;
                if operation.slots.len() != args.len() {
                    return Err(Error::ArityMismatch(format!(
                        "`{}` takes {} arguments, got {}",
                        operation.name,
                        operation.slots.len(),
                        args.len()
                    )));
                }
                for (slot, arg) in operation.slots.iter().zip(args) {
                    let children: &[Term] = match (slot, arg) {
                        (Slot::Single(_), TermArg::One(t)) => std::slice::from_ref(t),
                        (Slot::Set(_), TermArg::Set(ts)) if !ts.is_empty() => ts,
                        (Slot::Set(_), TermArg::Set(_)) => return Err(Error::EmptySetSlot(operation.name.clone())),
                        _ => return Err(Error::ArityMismatch(format!("slot kind mismatch in `{}`", operation.name))),
                    };
                    for child in children {
                        let s = child.sort(sig, alphabet)?;
                        if s != slot.sort() {
                            return Err(Error::SortMismatch(format!(
                                "argument of `{}` has sort `{}`, expected `{}`",
                                operation.name,
                                sig.sorts[s],
                                sig.sorts[slot.sort()]
                            )));
                        }
                    }
                }
                Ok(operation.result)
            }
        }
    }

    pub fn display<'a>(&'a self, sig: &'a Signature) -> impl fmt::Display + 'a {
        TermDisplay { term: self, sig }
    }

    pub fn to_text(&self, sig: &Signature) -> String {
        self.display(sig).to_string()
    }

    pub fn parse(text: &str, sig: &Signature) -> Result<Term> {
        let mut p = Parser { src: text.as_bytes(), pos: 0, sig };
        let t = p.term()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("trailing input"));
        }
        Ok(t)
    }
}

struct TermDisplay<'a> {
    term: &'a Term,
    sig: &'a Signature,
}

impl fmt::Display for TermDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.term {
            Term::Letter(l) => write!(f, "{l}"),
            Term::Apply(op, args) => {
                write!(f, "{}(", self.sig.ops[*op].name)?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    match a {
                        TermArg::One(t) => write!(f, "{}", t.display(self.sig))?,
                        TermArg::Set(ts) => {
                            write!(f, "{{")?;
                            for (j, t) in ts.iter().enumerate() {
                                if j > 0 {
                                    write!(f, ",")?;
                                }
                                write!(f, "{}", t.display(self.sig))?;
                            }
                            write!(f, "}}")?;
                        }
                    }
                }
                write!(f, ")")
            }
        }
    }
}

pub(crate) fn is_ident_byte(b: u8) -> bool {
    b.is_ascii_alphanumeric() || b == b'_' || b == b'\''
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    sig: &'a Signature,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, b: u8) -> bool {
        self.skip_ws();
        if self.src.get(self.pos) == Some(&b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && is_ident_byte(self.src[self.pos]) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected identifier"));
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn term(&mut self) -> Result<Term> {
        let start = self.pos;
        let name = self.ident()?;
        if !self.eat(b'(') {
            return Ok(Term::Letter(name));
        }
        let op = self.sig.op_id(&name).ok_or(Error::Parse { pos: start, msg: format!("unknown operation `{name}`") })?;
        let mut args = Vec::new();
        if !self.eat(b')') {
            loop {
                if self.eat(b'{') {
                    let mut set = vec![self.term()?];
                    while self.eat(b',') {
                        set.push(self.term()?);
                    }
                    if !self.eat(b'}') {
                        return Err(self.error("expected `}`"));
                    }
                    args.push(TermArg::Set(set));
                } else {
                    args.push(TermArg::One(self.term()?));
                }
                if self.eat(b')') {
                    break;
                }
                if !self.eat(b',') {
                    return Err(self.error("expected `,` or `)`"));
                }
            }
        }
        Ok(Term::Apply(op, args))
    }
}

/// All ground terms over `alphabet` with at most `max_nodes` operation
/// nodes, paired with their sorts, ordered by size. Set slots are filled
/// with one or two distinct subterms.
pub fn ground_terms(sig: &Signature, alphabet: &Alphabet, max_nodes: usize) -> Vec<(Term, SortId)> {
    let nsorts = sig.sorts.len();
    // by_size[n][sort] = terms with exactly n nodes
    let mut by_size: Vec<Vec<Vec<Term>>> = Vec::new();
    let mut level0 = vec![Vec::new(); nsorts];
    for l in alphabet.letters() {
        level0[l.sort].push(Term::Letter(l.name.clone()));
    }
    by_size.push(level0);
    for n in 1..=max_nodes {
        let mut level = vec![Vec::new(); nsorts];
        for (op, operation) in sig.ops.iter().enumerate() {
            let mut partial: Vec<Vec<TermArg>> = Vec::new();
            fill_slots(&by_size, &operation.slots, n - 1, &mut Vec::new(), &mut partial);
            for args in partial {
                level[operation.result].push(Term::Apply(op, args));
            }
        }
        by_size.push(level);
    }
    let mut out = Vec::new();
    for level in by_size {
        for (sort, terms) in level.into_iter().enumerate() {
            out.extend(terms.into_iter().map(|t| (t, sort)));
        }
    }
    out.sort_by_key(|(t, _)| t.size());
    out
}

fn fill_slots(
    by_size: &[Vec<Vec<Term>>],
    slots: &[Slot],
    budget: usize,
    prefix: &mut Vec<TermArg>,
    out: &mut Vec<Vec<TermArg>>,
) {
    let Some((slot, rest)) = slots.split_first() else {
        if budget == 0 {
            out.push(prefix.clone());
        }
        return;
    };
    for m in 0..=budget {
        match slot {
            Slot::Single(s) => {
                for t in &by_size[m][*s] {
                    prefix.push(TermArg::One(t.clone()));
                    fill_slots(by_size, rest, budget - m, prefix, out);
                    prefix.pop();
                }
            }
            Slot::Set(s) => {
                for t in &by_size[m][*s] {
                    prefix.push(TermArg::Set(vec![t.clone()]));
                    fill_slots(by_size, rest, budget - m, prefix, out);
                    prefix.pop();
                }
                for m1 in 0..=m {
                    let m2 = m - m1;
                    if m1 > m2 {
                        break;
                    }
                    let (a, b) = (&by_size[m1][*s], &by_size[m2][*s]);
                    for (i, t1) in a.iter().enumerate() {
                        let start = if m1 == m2 { i + 1 } else { 0 };
                        for t2 in &b[start..] {
                            prefix.push(TermArg::Set(vec![t1.clone(), t2.clone()]));
                            fill_slots(by_size, rest, budget - m, prefix, out);
                            prefix.pop();
                        }
                    }
                }
            }
        }
    }
}
