//! Algebra and language constructions: products, quotients, powersets,
//! boolean combinations, inverse images and relabelled images.

use std::collections::{BTreeMap, HashMap};

use crate::algebra::{Algebra, Arg, Elem};
use crate::closure::close;
use crate::error::{Error, Result};
use crate::monad::ElemSet;
use crate::morphism::{Alphabet, Language, Morphism};
use crate::signature::SortId;
use crate::term::Term;

/// Largest sort whose full powerset is materialised by [`powerset`].
pub const MAX_POWERSET_SORT: usize = 8;

/// A product algebra together with its pairing of components.
#[derive(Debug, Clone)]
pub struct Product {
    pub algebra: Algebra,
    pairs: Vec<(Elem, Elem)>,
    index: HashMap<(Elem, Elem), Elem>,
}

impl Product {
    pub fn pair(&self, a: Elem, b: Elem) -> Elem {
        self.index[&(a, b)]
    }

    pub fn components(&self, e: Elem) -> (Elem, Elem) {
        self.pairs[e]
    }
}

fn same_monad(a: &Algebra, b: &Algebra) -> Result<()> {
    if a.monad() != b.monad() {
        return Err(Error::SignatureMismatch(a.monad().id().into(), b.monad().id().into()));
    }
    Ok(())
}

fn project(args: &[Arg], side: impl Fn(Elem) -> Elem) -> Vec<Arg> {
    args.iter()
        .map(|a| match a {
            Arg::One(e) => Arg::One(side(*e)),
            Arg::Set(v) => Arg::set(v.iter().map(|e| side(*e)).collect()),
        })
        .collect()
}

/// Sortwise product. Set slots over pairs are evaluated on the two
/// projections of the pair set.
pub fn product(a: &Algebra, b: &Algebra) -> Result<Product> {
    same_monad(a, b)?;
    let mut pairs = Vec::new();
    let mut elements = Vec::new();
    for x in 0..a.len() {
        for &y in b.of_sort(a.sort_of(x)) {
            pairs.push((x, y));
            elements.push((format!("({},{})", a.name(x), b.name(y)), a.sort_of(x)));
        }
    }
    let index: HashMap<(Elem, Elem), Elem> = pairs.iter().enumerate().map(|(i, p)| (*p, i)).collect();
    let algebra = Algebra::from_fn(a.monad().clone(), elements, |op, args| {
        let va = a.apply(op, &project(args, |e| pairs[e].0));
        let vb = b.apply(op, &project(args, |e| pairs[e].1));
        Ok(index[&(va, vb)])
    })?;
    Ok(Product { algebra, pairs, index })
}

/// Unit images of `l2` listed in the letter order of `l1`; the two
/// alphabets must agree up to order.
fn aligned_units(l1: &Language, l2: &Language) -> Result<Vec<Elem>> {
    same_monad(l1.algebra(), l2.algebra())?;
    let (a1, a2) = (l1.alphabet(), l2.alphabet());
    let same = a1.len() == a2.len()
        && a1.letters().iter().all(|l| a2.sort_of(&l.name).is_ok_and(|s| s == l.sort));
    if !same {
        return Err(Error::AlphabetMismatch("languages are over different alphabets".into()));
    }
    a1.letters().iter().map(|l| l2.morphism().unit(&l.name)).collect()
}

/// Reachable part of the product of two recognisers, with acceptance
/// given by `f` on the two component verdicts.
pub fn combine(l1: &Language, l2: &Language, f: impl Fn(bool, bool) -> bool) -> Result<Language> {
    let g_units = aligned_units(l1, l2)?;
    let (a, b) = (l1.algebra(), l2.algebra());
    let h = l1.morphism();
    let seeds: Vec<((Elem, Elem), SortId)> =
        h.units().iter().zip(&g_units).map(|(&x, &y)| ((x, y), a.sort_of(x))).collect();
    let cl = close(a.signature(), seeds.clone(), |op, args, values| {
        let va = a.apply(op, &project(args, |i| values[i].0));
        let vb = b.apply(op, &project(args, |i| values[i].1));
        Ok((va, vb))
    })?;
    let names = cl.values.iter().map(|&(x, y)| format!("({},{})", a.name(x), b.name(y))).collect();
    let algebra = cl.to_algebra(a.monad().clone(), names)?;
    let units = seeds.iter().map(|(p, _)| cl.position(p).expect("seed present")).collect();
    let accepting =
        (0..cl.len()).filter(|&i| f(l1.accepts(cl.values[i].0), l2.accepts(cl.values[i].1))).collect();
    Language::new(Morphism::new(h.alphabet().clone(), algebra, units)?, accepting)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoolOp {
    And,
    Or,
    Not,
}

pub fn complement(l: &Language) -> Language {
    let accepting = (0..l.algebra().len()).filter(|e| !l.accepts(*e)).collect();
    Language::new(l.morphism().clone(), accepting).expect("accepting set within carrier")
}

pub fn intersection(l1: &Language, l2: &Language) -> Result<Language> {
    combine(l1, l2, |x, y| x && y)
}

pub fn union(l1: &Language, l2: &Language) -> Result<Language> {
    combine(l1, l2, |x, y| x || y)
}

pub fn boolean(op: BoolOp, l1: &Language, l2: Option<&Language>) -> Result<Language> {
    match (op, l2) {
        (BoolOp::Not, None) => Ok(complement(l1)),
        (BoolOp::And, Some(l2)) => intersection(l1, l2),
        (BoolOp::Or, Some(l2)) => union(l1, l2),
        (BoolOp::Not, Some(_)) => Err(Error::ArityMismatch("`not` takes one language".into())),
        (_, None) => Err(Error::ArityMismatch("binary boolean operation needs two languages".into())),
    }
}

/// A ground term on which the two languages disagree, if any.
pub fn distinguishing_term(l1: &Language, l2: &Language) -> Result<Option<Term>> {
    let diff = combine(l1, l2, |x, y| x != y)?;
    Ok(crate::closure::emptiness(&diff)?.witness().cloned())
}

pub fn equivalent(l1: &Language, l2: &Language) -> Result<bool> {
    Ok(distinguishing_term(l1, l2)?.is_none())
}

/// A sort-respecting partition of a carrier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    blocks: Vec<Vec<Elem>>,
}

impl Partition {
    /// Normalises blocks (members sorted, blocks ordered by least member)
    /// and checks that they cover `alg`'s carrier disjointly by sort.
    pub fn new(alg: &Algebra, blocks: Vec<Vec<Elem>>) -> Result<Partition> {
        let p = Partition::normalised(blocks);
        let mut seen = vec![false; alg.len()];
        for block in &p.blocks {
            if block.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            for &e in block {
                if e >= alg.len() {
                    return Err(Error::InvalidPartition(format!("element #{e} outside carrier")));
                }
                if std::mem::replace(&mut seen[e], true) {
                    return Err(Error::InvalidPartition(format!("`{}` in two blocks", alg.name(e))));
                }
                if alg.sort_of(e) != alg.sort_of(block[0]) {
                    return Err(Error::InvalidPartition(format!(
                        "block mixes sorts: `{}` and `{}`",
                        alg.name(block[0]),
                        alg.name(e)
                    )));
                }
            }
        }
        if let Some(e) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidPartition(format!("`{}` not covered", alg.name(e))));
        }
        Ok(p)
    }

    pub fn from_names(alg: &Algebra, blocks: &[&[&str]]) -> Result<Partition> {
        let blocks = blocks
            .iter()
            .map(|b| b.iter().map(|n| alg.lookup(n)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Partition::new(alg, blocks)
    }

    pub fn identity(alg: &Algebra) -> Partition {
        Partition { blocks: (0..alg.len()).map(|e| vec![e]).collect() }
    }

    pub(crate) fn normalised(blocks: Vec<Vec<Elem>>) -> Partition {
        let mut blocks: Vec<Vec<Elem>> = blocks
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b
            })
            .collect();
        blocks.sort();
        Partition { blocks }
    }

    pub fn blocks(&self) -> &[Vec<Elem>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Block index of every element of a carrier of size `n`.
    pub fn block_map(&self, n: usize) -> Vec<usize> {
        let mut out = vec![usize::MAX; n];
        for (i, b) in self.blocks.iter().enumerate() {
            for &e in b {
                out[e] = i;
            }
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct Quotient {
    pub algebra: Algebra,
    /// Quotient element of every original element.
    pub block_of: Vec<Elem>,
}

/// Quotient of `alg` by a partition, which must be a congruence. Each
/// block is named after its lexicographically least member.
pub fn quotient(alg: &Algebra, p: &Partition) -> Result<Quotient> {
    let block_of = p.block_map(alg.len());
    if block_of.iter().any(|&b| b == usize::MAX) {
        return Err(Error::InvalidPartition("partition does not cover the carrier".into()));
    }
    let mut seen: HashMap<(usize, Vec<Arg>), (Elem, Vec<Arg>)> = HashMap::new();
    for op in 0..alg.signature().ops.len() {
        for args in alg.shapes(op) {
            let value = alg.apply(op, &args);
            let key = (op, project(&args, |e| block_of[e]));
            match seen.get(&key) {
                Some((v, other)) if block_of[*v] != block_of[value] => {
                    return Err(Error::NotCongruence {
                        first: format!("{} = {}", alg.shape_string(op, other), alg.name(*v)),
                        second: format!("{} = {}", alg.shape_string(op, &args), alg.name(value)),
                    })
                }
                Some(_) => {}
                None => {
                    seen.insert(key, (value, args));
                }
            }
        }
    }
    let elements = p
        .blocks()
        .iter()
        .map(|b| {
            let name = b.iter().map(|e| alg.name(*e)).min().expect("nonempty block").to_string();
            (name, alg.sort_of(b[0]))
        })
        .collect();
    let algebra = Algebra::from_fn(alg.monad().clone(), elements, |op, args| {
        let (v, _) = &seen[&(op, args.to_vec())];
        Ok(block_of[*v])
    })?;
    Ok(Quotient { algebra, block_of })
}

pub(crate) fn set_name(alg: &Algebra, sort: SortId, set: &ElemSet) -> String {
    let names: Vec<&str> = set.iter().map(|e| alg.name(*e)).collect();
    if names.is_empty() && alg.signature().sorts.len() > 1 {
        format!("{{}}@{}", alg.signature().sorts[sort])
    } else {
        format!("{{{}}}", names.join(","))
    }
}

#[derive(Debug, Clone)]
pub struct Powerset {
    pub algebra: Algebra,
    /// The subset each powerset element stands for, with its sort.
    pub sets: Vec<(SortId, ElemSet)>,
}

impl Powerset {
    pub fn element(&self, sort: SortId, set: &ElemSet) -> Option<Elem> {
        self.sets.iter().position(|(s, x)| *s == sort && x == set)
    }
}

/// The powerset algebra: all subsets (including the empty one) of each
/// sort, with pointwise operations.
pub fn powerset(alg: &Algebra) -> Result<Powerset> {
    let sig = alg.signature();
    if let Some(op) = sig.ops.iter().find(|o| o.has_set_slot()) {
        return Err(Error::PowersetUnsupported(op.name.clone()));
    }
    let mut sets = Vec::new();
    for sort in 0..sig.sorts.len() {
        let members = alg.of_sort(sort);
        if members.len() > MAX_POWERSET_SORT {
            return Err(Error::PowersetTooLarge(format!(
                "sort `{}` has {} elements; at most {MAX_POWERSET_SORT} supported",
                sig.sorts[sort],
                members.len()
            )));
        }
        for mask in 0usize..(1 << members.len()) {
            let set: ElemSet = (0..members.len()).filter(|b| mask >> b & 1 == 1).map(|b| members[b]).collect();
            sets.push((sort, set));
        }
    }
    let index: HashMap<(SortId, ElemSet), Elem> = sets.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
    let elements = sets.iter().map(|(s, x)| (set_name(alg, *s, x), *s)).collect();
    let monad = alg.monad().clone();
    let algebra = Algebra::from_fn(monad.clone(), elements, |op, args| {
        let operands: Vec<&ElemSet> = args.iter().map(|a| &sets[a.one().expect("single slot")].1).collect();
        let value = monad.powerset_op(alg, op, &operands)?;
        Ok(index[&(sig.op(op).result, value)])
    })?;
    Ok(Powerset { algebra, sets })
}

/// Preimage of `l` under the morphism sending each letter of `alphabet` to
/// the given ground term over `l`'s alphabet.
pub fn inverse_image(l: &Language, alphabet: &Alphabet, sub: &BTreeMap<String, Term>) -> Result<Language> {
    let h = l.morphism();
    let sig = h.target().signature();
    let mut units = Vec::new();
    for letter in alphabet.letters() {
        let t = sub.get(&letter.name).ok_or_else(|| Error::UnknownLetter(letter.name.clone()))?;
        let sort = t.sort(sig, h.alphabet())?;
        if sort != letter.sort {
            return Err(Error::SortMismatch(format!(
                "letter `{}` of sort `{}` substituted by a term of sort `{}`",
                letter.name, sig.sorts[letter.sort], sig.sorts[sort]
            )));
        }
        units.push(h.evaluate(t)?);
    }
    Language::new(Morphism::new(alphabet.clone(), h.target().clone(), units)?, l.accepting().clone())
}

/// Image of `l` under the letter-to-letter relabelling `f` into `target`.
/// Recognised by the subalgebra of the powerset of the (minimised)
/// recogniser generated by the preimage sets of the letters.
pub fn relabel_image(l: &Language, f: &BTreeMap<String, String>, target: &Alphabet) -> Result<Language> {
    for letter in l.alphabet().letters() {
        let img = f.get(&letter.name).ok_or_else(|| Error::UnknownLetter(letter.name.clone()))?;
        let sort = target.sort_of(img)?;
        if sort != letter.sort {
            return Err(Error::SortMismatch(format!("relabelling `{}` -> `{img}` changes the sort", letter.name)));
        }
    }
    let min = crate::moore::moore_syntactic(l)?.language;
    let alg = min.algebra();
    let h = min.morphism();
    let monad = alg.monad().clone();
    let seeds: Vec<((SortId, ElemSet), SortId)> = target
        .letters()
        .iter()
        .map(|gamma| {
            let pre: ElemSet = h
                .alphabet()
                .letters()
                .iter()
                .zip(h.units())
                .filter(|(sigma, _)| f[&sigma.name] == gamma.name)
                .map(|(_, &u)| u)
                .collect();
            ((gamma.sort, pre), gamma.sort)
        })
        .collect();
    let sig = alg.signature().clone();
    let cl = close(&sig, seeds.clone(), |op, args, values| {
        let operands: Vec<&ElemSet> = args
            .iter()
            .map(|a| match a {
                Arg::One(i) => Ok(&values[*i].1),
                Arg::Set(_) => Err(Error::PowersetUnsupported(sig.op(op).name.clone())),
            })
            .collect::<Result<_>>()?;
        Ok((sig.op(op).result, monad.powerset_op(alg, op, &operands)?))
    })?;
    let names = cl.values.iter().map(|(s, x)| set_name(alg, *s, x)).collect();
    let algebra = cl.to_algebra(monad.clone(), names)?;
    let units = seeds.iter().map(|(k, _)| cl.position(k).expect("seed present")).collect();
    let accepting = (0..cl.len()).filter(|&i| cl.values[i].1.iter().any(|e| min.accepts(*e))).collect();
    Language::new(Morphism::new(target.clone(), algebra, units)?, accepting)
}

