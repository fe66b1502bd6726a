//! Least fixpoints under the generator shapes.
//!
//! The engine works over any value universe: elements of a table, pairs of
//! elements (lazy products) or subsets (lazy powersets). Evaluation proceeds
//! in rounds; a value first produced in round `r` has a producing term of
//! depth `r`, and every shape is evaluated exactly once (semi-naive).

use std::collections::{BTreeSet, HashMap};
use std::hash::Hash;

use crate::algebra::{Algebra, Arg, Elem, MAX_SET_SORT, MAX_TABLE_ENTRIES};
use crate::error::{Error, Result};
use crate::monad::Monad;
use crate::morphism::{Language, Morphism};
use crate::signature::{OpId, Signature, Slot, SortId};
use crate::term::{Term, TermArg};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Origin {
    /// The seed with the given position in the seed list.
    Seed(usize),
    /// First shape (over earlier values) that produced the value.
    Shape(OpId, Vec<Arg>),
}

#[derive(Debug, Clone)]
pub struct Closure<V> {
    pub values: Vec<V>,
    pub sorts: Vec<SortId>,
    pub origins: Vec<Origin>,
    pub depths: Vec<usize>,
    index: HashMap<V, usize>,
    table: HashMap<(OpId, Vec<Arg>), usize>,
}

impl<V: Clone + Eq + Hash> Closure<V> {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn position(&self, v: &V) -> Option<usize> {
        self.index.get(v).copied()
    }

    /// Value of a shape over closure indices, if it was evaluated.
    pub fn lookup(&self, op: OpId, args: &[Arg]) -> Option<usize> {
        self.table.get(&(op, args.to_vec())).copied()
    }

    /// Rebuilds the producing term of value `idx`.
    pub fn term(&self, idx: usize, seed: &dyn Fn(usize) -> Term) -> Term {
        match &self.origins[idx] {
            Origin::Seed(i) => seed(*i),
            Origin::Shape(op, args) => Term::Apply(
                *op,
                args.iter()
                    .map(|a| match a {
                        Arg::One(e) => TermArg::One(self.term(*e, seed)),
                        Arg::Set(v) => TermArg::Set(v.iter().map(|e| self.term(*e, seed)).collect()),
                    })
                    .collect(),
            ),
        }
    }

    /// The closure as an algebra whose element `i` is value `i`.
    pub fn to_algebra(&self, monad: Monad, names: Vec<String>) -> Result<Algebra> {
        let elements = names.into_iter().zip(&self.sorts).map(|(n, s)| (n, *s)).collect();
        Algebra::from_fn(monad, elements, |op, args| {
            self.lookup(op, args).ok_or_else(|| Error::TableNotTotal(format!("closure shape #{op}")))
        })
    }

    fn insert(&mut self, v: V, sort: SortId, origin: Origin, depth: usize, by_sort: &mut [Vec<usize>]) -> usize {
        if let Some(&i) = self.index.get(&v) {
            return i;
        }
        let i = self.values.len();
        self.index.insert(v.clone(), i);
        self.values.push(v);
        self.sorts.push(sort);
        self.origins.push(origin);
        self.depths.push(depth);
        by_sort[sort].push(i);
        i
    }
}

/// Closes `seeds` under every operation of `sig`. `apply` receives the
/// operation, the argument list as indices into the current values, and the
/// values themselves.
pub fn close<V, F>(sig: &Signature, seeds: impl IntoIterator<Item = (V, SortId)>, mut apply: F) -> Result<Closure<V>>
where
    V: Clone + Eq + Hash,
    F: FnMut(OpId, &[Arg], &[V]) -> Result<V>,
{
    let mut cl = Closure {
        values: Vec::new(),
        sorts: Vec::new(),
        origins: Vec::new(),
        depths: Vec::new(),
        index: HashMap::new(),
        table: HashMap::new(),
    };
    let mut by_sort: Vec<Vec<usize>> = vec![Vec::new(); sig.sorts.len()];
    for (i, (v, s)) in seeds.into_iter().enumerate() {
        cl.insert(v, s, Origin::Seed(i), 0, &mut by_sort);
    }
    let mut start = 0;
    let mut round = 0;
    loop {
        let end = cl.len();
        for (op, operation) in sig.ops.iter().enumerate() {
            if operation.slots.is_empty() {
                if round == 0 {
                    let v = apply(op, &[], &cl.values)?;
                    let i = cl.insert(v, operation.result, Origin::Shape(op, Vec::new()), 1, &mut by_sort);
                    cl.table.insert((op, Vec::new()), i);
                }
                continue;
            }
            let mut domains = Vec::with_capacity(operation.slots.len());
            for slot in &operation.slots {
                domains.push(slot_domains(sig, *slot, &by_sort[slot.sort()], start, end)?);
            }
            for pivot in 0..operation.slots.len() {
                let lists: Vec<&[Arg]> = domains
                    .iter()
                    .enumerate()
                    .map(|(i, d)| match i.cmp(&pivot) {
                        std::cmp::Ordering::Less => d.old.as_slice(),
                        std::cmp::Ordering::Equal => d.new.as_slice(),
                        std::cmp::Ordering::Greater => d.all.as_slice(),
                    })
                    .collect();
                let mut failure = None;
                for_each_product(&lists, &mut |args| {
                    if failure.is_some() {
                        return;
                    }
                    match apply(op, args, &cl.values) {
                        Ok(v) => {
                            let before = cl.len();
                            let i = cl.insert(v, operation.result, Origin::Shape(op, args.to_vec()), round + 1, &mut by_sort);
                            cl.table.insert((op, args.to_vec()), i);
                            if cl.len() > before {
                                if let Err(e) = check_table_size(sig, &by_sort) {
                                    failure = Some(e);
                                }
                            }
                        }
                        Err(e) => failure = Some(e),
                    }
                });
                if let Some(e) = failure {
                    return Err(e);
                }
            }
        }
        if cl.len() == end {
            break;
        }
        start = end;
        round += 1;
    }
    Ok(cl)
}

/// Fails once the table over the values found so far would exceed
/// `MAX_TABLE_ENTRIES`, so that runaway closures stop early.
fn check_table_size(sig: &Signature, by_sort: &[Vec<usize>]) -> Result<()> {
    for operation in &sig.ops {
        let mut total = 1usize;
        for slot in &operation.slots {
            let n = by_sort[slot.sort()].len();
            let r = match slot {
                Slot::Single(_) => n,
                Slot::Set(_) if n <= MAX_SET_SORT => (1usize << n) - 1,
                Slot::Set(_) => continue,
            };
            total = total
                .checked_mul(r)
                .filter(|t| *t <= MAX_TABLE_ENTRIES)
                .ok_or_else(|| Error::TableTooLarge(format!("operation `{}`", operation.name)))?;
        }
    }
    Ok(())
}

struct Domains {
    old: Vec<Arg>,
    new: Vec<Arg>,
    all: Vec<Arg>,
}

fn slot_domains(sig: &Signature, slot: Slot, members: &[usize], start: usize, end: usize) -> Result<Domains> {
    let current: Vec<usize> = members.iter().copied().filter(|&i| i < end).collect();
    let mut d = Domains { old: Vec::new(), new: Vec::new(), all: Vec::new() };
    match slot {
        Slot::Single(_) => {
            for &i in &current {
                if i < start {
                    d.old.push(Arg::One(i));
                } else {
                    d.new.push(Arg::One(i));
                }
                d.all.push(Arg::One(i));
            }
        }
        Slot::Set(s) => {
            if current.len() > MAX_SET_SORT {
                return Err(Error::SetSlotTooLarge { sort: sig.sorts[s].clone(), size: current.len(), max: MAX_SET_SORT });
            }
            for mask in 1usize..(1 << current.len()) {
                let set: Vec<usize> = (0..current.len()).filter(|b| mask >> b & 1 == 1).map(|b| current[b]).collect();
                let arg = if set.iter().all(|&i| i < start) {
                    d.old.push(Arg::Set(set.clone()));
                    Arg::Set(set)
                } else {
                    d.new.push(Arg::Set(set.clone()));
                    Arg::Set(set)
                };
                d.all.push(arg);
            }
        }
    }
    Ok(d)
}

pub(crate) fn for_each_product(lists: &[&[Arg]], f: &mut dyn FnMut(&[Arg])) {
    if lists.iter().any(|l| l.is_empty()) {
        return;
    }
    let mut cursor = vec![0usize; lists.len()];
    let mut current: Vec<Arg> = lists.iter().map(|l| l[0].clone()).collect();
    loop {
        f(&current);
        let mut i = lists.len();
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            cursor[i] += 1;
            if cursor[i] < lists[i].len() {
                current[i] = lists[i][cursor[i]].clone();
                break;
            }
            cursor[i] = 0;
            current[i] = lists[i][0].clone();
        }
    }
}

fn lift(args: &[Arg], values: &[Elem]) -> Vec<Arg> {
    args.iter()
        .map(|a| match a {
            Arg::One(i) => Arg::One(values[*i]),
            Arg::Set(v) => Arg::set(v.iter().map(|i| values[*i]).collect()),
        })
        .collect()
}

/// Closure of a set of elements inside an algebra, with provenance.
pub fn close_in(alg: &Algebra, seeds: &[Elem]) -> Result<Closure<Elem>> {
    close(alg.signature(), seeds.iter().map(|&e| (e, alg.sort_of(e))), |op, args, values| {
        Ok(alg.apply(op, &lift(args, values)))
    })
}

/// Least subset containing `x` and closed under every table operation.
pub fn subalgebra_closure(alg: &Algebra, x: &[Elem]) -> Result<BTreeSet<Elem>> {
    Ok(close_in(alg, x)?.values.into_iter().collect())
}

/// The elements reached by the morphism: the closure of the unit images.
pub fn image(h: &Morphism) -> Result<BTreeSet<Elem>> {
    subalgebra_closure(h.target(), h.units())
}

/// Restriction of a morphism to its image.
pub fn trim(h: &Morphism) -> Result<(Morphism, Vec<Elem>)> {
    let reached: Vec<Elem> = image(h)?.into_iter().collect();
    let (sub, embed) = h.target().restrict(&reached)?;
    let mut back = vec![usize::MAX; h.target().len()];
    for (i, &e) in embed.iter().enumerate() {
        back[e] = i;
    }
    Ok((h.with_target(sub, |u| back[u])?, embed))
}

pub(crate) fn seed_letter(h: &Morphism) -> impl Fn(usize) -> Term + '_ {
    move |i| Term::Letter(h.alphabet().letters()[i].name.clone())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Emptiness {
    Empty,
    /// A minimal-depth ground term evaluating into the accepting set.
    Nonempty(Term),
}

impl Emptiness {
    pub fn is_empty(&self) -> bool {
        matches!(self, Emptiness::Empty)
    }

    pub fn witness(&self) -> Option<&Term> {
        match self {
            Emptiness::Empty => None,
            Emptiness::Nonempty(t) => Some(t),
        }
    }
}

/// Decides whether some ground term evaluates into the accepting set.
pub fn emptiness(l: &Language) -> Result<Emptiness> {
    let h = l.morphism();
    let cl = close_in(h.target(), h.units())?;
    let seed = seed_letter(h);
    Ok(match (0..cl.len()).find(|&i| l.accepts(cl.values[i])) {
        Some(i) => Emptiness::Nonempty(cl.term(i, &seed)),
        None => Emptiness::Empty,
    })
}

pub fn is_empty(l: &Language) -> Result<bool> {
    Ok(emptiness(l)?.is_empty())
}
