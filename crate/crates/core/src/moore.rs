//! Syntactic morphisms by Moore-style partition refinement.
//!
//! The recogniser is first trimmed to its image. Starting from the split
//! into accepting and rejecting elements of each sort, two elements stay
//! together only while every one-hole context sends them to the same
//! block. A context is a single shape with one slot holding the hole and
//! the remaining slots filled from the carrier; a hole in a set slot
//! stands for `Y ∪ {x}` with `Y` any (possibly empty) subset.

use std::collections::HashMap;

use crate::algebra::{Algebra, Arg, Elem};
use crate::closure::trim;
use crate::construct::{quotient, Partition};
use crate::error::Result;
use crate::morphism::{Language, Morphism};
use crate::signature::{OpId, Slot, SortId};

#[derive(Debug, Clone)]
pub struct Syntactic {
    /// The language recognised by the syntactic morphism.
    pub language: Language,
    /// Syntactic classes of the reachable elements, in original ids.
    pub partition: Partition,
    /// Syntactic element of every original element; `None` if unreachable.
    pub block_of: Vec<Option<Elem>>,
}

#[derive(Debug, Clone)]
struct Context {
    op: OpId,
    hole: usize,
    args: Vec<Arg>,
}

impl Context {
    fn plug(&self, alg: &Algebra, x: Elem) -> Elem {
        let mut args = self.args.clone();
        args[self.hole] = match &args[self.hole] {
            Arg::One(_) => Arg::One(x),
            Arg::Set(y) => {
                let mut s = y.clone();
                s.push(x);
                Arg::set(s)
            }
        };
        alg.apply(self.op, &args)
    }
}

fn subsets(elems: &[Elem], nonempty: bool) -> Vec<Arg> {
    let start = usize::from(nonempty);
    (start..1usize << elems.len())
        .map(|mask| Arg::Set((0..elems.len()).filter(|b| mask >> b & 1 == 1).map(|b| elems[b]).collect()))
        .collect()
}

/// All one-hole contexts whose hole has the given sort, in canonical order.
fn contexts(alg: &Algebra, sort: SortId) -> Vec<Context> {
    let sig = alg.signature();
    let mut out = Vec::new();
    for (op, operation) in sig.ops.iter().enumerate() {
        for (hole, slot) in operation.slots.iter().enumerate() {
            if slot.sort() != sort {
                continue;
            }
            let domains: Vec<Vec<Arg>> = operation
                .slots
                .iter()
                .enumerate()
                .map(|(i, s)| match (*s, i == hole) {
                    (Slot::Single(_), true) => vec![Arg::One(usize::MAX)],
                    (Slot::Set(t), true) => subsets(alg.of_sort(t), false),
                    (Slot::Single(t), false) => alg.of_sort(t).iter().map(|&e| Arg::One(e)).collect(),
                    (Slot::Set(t), false) => subsets(alg.of_sort(t), true),
                })
                .collect();
            let lists: Vec<&[Arg]> = domains.iter().map(Vec::as_slice).collect();
            crate::closure::for_each_product(&lists, &mut |args| {
                out.push(Context { op, hole, args: args.to_vec() })
            });
        }
    }
    out
}

/// Renumbers keys by first appearance.
fn number<K: std::hash::Hash + Eq>(keys: impl Iterator<Item = K>) -> (Vec<usize>, usize) {
    let mut ids: HashMap<K, usize> = HashMap::new();
    let blocks = keys
        .map(|k| {
            let next = ids.len();
            *ids.entry(k).or_insert(next)
        })
        .collect();
    (blocks, ids.len())
}

/// Coarsest congruence of the trimmed recogniser saturating the accepting set.
/// Returns the block of every element of `alg`, numbered by first appearance.
pub fn refine(alg: &Algebra, accepting: impl Fn(Elem) -> bool) -> Vec<usize> {
    let ctxs: Vec<Vec<Context>> = (0..alg.signature().sorts.len()).map(|s| contexts(alg, s)).collect();
    let (mut block, mut count) = number((0..alg.len()).map(|x| (alg.sort_of(x), accepting(x))));
    loop {
        let (next, next_count) = number((0..alg.len()).map(|x| {
            let mut key = vec![block[x]];
            key.extend(ctxs[alg.sort_of(x)].iter().map(|c| block[c.plug(alg, x)]));
            key
        }));
        block = next;
        if next_count == count {
            return block;
        }
        count = next_count;
    }
}

/// The syntactic morphism of `l`, with its accepting set.
pub fn moore_syntactic(l: &Language) -> Result<Syntactic> {
    let (h, embed) = trim(l.morphism())?;
    let sub = h.target();
    let block = refine(sub, |x| l.accepts(embed[x]));
    let nblocks = block.iter().max().map_or(0, |m| m + 1);
    let mut blocks = vec![Vec::new(); nblocks];
    for (x, &b) in block.iter().enumerate() {
        blocks[b].push(x);
    }
    let part = Partition::new(sub, blocks)?;
    let q = quotient(sub, &part)?;
    let units = h.units().iter().map(|&u| q.block_of[u]).collect();
    let accepting = (0..sub.len()).filter(|&x| l.accepts(embed[x])).map(|x| q.block_of[x]).collect();
    let language = Language::new(Morphism::new(h.alphabet().clone(), q.algebra, units)?, accepting)?;
    let mut block_of = vec![None; l.algebra().len()];
    for (x, &e) in embed.iter().enumerate() {
        block_of[e] = Some(q.block_of[x]);
    }
    let original = Partition::normalised(
        part.blocks().iter().map(|b| b.iter().map(|&x| embed[x]).collect()).collect(),
    );
    Ok(Syntactic { language, partition: original, block_of })
}
