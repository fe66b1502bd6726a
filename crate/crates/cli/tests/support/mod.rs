//! Random instance generators and brute-force oracles shared by the CLI
//! crate's integration tests. Oracles work from the raw tables and from
//! explicit words, trees and automata, never from the library's
//! constructions.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::path::{Path, PathBuf};
use std::process::Command;

use rand::seq::SliceRandom;
use rand::Rng;

use monadlang_core::closure::subalgebra_closure;
use monadlang_core::construct::product;
use monadlang_core::fixtures;
use monadlang_core::pointed::{EXT_L, EXT_R};
use monadlang_core::trees::RankedAlphabet;
use monadlang_core::{Algebra, Alphabet, Arg, Elem, Language, Letter, Monad, Morphism, Term};

pub type Partition = BTreeSet<BTreeSet<String>>;

pub fn fixtures_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn monadlang(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_monadlang")).args(args).output().expect("binary runs");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).expect("utf-8 stdout"),
        stderr: String::from_utf8(out.stderr).expect("utf-8 stderr"),
    }
}

fn partition_of(alg: &Algebra, keys: &BTreeMap<Elem, Vec<bool>>) -> Partition {
    let mut groups: BTreeMap<&Vec<bool>, BTreeSet<String>> = BTreeMap::new();
    for (&x, k) in keys {
        groups.entry(k).or_default().insert(alg.name(x).to_string());
    }
    groups.into_values().collect()
}

pub fn named_blocks(alg: &Algebra, blocks: &[Vec<Elem>]) -> Partition {
    blocks.iter().map(|b| b.iter().map(|&x| alg.name(x).to_string()).collect()).collect()
}

// ---------------------------------------------------------------- words

/// A word language recognised by the transition semigroup of a random
/// automaton, with a random accepting set.
pub fn random_word_language(rng: &mut impl Rng, max_carrier: usize) -> Language {
    let names = ["a", "b", "c"];
    loop {
        let states = rng.gen_range(2..=3);
        let k = rng.gen_range(1..=3);
        let letters: Vec<(&str, Vec<usize>)> =
            names[..k].iter().map(|&n| (n, (0..states).map(|_| rng.gen_range(0..states)).collect())).collect();
        let l = fixtures::word_dfa(0, &[], &letters);
        if l.algebra().len() > max_carrier {
            continue;
        }
        let accepting = (0..l.algebra().len()).filter(|_| rng.gen_bool(0.5)).collect();
        return Language::new(l.morphism().clone(), accepting).expect("accepting set within carrier");
    }
}

fn word_value(l: &Language, w: &[usize]) -> Elem {
    let alg = l.algebra();
    let units = l.morphism().units();
    w[1..].iter().fold(units[w[0]], |acc, &a| alg.mul(0, acc, units[a]))
}

fn words_up_to(k: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::new();
        for w in &frontier {
            for a in 0..k {
                let mut v: Vec<usize> = w.clone();
                v.push(a);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Syntactic congruence classes of the reachable elements, from two-sided
/// word contexts `u □ v` with `|u| + |v| ≤ max_context`.
pub fn word_syntactic_oracle(l: &Language, max_context: usize) -> Partition {
    let k = l.alphabet().len();
    let mut rep: BTreeMap<Elem, Vec<usize>> = BTreeMap::new();
    for w in words_up_to(k, l.algebra().len()).into_iter().filter(|w| !w.is_empty()) {
        rep.entry(word_value(l, &w)).or_insert(w);
    }
    let pieces = words_up_to(k, max_context);
    let contexts: Vec<(&Vec<usize>, &Vec<usize>)> = pieces
        .iter()
        .flat_map(|u| pieces.iter().map(move |v| (u, v)))
        .filter(|(u, v)| u.len() + v.len() <= max_context)
        .collect();
    let keys = rep
        .iter()
        .map(|(&x, w)| {
            let key = contexts
                .iter()
                .map(|(u, v)| {
                    let full: Vec<usize> = u.iter().chain(w.iter()).chain(v.iter()).copied().collect();
                    l.accepts(word_value(l, &full))
                })
                .collect();
            (x, key)
        })
        .collect();
    partition_of(l.algebra(), &keys)
}

pub fn all_subsets(n: usize) -> Vec<BTreeSet<Elem>> {
    (0..1usize << n).map(|m| (0..n).filter(|b| m >> b & 1 == 1).collect()).collect()
}

// -------------------------------------------------------------- ∞-words

/// Subalgebra of the product of two Wilke fixtures generated by one or two
/// random elements, with at most `max_carrier` elements.
pub fn random_wilke(rng: &mut impl Rng, max_carrier: usize) -> Algebra {
    let bases = [
        fixtures::begins_with_a_2(),
        fixtures::begins_with_a_4(),
        fixtures::infinitely_many_a(),
        fixtures::z2_top(),
        fixtures::trivial(Monad::Infty),
    ];
    loop {
        let a = bases.choose(rng).unwrap();
        let b = bases.choose(rng).unwrap();
        let p = product(a, b).expect("same instance").algebra;
        let gens: Vec<Elem> = (0..rng.gen_range(1..=2)).map(|_| rng.gen_range(0..p.len())).collect();
        let sub: Vec<Elem> = subalgebra_closure(&p, &gens).expect("closure").into_iter().collect();
        if sub.len() <= max_carrier {
            return p.restrict(&sub).expect("subalgebra").0;
        }
    }
}

/// `{u·v^ω : u ∈ S^{≤max}, v ∈ S^{1..max}}` from products of explicit sequences.
pub fn omega_oracle(alg: &Algebra, s: &BTreeSet<Elem>, max: usize) -> BTreeSet<Elem> {
    let (concat, omega) = (0, 1);
    let members: Vec<Elem> = s.iter().copied().collect();
    let seqs = words_up_to(members.len(), max);
    let value = |w: &[usize]| w[1..].iter().fold(members[w[0]], |acc, &i| alg.mul(concat, acc, members[i]));
    let mut out = BTreeSet::new();
    for v in seqs.iter().filter(|v| !v.is_empty()) {
        let loop_value = alg.eval(omega, &[value(v)]);
        for u in &seqs {
            out.insert(if u.is_empty() { loop_value } else { alg.mul(concat, value(u), loop_value) });
        }
    }
    out
}

/// An ultimately periodic word `prefix · period^ω`, or a finite word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UpWord {
    Finite(String),
    Infinite(String, String),
}

/// Reads an ∞-word term (`concat`, `omega`) as the word it denotes.
pub fn up_word(t: &Term, sig: &monadlang_core::Signature) -> UpWord {
    match t {
        Term::Letter(a) => UpWord::Finite(a.clone()),
        Term::Apply(op, args) => {
            let sub: Vec<UpWord> = args
                .iter()
                .map(|a| match a {
                    monadlang_core::term::TermArg::One(t) => up_word(t, sig),
                    monadlang_core::term::TermArg::Set(_) => panic!("no set slots in ∞-words"),
                })
                .collect();
            match (sig.op(*op).name.as_str(), &sub[..]) {
                ("concat", [UpWord::Finite(u), UpWord::Finite(v)]) => UpWord::Finite(format!("{u}{v}")),
                ("concat", [UpWord::Finite(u), UpWord::Infinite(p, q)]) => UpWord::Infinite(format!("{u}{p}"), q.clone()),
                ("concat", [inf @ UpWord::Infinite(..), _]) => inf.clone(),
                ("omega", [UpWord::Finite(u)]) => UpWord::Infinite(String::new(), u.clone()),
                ("omega", [inf @ UpWord::Infinite(..)]) => inf.clone(),
                (name, _) => panic!("unexpected operation {name}"),
            }
        }
    }
}

// ------------------------------------------------------------- automata

/// Complete deterministic automaton over named letters, read on nonempty words.
#[derive(Debug, Clone)]
pub struct Dfa {
    pub letters: Vec<String>,
    pub delta: Vec<Vec<usize>>,
    pub finals: Vec<bool>,
}

impl Dfa {
    pub fn new(letters: &[&str], delta: Vec<Vec<usize>>, finals: Vec<bool>) -> Dfa {
        Dfa { letters: letters.iter().map(|s| s.to_string()).collect(), delta, finals }
    }

    fn letter(&self, name: &str) -> usize {
        self.letters.iter().position(|l| l == name).expect("letter of the automaton")
    }

    fn run(&self, mut q: usize, word: &[&str]) -> usize {
        for a in word {
            q = self.delta[q][self.letter(a)];
        }
        q
    }

    pub fn accepts(&self, word: &[&str]) -> bool {
        self.finals[self.run(0, word)]
    }

    pub fn not(&self) -> Dfa {
        Dfa { finals: self.finals.iter().map(|f| !f).collect(), ..self.clone() }
    }

    pub fn product(&self, other: &Dfa, both: bool) -> Dfa {
        assert_eq!(self.letters, other.letters);
        let m = other.delta.len();
        let n = self.delta.len() * m;
        let delta = (0..n)
            .map(|q| (0..self.letters.len()).map(|a| self.delta[q / m][a] * m + other.delta[q % m][a]).collect())
            .collect();
        let finals = (0..n)
            .map(|q| if both { self.finals[q / m] && other.finals[q % m] } else { self.finals[q / m] || other.finals[q % m] })
            .collect();
        Dfa { letters: self.letters.clone(), delta, finals }
    }

    /// Preimage under a substitution of words for letters.
    pub fn inverse(&self, sub: &BTreeMap<String, Vec<String>>) -> Dfa {
        let letters: Vec<String> = sub.keys().cloned().collect();
        let delta = (0..self.delta.len())
            .map(|q| {
                sub.values()
                    .map(|w| self.run(q, &w.iter().map(String::as_str).collect::<Vec<_>>()))
                    .collect()
            })
            .collect();
        Dfa { letters, delta, finals: self.finals.clone() }
    }

    /// Image under a letter relabelling, by the subset construction.
    pub fn image(&self, map: &BTreeMap<String, String>) -> Dfa {
        let letters: Vec<String> = map.values().cloned().collect::<BTreeSet<_>>().into_iter().collect();
        let mut index: HashMap<BTreeSet<usize>, usize> = HashMap::new();
        let mut sets = vec![BTreeSet::from([0])];
        index.insert(sets[0].clone(), 0);
        let mut delta = Vec::new();
        let mut queue = VecDeque::from([0]);
        while let Some(i) = queue.pop_front() {
            let mut row = Vec::new();
            for c in &letters {
                let next: BTreeSet<usize> = sets[i]
                    .iter()
                    .flat_map(|&q| self.letters.iter().enumerate().filter(|(_, a)| &map[*a] == c).map(move |(a, _)| (q, a)))
                    .map(|(q, a)| self.delta[q][a])
                    .collect();
                let j = *index.entry(next.clone()).or_insert_with(|| {
                    sets.push(next);
                    queue.push_back(sets.len() - 1);
                    sets.len() - 1
                });
                row.push(j);
            }
            if delta.len() <= i {
                delta.resize(i + 1, Vec::new());
            }
            delta[i] = row;
        }
        let finals = sets.iter().map(|s| s.iter().any(|&q| self.finals[q])).collect();
        Dfa { letters, delta, finals }
    }
}

/// `0⁺` over `{0, 1}`.
pub fn zeros_dfa() -> Dfa {
    Dfa::new(&["0", "1"], vec![vec![1, 2], vec![1, 2], vec![2, 2]], vec![false, true, false])
}

/// Nonempty words in `0*1*`.
pub fn zeros_then_ones_dfa() -> Dfa {
    Dfa::new(&["0", "1"], vec![vec![1, 2], vec![1, 2], vec![3, 2], vec![3, 3]], vec![false, true, true, false])
}

// --------------------------------------------------------- pointed words

/// `⪯` from its definition: `a ⪯ b` iff a pointed word of value `a` uses
/// only letters of some pointed word of value `b`, over the carrier as
/// alphabet and words of length at most `max_len`.
pub fn preceq_oracle(alg: &Algebra, max_len: usize) -> BTreeSet<(Elem, Elem)> {
    let n = alg.len();
    let mut masks: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); n];
    for w in words_up_to(n, max_len).into_iter().filter(|w| !w.is_empty()) {
        let mask = w.iter().fold(0u32, |m, &x| m | 1 << x);
        for p in 0..w.len() {
            let mut v = w[p];
            for &b in &w[p + 1..] {
                v = alg.eval(EXT_R, &[v, b]);
            }
            for &a in w[..p].iter().rev() {
                v = alg.eval(EXT_L, &[a, v]);
            }
            masks[v].insert(mask);
        }
    }
    let mut rel = BTreeSet::new();
    for a in 0..n {
        for b in 0..n {
            if masks[a].iter().any(|&ma| masks[b].iter().any(|&mb| ma & !mb == 0)) {
                rel.insert((a, b));
            }
        }
    }
    rel
}

/// Random point-instance tables on `n` elements; callers filter by validity.
pub fn random_point_algebra(rng: &mut impl Rng, n: usize) -> Algebra {
    let names = (0..n).map(|i| (format!("p{i}"), 0)).collect();
    Algebra::from_fn(Monad::Point, names, |_, _| Ok(rng.gen_range(0..n))).expect("total table")
}

// ------------------------------------------------------------------ trees

pub fn tree_alphabet() -> RankedAlphabet {
    RankedAlphabet::new(&[("f", 2), ("g", 1), ("a", 0), ("b", 0)]).expect("valid alphabet")
}

/// Random bottom-up tree automaton with `states` states and a random accepting set.
pub fn random_tree_language(rng: &mut impl Rng, states: usize) -> Language {
    let names = (0..states).map(|i| (format!("q{i}"), 0)).collect();
    let alg = Algebra::from_fn(Monad::Ranked(tree_alphabet()), names, |_, _| Ok(rng.gen_range(0..states)))
        .expect("total table");
    let h = Morphism::new(Alphabet::new(Vec::<Letter>::new()).unwrap(), alg, Vec::new()).expect("no letters");
    let accepting = (0..states).filter(|_| rng.gen_bool(0.5)).collect();
    Language::new(h, accepting).expect("accepting set within carrier")
}

/// One step of a tree context: an operation with the hole at `hole` and
/// the other children given by values of ground trees.
#[derive(Clone)]
struct Step {
    op: usize,
    hole: usize,
    others: Vec<Elem>,
}

/// Syntactic classes of the reachable states from explicit tree contexts
/// of height at most `max_height`, with side subtrees ranging over ground
/// trees witnessing every reachable state.
pub fn tree_syntactic_oracle(l: &Language, max_height: usize) -> Partition {
    let alg = l.algebra();
    let sig = alg.signature();
    // ground trees by height, recorded by value
    let mut reach: BTreeSet<Elem> = BTreeSet::new();
    loop {
        let before = reach.len();
        for op in 0..sig.ops.len() {
            let arity = sig.op(op).arity();
            let current: Vec<Elem> = reach.iter().copied().collect();
            for args in tuples(&current, arity) {
                let args: Vec<Arg> = args.into_iter().map(Arg::One).collect();
                reach.insert(alg.apply(op, &args));
            }
        }
        if reach.len() == before {
            break;
        }
    }
    let material: Vec<Elem> = reach.iter().copied().collect();
    let mut steps = Vec::new();
    for op in 0..sig.ops.len() {
        let arity = sig.op(op).arity();
        for hole in 0..arity {
            for others in tuples(&material, arity - 1) {
                steps.push(Step { op, hole, others });
            }
        }
    }
    let mut contexts: Vec<Vec<usize>> = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..max_height {
        let mut next = Vec::new();
        for c in &frontier {
            for s in 0..steps.len() {
                let mut d: Vec<usize> = c.clone();
                d.push(s);
                next.push(d);
            }
        }
        contexts.extend(next.iter().cloned());
        frontier = next;
    }
    let plug = |ctx: &[usize], x: Elem| {
        ctx.iter().fold(x, |v, &s| {
            let step = &steps[s];
            let mut args: Vec<Arg> = step.others.iter().map(|&e| Arg::One(e)).collect();
            args.insert(step.hole, Arg::One(v));
            alg.apply(step.op, &args)
        })
    };
    let keys = material.iter().map(|&x| (x, contexts.iter().map(|c| l.accepts(plug(c, x))).collect())).collect();
    partition_of(alg, &keys)
}

fn tuples(items: &[Elem], k: usize) -> Vec<Vec<Elem>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out.into_iter().flat_map(|t| items.iter().map(move |&x| [t.clone(), vec![x]].concat())).collect();
    }
    out
}

/// Value of a ground ranked tree under boolean semantics of `and`, `or`, `t`, `f`.
pub fn bool_value(t: &Term, sig: &monadlang_core::Signature) -> bool {
    match t {
        Term::Letter(l) => panic!("no letters in boolean trees, found {l}"),
        Term::Apply(op, args) => {
            let vals: Vec<bool> = args
                .iter()
                .map(|a| match a {
                    monadlang_core::term::TermArg::One(t) => bool_value(t, sig),
                    monadlang_core::term::TermArg::Set(_) => panic!("no set slots"),
                })
                .collect();
            match sig.op(*op).name.as_str() {
                "and" => vals.iter().all(|&v| v),
                "or" => vals.iter().any(|&v| v),
                "t" => true,
                "f" => false,
                other => panic!("unknown symbol {other}"),
            }
        }
    }
}
