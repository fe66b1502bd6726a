//! Small hand-built algebras and languages used in examples and tests.

use std::collections::{HashMap, VecDeque};

use crate::algebra::{Algebra, Arg, Elem};
use crate::chains::{ChainVariant, CONCAT, OMEGA, ROMEGA, SHUFFLE};
use crate::monad::Monad;
use crate::morphism::{Alphabet, Language, Morphism};
use crate::signature::OpId;
use crate::trees::{RankedAlphabet, CONTEXT, FOREST};

fn names(ns: &[&str]) -> Vec<(String, usize)> {
    ns.iter().map(|n| (n.to_string(), 0)).collect()
}

fn binary(monad: Monad, ns: &[&str], mul: impl Fn(Elem, Elem) -> Elem) -> Algebra {
    Algebra::from_fn(monad, names(ns), |_, args| Ok(mul(args[0].one().unwrap(), args[1].one().unwrap())))
        .expect("fixture table")
}

fn infty(ns: &[&str], mul: impl Fn(Elem, Elem) -> Elem, omega: impl Fn(Elem) -> Elem) -> Algebra {
    Algebra::from_fn(Monad::Infty, names(ns), |op, args| {
        let x = args[0].one().unwrap();
        Ok(if op == 0 { mul(x, args[1].one().unwrap()) } else { omega(x) })
    })
    .expect("fixture table")
}

fn lang(alg: Algebra, units: &[(&str, &str)], accepting: &[&str]) -> Language {
    Language::from_names(Morphism::from_names(alg, units).expect("fixture units"), accepting).expect("fixture accepting")
}

/// Parity group `{o, e}`.
pub fn z2() -> Algebra {
    binary(Monad::Word, &["o", "e"], |x, y| usize::from(x == y))
}

/// `{1, 0}` under minimum.
pub fn u1() -> Algebra {
    binary(Monad::Word, &["1", "0"], |x, y| x.max(y))
}

/// `x·y = x` except `a·a = b`.
pub fn non_associative() -> Algebra {
    binary(Monad::Word, &["a", "b"], |x, y| if x == 0 && y == 0 { 1 } else { x })
}

/// Odd-length words over `{a}`.
pub fn parity_odd() -> Language {
    lang(z2(), &[("a", "o")], &["o"])
}

/// Odd-length words over `{a, b}`.
pub fn odd_length_ab() -> Language {
    lang(z2(), &[("a", "o"), ("b", "o")], &["o"])
}

/// Words over `{a, b}` containing an `a`.
pub fn contains_a() -> Language {
    lang(u1(), &[("a", "0"), ("b", "1")], &["0"])
}

/// Flags (has a zero, has a one, has a one before a zero) collapsed to
/// `Z`, `O`, `ZO` and the sink `X`.
fn zero_one(x: Elem) -> (bool, bool) {
    (x == 0 || x == 2, x == 1 || x == 2)
}

fn zero_one_join(x: Elem, y: Elem) -> Elem {
    if x == 3 || y == 3 || (zero_one(x).1 && zero_one(y).0) {
        return 3;
    }
    match (zero_one(x).0 || zero_one(y).0, zero_one(x).1 || zero_one(y).1) {
        (true, false) => 0,
        (false, true) => 1,
        _ => 2,
    }
}

const ZO: [&str; 4] = ["Z", "O", "ZO", "X"];

/// Syntactic semigroup of `0*1*` (nonempty words).
pub fn zero_one_semigroup() -> Algebra {
    binary(Monad::Word, &ZO, zero_one_join)
}

/// Nonempty words of zeros.
pub fn zeros() -> Language {
    lang(zero_one_semigroup(), &[("0", "Z"), ("1", "O")], &["Z"])
}

/// Nonempty words in `0*1*`.
pub fn zeros_then_ones() -> Language {
    lang(zero_one_semigroup(), &[("0", "Z"), ("1", "O")], &["Z", "O", "ZO"])
}

/// Transition semigroup of a deterministic automaton (word instance).
/// Elements are named by a shortest word; accepting elements send the
/// initial state into `finals`.
pub fn word_dfa(initial: usize, finals: &[usize], letters: &[(&str, Vec<usize>)]) -> Language {
    let mut maps: Vec<Vec<usize>> = Vec::new();
    let mut words: Vec<String> = Vec::new();
    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut queue = VecDeque::new();
    for (name, delta) in letters {
        if !index.contains_key(delta) {
            index.insert(delta.clone(), maps.len());
            queue.push_back(maps.len());
            maps.push(delta.clone());
            words.push(name.to_string());
        }
    }
    while let Some(i) = queue.pop_front() {
        for (name, delta) in letters {
            let next: Vec<usize> = maps[i].iter().map(|&q| delta[q]).collect();
            if !index.contains_key(&next) {
                index.insert(next.clone(), maps.len());
                queue.push_back(maps.len());
                maps.push(next);
                words.push(format!("{}{name}", words[i]));
            }
        }
    }
    let then = |f: &[usize], g: &[usize]| -> Vec<usize> { f.iter().map(|&q| g[q]).collect() };
    let ns: Vec<&str> = words.iter().map(String::as_str).collect();
    let alg = binary(Monad::Word, &ns, |x, y| index[&then(&maps[x], &maps[y])]);
    let units: Vec<Elem> = letters.iter().map(|(_, d)| index[d]).collect();
    let alphabet = Alphabet::of(&letters.iter().map(|(n, _)| *n).collect::<Vec<_>>());
    let accepting = (0..maps.len()).filter(|&e| finals.contains(&maps[e][initial])).collect();
    Language::new(Morphism::new(alphabet, alg, units).expect("fixture units"), accepting).expect("fixture accepting")
}

/// `0*1*` from a three-state automaton.
pub fn zero_one_dfa3() -> Language {
    word_dfa(0, &[0, 1], &[("0", vec![0, 2, 2]), ("1", vec![1, 1, 2])])
}

/// `0*1*` from a four-state automaton with a redundant state.
pub fn zero_one_dfa4() -> Language {
    word_dfa(0, &[0, 1, 2], &[("0", vec![1, 0, 3, 3]), ("1", vec![2, 2, 2, 3])])
}

/// ∞-words: first letter, with `x·y = x` and `x^ω = x`.
pub fn begins_with_a_2() -> Algebra {
    infty(&["A", "B"], |x, _| x, |x| x)
}

/// ∞-words over `{a, b}` beginning with `b`.
pub fn begins_with_b_lang() -> Language {
    lang(begins_with_a_2(), &[("a", "A"), ("b", "B")], &["B"])
}

/// First letter and finiteness.
pub fn begins_with_a_4() -> Algebra {
    infty(&["A_f", "A_∞", "B_f", "B_∞"], |x, y| (x & 2) | ((x | y) & 1), |x| x | 1)
}

pub fn begins_with_a_4_lang() -> Language {
    lang(begins_with_a_4(), &[("a", "A_f"), ("b", "B_f")], &["A_f", "A_∞"])
}

/// Finite words without/with an `a`, and infinite words with infinitely
/// or finitely many `a`.
pub fn infinitely_many_a() -> Algebra {
    infty(
        &["1", "a", "⊤", "⊥"],
        |x, y| match (x, y) {
            (2 | 3, _) => x,
            (_, 2 | 3) => y,
            _ => x.max(y),
        },
        |x| [3, 2, 2, 3][x],
    )
}

pub fn infinitely_many_a_lang() -> Language {
    lang(infinitely_many_a(), &[("a", "a"), ("b", "1")], &["⊤"])
}

pub fn finitely_many_a_lang() -> Language {
    lang(infinitely_many_a(), &[("a", "a"), ("b", "1")], &["1", "a", "⊥"])
}

/// Parity with an absorbing `⊤` receiving every ω-power.
pub fn z2_top() -> Algebra {
    infty(&["o", "e", "⊤"], |x, y| if x == 2 || y == 2 { 2 } else { usize::from(x == y) }, |_| 2)
}

/// Parity product with `x^ω = x`; violates `(x^2)^ω = x^ω` at `a`.
pub fn wilke_power_violation() -> Algebra {
    infty(&["a", "b"], |x, y| usize::from(x == y), |x| x)
}

fn point(ns: &[String], ext_l: impl Fn(Elem, Elem) -> Elem, ext_r: impl Fn(Elem, Elem) -> Elem) -> Algebra {
    let els = ns.iter().map(|n| (n.clone(), 0)).collect();
    Algebra::from_fn(Monad::Point, els, |op, args| {
        let (x, y) = (args[0].one().unwrap(), args[1].one().unwrap());
        Ok(if op == 0 { ext_l(x, y) } else { ext_r(x, y) })
    })
    .expect("fixture table")
}

/// Pointed words over `{a, b}` whose selected position is immediately
/// followed by an `a`. Elements record the first letter of the word and
/// whether the successor of the point is still pending or carries `a`/`b`.
pub fn successor_query() -> Language {
    let mut ns = Vec::new();
    for first in ["a", "b"] {
        for status in ["pend", "succ_a", "succ_b"] {
            ns.push(format!("{first}_{status}"));
        }
    }
    let (first, status) = (|x: Elem| x / 3, |x: Elem| x % 3);
    let alg = point(
        &ns,
        |y, x| first(y) * 3 + status(x),
        |x, y| first(x) * 3 + if status(x) == 0 { 1 + first(y) } else { status(x) },
    );
    lang(alg, &[("a", "a_pend"), ("b", "b_pend")], &["a_succ_a", "b_succ_a"])
}

/// Pointed words over `{a, b}` with at least two `a` after the point.
/// Elements `t{n}r{m}`: `n` letters `a` in total, `m` after the point, both capped at 2.
pub fn followed_by_two_a() -> Language {
    let pairs: Vec<(usize, usize)> = vec![(0, 0), (1, 0), (1, 1), (2, 0), (2, 1), (2, 2)];
    let ns: Vec<String> = pairs.iter().map(|(t, r)| format!("t{t}r{r}")).collect();
    let find = |t: usize, r: usize| pairs.iter().position(|&p| p == (t.min(2), r.min(2))).unwrap();
    let alg = point(
        &ns,
        |y, x| find(pairs[y].0 + pairs[x].0, pairs[x].1),
        |x, y| find(pairs[x].0 + pairs[y].0, pairs[x].1 + pairs[y].0),
    );
    lang(alg, &[("a", "t1r0"), ("b", "t0r0")], &["t2r2"])
}

/// Pointed words over `{a, b}` whose selected position carries `a`.
pub fn label_a() -> Language {
    let alg = point(&["sel_a".into(), "sel_b".into()], |_, x| x, |x, _| x);
    lang(alg, &[("a", "sel_a"), ("b", "sel_b")], &["sel_a"])
}

/// Pointed words whose selected position is the first one.
pub fn point_is_first() -> Language {
    let alg = point(&["first".into(), "later".into()], |_, _| 1, |x, _| x);
    lang(alg, &[("a", "first"), ("b", "first")], &["first"])
}

/// Pointed words over `{a, b}` with an `a` strictly left of the point.
/// Elements record (an `a` left of the point, an `a` anywhere).
pub fn a_left_of_point() -> Language {
    let flags = [(false, false), (false, true), (true, true)];
    let ns: Vec<String> = vec!["none".into(), "elsewhere".into(), "left".into()];
    let find = |l: bool, any: bool| flags.iter().position(|&f| f == (l, any)).unwrap();
    let alg = point(
        &ns,
        |y, x| find(flags[x].0 || flags[y].1, flags[x].1 || flags[y].1),
        |x, y| find(flags[x].0, flags[x].1 || flags[y].1),
    );
    lang(alg, &[("a", "elsewhere"), ("b", "none")], &["left"])
}

pub fn bool_alphabet() -> RankedAlphabet {
    RankedAlphabet::new(&[("and", 2), ("or", 2), ("t", 0), ("f", 0)]).expect("valid alphabet")
}

/// Boolean evaluation of `and`/`or` trees over constants `t`, `f`.
pub fn bool_eval() -> Algebra {
    Algebra::from_fn(Monad::Ranked(bool_alphabet()), names(&["0", "1"]), |op, args| {
        let v = |i: usize| args[i].one().unwrap();
        Ok(match op {
            0 => v(0).min(v(1)),
            1 => v(0).max(v(1)),
            2 => 1,
            _ => 0,
        })
    })
    .expect("fixture table")
}

/// Ground boolean expressions that evaluate to true.
pub fn true_trees() -> Language {
    lang(bool_eval(), &[], &["1"])
}

/// Forests containing a node labelled `l`; letters `l`, `m` are
/// contexts (a labelled node whose port is below it), `x` is a leaf forest.
pub fn forest_contains() -> Language {
    let els = vec![
        ("no_f".to_string(), FOREST),
        ("yes_f".to_string(), FOREST),
        ("no_c".to_string(), CONTEXT),
        ("yes_c".to_string(), CONTEXT),
    ];
    let alg = Algebra::from_fn(Monad::Forest, els, |op, args| {
        let yes = args.iter().any(|a| matches!(a.one(), Some(1 | 3)));
        let context = matches!(op, 1..=3);
        Ok(usize::from(yes) + if context { 2 } else { 0 })
    })
    .expect("fixture table");
    lang(alg, &[("l", "yes_c"), ("m", "no_c"), ("x", "no_f")], &["yes_f"])
}

/// Countable chains over `{0, 1}` in which every `0` precedes every `1`.
pub fn zeros_before_ones(variant: ChainVariant) -> Language {
    let alg = Algebra::from_fn(Monad::Chain(variant), names(&ZO), |op, args| {
        Ok(match op {
            CONCAT => zero_one_join(args[0].one().unwrap(), args[1].one().unwrap()),
            OMEGA | ROMEGA => {
                let x = args[0].one().unwrap();
                zero_one_join(x, x)
            }
            SHUFFLE => {
                let ys = args[0].elems();
                let flags = ys.iter().fold((false, false), |(z, o), &y| {
                    let (yz, yo) = zero_one(y);
                    (z || yz, o || yo)
                });
                match flags {
                    _ if ys.contains(&3) => 3,
                    (true, false) => 0,
                    (false, true) => 1,
                    _ => 3,
                }
            }
            _ => unreachable!("chain signature has four operations"),
        })
    })
    .expect("fixture table");
    lang(alg, &[("0", "Z"), ("1", "O")], &["Z", "O", "ZO"])
}

/// One element per sort; every operation is constant.
pub fn trivial(monad: Monad) -> Algebra {
    let sig = monad.signature();
    let els = sig.sorts.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
    Algebra::from_fn(monad, els, |op, _| Ok(sig.op(op).result)).expect("fixture table")
}

/// Copy of `alg` with the value of the `index`-th shape of `op` (in
/// canonical order) moved to the next element of the same sort.
pub fn perturbed(alg: &Algebra, op: OpId, index: usize) -> Algebra {
    let target: Vec<Arg> = alg.shapes(op)[index].clone();
    let elements = alg.elements().iter().map(|e| (e.name.clone(), e.sort)).collect();
    Algebra::from_fn(alg.monad().clone(), elements, |o, args| {
        let v = alg.apply(o, args);
        if o != op || args != target.as_slice() {
            return Ok(v);
        }
        let same = alg.of_sort(alg.sort_of(v));
        let pos = same.iter().position(|&e| e == v).unwrap();
        Ok(same[(pos + 1) % same.len()])
    })
    .expect("perturbed table")
}

/// Languages shipped as named fixtures.
pub fn languages() -> Vec<(&'static str, Language)> {
    vec![
        ("parity_odd", parity_odd()),
        ("odd_length_ab", odd_length_ab()),
        ("contains_a", contains_a()),
        ("zeros", zeros()),
        ("zeros_then_ones", zeros_then_ones()),
        ("zero_one_dfa3", zero_one_dfa3()),
        ("zero_one_dfa4", zero_one_dfa4()),
        ("begins_with_a", begins_with_a_4_lang()),
        ("begins_with_b", begins_with_b_lang()),
        ("infinitely_many_a", infinitely_many_a_lang()),
        ("finitely_many_a", finitely_many_a_lang()),
        ("successor_query", successor_query()),
        ("followed_by_two_a", followed_by_two_a()),
        ("label_a", label_a()),
        ("point_is_first", point_is_first()),
        ("a_left_of_point", a_left_of_point()),
        ("true_trees", true_trees()),
        ("forest_contains", forest_contains()),
        ("zeros_before_ones_well", zeros_before_ones(ChainVariant::Well)),
        ("zeros_before_ones_scattered", zeros_before_ones(ChainVariant::Scattered)),
        ("zeros_before_ones_countable", zeros_before_ones(ChainVariant::Countable)),
    ]
}

/// Algebras shipped as named fixtures, including deliberately invalid ones.
pub fn algebras() -> Vec<(&'static str, Algebra)> {
    vec![
        ("z2", z2()),
        ("u1", u1()),
        ("non_associative", non_associative()),
        ("z2_top", z2_top()),
        ("wilke_power_violation", wilke_power_violation()),
        ("bool_eval", bool_eval()),
    ]
}
