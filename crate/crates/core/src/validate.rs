//! Axiom checking for reduct tables.

use serde::Serialize;

use crate::algebra::{Algebra, Elem};
use crate::signature::OpId;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub axiom: String,
    /// Names of the witnessing elements.
    pub witness: Vec<String>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub monad: String,
    /// False when the checked axioms are only necessary conditions.
    pub complete_axioms: bool,
    pub violations: Vec<Violation>,
}

impl Report {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violates(&self, axiom: &str) -> bool {
        self.violations.iter().any(|v| v.axiom == axiom)
    }
}

/// Runs the instance axiom set. Table totality is guaranteed by
/// construction of [`Algebra`], so only the equational axioms remain.
pub fn validate(alg: &Algebra) -> Report {
    Report {
        monad: alg.monad().id().to_string(),
        complete_axioms: alg.monad().axioms_complete(),
        violations: alg.monad().axioms(alg),
    }
}

pub(crate) fn violation(alg: &Algebra, axiom: &str, witness: &[Elem], detail: String) -> Violation {
    Violation {
        axiom: axiom.to_string(),
        witness: witness.iter().map(|e| alg.name(*e).to_string()).collect(),
        detail,
    }
}

/// `(x·y)·z = x·(y·z)` over all triples of a one-sorted binary operation.
pub(crate) fn associativity(alg: &Algebra, op: OpId, axiom: &str) -> Vec<Violation> {
    let sorts = &alg.signature().op(op).slots;
    let (sx, sy) = (sorts[0].sort(), sorts[1].sort());
    let mut out = Vec::new();
    for &x in alg.of_sort(sx) {
        for &y in alg.of_sort(sy) {
            let xy = alg.mul(op, x, y);
            for &z in alg.of_sort(sy) {
                let yz = alg.mul(op, y, z);
                let left = alg.mul(op, xy, z);
                let right = alg.mul(op, x, yz);
                if left != right {
                    out.push(violation(
                        alg,
                        axiom,
                        &[x, y, z],
                        format!(
                            "({x}·{y})·{z} = {xy}·{z} = {l} but {x}·({y}·{z}) = {x}·{yz} = {r}",
                            x = alg.name(x),
                            y = alg.name(y),
                            z = alg.name(z),
                            xy = alg.name(xy),
                            yz = alg.name(yz),
                            l = alg.name(left),
                            r = alg.name(right)
                        ),
                    ));
                }
            }
        }
    }
    out
}

/// Index and period of `x` in its cyclic subsemigroup, together with the
/// powers `x^1 .. x^(index+period-1)` (position `k` holds `x^(k+1)`).
pub fn cyclic_powers(alg: &Algebra, concat: OpId, x: Elem) -> (Vec<Elem>, usize, usize) {
    let mut powers = vec![x];
    loop {
        let next = alg.mul(concat, *powers.last().unwrap(), x);
        if let Some(pos) = powers.iter().position(|&p| p == next) {
            let index = pos + 1;
            let period = powers.len() - pos;
            return (powers, index, period);
        }
        powers.push(next);
    }
}

/// `x^n` (for `n >= 1`) read off the output of [`cyclic_powers`].
pub fn nth_power(powers: &[Elem], index: usize, period: usize, n: usize) -> Elem {
    if n <= powers.len() {
        powers[n - 1]
    } else {
        powers[index - 1 + (n - index) % period]
    }
}

/// Wilke-style axioms for an ω-like operation. With `mirror` set the
/// operation is read as the reverse power `x^{-ω}`, and the checks are the
/// left-right mirror images.
pub(crate) fn wilke(alg: &Algebra, concat: OpId, omega: OpId, mirror: bool) -> Vec<Violation> {
    let (twist, power) = if mirror { ("romega-twist", "romega-power") } else { ("omega-twist", "omega-power") };
    let name = |e: Elem| alg.name(e).to_string();
    let mut out = Vec::new();
    let carrier = alg.of_sort(alg.signature().op(omega).result).to_vec();
    for &x in &carrier {
        for &y in &carrier {
            let xy = alg.mul(concat, x, y);
            let yx = alg.mul(concat, y, x);
            let (left, right) = if mirror {
                // (xy)^{-ω} = (yx)^{-ω}·y
                (alg.eval(omega, &[xy]), alg.mul(concat, alg.eval(omega, &[yx]), y))
            } else {
                // (xy)^ω = x·(yx)^ω
                (alg.eval(omega, &[xy]), alg.mul(concat, x, alg.eval(omega, &[yx])))
            };
            if left != right {
                let detail = if mirror {
                    format!("({x}·{y})^-ω = {} but ({y}·{x})^-ω·{y} = {}", name(left), name(right), x = name(x), y = name(y))
                } else {
                    format!("({x}·{y})^ω = {} but {x}·({y}·{x})^ω = {}", name(left), name(right), x = name(x), y = name(y))
                };
                out.push(violation(alg, twist, &[x, y], detail));
            }
        }
    }
    for &x in &carrier {
        let (powers, index, period) = cyclic_powers(alg, concat, x);
        let base = alg.eval(omega, &[x]);
        for n in 2..=index + period {
            let xn = nth_power(&powers, index, period, n);
            let value = alg.eval(omega, &[xn]);
            if value != base {
                out.push(violation(
                    alg,
                    power,
                    &[x],
                    format!("({}^{n})^ω = {} but {}^ω = {}", name(x), name(value), name(x), name(base)),
                ));
            }
        }
    }
    out
}
