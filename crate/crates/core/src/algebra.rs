//! Finite reduct algebras: a sorted carrier plus a total table over all
//! generator shapes of the instance signature.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::monad::Monad;
use crate::signature::{OpId, Signature, Slot, SortId};

pub type Elem = usize;

/// Largest sort that may fill a set slot (tables hold `2^n - 1` entries per slot).
pub const MAX_SET_SORT: usize = 16;
/// Upper bound on the number of entries of a single operation table.
pub const MAX_TABLE_ENTRIES: usize = 1 << 24;

/// One argument of a shape. Set arguments are kept sorted and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Arg {
    One(Elem),
    Set(Vec<Elem>),
}

impl Arg {
    /// Builds a canonical set argument.
    pub fn set(mut elems: Vec<Elem>) -> Arg {
        elems.sort_unstable();
        elems.dedup();
        Arg::Set(elems)
    }

    pub fn elems(&self) -> &[Elem] {
        match self {
            Arg::One(e) => std::slice::from_ref(e),
            Arg::Set(v) => v,
        }
    }

    pub fn one(&self) -> Option<Elem> {
        match self {
            Arg::One(e) => Some(*e),
            Arg::Set(_) => None,
        }
    }
}

/// An operation applied to arguments from a carrier.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Shape {
    pub op: OpId,
    pub args: Vec<Arg>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Element {
    pub name: String,
    pub sort: SortId,
}

#[derive(Debug, Clone)]
pub struct Algebra {
    monad: Monad,
    signature: Signature,
    elements: Vec<Element>,
    by_sort: Vec<Vec<Elem>>,
    local: Vec<usize>,
    index: HashMap<String, Elem>,
    tables: Vec<Vec<Elem>>,
}

impl PartialEq for Algebra {
    fn eq(&self, other: &Self) -> bool {
        self.monad == other.monad && self.elements == other.elements && self.tables == other.tables
    }
}

impl Eq for Algebra {}

struct Layout {
    radices: Vec<usize>,
    total: usize,
}

impl Algebra {
    /// Builds an algebra by querying `f` for every shape over the carrier.
    pub fn from_fn<F>(monad: Monad, elements: Vec<(String, SortId)>, mut f: F) -> Result<Algebra>
    where
        F: FnMut(OpId, &[Arg]) -> Result<Elem>,
    {
        let mut alg = Algebra::skeleton(monad, elements)?;
        for op in 0..alg.signature.ops.len() {
            let layout = alg.layout(op)?;
            let mut table = Vec::with_capacity(layout.total);
            for idx in 0..layout.total {
                let args = alg.decode(op, &layout, idx);
                let value = f(op, &args)?;
                alg.check_value(op, &args, value)?;
                table.push(value);
            }
            alg.tables.push(table);
        }
        Ok(alg)
    }

    /// Builds an algebra from explicit table entries, requiring totality.
    pub fn from_entries(
        monad: Monad,
        elements: Vec<(String, SortId)>,
        entries: Vec<(Shape, Elem)>,
    ) -> Result<Algebra> {
        let mut alg = Algebra::skeleton(monad, elements)?;
        let mut tables: Vec<Vec<Option<Elem>>> = Vec::new();
        for op in 0..alg.signature.ops.len() {
            tables.push(vec![None; alg.layout(op)?.total]);
        }
        for (shape, value) in entries {
            alg.check_shape(shape.op, &shape.args)?;
            alg.check_value(shape.op, &shape.args, value)?;
            let layout = alg.layout(shape.op)?;
            let idx = alg.encode(&layout, &shape.args);
            match tables[shape.op][idx] {
                Some(old) if old != value => {
                    return Err(Error::ConflictingEntry(alg.shape_string(shape.op, &shape.args)))
                }
                _ => tables[shape.op][idx] = Some(value),
            }
        }
        for (op, table) in tables.into_iter().enumerate() {
            let layout = alg.layout(op)?;
            let mut dense = Vec::with_capacity(table.len());
            for (idx, v) in table.into_iter().enumerate() {
                match v {
                    Some(v) => dense.push(v),
                    None => {
                        let args = alg.decode(op, &layout, idx);
                        return Err(Error::TableNotTotal(alg.shape_string(op, &args)));
                    }
                }
            }
            alg.tables.push(dense);
        }
        Ok(alg)
    }

    fn skeleton(monad: Monad, elements: Vec<(String, SortId)>) -> Result<Algebra> {
        let signature = monad.signature();
        signature.check();
        let mut by_sort = vec![Vec::new(); signature.sorts.len()];
        let mut local = Vec::with_capacity(elements.len());
        let mut index = HashMap::new();
        let mut elems = Vec::with_capacity(elements.len());
        for (i, (name, sort)) in elements.into_iter().enumerate() {
            if sort >= signature.sorts.len() {
                return Err(Error::UnknownSort(format!("#{sort} for element `{name}`")));
            }
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::DuplicateElement(name));
            }
            local.push(by_sort[sort].len());
            by_sort[sort].push(i);
            elems.push(Element { name, sort });
        }
        Ok(Algebra { monad, signature, elements: elems, by_sort, local, index, tables: Vec::new() })
    }

    fn layout(&self, op: OpId) -> Result<Layout> {
        let mut radices = Vec::new();
        let mut total: usize = 1;
        for slot in &self.signature.ops[op].slots {
            let n = self.by_sort[slot.sort()].len();
            let r = match slot {
                Slot::Single(_) => n,
                Slot::Set(s) => {
                    if n > MAX_SET_SORT {
                        return Err(Error::SetSlotTooLarge {
                            sort: self.signature.sorts[*s].clone(),
                            size: n,
                            max: MAX_SET_SORT,
                        });
                    }
                    (1usize << n) - 1
                }
            };
            radices.push(r);
            total = total
                .checked_mul(r)
                .filter(|t| *t <= MAX_TABLE_ENTRIES)
                .ok_or_else(|| {
                    Error::TableTooLarge(format!("operation `{}`", self.signature.ops[op].name))
                })?;
        }
        Ok(Layout { radices, total })
    }

    fn decode(&self, op: OpId, layout: &Layout, mut idx: usize) -> Vec<Arg> {
        let slots = &self.signature.ops[op].slots;
        let mut args = vec![Arg::One(0); slots.len()];
        for i in (0..slots.len()).rev() {
            let digit = idx % layout.radices[i];
            idx /= layout.radices[i];
            let members = &self.by_sort[slots[i].sort()];
            args[i] = match slots[i] {
                Slot::Single(_) => Arg::One(members[digit]),
                Slot::Set(_) => {
                    let mask = digit + 1;
                    Arg::Set((0..members.len()).filter(|b| mask >> b & 1 == 1).map(|b| members[b]).collect())
                }
            };
        }
        args
    }

    fn encode(&self, layout: &Layout, args: &[Arg]) -> usize {
        let mut idx = 0;
        for (i, arg) in args.iter().enumerate() {
            let digit = match arg {
                Arg::One(e) => self.local[*e],
                Arg::Set(v) => v.iter().fold(0usize, |m, e| m | 1 << self.local[*e]) - 1,
            };
            idx = idx * layout.radices[i] + digit;
        }
        idx
    }

    fn check_value(&self, op: OpId, args: &[Arg], value: Elem) -> Result<()> {
        let want = self.signature.ops[op].result;
        match self.elements.get(value) {
            Some(e) if e.sort == want => Ok(()),
            Some(e) => Err(Error::SortMismatch(format!(
                "{} has value `{}` of sort `{}`, expected `{}`",
                self.shape_string(op, args),
                e.name,
                self.signature.sorts[e.sort],
                self.signature.sorts[want]
            ))),
            None => Err(Error::UnknownElement(format!("#{value}"))),
        }
    }

    /// Checks that `args` is a well-formed argument list for `op` over this carrier.
    pub fn check_shape(&self, op: OpId, args: &[Arg]) -> Result<()> {
        let Some(operation) = self.signature.ops.get(op) else {
            return Err(Error::UnknownOp(format!("#{op}")));
        };
        if operation.slots.len() != args.len() {
            return Err(Error::ArityMismatch(format!(
                "`{}` takes {} arguments, got {}",
                operation.name,
                operation.slots.len(),
                args.len()
            )));
        }
        for (slot, arg) in operation.slots.iter().zip(args) {
            let elems = match (slot, arg) {
                (Slot::Single(_), Arg::One(e)) => std::slice::from_ref(e),
                (Slot::Set(_), Arg::Set(v)) => {
                    if v.is_empty() {
                        return Err(Error::EmptySetSlot(operation.name.clone()));
                    }
                    if v.windows(2).any(|w| w[0] >= w[1]) {
                        return Err(Error::Schema(format!("set argument of `{}` not canonical", operation.name)));
                    }
                    v.as_slice()
                }
                _ => {
                    return Err(Error::ArityMismatch(format!("slot kind mismatch in `{}`", operation.name)))
                }
            };
            for &e in elems {
                match self.elements.get(e) {
                    None => return Err(Error::UnknownElement(format!("#{e}"))),
                    Some(el) if el.sort != slot.sort() => {
                        return Err(Error::SortMismatch(format!(
                            "`{}` in `{}` has sort `{}`, expected `{}`",
                            el.name,
                            operation.name,
                            self.signature.sorts[el.sort],
                            self.signature.sorts[slot.sort()]
                        )))
                    }
                    _ => {}
                }
            }
        }
        Ok(())
    }

    pub fn monad(&self) -> &Monad {
        &self.monad
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn name(&self, e: Elem) -> &str {
        &self.elements[e].name
    }

    pub fn sort_of(&self, e: Elem) -> SortId {
        self.elements[e].sort
    }

    pub fn elem(&self, name: &str) -> Option<Elem> {
        self.index.get(name).copied()
    }

    /// Looks up an element by name, failing with `UnknownElement`.
    pub fn lookup(&self, name: &str) -> Result<Elem> {
        self.elem(name).ok_or_else(|| Error::UnknownElement(name.to_string()))
    }

    pub fn of_sort(&self, sort: SortId) -> &[Elem] {
        &self.by_sort[sort]
    }

    /// Value of the table at `op(args)`. Panics on malformed arguments.
    pub fn apply(&self, op: OpId, args: &[Arg]) -> Elem {
        debug_assert!(self.check_shape(op, args).is_ok(), "malformed shape");
        let slots = &self.signature.ops[op].slots;
        let mut idx = 0;
        for (slot, arg) in slots.iter().zip(args) {
            let n = self.by_sort[slot.sort()].len();
            idx = match arg {
                Arg::One(e) => idx * n + self.local[*e],
                Arg::Set(v) => idx * ((1 << n) - 1) + v.iter().fold(0usize, |m, e| m | 1 << self.local[*e]) - 1,
            };
        }
        self.tables[op][idx]
    }

    /// Checked variant of [`Algebra::apply`].
    pub fn try_apply(&self, op: OpId, args: &[Arg]) -> Result<Elem> {
        self.check_shape(op, args)?;
        Ok(self.apply(op, args))
    }

    /// Table lookup for operations whose slots are all single.
    pub fn eval(&self, op: OpId, args: &[Elem]) -> Elem {
        let slots = &self.signature.ops[op].slots;
        debug_assert_eq!(slots.len(), args.len());
        let mut idx = 0;
        for (slot, &e) in slots.iter().zip(args) {
            debug_assert!(matches!(slot, Slot::Single(s) if *s == self.elements[e].sort));
            idx = idx * self.by_sort[slot.sort()].len() + self.local[e];
        }
        self.tables[op][idx]
    }

    /// Binary lookup shorthand.
    pub fn mul(&self, op: OpId, x: Elem, y: Elem) -> Elem {
        self.eval(op, &[x, y])
    }

    /// All argument lists of `op` over the carrier in canonical order.
    pub fn shapes(&self, op: OpId) -> Vec<Vec<Arg>> {
        let layout = self.layout(op).expect("layout checked at construction");
        (0..layout.total).map(|i| self.decode(op, &layout, i)).collect()
    }

    /// Every `(shape, value)` pair of the table in canonical order.
    pub fn entries(&self) -> Vec<(Shape, Elem)> {
        let mut out = Vec::new();
        for op in 0..self.signature.ops.len() {
            for (args, value) in self.shapes(op).into_iter().zip(&self.tables[op]) {
                out.push((Shape { op, args }, *value));
            }
        }
        out
    }

    pub fn shape_string(&self, op: OpId, args: &[Arg]) -> String {
        let parts: Vec<String> = args
            .iter()
            .map(|a| match a {
                Arg::One(e) => self.elements.get(*e).map_or_else(|| format!("#{e}"), |x| x.name.clone()),
                Arg::Set(v) => {
                    let names: Vec<&str> = v.iter().map(|e| self.name(*e)).collect();
                    format!("{{{}}}", names.join(","))
                }
            })
            .collect();
        format!("{}({})", self.signature.ops[op].name, parts.join(","))
    }

    /// Restricts the algebra to a closed subset, keeping carrier order.
    /// Returns the subalgebra and the embedding of its elements.
    pub fn restrict(&self, subset: &[Elem]) -> Result<(Algebra, Vec<Elem>)> {
        let mut keep: Vec<Elem> = subset.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let mut back = vec![usize::MAX; self.len()];
        for (i, &e) in keep.iter().enumerate() {
            back[e] = i;
        }
        let elements = keep.iter().map(|&e| (self.elements[e].name.clone(), self.elements[e].sort)).collect();
        let sub = Algebra::from_fn(self.monad.clone(), elements, |op, args| {
            let lifted: Vec<Arg> = args
                .iter()
                .map(|a| match a {
                    Arg::One(e) => Arg::One(keep[*e]),
                    Arg::Set(v) => Arg::Set(v.iter().map(|e| keep[*e]).collect()),
                })
                .collect();
            let value = self.apply(op, &lifted);
            match back[value] {
                usize::MAX => Err(Error::Schema(format!(
                    "subset not closed: {} = {}",
                    self.shape_string(op, &lifted),
                    self.name(value)
                ))),
                v => Ok(v),
            }
        })?;
        Ok((sub, keep))
    }

    /// Same algebra with elements renamed positionally.
    pub fn renamed(&self, names: Vec<String>) -> Result<Algebra> {
        assert_eq!(names.len(), self.len());
        let elements = names.into_iter().zip(&self.elements).map(|(n, e)| (n, e.sort)).collect();
        let mut alg = Algebra::skeleton(self.monad.clone(), elements)?;
        alg.tables = self.tables.clone();
        Ok(alg)
    }

    /// Applies a carrier permutation: element `e` becomes `perm[e]`.
    pub fn permuted(&self, perm: &[Elem]) -> Result<Algebra> {
        assert_eq!(perm.len(), self.len());
        let mut inv = vec![0; perm.len()];
        for (e, &p) in perm.iter().enumerate() {
            inv[p] = e;
        }
        let elements = inv.iter().map(|&e| (self.elements[e].name.clone(), self.elements[e].sort)).collect();
        Algebra::from_fn(self.monad.clone(), elements, |op, args| {
            let orig: Vec<Arg> = args
                .iter()
                .map(|a| match a {
                    Arg::One(e) => Arg::One(inv[*e]),
                    Arg::Set(v) => Arg::set(v.iter().map(|e| inv[*e]).collect()),
                })
                .collect();
            Ok(perm[self.apply(op, &orig)])
        })
    }
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "monad {} with {} elements", self.monad.id(), self.len())?;
        for (sort, members) in self.by_sort.iter().enumerate() {
            let names: Vec<&str> = members.iter().map(|e| self.name(*e)).collect();
            writeln!(f, "  sort {}: {}", self.signature.sorts[sort], names.join(" "))?;
        }
        for (shape, value) in self.entries() {
            writeln!(f, "  {} = {}", self.shape_string(shape.op, &shape.args), self.name(value))?;
        }
        Ok(())
    }
}
