//! Operation signatures of the generator shapes of a monad instance.

pub type SortId = usize;
pub type OpId = usize;

/// Argument position of an operation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Slot {
    /// One element of the given sort.
    Single(SortId),
    /// A nonempty set of elements of the given sort.
    Set(SortId),
}

impl Slot {
    pub fn sort(self) -> SortId {
        match self {
            Slot::Single(s) | Slot::Set(s) => s,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Operation {
    pub name: String,
    pub slots: Vec<Slot>,
    pub result: SortId,
}

impl Operation {
    pub fn new(name: &str, slots: Vec<Slot>, result: SortId) -> Self {
        Operation { name: name.to_string(), slots, result }
    }

    pub fn arity(&self) -> usize {
        self.slots.len()
    }

    pub fn has_set_slot(&self) -> bool {
        self.slots.iter().any(|s| matches!(s, Slot::Set(_)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature {
    pub monad: String,
    pub sorts: Vec<String>,
    pub ops: Vec<Operation>,
}

impl Signature {
    pub fn sort_id(&self, name: &str) -> Option<SortId> {
        self.sorts.iter().position(|s| s == name)
    }

    pub fn op_id(&self, name: &str) -> Option<OpId> {
        self.ops.iter().position(|o| o.name == name)
    }

    pub fn op(&self, id: OpId) -> &Operation {
        &self.ops[id]
    }

    pub fn max_arity(&self) -> usize {
        self.ops.iter().map(Operation::arity).max().unwrap_or(0)
    }

    pub(crate) fn check(&self) {
        debug_assert!(!self.sorts.is_empty());
        for (i, op) in self.ops.iter().enumerate() {
            debug_assert!(self.ops[..i].iter().all(|o| o.name != op.name));
            debug_assert!(op.result < self.sorts.len());
            debug_assert!(op.slots.iter().all(|s| s.sort() < self.sorts.len()));
        }
    }
}
