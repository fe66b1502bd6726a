use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("table not total: missing entry for {0}")]
    TableNotTotal(String),
    #[error("conflicting table entries for {0}")]
    ConflictingEntry(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("unknown operation `{0}`")]
    UnknownOp(String),
    #[error("unknown sort `{0}`")]
    UnknownSort(String),
    #[error("unknown letter `{0}`")]
    UnknownLetter(String),
    #[error("duplicate letter `{0}`")]
    DuplicateLetter(String),
    #[error("sort mismatch: {0}")]
    SortMismatch(String),
    #[error("arity mismatch: {0}")]
    ArityMismatch(String),
    #[error("empty set in a set slot of `{0}`")]
    EmptySetSlot(String),
    #[error("set slot over sort `{sort}` has {size} elements; at most {max} are supported")]
    SetSlotTooLarge { sort: String, size: usize, max: usize },
    #[error("signature mismatch: `{0}` vs `{1}`")]
    SignatureMismatch(String, String),
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error("not a congruence: {first} and {second} have the same block pattern but land in different blocks")]
    NotCongruence { first: String, second: String },
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("powerset unsupported for this instance: {0}")]
    PowersetUnsupported(String),
    #[error("table too large: {0}")]
    TableTooLarge(String),
    #[error("powerset too large: {0}")]
    PowersetTooLarge(String),
    #[error("empty word")]
    EmptyWord,
    #[error("unsupported instance: {0}")]
    UnsupportedInstance(String),
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("open term: variable `{0}` is not a letter")]
    OpenTerm(String),
    #[error("letter `{0}` is not allowed here")]
    BadLetter(String),
    #[error("unknown monad `{0}`")]
    UnknownMonad(String),
    #[error("unresolved name `{0}`")]
    UnresolvedName(String),
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("line {line}, column {column}: {msg}")]
    Syntax { line: usize, column: usize, msg: String },
    #[error("invalid document: {0}")]
    Schema(String),
    #[error("{0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
