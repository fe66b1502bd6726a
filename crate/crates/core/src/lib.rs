//! Finite algebras for monads presented by finitely many operations, and
//! the language-theoretic constructions built on them: validation,
//! reachability, syntactic minimisation, boolean combinations, images,
//! MSO-style expressions, FO² definability of pointed words, and
//! profinite-style identities over finite semigroups.
//!
//! Instances: finite words ([`words`]), finite and ω-words ([`infty`]),
//! pointed words ([`pointed`]), ranked trees and forests ([`trees`]),
//! and countable chains ([`chains`]).

pub mod algebra;
pub mod chains;
pub mod closure;
pub mod construct;
pub mod error;
pub mod fixtures;
pub mod infty;
pub mod io;
pub mod monad;
pub mod moore;
pub mod morphism;
pub mod mso;
pub mod omega;
pub mod pointed;
pub mod signature;
pub mod term;
pub mod trees;
pub mod validate;
pub mod words;

pub use algebra::{Algebra, Arg, Elem};
pub use error::{Error, Result};
pub use monad::Monad;
pub use morphism::{Alphabet, Language, Letter, Morphism};
pub use signature::{OpId, Signature, Slot, SortId};
pub use term::Term;
