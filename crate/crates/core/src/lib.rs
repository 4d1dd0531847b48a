//! Decomposition of free semigroup endomorphisms.
//!
//! Words are `Vec<char>` over an ordered [`Alphabet`]; a [`Morphism`] maps each
//! domain symbol to a non-empty word. The crate decides irreducibility through
//! factor bases, enumerates derivation graphs and factorisations, and
//! classifies incidence matrices.

pub mod cli;
pub mod code;
pub mod error;
pub mod factorbasis;
pub mod factorization;
pub mod incidence;
pub mod morphisms;
pub mod oracle;
pub mod text;
pub mod words;

pub use error::{Error, Result};
pub use factorbasis::{FactorBasis, Limits};
pub use incidence::IncidenceMatrix;
pub use morphisms::Morphism;
pub use words::{Alphabet, Word};
