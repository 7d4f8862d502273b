//! Compactly generated t-structures on the derived category of a commutative
//! Noetherian ring, computed over finite posets of primes and over ℤ.

pub mod corpus;
pub mod derived;
pub mod duality;

pub mod error;
pub mod filtration;
pub mod json;

pub mod spectrum;
pub mod suites;

pub mod zmodules;

pub use derived::{Atom, ElementaryModule, FormalObject, TruncationResult};
pub use error::{Error, Result};
pub use filtration::SpFiltration;
pub use spectrum::{FinPoset, PrimeSet, SpecZ, Spectrum, ZCodim, ZPoint, ZSubset};
pub use zmodules::{FgZModule, FreeComplex, IntMatrix, Prime};
