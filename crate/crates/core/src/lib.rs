//! Syntactic complexity of ideal languages: transformations, transition
//! semigroups, DFAs, ideal classification, witness families, the
//! injections used in the upper-bound arguments, and a verification
//! harness over small automata.

pub mod dfa;
pub mod exec;
pub mod harness;
pub mod ideals;
pub mod injection;
pub mod semigroup;
pub mod transform;
pub mod witness;

pub use dfa::{Dfa, DfaError, StatePreorder};
pub use exec::Mode;
pub use semigroup::{SemigroupError, TransformationSemigroup};
pub use transform::{Transformation, TransformError};
pub use ideals::{classify, ClassificationReport};
pub use witness::IdealClass;
