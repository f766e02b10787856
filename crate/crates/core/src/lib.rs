//! Self-similar group actions on rooted trees, built from virtual
//! endomorphisms `f: G ≥ H → G`.

pub mod constructions;
pub mod engine;
pub mod error;
pub mod machines;
pub mod padic;
pub mod verification;

pub use engine::{Decomposition, Generator, Machine, Portrait, StateSet, StateStatus};
pub use error::{Error, Result};
pub use machines::{AddingMachine, DyadicMachine, Vect, ZOmegaMachine};
pub use padic::{DigitWord, Eta, EtaSpec, Padic2};
