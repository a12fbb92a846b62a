//! Formal concept analysis toolkit.
//!
//! Contexts are read from Burmeister `.cxt` files ([`cxt`]), their concepts
//! enumerated with NextClosure ([`context`], [`lectic`]), arranged into a
//! concept lattice ([`lattice`]) and drawn ([`layout`]). Implication bases
//! and interactive attribute exploration live in [`implications`] and
//! [`exploration`]. The [`service`] module serves all of it over HTTP and
//! [`cli`] backs the `fcakit` binary.

pub mod bitset;
pub mod cli;
pub mod context;
pub mod cxt;
pub mod exploration;
pub mod implications;
pub mod lattice;
pub mod layout;
pub mod lectic;
pub mod samples;
pub mod service;

pub use bitset::BitSet;
pub use context::{AttributeSet, ContextError, ContextTable, Dimension, FormalContext, ObjectSet};
pub use cxt::{parse_cxt, write_cxt};
pub use implications::{close_under, holds, stem_base, support, Implication, ImplicationReport};
pub use lattice::{fundamental_theorem_check, Concept, ConceptLattice, FiniteOrder, LatticeError};
