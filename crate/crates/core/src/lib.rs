//! Exact pp-formula calculus, elementary duality and character duality over
//! finite rings and finite modules.
//!
//! Every module here is finite, so every module is pure-injective, pure
//! embeddings split, and the infinitary closures (`Prod`, `Add`, direct
//! limits) are decided through their finite shadows: summands of finite
//! direct sums, compared with Krull–Schmidt factor profiles.

pub mod algebra;
pub mod defcat;
pub mod duality;
pub mod elemset;
pub mod error;
pub mod io;
pub mod lattice;
pub mod pp;
pub mod purity;
pub mod report;
pub mod suite;

pub use algebra::*;
pub use duality::*;
pub use elemset::ElementSet;
pub use error::{Error, Result};
pub use pp::*;
pub use defcat::{
    definable_witness, dual_defcat, in_defcat, in_limclosure_fp, in_prod_of, thm51_check,
    verify_almost_dual_pair, AlmostDualPairWitness, DefinableWitness, PPPair, Shadow,
};
pub use lattice::{
    construct_dual_element, lattice_antiiso_check, max_ideal_avoiding, pp_lattice, pp_type_of,
    ziegler_irreducible, LatticeIdeal, PPLattice, PPType,
};
pub use purity::{dualize_sequence, is_pure, ShortExactSequence};
pub use report::{Record, Report, Verdict};
