//! Finite rings, finite modules and the maps between them.

pub mod decompose;
pub mod hom;
pub mod map;
pub mod module;
pub mod ring;

pub use decompose::{
    decompose_indecomposable, end_submodules, endolength, is_indecomposable,
    is_summand_by_factors, Decomposition, FactorCatalog, Profile, Summand,
};
pub use hom::{
    direct_sum, end_ring, find_isomorphism, hom_set, hom_set_with_generators, is_isomorphic,
    is_summand, power, DirectSum, EndomorphismRing, SummandWitness,
};
pub use map::ModuleMap;
pub use module::FiniteModule;
pub use ring::{dual_numbers_f2, ring_zmod, upper_triangular_f2, FiniteRing, Side, Validation};
