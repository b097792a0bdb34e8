//! Pp formulas as coefficient matrices, their elementary duals and lattice
//! connectives, and exact solution sets.

pub mod formula;
pub mod scan;
pub mod solve;

pub use formula::{coefficient_text, pp_dual, pp_meet, pp_sum, PPFormula};
pub use scan::{scan_definable, Definable, DEFAULT_BOUND, MAX_BOUND};
pub use solve::{pp_equivalent, pp_leq, pp_product_check, pp_solve, Subgroup};
