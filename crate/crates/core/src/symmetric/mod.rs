//! Permutations and the group algebra over exact scalars.

mod algebra;
mod permutation;

pub use algebra::{algebra_multiply, GroupAlgebraElement};
pub use permutation::{parse_cycles, Permutation};
