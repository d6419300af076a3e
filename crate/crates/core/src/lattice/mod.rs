//! Exact integer linear algebra: Smith normal form, integral solving, and
//! finitely generated abelian groups presented as cokernels.

mod group;
mod matrix;
mod smith;

pub use group::{cokernel, FgAbelianGroup, GroupElement};
pub use matrix::IntegerMatrix;
pub use smith::{kernel_basis, smith_normal_form, solve_integral, SmithDecomposition};
