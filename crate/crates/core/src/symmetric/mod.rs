//! Partitions, symmetric-function bases, Macdonald polynomials and
//! operators, kernel functions, and weight functions.

pub mod kernel;
pub mod macdonald;
pub mod partition;
pub mod poly;

pub use kernel::{
    kernel_elliptic_exp, kernel_elliptic_zsum, kernel_identity_residual_elliptic,
    kernel_identity_residual_trig, kernel_trig_exp, kernel_trig_product, kernel_trig_zsum,
    weight_delta_elliptic, weight_delta_trig,
};
pub use macdonald::{
    apply_macdonald_elliptic, apply_macdonald_trig, inner_product_qt, macdonald_block, z_qt,
    DominanceExtension, MacdonaldBlock,
};
pub use partition::{epsilon_n, Partition};
pub use poly::{degree_basis, monomial_expand, power_sum, power_sum_product, MPoly, PPoly};
