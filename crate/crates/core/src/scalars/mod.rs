//! Coefficient fields and the truncated series rings every other module
//! computes over.

pub mod laurent;
pub mod params;
pub mod pseries;
pub mod scalar;

pub use laurent::{Annulus, Laurent};
pub use params::{exact_point, ParamPoint};
pub use pseries::{NomeSeries, EXACT_ORDER};
pub use scalar::{scalar_close, Scalar, C64, Rat};

use crate::error::Result;

/// Coefficient-wise convolution of two windowed series; errors on variable
/// or annulus mismatch.
pub fn series_mul<S: Scalar>(a: &Laurent<S>, b: &Laurent<S>) -> Result<Laurent<S>> {
    a.mul(b)
}

/// Inverse in the declared annulus; the leading term at the lowest p-order
/// must be invertible.
pub fn series_invert<S: Scalar>(a: &Laurent<S>) -> Result<Laurent<S>> {
    a.invert()
}
