//! Trigonometric and elliptic Ding-Iohara currents, the free-field
//! realization of the Macdonald operator, and the q-series / theta-function
//! identity layer that certifies every relation coefficient-wise at finite
//! truncation.
//!
//! Layers, bottom up:
//!
//! - [`scalars`]: exact-rational and complex-double coefficient fields,
//!   truncated nome series, windowed Laurent series with annulus tags.
//! - [`qspecial`]: q-Pochhammer symbols, theta functions, elliptic gamma,
//!   structure functions, and the identity catalog (Jacobi triple product,
//!   Ramanujan's bilateral sum, theta partial fractions, Riemann relation).
//! - [`symmetric`]: partitions, monomial/power-sum bases, Macdonald
//!   polynomials, the trigonometric and elliptic Macdonald operators, and
//!   kernel functions.
//! - [`fock`]: two-family boson algebras, the graded Fock space, the
//!   bilinear pairing, zero modes, and the Wick contraction engine.
//! - [`vertex`]: the vertex-operator catalog (eta, xi, phi, phi*, phi+-,
//!   E, F), OPE scalar factors, mode extraction, and the elliptic
//!   deformation transformer.
//! - [`harness`]: verification suites for every relation, the relation
//!   registry, reports, and suite configuration.

pub mod error;
pub mod scalars;
pub mod qspecial;
pub mod symmetric;
pub mod fock;
pub mod vertex;
pub mod harness;

pub use error::{Error, Result};
