//! Monotone quantities for expanding curvature flows of convex surfaces.
//!
//! Strictly convex surfaces expanding by inverse-curvature speeds such as
//! `1/K` become round: suitable symmetric functions `w(l1, l2)` of the
//! principal curvatures have a non-increasing spatial maximum along the
//! flow, and this forces convergence to spheres after rescaling. This
//! crate makes the whole story computable:
//!
//! * [`poly`] and [`ratfn`]: exact arithmetic for bivariate polynomials
//!   and reduced rational functions over the rationals, including the
//!   change of basis between the curvatures `(l1, l2)` and the pair
//!   `(H, A) = (l1 + l2, l1^2 + l2^2)`.
//! * [`expr`]: a small expression grammar, canonical printing, and the
//!   report formats.
//! * [`evolution`]: exact evolution equations of a quantity at its
//!   critical points, reduced to a zero-order coefficient `C_w` and two
//!   gradient coefficients.
//! * [`positivity`]: Sturm-chain sign certificates on the open positive
//!   quadrant, plus a seeded randomized prefilter.
//! * [`sieve`]: enumeration and filtering of candidate quantities for a
//!   given velocity.
//! * [`flowsim`]: an axisymmetric support-function solver that checks the
//!   same statements numerically.
//!
//! The guide in `book/` walks through each piece with runnable examples.

pub mod evolution;
pub mod expr;
pub mod flowsim;
pub mod poly;
pub mod positivity;
pub mod ratfn;
pub mod sieve;
mod univar;

pub use evolution::{evolve, verify_monotone, EvolutionResult, Verdict};
pub use expr::{parse, print};
pub use poly::{Basis, BivarPoly, PolyError, Var};
pub use positivity::{quadrant_sign, SignCertificate, SignVerdict};
pub use ratfn::RationalFn;
