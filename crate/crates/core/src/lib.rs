//! Group Fourier transform for finite-dimensional Lie groups.
//!
//! Non-commutative plane waves `E_g(X) = exp(i Z(g)·X)`, the ⋆-product they
//! induce on functions of the Lie-algebra dual, the unitary transform
//! between `L²(G)` and that ⋆-algebra, the dual operator representation and
//! the time-sliced phase-space propagator, for R^d, U(1), SU(2) and SO(3).

pub mod cli;
pub mod error;
pub mod lie;
pub mod noncomm;
pub mod oracle;
pub mod propagator;
pub mod quadrature;
pub mod quantum;
pub mod scheme;

pub use error::{Error, Result};
pub use scheme::Scheme;
