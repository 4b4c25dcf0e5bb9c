//! Deterministic quadrature on chart ranges (Haar-weighted), on the dual
//! space (with optional damping), and on rotation-angle classes.

mod class;
mod dual;
mod group;

pub use class::{ClassGrid, ClassQuadrature};
pub use dual::{Damping, DualGrid};
pub use group::{group_convolve, integrate_group, GroupGrid, Interpolation};

use crate::error::{Error, Result};

pub(crate) fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::LengthMismatch { expected, got });
    }
    Ok(())
}
