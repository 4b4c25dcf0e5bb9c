use super::{same_grid, DualFunction};
use crate::error::{Error, Result};
use crate::lie::{AlgebraVector, Chart, GroupElement};
use crate::quadrature::group_convolve;
use num_complex::Complex64;

/// Highest ⋆-monomial order supported by the finite-difference evaluation.
pub const MAX_MONOMIAL_ORDER: usize = 4;

/// `φ̃ ⋆ ψ̃`, realized as the transform of the group convolution `ψ ∗ φ`.
pub fn star_product(phi: &DualFunction, psi: &DualFunction) -> Result<DualFunction> {
    same_grid(phi.grid(), psi.grid())?;
    let z_density = group_convolve(phi.grid(), psi.z_density(), phi.z_density())?;
    DualFunction::from_density(phi.grid().clone(), z_density)
}

/// `X_{i1} ⋆ … ⋆ X_{in}` at `X`: central differences at steps `s` and `s/2`
/// combined by Richardson extrapolation, with `s` suited to the order.
pub fn star_monomial(chart: &Chart, indices: &[usize], x: &AlgebraVector) -> Result<Complex64> {
    let step = if indices.len() <= 2 { 1e-3 } else { 1e-2 };
    let coarse = star_monomial_with_step(chart, indices, x, step)?;
    let fine = star_monomial_with_step(chart, indices, x, step / 2.0)?;
    Ok((fine * 4.0 - coarse) / 3.0)
}

/// `(-i)^n L_{i1}…L_{in} E_g(X)` at `g = e`, by nested central differences in
/// the parameters of `g = e^{s1 T_{i1}} ⋯ e^{sn T_{in}}`.
pub fn star_monomial_with_step(chart: &Chart, indices: &[usize], x: &AlgebraVector, step: f64) -> Result<Complex64> {
    let n = indices.len();
    if n > MAX_MONOMIAL_ORDER {
        return Err(Error::OrderOverflow(n));
    }
    let group = chart.group();
    let d = group.dim();
    if x.dim() != d {
        return Err(Error::LengthMismatch { expected: d, got: x.dim() });
    }
    if let Some(&bad) = indices.iter().find(|&&i| i >= d) {
        return Err(Error::OutOfRange(format!("basis index {bad} for dimension {d}")));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for signs in 0..(1usize << n) {
        let mut g = group.identity();
        let mut sign = 1.0;
        for (slot, &i) in indices.iter().enumerate() {
            let s = if (signs >> slot) & 1 == 1 {
                sign = -sign;
                -step
            } else {
                step
            };
            g = g.multiply(&GroupElement::exp(group, &AlgebraVector::axis(d, i, s))?)?;
        }
        acc += chart.plane_wave(&g, x)? * sign;
    }
    let minus_i_pow = Complex64::new(0.0, -1.0).powi(n as i32);
    Ok(acc * minus_i_pow / (2.0 * step).powi(n as i32))
}

/// `max |(X_i⋆X_j − X_j⋆X_i)(X) + i c_ij^k X_k|` over the samples.
pub fn star_commutator_defect(chart: &Chart, i: usize, j: usize, samples: &[AlgebraVector]) -> Result<f64> {
    let group = chart.group();
    let d = group.dim();
    let mut worst = 0.0f64;
    for x in samples {
        let comm = star_monomial(chart, &[i, j], x)? - star_monomial(chart, &[j, i], x)?;
        let bracket: f64 = (0..d).map(|k| group.structure_constant(i, j, k) * x[k]).sum();
        worst = worst.max((comm + Complex64::new(0.0, bracket)).norm());
    }
    Ok(worst)
}
