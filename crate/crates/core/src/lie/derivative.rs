use super::{AlgebraVector, Chart, GroupElement, LieGroup};
use crate::error::Result;
use nalgebra::DMatrix;
use num_complex::Complex64;

/// Default central-difference step.
pub const DEFAULT_STEP: f64 = 1e-3;

/// Central-difference estimate of `L_i f(g) = d/ds f(g e^{s T_i})|_{s=0}`.
pub fn left_derivative<F>(group: &LieGroup, f: &F, g: &GroupElement, i: usize, step: f64) -> Complex64
where
    F: Fn(&GroupElement) -> Complex64 + ?Sized,
{
    let d = group.dim();
    let plus = GroupElement::exp(group, &AlgebraVector::axis(d, i, step)).expect("valid index");
    let minus = plus.inverse();
    let fp = f(&g.multiply(&plus).expect("same group"));
    let fm = f(&g.multiply(&minus).expect("same group"));
    (fp - fm) / (2.0 * step)
}

/// Haar density from the determinant of the left-trivialized chart Jacobian,
/// `|det(g(Z)^{-1} ∂_j g(Z))|`, by central differences.
pub fn haar_density_numeric(chart: &Chart, z: &AlgebraVector, step: f64) -> Result<f64> {
    let d = chart.dim();
    let g = chart.point(z)?;
    let g_inv = g.inverse();
    let mut jac = DMatrix::<f64>::zeros(d, d);
    for j in 0..d {
        let mut zp = z.components().to_vec();
        let mut zm = zp.clone();
        zp[j] += step;
        zm[j] -= step;
        let gp = chart.point(&AlgebraVector::new(zp))?;
        let gm = chart.point(&AlgebraVector::new(zm))?;
        let up = g_inv.multiply(&gp)?.log_unchecked();
        let um = g_inv.multiply(&gm)?.log_unchecked();
        for i in 0..d {
            jac[(i, j)] = (up[i] - um[i]) / (2.0 * step);
        }
    }
    Ok(jac.determinant().abs())
}
