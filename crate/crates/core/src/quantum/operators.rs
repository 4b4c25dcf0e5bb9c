use super::{mixed_derivative, taylor_step};
use crate::error::{Error, Result};
use crate::lie::{AlgebraVector, Chart, GroupElement};
use crate::noncomm::{star_monomial, DualFunction, DualPolynomial};
use num_complex::Complex64;

/// Real function on phase space, called with chart coordinates `Z` and dual point `X`.
pub type PhaseSpaceFn<'a> = dyn Fn(&AlgebraVector, &AlgebraVector) -> f64 + 'a;

/// Canonical operators of the dual representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CanonicalOperator {
    /// `Ẑ^i = −i∂_X^i`: multiplication of the density by `Z^i`.
    Zhat(usize),
    /// `X̂_i = −iL_i` on the group side. With densities carried in the Z-domain
    /// this is the ⋆-multiplication `X_i ⋆ φ̃`.
    Xhat(usize),
}

const JACOBIAN_STEP: f64 = 1e-5;

/// Applies a canonical operator to a dual function.
pub fn apply_canonical_operator(op: CanonicalOperator, f: &DualFunction) -> Result<DualFunction> {
    let grid = f.grid();
    let chart = grid.chart();
    let d = chart.dim();
    match op {
        CanonicalOperator::Zhat(i) => {
            check_index(i, d)?;
            let density = grid.nodes().iter().zip(f.z_density()).map(|(z, v)| v * z[i]).collect();
            DualFunction::from_density(grid.clone(), density)
        }
        CanonicalOperator::Xhat(i) => {
            check_index(i, d)?;
            let grads = (0..d).map(|j| grid.lattice_gradient(f.z_density(), j)).collect::<Result<Vec<_>>>()?;
            let mut density = Vec::with_capacity(grid.len());
            for (k, g) in grid.elements().iter().enumerate() {
                let lz = left_jacobian_row(chart, g, i)?;
                let mut acc = Complex64::new(0.0, 0.0);
                for j in 0..d {
                    acc += grads[j][k] * lz[j];
                }
                density.push(acc * Complex64::new(0.0, -1.0));
            }
            DualFunction::from_density(grid.clone(), density)
        }
    }
}

fn check_index(i: usize, d: usize) -> Result<()> {
    if i >= d {
        return Err(Error::OutOfRange(format!("basis index {i} for dimension {d}")));
    }
    Ok(())
}

/// `(L_i Z^j)(g)` for all `j`.
fn left_jacobian_row(chart: &Chart, g: &GroupElement, i: usize) -> Result<Vec<f64>> {
    let group = chart.group();
    let d = chart.dim();
    let step = |s: f64| -> Result<AlgebraVector> {
        let h = g.multiply(&GroupElement::exp(group, &AlgebraVector::axis(d, i, s))?)?;
        chart.coordinates(&h)
    };
    let plus = step(JACOBIAN_STEP)?;
    let minus = step(-JACOBIAN_STEP)?;
    Ok((0..d).map(|j| (plus[j] - minus[j]) / (2.0 * JACOBIAN_STEP)).collect())
}

/// `{F, G} = (∂_X^i F)(L_i G) − (∂_X^i G)(L_i F) + c_ij^k X_k (∂_X^i F)(∂_X^j G)`,
/// all derivatives by central differences of size `step`.
pub fn poisson_bracket(
    chart: &Chart,
    f: &PhaseSpaceFn,
    g: &PhaseSpaceFn,
    z: &AlgebraVector,
    x: &AlgebraVector,
    step: f64,
) -> Result<f64> {
    let group = chart.group();
    let d = chart.dim();
    let base = chart.point(z)?;
    let dx = |h: &PhaseSpaceFn, i: usize| {
        let e = AlgebraVector::axis(d, i, step);
        (h(z, &(x + &e)) - h(z, &(x - &e))) / (2.0 * step)
    };
    let left = |h: &PhaseSpaceFn, i: usize| -> Result<f64> {
        let shifted = |s: f64| -> Result<AlgebraVector> {
            chart.coordinates(&base.multiply(&GroupElement::exp(group, &AlgebraVector::axis(d, i, s))?)?)
        };
        Ok((h(&shifted(step)?, x) - h(&shifted(-step)?, x)) / (2.0 * step))
    };
    let dfx: Vec<f64> = (0..d).map(|i| dx(f, i)).collect();
    let dgx: Vec<f64> = (0..d).map(|i| dx(g, i)).collect();
    let mut acc = 0.0;
    for i in 0..d {
        acc += dfx[i] * left(g, i)? - dgx[i] * left(f, i)?;
        for j in 0..d {
            for k in 0..d {
                acc += group.structure_constant(i, j, k) * x[k] * dfx[i] * dgx[j];
            }
        }
    }
    Ok(acc)
}

/// `max |i (X_i⋆X_j − X_j⋆X_i)(X) − {X_i, X_j}(X)|` over the samples.
pub fn correspondence_check(chart: &Chart, i: usize, j: usize, samples: &[AlgebraVector]) -> Result<f64> {
    let d = chart.dim();
    check_index(i, d)?;
    check_index(j, d)?;
    let xi = move |_: &AlgebraVector, x: &AlgebraVector| x[i];
    let xj = move |_: &AlgebraVector, x: &AlgebraVector| x[j];
    let z = AlgebraVector::zeros(d);
    let mut worst = 0.0f64;
    for x in samples {
        let comm = star_monomial(chart, &[i, j], x)? - star_monomial(chart, &[j, i], x)?;
        let pb = poisson_bracket(chart, &xi, &xj, &z, x, 1e-4)?;
        worst = worst.max((comm * Complex64::new(0.0, 1.0) - pb).norm());
    }
    Ok(worst)
}

/// `∫ dX/(2π)^d P(X) χ̃(X) = [P(−i∂_Z)(ω χ̂)](0)`, where `weighted_density`
/// is `Z ↦ ω(Z) χ̂(Z)`. Derivatives by Richardson-combined central
/// differences.
pub fn symbol_pairing(p: &DualPolynomial, weighted_density: &dyn Fn(&AlgebraVector) -> Complex64) -> Complex64 {
    let d = p.dim();
    p.terms()
        .map(|(key, c)| {
            let deriv = mixed_derivative(weighted_density, d, key, taylor_step(key.len()));
            c * Complex64::new(0.0, -1.0).powi(key.len() as i32) * deriv
        })
        .sum()
}
