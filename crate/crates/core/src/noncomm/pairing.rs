use super::{evaluate_dual, mirror, same_grid, star_product, DualFunction};
use crate::error::{Error, Result};
use crate::lie::GroupElement;
use crate::quadrature::DualGrid;
use num_complex::Complex64;
use rayon::prelude::*;

/// `⟨φ̃|ψ̃⟩ = Σ_k w_k conj(φ(Z_k)) ψ(Z_k)`.
pub fn dual_inner_product(phi: &DualFunction, psi: &DualFunction) -> Result<Complex64> {
    same_grid(phi.grid(), psi.grid())?;
    let grid = phi.grid();
    Ok(grid
        .weights()
        .iter()
        .zip(phi.z_density().iter().zip(psi.z_density()))
        .map(|(w, (a, b))| a.conj() * b * *w)
        .sum())
}

/// `∫ dX/(2π)^d D(X) [conj(φ̃) ⋆ ψ̃](X)` on the dual grid, using
/// `conj(E_{g^{-1}}) ⋆ E_{h^{-1}} = E_{g h^{-1}}`.
pub fn dual_inner_product_literal(phi: &DualFunction, psi: &DualFunction, dual: &DualGrid) -> Result<Complex64> {
    same_grid(phi.grid(), psi.grid())?;
    let grid = phi.grid();
    if dual.dim() != grid.chart().dim() {
        return Err(Error::GridMismatch);
    }
    let right: Vec<(Complex64, GroupElement)> = (0..grid.len())
        .filter(|&l| psi.z_density()[l] != Complex64::new(0.0, 0.0))
        .map(|l| (psi.z_density()[l] * grid.weights()[l], grid.elements()[l].inverse()))
        .collect();
    let terms: Vec<Complex64> = (0..grid.len())
        .into_par_iter()
        .map(|k| {
            let a = phi.z_density()[k];
            if a == Complex64::new(0.0, 0.0) {
                return a;
            }
            let g = &grid.elements()[k];
            let inner: Complex64 = right
                .iter()
                .filter_map(|(c, h_inv)| {
                    let z = grid.lookup_coordinates(&g.multiply(h_inv).ok()?)?;
                    Some(c * dual.plane_wave_integral(z.components()))
                })
                .sum();
            a.conj() * grid.weights()[k] * inner
        })
        .collect();
    Ok(terms.into_iter().sum())
}

/// `∫ dX/(2π)^d φ̃ ⋆ ψ̃ = (ψ ∗ φ)(e) = Σ_k w_k ψ(h_k) φ(h_k^{-1})`.
pub fn star_pairing(phi: &DualFunction, psi: &DualFunction) -> Result<Complex64> {
    same_grid(phi.grid(), psi.grid())?;
    let grid = phi.grid();
    Ok((0..grid.len())
        .map(|k| psi.z_density()[k] * phi.z_density()[mirror(grid, k)] * grid.weights()[k])
        .sum())
}

/// `∫ dX/(2π)^d φ̃ · [ω^{-1}(−i∂_X) ψ̃]`: the operator multiplies the density
/// of `ψ̃` by `ω^{-1}(Z)`, and the pointwise X-integral pairs `Z` with `-Z`
/// with measure `ω(Z)ω(-Z) dZ`.
pub fn pairing_via_omega(phi: &DualFunction, psi: &DualFunction) -> Result<Complex64> {
    same_grid(phi.grid(), psi.grid())?;
    let grid = phi.grid();
    let chart = grid.chart();
    let cell = grid.spacing().powi(chart.dim() as i32);
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, z) in grid.nodes().iter().enumerate() {
        let m = mirror(grid, k);
        let om_k = chart.haar_density(z)?;
        let om_m = chart.haar_density(&grid.nodes()[m])?;
        acc += phi.z_density()[k] * (psi.z_density()[m] / om_m) * (om_k * om_m * cell);
    }
    Ok(acc)
}

/// Same pairing with the X-integral done on the dual grid:
/// `Σ_j w_j φ̃(X_j) χ̃(X_j)` where `χ̂ = ψ̂/ω`.
pub fn pairing_via_omega_literal(phi: &DualFunction, psi: &DualFunction, dual: &DualGrid) -> Result<Complex64> {
    same_grid(phi.grid(), psi.grid())?;
    let grid = phi.grid();
    let chart = grid.chart();
    let chi_density = grid
        .nodes()
        .iter()
        .zip(psi.z_density())
        .map(|(z, v)| Ok(v / chart.haar_density(z)?))
        .collect::<Result<Vec<_>>>()?;
    let chi = DualFunction::from_density(grid.clone(), chi_density)?;
    let nodes: Vec<&[f64]> = dual.nodes().collect();
    let terms: Vec<Complex64> = nodes
        .par_iter()
        .zip(dual.weights().par_iter())
        .map(|(x, w)| {
            let x = crate::lie::AlgebraVector::new(x.to_vec());
            evaluate_dual(phi, &x) * evaluate_dual(&chi, &x) * *w
        })
        .collect();
    Ok(terms.into_iter().sum())
}

/// Plain `∫ dX/(2π)^d φ̃ ψ̃` with no `ω^{-1}` correction.
pub fn pointwise_pairing(phi: &DualFunction, psi: &DualFunction) -> Result<Complex64> {
    same_grid(phi.grid(), psi.grid())?;
    let grid = phi.grid();
    let chart = grid.chart();
    let cell = grid.spacing().powi(chart.dim() as i32);
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, z) in grid.nodes().iter().enumerate() {
        let m = mirror(grid, k);
        let om = chart.haar_density(z)? * chart.haar_density(&grid.nodes()[m])?;
        acc += phi.z_density()[k] * psi.z_density()[m] * (om * cell);
    }
    Ok(acc)
}

/// `|∫ f1⋆…⋆fn − ∫ f2⋆…⋆fn⋆f1|` with `∫ = ∫ dX/(2π)^d`.
pub fn cyclic_check(fs: &[DualFunction]) -> Result<f64> {
    match fs.len() {
        0 => return Err(Error::InvalidConfig("cyclic check needs at least one factor".into())),
        1 => return Ok(0.0),
        _ => {}
    }
    for f in &fs[1..] {
        same_grid(fs[0].grid(), f.grid())?;
    }
    let chain = |order: &[&DualFunction]| -> Result<Complex64> {
        let mut acc = order[0].clone();
        for f in &order[1..order.len() - 1] {
            acc = star_product(&acc, f)?;
        }
        star_pairing(&acc, order[order.len() - 1])
    };
    let forward: Vec<&DualFunction> = fs.iter().collect();
    let rotated: Vec<&DualFunction> = fs[1..].iter().chain(std::iter::once(&fs[0])).collect();
    Ok((chain(&forward)? - chain(&rotated)?).norm())
}
