//! Non-commutative plane waves, the group Fourier transform and the ⋆-product.
//!
//! Dual functions are stored in the coordinate domain: a [`DualFunction`]
//! carries the density `φ̂(Z) = φ(Z^{-1}(Z))` at the nodes of a [`GroupGrid`]
//! and is evaluated at a dual point through
//! `φ̃(X) = Σ_k w_k e^{-i Z_k·X} φ̂(Z_k)`.
//!
//! Ordering: `transform(φ) ⋆ transform(ψ) = transform(ψ ∗ φ)`, with the group
//! convolution `(ψ ∗ φ)(g) = ∫dh ψ(h) φ(h^{-1} g)`.
//!
//! Basis indices are zero-based throughout.

mod pairing;
mod polynomial;
mod star;

pub use crate::quadrature::Interpolation;

pub use pairing::{
    cyclic_check, dual_inner_product, dual_inner_product_literal, pairing_via_omega, pairing_via_omega_literal,
    pointwise_pairing, star_pairing,
};
pub use polynomial::DualPolynomial;
pub use star::{star_commutator_defect, star_monomial, star_monomial_with_step, star_product, MAX_MONOMIAL_ORDER};

use crate::error::{Error, Result};
use crate::lie::{AlgebraVector, Chart, GroupElement};
use crate::quadrature::{check_len, DualGrid, GroupGrid};
use num_complex::Complex64;
use rayon::prelude::*;
use std::sync::Arc;

/// `E_g(X) = exp(i Z(g)·X)`.
pub fn plane_wave(chart: &Chart, g: &GroupElement, x: &AlgebraVector) -> Result<Complex64> {
    chart.plane_wave(g, x)
}

/// Samples of a function on the group at the nodes of a grid.
#[derive(Debug, Clone)]
pub struct GroupFunction {
    grid: Arc<GroupGrid>,
    values: Vec<Complex64>,
}

impl GroupFunction {
    pub fn new(grid: Arc<GroupGrid>, values: Vec<Complex64>) -> Result<Self> {
        check_len(grid.len(), values.len())?;
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidConfig("non-finite sample".into()));
        }
        Ok(GroupFunction { grid, values })
    }

    /// Samples `f(Z_k, g_k)`.
    pub fn from_fn(grid: Arc<GroupGrid>, f: impl Fn(&AlgebraVector, &GroupElement) -> Complex64) -> Result<Self> {
        let values = grid.nodes().iter().zip(grid.elements()).map(|(z, g)| f(z, g)).collect();
        Self::new(grid, values)
    }

    /// Weight-normalized spike at node `k`: integrates to one and acts as
    /// `δ_{g_k}` under the grid quadrature.
    pub fn spike(grid: Arc<GroupGrid>, k: usize) -> Result<Self> {
        if k >= grid.len() {
            return Err(Error::InvalidConfig(format!("node {k} out of range")));
        }
        let mut values = vec![Complex64::new(0.0, 0.0); grid.len()];
        values[k] = Complex64::new(1.0 / grid.weights()[k], 0.0);
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &Arc<GroupGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    /// `∫ dg φ(g)` by the grid quadrature.
    pub fn integral(&self) -> Complex64 {
        self.grid.weights().iter().zip(&self.values).map(|(w, v)| v * *w).sum()
    }

    /// Value at an arbitrary element, interpolated from the nodes.
    pub fn value_at(&self, g: &GroupElement) -> Result<Complex64> {
        let z = self.grid.lookup_coordinates(g).ok_or(Error::CutLocus)?;
        Ok(self.grid.interpolate(&self.values, &z))
    }

    pub fn max_abs_diff(&self, other: &GroupFunction) -> Result<f64> {
        same_grid(&self.grid, &other.grid)?;
        Ok(self.values.iter().zip(&other.values).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
    }
}

/// Group Fourier transform of a [`GroupFunction`], held as its
/// coordinate-domain density.
#[derive(Debug, Clone)]
pub struct DualFunction {
    grid: Arc<GroupGrid>,
    z_density: Vec<Complex64>,
}

impl DualFunction {
    pub fn from_density(grid: Arc<GroupGrid>, z_density: Vec<Complex64>) -> Result<Self> {
        check_len(grid.len(), z_density.len())?;
        if z_density.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidConfig("non-finite density".into()));
        }
        Ok(DualFunction { grid, z_density })
    }

    /// The plane wave `E_g` as a dual function: the transform of the spike at
    /// `g^{-1}`, which must be a grid node.
    pub fn plane_wave(grid: Arc<GroupGrid>, g: &GroupElement) -> Result<Self> {
        let z = grid.lookup_coordinates(&g.inverse()).ok_or(Error::CutLocus)?;
        let k = grid
            .node_index(&z, 1e-9 * grid.spacing())
            .ok_or_else(|| Error::OutOfDomain("inverse element is not a grid node".into()))?;
        Ok(fourier_transform(&GroupFunction::spike(grid, k)?))
    }

    /// The ⋆-unit `1̃ = E_e`.
    pub fn unit(grid: Arc<GroupGrid>) -> Result<Self> {
        let e = grid.chart().group().identity();
        Self::plane_wave(grid, &e)
    }

    pub fn grid(&self) -> &Arc<GroupGrid> {
        &self.grid
    }

    pub fn z_density(&self) -> &[Complex64] {
        &self.z_density
    }

    /// `φ̃(X) = Σ_k w_k e^{-i Z_k·X} φ̂(Z_k)`.
    pub fn evaluate(&self, x: &AlgebraVector) -> Complex64 {
        evaluate_dual(self, x)
    }

    /// `a φ̃ + b ψ̃`.
    pub fn combine(&self, a: Complex64, other: &DualFunction, b: Complex64) -> Result<DualFunction> {
        same_grid(&self.grid, &other.grid)?;
        let z_density = self.z_density.iter().zip(&other.z_density).map(|(x, y)| a * x + b * y).collect();
        Ok(DualFunction { grid: self.grid.clone(), z_density })
    }

    /// Complex conjugate `conj(φ̃)`, the transform of `conj(φ(g^{-1}))`.
    pub fn conj(&self) -> DualFunction {
        let z_density = (0..self.grid.len()).map(|k| self.z_density[mirror(&self.grid, k)].conj()).collect();
        DualFunction { grid: self.grid.clone(), z_density }
    }

    /// Largest `|φ̃(X) - ψ̃(X)|` over the given dual points.
    pub fn max_abs_diff_at(&self, other: &DualFunction, xs: &[AlgebraVector]) -> f64 {
        xs.iter().map(|x| (self.evaluate(x) - other.evaluate(x)).norm()).fold(0.0, f64::max)
    }
}

/// Definitional: the density of the transform is the group-side sample set.
pub fn fourier_transform(f: &GroupFunction) -> DualFunction {
    DualFunction { grid: f.grid.clone(), z_density: f.values.clone() }
}

/// `Σ_k w_k e^{-i Z_k·X} φ̂(Z_k)`.
pub fn evaluate_dual(f: &DualFunction, x: &AlgebraVector) -> Complex64 {
    let grid = &f.grid;
    grid.nodes()
        .iter()
        .zip(grid.weights())
        .zip(&f.z_density)
        .map(|((z, w), v)| v * Complex64::from_polar(*w, -z.dot(x)))
        .sum()
}

/// Exact inverse: the identity on the coordinate-domain density.
pub fn inverse_transform(f: &DualFunction) -> GroupFunction {
    GroupFunction { grid: f.grid.clone(), values: f.z_density.clone() }
}

/// Inverse transform carried out through the dual grid:
/// `φ(g) = ∫ dX/(2π)^d D(X) [E_g ⋆ φ̃](X)`.
///
/// The ⋆-product of plane waves is applied in closed form,
/// `E_g ⋆ E_{h^{-1}} = E_{g h^{-1}}`, and the remaining X-integral is the
/// dual-grid quadrature of `D(X) e^{iZ·X}`.
pub fn inverse_transform_literal(f: &DualFunction, dual: &DualGrid) -> Result<GroupFunction> {
    let grid = &f.grid;
    if dual.dim() != grid.chart().dim() {
        return Err(Error::GridMismatch);
    }
    let weighted: Vec<(Complex64, GroupElement)> = (0..grid.len())
        .filter(|&l| f.z_density[l] != Complex64::new(0.0, 0.0))
        .map(|l| (f.z_density[l] * grid.weights()[l], grid.elements()[l].inverse()))
        .collect();
    let values = grid
        .elements()
        .par_iter()
        .map(|g| {
            weighted
                .iter()
                .filter_map(|(c, h_inv)| {
                    let x = g.multiply(h_inv).ok()?;
                    let z = grid.lookup_coordinates(&x)?;
                    Some(c * dual.plane_wave_integral(z.components()))
                })
                .sum()
        })
        .collect();
    GroupFunction::new(grid.clone(), values)
}

/// `δ_⋆(X) = ∫ dg E_g(X)`, by the grid quadrature.
pub fn star_delta(chart: &Chart, grid: &GroupGrid, x: &AlgebraVector) -> Result<Complex64> {
    if !chart.group().is_compact() {
        return Err(Error::NotRegular);
    }
    if grid.chart() != chart {
        return Err(Error::GridMismatch);
    }
    Ok(grid
        .nodes()
        .iter()
        .zip(grid.weights())
        .map(|(z, w)| Complex64::from_polar(*w, z.dot(x)))
        .sum())
}

pub(crate) fn same_grid(a: &Arc<GroupGrid>, b: &Arc<GroupGrid>) -> Result<()> {
    if Arc::ptr_eq(a, b) || **a == **b {
        Ok(())
    } else {
        Err(Error::GridMismatch)
    }
}

/// Index of the node at `-Z_k` (the inverse element; grids are symmetric).
pub(crate) fn mirror(grid: &GroupGrid, k: usize) -> usize {
    let z = -&grid.nodes()[k];
    grid.node_index(&z, 1e-9 * grid.spacing()).expect("grids are symmetric under Z -> -Z")
}

/// Action on dual points matching conjugation on the group:
/// `Z(h g h^{-1})·X = Z(g)·coadjoint(h, X)`, so that
/// `E_h ⋆ φ̃ ⋆ E_{h^{-1}} = φ̃ ∘ coadjoint(h, ·)`.
pub fn coadjoint(h: &GroupElement, x: &AlgebraVector) -> Result<AlgebraVector> {
    h.inverse().adjoint(x)
}
