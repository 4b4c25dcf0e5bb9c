use super::check_len;
use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Window applied to dual-space integrals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Damping {
    None,
    /// `exp(-|X|² / (2σ²))`
    Gaussian(f64),
    /// Triangular window `Π_i (1 - |X_i|/Λ)`.
    Fejer,
    /// Product of smooth windows equal to 1 on `|X_i| ≤ Λ/2`, falling to 0
    /// at `Λ` with all derivatives continuous.
    Plateau,
}

fn smooth_step(t: f64) -> f64 {
    let f = |u: f64| if u <= 0.0 { 0.0 } else { (-1.0 / u).exp() };
    let (a, b) = (f(1.0 - t), f(t));
    a / (a + b)
}

impl Damping {
    pub fn multiplier(&self, x: &[f64], cutoff: f64) -> f64 {
        match self {
            Damping::None => 1.0,
            Damping::Gaussian(sigma) => {
                let r2: f64 = x.iter().map(|a| a * a).sum();
                (-r2 / (2.0 * sigma * sigma)).exp()
            }
            Damping::Fejer => x.iter().map(|a| (1.0 - a.abs() / cutoff).max(0.0)).product(),
            Damping::Plateau => x
                .iter()
                .map(|a| {
                    let t = (2.0 * a.abs() / cutoff - 1.0).clamp(0.0, 1.0);
                    smooth_step(t)
                })
                .product(),
        }
    }
}

/// Uniform midpoint grid on `[-Λ, Λ]^d` with weights `ΔX^d/(2π)^d` times the
/// damping multiplier, approximating `∫ dX/(2π)^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct DualGrid {
    dim: usize,
    cutoff: f64,
    n_per_dim: usize,
    damping: Damping,
    spacing: f64,
    /// Flattened node coordinates, `dim` per node.
    coords: Vec<f64>,
    weights: Vec<f64>,
    /// One-dimensional window values at the per-axis node positions.
    window: Vec<f64>,
}

impl DualGrid {
    pub fn new(dim: usize, cutoff: f64, n_per_dim: usize, damping: Damping) -> Result<Self> {
        if !(cutoff > 0.0) || n_per_dim < 2 || dim == 0 {
            return Err(Error::InvalidConfig("dual grid needs Λ > 0, n ≥ 2, d ≥ 1".into()));
        }
        let dx = 2.0 * cutoff / n_per_dim as f64;
        let axis: Vec<f64> = (0..n_per_dim).map(|m| -cutoff + (m as f64 + 0.5) * dx).collect();
        let total = n_per_dim.pow(dim as u32);
        let base = (dx / (2.0 * PI)).powi(dim as i32);
        let mut coords = Vec::with_capacity(total * dim);
        let mut weights = Vec::with_capacity(total);
        let mut x = vec![0.0; dim];
        for flat in 0..total {
            let mut rem = flat;
            for i in (0..dim).rev() {
                x[i] = axis[rem % n_per_dim];
                rem /= n_per_dim;
            }
            coords.extend_from_slice(&x);
            weights.push(base * damping.multiplier(&x, cutoff));
        }
        let window = (0..n_per_dim)
            .map(|m| damping.multiplier(&[-cutoff + (m as f64 + 0.5) * dx], cutoff))
            .collect();
        Ok(DualGrid {
            window,
            dim,
            cutoff,
            n_per_dim,
            damping,
            spacing: dx,
            coords,
            weights,
        })
    }

    /// The grid reciprocal to a uniform group lattice of spacing `h` with `n`
    /// points per dimension: `Λ = π/h`, same point count.
    pub fn reciprocal(dim: usize, group_spacing: f64, n_per_dim: usize, damping: Damping) -> Result<Self> {
        Self::new(dim, PI / group_spacing, n_per_dim, damping)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }
    pub fn n_per_dim(&self) -> usize {
        self.n_per_dim
    }
    pub fn damping(&self) -> Damping {
        self.damping
    }
    pub fn spacing(&self) -> f64 {
        self.spacing
    }
    pub fn len(&self) -> usize {
        self.weights.len()
    }
    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
    pub fn node(&self, k: usize) -> &[f64] {
        &self.coords[k * self.dim..(k + 1) * self.dim]
    }
    pub fn nodes(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks(self.dim)
    }

    /// `Σ_k w_k f(X_k)` over samples.
    pub fn integrate(&self, values: &[Complex64]) -> Result<Complex64> {
        check_len(self.len(), values.len())?;
        Ok(self.weights.iter().zip(values).map(|(w, f)| f * *w).sum())
    }

    /// `∫ dX/(2π)^d D(X) e^{i Z·X}` by this grid's quadrature. The window
    /// factorizes over dimensions, so the sum is a product of 1-d sums.
    pub fn plane_wave_integral(&self, z: &[f64]) -> Complex64 {
        let dx = self.spacing / (2.0 * PI);
        z.iter()
            .map(|&zi| {
                let x0 = -self.cutoff + 0.5 * self.spacing;
                let step = Complex64::from_polar(1.0, zi * self.spacing);
                let mut phase = Complex64::from_polar(1.0, zi * x0);
                let mut acc = Complex64::new(0.0, 0.0);
                for (m, w) in self.window.iter().enumerate() {
                    if m % 64 == 0 {
                        phase = Complex64::from_polar(1.0, zi * (x0 + m as f64 * self.spacing));
                    }
                    acc += phase * *w;
                    phase *= step;
                }
                acc * dx
            })
            .product()
    }

    /// `Σ_k w_k f(X_k)` for a callable.
    pub fn integrate_fn<F: Fn(&[f64]) -> Complex64>(&self, f: F) -> Complex64 {
        self.nodes().zip(&self.weights).map(|(x, w)| f(x) * *w).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_and_weights() {
        let g = DualGrid::new(1, 10.0, 100, Damping::None).unwrap();
        assert!((g.spacing() - 0.2).abs() < 1e-15);
        assert!(g.weights().iter().all(|w| (w - 0.2 / (2.0 * PI)).abs() < 1e-16));
        assert!((g.node(0)[0] + g.node(99)[0]).abs() < 1e-14);
    }

    #[test]
    fn damping_multipliers() {
        assert_eq!(Damping::Gaussian(3.0).multiplier(&[0.0], 1.0), 1.0);
        assert_eq!(Damping::Fejer.multiplier(&[5.0], 5.0), 0.0);
        assert_eq!(Damping::Fejer.multiplier(&[0.0, 0.0], 5.0), 1.0);
        assert_eq!(Damping::Plateau.multiplier(&[2.4], 5.0), 1.0);
        assert_eq!(Damping::Plateau.multiplier(&[5.0], 5.0), 0.0);
        assert!((Damping::Plateau.multiplier(&[3.75], 5.0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn gaussian_and_window_integrals() {
        let g = DualGrid::new(1, 10.0, 200, Damping::None).unwrap();
        let v = g.integrate_fn(|x| Complex64::new((-x[0] * x[0] / 2.0).exp(), 0.0));
        assert!((v.re - 1.0 / (2.0 * PI).sqrt()).abs() < 1e-8);
        let f = DualGrid::new(1, 10.0, 200, Damping::Fejer).unwrap();
        let v = f.integrate_fn(|_| Complex64::new(1.0, 0.0));
        assert!((v.re - 10.0 / (2.0 * PI)).abs() < 1e-12);
        let odd = g.integrate_fn(|x| Complex64::new(x[0].powi(3) * (-x[0].abs()).exp(), 0.0));
        assert!(odd.norm() < 1e-12);
    }

    #[test]
    fn plane_wave_integral_matches_node_sum() {
        let g = DualGrid::new(2, 3.0, 12, Damping::Gaussian(1.5)).unwrap();
        let z = [0.4, -1.1];
        let direct = g.integrate_fn(|x| Complex64::from_polar(1.0, z[0] * x[0] + z[1] * x[1]));
        assert!((direct - g.plane_wave_integral(&z)).norm() < 1e-14);
    }

    #[test]
    fn rejects_invalid() {
        assert!(DualGrid::new(1, 0.0, 10, Damping::None).is_err());
        assert!(DualGrid::new(1, 1.0, 1, Damping::None).is_err());
    }
}
