//! Reference solutions from representation theory: heat kernels as
//! character sums, character coefficients of central kernels and exact
//! spectral evolution on U(1).
//!
//! Eigenvalues of `Ĥ = ½ Σ X̂_i X̂_i` in the basis `T_i = −(i/2)σ_i`
//! (SU(2)) and `(T_i)_jk = −ε_ijk` (SO(3)) are `λ_j = j(j+1)/2`; on U(1)
//! they are `n²/2`. Nothing here depends on the transform, the ⋆-algebra or
//! the propagator.

mod evolve;

pub use evolve::{exact_evolve_u1, fourier_coefficients_u1};

use crate::error::{Error, Result};
use crate::lie::{GroupElement, GroupKind, LieGroup};
use crate::quadrature::{ClassGrid, GroupGrid};
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

/// Largest tolerated sum of dropped terms.
pub const TAIL_TOLERANCE: f64 = 1e-8;

/// Human-readable eigenvalue convention, for reports.
pub const EIGENVALUE_RULE: &str = "lambda_j = j(j+1)/2 (SU(2), SO(3)); lambda_n = n^2/2 (U(1)); plus shift";

/// Mode cutoff and spectral shift.
///
/// `max_mode` is `n_max` on U(1) and `2 j_max` on SU(2)/SO(3) (SO(3) uses
/// the even values only).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralTruncation {
    pub max_mode: usize,
    pub shift: f64,
}

impl SpectralTruncation {
    pub fn new(max_mode: usize) -> Self {
        SpectralTruncation { max_mode, shift: 0.0 }
    }

    /// Additive constant in every eigenvalue.
    pub fn with_shift(mut self, shift: f64) -> Self {
        self.shift = shift;
        self
    }

    /// Smallest cutoff whose tail bound is below [`TAIL_TOLERANCE`] at `t`.
    pub fn adequate(group: &LieGroup, t: f64) -> Result<Self> {
        Self::adequate_to(group, t, TAIL_TOLERANCE)
    }

    /// Smallest cutoff whose tail bound is below `tol` at `t`.
    pub fn adequate_to(group: &LieGroup, t: f64, tol: f64) -> Result<Self> {
        check_time(t)?;
        let mut trunc = SpectralTruncation::new(0);
        while trunc.tail_bound(group, t)? > tol {
            trunc.max_mode += 1;
        }
        Ok(trunc)
    }

    pub fn u1_eigenvalue(&self, n: i64) -> f64 {
        0.5 * (n * n) as f64 + self.shift
    }

    pub fn spin_eigenvalue(&self, two_j: usize) -> f64 {
        let j = two_j as f64 / 2.0;
        0.5 * j * (j + 1.0) + self.shift
    }

    /// Values of `2j` kept for the group.
    pub fn spins(&self, group: &LieGroup) -> Result<Vec<usize>> {
        let step = spin_step(group)?;
        Ok((0..=self.max_mode).step_by(step).collect())
    }

    /// Bound on `Σ |dropped term|` of the heat-kernel series at time `t`,
    /// uniform in the group argument.
    pub fn tail_bound(&self, group: &LieGroup, t: f64) -> Result<f64> {
        check_time(t)?;
        let damp = (-t * self.shift).exp();
        match group.kind() {
            GroupKind::U1 => {
                // n² − (N+1)² ≥ 2(N+1)(n − N − 1): geometric majorant
                let m = (self.max_mode + 1) as f64;
                let ratio = (-t * m).exp();
                Ok(damp * (-0.5 * t * m * m).exp() / (1.0 - ratio) / PI)
            }
            GroupKind::SU2 | GroupKind::SO3 => {
                let v = volume(group)?;
                let step = spin_step(group)?;
                let mut two_j = self.max_mode + 1;
                while two_j % step != 0 {
                    two_j += 1;
                }
                let mut sum = 0.0;
                loop {
                    let dim = (two_j + 1) as f64;
                    let j = two_j as f64 / 2.0;
                    let term = dim * dim * (-0.5 * t * j * (j + 1.0)).exp();
                    sum += term;
                    // (2j+1)² e^{−tλ} decreases for j > 2/√t
                    if term == 0.0 || (term < 1e-30 * sum && j * j * t > 4.0) {
                        break;
                    }
                    two_j += step;
                }
                Ok(damp * sum / v)
            }
            other => Err(Error::UnsupportedGroup(format!("spectral oracle on {other}"))),
        }
    }

    fn check(&self, group: &LieGroup, t: f64) -> Result<()> {
        let tail = self.tail_bound(group, t)?;
        if tail > TAIL_TOLERANCE {
            return Err(Error::TruncationInadequate(tail));
        }
        Ok(())
    }
}

fn check_time(t: f64) -> Result<()> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidConfig(format!("oracle time must be positive, got {t}")));
    }
    Ok(())
}

fn spin_step(group: &LieGroup) -> Result<usize> {
    match group.kind() {
        GroupKind::SU2 => Ok(1),
        GroupKind::SO3 => Ok(2),
        other => Err(Error::UnsupportedGroup(format!("spin modes on {other}"))),
    }
}

fn volume(group: &LieGroup) -> Result<f64> {
    group.volume().ok_or_else(|| Error::UnsupportedGroup(format!("volume of {}", group.kind())))
}

/// `(1/2π) Σ_{|n|≤n_max} e^{inθ} e^{−t(n²/2 + shift)}`.
pub fn u1_heat_kernel(theta: f64, t: f64, trunc: &SpectralTruncation) -> Result<f64> {
    trunc.check(&LieGroup::u1(), t)?;
    let mut sum = 0.0;
    for n in (1..=trunc.max_mode as i64).rev() {
        sum += 2.0 * (n as f64 * theta).cos() * (-0.5 * t * (n * n) as f64).exp();
    }
    Ok((1.0 + sum) * (-t * trunc.shift).exp() / (2.0 * PI))
}

/// Winding-image form `Σ_k (2πt)^{−1/2} e^{−(θ+2πk)²/(2t)}` with `|k| ≤ images`.
pub fn u1_heat_kernel_images(theta: f64, t: f64, images: usize) -> Result<f64> {
    check_time(t)?;
    let k_max = images as i64;
    let sum: f64 = (-k_max..=k_max)
        .map(|k| {
            let x = theta + 2.0 * PI * k as f64;
            (-x * x / (2.0 * t)).exp()
        })
        .sum();
    Ok(sum / (2.0 * PI * t).sqrt())
}

/// `χ_j` at class angle `θ`, i.e. `U_{2j}(cos(θ/2))`.
pub fn character(two_j: usize, theta: f64) -> f64 {
    let x = (0.5 * theta).cos();
    let (mut prev, mut cur) = (1.0, 2.0 * x);
    if two_j == 0 {
        return 1.0;
    }
    for _ in 1..two_j {
        let next = 2.0 * x * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `V^{-1} Σ_j (2j+1) χ_j(g) e^{−t(λ_j + shift)}`; SU(2) sums all `j`,
/// SO(3) integer `j`.
pub fn su2_heat_kernel(g: &GroupElement, t: f64, trunc: &SpectralTruncation) -> Result<f64> {
    let group = LieGroup::new(g.kind());
    su2_heat_kernel_at_angle(&group, g.class_angle(), t, trunc)
}

/// [`su2_heat_kernel`] as a function of the class angle.
pub fn su2_heat_kernel_at_angle(group: &LieGroup, theta: f64, t: f64, trunc: &SpectralTruncation) -> Result<f64> {
    trunc.check(group, t)?;
    let v = volume(group)?;
    let sum: f64 = trunc
        .spins(group)?
        .into_iter()
        .rev()
        .map(|two_j| (two_j + 1) as f64 * character(two_j, theta) * (-t * trunc.spin_eigenvalue(two_j)).exp())
        .sum();
    Ok(sum / v)
}

/// `(2πt)^{−d/2} e^{−|x|²/(2t)}`.
pub fn rd_gaussian_kernel(x: &[f64], t: f64) -> f64 {
    let r2: f64 = x.iter().map(|v| v * v).sum();
    (2.0 * PI * t).powf(-(x.len() as f64) / 2.0) * (-r2 / (2.0 * t)).exp()
}

/// Samples of a central function, either on a class grid or on a full
/// group grid.
#[derive(Debug, Clone, Copy)]
pub enum CentralSamples<'a> {
    Class(&'a ClassGrid, &'a [Complex64]),
    Grid(&'a GroupGrid, &'a [Complex64]),
}

/// Relative spread tolerated among grid nodes of equal class angle.
pub const CENTRALITY_TOLERANCE: f64 = 1e-6;

/// `c_j = (1/V) ∫ dg K(g) χ_j(g)` (real part).
pub fn character_coefficient(samples: CentralSamples<'_>, two_j: usize) -> Result<f64> {
    match samples {
        CentralSamples::Class(grid, values) => {
            let group = grid.group();
            check_spin(group, two_j)?;
            let chars: Vec<Complex64> =
                grid.angles().iter().zip(values).map(|(&t, v)| v * character(two_j, t)).collect();
            Ok(grid.integrate(&chars)?.re / volume(group)?)
        }
        CentralSamples::Grid(grid, values) => {
            let group = grid.chart().group();
            check_spin(group, two_j)?;
            crate::quadrature::check_len(grid.len(), values.len())?;
            check_central(grid, values)?;
            let sum: f64 = grid
                .elements()
                .iter()
                .zip(grid.weights())
                .zip(values)
                .map(|((g, w), v)| w * v.re * character(two_j, g.class_angle()))
                .sum();
            Ok(sum / volume(group)?)
        }
    }
}

fn check_spin(group: &LieGroup, two_j: usize) -> Result<()> {
    let step = spin_step(group)?;
    if two_j % step != 0 {
        return Err(Error::OutOfRange(format!("2j = {two_j} on {}", group.kind())));
    }
    Ok(())
}

/// Largest relative spread of `values` over grid nodes sharing a class
/// angle (to 1e-9).
pub fn centrality_defect(grid: &GroupGrid, values: &[Complex64]) -> f64 {
    let mut keyed: Vec<(f64, Complex64)> =
        grid.elements().iter().zip(values).map(|(g, v)| (g.class_angle(), *v)).collect();
    keyed.sort_by(|a, b| a.0.total_cmp(&b.0));
    let scale = values.iter().map(|v| v.norm()).fold(0.0, f64::max).max(1e-300);
    keyed
        .windows(2)
        .filter(|w| (w[1].0 - w[0].0).abs() < 1e-9)
        .map(|w| (w[1].1 - w[0].1).norm() / scale)
        .fold(0.0, f64::max)
}

fn check_central(grid: &GroupGrid, values: &[Complex64]) -> Result<()> {
    if centrality_defect(grid, values) > CENTRALITY_TOLERANCE {
        return Err(Error::NonCentral);
    }
    Ok(())
}
