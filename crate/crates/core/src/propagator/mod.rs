//! Time-sliced propagator: a short-time kernel built from the corrected
//! Hamiltonian `H_q`, composed `N` times by group convolution.
//!
//! Kernels of `g`-independent Hamiltonians are stored as functions of the
//! single argument `g_k^{-1} g_{k+1}`. A potential multiplies each slice by
//! `e^{∓iεV(g_k)}`; composing such slices gives a dense two-point kernel.

mod kernel;
mod residual;

pub use kernel::{compose_kernels, Kernel, Support};
pub use residual::schrodinger_residual;

use crate::error::{Error, Result};
use crate::lie::{AlgebraVector, Chart};
use crate::noncomm::{DualPolynomial, Interpolation};
use crate::quadrature::{ClassGrid, ClassQuadrature, DualGrid, GroupGrid, Damping};
use crate::quantum::CorrectedHamiltonian;
use crate::scheme::Scheme;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;
use std::sync::Arc;

/// Default real-time regulator constant: dual damping `σ = c/ε`.
pub const DEFAULT_REGULATOR: f64 = 0.3;

/// Relative size below which kernel samples are stored as exact zeros.
const FLUSH: f64 = 1e-17;

/// Where kernels are sampled.
#[derive(Debug, Clone, PartialEq)]
pub enum GridSpec {
    /// Full chart grid; `half_width` is required on R^d.
    Group { n_per_dim: usize, half_width: Option<f64>, interpolation: Interpolation },
    /// Class-angle shells (central kernels only, free particle) with
    /// `directions` Gauss–Legendre points for the convolution.
    Class { shells: usize, directions: usize, max_angle: Option<f64> },
}

impl GridSpec {
    pub fn group(n_per_dim: usize) -> Self {
        GridSpec::Group { n_per_dim, half_width: None, interpolation: Interpolation::Multilinear }
    }

    pub fn class(shells: usize, directions: usize) -> Self {
        GridSpec::Class { shells, directions, max_angle: None }
    }

    pub fn build(&self, chart: &Chart) -> Result<Support> {
        match self {
            GridSpec::Group { n_per_dim, half_width, interpolation } => {
                let grid = match half_width {
                    Some(w) => GroupGrid::with_extent(chart, *n_per_dim, *w)?,
                    None => GroupGrid::new(chart, *n_per_dim)?,
                };
                Ok(Support::Group(Arc::new(grid.with_interpolation(*interpolation))))
            }
            GridSpec::Class { shells, directions, max_angle } => {
                let group = chart.group();
                let grid = match max_angle {
                    Some(m) => ClassGrid::with_extent(group, *shells, *m)?,
                    None => ClassGrid::new(group, *shells)?,
                };
                let dirs = ClassQuadrature::new(group.dim(), *directions)?;
                Ok(Support::Class { grid: Arc::new(grid), directions: Arc::new(dirs), chart: chart.clone() })
            }
        }
    }
}

/// How the X-integral of a slice is done.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum KernelPath {
    /// Closed-form Gaussian/Fresnel integral; needs `H_q = a|X|² + b`.
    Analytic,
    /// Uniform dual-grid quadrature on `[-Λ, Λ]^d` (contour rotated by
    /// `−π/4` in real time).
    Quadrature { cutoff: f64, nodes_per_dim: usize },
}

#[derive(Debug, Clone)]
pub struct PropagatorConfig {
    pub hamiltonian: CorrectedHamiltonian,
    pub epsilon: f64,
    pub steps: usize,
    pub scheme: Scheme,
    pub grid: GridSpec,
    pub path: KernelPath,
    /// Real-time regulator `c` (dual damping `σ = c/ε`); `None` keeps the
    /// bare Fresnel phase.
    pub regulator: Option<f64>,
    /// Number of `ε`-halvings run by [`propagate`] after the base level.
    pub ladder: usize,
}

impl PropagatorConfig {
    /// Analytic path, no ladder; real time on compact groups gets the
    /// default regulator.
    pub fn new(hamiltonian: CorrectedHamiltonian, epsilon: f64, steps: usize, scheme: Scheme, grid: GridSpec) -> Self {
        let compact = hamiltonian.base.chart.group().is_compact();
        let regulator = (scheme == Scheme::RealTime && compact).then_some(DEFAULT_REGULATOR);
        PropagatorConfig { hamiltonian, epsilon, steps, scheme, grid, path: KernelPath::Analytic, regulator, ladder: 0 }
    }

    pub fn with_path(mut self, path: KernelPath) -> Self {
        self.path = path;
        self
    }

    pub fn with_regulator(mut self, c: Option<f64>) -> Self {
        self.regulator = c;
        self
    }

    pub fn with_ladder(mut self, levels: usize) -> Self {
        self.ladder = levels;
        self
    }

    pub fn chart(&self) -> &Chart {
        &self.hamiltonian.base.chart
    }

    pub fn total_time(&self) -> f64 {
        self.epsilon * self.steps as f64
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(Error::InvalidConfig(format!("ε must be positive, got {}", self.epsilon)));
        }
        if self.steps == 0 {
            return Err(Error::InvalidConfig("N must be at least 1".into()));
        }
        if let Some(c) = self.regulator {
            if !(c > 0.0 && c.is_finite()) {
                return Err(Error::InvalidConfig(format!("regulator must be positive, got {c}")));
            }
        }
        if let KernelPath::Quadrature { cutoff, nodes_per_dim } = self.path {
            if !(cutoff > 0.0) || nodes_per_dim < 2 {
                return Err(Error::InvalidConfig("quadrature path needs Λ > 0 and ≥ 2 nodes".into()));
            }
        }
        Ok(())
    }

    /// Same configuration at `ε / 2^level`, `N · 2^level`.
    pub fn refined(&self, level: u32) -> Self {
        let mut c = self.clone();
        c.epsilon /= f64::from(1u32 << level);
        c.steps *= 1usize << level;
        c
    }
}

/// `(a, b)` when `p = a|X|² + b` with `a > 0` (to 1e-8).
pub fn quadratic_form(p: &DualPolynomial) -> Option<(f64, f64)> {
    let d = p.dim();
    let a = p.coefficient(&[0, 0]);
    if !(a.re > 0.0) || a.im.abs() > 1e-8 {
        return None;
    }
    for (key, c) in p.terms() {
        let ok = match key.len() {
            0 => c.im.abs() <= 1e-8,
            2 if key[0] == key[1] => (c - a).norm() <= 1e-8,
            _ => c.norm() <= 1e-8,
        };
        if !ok {
            return None;
        }
    }
    if (0..d).any(|i| (p.coefficient(&[i, i]) - a).norm() > 1e-8) {
        return None;
    }
    Some((a.re, p.coefficient(&[]).re))
}

fn evaluate_complex(p: &DualPolynomial, x: &[Complex64]) -> Complex64 {
    p.terms().map(|(key, c)| key.iter().fold(c, |acc, &i| acc * x[i])).sum()
}

/// Default quadrature used when the analytic path does not apply.
fn fallback_path(epsilon: f64, d: usize) -> KernelPath {
    KernelPath::Quadrature { cutoff: (40.0 / epsilon).sqrt(), nodes_per_dim: if d == 1 { 1024 } else { 48 } }
}

/// Chart coordinates of the support points.
pub(crate) fn support_points(support: &Support) -> Result<Vec<AlgebraVector>> {
    match support {
        Support::Group(grid) => Ok(grid.nodes().to_vec()),
        Support::Class { grid, chart, .. } => {
            grid.angles().iter().map(|&t| chart.coordinates(&grid.element(t, 1.0))).collect()
        }
    }
}

/// `K_ε(Z) = ∫ dX/(2π)^d e^{iZ·X} e^{∓iεH_q(X)}` at the given points.
pub(crate) fn slice_values(config: &PropagatorConfig, points: &[AlgebraVector]) -> Result<Vec<Complex64>> {
    let kinetic = &config.hamiltonian.corrected_kinetic;
    let d = config.chart().dim();
    let eps = config.epsilon;
    let path = match (config.path, quadratic_form(kinetic)) {
        (KernelPath::Analytic, Some(_)) => KernelPath::Analytic,
        (KernelPath::Analytic, None) => fallback_path(eps, d),
        (p, _) => p,
    };
    let mut values = match path {
        KernelPath::Analytic => {
            let (a, b) = quadratic_form(kinetic).expect("checked");
            // variance of the Gaussian in Z
            let s = match config.scheme {
                Scheme::ImaginaryTime => Complex64::new(2.0 * a * eps, 0.0),
                Scheme::RealTime => {
                    let reg = config.regulator.map_or(0.0, |c| (eps / c).powi(2));
                    Complex64::new(reg, 2.0 * a * eps)
                }
            };
            let norm = (s * 2.0 * PI).powf(-(d as f64) / 2.0) * config.scheme.factor(b, eps);
            points.iter().map(|z| norm * (-z.dot(z) / (s * 2.0)).exp()).collect()
        }
        KernelPath::Quadrature { cutoff, nodes_per_dim } => {
            quadrature_values(config, points, cutoff, nodes_per_dim)?
        }
    };
    let max = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    for v in values.iter_mut() {
        if v.norm() < FLUSH * max {
            *v = Complex64::new(0.0, 0.0);
        }
    }
    Ok(values)
}

fn quadrature_values(
    config: &PropagatorConfig,
    points: &[AlgebraVector],
    cutoff: f64,
    nodes_per_dim: usize,
) -> Result<Vec<Complex64>> {
    let d = config.chart().dim();
    let eps = config.epsilon;
    let dual = DualGrid::new(d, cutoff, nodes_per_dim, Damping::None)?;
    let rotation = match config.scheme {
        Scheme::ImaginaryTime => Complex64::new(1.0, 0.0),
        Scheme::RealTime => Complex64::from_polar(1.0, -PI / 4.0),
    };
    let jacobian = rotation.powi(d as i32);
    let sigma2 = config.regulator.filter(|_| config.scheme == Scheme::RealTime).map(|c| (c / eps).powi(2));
    let h = &config.hamiltonian.corrected_kinetic;
    // X-dependent factor at every dual node
    let factors: Vec<(Vec<Complex64>, Complex64)> = dual
        .nodes()
        .zip(dual.weights())
        .map(|(s, w)| {
            let x: Vec<Complex64> = s.iter().map(|v| rotation * v).collect();
            let e = evaluate_complex(h, &x);
            let mut f = match config.scheme {
                Scheme::ImaginaryTime => (-e * eps).exp(),
                Scheme::RealTime => (Complex64::new(0.0, -eps) * e).exp(),
            };
            if let Some(s2) = sigma2 {
                let x2: Complex64 = x.iter().map(|v| v * v).sum();
                f *= (-x2 / (2.0 * s2)).exp();
            }
            (x, f * *w * jacobian)
        })
        .collect();
    let peak = factors.iter().map(|(_, f)| f.norm()).fold(0.0, f64::max);
    let edge = dual
        .nodes()
        .zip(&factors)
        .filter(|(s, _)| s.iter().any(|v| v.abs() > cutoff - dual.spacing()))
        .map(|(_, (_, f))| f.norm())
        .fold(0.0, f64::max);
    if !(peak.is_finite()) || edge > 1e-10 * peak {
        return Err(Error::QuadratureFailure(format!("integrand at the cutoff is {:.3e} of its peak", edge / peak)));
    }
    Ok(points
        .par_iter()
        .map(|z| {
            factors
                .iter()
                .map(|(x, f)| {
                    let phase: Complex64 = x.iter().zip(z.iter()).map(|(xv, zv)| xv * zv).sum();
                    f * (Complex64::new(0.0, 1.0) * phase).exp()
                })
                .sum()
        })
        .collect())
}

/// Builds `K_ε` on the configured support.
pub fn short_time_kernel(config: &PropagatorConfig) -> Result<Kernel> {
    config.validate()?;
    let support = config.grid.build(config.chart())?;
    Kernel::short_time(config, support)
}

/// One refinement level of a [`propagate`] run.
#[derive(Debug, Clone, Serialize)]
pub struct LadderEntry {
    pub epsilon: f64,
    pub steps: usize,
    /// `sup |K − K_previous|` against the previous (coarser) level.
    pub change: Option<f64>,
}

/// Result of [`propagate`]: the kernel at `T = εN` and every ladder level.
#[derive(Debug, Clone)]
pub struct Propagation {
    pub kernel: Kernel,
    pub levels: Vec<Kernel>,
    pub ladder: Vec<LadderEntry>,
}

impl Propagation {
    /// `log2` of successive ladder changes (needs at least two refinements).
    pub fn observed_orders(&self) -> Vec<f64> {
        let changes: Vec<f64> = self.ladder.iter().filter_map(|e| e.change).collect();
        changes.windows(2).map(|w| (w[0] / w[1]).log2()).collect()
    }
}

/// Composes `N` copies of the slice kernel built on `support`.
pub(crate) fn compose_steps(config: &PropagatorConfig, support: &Support) -> Result<Kernel> {
    let slice = Kernel::short_time(config, support.clone())?;
    let mut k = slice.clone();
    for _ in 1..config.steps {
        k = compose_kernels(&k, &slice)?;
    }
    Ok(k)
}

/// `K_ε` composed `N` times, plus the `ε`-halving ladder.
pub fn propagate(config: &PropagatorConfig) -> Result<Propagation> {
    config.validate()?;
    let support = config.grid.build(config.chart())?;
    let mut levels = Vec::with_capacity(config.ladder + 1);
    let mut ladder = Vec::with_capacity(config.ladder + 1);
    for level in 0..=config.ladder as u32 {
        let c = config.refined(level);
        let k = compose_steps(&c, &support)?;
        let change = match levels.last() {
            Some(prev) => Some(k.max_abs_diff(prev)?),
            None => None,
        };
        ladder.push(LadderEntry { epsilon: c.epsilon, steps: c.steps, change });
        levels.push(k);
    }
    Ok(Propagation { kernel: levels[0].clone(), levels, ladder })
}
