use super::{slice_values, support_points, PropagatorConfig};
use crate::error::{Error, Result};
use crate::lie::{AlgebraVector, Chart, GroupElement};
use crate::oracle::{self, CentralSamples};
use crate::quadrature::{check_len, group_convolve, ClassGrid, ClassQuadrature, GroupGrid};
use crate::scheme::Scheme;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use std::sync::Arc;

/// Largest grid on which dense two-point kernels are formed.
pub const DENSE_LIMIT: usize = 2048;

/// Sample points of a kernel.
#[derive(Debug, Clone)]
pub enum Support {
    Group(Arc<GroupGrid>),
    /// Central kernels on class-angle shells.
    Class { grid: Arc<ClassGrid>, directions: Arc<ClassQuadrature>, chart: Chart },
}

impl Support {
    pub fn len(&self) -> usize {
        match self {
            Support::Group(g) => g.len(),
            Support::Class { grid, .. } => grid.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn chart(&self) -> &Chart {
        match self {
            Support::Group(g) => g.chart(),
            Support::Class { chart, .. } => chart,
        }
    }

    /// Chart coordinates of the sample points (class shells along the last axis).
    pub fn points(&self) -> Result<Vec<AlgebraVector>> {
        support_points(self)
    }

    pub fn weights(&self) -> &[f64] {
        match self {
            Support::Group(g) => g.weights(),
            Support::Class { grid, .. } => grid.weights(),
        }
    }

    fn same(&self, other: &Support) -> bool {
        match (self, other) {
            (Support::Group(a), Support::Group(b)) => Arc::ptr_eq(a, b) || a == b,
            (Support::Class { grid: a, directions: da, .. }, Support::Class { grid: b, directions: db, .. }) => {
                (Arc::ptr_eq(a, b) || a == b) && da == db
            }
            _ => false,
        }
    }
}

#[derive(Debug, Clone)]
enum Data {
    /// `K(g, h) = f(g) k(g^{-1} h)`.
    Convolution { values: Vec<Complex64>, factor: Option<Vec<Complex64>> },
    /// `K(g_k, g_l)` on a group grid.
    Dense(DMatrix<Complex64>),
}

/// Propagator kernel after `steps` slices of total time `time`.
#[derive(Debug, Clone)]
pub struct Kernel {
    support: Support,
    data: Data,
    scheme: Scheme,
    time: f64,
    steps: usize,
}

impl Kernel {
    pub(crate) fn short_time(config: &PropagatorConfig, support: Support) -> Result<Self> {
        if support.chart() != config.chart() {
            return Err(Error::GridMismatch);
        }
        let points = support.points()?;
        let values = slice_values(config, &points)?;
        let factor = match (&config.hamiltonian.base.potential, &support) {
            (None, _) => None,
            (Some(v), Support::Group(grid)) => {
                Some(grid.elements().iter().map(|g| config.scheme.factor(v.value(g), config.epsilon)).collect())
            }
            (Some(_), Support::Class { .. }) => {
                return Err(Error::InvalidConfig("a potential needs a group grid, not class shells".into()));
            }
        };
        Ok(Kernel {
            support,
            data: Data::Convolution { values, factor },
            scheme: config.scheme,
            time: config.epsilon,
            steps: 1,
        })
    }

    pub fn support(&self) -> &Support {
        &self.support
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.data, Data::Dense(_))
    }

    /// Single-argument samples `k(g)` (`None` for dense kernels).
    pub fn values(&self) -> Option<&[Complex64]> {
        match &self.data {
            Data::Convolution { values, .. } => Some(values),
            Data::Dense(_) => None,
        }
    }

    pub fn potential_factor(&self) -> Option<&[Complex64]> {
        match &self.data {
            Data::Convolution { factor, .. } => factor.as_deref(),
            Data::Dense(_) => None,
        }
    }

    /// `K(e, g)` at the sample points.
    pub fn identity_row(&self) -> Result<Vec<Complex64>> {
        match &self.data {
            Data::Convolution { values, factor } => {
                let f = match (factor, &self.support) {
                    (Some(f), Support::Group(grid)) => f[grid.identity_index()],
                    _ => Complex64::new(1.0, 0.0),
                };
                Ok(values.iter().map(|v| v * f).collect())
            }
            Data::Dense(m) => {
                let Support::Group(grid) = &self.support else { unreachable!("dense kernels live on group grids") };
                Ok(m.row(grid.identity_index()).iter().copied().collect())
            }
        }
    }

    /// `k(g)` of a convolution kernel, interpolated.
    pub fn evaluate(&self, g: &GroupElement) -> Result<Complex64> {
        let Data::Convolution { values, .. } = &self.data else {
            return Err(Error::InvalidConfig("dense kernels have no single-argument form".into()));
        };
        Ok(match &self.support {
            Support::Group(grid) => match grid.lookup_coordinates(g) {
                Some(z) => grid.interpolate(values, &z),
                None => Complex64::new(0.0, 0.0),
            },
            Support::Class { grid, .. } => grid.interpolate(values, g.class_angle()),
        })
    }

    /// `K(g_k, g_l)`.
    pub fn dense_matrix(&self) -> Result<DMatrix<Complex64>> {
        let Support::Group(grid) = &self.support else {
            return Err(Error::InvalidConfig("dense kernels need a group grid".into()));
        };
        match &self.data {
            Data::Dense(m) => Ok(m.clone()),
            Data::Convolution { values, factor } => {
                let n = grid.len();
                if n > DENSE_LIMIT {
                    return Err(Error::InvalidConfig(format!("{n} nodes exceed the dense limit {DENSE_LIMIT}")));
                }
                let elements = grid.elements();
                let rows: Vec<Vec<Complex64>> = (0..n)
                    .into_par_iter()
                    .map(|k| {
                        let inv = elements[k].inverse();
                        let f = factor.as_ref().map_or(Complex64::new(1.0, 0.0), |f| f[k]);
                        elements
                            .iter()
                            .map(|h| {
                                let x = inv.multiply(h).expect("same group");
                                grid.lookup_coordinates(&x).map_or(Complex64::new(0.0, 0.0), |z| f * grid.interpolate(values, &z))
                            })
                            .collect()
                    })
                    .collect();
                Ok(DMatrix::from_fn(n, n, |r, c| rows[r][c]))
            }
        }
    }

    /// `sup |K − other|` over identity rows, or over dense matrices when either is dense.
    pub fn max_abs_diff(&self, other: &Kernel) -> Result<f64> {
        if !self.support.same(&other.support) {
            return Err(Error::GridMismatch);
        }
        if self.is_dense() || other.is_dense() || self.potential_factor().is_some() || other.potential_factor().is_some() {
            let (a, b) = (self.dense_matrix()?, other.dense_matrix()?);
            return Ok((a - b).iter().map(|v| v.norm()).fold(0.0, f64::max));
        }
        let (a, b) = (self.identity_row()?, other.identity_row()?);
        Ok(a.iter().zip(&b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max))
    }

    /// `∫ dg K(e, g)`.
    pub fn integral(&self) -> Result<Complex64> {
        let row = self.identity_row()?;
        Ok(self.support.weights().iter().zip(&row).map(|(w, v)| v * *w).sum())
    }

    /// `(Kψ)(g) = ∫ dh K(g, h) ψ(h)` on a group grid.
    pub fn apply(&self, psi: &[Complex64]) -> Result<Vec<Complex64>> {
        let Support::Group(grid) = &self.support else {
            return Err(Error::InvalidConfig("applying a kernel needs a group grid".into()));
        };
        check_len(grid.len(), psi.len())?;
        match &self.data {
            Data::Convolution { values, factor } => {
                let reflected = reflect(grid, values)?;
                let mut out = group_convolve(grid, psi, &reflected)?;
                if let Some(f) = factor {
                    out.iter_mut().zip(f).for_each(|(o, f)| *o *= f);
                }
                Ok(out)
            }
            Data::Dense(m) => {
                let v = nalgebra::DVector::from_iterator(psi.len(), psi.iter().zip(grid.weights()).map(|(p, w)| p * *w));
                Ok((m * v).iter().copied().collect())
            }
        }
    }

    /// Spectral weight `c_j = (1/V) ∫ dg K(g) χ_j(g)` of a central kernel.
    pub fn character_coefficient(&self, two_j: usize) -> Result<f64> {
        let Data::Convolution { values, factor: None } = &self.data else {
            return Err(Error::NonCentral);
        };
        match &self.support {
            Support::Group(grid) => oracle::character_coefficient(CentralSamples::Grid(grid, values), two_j),
            Support::Class { grid, .. } => oracle::character_coefficient(CentralSamples::Class(grid, values), two_j),
        }
    }

    /// Largest relative spread over conjugate sample points (0 on class shells).
    pub fn centrality_defect(&self) -> Result<f64> {
        match (&self.data, &self.support) {
            (Data::Convolution { factor: None, .. }, Support::Class { .. }) => Ok(0.0),
            (Data::Convolution { values, factor: None }, Support::Group(grid)) => Ok(oracle::centrality_defect(grid, values)),
            _ => Err(Error::NonCentral),
        }
    }

    /// `sup |k(g) − k(g^{-1})|` on a group grid.
    pub fn inversion_defect(&self) -> Result<f64> {
        let (Data::Convolution { values, .. }, Support::Group(grid)) = (&self.data, &self.support) else {
            return Ok(0.0);
        };
        let r = reflect(grid, values)?;
        Ok(values.iter().zip(&r).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
    }
}

/// `k(g^{-1})` at every node, via `Z(g^{-1}) = −Z(g)`.
fn reflect(grid: &GroupGrid, values: &[Complex64]) -> Result<Vec<Complex64>> {
    grid.nodes()
        .iter()
        .map(|z| {
            grid.node_index(&z.scale(-1.0), 1e-9)
                .map(|m| values[m])
                .ok_or_else(|| Error::OutOfDomain("grid is not symmetric under inversion".into()))
        })
        .collect()
}

fn effective_support(v: &[Complex64]) -> usize {
    let max = v.iter().map(|x| x.norm()).fold(0.0, f64::max);
    v.iter().filter(|x| x.norm() > 1e-18 * max).count()
}

/// `(a∘b)(g, g″) = ∫ dh a(g, h) b(h, g″)`.
pub fn compose_kernels(a: &Kernel, b: &Kernel) -> Result<Kernel> {
    if !a.support.same(&b.support) {
        return Err(Error::GridMismatch);
    }
    if a.scheme != b.scheme {
        return Err(Error::InvalidConfig("cannot compose real- and imaginary-time kernels".into()));
    }
    let data = match (&a.data, &b.data, &a.support) {
        (
            Data::Convolution { values: va, factor: None },
            Data::Convolution { values: vb, factor: None },
            support,
        ) => {
            let values = match support {
                Support::Group(grid) => group_convolve(grid, va, vb)?,
                Support::Class { grid, directions, .. } => {
                    // central functions commute; sum over the narrower one
                    if effective_support(va) <= effective_support(vb) {
                        grid.convolve(va, vb, directions)?
                    } else {
                        grid.convolve(vb, va, directions)?
                    }
                }
            };
            Data::Convolution { values, factor: None }
        }
        (_, _, Support::Group(grid)) => {
            let (ma, mb) = (a.dense_matrix()?, b.dense_matrix()?);
            let w = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
                grid.len(),
                grid.weights().iter().map(|w| Complex64::new(*w, 0.0)),
            ));
            Data::Dense(ma * w * mb)
        }
        (_, _, Support::Class { .. }) => return Err(Error::NonCentral),
    };
    Ok(Kernel { support: a.support.clone(), data, scheme: a.scheme, time: a.time + b.time, steps: a.steps + b.steps })
}
