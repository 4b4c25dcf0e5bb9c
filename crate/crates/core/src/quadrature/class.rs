use super::check_len;
use crate::error::{Error, Result};
use crate::lie::{AlgebraVector, GroupElement, GroupKind, LieGroup};
use gauss_quad::GaussLegendre;
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;
use std::num::NonZeroUsize;

/// Midpoint grid on the rotation-angle parameter `θ ∈ [0, θ_max]` of a
/// group, for central (class) functions. Weights are the Haar mass of each
/// angle shell in exponential coordinates: `16π sin²(θ/2) h` for SU(2) and
/// SO(3), `2h` for U(1), `|S^{d-1}| θ^{d-1} h` for R^d.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassGrid {
    group: LieGroup,
    max_angle: f64,
    spacing: f64,
    angles: Vec<f64>,
    weights: Vec<f64>,
}

/// Quadrature over directions relative to a fixed axis: for 1-d groups the
/// two signs, for 3-d groups Gauss–Legendre in `u = cos(angle to axis)`.
/// Weights sum to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassQuadrature {
    pub cosines: Vec<f64>,
    pub weights: Vec<f64>,
}

impl ClassQuadrature {
    pub fn new(dim: usize, points: usize) -> Result<Self> {
        match dim {
            1 => Ok(ClassQuadrature {
                cosines: vec![-1.0, 1.0],
                weights: vec![0.5, 0.5],
            }),
            3 => {
                let n = NonZeroUsize::new(points.max(2)).expect("nonzero");
                let rule = GaussLegendre::new(n);
                let (mut cosines, mut weights): (Vec<f64>, Vec<f64>) = rule.into_iter().unzip();
                weights.iter_mut().for_each(|w| *w *= 0.5);
                // fixed ordering for reproducible sums
                let mut pairs: Vec<(f64, f64)> = cosines.drain(..).zip(weights.drain(..)).collect();
                pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
                let (cosines, weights) = pairs.into_iter().unzip();
                Ok(ClassQuadrature { cosines, weights })
            }
            _ => Err(Error::UnsupportedGroup(format!("class reduction in dimension {dim}"))),
        }
    }
}

fn sphere_area(d: usize) -> f64 {
    match d {
        1 => 2.0,
        2 => 2.0 * PI,
        3 => 4.0 * PI,
        _ => {
            // |S^{d-1}| = 2 π^{d/2} / Γ(d/2) via the recursion |S^{d+1}| = 2π/d |S^{d-1}|
            let mut area = if d % 2 == 0 { 2.0 * PI } else { 4.0 * PI };
            let mut k = if d % 2 == 0 { 2 } else { 3 };
            while k < d {
                area *= 2.0 * PI / k as f64;
                k += 2;
            }
            area
        }
    }
}

impl ClassGrid {
    /// Class grid covering the whole angle range of a compact group.
    pub fn new(group: &LieGroup, n: usize) -> Result<Self> {
        let max = match group.kind() {
            GroupKind::U1 | GroupKind::SO3 => PI,
            GroupKind::SU2 => 2.0 * PI,
            GroupKind::Rd(_) => {
                return Err(Error::UnsupportedChart("R^d class grid needs an extent".into()));
            }
        };
        Self::with_extent(group, n, max)
    }

    pub fn with_extent(group: &LieGroup, n: usize, max_angle: f64) -> Result<Self> {
        if n < 2 || !(max_angle > 0.0) {
            return Err(Error::InvalidConfig("class grid needs n ≥ 2 and positive extent".into()));
        }
        let h = max_angle / n as f64;
        let angles: Vec<f64> = (0..n).map(|m| (m as f64 + 0.5) * h).collect();
        let weights = angles
            .iter()
            .map(|&t| match group.kind() {
                GroupKind::U1 => 2.0 * h,
                GroupKind::SU2 | GroupKind::SO3 => 16.0 * PI * (0.5 * t).sin().powi(2) * h,
                GroupKind::Rd(d) => sphere_area(d) * t.powi(d as i32 - 1) * h,
            })
            .collect();
        Ok(ClassGrid {
            group: group.clone(),
            max_angle,
            spacing: h,
            angles,
            weights,
        })
    }

    pub fn group(&self) -> &LieGroup {
        &self.group
    }
    pub fn len(&self) -> usize {
        self.angles.len()
    }
    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }
    pub fn angles(&self) -> &[f64] {
        &self.angles
    }
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
    pub fn spacing(&self) -> f64 {
        self.spacing
    }
    pub fn max_angle(&self) -> f64 {
        self.max_angle
    }

    /// Element at class angle `θ` whose axis makes cosine `u` with the last
    /// basis direction (sign of the angle for 1-d groups).
    pub fn element(&self, theta: f64, u: f64) -> GroupElement {
        let d = self.group.dim();
        let z = if d == 1 {
            AlgebraVector::new(vec![theta * u.signum()])
        } else {
            let mut v = vec![0.0; d];
            v[0] = theta * (1.0 - u * u).max(0.0).sqrt();
            v[d - 1] = theta * u;
            AlgebraVector::new(v)
        };
        GroupElement::exp(&self.group, &z).expect("dimension matches")
    }

    /// Four-point Lagrange interpolation in `θ`, mirrored at both ends of
    /// the angle range (central functions are even there). For R^d values
    /// beyond the extent are zero.
    pub fn interpolate(&self, values: &[Complex64], theta: f64) -> Complex64 {
        let n = self.len() as isize;
        let flat = matches!(self.group.kind(), GroupKind::Rd(_));
        if flat && theta >= self.max_angle {
            return Complex64::new(0.0, 0.0);
        }
        let p = theta / self.spacing - 0.5;
        let b = p.floor() as isize;
        let t = p - b as f64;
        let fetch = |k: isize| -> Complex64 {
            let k = if k < 0 { -k - 1 } else { k };
            if k >= n {
                if flat {
                    return Complex64::new(0.0, 0.0);
                }
                return values[(2 * n - 1 - k).clamp(0, n - 1) as usize];
            }
            values[k as usize]
        };
        // nodes at b-1, b, b+1, b+2 ↔ offsets -1, 0, 1, 2
        let l0 = -t * (t - 1.0) * (t - 2.0) / 6.0;
        let l1 = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
        let l2 = -(t + 1.0) * t * (t - 2.0) / 2.0;
        let l3 = (t + 1.0) * t * (t - 1.0) / 6.0;
        fetch(b - 1) * l0 + fetch(b) * l1 + fetch(b + 1) * l2 + fetch(b + 2) * l3
    }

    /// `Σ_m w_m f(θ_m)`.
    pub fn integrate(&self, values: &[Complex64]) -> Result<Complex64> {
        check_len(self.len(), values.len())?;
        Ok(self.weights.iter().zip(values).map(|(w, f)| f * *w).sum())
    }

    /// Convolution of two central functions,
    /// `(a ∗ b)(g) = ∫ dh a(h) b(h^{-1} g)`, evaluated with explicit group
    /// products: the integral over `h` runs over angle shells and over the
    /// direction of `h` relative to the axis of `g`.
    pub fn convolve(&self, a: &[Complex64], b: &[Complex64], directions: &ClassQuadrature) -> Result<Vec<Complex64>> {
        check_len(self.len(), a.len())?;
        check_len(self.len(), b.len())?;
        let amax = a.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let cut = amax * 1e-18;
        let shells: Vec<(Complex64, Vec<GroupElement>)> = (0..self.len())
            .filter(|&r| a[r].norm() > cut)
            .map(|r| {
                let inv = directions
                    .cosines
                    .iter()
                    .map(|&u| self.element(self.angles[r], u).inverse())
                    .collect();
                (a[r] * self.weights[r], inv)
            })
            .collect();
        let out = self
            .angles
            .par_iter()
            .map(|&theta| {
                let g = self.element(theta, 1.0);
                let mut acc = Complex64::new(0.0, 0.0);
                for (wa, invs) in &shells {
                    let mut inner = Complex64::new(0.0, 0.0);
                    for (h_inv, wu) in invs.iter().zip(&directions.weights) {
                        let x = h_inv.multiply(&g).expect("same group");
                        inner += self.interpolate(b, x.class_angle()) * *wu;
                    }
                    acc += wa * inner;
                }
                acc
            })
            .collect();
        Ok(out)
    }
}
