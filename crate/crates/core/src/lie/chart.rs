use super::{check_dim, left_derivative, AlgebraVector, GroupElement, GroupKind, LieGroup, DEFAULT_STEP};
use crate::error::{Error, Result};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ChartKind {
    /// Inverse of the exponential map on the principal domain.
    Exponential,
    /// `Z^i(g) = i tr(g σ^i)` (SU(2) and SO(3) only), i.e. `2 sin(θ/2) n`.
    Trace,
}

/// Geometric description of the coordinate range `R ⊆ R^d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ChartRange {
    All,
    /// Open interval `(-r, r)` (d = 1).
    Interval(f64),
    /// Open ball of radius `r`.
    Ball(f64),
}

impl ChartRange {
    pub fn radius(&self) -> Option<f64> {
        match self {
            ChartRange::All => None,
            ChartRange::Interval(r) | ChartRange::Ball(r) => Some(*r),
        }
    }

    pub fn contains(&self, z: &AlgebraVector) -> bool {
        match self.radius() {
            None => z.is_finite(),
            Some(r) => z.norm() < r,
        }
    }
}

/// Coordinate functions `Z^i` on the group minus its non-unital involutive
/// elements, with the Haar density `ω(Z)` normalized to `ω(0) = 1`.
///
/// The trace chart on SU(2) only covers the hemisphere `q0 > 0`
/// (rotation angle `< π`); on SO(3) it covers everything but the
/// angle-π rotations.
#[derive(Debug, Clone, PartialEq)]
pub struct Chart {
    kind: ChartKind,
    group: LieGroup,
    /// 1 for the real charts; other values give deliberately broken charts
    /// used to exercise the validator.
    scale: f64,
}

/// Maximum violations of the chart conditions over a sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub samples: usize,
    /// `max |Z(g^{-1}) + Z(g)|`
    pub inverse_odd: f64,
    /// `max |L_i Z^j(e) - δ_i^j|`
    pub unit_derivative: f64,
    /// `max |Z(h g h^{-1}) - Ad_h Z(g)|`
    pub adjoint_covariance: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl ValidationReport {
    pub fn max_violation(&self) -> f64 {
        self.inverse_odd.max(self.unit_derivative).max(self.adjoint_covariance)
    }
}

impl Chart {
    pub fn new(group: LieGroup, kind: ChartKind) -> Result<Self> {
        if kind == ChartKind::Trace && !matches!(group.kind(), GroupKind::SU2 | GroupKind::SO3) {
            return Err(Error::UnsupportedChart(format!("trace chart on {}", group.kind())));
        }
        Ok(Chart {
            kind,
            group,
            scale: 1.0,
        })
    }

    pub fn exponential(group: LieGroup) -> Self {
        Chart {
            kind: ChartKind::Exponential,
            group,
            scale: 1.0,
        }
    }

    /// A chart whose coordinates are multiplied by `scale`. Only `scale = 1`
    /// satisfies the unit-derivative condition.
    pub fn rescaled(mut self, scale: f64) -> Self {
        self.scale = scale;
        self
    }

    pub fn kind(&self) -> ChartKind {
        self.kind
    }

    pub fn group(&self) -> &LieGroup {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.group.dim()
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Range of the *unscaled* coordinates.
    fn base_range(&self) -> ChartRange {
        match (self.group.kind(), self.kind) {
            (GroupKind::Rd(_), _) => ChartRange::All,
            (GroupKind::U1, _) => ChartRange::Interval(PI),
            (GroupKind::SU2, ChartKind::Exponential) => ChartRange::Ball(2.0 * PI),
            (GroupKind::SO3, ChartKind::Exponential) => ChartRange::Ball(PI),
            (_, ChartKind::Trace) => ChartRange::Ball(2.0),
        }
    }

    pub fn range(&self) -> ChartRange {
        match self.base_range() {
            ChartRange::All => ChartRange::All,
            ChartRange::Interval(r) => ChartRange::Interval(r * self.scale.abs()),
            ChartRange::Ball(r) => ChartRange::Ball(r * self.scale.abs()),
        }
    }

    /// `Z(g)`.
    pub fn coordinates(&self, g: &GroupElement) -> Result<AlgebraVector> {
        if g.kind() != self.group.kind() {
            return Err(Error::GroupMismatch(g.kind().to_string(), self.group.kind().to_string()));
        }
        let z = match self.kind {
            ChartKind::Exponential => g.log()?,
            ChartKind::Trace => {
                let z = g.log()?;
                let theta = z.norm();
                if theta >= PI {
                    return Err(Error::OutOfDomain(format!(
                        "trace chart needs rotation angle < π, got {theta}"
                    )));
                }
                z.scale(trace_factor(theta))
            }
        };
        Ok(z.scale(self.scale))
    }

    /// `Z^{-1}`: the unique element with the given coordinates.
    pub fn point(&self, z: &AlgebraVector) -> Result<GroupElement> {
        check_dim(self.dim(), z)?;
        if !self.range().contains(z) {
            return Err(Error::OutOfRange(format!("|Z| = {}", z.norm())));
        }
        let z = z.scale(1.0 / self.scale);
        match self.kind {
            ChartKind::Exponential => GroupElement::exp(&self.group, &z),
            ChartKind::Trace => {
                let r = z.norm();
                let theta = 2.0 * (0.5 * r).asin();
                let f = if r < 1e-12 { 1.0 } else { theta / r };
                GroupElement::exp(&self.group, &z.scale(f))
            }
        }
    }

    /// Closed-form Haar density `ω(Z)` with `ω(0) = 1` for the unscaled charts.
    pub fn haar_density(&self, z: &AlgebraVector) -> Result<f64> {
        check_dim(self.dim(), z)?;
        if !self.range().contains(z) {
            return Err(Error::OutOfRange(format!("|Z| = {}", z.norm())));
        }
        let d = self.dim() as i32;
        let r = z.norm() / self.scale.abs();
        let base = match (self.group.kind(), self.kind) {
            (GroupKind::Rd(_), _) | (GroupKind::U1, _) => 1.0,
            (_, ChartKind::Exponential) => {
                let x = 0.5 * r;
                let s = if x < 1e-4 { 1.0 - x * x / 6.0 } else { x.sin() / x };
                s * s
            }
            (_, ChartKind::Trace) => 1.0 / (1.0 - 0.25 * r * r).sqrt(),
        };
        Ok(base / self.scale.abs().powi(d))
    }

    /// Non-commutative plane wave `E_g(X) = exp(i Z(g)·X)`.
    pub fn plane_wave(&self, g: &GroupElement, x: &AlgebraVector) -> Result<Complex64> {
        let z = self.coordinates(g)?;
        check_dim(self.dim(), x)?;
        Ok(Complex64::from_polar(1.0, z.dot(x)))
    }

    /// Pseudo-random coordinates inside `fraction` of the chart range.
    pub fn sample_coordinates(&self, rng: &mut impl Rng, fraction: f64) -> AlgebraVector {
        let d = self.dim();
        let radius = self.range().radius().unwrap_or(PI) * fraction;
        loop {
            let v: Vec<f64> = (0..d).map(|_| rng.gen_range(-radius..radius)).collect();
            let v = AlgebraVector::new(v);
            if v.norm() < radius {
                return v;
            }
        }
    }

    /// Check conditions 1–3 and `L_i Z^j(e) = δ_i^j` on `samples`
    /// deterministic pseudo-random points.
    pub fn validate(&self, samples: usize, seed: u64) -> ValidationReport {
        const TOL: f64 = 1e-6;
        let samples = samples.max(1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let group = &self.group;
        let d = self.dim();
        let mut inverse_odd = 0.0f64;
        let mut adjoint = 0.0f64;
        for _ in 0..samples {
            let zg = self.sample_coordinates(&mut rng, 0.95);
            let g = match self.point(&zg) {
                Ok(g) => g,
                Err(_) => {
                    inverse_odd = f64::INFINITY;
                    continue;
                }
            };
            let h_alg = Chart::exponential(group.clone()).sample_coordinates(&mut rng, 0.95);
            let h = GroupElement::exp(group, &h_alg).expect("dimension matches");
            let lhs = self.coordinates(&g.inverse());
            let rhs = self.coordinates(&g);
            match (lhs, &rhs) {
                (Ok(a), Ok(b)) => inverse_odd = inverse_odd.max((&a + b).norm()),
                _ => inverse_odd = f64::INFINITY,
            }
            let conj = g.conjugate_by(&h).and_then(|c| self.coordinates(&c));
            match (conj, rhs) {
                (Ok(c), Ok(b)) => {
                    let ad = h.adjoint(&b).expect("dimension matches");
                    adjoint = adjoint.max((&c - &ad).norm());
                }
                _ => adjoint = f64::INFINITY,
            }
        }
        let e = group.identity();
        let mut unit = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                let f = |g: &GroupElement| {
                    self.coordinates(g)
                        .map(|z| Complex64::new(z[j], 0.0))
                        .unwrap_or(Complex64::new(f64::NAN, 0.0))
                };
                let v = left_derivative(group, &f, &e, i, DEFAULT_STEP);
                let target = if i == j { 1.0 } else { 0.0 };
                let dev = (v - Complex64::new(target, 0.0)).norm();
                unit = unit.max(if dev.is_nan() { f64::INFINITY } else { dev });
            }
        }
        let pass = inverse_odd <= TOL && unit <= TOL && adjoint <= TOL;
        ValidationReport {
            samples,
            inverse_odd,
            unit_derivative: unit,
            adjoint_covariance: adjoint,
            tolerance: TOL,
            pass,
        }
    }
}

/// Ratio `2 sin(θ/2) / θ` taking exponential coordinates to trace coordinates.
fn trace_factor(theta: f64) -> f64 {
    let x = 0.5 * theta;
    if x < 1e-4 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}
