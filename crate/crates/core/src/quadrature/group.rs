use super::check_len;
use crate::error::{Error, Result};
use crate::lie::{AlgebraVector, Chart, ChartKind, ChartRange, GroupElement, GroupKind};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// How off-node values are reconstructed from node samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Interpolation {
    #[default]
    Multilinear,
    /// Tensor sinc interpolation (trigonometric on U(1)). Accurate for
    /// smooth samples that are negligible near the edge of the range.
    Spectral,
}

/// Midpoint tensor grid on a chart range, masked to the open ball for
/// SU(2)/SO(3). Weights are `ω(Z_k) h^d`.
///
/// Nodes sit at `lower + (k + ½)h` in every dimension. With an odd number of
/// points per dimension the lattice contains the identity and, on U(1), is
/// closed under group multiplication of nodes.
#[derive(Debug, Clone)]
pub struct GroupGrid {
    chart: Chart,
    interpolation: Interpolation,
    n_per_dim: usize,
    half_width: f64,
    spacing: f64,
    nodes: Vec<AlgebraVector>,
    elements: Vec<GroupElement>,
    weights: Vec<f64>,
    /// Dense lattice → node index (`usize::MAX` for masked-out cells).
    lattice: Vec<usize>,
}

impl PartialEq for GroupGrid {
    fn eq(&self, other: &Self) -> bool {
        self.chart == other.chart && self.n_per_dim == other.n_per_dim && self.half_width == other.half_width
    }
}

impl GroupGrid {
    /// Grid covering the whole chart range of a compact group.
    pub fn new(chart: &Chart, n_per_dim: usize) -> Result<Self> {
        match chart.range() {
            ChartRange::All => Err(Error::UnsupportedChart(
                "unbounded range needs an explicit extent".into(),
            )),
            r => Self::with_extent(chart, n_per_dim, r.radius().expect("bounded")),
        }
    }

    /// Grid on the box `[-half_width, half_width]^d`, intersected with the
    /// chart range.
    pub fn with_extent(chart: &Chart, n_per_dim: usize, half_width: f64) -> Result<Self> {
        if n_per_dim < 2 {
            return Err(Error::InvalidConfig("n_per_dim must be at least 2".into()));
        }
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(Error::InvalidConfig("grid extent must be positive".into()));
        }
        let d = chart.dim();
        let h = 2.0 * half_width / n_per_dim as f64;
        let total = n_per_dim.pow(d as u32);
        let range = chart.range();
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        let mut elements = Vec::new();
        let mut lattice = vec![usize::MAX; total];
        let mut idx = vec![0usize; d];
        for (flat, slot) in lattice.iter_mut().enumerate() {
            let mut rem = flat;
            for i in (0..d).rev() {
                idx[i] = rem % n_per_dim;
                rem /= n_per_dim;
            }
            let z = AlgebraVector::new(idx.iter().map(|&k| -half_width + (k as f64 + 0.5) * h).collect());
            if !range.contains(&z) {
                continue;
            }
            let w = chart.haar_density(&z)? * h.powi(d as i32);
            elements.push(chart.point(&z)?);
            *slot = nodes.len();
            nodes.push(z);
            weights.push(w);
        }
        if nodes.is_empty() {
            return Err(Error::InvalidConfig("grid has no interior nodes".into()));
        }
        Ok(GroupGrid {
            chart: chart.clone(),
            interpolation: Interpolation::default(),
            n_per_dim,
            half_width,
            spacing: h,
            nodes,
            elements,
            weights,
            lattice,
        })
    }

    pub fn with_interpolation(mut self, interpolation: Interpolation) -> Self {
        self.interpolation = interpolation;
        self
    }

    pub fn interpolation(&self) -> Interpolation {
        self.interpolation
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }
    pub fn len(&self) -> usize {
        self.nodes.len()
    }
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
    pub fn n_per_dim(&self) -> usize {
        self.n_per_dim
    }
    pub fn spacing(&self) -> f64 {
        self.spacing
    }
    pub fn half_width(&self) -> f64 {
        self.half_width
    }
    pub fn nodes(&self) -> &[AlgebraVector] {
        &self.nodes
    }
    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Index of the node at `z`, if `z` is within `tol` of one.
    pub fn node_index(&self, z: &AlgebraVector, tol: f64) -> Option<usize> {
        let d = self.chart.dim();
        let mut flat = 0usize;
        for i in 0..d {
            let p = (z[i] + self.half_width) / self.spacing - 0.5;
            let k = p.round();
            if (p - k).abs() * self.spacing > tol || k < 0.0 || k >= self.n_per_dim as f64 {
                return None;
            }
            flat = flat * self.n_per_dim + k as usize;
        }
        let n = self.lattice[flat];
        (n != usize::MAX).then_some(n)
    }

    /// Index of the node nearest to the identity.
    pub fn identity_index(&self) -> usize {
        let mut best = 0;
        for (k, z) in self.nodes.iter().enumerate() {
            if z.norm() < self.nodes[best].norm() {
                best = k;
            }
        }
        best
    }

    fn is_periodic(&self) -> bool {
        self.chart.group().kind() == GroupKind::U1
            && self.chart.scale() == 1.0
            && (self.half_width - std::f64::consts::PI).abs() < 1e-15
    }

    /// Chart coordinates used to look up `g` on the grid; boundary elements
    /// of the exponential chart map to one of their equivalent coordinates.
    pub fn lookup_coordinates(&self, g: &GroupElement) -> Option<AlgebraVector> {
        match self.chart.kind() {
            ChartKind::Exponential => Some(g.log_unchecked().scale(self.chart.scale())),
            ChartKind::Trace => self.chart.coordinates(g).ok(),
        }
    }

    /// `∂v/∂Z^i` at every node: central differences (one-sided next to a
    /// missing neighbour) for multilinear grids, exact differentiation of the
    /// interpolant for spectral ones.
    pub fn lattice_gradient(&self, values: &[Complex64], i: usize) -> Result<Vec<Complex64>> {
        check_len(self.len(), values.len())?;
        let d = self.chart.dim();
        if i >= d {
            return Err(Error::OutOfRange(format!("axis {i} for dimension {d}")));
        }
        let n = self.n_per_dim;
        let stride = n.pow((d - 1 - i) as u32);
        let periodic = self.is_periodic();
        let h = self.spacing;
        let zero = Complex64::new(0.0, 0.0);
        let out = (0..self.len())
            .map(|k| {
                let z = &self.nodes[k];
                let pos = ((z[i] + self.half_width) / h - 0.5).round() as isize;
                let line_start = self.flat_index(z) - pos as usize * stride;
                let at = |m: isize| -> Option<Complex64> {
                    let m = if periodic { m.rem_euclid(n as isize) } else { m };
                    if m < 0 || m >= n as isize {
                        return None;
                    }
                    let node = self.lattice[line_start + m as usize * stride];
                    (node != usize::MAX).then(|| values[node])
                };
                match self.interpolation {
                    Interpolation::Multilinear => match (at(pos - 1), at(pos + 1)) {
                        (Some(a), Some(b)) => (b - a) / (2.0 * h),
                        (None, Some(b)) => (b - values[k]) / h,
                        (Some(a), None) => (values[k] - a) / h,
                        (None, None) => zero,
                    },
                    Interpolation::Spectral => {
                        let mut acc = zero;
                        for m in 0..n as isize {
                            let p = m - pos;
                            if p == 0 {
                                continue;
                            }
                            let Some(v) = at(m) else { continue };
                            let sign = if p % 2 == 0 { 1.0 } else { -1.0 };
                            let x = p as f64 * h / 2.0;
                            let w = if !periodic {
                                -sign / (p as f64 * h)
                            } else if n % 2 == 1 {
                                -sign / (2.0 * x.sin())
                            } else {
                                -sign / (2.0 * x.tan())
                            };
                            acc += v * w;
                        }
                        acc
                    }
                }
            })
            .collect();
        Ok(out)
    }

    fn flat_index(&self, z: &AlgebraVector) -> usize {
        let mut flat = 0usize;
        for i in 0..self.chart.dim() {
            let k = ((z[i] + self.half_width) / self.spacing - 0.5).round() as usize;
            flat = flat * self.n_per_dim + k;
        }
        flat
    }

    /// Interpolated value of node samples at chart coordinates `z`.
    pub fn interpolate(&self, values: &[Complex64], z: &AlgebraVector) -> Complex64 {
        match self.interpolation {
            Interpolation::Multilinear => self.interpolate_multilinear(values, z),
            Interpolation::Spectral => self.interpolate_spectral(values, z),
        }
    }

    fn interpolate_spectral(&self, values: &[Complex64], z: &AlgebraVector) -> Complex64 {
        let d = self.chart.dim();
        let n = self.n_per_dim;
        let periodic = self.is_periodic();
        let factors: Vec<Vec<f64>> = (0..d)
            .map(|i| {
                (0..n)
                    .map(|k| {
                        let delta = z[i] - (-self.half_width + (k as f64 + 0.5) * self.spacing);
                        if periodic {
                            dirichlet(delta, n)
                        } else {
                            sinc(delta / self.spacing)
                        }
                    })
                    .collect()
            })
            .collect();
        let mut acc = Complex64::new(0.0, 0.0);
        for (flat, &node) in self.lattice.iter().enumerate() {
            if node == usize::MAX {
                continue;
            }
            let mut rem = flat;
            let mut w = 1.0;
            for f in factors.iter().rev() {
                w *= f[rem % n];
                rem /= n;
            }
            acc += values[node] * w;
        }
        acc
    }

    /// Multilinear interpolation of node samples at chart coordinates `z`.
    ///
    /// U(1) wraps periodically. On masked grids, corners outside the mask are
    /// dropped and the remaining weights renormalized; for R^d they count as
    /// zero (compactly supported samples).
    fn interpolate_multilinear(&self, values: &[Complex64], z: &AlgebraVector) -> Complex64 {
        let d = self.chart.dim();
        let n = self.n_per_dim as isize;
        let periodic = self.is_periodic();
        let compact = self.chart.group().is_compact();
        let mut base = [0isize; 8];
        let mut frac = [0.0f64; 8];
        for i in 0..d {
            let p = (z[i] + self.half_width) / self.spacing - 0.5;
            let b = p.floor();
            base[i] = b as isize;
            frac[i] = p - b;
        }
        let mut acc = Complex64::new(0.0, 0.0);
        let mut wsum = 0.0;
        for corner in 0..(1usize << d) {
            let mut w = 1.0;
            let mut flat = 0isize;
            let mut inside = true;
            for i in 0..d {
                let bit = ((corner >> i) & 1) as isize;
                let mut k = base[i] + bit;
                w *= if bit == 1 { frac[i] } else { 1.0 - frac[i] };
                if periodic {
                    k = k.rem_euclid(n);
                } else if k < 0 || k >= n {
                    inside = false;
                }
                flat = flat * n + k;
            }
            if w == 0.0 {
                continue;
            }
            if !inside {
                continue;
            }
            let node = self.lattice[flat as usize];
            if node == usize::MAX {
                continue;
            }
            acc += values[node] * w;
            wsum += w;
        }
        if compact && wsum > 0.0 {
            return acc / wsum;
        }
        if compact {
            // every corner masked: pull the point slightly inward and retry
            let r = z.norm();
            let limit = self.chart.range().radius().unwrap_or(r);
            if r > 0.0 {
                return self.interpolate_multilinear(values, &z.scale((limit - self.spacing).max(0.0) / r));
            }
        }
        acc
    }
}

fn sinc(u: f64) -> f64 {
    if u.abs() < 1e-12 {
        1.0
    } else {
        (PI * u).sin() / (PI * u)
    }
}

/// Periodic cardinal function of `n` equispaced nodes on the circle.
fn dirichlet(delta: f64, n: usize) -> f64 {
    let half = delta / 2.0;
    if half.sin().abs() < 1e-12 {
        let m = (delta / (2.0 * PI)).round() as i64;
        return if n % 2 == 1 || m % 2 == 0 { 1.0 } else { -1.0 };
    }
    let num = (n as f64 * half).sin();
    if n % 2 == 1 {
        num / (n as f64 * half.sin())
    } else {
        num / (n as f64 * half.tan())
    }
}

/// `Σ_k w_k f(Z_k)`.
pub fn integrate_group(grid: &GroupGrid, values: &[Complex64]) -> Result<Complex64> {
    check_len(grid.len(), values.len())?;
    Ok(grid.weights.iter().zip(values).map(|(w, f)| f * *w).sum())
}

/// `c(g) = ∫dh a(h) b(h^{-1} g)` at every node `g`.
///
/// The sparser factor is summed over its nodes and the other one is
/// interpolated: `Σ_k w_k a(h_k) b(h_k^{-1} g)`, or `Σ_k w_k a(g h_k^{-1}) b(h_k)`
/// when `b` has fewer nonzero samples.
pub fn group_convolve(grid: &GroupGrid, a: &[Complex64], b: &[Complex64]) -> Result<Vec<Complex64>> {
    check_len(grid.len(), a.len())?;
    check_len(grid.len(), b.len())?;
    let nnz = |v: &[Complex64]| v.iter().filter(|x| **x != Complex64::new(0.0, 0.0)).count();
    if nnz(b) < nnz(a) {
        let active: Vec<(Complex64, GroupElement)> = (0..grid.len())
            .filter(|&k| b[k] != Complex64::new(0.0, 0.0))
            .map(|k| (b[k] * grid.weights[k], grid.elements[k].inverse()))
            .collect();
        let out = grid
            .elements
            .par_iter()
            .map(|g| {
                let mut acc = Complex64::new(0.0, 0.0);
                for (wb, h_inv) in &active {
                    let x = g.multiply(h_inv).expect("same group");
                    if let Some(z) = grid.lookup_coordinates(&x) {
                        acc += wb * grid.interpolate(a, &z);
                    }
                }
                acc
            })
            .collect();
        return Ok(out);
    }
    let active: Vec<(usize, Complex64, GroupElement)> = (0..grid.len())
        .filter(|&k| a[k] != Complex64::new(0.0, 0.0))
        .map(|k| (k, a[k] * grid.weights[k], grid.elements[k].inverse()))
        .collect();
    let out = grid
        .elements
        .par_iter()
        .map(|g| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (_, wa, h_inv) in &active {
                let x = h_inv.multiply(g).expect("same group");
                if let Some(z) = grid.lookup_coordinates(&x) {
                    acc += wa * grid.interpolate(b, &z);
                }
            }
            acc
        })
        .collect();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::LieGroup;
    use std::f64::consts::PI;

    #[test]
    fn u1_grid_layout() {
        let g = GroupGrid::new(&Chart::exponential(LieGroup::u1()), 8).unwrap();
        assert_eq!(g.len(), 8);
        assert!(g.weights().iter().all(|w| (w - 2.0 * PI / 8.0).abs() < 1e-15));
        assert!((g.total_weight() - 2.0 * PI).abs() < 1e-12);
        assert!(g.nodes().iter().all(|z| z[0].abs() < PI));
    }

    #[test]
    fn su2_grid_counts_lattice_points_in_ball() {
        let chart = Chart::exponential(LieGroup::su2());
        let g = GroupGrid::new(&chart, 16).unwrap();
        let h = 4.0 * PI / 16.0;
        let mut count = 0;
        for i in 0..16 {
            for j in 0..16 {
                for k in 0..16 {
                    let p = |m: usize| -2.0 * PI + (m as f64 + 0.5) * h;
                    if (p(i).powi(2) + p(j).powi(2) + p(k).powi(2)).sqrt() < 2.0 * PI {
                        count += 1;
                    }
                }
            }
        }
        assert_eq!(g.len(), count);
    }

    #[test]
    fn rejects_small_grids_and_unbounded_ranges() {
        assert!(GroupGrid::new(&Chart::exponential(LieGroup::u1()), 1).is_err());
        assert!(matches!(
            GroupGrid::new(&Chart::exponential(LieGroup::rd(1)), 10),
            Err(Error::UnsupportedChart(_))
        ));
    }

    #[test]
    fn interpolation_reproduces_linear_functions() {
        let chart = Chart::exponential(LieGroup::rd(2));
        let g = GroupGrid::with_extent(&chart, 11, 2.0).unwrap();
        let vals: Vec<Complex64> = g.nodes().iter().map(|z| Complex64::new(1.0 + z[0] - 2.0 * z[1], 0.0)).collect();
        let z = AlgebraVector::from([0.31, -0.77]);
        let v = g.interpolate(&vals, &z);
        assert!((v.re - (1.0 + 0.31 + 1.54)).abs() < 1e-12);
    }

    #[test]
    fn spectral_interpolation_is_exact_for_trig_polynomials() {
        let chart = Chart::exponential(LieGroup::u1());
        for n in [15, 16] {
            let g = GroupGrid::new(&chart, n).unwrap().with_interpolation(Interpolation::Spectral);
            let f = |t: f64| Complex64::new((3.0 * t).cos(), (2.0 * t).sin() - 0.5);
            let v: Vec<_> = g.nodes().iter().map(|z| f(z[0])).collect();
            for t in [-3.1, -0.77, 0.0, 0.3, 2.9] {
                let z = AlgebraVector::from([t]);
                assert!((g.interpolate(&v, &z) - f(t)).norm() < 1e-12, "n={n} t={t}");
            }
        }
    }

    #[test]
    fn lattice_gradients() {
        let chart = Chart::exponential(LieGroup::u1());
        for (interp, n, tol) in [(Interpolation::Spectral, 31, 1e-10), (Interpolation::Spectral, 32, 1e-10), (Interpolation::Multilinear, 201, 3e-3)] {
            let g = GroupGrid::new(&chart, n).unwrap().with_interpolation(interp);
            let v: Vec<_> = g.nodes().iter().map(|z| Complex64::new((2.0 * z[0]).sin(), z[0].cos())).collect();
            let dv = g.lattice_gradient(&v, 0).unwrap();
            for (z, d) in g.nodes().iter().zip(&dv) {
                let exact = Complex64::new(2.0 * (2.0 * z[0]).cos(), -z[0].sin());
                assert!((d - exact).norm() < tol, "{interp:?} {n}");
            }
        }
        let su2 = Chart::exponential(LieGroup::su2());
        let g = GroupGrid::new(&su2, 24).unwrap().with_interpolation(Interpolation::Spectral);
        let v: Vec<_> = g.nodes().iter().map(|z| Complex64::new((-z.dot(z)).exp(), 0.0)).collect();
        let dv = g.lattice_gradient(&v, 1).unwrap();
        for (z, d) in g.nodes().iter().zip(&dv) {
            let exact = -2.0 * z[1] * (-z.dot(z)).exp();
            assert!((d.re - exact).abs() < 1e-3);
        }
    }
}
