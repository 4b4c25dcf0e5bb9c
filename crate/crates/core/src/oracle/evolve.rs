use super::SpectralTruncation;
use crate::error::{Error, Result};
use crate::lie::GroupKind;
use crate::quadrature::GroupGrid;
use crate::scheme::Scheme;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Tail energy above which a mode truncation is rejected.
const TAIL_ENERGY: f64 = 1e-8;

fn check_circle(grid: &GroupGrid) -> Result<()> {
    if grid.chart().group().kind() != GroupKind::U1 {
        return Err(Error::UnsupportedGroup(format!("exact evolution on {}", grid.chart().group().kind())));
    }
    if (grid.half_width() - PI).abs() > 1e-12 {
        return Err(Error::InvalidConfig("U(1) oracle needs a grid covering the whole circle".into()));
    }
    Ok(())
}

/// `c_m = (1/2π) ∫ dθ ψ(θ) e^{−imθ}` for `m = −n_max..=n_max` (index `m + n_max`).
pub fn fourier_coefficients_u1(grid: &GroupGrid, values: &[Complex64], n_max: usize) -> Result<Vec<Complex64>> {
    check_circle(grid)?;
    crate::quadrature::check_len(grid.len(), values.len())?;
    let n = n_max as i64;
    Ok((-n..=n)
        .map(|m| {
            grid.nodes()
                .iter()
                .zip(grid.weights())
                .zip(values)
                .map(|((z, w), v)| v * Complex64::from_polar(*w, -(m as f64) * z[0]))
                .sum::<Complex64>()
                / (2.0 * PI)
        })
        .collect())
}

fn synthesize(coeffs: &[Complex64], theta: f64) -> Complex64 {
    let n = (coeffs.len() / 2) as i64;
    coeffs
        .iter()
        .zip(-n..=n)
        .map(|(c, m)| c * Complex64::from_polar(1.0, m as f64 * theta))
        .sum()
}

/// Exact `e^{∓itĤ}ψ` (or `e^{−tĤ}ψ`) for `Ĥ = −½∂_θ² + shift + V(θ)` in the
/// Fourier basis `|m| ≤ trunc.max_mode`; dense Hermitian diagonalization
/// when a potential is present. Returns samples at the grid nodes.
pub fn exact_evolve_u1(
    grid: &GroupGrid,
    psi: &[Complex64],
    t: f64,
    scheme: Scheme,
    potential: Option<&dyn Fn(f64) -> f64>,
    trunc: &SpectralTruncation,
) -> Result<Vec<Complex64>> {
    check_circle(grid)?;
    crate::quadrature::check_len(grid.len(), psi.len())?;
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidConfig(format!("evolution time {t}")));
    }
    let resolvable = (grid.n_per_dim() - 1) / 2;
    let basis = trunc.max_mode.max(1);
    let input_max = resolvable.min(basis);
    let input = fourier_coefficients_u1(grid, psi, input_max)?;

    // energy the truncated input misses
    let mut missed = 0.0;
    for ((z, w), v) in grid.nodes().iter().zip(grid.weights()).zip(psi) {
        missed += w * (v - synthesize(&input, z[0])).norm_sqr();
    }
    let missed = missed / (2.0 * PI);
    if missed > TAIL_ENERGY {
        return Err(Error::TruncationInadequate(missed));
    }

    let size = 2 * basis + 1;
    let mut c = DVector::from_element(size, Complex64::new(0.0, 0.0));
    for (k, v) in input.iter().enumerate() {
        c[k + basis - input_max] = *v;
    }
    let b = basis as i64;
    let evolved = match potential {
        None => DVector::from_iterator(
            size,
            (-b..=b).zip(c.iter()).map(|(m, v)| v * scheme.factor(trunc.u1_eigenvalue(m), t)),
        ),
        Some(v) => {
            // exact for trigonometric V of degree < 4 basis
            let q = 8 * (basis + 1);
            let samples: Vec<f64> = (0..q).map(|k| v(2.0 * PI * k as f64 / q as f64)).collect();
            let vk = |k: i64| -> Complex64 {
                samples
                    .iter()
                    .enumerate()
                    .map(|(p, s)| Complex64::from_polar(*s, -(k as f64) * 2.0 * PI * p as f64 / q as f64))
                    .sum::<Complex64>()
                    / q as f64
            };
            let fourier: Vec<Complex64> = (-2 * b..=2 * b).map(vk).collect();
            let h = DMatrix::from_fn(size, size, |r, s| {
                let mut e = fourier[(r as i64 - s as i64 + 2 * b) as usize];
                if r == s {
                    e += trunc.u1_eigenvalue(r as i64 - b);
                }
                e
            });
            let h = (&h + h.adjoint()) * Complex64::new(0.5, 0.0);
            let eig = h.symmetric_eigen();
            let q = &eig.eigenvectors;
            let mut rot = q.adjoint() * &c;
            for (k, lambda) in eig.eigenvalues.iter().enumerate() {
                rot[k] *= scheme.factor(*lambda, t);
            }
            let out = q * rot;
            let norm: f64 = out.iter().map(|v| v.norm_sqr()).sum();
            let edge: f64 = out.iter().take(2).chain(out.iter().skip(size - 2)).map(|v| v.norm_sqr()).sum();
            if edge > TAIL_ENERGY * norm.max(1e-300) {
                return Err(Error::TruncationInadequate(edge / norm));
            }
            out
        }
    };
    let coeffs: Vec<Complex64> = evolved.iter().copied().collect();
    Ok(grid.nodes().iter().map(|z| synthesize(&coeffs, z[0])).collect())
}
