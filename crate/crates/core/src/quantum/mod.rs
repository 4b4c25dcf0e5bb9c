//! Hamiltonian symbols in the dual representation, the `ω^{-1}(−i∂_X)`
//! quantum correction, canonical operators and the classical Poisson bracket.
//!
//! Supported class: `Ĥ = ½ Σ X̂_i X̂_i + V(ĝ)`, with `ħ = 1`.

mod operators;

pub use operators::{
    apply_canonical_operator, correspondence_check, poisson_bracket, symbol_pairing, CanonicalOperator, PhaseSpaceFn,
};

use crate::error::{Error, Result};
use crate::lie::{AlgebraVector, Chart, ChartKind, GroupElement};
use crate::noncomm::{star_monomial, DualPolynomial};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::fmt;
use std::sync::Arc;

/// Largest residual accepted when fitting the kinetic symbol.
pub const FIT_TOLERANCE: f64 = 1e-5;

/// Taylor derivatives of `ω^{-1}` below this size are finite-difference noise.
const TAYLOR_NOISE: f64 = 1e-9;

/// Real potential `V(g)`.
#[derive(Clone)]
pub struct Potential {
    label: String,
    f: Arc<dyn Fn(&GroupElement) -> f64 + Send + Sync>,
}

impl fmt::Debug for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Potential").field("label", &self.label).finish()
    }
}

impl Potential {
    pub fn new(label: impl Into<String>, f: impl Fn(&GroupElement) -> f64 + Send + Sync + 'static) -> Self {
        Potential { label: label.into(), f: Arc::new(f) }
    }

    /// `κ (1 − cos θ)` in the rotation (class) angle.
    pub fn cosine(strength: f64) -> Self {
        Self::new(format!("{strength}*(1-cos)"), move |g| strength * (1.0 - g.class_angle().cos()))
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn value(&self, g: &GroupElement) -> f64 {
        (self.f)(g)
    }
}

/// `H_⋆(g, X) = kinetic(X) + V(g)`.
#[derive(Debug, Clone)]
pub struct HamiltonianSymbol {
    pub chart: Chart,
    pub kinetic: DualPolynomial,
    pub potential: Option<Potential>,
    /// Largest residual of the kinetic fit (0 for hand-built symbols).
    pub fit_residual: f64,
}

impl HamiltonianSymbol {
    pub fn new(chart: Chart, kinetic: DualPolynomial) -> Result<Self> {
        if kinetic.dim() != chart.dim() {
            return Err(Error::LengthMismatch { expected: chart.dim(), got: kinetic.dim() });
        }
        Ok(HamiltonianSymbol { chart, kinetic, potential: None, fit_residual: 0.0 })
    }

    pub fn with_potential(mut self, v: Potential) -> Self {
        self.potential = Some(v);
        self
    }

    pub fn evaluate(&self, g: &GroupElement, x: &AlgebraVector) -> Complex64 {
        self.kinetic.evaluate(x) + self.potential.as_ref().map_or(0.0, |v| v.value(g))
    }
}

/// One monomial of `H_q − H_⋆`, for reports.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrectionTerm {
    pub term: String,
    pub re: f64,
    pub im: f64,
}

/// `H_q = ω^{-1}(−i∂_X) H_⋆`; only the kinetic part changes.
#[derive(Debug, Clone)]
pub struct CorrectedHamiltonian {
    pub base: HamiltonianSymbol,
    pub corrected_kinetic: DualPolynomial,
    pub correction_terms: Vec<CorrectionTerm>,
}

impl CorrectedHamiltonian {
    /// `H_q = H_⋆`, the correction deliberately left out.
    pub fn uncorrected(h: &HamiltonianSymbol) -> Self {
        CorrectedHamiltonian { base: h.clone(), corrected_kinetic: h.kinetic.clone(), correction_terms: Vec::new() }
    }

    /// Constant part of `H_q − H_⋆`.
    pub fn constant_shift(&self) -> f64 {
        (self.corrected_kinetic.coefficient(&[]) - self.base.kinetic.coefficient(&[])).re
    }

    pub fn evaluate(&self, g: &GroupElement, x: &AlgebraVector) -> Complex64 {
        self.corrected_kinetic.evaluate(x) + self.base.potential.as_ref().map_or(0.0, |v| v.value(g))
    }
}

fn quadratic_basis(d: usize) -> Vec<Vec<usize>> {
    let mut basis = vec![vec![]];
    basis.extend((0..d).map(|i| vec![i]));
    for i in 0..d {
        for j in i..d {
            basis.push(vec![i, j]);
        }
    }
    basis
}

/// `H_⋆ = ½ Σ_i X_i ⋆ X_i`, fitted onto `{1, X_i, X_i X_j}` from
/// finite-difference ⋆-monomials at fixed sample points. On abelian groups
/// in exponential coordinates `Z(gh) = Z(g) + Z(h)`, ⋆ is the pointwise
/// product and the symbol is exactly `½|X|²`.
pub fn free_particle_symbol(chart: &Chart) -> Result<HamiltonianSymbol> {
    let d = chart.dim();
    if chart.group().is_abelian() && chart.kind() == ChartKind::Exponential {
        let kinetic = DualPolynomial::norm_squared(d).scale(Complex64::new(0.5, 0.0));
        return HamiltonianSymbol::new(chart.clone(), kinetic);
    }
    let basis = quadratic_basis(d);
    let samples = 4 * basis.len() + 8;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let xs: Vec<AlgebraVector> =
        (0..samples).map(|_| AlgebraVector::new((0..d).map(|_| rng.gen_range(-2.0..2.0)).collect())).collect();
    let mut values = Vec::with_capacity(samples);
    for x in &xs {
        let mut v = Complex64::new(0.0, 0.0);
        for i in 0..d {
            v += star_monomial(chart, &[i, i], x)? * 0.5;
        }
        values.push(v);
    }
    let a = DMatrix::from_fn(samples, basis.len(), |r, c| basis[c].iter().map(|&i| xs[r][i]).product::<f64>());
    let svd = a.clone().svd(true, true);
    let solve = |b: DVector<f64>| -> Result<DVector<f64>> {
        svd.solve(&b, 1e-12).map_err(|e| Error::TaylorFailure(e.to_string()))
    };
    let re = solve(DVector::from_iterator(samples, values.iter().map(|v| v.re)))?;
    let im = solve(DVector::from_iterator(samples, values.iter().map(|v| v.im)))?;
    let fit_re = &a * &re;
    let fit_im = &a * &im;
    let residual = (0..samples)
        .map(|r| (Complex64::new(fit_re[r], fit_im[r]) - values[r]).norm())
        .fold(0.0, f64::max);
    if residual > FIT_TOLERANCE {
        return Err(Error::ChartAnomaly(residual));
    }
    let mut kinetic = DualPolynomial::zero(d);
    for (c, key) in basis.iter().enumerate() {
        kinetic.add_term(key, Complex64::new(re[c], im[c]))?;
    }
    Ok(HamiltonianSymbol { chart: chart.clone(), kinetic, potential: None, fit_residual: residual })
}

/// Non-decreasing index lists of length `1..=max_len` over `d` axes.
pub(crate) fn multi_indices(d: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut frontier: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for key in &frontier {
            let start = key.last().copied().unwrap_or(0);
            for i in start..d {
                let mut k = key.clone();
                k.push(i);
                next.push(k);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// `∂_{i1}…∂_{in} f(0)` by nested central differences at `h` and `h/2`,
/// Richardson-combined.
pub(crate) fn mixed_derivative(f: &dyn Fn(&AlgebraVector) -> Complex64, d: usize, key: &[usize], h: f64) -> Complex64 {
    let raw = |h: f64| {
        let n = key.len();
        let mut acc = Complex64::new(0.0, 0.0);
        for signs in 0..(1usize << n) {
            let mut z = vec![0.0; d];
            let mut sign = 1.0;
            for (slot, &i) in key.iter().enumerate() {
                if (signs >> slot) & 1 == 1 {
                    z[i] -= h;
                    sign = -sign;
                } else {
                    z[i] += h;
                }
            }
            acc += f(&AlgebraVector::new(z)) * sign;
        }
        acc / (2.0 * h).powi(n as i32)
    };
    if key.is_empty() {
        return f(&AlgebraVector::zeros(d));
    }
    (raw(h / 2.0) * 4.0 - raw(h)) / 3.0
}

pub(crate) fn taylor_step(order: usize) -> f64 {
    match order {
        0..=2 => 1e-2,
        _ => 5e-2,
    }
}

fn multiplicity_factorial(key: &[usize]) -> f64 {
    let mut f = 1.0;
    let mut run = 1;
    for w in key.windows(2) {
        if w[0] == w[1] {
            run += 1;
            f *= run as f64;
        } else {
            run = 1;
        }
    }
    f
}

fn monomial_label(key: &[usize]) -> String {
    if key.is_empty() {
        "1".into()
    } else {
        key.iter().map(|i| format!("X{i}")).collect::<Vec<_>>().join("*")
    }
}

/// Applies `ω^{-1}(−i∂_X)` to the kinetic polynomial. `ω^{-1}` is expanded in
/// its Taylor series at `Z = 0`; the series terminates on polynomials.
pub fn quantum_correct(h: &HamiltonianSymbol) -> Result<CorrectedHamiltonian> {
    let chart = &h.chart;
    let d = chart.dim();
    let degree = h.kinetic.degree();
    if degree > 4 {
        return Err(Error::TaylorFailure(format!("kinetic degree {degree} exceeds 4")));
    }
    let inv_omega = |z: &AlgebraVector| -> Complex64 {
        Complex64::new(chart.haar_density(z).map(|w| 1.0 / w).unwrap_or(f64::NAN), 0.0)
    };
    let mut corrected = h.kinetic.clone();
    for key in multi_indices(d, degree) {
        let deriv = mixed_derivative(&inv_omega, d, &key, taylor_step(key.len()));
        if !deriv.is_finite() {
            return Err(Error::TaylorFailure(format!("derivative {key:?} of 1/ω is not finite")));
        }
        if deriv.norm() < TAYLOR_NOISE {
            continue;
        }
        let coeff = deriv / multiplicity_factorial(&key) * Complex64::new(0.0, -1.0).powi(key.len() as i32);
        let mut term = h.kinetic.clone();
        for &i in &key {
            term = term.derivative(i);
        }
        for (k, c) in term.terms() {
            if c != Complex64::new(0.0, 0.0) {
                corrected.add_term(k, c * coeff)?;
            }
        }
    }
    let correction_terms = corrected
        .terms()
        .map(|(k, c)| (k, c - h.kinetic.coefficient(k)))
        .filter(|(_, c)| *c != Complex64::new(0.0, 0.0))
        .map(|(k, c)| CorrectionTerm { term: monomial_label(k), re: c.re, im: c.im })
        .collect();
    Ok(CorrectedHamiltonian { base: h.clone(), corrected_kinetic: corrected, correction_terms })
}
