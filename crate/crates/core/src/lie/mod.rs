//! Concrete Lie groups: R^d, U(1), SU(2) and SO(3).
//!
//! Algebra bases are normalized so that `[T_i, T_j] = c_ij^k T_k` with
//! `c_ij^k = ε_ijk` for SU(2) and SO(3); the basis is orthonormal for the
//! Euclidean pairing of components, which is also the pairing `Z·X`
//! between the algebra and its dual.
//!
//! * SU(2): `T_i = -(i/2) σ_i`, so `exp(θ n·T) = cos(θ/2) - i sin(θ/2) n·σ`.
//! * SO(3): `(T_i)_jk = -ε_ijk`, so `exp(Z·T) v` rotates `v` about `Z` by `|Z|`.
//! * U(1): `T = i`, elements stored as an angle in `(-π, π]`.
//! * R^d: translations, embedded as unipotent `(d+1)×(d+1)` matrices.

mod algebra;
mod chart;
mod derivative;
mod element;

pub use algebra::AlgebraVector;
pub use chart::{Chart, ChartKind, ChartRange, ValidationReport};
pub use derivative::{haar_density_numeric, left_derivative, DEFAULT_STEP};
pub use element::GroupElement;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Which concrete group a model describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupKind {
    Rd(usize),
    U1,
    SU2,
    SO3,
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupKind::Rd(d) => write!(f, "R^{d}"),
            GroupKind::U1 => write!(f, "U(1)"),
            GroupKind::SU2 => write!(f, "SU(2)"),
            GroupKind::SO3 => write!(f, "SO(3)"),
        }
    }
}

/// A concrete Lie group together with its algebra basis and structure constants.
#[derive(Debug, Clone, PartialEq)]
pub struct LieGroup {
    kind: GroupKind,
    /// `c[i][j][k]`, flattened as `i*d*d + j*d + k`.
    structure_constants: Vec<f64>,
}

fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

impl LieGroup {
    pub fn new(kind: GroupKind) -> Self {
        let d = match kind {
            GroupKind::Rd(d) => d,
            GroupKind::U1 => 1,
            GroupKind::SU2 | GroupKind::SO3 => 3,
        };
        let mut c = vec![0.0; d * d * d];
        if matches!(kind, GroupKind::SU2 | GroupKind::SO3) {
            for i in 0..3 {
                for j in 0..3 {
                    for k in 0..3 {
                        c[i * 9 + j * 3 + k] = levi_civita(i, j, k);
                    }
                }
            }
        }
        LieGroup {
            kind,
            structure_constants: c,
        }
    }

    pub fn rd(d: usize) -> Self {
        Self::new(GroupKind::Rd(d))
    }
    pub fn u1() -> Self {
        Self::new(GroupKind::U1)
    }
    pub fn su2() -> Self {
        Self::new(GroupKind::SU2)
    }
    pub fn so3() -> Self {
        Self::new(GroupKind::SO3)
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        match self.kind {
            GroupKind::Rd(d) => d,
            GroupKind::U1 => 1,
            GroupKind::SU2 | GroupKind::SO3 => 3,
        }
    }

    pub fn is_compact(&self) -> bool {
        !matches!(self.kind, GroupKind::Rd(_))
    }

    pub fn is_abelian(&self) -> bool {
        matches!(self.kind, GroupKind::Rd(_) | GroupKind::U1)
    }

    /// `c_ij^k`.
    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> f64 {
        let d = self.dim();
        self.structure_constants[i * d * d + j * d + k]
    }

    /// Total Haar volume with the `ω(0) = 1` normalization; `None` for R^d.
    pub fn volume(&self) -> Option<f64> {
        use std::f64::consts::PI;
        match self.kind {
            GroupKind::Rd(_) => None,
            GroupKind::U1 => Some(2.0 * PI),
            GroupKind::SU2 => Some(16.0 * PI * PI),
            GroupKind::SO3 => Some(8.0 * PI * PI),
        }
    }

    /// Size of the matrix representation used by [`GroupElement::matrix`].
    pub fn matrix_size(&self) -> usize {
        match self.kind {
            GroupKind::Rd(d) => d + 1,
            GroupKind::U1 => 1,
            GroupKind::SU2 => 2,
            GroupKind::SO3 => 3,
        }
    }

    /// Basis matrix `T_i`.
    pub fn basis_matrix(&self, i: usize) -> DMatrix<Complex64> {
        let n = self.matrix_size();
        let mut m = DMatrix::<Complex64>::zeros(n, n);
        let c = |re: f64, im: f64| Complex64::new(re, im);
        match self.kind {
            GroupKind::Rd(d) => m[(i, d)] = c(1.0, 0.0),
            GroupKind::U1 => m[(0, 0)] = c(0.0, 1.0),
            GroupKind::SU2 => {
                // -(i/2) σ_i
                match i {
                    0 => {
                        m[(0, 1)] = c(0.0, -0.5);
                        m[(1, 0)] = c(0.0, -0.5);
                    }
                    1 => {
                        m[(0, 1)] = c(-0.5, 0.0);
                        m[(1, 0)] = c(0.5, 0.0);
                    }
                    _ => {
                        m[(0, 0)] = c(0.0, -0.5);
                        m[(1, 1)] = c(0.0, 0.5);
                    }
                }
            }
            GroupKind::SO3 => {
                for j in 0..3 {
                    for k in 0..3 {
                        m[(j, k)] = c(-levi_civita(i, j, k), 0.0);
                    }
                }
            }
        }
        m
    }

    /// `Σ_i Z^i T_i` as a matrix.
    pub fn algebra_matrix(&self, z: &AlgebraVector) -> DMatrix<Complex64> {
        let n = self.matrix_size();
        let mut m = DMatrix::<Complex64>::zeros(n, n);
        for (i, zi) in z.iter().enumerate() {
            m += self.basis_matrix(i) * Complex64::new(zi, 0.0);
        }
        m
    }

    /// Components of an algebra matrix in the basis (least-squares projection).
    pub fn algebra_components(&self, m: &DMatrix<Complex64>) -> AlgebraVector {
        let d = self.dim();
        let comps = (0..d)
            .map(|i| {
                let t = self.basis_matrix(i);
                let num: Complex64 = t.iter().zip(m.iter()).map(|(a, b)| a.conj() * b).sum();
                let den: f64 = t.iter().map(|a| a.norm_sqr()).sum();
                num.re / den
            })
            .collect();
        AlgebraVector::new(comps)
    }

    /// `c_ij^k Z^i W^j`.
    pub fn lie_bracket(&self, z: &AlgebraVector, w: &AlgebraVector) -> Result<AlgebraVector> {
        let d = self.dim();
        check_dim(d, z)?;
        check_dim(d, w)?;
        if self.is_abelian() {
            return Ok(AlgebraVector::zeros(d));
        }
        let mut out = vec![0.0; d];
        for (i, zi) in z.iter().enumerate() {
            for (j, wj) in w.iter().enumerate() {
                for (k, o) in out.iter_mut().enumerate() {
                    *o += self.structure_constant(i, j, k) * zi * wj;
                }
            }
        }
        Ok(AlgebraVector::new(out))
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement::identity(self)
    }
}

pub(crate) fn check_dim(d: usize, z: &AlgebraVector) -> Result<()> {
    if z.dim() != d {
        return Err(Error::LengthMismatch {
            expected: d,
            got: z.dim(),
        });
    }
    Ok(())
}

use crate::error::{Error, Result};
