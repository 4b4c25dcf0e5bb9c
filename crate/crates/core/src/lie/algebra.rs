use serde::{Deserialize, Serialize};
use std::ops::{Add, Index, Mul, Neg, Sub};

/// Components of an algebra element in the basis `T_i`; also used for dual
/// vectors `X ∈ g*` through the Euclidean pairing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgebraVector(Vec<f64>);

impl AlgebraVector {
    pub fn new(components: Vec<f64>) -> Self {
        AlgebraVector(components)
    }

    pub fn zeros(d: usize) -> Self {
        AlgebraVector(vec![0.0; d])
    }

    /// Unit vector along basis direction `i`, scaled by `s`.
    pub fn axis(d: usize, i: usize, s: f64) -> Self {
        let mut v = vec![0.0; d];
        v[i] = s;
        AlgebraVector(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn components(&self) -> &[f64] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        self.0.iter().copied()
    }

    pub fn dot(&self, other: &AlgebraVector) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scale(&self, s: f64) -> Self {
        AlgebraVector(self.0.iter().map(|a| a * s).collect())
    }

    pub fn max_abs_diff(&self, other: &AlgebraVector) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|a| a.is_finite())
    }
}

impl Index<usize> for AlgebraVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl Add for &AlgebraVector {
    type Output = AlgebraVector;
    fn add(self, rhs: &AlgebraVector) -> AlgebraVector {
        AlgebraVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &AlgebraVector {
    type Output = AlgebraVector;
    fn sub(self, rhs: &AlgebraVector) -> AlgebraVector {
        AlgebraVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &AlgebraVector {
    type Output = AlgebraVector;
    fn neg(self) -> AlgebraVector {
        self.scale(-1.0)
    }
}

impl Mul<f64> for &AlgebraVector {
    type Output = AlgebraVector;
    fn mul(self, s: f64) -> AlgebraVector {
        self.scale(s)
    }
}

impl From<Vec<f64>> for AlgebraVector {
    fn from(v: Vec<f64>) -> Self {
        AlgebraVector(v)
    }
}

impl<const N: usize> From<[f64; N]> for AlgebraVector {
    fn from(v: [f64; N]) -> Self {
        AlgebraVector(v.to_vec())
    }
}
