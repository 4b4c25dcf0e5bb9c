use crate::error::{Error, Result};
use crate::lie::AlgebraVector;
use num_complex::Complex64;
use std::collections::BTreeMap;

/// Polynomial in the dual variables `X_1…X_d`, keyed by non-decreasing index
/// lists (`[0, 0, 2]` is `X_0² X_2`). The product is pointwise.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DualPolynomial {
    d: usize,
    terms: BTreeMap<Vec<usize>, Complex64>,
}

impl DualPolynomial {
    pub fn zero(d: usize) -> Self {
        DualPolynomial { d, terms: BTreeMap::new() }
    }

    pub fn constant(d: usize, c: Complex64) -> Self {
        let mut p = Self::zero(d);
        p.add_term(&[], c).expect("empty index list");
        p
    }

    /// `X_i`.
    pub fn coordinate(d: usize, i: usize) -> Result<Self> {
        let mut p = Self::zero(d);
        p.add_term(&[i], Complex64::new(1.0, 0.0))?;
        Ok(p)
    }

    /// `|X|²`.
    pub fn norm_squared(d: usize) -> Self {
        let mut p = Self::zero(d);
        for i in 0..d {
            p.add_term(&[i, i], Complex64::new(1.0, 0.0)).expect("valid index");
        }
        p
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn add_term(&mut self, indices: &[usize], c: Complex64) -> Result<()> {
        if let Some(&bad) = indices.iter().find(|&&i| i >= self.d) {
            return Err(Error::OutOfRange(format!("index {bad} for dimension {}", self.d)));
        }
        if !c.is_finite() {
            return Err(Error::InvalidConfig("non-finite coefficient".into()));
        }
        let mut key = indices.to_vec();
        key.sort_unstable();
        let slot = self.terms.entry(key).or_insert(Complex64::new(0.0, 0.0));
        *slot += c;
        Ok(())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[usize], Complex64)> {
        self.terms.iter().map(|(k, v)| (k.as_slice(), *v))
    }

    pub fn coefficient(&self, indices: &[usize]) -> Complex64 {
        let mut key = indices.to_vec();
        key.sort_unstable();
        self.terms.get(&key).copied().unwrap_or_default()
    }

    pub fn degree(&self) -> usize {
        self.terms.iter().filter(|(_, c)| c.norm() > 0.0).map(|(k, _)| k.len()).max().unwrap_or(0)
    }

    pub fn evaluate(&self, x: &AlgebraVector) -> Complex64 {
        self.terms.iter().map(|(k, c)| c * k.iter().map(|&i| x[i]).product::<f64>()).sum()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        DualPolynomial { d: self.d, terms: self.terms.iter().map(|(k, c)| (k.clone(), c * s)).collect() }
    }

    pub fn add(&self, other: &DualPolynomial) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k, *c)?;
        }
        Ok(out)
    }

    pub fn mul(&self, other: &DualPolynomial) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = Self::zero(self.d);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let key: Vec<usize> = a.iter().chain(b).copied().collect();
                out.add_term(&key, ca * cb)?;
            }
        }
        Ok(out)
    }

    /// `∂/∂X_i`.
    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(self.d);
        for (k, c) in &self.terms {
            let m = k.iter().filter(|&&j| j == i).count();
            if m == 0 {
                continue;
            }
            let pos = k.iter().position(|&j| j == i).expect("present");
            let mut rest = k.clone();
            rest.remove(pos);
            out.add_term(&rest, c * m as f64).expect("valid index");
        }
        out
    }

    fn check_dim(&self, other: &DualPolynomial) -> Result<()> {
        if self.d != other.d {
            return Err(Error::LengthMismatch { expected: self.d, got: other.d });
        }
        Ok(())
    }
}
