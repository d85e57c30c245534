use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of the ambient space of a cone model, stored as dense coordinates.
///
/// Symmetric-matrix models pack the upper triangle row by row, so a 2×2
/// matrix `[[a, b], [b, c]]` is stored as `(a, b, c)`.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Element(Vec<f64>);

impl Element {
    pub fn new(coords: Vec<f64>) -> Self {
        Element(coords)
    }

    /// Builds an element, rejecting NaN and infinite coordinates.
    pub fn try_new(coords: Vec<f64>) -> Result<Self> {
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::input("element coordinates must be finite"));
        }
        Ok(Element(coords))
    }

    pub fn zeros(dim: usize) -> Self {
        Element(vec![0.0; dim])
    }

    pub fn basis(dim: usize, i: usize) -> Self {
        let mut e = Element::zeros(dim);
        e.0[i] = 1.0;
        e
    }

    pub fn from_vector(v: &DVector<f64>) -> Self {
        Element(v.iter().copied().collect())
    }

    pub fn to_vector(&self) -> DVector<f64> {
        DVector::from_column_slice(&self.0)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn dot(&self, other: &Element) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn euclidean_norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn scale(&self, s: f64) -> Element {
        Element(self.0.iter().map(|c| c * s).collect())
    }

    /// `self + s * other`
    pub fn axpy(&self, s: f64, other: &Element) -> Element {
        Element(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + s * b)
                .collect(),
        )
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    pub fn slice(&self, start: usize, len: usize) -> Element {
        Element(self.0[start..start + len].to_vec())
    }

    pub fn concat(parts: &[Element]) -> Element {
        Element(parts.iter().flat_map(|p| p.0.iter().copied()).collect())
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Element{:?}", self.0)
    }
}

impl Index<usize> for Element {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl From<Vec<f64>> for Element {
    fn from(v: Vec<f64>) -> Self {
        Element(v)
    }
}

impl<const N: usize> From<[f64; N]> for Element {
    fn from(v: [f64; N]) -> Self {
        Element(v.to_vec())
    }
}

impl Add<&Element> for &Element {
    type Output = Element;

    fn add(self, rhs: &Element) -> Element {
        debug_assert_eq!(self.len(), rhs.len());
        Element(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Add for Element {
    type Output = Element;

    fn add(self, rhs: Element) -> Element {
        &self + &rhs
    }
}

impl Sub<&Element> for &Element {
    type Output = Element;

    fn sub(self, rhs: &Element) -> Element {
        debug_assert_eq!(self.len(), rhs.len());
        Element(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Sub for Element {
    type Output = Element;

    fn sub(self, rhs: Element) -> Element {
        &self - &rhs
    }
}

impl Neg for &Element {
    type Output = Element;

    fn neg(self) -> Element {
        self.scale(-1.0)
    }
}

impl Neg for Element {
    type Output = Element;

    fn neg(self) -> Element {
        self.scale(-1.0)
    }
}

impl Mul<f64> for &Element {
    type Output = Element;

    fn mul(self, s: f64) -> Element {
        self.scale(s)
    }
}

impl Mul<f64> for Element {
    type Output = Element;

    fn mul(self, s: f64) -> Element {
        self.scale(s)
    }
}

impl Mul<&Element> for f64 {
    type Output = Element;

    fn mul(self, e: &Element) -> Element {
        e.scale(self)
    }
}

/// Sum of `coef[k] * elems[k]`.
pub fn combination(dim: usize, coefs: &[f64], elems: &[Element]) -> Element {
    let mut acc = Element::zeros(dim);
    for (c, e) in coefs.iter().zip(elems) {
        acc = acc.axpy(*c, e);
    }
    acc
}
