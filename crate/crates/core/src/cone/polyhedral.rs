//! Polyhedral cones given by both their extreme rays and their facet functionals.

use std::path::Path;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::element::Element;
use crate::error::{Error, Result};
use crate::linalg;

/// On-disk form of a polyhedral model.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolyhedralFile {
    pub ambient: usize,
    pub rays: Vec<Vec<f64>>,
    pub facets: Vec<Vec<f64>>,
    pub unit: Vec<f64>,
}

/// A polyhedral cone C = cone(rays) = {x : f(x) ≥ 0 for every facet f}.
///
/// Facets are stored rescaled so that f(u) = 1, with parallel duplicates removed.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyhedral {
    ambient: usize,
    rays: Vec<Element>,
    facets: Vec<Element>,
    unit: Element,
}

const CONSISTENCY_SAMPLES: usize = 400;

impl Polyhedral {
    pub fn new(
        ambient: usize,
        rays: Vec<Element>,
        facets: Vec<Element>,
        unit: Element,
    ) -> Result<Self> {
        if ambient == 0 {
            return Err(Error::input(
                "polyhedral cone needs a positive ambient dimension",
            ));
        }
        if rays.is_empty() || facets.is_empty() {
            return Err(Error::input("polyhedral cone needs both rays and facets"));
        }
        for v in rays.iter().chain(&facets).chain(std::iter::once(&unit)) {
            if v.len() != ambient {
                return Err(Error::input(format!(
                    "vector of length {} in a polyhedral model of ambient dimension {ambient}",
                    v.len()
                )));
            }
            if !v.is_finite() {
                return Err(Error::input("polyhedral model contains non-finite entries"));
            }
        }

        let mut normalized: Vec<Element> = Vec::new();
        for f in &facets {
            let at_unit = f.dot(&unit);
            if at_unit <= 0.0 {
                return Err(Error::input("unit is not strictly inside every facet"));
            }
            let g = f.scale(1.0 / at_unit);
            if !normalized
                .iter()
                .any(|h| (h - &g).max_abs() <= 1e-12 * g.max_abs().max(1.0))
            {
                normalized.push(g);
            }
        }

        for r in &rays {
            let scale = r.max_abs();
            if scale == 0.0 {
                return Err(Error::input("zero ray"));
            }
            for f in &normalized {
                if f.dot(r) < -1e-9 * scale {
                    return Err(Error::input("a ray violates a facet inequality"));
                }
            }
        }

        let ray_matrix = linalg::columns(&rays);
        if ray_matrix
            .clone()
            .svd(false, false)
            .rank(1e-9 * ray_matrix.norm())
            < ambient
        {
            return Err(Error::input("rays do not span the ambient space"));
        }

        let poly = Polyhedral {
            ambient,
            rays,
            facets: normalized,
            unit,
        };
        poly.check_double_description()?;
        Ok(poly)
    }

    pub fn from_file_struct(file: PolyhedralFile) -> Result<Self> {
        Polyhedral::new(
            file.ambient,
            file.rays.into_iter().map(Element::new).collect(),
            file.facets.into_iter().map(Element::new).collect(),
            Element::new(file.unit),
        )
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: PolyhedralFile = serde_json::from_str(text)
            .map_err(|e| Error::input(format!("polyhedral model JSON: {e}")))?;
        Polyhedral::from_file_struct(file)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::input(format!("cannot read {}: {e}", path.display())))?;
        Polyhedral::from_json(&text)
    }

    /// The cone over a square: rays (1, ±1, 0), (1, 0, ±1), unit (1, 0, 0).
    pub fn square() -> Self {
        let rays = vec![
            Element::from([1.0, 1.0, 0.0]),
            Element::from([1.0, -1.0, 0.0]),
            Element::from([1.0, 0.0, 1.0]),
            Element::from([1.0, 0.0, -1.0]),
        ];
        let facets = vec![
            Element::from([1.0, 1.0, 1.0]),
            Element::from([1.0, 1.0, -1.0]),
            Element::from([1.0, -1.0, 1.0]),
            Element::from([1.0, -1.0, -1.0]),
        ];
        Polyhedral::new(3, rays, facets, Element::from([1.0, 0.0, 0.0]))
            .expect("square cone is consistent")
    }

    pub fn to_file_struct(&self) -> PolyhedralFile {
        PolyhedralFile {
            ambient: self.ambient,
            rays: self.rays.iter().map(|r| r.as_slice().to_vec()).collect(),
            facets: self.facets.iter().map(|f| f.as_slice().to_vec()).collect(),
            unit: self.unit.as_slice().to_vec(),
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rays(&self) -> &[Element] {
        &self.rays
    }

    /// Facet functionals normalized to f(u) = 1.
    pub fn facets(&self) -> &[Element] {
        &self.facets
    }

    pub fn unit(&self) -> &Element {
        &self.unit
    }

    /// Smallest facet value; nonnegative exactly on the cone.
    pub fn margin(&self, x: &Element) -> f64 {
        self.facets
            .iter()
            .map(|f| f.dot(x))
            .fold(f64::INFINITY, f64::min)
    }

    /// Residual of the best nonnegative combination of rays approximating `x`.
    pub fn ray_residual(&self, x: &Element) -> f64 {
        let a = linalg::columns(&self.rays);
        let b = x.to_vector();
        let coef = nnls(&a, &b);
        (&a * coef - b).norm()
    }

    /// Points satisfying every facet must lie in cone(rays), and vice versa.
    fn check_double_description(&self) -> Result<()> {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
        let scale = self.unit.euclidean_norm().max(1.0);
        for _ in 0..CONSISTENCY_SAMPLES {
            // points in cone(rays) satisfy the facets
            let weights: Vec<f64> = (0..self.rays.len()).map(|_| rng.random::<f64>()).collect();
            let inside = crate::element::combination(self.ambient, &weights, &self.rays);
            if self.margin(&inside) < -1e-9 * inside.max_abs().max(1.0) {
                return Err(Error::input("facets cut off part of cone(rays)"));
            }
            // points satisfying the facets lie in cone(rays)
            let z: Vec<f64> = (0..self.ambient)
                .map(|_| rng.sample::<f64, _>(StandardNormal) * 2.0 * scale)
                .collect();
            let probe = self.unit.axpy(1.0, &Element::new(z));
            if self.margin(&probe) >= 0.0
                && self.ray_residual(&probe) > 1e-7 * probe.euclidean_norm().max(1.0)
            {
                return Err(Error::input(
                    "facet description admits points outside cone(rays) (missing facet?)",
                ));
            }
        }
        Ok(())
    }
}

/// Lawson-Hanson nonnegative least squares: argmin ‖Ax − b‖ subject to x ≥ 0.
fn nnls(a: &DMatrix<f64>, b: &DVector<f64>) -> DVector<f64> {
    let n = a.ncols();
    let mut x = DVector::zeros(n);
    let mut passive = vec![false; n];
    let tol = 1e-12 * a.norm().max(1.0) * b.norm().max(1.0);
    for _outer in 0..(3 * n + 10) {
        let w = a.transpose() * (b - a * &x);
        let candidate = (0..n)
            .filter(|&j| !passive[j] && w[j] > tol)
            .max_by(|&i, &j| w[i].total_cmp(&w[j]));
        let Some(j) = candidate else { break };
        passive[j] = true;
        loop {
            let idx: Vec<usize> = (0..n).filter(|&k| passive[k]).collect();
            let sub = a.select_columns(&idx);
            let Some(z_sub) = sub.clone().svd(true, true).solve(b, 1e-14).ok() else {
                return x;
            };
            let mut z = DVector::zeros(n);
            for (k, &col) in idx.iter().enumerate() {
                z[col] = z_sub[k];
            }
            if idx.iter().all(|&k| z[k] > 0.0) {
                x = z;
                break;
            }
            let mut alpha = f64::INFINITY;
            for &k in &idx {
                if z[k] <= 0.0 {
                    alpha = alpha.min(x[k] / (x[k] - z[k]));
                }
            }
            x = &x + (z - &x) * alpha;
            for &k in &idx {
                if x[k] <= 1e-15 {
                    passive[k] = false;
                    x[k] = 0.0;
                }
            }
        }
    }
    x
}
