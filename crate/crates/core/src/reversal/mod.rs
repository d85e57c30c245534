//! Gauge-reversing maps Ψ: C° → K°, their Gateaux derivatives, the symmetries
//! S_x they induce, and the automorphisms that transport one interior point to
//! another.
//!
//! A bijection Ψ is gauge-reversing when M(v/w) = M(Ψ(w)/Ψ(v)) for all v, w.
//! Along an extreme half-line through x with M(p/x) = 1 every such map obeys
//!
//! ```text
//! Ψ(x + t p) = Ψ(x) − t/(t+1) · q,    q = 2 (Ψ(x) − Ψ(x + p)),
//! ```
//!
//! which makes DΨ(x) computable from finitely many evaluations of Ψ once y is
//! written in a basis of extreme vectors.

mod checks;
mod derivative;
mod transport;

pub use checks::{
    fixed_point_free_check, verify_derivative_automorphism, verify_gauge_reversing,
    verify_symmetry, verify_symmetry_halfline, verify_transport,
};
pub use derivative::{
    derivative_matrix, extreme_halfline_image, gateaux_atoms, gateaux_fd, symmetry_at,
    HalflineImage, Symmetry,
};
pub use transport::{transport, Transport};

use nalgebra::DMatrix;

use crate::cone::ConeModel;
use crate::element::Element;
use crate::error::{Error, Result};
use crate::jordan;
use crate::linalg;
use crate::tolerance::Tolerance;

/// An invertible linear map on ambient coordinates, with its inverse cached.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearMap {
    matrix: DMatrix<f64>,
    inverse: DMatrix<f64>,
}

impl LinearMap {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::input("linear map must be square"));
        }
        if !matrix.iter().all(|v| v.is_finite()) || linalg::inverse_condition(&matrix) < 1e-13 {
            return Err(Error::Singular("linear map is not invertible".into()));
        }
        let inverse = matrix
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Singular("linear map is not invertible".into()))?;
        Ok(LinearMap { matrix, inverse })
    }

    pub fn identity(n: usize) -> Self {
        LinearMap {
            matrix: DMatrix::identity(n, n),
            inverse: DMatrix::identity(n, n),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn inverse_matrix(&self) -> &DMatrix<f64> {
        &self.inverse
    }

    pub fn apply(&self, x: &Element) -> Element {
        Element::from_vector(&(&self.matrix * x.to_vector()))
    }

    pub fn apply_inverse(&self, y: &Element) -> Element {
        Element::from_vector(&(&self.inverse * y.to_vector()))
    }

    pub fn inverted(&self) -> LinearMap {
        LinearMap {
            matrix: self.inverse.clone(),
            inverse: self.matrix.clone(),
        }
    }

    /// self ∘ other.
    pub fn compose(&self, other: &LinearMap) -> LinearMap {
        LinearMap {
            matrix: &self.matrix * &other.matrix,
            inverse: &other.inverse * &self.inverse,
        }
    }

    /// Whether the map and its inverse send every given cone element into the
    /// cone (a sampled test for membership in Aut(C)).
    pub fn preserves_cone(&self, model: &ConeModel, probes: &[Element], tol: &Tolerance) -> bool {
        probes.iter().all(|x| {
            let slack =
                tol.eq_rtol * x.max_abs().max(1.0) * self.matrix.norm().max(self.inverse.norm());
            model.contains(&self.apply(x), false, slack)
                && model.contains(&self.apply_inverse(x), false, slack)
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ReverserKind {
    /// x ↦ x⁻¹ in the Jordan algebra.
    JordanInverse,
    /// x ↦ T(x⁻¹) for a cone automorphism T.
    ConjugatedInverse(LinearMap),
    /// A = [[a, b], [b, c]] ↦ (ac − b²)⁻¹ [[a, 2b], [2b, 4c]] on 2×2 positive definite matrices.
    Counterexample2x2,
    /// x ↦ x⁻¹ + u: antitone but not gauge-reversing; kept as a negative control.
    ShiftedInverse,
}

/// A map Ψ: C° → K° (or its inverse, when `inverted`).
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeReverser {
    kind: ReverserKind,
    model: ConeModel,
    inverted: bool,
}

/// T(a, b, c) = (c, −2b, 4a) in packed coordinates, i.e. A ↦ M A Mᵀ with
/// M = [[0, −1], [2, 0]]; the counterexample equals T ∘ ι.
fn counterexample_conjugator() -> LinearMap {
    let m = DMatrix::from_row_slice(3, 3, &[0.0, 0.0, 1.0, 0.0, -2.0, 0.0, 4.0, 0.0, 0.0]);
    LinearMap::new(m).expect("invertible")
}

impl GaugeReverser {
    pub fn jordan_inverse(model: &ConeModel) -> Result<Self> {
        if !model.is_jordan() {
            return Err(Error::unsupported(
                "the Jordan inverse needs a symmetric-cone model",
            ));
        }
        Ok(GaugeReverser {
            kind: ReverserKind::JordanInverse,
            model: model.clone(),
            inverted: false,
        })
    }

    /// T ∘ ι, where T must map C onto C (checked on sampled interior points and atoms).
    pub fn conjugated_inverse(model: &ConeModel, t: LinearMap, tol: &Tolerance) -> Result<Self> {
        if !model.is_jordan() {
            return Err(Error::unsupported(
                "the Jordan inverse needs a symmetric-cone model",
            ));
        }
        if t.dim() != model.dim() {
            return Err(Error::input("conjugating map has the wrong dimension"));
        }
        let mut probes = crate::cone::sample_interior(model, 0xc0ff, 64);
        probes.extend(crate::cone::spanning_atoms(model)?);
        if !t.preserves_cone(model, &probes, tol) {
            return Err(Error::input(
                "conjugating map is not an automorphism of the cone",
            ));
        }
        Ok(GaugeReverser {
            kind: ReverserKind::ConjugatedInverse(t),
            model: model.clone(),
            inverted: false,
        })
    }

    pub fn counterexample() -> Self {
        GaugeReverser {
            kind: ReverserKind::Counterexample2x2,
            model: ConeModel::SymMat(2),
            inverted: false,
        }
    }

    pub fn shifted_inverse(model: &ConeModel) -> Result<Self> {
        if !model.is_jordan() {
            return Err(Error::unsupported(
                "the Jordan inverse needs a symmetric-cone model",
            ));
        }
        Ok(GaugeReverser {
            kind: ReverserKind::ShiftedInverse,
            model: model.clone(),
            inverted: false,
        })
    }

    pub fn kind(&self) -> &ReverserKind {
        &self.kind
    }

    pub fn is_inverted(&self) -> bool {
        self.inverted
    }

    /// Every shipped map sends a symmetric cone to itself, so C and K coincide.
    pub fn domain(&self) -> &ConeModel {
        &self.model
    }

    pub fn codomain(&self) -> &ConeModel {
        &self.model
    }

    /// Ψ⁻¹ as a map K° → C°.
    pub fn inverse(&self) -> GaugeReverser {
        GaugeReverser {
            inverted: !self.inverted,
            ..self.clone()
        }
    }

    pub fn apply(&self, x: &Element, tol: &Tolerance) -> Result<Element> {
        self.domain()
            .require_interior(x, "argument of the gauge-reversing map", tol)?;
        if self.inverted {
            self.backward(x, tol)
        } else {
            self.forward(x, tol)
        }
    }

    pub fn inverse_apply(&self, y: &Element, tol: &Tolerance) -> Result<Element> {
        self.inverse().apply(y, tol)
    }

    fn forward(&self, x: &Element, tol: &Tolerance) -> Result<Element> {
        let m = &self.model;
        match &self.kind {
            ReverserKind::JordanInverse => jordan::inverse(m, x, tol),
            ReverserKind::ConjugatedInverse(t) => Ok(t.apply(&jordan::inverse(m, x, tol)?)),
            ReverserKind::Counterexample2x2 => {
                let (a, b, c) = (x[0], x[1], x[2]);
                let det = a * c - b * b;
                Ok(Element::from([a / det, 2.0 * b / det, 4.0 * c / det]))
            }
            ReverserKind::ShiftedInverse => Ok(&jordan::inverse(m, x, tol)? + &m.unit()),
        }
    }

    fn backward(&self, y: &Element, tol: &Tolerance) -> Result<Element> {
        let m = &self.model;
        match &self.kind {
            ReverserKind::JordanInverse => jordan::inverse(m, y, tol),
            ReverserKind::ConjugatedInverse(t) => jordan::inverse(m, &t.apply_inverse(y), tol),
            ReverserKind::Counterexample2x2 => {
                jordan::inverse(m, &counterexample_conjugator().apply_inverse(y), tol)
            }
            ReverserKind::ShiftedInverse => {
                let z = y - &m.unit();
                m.require_interior(
                    &z,
                    "argument minus the unit (outside the range of x⁻¹ + u)",
                    tol,
                )?;
                jordan::inverse(m, &z, tol)
            }
        }
    }
}
