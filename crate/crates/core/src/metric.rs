//! Funk, reverse-Funk and Thompson metrics, their geodesics and Finsler length.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::cone::ConeModel;
use crate::element::Element;
use crate::error::{Error, Result};
use crate::linalg;
use crate::tolerance::Tolerance;

/// F(x, y) = log M(x/y).
pub fn funk(model: &ConeModel, x: &Element, y: &Element, tol: &Tolerance) -> Result<f64> {
    model.require_interior(x, "first argument", tol)?;
    Ok(model.gauge(x, y, tol)?.ln())
}

/// RF(x, y) = log M(y/x) = F(y, x).
pub fn reverse_funk(model: &ConeModel, x: &Element, y: &Element, tol: &Tolerance) -> Result<f64> {
    funk(model, y, x, tol)
}

/// d_T(x, y) = max(F(x, y), RF(x, y)).
pub fn thompson(model: &ConeModel, x: &Element, y: &Element, tol: &Tolerance) -> Result<f64> {
    Ok(funk(model, x, y, tol)?.max(reverse_funk(model, x, y, tol)?))
}

/// A unit-speed Thompson geodesic.
#[derive(Debug, Clone, PartialEq)]
pub enum Geodesic {
    /// t ↦ α(eᵗv + e⁻ᵗw) with v, w ∈ ∂C linearly independent.
    TypeI { v: Element, w: Element, alpha: f64 },
    /// t ↦ e⁻ᵗx.
    TypeII { x: Element },
}

impl Geodesic {
    pub fn eval(&self, t: f64) -> Element {
        match self {
            Geodesic::TypeI { v, w, alpha } => v.scale(alpha * t.exp()).axpy(alpha * (-t).exp(), w),
            Geodesic::TypeII { x } => x.scale((-t).exp()),
        }
    }

    /// Checks the structural invariants: boundary legs and interior points.
    pub fn validate(&self, model: &ConeModel, tol: &Tolerance) -> Result<()> {
        match self {
            Geodesic::TypeI { v, w, alpha } => {
                if !(*alpha > 0.0) {
                    return Err(Error::input("type I geodesic needs α > 0"));
                }
                let slack = 1e-9 * v.max_abs().max(w.max_abs());
                for leg in [v, w] {
                    let m = model.margin(leg);
                    if m.abs() > slack {
                        return Err(Error::input("type I geodesic leg is not on the boundary"));
                    }
                }
                if linalg::inverse_condition(&linalg::columns(&[v.clone(), w.clone()])) < 1e-9 {
                    return Err(Error::input("type I geodesic legs are linearly dependent"));
                }
                model.require_interior(&self.eval(0.0), "geodesic point", tol)
            }
            Geodesic::TypeII { x } => model.require_interior(x, "type II anchor", tol),
        }
    }
}

/// The type I geodesic with γ(0) = x and γ(T) = y, T = d_T(x, y).
///
/// Requires the gauge symmetry M(x/y) = M(y/x) (within `eq_rtol`); the legs are
/// v = (y − e⁻ᵀx)/(eᵀ − e⁻ᵀ) and w = (eᵀx − y)/(eᵀ − e⁻ᵀ).
pub fn type_i_geodesic(
    model: &ConeModel,
    x: &Element,
    y: &Element,
    tol: &Tolerance,
) -> Result<Geodesic> {
    model.require_interior(x, "geodesic start", tol)?;
    model.require_interior(y, "geodesic end", tol)?;
    if linalg::inverse_condition(&linalg::columns(&[x.clone(), y.clone()])) < 1e-9 {
        return Err(Error::Precondition(
            "x and y are linearly dependent; use the type II geodesic".into(),
        ));
    }
    let m_xy = model.gauge(x, y, tol)?;
    let m_yx = model.gauge(y, x, tol)?;
    if (m_xy - m_yx).abs() > tol.eq_rtol * m_xy {
        return Err(Error::Precondition(format!(
            "type I geodesic needs the gauge symmetry M(x/y) = M(y/x); got {m_xy} vs {m_yx}"
        )));
    }
    let e_t = m_yx;
    let e_mt = 1.0 / e_t;
    let denom = e_t - e_mt;
    let v = y.axpy(-e_mt, x).scale(1.0 / denom);
    let w = x.scale(e_t).axpy(-1.0, y).scale(1.0 / denom);
    Ok(Geodesic::TypeI { v, w, alpha: 1.0 })
}

/// d_T(γ(s), γ(t)); equals |s − t| on a geodesic.
pub fn geodesic_distance_check(
    model: &ConeModel,
    g: &Geodesic,
    s: f64,
    t: f64,
    tol: &Tolerance,
) -> Result<f64> {
    thompson(model, &g.eval(s), &g.eval(t), tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Unique,
    NonUnique,
    UniqueBySufficientCondition,
    Undecided,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeodesicUniqueness {
    pub verdict: Verdict,
    /// A direction z tangent to ∂C at both chord endpoints, outside span{x, y}.
    pub witness: Option<Element>,
}

const CHORD_BISECTIONS: usize = 60;
const CHORD_DOUBLINGS: usize = 60;

/// Exit point of the ray s ↦ from + s·(from − toward), s ≥ 0, found by
/// bisection on the membership test.
fn chord_endpoint(model: &ConeModel, from: &Element, toward: &Element) -> Option<Element> {
    let dir = from - toward;
    let at = |s: f64| from.axpy(s, &dir);
    let mut hi = 1.0;
    let mut doublings = 0;
    while model.contains(&at(hi), false, 0.0) {
        hi *= 2.0;
        doublings += 1;
        if doublings > CHORD_DOUBLINGS {
            return None;
        }
    }
    let mut lo = 0.0;
    for _ in 0..CHORD_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if model.contains(&at(mid), false, 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(at(lo))
}

/// Endpoints x′, y′ ∈ ∂C of the chord through x and y (x between x′ and y).
pub fn chord_endpoints(model: &ConeModel, x: &Element, y: &Element) -> Option<(Element, Element)> {
    Some((chord_endpoint(model, x, y)?, chord_endpoint(model, y, x)?))
}

/// Facet functionals vanishing at a boundary point of a polyhedral-type model.
fn active_facets(model: &ConeModel, z: &Element) -> Option<Vec<Element>> {
    let zero = 1e-8 * z.max_abs().max(1.0);
    match model {
        ConeModel::Orthant(n) => Some(
            (0..*n)
                .filter(|&i| z[i].abs() <= zero)
                .map(|i| Element::basis(*n, i))
                .collect(),
        ),
        ConeModel::Polyhedral(p) => Some(
            p.facets()
                .iter()
                .filter(|f| f.dot(z).abs() <= zero)
                .cloned()
                .collect(),
        ),
        _ => None,
    }
}

/// Decides uniqueness of the type I geodesic through x and y where possible.
pub fn uniqueness_test(
    model: &ConeModel,
    x: &Element,
    y: &Element,
    tol: &Tolerance,
) -> Result<GeodesicUniqueness> {
    // validates interiority, independence and gauge symmetry
    type_i_geodesic(model, x, y, tol)?;
    let verdict = |verdict| GeodesicUniqueness {
        verdict,
        witness: None,
    };
    if model.dim() == 2 {
        return Ok(verdict(Verdict::Unique));
    }
    let Some((xp, yp)) = chord_endpoints(model, x, y) else {
        return Ok(verdict(Verdict::Undecided));
    };
    let extreme = |z: &Element| model.is_extreme_vector(z, tol).unwrap_or(false);
    if extreme(&xp) || extreme(&yp) {
        return Ok(verdict(Verdict::UniqueBySufficientCondition));
    }
    let (Some(fx), Some(fy)) = (active_facets(model, &xp), active_facets(model, &yp)) else {
        return Ok(verdict(Verdict::Undecided));
    };
    let rows: Vec<Element> = fx.into_iter().chain(fy).collect();
    let dim = model.dim();
    let a = DMatrix::from_fn(rows.len(), dim, |i, j| rows[i][j]);
    let tangent = linalg::null_space(&a, 1e-9);

    let span = linalg::columns(&[x.clone(), y.clone()]).qr().q();
    let mut best: Option<(f64, Element)> = None;
    for k in 0..tangent.ncols() {
        let z = tangent.column(k).clone_owned();
        let resid = (&z - &span * (span.transpose() * &z)).norm();
        if best.as_ref().is_none_or(|(r, _)| resid > *r) {
            best = Some((resid, Element::from_vector(&z)));
        }
    }
    match best {
        Some((resid, z)) if resid > 1e-6 => Ok(GeodesicUniqueness {
            verdict: Verdict::NonUnique,
            witness: Some(z),
        }),
        _ => Ok(verdict(Verdict::Undecided)),
    }
}

/// Finsler length ∫ ‖γ′(t)‖_{γ(t)} dt by composite Simpson over `panels`
/// panels, with central-difference velocities.
pub fn finsler_length(
    model: &ConeModel,
    path: &dyn Fn(f64) -> Element,
    t0: f64,
    t1: f64,
    panels: usize,
    tol: &Tolerance,
) -> Result<f64> {
    if panels < 2 || !panels.is_multiple_of(2) {
        return Err(Error::input(
            "Simpson quadrature needs an even panel count ≥ 2",
        ));
    }
    let h_fd = tol.fd_step * (t1 - t0).abs().max(1e-300);
    let integrand = |t: f64| -> Result<f64> {
        let p = path(t);
        model.require_interior(&p, "path point", tol)?;
        let vel = (&path(t + h_fd) - &path(t - h_fd)).scale(0.5 / h_fd);
        Ok(model
            .gauge(&vel, &p, tol)?
            .max(model.gauge(&-&vel, &p, tol)?))
    };
    let step = (t1 - t0) / panels as f64;
    let mut sum = integrand(t0)? + integrand(t1)?;
    for k in 1..panels {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * integrand(t0 + k as f64 * step)?;
    }
    Ok(sum * step / 3.0)
}
