use std::collections::VecDeque;

use nalgebra::DMatrix;

use super::{symmetry_at, GaugeReverser, LinearMap, Symmetry};
use crate::cone::{sample_interior, ConeModel};
use crate::element::Element;
use crate::error::{Error, Result};
use crate::jordan;
use crate::linalg;
use crate::tolerance::Tolerance;

/// Probe offset for the linearization around u.
const PROBE_STEP: f64 = 0.25;
const LINEARITY_LIMIT: f64 = 1e-6;
const MAX_SPLITS: usize = 64;

/// A linear automorphism T with T(x) = y, built as a composition of symmetries.
#[derive(Debug, Clone)]
pub struct Transport {
    pub map: LinearMap,
    /// Relative mismatch between the composed symmetries and the fitted matrix on check points.
    pub linearity_residual: f64,
    /// Number of extreme-direction legs on the path from x to y.
    pub legs: usize,
}

/// Builds T ∈ Aut(C) with T(x) = y.
///
/// The path from x to y follows the spectral decomposition of y − x, positive
/// legs first so every intermediate point stays interior. A leg w → w + λr
/// with M(r/w) = 1 is realized by S_{w+μr} ∘ S_w, μ = √(λ+1) − 1.
pub fn transport(
    model: &ConeModel,
    psi: &GaugeReverser,
    x: &Element,
    y: &Element,
    tol: &Tolerance,
) -> Result<Transport> {
    if !model.is_jordan() {
        return Err(Error::unsupported(
            "transport needs a gauge-reversing map, which only the symmetric-cone models provide",
        ));
    }
    if psi.domain() != model {
        return Err(Error::input(
            "gauge-reversing map is defined on a different model",
        ));
    }
    model.require_interior(x, "transport source", tol)?;
    model.require_interior(y, "transport target", tol)?;

    let diff = y - x;
    let spec = jordan::spectral(model, &diff)?;
    let cutoff = 1e-15 * (x.max_abs() + y.max_abs());
    let mut pending: Vec<(f64, Element)> = spec
        .eigenvalues
        .iter()
        .zip(&spec.idempotents)
        .filter(|(l, _)| l.abs() > cutoff)
        .map(|(l, p)| (*l, p.clone()))
        .collect();
    pending.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut pending: VecDeque<(f64, Element)> = pending.into();

    let mut steps: Vec<Symmetry> = Vec::new();
    let mut w = x.clone();
    let mut splits = 0;
    let mut legs = 0;
    while let Some((lambda, p)) = pending.pop_front() {
        let next = w.axpy(lambda, &p);
        if !model.contains(&next, true, tol.mem_eps) {
            splits += 1;
            if splits > MAX_SPLITS {
                return Err(Error::internal("transport path keeps leaving the interior"));
            }
            pending.push_front((lambda / 2.0, p.clone()));
            pending.push_front((lambda / 2.0, p));
            continue;
        }
        let m = model.gauge(&p, &w, tol)?;
        let r = p.scale(1.0 / m);
        let mu = (lambda * m + 1.0).sqrt() - 1.0;
        steps.push(symmetry_at(psi, &w, tol)?);
        steps.push(symmetry_at(psi, &w.axpy(mu, &r), tol)?);
        w = next;
        legs += 1;
    }

    let compose = |z: &Element| -> Result<Element> {
        let mut z = z.clone();
        for s in &steps {
            z = s.eval(&z, tol)?;
        }
        Ok(z)
    };

    let n = model.dim();
    let u = model.unit();
    let cols = (0..n)
        .map(|i| {
            let e = Element::basis(n, i);
            let plus = compose(&u.axpy(PROBE_STEP, &e))?;
            let minus = compose(&u.axpy(-PROBE_STEP, &e))?;
            Ok((&plus - &minus).scale(0.5 / PROBE_STEP))
        })
        .collect::<Result<Vec<_>>>()?;
    let matrix: DMatrix<f64> = linalg::columns(&cols);
    let map = LinearMap::new(matrix)?;

    let mut check_points = vec![u.clone(), x.clone()];
    check_points.extend(sample_interior(model, 0x7a5, 4));
    let mut linearity_residual: f64 = 0.0;
    for z in &check_points {
        let exact = compose(z)?;
        let fitted = map.apply(z);
        let rel = model.order_unit_norm(&(&exact - &fitted))? / model.order_unit_norm(&exact)?;
        linearity_residual = linearity_residual.max(rel);
    }
    if !(linearity_residual <= LINEARITY_LIMIT) {
        return Err(Error::internal(format!(
            "composed symmetries are not linear (residual {linearity_residual:e})"
        )));
    }
    Ok(Transport {
        map,
        linearity_residual,
        legs,
    })
}
