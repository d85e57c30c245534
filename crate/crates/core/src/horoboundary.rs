//! Funk and reverse-Funk horofunctions, Busemann points, the detour cost and
//! detour metric, parts, and the extension of gauge-reversing maps to the
//! boundary.
//!
//! Reverse-Funk Busemann points are x ↦ log M(g/x) for g ∈ ∂C with ‖g‖_u = 1.
//! On the symmetric models the Funk Busemann points are x ↦ log M(z/x⁻¹). Both
//! are normalized to vanish at a basepoint (u by default).

use nalgebra::DMatrix;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cone::{sample_atom, sample_boundary, sample_interior_with, seeded_rng, ConeModel};
use crate::duality::{atom_to_pure_state_via_psi, bilinear_b, pure_state_of_atom};
use crate::element::Element;
use crate::error::{Error, Result};
use crate::jordan;
use crate::metric::{funk, reverse_funk};
use crate::report::{par_max, Check, Report};
use crate::reversal::GaugeReverser;
use crate::tolerance::Tolerance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Flavor {
    ReverseFunk,
    Funk,
}

fn require_funk_model(model: &ConeModel) -> Result<()> {
    if model.is_jordan() {
        Ok(())
    } else {
        Err(Error::unsupported(
            "Funk horofunctions need the Jordan inverse",
        ))
    }
}

/// x ↦ ρ(x, y) − ρ(b, y) for ρ ∈ {F, RF}.
#[derive(Debug, Clone)]
pub struct InternalPoint {
    pub flavor: Flavor,
    pub y: Element,
    pub basepoint: Element,
}

pub fn internal_point(
    model: &ConeModel,
    flavor: Flavor,
    y: &Element,
    tol: &Tolerance,
) -> Result<InternalPoint> {
    model.require_interior(y, "internal point", tol)?;
    Ok(InternalPoint {
        flavor,
        y: y.clone(),
        basepoint: model.unit(),
    })
}

impl InternalPoint {
    pub fn eval(&self, model: &ConeModel, x: &Element, tol: &Tolerance) -> Result<f64> {
        let rho = |a: &Element| match self.flavor {
            Flavor::ReverseFunk => reverse_funk(model, a, &self.y, tol),
            Flavor::Funk => funk(model, a, &self.y, tol),
        };
        Ok(rho(x)? - rho(&self.basepoint)?)
    }
}

/// h_g(x) = log M(g/x).
pub fn rf_busemann_eval(
    model: &ConeModel,
    g: &Element,
    x: &Element,
    tol: &Tolerance,
) -> Result<f64> {
    Ok(model.gauge(g, x, tol)?.ln())
}

/// h_z(x) = log M(z/x⁻¹).
pub fn funk_busemann_eval(
    model: &ConeModel,
    z: &Element,
    x: &Element,
    tol: &Tolerance,
) -> Result<f64> {
    require_funk_model(model)?;
    model.require_interior(x, "horofunction argument", tol)?;
    Ok(model.gauge(z, &jordan::inverse(model, x, tol)?, tol)?.ln())
}

/// A Busemann point, represented by its boundary vector.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BusemannPoint {
    pub flavor: Flavor,
    /// g (reverse-Funk) or z (Funk), with ‖·‖_u = 1.
    pub vector: Element,
    pub basepoint: Element,
}

fn normalized_boundary(model: &ConeModel, v: &Element, tol: &Tolerance) -> Result<Element> {
    model.check_dim(v)?;
    if !model.contains(v, false, tol.mem_eps.max(1e-9 * v.max_abs())) {
        return Err(Error::input("Busemann vector is not in the cone"));
    }
    let norm = model.order_unit_norm(v)?;
    if norm <= 1e-12 {
        return Err(Error::input("Busemann vector is zero"));
    }
    let g = v.scale(1.0 / norm);
    if model.contains(&g, true, tol.mem_eps) {
        return Err(Error::input(
            "interior vector gives an internal point, not a Busemann point",
        ));
    }
    Ok(g)
}

impl BusemannPoint {
    pub fn reverse_funk(model: &ConeModel, g: &Element, tol: &Tolerance) -> Result<Self> {
        Ok(BusemannPoint {
            flavor: Flavor::ReverseFunk,
            vector: normalized_boundary(model, g, tol)?,
            basepoint: model.unit(),
        })
    }

    pub fn funk(model: &ConeModel, z: &Element, tol: &Tolerance) -> Result<Self> {
        require_funk_model(model)?;
        Ok(BusemannPoint {
            flavor: Flavor::Funk,
            vector: normalized_boundary(model, z, tol)?,
            basepoint: model.unit(),
        })
    }

    pub fn with_basepoint(mut self, b: Element) -> Self {
        self.basepoint = b;
        self
    }

    /// The horofunction without basepoint normalization.
    fn raw(&self, model: &ConeModel, x: &Element, tol: &Tolerance) -> Result<f64> {
        match self.flavor {
            Flavor::ReverseFunk => rf_busemann_eval(model, &self.vector, x, tol),
            Flavor::Funk => funk_busemann_eval(model, &self.vector, x, tol),
        }
    }

    /// h(x) − h(b).
    pub fn eval(&self, model: &ConeModel, x: &Element, tol: &Tolerance) -> Result<f64> {
        Ok(self.raw(model, x, tol)? - self.raw(model, &self.basepoint, tol)?)
    }
}

/// Largest defect ρ(s, y_α) + ρ(y_α, y_β) − ρ(s, y_β) over α < β, and largest
/// increase of the internal points i_ρ(y_α) along the sequence on a probe grid,
/// both restricted to the second half of the sequence.
pub fn almost_geodesic_check(
    model: &ConeModel,
    seq: &[Element],
    flavor: Flavor,
    threshold: f64,
    tol: &Tolerance,
) -> Result<Report> {
    if seq.len() < 3 {
        return Err(Error::input(
            "almost-geodesic check needs at least three points",
        ));
    }
    let s = model.unit();
    let rho = |a: &Element, b: &Element| match flavor {
        Flavor::ReverseFunk => reverse_funk(model, a, b, tol),
        Flavor::Funk => funk(model, a, b, tol),
    };
    let start = seq.len() / 2;
    let mut defect: f64 = 0.0;
    for a in start..seq.len() {
        for b in a + 1..seq.len() {
            let d = rho(&s, &seq[a])? + rho(&seq[a], &seq[b])? - rho(&s, &seq[b])?;
            defect = defect.max(d);
        }
    }
    let probes = probe_grid(model, 0x9e0, 12);
    let points = seq[start..]
        .iter()
        .map(|y| internal_point(model, flavor, y, tol))
        .collect::<Result<Vec<_>>>()?;
    let mut increase: f64 = 0.0;
    for x in &probes {
        let values = points
            .iter()
            .map(|p| p.eval(model, x, tol))
            .collect::<Result<Vec<_>>>()?;
        for a in 0..values.len() {
            for b in a + 1..values.len() {
                increase = increase.max(values[b] - values[a]);
            }
        }
    }
    Ok(Report {
        checks: vec![
            Check::at_most("almost_geodesic_defect", defect, threshold),
            Check::at_most("internal_points_non_increasing", increase, threshold),
        ],
    })
}

/// Points x = u + d/2 with ‖d‖_u = 1, so u/2 ≤ x ≤ 3u/2.
fn probe_grid(model: &ConeModel, seed: u64, count: usize) -> Vec<Element> {
    let mut rng = seeded_rng(seed);
    let u = model.unit();
    (0..count)
        .map(|_| {
            let d = crate::cone::sample_element(model, &mut rng);
            let n = model.order_unit_norm(&d).unwrap_or(1.0).max(1e-12);
            u.axpy(0.5 / n, &d)
        })
        .collect()
}

const DETOUR_CAP: f64 = 50.0;
const DETOUR_STARTS: usize = 64;
const CLIMB_STEPS: usize = 40;
/// ε = 10⁻ʲ for j ≤ VALUE_DECADES gives the value of the directional limit;
/// the smaller ε down to 10^-DIVERGENCE_DECADES only serve the divergence test.
const VALUE_DECADES: i32 = 8;
const DIVERGENCE_DECADES: i32 = 14;

/// sup over x ∈ C° of log M(h/x) − log M(g/x), by the directional limit along
/// g + εu and multi-start ascent.
///
/// The ratio is bounded by log M(h/g) and tends to it along g + εu, so the
/// directional limit is exact; a divergent limit grows like log(1/ε).
fn sup_log_ratio(model: &ConeModel, g: &Element, h: &Element, seed: u64) -> f64 {
    // the SymMat gauge already fails off the interior (no Cholesky factor)
    let screen = !matches!(model, ConeModel::SymMat(_));
    let f = |x: &Element| -> Option<f64> {
        if screen && !model.contains(x, true, 0.0) {
            return None;
        }
        let (a, b) = model.gauge_pair_unchecked(h, g, x).ok()?;
        Some(a.ln() - b.ln())
    };
    let u = model.unit();
    let limits: Vec<(i32, f64)> = (1..=DIVERGENCE_DECADES)
        .filter_map(|j| f(&g.axpy(10f64.powi(-j), &u)).map(|v| (j, v)))
        .collect();
    if limits.iter().any(|(_, v)| *v > DETOUR_CAP) {
        return f64::INFINITY;
    }
    if let [.., (j0, v0), _, _, (j1, v1)] = limits.as_slice() {
        let slope = (v1 - v0) / ((j1 - j0) as f64 * std::f64::consts::LN_10);
        if slope > 0.5 {
            return f64::INFINITY;
        }
    }
    let directional = limits
        .iter()
        .filter(|(j, _)| *j <= VALUE_DECADES)
        .map(|(_, v)| *v)
        .fold(f64::NEG_INFINITY, f64::max);

    let climbs: f64 = (0..DETOUR_STARTS)
        .into_par_iter()
        .map(|k| {
            let mut rng =
                seeded_rng(seed.wrapping_add(0x9e37_79b9_7f4a_7c15u64.wrapping_mul(k as u64 + 1)));
            let mut x = sample_interior_with(model, &mut rng);
            let Some(mut best) = f(&x) else {
                return f64::NEG_INFINITY;
            };
            let mut step = 0.5;
            for _ in 0..CLIMB_STEPS {
                let d = crate::cone::sample_element(model, &mut rng);
                let scale = x.euclidean_norm() / d.euclidean_norm().max(1e-12);
                let cand = x.axpy(step * scale, &d);
                match f(&cand) {
                    Some(v) if v > best => {
                        best = v;
                        x = cand;
                        step = (step * 1.5).min(2.0);
                    }
                    _ => step *= 0.7,
                }
                if best > DETOUR_CAP {
                    return f64::INFINITY;
                }
            }
            best
        })
        .reduce(|| f64::NEG_INFINITY, f64::max);
    directional.max(climbs)
}

fn check_pair(a: &BusemannPoint, b: &BusemannPoint) -> Result<()> {
    if a.flavor != b.flavor {
        return Err(Error::input(
            "detour cost between Busemann points of different flavors",
        ));
    }
    if a.basepoint != b.basepoint {
        return Err(Error::input(
            "detour cost between Busemann points with different basepoints",
        ));
    }
    Ok(())
}

/// Basepoint correction H_h(b) − H_g(b).
fn basepoint_shift(
    model: &ConeModel,
    g: &BusemannPoint,
    h: &BusemannPoint,
    tol: &Tolerance,
) -> Result<f64> {
    Ok(h.raw(model, &h.basepoint, tol)? - g.raw(model, &g.basepoint, tol)?)
}

/// δ(g, h) = sup_x h_h(x) − h_g(x).
///
/// Reverse-Funk on the orthant uses log maxᵢ hᵢ/gᵢ (0/0 skipped, c/0 = ∞);
/// everything else is maximized numerically. Funk points reduce to the
/// reverse-Funk case through x ↦ x⁻¹.
pub fn detour_cost(
    model: &ConeModel,
    g: &BusemannPoint,
    h: &BusemannPoint,
    tol: &Tolerance,
) -> Result<f64> {
    check_pair(g, h)?;
    let sup = match (model, g.flavor) {
        (ConeModel::Orthant(_), Flavor::ReverseFunk) => orthant_log_ratio(&g.vector, &h.vector),
        _ => sup_log_ratio(model, &g.vector, &h.vector, 0x5eed),
    };
    if sup == f64::INFINITY {
        return Ok(f64::INFINITY);
    }
    Ok((sup - basepoint_shift(model, g, h, tol)?).max(0.0))
}

fn orthant_log_ratio(g: &Element, h: &Element) -> f64 {
    let mut best = f64::NEG_INFINITY;
    for (gi, hi) in g.as_slice().iter().zip(h.as_slice()) {
        match (*gi > 0.0, *hi > 0.0) {
            (true, _) => best = best.max(hi / gi),
            (false, true) => return f64::INFINITY,
            (false, false) => {}
        }
    }
    best.ln()
}

/// δ(g, h) = log M(h/g) − (H_h(b) − H_g(b)), the boundary-gauge closed form.
pub fn detour_cost_closed_form(
    model: &ConeModel,
    g: &BusemannPoint,
    h: &BusemannPoint,
    tol: &Tolerance,
) -> Result<f64> {
    check_pair(g, h)?;
    let m = model.boundary_gauge(&h.vector, &g.vector, tol)?;
    if m == f64::INFINITY {
        return Ok(f64::INFINITY);
    }
    Ok((m.ln() - basepoint_shift(model, g, h, tol)?).max(0.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DetourResult {
    pub delta_gh: f64,
    pub delta_hg: f64,
    /// Δ(g, h) = δ(g, h) + δ(h, g).
    pub total: f64,
}

pub fn detour(
    model: &ConeModel,
    g: &BusemannPoint,
    h: &BusemannPoint,
    tol: &Tolerance,
) -> Result<DetourResult> {
    let delta_gh = detour_cost(model, g, h, tol)?;
    let delta_hg = detour_cost(model, h, g, tol)?;
    Ok(DetourResult {
        delta_gh,
        delta_hg,
        total: delta_gh + delta_hg,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PartCertificate {
    pub same: bool,
    /// Smallest λ with g′/λ ≤ g ≤ λ g′ (∞ when none exists).
    pub lambda: f64,
}

pub fn same_part(
    model: &ConeModel,
    g: &BusemannPoint,
    h: &BusemannPoint,
    tol: &Tolerance,
) -> Result<PartCertificate> {
    check_pair(g, h)?;
    let lambda = model
        .boundary_gauge(&h.vector, &g.vector, tol)?
        .max(model.boundary_gauge(&g.vector, &h.vector, tol)?);
    Ok(PartCertificate {
        same: lambda.is_finite(),
        lambda,
    })
}

/// One-point parts: the boundary vector spans an extreme ray.
pub fn is_singleton(model: &ConeModel, b: &BusemannPoint, tol: &Tolerance) -> Result<bool> {
    model.is_extreme_vector(&b.vector, tol)
}

/// Image of a reverse-Funk singleton under the isometry induced by Ψ: the Funk
/// point of K whose horofunction is log ψ for the pure state ψ = M(g/Ψ⁻¹(·)),
/// based at Ψ(u).
pub fn boundary_extension(
    psi: &GaugeReverser,
    b: &BusemannPoint,
    tol: &Tolerance,
) -> Result<BusemannPoint> {
    let (dom, cod) = (psi.domain(), psi.codomain());
    if b.flavor != Flavor::ReverseFunk || !is_singleton(dom, b, tol)? {
        return Err(Error::unsupported(
            "only reverse-Funk singletons are extended to the boundary",
        ));
    }
    if b.basepoint != dom.unit() {
        return Err(Error::unsupported(
            "boundary extension expects the unit as basepoint",
        ));
    }
    let state = atom_to_pure_state_via_psi(psi, &b.vector, tol)?;
    // B-Riesz representer of ψ: Gram(B) z = (ψ(eᵢ))ᵢ
    let n = cod.dim();
    let basis: Vec<Element> = (0..n).map(|i| Element::basis(n, i)).collect();
    let gram = DMatrix::from_fn(n, n, |i, j| {
        bilinear_b(cod, &basis[i], &basis[j]).unwrap_or(f64::NAN)
    });
    let values = basis
        .iter()
        .map(|e| state.eval_linear(e, tol))
        .collect::<Result<Vec<_>>>()?;
    let z = gram
        .lu()
        .solve(&nalgebra::DVector::from_vec(values))
        .ok_or_else(|| Error::Singular("bilinear form is degenerate".into()))?;
    let z = Element::from_vector(&z);
    let point = BusemannPoint::funk(cod, &z, tol)?.with_basepoint(psi.apply(&dom.unit(), tol)?);
    Ok(point)
}

/// Serializable summary of a set of boundary points.
#[derive(Debug, Clone, Serialize)]
pub struct BoundarySummary {
    pub flavor: Flavor,
    pub points: Vec<Element>,
    pub singleton: Vec<bool>,
    /// part_certificate[i][j] = λ for points i and j.
    pub part_certificate: Vec<Vec<f64>>,
    /// detour_table[i][j] = Δ(pᵢ, pⱼ).
    pub detour_table: Vec<Vec<f64>>,
}

pub fn boundary_summary(
    model: &ConeModel,
    points: &[BusemannPoint],
    tol: &Tolerance,
) -> Result<BoundarySummary> {
    let flavor = points
        .first()
        .map(|p| p.flavor)
        .unwrap_or(Flavor::ReverseFunk);
    let mut part_certificate = Vec::new();
    let mut detour_table = Vec::new();
    for a in points {
        let mut lam = Vec::new();
        let mut det = Vec::new();
        for b in points {
            lam.push(same_part(model, a, b, tol)?.lambda);
            det.push(detour(model, a, b, tol)?.total);
        }
        part_certificate.push(lam);
        detour_table.push(det);
    }
    Ok(BoundarySummary {
        flavor,
        points: points.iter().map(|p| p.vector.clone()).collect(),
        singleton: points
            .iter()
            .map(|p| is_singleton(model, p, tol))
            .collect::<Result<_>>()?,
        part_certificate,
        detour_table,
    })
}

/// A boundary point in the same part as g: reweight the nonzero spectral
/// components of g, which keeps the support face exactly.
fn same_part_companion<R: Rng>(
    model: &ConeModel,
    g: &Element,
    rng: &mut R,
    _tol: &Tolerance,
) -> Result<Element> {
    if model.is_jordan() {
        let spec = jordan::spectral(model, g)?;
        let cutoff = 1e-9 * spec.max_abs_eigenvalue();
        let mut h = Element::zeros(model.dim());
        for (l, c) in spec.eigenvalues.iter().zip(&spec.idempotents) {
            if *l > cutoff {
                h = h.axpy(0.2 + rng.random::<f64>(), c);
            }
        }
        Ok(h)
    } else {
        Ok(g.scale(1.0 + rng.random::<f64>()))
    }
}

fn rel_or_both_infinite(a: f64, b: f64) -> f64 {
    if a.is_infinite() && b.is_infinite() && a.signum() == b.signum() {
        0.0
    } else {
        (a - b).abs()
    }
}

/// Per-triple detour tables: costs at u, costs at 2u, worst closed-form mismatch.
type TripleTables = ([[f64; 3]; 3], [[f64; 3]; 3], f64);

/// Detour-metric axioms, basepoint independence, agreement of the numerical
/// detour cost with the closed form, part certificates, and Δ = ∞ between
/// distinct singletons.
pub fn verify_detour_metric(
    model: &ConeModel,
    flavor: Flavor,
    seed: u64,
    samples: usize,
    tol: &Tolerance,
) -> Result<Report> {
    if flavor == Flavor::Funk {
        require_funk_model(model)?;
    }
    let make = |v: &Element| match flavor {
        Flavor::ReverseFunk => BusemannPoint::reverse_funk(model, v, tol),
        Flavor::Funk => BusemannPoint::funk(model, v, tol),
    };
    let mut rng = seeded_rng(seed);
    let mut triples = Vec::new();
    for _ in 0..samples.max(1) {
        let g = sample_boundary(model, &mut rng)?;
        let h = same_part_companion(model, &g, &mut rng, tol)?;
        let k = if rng.random::<f64>() < 0.5 {
            same_part_companion(model, &g, &mut rng, tol)?
        } else {
            sample_boundary(model, &mut rng)?
        };
        triples.push([make(&g)?, make(&h)?, make(&k)?]);
    }
    let big = model.unit().scale(2.0);
    let delta = |a: &BusemannPoint, b: &BusemannPoint| -> Result<f64> {
        Ok(detour_cost(model, a, b, tol)? + detour_cost(model, b, a, tol)?)
    };
    // cost[i][j] = δ(pᵢ, pⱼ) at basepoint u, moved[i][j] the same at 2u
    let tables: Vec<Result<TripleTables>> = triples
        .par_iter()
        .map(|pts| {
            let moved_pts: Vec<BusemannPoint> = pts
                .iter()
                .map(|p| p.clone().with_basepoint(big.clone()))
                .collect();
            let mut cost = [[0.0; 3]; 3];
            let mut moved = [[0.0; 3]; 3];
            let mut closed: f64 = 0.0;
            for i in 0..3 {
                for j in 0..3 {
                    cost[i][j] = detour_cost(model, &pts[i], &pts[j], tol)?;
                    if i != j {
                        moved[i][j] = detour_cost(model, &moved_pts[i], &moved_pts[j], tol)?;
                        closed = closed.max(rel_or_both_infinite(
                            cost[i][j],
                            detour_cost_closed_form(model, &pts[i], &pts[j], tol)?,
                        ));
                    }
                }
            }
            Ok((cost, moved, closed))
        })
        .collect();
    let sym = |c: &[[f64; 3]; 3], i: usize, j: usize| c[i][j] + c[j][i];

    let nonneg_identity = par_max(&tables, |t| {
        let (c, _, _) = t.as_ref().map_err(Clone::clone)?;
        let mut worst: f64 = 0.0;
        for (i, row) in c.iter().enumerate() {
            worst = worst.max(row[i].abs());
            for v in row {
                worst = worst.max((-v).max(0.0));
            }
        }
        Ok(worst)
    });
    let triangle = par_max(&tables, |t| {
        let (c, _, _) = t.as_ref().map_err(Clone::clone)?;
        let (gh, hk, gk) = (sym(c, 0, 1), sym(c, 1, 2), sym(c, 0, 2));
        Ok(if gh.is_finite() && hk.is_finite() {
            (gk - gh - hk).max(0.0)
        } else {
            0.0
        })
    });
    let basepoint = par_max(&tables, |t| {
        let (c, m, _) = t.as_ref().map_err(Clone::clone)?;
        let mut worst: f64 = 0.0;
        for (i, j) in [(0, 1), (1, 2), (0, 2)] {
            worst = worst.max(rel_or_both_infinite(sym(c, i, j), sym(m, i, j)));
        }
        Ok(worst)
    });
    let closed_form = par_max(&tables, |t| Ok(t.as_ref().map_err(Clone::clone)?.2));
    let parts = par_max(
        &triples.iter().zip(&tables).collect::<Vec<_>>(),
        |(pts, t)| {
            let (c, _, _) = t.as_ref().map_err(Clone::clone)?;
            let mut bad = 0.0;
            for j in [1, 2] {
                if same_part(model, &pts[0], &pts[j], tol)?.same != sym(c, 0, j).is_finite() {
                    bad = 1.0;
                }
            }
            Ok(bad)
        },
    );

    let mut report = Report {
        checks: vec![
            Check::at_most(
                "detour_nonnegative_and_zero_on_diagonal",
                nonneg_identity,
                1e-9,
            ),
            Check::at_most("detour_triangle_inequality", triangle, 1e-7),
            Check::at_most("detour_basepoint_independent", basepoint, 1e-7),
            Check::at_most("detour_matches_closed_form", closed_form, 1e-6),
            Check::at_most("part_certificate_matches_detour", parts, 0.0),
        ],
    };

    if model.is_jordan() {
        let pairs: Vec<(Element, Element)> = (0..samples.max(1))
            .map(|_| Ok((sample_atom(model, &mut rng)?, sample_atom(model, &mut rng)?)))
            .collect::<Result<_>>()?;
        let singletons = par_max(&pairs, |(p, q)| {
            if (p - q).max_abs() <= 1e-6 {
                return Ok(0.0);
            }
            let (a, b) = (make(p)?, make(q)?);
            let single = is_singleton(model, &a, tol)? && is_singleton(model, &b, tol)?;
            Ok(if single && delta(&a, &b)? == f64::INFINITY {
                0.0
            } else {
                1.0
            })
        });
        report.push(Check::at_most(
            "distinct_singletons_infinitely_apart",
            singletons,
            0.0,
        ));
    }
    Ok(report)
}

/// i_RF(g + u/k) → h_g on a probe grid, and Funk singletons equal log ψ_p.
pub fn verify_busemann_convergence(
    model: &ConeModel,
    seed: u64,
    samples: usize,
    tol: &Tolerance,
) -> Result<Report> {
    let mut rng = seeded_rng(seed);
    let gs: Vec<Element> = (0..samples.max(1))
        .map(|_| sample_boundary(model, &mut rng))
        .collect::<Result<_>>()?;
    let probes = probe_grid(model, seed ^ 0xa11, 16);
    let u = model.unit();
    let error_at = |k: f64| {
        par_max(&gs, |g| {
            let y = g.axpy(1.0 / k, &u);
            let ip = internal_point(model, Flavor::ReverseFunk, &y, tol)?;
            let mut worst: f64 = 0.0;
            for x in &probes {
                worst = worst
                    .max((ip.eval(model, x, tol)? - rf_busemann_eval(model, g, x, tol)?).abs());
            }
            Ok(worst)
        })
    };
    let errors: Vec<f64> = [1e2, 1e4, 1e6].iter().map(|&k| error_at(k)).collect();
    let mut report = Report {
        checks: vec![
            Check::at_most("rf_internal_points_converge_k1e6", errors[2], 1e-5),
            Check::holds(
                "rf_convergence_error_decreasing",
                errors[0] >= errors[1] && errors[1] >= errors[2],
            ),
        ],
    };
    if model.is_jordan() {
        let atoms: Vec<Element> = (0..samples.max(1))
            .map(|_| sample_atom(model, &mut rng))
            .collect::<Result<_>>()?;
        let funk_err = par_max(&atoms, |p| {
            let s = pure_state_of_atom(model, p, tol)?;
            let mut worst: f64 = 0.0;
            for x in &probes {
                worst = worst.max((funk_busemann_eval(model, p, x, tol)? - s.eval(x).ln()).abs());
            }
            Ok(worst)
        });
        report.push(Check::at_most(
            "funk_singleton_is_log_pure_state",
            funk_err,
            1e-9,
        ));
    }
    Ok(report)
}

/// Φ(h)(x) = h(Ψ⁻¹(x)) − h(Ψ⁻¹(e)) pointwise, singletons map to singletons, and
/// Δ is preserved between images.
pub fn verify_boundary_extension(
    psi: &GaugeReverser,
    seed: u64,
    samples: usize,
    tol: &Tolerance,
) -> Result<Report> {
    let (dom, cod) = (psi.domain(), psi.codomain());
    let mut rng = seeded_rng(seed);
    let atoms: Vec<(Element, Element)> = (0..samples.max(1))
        .map(|_| Ok((sample_atom(dom, &mut rng)?, sample_atom(dom, &mut rng)?)))
        .collect::<Result<_>>()?;
    let probes: Vec<Element> = (0..12)
        .map(|_| sample_interior_with(cod, &mut rng))
        .collect();
    let e = psi.apply(&dom.unit(), tol)?;
    let base = psi.inverse_apply(&e, tol)?;

    let pointwise = par_max(&atoms, |(p, _)| {
        let b = BusemannPoint::reverse_funk(dom, p, tol)?;
        let image = boundary_extension(psi, &b, tol)?;
        let mut worst: f64 = 0.0;
        for x in &probes {
            let lhs = image.eval(cod, x, tol)?;
            let rhs = b.eval(dom, &psi.inverse_apply(x, tol)?, tol)? - b.eval(dom, &base, tol)?;
            worst = worst.max((lhs - rhs).abs());
        }
        Ok(worst)
    });
    let singleton = par_max(&atoms, |(p, _)| {
        let image = boundary_extension(psi, &BusemannPoint::reverse_funk(dom, p, tol)?, tol)?;
        Ok(if is_singleton(cod, &image, tol)? {
            0.0
        } else {
            1.0
        })
    });
    let detour_preserved = par_max(&atoms, |(p, q)| {
        let (a, b) = (
            BusemannPoint::reverse_funk(dom, p, tol)?,
            BusemannPoint::reverse_funk(dom, q, tol)?,
        );
        let (fa, fb) = (
            boundary_extension(psi, &a, tol)?,
            boundary_extension(psi, &b, tol)?,
        );
        let before =
            detour_cost_closed_form(dom, &a, &b, tol)? + detour_cost_closed_form(dom, &b, &a, tol)?;
        let after = detour_cost_closed_form(cod, &fa, &fb, tol)?
            + detour_cost_closed_form(cod, &fb, &fa, tol)?;
        Ok(
            rel_or_both_infinite(before, after).min(if before < 1e-6 && after < 1e-6 {
                0.0
            } else {
                f64::INFINITY
            }),
        )
    });
    Ok(Report {
        checks: vec![
            Check::at_most("extension_matches_pullback", pointwise, 1e-7),
            Check::at_most("extension_preserves_singletons", singleton, 0.0),
            Check::at_most("extension_preserves_detour_metric", detour_preserved, 1e-7),
        ],
    })
}
