use nalgebra::DMatrix;

use super::GaugeReverser;
use crate::cone::{spanning_atoms, ConeModel};
use crate::element::Element;
use crate::error::{Error, Result};
use crate::jordan;
use crate::linalg;
use crate::tolerance::Tolerance;

/// Image of the extreme half-line {x + t p : t > −1} under Ψ.
#[derive(Debug, Clone, PartialEq)]
pub struct HalflineImage {
    /// q = 2 (Ψ(x) − Ψ(x + p)).
    pub q: Element,
    /// max over the t-grid of ‖Ψ(x + t p) − Ψ(x) + t/(t+1) q‖_u.
    pub law_residual: f64,
    pub q_extreme: bool,
    /// M(q / Ψ(x)), which should be 1.
    pub q_gauge: f64,
}

/// Grid of 20 parameters in (−0.9, 9].
pub(crate) fn halfline_grid() -> impl Iterator<Item = f64> {
    (1..=20).map(|k| -0.9 + 9.9 * k as f64 / 20.0)
}

/// Checks that p is extreme with M(p/x) = 1.
pub(crate) fn require_atom_at(
    model: &ConeModel,
    x: &Element,
    p: &Element,
    tol: &Tolerance,
) -> Result<()> {
    model.require_interior(x, "base point", tol)?;
    let extreme = model
        .is_extreme_vector(p, tol)
        .map_err(|e| Error::Precondition(format!("direction is not an extreme vector: {e}")))?;
    if !extreme {
        return Err(Error::Precondition(
            "direction is not an extreme vector".into(),
        ));
    }
    let m = model.gauge(p, x, tol)?;
    if (m - 1.0).abs() > tol.eq_rtol {
        return Err(Error::Precondition(format!(
            "extreme vector must satisfy M(p/x) = 1, got {m}"
        )));
    }
    Ok(())
}

fn halfline_q(psi: &GaugeReverser, x: &Element, p: &Element, tol: &Tolerance) -> Result<Element> {
    Ok((&psi.apply(x, tol)? - &psi.apply(&(x + p), tol)?).scale(2.0))
}

pub fn extreme_halfline_image(
    psi: &GaugeReverser,
    x: &Element,
    p: &Element,
    tol: &Tolerance,
) -> Result<HalflineImage> {
    let (dom, cod) = (psi.domain(), psi.codomain());
    require_atom_at(dom, x, p, tol)?;
    let px = psi.apply(x, tol)?;
    let q = halfline_q(psi, x, p, tol)?;
    let mut law_residual: f64 = 0.0;
    for t in halfline_grid() {
        let predicted = px.axpy(-t / (t + 1.0), &q);
        let actual = psi.apply(&x.axpy(t, p), tol)?;
        law_residual = law_residual.max(cod.order_unit_norm(&(&actual - &predicted))?);
    }
    let q_extreme = cod.is_extreme_vector(&q, tol).unwrap_or(false);
    let q_gauge = cod.gauge(&q, &px, tol)?;
    Ok(HalflineImage {
        q,
        law_residual,
        q_extreme,
        q_gauge,
    })
}

/// Central difference (Ψ(x + h y) − Ψ(x − h y)) / 2h with h = fd_step ‖x‖_u / ‖y‖_u.
pub fn gateaux_fd(
    psi: &GaugeReverser,
    x: &Element,
    y: &Element,
    tol: &Tolerance,
) -> Result<Element> {
    let dom = psi.domain();
    dom.require_interior(x, "base point", tol)?;
    dom.check_dim(y)?;
    let ny = dom.order_unit_norm(y)?;
    if ny == 0.0 {
        return Ok(Element::zeros(psi.codomain().dim()));
    }
    let mut h = tol.fd_step * dom.order_unit_norm(x)? / ny;
    for attempt in 0..2 {
        let (plus, minus) = (x.axpy(h, y), x.axpy(-h, y));
        if dom.contains(&plus, true, tol.mem_eps) && dom.contains(&minus, true, tol.mem_eps) {
            return Ok((&psi.apply(&plus, tol)? - &psi.apply(&minus, tol)?).scale(0.5 / h));
        }
        if attempt == 0 {
            h /= 10.0;
        }
    }
    Err(Error::domain("finite-difference probe leaves the interior"))
}

/// dim(V) extreme vectors rₖ = Q_{√x}(pₖ) with M(rₖ/x) = 1, spanning V.
pub(crate) fn atom_frame_at(
    model: &ConeModel,
    x: &Element,
    tol: &Tolerance,
) -> Result<Vec<Element>> {
    let root = jordan::sqrt(model, x, tol)?;
    spanning_atoms(model)?
        .iter()
        .map(|p| {
            let r = jordan::quad_rep(model, &root, p)?;
            let m = model.gauge(&r, x, tol)?;
            Ok(r.scale(1.0 / m))
        })
        .collect()
}

/// DΨ(x) as a matrix: DΨ(x)(Σλₖrₖ) = −Σλₖqₖ over the atom frame at x; by
/// central differences on the coordinate basis when the domain has no Jordan
/// structure.
pub fn derivative_matrix(
    psi: &GaugeReverser,
    x: &Element,
    tol: &Tolerance,
) -> Result<DMatrix<f64>> {
    let dom = psi.domain();
    dom.require_interior(x, "base point", tol)?;
    if !dom.is_jordan() {
        let n = dom.dim();
        let cols = (0..n)
            .map(|i| gateaux_fd(psi, x, &Element::basis(n, i), tol))
            .collect::<Result<Vec<_>>>()?;
        return Ok(linalg::columns(&cols));
    }
    let frame = atom_frame_at(dom, x, tol)?;
    let r = linalg::columns(&frame);
    if linalg::inverse_condition(&r) < 1e-12 {
        return Err(Error::Singular(format!(
            "extreme-vector frame at x is degenerate ({} vectors)",
            frame.len()
        )));
    }
    let r_inv = r
        .try_inverse()
        .ok_or_else(|| Error::Singular("extreme-vector frame at x is degenerate".into()))?;
    let qs = frame
        .iter()
        .map(|rk| halfline_q(psi, x, rk, tol))
        .collect::<Result<Vec<_>>>()?;
    Ok(-(linalg::columns(&qs) * r_inv))
}

/// DΨ(x)(y) via the extreme half-line law.
pub fn gateaux_atoms(
    psi: &GaugeReverser,
    x: &Element,
    y: &Element,
    tol: &Tolerance,
) -> Result<Element> {
    if !psi.domain().is_jordan() {
        return Err(Error::unsupported(
            "atom-based derivative needs a symmetric-cone model",
        ));
    }
    psi.domain().check_dim(y)?;
    Ok(Element::from_vector(
        &(derivative_matrix(psi, x, tol)? * y.to_vector()),
    ))
}

/// S_x(y) = −DΨ⁻¹(Ψ(x))(Ψ(y)), stored as the linear part L = −DΨ⁻¹(Ψ(x)).
#[derive(Debug, Clone)]
pub struct Symmetry {
    psi: GaugeReverser,
    x: Element,
    linear: DMatrix<f64>,
}

impl Symmetry {
    pub fn center(&self) -> &Element {
        &self.x
    }

    pub fn model(&self) -> &ConeModel {
        self.psi.domain()
    }

    pub fn reverser(&self) -> &GaugeReverser {
        &self.psi
    }

    pub fn eval(&self, y: &Element, tol: &Tolerance) -> Result<Element> {
        let py = self.psi.apply(y, tol)?;
        Ok(Element::from_vector(&(&self.linear * py.to_vector())))
    }
}

pub fn symmetry_at(psi: &GaugeReverser, x: &Element, tol: &Tolerance) -> Result<Symmetry> {
    let px = psi.apply(x, tol)?;
    let linear = -derivative_matrix(&psi.inverse(), &px, tol)?;
    Ok(Symmetry {
        psi: psi.clone(),
        x: x.clone(),
        linear,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn close(a: &Element, b: &Element, eps: f64) -> bool {
        (a - b).max_abs() <= eps * b.max_abs().max(1.0)
    }

    #[test]
    fn halfline_examples() {
        let t = tol();
        let o2 = ConeModel::Orthant(2);
        let psi = GaugeReverser::jordan_inverse(&o2).unwrap();
        let img = extreme_halfline_image(&psi, &o2.unit(), &Element::basis(2, 0), &t).unwrap();
        assert!(close(&img.q, &Element::basis(2, 0), 1e-14));
        assert!(img.law_residual <= 1e-9 && img.q_extreme && (img.q_gauge - 1.0).abs() < 1e-12);

        let m = ConeModel::SymMat(2);
        let e11 = Element::from([1.0, 0.0, 0.0]);
        let psi = GaugeReverser::jordan_inverse(&m).unwrap();
        let img = extreme_halfline_image(&psi, &m.unit(), &e11, &t).unwrap();
        assert!(close(&img.q, &e11, 1e-14));

        let cx = GaugeReverser::counterexample();
        let img = extreme_halfline_image(&cx, &m.unit(), &e11, &t).unwrap();
        assert!(img.law_residual <= 1e-7 && img.q_extreme);

        let err = extreme_halfline_image(&psi, &m.unit(), &e11.scale(2.0), &t).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
        let err = extreme_halfline_image(&psi, &m.unit(), &m.unit(), &t).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }

    #[test]
    fn fd_examples() {
        let t = tol();
        let o2 = ConeModel::Orthant(2);
        let psi = GaugeReverser::jordan_inverse(&o2).unwrap();
        let x = Element::from([1.0, 2.0]);
        let y = Element::from([1.0, 1.0]);
        let d = gateaux_fd(&psi, &x, &y, &t).unwrap();
        assert!(close(&d, &Element::from([-1.0, -0.25]), 1e-8));
        let d3 = gateaux_fd(&psi, &x, &y.scale(3.0), &t).unwrap();
        assert!(close(&d3, &d.scale(3.0), 1e-8));

        let m = ConeModel::SymMat(2);
        let psi = GaugeReverser::jordan_inverse(&m).unwrap();
        let off = Element::from([0.0, 1.0, 0.0]);
        assert!(close(
            &gateaux_fd(&psi, &m.unit(), &off, &t).unwrap(),
            &-&off,
            1e-8
        ));
    }

    #[test]
    fn atom_examples() {
        let t = tol();
        let o2 = ConeModel::Orthant(2);
        let psi = GaugeReverser::jordan_inverse(&o2).unwrap();
        let d = gateaux_atoms(&psi, &o2.unit(), &Element::from([1.0, -2.0]), &t).unwrap();
        assert!(close(&d, &Element::from([-1.0, 2.0]), 1e-14));

        let m = ConeModel::SymMat(2);
        let psi = GaugeReverser::jordan_inverse(&m).unwrap();
        let x = Element::from([4.0, 0.0, 1.0]);
        let d = gateaux_atoms(&psi, &x, &m.unit(), &t).unwrap();
        // −X⁻¹ I X⁻¹ = −diag(1/16, 1)
        assert!(close(&d, &Element::from([-1.0 / 16.0, 0.0, -1.0]), 1e-13));

        let mut rng = crate::cone::seeded_rng(2);
        for model in [
            ConeModel::SymMat(3),
            ConeModel::Spin(3),
            ConeModel::Orthant(3),
        ] {
            let psi = GaugeReverser::jordan_inverse(&model).unwrap();
            for x in crate::cone::sample_interior(&model, 5, 10) {
                let y = crate::cone::sample_element(&model, &mut rng);
                let a = gateaux_atoms(&psi, &x, &y, &t).unwrap();
                let f = gateaux_fd(&psi, &x, &y, &t).unwrap();
                assert!(close(&a, &f, 1e-5));
            }
        }
        assert!(gateaux_atoms(&psi, &x, &Element::from([1.0, 0.0]), &t).is_err());
    }

    #[test]
    fn symmetry_examples() {
        let t = tol();
        let m = ConeModel::SymMat(2);
        let psi = GaugeReverser::jordan_inverse(&m).unwrap();
        let s = symmetry_at(&psi, &Element::from([2.0, 0.0, 1.0]), &t).unwrap();
        assert!(close(
            &s.eval(&m.unit(), &t).unwrap(),
            &Element::from([4.0, 0.0, 1.0]),
            1e-12
        ));
        assert!(close(&s.eval(s.center(), &t).unwrap(), s.center(), 1e-12));

        let o2 = ConeModel::Orthant(2);
        let psi = GaugeReverser::jordan_inverse(&o2).unwrap();
        let s = symmetry_at(&psi, &Element::from([2.0, 1.0]), &t).unwrap();
        assert!(close(
            &s.eval(&o2.unit(), &t).unwrap(),
            &Element::from([4.0, 1.0]),
            1e-12
        ));

        // the counterexample induces the same symmetry as ι
        let cx = GaugeReverser::counterexample();
        let iota = GaugeReverser::jordan_inverse(&m).unwrap();
        let x = Element::from([2.0, 0.5, 1.0]);
        let (s1, s2) = (
            symmetry_at(&cx, &x, &t).unwrap(),
            symmetry_at(&iota, &x, &t).unwrap(),
        );
        let y = Element::from([1.0, -0.3, 3.0]);
        assert!(close(
            &s1.eval(&y, &t).unwrap(),
            &s2.eval(&y, &t).unwrap(),
            1e-10
        ));
    }
}
