use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::derivative::{atom_frame_at, halfline_grid};
use super::{derivative_matrix, transport, GaugeReverser, Symmetry};
use crate::cone::{sample_interior_with, seeded_rng, ConeModel};
use crate::element::Element;
use crate::error::Result;
use crate::metric::thompson;
use crate::report::{par_max, par_min, worst, Check, Report};
use crate::tolerance::{rel_diff, Tolerance};

/// Inverse-derivative and DS_x(x) = −Id checks are finite-difference bound.
const DERIVATIVE_LIMIT: f64 = 1e-4;
const TRANSPORT_LIMIT: f64 = 1e-6;
const SEPARATION_FLOOR: f64 = 0.1;
const FIXED_POINT_FLOOR: f64 = 0.05;

fn rel_norm(model: &ConeModel, err: &Element, scale: &Element) -> Result<f64> {
    Ok(model.order_unit_norm(err)? / model.order_unit_norm(scale)?.max(f64::MIN_POSITIVE))
}

/// Column-wise max over per-item residual vectors computed in parallel.
fn par_rows<T: Sync, const K: usize>(
    items: &[T],
    f: impl Fn(&T) -> Result<[f64; K]> + Sync,
) -> [f64; K] {
    items
        .par_iter()
        .map(|it| f(it).unwrap_or([f64::INFINITY; K]))
        .reduce(
            || [0.0; K],
            |a, b| std::array::from_fn(|k| worst(a[k], b[k])),
        )
}

/// Samples `count` interior pairs (v, w) with a positive scale s and an
/// increment c ∈ C°.
fn sample_quads(
    model: &ConeModel,
    seed: u64,
    count: usize,
) -> Vec<(Element, Element, f64, Element)> {
    let mut rng = seeded_rng(seed);
    (0..count)
        .map(|_| {
            let v = sample_interior_with(model, &mut rng);
            let w = sample_interior_with(model, &mut rng);
            let s = rng.sample::<f64, _>(StandardNormal).exp();
            let c = sample_interior_with(model, &mut rng).scale(rng.random::<f64>());
            (v, w, s, c)
        })
        .collect()
}

/// Samples M(v/w) = M(Ψ(w)/Ψ(v)), homogeneity of degree −1 and antitonicity.
pub fn verify_gauge_reversing(
    psi: &GaugeReverser,
    seed: u64,
    samples: usize,
    tol: &Tolerance,
) -> Report {
    let (dom, cod) = (psi.domain(), psi.codomain());
    let quads = sample_quads(dom, seed, samples.max(1));
    let [reversal, homogeneity, antitone] = par_rows(&quads, |(v, w, s, c)| {
        let (pv, pw) = (psi.apply(v, tol)?, psi.apply(w, tol)?);
        let reversal = rel_diff(dom.gauge(v, w, tol)?, cod.gauge(&pw, &pv, tol)?);
        let scaled = psi.apply(&v.scale(*s), tol)?;
        let homogeneity = rel_norm(cod, &(&scaled - &pv.scale(1.0 / s)), &pv.scale(1.0 / s))?;
        // v ≤ v + c must give Ψ(v + c) ≤ Ψ(v), i.e. M(Ψ(v + c)/Ψ(v)) ≤ 1
        let above = psi.apply(&(v + c), tol)?;
        let antitone = (cod.gauge(&above, &pv, tol)? - 1.0).max(0.0);
        Ok([reversal, homogeneity, antitone])
    });
    Report {
        checks: vec![
            Check::at_most("gauge_reversal", reversal, tol.eq_rtol),
            Check::at_most("homogeneity_degree_minus_one", homogeneity, tol.eq_rtol),
            Check::at_most("antitone", antitone, tol.eq_rtol),
        ],
    }
}

/// Involution, gauge reversal, DS_x(x) = −Id, degree −1, and separation of
/// S_x(y) from y for y ≠ x.
pub fn verify_symmetry(s: &Symmetry, seed: u64, samples: usize, tol: &Tolerance) -> Report {
    let model = s.model();
    let x = s.center();
    let quads = sample_quads(model, seed, samples.max(1));
    let [involution, reversal, homogeneity] = par_rows(&quads, |(v, w, k, _)| {
        let sv = s.eval(v, tol)?;
        let involution = rel_norm(model, &(&s.eval(&sv, tol)? - v), v)?;
        let sw = s.eval(w, tol)?;
        let reversal = rel_diff(model.gauge(v, w, tol)?, model.gauge(&sw, &sv, tol)?);
        let expected = sv.scale(1.0 / k);
        let homogeneity = rel_norm(model, &(&s.eval(&v.scale(*k), tol)? - &expected), &expected)?;
        Ok([involution, reversal, homogeneity])
    });
    let separation = par_min(&quads, |(v, _, _, _)| {
        let d = thompson(model, x, v, tol)?;
        if d < 1e-6 {
            return Ok(f64::INFINITY);
        }
        Ok(thompson(model, &s.eval(v, tol)?, v, tol)? / (2.0 * d))
    });

    let n = model.dim();
    let basis: Vec<usize> = (0..n).collect();
    let derivative = par_max(&basis, |&i| {
        let e = Element::basis(n, i);
        let h = tol.fd_step * model.order_unit_norm(x)?;
        let d = (&s.eval(&x.axpy(h, &e), tol)? - &s.eval(&x.axpy(-h, &e), tol)?).scale(0.5 / h);
        rel_norm(model, &(&d + &e), &e)
    });
    let center = s
        .eval(x, tol)
        .and_then(|sx| rel_norm(model, &(&sx - x), x))
        .unwrap_or(f64::INFINITY);

    Report {
        checks: vec![
            Check::at_most("fixes_center", center, tol.eq_rtol),
            Check::at_most("involution", involution, tol.eq_rtol),
            Check::at_most("gauge_reversal", reversal, tol.eq_rtol),
            Check::at_most(
                "derivative_at_center_is_minus_identity",
                derivative,
                DERIVATIVE_LIMIT,
            ),
            Check::at_most("homogeneity_degree_minus_one", homogeneity, tol.eq_rtol),
            Check::above("fixed_point_separation", separation, SEPARATION_FLOOR),
        ],
    }
}

/// (−DΨ⁻¹(Ψ(x))) ∘ (−DΨ(x)) = Id, and −DΨ(x) maps C into K.
pub fn verify_derivative_automorphism(
    psi: &GaugeReverser,
    seed: u64,
    samples: usize,
    tol: &Tolerance,
) -> Report {
    let (dom, cod) = (psi.domain(), psi.codomain());
    let quads = sample_quads(dom, seed, samples.max(1));
    let inv = psi.inverse();
    let [identity, positivity] = par_rows(&quads, |(x, _, _, c)| {
        let d = derivative_matrix(psi, x, tol)?;
        let d_inv = derivative_matrix(&inv, &psi.apply(x, tol)?, tol)?;
        let prod = &d_inv * &d;
        let n = dom.dim();
        let mut identity: f64 = 0.0;
        for i in 0..n {
            let e = Element::basis(n, i);
            let col = Element::from_vector(&prod.column(i).clone_owned());
            identity = identity.max(rel_norm(dom, &(&col - &e), &e)?);
        }
        let image = Element::from_vector(&(-(&d * c.to_vector())));
        let positivity = (-cod.margin(&image)).max(0.0) / cod.order_unit_norm(&image)?;
        Ok([identity, positivity])
    });
    Report {
        checks: vec![
            Check::at_most("derivative_inverse_composition", identity, DERIVATIVE_LIMIT),
            Check::at_most(
                "negative_derivative_order_preserving",
                positivity,
                tol.eq_rtol,
            ),
        ],
    }
}

/// S_x(x + λr) = x − λ/(λ+1) r along extreme half-lines with M(r/x) = 1.
pub fn verify_symmetry_halfline(
    psi: &GaugeReverser,
    seed: u64,
    samples: usize,
    tol: &Tolerance,
) -> Report {
    let model = psi.domain();
    let mut rng = seeded_rng(seed);
    let cases: Vec<(Element, usize)> = (0..samples.max(1))
        .map(|_| {
            (
                sample_interior_with(model, &mut rng),
                rng.random_range(0..model.dim()),
            )
        })
        .collect();
    let residual = par_max(&cases, |(x, k)| {
        let s = super::symmetry_at(psi, x, tol)?;
        let r = atom_frame_at(model, x, tol)?.swap_remove(*k);
        let mut worst_rel: f64 = 0.0;
        for lambda in halfline_grid() {
            let image = s.eval(&x.axpy(lambda, &r), tol)?;
            let predicted = x.axpy(-lambda / (lambda + 1.0), &r);
            worst_rel = worst_rel.max(rel_norm(model, &(&image - &predicted), x)?);
        }
        Ok(worst_rel)
    });
    Report {
        checks: vec![Check::at_most(
            "symmetry_on_extreme_halfline",
            residual,
            tol.eq_rtol,
        )],
    }
}

/// transport(u, y) for sampled y: linearity, T(u) = y, gauge and cone preservation.
pub fn verify_transport(
    model: &ConeModel,
    psi: &GaugeReverser,
    seed: u64,
    samples: usize,
    tol: &Tolerance,
) -> Report {
    let mut rng = seeded_rng(seed);
    let cases: Vec<(Element, Vec<Element>)> = (0..samples.max(1))
        .map(|_| {
            let y = sample_interior_with(model, &mut rng);
            let probes = (0..6)
                .map(|_| sample_interior_with(model, &mut rng))
                .collect();
            (y, probes)
        })
        .collect();
    let u = model.unit();
    let [linearity, endpoint, gauge, cone] = par_rows(&cases, |(y, probes)| {
        let tr = transport(model, psi, &u, y, tol)?;
        let endpoint = rel_norm(model, &(&tr.map.apply(&u) - y), y)?;
        let mut gauge: f64 = 0.0;
        for pair in probes.chunks(2) {
            let (v, w) = (&pair[0], &pair[1]);
            let mapped = model.gauge(&tr.map.apply(v), &tr.map.apply(w), tol)?;
            gauge = gauge.max(rel_diff(mapped, model.gauge(v, w, tol)?));
        }
        let cone = if tr.map.preserves_cone(model, probes, tol) {
            0.0
        } else {
            1.0
        };
        Ok([tr.linearity_residual, endpoint, gauge, cone])
    });
    Report {
        checks: vec![
            Check::at_most("transport_linearity", linearity, TRANSPORT_LIMIT),
            Check::at_most("transport_hits_target", endpoint, TRANSPORT_LIMIT),
            Check::at_most("transport_gauge_preserving", gauge, TRANSPORT_LIMIT),
            Check::at_most("transport_cone_preserving", cone, 0.0),
        ],
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> + Clone {
    (0..n).map(move |k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
}

fn sym2(a: f64, b: f64, c: f64) -> Element {
    Element::from([a, b, c])
}

/// The 2×2 counterexample: Ψ² acts as (a, b, c) ↦ (a/4, b, 4c), so a fixed
/// point of Ψ² would need a = c = 0, and Ψ stays a positive distance from the
/// identity on a positive definite grid.
pub fn fixed_point_free_check(tol: &Tolerance) -> Report {
    let psi = GaugeReverser::counterexample();
    let model = psi.domain().clone();
    let twice = |x: &Element| psi.apply(&psi.apply(x, tol)?, tol);

    let mut grid = Vec::new();
    for a in linspace(0.5, 5.0, 10) {
        for c in linspace(0.5, 5.0, 10) {
            for beta in linspace(-0.9, 0.9, 10) {
                grid.push(sym2(a, beta * (a * c).sqrt(), c));
            }
        }
    }
    let formula = par_max(&grid, |x| {
        let expected = sym2(x[0] / 4.0, x[1], 4.0 * x[2]);
        rel_norm(&model, &(&twice(x)? - &expected), &expected)
    });
    let moved = par_min(&grid, |x| Ok((twice(x)?[0] - x[0]).abs() / x[0]));

    let examples = [
        (sym2(8.0, 0.0, 1.0), sym2(2.0, 0.0, 4.0)),
        (sym2(1.0, 0.0, 1.0), sym2(0.25, 0.0, 4.0)),
    ];
    let example_residual = par_max(&examples, |(x, want)| {
        rel_norm(&model, &(&twice(x)? - want), want)
    });

    // ‖A‖_u ≤ 10 and A ⪰ 0.1·I
    let mut region = Vec::new();
    for a in linspace(0.1, 10.0, 10) {
        for c in linspace(0.1, 10.0, 10) {
            for b in linspace(-5.0, 5.0, 10) {
                let x = sym2(a, b, c);
                let spec = crate::jordan::spectral(&model, &x).expect("symmetric matrix");
                if spec.min_eigenvalue() >= 0.1 && spec.max_abs_eigenvalue() <= 10.0 {
                    region.push(x);
                }
            }
        }
    }
    let floor = par_min(&region, |x| {
        model.order_unit_norm(&(&psi.apply(x, tol)? - x))
    });

    Report {
        checks: vec![
            Check::at_most("squared_map_formula", formula, 1e-10),
            Check::at_most("squared_map_examples", example_residual, 1e-12),
            Check::above("squared_map_moves_first_diagonal_entry", moved, 0.5),
            Check::above("fixed_point_residual_floor", floor, FIXED_POINT_FLOOR),
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::sample_interior;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn shipped_maps_are_gauge_reversing() {
        let t = tol();
        for m in [
            ConeModel::Orthant(3),
            ConeModel::SymMat(3),
            ConeModel::Spin(4),
        ] {
            let r = verify_gauge_reversing(&GaugeReverser::jordan_inverse(&m).unwrap(), 1, 40, &t);
            assert!(r.pass(), "{m:?}: {r:?}");
        }
        let r = verify_gauge_reversing(&GaugeReverser::counterexample(), 1, 40, &t);
        assert!(r.pass(), "{r:?}");
    }

    #[test]
    fn shifted_inverse_fails() {
        let t = tol();
        let psi = GaugeReverser::shifted_inverse(&ConeModel::Orthant(3)).unwrap();
        let r = verify_gauge_reversing(&psi, 1, 40, &t);
        assert!(!r.pass());
        let g = r.get("gauge_reversal").unwrap();
        assert!(g.max_residual > 1e-2);
        assert!(r.get("antitone").unwrap().pass);
    }

    #[test]
    fn symmetries_pass() {
        let t = tol();
        for m in [ConeModel::SymMat(3), ConeModel::Spin(4)] {
            let psi = GaugeReverser::jordan_inverse(&m).unwrap();
            let x = sample_interior(&m, 3, 1).remove(0);
            let s = super::super::symmetry_at(&psi, &x, &t).unwrap();
            let r = verify_symmetry(&s, 4, 20, &t);
            assert!(r.pass(), "{m:?}: {r:?}");
        }
        let cx = GaugeReverser::counterexample();
        let s = super::super::symmetry_at(&cx, &ConeModel::SymMat(2).unit(), &t).unwrap();
        assert!(verify_symmetry(&s, 4, 20, &t).pass());
    }

    #[test]
    fn derivative_and_halfline_checks() {
        let t = tol();
        for m in [
            ConeModel::Orthant(2),
            ConeModel::SymMat(2),
            ConeModel::Spin(3),
        ] {
            let psi = GaugeReverser::jordan_inverse(&m).unwrap();
            let r = verify_derivative_automorphism(&psi, 5, 10, &t);
            assert!(r.pass(), "{m:?}: {r:?}");
            let r = verify_symmetry_halfline(&psi, 5, 10, &t);
            assert!(r.pass(), "{m:?}: {r:?}");
        }
    }

    #[test]
    fn transport_checks() {
        let t = tol();
        for m in [
            ConeModel::Orthant(3),
            ConeModel::SymMat(2),
            ConeModel::Spin(3),
        ] {
            let psi = GaugeReverser::jordan_inverse(&m).unwrap();
            let r = verify_transport(&m, &psi, 8, 5, &t);
            assert!(r.pass(), "{m:?}: {r:?}");
        }
    }

    #[test]
    fn counterexample_has_no_fixed_points() {
        let r = fixed_point_free_check(&tol());
        assert!(r.pass(), "{r:?}");
        assert!(r.get("fixed_point_residual_floor").unwrap().max_residual > 0.2);
    }
}
