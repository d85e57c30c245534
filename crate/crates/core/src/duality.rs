//! Atoms and pure states, the bilinear form B(p, y) = ψ_p(y), rank, frames,
//! and the self-duality of the symmetric models with respect to B.

use rand::Rng;

use crate::cone::{
    sample_boundary, sample_element, sample_interior_with, sample_orthogonal_atoms, seeded_rng,
    ConeModel,
};
use crate::element::Element;
use crate::error::{Error, Result};
use crate::jordan;
use crate::linalg;
use crate::report::{par_max, par_min, Check, Report};
use crate::reversal::{extreme_halfline_image, GaugeReverser};
use crate::tolerance::{rel_diff, Tolerance};

#[derive(Debug, Clone, PartialEq)]
pub enum PureStateKind {
    /// x ↦ xᵢ.
    Coordinate(usize),
    /// X ↦ vᵀXv for a unit vector v.
    RankOne(Vec<f64>),
    /// (λ, x) ↦ λ + ⟨w, x⟩ for a unit direction w.
    SpinState(Vec<f64>),
    /// A pure state of one block of a direct sum.
    BlockLift {
        block: usize,
        offset: usize,
        inner: Box<PureState>,
    },
}

/// A pure state: ψ(u) = 1, ψ ≥ 0 on C, extreme among states.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    kind: PureStateKind,
    dim: usize,
}

impl PureState {
    pub fn kind(&self) -> &PureStateKind {
        &self.kind
    }

    pub fn eval(&self, x: &Element) -> f64 {
        debug_assert_eq!(x.len(), self.dim);
        match &self.kind {
            PureStateKind::Coordinate(i) => x[*i],
            PureStateKind::RankOne(v) => {
                let n = v.len();
                let mut s = 0.0;
                for i in 0..n {
                    s += v[i] * v[i] * x[linalg::packed_index(n, i, i)];
                    for j in i + 1..n {
                        s += 2.0 * v[i] * v[j] * x[linalg::packed_index(n, i, j)];
                    }
                }
                s
            }
            PureStateKind::SpinState(w) => {
                x[0] + w
                    .iter()
                    .zip(&x.as_slice()[1..])
                    .map(|(a, b)| a * b)
                    .sum::<f64>()
            }
            PureStateKind::BlockLift { offset, inner, .. } => {
                inner.eval(&x.slice(*offset, inner.dim))
            }
        }
    }

    /// The coordinate vector a with ψ(x) = ⟨a, x⟩.
    pub fn representer(&self) -> Element {
        Element::new(
            (0..self.dim)
                .map(|i| self.eval(&Element::basis(self.dim, i)))
                .collect(),
        )
    }
}

/// ψ_p for an idempotent p of rank one (no atom test).
fn state_of_idempotent(model: &ConeModel, p: &Element) -> PureState {
    let dim = model.dim();
    let kind = match model {
        ConeModel::Orthant(n) => {
            let i = (0..*n).max_by(|&a, &b| p[a].total_cmp(&p[b])).unwrap_or(0);
            PureStateKind::Coordinate(i)
        }
        ConeModel::SymMat(n) => {
            let e = linalg::sym_eigen(&linalg::unpack(*n, p.as_slice()));
            PureStateKind::RankOne(e.vectors.column(0).iter().copied().collect())
        }
        ConeModel::Spin(_) => {
            let pv = &p.as_slice()[1..];
            let r = pv.iter().map(|c| c * c).sum::<f64>().sqrt();
            PureStateKind::SpinState(pv.iter().map(|c| c / r).collect())
        }
        ConeModel::DirectSum(_) => {
            let (block, (offset, b)) = model
                .blocks()
                .into_iter()
                .enumerate()
                .max_by(|(_, (oa, a)), (_, (ob, b))| {
                    p.slice(*oa, a.dim())
                        .max_abs()
                        .total_cmp(&p.slice(*ob, b.dim()).max_abs())
                })
                .expect("direct sums have blocks");
            PureStateKind::BlockLift {
                block,
                offset,
                inner: Box::new(state_of_idempotent(b, &p.slice(offset, b.dim()))),
            }
        }
        ConeModel::Polyhedral(_) => unreachable!("callers require a Jordan model"),
    };
    PureState { kind, dim }
}

fn require_jordan(model: &ConeModel) -> Result<()> {
    if model.is_jordan() {
        Ok(())
    } else {
        Err(Error::unsupported(
            "pure-state duality is implemented for the symmetric-cone models",
        ))
    }
}

/// The unique pure state ψ_p with ψ_p(p) = 1.
pub fn pure_state_of_atom(model: &ConeModel, p: &Element, tol: &Tolerance) -> Result<PureState> {
    require_jordan(model)?;
    model.check_dim(p)?;
    if !model.is_atom(p, tol) {
        return Err(Error::input("pure state requested for a non-atom"));
    }
    Ok(state_of_idempotent(model, p))
}

/// B(x, y) = Σ λₖ ψ_{pₖ}(y) for the spectral decomposition x = Σ λₖ pₖ.
pub fn bilinear_b(model: &ConeModel, x: &Element, y: &Element) -> Result<f64> {
    require_jordan(model)?;
    model.check_dim(y)?;
    let s = jordan::spectral(model, x)?;
    Ok(s.eigenvalues
        .iter()
        .zip(&s.idempotents)
        .map(|(l, p)| l * state_of_idempotent(model, p).eval(y))
        .sum())
}

/// N = B(u, u), the common size of every frame.
pub fn rank(model: &ConeModel) -> Result<usize> {
    let u = model.unit();
    let b = bilinear_b(model, &u, &u)?;
    let n = b.round();
    if (b - n).abs() > 1e-9 {
        return Err(Error::internal(format!("B(u, u) = {b} is not an integer")));
    }
    Ok(n as usize)
}

/// Completes orthogonal atoms to a frame with the spectral atoms of u − Σpᵢ.
pub fn extend_to_frame(model: &ConeModel, ps: &[Element], tol: &Tolerance) -> Result<Vec<Element>> {
    require_jordan(model)?;
    if !model.are_orthogonal_atoms(ps, tol)? {
        return Err(Error::input("atoms are not orthogonal"));
    }
    let rest = ps.iter().fold(model.unit(), |acc, p| &acc - p);
    let s = jordan::spectral(model, &rest)?;
    let mut frame = ps.to_vec();
    for (l, p) in s.eigenvalues.iter().zip(s.idempotents) {
        if (l - 1.0).abs() <= 1e-6 {
            frame.push(p);
        } else if l.abs() > 1e-6 {
            return Err(Error::input(format!(
                "u minus the atoms is not an idempotent (spectral value {l})"
            )));
        }
    }
    if frame.len() != rank(model)? {
        return Err(Error::internal("completed frame has the wrong size"));
    }
    Ok(frame)
}

struct AtomDraw {
    atoms: Vec<Element>,
    lambdas: Vec<f64>,
    probe: usize,
}

/// Orthogonality of atoms of K for the order unit e: each q is extreme with
/// M(q/e) = 1, and q₁ + … + qₙ ≤ e.
fn orthogonal_atoms_under(
    cod: &ConeModel,
    qs: &[Element],
    e: &Element,
    tol: &Tolerance,
) -> Result<bool> {
    let mut rest = e.clone();
    for q in qs {
        if !cod.is_extreme_vector(q, tol)? || (cod.gauge(q, e, tol)? - 1.0).abs() > tol.eq_rtol {
            return Ok(false);
        }
        rest = &rest - q;
    }
    Ok(cod.contains(&rest, false, tol.mem_eps.max(tol.eq_rtol)))
}

/// Interiority threshold, inverse formula on the span, orthogonality of the
/// image atoms, independence, the max-coefficient norm, and the equivalence of
/// the four frame conditions, on random orthogonal-atom draws.
pub fn verify_atom_orthogonality_theorem(
    model: &ConeModel,
    psi: &GaugeReverser,
    seed: u64,
    draws: usize,
    tol: &Tolerance,
) -> Result<Report> {
    require_jordan(model)?;
    if psi.domain() != model {
        return Err(Error::input(
            "gauge-reversing map is defined on a different model",
        ));
    }
    let u = model.unit();
    let e = psi.apply(&u, tol)?;
    let cod = psi.codomain();
    let mut report = Report::new();

    let mut rng = seeded_rng(seed);
    let mut cases = Vec::new();
    for k in 0..draws.max(2) {
        let mut atoms = sample_orthogonal_atoms(model, &mut rng)?;
        if k % 2 == 0 {
            atoms = extend_to_frame(model, &atoms, tol)?;
        }
        let lambdas: Vec<f64> = atoms.iter().map(|_| rng.random_range(-0.95..5.0)).collect();
        let probe = rng.random_range(0..atoms.len());
        cases.push(AtomDraw {
            atoms,
            lambdas,
            probe,
        });
    }

    let threshold = par_max(&cases, |d| {
        let base = (0..d.atoms.len())
            .filter(|&k| k != d.probe)
            .fold(u.clone(), |acc, k| acc.axpy(d.lambdas[k], &d.atoms[k]));
        let inside = |l: f64| model.contains(&base.axpy(l, &d.atoms[d.probe]), true, tol.mem_eps);
        let (mut lo, mut hi) = (-2.0, 0.0);
        if inside(lo) || !inside(hi) {
            return Ok(f64::INFINITY);
        }
        for _ in 0..50 {
            let mid = 0.5 * (lo + hi);
            if inside(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok((hi + 1.0).abs())
    });
    report.push(Check::at_most(
        "interiority_threshold_at_minus_one",
        threshold,
        1e-3,
    ));

    let interior = par_max(&cases, |d| {
        let z = crate::element::combination(model.dim(), &d.lambdas, &d.atoms);
        Ok(if model.contains(&(&u + &z), true, tol.mem_eps) {
            0.0
        } else {
            1.0
        })
    });
    report.push(Check::at_most(
        "interior_when_coefficients_exceed_minus_one",
        interior,
        0.0,
    ));

    let partners = |d: &AtomDraw| -> Result<Vec<Element>> {
        d.atoms
            .iter()
            .map(|p| extreme_halfline_image(psi, &u, p, tol).map(|img| img.q))
            .collect()
    };

    let formula = par_max(&cases, |d| {
        let qs = partners(d)?;
        let z = d
            .atoms
            .iter()
            .zip(&d.lambdas)
            .fold(u.clone(), |acc, (p, l)| acc.axpy(*l, p));
        let predicted = qs
            .iter()
            .zip(&d.lambdas)
            .fold(e.clone(), |acc, (q, l)| acc.axpy(-l / (l + 1.0), q));
        Ok(cod.order_unit_norm(&(&psi.apply(&z, tol)? - &predicted))?
            / cod.order_unit_norm(&predicted)?)
    });
    report.push(Check::at_most(
        "inverse_formula_on_orthogonal_span",
        formula,
        tol.eq_rtol,
    ));

    let orthogonal = par_max(&cases, |d| {
        let qs = partners(d)?;
        Ok(if orthogonal_atoms_under(cod, &qs, &e, tol)? {
            0.0
        } else {
            1.0
        })
    });
    report.push(Check::at_most("image_atoms_orthogonal", orthogonal, 0.0));

    let independence = par_min(&cases, |d| {
        Ok(linalg::inverse_condition(&linalg::columns(&d.atoms)))
    });
    report.push(Check::above(
        "atoms_linearly_independent",
        independence,
        1e-9,
    ));

    let norm = par_max(&cases, |d| {
        // arbitrary real coefficients, including negative ones below −1
        let coefs: Vec<f64> = d
            .lambdas
            .iter()
            .enumerate()
            .map(|(k, l)| if k % 2 == 1 { -2.0 * l } else { *l })
            .collect();
        let z = crate::element::combination(model.dim(), &coefs, &d.atoms);
        let expected = coefs.iter().fold(0.0_f64, |m, c| m.max(c.abs()));
        Ok(rel_diff(model.order_unit_norm(&z)?, expected))
    });
    report.push(Check::at_most("norm_is_max_coefficient", norm, 1e-9));

    let equivalence = par_max(&cases, |d| {
        let qs = partners(d)?;
        let sp = d
            .atoms
            .iter()
            .fold(Element::zeros(model.dim()), |acc, p| &acc + p);
        let sq = qs.iter().fold(Element::zeros(cod.dim()), |acc, q| &acc + q);
        let conditions = [
            model.order_unit_norm(&(&sp - &u))? <= 1e-9,
            model.contains(&sp, true, 1e-9),
            cod.order_unit_norm(&(&sq - &e))? <= 1e-9,
            cod.contains(&sq, true, 1e-9),
        ];
        Ok(if conditions.iter().all(|&c| c == conditions[0]) {
            0.0
        } else {
            1.0
        })
    });
    report.push(Check::at_most(
        "frame_conditions_equivalent",
        equivalence,
        0.0,
    ));
    Ok(report)
}

/// ψ_p(x) = M(p/x⁻¹), ψ_p(p) = 1, ψ_p(q) = ψ_q(p), ψ_p ≥ 0 on C, and
/// smoothness of u − p.
pub fn verify_pure_states(
    model: &ConeModel,
    seed: u64,
    samples: usize,
    tol: &Tolerance,
) -> Result<Report> {
    require_jordan(model)?;
    let mut rng = seeded_rng(seed);
    let cases: Vec<(Element, Element, Element)> = (0..samples.max(1))
        .map(|_| {
            let p = crate::cone::sample_atom(model, &mut rng)?;
            let q = crate::cone::sample_atom(model, &mut rng)?;
            Ok((p, q, sample_interior_with(model, &mut rng)))
        })
        .collect::<Result<_>>()?;
    let identity = par_max(&cases, |(p, _, x)| {
        let s = pure_state_of_atom(model, p, tol)?;
        let via_gauge = model.gauge(p, &jordan::inverse(model, x, tol)?, tol)?;
        Ok(rel_diff(s.eval(x), via_gauge))
    });
    let unit_value = par_max(&cases, |(p, _, _)| {
        let s = pure_state_of_atom(model, p, tol)?;
        Ok((s.eval(p) - 1.0)
            .abs()
            .max((s.eval(&model.unit()) - 1.0).abs()))
    });
    let pairing = par_max(&cases, |(p, q, _)| {
        let (sp, sq) = (
            pure_state_of_atom(model, p, tol)?,
            pure_state_of_atom(model, q, tol)?,
        );
        Ok((sp.eval(q) - sq.eval(p)).abs())
    });
    let positivity = par_min(&cases, |(p, _, x)| {
        Ok(pure_state_of_atom(model, p, tol)?.eval(x))
    });
    let smooth = par_max(&cases, |(p, _, _)| {
        Ok((model.smoothness_count(p, tol)? as f64 - 1.0).abs())
    });
    Ok(Report {
        checks: vec![
            Check::at_most("pure_state_matches_gauge_at_inverse", identity, 1e-6),
            Check::at_most("pure_state_normalized", unit_value, 1e-9),
            Check::at_most("pairing_symmetric", pairing, 1e-9),
            Check::above("pure_state_positive_on_interior", positivity, 0.0),
            Check::at_most("atoms_are_smooth_points", smooth, 0.0),
        ],
    })
}

/// Symmetry, definiteness, the base inequality, the norm sandwich and
/// agreement with the Jordan trace form.
pub fn verify_inner_product(model: &ConeModel, seed: u64, samples: usize) -> Result<Report> {
    require_jordan(model)?;
    let n = rank(model)? as f64;
    let u = model.unit();
    let mut rng = seeded_rng(seed);
    let cases: Vec<(Element, Element, Element)> = (0..samples.max(1))
        .map(|_| {
            (
                sample_element(model, &mut rng),
                sample_element(model, &mut rng),
                sample_interior_with(model, &mut rng),
            )
        })
        .collect();
    let b = |x: &Element, y: &Element| bilinear_b(model, x, y);

    let symmetry = par_max(&cases, |(x, y, _)| {
        Ok((b(x, y)? - b(y, x)?).abs() / (b(x, x)? * b(y, y)?).sqrt())
    });
    let definite = par_min(&cases, |(x, _, _)| {
        Ok(b(x, x)? / model.order_unit_norm(x)?.powi(2))
    });
    let base = par_max(&cases, |(_, _, c)| {
        let x = c.scale(1.0 / b(c, &u)?);
        Ok((1.0 / n - b(&x, &x)?).max(0.0))
    });
    let sandwich = par_max(&cases, |(x, _, _)| {
        let norm = model.order_unit_norm(x)?;
        let root = b(x, x)?.sqrt();
        Ok((norm - root).max(root - n.sqrt() * norm).max(0.0) / norm)
    });
    let trace_form = par_max(&cases, |(x, y, _)| {
        let t = jordan::trace(model, &jordan::jordan_product(model, x, y)?)?;
        Ok((b(x, y)? - t).abs() / (b(x, x)? * b(y, y)?).sqrt())
    });
    let equality = rel_diff(b(&u.scale(1.0 / n), &u.scale(1.0 / n))?, 1.0 / n);

    Ok(Report {
        checks: vec![
            Check::at_most("symmetric", symmetry, 1e-9),
            Check::above("positive_definite", definite, 0.0),
            Check::at_most("base_inequality", base, 1e-9),
            Check::at_most("base_equality_at_normalized_unit", equality, 1e-12),
            Check::at_most("norm_sandwich", sandwich, 1e-9),
            Check::at_most("equals_trace_form", trace_form, 1e-9),
        ],
    })
}

/// B(x, y) ≥ 0 on C × C, and every sampled x ∉ C has a witness atom p with B(x, p) < 0.
pub fn self_duality_check(
    model: &ConeModel,
    seed: u64,
    samples: usize,
    tol: &Tolerance,
) -> Result<Report> {
    require_jordan(model)?;
    let mut rng = seeded_rng(seed);
    let mut pairs = Vec::new();
    for k in 0..samples.max(1) {
        let x = sample_interior_with(model, &mut rng);
        let y = if k % 2 == 0 && rank(model)? > 1 {
            sample_boundary(model, &mut rng)?
        } else {
            sample_interior_with(model, &mut rng)
        };
        pairs.push((x, y));
    }
    let mut outside = Vec::new();
    let mut attempts = 0;
    while outside.len() < samples.max(1) && attempts < 1000 * samples.max(1) {
        attempts += 1;
        let x = sample_element(model, &mut rng);
        if !model.membership(&x, false, tol)? {
            outside.push(x);
        }
    }

    let nonnegative = par_max(&pairs, |(x, y)| {
        let scale = model.order_unit_norm(x)? * model.order_unit_norm(y)?;
        Ok((-bilinear_b(model, x, y)? / scale).max(0.0))
    });
    let missed = par_max(&outside, |x| {
        let w = self_duality_witness(model, x)?;
        Ok(if bilinear_b(model, x, &w)? < 0.0 {
            0.0
        } else {
            1.0
        })
    });
    let coverage = if outside.is_empty() {
        0.0
    } else {
        1.0 - missed
    };
    Ok(Report {
        checks: vec![
            Check::at_most("nonnegative_on_cone", nonnegative, 1e-9),
            Check::at_most("witness_coverage_gap", 1.0 - coverage, 0.0),
        ],
    })
}

/// The spectral atom of x with the most negative eigenvalue.
pub fn self_duality_witness(model: &ConeModel, x: &Element) -> Result<Element> {
    let s = jordan::spectral(model, x)?;
    let k = (0..s.eigenvalues.len())
        .min_by(|&a, &b| s.eigenvalues[a].total_cmp(&s.eigenvalues[b]))
        .ok_or_else(|| Error::internal("empty spectral decomposition"))?;
    Ok(s.idempotents[k].clone())
}

/// w ↦ M(p / Ψ⁻¹(w)), the pure state of K that Ψ attaches to an atom p of C.
#[derive(Debug, Clone)]
pub struct PsiState {
    psi: GaugeReverser,
    p: Element,
}

impl PsiState {
    /// Defined on K°.
    pub fn eval(&self, w: &Element, tol: &Tolerance) -> Result<f64> {
        let x = self.psi.inverse_apply(w, tol)?;
        self.psi.domain().gauge(&self.p, &x, tol)
    }

    /// Linear extension to W: ψ(z) = (ψ(e + t z) − ψ(e))/t with t small enough
    /// that e + t z ∈ K°, i.e. t·M(−z/e) < 1.
    pub fn eval_linear(&self, z: &Element, tol: &Tolerance) -> Result<f64> {
        let cod = self.psi.codomain();
        let e = self.psi.apply(&self.psi.domain().unit(), tol)?;
        let reach = cod.gauge(&-z, &e, tol)?;
        let t = if reach > 0.5 { 0.5 / reach } else { 1.0 };
        Ok((self.eval(&e.axpy(t, z), tol)? - self.eval(&e, tol)?) / t)
    }
}

pub fn atom_to_pure_state_via_psi(
    psi: &GaugeReverser,
    p: &Element,
    tol: &Tolerance,
) -> Result<PsiState> {
    let dom = psi.domain();
    dom.check_dim(p)?;
    if !dom.is_atom(p, tol) {
        return Err(Error::input("pure state requested for a non-atom"));
    }
    Ok(PsiState {
        psi: psi.clone(),
        p: p.clone(),
    })
}

/// Affinity on K°, ψ(Ψ(u)) = 1, ψ(q) = 1 for the partner atom q, and positivity.
pub fn verify_psi_state(
    psi: &GaugeReverser,
    seed: u64,
    samples: usize,
    tol: &Tolerance,
) -> Result<Report> {
    let dom = psi.domain();
    let cod = psi.codomain();
    let u = dom.unit();
    let e = psi.apply(&u, tol)?;
    let mut rng = seeded_rng(seed);
    let cases: Vec<(Element, Element, Element, f64)> = (0..samples.max(1))
        .map(|_| {
            Ok((
                crate::cone::sample_atom(dom, &mut rng)?,
                sample_interior_with(cod, &mut rng),
                sample_interior_with(cod, &mut rng),
                rng.random::<f64>(),
            ))
        })
        .collect::<Result<_>>()?;

    let affinity = par_max(&cases, |(p, w1, w2, a)| {
        let s = atom_to_pure_state_via_psi(psi, p, tol)?;
        let mixed = s.eval(&w1.scale(*a).axpy(1.0 - a, w2), tol)?;
        let predicted = a * s.eval(w1, tol)? + (1.0 - a) * s.eval(w2, tol)?;
        Ok((mixed - predicted).abs() / predicted.abs().max(1.0))
    });
    let basepoint = par_max(&cases, |(p, _, _, _)| {
        Ok((atom_to_pure_state_via_psi(psi, p, tol)?.eval(&e, tol)? - 1.0).abs())
    });
    let partner = par_max(&cases, |(p, _, _, _)| {
        let s = atom_to_pure_state_via_psi(psi, p, tol)?;
        let q = extreme_halfline_image(psi, &u, p, tol)?.q;
        let direct = (s.eval_linear(&q, tol)? - 1.0).abs();
        // Ψ(u/n + (1 − 1/n)p) = n e − (n − 1) q, and ψ of it equals M(p/pₙ) = 1
        let mut limit: f64 = 0.0;
        for n in [2.0, 10.0, 100.0, 1000.0] {
            let pn = u.scale(1.0 / n).axpy(1.0 - 1.0 / n, p);
            let value = s.eval(&psi.apply(&pn, tol)?, tol)?;
            let psi_q = (n - value) / (n - 1.0);
            limit = limit.max((psi_q - 1.0).abs());
        }
        Ok(direct.max(limit))
    });
    let positivity = par_min(&cases, |(p, w1, _, _)| {
        atom_to_pure_state_via_psi(psi, p, tol)?.eval(w1, tol)
    });
    Ok(Report {
        checks: vec![
            Check::at_most("affine_on_interior", affinity, 1e-6),
            Check::at_most("normalized_at_image_of_unit", basepoint, 1e-9),
            Check::at_most("equals_one_at_partner_atom", partner, 1e-6),
            Check::above("positive_on_interior", positivity, 0.0),
        ],
    })
}
