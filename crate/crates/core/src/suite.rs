//! Named verification suites over a model, as run by the command-line harness.
//!
//! Each suite seeds every sampler from the given seed and reduces residuals
//! with order-independent maxima, so a report depends only on its arguments.

use std::fmt::Write as _;
use std::time::Instant;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::cone::{
    gauge_oracle, parse_model_spec, sample_atom, sample_element, sample_interior_with, seeded_rng,
    ConeModel,
};
use crate::duality::{
    self_duality_check, verify_atom_orthogonality_theorem, verify_inner_product, verify_psi_state,
    verify_pure_states,
};
use crate::element::Element;
use crate::error::{Error, Result};
use crate::horoboundary::{
    verify_boundary_extension, verify_busemann_convergence, verify_detour_metric, Flavor,
};
use crate::jordan;
use crate::metric::{finsler_length, thompson, type_i_geodesic, Geodesic};
use crate::report::{par_max, Check, Report};
use crate::reversal::{
    extreme_halfline_image, fixed_point_free_check, symmetry_at, verify_derivative_automorphism,
    verify_gauge_reversing, verify_symmetry, verify_symmetry_halfline, verify_transport,
    GaugeReverser,
};
use crate::tolerance::{rel_diff, Tolerance};

pub const SUITES: [&str; 10] = [
    "gauge",
    "geodesics",
    "symmetry",
    "reversal",
    "atoms",
    "inner-product",
    "self-dual",
    "horoboundary",
    "main-theorem",
    "negative-square-cone",
];

/// Sample cap for checks that build a derivative or a transport per sample.
const HEAVY_CAP: usize = 50;

pub fn list_suites() -> &'static [&'static str] {
    &SUITES
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub model: String,
    pub seed: u64,
    pub samples: usize,
    pub checks: Vec<Check>,
    pub pass: bool,
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u64>,
}

impl SuiteReport {
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Appends `other` with every check name prefixed by `group.`.
fn absorb(report: &mut Report, group: &str, other: Report) {
    for mut c in other.checks {
        c.name = format!("{group}.{}", c.name);
        report.push(c);
    }
}

fn require_jordan(model: &ConeModel, suite: &str) -> Result<()> {
    if model.is_jordan() {
        Ok(())
    } else {
        Err(Error::unsupported(format!(
            "suite {suite} needs a symmetric-cone model (orthant, sym, spin or sums of them)"
        )))
    }
}

/// Parses `spec` and runs `suite`.
pub fn run_suite(
    spec: &str,
    suite: &str,
    seed: u64,
    samples: usize,
    tol: &Tolerance,
) -> Result<SuiteReport> {
    let model = parse_model_spec(spec)?;
    let mut report = run_suite_on(&model, suite, seed, samples, tol)?;
    report.model = spec.trim().to_string();
    Ok(report)
}

pub fn run_suite_on(
    model: &ConeModel,
    suite: &str,
    seed: u64,
    samples: usize,
    tol: &Tolerance,
) -> Result<SuiteReport> {
    tol.validate()?;
    let mut verdict = None;
    let report = match suite {
        "gauge" => gauge_suite(model, seed, samples, tol)?,
        "geodesics" => geodesics_suite(model, seed, samples, tol)?,
        "symmetry" => symmetry_suite(model, seed, samples, tol)?,
        "reversal" => reversal_suite(model, seed, samples, tol)?,
        "atoms" => atoms_suite(model, seed, samples, tol)?,
        "inner-product" => {
            require_jordan(model, suite)?;
            verify_inner_product(model, seed, samples.max(1))?
        }
        "self-dual" => {
            require_jordan(model, suite)?;
            self_duality_check(model, seed, samples.max(1), tol)?
        }
        "horoboundary" => horoboundary_suite(model, seed, samples, tol)?,
        "main-theorem" => {
            let (r, v) = main_theorem_suite(model, seed, samples, tol)?;
            verdict = Some(v);
            r
        }
        "negative-square-cone" => {
            let (r, v) = negative_square_suite(model, tol)?;
            verdict = Some(v);
            r
        }
        other => {
            return Err(Error::input(format!(
                "unknown suite {other:?}; expected one of {}",
                SUITES.join(", ")
            )))
        }
    };
    let pass = report.pass();
    let verdict = verdict.unwrap_or_else(|| if pass { "pass".into() } else { "fail".into() });
    Ok(SuiteReport {
        suite: suite.to_string(),
        model: model.spec_string(),
        seed,
        samples,
        checks: report.checks,
        pass,
        verdict,
        wall_time_ms: None,
    })
}

/// Like [`run_suite_on`], recording the elapsed wall time in the report.
pub fn run_suite_timed(
    model: &ConeModel,
    suite: &str,
    seed: u64,
    samples: usize,
    tol: &Tolerance,
) -> Result<SuiteReport> {
    let start = Instant::now();
    let mut report = run_suite_on(model, suite, seed, samples, tol)?;
    report.wall_time_ms = Some(start.elapsed().as_millis() as u64);
    Ok(report)
}

fn log_normal<R: Rng>(rng: &mut R) -> f64 {
    rng.sample::<f64, _>(StandardNormal).exp()
}

fn gauge_suite(model: &ConeModel, seed: u64, samples: usize, tol: &Tolerance) -> Result<Report> {
    let mut rng = seeded_rng(seed);
    let cases: Vec<(Element, Element, f64, f64, Element, Element)> = (0..samples.max(1))
        .map(|_| {
            let x = sample_element(model, &mut rng);
            let y = sample_interior_with(model, &mut rng);
            let (a, b) = (log_normal(&mut rng), log_normal(&mut rng));
            let h = sample_element(model, &mut rng);
            let k = sample_element(model, &mut rng);
            (x, y, a, b, h, k)
        })
        .collect();

    let oracle = par_max(&cases, |(x, y, ..)| {
        let m = model.gauge(x, y, tol)?;
        let o = gauge_oracle(model, x, y, 1e-13 * m.abs().max(1.0), tol)?;
        Ok(rel_diff(m, o))
    });
    let homogeneity = par_max(&cases, |(x, y, a, b, ..)| {
        let m = model.gauge(x, y, tol)?;
        let scaled = model.gauge(&x.scale(*a), &y.scale(*b), tol)?;
        Ok(rel_diff(scaled, a / b * m))
    });
    // x ≤ y ⇔ M(x/y) ≤ 1, away from the membership band
    let order = par_max(&cases, |(x, y, ..)| {
        let m = model.gauge(x, y, tol)?;
        if (m - 1.0).abs() <= 1e-6 {
            return Ok(0.0);
        }
        let below = model.membership(&(y - x), false, tol)?;
        Ok(if below == (m <= 1.0) { 0.0 } else { 1.0 })
    });
    let continuity = par_max(&cases, |(x, y, _, _, h, k)| {
        let m = model.gauge(x, y, tol)?;
        let scale = model.order_unit_norm(y)?;
        let margin = model.margin(y) / scale;
        let delta = 1e-6 * margin.min(1.0);
        let near = model.gauge(&x.axpy(delta, h), &y.axpy(delta * margin, k), tol)?;
        Ok((near - m).abs() / (1.0 + m.abs()))
    });

    let mut report = Report::new();
    report.push(Check::at_most(
        "gauge_matches_bisection_oracle",
        oracle,
        tol.eq_rtol,
    ));
    report.push(Check::at_most(
        "gauge_homogeneity",
        homogeneity,
        tol.eq_rtol,
    ));
    report.push(Check::at_most("order_characterization", order, 0.0));
    report.push(Check::at_most("gauge_continuity", continuity, 1e-4));
    Ok(report)
}

/// y rescaled so that M(x/y) = M(y/x).
fn balanced_pair(model: &ConeModel, x: &Element, z: &Element, tol: &Tolerance) -> Result<Element> {
    let c = (model.gauge(x, z, tol)? / model.gauge(z, x, tol)?).sqrt();
    Ok(z.scale(c))
}

fn geodesics_suite(
    model: &ConeModel,
    seed: u64,
    samples: usize,
    tol: &Tolerance,
) -> Result<Report> {
    let mut rng = seeded_rng(seed);
    let triples: Vec<[Element; 3]> = (0..samples.max(1))
        .map(|_| std::array::from_fn(|_| sample_interior_with(model, &mut rng)))
        .collect();

    let axioms = par_max(&triples, |[x, y, z]| {
        let (xy, yx) = (thompson(model, x, y, tol)?, thompson(model, y, x, tol)?);
        let (yz, xz) = (thompson(model, y, z, tol)?, thompson(model, x, z, tol)?);
        let symmetry = (xy - yx).abs();
        let triangle = (xz - xy - yz).max(0.0);
        let positivity = if xy > 0.0 { 0.0 } else { 1.0 };
        Ok(symmetry.max(triangle).max(positivity) / (1.0 + xz))
    });
    let type_ii = par_max(&triples, |[x, ..]| {
        let g = Geodesic::TypeII { x: x.clone() };
        let mut worst: f64 = 0.0;
        for (s, t) in [(0.0, 1.0), (-0.5, 2.0), (0.3, 0.7)] {
            worst =
                worst.max((thompson(model, &g.eval(s), &g.eval(t), tol)? - (t - s).abs()).abs());
        }
        Ok(worst)
    });
    let paths: Vec<(Geodesic, f64)> = triples
        .iter()
        .take(samples.clamp(1, HEAVY_CAP))
        .map(|[x, z, _]| {
            let y = balanced_pair(model, x, z, tol)?;
            Ok((
                type_i_geodesic(model, x, &y, tol)?,
                thompson(model, x, &y, tol)?,
            ))
        })
        .collect::<Result<_>>()?;
    let type_i = par_max(&paths, |(g, d)| {
        let mut worst: f64 = 0.0;
        for k in 0..=4 {
            for j in k + 1..=4 {
                let (s, t) = (d * k as f64 / 4.0, d * j as f64 / 4.0);
                worst = worst.max(rel_diff(
                    thompson(model, &g.eval(s), &g.eval(t), tol)?,
                    t - s,
                ));
            }
        }
        Ok(worst)
    });
    let length = par_max(&paths, |(g, d)| {
        let path = |t: f64| g.eval(t);
        Ok(rel_diff(
            finsler_length(model, &path, 0.0, *d, 256, tol)?,
            *d,
        ))
    });
    Ok(Report {
        checks: vec![
            Check::at_most("thompson_metric_axioms", axioms, tol.eq_rtol),
            Check::at_most("type_ii_distance_law", type_ii, tol.eq_rtol),
            Check::at_most("type_i_distance_law", type_i, tol.eq_rtol),
            Check::at_most("finsler_length_equals_distance", length, 1e-4),
        ],
    })
}

fn symmetry_suite(model: &ConeModel, seed: u64, samples: usize, tol: &Tolerance) -> Result<Report> {
    require_jordan(model, "symmetry")?;
    let psi = GaugeReverser::jordan_inverse(model)?;
    let mut rng = seeded_rng(seed);
    let pairs: Vec<(Element, Element)> = (0..samples.max(1))
        .map(|_| {
            (
                sample_interior_with(model, &mut rng),
                sample_interior_with(model, &mut rng),
            )
        })
        .collect();
    let quadratic = par_max(&pairs, |(x, y)| {
        let s = symmetry_at(&psi, x, tol)?;
        let expected = jordan::quad_rep(model, x, &jordan::inverse(model, y, tol)?)?;
        Ok(model.order_unit_norm(&(&s.eval(y, tol)? - &expected))?
            / model.order_unit_norm(&expected)?)
    });
    let mut report = Report::new();
    report.push(Check::at_most(
        "symmetry_equals_quadratic_representation",
        quadratic,
        1e-5,
    ));
    let centers: Vec<Element> = pairs.iter().take(4).map(|(x, _)| x.clone()).collect();
    for (k, x) in centers.iter().enumerate() {
        let s = symmetry_at(&psi, x, tol)?;
        absorb(
            &mut report,
            &format!("center{k}"),
            verify_symmetry(&s, seed ^ k as u64, samples.max(1), tol),
        );
    }
    absorb(
        &mut report,
        "halfline",
        verify_symmetry_halfline(&psi, seed, samples.max(1), tol),
    );
    Ok(report)
}

/// Ψ(x + tp) = Ψ(x) − t/(t+1)·q on (x, atom) pairs with M(p/x) = 1.
fn halfline_law(psi: &GaugeReverser, seed: u64, samples: usize, tol: &Tolerance) -> Result<Report> {
    let model = psi.domain();
    let mut rng = seeded_rng(seed);
    let cases: Vec<(Element, Element)> = (0..samples.max(1))
        .map(|_| {
            let x = sample_interior_with(model, &mut rng);
            let p = sample_atom(model, &mut rng)?;
            let p = p.scale(1.0 / model.gauge(&p, &x, tol)?);
            Ok((x, p))
        })
        .collect::<Result<_>>()?;
    let law = par_max(&cases, |(x, p)| {
        let img = extreme_halfline_image(psi, x, p, tol)?;
        Ok(img.law_residual / psi.codomain().order_unit_norm(&psi.apply(x, tol)?)?)
    });
    let image = par_max(&cases, |(x, p)| {
        let img = extreme_halfline_image(psi, x, p, tol)?;
        Ok(if img.q_extreme {
            (img.q_gauge - 1.0).abs()
        } else {
            f64::INFINITY
        })
    });
    Ok(Report {
        checks: vec![
            Check::at_most("extreme_halfline_law", law, tol.eq_rtol),
            Check::at_most("halfline_image_is_normalized_extreme", image, tol.eq_rtol),
        ],
    })
}

fn reversal_suite(model: &ConeModel, seed: u64, samples: usize, tol: &Tolerance) -> Result<Report> {
    require_jordan(model, "reversal")?;
    let psi = GaugeReverser::jordan_inverse(model)?;
    let heavy = samples.clamp(1, HEAVY_CAP);
    let mut report = Report::new();
    absorb(
        &mut report,
        "inverse",
        verify_gauge_reversing(&psi, seed, samples.max(1), tol),
    );
    absorb(
        &mut report,
        "inverse",
        halfline_law(&psi, seed, samples, tol)?,
    );
    absorb(
        &mut report,
        "inverse",
        verify_derivative_automorphism(&psi, seed, heavy, tol),
    );
    absorb(
        &mut report,
        "inverse",
        verify_transport(model, &psi, seed, heavy, tol),
    );

    // a map that is antitone but not gauge-reversing must be caught
    let shifted = GaugeReverser::shifted_inverse(model)?;
    let caught = !verify_gauge_reversing(&shifted, seed, samples.max(1), tol).pass();
    report.push(Check::holds("negative_control_rejected", caught));

    if *model == ConeModel::SymMat(2) {
        let ce = GaugeReverser::counterexample();
        absorb(
            &mut report,
            "counterexample",
            verify_gauge_reversing(&ce, seed, samples.max(1), tol),
        );
        absorb(
            &mut report,
            "counterexample",
            halfline_law(&ce, seed, samples, tol)?,
        );
        absorb(&mut report, "counterexample", fixed_point_free_check(tol));
    }
    Ok(report)
}

fn atoms_suite(model: &ConeModel, seed: u64, samples: usize, tol: &Tolerance) -> Result<Report> {
    require_jordan(model, "atoms")?;
    let psi = GaugeReverser::jordan_inverse(model)?;
    let mut report = Report::new();
    absorb(
        &mut report,
        "inverse",
        verify_atom_orthogonality_theorem(model, &psi, seed, samples.max(1), tol)?,
    );
    absorb(
        &mut report,
        "pure_states",
        verify_pure_states(model, seed, samples.max(1), tol)?,
    );
    absorb(
        &mut report,
        "inverse",
        verify_psi_state(&psi, seed, samples.max(1), tol)?,
    );
    if *model == ConeModel::SymMat(2) {
        let ce = GaugeReverser::counterexample();
        absorb(
            &mut report,
            "counterexample",
            verify_atom_orthogonality_theorem(model, &ce, seed, samples.max(1), tol)?,
        );
        absorb(
            &mut report,
            "counterexample",
            verify_psi_state(&ce, seed, samples.max(1), tol)?,
        );
    }
    Ok(report)
}

fn horoboundary_suite(
    model: &ConeModel,
    seed: u64,
    samples: usize,
    tol: &Tolerance,
) -> Result<Report> {
    let heavy = samples.clamp(1, HEAVY_CAP);
    let mut report = Report::new();
    absorb(
        &mut report,
        "reverse_funk",
        verify_detour_metric(model, Flavor::ReverseFunk, seed, heavy, tol)?,
    );
    absorb(
        &mut report,
        "busemann",
        verify_busemann_convergence(model, seed, heavy, tol)?,
    );
    if model.is_jordan() {
        absorb(
            &mut report,
            "funk",
            verify_detour_metric(model, Flavor::Funk, seed, heavy, tol)?,
        );
        let psi = GaugeReverser::jordan_inverse(model)?;
        absorb(
            &mut report,
            "extension",
            verify_boundary_extension(&psi, seed, heavy, tol)?,
        );
        if *model == ConeModel::SymMat(2) {
            let ce = GaugeReverser::counterexample();
            absorb(
                &mut report,
                "counterexample_extension",
                verify_boundary_extension(&ce, seed, heavy, tol)?,
            );
        }
    }
    Ok(report)
}

/// Normalized extreme rays of a polyhedral model, or sampled atoms otherwise.
fn model_atoms(
    model: &ConeModel,
    seed: u64,
    count: usize,
    tol: &Tolerance,
) -> Result<Vec<Element>> {
    match model {
        ConeModel::Polyhedral(p) => {
            let u = model.unit();
            p.rays()
                .iter()
                .map(|r| Ok(r.scale(1.0 / model.gauge(r, &u, tol)?)))
                .collect()
        }
        _ => {
            let mut rng = seeded_rng(seed);
            (0..count.max(1))
                .map(|_| sample_atom(model, &mut rng))
                .collect()
        }
    }
}

fn smoothness_counts(model: &ConeModel, atoms: &[Element], tol: &Tolerance) -> Result<Vec<usize>> {
    atoms
        .iter()
        .map(|p| model.smoothness_count(p, tol))
        .collect()
}

fn ruled_out_verdict(counts: &[usize]) -> String {
    let list = counts
        .iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(", ");
    format!(
        "gauge-reversing map ruled out: atoms are not smooth points (smoothness_count = {list})"
    )
}

fn main_theorem_suite(
    model: &ConeModel,
    seed: u64,
    samples: usize,
    tol: &Tolerance,
) -> Result<(Report, String)> {
    let atoms = model_atoms(model, seed, samples.clamp(1, HEAVY_CAP), tol)?;
    let counts = smoothness_counts(model, &atoms, tol)?;
    let max_count = counts.iter().copied().max().unwrap_or(0);
    let mut report = Report::new();
    if !model.is_jordan() {
        if max_count > 1 {
            report.push(Check::above("atom_smoothness_count", max_count as f64, 1.0));
            return Ok((report, ruled_out_verdict(&counts)));
        }
        report.push(Check::at_most(
            "atom_smoothness_count",
            max_count as f64,
            1.0,
        ));
        return Ok((
            report,
            "undecided: atoms are smooth points but the model has no Jordan structure to test further".into(),
        ));
    }

    report.push(Check::at_most(
        "atom_smoothness_count",
        max_count as f64,
        1.0,
    ));
    let psi = GaugeReverser::jordan_inverse(model)?;
    let heavy = samples.clamp(1, HEAVY_CAP);
    absorb(
        &mut report,
        "reversal",
        verify_gauge_reversing(&psi, seed, samples.max(1), tol),
    );
    let x = sample_interior_with(model, &mut seeded_rng(seed ^ 0x5a));
    absorb(
        &mut report,
        "symmetry",
        verify_symmetry(&symmetry_at(&psi, &x, tol)?, seed, samples.max(1), tol),
    );
    absorb(
        &mut report,
        "homogeneity",
        verify_transport(model, &psi, seed, heavy, tol),
    );
    absorb(
        &mut report,
        "atoms",
        verify_atom_orthogonality_theorem(model, &psi, seed, heavy, tol)?,
    );
    absorb(
        &mut report,
        "pure_states",
        verify_pure_states(model, seed, samples.max(1), tol)?,
    );
    absorb(
        &mut report,
        "inner_product",
        verify_inner_product(model, seed, samples.max(1))?,
    );
    absorb(
        &mut report,
        "self_dual",
        self_duality_check(model, seed, samples.max(1), tol)?,
    );
    let verdict = if report.pass() {
        "symmetric: gauge-reversing map, homogeneity and self-duality verified".to_string()
    } else {
        "fail".to_string()
    };
    Ok((report, verdict))
}

fn negative_square_suite(model: &ConeModel, tol: &Tolerance) -> Result<(Report, String)> {
    if !matches!(model, ConeModel::Polyhedral(_)) {
        return Err(Error::unsupported(
            "suite negative-square-cone needs a polyhedral model",
        ));
    }
    let atoms = model_atoms(model, 0, 0, tol)?;
    let counts = smoothness_counts(model, &atoms, tol)?;
    let min_count = counts.iter().copied().min().unwrap_or(0);

    // the same count is 1 on every symmetric model
    let controls = [
        ConeModel::Orthant(3),
        ConeModel::SymMat(2),
        ConeModel::SymMat(3),
        ConeModel::Spin(3),
    ];
    let mut control_max = 0;
    for (k, m) in controls.iter().enumerate() {
        for c in smoothness_counts(m, &model_atoms(m, k as u64, 8, tol)?, tol)? {
            control_max = control_max.max(c);
        }
    }
    let mut report = Report::new();
    report.push(Check::above(
        "polyhedral_atom_smoothness_count",
        min_count as f64,
        1.0,
    ));
    report.push(Check::at_most(
        "symmetric_model_atom_smoothness_count",
        control_max as f64,
        1.0,
    ));
    let verdict = if report.pass() {
        ruled_out_verdict(&counts)
    } else {
        "fail".into()
    };
    Ok((report, verdict))
}

/// CSV trace "t,x1,…,xn" of the geodesic from x to y, with t the Thompson
/// arclength from x. Linearly dependent endpoints give the type II geodesic.
pub fn emit_geodesic(
    model: &ConeModel,
    x: &Element,
    y: &Element,
    points: usize,
    tol: &Tolerance,
) -> Result<String> {
    if points < 2 {
        return Err(Error::input("a geodesic trace needs at least two points"));
    }
    model.require_interior(x, "geodesic start", tol)?;
    model.require_interior(y, "geodesic end", tol)?;
    let d = thompson(model, x, y, tol)?;
    let ratio = model.gauge(y, x, tol)?;
    let same_ray = model.order_unit_norm(&(&y.scale(1.0 / ratio) - x))?
        <= tol.eq_rtol * model.order_unit_norm(x)?;
    let point = |t: f64| -> Result<Element> {
        if same_ray {
            // y = c·x: t ↦ x·c^{t/d}
            let s = if d > 0.0 { t / d } else { 0.0 };
            Ok(x.scale(ratio.powf(s)))
        } else {
            Ok(type_i_geodesic(model, x, y, tol)?.eval(t))
        }
    };
    if !same_ray {
        type_i_geodesic(model, x, y, tol)?;
    }
    let mut out = String::from("t");
    for i in 1..=model.dim() {
        let _ = write!(out, ",x{i}");
    }
    out.push('\n');
    for k in 0..points {
        let t = d * k as f64 / (points - 1) as f64;
        let p = point(t)?;
        let _ = write!(out, "{t}");
        for c in p.as_slice() {
            let _ = write!(out, ",{c}");
        }
        out.push('\n');
    }
    Ok(out)
}
