//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

use std::process::ExitCode;
use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use symcone_core::cone::{
    parse_model_spec, sample_atom, sample_interior, sample_interior_with, seeded_rng,
};
use symcone_core::duality::{
    self_duality_check, verify_atom_orthogonality_theorem, verify_inner_product, verify_psi_state,
};
use symcone_core::horoboundary::{
    detour, detour_cost, verify_busemann_convergence, verify_detour_metric, BusemannPoint, Flavor,
};
use symcone_core::report::{Check, Report};
use symcone_core::reversal::{
    extreme_halfline_image, fixed_point_free_check, symmetry_at, verify_gauge_reversing,
    verify_transport, GaugeReverser,
};
use symcone_core::suite::run_suite;
use symcone_core::{ConeModel, Element, Tolerance};

const SEED: u64 = 7;
const JORDAN: [&str; 5] = [
    "orthant:4",
    "sym:2",
    "sym:3",
    "spin:4",
    "sum:orthant:2+spin:3",
];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(checks: &[(String, &Check)]) -> Outcome {
    let failed: Vec<String> = checks
        .iter()
        .filter(|(_, c)| !c.pass)
        .map(|(m, c)| {
            format!(
                "{m}/{}={:e} (limit {:e})",
                c.name, c.max_residual, c.threshold
            )
        })
        .collect();
    if failed.is_empty() {
        Outcome {
            pass: true,
            detail: format!("{} checks", checks.len()),
        }
    } else {
        Outcome {
            pass: false,
            detail: failed.join("; "),
        }
    }
}

fn require<'a>(report: &'a Report, names: &[&str]) -> Vec<&'a Check> {
    names
        .iter()
        .map(|n| {
            report
                .get(n)
                .unwrap_or_else(|| panic!("report has no check {n}"))
        })
        .collect()
}

fn model(spec: &str) -> ConeModel {
    parse_model_spec(spec).expect("model spec")
}

fn tol() -> Tolerance {
    Tolerance::default()
}

fn gauge_oracle_agreement() -> Outcome {
    let mut owned = Vec::new();
    for spec in [
        "orthant:4",
        "sym:3",
        "spin:4",
        "poly:square",
        "sum:orthant:2+spin:3",
    ] {
        let r = run_suite(spec, "gauge", SEED, 500, &tol()).expect("gauge suite");
        let c = r
            .get("gauge_matches_bisection_oracle")
            .expect("oracle check")
            .clone();
        owned.push((spec.to_string(), c));
    }
    let view: Vec<(String, &Check)> = owned.iter().map(|(m, c)| (m.clone(), c)).collect();
    outcome(&view)
}

fn jordan_inverse_reverses_gauge() -> Outcome {
    let reports: Vec<(String, Report)> = ["orthant:4", "sym:3", "spin:4"]
        .iter()
        .map(|s| {
            let psi = GaugeReverser::jordan_inverse(&model(s)).unwrap();
            (
                s.to_string(),
                verify_gauge_reversing(&psi, SEED, 200, &tol()),
            )
        })
        .collect();
    let mut view = Vec::new();
    for (m, r) in &reports {
        for c in require(
            r,
            &["gauge_reversal", "homogeneity_degree_minus_one", "antitone"],
        ) {
            view.push((m.clone(), c));
        }
    }
    outcome(&view)
}

fn counterexample_without_fixed_points() -> Outcome {
    let fixed = fixed_point_free_check(&tol());
    let psi = GaugeReverser::counterexample();
    let reversing = verify_gauge_reversing(&psi, SEED, 200, &tol());
    let mut view: Vec<(String, &Check)> = Vec::new();
    for c in &fixed.checks {
        view.push(("counterexample".into(), c));
    }
    for c in &reversing.checks {
        view.push(("counterexample".into(), c));
    }
    outcome(&view)
}

fn extreme_halfline_law() -> Outcome {
    let t = tol();
    let mut owned = Vec::new();
    for spec in JORDAN {
        let m = model(spec);
        let psi = GaugeReverser::jordan_inverse(&m).unwrap();
        let mut rng = seeded_rng(SEED);
        let mut worst: f64 = 0.0;
        for _ in 0..50 {
            let x = sample_interior_with(&m, &mut rng);
            let p = sample_atom(&m, &mut rng).unwrap();
            let p = p.scale(1.0 / m.gauge(&p, &x, &t).unwrap());
            let img = extreme_halfline_image(&psi, &x, &p, &t)
                .map(|i| i.law_residual)
                .unwrap_or(f64::INFINITY);
            worst = worst.max(img);
        }
        owned.push((
            spec.to_string(),
            Check::at_most("halfline_law", worst, 1e-7),
        ));
    }
    let view: Vec<(String, &Check)> = owned.iter().map(|(m, c)| (m.clone(), c)).collect();
    outcome(&view)
}

/// Q_x(y⁻¹) from explicit formulas: x²/y, X Y⁻¹ X, and the spin factor
/// Q_x(z) = 2⟨x, z⟩x − det(x) z̄ with z̄ = (z₀, −z⃗).
fn quad_of_inverse(m: &ConeModel, x: &Element, y: &Element) -> Element {
    match m {
        ConeModel::Orthant(_) => Element::new(
            x.as_slice()
                .iter()
                .zip(y.as_slice())
                .map(|(a, b)| a * a / b)
                .collect(),
        ),
        ConeModel::SymMat(n) => {
            let unpack = |v: &Element| {
                let mut k = 0;
                let mut a = DMatrix::zeros(*n, *n);
                for i in 0..*n {
                    for j in i..*n {
                        a[(i, j)] = v[k];
                        a[(j, i)] = v[k];
                        k += 1;
                    }
                }
                a
            };
            let (xm, ym) = (unpack(x), unpack(y));
            let r = &xm * ym.try_inverse().unwrap() * &xm;
            let mut out = Vec::new();
            for i in 0..*n {
                for j in i..*n {
                    out.push(0.5 * (r[(i, j)] + r[(j, i)]));
                }
            }
            Element::new(out)
        }
        ConeModel::Spin(_) => {
            let (x0, xv) = (x[0], DVector::from_column_slice(&x.as_slice()[1..]));
            let (y0, yv) = (y[0], DVector::from_column_slice(&y.as_slice()[1..]));
            let det_y = y0 * y0 - yv.norm_squared();
            let (z0, zv) = (y0 / det_y, -yv / det_y);
            let inner = x0 * z0 + xv.dot(&zv);
            let det_x = x0 * x0 - xv.norm_squared();
            let mut out = vec![2.0 * inner * x0 - det_x * z0];
            out.extend((2.0 * inner * &xv + det_x * &zv).iter());
            Element::new(out)
        }
        _ => unreachable!("explicit formulas cover the simple Jordan models"),
    }
}

fn symmetry_construction() -> Outcome {
    let t = tol();
    let mut owned = Vec::new();
    for spec in ["orthant:4", "sym:2", "sym:3", "spin:4"] {
        let m = model(spec);
        let psi = GaugeReverser::jordan_inverse(&m).unwrap();
        let mut rng = seeded_rng(SEED);
        let (mut agree, mut involution, mut derivative): (f64, f64, f64) = (0.0, 0.0, 0.0);
        for k in 0..100 {
            let x = sample_interior_with(&m, &mut rng);
            let y = sample_interior_with(&m, &mut rng);
            let s = symmetry_at(&psi, &x, &t).unwrap();
            let sy = s.eval(&y, &t).unwrap();
            let expected = quad_of_inverse(&m, &x, &y);
            let norm = |v: &Element| m.order_unit_norm(v).unwrap();
            agree = agree.max(norm(&(&sy - &expected)) / norm(&expected));
            involution = involution.max(norm(&(&s.eval(&sy, &t).unwrap() - &y)) / norm(&y));
            if k < 10 {
                let n = m.dim();
                let h = 1e-5 * norm(&x);
                for i in 0..n {
                    let e = Element::basis(n, i);
                    let d = (&s.eval(&x.axpy(h, &e), &t).unwrap()
                        - &s.eval(&x.axpy(-h, &e), &t).unwrap())
                        .scale(0.5 / h);
                    derivative = derivative.max(norm(&(&d + &e)));
                }
            }
        }
        owned.push((
            spec.to_string(),
            Check::at_most("equals_quadratic_representation", agree, 1e-5),
        ));
        owned.push((
            spec.to_string(),
            Check::at_most("involution", involution, 1e-6),
        ));
        owned.push((
            spec.to_string(),
            Check::at_most("derivative_at_center", derivative, 1e-4),
        ));
    }
    let view: Vec<(String, &Check)> = owned.iter().map(|(m, c)| (m.clone(), c)).collect();
    outcome(&view)
}

fn homogeneity_by_transport() -> Outcome {
    let reports: Vec<(String, Report)> = JORDAN
        .iter()
        .map(|s| {
            let m = model(s);
            let psi = GaugeReverser::jordan_inverse(&m).unwrap();
            (s.to_string(), verify_transport(&m, &psi, SEED, 50, &tol()))
        })
        .collect();
    let mut view = Vec::new();
    for (m, r) in &reports {
        for c in &r.checks {
            view.push((m.clone(), c));
        }
    }
    outcome(&view)
}

fn atom_orthogonality() -> Outcome {
    let mut reports = Vec::new();
    for spec in JORDAN {
        let m = model(spec);
        let psi = GaugeReverser::jordan_inverse(&m).unwrap();
        reports.push((
            spec.to_string(),
            verify_atom_orthogonality_theorem(&m, &psi, SEED, 100, &tol()).unwrap(),
        ));
    }
    let ce = GaugeReverser::counterexample();
    reports.push((
        "sym:2 counterexample".into(),
        verify_atom_orthogonality_theorem(ce.domain(), &ce, SEED, 100, &tol()).unwrap(),
    ));
    let mut view = Vec::new();
    for (m, r) in &reports {
        for c in &r.checks {
            if c.bound == symcone_core::report::Bound::Upper && c.threshold > 1e-7 {
                // only the interiority threshold carries a looser limit
                assert_eq!(c.name, "interiority_threshold_at_minus_one");
                assert!(c.threshold <= 1e-3);
            }
            view.push((m.clone(), c));
        }
    }
    outcome(&view)
}

fn inner_product_and_self_duality() -> Outcome {
    let mut reports = Vec::new();
    for spec in JORDAN {
        let m = model(spec);
        reports.push((
            spec.to_string(),
            verify_inner_product(&m, SEED, 500).unwrap(),
        ));
        reports.push((
            spec.to_string(),
            self_duality_check(&m, SEED, 200, &tol()).unwrap(),
        ));
    }
    let mut view = Vec::new();
    for (m, r) in &reports {
        for c in &r.checks {
            view.push((m.clone(), c));
        }
    }
    outcome(&view)
}

fn detour_metric() -> Outcome {
    let t = tol();
    let o3 = model("orthant:3");
    let rf = |v: [f64; 3]| BusemannPoint::reverse_funk(&o3, &Element::from(v), &t).unwrap();
    let singletons = [
        rf([1.0, 0.0, 0.0]),
        rf([0.0, 1.0, 0.0]),
        rf([0.0, 0.0, 1.0]),
    ];
    let mut apart = true;
    for (i, a) in singletons.iter().enumerate() {
        for (j, b) in singletons.iter().enumerate() {
            if i != j {
                apart &= detour(&o3, a, b, &t).unwrap().total == f64::INFINITY;
            }
        }
    }
    // the planar pair g = (1, 1/2), h = (1/2, 1) lives on the face {x₃ = 0}
    let (g, h) = (rf([1.0, 0.5, 0.0]), rf([0.5, 1.0, 0.0]));
    let d = detour(&o3, &g, &h, &t).unwrap();
    let ln2 = std::f64::consts::LN_2;
    let log2 = (d.delta_gh - ln2).abs().max((d.delta_hg - ln2).abs());
    let two_u = o3.unit().scale(2.0);
    let (g2, h2) = (
        g.clone().with_basepoint(two_u.clone()),
        h.clone().with_basepoint(two_u),
    );
    let moved = detour_cost(&o3, &g2, &h2, &t).unwrap() + detour_cost(&o3, &h2, &g2, &t).unwrap();

    let mut owned = vec![
        (
            "orthant:3".to_string(),
            Check::holds("singletons_infinitely_apart", apart),
        ),
        (
            "orthant:3".to_string(),
            Check::at_most("detour_cost_log2", log2, 1e-6),
        ),
        (
            "orthant:3".to_string(),
            Check::at_most("basepoint_independent", (moved - d.total).abs(), 1e-7),
        ),
    ];
    for spec in ["orthant:3", "sym:2", "sym:3", "spin:4", "poly:square"] {
        let m = model(spec);
        let r = verify_detour_metric(&m, Flavor::ReverseFunk, SEED, 30, &t).unwrap();
        owned.extend(r.checks.into_iter().map(|c| (spec.to_string(), c)));
    }
    let view: Vec<(String, &Check)> = owned.iter().map(|(m, c)| (m.clone(), c)).collect();
    outcome(&view)
}

fn busemann_convergence() -> Outcome {
    let mut owned = Vec::new();
    for spec in ["orthant:4", "sym:2", "sym:3", "spin:4", "poly:square"] {
        let m = model(spec);
        let r = verify_busemann_convergence(&m, SEED, 20, &tol()).unwrap();
        for name in [
            "rf_internal_points_converge_k1e6",
            "funk_singleton_is_log_pure_state",
        ] {
            if let Some(c) = r.get(name) {
                owned.push((spec.to_string(), c.clone()));
            }
        }
    }
    let view: Vec<(String, &Check)> = owned.iter().map(|(m, c)| (m.clone(), c)).collect();
    outcome(&view)
}

fn psi_state_affinity() -> Outcome {
    let mut reports = Vec::new();
    for spec in JORDAN {
        let psi = GaugeReverser::jordan_inverse(&model(spec)).unwrap();
        reports.push((
            spec.to_string(),
            verify_psi_state(&psi, SEED, 100, &tol()).unwrap(),
        ));
    }
    reports.push((
        "sym:2 counterexample".into(),
        verify_psi_state(&GaugeReverser::counterexample(), SEED, 100, &tol()).unwrap(),
    ));
    let mut view = Vec::new();
    for (m, r) in &reports {
        for c in require(
            r,
            &[
                "affine_on_interior",
                "normalized_at_image_of_unit",
                "equals_one_at_partner_atom",
            ],
        ) {
            view.push((m.clone(), c));
        }
    }
    outcome(&view)
}

fn square_cone_negative() -> Outcome {
    let t = tol();
    let sq = model("poly:square");
    let counts: Vec<usize> = match &sq {
        ConeModel::Polyhedral(p) => p
            .rays()
            .iter()
            .map(|r| {
                let atom = r.scale(1.0 / sq.gauge(r, &sq.unit(), &t).unwrap());
                sq.smoothness_count(&atom, &t).unwrap()
            })
            .collect(),
        _ => unreachable!(),
    };
    let mut symmetric_ones = true;
    for spec in JORDAN {
        let m = model(spec);
        let mut rng = seeded_rng(SEED);
        for _ in 0..20 {
            let p = sample_atom(&m, &mut rng).unwrap();
            symmetric_ones &= m.smoothness_count(&p, &t).unwrap() == 1;
        }
    }
    let main = run_suite("poly:square", "main-theorem", SEED, 0, &t).unwrap();
    let negative = run_suite("poly:square", "negative-square-cone", SEED, 0, &t).unwrap();
    let owned = [
        Check::holds("four_atoms_with_count_two", counts == [2, 2, 2, 2]),
        Check::holds("symmetric_models_count_one", symmetric_ones),
        Check::holds(
            "main_theorem_rules_out_reversal",
            main.pass && main.verdict.starts_with("gauge-reversing map ruled out"),
        ),
        Check::holds("negative_suite_passes", negative.pass),
    ];
    let view: Vec<(String, &Check)> = owned
        .iter()
        .map(|c| ("poly:square".to_string(), c))
        .collect();
    outcome(&view)
}

fn main() -> ExitCode {
    // sanity: samplers are deterministic, so every line below is reproducible
    assert_eq!(
        sample_interior(&model("sym:2"), SEED, 3),
        sample_interior(&model("sym:2"), SEED, 3)
    );

    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 12] = [
        (
            "gauge agrees with the bisection oracle",
            gauge_oracle_agreement,
        ),
        (
            "Jordan inverse reverses the gauge",
            jordan_inverse_reverses_gauge,
        ),
        (
            "2x2 counterexample: gauge-reversing without fixed points",
            counterexample_without_fixed_points,
        ),
        ("extreme half-line law", extreme_halfline_law),
        (
            "symmetry from the derivative matches Q_x(y^-1)",
            symmetry_construction,
        ),
        ("transport realizes homogeneity", homogeneity_by_transport),
        ("orthogonal atom clauses", atom_orthogonality),
        (
            "inner product and self-duality",
            inner_product_and_self_duality,
        ),
        ("detour metric", detour_metric),
        ("Busemann convergence", busemann_convergence),
        ("pure states through the reversing map", psi_state_affinity),
        (
            "square cone is ruled out by smoothness",
            square_cone_negative,
        ),
    ];
    let mut all = true;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        all &= o.pass;
        println!(
            "{} [{:2}] {name} ({}, {:.1}s)",
            if o.pass { "PASS" } else { "FAIL" },
            k + 1,
            o.detail,
            start.elapsed().as_secs_f64()
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
