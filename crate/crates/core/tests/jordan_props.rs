use proptest::prelude::*;
use symcone_core::cone::{parse_model_spec, sample_atom, sample_interior_with, seeded_rng};
use symcone_core::jordan::{inverse, jordan_product, quad_rep, spectral, sqrt, trace};
use symcone_core::{ConeModel, Element, Tolerance};

const MODELS: [&str; 5] = [
    "orthant:4",
    "sym:2",
    "sym:3",
    "spin:4",
    "sum:orthant:2+spin:3",
];

fn setup(idx: usize, seed: u64) -> (ConeModel, Element, Element) {
    let m = parse_model_spec(MODELS[idx]).unwrap();
    let mut rng = seeded_rng(seed);
    let x = sample_interior_with(&m, &mut rng);
    let y = sample_interior_with(&m, &mut rng);
    (m, x, y)
}

fn rel(m: &ConeModel, a: &Element, b: &Element) -> f64 {
    m.order_unit_norm(&(a - b)).unwrap() / m.order_unit_norm(b).unwrap().max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_is_commutative_with_unit(idx in 0..MODELS.len(), seed in any::<u64>()) {
        let (m, x, y) = setup(idx, seed);
        let xy = jordan_product(&m, &x, &y).unwrap();
        prop_assert!(rel(&m, &xy, &jordan_product(&m, &y, &x).unwrap()) < 1e-12);
        prop_assert!(rel(&m, &jordan_product(&m, &x, &m.unit()).unwrap(), &x) < 1e-12);
    }

    #[test]
    fn jordan_identity(idx in 0..MODELS.len(), seed in any::<u64>()) {
        // (x²∙y)∙x = x²∙(y∙x)
        let (m, x, y) = setup(idx, seed);
        let x2 = jordan_product(&m, &x, &x).unwrap();
        let lhs = jordan_product(&m, &jordan_product(&m, &x2, &y).unwrap(), &x).unwrap();
        let rhs = jordan_product(&m, &x2, &jordan_product(&m, &y, &x).unwrap()).unwrap();
        prop_assert!(rel(&m, &lhs, &rhs) < 1e-10);
    }

    #[test]
    fn quadratic_representation_of_inverse_is_identity(idx in 0..MODELS.len(), seed in any::<u64>()) {
        let tol = Tolerance::default();
        let (m, x, _) = setup(idx, seed);
        let xinv = inverse(&m, &x, &tol).unwrap();
        prop_assert!(rel(&m, &quad_rep(&m, &x, &xinv).unwrap(), &x) < 1e-9);
        prop_assert!(rel(&m, &jordan_product(&m, &x, &xinv).unwrap(), &m.unit()) < 1e-9);
    }

    #[test]
    fn spectral_reconstruction(idx in 0..MODELS.len(), seed in any::<u64>()) {
        let tol = Tolerance::default();
        let (m, x, _) = setup(idx, seed);
        let sd = spectral(&m, &x).unwrap();
        prop_assert!(rel(&m, &sd.reconstruct(m.dim()), &x) < 1e-10);
        prop_assert!(sd.min_eigenvalue() > 0.0);
        let sum: f64 = sd.eigenvalues.iter().sum();
        prop_assert!((sum - trace(&m, &x).unwrap()).abs() <= 1e-10 * sum.abs());
        for p in &sd.idempotents {
            prop_assert!(rel(&m, &jordan_product(&m, p, p).unwrap(), p) < 1e-9);
        }
        let r = sqrt(&m, &x, &tol).unwrap();
        prop_assert!(rel(&m, &jordan_product(&m, &r, &r).unwrap(), &x) < 1e-9);
    }

    #[test]
    fn quadratic_representation_preserves_the_cone(idx in 0..MODELS.len(), seed in any::<u64>()) {
        let tol = Tolerance::default();
        let (m, x, y) = setup(idx, seed);
        prop_assert!(m.membership(&quad_rep(&m, &x, &y).unwrap(), true, &tol).unwrap());
    }

    #[test]
    fn sampled_atoms_are_primitive_idempotents(idx in 0..MODELS.len(), seed in any::<u64>()) {
        let tol = Tolerance::default();
        let m = parse_model_spec(MODELS[idx]).unwrap();
        let p = sample_atom(&m, &mut seeded_rng(seed)).unwrap();
        prop_assert!(rel(&m, &jordan_product(&m, &p, &p).unwrap(), &p) < 1e-9);
        prop_assert!((trace(&m, &p).unwrap() - 1.0).abs() < 1e-9);
        prop_assert!(m.is_extreme_vector(&p, &tol).unwrap());
    }
}
