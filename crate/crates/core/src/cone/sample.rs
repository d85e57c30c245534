//! Deterministic samplers for interior points, boundary points, atoms and frames.

use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::ConeModel;
use crate::element::Element;
use crate::error::{Error, Result};
use crate::linalg;

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn normal<R: Rng>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

fn embed(model: &ConeModel, offset: usize, part: &Element) -> Element {
    let mut out = Element::zeros(model.dim());
    out.as_mut_slice()[offset..offset + part.len()].copy_from_slice(part.as_slice());
    out
}

/// `count` strictly interior points, identical for identical seeds.
pub fn sample_interior(model: &ConeModel, seed: u64, count: usize) -> Vec<Element> {
    let mut rng = seeded_rng(seed);
    (0..count)
        .map(|_| sample_interior_with(model, &mut rng))
        .collect()
}

pub fn sample_interior_with<R: Rng>(model: &ConeModel, rng: &mut R) -> Element {
    match model {
        ConeModel::Orthant(n) => Element::new((0..*n).map(|_| normal(rng).exp()).collect()),
        ConeModel::SymMat(n) => {
            let a = DMatrix::from_fn(*n, *n, |_, _| normal(rng));
            let m = &a * a.transpose() + DMatrix::identity(*n, *n) * 0.1;
            linalg::pack(&m)
        }
        ConeModel::Spin(n) => {
            let v: Vec<f64> = (0..*n).map(|_| normal(rng)).collect();
            let norm = v.iter().map(|c| c * c).sum::<f64>().sqrt();
            let lead = norm + 0.2 + normal(rng).abs();
            let mut coords = vec![lead];
            coords.extend(v);
            Element::new(coords)
        }
        ConeModel::Polyhedral(p) => {
            let mut x = p.unit().scale(0.1);
            for r in p.rays() {
                x = x.axpy(rng.random::<f64>(), r);
            }
            x
        }
        ConeModel::DirectSum(blocks) => Element::concat(
            &blocks
                .iter()
                .map(|b| sample_interior_with(b, rng))
                .collect::<Vec<_>>(),
        ),
    }
}

/// An arbitrary element of V with standard normal coordinates.
pub fn sample_element<R: Rng>(model: &ConeModel, rng: &mut R) -> Element {
    Element::new((0..model.dim()).map(|_| normal(rng)).collect())
}

fn random_orthogonal<R: Rng>(n: usize, rng: &mut R) -> DMatrix<f64> {
    let a = DMatrix::from_fn(n, n, |_, _| normal(rng));
    a.qr().q()
}

fn random_unit<R: Rng>(n: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| normal(rng)).collect();
        let norm = v.iter().map(|c| c * c).sum::<f64>().sqrt();
        if norm > 1e-3 {
            return v.into_iter().map(|c| c / norm).collect();
        }
    }
}

fn spin_atom(w: &[f64], sign: f64) -> Element {
    let mut coords = vec![0.5];
    coords.extend(w.iter().map(|c| 0.5 * sign * c));
    Element::new(coords)
}

fn rank_one(v: &[f64]) -> Element {
    let n = v.len();
    let m = DMatrix::from_fn(n, n, |i, j| v[i] * v[j]);
    linalg::pack(&m)
}

fn require_jordan(model: &ConeModel) -> Result<()> {
    if model.is_jordan() {
        Ok(())
    } else {
        Err(Error::unsupported("frames exist only on Jordan models"))
    }
}

/// A random frame: orthogonal atoms summing to u.
pub fn sample_frame<R: Rng>(model: &ConeModel, rng: &mut R) -> Result<Vec<Element>> {
    require_jordan(model)?;
    Ok(match model {
        ConeModel::Orthant(n) => {
            let mut idx: Vec<usize> = (0..*n).collect();
            idx.shuffle(rng);
            idx.into_iter().map(|i| Element::basis(*n, i)).collect()
        }
        ConeModel::SymMat(n) => {
            let q = random_orthogonal(*n, rng);
            (0..*n).map(|k| rank_one(q.column(k).as_slice())).collect()
        }
        ConeModel::Spin(n) => {
            let w = random_unit(*n, rng);
            vec![spin_atom(&w, 1.0), spin_atom(&w, -1.0)]
        }
        ConeModel::DirectSum(_) => {
            let mut frame = Vec::new();
            for (off, b) in model.blocks() {
                for p in sample_frame(b, rng)? {
                    frame.push(embed(model, off, &p));
                }
            }
            frame
        }
        ConeModel::Polyhedral(_) => unreachable!(),
    })
}

/// A random atom (for polyhedral models a normalized extreme ray).
pub fn sample_atom<R: Rng>(model: &ConeModel, rng: &mut R) -> Result<Element> {
    match model {
        ConeModel::Orthant(n) => Ok(Element::basis(*n, rng.random_range(0..*n))),
        ConeModel::SymMat(n) => Ok(rank_one(&random_unit(*n, rng))),
        ConeModel::Spin(n) => Ok(spin_atom(&random_unit(*n, rng), 1.0)),
        ConeModel::Polyhedral(p) => {
            let r = &p.rays()[rng.random_range(0..p.rays().len())];
            let m = model.gauge_unchecked(r, p.unit())?;
            Ok(r.scale(1.0 / m))
        }
        ConeModel::DirectSum(_) => {
            let blocks = model.blocks();
            let (off, b) = blocks[rng.random_range(0..blocks.len())];
            Ok(embed(model, off, &sample_atom(b, rng)?))
        }
    }
}

/// A nonempty random subset of a random frame.
pub fn sample_orthogonal_atoms<R: Rng>(model: &ConeModel, rng: &mut R) -> Result<Vec<Element>> {
    let mut frame = sample_frame(model, rng)?;
    frame.shuffle(rng);
    let keep = rng.random_range(1..=frame.len());
    frame.truncate(keep);
    Ok(frame)
}

/// A random g ∈ ∂C \ {0} with ‖g‖_u = 1.
pub fn sample_boundary<R: Rng>(model: &ConeModel, rng: &mut R) -> Result<Element> {
    let g = match model {
        ConeModel::Polyhedral(p) => {
            let f = &p.facets()[rng.random_range(0..p.facets().len())];
            let on_facet: Vec<&Element> = p
                .rays()
                .iter()
                .filter(|r| f.dot(r).abs() <= 1e-9 * r.max_abs())
                .collect();
            let mut g = Element::zeros(model.dim());
            for r in on_facet {
                g = g.axpy(0.05 + rng.random::<f64>(), r);
            }
            g
        }
        ConeModel::DirectSum(_) => {
            let blocks = model.blocks();
            let on_boundary = rng.random_range(0..blocks.len());
            let parts: Vec<Element> = blocks
                .iter()
                .enumerate()
                .map(|(k, (_, b))| {
                    if k == on_boundary {
                        sample_boundary(b, rng)
                    } else if rng.random::<f64>() < 0.3 {
                        Ok(Element::zeros(b.dim()))
                    } else {
                        Ok(sample_interior_with(b, rng))
                    }
                })
                .collect::<Result<_>>()?;
            Element::concat(&parts)
        }
        _ => {
            let frame = sample_frame(model, rng)?;
            let n = frame.len();
            if n < 2 {
                return Err(Error::unsupported("rank-one model has no nonzero boundary"));
            }
            let zeros = rng.random_range(1..n);
            let mut weights: Vec<f64> = (0..n)
                .map(|k| {
                    if k < zeros {
                        0.0
                    } else {
                        0.05 + rng.random::<f64>()
                    }
                })
                .collect();
            weights.shuffle(rng);
            crate::element::combination(model.dim(), &weights, &frame)
        }
    };
    let norm = model.order_unit_norm(&g)?;
    Ok(g.scale(1.0 / norm))
}

/// dim(V) linearly independent atoms at u spanning V (Jordan models).
///
/// A frame alone spans only the diagonal part; the off-diagonal directions are
/// covered by atoms such as ½(eᵢ + eⱼ)(eᵢ + eⱼ)ᵀ and ½(1, eₖ).
pub fn spanning_atoms(model: &ConeModel) -> Result<Vec<Element>> {
    require_jordan(model)?;
    Ok(match model {
        ConeModel::Orthant(n) => (0..*n).map(|i| Element::basis(*n, i)).collect(),
        ConeModel::SymMat(n) => {
            let mut atoms = Vec::new();
            for i in 0..*n {
                for j in i..*n {
                    let mut v = vec![0.0; *n];
                    if i == j {
                        v[i] = 1.0;
                    } else {
                        let s = std::f64::consts::FRAC_1_SQRT_2;
                        v[i] = s;
                        v[j] = s;
                    }
                    atoms.push(rank_one(&v));
                }
            }
            atoms
        }
        ConeModel::Spin(n) => {
            let mut atoms = Vec::new();
            let mut e1 = vec![0.0; *n];
            e1[0] = 1.0;
            atoms.push(spin_atom(&e1, 1.0));
            atoms.push(spin_atom(&e1, -1.0));
            for k in 1..*n {
                let mut w = vec![0.0; *n];
                w[k] = 1.0;
                atoms.push(spin_atom(&w, 1.0));
            }
            atoms
        }
        ConeModel::DirectSum(_) => {
            let mut atoms = Vec::new();
            for (off, b) in model.blocks() {
                for p in spanning_atoms(b)? {
                    atoms.push(embed(model, off, &p));
                }
            }
            atoms
        }
        ConeModel::Polyhedral(_) => unreachable!(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::Polyhedral;
    use crate::tolerance::Tolerance;

    fn models() -> Vec<ConeModel> {
        vec![
            ConeModel::Orthant(3),
            ConeModel::SymMat(3),
            ConeModel::Spin(3),
            ConeModel::Polyhedral(Polyhedral::square()),
            ConeModel::DirectSum(vec![ConeModel::Orthant(2), ConeModel::Spin(3)]),
        ]
    }

    #[test]
    fn interior_samples_are_strict_members_and_deterministic() {
        let t = Tolerance::default();
        for m in models() {
            let a = sample_interior(&m, 11, 5);
            assert_eq!(a.len(), 5);
            assert!(a.iter().all(|x| m.membership(x, true, &t).unwrap()));
            assert_eq!(a, sample_interior(&m, 11, 5));
        }
        let one = sample_interior(&ConeModel::Orthant(2), 0, 1);
        assert!(one[0].as_slice().iter().all(|&c| c > 0.0));
    }

    #[test]
    fn frames_sum_to_unit() {
        let t = Tolerance::default();
        let mut rng = seeded_rng(3);
        for m in models().into_iter().filter(ConeModel::is_jordan) {
            let frame = sample_frame(&m, &mut rng).unwrap();
            let sum = frame
                .iter()
                .fold(Element::zeros(m.dim()), |acc, p| &acc + p);
            assert!((&sum - &m.unit()).max_abs() < 1e-12);
            assert!(m.are_orthogonal_atoms(&frame, &t).unwrap());
        }
    }

    #[test]
    fn boundary_samples() {
        let t = Tolerance::default();
        let mut rng = seeded_rng(5);
        for m in models() {
            for _ in 0..20 {
                let g = sample_boundary(&m, &mut rng).unwrap();
                assert!(m.membership(&g, false, &t).unwrap());
                assert!(!m.membership(&g, true, &t).unwrap());
                assert!((m.order_unit_norm(&g).unwrap() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn spanning_atoms_span() {
        let t = Tolerance::default();
        for m in models().into_iter().filter(ConeModel::is_jordan) {
            let atoms = spanning_atoms(&m).unwrap();
            assert_eq!(atoms.len(), m.dim());
            assert!(atoms.iter().all(|p| m.is_atom(p, &t)));
            assert!(linalg::inverse_condition(&linalg::columns(&atoms)) > 1e-3);
        }
    }
}
