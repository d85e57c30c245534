//! Euclidean Jordan algebra structure of the symmetric models.
//!
//! Orthant: coordinatewise product. SymMat: X∙Y = (XY + YX)/2. Spin:
//! (λ, x)∙(μ, y) = (λμ + ⟨x, y⟩, λy + μx). Direct sums act blockwise.

use nalgebra::DMatrix;

use crate::cone::ConeModel;
use crate::element::Element;
use crate::error::{Error, Result};
use crate::linalg;
use crate::tolerance::Tolerance;

/// x = Σ λₖ pₖ with {pₖ} a frame.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub idempotents: Vec<Element>,
}

impl SpectralDecomposition {
    pub fn reconstruct(&self, dim: usize) -> Element {
        crate::element::combination(dim, &self.eigenvalues, &self.idempotents)
    }

    /// Σ f(λₖ) pₖ.
    pub fn map(&self, dim: usize, f: impl Fn(f64) -> f64) -> Element {
        let coefs: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        crate::element::combination(dim, &coefs, &self.idempotents)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    pub fn max_abs_eigenvalue(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0_f64, |m, l| m.max(l.abs()))
    }
}

fn require_jordan(model: &ConeModel) -> Result<()> {
    if model.is_jordan() {
        Ok(())
    } else {
        Err(Error::unsupported(format!(
            "{} has no Jordan structure",
            model.spec_string()
        )))
    }
}

pub fn jordan_product(model: &ConeModel, x: &Element, y: &Element) -> Result<Element> {
    require_jordan(model)?;
    model.check_dim(x)?;
    model.check_dim(y)?;
    Ok(product_inner(model, x, y))
}

fn product_inner(model: &ConeModel, x: &Element, y: &Element) -> Element {
    match model {
        ConeModel::Orthant(_) => Element::new(
            x.as_slice()
                .iter()
                .zip(y.as_slice())
                .map(|(a, b)| a * b)
                .collect(),
        ),
        ConeModel::SymMat(n) => {
            let xm = linalg::unpack(*n, x.as_slice());
            let ym = linalg::unpack(*n, y.as_slice());
            let prod: DMatrix<f64> = (&xm * &ym + &ym * &xm) * 0.5;
            linalg::pack(&prod)
        }
        ConeModel::Spin(_) => {
            let (l, xv) = (x[0], &x.as_slice()[1..]);
            let (m, yv) = (y[0], &y.as_slice()[1..]);
            let mut out = vec![l * m + xv.iter().zip(yv).map(|(a, b)| a * b).sum::<f64>()];
            out.extend(xv.iter().zip(yv).map(|(a, b)| l * b + m * a));
            Element::new(out)
        }
        ConeModel::DirectSum(_) => {
            let parts: Vec<Element> = model
                .blocks()
                .into_iter()
                .map(|(off, b)| product_inner(b, &x.slice(off, b.dim()), &y.slice(off, b.dim())))
                .collect();
            Element::concat(&parts)
        }
        ConeModel::Polyhedral(_) => unreachable!("checked by require_jordan"),
    }
}

/// Q_x(z) = 2x∙(x∙z) − x²∙z.
pub fn quad_rep(model: &ConeModel, x: &Element, z: &Element) -> Result<Element> {
    let xz = jordan_product(model, x, z)?;
    let x_xz = product_inner(model, x, &xz);
    let x2 = product_inner(model, x, x);
    let x2z = product_inner(model, &x2, z);
    Ok(x_xz.scale(2.0).axpy(-1.0, &x2z))
}

pub fn spectral(model: &ConeModel, x: &Element) -> Result<SpectralDecomposition> {
    require_jordan(model)?;
    model.check_dim(x)?;
    Ok(spectral_inner(model, x))
}

fn spectral_inner(model: &ConeModel, x: &Element) -> SpectralDecomposition {
    match model {
        ConeModel::Orthant(n) => SpectralDecomposition {
            eigenvalues: x.as_slice().to_vec(),
            idempotents: (0..*n).map(|i| Element::basis(*n, i)).collect(),
        },
        ConeModel::SymMat(n) => {
            let e = linalg::sym_eigen(&linalg::unpack(*n, x.as_slice()));
            let idempotents = (0..*n)
                .map(|k| {
                    let v = e.vectors.column(k);
                    linalg::pack(&(v * v.transpose()))
                })
                .collect();
            SpectralDecomposition {
                eigenvalues: e.values,
                idempotents,
            }
        }
        ConeModel::Spin(n) => {
            let l = x[0];
            let xv = &x.as_slice()[1..];
            let r = xv.iter().map(|c| c * c).sum::<f64>().sqrt();
            let w: Vec<f64> = if r > 1e-15 * x.max_abs() && r > 0.0 {
                xv.iter().map(|c| c / r).collect()
            } else {
                let mut e1 = vec![0.0; *n];
                e1[0] = 1.0;
                e1
            };
            let atom = |sign: f64| {
                let mut c = vec![0.5];
                c.extend(w.iter().map(|v| 0.5 * sign * v));
                Element::new(c)
            };
            SpectralDecomposition {
                eigenvalues: vec![l + r, l - r],
                idempotents: vec![atom(1.0), atom(-1.0)],
            }
        }
        ConeModel::DirectSum(_) => {
            let dim = model.dim();
            let mut eigenvalues = Vec::new();
            let mut idempotents = Vec::new();
            for (off, b) in model.blocks() {
                let s = spectral_inner(b, &x.slice(off, b.dim()));
                eigenvalues.extend(s.eigenvalues);
                for p in s.idempotents {
                    let mut full = Element::zeros(dim);
                    full.as_mut_slice()[off..off + p.len()].copy_from_slice(p.as_slice());
                    idempotents.push(full);
                }
            }
            SpectralDecomposition {
                eigenvalues,
                idempotents,
            }
        }
        ConeModel::Polyhedral(_) => unreachable!("checked by require_jordan"),
    }
}

/// Jordan trace: the sum of the spectral eigenvalues.
pub fn trace(model: &ConeModel, x: &Element) -> Result<f64> {
    Ok(spectral(model, x)?.eigenvalues.iter().sum())
}

/// x⁻¹ = Σ λₖ⁻¹ pₖ.
pub fn inverse(model: &ConeModel, x: &Element, tol: &Tolerance) -> Result<Element> {
    let s = spectral(model, x)?;
    let scale = s.max_abs_eigenvalue();
    if s.eigenvalues.iter().any(|l| l.abs() <= tol.mem_eps * scale) || scale == 0.0 {
        return Err(Error::Singular("element has a zero spectral value".into()));
    }
    Ok(s.map(model.dim(), |l| 1.0 / l))
}

/// x^{1/2} = Σ √λₖ pₖ for x ∈ C.
pub fn sqrt(model: &ConeModel, x: &Element, tol: &Tolerance) -> Result<Element> {
    let s = spectral(model, x)?;
    let scale = s.max_abs_eigenvalue().max(1.0);
    if s.min_eigenvalue() < -tol.mem_eps * scale {
        return Err(Error::domain("square root of an element outside the cone"));
    }
    Ok(s.map(model.dim(), |l| l.max(0.0).sqrt()))
}

/// An element bound to its (Jordan) model.
#[derive(Debug, Clone)]
pub struct JordanElement<'m> {
    model: &'m ConeModel,
    value: Element,
}

impl<'m> JordanElement<'m> {
    pub fn new(model: &'m ConeModel, value: Element) -> Result<Self> {
        require_jordan(model)?;
        model.check_dim(&value)?;
        Ok(JordanElement { model, value })
    }

    pub fn value(&self) -> &Element {
        &self.value
    }

    pub fn into_value(self) -> Element {
        self.value
    }

    fn wrap(&self, value: Element) -> Self {
        JordanElement {
            model: self.model,
            value,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.wrap(product_inner(self.model, &self.value, &other.value))
    }

    pub fn square(&self) -> Self {
        self.mul(self)
    }

    pub fn quad(&self, z: &Self) -> Self {
        self.wrap(quad_rep(self.model, &self.value, &z.value).expect("validated on construction"))
    }

    pub fn inverse(&self, tol: &Tolerance) -> Result<Self> {
        Ok(self.wrap(inverse(self.model, &self.value, tol)?))
    }

    pub fn sqrt(&self, tol: &Tolerance) -> Result<Self> {
        Ok(self.wrap(sqrt(self.model, &self.value, tol)?))
    }

    pub fn spectral(&self) -> SpectralDecomposition {
        spectral_inner(self.model, &self.value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &Element, b: &Element, eps: f64) -> bool {
        (a - b).max_abs() <= eps
    }

    #[test]
    fn product_examples() {
        let o2 = ConeModel::Orthant(2);
        assert_eq!(
            jordan_product(&o2, &Element::from([1.0, 2.0]), &Element::from([3.0, 4.0])).unwrap(),
            Element::from([3.0, 8.0])
        );
        let s2 = ConeModel::Spin(2);
        assert_eq!(
            jordan_product(
                &s2,
                &Element::from([1.0, 1.0, 0.0]),
                &Element::from([1.0, 0.0, 1.0])
            )
            .unwrap(),
            Element::from([1.0, 1.0, 1.0])
        );
        let m2 = ConeModel::SymMat(2);
        let p1 = Element::from([1.0, 0.0, 0.0]);
        let p2 = Element::from([0.0, 0.0, 1.0]);
        assert_eq!(jordan_product(&m2, &p1, &p2).unwrap(), Element::zeros(3));
    }

    #[test]
    fn polyhedral_has_no_product() {
        let sq = ConeModel::Polyhedral(crate::cone::Polyhedral::square());
        let u = sq.unit();
        assert!(matches!(
            jordan_product(&sq, &u, &u),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn quad_rep_examples() {
        let o2 = ConeModel::Orthant(2);
        assert_eq!(
            quad_rep(&o2, &Element::from([2.0, 1.0]), &Element::from([1.0, 3.0])).unwrap(),
            Element::from([4.0, 3.0])
        );
        let m2 = ConeModel::SymMat(2);
        let q = quad_rep(
            &m2,
            &Element::from([1.0, 0.0, 2.0]),
            &Element::from([0.0, 1.0, 0.0]),
        )
        .unwrap();
        assert!(close(&q, &Element::from([0.0, 2.0, 0.0]), 1e-14));
        let z = Element::from([0.3, -1.2, 4.0]);
        assert!(close(&quad_rep(&m2, &m2.unit(), &z).unwrap(), &z, 1e-14));
    }

    #[test]
    fn spectral_examples() {
        let s2 = ConeModel::Spin(2);
        let d = spectral(&s2, &Element::from([3.0, 1.0, 0.0])).unwrap();
        assert_eq!(d.eigenvalues, vec![4.0, 2.0]);
        assert_eq!(d.idempotents[0], Element::from([0.5, 0.5, 0.0]));
        assert_eq!(d.idempotents[1], Element::from([0.5, -0.5, 0.0]));

        let o3 = ConeModel::Orthant(3);
        let d = spectral(&o3, &Element::from([5.0, 1.0, 2.0])).unwrap();
        assert_eq!(d.eigenvalues, vec![5.0, 1.0, 2.0]);

        let m2 = ConeModel::SymMat(2);
        let d = spectral(&m2, &Element::from([2.0, 1.0, 2.0])).unwrap();
        assert!((d.eigenvalues[0] - 3.0).abs() < 1e-14 && (d.eigenvalues[1] - 1.0).abs() < 1e-14);

        // x_v = 0 picks e₁
        let d = spectral(&s2, &Element::from([2.0, 0.0, 0.0])).unwrap();
        assert_eq!(d.idempotents[0], Element::from([0.5, 0.5, 0.0]));
    }

    #[test]
    fn inverse_examples() {
        let t = Tolerance::default();
        let o2 = ConeModel::Orthant(2);
        assert_eq!(
            inverse(&o2, &Element::from([2.0, 4.0]), &t).unwrap(),
            Element::from([0.5, 0.25])
        );
        let s2 = ConeModel::Spin(2);
        let x = Element::from([3.0, 1.0, 0.0]);
        let xi = inverse(&s2, &x, &t).unwrap();
        assert!(close(
            &xi,
            &Element::from([3.0 / 8.0, -1.0 / 8.0, 0.0]),
            1e-15
        ));
        assert!(close(
            &jordan_product(&s2, &x, &xi).unwrap(),
            &s2.unit(),
            1e-15
        ));
        assert!(matches!(
            inverse(&o2, &Element::from([1.0, 0.0]), &t),
            Err(Error::Singular(_))
        ));
    }

    #[test]
    fn sqrt_examples() {
        let t = Tolerance::default();
        let o2 = ConeModel::Orthant(2);
        assert_eq!(
            sqrt(&o2, &Element::from([4.0, 9.0]), &t).unwrap(),
            Element::from([2.0, 3.0])
        );
        let m2 = ConeModel::SymMat(2);
        assert!(close(
            &sqrt(&m2, &m2.unit(), &t).unwrap(),
            &m2.unit(),
            1e-15
        ));
        assert!(close(
            &sqrt(&m2, &Element::from([4.0, 0.0, 1.0]), &t).unwrap(),
            &Element::from([2.0, 0.0, 1.0]),
            1e-14
        ));
        assert!(matches!(
            sqrt(&o2, &Element::from([-1.0, 1.0]), &t),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn jordan_element_wrapper() {
        let t = Tolerance::default();
        let m = ConeModel::SymMat(2);
        let x = JordanElement::new(&m, Element::from([2.0, 0.5, 1.0])).unwrap();
        let xi = x.inverse(&t).unwrap();
        assert!(close(x.mul(&xi).value(), &m.unit(), 1e-14));
        assert!(close(x.quad(&xi).value(), x.value(), 1e-13));
        let r = x.sqrt(&t).unwrap();
        assert!(close(r.square().value(), x.value(), 1e-13));
    }
}
