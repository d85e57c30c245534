//! Cone models, membership, the gauge M(x/y), and order-theoretic predicates.
//!
//! A model is a finite-dimensional order unit space (V, C, u). Every variant
//! provides a closed-form gauge
//!
//! ```text
//! M(x/y) = inf { μ : x ≤ μ y },    y ∈ C°
//! ```
//!
//! from which the order unit norm, the Funk and reverse-Funk quasi-metrics and
//! the Thompson metric are derived.

mod oracle;
mod polyhedral;
mod sample;
mod spec;

pub use oracle::gauge_oracle;
pub use polyhedral::{Polyhedral, PolyhedralFile};
pub use sample::{
    sample_atom, sample_boundary, sample_element, sample_frame, sample_interior,
    sample_interior_with, sample_orthogonal_atoms, seeded_rng, spanning_atoms,
};
pub use spec::parse_model_spec;

use crate::element::Element;
use crate::error::{Error, Result};
use crate::linalg;
use crate::tolerance::Tolerance;

/// Relative threshold for rank-one / single-support decisions.
pub const EXTREME_RTOL: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq)]
pub enum ConeModel {
    /// The nonnegative orthant of ℝⁿ with unit (1, …, 1).
    Orthant(usize),
    /// Positive semidefinite n×n real symmetric matrices, unit I.
    SymMat(usize),
    /// The Lorentz cone {(λ, x) : ‖x‖₂ ≤ λ} in ℝ × ℝⁿ, unit (1, 0).
    Spin(usize),
    Polyhedral(Polyhedral),
    DirectSum(Vec<ConeModel>),
}

impl ConeModel {
    pub fn orthant(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::input("orthant dimension must be positive"));
        }
        Ok(ConeModel::Orthant(n))
    }

    pub fn sym(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::input("matrix size must be positive"));
        }
        Ok(ConeModel::SymMat(n))
    }

    pub fn spin(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::input("spin factor base dimension must be positive"));
        }
        Ok(ConeModel::Spin(n))
    }

    pub fn direct_sum(blocks: Vec<ConeModel>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::input("direct sum needs at least one block"));
        }
        Ok(ConeModel::DirectSum(blocks))
    }

    /// Ambient dimension of V.
    pub fn dim(&self) -> usize {
        match self {
            ConeModel::Orthant(n) => *n,
            ConeModel::SymMat(n) => linalg::packed_len(*n),
            ConeModel::Spin(n) => n + 1,
            ConeModel::Polyhedral(p) => p.ambient(),
            ConeModel::DirectSum(blocks) => blocks.iter().map(ConeModel::dim).sum(),
        }
    }

    /// The order unit u.
    pub fn unit(&self) -> Element {
        match self {
            ConeModel::Orthant(n) => Element::new(vec![1.0; *n]),
            ConeModel::SymMat(n) => linalg::pack(&nalgebra::DMatrix::identity(*n, *n)),
            ConeModel::Spin(n) => Element::basis(n + 1, 0),
            ConeModel::Polyhedral(p) => p.unit().clone(),
            ConeModel::DirectSum(blocks) => {
                Element::concat(&blocks.iter().map(ConeModel::unit).collect::<Vec<_>>())
            }
        }
    }

    /// True for the variants carrying a Euclidean Jordan algebra structure.
    pub fn is_jordan(&self) -> bool {
        match self {
            ConeModel::Orthant(_) | ConeModel::SymMat(_) | ConeModel::Spin(_) => true,
            ConeModel::Polyhedral(_) => false,
            ConeModel::DirectSum(blocks) => blocks.iter().all(ConeModel::is_jordan),
        }
    }

    /// Block models with their coordinate offsets (a single block for non-sums).
    pub fn blocks(&self) -> Vec<(usize, &ConeModel)> {
        match self {
            ConeModel::DirectSum(blocks) => {
                let mut offset = 0;
                blocks
                    .iter()
                    .map(|b| {
                        let here = offset;
                        offset += b.dim();
                        (here, b)
                    })
                    .collect()
            }
            _ => vec![(0, self)],
        }
    }

    pub fn spec_string(&self) -> String {
        match self {
            ConeModel::Orthant(n) => format!("orthant:{n}"),
            ConeModel::SymMat(n) => format!("sym:{n}"),
            ConeModel::Spin(n) => format!("spin:{n}"),
            ConeModel::Polyhedral(_) => "poly".to_string(),
            ConeModel::DirectSum(blocks) => format!(
                "sum:{}",
                blocks
                    .iter()
                    .map(ConeModel::spec_string)
                    .collect::<Vec<_>>()
                    .join("+")
            ),
        }
    }

    pub fn check_dim(&self, x: &Element) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::input(format!(
                "element has dimension {}, model {} expects {}",
                x.len(),
                self.spec_string(),
                self.dim()
            )));
        }
        Ok(())
    }

    /// Depth of `x` in the cone: sup{t : x − t·u ∈ C}, computed directly per
    /// variant (coordinate minimum, smallest eigenvalue, λ − ‖x‖₂, smallest facet value).
    pub fn margin(&self, x: &Element) -> f64 {
        match self {
            ConeModel::Orthant(_) => x.as_slice().iter().copied().fold(f64::INFINITY, f64::min),
            ConeModel::SymMat(n) => {
                let e = linalg::sym_eigen(&linalg::unpack(*n, x.as_slice()));
                e.values[*n - 1]
            }
            ConeModel::Spin(_) => {
                let v = &x.as_slice()[1..];
                x[0] - v.iter().map(|c| c * c).sum::<f64>().sqrt()
            }
            ConeModel::Polyhedral(p) => p.margin(x),
            ConeModel::DirectSum(_) => self
                .blocks()
                .into_iter()
                .map(|(off, b)| b.margin(&x.slice(off, b.dim())))
                .fold(f64::INFINITY, f64::min),
        }
    }

    /// Membership in C (or in C° when `strict`), with `tol.mem_eps` slack.
    pub fn membership(&self, x: &Element, strict: bool, tol: &Tolerance) -> Result<bool> {
        self.check_dim(x)?;
        Ok(self.contains(x, strict, tol.mem_eps))
    }

    pub(crate) fn contains(&self, x: &Element, strict: bool, slack: f64) -> bool {
        let m = self.margin(x);
        if strict {
            m > slack
        } else {
            m >= -slack
        }
    }

    pub(crate) fn require_interior(&self, y: &Element, what: &str, tol: &Tolerance) -> Result<()> {
        self.check_dim(y)?;
        if !y.is_finite() || !self.contains(y, true, tol.mem_eps) {
            return Err(Error::domain(format!(
                "{what} is not in the interior of the cone"
            )));
        }
        Ok(())
    }

    /// M(x/y) = inf{μ : x ≤ μ y} for y ∈ C°.
    pub fn gauge(&self, x: &Element, y: &Element, tol: &Tolerance) -> Result<f64> {
        self.check_dim(x)?;
        self.require_interior(y, "gauge denominator", tol)?;
        self.gauge_unchecked(x, y)
    }

    pub(crate) fn gauge_unchecked(&self, x: &Element, y: &Element) -> Result<f64> {
        match self {
            ConeModel::Orthant(_) => Ok(x
                .as_slice()
                .iter()
                .zip(y.as_slice())
                .map(|(a, b)| a / b)
                .fold(f64::NEG_INFINITY, f64::max)),
            ConeModel::SymMat(n) => {
                let xm = linalg::unpack(*n, x.as_slice());
                let ym = linalg::unpack(*n, y.as_slice());
                linalg::max_generalized_eigenvalue(&xm, &ym)
                    .ok_or_else(|| Error::domain("gauge denominator is not positive definite"))
            }
            ConeModel::Spin(_) => Ok(spin_gauge(x.as_slice(), y.as_slice())),
            ConeModel::Polyhedral(p) => Ok(p
                .facets()
                .iter()
                .map(|f| f.dot(x) / f.dot(y))
                .fold(f64::NEG_INFINITY, f64::max)),
            ConeModel::DirectSum(_) => {
                let mut best = f64::NEG_INFINITY;
                for (off, b) in self.blocks() {
                    let m = b.gauge_unchecked(&x.slice(off, b.dim()), &y.slice(off, b.dim()))?;
                    best = best.max(m);
                }
                Ok(best)
            }
        }
    }

    /// (M(a/y), M(b/y)) without validation, sharing work on y where possible.
    pub(crate) fn gauge_pair_unchecked(
        &self,
        a: &Element,
        b: &Element,
        y: &Element,
    ) -> Result<(f64, f64)> {
        match self {
            ConeModel::SymMat(n) => {
                let [am, bm, ym] = [a, b, y].map(|v| linalg::unpack(*n, v.as_slice()));
                linalg::max_generalized_eigenvalue_pair(&am, &bm, &ym)
                    .ok_or_else(|| Error::domain("gauge denominator is not positive definite"))
            }
            _ => Ok((self.gauge_unchecked(a, y)?, self.gauge_unchecked(b, y)?)),
        }
    }

    /// inf{μ : x ≤ μ g} for x, g ∈ C with g possibly on the boundary.
    ///
    /// Returns `+∞` when x is not dominated by any multiple of g (x leaves the
    /// face generated by g) and `−∞` when every μ works (g = 0 and x = 0 blockwise).
    pub fn boundary_gauge(&self, x: &Element, g: &Element, tol: &Tolerance) -> Result<f64> {
        self.check_dim(x)?;
        self.check_dim(g)?;
        for (v, name) in [(x, "numerator"), (g, "denominator")] {
            if !self.contains(v, false, tol.mem_eps) {
                return Err(Error::domain(format!(
                    "boundary gauge {name} is not in the cone"
                )));
            }
        }
        let scale = x.max_abs().max(g.max_abs()).max(f64::MIN_POSITIVE);
        Ok(self.boundary_gauge_inner(x, g, 1e-9 * scale))
    }

    fn boundary_gauge_inner(&self, x: &Element, g: &Element, zero: f64) -> f64 {
        match self {
            ConeModel::Orthant(_) => {
                let mut best = f64::NEG_INFINITY;
                for (a, b) in x.as_slice().iter().zip(g.as_slice()) {
                    if *b > zero {
                        best = best.max(a / b);
                    } else if *a > zero {
                        return f64::INFINITY;
                    }
                }
                best
            }
            ConeModel::SymMat(n) => {
                let gm = linalg::unpack(*n, g.as_slice());
                let xm = linalg::unpack(*n, x.as_slice());
                let e = linalg::sym_eigen(&gm);
                let range: Vec<usize> = (0..*n).filter(|&k| e.values[k] > zero).collect();
                let null: Vec<usize> = (0..*n).filter(|&k| e.values[k] <= zero).collect();
                if !null.is_empty() {
                    let nb = e.vectors.select_columns(&null);
                    let d = nb.transpose() * &xm * &nb;
                    if linalg::sym_eigen(&d).values[0] > zero {
                        return f64::INFINITY;
                    }
                }
                if range.is_empty() {
                    return f64::NEG_INFINITY;
                }
                let rb = e.vectors.select_columns(&range);
                let mut a = rb.transpose() * &xm * &rb;
                for (i, &ki) in range.iter().enumerate() {
                    for (j, &kj) in range.iter().enumerate() {
                        a[(i, j)] /= (e.values[ki] * e.values[kj]).sqrt();
                    }
                }
                linalg::sym_eigen(&a).values[0]
            }
            ConeModel::Spin(_) => {
                let gs = g.as_slice();
                let gv_norm = gs[1..].iter().map(|c| c * c).sum::<f64>().sqrt();
                if gs[0] - gv_norm > zero {
                    return spin_gauge(x.as_slice(), gs);
                }
                if gs[0] <= zero {
                    return if x.max_abs() <= zero {
                        f64::NEG_INFINITY
                    } else {
                        f64::INFINITY
                    };
                }
                // g spans an extreme ray, so only multiples of g are dominated by it
                let c = x.dot(g) / g.dot(g);
                if (x - &g.scale(c)).max_abs() <= zero.max(1e-9 * x.max_abs()) {
                    c
                } else {
                    f64::INFINITY
                }
            }
            ConeModel::Polyhedral(p) => {
                let mut best = f64::NEG_INFINITY;
                for f in p.facets() {
                    let fg = f.dot(g);
                    let fx = f.dot(x);
                    if fg > zero {
                        best = best.max(fx / fg);
                    } else if fx > zero {
                        return f64::INFINITY;
                    }
                }
                best
            }
            ConeModel::DirectSum(_) => {
                let mut best = f64::NEG_INFINITY;
                for (off, b) in self.blocks() {
                    let m = b.boundary_gauge_inner(
                        &x.slice(off, b.dim()),
                        &g.slice(off, b.dim()),
                        zero,
                    );
                    best = best.max(m);
                }
                best
            }
        }
    }

    /// ‖x‖_u = max(M(x/u), M(−x/u)).
    pub fn order_unit_norm(&self, x: &Element) -> Result<f64> {
        self.check_dim(x)?;
        let u = self.unit();
        Ok(self
            .gauge_unchecked(x, &u)?
            .max(self.gauge_unchecked(&-x, &u)?))
    }

    /// Whether the nonzero r ∈ C spans an extreme ray.
    pub fn is_extreme_vector(&self, r: &Element, tol: &Tolerance) -> Result<bool> {
        self.check_dim(r)?;
        let scale = r.max_abs();
        if scale <= 1e-12 {
            return Err(Error::input("extreme-vector test on the zero vector"));
        }
        if !self.contains(r, false, tol.mem_eps.max(1e-9 * scale)) {
            return Err(Error::input(
                "extreme-vector test on an element outside the cone",
            ));
        }
        Ok(self.is_extreme_inner(r))
    }

    fn is_extreme_inner(&self, r: &Element) -> bool {
        let scale = r.max_abs();
        match self {
            ConeModel::Orthant(_) => {
                r.as_slice()
                    .iter()
                    .filter(|c| c.abs() > EXTREME_RTOL * scale)
                    .count()
                    == 1
            }
            ConeModel::SymMat(n) => {
                if *n == 1 {
                    return true;
                }
                let e = linalg::sym_eigen(&linalg::unpack(*n, r.as_slice()));
                e.values[1] <= EXTREME_RTOL * e.values[0]
            }
            ConeModel::Spin(_) => {
                let v = r.as_slice()[1..].iter().map(|c| c * c).sum::<f64>().sqrt();
                (r[0] - v).abs() <= EXTREME_RTOL * r[0]
            }
            ConeModel::Polyhedral(p) => p.rays().iter().any(|ray| {
                let c = r.dot(ray) / ray.dot(ray);
                c > 0.0 && (r - &ray.scale(c)).euclidean_norm() <= EXTREME_RTOL * r.euclidean_norm()
            }),
            ConeModel::DirectSum(_) => {
                let nonzero: Vec<_> = self
                    .blocks()
                    .into_iter()
                    .filter_map(|(off, b)| {
                        let part = r.slice(off, b.dim());
                        (part.max_abs() > EXTREME_RTOL * scale).then_some((b, part))
                    })
                    .collect();
                nonzero.len() == 1 && nonzero[0].0.is_extreme_inner(&nonzero[0].1)
            }
        }
    }

    /// Extreme vector normalized to M(p/u) = 1.
    pub fn is_atom(&self, p: &Element, tol: &Tolerance) -> bool {
        match self.is_extreme_vector(p, tol) {
            Ok(true) => self
                .gauge_unchecked(p, &self.unit())
                .map(|m| (m - 1.0).abs() <= tol.eq_rtol)
                .unwrap_or(false),
            _ => false,
        }
    }

    /// Atoms p₁, …, pₙ are orthogonal when p₁ + … + pₙ ≤ u.
    pub fn are_orthogonal_atoms(&self, ps: &[Element], tol: &Tolerance) -> Result<bool> {
        let mut rest = self.unit();
        for p in ps {
            self.check_dim(p)?;
            if !self.is_atom(p, tol) {
                return Err(Error::input("orthogonality test on a non-atom"));
            }
            rest = &rest - p;
        }
        Ok(self.contains(&rest, false, tol.mem_eps.max(tol.eq_rtol)))
    }

    /// Number of affinely independent pure states vanishing at u − p.
    ///
    /// Equals 1 exactly when u − p is a smooth boundary point.
    pub fn smoothness_count(&self, p: &Element, tol: &Tolerance) -> Result<usize> {
        self.check_dim(p)?;
        if !self.is_atom(p, tol) {
            return Err(Error::input("smoothness count requires an atom"));
        }
        let z = &self.unit() - p;
        Ok(self.supporting_state_count(&z, 1e-7))
    }

    /// Count of affinely independent pure states φ with φ(z) = 0, for z ∈ C.
    fn supporting_state_count(&self, z: &Element, zero: f64) -> usize {
        match self {
            ConeModel::Orthant(_) => z.as_slice().iter().filter(|c| c.abs() <= zero).count(),
            ConeModel::SymMat(n) => {
                let e = linalg::sym_eigen(&linalg::unpack(*n, z.as_slice()));
                let k = e.values.iter().filter(|v| v.abs() <= zero).count();
                // states supported on a k-dimensional kernel form the density matrices there
                k * (k + 1) / 2
            }
            ConeModel::Spin(n) => {
                let v = z.as_slice()[1..].iter().map(|c| c * c).sum::<f64>().sqrt();
                if z[0].abs() <= zero && v <= zero {
                    n + 1
                } else if (z[0] - v).abs() <= zero {
                    1
                } else {
                    0
                }
            }
            ConeModel::Polyhedral(p) => {
                p.facets().iter().filter(|f| f.dot(z).abs() <= zero).count()
            }
            ConeModel::DirectSum(_) => self
                .blocks()
                .into_iter()
                .map(|(off, b)| b.supporting_state_count(&z.slice(off, b.dim()), zero))
                .sum(),
        }
    }
}

/// Larger root of t²(λ_y² − ‖y_v‖²) − 2t(λ_xλ_y − ⟨x_v, y_v⟩) + (λ_x² − ‖x_v‖²) = 0.
fn spin_gauge(x: &[f64], y: &[f64]) -> f64 {
    let (lx, xv) = (x[0], &x[1..]);
    let (ly, yv) = (y[0], &y[1..]);
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(p, q)| p * q).sum::<f64>();
    let a = ly * ly - dot(yv, yv);
    let b = lx * ly - dot(xv, yv);
    let c = lx * lx - dot(xv, xv);
    // b² − ac = |lx·y⃗ − ly·x⃗|² − |x⃗ ∧ y⃗|², free of cancellation when x ∥ y
    let w: f64 = xv
        .iter()
        .zip(yv)
        .map(|(p, q)| (lx * q - ly * p).powi(2))
        .sum();
    let mut wedge = 0.0;
    for i in 0..xv.len() {
        for j in i + 1..xv.len() {
            wedge += (xv[i] * yv[j] - xv[j] * yv[i]).powi(2);
        }
    }
    let disc = (w - wedge).max(0.0).sqrt();
    if b >= 0.0 {
        (b + disc) / a
    } else {
        // avoid cancellation: t₊ = c / (b − √disc)
        let denom = b - disc;
        c / denom
    }
}
