//! Dense linear-algebra helpers shared by the cone models.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::element::Element;

/// Ambient dimension of the packed upper triangle of an n×n symmetric matrix.
pub fn packed_len(n: usize) -> usize {
    n * (n + 1) / 2
}

/// Packed index of entry (i, j) with i ≤ j.
pub fn packed_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    i * n - i * (i + 1) / 2 + j
}

pub fn unpack(n: usize, coords: &[f64]) -> DMatrix<f64> {
    debug_assert_eq!(coords.len(), packed_len(n));
    let mut m = DMatrix::zeros(n, n);
    let mut k = 0;
    for i in 0..n {
        for j in i..n {
            m[(i, j)] = coords[k];
            m[(j, i)] = coords[k];
            k += 1;
        }
    }
    m
}

/// Packs the symmetric part of `m`.
pub fn pack(m: &DMatrix<f64>) -> Element {
    let n = m.nrows();
    let mut out = Vec::with_capacity(packed_len(n));
    for i in 0..n {
        for j in i..n {
            out.push(0.5 * (m[(i, j)] + m[(j, i)]));
        }
    }
    Element::new(out)
}

/// Eigendecomposition of a symmetric matrix with eigenvalues sorted in
/// descending order and an orthonormal eigenvector matrix.
pub struct SortedEigen {
    pub values: Vec<f64>,
    /// Column k is the eigenvector of `values[k]`.
    pub vectors: DMatrix<f64>,
}

pub fn sym_eigen(m: &DMatrix<f64>) -> SortedEigen {
    let n = m.nrows();
    let sym = 0.5 * (m + m.transpose());
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vectors = DMatrix::zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        vectors.set_column(col, &eig.eigenvectors.column(k));
    }
    // modified Gram-Schmidt; clustered eigenvalues can leave the block slightly skewed
    for col in 0..n {
        for prev in 0..col {
            let p = vectors.column(prev).clone_owned();
            let d = p.dot(&vectors.column(col));
            let mut c = vectors.column_mut(col);
            c.axpy(-d, &p, 1.0);
        }
        let norm = vectors.column(col).norm();
        if norm > 0.0 {
            vectors.column_mut(col).scale_mut(1.0 / norm);
        }
    }
    SortedEigen { values, vectors }
}

/// Largest λ with det(X − λY) = 0 for symmetric X and positive definite Y.
pub fn max_generalized_eigenvalue(x: &DMatrix<f64>, y: &DMatrix<f64>) -> Option<f64> {
    let chol = y.clone().cholesky()?;
    let l = chol.l();
    let linv_x = l.solve_lower_triangular(x)?;
    let w = l.solve_lower_triangular(&linv_x.transpose())?;
    Some(sym_eigen(&w).values[0])
}

/// Largest generalized eigenvalues of (a, y) and (b, y), sharing one factorization of y.
pub fn max_generalized_eigenvalue_pair(
    a: &DMatrix<f64>,
    b: &DMatrix<f64>,
    y: &DMatrix<f64>,
) -> Option<(f64, f64)> {
    let chol = y.clone().cholesky()?;
    let l = chol.l();
    let top = |x: &DMatrix<f64>| -> Option<f64> {
        let linv_x = l.solve_lower_triangular(x)?;
        let w = l.solve_lower_triangular(&linv_x.transpose())?;
        Some(w.symmetric_eigenvalues().max())
    };
    Some((top(a)?, top(b)?))
}

/// Orthonormal basis (as columns) of the null space of `a`, using a relative
/// singular-value cutoff.
pub fn null_space(a: &DMatrix<f64>, rel_tol: f64) -> DMatrix<f64> {
    let cols = a.ncols();
    if a.nrows() == 0 {
        return DMatrix::identity(cols, cols);
    }
    // eigenvectors of AᵀA with (near) zero eigenvalues
    let ata = a.transpose() * a;
    let eig = sym_eigen(&ata);
    let top = eig.values[0].max(0.0);
    let cutoff = rel_tol * rel_tol * top.max(f64::MIN_POSITIVE);
    let keep: Vec<usize> = (0..cols).filter(|&k| eig.values[k] <= cutoff).collect();
    let mut basis = DMatrix::zeros(cols, keep.len());
    for (c, &k) in keep.iter().enumerate() {
        basis.set_column(c, &eig.vectors.column(k));
    }
    basis
}

/// Matrix whose columns are the given elements.
pub fn columns(elems: &[Element]) -> DMatrix<f64> {
    let rows = elems.first().map_or(0, Element::len);
    let mut m = DMatrix::zeros(rows, elems.len());
    for (c, e) in elems.iter().enumerate() {
        m.set_column(c, &DVector::from_column_slice(e.as_slice()));
    }
    m
}

/// Smallest singular value divided by the largest.
pub fn inverse_condition(m: &DMatrix<f64>) -> f64 {
    let sv = m.clone().svd(false, false).singular_values;
    let max = sv.iter().fold(0.0_f64, |a, &b| a.max(b));
    let min = sv.iter().fold(f64::INFINITY, |a, &b| a.min(b));
    if max == 0.0 {
        0.0
    } else {
        min / max
    }
}
