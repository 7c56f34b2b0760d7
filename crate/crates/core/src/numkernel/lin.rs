//! Compressions and small dense utilities built on the SVD.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::svd::svd;

pub type Mat = DMatrix<f64>;
pub type CMat = DMatrix<Complex64>;

/// Orthogonal `U` and rank `rho` with `U^T M = [M1; 0]`, `M1` of full row rank `rho`.
pub fn row_compress(m: &Mat, tol: f64) -> (Mat, usize) {
    let rows = m.nrows();
    if m.ncols() == 0 || rows == 0 {
        return (Mat::identity(rows, rows), 0);
    }
    let s = svd(m);
    let rank = s.rank_above(tol);
    (s.u, rank)
}

/// Orthogonal `Z` and rank `rho` with `M Z = [0  M2]`, `M2` of full column rank `rho`.
pub fn col_compress_right(m: &Mat, tol: f64) -> (Mat, usize) {
    let cols = m.ncols();
    if m.nrows() == 0 || cols == 0 {
        return (Mat::identity(cols, cols), 0);
    }
    let s = svd(m);
    let rank = s.rank_above(tol);
    let mut z = Mat::zeros(cols, cols);
    for j in 0..cols - rank {
        z.set_column(j, &s.v.column(rank + j));
    }
    for j in 0..rank {
        z.set_column(cols - rank + j, &s.v.column(j));
    }
    (z, rank)
}

/// Orthogonal `Z` and rank `rho` with `M Z = [M1  0]`, `M1` of full column rank `rho`.
pub fn col_compress_left(m: &Mat, tol: f64) -> (Mat, usize) {
    let cols = m.ncols();
    if m.nrows() == 0 || cols == 0 {
        return (Mat::identity(cols, cols), 0);
    }
    let s = svd(m);
    let rank = s.rank_above(tol);
    (s.v, rank)
}

/// Orthonormal basis of the right null space.
pub fn null_space(m: &Mat, tol: f64) -> Mat {
    let (z, rank) = col_compress_right(m, tol);
    let k = m.ncols() - rank;
    z.columns(0, k).into_owned()
}

/// Orthonormal basis of the column space and of its orthogonal complement.
pub fn range_split(m: &Mat, tol: f64) -> (Mat, Mat) {
    let (u, rank) = row_compress(m, tol);
    let rows = m.nrows();
    (u.columns(0, rank).into_owned(), u.columns(rank, rows - rank).into_owned())
}

pub fn rank(m: &Mat, tol: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    svd(m).rank_above(tol)
}

pub fn block(m: &Mat, r0: usize, c0: usize, nr: usize, nc: usize) -> Mat {
    m.view((r0, c0), (nr, nc)).into_owned()
}

/// Assembles a block matrix from rows of blocks; every block row must share a height.
pub fn blocks(rows: &[&[&Mat]]) -> Mat {
    let heights: Vec<usize> = rows.iter().map(|r| r.first().map_or(0, |b| b.nrows())).collect();
    let widths: Vec<usize> = rows.first().map_or(vec![], |r| r.iter().map(|b| b.ncols()).collect());
    let h: usize = heights.iter().sum();
    let w: usize = widths.iter().sum();
    let mut out = Mat::zeros(h, w);
    let mut r0 = 0;
    for (bi, row) in rows.iter().enumerate() {
        let mut c0 = 0;
        for (bj, b) in row.iter().enumerate() {
            debug_assert_eq!(b.nrows(), heights[bi]);
            debug_assert_eq!(b.ncols(), widths[bj]);
            out.view_mut((r0, c0), (b.nrows(), b.ncols())).copy_from(*b);
            c0 += widths[bj];
        }
        r0 += heights[bi];
    }
    out
}

pub fn block_diag(a: &Mat, b: &Mat) -> Mat {
    let mut out = Mat::zeros(a.nrows() + b.nrows(), a.ncols() + b.ncols());
    out.view_mut((0, 0), a.shape()).copy_from(a);
    out.view_mut(a.shape(), b.shape()).copy_from(b);
    out
}

pub fn hstack(a: &Mat, b: &Mat) -> Mat {
    let mut out = Mat::zeros(a.nrows(), a.ncols() + b.ncols());
    out.columns_mut(0, a.ncols()).copy_from(a);
    out.columns_mut(a.ncols(), b.ncols()).copy_from(b);
    out
}

pub fn vstack(a: &Mat, b: &Mat) -> Mat {
    let mut out = Mat::zeros(a.nrows() + b.nrows(), a.ncols());
    out.rows_mut(0, a.nrows()).copy_from(a);
    out.rows_mut(a.nrows(), b.nrows()).copy_from(b);
    out
}

pub fn to_complex(m: &Mat) -> CMat {
    m.map(|x| Complex64::new(x, 0.0))
}

/// Singular values of a complex matrix, descending.
pub fn complex_singular_values(m: &CMat) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return vec![];
    }
    let mut s: Vec<f64> = m.clone().singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

pub fn complex_rank(m: &CMat, tol: f64) -> usize {
    complex_singular_values(m).iter().filter(|&&s| s > tol).count()
}

/// Inverse of a small well-conditioned real matrix, `None` when singular.
pub fn inverse(m: &Mat) -> Option<Mat> {
    if m.nrows() == 0 && m.ncols() == 0 {
        return Some(Mat::zeros(0, 0));
    }
    m.clone().full_piv_lu().try_inverse()
}

/// Symmetric inverse square root via the eigendecomposition; `None` unless positive definite.
pub fn inv_sqrt_spd(m: &Mat) -> Option<Mat> {
    let n = m.nrows();
    if n == 0 {
        return Some(Mat::zeros(0, 0));
    }
    let sym = (m + m.transpose()) * 0.5;
    let eig = sym.symmetric_eigen();
    let lmax = eig.eigenvalues.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    if eig.eigenvalues.iter().any(|&l| l <= 1e3 * f64::EPSILON * lmax || l <= 0.0) {
        return None;
    }
    let d = Mat::from_diagonal(&eig.eigenvalues.map(|l| 1.0 / l.sqrt()));
    Some(&eig.eigenvectors * d * eig.eigenvectors.transpose())
}

/// Anti-identity of order `n`.
pub fn flip(n: usize) -> Mat {
    Mat::from_fn(n, n, |i, j| if i + j + 1 == n { 1.0 } else { 0.0 })
}
