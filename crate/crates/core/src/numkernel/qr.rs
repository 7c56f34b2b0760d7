use nalgebra::DMatrix;

use super::elem::{reflect_cols, reflect_rows, reflector};
use super::svd::check_finite;
use super::tol::ToleranceConfig;
use crate::error::Result;

/// Column-pivoted QR: `M[:, perm] = Q R`.
#[derive(Debug, Clone)]
pub struct PivotedQr {
    pub q: DMatrix<f64>,
    pub r: DMatrix<f64>,
    /// Column `j` of `Q R` is column `perm[j]` of the input.
    pub perm: Vec<usize>,
    pub rank: usize,
}

impl PivotedQr {
    pub fn permutation_matrix(&self) -> DMatrix<f64> {
        let n = self.perm.len();
        let mut p = DMatrix::zeros(n, n);
        for (j, &src) in self.perm.iter().enumerate() {
            p[(src, j)] = 1.0;
        }
        p
    }
}

pub fn pivoted_qr(m: &DMatrix<f64>, tol: &ToleranceConfig) -> Result<PivotedQr> {
    check_finite(m)?;
    let (rows, cols) = m.shape();
    let mut r = m.clone();
    let mut q = DMatrix::identity(rows, rows);
    let mut perm: Vec<usize> = (0..cols).collect();
    for k in 0..cols.min(rows) {
        let best = (k..cols)
            .map(|j| (j, r.view((k, j), (rows - k, 1)).norm()))
            .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc })
            .0;
        if best != k {
            r.swap_columns(k, best);
            perm.swap(k, best);
        }
        if k + 1 < rows {
            let x: Vec<f64> = (k..rows).map(|i| r[(i, k)]).collect();
            let h = reflector(&x);
            reflect_rows(&mut r, &h, k, k..cols);
            reflect_cols(&mut q, &h, k, 0..rows);
            r[(k, k)] = h.beta;
            for i in k + 1..rows {
                r[(i, k)] = 0.0;
            }
        }
    }
    let rmax = if rows > 0 && cols > 0 { r[(0, 0)].abs() } else { 0.0 };
    let thr = tol.rank_threshold(rows, cols, rmax);
    let rank = (0..cols.min(rows)).take_while(|&k| r[(k, k)].abs() > thr && r[(k, k)] != 0.0).count();
    Ok(PivotedQr { q, r, perm, rank })
}
