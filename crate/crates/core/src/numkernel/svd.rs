use nalgebra::DMatrix;

use super::elem::householder_qr;
use super::tol::{ToleranceConfig, EPS};
use crate::error::{Error, Result};

/// Full singular value decomposition `M = U diag(sigma) V^T`.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: DMatrix<f64>,
    /// Singular values in descending order, `min(rows, cols)` of them.
    pub sigma: Vec<f64>,
    pub v: DMatrix<f64>,
    pub rank: usize,
}

impl Svd {
    pub fn sigma_max(&self) -> f64 {
        self.sigma.first().copied().unwrap_or(0.0)
    }

    /// Number of singular values above an absolute threshold.
    pub fn rank_above(&self, tol: f64) -> usize {
        self.sigma.iter().take_while(|&&s| s > tol).count()
    }
}

pub(crate) fn check_finite(m: &DMatrix<f64>) -> Result<()> {
    if m.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::Input("matrix has non-finite entries".into()))
    }
}

/// SVD with a rank decision driven by `tol`.
pub fn rank_revealing_svd(m: &DMatrix<f64>, tol: &ToleranceConfig) -> Result<Svd> {
    check_finite(m)?;
    let (u, sigma, v) = svd_full(m);
    let smax = sigma.first().copied().unwrap_or(0.0);
    let thr = tol.rank_threshold(m.nrows(), m.ncols(), smax);
    let rank = sigma.iter().take_while(|&&s| s > thr && s > 0.0).count();
    Ok(Svd { u, sigma, v, rank })
}

/// SVD without rank decision; the caller guarantees finite input.
pub(crate) fn svd(m: &DMatrix<f64>) -> Svd {
    let (u, sigma, v) = svd_full(m);
    Svd { u, sigma, v, rank: 0 }
}

fn svd_full(m: &DMatrix<f64>) -> (DMatrix<f64>, Vec<f64>, DMatrix<f64>) {
    let (rows, cols) = m.shape();
    if rows >= cols {
        jacobi_tall(m)
    } else {
        let (u, s, v) = jacobi_tall(&m.transpose());
        (v, s, u)
    }
}

/// One-sided Jacobi on a matrix with `rows >= cols`.
fn jacobi_tall(m: &DMatrix<f64>) -> (DMatrix<f64>, Vec<f64>, DMatrix<f64>) {
    let (rows, cols) = m.shape();
    let mut a = m.clone();
    let mut v = DMatrix::<f64>::identity(cols, cols);
    for _sweep in 0..80 {
        let mut rotated = false;
        for i in 0..cols {
            for j in i + 1..cols {
                let (mut alpha, mut beta, mut gamma) = (0.0, 0.0, 0.0);
                for k in 0..rows {
                    let x = a[(k, i)];
                    let y = a[(k, j)];
                    alpha += x * x;
                    beta += y * y;
                    gamma += x * y;
                }
                if gamma == 0.0 || gamma.abs() <= EPS * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for k in 0..rows {
                    let x = a[(k, i)];
                    let y = a[(k, j)];
                    a[(k, i)] = c * x - s * y;
                    a[(k, j)] = s * x + c * y;
                }
                for k in 0..cols {
                    let x = v[(k, i)];
                    let y = v[(k, j)];
                    v[(k, i)] = c * x - s * y;
                    v[(k, j)] = s * x + c * y;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let norms: Vec<f64> = (0..cols).map(|j| a.column(j).norm()).collect();
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&x, &y| norms[y].total_cmp(&norms[x]));
    let av = DMatrix::from_fn(rows, cols, |r, c| a[(r, order[c])]);
    let vs = DMatrix::from_fn(cols, cols, |r, c| v[(r, order[c])]);
    let (mut u, r) = householder_qr(&av);
    let mut sigma = Vec::with_capacity(cols);
    for k in 0..cols {
        if r[(k, k)] < 0.0 {
            for i in 0..rows {
                u[(i, k)] = -u[(i, k)];
            }
        }
        sigma.push(r[(k, k)].abs());
    }
    // QR can perturb the order of nearly equal tiny values.
    for k in 1..cols {
        if sigma[k] > sigma[k - 1] {
            sigma[k] = sigma[k - 1];
        }
    }
    (u, sigma, vs)
}
