//! Elementary orthogonal transformations acting in place on dense matrices.

use nalgebra::DMatrix;
use std::ops::Range;

/// Householder reflector `H = I - tau * v * v^T` with `v[0] = 1` and `H x = beta * e1`.
pub(crate) struct Reflector {
    pub v: Vec<f64>,
    pub tau: f64,
    pub beta: f64,
}

pub(crate) fn reflector(x: &[f64]) -> Reflector {
    let k = x.len();
    let mut v = vec![0.0; k];
    if k == 0 {
        return Reflector { v, tau: 0.0, beta: 0.0 };
    }
    v[0] = 1.0;
    let alpha = x[0];
    let xnorm = x[1..].iter().fold(0.0f64, |acc, &t| acc.hypot(t));
    if xnorm == 0.0 {
        return Reflector { v, tau: 0.0, beta: alpha };
    }
    let beta = -alpha.signum() * alpha.hypot(xnorm);
    let tau = (beta - alpha) / beta;
    let scale = 1.0 / (alpha - beta);
    for i in 1..k {
        v[i] = x[i] * scale;
    }
    Reflector { v, tau, beta }
}

/// `M[r0.., cols] <- H * M[r0.., cols]`.
pub(crate) fn reflect_rows(m: &mut DMatrix<f64>, h: &Reflector, r0: usize, cols: Range<usize>) {
    if h.tau == 0.0 {
        return;
    }
    for j in cols {
        let mut w = 0.0;
        for (i, vi) in h.v.iter().enumerate() {
            w += vi * m[(r0 + i, j)];
        }
        w *= h.tau;
        for (i, vi) in h.v.iter().enumerate() {
            m[(r0 + i, j)] -= w * vi;
        }
    }
}

/// `M[rows, c0..] <- M[rows, c0..] * H`.
pub(crate) fn reflect_cols(m: &mut DMatrix<f64>, h: &Reflector, c0: usize, rows: Range<usize>) {
    if h.tau == 0.0 {
        return;
    }
    for i in rows {
        let mut w = 0.0;
        for (j, vj) in h.v.iter().enumerate() {
            w += vj * m[(i, c0 + j)];
        }
        w *= h.tau;
        for (j, vj) in h.v.iter().enumerate() {
            m[(i, c0 + j)] -= w * vj;
        }
    }
}

/// Returns `(c, s)` with `[c s; -s c] [a; b] = [r; 0]`.
pub(crate) fn givens(a: f64, b: f64) -> (f64, f64) {
    if b == 0.0 {
        (1.0, 0.0)
    } else {
        let r = a.hypot(b);
        (a / r, b / r)
    }
}

/// Rows `i, k` become `c*Mi + s*Mk` and `-s*Mi + c*Mk`.
pub(crate) fn rot_rows(m: &mut DMatrix<f64>, i: usize, k: usize, c: f64, s: f64, cols: Range<usize>) {
    for j in cols {
        let x = m[(i, j)];
        let y = m[(k, j)];
        m[(i, j)] = c * x + s * y;
        m[(k, j)] = -s * x + c * y;
    }
}

/// Columns `i, k` become `c*Ci + s*Ck` and `-s*Ci + c*Ck`.
pub(crate) fn rot_cols(m: &mut DMatrix<f64>, i: usize, k: usize, c: f64, s: f64, rows: Range<usize>) {
    for r in rows {
        let x = m[(r, i)];
        let y = m[(r, k)];
        m[(r, i)] = c * x + s * y;
        m[(r, k)] = -s * x + c * y;
    }
}

/// Column rotation on `(i, k)` that annihilates `M[row, i]`.
pub(crate) fn col_zeroing(x: f64, y: f64) -> (f64, f64) {
    // c*x + s*y = 0
    givens(y, -x)
}

/// Householder QR with the full orthogonal factor: `M = Q R`.
pub(crate) fn householder_qr(m: &DMatrix<f64>) -> (DMatrix<f64>, DMatrix<f64>) {
    let (rows, cols) = m.shape();
    let mut r = m.clone();
    let mut q = DMatrix::identity(rows, rows);
    for k in 0..cols.min(rows.saturating_sub(1)) {
        let x: Vec<f64> = (k..rows).map(|i| r[(i, k)]).collect();
        let h = reflector(&x);
        reflect_rows(&mut r, &h, k, k..cols);
        reflect_cols(&mut q, &h, k, 0..rows);
        r[(k, k)] = h.beta;
        for i in k + 1..rows {
            r[(i, k)] = 0.0;
        }
    }
    (q, r)
}
