//! Real generalized Schur decomposition with block reordering.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::elem::{
    col_zeroing, givens, householder_qr, reflect_cols, reflect_rows, reflector, rot_cols, rot_rows, Reflector,
};
use super::svd::{check_finite, svd};
use super::tol::{ToleranceConfig, EPS};
use crate::error::{Error, Result};

/// Generalized eigenvalue `alpha / beta`; `beta == 0` encodes an infinite eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenEig {
    pub alpha: Complex64,
    pub beta: f64,
}

impl GenEig {
    pub fn finite(z: Complex64) -> Self {
        Self { alpha: z, beta: 1.0 }
    }

    pub fn infinite() -> Self {
        Self { alpha: Complex64::new(1.0, 0.0), beta: 0.0 }
    }

    pub fn is_infinite(&self) -> bool {
        self.beta == 0.0
    }

    /// The eigenvalue, or `None` when infinite.
    pub fn value(&self) -> Option<Complex64> {
        if self.is_infinite() {
            None
        } else {
            Some(self.alpha / self.beta)
        }
    }

    /// Chordal distance `|a1 b2 - a2 b1| / (|(a1, b1)| |(a2, b2)|)`, at most 1.
    pub fn chordal_distance(&self, other: &GenEig) -> f64 {
        let n1 = (self.alpha.norm_sqr() + self.beta * self.beta).sqrt();
        let n2 = (other.alpha.norm_sqr() + other.beta * other.beta).sqrt();
        if n1 == 0.0 || n2 == 0.0 {
            return 1.0;
        }
        (self.alpha * other.beta - other.alpha * self.beta).norm() / (n1 * n2)
    }
}

/// `Q^T A Z = S`, `Q^T E Z = T` with `S` quasi-triangular and `T` triangular.
#[derive(Debug, Clone)]
pub struct OrderedSchurResult {
    pub s: DMatrix<f64>,
    pub t: DMatrix<f64>,
    pub q: DMatrix<f64>,
    pub z: DMatrix<f64>,
    /// Eigenvalues in diagonal order; a 2x2 block contributes a conjugate pair.
    pub eigenvalues: Vec<GenEig>,
    /// Diagonal blocks as `(start, size)`.
    pub blocks: Vec<(usize, usize)>,
    /// Order of the leading block holding the selected eigenvalues.
    pub n_selected: usize,
}

/// Ordered generalized Schur form of the regular pencil `A - lambda E`.
pub fn ordered_generalized_schur<F>(a: &DMatrix<f64>, e: &DMatrix<f64>, select: F) -> Result<OrderedSchurResult>
where
    F: Fn(&GenEig) -> bool,
{
    check_finite(a)?;
    check_finite(e)?;
    if !a.is_square() || a.shape() != e.shape() {
        return Err(Error::Input(format!(
            "QZ needs square matrices of equal order, got {:?} and {:?}",
            a.shape(),
            e.shape()
        )));
    }
    check_regular(a, e)?;
    let mut f = qz(a, e)?;
    let n_sel = reorder(&mut f, &select)?;
    f.n_selected = n_sel;
    Ok(f)
}

/// Fails when `A - lambda E` is numerically singular at several random shifts.
pub(crate) fn check_regular(a: &DMatrix<f64>, e: &DMatrix<f64>) -> Result<()> {
    let n = a.nrows();
    if n == 0 {
        return Ok(());
    }
    let na = a.norm();
    let ne = e.norm();
    let scale = if ne > 0.0 && na > 0.0 { na / ne } else { 1.0 };
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..3 {
        let lam: f64 = scale * rng.gen_range(-1.0..1.0);
        let m = a - e * lam;
        let s = svd(&m);
        let nrm = na + lam.abs() * ne;
        if s.sigma[n - 1] > (n * n).max(50) as f64 * EPS * nrm {
            return Ok(());
        }
    }
    Err(Error::Structure("pencil A - lambda E is singular; use the Kronecker-like form instead".into()))
}

/// Unordered QZ; the pencil must be regular.
pub(crate) fn qz(a: &DMatrix<f64>, e: &DMatrix<f64>) -> Result<OrderedSchurResult> {
    let n = a.nrows();
    let (q0, r) = householder_qr(e);
    let mut s = q0.transpose() * a;
    let mut t = r;
    let mut q = q0;
    let mut z = DMatrix::<f64>::identity(n, n);
    hessenberg_triangular(&mut s, &mut t, &mut q, &mut z);
    let mut w = Work { s, t, q, z, n };
    w.iterate()?;
    Ok(w.finish())
}

struct Work {
    s: DMatrix<f64>,
    t: DMatrix<f64>,
    q: DMatrix<f64>,
    z: DMatrix<f64>,
    n: usize,
}

fn hessenberg_triangular(a: &mut DMatrix<f64>, b: &mut DMatrix<f64>, q: &mut DMatrix<f64>, z: &mut DMatrix<f64>) {
    let n = a.nrows();
    for j in 0..n.saturating_sub(2) {
        for i in (j + 2..n).rev() {
            let (c, s) = givens(a[(i - 1, j)], a[(i, j)]);
            rot_rows(a, i - 1, i, c, s, j..n);
            rot_rows(b, i - 1, i, c, s, i - 1..n);
            rot_cols(q, i - 1, i, c, s, 0..n);
            a[(i, j)] = 0.0;
            let (c, s) = col_zeroing(b[(i, i - 1)], b[(i, i)]);
            rot_cols(b, i - 1, i, c, s, 0..i + 1);
            rot_cols(a, i - 1, i, c, s, 0..n);
            rot_cols(z, i - 1, i, c, s, 0..n);
            b[(i, i - 1)] = 0.0;
        }
    }
}

fn reversed(h: Reflector) -> Reflector {
    let mut v = h.v;
    v.reverse();
    Reflector { v, tau: h.tau, beta: h.beta }
}

impl Work {
    fn iterate(&mut self) -> Result<()> {
        let n = self.n;
        if n == 0 {
            return Ok(());
        }
        let bnorm = self.t.norm();
        let anorm = self.s.norm();
        let btol = EPS * bnorm;
        let mut h = n as isize - 1;
        let mut iter = 0usize;
        let mut total = 0usize;
        while h >= 0 {
            let hu = h as usize;
            if hu == 0 {
                h -= 1;
                continue;
            }
            let mut l = 0usize;
            for k in (1..=hu).rev() {
                let mut tst = self.s[(k, k)].abs() + self.s[(k - 1, k - 1)].abs();
                if tst == 0.0 {
                    tst = anorm;
                }
                if self.s[(k, k - 1)].abs() <= EPS * tst {
                    self.s[(k, k - 1)] = 0.0;
                    l = k;
                    break;
                }
            }
            if l == hu {
                h -= 1;
                iter = 0;
                continue;
            }
            if let Some(k) = (l..=hu).find(|&k| self.t[(k, k)].abs() <= btol) {
                self.t[(k, k)] = 0.0;
                self.chase_infinite(k, l, hu);
                continue;
            }
            if hu - l == 1 {
                self.split_2x2(l);
                h -= 2;
                iter = 0;
                continue;
            }
            iter += 1;
            total += 1;
            if total > 60 * n.max(10) {
                return Err(Error::Numerical("QZ iteration did not converge".into()));
            }
            self.double_shift_step(l, hu, iter % 11 == 10);
        }
        Ok(())
    }

    fn chase_infinite(&mut self, k: usize, l: usize, h: usize) {
        let n = self.n;
        for j in k..h {
            let (c, s) = givens(self.t[(j, j + 1)], self.t[(j + 1, j + 1)]);
            rot_rows(&mut self.t, j, j + 1, c, s, j + 1..n);
            self.t[(j + 1, j + 1)] = 0.0;
            let c0 = if j > 0 { j - 1 } else { 0 };
            rot_rows(&mut self.s, j, j + 1, c, s, c0..n);
            rot_cols(&mut self.q, j, j + 1, c, s, 0..n);
            if j > l {
                let (c, s) = col_zeroing(self.s[(j + 1, j - 1)], self.s[(j + 1, j)]);
                rot_cols(&mut self.s, j - 1, j, c, s, 0..j + 2);
                rot_cols(&mut self.t, j - 1, j, c, s, 0..j + 1);
                rot_cols(&mut self.z, j - 1, j, c, s, 0..n);
                self.s[(j + 1, j - 1)] = 0.0;
            }
        }
        if h > l {
            let (c, s) = col_zeroing(self.s[(h, h - 1)], self.s[(h, h)]);
            rot_cols(&mut self.s, h - 1, h, c, s, 0..h + 1);
            rot_cols(&mut self.t, h - 1, h, c, s, 0..h + 1);
            rot_cols(&mut self.z, h - 1, h, c, s, 0..n);
            self.s[(h, h - 1)] = 0.0;
        }
    }

    fn double_shift_step(&mut self, l: usize, h: usize, exceptional: bool) {
        let n = self.n;
        let (a, b) = (&self.s, &self.t);
        let (sum, prod) = if exceptional {
            let t = (a[(h, h - 1)].abs() + a[(h - 1, h - 2)].abs()) / b[(h, h)].abs().max(f64::MIN_POSITIVE);
            (1.5 * t, t * t)
        } else {
            let (b11, b12, b22) = (b[(h - 1, h - 1)], b[(h - 1, h)], b[(h, h)]);
            let (a11, a12, a21, a22) = (a[(h - 1, h - 1)], a[(h - 1, h)], a[(h, h - 1)], a[(h, h)]);
            let m11 = a11 / b11;
            let m12 = (a12 - a11 * b12 / b11) / b22;
            let m21 = a21 / b11;
            let m22 = (a22 - a21 * b12 / b11) / b22;
            (m11 + m22, m11 * m22 - m12 * m21)
        };
        let bll = b[(l, l)];
        let u0 = a[(l, l)] / bll;
        let u1 = a[(l + 1, l)] / bll;
        let w1 = u1 / b[(l + 1, l + 1)];
        let w0 = (u0 - b[(l, l + 1)] * w1) / bll;
        let mut v = [
            a[(l, l)] * w0 + a[(l, l + 1)] * w1 - sum * u0 + prod,
            a[(l + 1, l)] * w0 + a[(l + 1, l + 1)] * w1 - sum * u1,
            a[(l + 2, l + 1)] * w1,
        ];
        let vmax = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if vmax > 0.0 && vmax.is_finite() {
            v.iter_mut().for_each(|x| *x /= vmax);
        } else {
            v = [1.0, 1.0, 0.0];
        }
        for k in l..=h - 2 {
            let x = if k == l { v } else { [self.s[(k, k - 1)], self.s[(k + 1, k - 1)], self.s[(k + 2, k - 1)]] };
            let hr = reflector(&x);
            let c0 = if k > l { k - 1 } else { l };
            reflect_rows(&mut self.s, &hr, k, c0..n);
            reflect_rows(&mut self.t, &hr, k, k..n);
            reflect_cols(&mut self.q, &hr, k, 0..n);
            if k > l {
                self.s[(k, k - 1)] = hr.beta;
                self.s[(k + 1, k - 1)] = 0.0;
                self.s[(k + 2, k - 1)] = 0.0;
            }
            let row = [self.t[(k + 2, k + 2)], self.t[(k + 2, k + 1)], self.t[(k + 2, k)]];
            let hz = reversed(reflector(&row));
            let rmax = (k + 3).min(h) + 1;
            reflect_cols(&mut self.s, &hz, k, 0..rmax);
            reflect_cols(&mut self.t, &hz, k, 0..k + 3);
            reflect_cols(&mut self.z, &hz, k, 0..n);
            self.t[(k + 2, k)] = 0.0;
            self.t[(k + 2, k + 1)] = 0.0;
            let (c, s) = col_zeroing(self.t[(k + 1, k)], self.t[(k + 1, k + 1)]);
            rot_cols(&mut self.t, k, k + 1, c, s, 0..k + 2);
            rot_cols(&mut self.s, k, k + 1, c, s, 0..rmax);
            rot_cols(&mut self.z, k, k + 1, c, s, 0..n);
            self.t[(k + 1, k)] = 0.0;
        }
        let k = h - 1;
        let (c, s) = givens(self.s[(k, k - 1)], self.s[(k + 1, k - 1)]);
        rot_rows(&mut self.s, k, k + 1, c, s, k - 1..n);
        rot_rows(&mut self.t, k, k + 1, c, s, k..n);
        rot_cols(&mut self.q, k, k + 1, c, s, 0..n);
        self.s[(k + 1, k - 1)] = 0.0;
        let (c, s) = col_zeroing(self.t[(k + 1, k)], self.t[(k + 1, k + 1)]);
        rot_cols(&mut self.t, k, k + 1, c, s, 0..k + 2);
        rot_cols(&mut self.s, k, k + 1, c, s, 0..h + 1);
        rot_cols(&mut self.z, k, k + 1, c, s, 0..n);
        self.t[(k + 1, k)] = 0.0;
    }

    /// Splits the 2x2 block at `i` into two 1x1 blocks when its eigenvalues are real.
    fn split_2x2(&mut self, i: usize) {
        let n = self.n;
        let (lam, real) = eig_2x2(&self.s, &self.t, i);
        if !real {
            return;
        }
        let lam = lam[0].re;
        let m00 = self.s[(i, i)] - lam * self.t[(i, i)];
        let m01 = self.s[(i, i + 1)] - lam * self.t[(i, i + 1)];
        let m10 = self.s[(i + 1, i)];
        let m11 = self.s[(i + 1, i + 1)] - lam * self.t[(i + 1, i + 1)];
        let (x, y) = if m00.hypot(m01) >= m10.hypot(m11) { (m00, m01) } else { (m10, m11) };
        // null vector of the dominant row is (-y, x); rotate it into the first column
        let r = x.hypot(y);
        let (z0, z1) = if r == 0.0 { (1.0, 0.0) } else { (-y / r, x / r) };
        // columns (i, i+1) <- [z, z_perp]
        let (c, s) = (z0, z1);
        rot_cols(&mut self.s, i, i + 1, c, s, 0..i + 2);
        rot_cols(&mut self.t, i, i + 1, c, s, 0..i + 2);
        rot_cols(&mut self.z, i, i + 1, c, s, 0..n);
        let an = self.s[(i, i)].hypot(self.s[(i + 1, i)]);
        let bn = self.t[(i, i)].hypot(self.t[(i + 1, i)]);
        let sa = self.s.view((i, i), (2, 2)).norm().max(f64::MIN_POSITIVE);
        let sb = self.t.view((i, i), (2, 2)).norm().max(f64::MIN_POSITIVE);
        let (c, s) = if bn / sb >= an / sa {
            givens(self.t[(i, i)], self.t[(i + 1, i)])
        } else {
            givens(self.s[(i, i)], self.s[(i + 1, i)])
        };
        rot_rows(&mut self.s, i, i + 1, c, s, i..n);
        rot_rows(&mut self.t, i, i + 1, c, s, i..n);
        rot_cols(&mut self.q, i, i + 1, c, s, 0..n);
        self.s[(i + 1, i)] = 0.0;
        self.t[(i + 1, i)] = 0.0;
    }

    fn finish(self) -> OrderedSchurResult {
        let mut f = OrderedSchurResult {
            s: self.s,
            t: self.t,
            q: self.q,
            z: self.z,
            eigenvalues: vec![],
            blocks: vec![],
            n_selected: 0,
        };
        refresh(&mut f);
        f
    }
}

/// Eigenvalues of the 2x2 pencil block at `i`; the flag tells whether both are real.
fn eig_2x2(s: &DMatrix<f64>, t: &DMatrix<f64>, i: usize) -> ([Complex64; 2], bool) {
    let (a11, a12, a21, a22) = (s[(i, i)], s[(i, i + 1)], s[(i + 1, i)], s[(i + 1, i + 1)]);
    let (b11, b12, b22) = (t[(i, i)], t[(i, i + 1)], t[(i + 1, i + 1)]);
    // eigenvalues of A * inv(B)
    let m11 = a11 / b11;
    let m12 = (a12 - a11 * b12 / b11) / b22;
    let m21 = a21 / b11;
    let m22 = (a22 - a21 * b12 / b11) / b22;
    let half = 0.5 * (m11 + m22);
    let dm = 0.5 * (m11 - m22);
    let disc = dm * dm + m12 * m21;
    if disc >= 0.0 {
        let r = disc.sqrt();
        let l1 = if half >= 0.0 { half + r } else { half - r };
        let det = m11 * m22 - m12 * m21;
        let l2 = if l1 != 0.0 { det / l1 } else { half - (l1 - half) };
        ([Complex64::new(l1, 0.0), Complex64::new(l2, 0.0)], true)
    } else {
        let im = (-disc).sqrt();
        ([Complex64::new(half, im), Complex64::new(half, -im)], false)
    }
}

/// Recomputes the block partition and eigenvalues, normalizing `T` to a nonnegative diagonal.
fn refresh(f: &mut OrderedSchurResult) {
    let n = f.s.nrows();
    f.blocks.clear();
    f.eigenvalues.clear();
    let mut i = 0;
    while i < n {
        if i + 1 < n && f.s[(i + 1, i)] != 0.0 {
            let (lam, _) = eig_2x2(&f.s, &f.t, i);
            f.blocks.push((i, 2));
            f.eigenvalues.push(GenEig::finite(lam[0]));
            f.eigenvalues.push(GenEig::finite(lam[1]));
            i += 2;
        } else {
            if f.t[(i, i)] < 0.0 {
                for j in 0..n {
                    f.s[(i, j)] = -f.s[(i, j)];
                    f.t[(i, j)] = -f.t[(i, j)];
                    f.q[(j, i)] = -f.q[(j, i)];
                }
            }
            f.blocks.push((i, 1));
            f.eigenvalues.push(GenEig { alpha: Complex64::new(f.s[(i, i)], 0.0), beta: f.t[(i, i)] });
            i += 1;
        }
    }
}

fn block_eig(f: &OrderedSchurResult, start: usize, size: usize) -> GenEig {
    if size == 1 {
        GenEig { alpha: Complex64::new(f.s[(start, start)], 0.0), beta: f.t[(start, start)].abs() }
    } else {
        GenEig::finite(eig_2x2(&f.s, &f.t, start).0[0])
    }
}

/// Moves blocks whose eigenvalues satisfy `select` to the top; returns the leading order.
pub(crate) fn reorder<F: Fn(&GenEig) -> bool>(f: &mut OrderedSchurResult, select: &F) -> Result<usize> {
    let mut blocks: Vec<(usize, bool)> = f.blocks.iter().map(|&(st, sz)| (sz, select(&block_eig(f, st, sz)))).collect();
    let mut placed = 0usize;
    let mut placed_rows = 0usize;
    for idx in 0..blocks.len() {
        if !blocks[idx].1 {
            continue;
        }
        let mut j = idx;
        while j > placed {
            let start: usize = blocks[..j - 1].iter().map(|b| b.0).sum();
            swap_blocks(f, start, blocks[j - 1].0, blocks[j].0)?;
            blocks.swap(j - 1, j);
            j -= 1;
        }
        placed_rows += blocks[placed].0;
        placed += 1;
    }
    refresh(f);
    Ok(placed_rows)
}

/// Swaps adjacent diagonal blocks of sizes `p` (at `k`) and `q` (at `k + p`).
pub(crate) fn swap_blocks(f: &mut OrderedSchurResult, k: usize, p: usize, q: usize) -> Result<()> {
    let n = f.s.nrows();
    let m = p + q;
    let s11 = f.s.view((k, k), (p, p)).into_owned();
    let s12 = f.s.view((k, k + p), (p, q)).into_owned();
    let s22 = f.s.view((k + p, k + p), (q, q)).into_owned();
    let t11 = f.t.view((k, k), (p, p)).into_owned();
    let t12 = f.t.view((k, k + p), (p, q)).into_owned();
    let t22 = f.t.view((k + p, k + p), (q, q)).into_owned();
    // S11 R - L S22 = -S12, T11 R - L T22 = -T12 with column-major unknowns [vec R; vec L]
    let pq = p * q;
    let mut kmat = DMatrix::<f64>::zeros(2 * pq, 2 * pq);
    let mut rhs = nalgebra::DVector::<f64>::zeros(2 * pq);
    for (blk, (x11, x22, x12)) in [(&s11, &s22, &s12), (&t11, &t22, &t12)].into_iter().enumerate() {
        let off = blk * pq;
        for c in 0..q {
            for r in 0..p {
                let row = off + c * p + r;
                rhs[row] = -x12[(r, c)];
                for i in 0..p {
                    kmat[(row, c * p + i)] += x11[(r, i)];
                }
                for j in 0..q {
                    kmat[(row, pq + j * p + r)] -= x22[(j, c)];
                }
            }
        }
    }
    let sol = kmat
        .full_piv_lu()
        .solve(&rhs)
        .filter(|x| x.iter().all(|v| v.is_finite()))
        .ok_or_else(|| Error::Numerical("block swap: Sylvester system is singular".into()))?;
    let mut rz = DMatrix::<f64>::zeros(m, q);
    let mut lq = DMatrix::<f64>::zeros(m, q);
    for c in 0..q {
        for r in 0..p {
            rz[(r, c)] = sol[c * p + r];
            lq[(r, c)] = sol[pq + c * p + r];
        }
        rz[(p + c, c)] = 1.0;
        lq[(p + c, c)] = 1.0;
    }
    let (zs, _) = householder_qr(&rz);
    let (qs, _) = householder_qr(&lq);
    let snorm = f.s.view((k, k), (m, m)).norm();
    let tnorm = f.t.view((k, k), (m, m)).norm();
    let rows_s = f.s.rows(k, m).into_owned();
    let rows_t = f.t.rows(k, m).into_owned();
    f.s.rows_mut(k, m).copy_from(&(qs.transpose() * rows_s));
    f.t.rows_mut(k, m).copy_from(&(qs.transpose() * rows_t));
    let cols_s = f.s.columns(k, m).into_owned();
    let cols_t = f.t.columns(k, m).into_owned();
    f.s.columns_mut(k, m).copy_from(&(cols_s * &zs));
    f.t.columns_mut(k, m).copy_from(&(cols_t * &zs));
    let cq = f.q.columns(k, m).into_owned();
    f.q.columns_mut(k, m).copy_from(&(cq * &qs));
    let cz = f.z.columns(k, m).into_owned();
    f.z.columns_mut(k, m).copy_from(&(cz * &zs));
    let res_s = f.s.view((k + q, k), (p, q)).norm();
    let res_t = f.t.view((k + q, k), (p, q)).norm();
    let bound = 1e3 * EPS;
    if res_s > bound * snorm.max(f64::MIN_POSITIVE) || res_t > bound * tnorm.max(f64::MIN_POSITIVE) {
        return Err(Error::Numerical(format!(
            "block swap rejected: residual {:.2e} too large for eigenvalue separation",
            (res_s / snorm.max(f64::MIN_POSITIVE)).max(res_t / tnorm.max(f64::MIN_POSITIVE))
        )));
    }
    f.s.view_mut((k + q, k), (p, q)).fill(0.0);
    f.t.view_mut((k + q, k), (p, q)).fill(0.0);
    // restore triangular T and clean the strictly lower parts inside the new blocks
    for (st, sz) in [(k, q), (k + q, p)] {
        if sz == 2 {
            let (c, s) = givens(f.t[(st, st)], f.t[(st + 1, st)]);
            rot_rows(&mut f.s, st, st + 1, c, s, st..n);
            rot_rows(&mut f.t, st, st + 1, c, s, st..n);
            rot_cols(&mut f.q, st, st + 1, c, s, 0..n);
            f.t[(st + 1, st)] = 0.0;
            let (_, real) = eig_2x2(&f.s, &f.t, st);
            if real {
                split_block(f, st);
            }
        }
    }
    Ok(())
}

fn split_block(f: &mut OrderedSchurResult, i: usize) {
    let n = f.s.nrows();
    let mut w = Work {
        s: std::mem::replace(&mut f.s, DMatrix::zeros(0, 0)),
        t: std::mem::replace(&mut f.t, DMatrix::zeros(0, 0)),
        q: std::mem::replace(&mut f.q, DMatrix::zeros(0, 0)),
        z: std::mem::replace(&mut f.z, DMatrix::zeros(0, 0)),
        n,
    };
    w.split_2x2(i);
    f.s = w.s;
    f.t = w.t;
    f.q = w.q;
    f.z = w.z;
}

/// Generalized eigenvalues of a regular pencil (no ordering).
pub fn generalized_eigenvalues(a: &DMatrix<f64>, e: &DMatrix<f64>) -> Result<Vec<GenEig>> {
    Ok(ordered_generalized_schur(a, e, |_| false)?.eigenvalues)
}

/// Generalized eigenvalues with `|beta|` at roundoff level of the pencil norm reported as infinite.
pub fn generalized_eigenvalues_with(a: &DMatrix<f64>, e: &DMatrix<f64>, tol: &ToleranceConfig) -> Result<Vec<GenEig>> {
    let n = a.nrows();
    let thr = tol.structural(n, n, a.norm().hypot(e.norm()));
    let mut ev = generalized_eigenvalues(a, e)?;
    for g in ev.iter_mut() {
        if g.beta != 0.0 && g.beta.abs() <= thr {
            *g = GenEig::infinite();
        }
    }
    Ok(ev)
}
