//! Removal of uncontrollable, unobservable and non-dynamic parts.

use super::DescriptorSystem;
use crate::error::Result;
use crate::numkernel::elem::householder_qr;
use crate::numkernel::lin::{flip, row_compress, Mat};
use crate::numkernel::{svd, ToleranceConfig};

struct Quad {
    a: Mat,
    e: Mat,
    b: Mat,
    c: Mat,
}

impl Quad {
    fn rows(&mut self, r0: usize, u: &Mat) {
        let k = u.nrows();
        let ut = u.transpose();
        for x in [&mut self.a, &mut self.e, &mut self.b] {
            let t = &ut * x.rows(r0, k);
            x.rows_mut(r0, k).copy_from(&t);
        }
    }

    fn cols(&mut self, c0: usize, z: &Mat) {
        let k = z.nrows();
        for x in [&mut self.a, &mut self.e, &mut self.c] {
            let t = x.columns(c0, k) * z;
            x.columns_mut(c0, k).copy_from(&t);
        }
    }

    fn leading(self, k: usize) -> Self {
        let (m, p) = (self.b.ncols(), self.c.nrows());
        Quad {
            a: self.a.view((0, 0), (k, k)).into_owned(),
            e: self.e.view((0, 0), (k, k)).into_owned(),
            b: self.b.view((0, 0), (k, m)).into_owned(),
            c: self.c.view((0, 0), (p, k)).into_owned(),
        }
    }
}

/// Part of `(A - lambda E, B, C)` controllable at every finite `lambda`.
///
/// With `similarity` set, `E` must be the identity and is kept so.
fn controllable_part(mut s: Quad, thr: f64, similarity: bool) -> Quad {
    let n = s.a.nrows();
    if n == 0 {
        return s;
    }
    if !similarity {
        let (q, r) = householder_qr(&s.e);
        s.a = q.transpose() * &s.a;
        s.b = q.transpose() * &s.b;
        s.e = r;
    }
    let mut r0 = 0;
    let mut prev: Option<(usize, usize)> = None;
    while r0 < n {
        let target = match prev {
            None => s.b.rows(r0, n - r0).into_owned(),
            Some((pc, pw)) => s.a.view((r0, pc), (n - r0, pw)).into_owned(),
        };
        let (u, rho) = row_compress(&target, thr);
        if rho == 0 {
            break;
        }
        s.rows(r0, &u);
        if similarity {
            s.cols(r0, &u);
        } else {
            let sub = s.e.view((r0, r0), (n - r0, n - r0)).into_owned();
            let j = flip(n - r0);
            let (q1, _) = householder_qr(&(sub.transpose() * &j));
            s.cols(r0, &(q1 * j));
            for i in r0..n {
                for k in r0..i {
                    s.e[(i, k)] = 0.0;
                }
            }
        }
        match prev {
            None => s.b.view_mut((r0 + rho, 0), (n - r0 - rho, s.b.ncols())).fill(0.0),
            Some((pc, pw)) => s.a.view_mut((r0 + rho, pc), (n - r0 - rho, pw)).fill(0.0),
        }
        prev = Some((r0, rho));
        r0 += rho;
    }
    s.leading(r0)
}

fn swap_ae(s: Quad) -> Quad {
    Quad { a: s.e, e: s.a, b: s.b, c: s.c }
}

fn dual(s: Quad) -> Quad {
    Quad { a: s.a.transpose(), e: s.e.transpose(), b: s.c.transpose(), c: s.b.transpose() }
}

/// Controllable and observable realization without non-dynamic modes.
pub fn irreducible_realization(sys: &DescriptorSystem, tol: &ToleranceConfig) -> Result<DescriptorSystem> {
    tol.validate()?;
    sys.check_regular()?;
    let raw = reduce(sys.clone(), tol);
    Ok(reduce(super::balanced(&raw), tol))
}

fn reduce(mut cur: DescriptorSystem, tol: &ToleranceConfig) -> DescriptorSystem {
    let standard = cur.e.is_none();
    loop {
        let before = cur.order();
        let thr = tol.structural(cur.order() + cur.outputs(), cur.order() + cur.inputs(), cur.norm());
        let mut q = Quad { a: cur.a.clone(), e: cur.e_mat(), b: cur.b.clone(), c: cur.c.clone() };
        q = controllable_part(q, thr, standard);
        if !standard {
            q = swap_ae(controllable_part(swap_ae(q), thr, false));
        }
        q = dual(controllable_part(dual(q), thr, standard));
        if !standard {
            q = dual(swap_ae(controllable_part(swap_ae(dual(q)), thr, false)));
        }
        if q.a.nrows() < before {
            cur = DescriptorSystem {
                a: q.a,
                e: if standard { None } else { Some(q.e) },
                b: q.b,
                c: q.c,
                d: cur.d,
                ts: cur.ts,
            };
        }
        cur = remove_nondynamic_modes(&cur, tol);
        if cur.order() == before {
            return cur;
        }
    }
}

/// Eliminates states tied to invertible parts of `A` on the null space of `E`.
pub fn remove_nondynamic_modes(sys: &DescriptorSystem, tol: &ToleranceConfig) -> DescriptorSystem {
    let Some(e) = &sys.e else {
        return sys.clone();
    };
    let n = sys.order();
    if n == 0 {
        return sys.clone();
    }
    let norm = sys.norm();
    let thr = tol.structural(n, n, norm);
    let se = svd(e);
    let re = se.rank_above(thr);
    if re == n {
        return sys.clone();
    }
    let mut a = se.u.transpose() * &sys.a * &se.v;
    let mut b = se.u.transpose() * &sys.b;
    let mut c = &sys.c * &se.v;
    let mut ee = Mat::zeros(n, n);
    for i in 0..re {
        ee[(i, i)] = se.sigma[i];
    }
    let n2 = n - re;
    let a22 = a.view((re, re), (n2, n2)).into_owned();
    let s2 = svd(&a22);
    let k = s2.rank_above(thr);
    if k == 0 {
        return sys.clone();
    }
    let u2t = s2.u.transpose();
    let t = &u2t * a.rows(re, n2);
    a.rows_mut(re, n2).copy_from(&t);
    let t = &u2t * b.rows(re, n2);
    b.rows_mut(re, n2).copy_from(&t);
    let t = a.columns(re, n2) * &s2.v;
    a.columns_mut(re, n2).copy_from(&t);
    let t = c.columns(re, n2) * &s2.v;
    c.columns_mut(re, n2).copy_from(&t);

    let keep: Vec<usize> = (0..re).chain(re + k..n).collect();
    let elim: Vec<usize> = (re..re + k).collect();
    let pick =
        |m: &Mat, rows: &[usize], cols: &[usize]| Mat::from_fn(rows.len(), cols.len(), |i, j| m[(rows[i], cols[j])]);
    let all_m: Vec<usize> = (0..sys.inputs()).collect();
    let all_p: Vec<usize> = (0..sys.outputs()).collect();
    let sinv = Mat::from_diagonal(&nalgebra::DVector::from_iterator(k, (0..k).map(|i| 1.0 / s2.sigma[i])));
    let a_ke = pick(&a, &keep, &elim);
    let a_ek = pick(&a, &elim, &keep);
    let b_e = pick(&b, &elim, &all_m);
    let c_e = pick(&c, &all_p, &elim);
    let left = &a_ke * &sinv;
    let cl = &c_e * &sinv;
    DescriptorSystem {
        a: pick(&a, &keep, &keep) - &left * &a_ek,
        e: Some(pick(&ee, &keep, &keep)),
        b: pick(&b, &keep, &all_m) - &left * &b_e,
        c: pick(&c, &all_p, &keep) - &cl * &a_ek,
        d: &sys.d - &cl * &b_e,
        ts: sys.ts,
    }
}
