//! Moving bad eigenvalues of `(A + B F, E)` into a target region by state feedback.

use num_complex::Complex64;

use crate::dss::TimeDomain;
use crate::error::{Error, Result};
use crate::klf::{EigenClass, RegionPartition};
use crate::numkernel::lin::{inverse, Mat};
use crate::numkernel::{ordered_generalized_schur, svd, GenEig, ToleranceConfig};

/// Reflection of `z` across the stability boundary.
fn mirror(z: Complex64, ts: TimeDomain) -> Complex64 {
    match ts {
        TimeDomain::Continuous => Complex64::new(-z.re.abs(), z.im),
        TimeDomain::Discrete => {
            if z.norm() == 0.0 {
                z
            } else {
                1.0 / z.conj()
            }
        }
    }
}

fn target_for(z: Complex64, target: &RegionPartition, tol: &ToleranceConfig) -> Result<Complex64> {
    let good = |w: Complex64| target.classify(&GenEig::finite(w), tol) == EigenClass::Good;
    let cands = [
        mirror(z, target.ts),
        match target.ts {
            TimeDomain::Continuous => Complex64::new(-1.0 - z.re.abs(), z.im),
            TimeDomain::Discrete => Complex64::new(0.0, 0.0),
        },
    ];
    cands
        .into_iter()
        .find(|&w| good(w))
        .ok_or_else(|| Error::Input(format!("no target location in the requested pole region for {z}")))
}

/// Feedback `F` placing every eigenvalue of `(A + B F, E)` in the good part of `target`.
pub fn stabilizing_feedback(a: &Mat, e: &Mat, b: &Mat, target: &RegionPartition, tol: &ToleranceConfig) -> Result<Mat> {
    let n = a.nrows();
    let r = b.ncols();
    let mut f = Mat::zeros(r, n);
    if n == 0 {
        return Ok(f);
    }
    let bnorm = b.norm().max(1e-300);
    let scale = a.norm().max(e.norm()).max(1.0);
    for _ in 0..(2 * n + 4) {
        let acl = a + b * &f;
        let select = |g: &GenEig| target.classify(g, tol) == EigenClass::Good;
        let sch = ordered_generalized_schur(&acl, e, select)?;
        if sch.n_selected == n {
            return Ok(f);
        }
        let &(start, k) = sch.blocks.last().expect("nonempty schur blocks");
        let bt = sch.q.transpose() * b;
        let bk = bt.rows(start, k).into_owned();
        let sk = sch.s.view((start, start), (k, k)).into_owned();
        let tk = sch.t.view((start, start), (k, k)).into_owned();
        let ev =
            sch.eigenvalues[start].value().ok_or_else(|| Error::NotStabilizable(Complex64::new(f64::INFINITY, 0.0)))?;
        if bk.norm() <= 1e-10 * bnorm.max(scale) {
            return Err(Error::NotStabilizable(ev));
        }
        let mu = target_for(ev, target, tol)?;
        let g = if k == 1 {
            let want = mu.re * tk[(0, 0)] - sk[(0, 0)];
            bk.transpose() * (want / bk.norm_squared())
        } else {
            place_pair(&sk, &tk, &bk, mu).ok_or(Error::NotStabilizable(ev))?
        };
        let zk = sch.z.columns(start, k).into_owned();
        f += g * zk.transpose();
    }
    Err(Error::Numerical("eigenvalue assignment did not converge".into()))
}

/// Gain `G` so that `(S + B G, T)` has eigenvalues `mu, conj(mu)`.
fn place_pair(s: &Mat, t: &Mat, b: &Mat, mu: Complex64) -> Option<Mat> {
    let ti = inverse(t)?;
    let m = &ti * s;
    let nb = &ti * b;
    let target = Mat::from_row_slice(2, 2, &[mu.re, mu.im, -mu.im, mu.re]);
    let sv = svd(&nb);
    let smax = sv.sigma[0];
    if sv.rank_above(1e-8 * smax.max(m.norm())) >= 2 {
        let pinv = nb.clone().pseudo_inverse(0.0).ok()?;
        return Some(pinv * (target - &m));
    }
    if smax <= 0.0 {
        return None;
    }
    let u = sv.u.column(0).into_owned();
    let v = sv.v.column(0).into_owned();
    let mu_vec = &m * &u;
    let ctrb = Mat::from_columns(&[u.clone(), mu_vec]);
    let ci = inverse(&ctrb)?;
    // p(M) = M^2 - 2 Re(mu) M + |mu|^2 I
    let pm = &m * &m - &m * (2.0 * mu.re) + Mat::identity(2, 2) * mu.norm_sqr();
    let last = ci.row(1).into_owned();
    let k = -(last * pm);
    Some(v * k / smax)
}
