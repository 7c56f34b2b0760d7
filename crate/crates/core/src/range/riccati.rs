//! Stabilizing Riccati solutions via extended deflating subspaces.

use num_complex::Complex64;

use crate::dss::balance::state_scaling;
use crate::dss::TimeDomain;
use crate::error::{Error, Result};
use crate::klf::SpecialKlf;
use crate::numkernel::elem::householder_qr;
use crate::numkernel::lin::{blocks, inv_sqrt_spd, inverse, to_complex, CMat, Mat};
use crate::numkernel::{ordered_generalized_schur, svd, GenEig};
use crate::verify::frequency_grid;

/// Feedback and weight making the range block inner, with a realization of the inner factor.
#[derive(Debug, Clone)]
pub struct InnerGains {
    pub f: Mat,
    pub w: Mat,
    /// Inner factor `(A, E, B, C, D)` in well-scaled coordinates; `E = None` means identity.
    pub realization: (Mat, Option<Mat>, Mat, Mat, Mat),
}

/// Feedback `F` and weight `W` making the range block inner.
pub fn inner_enforcing_gains(sk: &SpecialKlf, ts: TimeDomain) -> Result<InnerGains> {
    let e_inv = inverse(&sk.e_bl).ok_or_else(|| Error::Numerical("E_bl is singular".into()))?;
    let a = &e_inv * &sk.a_bl;
    let b = &e_inv * &sk.b_bl;
    gains(&a, &b, &sk.c_bl, &sk.d_bl, ts)
}

fn fact_err(msg: &str) -> Error {
    Error::Factorization(msg.to_string())
}

/// Gains for the explicit system `(A, B, C, D)` such that
/// `(A + B F, B W, C + D F, D W)` is stable and inner.
pub(crate) fn gains(a: &Mat, b: &Mat, c: &Mat, d: &Mat, ts: TimeDomain) -> Result<InnerGains> {
    let n = a.nrows();
    if n == 0 {
        let g = riccati_gains(a, b, c, d, ts)?;
        let realization = (Mat::zeros(0, 0), None, Mat::zeros(0, g.w.ncols()), Mat::zeros(c.nrows(), 0), d * &g.w);
        return Ok(InnerGains { f: g.f, w: g.w, realization });
    }
    // Solve in ordered Schur coordinates, balanced by an exact diagonal scaling.
    let sch = ordered_generalized_schur(a, &Mat::identity(n, n), |g: &GenEig| is_stable(g, ts))
        .map_err(|_| fact_err("Schur decomposition of the state matrix failed"))?;
    let z = &sch.z;
    let scale = state_scaling(&(z.transpose() * a * z), &(z.transpose() * b), &(c * z));
    let t = z * Mat::from_diagonal(&scale);
    let tinv = Mat::from_diagonal(&scale.map(|v| 1.0 / v)) * z.transpose();
    let mut best = solve_in(a, b, c, d, t, tinv, ts)?;
    // Second pass in coordinates where the Riccati solution is close to the identity.
    if best.1.defect > SECOND_PASS_DEFECT {
        let sv = svd(&best.1.x);
        let top = sv.sigma.first().copied().unwrap_or(0.0);
        if top > 0.0 {
            let floor = top * X_SCALE_FLOOR;
            let root = nalgebra::DVector::from_iterator(n, sv.sigma.iter().map(|&v| v.max(floor).sqrt()));
            let t2 = &best.0 .0 * &sv.u * Mat::from_diagonal(&root.map(|v| 1.0 / v));
            let t2inv = Mat::from_diagonal(&root) * sv.u.transpose() * &best.0 .1;
            if let Ok(second) = solve_in(a, b, c, d, t2, t2inv, ts) {
                if second.1.defect < best.1.defect {
                    best = second;
                }
            }
        }
    }
    let ((t, tinv), g) = best;
    let (at, bt, ct) = (&tinv * a * &t, &tinv * b, c * &t);
    let plain = g.u1 == Mat::identity(n, n);
    let realization = (
        &at * &g.u1 + &bt * &g.u3,
        if plain { None } else { Some(g.u1.clone()) },
        &bt * &g.w,
        &ct * &g.u1 + d * &g.u3,
        d * &g.w,
    );
    Ok(InnerGains { f: &g.f * &tinv, w: g.w, realization })
}

const SECOND_PASS_DEFECT: f64 = 1e-11;
const X_SCALE_FLOOR: f64 = 1e-12;

/// Riccati gains for the system in coordinates `x = T xi`.
#[allow(clippy::type_complexity)]
fn solve_in(a: &Mat, b: &Mat, c: &Mat, d: &Mat, t: Mat, tinv: Mat, ts: TimeDomain) -> Result<((Mat, Mat), Solved)> {
    let g = riccati_gains(&(&tinv * a * &t), &(&tinv * b), &(c * &t), d, ts)?;
    Ok(((t, tinv), g))
}

fn near_boundary(z: Complex64, ts: TimeDomain) -> bool {
    let margin = 1e-9;
    match ts {
        TimeDomain::Continuous => z.re.abs() < margin * (1.0 + z.norm()),
        TimeDomain::Discrete => (z.norm() - 1.0).abs() < margin,
    }
}

fn is_stable(g: &GenEig, ts: TimeDomain) -> bool {
    match g.value() {
        None => false,
        Some(z) => match ts {
            TimeDomain::Continuous => z.re < 0.0,
            TimeDomain::Discrete => z.norm() < 1.0,
        },
    }
}

fn boundary_err() -> Error {
    fact_err("Riccati pencil has eigenvalues on the stability boundary; the range has boundary zeros")
}

/// Riccati-based gains for a system whose state matrix is stable.
fn riccati_gains(a: &Mat, b: &Mat, c: &Mat, d: &Mat, ts: TimeDomain) -> Result<Solved> {
    let n = a.nrows();
    let r = b.ncols();
    let q = c.transpose() * c;
    let s = c.transpose() * d;
    let rr = d.transpose() * d;
    if n == 0 {
        let w = inv_sqrt_spd(&rr).ok_or_else(|| fact_err("D has no full column rank; no inner factor exists"))?;
        return Ok(Solved {
            f: Mat::zeros(r, 0),
            w,
            u1: Mat::zeros(0, 0),
            u3: Mat::zeros(r, 0),
            x: Mat::zeros(0, 0),
            defect: 0.0,
        });
    }
    let i = Mat::identity(n, n);
    let z_nn = Mat::zeros(n, n);
    let (l, k) = match ts {
        TimeDomain::Continuous => (
            blocks(&[&[a, &z_nn, b], &[&(-&q), &(-a.transpose()), &(-&s)], &[&s.transpose(), &b.transpose(), &rr]]),
            blocks(&[
                &[&i, &z_nn, &Mat::zeros(n, r)],
                &[&z_nn, &i, &Mat::zeros(n, r)],
                &[&Mat::zeros(r, n), &Mat::zeros(r, n), &Mat::zeros(r, r)],
            ]),
        ),
        TimeDomain::Discrete => (
            blocks(&[&[a, &z_nn, b], &[&q, &(-&i), &s], &[&s.transpose(), &Mat::zeros(r, n), &rr]]),
            blocks(&[
                &[&i, &z_nn, &Mat::zeros(n, r)],
                &[&z_nn, &(-a.transpose()), &Mat::zeros(n, r)],
                &[&Mat::zeros(r, n), &(-b.transpose()), &Mat::zeros(r, r)],
            ]),
        ),
    };
    let last = l.columns(2 * n, r).into_owned();
    let (qf, rf) = householder_qr(&last);
    let scale = last.norm().max(f64::MIN_POSITIVE);
    if (0..r).any(|j| rf[(j, j)].abs() <= 1e3 * f64::EPSILON * scale * (2 * n + r) as f64) {
        return Err(fact_err("extended pencil has rank-deficient input column; no inner factor exists"));
    }
    let comp = qf.columns(r, 2 * n).transpose();
    let lr = &comp * l.columns(0, 2 * n);
    let kr = &comp * k.columns(0, 2 * n);
    let sch = ordered_generalized_schur(&lr, &kr, |g: &GenEig| is_stable(g, ts))
        .map_err(|_| fact_err("Riccati pencil is singular; no inner factor exists"))?;
    let near = sch.eigenvalues.iter().filter_map(|g| g.value()).any(|z| near_boundary(z, ts));
    if sch.n_selected != n || near {
        return Err(boundary_err());
    }
    let u1 = sch.z.view((0, 0), (n, n)).into_owned();
    let u2 = sch.z.view((n, 0), (n, n)).into_owned();
    let u1i = inverse(&u1).ok_or_else(|| fact_err("stabilizing Riccati solution does not exist"))?;
    let x = &u2 * u1i;
    let x = (&x + x.transpose()) * 0.5;
    let first = feedback(&x, a, b, &s, &rr, ts).ok_or_else(|| match ts {
        TimeDomain::Continuous => fact_err("D has no full column rank; no inner factor exists"),
        TimeDomain::Discrete => fact_err("R + B^T X B is singular"),
    })?;
    let mut best = (defect(a, b, c, d, &x, &first, &rr, ts), x, first);
    for _ in 0..REFINE_STEPS {
        let Some(xn) = closed_loop_gramian(&(a + b * &best.2), &(c + d * &best.2), ts) else { break };
        let Some(fnew) = feedback(&xn, a, b, &s, &rr, ts) else { break };
        let dn = defect(a, b, c, d, &xn, &fnew, &rr, ts);
        if dn.is_nan() || dn >= 0.5 * best.0 {
            break;
        }
        best = (dn, xn, fnew);
    }
    let (dx, x, f) = best;
    let w = weight(&x, b, &rr, ts).ok_or_else(|| fact_err("inner normalization is not positive definite"))?;
    let plain = Solved { u1: Mat::identity(n, n), u3: f.clone(), f, w, x, defect: dx };
    Ok(match subspace_form(a, b, c, d, &s, &rr, &u1, &u2, &sch.s, &sch.t, ts) {
        Some((du, u1, u3, ws)) if du < dx => Solved { u1, u3, w: ws, defect: du, ..plain },
        _ => plain,
    })
}

/// Riccati solution with the closed loop realized as `(A U1 + B U3, U1, B W, C U1 + D U3, D W)`.
struct Solved {
    f: Mat,
    w: Mat,
    u1: Mat,
    u3: Mat,
    x: Mat,
    defect: f64,
}

/// Closed loop in the basis of the stable deflating subspace: `A U1 + B U3 = U1 M` with
/// `U3 = F U1`. Returns its grid defect, `U1`, `U3` and the weight.
#[allow(clippy::too_many_arguments)]
fn subspace_form(
    a: &Mat,
    b: &Mat,
    c: &Mat,
    d: &Mat,
    s: &Mat,
    rr: &Mat,
    u1: &Mat,
    u2: &Mat,
    ss: &Mat,
    tt: &Mat,
    ts: TimeDomain,
) -> Option<(f64, Mat, Mat, Mat)> {
    let n = u1.nrows();
    let rinv = inverse(rr)?;
    let u3 = match ts {
        TimeDomain::Continuous => -&rinv * (s.transpose() * u1 + b.transpose() * u2),
        TimeDomain::Discrete => {
            let t11 = tt.view((0, 0), (n, n)).into_owned();
            let m = inverse(&t11)? * ss.view((0, 0), (n, n));
            -&rinv * (b.transpose() * u2 * m + s.transpose() * u1)
        }
    };
    let ar = a * u1 + b * &u3;
    let cr = c * u1 + d * &u3;
    let w = match ts {
        TimeDomain::Continuous => inv_sqrt_spd(rr)?,
        TimeDomain::Discrete => {
            let grid = frequency_grid(ts, 4);
            let mut h = Mat::zeros(rr.nrows(), rr.ncols());
            for &z in &grid {
                let v = evaluate(&ar, u1, b, &cr, d, z)?;
                h += (v.adjoint() * v).map(|x| x.re).symmetric_part();
            }
            inv_sqrt_spd(&(h / grid.len() as f64))?
        }
    };
    let dv = grid_defect(&ar, u1, &(b * &w), &cr, &(d * &w), ts);
    Some((dv, u1.clone(), u3, w))
}

const REFINE_STEPS: usize = 3;
const DEFECT_POINTS: usize = 16;
const REFINE_MAX_ORDER: usize = 40;

fn feedback(x: &Mat, a: &Mat, b: &Mat, s: &Mat, rr: &Mat, ts: TimeDomain) -> Option<Mat> {
    match ts {
        TimeDomain::Continuous => Some(-inverse(rr)? * (b.transpose() * x + s.transpose())),
        TimeDomain::Discrete => {
            let h = rr + b.transpose() * x * b;
            Some(-inverse(&h)? * (b.transpose() * x * a + s.transpose()))
        }
    }
}

fn weight(x: &Mat, b: &Mat, rr: &Mat, ts: TimeDomain) -> Option<Mat> {
    match ts {
        TimeDomain::Continuous => inv_sqrt_spd(rr),
        TimeDomain::Discrete => inv_sqrt_spd(&(rr + b.transpose() * x * b)),
    }
}

/// Largest `||R^H R - I||` of the closed-loop factor over a boundary grid.
#[allow(clippy::too_many_arguments)]
fn defect(a: &Mat, b: &Mat, c: &Mat, d: &Mat, x: &Mat, f: &Mat, rr: &Mat, ts: TimeDomain) -> f64 {
    let Some(w) = weight(x, b, rr, ts) else { return f64::INFINITY };
    let n = a.nrows();
    grid_defect(&(a + b * f), &Mat::identity(n, n), &(b * &w), &(c + d * f), &(d * &w), ts)
}

/// `C (z E - A)^{-1} B + D`.
fn evaluate(a: &Mat, e: &Mat, b: &Mat, c: &Mat, d: &Mat, z: Complex64) -> Option<CMat> {
    let pencil = to_complex(e) * z - to_complex(a);
    let sol = pencil.lu().solve(&to_complex(b))?;
    Some(to_complex(c) * sol + to_complex(d))
}

fn grid_defect(a: &Mat, e: &Mat, b: &Mat, c: &Mat, d: &Mat, ts: TimeDomain) -> f64 {
    let r = b.ncols();
    let mut worst = 0.0f64;
    for z in frequency_grid(ts, DEFECT_POINTS) {
        let Some(val) = evaluate(a, e, b, c, d, z) else { return f64::INFINITY };
        let err = (val.adjoint() * &val - CMat::identity(r, r)).norm();
        if !err.is_finite() {
            return f64::INFINITY;
        }
        worst = worst.max(err);
    }
    worst
}

/// Observability Gramian of a stable `(A, C)`: `A^T X + X A + C^T C = 0` or `A^T X A - X + C^T C = 0`.
fn closed_loop_gramian(a: &Mat, c: &Mat, ts: TimeDomain) -> Option<Mat> {
    let n = a.nrows();
    if n > REFINE_MAX_ORDER {
        return None;
    }
    let i = Mat::identity(n, n);
    let at = a.transpose();
    let op = match ts {
        TimeDomain::Continuous => i.kronecker(&at) + at.kronecker(&i),
        TimeDomain::Discrete => at.kronecker(&at) - Mat::identity(n * n, n * n),
    };
    let rhs = -(c.transpose() * c);
    let v = op.full_piv_lu().solve(&nalgebra::DVector::from_column_slice(rhs.as_slice()))?;
    let x = Mat::from_column_slice(n, n, v.as_slice());
    Some((&x + x.transpose()) * 0.5)
}
