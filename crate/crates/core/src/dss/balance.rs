//! Exact power-of-two scalings that equilibrate a realization.

use nalgebra::DVector;

use super::DescriptorSystem;
use crate::numkernel::lin::Mat;

const SWEEPS: usize = 100;

fn pow2_near(x: f64) -> f64 {
    2f64.powi(x.log2().round() as i32)
}

/// Diagonal `D` of powers of two balancing the rows and columns of
/// `[[D^-1 A D, D^-1 B], [C D, 0]]` off the diagonal of `A`.
pub(crate) fn state_scaling(a: &Mat, b: &Mat, c: &Mat) -> DVector<f64> {
    let n = a.nrows();
    let mut d = DVector::from_element(n, 1.0);
    for _ in 0..SWEEPS {
        let mut changed = false;
        for i in 0..n {
            let col: f64 = (0..n).filter(|&k| k != i).map(|k| (a[(k, i)] * d[i] / d[k]).abs()).sum::<f64>()
                + c.column(i).iter().map(|v| (v * d[i]).abs()).sum::<f64>();
            let row: f64 = (0..n).filter(|&k| k != i).map(|k| (a[(i, k)] * d[k] / d[i]).abs()).sum::<f64>()
                + b.row(i).iter().map(|v| (v / d[i]).abs()).sum::<f64>();
            if col == 0.0 || row == 0.0 {
                continue;
            }
            let mut f = 1.0;
            let (mut cs, mut rs) = (col, row);
            while cs < rs / 2.0 {
                cs *= 2.0;
                rs /= 2.0;
                f *= 2.0;
            }
            while cs >= rs * 2.0 {
                cs /= 2.0;
                rs *= 2.0;
                f /= 2.0;
            }
            if cs + rs < 0.95 * (col + row) {
                d[i] *= f;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    d
}

/// Row scaling `L` and column scaling `R`, powers of two, bringing the largest entry of every
/// row of `[L A R, L E R, L B]` and every column of `[L A R; L E R; C R]` close to one.
pub(crate) fn pencil_scaling(a: &Mat, e: &Mat, b: &Mat, c: &Mat) -> (DVector<f64>, DVector<f64>) {
    let n = a.nrows();
    let mut l = DVector::from_element(n, 1.0);
    let mut r = DVector::from_element(n, 1.0);
    for _ in 0..SWEEPS {
        let mut changed = false;
        for i in 0..n {
            let m = (0..n)
                .map(|j| (a[(i, j)].abs().max(e[(i, j)].abs())) * r[j])
                .chain(b.row(i).iter().map(|v| v.abs()))
                .fold(0.0f64, f64::max)
                * l[i];
            if m > 0.0 {
                let f = pow2_near(1.0 / m.sqrt());
                if f != 1.0 {
                    l[i] *= f;
                    changed = true;
                }
            }
        }
        for j in 0..n {
            let m = (0..n)
                .map(|i| (a[(i, j)].abs().max(e[(i, j)].abs())) * l[i])
                .chain(c.column(j).iter().map(|v| v.abs()))
                .fold(0.0f64, f64::max)
                * r[j];
            if m > 0.0 {
                let f = pow2_near(1.0 / m.sqrt());
                if f != 1.0 {
                    r[j] *= f;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    (l, r)
}

/// Equivalent realization scaled by exact powers of two; standard systems stay standard.
pub fn balanced(sys: &DescriptorSystem) -> DescriptorSystem {
    let n = sys.order();
    if n == 0 {
        return sys.clone();
    }
    let (l, r) = match &sys.e {
        None => {
            let d = state_scaling(&sys.a, &sys.b, &sys.c);
            (d.map(|v| 1.0 / v), d)
        }
        Some(e) => pencil_scaling(&sys.a, e, &sys.b, &sys.c),
    };
    let lm = Mat::from_diagonal(&l);
    let rm = Mat::from_diagonal(&r);
    DescriptorSystem {
        a: &lm * &sys.a * &rm,
        e: sys.e.as_ref().map(|e| &lm * e * &rm),
        b: &lm * &sys.b,
        c: &sys.c * &rm,
        d: sys.d.clone(),
        ts: sys.ts,
    }
}
