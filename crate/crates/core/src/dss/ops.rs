//! Structural operations on realizations.

use super::{dims_err, ts_check, DescriptorSystem, TimeDomain};
use crate::error::Result;
use crate::numkernel::lin::{block_diag, blocks, hstack, vstack, Mat};

impl DescriptorSystem {
    /// `G^T(lambda)`.
    pub fn transpose(&self) -> Self {
        Self {
            a: self.a.transpose(),
            e: self.e.as_ref().map(|e| e.transpose()),
            b: self.c.transpose(),
            c: self.b.transpose(),
            d: self.d.transpose(),
            ts: self.ts,
        }
    }

    /// Adjoint `G~`: `G^T(-s)` in continuous time, `G^T(1/z)` in discrete time.
    pub fn conjugate(&self) -> Self {
        match self.ts {
            TimeDomain::Continuous => self.conjugate_descriptor(),
            TimeDomain::Discrete => super::remove_nondynamic_modes(&self.conjugate_descriptor(), &Default::default()),
        }
    }

    /// Adjoint without eliminating non-dynamic modes; in discrete time the order grows by the input count.
    pub fn conjugate_descriptor(&self) -> Self {
        match self.ts {
            TimeDomain::Continuous => Self {
                a: -self.a.transpose(),
                e: self.e.as_ref().map(|e| e.transpose()),
                b: self.c.transpose(),
                c: -self.b.transpose(),
                d: self.d.transpose(),
                ts: self.ts,
            },
            TimeDomain::Discrete => {
                let (n, m, p) = (self.order(), self.inputs(), self.outputs());
                let a2 = blocks(&[
                    &[&self.e_mat().transpose(), &Mat::zeros(n, m)],
                    &[&Mat::zeros(m, n), &Mat::identity(m, m)],
                ]);
                let e2 =
                    blocks(&[&[&self.a.transpose(), &Mat::zeros(n, m)], &[&self.b.transpose(), &Mat::zeros(m, m)]]);
                let b2 = vstack(&(-self.c.transpose()), &Mat::zeros(m, p));
                let c2 = hstack(&Mat::zeros(m, n), &Mat::identity(m, m));
                Self { a: a2, e: Some(e2), b: b2, c: c2, d: self.d.transpose(), ts: self.ts }
            }
        }
    }

    /// `[G1; G2]`.
    pub fn stack_vertical(&self, other: &Self) -> Result<Self> {
        ts_check(self, other)?;
        if self.inputs() != other.inputs() {
            return Err(dims_err("stack_vertical", self.d.shape(), other.d.shape()));
        }
        Ok(Self {
            a: block_diag(&self.a, &other.a),
            e: self.joint_e(other),
            b: vstack(&self.b, &other.b),
            c: block_diag(&self.c, &other.c),
            d: vstack(&self.d, &other.d),
            ts: self.ts,
        })
    }

    /// `[G1 G2]`.
    pub fn stack_horizontal(&self, other: &Self) -> Result<Self> {
        ts_check(self, other)?;
        if self.outputs() != other.outputs() {
            return Err(dims_err("stack_horizontal", self.d.shape(), other.d.shape()));
        }
        Ok(Self {
            a: block_diag(&self.a, &other.a),
            e: self.joint_e(other),
            b: block_diag(&self.b, &other.b),
            c: hstack(&self.c, &other.c),
            d: hstack(&self.d, &other.d),
            ts: self.ts,
        })
    }

    /// Product `G1 * G2` where `self = G1`.
    pub fn series(&self, other: &Self) -> Result<Self> {
        ts_check(self, other)?;
        if self.inputs() != other.outputs() {
            return Err(dims_err("series", self.d.shape(), other.d.shape()));
        }
        let (n1, n2) = (self.order(), other.order());
        let a = blocks(&[&[&self.a, &(&self.b * &other.c)], &[&Mat::zeros(n2, n1), &other.a]]);
        Ok(Self {
            a,
            e: self.joint_e(other),
            b: vstack(&(&self.b * &other.d), &other.b),
            c: hstack(&self.c, &(&self.d * &other.c)),
            d: &self.d * &other.d,
            ts: self.ts,
        })
    }

    /// Realization of `G^{-1}` for square `G`; the result may be improper.
    pub fn inverse(&self) -> Result<Self> {
        let (n, m) = (self.order(), self.inputs());
        if self.outputs() != m {
            return Err(dims_err("inverse", self.d.shape(), self.d.shape()));
        }
        let a = blocks(&[&[&self.a, &self.b], &[&self.c, &self.d]]);
        let e = block_diag(&self.e_mat(), &Mat::zeros(m, m));
        let b = vstack(&Mat::zeros(n, m), &(-Mat::identity(m, m)));
        let c = hstack(&Mat::zeros(m, n), &Mat::identity(m, m));
        Ok(Self { a, e: Some(e), b, c, d: Mat::zeros(m, m), ts: self.ts })
    }

    /// `k * G`.
    pub fn scaled(&self, k: f64) -> Self {
        let mut s = self.clone();
        s.c *= k;
        s.d *= k;
        s
    }

    /// `G * K` for a constant matrix `K`.
    pub fn times_constant(&self, k: &Mat) -> Result<Self> {
        if self.inputs() != k.nrows() {
            return Err(dims_err("times_constant", self.d.shape(), k.shape()));
        }
        let mut s = self.clone();
        s.b = &self.b * k;
        s.d = &self.d * k;
        Ok(s)
    }

    fn joint_e(&self, other: &Self) -> Option<Mat> {
        if self.e.is_none() && other.e.is_none() {
            None
        } else {
            Some(block_diag(&self.e_mat(), &other.e_mat()))
        }
    }
}

impl DescriptorSystem {
    /// Output rows `r0..r0+k`.
    pub fn output_rows(&self, r0: usize, k: usize) -> Self {
        let mut s = self.clone();
        s.c = self.c.rows(r0, k).into_owned();
        s.d = self.d.rows(r0, k).into_owned();
        s
    }

    /// Input columns `c0..c0+k`.
    pub fn input_columns(&self, c0: usize, k: usize) -> Self {
        let mut s = self.clone();
        s.b = self.b.columns(c0, k).into_owned();
        s.d = self.d.columns(c0, k).into_owned();
        s
    }
}
