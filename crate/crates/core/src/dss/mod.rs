//! Descriptor realizations `G(lambda) = C (lambda E - A)^{-1} B + D`.

pub(crate) mod balance;
mod minreal;
mod ops;
mod structure;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numkernel::lin::{to_complex, CMat, Mat};
use crate::numkernel::EPS;

pub use balance::balanced;
pub use minreal::{irreducible_realization, remove_nondynamic_modes};
pub use structure::{
    mcmillan_degree, multiset_match, normal_rank, normal_rank_with, poles, poles_with, zeros, zeros_with,
    EigenvalueList,
};

/// Continuous-time (`s`) or discrete-time (`z`) frequency variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TimeDomain {
    Continuous,
    Discrete,
}

impl std::fmt::Display for TimeDomain {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            TimeDomain::Continuous => "continuous",
            TimeDomain::Discrete => "discrete",
        })
    }
}

/// Descriptor system `(A - lambda E, B, C, D)`; `e = None` stands for the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct DescriptorSystem {
    pub a: Mat,
    pub e: Option<Mat>,
    pub b: Mat,
    pub c: Mat,
    pub d: Mat,
    pub ts: TimeDomain,
}

impl DescriptorSystem {
    /// Validated constructor.
    pub fn new(a: Mat, e: Option<Mat>, b: Mat, c: Mat, d: Mat, ts: TimeDomain) -> Result<Self> {
        let n = a.nrows();
        if a.ncols() != n {
            return Err(Error::Input(format!("A must be square, got {:?}", a.shape())));
        }
        if let Some(e) = &e {
            if e.shape() != (n, n) {
                return Err(Error::Input(format!("E must be {n}x{n}, got {:?}", e.shape())));
            }
        }
        if b.nrows() != n {
            return Err(Error::Input(format!("B must have {n} rows, got {}", b.nrows())));
        }
        if c.ncols() != n {
            return Err(Error::Input(format!("C must have {n} columns, got {}", c.ncols())));
        }
        if d.shape() != (c.nrows(), b.ncols()) {
            return Err(Error::Input(format!("D must be {}x{}, got {:?}", c.nrows(), b.ncols(), d.shape())));
        }
        let all = [Some(&a), e.as_ref(), Some(&b), Some(&c), Some(&d)];
        if all.iter().flatten().any(|m| m.iter().any(|x| !x.is_finite())) {
            return Err(Error::Input("system matrices must be finite".into()));
        }
        Ok(Self { a, e, b, c, d, ts })
    }

    /// Constant gain `D` with no states.
    pub fn gain(d: Mat, ts: TimeDomain) -> Self {
        let (p, m) = d.shape();
        Self { a: Mat::zeros(0, 0), e: None, b: Mat::zeros(0, m), c: Mat::zeros(p, 0), d, ts }
    }

    pub fn identity(m: usize, ts: TimeDomain) -> Self {
        Self::gain(Mat::identity(m, m), ts)
    }

    pub fn order(&self) -> usize {
        self.a.nrows()
    }

    pub fn inputs(&self) -> usize {
        self.b.ncols()
    }

    pub fn outputs(&self) -> usize {
        self.c.nrows()
    }

    /// `E` as a dense matrix.
    pub fn e_mat(&self) -> Mat {
        match &self.e {
            Some(e) => e.clone(),
            None => Mat::identity(self.order(), self.order()),
        }
    }

    /// Frobenius norm of all realization matrices.
    pub fn norm(&self) -> f64 {
        let en = self.e.as_ref().map_or((self.order() as f64).sqrt(), |e| e.norm());
        [self.a.norm(), en, self.b.norm(), self.c.norm(), self.d.norm()].iter().fold(0.0f64, |acc, &x| acc.hypot(x))
    }

    /// Regularity of `A - lambda E`.
    pub fn check_regular(&self) -> Result<()> {
        if self.e.is_none() {
            return Ok(());
        }
        crate::numkernel::check_regular(&self.a, &self.e_mat())
    }

    /// `C (lambda E - A)^{-1} B + D`.
    pub fn evaluate(&self, lambda: Complex64) -> Result<CMat> {
        let n = self.order();
        let d = to_complex(&self.d);
        if n == 0 {
            return Ok(d);
        }
        let m = to_complex(&self.e_mat()) * lambda - to_complex(&self.a);
        let lu = m.clone().lu();
        let inv = lu.try_inverse().ok_or(Error::Evaluation { point: lambda, cond: f64::INFINITY })?;
        let cond = one_norm(&m) * one_norm(&inv);
        if !cond.is_finite() || cond * EPS > 1e-2 {
            return Err(Error::Evaluation { point: lambda, cond });
        }
        Ok(to_complex(&self.c) * inv * to_complex(&self.b) + d)
    }

    /// 1-norm condition number of `lambda E - A`; infinite at eigenvalues.
    pub fn pencil_condition(&self, lambda: Complex64) -> f64 {
        if self.order() == 0 {
            return 1.0;
        }
        let m = to_complex(&self.e_mat()) * lambda - to_complex(&self.a);
        match m.clone().lu().try_inverse() {
            Some(inv) => one_norm(&m) * one_norm(&inv),
            None => f64::INFINITY,
        }
    }

    /// Realization of the same system with explicit dense `E`.
    pub fn with_dense_e(&self) -> Self {
        let mut s = self.clone();
        s.e = Some(self.e_mat());
        s
    }

    /// Applies `Q^T (.) Z` to the pencil, `Q^T B`, `C Z`.
    pub fn transformed(&self, q: &Mat, z: &Mat) -> Self {
        let e = match &self.e {
            None if q == z => None,
            _ => Some(q.transpose() * self.e_mat() * z),
        };
        Self {
            a: q.transpose() * &self.a * z,
            e,
            b: q.transpose() * &self.b,
            c: &self.c * z,
            d: self.d.clone(),
            ts: self.ts,
        }
    }
}

fn one_norm(m: &CMat) -> f64 {
    (0..m.ncols()).map(|j| m.column(j).iter().map(|x| x.norm()).sum::<f64>()).fold(0.0, f64::max)
}

pub(crate) fn dims_err(what: &str, a: (usize, usize), b: (usize, usize)) -> Error {
    Error::Input(format!("{what}: incompatible dimensions {a:?} and {b:?}"))
}

pub(crate) fn ts_check(a: &DescriptorSystem, b: &DescriptorSystem) -> Result<()> {
    if a.ts != b.ts {
        return Err(Error::Input(format!("time domain mismatch: {} vs {}", a.ts, b.ts)));
    }
    Ok(())
}
