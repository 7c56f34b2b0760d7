//! Full-rank, coprime, pseudo-inverse and inner-outer factorizations.

use crate::dss::{irreducible_realization, normal_rank_with, poles_with, zeros_with, DescriptorSystem, EigenvalueList};
use crate::error::{Error, Result};
use crate::numkernel::lin::Mat;
use crate::numkernel::ToleranceConfig;
use crate::range::{cofactor, range_basis, RangeOptions};
use crate::verify::{frequency_grid, inner_defect, moore_penrose_defect, product_residual, sample_points};

/// Default number of random points used for product residuals.
pub const RESIDUAL_POINTS: usize = 16;
/// Default boundary grid size for inner checks.
pub const BOUNDARY_POINTS: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorizationKind {
    FullRank,
    Dual,
    Nrcf,
    InnerOuter,
}

impl std::fmt::Display for FactorizationKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            FactorizationKind::FullRank => "full-rank",
            FactorizationKind::Dual => "dual",
            FactorizationKind::Nrcf => "nrcf",
            FactorizationKind::InnerOuter => "inner-outer",
        })
    }
}

/// Pole, zero and degree summary of one factor.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorInfo {
    pub poles: EigenvalueList,
    pub zeros: EigenvalueList,
    pub mcmillan_degree: usize,
    pub normal_rank: usize,
    pub order: usize,
}

impl FactorInfo {
    pub fn of(sys: &DescriptorSystem, tol: &ToleranceConfig) -> Result<Self> {
        let poles = poles_with(sys, tol)?;
        Ok(Self {
            mcmillan_degree: poles.count(),
            poles,
            zeros: zeros_with(sys, tol)?,
            normal_rank: normal_rank_with(sys, tol)?,
            order: sys.order(),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Certificates {
    pub rank: usize,
    /// Largest relative residual of `G - left * right` at `points`.
    pub max_residual: f64,
    pub points: Vec<num_complex::Complex64>,
    /// `max ||L^H L - I||` on the boundary grid when the left factor is inner.
    pub inner_defect: Option<f64>,
    pub left: FactorInfo,
    pub right: FactorInfo,
}

/// `G = left * right` with `left` of full column rank and `right` of full row rank.
#[derive(Debug, Clone)]
pub struct FactorizationResult {
    pub left: DescriptorSystem,
    pub right: DescriptorSystem,
    pub kind: FactorizationKind,
    pub certificates: Certificates,
}

fn certify(
    g: &DescriptorSystem,
    left: DescriptorSystem,
    right: DescriptorSystem,
    kind: FactorizationKind,
    rank: usize,
    inner: bool,
    tol: &ToleranceConfig,
) -> Result<FactorizationResult> {
    let points = sample_points(&[g, &left, &right], RESIDUAL_POINTS, tol.seed)?;
    let max_residual = product_residual(g, &left, &right, &points)?;
    let inner_defect = if inner { Some(inner_defect(&left, &frequency_grid(g.ts, BOUNDARY_POINTS))?) } else { None };
    let certificates = Certificates {
        rank,
        max_residual,
        points,
        inner_defect,
        left: FactorInfo::of(&left, tol)?,
        right: FactorInfo::of(&right, tol)?,
    };
    Ok(FactorizationResult { left, right, kind, certificates })
}

/// `G = R X` with a proper range basis `R` chosen by `opts`.
pub fn full_rank_factorize(
    sys: &DescriptorSystem,
    opts: &RangeOptions,
    tol: &ToleranceConfig,
) -> Result<FactorizationResult> {
    let rr = range_basis(sys, opts, tol)?;
    let x = cofactor(sys, &rr)?;
    certify(sys, rr.r.clone(), x, FactorizationKind::FullRank, rr.rank(), opts.inner, tol)
}

/// `G = X R` with `R` of full row rank, from the factorization of `G^T`.
pub fn dual_full_rank_factorize(
    sys: &DescriptorSystem,
    opts: &RangeOptions,
    tol: &ToleranceConfig,
) -> Result<FactorizationResult> {
    let gt = sys.transpose();
    let rr = range_basis(&gt, opts, tol)?;
    let xt = cofactor(&gt, &rr)?;
    let left = xt.transpose();
    let right = rr.r.transpose();
    let mut out = certify(sys, left, right, FactorizationKind::Dual, rr.rank(), false, tol)?;
    if opts.inner {
        out.certificates.inner_defect = Some(inner_defect(&rr.r, &frequency_grid(sys.ts, BOUNDARY_POINTS))?);
    }
    Ok(out)
}

/// Normalized right coprime factors `G = N M^{-1}`.
#[derive(Debug, Clone)]
pub struct Nrcf {
    pub n: DescriptorSystem,
    pub m: DescriptorSystem,
    /// `max ||N~N + M~M - I||` on the boundary grid.
    pub inner_defect: f64,
    /// Largest relative residual of `G M - N` at random points.
    pub max_residual: f64,
}

pub fn nrcf(sys: &DescriptorSystem, tol: &ToleranceConfig) -> Result<Nrcf> {
    let (p, m) = (sys.outputs(), sys.inputs());
    let stacked = sys.stack_vertical(&DescriptorSystem::identity(m, sys.ts))?;
    let rr = range_basis(&stacked, &RangeOptions::minimal_inner(), tol)?;
    if rr.rank() != m {
        return Err(Error::Numerical(format!("[G; I] has normal rank {} instead of {m}", rr.rank())));
    }
    let nf = rr.r.output_rows(0, p);
    let mf = rr.r.output_rows(p, m);
    let defect = inner_defect(&rr.r, &frequency_grid(sys.ts, BOUNDARY_POINTS))?;
    let points = sample_points(&[sys, &rr.r], RESIDUAL_POINTS, tol.seed)?;
    let mut worst = 0.0f64;
    for &z in &points {
        let g = sys.evaluate(z)?;
        let nv = nf.evaluate(z)?;
        let mv = mf.evaluate(z)?;
        let scale = nv.norm().max(f64::MIN_POSITIVE);
        worst = worst.max((g * mv - &nv).norm() / scale.max(1e-300));
    }
    Ok(Nrcf { n: nf, m: mf, inner_defect: defect, max_residual: worst })
}

/// Moore-Penrose pseudo-inverse with its grid certificate.
#[derive(Debug, Clone)]
pub struct PseudoInverse {
    pub ginv: DescriptorSystem,
    /// Order of the composed realization before reduction.
    pub order_before_reduction: usize,
    /// Largest defect among the four Moore-Penrose identities on the boundary grid.
    pub max_defect: f64,
}

pub fn pseudo_inverse(sys: &DescriptorSystem, tol: &ToleranceConfig) -> Result<PseudoInverse> {
    let (p, m) = (sys.outputs(), sys.inputs());
    let opts = RangeOptions::minimal_inner();
    let r1 = range_basis(sys, &opts, tol)?;
    let ginv = if r1.rank() == 0 {
        DescriptorSystem::gain(Mat::zeros(m, p), sys.ts)
    } else {
        let u = r1.r.clone();
        let g1 = cofactor(sys, &r1)?;
        let g1t = g1.transpose();
        let r2 = range_basis(&g1t, &opts, tol)?;
        let vt = r2.r.clone();
        let g2t = cofactor(&g1t, &r2)?;
        let v = vt.transpose();
        let g2 = g2t.transpose();
        v.conjugate_descriptor().series(&g2.inverse()?)?.series(&u.conjugate_descriptor())?
    };
    let before = ginv.order();
    let ginv = irreducible_realization(&ginv, tol)?;
    let max_defect = moore_penrose_defect(sys, &ginv, &frequency_grid(sys.ts, BOUNDARY_POINTS))?;
    Ok(PseudoInverse { ginv, order_before_reduction: before, max_defect })
}

/// `G = Gi Go` with `Gi` stable inner and `Go` quasi-outer.
pub fn inner_outer(sys: &DescriptorSystem, tol: &ToleranceConfig) -> Result<FactorizationResult> {
    let mut f = full_rank_factorize(sys, &RangeOptions::inner_bad(), tol)?;
    f.kind = FactorizationKind::InnerOuter;
    Ok(f)
}
