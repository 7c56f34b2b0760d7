//! Proper range bases and the matching full row rank cofactors.

mod place;
mod riccati;

pub use place::stabilizing_feedback;
pub use riccati::{inner_enforcing_gains, InnerGains};

use crate::dss::{irreducible_realization, DescriptorSystem, TimeDomain};
use crate::error::{Error, Result};
use crate::klf::{special_klf, RegionPartition, SpecialKlf};
use crate::numkernel::lin::{inverse, Mat};
use crate::numkernel::ToleranceConfig;

/// Which zeros of `G` the range basis keeps.
#[derive(Debug, Clone, Default)]
pub enum ZerosPolicy {
    /// No zeros: minimal-degree basis.
    None,
    /// Zeros in the instability region.
    #[default]
    Bad,
    /// Every zero, infinite ones included.
    All,
    /// Zeros in the bad part of a user partition.
    Region(RegionPartition),
}

impl ZerosPolicy {
    pub fn region(&self, ts: TimeDomain) -> RegionPartition {
        match self {
            ZerosPolicy::None => RegionPartition::none(ts),
            ZerosPolicy::Bad => RegionPartition::stability(ts),
            ZerosPolicy::All => RegionPartition::all(ts),
            ZerosPolicy::Region(r) => RegionPartition { ts, ..r.clone() },
        }
    }
}

#[derive(Debug, Clone)]
pub struct RangeOptions {
    pub zeros: ZerosPolicy,
    /// Move the poles of the basis into `target`.
    pub stabilize: bool,
    /// Make the basis inner; implies `stabilize`.
    pub inner: bool,
    /// Pole region for `stabilize`; defaults to the stability region.
    pub target: Option<RegionPartition>,
    /// Reduce the input to an irreducible realization first.
    pub minimal_realization: bool,
}

impl Default for RangeOptions {
    fn default() -> Self {
        Self { zeros: ZerosPolicy::Bad, stabilize: false, inner: false, target: None, minimal_realization: true }
    }
}

impl RangeOptions {
    pub fn minimal() -> Self {
        Self { zeros: ZerosPolicy::None, ..Default::default() }
    }

    pub fn minimal_inner() -> Self {
        Self { zeros: ZerosPolicy::None, inner: true, stabilize: true, ..Default::default() }
    }

    pub fn inner_bad() -> Self {
        Self { zeros: ZerosPolicy::Bad, inner: true, stabilize: true, ..Default::default() }
    }
}

/// Range basis `R` with the gains used to build it.
#[derive(Debug, Clone)]
pub struct RangeResult {
    pub r: DescriptorSystem,
    pub f: Mat,
    pub w: Mat,
    pub sklf: SpecialKlf,
    /// Realization of `G` the special form was computed from.
    pub realization: DescriptorSystem,
}

impl RangeResult {
    pub fn rank(&self) -> usize {
        self.sklf.dims.r
    }
}

/// Proper full column rank `R` with the same rational range as `G`.
pub fn range_basis(sys: &DescriptorSystem, opts: &RangeOptions, tol: &ToleranceConfig) -> Result<RangeResult> {
    tol.validate()?;
    let base = if opts.minimal_realization { irreducible_realization(sys, tol)? } else { sys.clone() };
    let region = opts.zeros.region(sys.ts);
    let sk = special_klf(&base, &region, tol)?;
    let (n_bl, r) = (sk.dims.n_bl, sk.dims.r);
    let (f, w, rsys) = if opts.inner {
        let g = inner_enforcing_gains(&sk, sys.ts)?;
        let (a, e, b, c, d) = g.realization;
        (g.f, g.w, DescriptorSystem { a, e, b, c, d, ts: sys.ts })
    } else {
        let f = if opts.stabilize {
            let target = opts.target.clone().unwrap_or_else(|| RegionPartition::stability(sys.ts));
            stabilizing_feedback(&sk.a_bl, &sk.e_bl, &sk.b_bl, &target, tol)?
        } else {
            Mat::zeros(r, n_bl)
        };
        let rsys = DescriptorSystem {
            a: &sk.a_bl + &sk.b_bl * &f,
            e: Some(sk.e_bl.clone()),
            b: sk.b_bl.clone(),
            c: &sk.c_bl + &sk.d_bl * &f,
            d: sk.d_bl.clone(),
            ts: sys.ts,
        };
        (f, Mat::identity(r, r), rsys)
    };
    Ok(RangeResult { r: rsys, f, w, sklf: sk, realization: base })
}

/// Full row rank `X` with `G = R X`, sharing the pencil of the realization of `G`.
pub fn cofactor(sys: &DescriptorSystem, rr: &RangeResult) -> Result<DescriptorSystem> {
    let base = &rr.realization;
    if sys.inputs() != base.inputs() || sys.outputs() != base.outputs() || sys.ts != base.ts {
        return Err(Error::Input("range result was computed for a different system".into()));
    }
    let d = &rr.sklf.dims;
    let nn = d.n + d.m;
    let mut row = Mat::zeros(d.r, nn);
    row.view_mut((0, d.n_c), (d.r, d.n_bl)).copy_from(&(-&rr.f));
    row.view_mut((0, d.n_c + d.n_bl), (d.r, d.r)).copy_from(&Mat::identity(d.r, d.r));
    let wi = inverse(&rr.w).ok_or_else(|| Error::Numerical("weight W is singular".into()))?;
    let cd = wi * row * rr.sklf.z.transpose();
    Ok(DescriptorSystem {
        a: base.a.clone(),
        e: base.e.clone(),
        b: base.b.clone(),
        c: cd.columns(0, d.n).into_owned(),
        d: cd.columns(d.n, d.m).into_owned(),
        ts: base.ts,
    })
}
