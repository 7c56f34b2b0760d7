use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::dss::TimeDomain;
use crate::error::{Error, Result};
use crate::numkernel::{GenEig, ToleranceConfig};

/// Predicate marking finite points as bad.
pub type RegionPredicate = Arc<dyn Fn(Complex64) -> bool + Send + Sync>;

/// Which finite points belong to the bad region.
#[derive(Clone)]
pub enum BadRegion {
    /// Every finite point is good.
    None,
    /// Open right half-plane (continuous) or exterior of the closed unit disc (discrete).
    Instability,
    /// Every finite point is bad.
    AllFinite,
    Custom(RegionPredicate),
}

impl fmt::Debug for BadRegion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BadRegion::None => f.write_str("None"),
            BadRegion::Instability => f.write_str("Instability"),
            BadRegion::AllFinite => f.write_str("AllFinite"),
            BadRegion::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

/// Partition of the extended complex plane into good and bad points.
#[derive(Debug, Clone)]
pub struct RegionPartition {
    pub ts: TimeDomain,
    pub bad: BadRegion,
    pub infinite_is_bad: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EigenClass {
    Good,
    Bad,
    Boundary,
}

impl RegionPartition {
    /// Everything good, infinity included.
    pub fn none(ts: TimeDomain) -> Self {
        Self { ts, bad: BadRegion::None, infinite_is_bad: false }
    }

    /// Good region is the closed left half-plane with infinity, or the closed unit disc.
    pub fn stability(ts: TimeDomain) -> Self {
        Self { ts, bad: BadRegion::Instability, infinite_is_bad: ts == TimeDomain::Discrete }
    }

    /// Every eigenvalue is bad, infinity included.
    pub fn all(ts: TimeDomain) -> Self {
        Self { ts, bad: BadRegion::AllFinite, infinite_is_bad: true }
    }

    /// User predicate; rejected when it is not symmetric about the real axis on sample points.
    pub fn custom(ts: TimeDomain, bad: RegionPredicate, infinite_is_bad: bool) -> Result<Self> {
        let probes = [
            Complex64::new(0.3, 0.7),
            Complex64::new(-1.2, 2.5),
            Complex64::new(2.0, 0.1),
            Complex64::new(-0.05, -3.0),
            Complex64::new(0.9, 0.45),
            Complex64::new(-4.0, 1.0),
        ];
        for z in probes {
            if bad(z) != bad(z.conj()) {
                return Err(Error::Input(format!("custom region is not conjugate-symmetric at {z}")));
            }
        }
        Ok(Self { ts, bad: BadRegion::Custom(bad), infinite_is_bad })
    }

    pub fn has_bad_finite(&self) -> bool {
        !matches!(self.bad, BadRegion::None)
    }

    /// Signed distance to the stability boundary, positive on the unstable side.
    fn instability_margin(&self, z: Complex64) -> f64 {
        match self.ts {
            TimeDomain::Continuous => z.re,
            TimeDomain::Discrete => z.norm() - 1.0,
        }
    }

    pub fn classify(&self, ev: &GenEig, tol: &ToleranceConfig) -> EigenClass {
        classify_eigenvalue(ev.alpha, ev.beta, self, tol)
    }

    /// Fails with a boundary error on the first eigenvalue too close to the boundary.
    pub fn is_good(&self, ev: &GenEig, tol: &ToleranceConfig) -> Result<bool> {
        match self.classify(ev, tol) {
            EigenClass::Good => Ok(true),
            EigenClass::Bad => Ok(false),
            EigenClass::Boundary => Err(Error::Boundary(ev.value().unwrap_or(Complex64::new(f64::INFINITY, 0.0)))),
        }
    }
}

/// Classifies the generalized eigenvalue `alpha / beta`.
pub fn classify_eigenvalue(alpha: Complex64, beta: f64, region: &RegionPartition, tol: &ToleranceConfig) -> EigenClass {
    let ev = GenEig { alpha, beta };
    let Some(z) = ev.value() else {
        return if region.infinite_is_bad { EigenClass::Bad } else { EigenClass::Good };
    };
    match &region.bad {
        BadRegion::None => EigenClass::Good,
        BadRegion::AllFinite => EigenClass::Bad,
        BadRegion::Custom(f) => {
            if f(z) {
                EigenClass::Bad
            } else {
                EigenClass::Good
            }
        }
        BadRegion::Instability => {
            let d = region.instability_margin(z);
            if tol.boundary_offset > 0.0 && d.abs() <= tol.boundary_offset {
                EigenClass::Boundary
            } else if d > tol.eig_atol {
                EigenClass::Bad
            } else {
                EigenClass::Good
            }
        }
    }
}
