//! Frequency-grid checks of factorizations.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dss::{DescriptorSystem, TimeDomain};
use crate::error::{Error, Result};
use crate::numkernel::lin::CMat;

/// Imaginary-axis points `i w`, `w` log-spaced in `[1e-3, 1e3]`, or unit-circle points.
pub fn frequency_grid(ts: TimeDomain, count: usize) -> Vec<Complex64> {
    match ts {
        TimeDomain::Continuous => (0..count)
            .map(|k| {
                let t = if count > 1 { k as f64 / (count - 1) as f64 } else { 0.5 };
                Complex64::new(0.0, 10f64.powf(-3.0 + 6.0 * t))
            })
            .collect(),
        TimeDomain::Discrete => (0..count)
            .map(|k| Complex64::from_polar(1.0, std::f64::consts::TAU * (k as f64 + 0.5) / count as f64))
            .collect(),
    }
}

/// Seeded random points at which every system in `systems` can be evaluated.
pub fn sample_points(systems: &[&DescriptorSystem], count: usize, seed: u64) -> Result<Vec<Complex64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7072_6f62_6573);
    let mut out = Vec::with_capacity(count);
    let mut tries = 0;
    while out.len() < count {
        tries += 1;
        if tries > 50 * count + 50 {
            return Err(Error::Numerical("could not find evaluation points away from poles".into()));
        }
        let z = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        if systems.iter().all(|s| s.pencil_condition(z) < 1e8) {
            out.push(z);
        }
    }
    Ok(out)
}

fn rel(diff: f64, scale: f64) -> f64 {
    if scale > 0.0 {
        diff / scale
    } else {
        diff
    }
}

/// `max_k ||G - L R|| / ||G||` over the points.
pub fn product_residual(
    g: &DescriptorSystem,
    left: &DescriptorSystem,
    right: &DescriptorSystem,
    points: &[Complex64],
) -> Result<f64> {
    let mut worst = 0.0f64;
    for &z in points {
        let gv = g.evaluate(z)?;
        let pv = left.evaluate(z)? * right.evaluate(z)?;
        worst = worst.max(rel((&gv - &pv).norm(), gv.norm()));
    }
    Ok(worst)
}

/// `max ||R^H R - I||_F` on the stability boundary grid.
pub fn inner_defect(r: &DescriptorSystem, points: &[Complex64]) -> Result<f64> {
    let k = r.inputs();
    let eye = CMat::identity(k, k);
    let mut worst = 0.0f64;
    for &z in points {
        let v = r.evaluate(z)?;
        worst = worst.max((v.adjoint() * &v - &eye).norm());
    }
    Ok(worst)
}

/// Largest relative defect over the four Moore-Penrose identities on the boundary grid.
pub fn moore_penrose_defect(g: &DescriptorSystem, ginv: &DescriptorSystem, points: &[Complex64]) -> Result<f64> {
    let mut worst = 0.0f64;
    for &z in points {
        let a = g.evaluate(z)?;
        let x = ginv.evaluate(z)?;
        let ax = &a * &x;
        let xa = &x * &a;
        let s = a.norm().max(x.norm()).max(1.0);
        worst = worst
            .max(rel((&ax * &a - &a).norm(), a.norm().max(f64::MIN_POSITIVE)))
            .max(rel((&xa * &x - &x).norm(), x.norm().max(f64::MIN_POSITIVE)))
            .max((&ax - ax.adjoint()).norm() / s)
            .max((&xa - xa.adjoint()).norm() / s);
    }
    Ok(worst)
}
