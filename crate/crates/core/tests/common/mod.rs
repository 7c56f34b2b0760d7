#![allow(dead_code)]

use num_complex::Complex64;
use ratfact::dss::{DescriptorSystem, TimeDomain};
use ratfact::numkernel::lin::{CMat, Mat};

pub fn mat(rows: usize, cols: usize, v: &[f64]) -> Mat {
    Mat::from_row_slice(rows, cols, v)
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Continuous-time 3x3 example of normal rank 2 with zeros {1, 2, inf}.
pub fn ex1() -> DescriptorSystem {
    let a = mat(4, 4, &[-1.0, 1.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, 0.0, -2.0, 0.0, 0.0, 0.0, 0.0, -2.0]);
    let b = mat(4, 3, &[0.0, 1.0, 1.0, 0.0, -3.0, -3.0, -3.0, -2.0, 1.0, -3.0, 2.0, 5.0]);
    let cm = mat(3, 4, &[0.0, 0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 1.0]);
    let d = mat(3, 3, &[1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 1.0, 0.0]);
    DescriptorSystem::new(a, None, b, cm, d, TimeDomain::Continuous).unwrap()
}

/// Entry-wise transfer function of `ex1`.
pub fn ex1_tf(s: Complex64) -> CMat {
    let one = c(1.0, 0.0);
    let p2 = s + 2.0;
    let p1 = s + 1.0;
    CMat::from_row_slice(
        3,
        3,
        &[
            (s - 1.0) / p2,
            s / p2,
            one / p2,
            c(0.0, 0.0),
            (s - 2.0) / (p1 * p1),
            (s - 2.0) / (p1 * p1),
            (s - 1.0) / p2,
            (s * s + 2.0 * s - 2.0) / (p1 * p2),
            (2.0 * s - 1.0) / (p1 * p2),
        ],
    )
}

/// Discrete-time polynomial example, order 4 descriptor realization with `D = 0`.
pub fn ex2() -> DescriptorSystem {
    let e = mat(4, 4, &[0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
    let b = mat(4, 3, &[0.0, 0.0, 0.0, 0.0, 1.0, 2.0, -1.0, -4.0, -2.0, -1.0, -3.0, 0.0]);
    let cm = mat(3, 4, &[1.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0]);
    DescriptorSystem::new(Mat::identity(4, 4), Some(e), b, cm, Mat::zeros(3, 3), TimeDomain::Discrete).unwrap()
}

pub fn ex2_tf(z: Complex64) -> CMat {
    let z2 = z * z;
    CMat::from_row_slice(
        3,
        3,
        &[
            z2 + z + 1.0,
            4.0 * z2 + 3.0 * z + 2.0,
            2.0 * z2 - 2.0,
            z,
            4.0 * z - 1.0,
            2.0 * z - 2.0,
            z2,
            4.0 * z2 - z,
            2.0 * z2 - 2.0 * z,
        ],
    )
}

/// Relative evaluation mismatch between two systems over a set of points.
pub fn max_rel_diff(g1: &DescriptorSystem, g2: &DescriptorSystem, pts: &[Complex64]) -> f64 {
    pts.iter()
        .map(|&s| {
            let a = g1.evaluate(s).unwrap();
            let b = g2.evaluate(s).unwrap();
            (&a - &b).norm() / b.norm().max(1.0)
        })
        .fold(0.0, f64::max)
}

pub fn probe_points() -> Vec<Complex64> {
    (0..10).map(|k| c(0.37 + 0.61 * k as f64 - 2.5, 1.3 - 0.29 * k as f64)).collect()
}

fn uniform(rng: &mut impl rand::Rng, r: usize, c: usize) -> Mat {
    Mat::from_fn(r, c, |_, _| rng.gen_range(-1.0..1.0))
}

fn orthogonal(rng: &mut impl rand::Rng, n: usize) -> Mat {
    uniform(rng, n, n).qr().q()
}

/// Random descriptor system: finite part of order `nf`, a nilpotent block of size `ninf`
/// (polynomial part of degree `ninf - 1`), and optionally a rank-deficient input map.
pub fn random_system(
    rng: &mut impl rand::Rng,
    ts: TimeDomain,
    nf: usize,
    ninf: usize,
    p: usize,
    m: usize,
    rank: usize,
) -> DescriptorSystem {
    let n = nf + ninf;
    let mut a0 = Mat::identity(n, n);
    let mut e0 = Mat::identity(n, n);
    a0.view_mut((0, 0), (nf, nf)).copy_from(&(uniform(rng, nf, nf) * 1.5));
    for i in nf..n {
        e0[(i, i)] = 0.0;
        if i + 1 < n {
            e0[(i, i + 1)] = 1.0;
        }
    }
    let (q, z) = (orthogonal(rng, n), orthogonal(rng, n));
    let k = uniform(rng, rank, m);
    let b = uniform(rng, n, rank) * &k;
    let d = uniform(rng, p, rank) * &k;
    let c = uniform(rng, p, n);
    let e = if ninf == 0 && rng.gen_bool(0.5) { None } else { Some(q.transpose() * e0 * &z) };
    let a = if e.is_none() { a0 } else { q.transpose() * a0 * &z };
    let b = if e.is_none() { b } else { q.transpose() * b };
    let c = if e.is_none() { c } else { c * z };
    DescriptorSystem::new(a, e, b, c, d, ts).unwrap()
}

/// Draws the shape of a random system the way the property suites do.
pub fn random_case(rng: &mut impl rand::Rng) -> DescriptorSystem {
    let ts = if rng.gen_bool(0.5) { TimeDomain::Continuous } else { TimeDomain::Discrete };
    let n = rng.gen_range(0..=8usize);
    let ninf = if n > 0 && rng.gen_bool(0.4) { rng.gen_range(1..=n.min(3)) } else { 0 };
    let p = rng.gen_range(1..=4);
    let m = rng.gen_range(1..=4);
    let rank = if rng.gen_bool(0.3) { rng.gen_range(1..=p.min(m)) } else { m };
    random_system(rng, ts, n - ninf, ninf, p, m, rank)
}

/// Outcome of the randomized factorization checks on one system.
#[derive(Debug, Default)]
pub struct CaseReport {
    pub frf_residual: f64,
    pub rank_compatible: bool,
    /// `None` when the system has poles on the stability boundary.
    pub nrcf_defect: Option<f64>,
    pub pinv_defect: f64,
    /// Inner factor carries exactly the unstable zeros and the outer factor only stable ones.
    pub io_partition: bool,
    /// `zeros(Gi) + zeros(Go) == zeros(G)` as multisets.
    pub io_union_literal: bool,
    pub failures: Vec<String>,
}

fn near_boundary(z: Complex64, ts: TimeDomain, eps: f64) -> bool {
    match ts {
        TimeDomain::Continuous => z.re.abs() < eps,
        TimeDomain::Discrete => (z.norm() - 1.0).abs() < eps,
    }
}

fn is_unstable(z: Complex64, ts: TimeDomain) -> bool {
    match ts {
        TimeDomain::Continuous => z.re > 0.0,
        TimeDomain::Discrete => z.norm() > 1.0,
    }
}

pub fn check_case(g: &DescriptorSystem, opts: &ratfact::range::RangeOptions) -> CaseReport {
    use ratfact::dss::{normal_rank_with, poles_with, zeros_with, EigenvalueList};
    use ratfact::fact::*;
    let t = ratfact::numkernel::ToleranceConfig::default();
    let mut rep = CaseReport::default();
    let r = normal_rank_with(g, &t).unwrap();

    match full_rank_factorize(g, opts, &t) {
        Ok(f) => {
            rep.frf_residual = f.certificates.max_residual;
            let rg = f.left.stack_horizontal(g).unwrap();
            let ranks = (normal_rank_with(&rg, &t).unwrap(), f.certificates.left.normal_rank, f.certificates.rank);
            rep.rank_compatible = ranks == (r, r, r);
            if !rep.rank_compatible {
                rep.failures.push(format!("rank [R G], R, r = {ranks:?}, normal rank {r}"));
            }
        }
        Err(e) => {
            rep.frf_residual = f64::INFINITY;
            rep.failures.push(format!("frf: {e}"));
        }
    }

    let boundary_poles = poles_with(g, &t).unwrap().finite.iter().any(|&z| near_boundary(z, g.ts, 1e-6));
    if !boundary_poles {
        match nrcf(g, &t) {
            Ok(n) => rep.nrcf_defect = Some(n.inner_defect.max(n.max_residual)),
            Err(e) => {
                rep.nrcf_defect = Some(f64::INFINITY);
                rep.failures.push(format!("nrcf: {e}"));
            }
        }
    }

    rep.pinv_defect = match pseudo_inverse(g, &t) {
        Ok(p) => p.max_defect,
        Err(e) => {
            rep.failures.push(format!("pinv: {e}"));
            f64::INFINITY
        }
    };

    match inner_outer(g, &t) {
        Ok(f) => {
            let zg = zeros_with(g, &t).unwrap();
            let (zi, zo) = (&f.certificates.left.zeros, &f.certificates.right.zeros);
            let bad = EigenvalueList {
                finite: zg.finite.iter().copied().filter(|&z| is_unstable(z, g.ts)).collect(),
                infinite_multiplicities: if g.ts == TimeDomain::Discrete {
                    zg.infinite_multiplicities.clone()
                } else {
                    vec![]
                },
            };
            let outer_good = zo.finite.iter().all(|&z| !is_unstable(z, g.ts) || near_boundary(z, g.ts, 1e-6))
                && (g.ts == TimeDomain::Continuous || zo.infinite_count() == 0);
            let inner_ok =
                f.certificates.inner_defect.unwrap_or(f64::INFINITY) <= 1e-7 && f.certificates.max_residual <= 1e-7;
            rep.io_partition = zi.matches(&bad, 1e-6) && outer_good && inner_ok;
            if !rep.io_partition {
                rep.failures.push(format!("inner-outer: zeros(G) {zg:?}, zeros(Gi) {zi:?}, zeros(Go) {zo:?}"));
            }
            let mut union = zi.clone();
            union.finite.extend(zo.finite.iter().copied());
            union.infinite_multiplicities.extend(zo.infinite_multiplicities.iter().copied());
            rep.io_union_literal = union.matches(&zg, 1e-6);
        }
        Err(e) => rep.failures.push(format!("inner-outer: {e}")),
    }
    rep
}
