mod common;

use std::sync::Arc;

use common::*;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ratfact::dss::*;
use ratfact::klf::{special_klf, RegionPartition};
use ratfact::numkernel::lin::{CMat, Mat};
use ratfact::numkernel::ToleranceConfig;
use ratfact::range::*;
use ratfact::verify::{frequency_grid, inner_defect, product_residual, sample_points};

fn t() -> ToleranceConfig {
    ToleranceConfig::default()
}

fn real(v: &[f64]) -> Vec<Complex64> {
    v.iter().map(|&x| c(x, 0.0)).collect()
}

fn stable(z: Complex64, ts: TimeDomain) -> bool {
    match ts {
        TimeDomain::Continuous => z.re < 0.0,
        TimeDomain::Discrete => z.norm() < 1.0,
    }
}

#[test]
fn example1_minimal_basis() {
    let g = ex1();
    let rr = range_basis(&g, &RangeOptions::minimal(), &t()).unwrap();
    assert_eq!(mcmillan_degree(&rr.r, &t()).unwrap(), 1);
    assert_eq!(zeros(&rr.r).unwrap().count(), 0);
    assert_eq!(normal_rank(&rr.r).unwrap(), 2);
    let x = cofactor(&g, &rr).unwrap();
    assert_eq!(mcmillan_degree(&x, &t()).unwrap(), 4);
    let mu = poles(&rr.r).unwrap().finite[0];
    let want = EigenvalueList { finite: vec![c(1.0, 0.0), c(2.0, 0.0), mu], infinite_multiplicities: vec![1] };
    assert!(zeros(&x).unwrap().matches(&want, 1e-6));
    let pts = sample_points(&[&g, &rr.r, &x], 16, 0).unwrap();
    assert!(product_residual(&g, &rr.r, &x, &pts).unwrap() <= 1e-8);
}

#[test]
fn example1_unstable_zero_basis() {
    let rr = range_basis(&ex1(), &RangeOptions::default(), &t()).unwrap();
    assert_eq!(mcmillan_degree(&rr.r, &t()).unwrap(), 3);
    let z = zeros(&rr.r).unwrap();
    assert!(multiset_match(&z.finite, &real(&[1.0, 2.0]), 1e-6));
    assert_eq!(z.infinite_count(), 0);
}

#[test]
fn example1_all_zeros_basis() {
    let g = ex1();
    let opts = RangeOptions { zeros: ZerosPolicy::All, ..Default::default() };
    let rr = range_basis(&g, &opts, &t()).unwrap();
    let z = zeros(&rr.r).unwrap();
    assert!(multiset_match(&z.finite, &real(&[1.0, 2.0]), 1e-6));
    let x = cofactor(&g, &rr).unwrap();
    let pts = sample_points(&[&g, &rr.r, &x], 16, 0).unwrap();
    assert!(product_residual(&g, &rr.r, &x, &pts).unwrap() <= 1e-8);
}

#[test]
fn example1_inner_basis() {
    let g = ex1();
    let rr = range_basis(&g, &RangeOptions::inner_bad(), &t()).unwrap();
    let p = poles(&rr.r).unwrap();
    assert!(multiset_match(&p.finite, &real(&[-1.0, -3f64.sqrt(), -2.0]), 1e-4));
    assert_eq!(p.infinite_count(), 0);
    let z = zeros(&rr.r).unwrap();
    assert!(multiset_match(&z.finite, &real(&[1.0, 2.0]), 1e-4));
    assert!(inner_defect(&rr.r, &frequency_grid(g.ts, 32)).unwrap() <= 1e-8);
}

#[test]
fn example2_inner_basis() {
    let g = ex2();
    let rr = range_basis(&g, &RangeOptions::minimal_inner(), &t()).unwrap();
    assert_eq!(mcmillan_degree(&rr.r, &t()).unwrap(), 1);
    let p = poles(&rr.r).unwrap();
    assert!(p.finite[0].norm() < 1e-8);
    assert!(inner_defect(&rr.r, &frequency_grid(g.ts, 32)).unwrap() <= 1e-8);
}

#[test]
fn example2_minimal_cofactor() {
    let g = ex2();
    let rr = range_basis(&g, &RangeOptions::minimal(), &t()).unwrap();
    let x = cofactor(&g, &rr).unwrap();
    assert_eq!(mcmillan_degree(&x, &t()).unwrap(), 2);
    let mu = poles(&rr.r).unwrap().finite[0];
    let z = zeros(&x).unwrap();
    assert!(multiset_match(&z.finite, &[mu, c(1.0, 0.0)], 1e-6));
}

#[test]
fn identity_is_its_own_range() {
    let g = DescriptorSystem::identity(3, TimeDomain::Continuous);
    let rr = range_basis(&g, &RangeOptions::default(), &t()).unwrap();
    assert_eq!(rr.r.order(), 0);
    assert_eq!(rr.r.d, Mat::identity(3, 3));
    assert_eq!(rr.f.len(), 0);
    assert_eq!(rr.w, Mat::identity(3, 3));
    let x = cofactor(&g, &rr).unwrap();
    assert!((x.evaluate(c(0.5, 0.5)).unwrap() - CMat::identity(3, 3)).norm() < 1e-15);
}

#[test]
fn static_inner_gain_orthonormalizes() {
    let d = mat(3, 2, &[1.0, 2.0, 0.0, 1.0, 1.0, 1.0]);
    let g = DescriptorSystem::gain(d, TimeDomain::Discrete);
    let rr = range_basis(&g, &RangeOptions::inner_bad(), &t()).unwrap();
    assert_eq!(rr.r.order(), 0);
    assert!((rr.r.d.transpose() * &rr.r.d - Mat::identity(2, 2)).norm() < 1e-13);
    let sk = special_klf(&g, &RegionPartition::stability(g.ts), &t()).unwrap();
    let gains = inner_enforcing_gains(&sk, g.ts).unwrap();
    assert_eq!(gains.f.shape(), (2, 0));
    let dw = &sk.d_bl * &gains.w;
    assert!((dw.transpose() * dw - Mat::identity(2, 2)).norm() < 1e-13);
}

#[test]
fn stabilized_basis_moves_poles() {
    let g = ex1();
    let opts = RangeOptions { zeros: ZerosPolicy::Bad, stabilize: true, ..Default::default() };
    let rr = range_basis(&g, &opts, &t()).unwrap();
    assert!(poles(&rr.r).unwrap().finite.iter().all(|&z| z.re < 0.0));
    let x = cofactor(&g, &rr).unwrap();
    let pts = sample_points(&[&g, &rr.r, &x], 16, 0).unwrap();
    assert!(product_residual(&g, &rr.r, &x, &pts).unwrap() <= 1e-8);
}

#[test]
fn stabilization_to_custom_region() {
    // Unstable minimal basis of [1/(s-1); 1] moved left of -0.5.
    let one = |x: f64| Mat::from_element(1, 1, x);
    let g = DescriptorSystem::new(
        one(1.0),
        None,
        one(1.0),
        mat(2, 1, &[1.0, 0.0]),
        mat(2, 1, &[0.0, 1.0]),
        TimeDomain::Continuous,
    )
    .unwrap();
    let target = RegionPartition::custom(TimeDomain::Continuous, Arc::new(|z: Complex64| z.re > -0.5), false).unwrap();
    let opts = RangeOptions { zeros: ZerosPolicy::None, stabilize: true, target: Some(target), ..Default::default() };
    let rr = range_basis(&g, &opts, &t()).unwrap();
    assert!(poles(&rr.r).unwrap().finite.iter().all(|&z| z.re <= -0.5));
}

#[test]
fn cofactor_rejects_foreign_result() {
    let rr = range_basis(&ex1(), &RangeOptions::default(), &t()).unwrap();
    assert!(matches!(cofactor(&ex2(), &rr), Err(ratfact::Error::Input(_))));
}

#[test]
fn boundary_zero_with_offset_is_an_error() {
    // s / (s + 1) has its zero on the imaginary axis.
    let one = |x: f64| Mat::from_element(1, 1, x);
    let g = DescriptorSystem::new(one(-1.0), None, one(1.0), one(-1.0), one(1.0), TimeDomain::Continuous).unwrap();
    let tol = ToleranceConfig { boundary_offset: 1e-6, ..t() };
    let err = range_basis(&g, &RangeOptions::inner_bad(), &tol).unwrap_err();
    assert!(err.is_factorization());
}

fn all_options() -> Vec<RangeOptions> {
    let mut out = Vec::new();
    for zeros in [ZerosPolicy::None, ZerosPolicy::Bad, ZerosPolicy::All] {
        out.push(RangeOptions { zeros: zeros.clone(), ..Default::default() });
        out.push(RangeOptions { zeros: zeros.clone(), stabilize: true, ..Default::default() });
        if !matches!(zeros, ZerosPolicy::All) {
            out.push(RangeOptions { zeros, stabilize: true, inner: true, ..Default::default() });
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn range_and_cofactor_properties(seed in 0u64..100_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_case(&mut rng);
        let r = normal_rank(&g).unwrap();
        for opts in all_options() {
            let rr = match range_basis(&g, &opts, &t()) {
                Ok(rr) => rr,
                Err(e) => {
                    // Zeros on the boundary make the inner basis fail; everything else must succeed.
                    prop_assert!(opts.inner && e.is_factorization(), "{:?}: {}", opts, e);
                    continue;
                }
            };
            prop_assert_eq!(rr.rank(), r);
            prop_assert_eq!(normal_rank(&rr.r).unwrap(), r);
            prop_assert_eq!(normal_rank(&rr.r.stack_horizontal(&g).unwrap()).unwrap(), r);
            let p = poles(&rr.r).unwrap();
            prop_assert_eq!(p.infinite_count(), 0, "basis must be proper");
            if opts.stabilize {
                prop_assert!(p.finite.iter().all(|&z| stable(z, g.ts)), "{:?}", p);
            }
            if opts.inner {
                prop_assert!(inner_defect(&rr.r, &frequency_grid(g.ts, 32)).unwrap() <= 1e-8);
            }
            let x = cofactor(&g, &rr).unwrap();
            let pts = sample_points(&[&g, &rr.r, &x], 16, seed).unwrap();
            let res = product_residual(&g, &rr.r, &x, &pts).unwrap();
            prop_assert!(res <= 1e-8, "{:?}: residual {:e}", opts, res);
        }
    }
}
