mod common;

use common::*;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ratfact::dss::*;
use ratfact::fact::*;
use ratfact::numkernel::lin::{to_complex, CMat, Mat};
use ratfact::numkernel::ToleranceConfig;
use ratfact::range::RangeOptions;
use ratfact::verify::{frequency_grid, inner_defect, moore_penrose_defect, sample_points};

fn t() -> ToleranceConfig {
    ToleranceConfig::default()
}

fn real(v: &[f64]) -> Vec<Complex64> {
    v.iter().map(|&x| c(x, 0.0)).collect()
}

fn one(x: f64) -> Mat {
    Mat::from_element(1, 1, x)
}

#[test]
fn example1_factorizations() {
    let g = ex1();
    let f = full_rank_factorize(&g, &RangeOptions::minimal(), &t()).unwrap();
    assert_eq!((f.certificates.left.mcmillan_degree, f.certificates.right.mcmillan_degree), (1, 4));
    assert!(f.certificates.max_residual <= 1e-8);
    assert_eq!(f.certificates.rank, 2);
    assert_eq!(f.certificates.left.normal_rank, 2);
    assert_eq!(f.certificates.right.normal_rank, 2);
    let f = full_rank_factorize(&g, &RangeOptions::default(), &t()).unwrap();
    assert_eq!((f.certificates.left.mcmillan_degree, f.certificates.right.mcmillan_degree), (3, 3));
    assert!(f.certificates.max_residual <= 1e-8);
}

#[test]
fn rank_one_constant() {
    let d = mat(2, 1, &[1.0, 2.0]) * mat(1, 2, &[3.0, 4.0]);
    let g = DescriptorSystem::gain(d.clone(), TimeDomain::Continuous);
    let f = full_rank_factorize(&g, &RangeOptions::default(), &t()).unwrap();
    assert_eq!(f.left.d.shape(), (2, 1));
    assert_eq!(f.right.d.shape(), (1, 2));
    let svd = d.clone().svd(true, false);
    let u1 = svd.u.unwrap().column(0).into_owned();
    let l = f.left.d.column(0).into_owned();
    assert!((l.normalize().dot(&u1)).abs() > 1.0 - 1e-12);
    assert!((&f.left.d * &f.right.d - d).norm() < 1e-13);
}

#[test]
fn zero_system_has_empty_factors() {
    let g = DescriptorSystem::gain(Mat::zeros(2, 3), TimeDomain::Continuous);
    let f = full_rank_factorize(&g, &RangeOptions::default(), &t()).unwrap();
    assert_eq!(f.certificates.rank, 0);
    assert_eq!((f.left.outputs(), f.left.inputs()), (2, 0));
    assert_eq!((f.right.outputs(), f.right.inputs()), (0, 3));
}

#[test]
fn dual_of_identity() {
    let g = DescriptorSystem::identity(2, TimeDomain::Discrete);
    let f = dual_full_rank_factorize(&g, &RangeOptions::default(), &t()).unwrap();
    let z = c(0.3, 0.4);
    assert!((f.left.evaluate(z).unwrap() - CMat::identity(2, 2)).norm() < 1e-14);
    assert!((f.right.evaluate(z).unwrap() - CMat::identity(2, 2)).norm() < 1e-14);
}

#[test]
fn dual_is_transposed_primal() {
    for g in [ex1(), ex2()] {
        let d = dual_full_rank_factorize(&g, &RangeOptions::minimal(), &t()).unwrap();
        let p = full_rank_factorize(&g.transpose(), &RangeOptions::minimal(), &t()).unwrap();
        let pts = probe_points();
        assert!(max_rel_diff(&d.left, &p.right.transpose(), &pts) < 1e-10);
        assert!(max_rel_diff(&d.right, &p.left.transpose(), &pts) < 1e-10);
        assert_eq!(d.right.outputs(), 2);
        assert_eq!(normal_rank(&d.right).unwrap(), 2);
        assert!(d.certificates.max_residual <= 1e-8);
    }
}

#[test]
fn nrcf_of_unstable_lag() {
    let g = DescriptorSystem::new(one(1.0), None, one(1.0), one(1.0), one(0.0), TimeDomain::Continuous).unwrap();
    let f = nrcf(&g, &t()).unwrap();
    assert!(f.inner_defect <= 1e-8);
    let s = c(2.0, 0.0);
    let ratio = f.n.evaluate(s).unwrap()[(0, 0)] / f.m.evaluate(s).unwrap()[(0, 0)];
    assert!((ratio - c(1.0, 0.0)).norm() < 1e-12);
    for sys in [&f.n, &f.m] {
        assert!(poles(sys).unwrap().finite.iter().all(|z| z.re < 0.0));
    }
}

#[test]
fn nrcf_of_zero() {
    let g = DescriptorSystem::gain(Mat::zeros(1, 1), TimeDomain::Continuous);
    let f = nrcf(&g, &t()).unwrap();
    let s = c(0.7, 0.1);
    assert!(f.n.evaluate(s).unwrap()[(0, 0)].norm() < 1e-15);
    assert!((f.m.evaluate(s).unwrap()[(0, 0)].norm() - 1.0).abs() < 1e-14);
}

#[test]
fn nrcf_of_small_stable_system() {
    let g = DescriptorSystem::new(
        mat(2, 2, &[-1.0, 0.3, 0.0, -2.0]),
        None,
        mat(2, 1, &[0.1, 0.05]),
        mat(1, 2, &[0.2, 0.1]),
        one(0.01),
        TimeDomain::Continuous,
    )
    .unwrap();
    let f = nrcf(&g, &t()).unwrap();
    assert!(f.inner_defect <= 1e-8);
    assert!(f.max_residual <= 1e-8);
    let m0 = f.m.evaluate(c(0.0, 0.0)).unwrap()[(0, 0)];
    assert!(m0.norm() > 0.9);
}

#[test]
fn nrcf_factors_are_coprime() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let g = random_case(&mut rng);
        let f = nrcf(&g, &t()).unwrap();
        let stacked = f.n.stack_vertical(&f.m).unwrap();
        let m = g.inputs();
        for _ in 0..10 {
            let z = match g.ts {
                TimeDomain::Continuous => c(rng.gen_range(0.05..3.0), rng.gen_range(-3.0..3.0)),
                TimeDomain::Discrete => {
                    Complex64::from_polar(rng.gen_range(1.05..3.0), rng.gen_range(0.0..std::f64::consts::TAU))
                }
            };
            let Ok(v) = stacked.evaluate(z) else { continue };
            let sv = v.singular_values();
            let smax = sv.max();
            assert_eq!(sv.iter().filter(|&&s| s > 1e-9 * smax.max(1.0)).count(), m);
        }
    }
}

#[test]
fn pseudo_inverse_of_invertible_system() {
    let g = ex2().output_rows(0, 2).input_columns(0, 2);
    let p = pseudo_inverse(&g, &t()).unwrap();
    let gi = g.inverse().unwrap();
    let pts = sample_points(&[&g, &gi, &p.ginv], 10, 0).unwrap();
    assert!(max_rel_diff(&p.ginv, &gi, &pts) < 1e-7);
    assert!(p.max_defect <= 1e-7);
}

#[test]
fn pseudo_inverse_of_constant() {
    let d = mat(3, 2, &[1.0, 2.0, 2.0, 4.0, 0.0, 0.0]);
    let g = DescriptorSystem::gain(d.clone(), TimeDomain::Continuous);
    let p = pseudo_inverse(&g, &t()).unwrap();
    let want = d.pseudo_inverse(1e-12).unwrap();
    let got = p.ginv.evaluate(c(0.3, 0.0)).unwrap();
    assert!((got - to_complex(&want)).norm() < 1e-12);
}

#[test]
fn pseudo_inverse_example1() {
    let g = ex1();
    let p = pseudo_inverse(&g, &t()).unwrap();
    assert!(p.max_defect <= 1e-7);
    assert!(p.ginv.order() <= p.order_before_reduction);
    let grid = frequency_grid(g.ts, 32);
    assert!(moore_penrose_defect(&g, &p.ginv, &grid).unwrap() <= 1e-7);
}

#[test]
fn pseudo_inverse_is_left_inverse_for_full_column_rank() {
    let g = DescriptorSystem::new(
        mat(2, 2, &[-1.0, 0.0, 1.0, -3.0]),
        None,
        mat(2, 2, &[1.0, 0.0, 0.5, 1.0]),
        mat(3, 2, &[1.0, 0.0, 0.0, 1.0, 1.0, 1.0]),
        mat(3, 2, &[1.0, 0.0, 0.0, 0.0, 0.0, 1.0]),
        TimeDomain::Continuous,
    )
    .unwrap();
    assert_eq!(normal_rank(&g).unwrap(), 2);
    let p = pseudo_inverse(&g, &t()).unwrap();
    for z in frequency_grid(g.ts, 32) {
        let v = p.ginv.evaluate(z).unwrap() * g.evaluate(z).unwrap();
        assert!((v - CMat::identity(2, 2)).norm() < 1e-7);
    }
}

#[test]
fn inner_outer_example1() {
    let g = ex1();
    let f = inner_outer(&g, &t()).unwrap();
    let (gi, go) = (&f.certificates.left, &f.certificates.right);
    assert!(multiset_match(&gi.poles.finite, &real(&[-1.0, -3f64.sqrt(), -2.0]), 1e-4));
    assert!(multiset_match(&gi.zeros.finite, &real(&[1.0, 2.0]), 1e-4));
    assert!(go.zeros.finite.iter().all(|z| z.re < 0.0));
    assert!(f.certificates.inner_defect.unwrap() <= 1e-8);
    assert!(f.certificates.max_residual <= 1e-8);
}

#[test]
fn inner_outer_example2() {
    let g = ex2();
    let f = inner_outer(&g, &t()).unwrap();
    let go = &f.certificates.right;
    assert_eq!(go.mcmillan_degree, 2);
    assert!(multiset_match(&go.zeros.finite, &real(&[0.0, 1.0]), 1e-6));
    assert_eq!(go.zeros.infinite_count(), 0);
    assert_eq!(f.certificates.left.mcmillan_degree, 1);
    assert!(f.certificates.inner_defect.unwrap() <= 1e-8);
}

#[test]
fn inner_outer_of_inner_system() {
    let inner = inner_outer(&ex2(), &t()).unwrap().left;
    let f = inner_outer(&inner, &t()).unwrap();
    assert_eq!(f.certificates.right.mcmillan_degree, 0);
    let q = f.right.evaluate(c(0.3, 0.2)).unwrap();
    assert!((q.adjoint() * &q - CMat::identity(2, 2)).norm() < 1e-8);
    let pts = sample_points(&[&inner, &f.left], 10, 0).unwrap();
    assert!(max_rel_diff(&f.left.series(&f.right).unwrap(), &inner, &pts) < 1e-8);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn factorization_properties(seed in 0u64..100_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_case(&mut rng);
        let rep = check_case(&g, &RangeOptions::default());
        prop_assert!(rep.failures.is_empty(), "{:?}", rep.failures);
        prop_assert!(rep.frf_residual <= 1e-8);
        prop_assert!(rep.rank_compatible);
        if let Some(d) = rep.nrcf_defect {
            prop_assert!(d <= 1e-7);
        }
        prop_assert!(rep.pinv_defect <= 1e-6);
        prop_assert!(rep.io_partition);
    }

    #[test]
    fn dual_factorization_residual(seed in 0u64..100_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_case(&mut rng);
        let f = dual_full_rank_factorize(&g, &RangeOptions::minimal(), &t()).unwrap();
        prop_assert!(f.certificates.max_residual <= 1e-8);
        prop_assert_eq!(f.certificates.right.normal_rank, f.certificates.rank);
        let inner = dual_full_rank_factorize(&g, &RangeOptions::minimal_inner(), &t()).unwrap();
        prop_assert!(inner.certificates.max_residual <= 1e-8);
        let co = inner.right.transpose();
        prop_assert!(inner_defect(&co, &frequency_grid(g.ts, 32)).unwrap() <= 1e-8);
    }
}
