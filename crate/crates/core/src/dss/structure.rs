//! Poles, zeros, normal rank and McMillan degree.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{irreducible_realization, DescriptorSystem};
use crate::error::{Error, Result};
use crate::klf::kronecker_like_form;
use crate::numkernel::lin::{blocks, complex_singular_values, to_complex, Mat};
use crate::numkernel::{generalized_eigenvalues, generalized_eigenvalues_with, ToleranceConfig, EPS};

/// Finite values with multiplicity plus infinite multiplicities, one per block.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EigenvalueList {
    pub finite: Vec<Complex64>,
    pub infinite_multiplicities: Vec<usize>,
}

impl EigenvalueList {
    pub fn infinite_count(&self) -> usize {
        self.infinite_multiplicities.iter().sum()
    }

    pub fn count(&self) -> usize {
        self.finite.len() + self.infinite_count()
    }

    /// Same finite multiset within `tol` and the same number of infinite values.
    pub fn matches(&self, other: &EigenvalueList, tol: f64) -> bool {
        self.infinite_count() == other.infinite_count() && multiset_match(&self.finite, &other.finite, tol)
    }

    /// Sorted by real part then imaginary part.
    pub fn sorted(mut self) -> Self {
        self.finite.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        self
    }
}

/// Multiset equality of complex lists, each pair within `tol * max(1, |b|)`.
pub fn multiset_match(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut used = vec![false; b.len()];
    let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(a.len() * b.len());
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            pairs.push(((x - y).norm() / y.norm().max(1.0), i, j));
        }
    }
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
    let mut done = vec![false; a.len()];
    let mut matched = 0;
    for (d, i, j) in pairs {
        if d > tol {
            break;
        }
        if !done[i] && !used[j] {
            done[i] = true;
            used[j] = true;
            matched += 1;
        }
    }
    matched == a.len()
}

fn finite_values(ev: &[crate::numkernel::GenEig]) -> Vec<Complex64> {
    ev.iter().filter_map(|g| g.value()).collect()
}

/// Poles of the transfer function matrix.
pub fn poles(sys: &DescriptorSystem) -> Result<EigenvalueList> {
    poles_with(sys, &ToleranceConfig::default())
}

pub fn poles_with(sys: &DescriptorSystem, tol: &ToleranceConfig) -> Result<EigenvalueList> {
    let min = irreducible_realization(sys, tol)?;
    if min.order() == 0 {
        return Ok(EigenvalueList::default());
    }
    if min.e.is_none() {
        let ev = generalized_eigenvalues(&min.a, &min.e_mat())?;
        return Ok(EigenvalueList { finite: finite_values(&ev), infinite_multiplicities: vec![] }.sorted());
    }
    let k = kronecker_like_form(&min.a, &min.e_mat(), tol)?;
    Ok(EigenvalueList {
        finite: finite_values(&k.finite_eigenvalues),
        infinite_multiplicities: decremented(&k.structure.infinite_sizes),
    }
    .sorted())
}

fn decremented(sizes: &[usize]) -> Vec<usize> {
    sizes.iter().filter(|&&s| s > 1).map(|s| s - 1).collect()
}

/// Zeros of the transfer function matrix.
pub fn zeros(sys: &DescriptorSystem) -> Result<EigenvalueList> {
    zeros_with(sys, &ToleranceConfig::default())
}

pub fn zeros_with(sys: &DescriptorSystem, tol: &ToleranceConfig) -> Result<EigenvalueList> {
    let min = irreducible_realization(sys, tol)?;
    let (n, m, p) = (min.order(), min.inputs(), min.outputs());
    let a = blocks(&[&[&min.a, &min.b], &[&min.c, &min.d]]);
    let e = blocks(&[&[&min.e_mat(), &Mat::zeros(n, m)], &[&Mat::zeros(p, n), &Mat::zeros(p, m)]]);
    let k = kronecker_like_form(&a, &e, tol)?;
    Ok(EigenvalueList {
        finite: finite_values(&k.finite_eigenvalues),
        infinite_multiplicities: decremented(&k.structure.infinite_sizes),
    }
    .sorted())
}

/// Number of poles, finite and infinite, counted with multiplicity.
pub fn mcmillan_degree(sys: &DescriptorSystem, tol: &ToleranceConfig) -> Result<usize> {
    Ok(poles_with(sys, tol)?.count())
}

pub fn normal_rank(sys: &DescriptorSystem) -> Result<usize> {
    normal_rank_with(sys, &ToleranceConfig::default())
}

/// Rank over the rational functions from the system pencil at random points.
pub fn normal_rank_with(sys: &DescriptorSystem, tol: &ToleranceConfig) -> Result<usize> {
    tol.validate()?;
    let n = sys.order();
    let (m, p) = (sys.inputs(), sys.outputs());
    if m == 0 || p == 0 {
        return Ok(0);
    }
    let ev = if n > 0 { finite_values(&generalized_eigenvalues_with(&sys.a, &sys.e_mat(), tol)?) } else { vec![] };
    let radius = ev.iter().fold(0.0f64, |r, z| r.max(z.norm()));
    let margin = 1e-3 * radius.max(1.0);
    let scale = 1.0 + radius;
    let a = to_complex(&blocks(&[&[&sys.a, &sys.b], &[&sys.c, &sys.d]]));
    let e = to_complex(&blocks(&[&[&sys.e_mat(), &Mat::zeros(n, m)], &[&Mat::zeros(p, n), &Mat::zeros(p, m)]]));
    let mut rng = ChaCha8Rng::seed_from_u64(tol.seed ^ 0x6e72_616e_6b00);
    let sample = |rng: &mut ChaCha8Rng| -> usize {
        let lam = loop {
            let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * scale;
            if ev.iter().all(|v| (v - z).norm() > margin) {
                break z;
            }
        };
        let s = &a - &e * lam;
        let sv = complex_singular_values(&s);
        let smax = sv.first().copied().unwrap_or(0.0);
        let thr = if tol.rank_rtol > 0.0 { tol.rank_rtol * smax } else { 1e3 * (n + p).max(n + m) as f64 * EPS * smax };
        sv.iter().filter(|&&x| x > thr).count().saturating_sub(n)
    };
    for _ in 0..5 {
        let r1 = sample(&mut rng);
        let r2 = sample(&mut rng);
        if r1 == r2 {
            return Ok(r1);
        }
    }
    Err(Error::Numerical("normal rank estimates disagree at random points".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dss::TimeDomain;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn matching() {
        assert!(multiset_match(&[c(1.0, 0.0), c(2.0, 0.0)], &[c(2.0, 1e-9), c(1.0, 0.0)], 1e-6));
        assert!(!multiset_match(&[c(1.0, 0.0), c(1.0, 0.0)], &[c(1.0, 0.0), c(2.0, 0.0)], 1e-6));
    }

    #[test]
    fn static_gain() {
        let g = DescriptorSystem::gain(Mat::identity(3, 3), TimeDomain::Continuous);
        assert_eq!(normal_rank(&g).unwrap(), 3);
        assert_eq!(poles(&g).unwrap().count(), 0);
        assert_eq!(zeros(&g).unwrap().count(), 0);
        assert_eq!(mcmillan_degree(&g, &ToleranceConfig::default()).unwrap(), 0);
    }

    #[test]
    fn lag_with_zero() {
        // (s - 1) / (s + 2) = 1 - 3 / (s + 2)
        let one = |x: f64| Mat::from_element(1, 1, x);
        let g = DescriptorSystem::new(one(-2.0), None, one(1.0), one(-3.0), one(1.0), TimeDomain::Continuous).unwrap();
        let p = poles(&g).unwrap();
        let z = zeros(&g).unwrap();
        assert!(multiset_match(&p.finite, &[c(-2.0, 0.0)], 1e-10));
        assert!(multiset_match(&z.finite, &[c(1.0, 0.0)], 1e-10));
        assert_eq!(z.infinite_count(), 0);
    }

    #[test]
    fn polynomial_first_order() {
        // G(s) = s has one infinite pole and a zero at 0.
        let e = Mat::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        let g = DescriptorSystem::new(
            Mat::identity(2, 2),
            Some(e),
            Mat::from_row_slice(2, 1, &[0.0, 1.0]),
            Mat::from_row_slice(1, 2, &[-1.0, 0.0]),
            Mat::zeros(1, 1),
            TimeDomain::Continuous,
        )
        .unwrap();
        let v = g.evaluate(c(2.0, 0.0)).unwrap();
        assert!((v[(0, 0)] - c(2.0, 0.0)).norm() < 1e-14);
        let p = poles(&g).unwrap();
        assert_eq!(p.finite.len(), 0);
        assert_eq!(p.infinite_multiplicities, vec![1]);
        let z = zeros(&g).unwrap();
        assert!(multiset_match(&z.finite, &[c(0.0, 0.0)], 1e-10));
    }
}
