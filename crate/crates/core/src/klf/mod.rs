//! Kronecker-like staircase forms of matrix pencils.

mod region;
mod special;

pub use region::{classify_eigenvalue, BadRegion, EigenClass, RegionPartition, RegionPredicate};
pub use special::{special_klf, SklfChecks, SpecialKlf, SpecialKlfDims};

use crate::error::{Error, Result};
use crate::numkernel::lin::{col_compress_right, flip, row_compress, Mat};
use crate::numkernel::{ordered_generalized_schur, GenEig, ToleranceConfig};

/// Kronecker indices and regular-part sizes of a pencil.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct KlfStructure {
    /// Column minimal indices `eps`; each block is `eps x (eps + 1)`.
    pub right_indices: Vec<usize>,
    /// Sizes of the infinite Jordan blocks.
    pub infinite_sizes: Vec<usize>,
    /// Order of the finite regular part.
    pub finite: usize,
    /// Row minimal indices `eta`; each block is `(eta + 1) x eta`.
    pub left_indices: Vec<usize>,
}

impl KlfStructure {
    pub fn right_dims(&self) -> (usize, usize) {
        let r: usize = self.right_indices.iter().sum();
        (r, r + self.right_indices.len())
    }

    pub fn left_dims(&self) -> (usize, usize) {
        let c: usize = self.left_indices.iter().sum();
        (c + self.left_indices.len(), c)
    }

    pub fn infinite_order(&self) -> usize {
        self.infinite_sizes.iter().sum()
    }

    pub fn is_regular(&self) -> bool {
        self.right_indices.is_empty() && self.left_indices.is_empty()
    }
}

/// Where the infinite part sits relative to the finite part.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InfinitePlacement {
    /// `[right, infinite | finite | left]`.
    First,
    /// `[right | finite | infinite, left]`.
    Last,
}

/// `Q^T (A - lambda E) Z = M - lambda N` in block upper triangular staircase form.
#[derive(Debug, Clone)]
pub struct KlfResult {
    pub m: Mat,
    pub n: Mat,
    pub q: Mat,
    pub z: Mat,
    pub structure: KlfStructure,
    pub placement: InfinitePlacement,
    /// Eigenvalues of the finite block in diagonal order.
    pub finite_eigenvalues: Vec<GenEig>,
    /// Leading finite eigenvalues that satisfied the selection predicate.
    pub n_selected: usize,
}

impl KlfResult {
    /// Row and column offset of the finite block.
    pub fn finite_offset(&self) -> (usize, usize) {
        let (rr, rc) = self.structure.right_dims();
        match self.placement {
            InfinitePlacement::First => {
                let ni = self.structure.infinite_order();
                (rr + ni, rc + ni)
            }
            InfinitePlacement::Last => (rr, rc),
        }
    }
}

/// Staircase form separating right, infinite, finite and left structure.
pub fn kronecker_like_form(a: &Mat, e: &Mat, tol: &ToleranceConfig) -> Result<KlfResult> {
    reduce(a, e, InfinitePlacement::First, &|_: &GenEig| false, tol, 0.0)
}

/// Staircase form with the finite block ordered so that `select`ed eigenvalues lead.
pub fn kronecker_like_form_ordered<F>(
    a: &Mat,
    e: &Mat,
    placement: InfinitePlacement,
    select: &F,
    tol: &ToleranceConfig,
) -> Result<KlfResult>
where
    F: Fn(&GenEig) -> bool,
{
    reduce(a, e, placement, select, tol, 0.0)
}

/// As [`kronecker_like_form_ordered`], with rank decisions made relative to at least `scale`.
pub(crate) fn kronecker_like_form_scaled<F>(
    a: &Mat,
    e: &Mat,
    placement: InfinitePlacement,
    select: &F,
    tol: &ToleranceConfig,
    scale: f64,
) -> Result<KlfResult>
where
    F: Fn(&GenEig) -> bool,
{
    reduce(a, e, placement, select, tol, scale)
}

struct Pencil {
    m: Mat,
    n: Mat,
    q: Mat,
    z: Mat,
}

impl Pencil {
    fn new(a: &Mat, e: &Mat) -> Self {
        let (r, c) = a.shape();
        Self { m: a.clone(), n: e.clone(), q: Mat::identity(r, r), z: Mat::identity(c, c) }
    }

    /// Rows `r0..r0+k` become `U^T` times themselves.
    fn left(&mut self, r0: usize, u: &Mat) {
        let k = u.nrows();
        if k == 0 {
            return;
        }
        let ut = u.transpose();
        let m = &ut * self.m.rows(r0, k);
        self.m.rows_mut(r0, k).copy_from(&m);
        let n = &ut * self.n.rows(r0, k);
        self.n.rows_mut(r0, k).copy_from(&n);
        let q = self.q.columns(r0, k) * u;
        self.q.columns_mut(r0, k).copy_from(&q);
    }

    /// Columns `c0..c0+k` become themselves times `V`.
    fn right(&mut self, c0: usize, v: &Mat) {
        let k = v.nrows();
        if k == 0 {
            return;
        }
        let m = self.m.columns(c0, k) * v;
        self.m.columns_mut(c0, k).copy_from(&m);
        let n = self.n.columns(c0, k) * v;
        self.n.columns_mut(c0, k).copy_from(&n);
        let z = self.z.columns(c0, k) * v;
        self.z.columns_mut(c0, k).copy_from(&z);
    }

    fn zero(&mut self, r0: usize, c0: usize, nr: usize, nc: usize) {
        self.m.view_mut((r0, c0), (nr, nc)).fill(0.0);
        self.n.view_mut((r0, c0), (nr, nc)).fill(0.0);
    }
}

/// Extracts right and infinite structure from the sub-pencil `[r0, r1) x [c0, c1)` into its
/// leading corner. Returns the `(rho, tau)` staircase widths.
fn right_pass(p: &mut Pencil, r0: usize, r1: usize, c0: usize, c1: usize, thr: f64) -> Vec<(usize, usize)> {
    let mut steps = Vec::new();
    let (mut r, mut c) = (r0, c0);
    while c < c1 {
        let nsub = p.n.view((r, c), (r1 - r, c1 - c)).into_owned();
        let (zk, rank_n) = col_compress_right(&nsub, thr);
        let tau = (c1 - c) - rank_n;
        if tau == 0 {
            break;
        }
        p.right(c, &zk);
        p.n.view_mut((r, c), (r1 - r, tau)).fill(0.0);
        let msub = p.m.view((r, c), (r1 - r, tau)).into_owned();
        let (uk, rho) = row_compress(&msub, thr);
        p.left(r, &uk);
        p.n.view_mut((r, c), (r1 - r, tau)).fill(0.0);
        p.m.view_mut((r + rho, c), (r1 - r - rho, tau)).fill(0.0);
        steps.push((rho, tau));
        r += rho;
        c += tau;
        if rho == 0 {
            break;
        }
    }
    steps
}

/// Extracts left and infinite structure from the sub-pencil into its trailing corner.
/// Returns the staircase widths of the transposed problem.
fn left_pass(p: &mut Pencil, r0: usize, r1: usize, c0: usize, c1: usize, thr: f64) -> Vec<(usize, usize)> {
    let (nr, nc) = (r1 - r0, c1 - c0);
    let mt = p.m.view((r0, c0), (nr, nc)).transpose();
    let nt = p.n.view((r0, c0), (nr, nc)).transpose();
    let mut t = Pencil::new(&mt, &nt);
    let steps = right_pass(&mut t, 0, nc, 0, nr, thr);
    let qs = &t.z * flip(nr);
    let zs = &t.q * flip(nc);
    p.left(r0, &qs);
    p.right(c0, &zs);
    let taus: usize = steps.iter().map(|s| s.1).sum();
    let rhos: usize = steps.iter().map(|s| s.0).sum();
    p.zero(r1 - taus, c0, taus, nc - rhos);
    steps
}

/// Kronecker indices and infinite block sizes from staircase widths.
fn decode(steps: &[(usize, usize)]) -> (Vec<usize>, Vec<usize>) {
    let mut singular = Vec::new();
    let mut infinite = Vec::new();
    for (i, &(rho, tau)) in steps.iter().enumerate() {
        let next_tau = steps.get(i + 1).map_or(0, |s| s.1);
        singular.extend(std::iter::repeat_n(i, tau.saturating_sub(rho)));
        infinite.extend(std::iter::repeat_n(i + 1, rho.saturating_sub(next_tau)));
    }
    (singular, infinite)
}

fn sums(steps: &[(usize, usize)]) -> (usize, usize) {
    steps.iter().fold((0, 0), |(a, b), s| (a + s.0, b + s.1))
}

fn reduce<F>(
    a: &Mat,
    e: &Mat,
    placement: InfinitePlacement,
    select: &F,
    tol: &ToleranceConfig,
    scale: f64,
) -> Result<KlfResult>
where
    F: Fn(&GenEig) -> bool,
{
    if a.shape() != e.shape() {
        return Err(Error::Input(format!("pencil matrices differ in shape: {:?} vs {:?}", a.shape(), e.shape())));
    }
    if a.iter().chain(e.iter()).any(|x| !x.is_finite()) {
        return Err(Error::Input("pencil has non-finite entries".into()));
    }
    let (rows, cols) = a.shape();
    let norm = a.norm().hypot(e.norm()).max(scale);
    let thr = tol.structural(rows, cols, norm);
    let mut p = Pencil::new(a, e);
    let mut st = KlfStructure::default();
    let (f_r0, f_c0, f_r1, f_c1);
    match placement {
        InfinitePlacement::First => {
            let s1 = right_pass(&mut p, 0, rows, 0, cols, thr);
            let (right, inf) = decode(&s1);
            let (rr, rc) = sums(&s1);
            let s2 = left_pass(&mut p, rr, rows, rc, cols, thr);
            let (left, inf2) = decode(&s2);
            if !inf2.is_empty() {
                return Err(Error::Numerical("staircase left residual infinite structure".into()));
            }
            let (lr, lc) = sums(&s2);
            st.right_indices = right;
            st.infinite_sizes = inf;
            st.left_indices = left;
            (f_r0, f_c0, f_r1, f_c1) = (rr, rc, rows - lc, cols - lr);
        }
        InfinitePlacement::Last => {
            let s1 = right_pass(&mut p, 0, rows, 0, cols, thr);
            let (right, inf) = decode(&s1);
            let (r1, c1) = sums(&s1);
            let s2 = left_pass(&mut p, r1, rows, c1, cols, thr);
            let (left, inf2) = decode(&s2);
            if !inf2.is_empty() {
                return Err(Error::Numerical("staircase left residual infinite structure".into()));
            }
            let (lr, lc) = sums(&s2);
            st.right_indices = right;
            st.left_indices = left;
            let (rr, rc) = st.right_dims();
            let ni: usize = inf.iter().sum();
            if ni > 0 {
                // Move the infinite part behind the right part, then behind the finite part.
                let s3 = left_pass(&mut p, 0, r1, 0, c1, thr);
                let (sing, inf3) = decode(&s3);
                if !sing.is_empty() || inf3.iter().sum::<usize>() != ni {
                    return Err(Error::Numerical("staircase failed to separate infinite structure".into()));
                }
                let s4 = left_pass(&mut p, rr, rows - lc, rc, cols - lr, thr);
                let (sing, inf4) = decode(&s4);
                if !sing.is_empty() || inf4.iter().sum::<usize>() != ni {
                    return Err(Error::Numerical("staircase failed to separate infinite structure".into()));
                }
            }
            st.infinite_sizes = inf;
            (f_r0, f_c0, f_r1, f_c1) = (rr, rc, rows - lc - ni, cols - lr - ni);
        }
    }
    let nf = f_r1.saturating_sub(f_r0);
    if f_c1 - f_c0 != nf {
        return Err(Error::Numerical(format!("staircase produced a non-square regular part {}x{}", nf, f_c1 - f_c0)));
    }
    st.finite = nf;
    let mut finite_eigenvalues = Vec::new();
    let mut n_selected = 0;
    if nf > 0 {
        let mf = p.m.view((f_r0, f_c0), (nf, nf)).into_owned();
        let ef = p.n.view((f_r0, f_c0), (nf, nf)).into_owned();
        let sch = ordered_generalized_schur(&mf, &ef, select)?;
        p.left(f_r0, &sch.q);
        p.right(f_c0, &sch.z);
        p.m.view_mut((f_r0, f_c0), (nf, nf)).copy_from(&sch.s);
        p.n.view_mut((f_r0, f_c0), (nf, nf)).copy_from(&sch.t);
        finite_eigenvalues = sch.eigenvalues;
        n_selected = sch.n_selected;
    }
    Ok(KlfResult { m: p.m, n: p.n, q: p.q, z: p.z, structure: st, placement, finite_eigenvalues, n_selected })
}
