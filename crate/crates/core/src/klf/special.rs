use std::cell::RefCell;

use num_complex::Complex64;

use super::{kronecker_like_form_scaled, InfinitePlacement, RegionPartition};
use crate::dss::DescriptorSystem;
use crate::error::{Error, Result};
use crate::numkernel::lin::{
    block, blocks, col_compress_left, col_compress_right, complex_singular_values, hstack, row_compress, to_complex,
    Mat,
};
use crate::numkernel::{generalized_eigenvalues_with, svd, GenEig, ToleranceConfig, EPS};

/// Block sizes of the special form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SpecialKlfDims {
    pub n: usize,
    pub m: usize,
    pub p: usize,
    /// Rows of `A_rg - lambda E_rg`.
    pub n_rg: usize,
    /// Columns of `A_rg - lambda E_rg`.
    pub n_c: usize,
    pub n_bl: usize,
    /// Normal rank.
    pub r: usize,
    /// Order of `B_n`.
    pub m_n: usize,
}

/// Numerical certificates gathered while building the form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SklfChecks {
    pub orthogonality_u: f64,
    pub orthogonality_z: f64,
    /// Largest entry of the structurally zero blocks, relative to the input norm.
    pub zero_blocks: f64,
    pub cond_e_bl: f64,
    pub cond_b_n: f64,
}

/// `diag(U, I) [A - lambda E, B; C, D] Z` with block rows `[n_rg | n_bl | m_n | p]` and block
/// columns `[n_c | n_bl | r | m_n]`.
#[derive(Debug, Clone)]
pub struct SpecialKlf {
    pub u: Mat,
    pub z: Mat,
    pub a_rg: Mat,
    pub e_rg: Mat,
    pub a_bl: Mat,
    pub e_bl: Mat,
    pub b_bl: Mat,
    pub c_bl: Mat,
    pub d_bl: Mat,
    pub b_n: Mat,
    pub dims: SpecialKlfDims,
    pub region: RegionPartition,
    pub checks: SklfChecks,
    /// Transformed `[A B; C D]` and `[E 0; 0 0]`.
    pub m_full: Mat,
    pub e_full: Mat,
}

fn cond(m: &Mat) -> f64 {
    if m.nrows() == 0 {
        return 1.0;
    }
    let s = svd(m);
    let smin = s.sigma[s.sigma.len() - 1];
    if smin == 0.0 {
        f64::INFINITY
    } else {
        s.sigma[0] / smin
    }
}

/// Rejects realizations with uncontrollable bad-region or infinite modes.
fn check_stabilizable(sys: &DescriptorSystem, region: &RegionPartition, tol: &ToleranceConfig) -> Result<()> {
    let n = sys.order();
    if n == 0 {
        return Ok(());
    }
    let e = sys.e_mat();
    let norm = sys.norm().max(f64::MIN_POSITIVE);
    let thr = EPS.sqrt() * norm;
    let eb = hstack(&e, &sys.b);
    let s = svd(&eb);
    if s.rank_above(tol.structural(n, n + sys.inputs(), norm)) < n {
        return Err(Error::Structure("rank [E B] < n: realization has uncontrollable infinite modes".into()));
    }
    if !region.has_bad_finite() {
        return Ok(());
    }
    for ev in generalized_eigenvalues_with(&sys.a, &e, tol)? {
        let Some(lam) = ev.value() else { continue };
        if region.is_good(&ev, tol)? {
            continue;
        }
        let pencil = to_complex(&hstack(&sys.a, &sys.b)) - to_complex(&hstack(&e, &Mat::zeros(n, sys.inputs()))) * lam;
        let sv = complex_singular_values(&pencil);
        if sv.len() < n || sv[n - 1] <= thr {
            return Err(Error::NotStabilizable(lam));
        }
    }
    Ok(())
}

/// Reduces the system pencil to the special Kronecker-like form for the given region.
pub fn special_klf(sys: &DescriptorSystem, region: &RegionPartition, tol: &ToleranceConfig) -> Result<SpecialKlf> {
    tol.validate()?;
    sys.check_regular()?;
    check_stabilizable(sys, region, tol)?;
    let (n, m, p) = (sys.order(), sys.inputs(), sys.outputs());
    let nn = n + m;
    let norm = sys.norm();
    let thr = tol.structural(n + p, nn, norm);
    let e = sys.e_mat();
    let ab = hstack(&sys.a, &sys.b);
    let ee = hstack(&e, &Mat::zeros(n, m));
    let cd = hstack(&sys.c, &sys.d);

    // Columns annihilated by [C D] lead.
    let (z0, rank_cd) = col_compress_right(&cd, thr);
    let k = nn - rank_cd;
    let kmat = z0.columns(0, k).into_owned();

    let placement = if region.infinite_is_bad { InfinitePlacement::Last } else { InfinitePlacement::First };
    let boundary: RefCell<Option<Error>> = RefCell::new(None);
    let select = |g: &GenEig| match region.is_good(g, tol) {
        Ok(good) => good,
        Err(err) => {
            boundary.borrow_mut().get_or_insert(err);
            false
        }
    };
    let klf = kronecker_like_form_scaled(&(&ab * &kmat), &(&ee * &kmat), placement, &select, tol, norm)?;
    if let Some(err) = boundary.into_inner() {
        return Err(err);
    }
    let st = &klf.structure;
    let (rr, rc) = st.right_dims();
    let (n_rg, n_c) = match placement {
        InfinitePlacement::First => {
            let ni = st.infinite_order();
            (rr + ni + klf.n_selected, rc + ni + klf.n_selected)
        }
        InfinitePlacement::Last => (rr + klf.n_selected, rc + klf.n_selected),
    };

    let mut zfull = z0.clone();
    let zk = &kmat * &klf.z;
    zfull.columns_mut(0, k).copy_from(&zk);
    let mut u = klf.q.transpose();

    let mut mt = &u * &ab * &zfull;
    let mut et = &u * &ee * &zfull;

    // Quotient: rows n_rg.., columns n_c..
    let nr = n - n_rg;
    let ncq = nn - n_c;
    let es = et.view((n_rg, n_c), (nr, ncq)).into_owned();
    let (ue, n_e) = row_compress(&es, thr);
    let uet = ue.transpose();
    let rows_u = &uet * u.rows(n_rg, nr);
    u.rows_mut(n_rg, nr).copy_from(&rows_u);
    let rows_m = &uet * mt.rows(n_rg, nr);
    mt.rows_mut(n_rg, nr).copy_from(&rows_m);
    let rows_e = &uet * et.rows(n_rg, nr);
    et.rows_mut(n_rg, nr).copy_from(&rows_e);

    let m_n = nr - n_e;
    let bz = mt.view((n_rg + n_e, n_c), (m_n, ncq)).into_owned();
    let (zb, rank_b) = col_compress_right(&bz, thr);
    if rank_b < m_n {
        return Err(Error::Structure(format!(
            "B_n block is rank deficient ({rank_b} < {m_n}); realization is not stabilizable"
        )));
    }
    apply_cols(&mut zfull, &mut mt, &mut et, n_c, &zb);

    let free = ncq - m_n;
    let ea = et.view((n_rg, n_c), (n_e, free)).into_owned();
    let (zl, rank_e) = col_compress_left(&ea, thr);
    if rank_e < n_e {
        return Err(Error::Numerical(format!("E_bl is rank deficient ({rank_e} < {n_e})")));
    }
    apply_cols(&mut zfull, &mut mt, &mut et, n_c, &zl);

    let n_bl = n_e;
    let r = free - n_e;
    let dims = SpecialKlfDims { n, m, p, n_rg, n_c, n_bl, r, m_n };

    let m_full = blocks(&[&[&mt], &[&(&cd * &zfull)]]);
    let e_full = blocks(&[&[&et], &[&Mat::zeros(p, nn)]]);
    let nrm = norm.max(f64::MIN_POSITIVE);
    let zero_blocks = structural_zero_norm(&m_full, &e_full, &dims) / nrm;
    let mut m_full = m_full;
    let mut e_full = e_full;
    clear_structural_zeros(&mut m_full, &mut e_full, &dims);

    let rb = n_rg + n_bl;
    let out = SpecialKlf {
        a_rg: block(&m_full, 0, 0, n_rg, n_c),
        e_rg: block(&e_full, 0, 0, n_rg, n_c),
        a_bl: block(&m_full, n_rg, n_c, n_bl, n_bl),
        e_bl: block(&e_full, n_rg, n_c, n_bl, n_bl),
        b_bl: block(&m_full, n_rg, n_c + n_bl, n_bl, r),
        c_bl: block(&m_full, n, n_c, p, n_bl),
        d_bl: block(&m_full, n, n_c + n_bl, p, r),
        b_n: block(&m_full, rb, nn - m_n, m_n, m_n),
        checks: SklfChecks {
            orthogonality_u: (&u * u.transpose() - Mat::identity(n, n)).norm(),
            orthogonality_z: (&zfull * zfull.transpose() - Mat::identity(nn, nn)).norm(),
            zero_blocks,
            cond_e_bl: cond(&block(&e_full, n_rg, n_c, n_bl, n_bl)),
            cond_b_n: cond(&block(&m_full, rb, nn - m_n, m_n, m_n)),
        },
        u,
        z: zfull,
        dims,
        region: region.clone(),
        m_full,
        e_full,
    };
    Ok(out)
}

fn apply_cols(z: &mut Mat, m: &mut Mat, e: &mut Mat, c0: usize, v: &Mat) {
    let k = v.nrows();
    for x in [z, m, e] {
        let cols = x.columns(c0, k) * v;
        x.columns_mut(c0, k).copy_from(&cols);
    }
}

/// Blocks that vanish by construction as `(r0, c0, rows, cols, only_e)`.
fn zero_pattern(d: &SpecialKlfDims) -> Vec<(usize, usize, usize, usize, bool)> {
    let nn = d.n + d.m;
    let rb = d.n_rg + d.n_bl;
    vec![
        (d.n_rg, 0, d.n - d.n_rg, d.n_c, false),
        (d.n, 0, d.p, d.n_c, false),
        (rb, d.n_c, d.m_n, nn - d.n_c - d.m_n, false),
        (rb, 0, d.m_n, nn, true),
        (d.n_rg, d.n_c + d.n_bl, d.n_bl, d.r, true),
    ]
}

fn structural_zero_norm(m: &Mat, e: &Mat, d: &SpecialKlfDims) -> f64 {
    let mut worst = 0.0f64;
    for (r0, c0, nr, nc, only_e) in zero_pattern(d) {
        if !only_e {
            worst = worst.max(m.view((r0, c0), (nr, nc)).norm());
        }
        worst = worst.max(e.view((r0, c0), (nr, nc)).norm());
    }
    worst
}

fn clear_structural_zeros(m: &mut Mat, e: &mut Mat, d: &SpecialKlfDims) {
    for (r0, c0, nr, nc, only_e) in zero_pattern(d) {
        if !only_e {
            m.view_mut((r0, c0), (nr, nc)).fill(0.0);
        }
        e.view_mut((r0, c0), (nr, nc)).fill(0.0);
    }
}

impl SpecialKlf {
    /// Transformed system pencil evaluated at `lambda`.
    pub fn pencil_at(&self, lambda: Complex64) -> nalgebra::DMatrix<Complex64> {
        to_complex(&self.m_full) - to_complex(&self.e_full) * lambda
    }

    /// The range block `(A_bl - lambda E_bl, B_bl, C_bl, D_bl)` as a descriptor system.
    pub fn range_system(&self) -> DescriptorSystem {
        DescriptorSystem {
            a: self.a_bl.clone(),
            e: Some(self.e_bl.clone()),
            b: self.b_bl.clone(),
            c: self.c_bl.clone(),
            d: self.d_bl.clone(),
            ts: self.region.ts,
        }
    }
}
