//! `ratfact` command-line front-end.

pub mod io;
pub mod report;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use ratfact::dss::{irreducible_realization, DescriptorSystem, TimeDomain};
use ratfact::fact::{self, FactorInfo, RESIDUAL_POINTS};
use ratfact::klf::{kronecker_like_form, special_klf, RegionPartition};
use ratfact::numkernel::lin::{blocks, CMat, Mat};
use ratfact::numkernel::ToleranceConfig;
use ratfact::range::{range_basis, RangeOptions, ZerosPolicy};
use ratfact::verify::{frequency_grid, sample_points};
use serde_json::json;

use report::{complex_text, FactorReport, Report, Residuals};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_FACTORIZATION: i32 = 3;
pub const EXIT_VERIFICATION: i32 = 4;

#[derive(Debug)]
pub enum CliError {
    Parse(String),
    Input(String),
    Factorization(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) | CliError::Input(_) => EXIT_INPUT,
            CliError::Factorization(_) => EXIT_FACTORIZATION,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Parse(m) => write!(f, "parse error: {m}"),
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Factorization(m) => write!(f, "factorization error: {m}"),
        }
    }
}

impl From<ratfact::Error> for CliError {
    fn from(e: ratfact::Error) -> Self {
        match e {
            ratfact::Error::Input(_) | ratfact::Error::Evaluation { .. } => CliError::Input(e.to_string()),
            other => CliError::Factorization(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Zeros {
    None,
    Bad,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Region {
    ContStab,
    DiscStab,
}

impl Region {
    fn ts(self) -> TimeDomain {
        match self {
            Region::ContStab => TimeDomain::Continuous,
            Region::DiscStab => TimeDomain::Discrete,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "ratfact", version, about = "Range bases and factorizations of rational matrices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Zeros kept in the range basis.
    #[arg(long, value_enum, default_value = "bad", global = true)]
    pub zeros: Zeros,
    /// Make the range basis inner.
    #[arg(long, global = true)]
    pub inner: bool,
    /// Move the poles of the range basis into the stability region.
    #[arg(long, global = true)]
    pub stabilize: bool,
    /// Stability region, defaulting to the one matching the system's time domain.
    #[arg(long, value_enum, global = true)]
    pub region: Option<Region>,
    /// Relative rank tolerance; 0 selects the default.
    #[arg(long, default_value_t = 0.0, global = true)]
    pub tol: f64,
    /// Eigenvalues this close to the region boundary are rejected.
    #[arg(long, default_value_t = 0.0, global = true)]
    pub boundary_offset: f64,
    /// Number of stability-boundary points used for verification.
    #[arg(long, default_value_t = 64, global = true)]
    pub grid: usize,
    /// Directory receiving factor realizations.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Print the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for random evaluation points.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    /// Largest accepted residual or defect.
    #[arg(long, default_value_t = 1e-7, global = true)]
    pub threshold: f64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Poles, zeros, normal rank and McMillan degree.
    Info { file: PathBuf },
    /// Kronecker-like staircase form of the system pencil.
    Klf { file: PathBuf },
    /// Special Kronecker-like form used for range computation.
    Sklf { file: PathBuf },
    /// Proper range basis R.
    Range { file: PathBuf },
    /// Full rank factorization G = R X.
    Frf { file: PathBuf },
    /// Dual full rank factorization G = X R.
    DualFrf { file: PathBuf },
    /// Normalized right coprime factorization G = N M^-1.
    Nrcf { file: PathBuf },
    /// Moore-Penrose pseudo-inverse.
    Pinv { file: PathBuf },
    /// Inner-quasi-outer factorization G = Gi Go.
    Iofac { file: PathBuf },
    /// Transfer function value at a point, e.g. `--point 0` or `--point 1+2i`.
    Eval {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Grid check of G = left * right; `--inner` also checks that left is inner.
    Verify { g: PathBuf, left: PathBuf, right: PathBuf },
}

/// Parses arguments (without the program name), runs, and writes the report to `out`.
pub fn run(args: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let argv = std::iter::once("ratfact".to_string()).chain(args.iter().cloned());
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    match execute(&cli, args.to_vec()) {
        Ok(report) => {
            let text = if cli.json { report.to_json() + "\n" } else { report.to_text() };
            let _ = write!(out, "{text}");
            match &report.residuals {
                Some(r) if !r.passed => {
                    let _ = writeln!(err, "verification failed: threshold {} exceeded", report::short(r.threshold));
                    EXIT_VERIFICATION
                }
                _ => EXIT_OK,
            }
        }
        Err(e) => {
            let _ = writeln!(err, "{e}");
            e.exit_code()
        }
    }
}

fn tolerances(cli: &Cli) -> ToleranceConfig {
    ToleranceConfig { rank_rtol: cli.tol, boundary_offset: cli.boundary_offset, seed: cli.seed, ..Default::default() }
}

fn zeros_policy(cli: &Cli, ts: TimeDomain) -> Result<ZerosPolicy, CliError> {
    Ok(match (cli.zeros, cli.region) {
        (Zeros::None, _) => ZerosPolicy::None,
        (Zeros::All, _) => ZerosPolicy::All,
        (Zeros::Bad, None) => ZerosPolicy::Bad,
        (Zeros::Bad, Some(r)) if r.ts() == ts => ZerosPolicy::Bad,
        (Zeros::Bad, Some(Region::ContStab)) => {
            ZerosPolicy::Region(RegionPartition::custom(ts, Arc::new(|z: Complex64| z.re > 0.0), false)?)
        }
        (Zeros::Bad, Some(Region::DiscStab)) => {
            ZerosPolicy::Region(RegionPartition::custom(ts, Arc::new(|z: Complex64| z.norm() > 1.0), true)?)
        }
    })
}

fn range_options(cli: &Cli, ts: TimeDomain) -> Result<RangeOptions, CliError> {
    Ok(RangeOptions {
        zeros: zeros_policy(cli, ts)?,
        stabilize: cli.stabilize || cli.inner,
        inner: cli.inner,
        target: cli.region.map(|r| RegionPartition::stability(r.ts())),
        minimal_realization: true,
    })
}

fn matrix_json(m: &Mat) -> serde_json::Value {
    json!((0..m.nrows()).map(|i| m.row(i).iter().copied().collect::<Vec<f64>>()).collect::<Vec<_>>())
}

fn cmatrix_json(m: &CMat) -> serde_json::Value {
    if m.iter().all(|z| z.im == 0.0) {
        return matrix_json(&m.map(|z| z.re));
    }
    json!((0..m.nrows())
        .map(|i| m.row(i).iter().map(|z| json!({"re": z.re, "im": z.im})).collect::<Vec<_>>())
        .collect::<Vec<_>>())
}

fn cmatrix_text(m: &CMat) -> String {
    let rows: Vec<String> = (0..m.nrows())
        .map(|i| format!("[{}]", m.row(i).iter().map(|z| complex_text(*z)).collect::<Vec<_>>().join(", ")))
        .collect();
    format!("[{}]", rows.join(", "))
}

/// Parses `a`, `bi`, `a+bi` or `a-bi` (also with `j`).
pub fn parse_point(text: &str) -> Result<Complex64, CliError> {
    let bad = || CliError::Input(format!("cannot parse point `{text}`"));
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if let Ok(x) = t.parse::<f64>() {
        return if x.is_finite() { Ok(Complex64::new(x, 0.0)) } else { Err(bad()) };
    }
    let body = t.strip_suffix('i').or_else(|| t.strip_suffix('j')).ok_or_else(bad)?;
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => "1",
        "-" => "-1",
        s => s,
    };
    let z = Complex64::new(re.parse().map_err(|_| bad())?, im.parse().map_err(|_| bad())?);
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(bad());
    }
    Ok(z)
}

struct Outputs<'a> {
    dir: Option<&'a Path>,
    files: Vec<String>,
}

impl Outputs<'_> {
    fn path(&mut self, name: &str) -> Result<Option<PathBuf>, CliError> {
        let Some(dir) = self.dir else { return Ok(None) };
        std::fs::create_dir_all(dir).map_err(|e| CliError::Input(format!("{}: {e}", dir.display())))?;
        let path = dir.join(name);
        self.files.push(path.display().to_string());
        Ok(Some(path))
    }

    fn system(&mut self, name: &str, sys: &DescriptorSystem) -> Result<Option<String>, CliError> {
        match self.path(&format!("{name}.json"))? {
            Some(p) => {
                io::write_system(&p, sys)?;
                Ok(Some(p.display().to_string()))
            }
            None => Ok(None),
        }
    }

    fn document(&mut self, name: &str, value: &serde_json::Value) -> Result<(), CliError> {
        if let Some(p) = self.path(&format!("{name}.json"))? {
            let text = serde_json::to_string_pretty(value).expect("serializable") + "\n";
            std::fs::write(&p, text).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?;
        }
        Ok(())
    }
}

/// Evaluates at `points`, skipping those where any system has a pole.
fn relative_residual(
    g: &DescriptorSystem,
    left: &DescriptorSystem,
    right: &DescriptorSystem,
    points: &[Complex64],
) -> (f64, usize) {
    let mut worst = 0.0f64;
    let mut skipped = 0;
    for &z in points {
        match (g.evaluate(z), left.evaluate(z), right.evaluate(z)) {
            (Ok(gv), Ok(lv), Ok(rv)) => {
                let diff = (&gv - lv * rv).norm();
                let scale = gv.norm();
                worst = worst.max(if scale > 0.0 { diff / scale } else { diff });
            }
            _ => skipped += 1,
        }
    }
    (worst, skipped)
}

fn grid_inner_defect(r: &DescriptorSystem, points: &[Complex64]) -> (f64, usize) {
    let eye = CMat::identity(r.inputs(), r.inputs());
    let mut worst = 0.0f64;
    let mut skipped = 0;
    for &z in points {
        match r.evaluate(z) {
            Ok(v) => worst = worst.max((v.adjoint() * &v - &eye).norm()),
            Err(_) => skipped += 1,
        }
    }
    (worst, skipped)
}

/// Product residual over seeded random points and the boundary grid, plus the optional inner check.
fn check_product(
    cli: &Cli,
    g: &DescriptorSystem,
    left: &DescriptorSystem,
    right: &DescriptorSystem,
    inner: Option<&DescriptorSystem>,
) -> Result<Residuals, CliError> {
    let grid = frequency_grid(g.ts, cli.grid);
    let random = sample_points(&[g, left, right], RESIDUAL_POINTS, cli.seed)?;
    let (r1, _) = relative_residual(g, left, right, &random);
    let (r2, mut skipped) = relative_residual(g, left, right, &grid);
    let inner_defect = inner.map(|r| {
        let (d, s) = grid_inner_defect(r, &grid);
        skipped = skipped.max(s);
        d
    });
    let worst = r1.max(r2);
    let passed = worst <= cli.threshold && inner_defect.is_none_or(|d| d <= cli.threshold);
    Ok(Residuals {
        max_relative_residual: Some(worst),
        random_points: random.len(),
        seed: cli.seed,
        grid: grid.len(),
        skipped_points: skipped,
        inner_defect,
        moore_penrose_defect: None,
        threshold: cli.threshold,
        passed,
    })
}

fn factor(
    name: &str,
    sys: &DescriptorSystem,
    tol: &ToleranceConfig,
    outs: &mut Outputs,
) -> Result<FactorReport, CliError> {
    let info = FactorInfo::of(sys, tol)?;
    let mut f = FactorReport::new(name, sys, &info);
    f.file = outs.system(name, sys)?;
    Ok(f)
}

fn execute(cli: &Cli, args: Vec<String>) -> Result<Report, CliError> {
    let tol = tolerances(cli);
    tol.validate()?;
    if cli.grid == 0 {
        return Err(CliError::Input("--grid must be positive".into()));
    }
    let mut outs = Outputs { dir: cli.out.as_deref(), files: Vec::new() };
    let file = match &cli.command {
        Command::Info { file }
        | Command::Klf { file }
        | Command::Sklf { file }
        | Command::Range { file }
        | Command::Frf { file }
        | Command::DualFrf { file }
        | Command::Nrcf { file }
        | Command::Pinv { file }
        | Command::Iofac { file }
        | Command::Eval { file, .. } => file,
        Command::Verify { g, .. } => g,
    };
    let g = io::read_system(file)?;
    let mut rep = Report::new(args, &g);
    match &cli.command {
        Command::Info { .. } => {
            let info = FactorInfo::of(&g, &tol)?;
            rep.factors.push(FactorReport::new("G", &g, &info));
        }
        Command::Klf { .. } => {
            let (n, m, p) = (g.order(), g.inputs(), g.outputs());
            let a = blocks(&[&[&g.a, &g.b], &[&g.c, &g.d]]);
            let e = blocks(&[&[&g.e_mat(), &Mat::zeros(n, m)], &[&Mat::zeros(p, n), &Mat::zeros(p, m)]]);
            let k = kronecker_like_form(&a, &e, &tol)?;
            let finite: Vec<_> = k
                .finite_eigenvalues
                .iter()
                .filter_map(|v| v.value())
                .map(|z| json!({"re": z.re, "im": z.im}))
                .collect();
            rep.details = json!({
                "right_indices": k.structure.right_indices,
                "infinite_block_sizes": k.structure.infinite_sizes,
                "finite_order": k.structure.finite,
                "left_indices": k.structure.left_indices,
                "finite_eigenvalues": finite,
                "normal_rank": (n + m - k.structure.right_indices.len()).saturating_sub(n),
            });
            outs.document(
                "klf",
                &json!({"Q": matrix_json(&k.q), "Z": matrix_json(&k.z), "M": matrix_json(&k.m), "N": matrix_json(&k.n)}),
            )?;
        }
        Command::Sklf { .. } => {
            let base = irreducible_realization(&g, &tol)?;
            let region = zeros_policy(cli, g.ts)?.region(g.ts);
            let s = special_klf(&base, &region, &tol)?;
            let d = &s.dims;
            let c = &s.checks;
            rep.details = json!({
                "dims": {"n": d.n, "m": d.m, "p": d.p, "n_rg": d.n_rg, "n_c": d.n_c, "n_bl": d.n_bl, "r": d.r, "m_n": d.m_n},
                "checks": {
                    "orthogonality_u": c.orthogonality_u,
                    "orthogonality_z": c.orthogonality_z,
                    "zero_blocks": c.zero_blocks,
                    "cond_e_bl": c.cond_e_bl,
                    "cond_b_n": c.cond_b_n,
                },
            });
            outs.document(
                "sklf",
                &json!({
                    "U": matrix_json(&s.u), "Z": matrix_json(&s.z),
                    "A_rg": matrix_json(&s.a_rg), "E_rg": matrix_json(&s.e_rg),
                    "A_bl": matrix_json(&s.a_bl), "E_bl": matrix_json(&s.e_bl), "B_bl": matrix_json(&s.b_bl),
                    "C_bl": matrix_json(&s.c_bl), "D_bl": matrix_json(&s.d_bl), "B_n": matrix_json(&s.b_n),
                }),
            )?;
        }
        Command::Range { .. } => {
            let rr = range_basis(&g, &range_options(cli, g.ts)?, &tol)?;
            rep.factors.push(factor("R", &rr.r, &tol, &mut outs)?);
            rep.details = json!({"rank": rr.rank()});
            if cli.inner {
                let grid = frequency_grid(g.ts, cli.grid);
                let (d, skipped) = grid_inner_defect(&rr.r, &grid);
                rep.residuals = Some(Residuals {
                    grid: grid.len(),
                    seed: cli.seed,
                    skipped_points: skipped,
                    inner_defect: Some(d),
                    threshold: cli.threshold,
                    passed: d <= cli.threshold,
                    ..Default::default()
                });
            }
        }
        Command::Frf { .. } | Command::DualFrf { .. } | Command::Iofac { .. } => {
            let opts = range_options(cli, g.ts)?;
            let (f, names) = match &cli.command {
                Command::Frf { .. } => (fact::full_rank_factorize(&g, &opts, &tol)?, ["R", "X"]),
                Command::DualFrf { .. } => (fact::dual_full_rank_factorize(&g, &opts, &tol)?, ["X", "R"]),
                _ => (fact::inner_outer(&g, &tol)?, ["Gi", "Go"]),
            };
            rep.details = json!({"rank": f.certificates.rank});
            for (name, sys, info) in
                [(names[0], &f.left, &f.certificates.left), (names[1], &f.right, &f.certificates.right)]
            {
                let mut fr = FactorReport::new(name, sys, info);
                fr.file = outs.system(name, sys)?;
                rep.factors.push(fr);
            }
            let inner = match &cli.command {
                Command::Iofac { .. } => Some(f.left.clone()),
                Command::Frf { .. } if cli.inner => Some(f.left.clone()),
                Command::DualFrf { .. } if cli.inner => Some(f.right.transpose()),
                _ => None,
            };
            rep.residuals = Some(check_product(cli, &g, &f.left, &f.right, inner.as_ref())?);
        }
        Command::Nrcf { .. } => {
            let f = fact::nrcf(&g, &tol)?;
            rep.factors.push(factor("N", &f.n, &tol, &mut outs)?);
            rep.factors.push(factor("M", &f.m, &tol, &mut outs)?);
            let stacked = f.n.stack_vertical(&f.m)?;
            let grid = frequency_grid(g.ts, cli.grid);
            let random = sample_points(&[&g, &stacked], RESIDUAL_POINTS, cli.seed)?;
            let (r1, _) = relative_residual(&f.n, &g, &f.m, &random);
            let (r2, s1) = relative_residual(&f.n, &g, &f.m, &grid);
            let (d, s2) = grid_inner_defect(&stacked, &grid);
            let worst = r1.max(r2);
            rep.residuals = Some(Residuals {
                max_relative_residual: Some(worst),
                random_points: random.len(),
                seed: cli.seed,
                grid: grid.len(),
                skipped_points: s1.max(s2),
                inner_defect: Some(d),
                moore_penrose_defect: None,
                threshold: cli.threshold,
                passed: worst <= cli.threshold && d <= cli.threshold,
            });
        }
        Command::Pinv { .. } => {
            let p = fact::pseudo_inverse(&g, &tol)?;
            rep.factors.push(factor("Ginv", &p.ginv, &tol, &mut outs)?);
            rep.details = json!({"order_before_reduction": p.order_before_reduction});
            let grid = frequency_grid(g.ts, cli.grid);
            let defect = ratfact::verify::moore_penrose_defect(&g, &p.ginv, &grid)?;
            rep.residuals = Some(Residuals {
                grid: grid.len(),
                seed: cli.seed,
                moore_penrose_defect: Some(defect),
                threshold: cli.threshold,
                passed: defect <= cli.threshold,
                ..Default::default()
            });
        }
        Command::Eval { point, .. } => {
            let z = parse_point(point)?;
            let v = g.evaluate(z)?;
            rep.details = json!({"point": {"re": z.re, "im": z.im}, "value": cmatrix_json(&v)});
            rep.notes.push(format!("G({}) = {}", complex_text(z), cmatrix_text(&v)));
        }
        Command::Verify { left, right, .. } => {
            let l = io::read_system(left)?;
            let r = io::read_system(right)?;
            if l.ts != g.ts || r.ts != g.ts {
                return Err(CliError::Input("factor files use a different time domain".into()));
            }
            if l.outputs() != g.outputs() || r.inputs() != g.inputs() || l.inputs() != r.outputs() {
                return Err(CliError::Input(format!(
                    "incompatible dimensions: G is {}x{}, left {}x{}, right {}x{}",
                    g.outputs(),
                    g.inputs(),
                    l.outputs(),
                    l.inputs(),
                    r.outputs(),
                    r.inputs()
                )));
            }
            rep.residuals = Some(check_product(cli, &g, &l, &r, cli.inner.then_some(&l))?);
            rep.details = json!({"left": left.display().to_string(), "right": right.display().to_string()});
        }
    }
    rep.output_files = outs.files;
    Ok(rep)
}
