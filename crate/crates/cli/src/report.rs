//! Machine- and human-readable command reports.

use std::fmt::Write as _;

use num_complex::Complex64;
use ratfact::dss::{DescriptorSystem, EigenvalueList};
use ratfact::fact::FactorInfo;
use serde::Serialize;

use crate::io::ts_name;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Eigenvalue {
    Finite { re: f64, im: f64 },
    Infinite { value: &'static str, multiplicity: usize },
}

pub fn eigenvalues(list: &EigenvalueList) -> Vec<Eigenvalue> {
    list.finite
        .iter()
        .map(|z| Eigenvalue::Finite { re: z.re, im: z.im })
        .chain(list.infinite_multiplicities.iter().map(|&k| Eigenvalue::Infinite { value: "inf", multiplicity: k }))
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct SystemSummary {
    pub ts: &'static str,
    pub order: usize,
    pub inputs: usize,
    pub outputs: usize,
    pub descriptor: bool,
}

impl SystemSummary {
    pub fn of(sys: &DescriptorSystem) -> Self {
        Self {
            ts: ts_name(sys.ts),
            order: sys.order(),
            inputs: sys.inputs(),
            outputs: sys.outputs(),
            descriptor: sys.e.is_some(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FactorReport {
    pub name: String,
    pub outputs: usize,
    pub inputs: usize,
    pub order: usize,
    pub normal_rank: usize,
    pub mcmillan_degree: usize,
    pub poles: Vec<Eigenvalue>,
    pub zeros: Vec<Eigenvalue>,
    pub zero_count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub file: Option<String>,
}

impl FactorReport {
    pub fn new(name: &str, sys: &DescriptorSystem, info: &FactorInfo) -> Self {
        Self {
            name: name.to_string(),
            outputs: sys.outputs(),
            inputs: sys.inputs(),
            order: info.order,
            normal_rank: info.normal_rank,
            mcmillan_degree: info.mcmillan_degree,
            poles: eigenvalues(&info.poles),
            zeros: eigenvalues(&info.zeros),
            zero_count: info.zeros.count(),
            file: None,
        }
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Residuals {
    /// Largest relative product residual over all evaluation points.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_relative_residual: Option<f64>,
    pub random_points: usize,
    pub seed: u64,
    pub grid: usize,
    /// Grid points skipped because a system has a pole there.
    pub skipped_points: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inner_defect: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub moore_penrose_defect: Option<f64>,
    pub threshold: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: Vec<String>,
    pub input: SystemSummary,
    pub factors: Vec<FactorReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residuals: Option<Residuals>,
    /// Command-specific results.
    #[serde(skip_serializing_if = "serde_json::Value::is_null")]
    pub details: serde_json::Value,
    pub output_files: Vec<String>,
    /// Extra lines for the text form only.
    #[serde(skip)]
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(command: Vec<String>, input: &DescriptorSystem) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            command,
            input: SystemSummary::of(input),
            factors: Vec::new(),
            residuals: None,
            details: serde_json::Value::Null,
            output_files: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is serializable")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let i = &self.input;
        let _ = writeln!(s, "input: {} system, order {}, {} outputs x {} inputs", i.ts, i.order, i.outputs, i.inputs);
        for f in &self.factors {
            let _ = writeln!(
                s,
                "{}: {}x{}, order {}, normal rank {}, McMillan degree {}",
                f.name, f.outputs, f.inputs, f.order, f.normal_rank, f.mcmillan_degree
            );
            let _ = writeln!(s, "  poles: {}", list_text(&f.poles));
            let _ = writeln!(s, "  zeros ({}): {}", f.zero_count, list_text(&f.zeros));
            if let Some(path) = &f.file {
                let _ = writeln!(s, "  written to {path}");
            }
        }
        for line in &self.notes {
            let _ = writeln!(s, "{line}");
        }
        if !self.details.is_null() && self.notes.is_empty() {
            let _ = writeln!(s, "{}", details_text(&self.details));
        }
        if let Some(r) = &self.residuals {
            if let Some(v) = r.max_relative_residual {
                let _ = writeln!(
                    s,
                    "max relative residual: {} ({} random points, seed {}, grid {}, {} skipped)",
                    short(v),
                    r.random_points,
                    r.seed,
                    r.grid,
                    r.skipped_points
                );
            }
            if let Some(v) = r.inner_defect {
                let _ = writeln!(s, "inner defect: {}", short(v));
            }
            if let Some(v) = r.moore_penrose_defect {
                let _ = writeln!(s, "Moore-Penrose defect: {}", short(v));
            }
            let _ = writeln!(
                s,
                "verification: {} (threshold {})",
                if r.passed { "pass" } else { "FAIL" },
                short(r.threshold)
            );
        }
        s
    }
}

/// Rounds to 12 significant digits for display.
pub fn short(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{}", if x == 0.0 { 0.0 } else { x });
    }
    let r: f64 = format!("{x:.11e}").parse().unwrap_or(x);
    if (1e-4..1e12).contains(&r.abs()) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

pub fn complex_text(z: Complex64) -> String {
    let im = if z.im.abs() <= 1e-14 * z.re.abs().max(1.0) { 0.0 } else { z.im };
    if im == 0.0 {
        short(z.re)
    } else if im > 0.0 {
        format!("{}+{}i", short(z.re), short(im))
    } else {
        format!("{}-{}i", short(z.re), short(-im))
    }
}

fn list_text(list: &[Eigenvalue]) -> String {
    if list.is_empty() {
        return "none".into();
    }
    list.iter()
        .map(|e| match e {
            Eigenvalue::Finite { re, im } => complex_text(Complex64::new(*re, *im)),
            Eigenvalue::Infinite { multiplicity, .. } => format!("inf (x{multiplicity})"),
        })
        .collect::<Vec<_>>()
        .join(", ")
}

fn details_text(v: &serde_json::Value) -> String {
    match v {
        serde_json::Value::Object(map) => map
            .iter()
            .map(|(k, v)| match v {
                serde_json::Value::String(s) => format!("{k}: {s}"),
                other => format!("{k}: {other}"),
            })
            .collect::<Vec<_>>()
            .join("\n"),
        other => other.to_string(),
    }
}
