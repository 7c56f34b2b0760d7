//! JSON system files.

use std::fmt::Write as _;
use std::path::Path;

use ratfact::dss::{DescriptorSystem, TimeDomain};
use ratfact::numkernel::lin::Mat;
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SystemFile {
    ts: Domain,
    #[serde(rename = "A")]
    a: Vec<Vec<f64>>,
    #[serde(rename = "E", default)]
    e: Option<Vec<Vec<f64>>>,
    #[serde(rename = "B")]
    b: Vec<Vec<f64>>,
    #[serde(rename = "C")]
    c: Vec<Vec<f64>>,
    #[serde(rename = "D")]
    d: Vec<Vec<f64>>,
    /// Needed only when both the state and output dimensions are zero.
    #[serde(default)]
    inputs: Option<usize>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Domain {
    Continuous,
    Discrete,
}

pub fn ts_name(ts: TimeDomain) -> &'static str {
    match ts {
        TimeDomain::Continuous => "continuous",
        TimeDomain::Discrete => "discrete",
    }
}

fn matrix(field: &str, rows: &[Vec<f64>], nrows: usize, ncols: usize) -> Result<Mat, CliError> {
    if rows.len() != nrows {
        return Err(CliError::Input(format!("field `{field}` has {} rows, expected {nrows}", rows.len())));
    }
    for (i, row) in rows.iter().enumerate() {
        if row.len() != ncols {
            return Err(CliError::Input(format!("field `{field}[{i}]` has {} entries, expected {ncols}", row.len())));
        }
        if let Some(j) = row.iter().position(|v| !v.is_finite()) {
            return Err(CliError::Input(format!("field `{field}[{i}][{j}]` is not finite")));
        }
    }
    Ok(Mat::from_fn(nrows, ncols, |i, j| rows[i][j]))
}

/// Parses a system document; `origin` names the source in error messages.
pub fn parse_system(text: &str, origin: &str) -> Result<DescriptorSystem, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let file: SystemFile = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        CliError::Parse(format!("{origin}: field `{path}`: {}", e.into_inner()))
    })?;
    let n = file.a.len();
    let p = file.d.len();
    let m = if p > 0 {
        file.d[0].len()
    } else if n > 0 && !file.b.is_empty() {
        file.b[0].len()
    } else {
        file.inputs.unwrap_or(0)
    };
    let a = matrix("A", &file.a, n, n)?;
    let e = file.e.as_ref().map(|e| matrix("E", e, n, n)).transpose()?;
    let b = matrix("B", &file.b, n, m)?;
    let c = matrix("C", &file.c, p, n)?;
    let d = matrix("D", &file.d, p, m)?;
    let ts = match file.ts {
        Domain::Continuous => TimeDomain::Continuous,
        Domain::Discrete => TimeDomain::Discrete,
    };
    DescriptorSystem::new(a, e, b, c, d, ts).map_err(|e| CliError::Input(format!("{origin}: {e}")))
}

pub fn read_system(path: &Path) -> Result<DescriptorSystem, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    parse_system(&text, &path.display().to_string())
}

fn write_matrix(out: &mut String, m: &Mat) {
    out.push('[');
    for i in 0..m.nrows() {
        if i > 0 {
            out.push_str(", ");
        }
        let row: Vec<f64> = m.row(i).iter().copied().collect();
        out.push_str(&serde_json::to_string(&row).expect("finite entries"));
    }
    out.push(']');
}

/// Serializes with shortest round-trip decimals, one matrix row per array.
pub fn format_system(sys: &DescriptorSystem) -> String {
    let mut s = String::new();
    let _ = write!(s, "{{\n  \"ts\": \"{}\",\n  \"A\": ", ts_name(sys.ts));
    write_matrix(&mut s, &sys.a);
    s.push_str(",\n  \"E\": ");
    match &sys.e {
        Some(e) => write_matrix(&mut s, e),
        None => s.push_str("null"),
    }
    for (name, m) in [("B", &sys.b), ("C", &sys.c), ("D", &sys.d)] {
        let _ = write!(s, ",\n  \"{name}\": ");
        write_matrix(&mut s, m);
    }
    if sys.order() == 0 && sys.outputs() == 0 {
        let _ = write!(s, ",\n  \"inputs\": {}", sys.inputs());
    }
    s.push_str("\n}\n");
    s
}

pub fn write_system(path: &Path, sys: &DescriptorSystem) -> Result<(), CliError> {
    std::fs::write(path, format_system(sys)).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}
