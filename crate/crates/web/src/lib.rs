//! Browser bindings: pole/zero maps and frequency responses of a system and its factors.

use num_complex::Complex64;
use ratfact::dss::{DescriptorSystem, TimeDomain};
use ratfact::fact::{self, FactorInfo};
use ratfact::numkernel::lin::complex_singular_values;
use ratfact::numkernel::ToleranceConfig;
use ratfact::range::{range_basis, RangeOptions, ZerosPolicy};
use ratfact_cli::io::parse_system;
use ratfact_cli::report::FactorReport;
use serde_json::json;
use wasm_bindgen::prelude::*;

pub const EXAMPLE1: &str = include_str!("../../cli/fixtures/ex1.json");
pub const EXAMPLE2: &str = include_str!("../../cli/fixtures/ex2.json");

/// Fixture text by name, `ex1` or `ex2`.
#[wasm_bindgen]
pub fn example(name: &str) -> Result<String, JsValue> {
    match name {
        "ex1" => Ok(EXAMPLE1.to_string()),
        "ex2" => Ok(EXAMPLE2.to_string()),
        other => Err(JsValue::from_str(&format!("unknown example `{other}`"))),
    }
}

fn zeros_policy(name: &str) -> Result<ZerosPolicy, String> {
    match name {
        "none" => Ok(ZerosPolicy::None),
        "bad" => Ok(ZerosPolicy::Bad),
        "all" => Ok(ZerosPolicy::All),
        other => Err(format!("unknown zeros policy `{other}`")),
    }
}

/// The input system followed by the named factors of `op`.
pub fn factors(g: &DescriptorSystem, op: &str, zeros: &str) -> Result<Vec<(String, DescriptorSystem)>, String> {
    let tol = ToleranceConfig::default();
    let err = |e: ratfact::Error| e.to_string();
    let opts = RangeOptions { zeros: zeros_policy(zeros)?, ..Default::default() };
    let mut out = vec![("G".to_string(), g.clone())];
    match op {
        "info" => {}
        "range" => out.push(("R".into(), range_basis(g, &opts, &tol).map_err(err)?.r)),
        "inner-range" => {
            let o = RangeOptions { inner: true, stabilize: true, ..opts };
            out.push(("R".into(), range_basis(g, &o, &tol).map_err(err)?.r));
        }
        "frf" => {
            let f = fact::full_rank_factorize(g, &opts, &tol).map_err(err)?;
            out.push(("R".into(), f.left));
            out.push(("X".into(), f.right));
        }
        "iofac" => {
            let f = fact::inner_outer(g, &tol).map_err(err)?;
            out.push(("Gi".into(), f.left));
            out.push(("Go".into(), f.right));
        }
        "nrcf" => {
            let f = fact::nrcf(g, &tol).map_err(err)?;
            out.push(("N".into(), f.n));
            out.push(("M".into(), f.m));
        }
        "pinv" => out.push(("Ginv".into(), fact::pseudo_inverse(g, &tol).map_err(err)?.ginv)),
        other => return Err(format!("unknown operation `{other}`")),
    }
    Ok(out)
}

/// JSON with the time domain and, per system, poles, zeros, rank and degree.
pub fn pole_zero_json(system: &str, op: &str, zeros: &str) -> Result<String, String> {
    let g = parse_system(system, "system").map_err(|e| e.to_string())?;
    let tol = ToleranceConfig::default();
    let mut list = Vec::new();
    for (name, sys) in factors(&g, op, zeros)? {
        let info = FactorInfo::of(&sys, &tol).map_err(|e| e.to_string())?;
        list.push(FactorReport::new(&name, &sys, &info));
    }
    Ok(json!({"ts": ts_name(g.ts), "systems": list}).to_string())
}

fn ts_name(ts: TimeDomain) -> &'static str {
    ratfact_cli::io::ts_name(ts)
}

/// Frequencies and per-system singular values; `null` where a system has a pole.
pub fn frequency_response_json(system: &str, op: &str, zeros: &str, count: usize) -> Result<String, String> {
    let g = parse_system(system, "system").map_err(|e| e.to_string())?;
    let count = count.clamp(2, 2000);
    let freqs: Vec<f64> = (0..count)
        .map(|k| {
            let t = k as f64 / (count - 1) as f64;
            match g.ts {
                TimeDomain::Continuous => 10f64.powf(-2.0 + 4.0 * t),
                TimeDomain::Discrete => std::f64::consts::PI * (1e-3 + (1.0 - 1e-3) * t),
            }
        })
        .collect();
    let point = |w: f64| match g.ts {
        TimeDomain::Continuous => Complex64::new(0.0, w),
        TimeDomain::Discrete => Complex64::from_polar(1.0, w),
    };
    let mut series = Vec::new();
    for (name, sys) in factors(&g, op, zeros)? {
        let sv: Vec<Option<Vec<f64>>> =
            freqs.iter().map(|&w| sys.evaluate(point(w)).ok().map(|v| complex_singular_values(&v))).collect();
        series.push(json!({"name": name, "singular_values": sv}));
    }
    Ok(json!({"ts": ts_name(g.ts), "frequencies": freqs, "systems": series}).to_string())
}

#[wasm_bindgen]
pub fn pole_zero_map(system: &str, op: &str, zeros: &str) -> Result<String, JsValue> {
    pole_zero_json(system, op, zeros).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn frequency_response(system: &str, op: &str, zeros: &str, count: usize) -> Result<String, JsValue> {
    frequency_response_json(system, op, zeros, count).map_err(|e| JsValue::from_str(&e))
}
