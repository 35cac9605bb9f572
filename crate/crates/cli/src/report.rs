//! Machine-readable command reports and the fixed CSV number format.
//!
//! Every JSON-emitting command produces one [`Report`]: the command name,
//! its inputs, its outputs, the reference tags its numbers trace to, and an
//! explicit list of discrepancies against published reference values —
//! never silently dropped. The layout is versioned and shipped alongside
//! the binary in `schema/report-v1.json`.

use serde::Serialize;
use serde_json::Value;

pub const SCHEMA_VERSION: &str = "report-v1";

/// A computed quantity that disagrees with its published reference value.
#[derive(Clone, Debug, Serialize)]
pub struct Discrepancy {
    pub quantity: String,
    pub reference_value: f64,
    pub computed_value: f64,
    pub note: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: String,
    pub inputs: Value,
    pub outputs: Value,
    /// Tags of the published tables/relations the outputs trace to; numbers
    /// with no tag are derived quantities.
    pub references: Vec<String>,
    pub discrepancies: Vec<Discrepancy>,
    pub runtime_ms: u64,
}

impl Report {
    pub fn new(command: &str, inputs: Value) -> Self {
        Self {
            schema: SCHEMA_VERSION,
            command: command.to_string(),
            inputs,
            outputs: Value::Null,
            references: Vec::new(),
            discrepancies: Vec::new(),
            runtime_ms: 0,
        }
    }
}

/// Structural check of a serialized report against the shipped schema:
/// required fields, their JSON types, and the discrepancy record shape.
pub fn validate_report(v: &Value) -> Result<(), String> {
    let obj = v.as_object().ok_or("report must be a JSON object")?;
    let field = |name: &str| obj.get(name).ok_or(format!("missing field `{name}`"));
    if field("schema")?.as_str() != Some(SCHEMA_VERSION) {
        return Err(format!("schema must be \"{SCHEMA_VERSION}\""));
    }
    if !field("command")?.is_string() {
        return Err("`command` must be a string".into());
    }
    field("inputs")?;
    field("outputs")?;
    let refs = field("references")?
        .as_array()
        .ok_or("`references` must be an array")?;
    if refs.iter().any(|r| !r.is_string()) {
        return Err("`references` entries must be strings".into());
    }
    let discs = field("discrepancies")?
        .as_array()
        .ok_or("`discrepancies` must be an array")?;
    for d in discs {
        let o = d.as_object().ok_or("discrepancy must be an object")?;
        for key in ["quantity", "reference_value", "computed_value", "note"] {
            o.get(key).ok_or(format!("discrepancy missing `{key}`"))?;
        }
        if !o["reference_value"].is_number() || !o["computed_value"].is_number() {
            return Err("discrepancy values must be numbers".into());
        }
    }
    if !field("runtime_ms")?.is_u64() {
        return Err("`runtime_ms` must be an unsigned integer".into());
    }
    Ok(())
}

/// Fixed CSV float format: 6 significant digits, '.' decimal separator.
/// Plain decimal inside [1e-4, 1e6), scientific outside.
pub fn sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-4..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        let s = format!("{:.*}", decimals, x);
        // trim trailing zeros but keep at least one digit after '.'
        if s.contains('.') {
            let t = s.trim_end_matches('0');
            let t = t.strip_suffix('.').unwrap_or(t);
            t.to_string()
        } else {
            s
        }
    } else {
        format!("{:.5e}", x)
    }
}
