//! Reproduction of the published tables, with CSV and JSON rendering.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{BohrError, Result};
use crate::phi::PhiSpec;
use crate::quadrature::TABLE_TOL;
use crate::radius::{boundary_comparison, solve_radius, BoundaryComparison, ClassId, SolverOptions};

pub const JSON_SCHEMA: u32 = 1;

/// Significant digits in CSV and JSON output.
pub const OUTPUT_DIGITS: usize = 9;

/// A printed reference value, kept as text so its precision is known.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Reference(pub &'static str);

impl Reference {
    pub fn value(&self) -> f64 {
        self.0.parse().expect("reference constants are decimal literals")
    }

    /// Digits printed after the decimal point.
    pub fn decimals(&self) -> u32 {
        self.0.split_once('.').map_or(0, |(_, frac)| frac.len() as u32)
    }

    /// Zero when `computed` truncated or rounded to the printed precision
    /// reproduces the printed digits, otherwise `computed - printed`.
    pub fn truncated_diff(&self, computed: f64) -> f64 {
        let scale = 10f64.powi(self.decimals() as i32);
        let printed = (self.value() * scale).round();
        let scaled = computed * scale;
        if scaled.trunc() == printed || scaled.round() == printed {
            0.0
        } else {
            computed - self.value()
        }
    }

    /// Acceptance tolerance: one unit in the last printed digit, never
    /// tighter than `5e-7`.
    pub fn printed_tolerance(&self) -> f64 {
        10f64.powi(-(self.decimals() as i32)).max(5e-7)
    }
}

// Table 1: Sc radius for φ = (1 + sz)², keyed by s.
const TABLE_1: [(f64, &str, Reference); 14] = [
    (0.1, "0.1", Reference("0.71184")),
    (0.15, "0.15", Reference("0.619461")),
    (0.2, "0.2", Reference("0.546344")),
    (0.25, "0.25", Reference("0.486934")),
    (0.3, "0.3", Reference("0.437693")),
    (0.35, "0.35", Reference("0.39624")),
    (0.4, "0.4", Reference("0.360903")),
    (0.45, "0.45", Reference("0.330472")),
    (0.5, "0.5", Reference("0.3040402")),
    (0.55, "0.55", Reference("0.28091732")),
    (0.6, "0.6", Reference("0.2605657")),
    (0.65, "0.65", Reference("0.24256")),
    (0.7, "0.7", Reference("0.226558")),
    (FRAC_1_SQRT_2, "1/sqrt(2)", Reference("0.22443096")),
];

// Tables 2 and 3: α, h(1/3), -h(-1), sign of D(0), sign of D(1/3).
type BoundaryReference = (f64, Reference, Reference, char, char);

// Table 2: φ = α + (1 - α)eᶻ.
const TABLE_2: [BoundaryReference; 8] = [
    (0.0, Reference("0.47935"), Reference("0.4508594"), '-', '+'),
    (0.01, Reference("0.477619"), Reference("0.454465"), '-', '+'),
    (0.02, Reference("0.475887697"), Reference("0.458100015"), '-', '+'),
    (0.03, Reference("0.47416191"), Reference("0.4617638"), '-', '+'),
    (0.04, Reference("0.47244238"), Reference("0.465456"), '-', '+'),
    (0.05, Reference("0.470729"), Reference("0.469179"), '-', '+'),
    (0.06, Reference("0.469022"), Reference("0.47293"), '-', '-'),
    (0.07, Reference("0.46732112"), Reference("0.4767143"), '-', '-'),
];

// Table 3: φ = ((1 + z)/(1 - z))^α.
const TABLE_3: [BoundaryReference; 8] = [
    (0.2, Reference("0.38335"), Reference("0.65515"), '-', '-'),
    (0.4, Reference("0.4453711"), Reference("0.475453"), '-', '-'),
    (0.45, Reference("0.4631699"), Reference("0.443795"), '-', '+'),
    (0.5, Reference("0.482023"), Reference("0.415759"), '-', '+'),
    (0.6, Reference("0.523214"), Reference("0.368431"), '-', '+'),
    (0.7, Reference("0.569663"), Reference("0.330139"), '-', '+'),
    (0.8, Reference("0.62222"), Reference("0.298621"), '-', '+'),
    (0.9, Reference("0.681928"), Reference("0.272286"), '-', '+'),
];

// Table 4: Sc radius for φ = (1 + Az)/(1 + Bz), keyed by (A, B).
const TABLE_4_A_ONE: [(f64, Reference); 10] = [
    (-0.1, Reference("0.261789")),
    (-0.2, Reference("0.247088")),
    (-0.3, Reference("0.23402")),
    (-0.4, Reference("0.222323")),
    (-0.5, Reference("0.21179")),
    (-0.6, Reference("0.202239")),
    (-0.7, Reference("0.193548")),
    (-0.8, Reference("0.185599")),
    (-0.9, Reference("0.1783")),
    (-1.0, Reference("0.17157")),
];

const TABLE_4_A_HALF: [(f64, Reference); 10] = [
    (-0.1, Reference("0.432852")),
    (-0.2, Reference("0.395824")),
    (-0.3, Reference("0.364714")),
    (-0.4, Reference("0.338205")),
    (-0.5, Reference("0.31534")),
    (-0.6, Reference("0.295418")),
    (-0.7, Reference("0.277899")),
    (-0.8, Reference("0.262372")),
    (-0.9, Reference("0.248514")),
    (-1.0, Reference("0.236068")),
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadiusRow {
    /// Parameter names and values, e.g. `[("s", "0.5")]`.
    pub params: Vec<(&'static str, String)>,
    pub spec: PhiSpec,
    pub r_f: f64,
    pub reference: Reference,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryRow {
    pub alpha: f64,
    pub spec: PhiSpec,
    pub computed: BoundaryComparison,
    pub ref_h_one_third: Reference,
    pub ref_minus_h_minus_one: Reference,
    /// Sign of `D(0) = h(0) + h(-1)`.
    pub sign_d0: char,
    pub ref_sign_d0: char,
    pub ref_sign_d_one_third: char,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum TableRows {
    Radius(Vec<RadiusRow>),
    Boundary(Vec<BoundaryRow>),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub id: u8,
    pub title: &'static str,
    pub rows: TableRows,
}

fn table_options() -> SolverOptions {
    SolverOptions {
        tol: TABLE_TOL,
        ..SolverOptions::default()
    }
}

fn radius_row(params: Vec<(&'static str, String)>, spec: PhiSpec, reference: Reference) -> Result<RadiusRow> {
    let r_f = solve_radius(ClassId::Sc, spec, table_options())?.r_f;
    Ok(RadiusRow {
        params,
        spec,
        r_f,
        reference,
    })
}

fn boundary_rows(data: &[BoundaryReference], make: fn(f64) -> Result<PhiSpec>) -> Result<Vec<BoundaryRow>> {
    data.iter()
        .map(|&(alpha, h3, mh, d0, d3)| {
            let spec = make(alpha)?;
            let computed = boundary_comparison(spec)?;
            // D(0) = h(-1) < 0 for every catalog φ
            let sign_d0 = if -computed.minus_h_minus_one > 0.0 {
                '+'
            } else {
                '-'
            };
            Ok(BoundaryRow {
                alpha,
                spec,
                computed,
                ref_h_one_third: h3,
                ref_minus_h_minus_one: mh,
                sign_d0,
                ref_sign_d0: d0,
                ref_sign_d_one_third: d3,
            })
        })
        .collect()
}

pub fn compute_table(id: u8) -> Result<Table> {
    match id {
        1 => {
            let rows = TABLE_1
                .iter()
                .map(|&(s, label, reference)| {
                    radius_row(vec![("s", label.to_string())], PhiSpec::lemniscate(s)?, reference)
                })
                .collect::<Result<_>>()?;
            Ok(Table {
                id,
                title: "Sc radius for phi = (1+sz)^2",
                rows: TableRows::Radius(rows),
            })
        }
        2 => Ok(Table {
            id,
            title: "h(1/3) against -h(-1) for phi = alpha + (1-alpha)e^z",
            rows: TableRows::Boundary(boundary_rows(&TABLE_2, PhiSpec::exp_blend)?),
        }),
        3 => Ok(Table {
            id,
            title: "h(1/3) against -h(-1) for phi = ((1+z)/(1-z))^alpha",
            rows: TableRows::Boundary(boundary_rows(&TABLE_3, PhiSpec::strongly)?),
        }),
        4 => {
            let mut rows = Vec::new();
            for (a, a_label, data) in [(1.0, "1", &TABLE_4_A_ONE), (0.5, "1/2", &TABLE_4_A_HALF)] {
                for &(b, reference) in data.iter() {
                    let params = vec![("A", a_label.to_string()), ("B", format!("{b}"))];
                    rows.push(radius_row(params, PhiSpec::janowski(a, b)?, reference)?);
                }
            }
            Ok(Table {
                id,
                title: "Sc radius for phi = (1+Az)/(1+Bz)",
                rows: TableRows::Radius(rows),
            })
        }
        _ => Err(BohrError::Parameter(format!(
            "table id must be 1, 2, 3 or 4, got {id}"
        ))),
    }
}

/// Plain decimal with `digits` significant digits.
pub fn fmt_sig(v: f64, digits: usize) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let magnitude = v.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - magnitude).max(0) as usize;
    format!("{v:.decimals$}")
}

fn fmt_diff(v: f64) -> String {
    if v == 0.0 {
        "0".to_string()
    } else {
        format!("{v:.2e}")
    }
}

impl Table {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        match &self.rows {
            TableRows::Radius(rows) => {
                let names: Vec<&str> = rows
                    .first()
                    .map_or(vec![], |r| r.params.iter().map(|p| p.0).collect());
                let _ = writeln!(out, "{},r_f,reference,diff", names.join(","));
                for row in rows {
                    let params: Vec<&str> = row.params.iter().map(|p| p.1.as_str()).collect();
                    let _ = writeln!(
                        out,
                        "{},{},{},{}",
                        params.join(","),
                        fmt_sig(row.r_f, OUTPUT_DIGITS),
                        row.reference.0,
                        fmt_diff(row.reference.truncated_diff(row.r_f))
                    );
                }
            }
            TableRows::Boundary(rows) => {
                let _ = writeln!(
                    out,
                    "alpha,h_one_third,reference,diff,minus_h_minus_one,reference,diff,sign_d0,reference,sign_d_one_third,reference"
                );
                for row in rows {
                    let c = &row.computed;
                    let _ = writeln!(
                        out,
                        "{},{},{},{},{},{},{},{},{},{},{}",
                        row.alpha,
                        fmt_sig(c.h_one_third, OUTPUT_DIGITS),
                        row.ref_h_one_third.0,
                        fmt_diff(row.ref_h_one_third.truncated_diff(c.h_one_third)),
                        fmt_sig(c.minus_h_minus_one, OUTPUT_DIGITS),
                        row.ref_minus_h_minus_one.0,
                        fmt_diff(row.ref_minus_h_minus_one.truncated_diff(c.minus_h_minus_one)),
                        row.sign_d0,
                        row.ref_sign_d0,
                        c.sign(),
                        row.ref_sign_d_one_third
                    );
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let round = |v: f64| -> Value {
            fmt_sig(v, OUTPUT_DIGITS)
                .parse::<f64>()
                .map_or(Value::Null, |x| json!(x))
        };
        let rows: Vec<Value> = match &self.rows {
            TableRows::Radius(rows) => rows
                .iter()
                .map(|row| {
                    let mut obj = serde_json::Map::new();
                    for (name, value) in &row.params {
                        obj.insert(name.to_string(), json!(value));
                    }
                    obj.insert("r_f".into(), round(row.r_f));
                    obj.insert("reference".into(), json!(row.reference.0));
                    obj.insert("diff".into(), json!(row.reference.truncated_diff(row.r_f)));
                    Value::Object(obj)
                })
                .collect(),
            TableRows::Boundary(rows) => rows
                .iter()
                .map(|row| {
                    let c = &row.computed;
                    json!({
                        "alpha": row.alpha,
                        "h_one_third": round(c.h_one_third),
                        "reference_h_one_third": row.ref_h_one_third.0,
                        "diff_h_one_third": row.ref_h_one_third.truncated_diff(c.h_one_third),
                        "minus_h_minus_one": round(c.minus_h_minus_one),
                        "reference_minus_h_minus_one": row.ref_minus_h_minus_one.0,
                        "diff_minus_h_minus_one": row.ref_minus_h_minus_one.truncated_diff(c.minus_h_minus_one),
                        "sign_d0": row.sign_d0.to_string(),
                        "reference_sign_d0": row.ref_sign_d0.to_string(),
                        "sign_d_one_third": c.sign().to_string(),
                        "reference_sign_d_one_third": row.ref_sign_d_one_third.to_string(),
                    })
                })
                .collect(),
        };
        json!({ "schema": JSON_SCHEMA, "table": self.id, "title": self.title, "rows": rows })
    }
}
