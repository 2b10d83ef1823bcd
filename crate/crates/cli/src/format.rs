//! Fixed numeric formatting and table emission.

use serde::Serialize;
use serde_json::{Map, Value};

use crate::config::Format;

pub const SCHEMA_VERSION: u32 = 1;

/// Magnitudes below this print as `0`; they are round-off from the matrix
/// pipeline, not signal.
pub const ZERO_SNAP: f64 = 1e-14;

/// Nine significant digits in the style of C's `%.9g`, with trailing zeros
/// removed.
pub fn fmt_num(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    if x.abs() < ZERO_SNAP {
        return "0".into();
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..9).contains(&exp) {
        let decimals = (8 - exp) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// Numeric table with optional `#` comment lines.
#[derive(Clone, Debug)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
    pub notes: Vec<String>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Table {
            columns,
            rows: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| *c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for note in &self.notes {
            out.push_str("# ");
            out.push_str(note);
            out.push('\n');
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&x| fmt_num(x)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    fn rows_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> = self
                        .columns
                        .iter()
                        .zip(row)
                        .map(|(c, &x)| (c.to_string(), json_num(x)))
                        .collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }

    /// Serializes the table alongside the effective configuration.
    pub fn render<C: Serialize>(
        &self,
        format: Format,
        command: &str,
        config: &C,
        extra: Map<String, Value>,
    ) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => {
                let mut doc = envelope(command, config);
                doc.extend(extra);
                if !self.notes.is_empty() {
                    doc.insert("notes".into(), self.notes.clone().into());
                }
                doc.insert("columns".into(), self.columns.clone().into());
                doc.insert("rows".into(), self.rows_json());
                to_json(&Value::Object(doc))
            }
        }
    }
}

pub fn envelope<C: Serialize>(command: &str, config: &C) -> Map<String, Value> {
    let mut doc = Map::new();
    doc.insert("schema_version".into(), SCHEMA_VERSION.into());
    doc.insert("command".into(), command.into());
    doc.insert(
        "config".into(),
        serde_json::to_value(config).expect("config serializes"),
    );
    doc
}

/// JSON has no infinities; they become `null`.
pub fn json_num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

pub fn to_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("value serializes");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_significant_digits() {
        assert_eq!(fmt_num(1.0), "1");
        assert_eq!(fmt_num(0.5), "0.5");
        assert_eq!(fmt_num(0.8535533905932737), "0.853553391");
        assert_eq!(fmt_num(-std::f64::consts::FRAC_1_SQRT_2), "-0.707106781");
        assert_eq!(fmt_num(std::f64::consts::TAU), "6.28318531");
        assert_eq!(fmt_num(123456789.0), "123456789");
        assert_eq!(fmt_num(1.5e9), "1.5e9");
        assert_eq!(fmt_num(2.5e-7), "2.5e-7");
        assert_eq!(fmt_num(0.000123), "0.000123");
        assert_eq!(fmt_num(0.5000000000000001), "0.5");
        assert_eq!(fmt_num(99999999.99), "100000000");
    }

    #[test]
    fn round_off_prints_as_zero() {
        assert_eq!(fmt_num(6.123233995736766e-17), "0");
        assert_eq!(fmt_num(-0.0), "0");
        assert_eq!(fmt_num(f64::INFINITY), "inf");
    }

    #[test]
    fn csv_layout() {
        let mut t = Table::new(vec!["a", "b"]);
        t.push(vec![0.0, 1.0]);
        t.notes.push("note".into());
        assert_eq!(t.to_csv(), "# note\na,b\n0,1\n");
        assert_eq!(t.column("b"), Some(vec![1.0]));
        assert_eq!(t.column("c"), None);
    }
}
