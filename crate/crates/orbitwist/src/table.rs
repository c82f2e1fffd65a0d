use std::fmt::Write;

use num_complex::Complex64;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Row {
    pub section: String,
    pub item: String,
    pub value: String,
}

/// Three-column output shared by every command.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Table {
    pub command: String,
    pub rows: Vec<Row>,
}

impl Table {
    pub fn new(command: &str) -> Self {
        Table { command: command.to_string(), rows: Vec::new() }
    }

    pub fn push(&mut self, section: &str, item: impl Into<String>, value: impl Into<String>) {
        self.rows.push(Row { section: section.to_string(), item: item.into(), value: value.into() });
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("section\titem\tvalue\n");
        for r in &self.rows {
            let _ = writeln!(out, "{}\t{}\t{}", clean(&r.section), clean(&r.item), clean(&r.value));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("tables serialize");
        s.push('\n');
        s
    }
}

fn clean(s: &str) -> String {
    s.replace(['\t', '\n'], " ")
}

fn real(x: f64) -> String {
    let r = (x * 1e9).round() / 1e9;
    if r == 0.0 {
        return "0".into();
    }
    let s = format!("{r:.9}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// Rounded to nine decimals so that float noise does not leak into the output.
pub fn complex(z: Complex64) -> String {
    let (re, im) = (real(z.re), real(z.im));
    match (re.as_str(), im.as_str()) {
        (_, "0") => re,
        ("0", _) => format!("{im}i"),
        _ if im.starts_with('-') => format!("{re}{im}i"),
        _ => format!("{re}+{im}i"),
    }
}

pub fn vector(v: &[Complex64]) -> String {
    format!("({})", v.iter().map(|z| complex(*z)).collect::<Vec<_>>().join(","))
}

pub fn list<T: ToString>(v: &[T]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}
