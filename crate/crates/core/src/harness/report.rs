//! Verdict reports.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::algebra::AlgebraElement;

use super::descriptor::MatrixJson;

/// Rounds to 12 significant digits; `-0.0` becomes `0.0`.
pub fn round_significant(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x.is_finite() { 0.0 } else { x };
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    if rounded == 0.0 {
        0.0
    } else {
        rounded
    }
}

/// An element as one rounded matrix per block.
pub fn serialize_element(a: &AlgebraElement) -> Vec<MatrixJson> {
    a.blocks()
        .iter()
        .map(|m| {
            (0..m.nrows())
                .map(|r| {
                    (0..m.ncols())
                        .map(|c| [round_significant(m[(r, c)].re), round_significant(m[(r, c)].im)])
                        .collect()
                })
                .collect()
        })
        .collect()
}

/// Outcome of one checker on one system.
///
/// `consistent` is true iff the conditions of the checked statement agree
/// as it asserts. Auxiliary agreements are reported separately; a failed
/// auxiliary check, like a falsification, is flagged.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerdictReport {
    pub check: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub conditions: BTreeMap<String, bool>,
    pub auxiliary: BTreeMap<String, bool>,
    pub spectra: BTreeMap<String, Vec<Vec<usize>>>,
    pub dimensions: BTreeMap<String, usize>,
    pub residuals: BTreeMap<String, f64>,
    pub witnesses: BTreeMap<String, Vec<MatrixJson>>,
    pub skipped: BTreeMap<String, String>,
    pub warnings: Vec<String>,
    pub consistent: bool,
    pub vacuous: bool,
    pub falsification: bool,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl VerdictReport {
    pub fn new(check: &str, tolerance: f64) -> Self {
        VerdictReport {
            check: check.to_string(),
            label: None,
            conditions: BTreeMap::new(),
            auxiliary: BTreeMap::new(),
            spectra: BTreeMap::new(),
            dimensions: BTreeMap::new(),
            residuals: BTreeMap::new(),
            witnesses: BTreeMap::new(),
            skipped: BTreeMap::new(),
            warnings: Vec::new(),
            consistent: true,
            vacuous: false,
            falsification: false,
            tolerance,
            seed: None,
        }
    }

    pub fn condition(&mut self, name: &str, value: bool) {
        self.conditions.insert(name.to_string(), value);
    }

    pub fn auxiliary(&mut self, name: &str, value: bool) {
        self.auxiliary.insert(name.to_string(), value);
    }

    pub fn residual(&mut self, name: &str, value: f64) {
        self.residuals.insert(name.to_string(), round_significant(value));
    }

    pub fn dimension(&mut self, name: &str, value: usize) {
        self.dimensions.insert(name.to_string(), value);
    }

    pub fn witness(&mut self, name: &str, u: &AlgebraElement) {
        self.witnesses.insert(name.to_string(), serialize_element(u));
    }

    /// Sets `consistent` to whether all recorded conditions agree.
    pub fn set_consistent_if_all_equal(&mut self) {
        let mut values = self.conditions.values();
        self.consistent = match values.next() {
            Some(first) => values.all(|v| v == first),
            None => true,
        };
    }

    pub fn auxiliary_consistent(&self) -> bool {
        self.auxiliary.values().all(|&v| v)
    }

    /// Inconsistency, falsification or a failed auxiliary agreement.
    pub fn is_flagged(&self) -> bool {
        !self.consistent || self.falsification || !self.auxiliary_consistent()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let status = if self.is_flagged() { "FLAGGED" } else { "ok" };
        let _ = write!(out, "{} [{status}]", self.check);
        if let Some(label) = &self.label {
            let _ = write!(out, " {label}");
        }
        out.push('\n');
        let _ = writeln!(
            out,
            "  consistent: {}  vacuous: {}  falsification: {}  tolerance: {:e}",
            self.consistent, self.vacuous, self.falsification, self.tolerance
        );
        let sections: [(&str, Vec<String>); 6] = [
            (
                "conditions",
                self.conditions.iter().map(|(k, v)| format!("{k} = {v}")).collect(),
            ),
            (
                "auxiliary",
                self.auxiliary.iter().map(|(k, v)| format!("{k} = {v}")).collect(),
            ),
            (
                "spectra",
                self.spectra.iter().map(|(k, v)| format!("{k} = {v:?}")).collect(),
            ),
            (
                "dimensions",
                self.dimensions.iter().map(|(k, v)| format!("{k} = {v}")).collect(),
            ),
            (
                "residuals",
                self.residuals.iter().map(|(k, v)| format!("{k} = {v:e}")).collect(),
            ),
            (
                "skipped",
                self.skipped.iter().map(|(k, v)| format!("{k}: {v}")).collect(),
            ),
        ];
        for (title, lines) in sections {
            if lines.is_empty() {
                continue;
            }
            let _ = writeln!(out, "  {title}:");
            for line in lines {
                let _ = writeln!(out, "    {line}");
            }
        }
        if !self.witnesses.is_empty() {
            let names: Vec<&str> = self.witnesses.keys().map(String::as_str).collect();
            let _ = writeln!(out, "  witnesses: {}", names.join(", "));
        }
        for w in &self.warnings {
            let _ = writeln!(out, "  warning: {w}");
        }
        out
    }
}
