//! Batch runs of every applicable checker over generated systems.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::Tolerance;
use crate::error::{Error, Result};

use super::checks::{run_check, Theorem};
use super::generate::{generate_action, Family, GeneratorConfig};
use super::report::VerdictReport;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteEntry {
    pub family: String,
    pub index: usize,
    pub label: String,
    pub blocks: Vec<usize>,
    pub group_order: usize,
    pub reports: Vec<VerdictReport>,
    /// Checkers not run, with the violated hypotheses.
    pub not_applicable: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SuiteSummary {
    pub systems: usize,
    pub reports: usize,
    pub inconsistent: usize,
    pub falsifications: usize,
    pub auxiliary_failures: usize,
    pub vacuous: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub count_per_family: usize,
    pub tolerance: f64,
    pub summary: SuiteSummary,
    pub entries: Vec<SuiteEntry>,
}

impl SuiteReport {
    pub fn is_flagged(&self) -> bool {
        let s = &self.summary;
        s.inconsistent + s.falsifications + s.auxiliary_failures > 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }
}

/// Runs every checker whose hypotheses hold on one system.
pub fn check_all(
    action: &crate::actions::GroupAction,
    label: &str,
    tol: Tolerance,
) -> Result<(Vec<VerdictReport>, BTreeMap<String, String>)> {
    let mut reports = Vec::new();
    let mut not_applicable = BTreeMap::new();
    for theorem in Theorem::ALL {
        match run_check(theorem, action, None, tol) {
            Ok(mut r) => {
                r.label = Some(label.to_string());
                reports.push(r);
            }
            Err(Error::Hypothesis { violations, .. }) => {
                not_applicable.insert(theorem.name().to_string(), violations.join("; "));
            }
            Err(e) => return Err(e),
        }
    }
    Ok((reports, not_applicable))
}

/// `count` systems per family, all checkers, in a stable order.
pub fn run_suite(seed: u64, count: usize, tol: Tolerance) -> Result<SuiteReport> {
    run_suite_with(seed, count, tol, &GeneratorConfig::default())
}

pub fn run_suite_with(seed: u64, count: usize, tol: Tolerance, config: &GeneratorConfig) -> Result<SuiteReport> {
    let jobs: Vec<(Family, usize)> = Family::ALL
        .into_iter()
        .flat_map(|f| (0..count).map(move |i| (f, i)))
        .collect();
    let entries = jobs
        .par_iter()
        .map(|&(family, index)| {
            let action = generate_action(family, seed, index, config)?;
            let label = format!("{}-{seed}-{index}", family.name());
            let (reports, not_applicable) = check_all(&action, &label, tol)?;
            Ok(SuiteEntry {
                family: family.name().to_string(),
                index,
                label,
                blocks: action.shape().dims().to_vec(),
                group_order: action.group().order(),
                reports,
                not_applicable,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut summary = SuiteSummary {
        systems: entries.len(),
        ..SuiteSummary::default()
    };
    for r in entries.iter().flat_map(|e| &e.reports) {
        summary.reports += 1;
        summary.inconsistent += usize::from(!r.consistent);
        summary.falsifications += usize::from(r.falsification);
        summary.auxiliary_failures += usize::from(!r.auxiliary_consistent());
        summary.vacuous += usize::from(r.vacuous);
    }
    Ok(SuiteReport {
        seed,
        count_per_family: count,
        tolerance: tol.epsilon(),
        summary,
        entries,
    })
}
