//! Named end-to-end checks over grids of catalog instances.
//!
//! Each instance goes through construction, the Leibniz identity, the
//! p-filiform test, and finally either the known degree table (verified) or
//! the two-generator search.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::{make, reference_witness, Family, FamilySpec};
use crate::error::{invalid, Result};
use crate::gradations::{
    two_generator_search_with, verify_gradation, GradationReport, SearchOptions,
    DEFAULT_SEARCH_SAMPLES,
};
use crate::invariants::{
    characteristic_sequence_seeded, CharacteristicSequence, DEFAULT_SAMPLES, DEFAULT_SEED,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TheoremId {
    Thm31,
    Thm32,
    Thm33,
    Thm34,
}

impl TheoremId {
    pub const ALL: [TheoremId; 4] = [
        TheoremId::Thm31,
        TheoremId::Thm32,
        TheoremId::Thm33,
        TheoremId::Thm34,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TheoremId::Thm31 => "thm31",
            TheoremId::Thm32 => "thm32",
            TheoremId::Thm33 => "thm33",
            TheoremId::Thm34 => "thm34",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| {
                invalid(format!(
                    "unknown theorem id {s:?} (expected thm31, thm32, thm33 or thm34)"
                ))
            })
    }

    /// Smallest parameters allowed by each statement's hypotheses.
    pub fn default_grid(self) -> Vec<FamilySpec> {
        match self {
            TheoremId::Thm31 => vec![
                FamilySpec::lie(Family::L, 12, 4, vec![3, 5, 7]),
                FamilySpec::lie(Family::Q, 15, 4, vec![3, 5, 7]),
            ],
            TheoremId::Thm32 => vec![
                FamilySpec::lie(Family::TauNp1, 12, 4, vec![3, 5]),
                FamilySpec::lie(Family::TauNp2, 13, 4, vec![3, 5]),
            ],
            TheoremId::Thm33 => {
                vec![
                    FamilySpec::m4(10, 4, 0),
                    FamilySpec::m4(12, 6, 1),
                    FamilySpec::m(Family::M5, 10, 4),
                ]
            }
            TheoremId::Thm34 => vec![FamilySpec::m(Family::M3, 9, 5)],
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExpectedVerdict {
    MaximumLength,
    NoGradationFound,
}

/// Known answer for each family: `M1`, `M4`, `M5` admit gradations of
/// maximum length, `L`, `Q`, the τ families and `M3` do not. `M2` has no
/// settled answer and is rejected.
pub fn expected_verdict(family: Family) -> Result<ExpectedVerdict> {
    match family {
        Family::M1 | Family::M4 | Family::M5 => Ok(ExpectedVerdict::MaximumLength),
        Family::L | Family::Q | Family::TauNp1 | Family::TauNp2 | Family::M3 => {
            Ok(ExpectedVerdict::NoGradationFound)
        }
        Family::M2 => Err(invalid("no expected verdict is known for M2")),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InstanceStatus {
    Matched,
    Mismatch,
    Error,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceReport {
    pub spec: FamilySpec,
    pub expected: Option<ExpectedVerdict>,
    pub status: InstanceStatus,
    pub leibniz: Option<bool>,
    pub p_filiform: Option<bool>,
    pub characteristic_sequence: Option<CharacteristicSequence>,
    /// `"reference witness"` or `"two-generator search"`.
    pub method: Option<String>,
    pub verdict: Option<String>,
    pub gradation: Option<GradationReport>,
    /// Failing triple, construction error, or mismatch explanation.
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub index: usize,
    pub spec: FamilySpec,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineReport {
    pub theorem: TheoremId,
    pub seed: u64,
    pub samples: usize,
    pub instances: Vec<InstanceReport>,
    pub first_counterexample: Option<Counterexample>,
    pub exit_code: i32,
}

#[derive(Debug, Clone)]
pub struct PipelineOptions {
    pub seed: u64,
    /// Generic draws for the search.
    pub samples: usize,
    /// Defaults to `2n` per instance.
    pub kt_window: Option<i64>,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            seed: DEFAULT_SEED,
            samples: DEFAULT_SEARCH_SAMPLES,
            kt_window: None,
        }
    }
}

/// Runs every instance of the grid (in parallel) and assembles the report
/// in grid order. Exit code 2 if any instance could not be built, else 1 if
/// any instance disagrees with its expected verdict, else 0.
pub fn run_pipeline(
    id: TheoremId,
    grid: Option<Vec<FamilySpec>>,
    opts: &PipelineOptions,
) -> PipelineReport {
    let grid = grid.unwrap_or_else(|| id.default_grid());
    let instances: Vec<InstanceReport> = grid
        .into_par_iter()
        .map(|spec| run_instance(spec, opts))
        .collect();
    let first_counterexample = instances
        .iter()
        .enumerate()
        .find(|(_, r)| r.status != InstanceStatus::Matched)
        .map(|(index, r)| Counterexample {
            index,
            spec: r.spec.clone(),
            reason: r
                .detail
                .clone()
                .unwrap_or_else(|| "verdict mismatch".into()),
        });
    let exit_code = if instances.iter().any(|r| r.status == InstanceStatus::Error) {
        2
    } else if instances
        .iter()
        .any(|r| r.status == InstanceStatus::Mismatch)
    {
        1
    } else {
        0
    };
    PipelineReport {
        theorem: id,
        seed: opts.seed,
        samples: opts.samples,
        instances,
        first_counterexample,
        exit_code,
    }
}

fn run_instance(spec: FamilySpec, opts: &PipelineOptions) -> InstanceReport {
    let mut report = InstanceReport {
        spec: spec.clone(),
        expected: None,
        status: InstanceStatus::Error,
        leibniz: None,
        p_filiform: None,
        characteristic_sequence: None,
        method: None,
        verdict: None,
        gradation: None,
        detail: None,
    };
    if let Err(e) = fill_instance(&spec, opts, &mut report) {
        report.status = InstanceStatus::Error;
        report.detail = Some(e.to_string());
    }
    report
}

fn mismatch(report: &mut InstanceReport, detail: String) -> Result<()> {
    report.status = InstanceStatus::Mismatch;
    report.detail = Some(detail);
    Ok(())
}

fn fill_instance(
    spec: &FamilySpec,
    opts: &PipelineOptions,
    report: &mut InstanceReport,
) -> Result<()> {
    let expected = expected_verdict(spec.family)?;
    report.expected = Some(expected);
    let alg = make(spec)?;

    let leibniz = alg.check_leibniz();
    report.leibniz = Some(leibniz.is_leibniz());
    if let Some(triple) = leibniz.describe_first(&alg) {
        return mismatch(report, format!("Leibniz identity fails at {triple}"));
    }

    let seq = characteristic_sequence_seeded(&alg, DEFAULT_SAMPLES, opts.seed)?;
    let filiform = seq == CharacteristicSequence::p_filiform(spec.n, spec.p);
    report.p_filiform = Some(filiform);
    report.characteristic_sequence = Some(seq.clone());
    if !filiform {
        return mismatch(
            report,
            format!("characteristic sequence {seq} is not {}-filiform", spec.p),
        );
    }

    let gradation = match reference_witness(spec)? {
        Some(w) => {
            report.method = Some("reference witness".into());
            verify_gradation(&alg, &w)?
        }
        None => {
            report.method = Some("two-generator search".into());
            let search = SearchOptions {
                kt_window: opts.kt_window,
                samples: opts.samples,
                seed: opts.seed,
                generators: Some(spec.generator_hint()),
            };
            two_generator_search_with(&alg, &search)?
        }
    };
    let verdict = gradation.verdict_name();
    report.verdict = Some(verdict.to_string());
    let matched = match expected {
        ExpectedVerdict::MaximumLength => gradation.is_maximum_length(),
        ExpectedVerdict::NoGradationFound => verdict == "NoGradationFound",
    };
    report.gradation = Some(gradation);
    if matched {
        report.status = InstanceStatus::Matched;
        Ok(())
    } else {
        mismatch(report, format!("expected {expected:?}, got {verdict}"))
    }
}
