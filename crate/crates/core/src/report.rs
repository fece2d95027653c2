//! JSON run reports shared by the CLI and the test suites.

use serde::Serialize;

use crate::error::Result;
use crate::protocol::{PartyId, ResourceLedger, Transcript};
use crate::scalar::Real;
use crate::scenario::{Scenario, ScenarioRun};
use crate::verify::{chi_square_uniform, BatchReport, ChiSquareReport, OperatorFamilyReport};

/// Minimum fidelity for a protocol run to pass.
pub const FIDELITY_TOL: f64 = 1e-9;
/// Minimum fidelity for a remote measurement's post-state to pass.
pub const MEASURE_FIDELITY_TOL: f64 = 1e-10;
/// Largest eigenoperator residual accepted as zero.
pub const RESIDUAL_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Branch {
    pub outcome: usize,
    pub prob: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChannelChiSquare {
    pub from: PartyId,
    pub to: PartyId,
    #[serde(flatten)]
    pub test: ChiSquareReport,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub scenario: String,
    pub seed: u64,
    pub dims: Vec<usize>,
    pub angles: Vec<f64>,
    /// `null` for reports without a protocol run.
    pub fidelity: Option<f64>,
    pub ledger: ResourceLedger,
    pub transcript: Transcript,
    pub pass: bool,
    /// Every measurement of the reported run with its Born probability.
    pub branches: Vec<Branch>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outcome: Option<i8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chi_square: Option<Vec<ChannelChiSquare>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub operator_family: Option<OperatorFamilyReport>,
}

fn tolerance<T: Real>(scenario: &Scenario<T>) -> f64 {
    match scenario {
        Scenario::Measure { .. } => MEASURE_FIDELITY_TOL,
        _ => FIDELITY_TOL,
    }
}

impl Report {
    /// Report of a single run.
    pub fn from_run<T: Real>(scenario: &Scenario<T>, seed: u64, run: &ScenarioRun<T>) -> Self {
        let fidelity = run.fidelity.as_f64();
        Self {
            scenario: scenario.name().to_string(),
            seed,
            dims: scenario.system_dims(),
            angles: scenario.angles().iter().map(|a| a.as_f64()).collect(),
            fidelity: Some(fidelity),
            ledger: run.ledger.clone(),
            transcript: run.transcript.clone(),
            pass: fidelity >= 1.0 - tolerance(scenario),
            branches: run.branch_record.iter().map(|&(outcome, p)| Branch { outcome, prob: p.as_f64() }).collect(),
            outcome: run.outcome,
            chi_square: None,
            operator_family: None,
        }
    }

    /// Statistics report: `sample` is one representative run, `batch` the
    /// aggregated trials. Passes iff every channel is uniform and every
    /// trial reached the fidelity bound.
    pub fn from_batch<T: Real>(
        scenario: &Scenario<T>,
        seed: u64,
        sample: &ScenarioRun<T>,
        batch: &BatchReport,
    ) -> Result<Self> {
        let mut report = Self::from_run(scenario, seed, sample);
        report.scenario = format!("stats:{}", scenario.name());
        let tests = batch
            .channels
            .iter()
            .map(|c| Ok(ChannelChiSquare { from: c.from, to: c.to, test: chi_square_uniform(&c.counts)? }))
            .collect::<Result<Vec<_>>>()?;
        report.fidelity = Some(batch.min_fidelity);
        report.pass = batch.min_fidelity >= 1.0 - tolerance(scenario) && tests.iter().all(|t| t.test.pass);
        report.chi_square = Some(tests);
        Ok(report)
    }

    /// Eigenoperator counting report.
    pub fn from_family(seed: u64, family: OperatorFamilyReport) -> Self {
        Self {
            scenario: "count-ops".to_string(),
            seed,
            dims: vec![family.dims.0; family.dims.1],
            angles: Vec::new(),
            fidelity: None,
            ledger: ResourceLedger::default(),
            transcript: Transcript::default(),
            pass: family.independent == family.expected && family.max_residual <= RESIDUAL_TOL,
            branches: Vec::new(),
            outcome: None,
            chi_square: None,
            operator_family: Some(family),
        }
    }
}
