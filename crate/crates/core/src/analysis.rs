//! One-pass operator analysis: boundedness, essential norm, witnesses.
//!
//! Runs every check off a single grid sweep (the per-point jet
//! evaluations dominate the cost) and reuses the discrete quotient
//! sequences between the boundedness plateau test and the essential-norm
//! tail estimate. This is the entry point the CLI drives.

use num_complex::Complex64;
use serde::Serialize;

use crate::criteria::{
    assemble_discrete, continuous_from_sweep, crosscheck_criteria, discrete_sequences,
    membership_checks, op_sweep, sample_ns, BoundednessReport, OpEvaluator, OperatorSpec, Verdict,
};
use crate::error::CoreError;
use crate::essnorm::{
    compact_shortcut_report, continuous_ess_from_sweep, discrete_ess_from_sequences,
    witness_lower_bound, ContinuousEssReport, DiscreteEssReport, WitnessSample,
};
use crate::grid::{default_deltas, DiskGrid};

/// Knobs of a full run.
#[derive(Debug, Clone)]
pub struct AnalyzeOptions {
    pub n_max: u32,
    pub deltas: Vec<f64>,
    /// Fraction of the sampled `n` treated as limsup tail.
    pub tail_fraction: f64,
    /// Points fed to the witness certificate; empty skips it.
    pub witness_points: Vec<Complex64>,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions {
            n_max: crate::criteria::DEFAULT_N_MAX,
            deltas: default_deltas(),
            tail_fraction: 0.5,
            witness_points: Vec::new(),
        }
    }
}

/// Both essential-norm estimates.
#[derive(Debug, Clone, Serialize)]
pub struct EssnormEstimates {
    pub continuous: ContinuousEssReport,
    pub discrete: DiscreteEssReport,
}

/// Complete analysis of one operator.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub boundedness: BoundednessReport,
    /// `None` when the operator came out unbounded (the essential norm is
    /// undefined there).
    pub essnorm: Option<EssnormEstimates>,
    pub witnesses: Vec<WitnessSample>,
}

/// Validate, sweep once, and run the full check/estimate pipeline.
pub fn analyze(
    op: &OperatorSpec,
    options: &AnalyzeOptions,
    grid: &DiskGrid,
) -> Result<Analysis, CoreError> {
    op.validate(grid)?;
    let evaluator = OpEvaluator::new(op);
    let sweep = op_sweep(&evaluator, &op.params, grid)?;

    let continuous = continuous_from_sweep(&sweep, &op.params, grid);
    let memberships = membership_checks(&sweep, &evaluator, &op.params, grid);
    let sequences = if op.params.auto_compact() {
        Vec::new()
    } else {
        discrete_sequences(&sweep, &evaluator, &op.params, grid, &sample_ns(options.n_max))
    };
    let discrete = assemble_discrete(memberships, sequences.clone());
    let crosscheck = crosscheck_criteria(&continuous, &discrete);
    let verdict = match (continuous.verdict, discrete.verdict) {
        (Verdict::Bounded, Verdict::Bounded) => Verdict::Bounded,
        (Verdict::Unbounded, Verdict::Unbounded) => Verdict::Unbounded,
        _ => Verdict::Inconclusive,
    };
    let boundedness = BoundednessReport {
        params: op.params,
        continuous,
        discrete,
        crosscheck,
        verdict,
    };

    let essnorm = if verdict == Verdict::Unbounded {
        None
    } else if op.params.auto_compact() {
        Some(EssnormEstimates {
            continuous: compact_shortcut_report(),
            discrete: DiscreteEssReport {
                compact_shortcut: true,
                tails: Vec::new(),
                estimate: 0.0,
                compact: true,
            },
        })
    } else {
        Some(EssnormEstimates {
            continuous: continuous_ess_from_sweep(&sweep, &op.params, &options.deltas),
            discrete: discrete_ess_from_sequences(sequences, options.tail_fraction),
        })
    };

    let witnesses = if essnorm.is_some() && !options.witness_points.is_empty() {
        witness_lower_bound(op, &options.witness_points, grid)?
    } else {
        Vec::new()
    };

    Ok(Analysis {
        boundedness,
        essnorm,
        witnesses,
    })
}
