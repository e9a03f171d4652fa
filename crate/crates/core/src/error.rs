use num_complex::Complex64;
use thiserror::Error;

/// Errors surfaced by jet evaluation and the operator pipeline.
#[derive(Debug, Clone, Error)]
pub enum CoreError {
    /// Division by a series with (numerically) vanishing constant term.
    #[error("pole at z = {at}: division by `{expr}` whose value there is below 1e-300")]
    PoleAtPoint { at: Complex64, expr: String },

    /// Principal log/power applied to a non-positive real argument.
    #[error("branch cut at z = {at}: argument of `{expr}` is non-positive real ({value})")]
    BranchCut {
        at: Complex64,
        expr: String,
        value: Complex64,
    },

    /// Jet composition with mismatched expansion points.
    #[error("jet composition center mismatch: outer at {outer}, inner value {inner} (|Δ| = {dist:.3e} > 1e-12)")]
    CenterMismatch {
        outer: Complex64,
        inner: Complex64,
        dist: f64,
    },

    /// φ is not a self-map of the disk at the sampled point.
    #[error("self-map violation: |φ({at})| = {abs} exceeds 1 + 1e-9")]
    SelfMapViolation { at: Complex64, abs: f64 },

    /// Weight evaluated outside its domain [0, 1).
    #[error("weight argument t = {t} outside [0, 1)")]
    WeightDomain { t: f64 },

    /// Essential norm requested for an operator that failed the boundedness check.
    #[error("essential norm undefined for unbounded operator")]
    UnboundedOperator,
}
