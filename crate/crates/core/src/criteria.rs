//! Boundedness decision for `C_φ^g : Λ^β → Λ^α`.
//!
//! Two independent routes:
//!
//! * continuous — `S_j = sup |G_j(z)| Ω_{j,β}(|φ(z)|) (1−|z|)^{J−α}` over
//!   the disk grid for every `j = 0..=J`; the operator is bounded iff all
//!   suprema are finite (no divergent sweep);
//! * discrete — membership checks `sup |G_j|(1−|z|)^{J−α} < ∞` below the
//!   critical index, and for `j = N..J` the monomial quotients
//!   `a_{j,n} = ‖G_j φ^n‖ / ‖z^n‖` whose running sup must plateau.
//!
//! The verdict is `bounded`/`unbounded` only when both routes agree;
//! anything marginal or contradictory is reported `inconclusive` — the
//! criteria are exact, the numerics are not, and silent misclassification
//! is worse than honesty.

use std::ops::Range;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::CoreError;
use crate::expr::HoloExpr;
use crate::gcoeff::{self, GCoefficientTable};
use crate::grid::{self, DiskGrid, SupEstimate};
use crate::par;
use crate::weights::{branch_for, monomial_norm, SpaceParam};

/// Self-map slack: grid values of |φ| above `1 + SELF_MAP_TOL` are rejected.
pub const SELF_MAP_TOL: f64 = 1e-9;

/// Default cap for the discrete monomial sequences.
pub const DEFAULT_N_MAX: u32 = 256;

/// Cross-comparison corridor for continuous vs discrete quantities.
pub const CROSSCHECK_CORRIDOR: (f64, f64) = (1.0 / 50.0, 50.0);

/// Plateau thresholds: tail/head sup ratio at most `PLATEAU_FLAT` counts
/// as settled; up to `PLATEAU_MARGINAL` is marginal; beyond that the
/// sequence is still growing.
pub const PLATEAU_FLAT: f64 = 1.05;
pub const PLATEAU_MARGINAL: f64 = 1.5;

/// A weighted composition operator together with its space parameters.
#[derive(Debug, Clone)]
pub struct OperatorSpec {
    pub g: HoloExpr,
    pub phi: HoloExpr,
    pub params: SpaceParam,
}

impl OperatorSpec {
    pub fn new(g: HoloExpr, phi: HoloExpr, alpha: f64, beta: f64) -> Self {
        OperatorSpec {
            g,
            phi,
            params: SpaceParam::new(alpha, beta),
        }
    }

    /// Self-map check: `|φ| ≤ 1 + 1e−9` over the grid.
    pub fn validate(&self, grid: &DiskGrid) -> Result<(), CoreError> {
        let check = |z: num_complex::Complex64| {
            let abs = self.phi.eval(z)?.norm();
            if abs > 1.0 + SELF_MAP_TOL {
                return Err(CoreError::SelfMapViolation { at: z, abs });
            }
            Ok(())
        };
        for k in 0..grid.levels().len() {
            grid.sweep_level(k, &check)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Bounded,
    Unbounded,
    Inconclusive,
}

/// Shared per-point samples: `|G_j(z)|`, `|φ(z)|`, `(1−|z|)^{J−α}`.
pub(crate) struct OpSweep {
    pub g_abs: Vec<Vec<f64>>,
    pub phi_abs: Vec<f64>,
    pub boundary_pow: Vec<f64>,
    pub levels: Vec<Range<usize>>,
    pub thetas: Vec<f64>,
}

/// Jet-backed point evaluator, shared by sweeps and radial refinement.
pub(crate) struct OpEvaluator<'a> {
    op: &'a OperatorSpec,
    table: GCoefficientTable,
}

impl<'a> OpEvaluator<'a> {
    pub fn new(op: &'a OperatorSpec) -> Self {
        OpEvaluator {
            op,
            table: gcoeff::build_table(op.params.j_order),
        }
    }

    /// `(|G_j(z)| for j = 0..=J, |φ(z)|)`, rejecting self-map violations.
    pub fn eval_at(&self, z: Complex64) -> Result<(Vec<f64>, f64), CoreError> {
        let values = gcoeff::eval_g(&self.table, &self.op.g, &self.op.phi, z)?;
        let phi_abs = self.op.phi.eval(z)?.norm();
        if phi_abs > 1.0 + SELF_MAP_TOL {
            return Err(CoreError::SelfMapViolation { at: z, abs: phi_abs });
        }
        Ok((values.into_iter().map(|v| v.norm()).collect(), phi_abs))
    }
}

/// Evaluate the operator on every grid point.
pub(crate) fn op_sweep(
    evaluator: &OpEvaluator<'_>,
    params: &SpaceParam,
    grid: &DiskGrid,
) -> Result<OpSweep, CoreError> {
    let j_count = params.j_order as usize + 1;
    let gamma = params.j_order as f64 - params.alpha;
    let total = grid.point_count();

    let mut sweep = OpSweep {
        g_abs: vec![Vec::with_capacity(total); j_count],
        phi_abs: Vec::with_capacity(total),
        boundary_pow: Vec::with_capacity(total),
        levels: Vec::with_capacity(grid.levels().len()),
        thetas: Vec::with_capacity(total),
    };

    for (k, level) in grid.levels().iter().enumerate() {
        let samples = grid.sweep_level(k, &|z| evaluator.eval_at(z))?;
        let w = (1.0 - level.r).powf(gamma);
        let start = sweep.phi_abs.len();
        for (i, (g_abs, phi_abs)) in samples.into_iter().enumerate() {
            for (j, v) in g_abs.into_iter().enumerate() {
                sweep.g_abs[j].push(v);
            }
            sweep.phi_abs.push(phi_abs);
            sweep.boundary_pow.push(w);
            sweep
                .thetas
                .push(std::f64::consts::TAU * i as f64 / level.m as f64);
        }
        sweep.levels.push(start..sweep.phi_abs.len());
    }
    Ok(sweep)
}

/// Weight argument clamp: |φ| may graze 1 within the self-map slack.
pub(crate) fn clamp_t(t: f64) -> f64 {
    t.min(1.0 - 1e-15)
}

/// One continuous condition `S_j`.
#[derive(Debug, Clone, Serialize)]
pub struct SupCondition {
    pub j: u32,
    pub sup: SupEstimate,
}

#[derive(Debug, Clone, Serialize)]
pub struct ContinuousReport {
    pub conditions: Vec<SupCondition>,
    pub verdict: Verdict,
}

/// Continuous boundedness sweep: `S_j` for every `j = 0..=J`.
pub fn continuous_check(op: &OperatorSpec, grid: &DiskGrid) -> Result<ContinuousReport, CoreError> {
    let evaluator = OpEvaluator::new(op);
    let sweep = op_sweep(&evaluator, &op.params, grid)?;
    Ok(continuous_from_sweep(&sweep, &op.params, grid))
}

pub(crate) fn continuous_from_sweep(
    sweep: &OpSweep,
    params: &SpaceParam,
    grid: &DiskGrid,
) -> ContinuousReport {
    let conditions: Vec<SupCondition> = (0..=params.j_order)
        .map(|j| {
            let branch = branch_for(j, params.beta);
            let per_level = sweep
                .levels
                .iter()
                .map(|range| {
                    let mut m = f64::NEG_INFINITY;
                    for i in range.clone() {
                        let v = sweep.g_abs[j as usize][i]
                            * branch.eval(clamp_t(sweep.phi_abs[i]))
                            * sweep.boundary_pow[i];
                        if v > m {
                            m = v;
                        }
                    }
                    m
                })
                .collect();
            SupCondition {
                j,
                sup: SupEstimate::from_levels(per_level, grid),
            }
        })
        .collect();
    let verdict = if conditions.iter().any(|c| c.sup.divergent) {
        Verdict::Unbounded
    } else {
        Verdict::Bounded
    };
    ContinuousReport { conditions, verdict }
}

/// Plateau classification of a discrete sequence's running sup.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Plateau {
    /// Tail sup within 5% of the head sup: settled.
    Flat,
    /// Tail sup in (1.05, 1.5] × head sup: too close to call.
    Marginal,
    /// Tail sup beyond 1.5 × head sup: still growing.
    Growing,
    /// Some quotient had a divergent numerator sweep.
    Divergent,
}

/// The quotient sequence for one `j ∈ N..J`.
#[derive(Debug, Clone, Serialize)]
pub struct DiscreteSequence {
    pub j: u32,
    /// `(n, a_{j,n})`; a divergent numerator records `inf`.
    pub values: Vec<(u32, f64)>,
    pub sup: f64,
    pub plateau: Plateau,
}

/// Membership condition `G_j ∈ Λ^{α−J}` for `j` below the critical index.
#[derive(Debug, Clone, Serialize)]
pub struct MembershipCheck {
    pub j: u32,
    pub sup: SupEstimate,
}

#[derive(Debug, Clone, Serialize)]
pub struct DiscreteReport {
    pub memberships: Vec<MembershipCheck>,
    pub sequences: Vec<DiscreteSequence>,
    pub verdict: Verdict,
}

/// Sample points for the discrete sequences: every `n ≤ 64`, then doubling
/// up to `n_max`, keeping the tail behavior at low cost.
pub fn sample_ns(n_max: u32) -> Vec<u32> {
    let mut ns: Vec<u32> = (0..=n_max.min(64)).collect();
    let mut n = 128u32;
    while n <= n_max {
        ns.push(n);
        n *= 2;
    }
    ns
}

fn classify_plateau(values: &[(u32, f64)]) -> Plateau {
    if values.iter().any(|&(_, a)| !a.is_finite()) {
        return Plateau::Divergent;
    }
    let len = values.len();
    if len < 4 {
        return Plateau::Flat;
    }
    let q = len.div_ceil(4);
    let head = values[..len - q]
        .iter()
        .map(|&(_, a)| a)
        .fold(0.0f64, f64::max);
    let tail = values[len - q..]
        .iter()
        .map(|&(_, a)| a)
        .fold(0.0f64, f64::max);
    if head == 0.0 {
        return if tail == 0.0 { Plateau::Flat } else { Plateau::Growing };
    }
    let ratio = tail / head;
    if ratio <= PLATEAU_FLAT {
        Plateau::Flat
    } else if ratio <= PLATEAU_MARGINAL {
        Plateau::Marginal
    } else {
        Plateau::Growing
    }
}

/// Supremum of `|G_j(z)| |φ(z)|^n (1−|z|)^{J−α}` with the same semantics
/// as `weights::growth_sup`: grid max, divergence fit, and (when the
/// sweep converges) golden-section sharpening along the argmax ray.
fn numerator_estimate(
    sweep: &OpSweep,
    evaluator: &OpEvaluator<'_>,
    params: &SpaceParam,
    grid: &DiskGrid,
    j: u32,
    n: u32,
    phi_pow: &[f64],
) -> SupEstimate {
    let g = &sweep.g_abs[j as usize];
    let mut best = f64::NEG_INFINITY;
    let mut best_level = 0usize;
    let mut best_theta = 0.0f64;
    let per_level: Vec<f64> = sweep
        .levels
        .iter()
        .enumerate()
        .map(|(k, range)| {
            let mut m = f64::NEG_INFINITY;
            let mut arg = range.start;
            for i in range.clone() {
                let v = g[i] * phi_pow[i] * sweep.boundary_pow[i];
                if v > m {
                    m = v;
                    arg = i;
                }
            }
            if m > best {
                best = m;
                best_level = k;
                best_theta = sweep.thetas[arg];
            }
            m
        })
        .collect();

    let mut est = SupEstimate::from_levels(per_level, grid);
    if !est.divergent && est.value > 0.0 {
        let gamma = params.j_order as f64 - params.alpha;
        let ray = |z: Complex64| -> Result<f64, CoreError> {
            let (g_abs, phi_abs) = evaluator.eval_at(z)?;
            Ok(g_abs[j as usize] * phi_abs.powi(n as i32) * (1.0 - z.norm()).powf(gamma))
        };
        let refined = grid::refine_along_ray(&ray, best_theta, grid.radial_bracket(best_level));
        est.value = est.value.max(refined);
    }
    est
}

/// The quotient sequences `a_{j,n} = ‖G_j φ^n‖_{Λ^{α−J}} / ‖z^n‖` for
/// `j ∈ max(N,0)..=J`. Also used for the discrete essential norm.
pub(crate) fn discrete_sequences(
    sweep: &OpSweep,
    evaluator: &OpEvaluator<'_>,
    params: &SpaceParam,
    grid: &DiskGrid,
    ns: &[u32],
) -> Vec<DiscreteSequence> {
    let js: Vec<u32> = params.weighted_range().collect();
    // One pass per n: |φ|^n is shared across j.
    let per_n: Vec<Vec<f64>> = par::map(ns, |&n| {
        let phi_pow: Vec<f64> = sweep.phi_abs.iter().map(|t| t.powi(n as i32)).collect();
        js.iter()
            .map(|&j| {
                let est = numerator_estimate(sweep, evaluator, params, grid, j, n, &phi_pow);
                if est.divergent {
                    f64::INFINITY
                } else {
                    est.value / monomial_norm(n, &branch_for(j, params.beta))
                }
            })
            .collect()
    });

    js.iter()
        .enumerate()
        .map(|(jj, &j)| {
            let values: Vec<(u32, f64)> = ns
                .iter()
                .zip(&per_n)
                .map(|(&n, row)| (n, row[jj]))
                .collect();
            let sup = values.iter().map(|&(_, a)| a).fold(0.0f64, f64::max);
            let plateau = classify_plateau(&values);
            DiscreteSequence { j, values, sup, plateau }
        })
        .collect()
}

/// Discrete boundedness check (membership conditions plus monomial
/// quotient sequences sampled up to `n_max`).
pub fn discrete_check(
    op: &OperatorSpec,
    n_max: u32,
    grid: &DiskGrid,
) -> Result<DiscreteReport, CoreError> {
    assert!(n_max >= 16, "the discrete criterion needs n_max >= 16");
    let evaluator = OpEvaluator::new(op);
    let sweep = op_sweep(&evaluator, &op.params, grid)?;
    Ok(discrete_from_sweep(&sweep, &evaluator, &op.params, grid, n_max))
}

/// Membership estimates for `j = 0..min(N−1, J)` (empty unless `N > 0`).
pub(crate) fn membership_checks(
    sweep: &OpSweep,
    evaluator: &OpEvaluator<'_>,
    params: &SpaceParam,
    grid: &DiskGrid,
) -> Vec<MembershipCheck> {
    let ones: Vec<f64> = vec![1.0; sweep.phi_abs.len()];
    let membership_top = params.n_critical.min(params.j_order as i64 + 1).max(0) as u32;
    (0..membership_top)
        .map(|j| MembershipCheck {
            j,
            sup: numerator_estimate(sweep, evaluator, params, grid, j, 0, &ones),
        })
        .collect()
}

pub(crate) fn assemble_discrete(
    memberships: Vec<MembershipCheck>,
    sequences: Vec<DiscreteSequence>,
) -> DiscreteReport {
    let membership_failed = memberships.iter().any(|m| m.sup.divergent);
    let worst = sequences
        .iter()
        .map(|s| s.plateau)
        .max_by_key(|p| match p {
            Plateau::Flat => 0,
            Plateau::Marginal => 1,
            Plateau::Growing => 2,
            Plateau::Divergent => 3,
        })
        .unwrap_or(Plateau::Flat);

    let verdict = if membership_failed || matches!(worst, Plateau::Growing | Plateau::Divergent) {
        Verdict::Unbounded
    } else if matches!(worst, Plateau::Marginal) {
        Verdict::Inconclusive
    } else {
        Verdict::Bounded
    };

    DiscreteReport {
        memberships,
        sequences,
        verdict,
    }
}

pub(crate) fn discrete_from_sweep(
    sweep: &OpSweep,
    evaluator: &OpEvaluator<'_>,
    params: &SpaceParam,
    grid: &DiskGrid,
    n_max: u32,
) -> DiscreteReport {
    let memberships = membership_checks(sweep, evaluator, params, grid);
    let sequences = if params.auto_compact() {
        Vec::new()
    } else {
        discrete_sequences(sweep, evaluator, params, grid, &sample_ns(n_max))
    };
    assemble_discrete(memberships, sequences)
}

/// One continuous-vs-discrete comparison.
#[derive(Debug, Clone, Serialize)]
pub struct CrossRatio {
    pub j: u32,
    pub continuous: f64,
    pub discrete: f64,
    /// `None` when skipped (divergent side or 0/0).
    pub ratio: Option<f64>,
    pub in_corridor: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComparabilityReport {
    pub ratios: Vec<CrossRatio>,
}

/// Ratio `S_j / sup_n a_{j,n}` per weighted index, flagged when it leaves
/// the `[1/50, 50]` corridor. Divergent sides and `0/0` are skipped.
pub fn crosscheck_criteria(
    cont: &ContinuousReport,
    disc: &DiscreteReport,
) -> ComparabilityReport {
    let ratios = disc
        .sequences
        .iter()
        .map(|seq| {
            let s = &cont.conditions[seq.j as usize];
            let skip = s.sup.divergent
                || seq.plateau == Plateau::Divergent
                || (s.sup.value == 0.0 && seq.sup == 0.0);
            let (ratio, in_corridor) = if skip {
                (None, None)
            } else {
                let r = s.sup.value / seq.sup;
                (
                    Some(r),
                    Some(r >= CROSSCHECK_CORRIDOR.0 && r <= CROSSCHECK_CORRIDOR.1),
                )
            };
            CrossRatio {
                j: seq.j,
                continuous: s.sup.value,
                discrete: seq.sup,
                ratio,
                in_corridor,
            }
        })
        .collect();
    ComparabilityReport { ratios }
}

/// Full boundedness report: both routes plus their cross-comparison.
#[derive(Debug, Clone, Serialize)]
pub struct BoundednessReport {
    pub params: SpaceParam,
    pub continuous: ContinuousReport,
    pub discrete: DiscreteReport,
    pub crosscheck: ComparabilityReport,
    pub verdict: Verdict,
}

/// Run both checks and combine: agreement decides, disagreement (or a
/// marginal plateau) is inconclusive.
pub fn boundedness_report(
    op: &OperatorSpec,
    n_max: u32,
    grid: &DiskGrid,
) -> Result<BoundednessReport, CoreError> {
    let evaluator = OpEvaluator::new(op);
    let sweep = op_sweep(&evaluator, &op.params, grid)?;
    let continuous = continuous_from_sweep(&sweep, &op.params, grid);
    let discrete = discrete_from_sweep(&sweep, &evaluator, &op.params, grid, n_max);
    let crosscheck = crosscheck_criteria(&continuous, &discrete);
    let verdict = match (continuous.verdict, discrete.verdict) {
        (Verdict::Bounded, Verdict::Bounded) => Verdict::Bounded,
        (Verdict::Unbounded, Verdict::Unbounded) => Verdict::Unbounded,
        _ => Verdict::Inconclusive,
    };
    Ok(BoundednessReport {
        params: op.params,
        continuous,
        discrete,
        crosscheck,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one() -> HoloExpr {
        HoloExpr::constant(1.0)
    }

    fn test_grid() -> DiskGrid {
        DiskGrid::new(10, 32)
    }

    #[test]
    fn identity_operator_is_bounded_with_unit_sup() {
        // g ≡ 1, φ = z, α = β = 0.5: S_0 = 0, S_1 = 1 (weights cancel)
        let op = OperatorSpec::new(one(), HoloExpr::z(), 0.5, 0.5);
        let report = continuous_check(&op, &test_grid()).unwrap();
        assert_eq!(report.verdict, Verdict::Bounded);
        assert_eq!(report.conditions[0].sup.value, 0.0);
        assert!((report.conditions[1].sup.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn half_map_is_bounded() {
        let phi = HoloExpr::constant(0.5) * HoloExpr::z();
        let op = OperatorSpec::new(one(), phi, 0.5, 0.5);
        let report = continuous_check(&op, &test_grid()).unwrap();
        assert_eq!(report.verdict, Verdict::Bounded);
        assert!(report.conditions[1].sup.value <= 1.0 + 1e-12);
    }

    #[test]
    fn cauchy_weight_is_unbounded_both_ways() {
        let g = one() / (one() - HoloExpr::z());
        let op = OperatorSpec::new(g, HoloExpr::z(), 0.5, 0.5);
        let report = boundedness_report(&op, 64, &test_grid()).unwrap();
        assert_eq!(report.continuous.verdict, Verdict::Unbounded);
        assert!(report.continuous.conditions[1].sup.divergent);
        assert_eq!(report.discrete.verdict, Verdict::Unbounded);
        assert_eq!(report.verdict, Verdict::Unbounded);
    }

    #[test]
    fn identity_discrete_quotients_are_one() {
        // Numerator and denominator are the same extremal problem.
        let op = OperatorSpec::new(one(), HoloExpr::z(), 0.5, 0.5);
        let report = discrete_check(&op, 64, &test_grid()).unwrap();
        assert_eq!(report.verdict, Verdict::Bounded);
        let seq = &report.sequences[0];
        assert_eq!(seq.j, 1);
        for &(n, a) in &seq.values {
            assert!((a - 1.0).abs() < 1e-9, "a_{{1,{n}}} = {a}");
        }
        assert_eq!(seq.plateau, Plateau::Flat);
    }

    #[test]
    fn half_map_quotients_decay_geometrically() {
        let phi = HoloExpr::constant(0.5) * HoloExpr::z();
        let op = OperatorSpec::new(one(), phi, 0.5, 0.5);
        let report = discrete_check(&op, 64, &test_grid()).unwrap();
        let seq = &report.sequences[0];
        let a16 = seq.values.iter().find(|&&(n, _)| n == 16).unwrap().1;
        let a32 = seq.values.iter().find(|&&(n, _)| n == 32).unwrap().1;
        assert!(a32 < a16 * 1e-3, "a16 = {a16}, a32 = {a32}");
        assert_eq!(seq.plateau, Plateau::Flat);
    }

    #[test]
    fn n_zero_quotient_is_plain_norm() {
        // a_{j,0} = ‖G_j‖_{Λ^{α−J}} since ‖z^0‖ = 1
        let op = OperatorSpec::new(one(), HoloExpr::z(), 0.5, 0.5);
        let report = discrete_check(&op, 64, &test_grid()).unwrap();
        let a0 = report.sequences[0].values[0];
        assert_eq!(a0.0, 0);
        assert!((a0.1 - 1.0).abs() < 1e-9);
    }

    #[test]
    fn auto_compact_regime_has_membership_only() {
        // α = 0.5, β = 2.3: J = 1 < N = 3, no weighted conditions
        let op = OperatorSpec::new(one(), HoloExpr::z(), 0.5, 2.3);
        let report = discrete_check(&op, 64, &test_grid()).unwrap();
        assert!(report.sequences.is_empty());
        assert_eq!(report.memberships.len(), 2); // j = 0, 1
        assert_eq!(report.verdict, Verdict::Bounded);
    }

    #[test]
    fn crosscheck_identity_ratio_is_one() {
        let op = OperatorSpec::new(one(), HoloExpr::z(), 0.5, 0.5);
        let report = boundedness_report(&op, 64, &test_grid()).unwrap();
        let r = &report.crosscheck.ratios[0];
        assert_eq!(r.j, 1);
        let ratio = r.ratio.unwrap();
        assert!((ratio - 1.0).abs() < 1e-9);
        assert_eq!(r.in_corridor, Some(true));
    }

    #[test]
    fn zero_symbol_crosscheck_skipped() {
        // g ≡ 0: every G_j ≡ 0, both sides zero, ratio skipped
        let op = OperatorSpec::new(HoloExpr::constant(0.0), HoloExpr::z(), 0.5, 0.5);
        let report = boundedness_report(&op, 64, &test_grid()).unwrap();
        assert_eq!(report.verdict, Verdict::Bounded);
        assert!(report.crosscheck.ratios[0].ratio.is_none());
    }

    #[test]
    fn verdict_invariant_under_symbol_scaling() {
        let grid = test_grid();
        for (g, phi) in [
            (one(), HoloExpr::z()),
            (one() / (one() - HoloExpr::z()), HoloExpr::z()),
        ] {
            let op = OperatorSpec::new(g.clone(), phi.clone(), 0.5, 0.5);
            let scaled = OperatorSpec::new(HoloExpr::constant(37.0) * g, phi, 0.5, 0.5);
            let a = boundedness_report(&op, 32, &grid).unwrap();
            let b = boundedness_report(&scaled, 32, &grid).unwrap();
            assert_eq!(a.verdict, b.verdict);
            for (ca, cb) in a
                .continuous
                .conditions
                .iter()
                .zip(&b.continuous.conditions)
            {
                if ca.sup.divergent {
                    assert!(cb.sup.divergent);
                } else {
                    assert!(
                        (cb.sup.value - 37.0 * ca.sup.value).abs() <= 1e-9 * cb.sup.value.max(1.0)
                    );
                }
            }
            for (sa, sb) in a.discrete.sequences.iter().zip(&b.discrete.sequences) {
                for (&(n, va), &(_, vb)) in sa.values.iter().zip(&sb.values) {
                    if va.is_finite() {
                        assert!(
                            (vb - 37.0 * va).abs() <= 1e-9 * vb.max(1.0),
                            "a_({},{n}) scaling: {va} vs {vb}",
                            sa.j
                        );
                    } else {
                        assert!(!vb.is_finite());
                    }
                }
            }
        }
    }

    #[test]
    fn self_map_violation_rejected() {
        let phi = HoloExpr::constant(2.0) * HoloExpr::z();
        let op = OperatorSpec::new(one(), phi, 0.5, 0.5);
        assert!(matches!(
            op.validate(&test_grid()),
            Err(CoreError::SelfMapViolation { .. })
        ));
    }

    #[test]
    fn sample_ns_dense_head_geometric_tail() {
        let ns = sample_ns(256);
        assert_eq!(ns[..65], (0..=64).collect::<Vec<_>>()[..]);
        assert_eq!(&ns[65..], &[128, 256]);
        assert_eq!(sample_ns(20), (0..=20).collect::<Vec<_>>());
    }
}
