//! The weight family `Ω_{j,β}`, space parameters, monomial norms in
//! weighted sup-spaces, and weighted growth suprema.
//!
//! For `N = ⌈β⌉` (the critical index) the branches are
//!
//! ```text
//! Ω_{j,β} ≡ 1                    N > 0 and j ≤ N − 1,
//! Ω_{j,β}(t) = (1−t)^{β−j}       j ≥ N and (β < N, or j > N),
//! Ω_{N,β}(t) = log(e/(1−t))      β = N at j = N.
//! ```
//!
//! Every non-unit branch is continuous, increasing, and unbounded on
//! `[0, 1)`. For integer β the critical index equals β and the log
//! branch activates at `j = N`.

use serde::Serialize;

use crate::error::CoreError;
use crate::expr::HoloExpr;
use crate::grid::{self, DiskGrid, SupEstimate};

/// Smallest non-negative integer strictly greater than `alpha`.
///
/// This is the derivative order of the Lipschitz-scale norm; for integer
/// `alpha` it is `alpha + 1`.
pub fn smallest_j_above(alpha: f64) -> u32 {
    ((alpha.floor() as i64) + 1).max(0) as u32
}

/// Smallest integer `N ≥ beta`. May be negative.
pub fn critical_index(beta: f64) -> i64 {
    beta.ceil() as i64
}

/// Source space exponent β, target exponent α, and the derived integers:
/// `j_order` = smallest non-negative J > α, `n_critical` = smallest N ≥ β.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpaceParam {
    pub alpha: f64,
    pub beta: f64,
    pub j_order: u32,
    pub n_critical: i64,
}

impl SpaceParam {
    pub fn new(alpha: f64, beta: f64) -> Self {
        let p = SpaceParam {
            alpha,
            beta,
            j_order: smallest_j_above(alpha),
            n_critical: critical_index(beta),
        };
        if alpha > -1.0 {
            debug_assert!(p.j_order as f64 - 1.0 <= alpha && alpha < p.j_order as f64);
        }
        debug_assert!(p.n_critical as f64 - 1.0 < beta && beta <= p.n_critical as f64);
        p
    }

    /// The weighted conditions run over `j = max(N, 0) ..= J`; empty when
    /// `N > J` (the automatically-compact regime).
    pub fn weighted_range(&self) -> std::ops::RangeInclusive<u32> {
        let lo = self.n_critical.max(0) as u32;
        lo..=self.j_order
    }

    /// `N > J`: every weighted condition is vacuous.
    pub fn auto_compact(&self) -> bool {
        self.n_critical > self.j_order as i64
    }
}

/// One branch of the weight family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum WeightBranch {
    Unit,
    /// `(1−t)^exponent` with `exponent = β − j < 0`.
    PowerGap { exponent: f64 },
    /// `log(e/(1−t))`.
    LogBranch,
}

/// Branch of `Ω_{j,β}` for `0 ≤ j ≤ J`.
pub fn branch_for(j: u32, beta: f64) -> WeightBranch {
    let n = critical_index(beta);
    if n > 0 && (j as i64) < n {
        WeightBranch::Unit
    } else if beta == n as f64 && j as i64 == n {
        WeightBranch::LogBranch
    } else {
        WeightBranch::PowerGap {
            exponent: beta - j as f64,
        }
    }
}

impl WeightBranch {
    /// Evaluate at `t ∈ [0, 1)` (not range-checked; see [`omega`]).
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            WeightBranch::Unit => 1.0,
            WeightBranch::PowerGap { exponent } => (1.0 - t).powf(*exponent),
            WeightBranch::LogBranch => 1.0 - (1.0 - t).ln(),
        }
    }
}

/// `Ω_{j,β}(t)` with domain check.
pub fn omega(j: u32, beta: f64, t: f64) -> Result<f64, CoreError> {
    if !(0.0..1.0).contains(&t) {
        return Err(CoreError::WeightDomain { t });
    }
    Ok(branch_for(j, beta).eval(t))
}

/// Golden-section maximization of a unimodal function on `[a, b]` down to
/// interval width `tol`. Returns `(argmax, max)`.
pub fn golden_max<F>(f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64)
where
    F: Fn(f64) -> f64,
{
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while b - a > tol {
        if f1 > f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
    }
    if f1 > f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// `‖z^n‖` in the weighted sup-space of `w`: `sup_{t∈[0,1)} t^n / ω(t)`.
///
/// * Unit: 1.
/// * PowerGap with `γ = −exponent > 0`: the closed form
///   `n^n γ^γ / (n+γ)^{n+γ}` (max of `t^n (1−t)^γ` at `t = n/(n+γ)`),
///   evaluated in log space through `ln_1p` so large `n` stays accurate.
/// * LogBranch: golden-section maximization of the unimodal
///   `t^n / log(e/(1−t))`.
pub fn monomial_norm(n: u32, w: &WeightBranch) -> f64 {
    match w {
        WeightBranch::Unit => 1.0,
        WeightBranch::PowerGap { exponent } => {
            let gamma = -exponent;
            debug_assert!(gamma > 0.0, "PowerGap exponent must be negative");
            if n == 0 {
                return 1.0;
            }
            let nf = n as f64;
            // ln value = −n·ln(1 + γ/n) + γ·ln(γ/(n+γ))
            (-nf * (gamma / nf).ln_1p() + gamma * (gamma / (nf + gamma)).ln()).exp()
        }
        WeightBranch::LogBranch => {
            if n == 0 {
                return 1.0;
            }
            let h = |t: f64| t.powi(n as i32) / (1.0 - (1.0 - t).ln());
            golden_max(h, 0.0, 1.0 - 1e-15, 1e-12).1
        }
    }
}

/// Weighted growth supremum `sup |h(z)| (1−|z|)^γ` over the grid, with the
/// per-level curve for divergence diagnosis.
///
/// On convergent sweeps the grid max is sharpened by a golden-section pass
/// along the argmax ray inside its dyadic radial bracket, so radially
/// extremal problems (the monomial-norm numerators) resolve to machine
/// precision instead of dyadic-radius precision.
pub fn growth_sup(h: &HoloExpr, gamma: f64, grid: &DiskGrid) -> Result<SupEstimate, CoreError> {
    let point_fn = |z: num_complex::Complex64| -> Result<f64, CoreError> {
        Ok(h.eval(z)?.norm() * (1.0 - z.norm()).powf(gamma))
    };
    let (mut est, argmax) = grid::sup_scan(&point_fn, grid)?;
    if !est.divergent {
        if let Some(arg) = argmax {
            let refined =
                grid::refine_along_ray(&point_fn, arg.theta, grid.radial_bracket(arg.level));
            est.value = est.value.max(refined);
        }
    }
    Ok(est)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn branch_table_matches_piecewise_definition() {
        // Exhaustive over β ∈ {−1.5, −1, 0, 0.5, 1, 1.5, 2}, J ∈ 0..4, all j.
        for &beta in &[-1.5, -1.0, 0.0, 0.5, 1.0, 1.5, 2.0] {
            let n = critical_index(beta);
            for j_order in 0..=4u32 {
                for j in 0..=j_order {
                    let got = branch_for(j, beta);
                    let expect = if n > 0 && (j as i64) <= (n - 1).min(j_order as i64) {
                        WeightBranch::Unit
                    } else if beta == n as f64 && j as i64 == n {
                        WeightBranch::LogBranch
                    } else {
                        WeightBranch::PowerGap {
                            exponent: beta - j as f64,
                        }
                    };
                    assert_eq!(got, expect, "β={beta}, J={j_order}, j={j}");
                    if let WeightBranch::PowerGap { exponent } = got {
                        assert!(exponent < 0.0, "gap exponent negative: β={beta}, j={j}");
                    }
                }
            }
        }
    }

    #[test]
    fn derived_integers() {
        assert_eq!(smallest_j_above(0.5), 1);
        assert_eq!(smallest_j_above(1.0), 2);
        assert_eq!(smallest_j_above(0.0), 1);
        assert_eq!(smallest_j_above(-0.5), 0);
        assert_eq!(smallest_j_above(-1.0), 0);
        assert_eq!(critical_index(0.5), 1);
        assert_eq!(critical_index(1.0), 1);
        assert_eq!(critical_index(0.0), 0);
        assert_eq!(critical_index(-0.5), 0);
        assert_eq!(critical_index(-1.5), -1);
        assert_eq!(critical_index(2.3), 3);
    }

    #[test]
    fn omega_spot_values() {
        // j = 0, β = 1.5: unit branch (j ≤ N−1 = 1)
        assert_eq!(omega(0, 1.5, 0.9).unwrap(), 1.0);
        // j = 1, β = 0.5 at t = 0: (1−0)^{−1/2} = 1
        assert_eq!(omega(1, 0.5, 0.0).unwrap(), 1.0);
        // j = 1, β = 1 at t = 1 − 1/e: log(e·e) = 2
        let t = 1.0 - (-1.0f64).exp();
        assert!((omega(1, 1.0, t).unwrap() - 2.0).abs() < 1e-12);
        assert!(omega(0, 0.0, 1.0).is_err());
        assert!(omega(0, 0.0, -0.1).is_err());
    }

    #[test]
    fn non_unit_weights_increase_unbounded() {
        for &beta in &[-1.0, -0.5, 0.0, 0.5, 1.0, 1.5, 2.0] {
            for j in 0..=4u32 {
                let w = branch_for(j, beta);
                if w == WeightBranch::Unit {
                    continue;
                }
                let mut prev = 0.0;
                for i in 0..400 {
                    let t = i as f64 / 400.0;
                    let v = w.eval(t);
                    assert!(v >= prev, "ω nondecreasing: β={beta}, j={j}, t={t}");
                    prev = v;
                }
                assert!(w.eval(1.0 - 1e-12) > 20.0, "ω unbounded: β={beta}, j={j}");
            }
        }
    }

    #[test]
    fn monomial_norm_trivial_cases() {
        assert_eq!(monomial_norm(0, &branch_for(1, 0.5)), 1.0);
        assert_eq!(monomial_norm(7, &WeightBranch::Unit), 1.0);
        // n = 1, γ = 1: max of t(1−t) = 1/4
        let w = WeightBranch::PowerGap { exponent: -1.0 };
        assert!((monomial_norm(1, &w) - 0.25).abs() < 1e-14);
    }

    #[test]
    fn power_gap_closed_form_vs_scan() {
        let w = WeightBranch::PowerGap { exponent: -0.5 };
        for &n in &[1u32, 4, 16, 300] {
            let closed = monomial_norm(n, &w);
            let mut scan: f64 = 0.0;
            for i in 0..200_000 {
                let t = i as f64 / 200_000.0;
                scan = scan.max(t.powi(n as i32) * (1.0 - t).sqrt());
            }
            assert!((closed - scan).abs() / closed < 1e-4, "n = {n}");
        }
    }

    #[test]
    fn log_branch_golden_agrees_with_scan() {
        let w = WeightBranch::LogBranch;
        for &n in &[1u32, 8, 64, 1024] {
            let golden = monomial_norm(n, &w);
            let mut scan: f64 = 0.0;
            for i in 0..10_000 {
                let t = i as f64 / 10_000.0;
                scan = scan.max(t.powi(n as i32) / (1.0 - (1.0 - t).ln()));
            }
            assert!(golden >= scan - 1e-12, "golden below scan at n = {n}");
            assert!((golden - scan) / golden < 1e-3, "n = {n}");
        }
    }

    #[test]
    fn monomial_asymptotics_power_gap() {
        // ‖z^n‖ · (n+1)^{j−β} confined to a fixed corridor
        let w = WeightBranch::PowerGap { exponent: -0.5 };
        let mut lo = f64::INFINITY;
        let mut hi: f64 = 0.0;
        let mut n = 16u32;
        while n <= 4096 {
            let ratio = monomial_norm(n, &w) * ((n + 1) as f64).sqrt();
            lo = lo.min(ratio);
            hi = hi.max(ratio);
            n *= 2;
        }
        assert!(lo > 0.0 && hi / lo < 10.0, "corridor [{lo}, {hi}]");
    }

    #[test]
    fn monomial_asymptotics_log_branch() {
        let w = WeightBranch::LogBranch;
        let mut lo = f64::INFINITY;
        let mut hi: f64 = 0.0;
        let mut n = 16u32;
        while n <= 4096 {
            let ratio = monomial_norm(n, &w) * ((n + 2) as f64).ln();
            lo = lo.min(ratio);
            hi = hi.max(ratio);
            n *= 2;
        }
        assert!(lo > 0.0 && hi / lo < 10.0, "corridor [{lo}, {hi}]");
    }

    #[test]
    fn growth_sup_constant() {
        let h = HoloExpr::constant(1.0);
        let est = growth_sup(&h, 0.5, &DiskGrid::default()).unwrap();
        assert!(!est.divergent);
        assert!((est.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn growth_sup_cauchy_kernel_bounded() {
        // |1/(1−z)|(1−|z|) ≤ 1 with equality along the positive axis
        let h = HoloExpr::constant(1.0) / (HoloExpr::constant(1.0) - HoloExpr::z());
        let est = growth_sup(&h, 1.0, &DiskGrid::default()).unwrap();
        assert!(!est.divergent);
        assert!((est.value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn growth_sup_double_pole_divergent() {
        let h = (HoloExpr::constant(1.0) - HoloExpr::z()).int_pow(-2);
        let est = growth_sup(&h, 1.0, &DiskGrid::default()).unwrap();
        assert!(est.divergent);
        assert!((est.growth_exponent + 1.0).abs() < 0.05);
    }

    #[test]
    fn growth_sup_refinement_hits_interior_peak() {
        // |z|^8 (1−|z|): true max off the dyadic radii
        let h = HoloExpr::z().int_pow(8);
        let est = growth_sup(&h, 1.0, &DiskGrid::default()).unwrap();
        let expect = monomial_norm(8, &WeightBranch::PowerGap { exponent: -1.0 });
        assert!((est.value - expect).abs() / expect < 1e-10);
    }

    #[test]
    fn space_param_ranges() {
        let p = SpaceParam::new(0.5, 2.3);
        assert_eq!(p.j_order, 1);
        assert_eq!(p.n_critical, 3);
        assert!(p.auto_compact());
        assert!(p.weighted_range().is_empty());

        let p = SpaceParam::new(0.5, 0.5);
        assert_eq!((p.j_order, p.n_critical), (1, 1));
        assert_eq!(p.weighted_range(), 1..=1);

        let p = SpaceParam::new(-0.5, -0.5);
        assert_eq!((p.j_order, p.n_critical), (0, 0));
        assert_eq!(p.weighted_range(), 0..=0);
    }
}
