//! Dyadic disk grids and empirical supremum estimation.
//!
//! Radial levels `r_k = 1 − 2^{−k}` are geometric in `1 − r`, so the
//! power/log weights this library sweeps become straight lines in the
//! per-level log-log curve and divergence shows up as a fitted slope.
//! Angular resolution doubles per level to keep boundary oscillation of
//! `φ^n` resolved for the default `n` range.
//!
//! Estimates here are empirical: max over sampled points plus refinement
//! diagnostics, never certified bounds.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::CoreError;
use crate::expr::HoloExpr;
use crate::weights::smallest_j_above;

/// Fitted per-level slope below which a sweep counts as divergent.
pub const DIVERGENCE_SLOPE: f64 = -0.1;

/// Restricted sets smaller than this are treated as sampling noise when
/// picking the limsup estimate (the full curve is always reported).
pub const LIMSUP_MIN_POINTS: usize = 32;

/// One radial level: circle of radius `r` sampled at `m` angles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridLevel {
    pub r: f64,
    pub m: usize,
}

/// Dyadic polar grid on the unit disk.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiskGrid {
    levels: Vec<GridLevel>,
}

impl DiskGrid {
    /// Levels `r_k = 1 − 2^{−k}`, `k = 0..=k_max`, with
    /// `m_k = max(angular_base, 2^{k+4})` angles per level.
    pub fn new(k_max: usize, angular_base: usize) -> Self {
        let levels = (0..=k_max)
            .map(|k| GridLevel {
                r: 1.0 - 0.5f64.powi(k as i32),
                m: angular_base.max(16usize << k),
            })
            .collect();
        DiskGrid { levels }
    }

    /// Grid from explicit levels (strictly increasing radii in `[0, 1)`).
    pub fn from_levels(levels: Vec<GridLevel>) -> Self {
        assert!(!levels.is_empty());
        assert!(levels.windows(2).all(|w| w[0].r < w[1].r));
        assert!(levels.iter().all(|l| (0.0..1.0).contains(&l.r) && l.m > 0));
        DiskGrid { levels }
    }

    pub fn levels(&self) -> &[GridLevel] {
        &self.levels
    }

    pub fn point_count(&self) -> usize {
        self.levels.iter().map(|l| l.m).sum()
    }

    /// Points of level `k` in angular order.
    pub fn level_points(&self, k: usize) -> Vec<Complex64> {
        let GridLevel { r, m } = self.levels[k];
        (0..m)
            .map(|l| Complex64::from_polar(r, std::f64::consts::TAU * l as f64 / m as f64))
            .collect()
    }

    /// Evaluate `f` on every point of level `k`, in angular order. Point
    /// construction happens inside the workers, so the whole level sweep
    /// parallelizes.
    pub(crate) fn sweep_level<T, F>(&self, k: usize, f: &F) -> Result<Vec<T>, CoreError>
    where
        T: Send,
        F: Fn(Complex64) -> Result<T, CoreError> + Sync + Send,
    {
        let GridLevel { r, m } = self.levels[k];
        crate::par::try_map_range(m, |l| {
            f(Complex64::from_polar(
                r,
                std::f64::consts::TAU * l as f64 / m as f64,
            ))
        })
    }

    /// Bracket `[r_{k−1}, r_{k+1}]` around level `k` for radial refinement;
    /// past the outermost level the bracket extends half a dyadic step.
    pub(crate) fn radial_bracket(&self, k: usize) -> (f64, f64) {
        let lo = if k == 0 { 0.0 } else { self.levels[k - 1].r };
        let hi = if k + 1 < self.levels.len() {
            self.levels[k + 1].r
        } else {
            let r = self.levels[k].r;
            r + 0.5 * (1.0 - r)
        };
        (lo, hi)
    }
}

impl Default for DiskGrid {
    /// The default sweep: `K = 12`, base of 64 angles.
    fn default() -> Self {
        DiskGrid::new(12, 64)
    }
}

/// Empirical supremum of a weighted magnitude over a [`DiskGrid`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SupEstimate {
    /// Max over all sampled points (meaningless when `divergent`).
    pub value: f64,
    /// Per-radial-level maxima, innermost first.
    pub per_level: Vec<f64>,
    /// Least-squares slope of `log max` against `log(1 − r)` over the last
    /// four levels; negative slopes mean growth toward the boundary.
    pub growth_exponent: f64,
    /// `growth_exponent < −0.1`: the sweep grows as `r → 1` and `value`
    /// only reflects the sampled truncation.
    pub divergent: bool,
}

impl SupEstimate {
    /// Assemble the estimate from per-level maxima.
    pub fn from_levels(per_level: Vec<f64>, grid: &DiskGrid) -> Self {
        let value = per_level.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let value = if value == f64::NEG_INFINITY { 0.0 } else { value };
        let growth_exponent = fit_tail_slope(&per_level, grid);
        let divergent = growth_exponent < DIVERGENCE_SLOPE || !value.is_finite();
        SupEstimate {
            value,
            per_level,
            growth_exponent,
            divergent,
        }
    }

    /// CSV rows `r,max` for plotting.
    pub fn to_csv(&self, grid: &DiskGrid) -> String {
        let mut s = String::from("r,max\n");
        for (level, max) in grid.levels().iter().zip(&self.per_level) {
            s.push_str(&format!("{},{}\n", level.r, max));
        }
        s
    }
}

/// Slope of `ln(max)` vs `ln(1 − r)` over the last four levels with
/// positive finite maxima. Fewer than two usable levels → slope 0.
fn fit_tail_slope(per_level: &[f64], grid: &DiskGrid) -> f64 {
    let n = per_level.len();
    let take = 4.min(n);
    let pts: Vec<(f64, f64)> = (n - take..n)
        .filter(|&k| per_level[k] > 0.0 && per_level[k].is_finite())
        .map(|k| ((1.0 - grid.levels()[k].r).ln(), per_level[k].ln()))
        .collect();
    if pts.len() < 2 {
        return 0.0;
    }
    let nf = pts.len() as f64;
    let mean_x = pts.iter().map(|p| p.0).sum::<f64>() / nf;
    let mean_y = pts.iter().map(|p| p.1).sum::<f64>() / nf;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mean_x) * (p.0 - mean_x)).sum();
    sxy / sxx
}

/// Location of the grid argmax, kept for radial refinement.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ArgMax {
    pub level: usize,
    pub theta: f64,
}

/// Per-level sweep returning the estimate and where the max was attained.
pub(crate) fn sup_scan<F>(
    point_fn: &F,
    grid: &DiskGrid,
) -> Result<(SupEstimate, Option<ArgMax>), CoreError>
where
    F: Fn(Complex64) -> Result<f64, CoreError> + Sync + Send,
{
    let mut per_level = Vec::with_capacity(grid.levels().len());
    let mut best: Option<(f64, ArgMax)> = None;
    for (k, level) in grid.levels().iter().enumerate() {
        let values = grid.sweep_level(k, point_fn)?;
        let mut level_max = f64::NEG_INFINITY;
        let mut level_arg = 0usize;
        for (i, &v) in values.iter().enumerate() {
            if v > level_max {
                level_max = v;
                level_arg = i;
            }
        }
        if best.is_none_or(|(b, _)| level_max > b) {
            best = Some((
                level_max,
                ArgMax {
                    level: k,
                    theta: std::f64::consts::TAU * level_arg as f64 / level.m as f64,
                },
            ));
        }
        per_level.push(level_max);
    }
    Ok((
        SupEstimate::from_levels(per_level, grid),
        best.map(|(_, a)| a),
    ))
}

/// Max of `F` over the grid with the per-level curve and divergence verdict.
pub fn sup_weighted<F>(point_fn: F, grid: &DiskGrid) -> Result<SupEstimate, CoreError>
where
    F: Fn(Complex64) -> Result<f64, CoreError> + Sync + Send,
{
    Ok(sup_scan(&point_fn, grid)?.0)
}

/// Golden-section maximization along the ray of the grid argmax, inside
/// the dyadic bracket around its level. Evaluation failures lose the
/// probe (the swept magnitudes are nonnegative).
pub(crate) fn refine_along_ray<F>(point_fn: &F, theta: f64, bracket: (f64, f64)) -> f64
where
    F: Fn(Complex64) -> Result<f64, CoreError>,
{
    let eval = |r: f64| {
        point_fn(Complex64::from_polar(r, theta)).unwrap_or(-1.0)
    };
    crate::weights::golden_max(eval, bracket.0, bracket.1, 1e-12).1
}

/// One restricted-supremum sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LimsupPoint {
    pub delta: f64,
    pub sup: f64,
    pub count: usize,
}

/// The curve `δ ↦ sup { F(z) : gate(z) > 1 − δ }` with its headline
/// estimate: the value at the smallest δ whose restricted set still has
/// at least [`LIMSUP_MIN_POINTS`] samples.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimsupCurve {
    pub points: Vec<LimsupPoint>,
    pub estimate: f64,
    /// Every restricted set was empty: the map stays interior.
    pub interior: bool,
}

impl LimsupCurve {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("delta,sup\n");
        for p in &self.points {
            s.push_str(&format!("{},{}\n", p.delta, p.sup));
        }
        s
    }
}

/// Build the restricted-sup curve from per-point samples.
///
/// `deltas` must be strictly decreasing in `(0, 1)`. An empty restriction
/// contributes sup 0; if every level is empty the curve is marked
/// `interior` and the estimate is 0.
pub fn limsup_from_samples(values: &[f64], gates: &[f64], deltas: &[f64]) -> LimsupCurve {
    debug_assert!(deltas.windows(2).all(|w| w[0] > w[1]), "deltas must decrease");
    let points: Vec<LimsupPoint> = deltas
        .iter()
        .map(|&delta| {
            let mut sup = f64::NEG_INFINITY;
            let mut count = 0usize;
            for (&v, &gate) in values.iter().zip(gates) {
                if gate > 1.0 - delta {
                    count += 1;
                    if v > sup {
                        sup = v;
                    }
                }
            }
            LimsupPoint {
                delta,
                sup: if count == 0 { 0.0 } else { sup },
                count,
            }
        })
        .collect();

    let pick = points
        .iter()
        .rev()
        .find(|p| p.count >= LIMSUP_MIN_POINTS)
        .or_else(|| points.iter().rev().find(|p| p.count > 0));
    let (estimate, interior) = match pick {
        Some(p) => (p.sup, false),
        None => (0.0, true),
    };
    LimsupCurve {
        points,
        estimate,
        interior,
    }
}

/// Restricted boundary suprema of `F` gated by `gate` (typically `|φ|`).
pub fn limsup_restricted<F, G>(
    point_fn: F,
    gate_fn: G,
    deltas: &[f64],
    grid: &DiskGrid,
) -> Result<LimsupCurve, CoreError>
where
    F: Fn(Complex64) -> Result<f64, CoreError> + Sync + Send,
    G: Fn(Complex64) -> Result<f64, CoreError> + Sync + Send,
{
    let mut values = Vec::with_capacity(grid.point_count());
    let mut gates = Vec::with_capacity(grid.point_count());
    let sample = |z: Complex64| Ok((point_fn(z)?, gate_fn(z)?));
    for k in 0..grid.levels().len() {
        for (v, g) in grid.sweep_level(k, &sample)? {
            values.push(v);
            gates.push(g);
        }
    }
    Ok(limsup_from_samples(&values, &gates, deltas))
}

/// Default δ sequence `2^{−1} … 2^{−10}`, matched to the dyadic radial
/// levels so restricted sets are never artificially empty.
pub fn default_deltas() -> Vec<f64> {
    (1..=10).map(|m| 0.5f64.powi(m)).collect()
}

/// Lipschitz-scale norm `Σ_{j<J} |f^(j)(0)| + sup |f^(J)(z)| (1−|z|)^{J−α}`
/// with the smallest non-negative `J > α`. A divergent sup makes the norm
/// infinite.
pub fn lip_norm(f: &HoloExpr, alpha: f64, grid: &DiskGrid) -> Result<f64, CoreError> {
    let j_order = smallest_j_above(alpha) as usize;
    let origin = f.eval_jet(Complex64::ZERO, j_order)?;
    let prefix: f64 = (0..j_order).map(|j| origin.derivative(j).norm()).sum();
    let gamma = j_order as f64 - alpha;
    let sup = sup_weighted(
        |z| {
            let jet = f.eval_jet(z, j_order)?;
            Ok(jet.derivative(j_order).norm() * (1.0 - z.norm()).powf(gamma))
        },
        grid,
    )?;
    if sup.divergent {
        return Ok(f64::INFINITY);
    }
    Ok(prefix + sup.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::HoloExpr;

    #[test]
    fn default_grid_shape() {
        let g = DiskGrid::default();
        assert_eq!(g.levels().len(), 13);
        assert_eq!(g.levels()[0].r, 0.0);
        assert_eq!(g.levels()[0].m, 64);
        assert_eq!(g.levels()[3].m, 128);
        assert_eq!(g.levels()[12].m, 65536);
        assert!(g.levels().windows(2).all(|w| w[0].r < w[1].r && w[0].m <= w[1].m));
    }

    #[test]
    fn sup_of_boundary_weight() {
        // (1−|z|)^{1/2}: max 1 at r = 0, convergent
        let est = sup_weighted(|z| Ok((1.0 - z.norm()).sqrt()), &DiskGrid::default()).unwrap();
        assert_eq!(est.value, 1.0);
        assert!(!est.divergent);
    }

    #[test]
    fn convergent_cauchy_quotient() {
        // |1/(1−z)|(1−|z|)² ≤ 1 with the max 1 at the origin; per-level
        // maxima ≍ (1−r)
        let est = sup_weighted(
            |z| Ok((1.0 - z.norm()).powi(2) / (Complex64::ONE - z).norm()),
            &DiskGrid::default(),
        )
        .unwrap();
        assert!((est.value - 1.0).abs() <= 1e-3);
        assert!(est.value <= 1.0 + 1e-12);
        assert!(!est.divergent);
        assert!((est.growth_exponent - 1.0).abs() < 0.05);
    }

    #[test]
    fn divergent_double_pole() {
        // |1/(1−z)²|(1−|z|) grows like (1−r)^{−1}
        let est = sup_weighted(
            |z| Ok((1.0 - z.norm()) / (Complex64::ONE - z).norm_sqr()),
            &DiskGrid::default(),
        )
        .unwrap();
        assert!(est.divergent);
        assert!((est.growth_exponent + 1.0).abs() < 0.05);
    }

    #[test]
    fn sup_monotone_under_refinement() {
        let f = |z: Complex64| Ok((z - Complex64::new(0.3, 0.4)).norm() * (1.0 - z.norm()));
        let coarse = sup_weighted(f, &DiskGrid::new(8, 64)).unwrap();
        let finer_radial = sup_weighted(f, &DiskGrid::new(10, 64)).unwrap();
        let finer_angular = sup_weighted(f, &DiskGrid::new(8, 128)).unwrap();
        assert!(finer_radial.value >= coarse.value);
        assert!(finer_angular.value >= coarse.value);
    }

    #[test]
    fn limsup_interior_map_is_empty() {
        // gate |φ| = |z|/2 ≤ 1/2 < 1 − δ for every default δ
        let curve = limsup_restricted(
            |_| Ok(1.0),
            |z| Ok(z.norm() / 2.0),
            &default_deltas(),
            &DiskGrid::default(),
        )
        .unwrap();
        assert!(curve.interior);
        assert_eq!(curve.estimate, 0.0);
        assert!(curve.points.iter().all(|p| p.count == 0));
    }

    #[test]
    fn limsup_constant_is_one() {
        let curve = limsup_restricted(
            |_| Ok(1.0),
            |z| Ok(z.norm()),
            &default_deltas(),
            &DiskGrid::default(),
        )
        .unwrap();
        assert!(!curve.interior);
        assert_eq!(curve.estimate, 1.0);
        assert!(curve.points.iter().all(|p| p.sup == 1.0 || p.count == 0));
    }

    #[test]
    fn limsup_vanishing_weight() {
        // F = 1 − |z| gated by |z|: curve values ≈ δ, estimate → 0
        let deltas = default_deltas();
        let curve = limsup_restricted(
            |z| Ok(1.0 - z.norm()),
            |z| Ok(z.norm()),
            &deltas,
            &DiskGrid::default(),
        )
        .unwrap();
        for p in &curve.points {
            assert!(p.sup <= p.delta + 1e-12);
        }
        assert!(curve.estimate <= deltas[deltas.len() - 1] + 1e-12);
    }

    #[test]
    fn lip_norm_of_z() {
        // α = 0.5 (J = 1): |f(0)| + sup (1−|z|)^{1/2} = 1
        let n = lip_norm(&HoloExpr::z(), 0.5, &DiskGrid::default()).unwrap();
        assert!((n - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lip_norm_of_constant() {
        let f = HoloExpr::constant(Complex64::new(-2.5, 0.0));
        let n = lip_norm(&f, 0.5, &DiskGrid::default()).unwrap();
        assert!((n - 2.5).abs() < 1e-12);
    }

    #[test]
    fn lip_norm_of_square_in_zygmund_range() {
        // α = 1.5 (J = 2): 0 + 0 + sup 2(1−|z|)^{1/2} = 2
        let f = HoloExpr::z().int_pow(2);
        let n = lip_norm(&f, 1.5, &DiskGrid::default()).unwrap();
        assert!((n - 2.0).abs() < 1e-12);
    }

    #[test]
    fn lip_norm_divergent_is_infinite() {
        // 1/(1−z) is not in Λ^{0.5}
        let f = HoloExpr::constant(1.0) / (HoloExpr::constant(1.0) - HoloExpr::z());
        let n = lip_norm(&f, 0.5, &DiskGrid::default()).unwrap();
        assert!(n.is_infinite());
    }
}
