//! Independent brute-force cross-checks.
//!
//! Nothing in this module shares code with the estimators it validates:
//! derivatives come from finite-difference stencils, suprema from dense
//! quasi-uniform sampling, and the defining identity is checked by
//! differentiating the composed product directly with jets on one side
//! and the coefficient table on the other.

use num_complex::Complex64;

use crate::error::CoreError;
use crate::expr::HoloExpr;
use crate::gcoeff::{self, GCoefficientTable};
use crate::jet::jet_compose;
use crate::par;

/// Default finite-difference step.
pub const FD_STEP: f64 = 1e-4;

/// Central finite differences for `f^(k)(z)`, `k = 0..=k_max`, Richardson
/// extrapolated with the noisy fine stencil kept at the base step.
///
/// Orders up to 2 use one extrapolation level, `(4 D(h) − D(2h)) / 3`.
/// Orders 3 and 4 divide by `h^3` and `h^4`, where a 1e-4 step would push
/// f64 cancellation noise above 1e-4 of the result; they floor the step
/// at 6e-3 / 1.2e-2 and extrapolate twice
/// (`(64 D(h) − 20 D(2h) + D(4h)) / 45`, truncation `O(h^6)`), which
/// keeps both noise and truncation near 1e-8 for disk-scale rationals.
/// The widest stencil reaches `8h` from `z`; the caller keeps it inside
/// the domain.
pub fn fd_derivatives(
    f: &HoloExpr,
    z: Complex64,
    k_max: usize,
    step: f64,
) -> Result<Vec<Complex64>, CoreError> {
    assert!(k_max <= 4, "finite differences implemented through order 4");
    let mut out = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        let value = if k <= 2 {
            let fine = central_stencil(f, z, k, step)?;
            let coarse = central_stencil(f, z, k, 2.0 * step)?;
            (fine * 4.0 - coarse) / 3.0
        } else {
            let h = if k == 3 { step.max(6e-3) } else { step.max(1.2e-2) };
            let d1 = central_stencil(f, z, k, h)?;
            let d2 = central_stencil(f, z, k, 2.0 * h)?;
            let d4 = central_stencil(f, z, k, 4.0 * h)?;
            (d1 * 64.0 - d2 * 20.0 + d4) / 45.0
        };
        out.push(value);
    }
    Ok(out)
}

fn central_stencil(
    f: &HoloExpr,
    z: Complex64,
    k: usize,
    h: f64,
) -> Result<Complex64, CoreError> {
    let at = |offset: f64| f.eval(z + Complex64::new(offset * h, 0.0));
    let h2 = h * h;
    Ok(match k {
        0 => at(0.0)?,
        1 => (at(1.0)? - at(-1.0)?) / (2.0 * h),
        2 => (at(1.0)? - at(0.0)? * 2.0 + at(-1.0)?) / h2,
        3 => (at(2.0)? - at(1.0)? * 2.0 + at(-1.0)? * 2.0 - at(-2.0)?) / (2.0 * h2 * h),
        4 => {
            (at(2.0)? - at(1.0)? * 4.0 + at(0.0)? * 6.0 - at(-1.0)? * 4.0 + at(-2.0)?) / (h2 * h2)
        }
        _ => unreachable!(),
    })
}

/// Max of `F` over a deterministic quasi-uniform disk sampling
/// (golden-angle spiral: area-uniform radii, equidistributed angles).
pub fn dense_sup<F>(point_fn: F, samples: usize) -> f64
where
    F: Fn(Complex64) -> f64 + Sync + Send,
{
    assert!(samples >= 100_000, "dense_sup is meant for large sample counts");
    const GOLDEN_ANGLE: f64 = 2.399963229728653; // 2π(1 − 1/φ)
    let vals = par::map_range(samples, |i| {
        let r = (((i as f64) + 0.5) / samples as f64).sqrt();
        let theta = GOLDEN_ANGLE * i as f64;
        point_fn(Complex64::from_polar(r, theta))
    });
    vals.into_iter().fold(f64::NEG_INFINITY, f64::max)
}

/// Relative error of the defining identity
/// `(g·(f∘φ))^(J)(z) = Σ_j G_j(z) f^(j)(φ(z))`
/// with the left side computed by jet composition and product, the right
/// side by the coefficient table.
pub fn defining_identity_check(
    g: &HoloExpr,
    phi: &HoloExpr,
    f: &HoloExpr,
    table: &GCoefficientTable,
    z: Complex64,
) -> Result<f64, CoreError> {
    let j_max = table.order() as usize;
    let g_jet = g.eval_jet(z, j_max)?;
    let phi_jet = phi.eval_jet(z, j_max)?;
    let f_at_phi = f.eval_jet(phi_jet.value(), j_max)?;

    let lhs = g_jet.mul(&jet_compose(&f_at_phi, &phi_jet)?).derivative(j_max);

    let g_values = table.eval_with_derivatives(
        &(0..=j_max).map(|k| g_jet.derivative(k)).collect::<Vec<_>>(),
        &(0..=j_max).map(|k| phi_jet.derivative(k)).collect::<Vec<_>>(),
    );
    let rhs: Complex64 = g_values
        .iter()
        .enumerate()
        .map(|(j, gj)| gj * f_at_phi.derivative(j))
        .sum();

    let scale = lhs.norm().max(rhs.norm()).max(1e-300);
    Ok((lhs - rhs).norm() / scale)
}

/// Convenience wrapper building the table on the fly.
pub fn defining_identity_check_for(
    g: &HoloExpr,
    phi: &HoloExpr,
    f: &HoloExpr,
    j_max: u32,
    z: Complex64,
) -> Result<f64, CoreError> {
    defining_identity_check(g, phi, f, &gcoeff::build_table(j_max), z)
}
