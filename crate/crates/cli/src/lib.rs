//! Config ingestion, pipeline orchestration, and report emission for the
//! `wco` binary.
//!
//! A run parses the JSON config, validates the operator, executes the
//! boundedness checks, the essential-norm estimates, and (when witness
//! points are configured) the lower-bound certificate, then writes
//! `report.json` and optional CSV curves. Identical configs produce
//! byte-identical reports: every reduction the pipeline performs is an
//! order-independent max collected in deterministic order.

use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use wco_core::analysis::{analyze, Analysis, AnalyzeOptions};
use wco_core::criteria::{OperatorSpec, Plateau, Verdict, DEFAULT_N_MAX};
use wco_core::expr::{ExprSpec, HoloExpr};
use wco_core::gcoeff;
use wco_core::grid::{default_deltas, DiskGrid};
use wco_core::{oracle, CoreError};

/// Failures are split by exit code: config problems exit 1, evaluation
/// problems exit 2. Unbounded verdicts are results, not failures.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Eval(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "config error: {msg}"),
            CliError::Eval(msg) => write!(f, "evaluation error: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Eval(e.to_string())
    }
}

fn config_err<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Config(e.to_string())
}

/// Grid section of the config.
#[derive(Debug, Clone, Copy, Deserialize)]
pub struct GridConfig {
    #[serde(rename = "K", default = "default_grid_k")]
    pub k: usize,
    #[serde(default = "default_angular_base")]
    pub angular_base: usize,
}

fn default_grid_k() -> usize {
    12
}

fn default_angular_base() -> usize {
    64
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            k: default_grid_k(),
            angular_base: default_angular_base(),
        }
    }
}

/// Run configuration.
#[derive(Debug, Deserialize)]
pub struct Config {
    pub alpha: f64,
    pub beta: f64,
    pub g: ExprSpec,
    pub phi: ExprSpec,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default = "default_n_max_cfg")]
    pub n_max: u32,
    #[serde(default)]
    pub deltas: Option<Vec<f64>>,
    #[serde(default)]
    pub witness_points: Option<Vec<[f64; 2]>>,
}

fn default_n_max_cfg() -> u32 {
    DEFAULT_N_MAX
}

impl Config {
    pub fn from_path(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(config_err)?;
        serde_json::from_str(&text).map_err(config_err)
    }
}

/// report.json layout.
#[derive(Debug, Serialize)]
pub struct Report {
    pub params: ParamsOut,
    pub boundedness: BoundednessOut,
    /// `null` when the operator is unbounded.
    pub essential_norm: Option<EssOut>,
    pub witnesses: Vec<WitnessOut>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct ParamsOut {
    pub alpha: f64,
    pub beta: f64,
    #[serde(rename = "J")]
    pub j: u32,
    #[serde(rename = "N")]
    pub n: i64,
}

#[derive(Debug, Serialize)]
pub struct BoundednessOut {
    pub verdict: Verdict,
    #[serde(rename = "S")]
    pub s: Vec<SOut>,
    pub memberships: Vec<MembershipOut>,
    pub discrete: Vec<DiscreteOut>,
    pub crosscheck_ratios: Vec<CrossOut>,
}

#[derive(Debug, Serialize)]
pub struct SOut {
    pub j: u32,
    pub value: f64,
    pub divergent: bool,
    pub growth_exponent: f64,
    pub per_level: Vec<f64>,
}

#[derive(Debug, Serialize)]
pub struct MembershipOut {
    pub j: u32,
    pub value: f64,
    pub divergent: bool,
}

#[derive(Debug, Serialize)]
pub struct DiscreteOut {
    pub j: u32,
    pub sup: f64,
    pub sequence_head: Vec<(u32, f64)>,
    pub plateau: Plateau,
}

#[derive(Debug, Serialize)]
pub struct CrossOut {
    pub j: u32,
    pub ratio: Option<f64>,
    pub in_corridor: Option<bool>,
}

#[derive(Debug, Serialize)]
pub struct EssOut {
    pub compact: bool,
    /// `[estimate_max, estimate_sum]`: the two-sided comparability has
    /// unknown constants, so a single number would overclaim.
    pub interval: [f64; 2],
    pub discrete_estimate: f64,
    pub curves_ref: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct WitnessOut {
    pub j: u32,
    pub z: [f64; 2],
    pub phi_abs: f64,
    pub value: f64,
    pub running_max: f64,
}

/// Everything one pipeline invocation needs beyond the config file.
#[derive(Debug, Default)]
pub struct RunOptions {
    pub alpha_override: Option<f64>,
    pub beta_override: Option<f64>,
    pub n_max_override: Option<u32>,
    pub grid_k_override: Option<usize>,
    pub curves_dir: Option<PathBuf>,
}

/// Parse-to-report pipeline. Returns the report and the serialized bytes
/// that were written to `json_out`.
pub fn run(
    config: &Config,
    options: &RunOptions,
    json_out: &Path,
) -> Result<(Report, String), CliError> {
    let alpha = options.alpha_override.unwrap_or(config.alpha);
    let beta = options.beta_override.unwrap_or(config.beta);
    let n_max = options.n_max_override.unwrap_or(config.n_max);
    let grid_k = options.grid_k_override.unwrap_or(config.grid.k);
    if n_max < 16 {
        return Err(CliError::Config("n_max must be at least 16".into()));
    }
    if !(4..=16).contains(&grid_k) {
        return Err(CliError::Config("grid K must be in 4..=16".into()));
    }

    let grid = DiskGrid::new(grid_k, config.grid.angular_base);
    let g = HoloExpr::from(&config.g);
    let phi = HoloExpr::from(&config.phi);
    let op = OperatorSpec::new(g, phi, alpha, beta);

    let deltas = match &config.deltas {
        Some(d) => {
            let ordered = d.windows(2).all(|w| w[0] > w[1]);
            if d.is_empty() || !ordered || d.iter().any(|&x| !(0.0..1.0).contains(&x) || x == 0.0) {
                return Err(CliError::Config(
                    "deltas must be strictly decreasing values in (0, 1)".into(),
                ));
            }
            d.clone()
        }
        None => default_deltas(),
    };
    let witness_points: Vec<Complex64> = config
        .witness_points
        .iter()
        .flatten()
        .map(|&[re, im]| Complex64::new(re, im))
        .collect();

    let analyze_options = AnalyzeOptions {
        n_max,
        deltas,
        tail_fraction: 0.5,
        witness_points,
    };
    let analysis = analyze(&op, &analyze_options, &grid)?;

    let mut warnings = collect_warnings(&analysis, n_max, grid_k);
    let curves_ref = match &options.curves_dir {
        Some(dir) => {
            write_curves(&analysis, &grid, dir)?;
            Some(dir.display().to_string())
        }
        None => None,
    };
    if analysis.boundedness.verdict == Verdict::Unbounded {
        warnings.push("essential norm undefined for unbounded operator".into());
    }

    let report = assemble_report(&analysis, curves_ref, warnings);
    let bytes = serde_json::to_string_pretty(&report).map_err(|e| CliError::Eval(e.to_string()))?;
    if let Some(parent) = json_out.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent).map_err(|e| CliError::Eval(e.to_string()))?;
        }
    }
    fs::write(json_out, &bytes).map_err(|e| CliError::Eval(e.to_string()))?;
    Ok((report, bytes))
}

fn collect_warnings(analysis: &Analysis, n_max: u32, grid_k: usize) -> Vec<String> {
    let mut warnings = Vec::new();
    if (n_max as f64) > 2f64.powi(grid_k as i32 - 3) {
        warnings.push(format!(
            "n_max = {n_max} outruns the radial resolution of grid K = {grid_k}; \
             quotient peaks near 1 - 1/n may be mistaken for divergence (raise K)"
        ));
    }
    if n_max < 64 {
        warnings.push(format!(
            "n_max = {n_max} leaves the discrete limsup tail short; 64 or more is recommended"
        ));
    }
    for r in &analysis.boundedness.crosscheck.ratios {
        if r.in_corridor == Some(false) {
            warnings.push(format!(
                "continuous/discrete ratio for j = {} is {:?}, outside [1/50, 50]",
                r.j, r.ratio
            ));
        }
    }
    for seq in &analysis.boundedness.discrete.sequences {
        if seq.plateau == Plateau::Marginal {
            warnings.push(format!(
                "discrete sequence j = {} has a marginal plateau; verdict degraded to inconclusive",
                seq.j
            ));
        }
    }
    if let Some(ess) = &analysis.essnorm {
        if ess.continuous.compact_shortcut {
            warnings.push("N > J: compact by parameter gap, no computation needed".into());
        } else if ess.continuous.curves.iter().all(|c| c.curve.interior) {
            warnings.push("map stays interior: every restricted set was empty".into());
        }
    }
    warnings
}

fn assemble_report(
    analysis: &Analysis,
    curves_ref: Option<String>,
    warnings: Vec<String>,
) -> Report {
    let b = &analysis.boundedness;
    let params = ParamsOut {
        alpha: b.params.alpha,
        beta: b.params.beta,
        j: b.params.j_order,
        n: b.params.n_critical,
    };
    let s = b
        .continuous
        .conditions
        .iter()
        .map(|c| SOut {
            j: c.j,
            value: c.sup.value,
            divergent: c.sup.divergent,
            growth_exponent: c.sup.growth_exponent,
            per_level: c.sup.per_level.clone(),
        })
        .collect();
    let memberships = b
        .discrete
        .memberships
        .iter()
        .map(|m| MembershipOut {
            j: m.j,
            value: m.sup.value,
            divergent: m.sup.divergent,
        })
        .collect();
    let discrete = b
        .discrete
        .sequences
        .iter()
        .map(|seq| DiscreteOut {
            j: seq.j,
            sup: seq.sup,
            sequence_head: seq.values.iter().take(8).copied().collect(),
            plateau: seq.plateau,
        })
        .collect();
    let crosscheck_ratios = b
        .crosscheck
        .ratios
        .iter()
        .map(|r| CrossOut {
            j: r.j,
            ratio: r.ratio,
            in_corridor: r.in_corridor,
        })
        .collect();

    let essential_norm = analysis.essnorm.as_ref().map(|ess| EssOut {
        compact: ess.continuous.compact,
        interval: [ess.continuous.estimate_max, ess.continuous.estimate_sum],
        discrete_estimate: ess.discrete.estimate,
        curves_ref,
    });

    let witnesses = analysis
        .witnesses
        .iter()
        .map(|w| WitnessOut {
            j: w.j,
            z: [w.z.re, w.z.im],
            phi_abs: w.phi_abs,
            value: w.value,
            running_max: w.running_max,
        })
        .collect();

    Report {
        params,
        boundedness: BoundednessOut {
            verdict: b.verdict,
            s,
            memberships,
            discrete,
            crosscheck_ratios,
        },
        essential_norm,
        witnesses,
        warnings,
    }
}

/// Plot-ready CSV curves: `S_j*.csv` (r, max), `E_j*.csv` (delta, sup),
/// `a_j*.csv` / `d_j*.csv` (n, value).
fn write_curves(analysis: &Analysis, grid: &DiskGrid, dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Eval(e.to_string()))?;
    let write = |name: String, body: String| -> Result<(), CliError> {
        fs::write(dir.join(name), body).map_err(|e| CliError::Eval(e.to_string()))
    };

    for c in &analysis.boundedness.continuous.conditions {
        write(format!("S_j{}.csv", c.j), c.sup.to_csv(grid))?;
    }
    for seq in &analysis.boundedness.discrete.sequences {
        let mut body = String::from("n,value\n");
        for (n, a) in &seq.values {
            body.push_str(&format!("{n},{a}\n"));
        }
        write(format!("a_j{}.csv", seq.j), body)?;
    }
    if let Some(ess) = &analysis.essnorm {
        for c in &ess.continuous.curves {
            write(format!("E_j{}.csv", c.j), c.curve.to_csv())?;
        }
        for tail in &ess.discrete.tails {
            let mut body = String::from("n,value\n");
            for (n, d) in &tail.values {
                body.push_str(&format!("{n},{d}\n"));
            }
            write(format!("d_j{}.csv", tail.j), body)?;
        }
    }
    Ok(())
}

/// Human-readable and JSON dumps of a coefficient table.
pub fn dump_gtable(j_max: u32) -> (String, serde_json::Value) {
    let table = gcoeff::build_table(j_max);
    let text = table.render();
    let entries: Vec<serde_json::Value> = table
        .entries()
        .iter()
        .enumerate()
        .map(|(j, poly)| {
            let terms: Vec<serde_json::Value> = poly
                .iter()
                .map(|(m, &coeff)| {
                    serde_json::json!({
                        "coeff": coeff,
                        "g": m.g_order,
                        "phi": m.phi_exps,
                    })
                })
                .collect();
            serde_json::json!({ "j": j, "terms": terms })
        })
        .collect();
    let json = serde_json::json!({ "J": j_max, "entries": entries });
    (text, json)
}

/// Quick self-check battery: finite differences against jets, dense
/// sampling against known suprema, and the defining identity on seeded
/// random instances. Returns the number of checks performed.
pub fn run_oracle_battery() -> Result<usize, CliError> {
    let mut checks = 0usize;

    let cases: Vec<(HoloExpr, Complex64)> = vec![
        (HoloExpr::z().int_pow(3), Complex64::new(0.2, 0.0)),
        (
            HoloExpr::constant(1.0) / (HoloExpr::constant(1.0) - HoloExpr::z()),
            Complex64::new(0.1, 0.2),
        ),
        (
            HoloExpr::constant(1.0) - (HoloExpr::constant(1.0) - HoloExpr::z()).log(),
            Complex64::new(0.3, 0.15),
        ),
    ];
    for (f, z) in &cases {
        let jet = f.eval_jet(*z, 4)?;
        let fd = oracle::fd_derivatives(f, *z, 4, oracle::FD_STEP)?;
        for (k, approx) in fd.iter().enumerate() {
            let exact = jet.derivative(k);
            let err = (approx - exact).norm() / exact.norm().max(1.0);
            if err > 1e-6 {
                return Err(CliError::Eval(format!(
                    "oracle: finite differences disagree with jets at order {k} (error {err:e})"
                )));
            }
            checks += 1;
        }
    }

    let sup = oracle::dense_sup(|z| z.norm() * (1.0 - z.norm()), 200_000);
    if (sup - 0.25).abs() > 1e-3 {
        return Err(CliError::Eval(format!(
            "oracle: dense sup of |z|(1-|z|) came out {sup}, expected 0.25"
        )));
    }
    checks += 1;

    let mut state = 0x0_5EED_u64;
    let mut next = move || {
        state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        (z ^ (z >> 31)) as f64 / u64::MAX as f64 * 2.0 - 1.0
    };
    for j_max in 0..=4u32 {
        for _ in 0..20 {
            let poly = |rng: &mut dyn FnMut() -> f64, deg: usize| {
                let coeffs: Vec<Complex64> =
                    (0..=deg).map(|_| Complex64::new(rng(), rng())).collect();
                HoloExpr::poly(&coeffs)
            };
            let g = poly(&mut next, 3);
            let phi = poly(&mut next, 3);
            let f = poly(&mut next, 6);
            let z = Complex64::new(0.4 * next(), 0.4 * next());
            let err = oracle::defining_identity_check_for(&g, &phi, &f, j_max, z)?;
            if err > 1e-10 {
                return Err(CliError::Eval(format!(
                    "oracle: defining identity defect {err:e} at J = {j_max}"
                )));
            }
            checks += 1;
        }
    }
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_parses_pow_and_poly_literals() {
        let json = r#"{
            "alpha": 1.5,
            "beta": 0.5,
            "g": {"kind": "poly", "coeffs": [1, 0, [0, 2]]},
            "phi": {"kind": "pow", "base": {"kind": "z"}, "exp": 3}
        }"#;
        let config: Config = serde_json::from_str(json).unwrap();
        assert_eq!(config.grid.k, 12);
        assert_eq!(config.n_max, DEFAULT_N_MAX);

        // g = 1 + 2i z², φ = z³
        let g = HoloExpr::from(&config.g);
        let phi = HoloExpr::from(&config.phi);
        let z = Complex64::new(0.5, 0.0);
        let expect_g = Complex64::new(1.0, 0.5); // 1 + 2i·0.25
        assert!((g.eval(z).unwrap() - expect_g).norm() < 1e-15);
        assert!((phi.eval(z).unwrap() - Complex64::new(0.125, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn negative_exponent_in_config_is_reciprocal() {
        let spec: ExprSpec = serde_json::from_str(
            r#"{"kind": "pow",
                "base": {"kind": "sub", "lhs": {"kind": "const", "value": 2}, "rhs": {"kind": "z"}},
                "exp": -1}"#,
        )
        .unwrap();
        let f = HoloExpr::from(&spec);
        let v = f.eval(Complex64::new(0.5, 0.0)).unwrap();
        assert!((v - Complex64::new(2.0 / 3.0, 0.0)).norm() < 1e-15);
    }
}
