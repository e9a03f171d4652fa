//! Built-in operator configurations with analytically known behavior.
//!
//! The battery spans β < 0, β = 0, 0 < β < 1, β = 1, integer and
//! non-integer β, and α on both sides of β, mixing bounded/unbounded and
//! compact/non-compact cases. Expected essential norms, where listed,
//! come from hand evaluation of the boundary limsup (weights cancel along
//! the relevant rays).

use crate::criteria::OperatorSpec;
use crate::expr::HoloExpr;

/// What a battery case is known to do.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Expectation {
    Bounded {
        compact: bool,
        /// Analytic value of the boundary limsup max, when known.
        essnorm: Option<f64>,
    },
    Unbounded,
}

pub struct BatteryCase {
    pub name: &'static str,
    pub alpha: f64,
    pub beta: f64,
    pub g: HoloExpr,
    pub phi: HoloExpr,
    pub expect: Expectation,
}

impl BatteryCase {
    pub fn operator(&self) -> OperatorSpec {
        OperatorSpec::new(self.g.clone(), self.phi.clone(), self.alpha, self.beta)
    }
}

fn one() -> HoloExpr {
    HoloExpr::constant(1.0)
}

fn half_z() -> HoloExpr {
    HoloExpr::constant(0.5) * HoloExpr::z()
}

fn lens() -> HoloExpr {
    // (1 + z)/2: touches the boundary only at z = 1
    HoloExpr::constant(0.5) * (one() + HoloExpr::z())
}

fn bounded(compact: bool, essnorm: Option<f64>) -> Expectation {
    Expectation::Bounded { compact, essnorm }
}

/// The full battery.
pub fn built_in() -> Vec<BatteryCase> {
    let sqrt2 = std::f64::consts::SQRT_2;
    vec![
        BatteryCase {
            name: "id_lip_half",
            alpha: 0.5,
            beta: 0.5,
            g: one(),
            phi: HoloExpr::z(),
            expect: bounded(false, Some(1.0)),
        },
        BatteryCase {
            name: "interior_half_map",
            alpha: 0.5,
            beta: 0.5,
            g: one(),
            phi: half_z(),
            expect: bounded(true, None),
        },
        BatteryCase {
            name: "id_zygmund_frac",
            alpha: 1.5,
            beta: 1.5,
            g: one(),
            phi: HoloExpr::z(),
            expect: bounded(false, Some(1.0)),
        },
        BatteryCase {
            name: "auto_compact_gap",
            alpha: 0.5,
            beta: 2.3,
            g: one(),
            phi: HoloExpr::z(),
            expect: bounded(true, None),
        },
        BatteryCase {
            name: "reverse_embedding",
            alpha: 1.5,
            beta: 0.5,
            g: one(),
            phi: HoloExpr::z(),
            expect: Expectation::Unbounded,
        },
        BatteryCase {
            name: "cauchy_weight",
            alpha: 0.5,
            beta: 0.5,
            g: one() / (one() - HoloExpr::z()),
            phi: HoloExpr::z(),
            expect: Expectation::Unbounded,
        },
        BatteryCase {
            name: "vanishing_square_weight",
            alpha: 0.5,
            beta: 0.5,
            g: (one() - HoloExpr::z()).int_pow(2),
            phi: HoloExpr::z(),
            expect: bounded(false, Some(4.0)),
        },
        BatteryCase {
            name: "growth_id_frac",
            alpha: -0.5,
            beta: -0.5,
            g: one(),
            phi: HoloExpr::z(),
            expect: bounded(false, Some(1.0)),
        },
        BatteryCase {
            name: "growth_id_int",
            alpha: -1.0,
            beta: -1.0,
            g: one(),
            phi: HoloExpr::z(),
            expect: bounded(false, Some(1.0)),
        },
        BatteryCase {
            name: "bloch_id",
            alpha: 0.0,
            beta: 0.0,
            g: one(),
            phi: HoloExpr::z(),
            expect: bounded(false, Some(1.0)),
        },
        BatteryCase {
            name: "zygmund_id_int",
            alpha: 1.0,
            beta: 1.0,
            g: one(),
            phi: HoloExpr::z(),
            expect: bounded(false, Some(1.0)),
        },
        BatteryCase {
            name: "square_map",
            alpha: 0.5,
            beta: 0.5,
            g: one(),
            phi: HoloExpr::z().int_pow(2),
            expect: bounded(false, Some(sqrt2)),
        },
        BatteryCase {
            name: "lens_map",
            alpha: 0.5,
            beta: 0.5,
            g: one(),
            phi: lens(),
            expect: bounded(false, Some(0.5 * sqrt2)),
        },
        BatteryCase {
            name: "interior_above_beta",
            alpha: 1.5,
            beta: 0.5,
            g: one(),
            phi: half_z(),
            expect: bounded(true, None),
        },
        BatteryCase {
            name: "cauchy_weight_interior_map",
            alpha: 0.5,
            beta: 0.5,
            g: one() / (one() - HoloExpr::z()),
            phi: half_z(),
            expect: Expectation::Unbounded,
        },
        BatteryCase {
            name: "cubic_weight",
            alpha: 0.5,
            beta: 0.5,
            g: HoloExpr::z().int_pow(3),
            phi: HoloExpr::z(),
            expect: bounded(false, Some(1.0)),
        },
        BatteryCase {
            name: "bloch_shift_weight",
            alpha: 0.0,
            beta: 0.0,
            g: HoloExpr::z(),
            phi: HoloExpr::z(),
            expect: bounded(false, Some(1.0)),
        },
        BatteryCase {
            name: "zygmund_shift_weight",
            alpha: 1.0,
            beta: 1.0,
            g: HoloExpr::z(),
            phi: HoloExpr::z(),
            expect: bounded(false, Some(1.0)),
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn battery_spans_the_parameter_classes() {
        let battery = built_in();
        assert!(battery.len() >= 12);
        assert!(battery.iter().any(|c| c.beta < 0.0));
        assert!(battery.iter().any(|c| c.beta == 0.0));
        assert!(battery.iter().any(|c| c.beta > 0.0 && c.beta < 1.0));
        assert!(battery.iter().any(|c| c.beta == 1.0));
        assert!(battery.iter().any(|c| c.beta.fract() != 0.0));
        assert!(battery.iter().any(|c| c.alpha > c.beta));
        assert!(battery.iter().any(|c| c.alpha < c.beta));
        assert!(battery
            .iter()
            .any(|c| matches!(c.expect, Expectation::Unbounded)));
    }

    #[test]
    fn battery_operators_validate_as_self_maps() {
        let grid = crate::grid::DiskGrid::new(6, 16);
        for case in built_in() {
            case.operator().validate(&grid).unwrap_or_else(|e| {
                panic!("case {} failed self-map validation: {e}", case.name)
            });
        }
    }
}
