//! Expression trees for holomorphic symbols on the unit disk.
//!
//! An expression is evaluable as a [`ComplexJet`] at any interior point
//! where no division hits a pole and no log/power argument lands on the
//! principal branch cut. Polynomial and rational expressions evaluate
//! exactly (no truncation error beyond floating point).
//!
//! Negative integer exponents are rewritten as reciprocals of positive
//! powers at construction time, so the stored tree never carries them.

use std::fmt;
use std::ops;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::CoreError;
use crate::jet::ComplexJet;

/// Expression node. Cheap to clone (shared subtrees).
#[derive(Debug, Clone, PartialEq)]
pub enum HoloExpr {
    Const(Complex64),
    Z,
    Add(Arc<HoloExpr>, Arc<HoloExpr>),
    Sub(Arc<HoloExpr>, Arc<HoloExpr>),
    Mul(Arc<HoloExpr>, Arc<HoloExpr>),
    Div(Arc<HoloExpr>, Arc<HoloExpr>),
    /// Non-negative integer power.
    IntPow(Arc<HoloExpr>, u32),
    /// Principal-branch real power; the argument must stay off the
    /// non-positive real axis wherever it is evaluated.
    Pow(Arc<HoloExpr>, f64),
    /// Principal-branch logarithm.
    Log(Arc<HoloExpr>),
}

impl HoloExpr {
    pub fn constant(c: impl Into<Complex64>) -> Self {
        HoloExpr::Const(c.into())
    }

    pub fn z() -> Self {
        HoloExpr::Z
    }

    /// Integer power; a negative exponent becomes `1 / base^{-e}`.
    pub fn int_pow(self, exp: i64) -> Self {
        if exp >= 0 {
            HoloExpr::IntPow(Arc::new(self), exp as u32)
        } else {
            HoloExpr::Div(
                Arc::new(HoloExpr::constant(1.0)),
                Arc::new(HoloExpr::IntPow(Arc::new(self), (-exp) as u32)),
            )
        }
    }

    /// Real power. Integral exponents collapse to [`HoloExpr::int_pow`].
    pub fn pow(self, exp: f64) -> Self {
        if exp.fract() == 0.0 && exp.abs() <= i64::MAX as f64 {
            self.int_pow(exp as i64)
        } else {
            HoloExpr::Pow(Arc::new(self), exp)
        }
    }

    pub fn log(self) -> Self {
        HoloExpr::Log(Arc::new(self))
    }

    /// Dense polynomial `c0 + c1 z + …` in Horner form.
    pub fn poly(coeffs: &[Complex64]) -> Self {
        let mut it = coeffs.iter().rev();
        let mut acc = HoloExpr::Const(it.next().copied().unwrap_or(Complex64::ZERO));
        for &c in it {
            acc = acc * HoloExpr::Z + HoloExpr::Const(c);
        }
        acc
    }

    /// Jet of this expression at `z0`, to order `k_max`.
    ///
    /// Errors carry the offending sub-expression rendered as text.
    pub fn eval_jet(&self, z0: Complex64, k_max: usize) -> Result<ComplexJet, CoreError> {
        match self {
            HoloExpr::Const(c) => Ok(ComplexJet::constant(z0, *c, k_max)),
            HoloExpr::Z => Ok(ComplexJet::variable(z0, k_max)),
            HoloExpr::Add(a, b) => Ok(a.eval_jet(z0, k_max)?.add(&b.eval_jet(z0, k_max)?)),
            HoloExpr::Sub(a, b) => Ok(a.eval_jet(z0, k_max)?.sub(&b.eval_jet(z0, k_max)?)),
            HoloExpr::Mul(a, b) => Ok(a.eval_jet(z0, k_max)?.mul(&b.eval_jet(z0, k_max)?)),
            HoloExpr::Div(a, b) => {
                let num = a.eval_jet(z0, k_max)?;
                let den = b.eval_jet(z0, k_max)?;
                num.div(&den).map_err(|e| match e {
                    CoreError::PoleAtPoint { at, .. } => CoreError::PoleAtPoint {
                        at,
                        expr: b.to_string(),
                    },
                    other => other,
                })
            }
            HoloExpr::IntPow(a, e) => Ok(a.eval_jet(z0, k_max)?.powi(*e)),
            HoloExpr::Pow(a, s) => {
                let base = a.eval_jet(z0, k_max)?;
                base.powf(*s).map_err(|e| match e {
                    CoreError::BranchCut { at, value, .. } => CoreError::BranchCut {
                        at,
                        expr: a.to_string(),
                        value,
                    },
                    other => other,
                })
            }
            HoloExpr::Log(a) => {
                let arg = a.eval_jet(z0, k_max)?;
                arg.log().map_err(|e| match e {
                    CoreError::BranchCut { at, value, .. } => CoreError::BranchCut {
                        at,
                        expr: a.to_string(),
                        value,
                    },
                    other => other,
                })
            }
        }
    }

    /// Value `f(z0)` (order-0 jet).
    pub fn eval(&self, z0: Complex64) -> Result<Complex64, CoreError> {
        Ok(self.eval_jet(z0, 0)?.value())
    }

    /// Substitute `inner` for the variable: the tree of `self ∘ inner`.
    pub fn substitute_z(&self, inner: &HoloExpr) -> HoloExpr {
        match self {
            HoloExpr::Const(c) => HoloExpr::Const(*c),
            HoloExpr::Z => inner.clone(),
            HoloExpr::Add(a, b) => HoloExpr::Add(
                Arc::new(a.substitute_z(inner)),
                Arc::new(b.substitute_z(inner)),
            ),
            HoloExpr::Sub(a, b) => HoloExpr::Sub(
                Arc::new(a.substitute_z(inner)),
                Arc::new(b.substitute_z(inner)),
            ),
            HoloExpr::Mul(a, b) => HoloExpr::Mul(
                Arc::new(a.substitute_z(inner)),
                Arc::new(b.substitute_z(inner)),
            ),
            HoloExpr::Div(a, b) => HoloExpr::Div(
                Arc::new(a.substitute_z(inner)),
                Arc::new(b.substitute_z(inner)),
            ),
            HoloExpr::IntPow(a, e) => HoloExpr::IntPow(Arc::new(a.substitute_z(inner)), *e),
            HoloExpr::Pow(a, s) => HoloExpr::Pow(Arc::new(a.substitute_z(inner)), *s),
            HoloExpr::Log(a) => HoloExpr::Log(Arc::new(a.substitute_z(inner))),
        }
    }
}

impl fmt::Display for HoloExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HoloExpr::Const(c) => {
                if c.im == 0.0 {
                    write!(f, "{}", c.re)
                } else {
                    write!(f, "({}{}{}i)", c.re, if c.im >= 0.0 { "+" } else { "-" }, c.im.abs())
                }
            }
            HoloExpr::Z => write!(f, "z"),
            HoloExpr::Add(a, b) => write!(f, "({a} + {b})"),
            HoloExpr::Sub(a, b) => write!(f, "({a} - {b})"),
            HoloExpr::Mul(a, b) => write!(f, "({a} * {b})"),
            HoloExpr::Div(a, b) => write!(f, "({a} / {b})"),
            HoloExpr::IntPow(a, e) => write!(f, "{a}^{e}"),
            HoloExpr::Pow(a, s) => write!(f, "{a}^{s}"),
            HoloExpr::Log(a) => write!(f, "log({a})"),
        }
    }
}

impl ops::Add for HoloExpr {
    type Output = HoloExpr;
    fn add(self, rhs: HoloExpr) -> HoloExpr {
        HoloExpr::Add(Arc::new(self), Arc::new(rhs))
    }
}

impl ops::Sub for HoloExpr {
    type Output = HoloExpr;
    fn sub(self, rhs: HoloExpr) -> HoloExpr {
        HoloExpr::Sub(Arc::new(self), Arc::new(rhs))
    }
}

impl ops::Mul for HoloExpr {
    type Output = HoloExpr;
    fn mul(self, rhs: HoloExpr) -> HoloExpr {
        HoloExpr::Mul(Arc::new(self), Arc::new(rhs))
    }
}

impl ops::Div for HoloExpr {
    type Output = HoloExpr;
    fn div(self, rhs: HoloExpr) -> HoloExpr {
        HoloExpr::Div(Arc::new(self), Arc::new(rhs))
    }
}

/// Complex literal in configs: either a bare real or an `[re, im]` pair.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ComplexSpec {
    Real(f64),
    Pair([f64; 2]),
}

impl From<ComplexSpec> for Complex64 {
    fn from(s: ComplexSpec) -> Complex64 {
        match s {
            ComplexSpec::Real(re) => Complex64::new(re, 0.0),
            ComplexSpec::Pair([re, im]) => Complex64::new(re, im),
        }
    }
}

/// JSON wire form of an expression tree, e.g.
/// `{"kind":"pow","base":{"kind":"z"},"exp":3}` or the polynomial
/// shorthand `{"kind":"poly","coeffs":[1,[0,1],2]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ExprSpec {
    Const { value: ComplexSpec },
    Z,
    Add { lhs: Box<ExprSpec>, rhs: Box<ExprSpec> },
    Sub { lhs: Box<ExprSpec>, rhs: Box<ExprSpec> },
    Mul { lhs: Box<ExprSpec>, rhs: Box<ExprSpec> },
    Div { lhs: Box<ExprSpec>, rhs: Box<ExprSpec> },
    Pow { base: Box<ExprSpec>, exp: f64 },
    Log { arg: Box<ExprSpec> },
    Poly { coeffs: Vec<ComplexSpec> },
}

impl From<&ExprSpec> for HoloExpr {
    fn from(spec: &ExprSpec) -> HoloExpr {
        match spec {
            ExprSpec::Const { value } => HoloExpr::Const((*value).into()),
            ExprSpec::Z => HoloExpr::Z,
            ExprSpec::Add { lhs, rhs } => HoloExpr::from(&**lhs) + HoloExpr::from(&**rhs),
            ExprSpec::Sub { lhs, rhs } => HoloExpr::from(&**lhs) - HoloExpr::from(&**rhs),
            ExprSpec::Mul { lhs, rhs } => HoloExpr::from(&**lhs) * HoloExpr::from(&**rhs),
            ExprSpec::Div { lhs, rhs } => HoloExpr::from(&**lhs) / HoloExpr::from(&**rhs),
            ExprSpec::Pow { base, exp } => HoloExpr::from(&**base).pow(*exp),
            ExprSpec::Log { arg } => HoloExpr::from(&**arg).log(),
            ExprSpec::Poly { coeffs } => {
                let cs: Vec<Complex64> = coeffs.iter().map(|&c| c.into()).collect();
                HoloExpr::poly(&cs)
            }
        }
    }
}
