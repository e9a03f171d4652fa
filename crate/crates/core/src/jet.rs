//! Truncated Taylor jets of holomorphic functions.
//!
//! Convention: `coeffs[k] = f^(k)(z0) / k!` (scaled Taylor coefficients).
//! Scaled storage delays overflow for high orders; raw derivatives are
//! recovered through [`ComplexJet::derivative`], which multiplies by `k!`.
//!
//! All binary operations truncate to the minimum order of their inputs.
//! Polynomial and rational arithmetic is exact up to floating point;
//! nothing here approximates.

use num_complex::Complex64;

use crate::error::CoreError;

/// Constant terms below this magnitude count as a pole for division.
const POLE_EPS: f64 = 1e-300;

/// Truncated Taylor expansion of a holomorphic function at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexJet {
    center: Complex64,
    coeffs: Vec<Complex64>,
}

impl ComplexJet {
    /// Jet with the given scaled coefficients `c_k = f^(k)(z0)/k!`.
    pub fn from_coeffs(center: Complex64, coeffs: Vec<Complex64>) -> Self {
        assert!(!coeffs.is_empty(), "a jet carries at least the value");
        ComplexJet { center, coeffs }
    }

    /// Jet of the constant function `c` to order `k`.
    pub fn constant(center: Complex64, c: Complex64, order: usize) -> Self {
        let mut coeffs = vec![Complex64::ZERO; order + 1];
        coeffs[0] = c;
        ComplexJet { center, coeffs }
    }

    /// Jet of the identity `z ↦ z` at `center`, to order `k`.
    pub fn variable(center: Complex64, order: usize) -> Self {
        let mut coeffs = vec![Complex64::ZERO; order + 1];
        coeffs[0] = center;
        if order >= 1 {
            coeffs[1] = Complex64::ONE;
        }
        ComplexJet { center, coeffs }
    }

    pub fn center(&self) -> Complex64 {
        self.center
    }

    /// Truncation order `K`; the jet holds `K + 1` coefficients.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Scaled coefficients `f^(k)(z0)/k!`.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Function value `f(z0)`.
    pub fn value(&self) -> Complex64 {
        self.coeffs[0]
    }

    /// Raw derivative `f^(k)(z0) = c_k · k!`.
    pub fn derivative(&self, k: usize) -> Complex64 {
        assert!(k <= self.order(), "derivative order {k} beyond jet order");
        self.coeffs[k] * factorial(k)
    }

    fn common_len(&self, rhs: &Self) -> usize {
        debug_assert_eq!(self.center, rhs.center, "jet centers must agree");
        self.coeffs.len().min(rhs.coeffs.len())
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.common_len(rhs);
        let coeffs = (0..n).map(|k| self.coeffs[k] + rhs.coeffs[k]).collect();
        ComplexJet { center: self.center, coeffs }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let n = self.common_len(rhs);
        let coeffs = (0..n).map(|k| self.coeffs[k] - rhs.coeffs[k]).collect();
        ComplexJet { center: self.center, coeffs }
    }

    pub fn neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|c| -c).collect();
        ComplexJet { center: self.center, coeffs }
    }

    /// Cauchy product, truncated to the common order.
    pub fn mul(&self, rhs: &Self) -> Self {
        let n = self.common_len(rhs);
        let mut coeffs = vec![Complex64::ZERO; n];
        for (k, c) in coeffs.iter_mut().enumerate() {
            let mut sum = Complex64::ZERO;
            for j in 0..=k {
                sum += self.coeffs[j] * rhs.coeffs[k - j];
            }
            *c = sum;
        }
        ComplexJet { center: self.center, coeffs }
    }

    /// Recursive power-series division: `c_k = (a_k − Σ_{j=1..k} b_j c_{k−j}) / b_0`.
    ///
    /// The divisor's constant term must be bounded away from zero; a value
    /// below 1e-300 means the represented function has a pole at the center.
    pub fn div(&self, rhs: &Self) -> Result<Self, CoreError> {
        let n = self.common_len(rhs);
        let b0 = rhs.coeffs[0];
        if b0.norm() < POLE_EPS {
            return Err(CoreError::PoleAtPoint {
                at: self.center,
                expr: "<jet divisor>".into(),
            });
        }
        let mut coeffs = vec![Complex64::ZERO; n];
        for k in 0..n {
            let mut sum = self.coeffs[k];
            for j in 1..=k {
                sum -= rhs.coeffs[j] * coeffs[k - j];
            }
            coeffs[k] = sum / b0;
        }
        Ok(ComplexJet { center: self.center, coeffs })
    }

    /// Integer power by binary exponentiation (exponent ≥ 0).
    pub fn powi(&self, exp: u32) -> Self {
        let mut result = ComplexJet::constant(self.center, Complex64::ONE, self.order());
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Principal-branch logarithm.
    ///
    /// `c_0 = Log(u_0)`, then `c_k = (u_k − (1/k) Σ_{j=1..k−1} (k−j) u_j c_{k−j}) / u_0`.
    /// Errors when the constant term sits on the branch cut (non-positive real).
    pub fn log(&self) -> Result<Self, CoreError> {
        let u0 = self.coeffs[0];
        if on_branch_cut(u0) {
            return Err(CoreError::BranchCut {
                at: self.center,
                expr: "<jet log>".into(),
                value: u0,
            });
        }
        let n = self.coeffs.len();
        let mut coeffs = vec![Complex64::ZERO; n];
        coeffs[0] = u0.ln();
        for k in 1..n {
            let mut sum = Complex64::ZERO;
            for j in 1..k {
                sum += self.coeffs[j] * coeffs[k - j] * ((k - j) as f64);
            }
            coeffs[k] = (self.coeffs[k] - sum / (k as f64)) / u0;
        }
        Ok(ComplexJet { center: self.center, coeffs })
    }

    /// Principal-branch real power `u^s`.
    ///
    /// `c_k = (1/(k·u_0)) Σ_{j=1..k} (j(s+1) − k) u_j c_{k−j}`, seeded with
    /// `c_0 = exp(s · Log u_0)`. Same branch-cut domain as [`ComplexJet::log`].
    pub fn powf(&self, s: f64) -> Result<Self, CoreError> {
        let u0 = self.coeffs[0];
        if on_branch_cut(u0) {
            return Err(CoreError::BranchCut {
                at: self.center,
                expr: "<jet powf>".into(),
                value: u0,
            });
        }
        let n = self.coeffs.len();
        let mut coeffs = vec![Complex64::ZERO; n];
        coeffs[0] = (u0.ln() * s).exp();
        for k in 1..n {
            let mut sum = Complex64::ZERO;
            for j in 1..=k {
                let w = (j as f64) * (s + 1.0) - k as f64;
                sum += self.coeffs[j] * coeffs[k - j] * w;
            }
            coeffs[k] = sum / (u0 * k as f64);
        }
        Ok(ComplexJet { center: self.center, coeffs })
    }
}

/// Composition `f ∘ φ`: `outer` expanded at `w0 = φ(z0)`, `inner` at `z0`.
///
/// Returns the jet of the composition at `inner.center`, exact through the
/// common order (Horner over the shifted inner series, whose constant term
/// is zero). Errors when `outer.center` and `inner` value disagree beyond
/// 1e-12.
pub fn jet_compose(outer: &ComplexJet, inner: &ComplexJet) -> Result<ComplexJet, CoreError> {
    let dist = (outer.center - inner.value()).norm();
    if dist > 1e-12 {
        return Err(CoreError::CenterMismatch {
            outer: outer.center,
            inner: inner.value(),
            dist,
        });
    }
    let order = outer.order().min(inner.order());
    // u = inner − w0 has zero constant term, so powers of u gain a vanishing
    // leading coefficient each and the Horner loop below is exact at `order`.
    let mut u = inner.clone();
    u.coeffs.truncate(order + 1);
    u.coeffs[0] = Complex64::ZERO;

    let mut result = ComplexJet::constant(inner.center, outer.coeffs[order], order);
    for k in (0..order).rev() {
        result = result.mul(&u);
        result.coeffs[0] += outer.coeffs[k];
    }
    result.center = inner.center;
    Ok(result)
}

/// `k!` as f64 (exact through k = 20).
pub fn factorial(k: usize) -> f64 {
    let mut acc = 1.0;
    for i in 2..=k {
        acc *= i as f64;
    }
    acc
}

/// Principal branch cut: non-positive real axis.
fn on_branch_cut(u: Complex64) -> bool {
    u.im == 0.0 && u.re <= 0.0
}
