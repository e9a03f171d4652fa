//! Coefficient polynomials `G_j` of the J-th derivative expansion
//!
//! ```text
//! (g · (f ∘ φ))^(J)(z) = Σ_{j=0..J} G_j(z) · f^(j)(φ(z))
//! ```
//!
//! Each `G_j` is a polynomial with non-negative integer coefficients in
//! the formal variables `g_k ↔ g^(k)` and `p_k ↔ φ^(k)`. Tables are built
//! once per `J` by the derivation recursion
//!
//! ```text
//! G_j[J+1] = D(G_j[J]) + G_{j−1}[J] · p_1,     G_{−1} ≡ 0,
//! ```
//!
//! where `D` sends `g_k ↦ g_{k+1}`, `p_k ↦ p_{k+1}` and acts by Leibniz
//! on monomials. A completed table is immutable and shareable across
//! concurrent evaluators; evaluation substitutes numeric jet derivatives.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::CoreError;
use crate::expr::HoloExpr;

/// Monomial `g_{g_order} · Π_k p_k^{phi_exps[k−1]}`.
///
/// Every monomial carries exactly one `g`-derivative factor; `phi_exps`
/// is trimmed of trailing zeros so equal monomials compare equal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Monomial {
    pub g_order: u32,
    pub phi_exps: Vec<u32>,
}

impl Monomial {
    fn new(g_order: u32, mut phi_exps: Vec<u32>) -> Self {
        while phi_exps.last() == Some(&0) {
            phi_exps.pop();
        }
        Monomial { g_order, phi_exps }
    }

    /// Total derivative weight `g_order + Σ k · e_k`.
    pub fn weight(&self) -> u32 {
        self.g_order
            + self
                .phi_exps
                .iter()
                .enumerate()
                .map(|(i, &e)| (i as u32 + 1) * e)
                .sum::<u32>()
    }

    /// Number of φ-derivative factors `Σ e_k`.
    pub fn phi_factor_count(&self) -> u32 {
        self.phi_exps.iter().sum()
    }
}

/// One entry `G_j`: monomial → coefficient.
pub type GPolynomial = BTreeMap<Monomial, u64>;

/// The full table `G_0[·,J] … G_J[·,J]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GCoefficientTable {
    order: u32,
    entries: Vec<GPolynomial>,
}

/// Formal derivation `D` applied to one polynomial.
fn derive(poly: &GPolynomial) -> GPolynomial {
    let mut out = GPolynomial::new();
    for (m, &coeff) in poly {
        // g_k ↦ g_{k+1}
        let bumped = Monomial::new(m.g_order + 1, m.phi_exps.clone());
        add_term(&mut out, bumped, coeff);
        // p_k ↦ p_{k+1}, Leibniz over the φ factors
        for (i, &e) in m.phi_exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let mut exps = m.phi_exps.clone();
            exps[i] -= 1;
            if exps.len() < i + 2 {
                exps.resize(i + 2, 0);
            }
            exps[i + 1] += 1;
            add_term(
                &mut out,
                Monomial::new(m.g_order, exps),
                coeff.checked_mul(e as u64).expect("G coefficient overflow"),
            );
        }
    }
    out
}

fn mul_p1(poly: &GPolynomial) -> GPolynomial {
    let mut out = GPolynomial::new();
    for (m, &coeff) in poly {
        let mut exps = m.phi_exps.clone();
        if exps.is_empty() {
            exps.push(0);
        }
        exps[0] += 1;
        add_term(&mut out, Monomial::new(m.g_order, exps), coeff);
    }
    out
}

fn add_term(poly: &mut GPolynomial, m: Monomial, coeff: u64) {
    let slot = poly.entry(m).or_insert(0);
    *slot = slot.checked_add(coeff).expect("G coefficient overflow");
}

/// Build the table for derivative order `J`.
///
/// Coefficients are bounded by multinomials and stay far below `u64::MAX`
/// for every order this library evaluates; growth past `J = 20` is
/// rejected rather than silently wrapped.
pub fn build_table(j_max: u32) -> GCoefficientTable {
    assert!(j_max <= 20, "G tables beyond J = 20 risk coefficient overflow");
    // J = 0: the single entry G_0 = g_0.
    let mut entries = vec![GPolynomial::from([(Monomial::new(0, vec![]), 1)])];
    for _ in 0..j_max {
        let prev = &entries;
        let mut next = Vec::with_capacity(prev.len() + 1);
        for j in 0..prev.len() + 1 {
            let mut e = if j < prev.len() {
                derive(&prev[j])
            } else {
                GPolynomial::new()
            };
            if j > 0 {
                for (m, c) in mul_p1(&prev[j - 1]) {
                    add_term(&mut e, m, c);
                }
            }
            next.push(e);
        }
        entries = next;
    }
    GCoefficientTable { order: j_max, entries }
}

impl GCoefficientTable {
    pub fn order(&self) -> u32 {
        self.order
    }

    /// The polynomial `G_j`.
    pub fn entry(&self, j: usize) -> &GPolynomial {
        &self.entries[j]
    }

    pub fn entries(&self) -> &[GPolynomial] {
        &self.entries
    }

    /// Substitute numeric derivative values.
    ///
    /// `g_derivs[k] = g^(k)(z)` for `k = 0..=J`; `phi_derivs[k] = φ^(k)(z)`
    /// for `k = 1..=J` (index 0 unused).
    pub fn eval_with_derivatives(
        &self,
        g_derivs: &[Complex64],
        phi_derivs: &[Complex64],
    ) -> Vec<Complex64> {
        self.entries
            .iter()
            .map(|poly| {
                let mut acc = Complex64::ZERO;
                for (m, &coeff) in poly {
                    let mut term = Complex64::new(coeff as f64, 0.0) * g_derivs[m.g_order as usize];
                    for (i, &e) in m.phi_exps.iter().enumerate() {
                        for _ in 0..e {
                            term *= phi_derivs[i + 1];
                        }
                    }
                    acc += term;
                }
                acc
            })
            .collect()
    }

    /// Human-readable line for one entry, e.g. `G_1[J=2] = 2 g1 p1 + g0 p2`.
    pub fn render_entry(&self, j: usize) -> String {
        let mut s = format!("G_{j}[J={}] = ", self.order);
        let poly = &self.entries[j];
        if poly.is_empty() {
            s.push('0');
            return s;
        }
        // Descending g-order reads like the hand-written tables.
        let mut first = true;
        for (m, &coeff) in poly.iter().rev() {
            if !first {
                s.push_str(" + ");
            }
            first = false;
            if coeff != 1 {
                let _ = write!(s, "{coeff} ");
            }
            let _ = write!(s, "g{}", m.g_order);
            for (i, &e) in m.phi_exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let _ = write!(s, " p{}", i + 1);
                if e > 1 {
                    let _ = write!(s, "^{e}");
                }
            }
        }
        s
    }

    pub fn render(&self) -> String {
        (0..self.entries.len())
            .map(|j| self.render_entry(j))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

/// Evaluate all `G_j[g, φ, J](z)` by substituting jet derivatives.
pub fn eval_g(
    table: &GCoefficientTable,
    g: &HoloExpr,
    phi: &HoloExpr,
    z: Complex64,
) -> Result<Vec<Complex64>, CoreError> {
    let j = table.order() as usize;
    let g_jet = g.eval_jet(z, j)?;
    let phi_jet = phi.eval_jet(z, j)?;
    let g_derivs: Vec<Complex64> = (0..=j).map(|k| g_jet.derivative(k)).collect();
    let phi_derivs: Vec<Complex64> = (0..=j).map(|k| phi_jet.derivative(k)).collect();
    Ok(table.eval_with_derivatives(&g_derivs, &phi_derivs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono(g: u32, exps: &[u32]) -> Monomial {
        Monomial::new(g, exps.to_vec())
    }

    #[test]
    fn table_j0_is_g0() {
        let t = build_table(0);
        assert_eq!(t.entries().len(), 1);
        assert_eq!(t.entry(0), &GPolynomial::from([(mono(0, &[]), 1)]));
    }

    #[test]
    fn table_j1() {
        let t = build_table(1);
        assert_eq!(t.entry(0), &GPolynomial::from([(mono(1, &[]), 1)]));
        assert_eq!(t.entry(1), &GPolynomial::from([(mono(0, &[1]), 1)]));
    }

    #[test]
    fn table_j2() {
        let t = build_table(2);
        assert_eq!(t.entry(0), &GPolynomial::from([(mono(2, &[]), 1)]));
        assert_eq!(
            t.entry(1),
            &GPolynomial::from([(mono(1, &[1]), 2), (mono(0, &[0, 1]), 1)])
        );
        assert_eq!(t.entry(2), &GPolynomial::from([(mono(0, &[2]), 1)]));
    }

    #[test]
    fn grading_holds_up_to_j10() {
        for j_max in 0..=10u32 {
            let t = build_table(j_max);
            for (j, poly) in t.entries().iter().enumerate() {
                for m in poly.keys() {
                    assert_eq!(m.weight(), j_max, "derivative weight of every monomial is J");
                    assert_eq!(m.phi_factor_count(), j as u32, "φ-factor count is j");
                }
            }
        }
    }

    #[test]
    fn unweighted_specialization_is_faa_di_bruno() {
        // g ≡ 1 keeps only g_0 monomials; the top entry is p_1^J.
        let t = build_table(5);
        let top = t.entry(5);
        assert_eq!(top.len(), 1);
        let (m, &c) = top.iter().next().unwrap();
        assert_eq!(c, 1);
        assert_eq!(m, &mono(0, &[5]));
    }

    #[test]
    fn unweighted_fourth_order_matches_classical_chain_rule() {
        // (f∘φ)'''' = f''''·p1^4 + 6 f'''·p1² p2 + f''·(3 p2² + 4 p1 p3) + f'·p4
        let t = build_table(4);
        let g0_part = |j: usize| -> Vec<(Monomial, u64)> {
            t.entry(j)
                .iter()
                .filter(|(m, _)| m.g_order == 0)
                .map(|(m, &c)| (m.clone(), c))
                .collect()
        };
        assert_eq!(g0_part(1), vec![(mono(0, &[0, 0, 0, 1]), 1)]);
        assert_eq!(
            g0_part(2),
            vec![(mono(0, &[0, 2]), 3), (mono(0, &[1, 0, 1]), 4)]
        );
        assert_eq!(g0_part(3), vec![(mono(0, &[2, 1]), 6)]);
        assert_eq!(g0_part(4), vec![(mono(0, &[4]), 1)]);
    }

    #[test]
    fn eval_weighted_shift() {
        // g = z, φ = z², J = 1, z = 0.5 → G_0 = 1, G_1 = z·2z = 0.5
        let t = build_table(1);
        let g = HoloExpr::z();
        let phi = HoloExpr::z().int_pow(2);
        let vals = eval_g(&t, &g, &phi, Complex64::new(0.5, 0.0)).unwrap();
        assert!((vals[0] - Complex64::ONE).norm() < 1e-15);
        assert!((vals[1] - Complex64::new(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn eval_pure_composition() {
        // g ≡ 1, φ = z: only G_J = 1 survives.
        for j_max in 0..=4u32 {
            let t = build_table(j_max);
            let vals = eval_g(
                &t,
                &HoloExpr::constant(1.0),
                &HoloExpr::z(),
                Complex64::new(0.3, 0.2),
            )
            .unwrap();
            for (j, v) in vals.iter().enumerate() {
                let expect = if j as u32 == j_max { 1.0 } else { 0.0 };
                assert!((v - Complex64::new(expect, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn render_matches_handwritten_form() {
        let t = build_table(2);
        assert_eq!(t.render_entry(0), "G_0[J=2] = g2");
        assert_eq!(t.render_entry(1), "G_1[J=2] = 2 g1 p1 + g0 p2");
        assert_eq!(t.render_entry(2), "G_2[J=2] = g0 p1^2");
    }
}
