//! Numerical boundedness and essential-norm estimation for weighted
//! composition operators `f ↦ g · (f ∘ φ)` between holomorphic
//! Lipschitz-scale spaces on the unit disk.
//!
//! The building blocks:
//!
//! * [`jet`] — truncated Taylor jets: exact higher derivatives of
//!   holomorphic expressions at interior points.
//! * [`expr`] — expression trees for the symbols `g`, `φ` and for test
//!   functions (constants, `z`, arithmetic, powers, principal log).
//! * [`gcoeff`] — the coefficient polynomials `G_j` expressing the J-th
//!   derivative of `g · (f ∘ φ)` in terms of `f^(j) ∘ φ`.
//! * [`weights`] — the piecewise weight family `Ω_{j,β}`, monomial norms
//!   in weighted sup-spaces, and weighted growth suprema.
//! * [`grid`] — dyadic disk grids, adaptive supremum estimates,
//!   restricted (boundary) suprema, and Lipschitz-scale norms.
//! * [`criteria`] — continuous and discrete boundedness checks plus their
//!   cross-comparison.
//! * [`essnorm`] — two-sided essential-norm estimates, compactness
//!   verdicts, and test-function lower-bound witnesses.
//! * [`testfns`] — construction and numerical verification of the
//!   boundary test functions.
//! * [`oracle`] — independent brute-force cross-checks (finite
//!   differences, dense sampling, the defining identity).
//! * [`battery`] — built-in operator configurations with known behavior.
//!
//! With the default `parallel` feature the grid sweeps run on rayon;
//! disabling it yields a fully sequential build with identical results
//! (all parallel reductions are order-independent maxima collected in
//! deterministic order).

pub mod analysis;
pub mod battery;
pub mod criteria;
pub mod error;
pub mod essnorm;
pub mod expr;
pub mod gcoeff;
pub mod grid;
pub mod jet;
pub mod oracle;
mod par;
pub mod testfns;
pub mod weights;

pub use error::CoreError;
pub use expr::HoloExpr;
pub use grid::{DiskGrid, LimsupCurve, SupEstimate};
pub use jet::ComplexJet;
pub use weights::{SpaceParam, WeightBranch};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
