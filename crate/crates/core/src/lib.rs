//! Exact arithmetic for continued fractions of square roots of monic quartics,
//! the elliptic curves behind them, and the Somos / elliptic divisibility
//! sequences they generate.
//!
//! Everything here is exact: scalars are arbitrary-precision rationals or
//! prime-field residues, so every identity is checked with `==`, never with a
//! tolerance.
//!
//! Module map:
//!
//! * [`field`] — scalar arithmetic over Q and over F_p (p ≥ 5 prime).
//! * [`poly`] — dense univariate polynomials over a scalar field.
//! * [`laurent`] — truncated Laurent series in 1/X and the Newton square root.
//! * [`cf_general`] — continued fractions of quadratic irrationals Y with
//!   Y² = T·Y + D over F(X): reduced lines, periodicity, units, convergents.
//! * [`cf_quartic`] — the specialised expansion of Y = √((X²+f)² + 4v(X−w))
//!   driven by scalar recursions on (v_h, w_h, e_h).
//! * [`curves`] — the quartic model, its Weierstrass model, the birational
//!   maps between them, the group law, and the translation-by-S structure of
//!   the expansion.
//! * [`sequences`] — two-sided sequences: A_{h−1}A_{h+1} = e_h·A_h² builders,
//!   Somos 4/5/6/8 relations, elliptic divisibility sequences, torsion
//!   detection, twists, and integer renormalisation.
//! * [`sampling`] — seeded random curves, points and states for sweeps.
//! * [`golden`] — the end-to-end worked-example checks used by the acceptance
//!   tests and by `eccf examples`.

pub mod cf_general;
pub mod cf_quartic;
pub mod curves;
pub mod error;
pub mod field;
pub mod golden;
pub mod laurent;
pub mod poly;
pub mod sampling;
pub mod sequences;

pub use error::Error;
pub use field::{Field, FieldScalar};
pub use poly::{Degree, Polynomial};
