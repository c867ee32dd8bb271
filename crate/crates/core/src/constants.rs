//! Explicit constants of the weak-type chain, stored in closed form.

use std::f64::consts::{E, PI};

use serde::Serialize;

/// Reflected truncation on self-adjoint zero-diagonal input: `4e/π`.
pub const C_TRUNC_SA: f64 = 4.0 * E / PI;
/// Reflected truncation on arbitrary zero-diagonal input: `16e/π`.
pub const C_TRUNC: f64 = 16.0 * E / PI;
/// The multiplier `S`: `80e/π`.
pub const C_S: f64 = 80.0 * E / PI;
/// Identically and symmetrically distributed pairs: `8 + 640e/π`.
pub const C_SYM: f64 = 8.0 + 640.0 * E / PI;
/// Arbitrary self-adjoint pairs: `34 + 2560e/π`.
pub const C_MAIN: f64 = 34.0 + 2560.0 * E / PI;
/// Trace-norm factor for a positive Schur multiplier.
pub const SCHUR_FACTOR: f64 = 4.0;
/// Quasi-triangle constant of the weak-L1 quasi-norm.
pub const QUASI_TRI: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundConstants {
    pub c_trunc_sa: f64,
    pub c_trunc: f64,
    pub c_s: f64,
    pub c_sym: f64,
    pub c_main: f64,
    pub schur_factor: f64,
    pub quasi_tri: f64,
}

impl Default for BoundConstants {
    fn default() -> Self {
        Self {
            c_trunc_sa: C_TRUNC_SA,
            c_trunc: C_TRUNC,
            c_s: C_S,
            c_sym: C_SYM,
            c_main: C_MAIN,
            schur_factor: SCHUR_FACTOR,
            quasi_tri: QUASI_TRI,
        }
    }
}

impl BoundConstants {
    /// Largest relative discrepancy among the derivation identities
    /// `c_trunc = 4·c_trunc_sa`, `c_s = 5·c_trunc`, `c_sym = 8 + 8·c_s`,
    /// `c_main = 34 + 32·c_s` and `c_main = 2·(2·c_sym) + 2`.
    pub fn consistency_defect(&self) -> f64 {
        let rel = |a: f64, b: f64| (a - b).abs() / b.abs();
        [
            rel(self.c_trunc, 4.0 * self.c_trunc_sa),
            rel(self.c_s, 5.0 * self.c_trunc),
            rel(self.c_sym, 8.0 + 8.0 * self.c_s),
            rel(self.c_main, 34.0 + 32.0 * self.c_s),
            rel(
                self.c_main,
                self.quasi_tri * (2.0 * self.c_sym) + self.quasi_tri,
            ),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}
