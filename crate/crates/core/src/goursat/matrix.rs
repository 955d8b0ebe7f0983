//! Characterizing matrix of the boundary operators and its minimal
//! characterizing number; `|H|_min < 1` is the solvability condition for the
//! fixed-boundary problem.

use serde::{Deserialize, Serialize};

/// 2x2 matrix of boundary-operator partial derivatives at the origin state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CharacterizingMatrix(pub [[f64; 2]; 2]);

/// `inf over nonzero (q1,q2) of max_l sum_k |q_l/q_k H_lk|`, reduced
/// analytically to a one-parameter min-max over the ratio `|q1/q2|`.
///
/// With `rho = |q1/q2|`, row 1 contributes `|H11| + rho |H12|` (increasing)
/// and row 2 `|H22| + |H21|/rho` (decreasing); the infimum sits either at
/// their crossing or in a ratio limit, where it degenerates to
/// `max(|H11|, |H22|)`.
pub fn min_characterizing_number(h: &CharacterizingMatrix) -> f64 {
    let a = h.0[0][0].abs();
    let b = h.0[0][1].abs();
    let c = h.0[1][0].abs();
    let d = h.0[1][1].abs();
    if b == 0.0 || c == 0.0 {
        return a.max(d);
    }
    // crossing of a + rho b = d + c / rho: b rho^2 + (a - d) rho - c = 0
    let disc = (a - d) * (a - d) + 4.0 * b * c;
    let rho = (-(a - d) + disc.sqrt()) / (2.0 * b);
    debug_assert!(rho > 0.0);
    (a + rho * b).max(a.max(d))
}

/// Direct logarithmic grid search over ratios; cross-check oracle for the
/// analytic reduction.
pub fn min_characterizing_number_grid(h: &CharacterizingMatrix, per_decade: usize) -> f64 {
    let a = h.0[0][0].abs();
    let b = h.0[0][1].abs();
    let c = h.0[1][0].abs();
    let d = h.0[1][1].abs();
    let mut best = f64::INFINITY;
    let decades = 12.0;
    let n = (per_decade as f64 * decades) as usize;
    for i in 0..=n {
        let rho = 10f64.powf(-6.0 + decades * i as f64 / n as f64);
        best = best.min((a + rho * b).max(d + c / rho));
    }
    best
}
