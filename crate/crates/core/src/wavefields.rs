//! Gradient variables `(xi, zeta)`, weighted gradients `(alpha, beta)`,
//! Riccati coefficients, and local compression/rarefaction classification.
//!
//! `(xi, zeta)` are the scaled directional derivatives `-s_t/c` and `r_t/c`;
//! they vanish on stationary varying-entropy solutions, which makes them the
//! correct compression indicators for non-isentropic flow. `(alpha, beta)`
//! are integrating-factor-weighted versions obeying the decoupled Riccati
//! equations `d+ alpha = b0 - b2 alpha^2`, `d- beta = b0 - b2 beta^2`.

use serde::{Deserialize, Serialize};

use crate::gas::GasModel;

/// Gradient variables at a point, all spatial derivatives in mass coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GradientState {
    pub s_x: f64,
    pub r_x: f64,
    pub xi: f64,
    pub zeta: f64,
    pub alpha: f64,
    pub beta: f64,
    pub shat_x: f64,
    pub shat_xx: f64,
}

/// Coefficients of the Riccati systems along characteristics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiccatiCoeffs {
    /// Isentropic coefficient; defined as `b2` evaluated at `Shat = 1`.
    pub b: f64,
    pub b0: f64,
    pub b2: f64,
    pub k1: f64,
    pub k2: f64,
}

/// `xi = u_x + Shat a_x + ((g-1)/g) Shat_x a`, `zeta` with the opposite sign
/// on the acoustic part.
pub fn xi_zeta(u_x: f64, a_x: f64, a: f64, shat: f64, shat_x: f64, gamma: f64) -> (f64, f64) {
    let acoustic = shat * a_x + (gamma - 1.0) / gamma * shat_x * a;
    (u_x + acoustic, u_x - acoustic)
}

/// `(s_x, r_x)` from `(xi, zeta)`: `s_x = xi + Shat_x a / g`, `r_x = zeta - Shat_x a / g`.
pub fn sx_rx_from_xi_zeta(xi: f64, zeta: f64, a: f64, shat_x: f64, gamma: f64) -> (f64, f64) {
    (xi + shat_x * a / gamma, zeta - shat_x * a / gamma)
}

fn weight(a: f64, shat: f64, gamma: f64) -> f64 {
    shat.powf(-3.0 * (3.0 - gamma) / (2.0 * (3.0 * gamma - 1.0)))
        * a.powf((gamma + 1.0) / (2.0 * (gamma - 1.0)))
}

fn entropy_shift(a: f64, shat_x: f64, gamma: f64) -> f64 {
    (gamma - 1.0) / (gamma * (3.0 * gamma - 1.0)) * shat_x * a
}

/// Weighted gradients from `(xi, zeta)`.
pub fn alpha_beta(
    xi: f64,
    zeta: f64,
    a: f64,
    shat: f64,
    shat_x: f64,
    gamma: f64,
) -> (f64, f64) {
    let w = weight(a, shat, gamma);
    let shift = entropy_shift(a, shat_x, gamma);
    (w * (xi + shift), w * (zeta - shift))
}

/// Inverse of [`alpha_beta`].
pub fn xi_zeta_from_alpha_beta(
    alpha: f64,
    beta: f64,
    a: f64,
    shat: f64,
    shat_x: f64,
    gamma: f64,
) -> (f64, f64) {
    let w = weight(a, shat, gamma);
    let shift = entropy_shift(a, shat_x, gamma);
    (alpha / w - shift, beta / w + shift)
}

/// All gradient variables from raw derivatives.
pub fn gradient_state(
    u_x: f64,
    a_x: f64,
    a: f64,
    shat: f64,
    shat_x: f64,
    shat_xx: f64,
    gamma: f64,
) -> GradientState {
    let (xi, zeta) = xi_zeta(u_x, a_x, a, shat, shat_x, gamma);
    let (alpha, beta) = alpha_beta(xi, zeta, a, shat, shat_x, gamma);
    let (s_x, r_x) = sx_rx_from_xi_zeta(xi, zeta, a, shat_x, gamma);
    GradientState { s_x, r_x, xi, zeta, alpha, beta, shat_x, shat_xx }
}

/// Riccati coefficients at a state point.
pub fn riccati_coeffs(
    a: f64,
    shat: f64,
    shat_x: f64,
    shat_xx: f64,
    model: &GasModel,
) -> RiccatiCoeffs {
    let g = model.gamma;
    let k_c = model.k_c();
    let sw = 3.0 * (3.0 - g) / (2.0 * (3.0 * g - 1.0));
    let b0 = k_c * (g - 1.0) / (g * (3.0 * g - 1.0))
        * (shat * shat_xx - (3.0 * g + 1.0) / (3.0 * g - 1.0) * shat_x * shat_x)
        * shat.powf(-sw)
        * a.powf(3.0 * (g + 1.0) / (2.0 * (g - 1.0)) + 1.0);
    let b2_shape = k_c * (g + 1.0) / (2.0 * (g - 1.0)) * a.powf((3.0 - g) / (2.0 * (g - 1.0)));
    let b2 = b2_shape * shat.powf(sw);
    let b = b2_shape;
    let k1 = (g + 1.0) * k_c / (2.0 * (g - 1.0)) * a.powf(2.0 / (g - 1.0));
    let k2 = (g - 1.0) / (g * (g + 1.0)) * a * shat_x;
    RiccatiCoeffs { b, b0, b2, k1, k2 }
}

/// Displayed closed form of `b0/b2`; used as a transcription cross-check.
pub fn b0_over_b2(a: f64, shat: f64, shat_x: f64, shat_xx: f64, gamma: f64) -> f64 {
    let g = gamma;
    2.0 * (g - 1.0) * (g - 1.0) / (g * (g + 1.0) * (3.0 * g - 1.0))
        * (shat * shat_xx - (3.0 * g + 1.0) / (3.0 * g - 1.0) * shat_x * shat_x)
        * a.powf((3.0 * g - 1.0) / (g - 1.0))
        * shat.powf(-3.0 * (3.0 - g) / (3.0 * g - 1.0))
}

/// Local wave character per the strict-sign classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WaveCharacter {
    Rarefaction,
    Compression,
    Neutral,
}

impl WaveCharacter {
    fn of_gradient(g: f64) -> Self {
        if g > 0.0 {
            WaveCharacter::Rarefaction
        } else if g < 0.0 {
            WaveCharacter::Compression
        } else {
            WaveCharacter::Neutral
        }
    }
}

/// Forward/backward compression-rarefaction characters of an isentropic
/// state from `(s_x, r_x)`. Callers assert `Shat_x = 0`; the signs of
/// `(s_x, r_x)` do not classify non-isentropic waves.
pub fn classify_character(s_x: f64, r_x: f64) -> (WaveCharacter, WaveCharacter) {
    (WaveCharacter::of_gradient(s_x), WaveCharacter::of_gradient(r_x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use proptest::prelude::*;

    #[test]
    fn xi_zeta_direct_values() {
        let (xi, zeta) = xi_zeta(0.2, 0.3, 1.0, 1.0, 0.1, 2.0);
        assert_relative_eq!(xi, 0.55, max_relative = 1e-14);
        assert_relative_eq!(zeta, -0.15, max_relative = 1e-14);
    }

    #[test]
    fn xi_zeta_stationary_profile_vanishes() {
        // stationary: u_x = 0 and Shat a_x = -((g-1)/g) Shat_x a
        for &gamma in &[1.4, 2.0, 3.0] {
            let (a, shat, shat_x) = (0.7, 1.3, 0.45);
            let a_x = -(gamma - 1.0) / gamma * shat_x * a / shat;
            let (xi, zeta) = xi_zeta(0.0, a_x, a, shat, shat_x, gamma);
            assert_abs_diff_eq!(xi, 0.0, epsilon = 1e-12);
            assert_abs_diff_eq!(zeta, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn xi_zeta_isentropic_reduction() {
        let (u_x, a_x, a, shat) = (0.2, -0.4, 1.7, 1.0);
        let (xi, zeta) = xi_zeta(u_x, a_x, a, shat, 0.0, 1.4);
        let s_x = u_x + shat * a_x;
        let r_x = u_x - shat * a_x;
        assert_abs_diff_eq!(xi, s_x, epsilon = 1e-15);
        assert_abs_diff_eq!(zeta, r_x, epsilon = 1e-15);
    }

    #[test]
    fn alpha_weights() {
        let (alpha, _) = alpha_beta(-1.0, 0.0, 1.0, 1.0, 0.0, 2.0);
        assert_abs_diff_eq!(alpha, -1.0, epsilon = 1e-15);

        // a = 4, s_x = 0.5, isentropic gamma = 2: alpha = 4^{3/2} * 0.5 = 4
        let (alpha, _) = alpha_beta(0.5, 0.0, 4.0, 1.0, 0.0, 2.0);
        assert_relative_eq!(alpha, 4.0, max_relative = 1e-14);
    }

    #[test]
    fn example_31_point_values_at_origin() {
        // gamma = 2, c_v = 1, eps = 0.01 at x = 0:
        // Shat = 1, a = 1, u_x = eps, Shat_x = 1/2, a_x = -3/10
        let (gamma, eps) = (2.0, 0.01);
        let (a, shat, shat_x) = (1.0, 1.0, 0.5);
        let a_x = -3.0 * (gamma - 1.0) / (3.0 * gamma - 1.0) * shat_x * a / shat;
        let (xi, zeta) = xi_zeta(eps, a_x, a, shat, shat_x, gamma);
        assert_relative_eq!(xi, -0.04, max_relative = 1e-12);
        assert_relative_eq!(zeta, 0.06, max_relative = 1e-12);
        let (alpha, beta) = alpha_beta(xi, zeta, a, shat, shat_x, gamma);
        assert_relative_eq!(alpha, eps, max_relative = 1e-12);
        assert_relative_eq!(beta, eps, max_relative = 1e-12);
    }

    #[test]
    fn riccati_coeff_values() {
        let m = GasModel::with_gamma(2.0).unwrap();
        let rc = riccati_coeffs(1.0, 1.0, 0.0, 0.0, &m);
        assert_abs_diff_eq!(rc.b0, 0.0, epsilon = 1e-15);

        let m3 = GasModel::with_gamma(3.0).unwrap();
        for &a in &[0.3, 1.0, 5.5] {
            let rc = riccati_coeffs(a, 1.0, 0.0, 0.0, &m3);
            assert_relative_eq!(rc.b2, 1.0 / 3f64.sqrt(), max_relative = 1e-14);
            assert_relative_eq!(rc.b, rc.b2, max_relative = 1e-14);
        }

        let rc = riccati_coeffs(1.0, 1.0, 0.6, 0.0, &m);
        assert_relative_eq!(rc.k1, 3.0 / 32.0, max_relative = 1e-14);
        assert_relative_eq!(rc.k2, 0.1, max_relative = 1e-14);
    }

    #[test]
    fn b0_sign_matches_entropy_combination() {
        let m = GasModel::with_gamma(1.4).unwrap();
        for &(shat, shat_x, shat_xx) in
            &[(1.0, 0.3, 1.0), (2.0, 0.0, -0.5), (0.7, 0.5, 0.1), (1.0, 0.0, 0.0)]
        {
            let rc = riccati_coeffs(0.9, shat, shat_x, shat_xx, &m);
            let comb = shat * shat_xx
                - (3.0 * m.gamma + 1.0) / (3.0 * m.gamma - 1.0) * shat_x * shat_x;
            assert!(rc.b2 > 0.0);
            if comb == 0.0 {
                assert_abs_diff_eq!(rc.b0, 0.0, epsilon = 1e-15);
            } else {
                assert!(rc.b0 * comb > 0.0, "b0 = {} vs comb = {comb}", rc.b0);
            }
        }
    }

    #[test]
    fn ratio_display_matches_coefficients() {
        for &gamma in &[1.4, 2.0, 2.7, 3.0] {
            let m = GasModel::new(gamma, 1.3, 0.9, (gamma - 1.0) * 0.9).unwrap();
            for &(a, shat, shat_x, shat_xx) in
                &[(0.83, 1.21, 0.37, 0.11), (2.0, 0.6, -0.2, 0.4), (0.2, 1.0, 0.9, -1.3)]
            {
                let rc = riccati_coeffs(a, shat, shat_x, shat_xx, &m);
                let display = b0_over_b2(a, shat, shat_x, shat_xx, gamma);
                assert_relative_eq!(rc.b0 / rc.b2, display, max_relative = 1e-12);
            }
        }
    }

    /// Stationary-solution oracle for the full Riccati transcription: on a
    /// stationary profile (u, p constant, Shat(x) = e^{arctan(x)/(2 c_v)}),
    /// the field is time-independent, so `d+ alpha = c alpha_x` must equal
    /// `b0 - b2 alpha^2` pointwise. `alpha_x` is taken by 4th-order central
    /// differences of the closed-form profile.
    #[test]
    fn stationary_riccati_identity() {
        for &gamma in &[1.4, 2.0, 2.7, 3.0] {
            let c_v = 0.9;
            let m = GasModel::new(gamma, 1.3, c_v, (gamma - 1.0) * c_v).unwrap();
            let p0 = 0.8;
            let g = gamma;
            let shat = |x: f64| (x.atan() / (2.0 * c_v)).exp();
            let a_of = |x: f64| (p0 / (m.k_p() * shat(x) * shat(x))).powf((g - 1.0) / (2.0 * g));
            let shat_x = |x: f64| shat(x) / (2.0 * c_v * (1.0 + x * x));
            let alpha_of = |x: f64| {
                let w = weight(a_of(x), shat(x), g);
                w * entropy_shift(a_of(x), shat_x(x), g)
            };

            for &x in &[-1.2, 0.0, 0.37, 2.5] {
                let h = 1e-3;
                let alpha_x = (alpha_of(x - 2.0 * h) - 8.0 * alpha_of(x - h)
                    + 8.0 * alpha_of(x + h)
                    - alpha_of(x + 2.0 * h))
                    / (12.0 * h);
                let sx = shat_x(x);
                let sxx = (shat_x(x - 2.0 * h) - 8.0 * shat_x(x - h) + 8.0 * shat_x(x + h)
                    - shat_x(x + 2.0 * h))
                    / (12.0 * h);
                let a = a_of(x);
                let c = m.sound_speed(a, shat(x));
                let rc = riccati_coeffs(a, shat(x), sx, sxx, &m);
                let alpha = alpha_of(x);
                let lhs = c * alpha_x;
                let rhs = rc.b0 - rc.b2 * alpha * alpha;
                assert_relative_eq!(lhs, rhs, max_relative = 1e-8, epsilon = 1e-10);

                // beta = -alpha on the stationary profile; d- beta = -c beta_x
                let beta = -alpha;
                let lhs_b = -c * (-alpha_x);
                let rhs_b = rc.b0 - rc.b2 * beta * beta;
                assert_relative_eq!(lhs_b, rhs_b, max_relative = 1e-8, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn classify_strict_signs() {
        use WaveCharacter::*;
        assert_eq!(classify_character(-1.0, 2.0), (Compression, Rarefaction));
        assert_eq!(classify_character(0.0, 0.0), (Neutral, Neutral));
        assert_eq!(classify_character(1e-300, -1e-300), (Rarefaction, Compression));
    }

    proptest! {
        #[test]
        fn alpha_beta_roundtrip(
            xi in -10.0f64..10.0,
            zeta in -10.0f64..10.0,
            a in 0.05f64..20.0,
            shat in 0.2f64..5.0,
            shat_x in -2.0f64..2.0,
            gamma in 1.1f64..4.0,
        ) {
            let (alpha, beta) = alpha_beta(xi, zeta, a, shat, shat_x, gamma);
            let (xi2, zeta2) = xi_zeta_from_alpha_beta(alpha, beta, a, shat, shat_x, gamma);
            let scale = xi.abs().max(zeta.abs()).max(1.0);
            prop_assert!((xi - xi2).abs() <= 1e-12 * scale);
            prop_assert!((zeta - zeta2).abs() <= 1e-12 * scale);
        }

        #[test]
        fn xi_zeta_sx_rx_consistency(
            u_x in -5.0f64..5.0,
            a_x in -5.0f64..5.0,
            a in 0.05f64..20.0,
            shat in 0.2f64..5.0,
            shat_x in -2.0f64..2.0,
            gamma in 1.1f64..4.0,
        ) {
            let (xi, zeta) = xi_zeta(u_x, a_x, a, shat, shat_x, gamma);
            let (s_x, r_x) = sx_rx_from_xi_zeta(xi, zeta, a, shat_x, gamma);
            // s_x = u_x + (Shat a)_x = u_x + Shat_x a + Shat a_x
            let s_x_direct = u_x + shat_x * a + shat * a_x;
            let r_x_direct = u_x - shat_x * a - shat * a_x;
            let scale = s_x_direct.abs().max(r_x_direct.abs()).max(1.0);
            prop_assert!((s_x - s_x_direct).abs() <= 1e-12 * scale);
            prop_assert!((r_x - r_x_direct).abs() <= 1e-12 * scale);
        }
    }
}
