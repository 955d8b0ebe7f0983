//! Equation-of-state transforms, derived constants, and the Riemann-variable
//! algebra every other module consumes.
//!
//! The gas is ideal polytropic, `p = K e^{S/c_v} v^{-gamma}`. All state
//! algebra is phrased in the rescaled sound variable `a` and the entropy
//! factor `Shat = e^{S/(2 c_v)}`, in which
//!
//! ```text
//! v = K_v a^{-2/(g-1)},  p = K_p Shat^2 a^{2g/(g-1)},  c = K_c Shat a^{(g+1)/(g-1)}
//! ```
//!
//! with the three positive constants cached in [`GasModel`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Inputs with `v > NEAR_VACUUM_V` (equivalently `a < NEAR_VACUUM_A`) are
/// accepted but flagged in diagnostics; far-field vacuum data are in scope.
pub const NEAR_VACUUM_V: f64 = 1e12;
pub const NEAR_VACUUM_A: f64 = 1e-9;

/// Adiabatic constants plus the derived constants `K_v`, `K_p`, `K_c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GasModel {
    pub gamma: f64,
    /// Pressure constant `K` in `p = K e^{S/c_v} v^{-gamma}`.
    pub k: f64,
    /// Specific heat `c_v`.
    pub c_v: f64,
    /// Ideal gas constant `R`.
    pub r: f64,
    k_v: f64,
    k_p: f64,
    k_c: f64,
}

/// Derived constants `(K_v, K_p, K_c)` for given `gamma > 1`, `K > 0`.
pub fn derive_constants(gamma: f64, k: f64) -> Result<(f64, f64, f64)> {
    if !(gamma > 1.0) || !gamma.is_finite() {
        return Err(Error::Domain(format!("gamma must exceed 1, got {gamma}")));
    }
    if !(k > 0.0) || !k.is_finite() {
        return Err(Error::Domain(format!("K must be positive, got {k}")));
    }
    let k_v = (2.0 * (k * gamma).sqrt() / (gamma - 1.0)).powf(2.0 / (gamma - 1.0));
    let k_p = k * k_v.powf(-gamma);
    let k_c = (k * gamma).sqrt() * k_v.powf(-(gamma + 1.0) / 2.0);
    Ok((k_v, k_p, k_c))
}

impl GasModel {
    pub fn new(gamma: f64, k: f64, c_v: f64, r: f64) -> Result<Self> {
        if !(c_v > 0.0) {
            return Err(Error::Domain(format!("c_v must be positive, got {c_v}")));
        }
        let (k_v, k_p, k_c) = derive_constants(gamma, k)?;
        Ok(Self { gamma, k, c_v, r, k_v, k_p, k_c })
    }

    /// Default test model: `K = 1`, `c_v = 1`, `R = (gamma - 1) c_v`.
    pub fn with_gamma(gamma: f64) -> Result<Self> {
        Self::new(gamma, 1.0, 1.0, (gamma - 1.0) * 1.0)
    }

    pub fn k_v(&self) -> f64 {
        self.k_v
    }

    pub fn k_p(&self) -> f64 {
        self.k_p
    }

    pub fn k_c(&self) -> f64 {
        self.k_c
    }

    /// `a = (2 sqrt(K g)/(g-1)) v^{-(g-1)/2}` for `v > 0`.
    pub fn a_from_v(&self, v: f64) -> Result<f64> {
        if !(v > 0.0) {
            return Err(Error::Domain(format!("specific volume must be positive, got {v}")));
        }
        Ok(2.0 * (self.k * self.gamma).sqrt() / (self.gamma - 1.0)
            * v.powf(-(self.gamma - 1.0) / 2.0))
    }

    /// Inverse of [`GasModel::a_from_v`]: `v = K_v a^{-2/(g-1)}`.
    pub fn v_from_a(&self, a: f64) -> Result<f64> {
        if !(a > 0.0) {
            return Err(Error::Domain(format!("sound variable must be positive, got {a}")));
        }
        Ok(self.k_v * a.powf(-2.0 / (self.gamma - 1.0)))
    }

    /// Entropy factor `Shat = e^{S/(2 c_v)}`.
    pub fn shat_from_entropy(&self, s: f64) -> f64 {
        (s / (2.0 * self.c_v)).exp()
    }

    pub fn entropy_from_shat(&self, shat: f64) -> f64 {
        2.0 * self.c_v * shat.ln()
    }

    /// Sound speed `c = K_c Shat a^{(g+1)/(g-1)}`; inputs assumed positive.
    pub fn sound_speed(&self, a: f64, shat: f64) -> f64 {
        self.k_c * shat * a.powf((self.gamma + 1.0) / (self.gamma - 1.0))
    }

    /// Pressure `p = K_p Shat^2 a^{2g/(g-1)}`; inputs assumed positive.
    pub fn pressure(&self, a: f64, shat: f64) -> f64 {
        self.k_p * shat * shat * a.powf(2.0 * self.gamma / (self.gamma - 1.0))
    }

    /// Full thermodynamic point `(p, c, v, rho, e)` from `(a, Shat)`.
    pub fn thermo(&self, a: f64, shat: f64) -> Result<Thermo> {
        if !(a > 0.0) || !(shat > 0.0) {
            return Err(Error::Domain(format!(
                "thermo requires a > 0 and Shat > 0, got a={a}, Shat={shat}"
            )));
        }
        let v = self.v_from_a(a)?;
        let p = self.pressure(a, shat);
        let c = self.sound_speed(a, shat);
        Ok(Thermo { p, c, v, rho: 1.0 / v, e: p * v / (self.gamma - 1.0) })
    }
}

/// Thermodynamic quantities derived from `(a, Shat)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thermo {
    pub p: f64,
    pub c: f64,
    pub v: f64,
    pub rho: f64,
    pub e: f64,
}

/// Pointwise unknowns `(v, u, S)` of the Lagrangian system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FluidState {
    pub v: f64,
    pub u: f64,
    pub s: f64,
}

impl FluidState {
    pub fn new(v: f64, u: f64, s: f64) -> Result<Self> {
        if !(v > 0.0) {
            return Err(Error::Vacuum(format!("specific volume must be positive, got {v}")));
        }
        Ok(Self { v, u, s })
    }

    pub fn rho(&self) -> f64 {
        1.0 / self.v
    }

    pub fn pressure(&self, model: &GasModel) -> f64 {
        model.k * (self.s / model.c_v).exp() * self.v.powf(-model.gamma)
    }

    pub fn internal_energy(&self, model: &GasModel) -> f64 {
        self.pressure(model) * self.v / (model.gamma - 1.0)
    }

    pub fn temperature(&self, model: &GasModel) -> f64 {
        self.pressure(model) * self.v / model.r
    }

    pub fn sound_speed(&self, model: &GasModel) -> f64 {
        (model.k * model.gamma).sqrt()
            * self.v.powf(-(model.gamma + 1.0) / 2.0)
            * model.shat_from_entropy(self.s)
    }

    pub fn is_near_vacuum(&self) -> bool {
        self.v > NEAR_VACUUM_V
    }
}

/// Characteristic-variable form of a state: sound variable, entropy factor,
/// Riemann variables and their tilde transforms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiemannState {
    pub a: f64,
    pub shat: f64,
    pub s: f64,
    pub r: f64,
    pub s_tilde: f64,
    pub r_tilde: f64,
}

impl RiemannState {
    pub fn from_primitive(u: f64, a: f64, shat: f64, model: &GasModel) -> Result<Self> {
        if !(a > 0.0) || !(shat > 0.0) {
            return Err(Error::Domain(format!(
                "RiemannState requires a > 0 and Shat > 0, got a={a}, Shat={shat}"
            )));
        }
        let (s, r) = riemann_pair(u, a, shat);
        let (s_tilde, r_tilde) = tilde_transform(s, r, shat, model.gamma);
        Ok(Self { a, shat, s, r, s_tilde, r_tilde })
    }

    pub fn u(&self) -> f64 {
        (self.s + self.r) / 2.0
    }

    pub fn is_near_vacuum(&self) -> bool {
        self.a < NEAR_VACUUM_A
    }
}

/// Riemann variables `s = u + Shat a`, `r = u - Shat a`.
pub fn riemann_pair(u: f64, a: f64, shat: f64) -> (f64, f64) {
    (u + shat * a, u - shat * a)
}

/// Inverse of [`riemann_pair`]; rejects the vacuum boundary `s <= r`.
pub fn state_from_riemann(s: f64, r: f64, shat: f64) -> Result<(f64, f64)> {
    if !(shat > 0.0) {
        return Err(Error::Domain(format!("Shat must be positive, got {shat}")));
    }
    if s <= r {
        return Err(Error::Vacuum(format!("s <= r is a vacuum state (s={s}, r={r})")));
    }
    Ok(((s + r) / 2.0, (s - r) / (2.0 * shat)))
}

/// Tilde transform `s~ = Shat^{-1/(2g)} s`, `r~ = Shat^{-1/(2g)} r`, in which
/// the transport system becomes C^1 in its arguments.
pub fn tilde_transform(s: f64, r: f64, shat: f64, gamma: f64) -> (f64, f64) {
    let w = shat.powf(-1.0 / (2.0 * gamma));
    (w * s, w * r)
}

/// Sound speed from tilde variables:
/// `c = K_c ((s~-r~)/2)^{(g+1)/(g-1)} Shat^{(1-3g)/(2g(g-1))}`.
pub fn sound_speed_tilde(s_tilde: f64, r_tilde: f64, shat: f64, model: &GasModel) -> f64 {
    let g = model.gamma;
    model.k_c()
        * ((s_tilde - r_tilde) / 2.0).powf((g + 1.0) / (g - 1.0))
        * shat.powf((1.0 - 3.0 * g) / (2.0 * g * (g - 1.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn derived_constants_gamma_2() {
        let (k_v, k_p, k_c) = derive_constants(2.0, 1.0).unwrap();
        assert_relative_eq!(k_v, 8.0, max_relative = 1e-14);
        assert_relative_eq!(k_p, 0.015625, max_relative = 1e-14);
        assert_relative_eq!(k_c, 0.0625, max_relative = 1e-14);
    }

    #[test]
    fn derived_constants_gamma_3() {
        let (k_v, k_p, k_c) = derive_constants(3.0, 1.0).unwrap();
        assert_relative_eq!(k_v, 3f64.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(k_p, 3f64.powf(-1.5), max_relative = 1e-14);
        assert_relative_eq!(k_c, 1.0 / 3f64.sqrt(), max_relative = 1e-14);
    }

    #[test]
    fn derived_constants_rejects_bad_inputs() {
        assert!(derive_constants(1.0, 1.0).is_err());
        assert!(derive_constants(0.9, 1.0).is_err());
        assert!(derive_constants(2.0, 0.0).is_err());
        assert!(derive_constants(2.0, -1.0).is_err());
    }

    #[test]
    fn a_v_conversions() {
        let m = GasModel::with_gamma(2.0).unwrap();
        assert_relative_eq!(m.a_from_v(1.0).unwrap(), 2.0 * 2f64.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(m.a_from_v(4.0).unwrap(), 2f64.sqrt(), max_relative = 1e-14);
        assert!(m.a_from_v(0.0).is_err());
        assert!(m.a_from_v(-2.0).is_err());
    }

    #[test]
    fn a_v_roundtrip_wide_range() {
        for &gamma in &[1.4, 2.0, 3.0, 5.0] {
            let m = GasModel::with_gamma(gamma).unwrap();
            let mut v = 1e-6;
            while v <= 1e6 {
                let a = m.a_from_v(v).unwrap();
                assert_relative_eq!(m.v_from_a(a).unwrap(), v, max_relative = 1e-12);
                v *= 3.7;
            }
        }
    }

    #[test]
    fn thermo_cross_checks() {
        let m = GasModel::with_gamma(2.0).unwrap();
        let t = m.thermo(2.0 * 2f64.sqrt(), 1.0).unwrap();
        assert_relative_eq!(t.p, 1.0, max_relative = 1e-13);
        assert_relative_eq!(t.c, 2f64.sqrt(), max_relative = 1e-13);
        assert_relative_eq!(t.v, 1.0, max_relative = 1e-13);

        let m3 = GasModel::with_gamma(3.0).unwrap();
        let t3 = m3.thermo(3f64.sqrt(), 1.0).unwrap();
        assert_relative_eq!(t3.v, 1.0, max_relative = 1e-13);

        // c^2 = K g Shat^2 v^{-g-1} and p = K Shat^2 v^{-g} on a grid of states
        for &gamma in &[1.4, 2.0, 2.7, 3.0] {
            let m = GasModel::with_gamma(gamma).unwrap();
            for &v in &[0.11, 0.9, 1.0, 7.3, 120.0] {
                for &shat in &[0.5, 1.0, 2.3] {
                    let a = m.a_from_v(v).unwrap();
                    let t = m.thermo(a, shat).unwrap();
                    let c2 = m.k * gamma * shat * shat * v.powf(-gamma - 1.0);
                    let p = m.k * shat * shat * v.powf(-gamma);
                    assert_relative_eq!(t.c * t.c, c2, max_relative = 1e-12);
                    assert_relative_eq!(t.p, p, max_relative = 1e-12);
                    assert_relative_eq!(t.e, p * v / (gamma - 1.0), max_relative = 1e-12);
                }
            }
        }
    }

    #[test]
    fn isentropic_reduction_shat_one() {
        let m = GasModel::with_gamma(1.4).unwrap();
        let shat = m.shat_from_entropy(0.0);
        assert_eq!(shat, 1.0);
        let v = 2.5;
        let a = m.a_from_v(v).unwrap();
        let t = m.thermo(a, shat).unwrap();
        assert_relative_eq!(t.p, m.k * v.powf(-m.gamma), max_relative = 1e-12);
    }

    #[test]
    fn riemann_pair_and_inverse() {
        let (s, r) = riemann_pair(0.0, 2.0 * 2f64.sqrt(), 1.0);
        assert_abs_diff_eq!(s, 2.0 * 2f64.sqrt());
        assert_abs_diff_eq!(r, -2.0 * 2f64.sqrt());

        let (u, a) = state_from_riemann(3.0, 1.0, 2.0).unwrap();
        assert_abs_diff_eq!(u, 2.0);
        assert_abs_diff_eq!(a, 0.5);

        assert!(matches!(state_from_riemann(1.0, 1.0, 1.0), Err(Error::Vacuum(_))));
        assert!(matches!(state_from_riemann(0.5, 1.0, 1.0), Err(Error::Vacuum(_))));
    }

    #[test]
    fn tilde_transform_values() {
        let (st, rt) = tilde_transform(2.0, -2.0, 1.0, 2.0);
        assert_eq!((st, rt), (2.0, -2.0));

        let e = std::f64::consts::E;
        let (st, _) = tilde_transform(2.0, -2.0, e, 2.0);
        assert_relative_eq!(st, 2.0 * (-0.25f64).exp(), max_relative = 1e-12);
        assert_relative_eq!(st, 1.5576015661428098, max_relative = 1e-7);
    }

    #[test]
    fn tilde_sound_speed_consistency() {
        // both c routes agree for (g=2, K=1, u=0, v=1, S=0) and generic states
        let m = GasModel::with_gamma(2.0).unwrap();
        let a = m.a_from_v(1.0).unwrap();
        let rs = RiemannState::from_primitive(0.0, a, 1.0, &m).unwrap();
        let c1 = m.sound_speed(a, 1.0);
        let c2 = sound_speed_tilde(rs.s_tilde, rs.r_tilde, 1.0, &m);
        assert_relative_eq!(c1, 2f64.sqrt(), max_relative = 1e-12);
        assert_relative_eq!(c1, c2, max_relative = 1e-12);

        for &gamma in &[1.4, 2.0, 3.0] {
            let m = GasModel::new(gamma, 1.3, 0.9, (gamma - 1.0) * 0.9).unwrap();
            for &(u, a, shat) in &[(0.3, 0.83, 1.21), (-1.0, 2.0, 0.4), (0.0, 1e-3, 3.0)] {
                let rs = RiemannState::from_primitive(u, a, shat, &m).unwrap();
                assert_relative_eq!(
                    sound_speed_tilde(rs.s_tilde, rs.r_tilde, shat, &m),
                    m.sound_speed(a, shat),
                    max_relative = 1e-12
                );
            }
        }
    }

    #[test]
    fn near_vacuum_flagging() {
        let st = FluidState::new(2e12, 0.0, 0.0).unwrap();
        assert!(st.is_near_vacuum());
        let st = FluidState::new(1.0, 0.0, 0.0).unwrap();
        assert!(!st.is_near_vacuum());
        assert!(FluidState::new(0.0, 0.0, 0.0).is_err());
    }
}
