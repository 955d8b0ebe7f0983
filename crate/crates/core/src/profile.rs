//! Initial-data profiles: closed-form families with analytic derivatives,
//! tabulated data with stencil derivatives, and far-field descriptors that
//! make sup/inf/TV scans over unbounded x well-defined.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gas::GasModel;
use crate::stencil;

/// Pointwise profile values and derivatives in the mass coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfilePoint {
    pub a: f64,
    pub u: f64,
    pub s: f64,
    pub a_x: f64,
    pub u_x: f64,
    pub s_x: f64,
    pub s_xx: f64,
}

/// Limiting state at one end of the line. Gradient quantities decay to zero
/// beyond the declared window for every profile in this catalogue.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FarState {
    pub a: f64,
    pub u: f64,
    pub shat: f64,
}

/// An initial-data profile `(a0, u0, S0)(x)` with analytic derivatives.
pub trait Profile: Send + Sync {
    fn state(&self, x: f64) -> ProfilePoint;

    /// Core support: scans outside this window use the far-field data.
    fn window(&self) -> (f64, f64);

    /// Limiting states at (-inf, +inf).
    fn far_states(&self, model: &GasModel) -> (FarState, FarState);

    /// Exact total variation of `S0` outside `[lo, hi]` (unscaled by `c_v`).
    fn tv_tail(&self, _lo: f64, _hi: f64) -> f64 {
        0.0
    }

    /// `Some(S)` when the profile is exactly isentropic.
    fn constant_entropy(&self) -> Option<f64>;
}

/// Initial data: a profile plus the gas model it is posed for.
#[derive(Clone)]
pub struct InitialData {
    pub profile: Arc<dyn Profile>,
    pub model: GasModel,
}

/// Profile sampled on a uniform grid, with entropy-factor derivatives.
#[derive(Debug, Clone)]
pub struct SampledInitial {
    pub x0: f64,
    pub dx: f64,
    pub a0: Vec<f64>,
    pub u0: Vec<f64>,
    pub s0: Vec<f64>,
    pub shat0: Vec<f64>,
    pub a0_x: Vec<f64>,
    pub u0_x: Vec<f64>,
    pub shat0_x: Vec<f64>,
    pub shat0_xx: Vec<f64>,
}

impl InitialData {
    pub fn new(profile: Arc<dyn Profile>, model: GasModel) -> Self {
        Self { profile, model }
    }

    pub fn is_isentropic(&self) -> bool {
        self.profile.constant_entropy().is_some()
    }

    /// Sample `n` nodes over the profile window (or an explicit interval).
    pub fn sample(&self, n: usize, interval: Option<(f64, f64)>) -> Result<SampledInitial> {
        if n < 2 {
            return Err(Error::Config(format!("need at least 2 sample nodes, got {n}")));
        }
        let (lo, hi) = interval.unwrap_or_else(|| self.profile.window());
        if !(hi > lo) {
            return Err(Error::Config(format!("empty sampling interval [{lo}, {hi}]")));
        }
        let dx = (hi - lo) / (n - 1) as f64;
        let c_v = self.model.c_v;
        let mut out = SampledInitial {
            x0: lo,
            dx,
            a0: Vec::with_capacity(n),
            u0: Vec::with_capacity(n),
            s0: Vec::with_capacity(n),
            shat0: Vec::with_capacity(n),
            a0_x: Vec::with_capacity(n),
            u0_x: Vec::with_capacity(n),
            shat0_x: Vec::with_capacity(n),
            shat0_xx: Vec::with_capacity(n),
        };
        for j in 0..n {
            let x = lo + j as f64 * dx;
            let p = self.profile.state(x);
            if !(p.a > 0.0) {
                return Err(Error::Vacuum(format!("initial a0({x}) = {} is not positive", p.a)));
            }
            let shat = (p.s / (2.0 * c_v)).exp();
            let w = p.s_x / (2.0 * c_v);
            out.a0.push(p.a);
            out.u0.push(p.u);
            out.s0.push(p.s);
            out.shat0.push(shat);
            out.a0_x.push(p.a_x);
            out.u0_x.push(p.u_x);
            out.shat0_x.push(shat * w);
            out.shat0_xx.push(shat * (w * w + p.s_xx / (2.0 * c_v)));
        }
        Ok(out)
    }
}

impl SampledInitial {
    pub fn len(&self) -> usize {
        self.a0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a0.is_empty()
    }

    pub fn x(&self, j: usize) -> f64 {
        self.x0 + j as f64 * self.dx
    }
}

/// Spatially uniform state.
#[derive(Debug, Clone, Copy)]
pub struct Uniform {
    pub a: f64,
    pub u: f64,
    pub s: f64,
    pub window: (f64, f64),
}

impl Profile for Uniform {
    fn state(&self, _x: f64) -> ProfilePoint {
        ProfilePoint { a: self.a, u: self.u, s: self.s, a_x: 0.0, u_x: 0.0, s_x: 0.0, s_xx: 0.0 }
    }

    fn window(&self) -> (f64, f64) {
        self.window
    }

    fn far_states(&self, model: &GasModel) -> (FarState, FarState) {
        let f = FarState { a: self.a, u: self.u, shat: model.shat_from_entropy(self.s) };
        (f, f)
    }

    fn constant_entropy(&self) -> Option<f64> {
        Some(self.s)
    }
}

/// Isentropic Gaussian bump in the sound variable and velocity:
/// `a0 = a_base + a_amp e^{-xi^2/2}`, `u0 = u_amp e^{-xi^2/2}`,
/// `xi = (x - center)/width`.
#[derive(Debug, Clone, Copy)]
pub struct GaussianBump {
    pub a_base: f64,
    pub a_amp: f64,
    pub u_amp: f64,
    pub center: f64,
    pub width: f64,
    pub s: f64,
    pub window: (f64, f64),
}

impl Profile for GaussianBump {
    fn state(&self, x: f64) -> ProfilePoint {
        let xi = (x - self.center) / self.width;
        let g = (-0.5 * xi * xi).exp();
        let g_x = -xi / self.width * g;
        ProfilePoint {
            a: self.a_base + self.a_amp * g,
            u: self.u_amp * g,
            s: self.s,
            a_x: self.a_amp * g_x,
            u_x: self.u_amp * g_x,
            s_x: 0.0,
            s_xx: 0.0,
        }
    }

    fn window(&self) -> (f64, f64) {
        self.window
    }

    fn far_states(&self, model: &GasModel) -> (FarState, FarState) {
        let f = FarState { a: self.a_base, u: 0.0, shat: model.shat_from_entropy(self.s) };
        (f, f)
    }

    fn constant_entropy(&self) -> Option<f64> {
        Some(self.s)
    }
}

/// Isentropic (`S = 0`, `Shat = 1`) simple wave in Riemann variables: `r0`
/// constant and `s0(x) = s_mid + amp * tanh(xi)`. Rarefactive for `amp > 0`.
#[derive(Debug, Clone, Copy)]
pub struct SimpleWaveTanh {
    pub s_mid: f64,
    pub amp: f64,
    pub r_const: f64,
    pub center: f64,
    pub width: f64,
    pub window: (f64, f64),
}

impl Profile for SimpleWaveTanh {
    fn state(&self, x: f64) -> ProfilePoint {
        let xi = (x - self.center) / self.width;
        let t = xi.tanh();
        let s0 = self.s_mid + self.amp * t;
        let s0_x = self.amp * (1.0 - t * t) / self.width;
        ProfilePoint {
            a: (s0 - self.r_const) / 2.0,
            u: (s0 + self.r_const) / 2.0,
            s: 0.0,
            a_x: s0_x / 2.0,
            u_x: s0_x / 2.0,
            s_x: 0.0,
            s_xx: 0.0,
        }
    }

    fn window(&self) -> (f64, f64) {
        self.window
    }

    fn far_states(&self, _model: &GasModel) -> (FarState, FarState) {
        (
            FarState {
                a: (self.s_mid - self.amp - self.r_const) / 2.0,
                u: (self.s_mid - self.amp + self.r_const) / 2.0,
                shat: 1.0,
            },
            FarState {
                a: (self.s_mid + self.amp - self.r_const) / 2.0,
                u: (self.s_mid + self.amp + self.r_const) / 2.0,
                shat: 1.0,
            },
        )
    }

    fn constant_entropy(&self) -> Option<f64> {
        Some(0.0)
    }
}

/// Isentropic (`S = 0`) simple wave with a localized compressive pulse:
/// `s0(x) = s_base + amp * psi(xi)`, `psi(xi) = -xi e^{-xi^2/2}`, `r0` const.
/// `min s0' = -amp/width`, attained at the pulse center.
#[derive(Debug, Clone, Copy)]
pub struct CompressivePulse {
    pub s_base: f64,
    pub amp: f64,
    pub r_const: f64,
    pub center: f64,
    pub width: f64,
    pub window: (f64, f64),
}

impl Profile for CompressivePulse {
    fn state(&self, x: f64) -> ProfilePoint {
        let xi = (x - self.center) / self.width;
        let g = (-0.5 * xi * xi).exp();
        let psi = -xi * g;
        let psi_x = (xi * xi - 1.0) * g / self.width;
        let s0 = self.s_base + self.amp * psi;
        let s0_x = self.amp * psi_x;
        ProfilePoint {
            a: (s0 - self.r_const) / 2.0,
            u: (s0 + self.r_const) / 2.0,
            a_x: s0_x / 2.0,
            u_x: s0_x / 2.0,
            s: 0.0,
            s_x: 0.0,
            s_xx: 0.0,
        }
    }

    fn window(&self) -> (f64, f64) {
        self.window
    }

    fn far_states(&self, _model: &GasModel) -> (FarState, FarState) {
        let f = FarState {
            a: (self.s_base - self.r_const) / 2.0,
            u: (self.s_base + self.r_const) / 2.0,
            shat: 1.0,
        };
        (f, f)
    }

    fn constant_entropy(&self) -> Option<f64> {
        Some(0.0)
    }
}

/// The arctan family: `S0 = arctan(x)`, `a0 = Shat0^{-3(g-1)/(3g-1)}`,
/// `u0 = eps * arctan(x)`. Its weighted gradients have the closed forms
/// `alpha0 = beta0 = eps/(1+x^2) Shat0^{-6/(3g-1)}`.
#[derive(Debug, Clone, Copy)]
pub struct ArctanData {
    pub eps: f64,
    pub gamma: f64,
    pub c_v: f64,
    pub window: (f64, f64),
}

impl ArctanData {
    pub fn new(eps: f64, gamma: f64, c_v: f64) -> Self {
        Self { eps, gamma, c_v, window: (-50.0, 50.0) }
    }

    fn shat(&self, x: f64) -> f64 {
        (x.atan() / (2.0 * self.c_v)).exp()
    }

    /// Closed form of `alpha0 = beta0`.
    pub fn alpha0(&self, x: f64) -> f64 {
        self.eps / (1.0 + x * x) * self.shat(x).powf(-6.0 / (3.0 * self.gamma - 1.0))
    }

    /// Closed forms of `(xi0, zeta0)`.
    pub fn xi_zeta0(&self, x: f64) -> (f64, f64) {
        let g = self.gamma;
        let term = (g - 1.0) / (2.0 * g * (3.0 * g - 1.0) * self.c_v)
            * self.shat(x).powf(2.0 / (3.0 * g - 1.0));
        ((self.eps - term) / (1.0 + x * x), (self.eps + term) / (1.0 + x * x))
    }
}

impl Profile for ArctanData {
    fn state(&self, x: f64) -> ProfilePoint {
        let q = 1.0 + x * x;
        let s = x.atan();
        let s_x = 1.0 / q;
        let s_xx = -2.0 * x / (q * q);
        let shat = self.shat(x);
        let e = -3.0 * (self.gamma - 1.0) / (3.0 * self.gamma - 1.0);
        let a = shat.powf(e);
        // a_x = e * a * Shat_x / Shat, with Shat_x/Shat = s_x/(2 c_v)
        let a_x = e * a * s_x / (2.0 * self.c_v);
        ProfilePoint { a, u: self.eps * s, s, a_x, u_x: self.eps * s_x, s_x, s_xx }
    }

    fn window(&self) -> (f64, f64) {
        self.window
    }

    fn far_states(&self, _model: &GasModel) -> (FarState, FarState) {
        use std::f64::consts::FRAC_PI_2;
        let e = -3.0 * (self.gamma - 1.0) / (3.0 * self.gamma - 1.0);
        let mk = |s: f64| {
            let shat = (s / (2.0 * self.c_v)).exp();
            FarState { a: shat.powf(e), u: self.eps * s, shat }
        };
        (mk(-FRAC_PI_2), mk(FRAC_PI_2))
    }

    fn tv_tail(&self, lo: f64, hi: f64) -> f64 {
        use std::f64::consts::FRAC_PI_2;
        (FRAC_PI_2 + lo.atan().min(FRAC_PI_2)).max(0.0) + (FRAC_PI_2 - hi.atan()).max(0.0)
    }

    fn constant_entropy(&self) -> Option<f64> {
        None
    }
}

/// Tabulated profile on a uniform grid, constant beyond its ends.
/// Derivatives are supplied analytically or fall back to the module-wide
/// stencil; values between nodes are linearly interpolated.
#[derive(Debug, Clone)]
pub struct Tabulated {
    x0: f64,
    dx: f64,
    a: Vec<f64>,
    u: Vec<f64>,
    s: Vec<f64>,
    a_x: Vec<f64>,
    u_x: Vec<f64>,
    s_x: Vec<f64>,
    s_xx: Vec<f64>,
    constant_entropy: Option<f64>,
}

impl Tabulated {
    pub fn new(x0: f64, dx: f64, a: Vec<f64>, u: Vec<f64>, s: Vec<f64>) -> Result<Self> {
        if a.len() < 4 || a.len() != u.len() || a.len() != s.len() {
            return Err(Error::Config("tabulated profile needs >= 4 equal-length columns".into()));
        }
        if !(dx > 0.0) {
            return Err(Error::Config(format!("tabulated dx must be positive, got {dx}")));
        }
        let a_x = stencil::gradient(&a, dx);
        let u_x = stencil::gradient(&u, dx);
        let s_x = stencil::gradient(&s, dx);
        let s_xx = stencil::second_derivative(&s, dx);
        let constant_entropy =
            if s.iter().all(|&v| v == s[0]) { Some(s[0]) } else { None };
        Ok(Self { x0, dx, a, u, s, a_x, u_x, s_x, s_xx, constant_entropy })
    }

    /// Replace stencil derivatives with analytic ones.
    pub fn with_derivatives(
        mut self,
        a_x: Vec<f64>,
        u_x: Vec<f64>,
        s_x: Vec<f64>,
        s_xx: Vec<f64>,
    ) -> Result<Self> {
        let n = self.a.len();
        if a_x.len() != n || u_x.len() != n || s_x.len() != n || s_xx.len() != n {
            return Err(Error::Config("derivative columns must match value columns".into()));
        }
        self.a_x = a_x;
        self.u_x = u_x;
        self.s_x = s_x;
        self.s_xx = s_xx;
        Ok(self)
    }

    fn locate(&self, x: f64) -> (usize, f64) {
        let n = self.a.len();
        let t = (x - self.x0) / self.dx;
        if t <= 0.0 {
            return (0, 0.0);
        }
        if t >= (n - 1) as f64 {
            return (n - 2, 1.0);
        }
        let j = (t.floor() as usize).min(n - 2);
        (j, t - j as f64)
    }
}

impl Profile for Tabulated {
    fn state(&self, x: f64) -> ProfilePoint {
        let (j, w) = self.locate(x);
        let lerp = |v: &[f64]| v[j] * (1.0 - w) + v[j + 1] * w;
        let inside = x >= self.x0 && x <= self.x0 + self.dx * (self.a.len() - 1) as f64;
        ProfilePoint {
            a: lerp(&self.a),
            u: lerp(&self.u),
            s: lerp(&self.s),
            a_x: if inside { lerp(&self.a_x) } else { 0.0 },
            u_x: if inside { lerp(&self.u_x) } else { 0.0 },
            s_x: if inside { lerp(&self.s_x) } else { 0.0 },
            s_xx: if inside { lerp(&self.s_xx) } else { 0.0 },
        }
    }

    fn window(&self) -> (f64, f64) {
        (self.x0, self.x0 + self.dx * (self.a.len() - 1) as f64)
    }

    fn far_states(&self, model: &GasModel) -> (FarState, FarState) {
        let n = self.a.len();
        (
            FarState {
                a: self.a[0],
                u: self.u[0],
                shat: model.shat_from_entropy(self.s[0]),
            },
            FarState {
                a: self.a[n - 1],
                u: self.u[n - 1],
                shat: model.shat_from_entropy(self.s[n - 1]),
            },
        )
    }

    fn constant_entropy(&self) -> Option<f64> {
        self.constant_entropy
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn arctan_data_matches_closed_forms_at_origin() {
        let p = ArctanData::new(0.01, 2.0, 1.0);
        let alpha = p.alpha0(0.0);
        assert_relative_eq!(alpha, 0.01, max_relative = 1e-14);
        let (xi, zeta) = p.xi_zeta0(0.0);
        assert_relative_eq!(xi, -0.04, max_relative = 1e-13);
        assert_relative_eq!(zeta, 0.06, max_relative = 1e-13);
    }

    #[test]
    fn arctan_pipeline_matches_closed_forms() {
        // pipeline gradients vs closed forms over a coarse x sweep
        use crate::wavefields;
        let p = ArctanData::new(0.01, 2.0, 1.0);
        let m = GasModel::with_gamma(2.0).unwrap();
        let mut x = -50.0;
        while x <= 50.0 {
            let st = p.state(x);
            let shat = m.shat_from_entropy(st.s);
            let shat_x = shat * st.s_x / 2.0;
            let (xi, zeta) = wavefields::xi_zeta(st.u_x, st.a_x, st.a, shat, shat_x, 2.0);
            let (alpha, beta) = wavefields::alpha_beta(xi, zeta, st.a, shat, shat_x, 2.0);
            let (xi0, zeta0) = p.xi_zeta0(x);
            assert_relative_eq!(xi, xi0, max_relative = 1e-10, epsilon = 1e-13);
            assert_relative_eq!(zeta, zeta0, max_relative = 1e-10, epsilon = 1e-13);
            assert_relative_eq!(alpha, p.alpha0(x), max_relative = 1e-10, epsilon = 1e-13);
            assert_relative_eq!(beta, p.alpha0(x), max_relative = 1e-10, epsilon = 1e-13);
            // sign pattern: alpha0, beta0 > 0, xi0 < 0 < zeta0 for small eps
            assert!(alpha > 0.0 && beta > 0.0);
            assert!(xi < 0.0 && zeta > 0.0);
            x += 2.3;
        }
    }

    #[test]
    fn sampling_computes_entropy_factor_derivatives() {
        let m = GasModel::with_gamma(2.0).unwrap();
        let data = InitialData::new(Arc::new(ArctanData::new(0.01, 2.0, 1.0)), m);
        let s = data.sample(257, Some((-3.0, 3.0))).unwrap();
        for j in [0usize, 71, 128, 256] {
            let x = s.x(j);
            let shat = (x.atan() / 2.0).exp();
            let shat_x = shat / (2.0 * (1.0 + x * x));
            assert_relative_eq!(s.shat0[j], shat, max_relative = 1e-13);
            assert_relative_eq!(s.shat0_x[j], shat_x, max_relative = 1e-12);
        }
    }

    #[test]
    fn compressive_pulse_min_slope() {
        let p = CompressivePulse {
            s_base: 2.0,
            amp: 0.5,
            r_const: -2.0,
            center: 1.0,
            width: 0.25,
            window: (-5.0, 7.0),
        };
        let st = p.state(1.0);
        // s0_x at center = -amp/width
        assert_relative_eq!(st.a_x + st.u_x, -2.0, max_relative = 1e-13);
    }

    #[test]
    fn tabulated_constant_extension() {
        let t = Tabulated::new(0.0, 1.0, vec![1.0, 2.0, 3.0, 4.0], vec![0.0; 4], vec![0.5; 4])
            .unwrap();
        assert_eq!(t.state(-10.0).a, 1.0);
        assert_eq!(t.state(10.0).a, 4.0);
        assert_eq!(t.state(-10.0).a_x, 0.0);
        assert_relative_eq!(t.state(1.5).a, 2.5, max_relative = 1e-14);
        assert_eq!(t.constant_entropy(), Some(0.5));
    }
}
