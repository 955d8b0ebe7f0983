//! Picard solver on the normalized angular wedge.
//!
//! Every orientation is mapped onto a marching coordinate `sigma >= 0` and a
//! transverse coordinate `eta`, with the vertex at the origin and two free
//! characteristic boundaries `eta+(sigma)` (slope `+lambda`) and
//! `eta-(sigma)` (slope `-lambda`). The transported variable `P` rides
//! `d eta/d sigma = +lambda` with its data on the lower boundary, `M` rides
//! `-lambda` with data on the upper one. Each iterate retraces both
//! characteristic families from every grid node back to their data boundary
//! through the previous iterate, then re-imposes the data and the midpoint
//! quadrature of the source along the exactly-retraced path.

use serde::{Deserialize, Serialize};

use super::data::{stationary_tilde, GoursatBoundaryData};
use super::Orientation;
use crate::error::{Error, Result};
use crate::gas::GasModel;
use crate::par;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Seed {
    /// Stationary reconstruction from the vertex constants (default).
    Stationary,
    /// Constant extension of the vertex values.
    VertexConstant,
    /// Stationary reconstruction with a smooth interior perturbation.
    Perturbed,
}

#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub n_sigma: usize,
    pub n_mu: usize,
    pub tolerance: f64,
    pub max_iterations: usize,
    pub max_shrinks: usize,
    pub shrink_factor: f64,
    pub allow_shrink: bool,
    pub seed: Seed,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            n_sigma: 256,
            n_mu: 256,
            tolerance: 1e-10,
            max_iterations: 64,
            max_shrinks: 15,
            shrink_factor: 0.7,
            allow_shrink: true,
            seed: Seed::Stationary,
        }
    }
}

/// Solution on the wedge grid: levels `sigma_i = i h`, transverse nodes at
/// fixed relative coordinates `mu_j` between the two boundaries.
#[derive(Debug, Clone)]
pub struct WedgeField {
    pub orientation: Orientation,
    pub model: GasModel,
    /// Physical vertex `(t, x)`.
    pub vertex: (f64, f64),
    pub extent: f64,
    pub n_sigma: usize,
    pub n_mu: usize,
    pub eta_lo: Vec<f64>,
    pub eta_hi: Vec<f64>,
    /// Transported variables, row-major `(n_sigma + 1) x n_mu`.
    pub p: Vec<f64>,
    pub m: Vec<f64>,
}

impl WedgeField {
    pub fn h(&self) -> f64 {
        self.extent / self.n_sigma as f64
    }

    pub fn sigma(&self, i: usize) -> f64 {
        self.extent * i as f64 / self.n_sigma as f64
    }

    pub fn mu(&self, j: usize) -> f64 {
        j as f64 / (self.n_mu - 1) as f64
    }

    pub fn eta(&self, i: usize, j: usize) -> f64 {
        self.eta_lo[i] + self.mu(j) * (self.eta_hi[i] - self.eta_lo[i])
    }

    pub fn value(&self, i: usize, j: usize) -> (f64, f64) {
        (self.p[i * self.n_mu + j], self.m[i * self.n_mu + j])
    }

    /// Physical coordinates of a node.
    pub fn t_x(&self, i: usize, j: usize) -> (f64, f64) {
        self.orientation.t_x(self.vertex, self.sigma(i), self.eta(i, j))
    }

    /// Tilde variables at a node.
    pub fn st_rt(&self, i: usize, j: usize) -> (f64, f64) {
        let (p, m) = self.value(i, j);
        self.orientation.st_rt(p, m)
    }

    /// Physical `(a, u, shat)` at a node.
    pub fn state(&self, i: usize, j: usize, shat_of_x: &dyn Fn(f64) -> f64) -> (f64, f64, f64) {
        let (st, rt) = self.st_rt(i, j);
        let (_, x) = self.t_x(i, j);
        let shat = shat_of_x(x);
        let g = self.model.gamma;
        let w = shat.powf(1.0 / (2.0 * g));
        let s = w * st;
        let r = w * rt;
        ((s - r) / (2.0 * shat), (s + r) / 2.0, shat)
    }

    /// Bilinear interpolation of `(P, M)` at wedge coordinates.
    pub fn interp(&self, sigma: f64, eta: f64) -> (f64, f64) {
        let h = self.h();
        let fi = (sigma / h).clamp(0.0, self.n_sigma as f64);
        let i0 = (fi.floor() as usize).min(self.n_sigma - 1);
        let wt = fi - i0 as f64;
        let level = |i: usize| -> (f64, f64) {
            let lo = self.eta_lo[i];
            let hi = self.eta_hi[i];
            let width = hi - lo;
            let mu = if width > 1e-300 { ((eta - lo) / width).clamp(0.0, 1.0) } else { 0.5 };
            let fj = mu * (self.n_mu - 1) as f64;
            let j0 = (fj.floor() as usize).min(self.n_mu - 2);
            let wj = fj - j0 as f64;
            let base = i * self.n_mu + j0;
            (
                self.p[base] * (1.0 - wj) + self.p[base + 1] * wj,
                self.m[base] * (1.0 - wj) + self.m[base + 1] * wj,
            )
        };
        let (p0, m0) = level(i0);
        let (p1, m1) = level(i0 + 1);
        (p0 * (1.0 - wt) + p1 * wt, m0 * (1.0 - wt) + m1 * wt)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub iterations: usize,
    pub diffs: Vec<f64>,
    pub ratios: Vec<f64>,
    pub extent_requested: f64,
    pub extent_achieved: f64,
    pub shrinks: usize,
    /// Max deviation of imposed boundary data on the solved field.
    pub boundary_match: f64,
    /// Max residual of the boundary characteristic ODEs against the field.
    pub boundary_ode_residual: f64,
    /// Minimal characterizing number of the boundary operators (data are
    /// state-independent here, so this is exactly zero).
    pub h_min: f64,
    /// Modulus-of-continuity ladder `(eps, w(eps))` of the final iterate.
    pub modulus_ladder: Vec<(f64, f64)>,
}

pub(super) struct System<'d> {
    pub model: GasModel,
    pub orientation: Orientation,
    pub data: &'d GoursatBoundaryData,
    /// Physical vertex; for the backward orientation the vertex time equals
    /// the extent so the bottom row lands on t = 0.
    pub vertex: (f64, f64),
}

impl System<'_> {
    fn x_of(&self, sigma: f64, eta: f64) -> f64 {
        self.orientation.x_of(self.vertex, sigma, eta)
    }

    fn c_tilde(&self, x: f64, p: f64, m: f64) -> Option<f64> {
        let (st, rt) = self.orientation.st_rt(p, m);
        if st <= rt {
            return None;
        }
        let g = self.model.gamma;
        let shat = (self.data.f)(x);
        Some(
            self.model.k_c()
                * ((st - rt) / 2.0).powf((g + 1.0) / (g - 1.0))
                * shat.powf((1.0 - 3.0 * g) / (2.0 * g * (g - 1.0))),
        )
    }

    fn lambda(&self, x: f64, p: f64, m: f64) -> Option<f64> {
        let c = self.c_tilde(x, p, m)?;
        Some(match self.orientation {
            Orientation::Backward => c,
            Orientation::Left | Orientation::Right => 1.0 / c,
        })
    }

    /// Source terms `(dP/dsigma, dM/dsigma)` along the characteristics.
    pub(super) fn sources(&self, x: f64, p: f64, m: f64) -> Option<(f64, f64)> {
        let g = self.model.gamma;
        let shat = (self.data.f)(x);
        let phi = (self.data.f_x)(x) / (2.0 * g * shat);
        Some(match self.orientation {
            Orientation::Backward => {
                let c = self.c_tilde(x, p, m)?;
                (-c * phi * m, c * phi * p)
            }
            Orientation::Left => (phi * m, phi * p),
            Orientation::Right => (-phi * m, -phi * p),
        })
    }

    /// Boundary data for `P` (lower) and `M` (upper) at mass coordinate x.
    fn data_p(&self, x: f64) -> f64 {
        match self.orientation {
            Orientation::Backward | Orientation::Left => (self.data.h_r)(x),
            Orientation::Right => (self.data.h_s)(x),
        }
    }

    fn data_m(&self, x: f64) -> f64 {
        match self.orientation {
            Orientation::Backward | Orientation::Left => (self.data.h_s)(x),
            Orientation::Right => (self.data.h_r)(x),
        }
    }

    fn seed_value(&self, seed: Seed, x: f64, sigma: f64, eta: f64, extent: f64) -> (f64, f64) {
        let (st, rt) = stationary_tilde(&self.model, (self.data.f)(x), self.data.u0, self.data.p0);
        let (mut p, mut m) = match self.orientation {
            Orientation::Backward | Orientation::Left => (rt, st),
            Orientation::Right => (st, rt),
        };
        match seed {
            Seed::Stationary => {}
            Seed::VertexConstant => {
                let xv = self.x_of(0.0, 0.0);
                let (st, rt) =
                    stationary_tilde(&self.model, (self.data.f)(xv), self.data.u0, self.data.p0);
                let (pv, mv) = match self.orientation {
                    Orientation::Backward | Orientation::Left => (rt, st),
                    Orientation::Right => (st, rt),
                };
                p = pv;
                m = mv;
            }
            Seed::Perturbed => {
                let bump = 1e-3
                    * (std::f64::consts::PI * sigma / extent.max(1e-300)).sin()
                    * (1.0 + eta).cos();
                p += bump;
                m -= bump;
            }
        }
        (p, m)
    }
}

struct Iterate {
    eta_lo: Vec<f64>,
    eta_hi: Vec<f64>,
    p: Vec<f64>,
    m: Vec<f64>,
}

fn boundary_eta(eta: &[f64], h: f64, sigma: f64) -> f64 {
    let fi = (sigma / h).clamp(0.0, (eta.len() - 1) as f64);
    let i0 = (fi.floor() as usize).min(eta.len() - 2);
    let w = fi - i0 as f64;
    eta[i0] * (1.0 - w) + eta[i0 + 1] * w
}

pub(super) fn solve_fixed_extent(
    sys: &System<'_>,
    extent: f64,
    opts: &SolveOptions,
) -> Result<(WedgeField, Vec<f64>)> {
    let ns = opts.n_sigma;
    let nm = opts.n_mu;
    let h = extent / ns as f64;
    let vacuum = || Error::Divergence("vacuum state inside the angular domain".into());

    // seed geometry: straight boundaries at the vertex slope
    let (p_v, m_v) = {
        let xv = sys.x_of(0.0, 0.0);
        (sys.data_p(xv), sys.data_m(xv))
    };
    let lam_v = sys
        .lambda(sys.x_of(0.0, 0.0), p_v, m_v)
        .ok_or_else(vacuum)?;
    let mut cur = Iterate {
        eta_lo: (0..=ns).map(|i| -lam_v * h * i as f64).collect(),
        eta_hi: (0..=ns).map(|i| lam_v * h * i as f64).collect(),
        p: vec![0.0; (ns + 1) * nm],
        m: vec![0.0; (ns + 1) * nm],
    };
    for i in 0..=ns {
        let sigma = h * i as f64;
        for j in 0..nm {
            let mu = j as f64 / (nm - 1) as f64;
            let eta = cur.eta_lo[i] + mu * (cur.eta_hi[i] - cur.eta_lo[i]);
            let x = sys.x_of(sigma, eta);
            let (p, m) = sys.seed_value(opts.seed, x, sigma, eta, extent);
            cur.p[i * nm + j] = p;
            cur.m[i * nm + j] = m;
        }
    }

    let mut diffs: Vec<f64> = Vec::new();
    for _iter in 0..opts.max_iterations {
        let prev_field = WedgeField {
            orientation: sys.orientation,
            model: sys.model,
            vertex: sys.vertex,
            extent,
            n_sigma: ns,
            n_mu: nm,
            eta_lo: cur.eta_lo.clone(),
            eta_hi: cur.eta_hi.clone(),
            p: cur.p.clone(),
            m: cur.m.clone(),
        };
        let lam_at = |sigma: f64, eta: f64| -> Option<f64> {
            let (p, m) = prev_field.interp(sigma, eta);
            sys.lambda(sys.x_of(sigma, eta), p, m)
        };

        // 1. new free boundaries by midpoint RK2 through the previous iterate
        let mut eta_lo = vec![0.0; ns + 1];
        let mut eta_hi = vec![0.0; ns + 1];
        for i in 0..ns {
            let sigma = h * i as f64;
            for (eta, sign) in [(&mut eta_lo, -1.0), (&mut eta_hi, 1.0)] {
                let e0 = eta[i];
                let l0 = lam_at(sigma, e0).ok_or_else(vacuum)?;
                let e_mid = e0 + 0.5 * h * sign * l0;
                let l_mid = lam_at(sigma + 0.5 * h, e_mid).ok_or_else(vacuum)?;
                eta[i + 1] = e0 + h * sign * l_mid;
            }
            if eta_hi[i + 1] <= eta_lo[i + 1] {
                return Err(Error::Divergence("boundary curves crossed".into()));
            }
        }

        // 2. retrace both families from every node through the previous
        //    iterate, re-imposing boundary data at the foot
        let retrace = |i: usize, j: usize, family_p: bool| -> Option<f64> {
            let sigma_node = h * i as f64;
            let mu = j as f64 / (nm - 1) as f64;
            let eta_node = eta_lo[i] + mu * (eta_hi[i] - eta_lo[i]);
            // boundary nodes carry their own data
            if family_p && j == 0 {
                return Some(sys.data_p(sys.x_of(sigma_node, eta_node)));
            }
            if !family_p && j == nm - 1 {
                return Some(sys.data_m(sys.x_of(sigma_node, eta_node)));
            }
            let slope_sign = if family_p { 1.0 } else { -1.0 };
            let bound = if family_p { &eta_lo } else { &eta_hi };

            let mut sigma = sigma_node;
            let mut eta = eta_node;
            let mut source_sum = 0.0f64;
            let src = |sigma: f64, eta: f64| -> Option<f64> {
                let (p, m) = prev_field.interp(sigma, eta);
                let x = sys.x_of(sigma, eta);
                let (gp, gm) = sys.sources(x, p, m)?;
                Some(if family_p { gp } else { gm })
            };
            loop {
                if sigma <= 1e-14 * extent {
                    // reached the vertex: both boundaries meet there
                    let x = sys.x_of(0.0, 0.0);
                    let v = if family_p { sys.data_p(x) } else { sys.data_m(x) };
                    return Some(v + source_sum);
                }
                let step = h.min(sigma);
                let lam0 = lam_at(sigma, eta)?;
                let e_mid = eta - 0.5 * step * slope_sign * lam0;
                let lam_mid = lam_at(sigma - 0.5 * step, e_mid)?;
                let eta_next = eta - step * slope_sign * lam_mid;
                let sigma_next = sigma - step;
                let b_cur = boundary_eta(bound, h, sigma);
                let b_next = boundary_eta(bound, h, sigma_next);
                let gap_cur = slope_sign * (eta - b_cur);
                let gap_next = slope_sign * (eta_next - b_next);
                if gap_next <= 0.0 {
                    // crossed the data boundary inside this step
                    let theta = if gap_cur - gap_next > 0.0 {
                        (gap_cur / (gap_cur - gap_next)).clamp(0.0, 1.0)
                    } else {
                        0.0
                    };
                    let d_sigma = theta * step;
                    let sigma_f = sigma - d_sigma;
                    let eta_f = boundary_eta(bound, h, sigma_f);
                    if d_sigma > 0.0 {
                        let e_m = eta - 0.5 * d_sigma * slope_sign * lam0;
                        source_sum += d_sigma * src(sigma - 0.5 * d_sigma, e_m)?;
                    }
                    let x_f = sys.x_of(sigma_f, eta_f);
                    let v = if family_p { sys.data_p(x_f) } else { sys.data_m(x_f) };
                    return Some(v + source_sum);
                }
                source_sum += step * src(sigma - 0.5 * step, e_mid)?;
                sigma = sigma_next;
                eta = eta_next;
            }
        };

        let new_vals = par::map_indexed((ns + 1) * nm, |idx| {
            let i = idx / nm;
            let j = idx % nm;
            (retrace(i, j, true), retrace(i, j, false))
        });
        let mut p = vec![0.0; (ns + 1) * nm];
        let mut m = vec![0.0; (ns + 1) * nm];
        let mut diff = 0.0f64;
        for (idx, (pv, mv)) in new_vals.into_iter().enumerate() {
            let (pv, mv) = match (pv, mv) {
                (Some(a), Some(b)) => (a, b),
                _ => return Err(vacuum()),
            };
            diff = diff.max((pv - cur.p[idx]).abs()).max((mv - cur.m[idx]).abs());
            p[idx] = pv;
            m[idx] = mv;
        }
        // vacuum guard on the new iterate
        for idx in 0..(ns + 1) * nm {
            let (st, rt) = sys.orientation.st_rt(p[idx], m[idx]);
            if st <= rt {
                return Err(vacuum());
            }
        }
        cur = Iterate { eta_lo, eta_hi, p, m };
        diffs.push(diff);

        if diff <= opts.tolerance {
            let field = WedgeField {
                orientation: sys.orientation,
                model: sys.model,
                vertex: sys.vertex,
                extent,
                n_sigma: ns,
                n_mu: nm,
                eta_lo: cur.eta_lo,
                eta_hi: cur.eta_hi,
                p: cur.p,
                m: cur.m,
            };
            return Ok((field, diffs));
        }
        // divergence: three consecutive non-contracting iterates
        let k = diffs.len();
        if k >= 4
            && (1..=3).all(|d| diffs[k - d] >= diffs[k - d - 1] && diffs[k - d] > opts.tolerance)
        {
            return Err(Error::Divergence(format!(
                "no contraction over 3 iterates: tail diffs {:?}",
                &diffs[k.saturating_sub(4)..]
            )));
        }
    }
    Err(Error::Divergence(format!(
        "no convergence after {} iterations (last diff {:e})",
        opts.max_iterations,
        diffs.last().copied().unwrap_or(f64::NAN)
    )))
}
