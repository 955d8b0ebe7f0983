//! Sampled space-time solutions on a rectangular `(t, x)` grid, with
//! interpolation access for characteristic tracing and pointwise checks.
//!
//! Entropy is stationary for C^1 solutions, so `Shat` is stored once per
//! x-node and copied, never evolved.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gas::{GasModel, NEAR_VACUUM_A};
use crate::stencil;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FieldStatus {
    Completed,
    /// Halted early because `max |u_x|` exceeded the configured cap.
    BlowupSuspected { t: f64 },
    /// Truncated at the first sample with `a <= 0`.
    Vacuous { t: f64 },
}

/// Values and spatial gradients of the solution at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub a: f64,
    pub u: f64,
    pub shat: f64,
    pub shat_x: f64,
    pub shat_xx: f64,
    pub a_x: f64,
    pub u_x: f64,
    pub c: f64,
}

/// A sampled solution of the Cauchy problem in `(a, u, Shat)` form.
#[derive(Debug, Clone)]
pub struct Field {
    pub model: GasModel,
    pub x_lo: f64,
    pub dx: f64,
    pub nx: usize,
    /// Strictly increasing snapshot times.
    pub t: Vec<f64>,
    a: Vec<f64>,
    u: Vec<f64>,
    shat: Vec<f64>,
    shat_x: Vec<f64>,
    shat_xx: Vec<f64>,
    pub status: FieldStatus,
    pub cfl: f64,
    pub scheme_order: u8,
    pub near_vacuum_samples: usize,
    /// Sub-window provably untouched by boundary data over the run horizon.
    pub region_of_interest: (f64, f64),
}

impl Field {
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn from_rows(
        model: GasModel,
        x_lo: f64,
        dx: f64,
        nx: usize,
        t: Vec<f64>,
        a: Vec<f64>,
        u: Vec<f64>,
        shat: Vec<f64>,
        shat_x: Vec<f64>,
        shat_xx: Vec<f64>,
        status: FieldStatus,
        cfl: f64,
        region_of_interest: (f64, f64),
    ) -> Self {
        debug_assert_eq!(a.len(), t.len() * nx);
        debug_assert_eq!(u.len(), t.len() * nx);
        let near_vacuum_samples = a.iter().filter(|&&v| v < NEAR_VACUUM_A).count();
        Self {
            model,
            x_lo,
            dx,
            nx,
            t,
            a,
            u,
            shat,
            shat_x,
            shat_xx,
            status,
            cfl,
            scheme_order: 2,
            near_vacuum_samples,
            region_of_interest,
        }
    }

    /// Synthetic field from closed forms, sampled on a regular grid.
    pub fn from_fn(
        model: GasModel,
        x_lo: f64,
        x_hi: f64,
        nx: usize,
        t_end: f64,
        nt: usize,
        fa: impl Fn(f64, f64) -> f64,
        fu: impl Fn(f64, f64) -> f64,
        fshat: impl Fn(f64) -> f64,
    ) -> Result<Self> {
        if nx < 4 || nt < 2 || !(x_hi > x_lo) || !(t_end > 0.0) {
            return Err(Error::Config("from_fn needs nx >= 4, nt >= 2, nonempty spans".into()));
        }
        let dx = (x_hi - x_lo) / (nx - 1) as f64;
        let t: Vec<f64> = (0..nt).map(|i| t_end * i as f64 / (nt - 1) as f64).collect();
        let mut a = Vec::with_capacity(nt * nx);
        let mut u = Vec::with_capacity(nt * nx);
        for &ti in &t {
            for j in 0..nx {
                let x = x_lo + j as f64 * dx;
                a.push(fa(ti, x));
                u.push(fu(ti, x));
            }
        }
        let shat: Vec<f64> = (0..nx).map(|j| fshat(x_lo + j as f64 * dx)).collect();
        let shat_x = stencil::gradient(&shat, dx);
        let shat_xx = stencil::second_derivative(&shat, dx);
        Ok(Self::from_rows(
            model,
            x_lo,
            dx,
            nx,
            t,
            a,
            u,
            shat,
            shat_x,
            shat_xx,
            FieldStatus::Completed,
            0.0,
            (x_lo, x_hi),
        ))
    }

    pub fn nt(&self) -> usize {
        self.t.len()
    }

    pub fn x(&self, j: usize) -> f64 {
        self.x_lo + j as f64 * self.dx
    }

    pub fn x_hi(&self) -> f64 {
        self.x(self.nx - 1)
    }

    pub fn t_end(&self) -> f64 {
        *self.t.last().expect("field has at least one row")
    }

    pub fn a_at(&self, it: usize, j: usize) -> f64 {
        self.a[it * self.nx + j]
    }

    pub fn u_at(&self, it: usize, j: usize) -> f64 {
        self.u[it * self.nx + j]
    }

    pub fn shat_at(&self, j: usize) -> f64 {
        self.shat[j]
    }

    pub fn shat_x_at(&self, j: usize) -> f64 {
        self.shat_x[j]
    }

    pub fn shat_xx_at(&self, j: usize) -> f64 {
        self.shat_xx[j]
    }

    pub fn a_row(&self, it: usize) -> &[f64] {
        &self.a[it * self.nx..(it + 1) * self.nx]
    }

    pub fn u_row(&self, it: usize) -> &[f64] {
        &self.u[it * self.nx..(it + 1) * self.nx]
    }

    pub fn contains(&self, t: f64, x: f64) -> bool {
        let eps_t = 1e-12 * self.t_end().max(1.0);
        let eps_x = 1e-12 * (self.x_hi() - self.x_lo).max(1.0);
        t >= self.t[0] - eps_t
            && t <= self.t_end() + eps_t
            && x >= self.x_lo - eps_x
            && x <= self.x_hi() + eps_x
    }

    fn locate_t(&self, t: f64) -> Result<(usize, f64)> {
        if !self.contains(t, self.x_lo) {
            return Err(Error::Range(format!(
                "t = {t} outside field hull [{}, {}]",
                self.t[0],
                self.t_end()
            )));
        }
        let nt = self.nt();
        let i = match self.t.binary_search_by(|v| v.partial_cmp(&t).expect("finite time")) {
            Ok(i) => i,
            Err(i) => i.saturating_sub(1),
        }
        .min(nt.saturating_sub(2));
        if nt == 1 {
            return Ok((0, 0.0));
        }
        let dt = self.t[i + 1] - self.t[i];
        let w = if dt > 0.0 { ((t - self.t[i]) / dt).clamp(0.0, 1.0) } else { 0.0 };
        Ok((i, w))
    }

    fn locate_x(&self, x: f64) -> Result<(usize, f64)> {
        if !self.contains(self.t[0], x) {
            return Err(Error::Range(format!(
                "x = {x} outside field hull [{}, {}]",
                self.x_lo,
                self.x_hi()
            )));
        }
        let tt = (x - self.x_lo) / self.dx;
        let j = (tt.floor().max(0.0) as usize).min(self.nx - 2);
        Ok((j, (tt - j as f64).clamp(0.0, 1.0)))
    }

    /// Values only, bilinear in `(t, x)`.
    pub fn value(&self, t: f64, x: f64) -> Result<(f64, f64, f64)> {
        let (i, wt) = self.locate_t(t)?;
        let (j, wx) = self.locate_x(x)?;
        let lerp2 = |v: &[f64]| {
            let n = self.nx;
            let (i1, j1) = (i + 1, j + 1);
            let v00 = v[i * n + j];
            let v01 = v[i * n + j1];
            let v10 = v[i1.min(self.nt() - 1) * n + j];
            let v11 = v[i1.min(self.nt() - 1) * n + j1];
            (1.0 - wt) * ((1.0 - wx) * v00 + wx * v01) + wt * ((1.0 - wx) * v10 + wx * v11)
        };
        let shat = (1.0 - wx) * self.shat[j] + wx * self.shat[j + 1];
        Ok((lerp2(&self.a), lerp2(&self.u), shat))
    }

    /// Sound speed at a point.
    pub fn sound_speed(&self, t: f64, x: f64) -> Result<f64> {
        let (a, _, shat) = self.value(t, x)?;
        if a <= 0.0 {
            return Err(Error::Vacuum(format!("a({t}, {x}) = {a}")));
        }
        Ok(self.model.sound_speed(a, shat))
    }

    /// Values and spatial gradients; gradients use the module-wide stencil on
    /// the two bracketing rows, then interpolate.
    pub fn sample(&self, t: f64, x: f64) -> Result<Sample> {
        let (i, wt) = self.locate_t(t)?;
        let (j, wx) = self.locate_x(x)?;
        let i1 = (i + 1).min(self.nt() - 1);
        let grad = |row: &[f64], jj: usize| stencil::gradient_at(row, jj, self.dx);
        let bil = |v00: f64, v01: f64, v10: f64, v11: f64| {
            (1.0 - wt) * ((1.0 - wx) * v00 + wx * v01) + wt * ((1.0 - wx) * v10 + wx * v11)
        };
        let (r0a, r1a) = (self.a_row(i), self.a_row(i1));
        let (r0u, r1u) = (self.u_row(i), self.u_row(i1));
        let a = bil(r0a[j], r0a[j + 1], r1a[j], r1a[j + 1]);
        let u = bil(r0u[j], r0u[j + 1], r1u[j], r1u[j + 1]);
        let a_x = bil(grad(r0a, j), grad(r0a, j + 1), grad(r1a, j), grad(r1a, j + 1));
        let u_x = bil(grad(r0u, j), grad(r0u, j + 1), grad(r1u, j), grad(r1u, j + 1));
        let shat = (1.0 - wx) * self.shat[j] + wx * self.shat[j + 1];
        let shat_x = (1.0 - wx) * self.shat_x[j] + wx * self.shat_x[j + 1];
        let shat_xx = (1.0 - wx) * self.shat_xx[j] + wx * self.shat_xx[j + 1];
        let c = if a > 0.0 { self.model.sound_speed(a, shat) } else { 0.0 };
        Ok(Sample { a, u, shat, shat_x, shat_xx, a_x, u_x, c })
    }

    /// Specific volume of the initial row at node `j`.
    pub fn initial_v(&self, j: usize) -> f64 {
        self.model.v_from_a(self.a_at(0, j)).expect("initial a positive")
    }

    /// CSV export: header `t,x,a,u,Shat,ux,ax`, row-major in t then x.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "t,x,a,u,Shat,ux,ax")?;
        for it in 0..self.nt() {
            let arow = self.a_row(it);
            let urow = self.u_row(it);
            for j in 0..self.nx {
                writeln!(
                    w,
                    "{},{},{},{},{},{},{}",
                    self.t[it],
                    self.x(j),
                    arow[j],
                    urow[j],
                    self.shat[j],
                    stencil::gradient_at(urow, j, self.dx),
                    stencil::gradient_at(arow, j, self.dx),
                )?;
            }
        }
        Ok(())
    }

    /// JSON metadata sidecar for the CSV export.
    pub fn metadata(&self) -> FieldMetadata {
        FieldMetadata {
            gamma: self.model.gamma,
            k: self.model.k,
            c_v: self.model.c_v,
            r: self.model.r,
            nx: self.nx,
            nt: self.nt(),
            x_lo: self.x_lo,
            x_hi: self.x_hi(),
            t_end: self.t_end(),
            cfl: self.cfl,
            scheme_order: self.scheme_order,
            status: self.status,
            near_vacuum_samples: self.near_vacuum_samples,
            region_of_interest: self.region_of_interest,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FieldMetadata {
    pub gamma: f64,
    pub k: f64,
    pub c_v: f64,
    pub r: f64,
    pub nx: usize,
    pub nt: usize,
    pub x_lo: f64,
    pub x_hi: f64,
    pub t_end: f64,
    pub cfl: f64,
    pub scheme_order: u8,
    pub status: FieldStatus,
    pub near_vacuum_samples: usize,
    pub region_of_interest: (f64, f64),
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn uniform_field() -> Field {
        let m = GasModel::with_gamma(2.0).unwrap();
        Field::from_fn(m, -1.0, 1.0, 16, 1.0, 4, |_, _| 1.0, |_, _| 0.5, |_| 1.0).unwrap()
    }

    #[test]
    fn grid_node_sampling_is_exact() {
        let m = GasModel::with_gamma(2.0).unwrap();
        let f =
            Field::from_fn(m, 0.0, 1.0, 11, 1.0, 5, |t, x| 1.0 + t * x, |t, x| t - x, |_| 1.0)
                .unwrap();
        let (a, u, shat) = f.value(0.5, 0.3).unwrap();
        assert_relative_eq!(a, 1.0 + 0.5 * 0.3, max_relative = 1e-14);
        assert_relative_eq!(u, 0.5 - 0.3, max_relative = 1e-14);
        assert_eq!(shat, 1.0);
    }

    #[test]
    fn midpoint_of_linear_profile_is_average() {
        let m = GasModel::with_gamma(2.0).unwrap();
        let f = Field::from_fn(m, 0.0, 1.0, 11, 1.0, 3, |_, x| 2.0 * x + 1.0, |_, _| 0.0, |_| 1.0)
            .unwrap();
        let (a, _, _) = f.value(0.0, 0.05).unwrap();
        assert_relative_eq!(a, (f.a_at(0, 0) + f.a_at(0, 1)) / 2.0, max_relative = 1e-14);
    }

    #[test]
    fn out_of_hull_is_range_error() {
        let f = uniform_field();
        assert!(matches!(f.value(2.0, 0.0), Err(Error::Range(_))));
        assert!(matches!(f.value(0.5, 7.0), Err(Error::Range(_))));
        assert!(matches!(f.value(-0.5, 0.0), Err(Error::Range(_))));
    }

    #[test]
    fn gradients_of_sine_profile() {
        let m = GasModel::with_gamma(2.0).unwrap();
        let n = 2048;
        let f = Field::from_fn(
            m,
            0.0,
            2.0 * std::f64::consts::PI,
            n,
            1.0,
            3,
            |_, _| 1.0,
            |_, x| x.sin(),
            |_| 1.0,
        )
        .unwrap();
        // evaluate at interior grid nodes: the 4th-order stencil bound applies
        let mut max_err = 0.0f64;
        for j in (2..n - 2).step_by(7) {
            let x = f.x(j);
            let s = f.sample(0.37, x).unwrap();
            max_err = max_err.max((s.u_x - x.cos()).abs());
        }
        assert!(max_err <= 1e-6, "max gradient error {max_err:e}");
    }

    #[test]
    fn csv_export_shape() {
        let f = uniform_field();
        let mut buf = Vec::new();
        f.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "t,x,a,u,Shat,ux,ax");
        assert_eq!(text.lines().count(), 1 + f.nt() * f.nx);
        let first = lines.next().unwrap();
        assert_eq!(first.split(',').count(), 7);
    }

    #[test]
    fn entropy_is_shared_across_rows() {
        let f = uniform_field();
        for j in 0..f.nx {
            assert_abs_diff_eq!(f.shat_at(j), 1.0);
        }
    }
}
