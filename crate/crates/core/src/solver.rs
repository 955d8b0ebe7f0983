//! Reference solver for the Cauchy problem in `(a, u, Shat)` form.
//!
//! Second-order method of lines: TVD Runge-Kutta (Heun) in time, minmod-
//! limited upwind differences in space, applied to the characteristic
//! transport form `d+ s = d- r = (c/(2g)) (Shat_x/Shat) (s - r)` with
//! `a = (s - r)/(2 Shat)` recovered pointwise. Entropy is copied from t = 0,
//! never evolved. Non-conservative form is acceptable pre-shock; post-shock
//! fields are out of scope and runs halt at the blowup cap.

use crate::bounds;
use crate::error::{Error, Result};
use crate::field::{Field, FieldStatus};
use crate::profile::InitialData;

#[derive(Debug, Clone)]
pub struct SolveParams {
    pub t_end: f64,
    /// Number of spatial nodes (>= 64).
    pub resolution: usize,
    /// CFL number in (0, 1].
    pub cfl: f64,
    /// Early-halt cap on `max |u_x|`.
    pub blowup_cap: f64,
    /// Snapshot-row budget; storage stride doubles when exceeded.
    pub max_snapshots: usize,
    /// Requested uncontaminated sub-window; validated against the domain of
    /// dependence at configuration time. `None` derives the largest one.
    pub region_of_interest: Option<(f64, f64)>,
    /// Overrides the profile window.
    pub window: Option<(f64, f64)>,
}

impl SolveParams {
    pub fn new(t_end: f64, resolution: usize, cfl: f64) -> Self {
        Self {
            t_end,
            resolution,
            cfl,
            blowup_cap: 1e4,
            max_snapshots: 4097,
            region_of_interest: None,
            window: None,
        }
    }
}

fn minmod(a: f64, b: f64) -> f64 {
    if a * b <= 0.0 {
        0.0
    } else if a.abs() <= b.abs() {
        a
    } else {
        b
    }
}

#[inline]
fn at(v: &[f64], i: isize) -> f64 {
    // zero-gradient (outflow) boundaries: replicate edge values
    let n = v.len() as isize;
    v[i.clamp(0, n - 1) as usize]
}

struct Workspace {
    gamma: f64,
    dx: f64,
    shat: Vec<f64>,
    shat_x: Vec<f64>,
    k_c: f64,
    c_pow: f64,
}

impl Workspace {
    /// RHS of the (s, r) system; returns max sound speed, or None on vacuum.
    fn rhs(&self, s: &[f64], r: &[f64], ds: &mut [f64], dr: &mut [f64]) -> Option<f64> {
        let n = s.len();
        let dx = self.dx;
        let mut c_max = 0.0f64;
        for j in 0..n {
            let shat = self.shat[j];
            let a = (s[j] - r[j]) / (2.0 * shat);
            if !(a > 0.0) {
                return None;
            }
            let c = self.k_c * shat * a.powf(self.c_pow);
            c_max = c_max.max(c);
            let ji = j as isize;
            let s_x = (s[j] - at(s, ji - 1)) / dx
                + 0.5
                    * minmod(
                        at(s, ji + 1) - 2.0 * s[j] + at(s, ji - 1),
                        s[j] - 2.0 * at(s, ji - 1) + at(s, ji - 2),
                    )
                    / dx;
            let r_x = (at(r, ji + 1) - r[j]) / dx
                - 0.5
                    * minmod(
                        at(r, ji + 2) - 2.0 * at(r, ji + 1) + r[j],
                        at(r, ji + 1) - 2.0 * r[j] + at(r, ji - 1),
                    )
                    / dx;
            let src = c / (2.0 * self.gamma) * (self.shat_x[j] / shat) * (s[j] - r[j]);
            ds[j] = -c * s_x + src;
            dr[j] = c * r_x + src;
        }
        Some(c_max)
    }
}

/// Solve the Cauchy problem on the initial data's window.
pub fn solve_cauchy(initial: &InitialData, params: &SolveParams) -> Result<Field> {
    if !(params.cfl > 0.0 && params.cfl <= 1.0) {
        return Err(Error::Config(format!("cfl must lie in (0, 1], got {}", params.cfl)));
    }
    if params.resolution < 64 {
        return Err(Error::Config(format!("resolution must be >= 64, got {}", params.resolution)));
    }
    if !(params.t_end > 0.0) {
        return Err(Error::Config(format!("t_end must be positive, got {}", params.t_end)));
    }
    let window = params.window.unwrap_or_else(|| initial.profile.window());
    let n = params.resolution;
    let sampled = initial.sample(n, Some(window))?;
    let model = initial.model;
    let dx = sampled.dx;

    // Domain-of-dependence check: boundary characteristics must not reach
    // the region of interest within t_end. The sound-speed bound comes from
    // the a-priori sup-norm estimates on the data.
    let c_bound = bounds::sound_speed_bound(initial)?;
    let margin = 1.01 * c_bound * params.t_end + 2.0 * dx;
    let roi = match params.region_of_interest {
        Some((lo, hi)) => {
            if lo < window.0 + margin || hi > window.1 - margin {
                return Err(Error::Config(format!(
                    "region of interest [{lo}, {hi}] is not protected by the domain of \
                     dependence: need [{}, {}] or a wider window",
                    window.0 + margin,
                    window.1 - margin
                )));
            }
            (lo, hi)
        }
        None => {
            let (lo, hi) = (window.0 + margin, window.1 - margin);
            if !(hi > lo) {
                return Err(Error::Config(format!(
                    "window {window:?} too narrow for t_end = {} at c <= {c_bound:.3e}",
                    params.t_end
                )));
            }
            (lo, hi)
        }
    };

    let mut s: Vec<f64> = (0..n).map(|j| sampled.u0[j] + sampled.shat0[j] * sampled.a0[j]).collect();
    let mut r: Vec<f64> = (0..n).map(|j| sampled.u0[j] - sampled.shat0[j] * sampled.a0[j]).collect();
    let ws = Workspace {
        gamma: model.gamma,
        dx,
        shat: sampled.shat0.clone(),
        shat_x: sampled.shat0_x.clone(),
        k_c: model.k_c(),
        c_pow: (model.gamma + 1.0) / (model.gamma - 1.0),
    };

    // snapshot storage with stride doubling
    let mut times: Vec<f64> = Vec::new();
    let mut rows_a: Vec<f64> = Vec::new();
    let mut rows_u: Vec<f64> = Vec::new();
    let mut stride = 1usize;
    let mut step_index = 0usize;
    let store =
        |times: &mut Vec<f64>, ra: &mut Vec<f64>, ru: &mut Vec<f64>, t: f64, s: &[f64], r: &[f64]| {
            times.push(t);
            for j in 0..s.len() {
                ra.push((s[j] - r[j]) / (2.0 * sampled.shat0[j]));
                ru.push((s[j] + r[j]) / 2.0);
            }
        };
    let thin = |times: &mut Vec<f64>, ra: &mut Vec<f64>, ru: &mut Vec<f64>| {
        // drop every second stored row, keeping the first
        let keep: Vec<usize> = (0..times.len()).step_by(2).collect();
        *times = keep.iter().map(|&i| times[i]).collect();
        let pick = |v: &Vec<f64>| -> Vec<f64> {
            keep.iter().flat_map(|&i| v[i * n..(i + 1) * n].iter().copied()).collect()
        };
        *ra = pick(ra);
        *ru = pick(ru);
    };

    store(&mut times, &mut rows_a, &mut rows_u, 0.0, &s, &r);

    let mut ds = vec![0.0; n];
    let mut dr = vec![0.0; n];
    let mut s1 = vec![0.0; n];
    let mut r1 = vec![0.0; n];
    let mut ds1 = vec![0.0; n];
    let mut dr1 = vec![0.0; n];
    let mut t = 0.0f64;
    let mut status = FieldStatus::Completed;

    while t < params.t_end {
        let Some(c_max) = ws.rhs(&s, &r, &mut ds, &mut dr) else {
            status = FieldStatus::Vacuous { t };
            break;
        };
        if c_max <= 0.0 {
            status = FieldStatus::Vacuous { t };
            break;
        }
        let dt = (params.cfl * dx / c_max).min(params.t_end - t);
        for j in 0..n {
            s1[j] = s[j] + dt * ds[j];
            r1[j] = r[j] + dt * dr[j];
        }
        if ws.rhs(&s1, &r1, &mut ds1, &mut dr1).is_none() {
            status = FieldStatus::Vacuous { t: t + dt };
            break;
        }
        let mut vacuous = false;
        for j in 0..n {
            s[j] = 0.5 * (s[j] + s1[j] + dt * ds1[j]);
            r[j] = 0.5 * (r[j] + r1[j] + dt * dr1[j]);
            if s[j] <= r[j] {
                vacuous = true;
            }
        }
        t += dt;
        if vacuous {
            status = FieldStatus::Vacuous { t };
            break;
        }
        step_index += 1;

        // gradient-blowup watchdog on u_x
        let mut max_ux = 0.0f64;
        for j in 1..n - 1 {
            let ux = ((s[j + 1] + r[j + 1]) - (s[j - 1] + r[j - 1])) / (4.0 * dx);
            max_ux = max_ux.max(ux.abs());
        }
        let halting = max_ux > params.blowup_cap;
        if halting || step_index % stride == 0 || t >= params.t_end {
            store(&mut times, &mut rows_a, &mut rows_u, t, &s, &r);
            if times.len() > params.max_snapshots {
                thin(&mut times, &mut rows_a, &mut rows_u);
                stride *= 2;
            }
        }
        if halting {
            status = FieldStatus::BlowupSuspected { t };
            break;
        }
    }

    if times.len() < 2 {
        return Err(Error::Vacuum(format!(
            "initial data lost positivity immediately (status {status:?})"
        )));
    }
    Ok(Field::from_rows(
        model,
        window.0,
        dx,
        n,
        times,
        rows_a,
        rows_u,
        sampled.shat0,
        sampled.shat0_x,
        sampled.shat0_xx,
        status,
        params.cfl,
        roi,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gas::GasModel;
    use crate::profile::{GaussianBump, Uniform};
    use std::sync::Arc;

    fn uniform_data() -> InitialData {
        let m = GasModel::with_gamma(2.0).unwrap();
        InitialData::new(Arc::new(Uniform { a: 1.0, u: 0.0, s: 0.0, window: (-10.0, 10.0) }), m)
    }

    #[test]
    fn uniform_state_is_equilibrium() {
        let data = uniform_data();
        let f = solve_cauchy(&data, &SolveParams::new(1.0, 128, 0.5)).unwrap();
        assert_eq!(f.status, FieldStatus::Completed);
        for it in 0..f.nt() {
            for j in 0..f.nx {
                assert!((f.a_at(it, j) - 1.0).abs() <= 1e-12);
                assert!(f.u_at(it, j).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn rejects_bad_configuration() {
        let data = uniform_data();
        assert!(matches!(
            solve_cauchy(&data, &SolveParams::new(1.0, 128, 0.0)),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            solve_cauchy(&data, &SolveParams::new(1.0, 128, 1.5)),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            solve_cauchy(&data, &SolveParams::new(1.0, 32, 0.5)),
            Err(Error::Config(_))
        ));
        // window too narrow for the requested horizon (c = 1/16 here)
        assert!(matches!(
            solve_cauchy(&data, &SolveParams::new(400.0, 128, 0.5)),
            Err(Error::Config(_))
        ));
        // explicit ROI outside the protected region
        let mut p = SolveParams::new(1.0, 128, 0.5);
        p.region_of_interest = Some((-9.9, 9.9));
        assert!(matches!(solve_cauchy(&data, &p), Err(Error::Config(_))));
    }

    #[test]
    fn invalid_profile_rejected_at_sampling() {
        let m = GasModel::with_gamma(2.0).unwrap();
        // s0 ranges 0.5..7.5 with r = 3: a0 = (s0-3)/2 < 0 on the left
        let data = InitialData::new(
            Arc::new(crate::profile::SimpleWaveTanh {
                s_mid: 4.0,
                amp: 3.5,
                r_const: 3.0,
                center: 0.0,
                width: 0.05,
                window: (-12.0, 12.0),
            }),
            m,
        );
        assert!(data.sample(128, None).is_err());
    }

    /// Parting streams in invariant space: the s-riser travels right and the
    /// r-riser travels left, so the middle state relaxes toward
    /// `s_lo - r_hi < 0`, a vacuum.
    struct PartingStreams;
    impl crate::profile::Profile for PartingStreams {
        fn state(&self, x: f64) -> crate::profile::ProfilePoint {
            let (s, s_x) = riser(x, -0.7, 2.0, 5.0); // s: 2 -> 5, rise at -0.7
            let (r, r_x) = riser(x, 0.7, 0.0, 3.0); // r: 0 -> 3, rise at +0.7
            crate::profile::ProfilePoint {
                a: (s - r) / 2.0,
                u: (s + r) / 2.0,
                s: 0.0,
                a_x: (s_x - r_x) / 2.0,
                u_x: (s_x + r_x) / 2.0,
                s_x: 0.0,
                s_xx: 0.0,
            }
        }
        fn window(&self) -> (f64, f64) {
            (-40.0, 40.0)
        }
        fn far_states(&self, _m: &GasModel) -> (crate::profile::FarState, crate::profile::FarState) {
            (
                crate::profile::FarState { a: 1.0, u: 1.0, shat: 1.0 },
                crate::profile::FarState { a: 1.0, u: 4.0, shat: 1.0 },
            )
        }
        fn constant_entropy(&self) -> Option<f64> {
            Some(0.0)
        }
    }

    fn riser(x: f64, center: f64, lo: f64, hi: f64) -> (f64, f64) {
        let w = 0.4;
        let t = ((x - center) / w).tanh();
        ((lo + hi) / 2.0 + (hi - lo) / 2.0 * t, (hi - lo) / 2.0 * (1.0 - t * t) / w)
    }

    #[test]
    fn parting_streams_truncate_as_vacuous() {
        let data = InitialData::new(Arc::new(PartingStreams), GasModel::with_gamma(2.0).unwrap());
        let f = solve_cauchy(&data, &SolveParams::new(20.0, 512, 0.45)).unwrap();
        assert!(matches!(f.status, FieldStatus::Vacuous { .. }), "status {:?}", f.status);
        // truncation keeps the earlier rows intact
        assert!(f.nt() >= 2);
        assert!((0..f.nx).all(|j| f.a_at(f.nt() - 1, j) > 0.0));
    }

    #[test]
    fn compressive_bump_halts_at_cap() {
        let m = GasModel::with_gamma(2.0).unwrap();
        let data = InitialData::new(
            Arc::new(GaussianBump {
                a_base: 1.0,
                a_amp: 0.4,
                u_amp: -0.8,
                center: 0.0,
                width: 0.4,
                s: 0.0,
                window: (-15.0, 15.0),
            }),
            m,
        );
        let mut p = SolveParams::new(8.0, 512, 0.45);
        p.blowup_cap = 10.0;
        let f = solve_cauchy(&data, &p).unwrap();
        assert!(
            matches!(f.status, FieldStatus::BlowupSuspected { .. }),
            "status {:?}",
            f.status
        );
    }

    #[test]
    fn snapshot_thinning_keeps_endpoints() {
        let data = uniform_data();
        let mut p = SolveParams::new(1.0, 128, 0.25);
        p.max_snapshots = 17;
        let f = solve_cauchy(&data, &p).unwrap();
        assert!(f.nt() <= 2 * 17);
        assert_eq!(f.t[0], 0.0);
        assert!((f.t_end() - 1.0).abs() < 1e-12);
    }
}
