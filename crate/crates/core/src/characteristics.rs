//! Characteristic tracing through sampled fields, Riccati integration along
//! curves, and singularity prediction by both mechanisms: reciprocal blowup
//! in time (`d+ alpha = b0 - b2 alpha^2`) and denominator vanishing under
//! x-integration. Characteristic crossing supplies the geometric witness.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::bounds;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::gas::GasModel;
use crate::par;
use crate::wavefields;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Forward,
    Backward,
}

impl Family {
    pub fn sign(self) -> f64 {
        match self {
            Family::Forward => 1.0,
            Family::Backward => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurveStatus {
    Completed,
    LeftDomain,
    /// Reached the truncated end of a field that halted near blowup.
    BlowupAdjacent,
}

/// A traced characteristic with per-step samples of the carrier field.
#[derive(Debug, Clone)]
pub struct CharacteristicCurve {
    pub family: Family,
    pub start: (f64, f64),
    pub t: Vec<f64>,
    pub x: Vec<f64>,
    pub c: Vec<f64>,
    pub a: Vec<f64>,
    pub shat: Vec<f64>,
    pub status: CurveStatus,
}

impl CharacteristicCurve {
    /// Synthetic curve from explicit samples (used by tests and assembled
    /// geometry); `a` and `shat` columns are filled with NaN.
    pub fn from_samples(family: Family, t: Vec<f64>, x: Vec<f64>, c: Vec<f64>) -> Self {
        let n = t.len();
        let start = (t[0], x[0]);
        Self { family, start, t, x, c, a: vec![f64::NAN; n], shat: vec![f64::NAN; n], status: CurveStatus::Completed }
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn end_t(&self) -> f64 {
        *self.t.last().expect("curve nonempty")
    }

    /// Position at time `t` by cubic Hermite interpolation between samples
    /// (slopes are the signed sound speeds).
    pub fn position_at(&self, t: f64) -> Option<f64> {
        if t < self.t[0] || t > self.end_t() {
            return None;
        }
        let k = match self.t.binary_search_by(|v| v.partial_cmp(&t).expect("finite t")) {
            Ok(k) => return Some(self.x[k]),
            Err(k) => k - 1,
        };
        let k = k.min(self.len() - 2);
        Some(hermite(
            self.t[k],
            self.t[k + 1],
            self.x[k],
            self.x[k + 1],
            self.family.sign() * self.c[k],
            self.family.sign() * self.c[k + 1],
            t,
        ))
    }
}

fn hermite(t0: f64, t1: f64, x0: f64, x1: f64, m0: f64, m1: f64, t: f64) -> f64 {
    let h = t1 - t0;
    if h <= 0.0 {
        return x0;
    }
    let s = (t - t0) / h;
    let s2 = s * s;
    let s3 = s2 * s;
    (2.0 * s3 - 3.0 * s2 + 1.0) * x0
        + (s3 - 2.0 * s2 + s) * h * m0
        + (-2.0 * s3 + 3.0 * s2) * x1
        + (s3 - s2) * h * m1
}

/// Default tracer step: `min(grid spacing) / (4 max c)` over the field.
pub fn default_step(field: &Field) -> f64 {
    let mut c_max = 0.0f64;
    for it in 0..field.nt() {
        let row = field.a_row(it);
        for j in 0..field.nx {
            let a = row[j];
            if a > 0.0 {
                c_max = c_max.max(field.model.sound_speed(a, field.shat_at(j)));
            }
        }
    }
    if c_max <= 0.0 {
        field.dx
    } else {
        field.dx / (4.0 * c_max)
    }
}

/// Trace one characteristic by classical RK4 on `dx/dt = +/- c(t, x)`.
pub fn trace(
    field: &Field,
    start: (f64, f64),
    family: Family,
    step: Option<f64>,
) -> Result<CharacteristicCurve> {
    let (t0, x0) = start;
    if !field.contains(t0, x0) {
        return Err(Error::Range(format!("start ({t0}, {x0}) outside field hull")));
    }
    let h_base = match step {
        Some(h) if h > 0.0 => h,
        Some(h) => return Err(Error::Config(format!("step must be positive, got {h}"))),
        None => default_step(field),
    };
    let sgn = family.sign();
    let t_end = field.t_end();
    let speed = |t: f64, x: f64| -> Option<f64> {
        let (a, _, shat) = field.value(t, x).ok()?;
        if a > 0.0 {
            Some(field.model.sound_speed(a, shat))
        } else {
            None
        }
    };

    let mut t = t0;
    let mut x = x0;
    let mut curve = CharacteristicCurve {
        family,
        start,
        t: Vec::new(),
        x: Vec::new(),
        c: Vec::new(),
        a: Vec::new(),
        shat: Vec::new(),
        status: CurveStatus::Completed,
    };
    let push = |curve: &mut CharacteristicCurve, t: f64, x: f64| -> bool {
        match field.value(t, x) {
            Ok((a, _, shat)) if a > 0.0 => {
                curve.t.push(t);
                curve.x.push(x);
                curve.c.push(field.model.sound_speed(a, shat));
                curve.a.push(a);
                curve.shat.push(shat);
                true
            }
            _ => false,
        }
    };
    if !push(&mut curve, t, x) {
        return Err(Error::Range(format!("start ({t0}, {x0}) not in a valid region")));
    }

    while t < t_end - 1e-15 * t_end.max(1.0) {
        let h = h_base.min(t_end - t);
        let stages = (|| {
            let k1 = speed(t, x)?;
            let k2 = speed(t + 0.5 * h, x + 0.5 * h * sgn * k1)?;
            let k3 = speed(t + 0.5 * h, x + 0.5 * h * sgn * k2)?;
            let k4 = speed(t + h, x + h * sgn * k3)?;
            Some((k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0)
        })();
        let Some(k) = stages else {
            // a stage point left the hull: the curve exits within one step
            curve.status = CurveStatus::LeftDomain;
            return Ok(curve);
        };
        let x_new = x + h * sgn * k;
        let t_new = t + h;
        if !field.contains(t_new, x_new) || !push(&mut curve, t_new, x_new) {
            curve.status = CurveStatus::LeftDomain;
            return Ok(curve);
        }
        t = t_new;
        x = x_new;
    }
    curve.status = match field.status {
        crate::field::FieldStatus::Completed => CurveStatus::Completed,
        _ => CurveStatus::BlowupAdjacent,
    };
    Ok(curve)
}

/// Trace a bundle of characteristics; deterministic order, parallel when the
/// `parallel` feature is on. The step is shared across the bundle.
pub fn trace_batch(
    field: &Field,
    starts: &[(f64, f64)],
    family: Family,
    step: Option<f64>,
) -> Vec<Result<CharacteristicCurve>> {
    let h = step.unwrap_or_else(|| default_step(field));
    par::map_indexed(starts.len(), |i| trace(field, starts[i], family, Some(h)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RiccatiStatus {
    Finite,
    BlowupDetected,
}

/// Weighted-gradient evolution along one characteristic.
#[derive(Debug, Clone)]
pub struct RiccatiTrajectory {
    pub t: Vec<f64>,
    pub alpha: Vec<f64>,
    /// Accumulated `int b2 dt` along the curve (equals `int b dt` when the
    /// field is isentropic).
    pub integral_b2: f64,
    pub t_star: Option<f64>,
    pub bracket_width: f64,
    pub status: RiccatiStatus,
}

#[derive(Clone, Copy)]
enum Chart {
    /// Integrate alpha directly (used while |alpha| <= 1).
    Alpha(f64),
    /// Integrate w = 1/alpha (regular through the blowup).
    Recip(f64),
}

impl Chart {
    fn alpha(self) -> f64 {
        match self {
            Chart::Alpha(a) => a,
            Chart::Recip(w) => {
                if w == 0.0 {
                    f64::INFINITY
                } else {
                    1.0 / w
                }
            }
        }
    }

    fn rebalance(self) -> Chart {
        match self {
            Chart::Alpha(a) if a.abs() > 1.0 => Chart::Recip(1.0 / a),
            Chart::Recip(w) if w.abs() > 1.0 => Chart::Alpha(1.0 / w),
            other => other,
        }
    }
}

struct CoeffSampler<'f> {
    field: &'f Field,
    model: GasModel,
}

impl CoeffSampler<'_> {
    fn at(&self, t: f64, x: f64) -> Option<(f64, f64)> {
        let s = self.field.sample(t, x).ok()?;
        if !(s.a > 0.0) {
            return None;
        }
        let rc = wavefields::riccati_coeffs(s.a, s.shat, s.shat_x, s.shat_xx, &self.model);
        Some((rc.b0, rc.b2))
    }
}

/// Integrate `d+ alpha = b0 - b2 alpha^2` along a traced curve with RK4,
/// switching to the reciprocal chart `dw/dt = b2 - b0 w^2` when `|alpha|`
/// exceeds one. A reciprocal zero crossing is a gradient blowup; its time is
/// bisected to a bracket below 1e-8.
pub fn riccati_along(
    curve: &CharacteristicCurve,
    alpha0: f64,
    field: &Field,
) -> Result<RiccatiTrajectory> {
    if !alpha0.is_finite() {
        return Err(Error::Domain(format!("alpha0 must be finite, got {alpha0}")));
    }
    if curve.len() < 2 {
        return Err(Error::Config("curve too short for Riccati integration".into()));
    }
    let sampler = CoeffSampler { field, model: field.model };
    let sgn = curve.family.sign();
    let mut chart = Chart::Alpha(alpha0).rebalance();
    let mut traj = RiccatiTrajectory {
        t: vec![curve.t[0]],
        alpha: vec![alpha0],
        integral_b2: 0.0,
        t_star: None,
        bracket_width: 0.0,
        status: RiccatiStatus::Finite,
    };

    // d/dt in the chosen chart; b0, b2 sampled at (t, hermite x)
    let deriv = |chart: Chart, b0: f64, b2: f64| -> f64 {
        match chart {
            Chart::Alpha(a) => b0 - b2 * a * a,
            Chart::Recip(w) => b2 - b0 * w * w,
        }
    };
    let step_chart = |chart: Chart, t0: f64, h: f64, coeffs: &dyn Fn(f64) -> Option<(f64, f64)>| -> Option<Chart> {
        let (b0a, b2a) = coeffs(t0)?;
        let (b0m, b2m) = coeffs(t0 + 0.5 * h)?;
        let (b0b, b2b) = coeffs(t0 + h)?;
        let v = match chart {
            Chart::Alpha(v) => v,
            Chart::Recip(v) => v,
        };
        let wrap = |v: f64| match chart {
            Chart::Alpha(_) => Chart::Alpha(v),
            Chart::Recip(_) => Chart::Recip(v),
        };
        let k1 = deriv(wrap(v), b0a, b2a);
        let k2 = deriv(wrap(v + 0.5 * h * k1), b0m, b2m);
        let k3 = deriv(wrap(v + 0.5 * h * k2), b0m, b2m);
        let k4 = deriv(wrap(v + h * k3), b0b, b2b);
        Some(wrap(v + h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0))
    };

    for k in 0..curve.len() - 1 {
        let (t0, t1) = (curve.t[k], curve.t[k + 1]);
        let h = t1 - t0;
        if h <= 0.0 {
            continue;
        }
        let (x0, x1) = (curve.x[k], curve.x[k + 1]);
        let (m0, m1) = (sgn * curve.c[k], sgn * curve.c[k + 1]);
        let x_of = |t: f64| hermite(t0, t1, x0, x1, m0, m1, t);
        let coeffs = |t: f64| sampler.at(t, x_of(t));

        // Simpson accumulation of int b2 dt over the segment
        if let (Some((_, b2a)), Some((_, b2m)), Some((_, b2b))) =
            (coeffs(t0), coeffs(t0 + 0.5 * h), coeffs(t1))
        {
            traj.integral_b2 += h / 6.0 * (b2a + 4.0 * b2m + b2b);
        }

        let Some(next) = step_chart(chart, t0, h, &coeffs) else {
            break;
        };

        // blowup: reciprocal crosses zero inside this segment
        if let (Chart::Recip(w0), Chart::Recip(w1)) = (chart, next) {
            if w0 != 0.0 && w0.signum() != w1.signum() {
                let mut lo = t0;
                let mut hi = t1;
                let mut w_lo = w0;
                while hi - lo > 1e-8 {
                    let mid = 0.5 * (lo + hi);
                    let Some(Chart::Recip(w_mid)) =
                        step_chart(Chart::Recip(w_lo), lo, mid - lo, &coeffs)
                    else {
                        break;
                    };
                    if w_mid.signum() == w_lo.signum() && w_mid != 0.0 {
                        lo = mid;
                        w_lo = w_mid;
                    } else {
                        hi = mid;
                    }
                }
                traj.t_star = Some(0.5 * (lo + hi));
                traj.bracket_width = hi - lo;
                traj.status = RiccatiStatus::BlowupDetected;
                traj.t.push(0.5 * (lo + hi));
                traj.alpha.push(if w0 < 0.0 { f64::NEG_INFINITY } else { f64::INFINITY });
                return Ok(traj);
            }
        }

        chart = next.rebalance();
        traj.t.push(t1);
        traj.alpha.push(chart.alpha());
    }
    Ok(traj)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BlowupPrediction {
    pub mechanism: String,
    pub t_star: Option<f64>,
    pub x_star: Option<f64>,
    pub bracket: f64,
    pub status: String,
    /// Pointwise verification that the x-integrand stays above the floor
    /// implied by the density upper bound.
    pub integrand_floor_ok: bool,
}

/// Predict blowup by integrating the Riccati equation in the x-variable
/// along the forward characteristic from `(t0, start_x)`:
/// `alpha(x) = alpha0 / (1 + alpha0 int K rho^{(1-3g)/4} dz)` with `K = K2`
/// (isentropic) or `K5(Shat(z))`. Returns the denominator zero if reached.
pub fn predict_blowup_x_integration(
    field: &Field,
    start_x: f64,
    alpha0: f64,
    density_cap: Option<f64>,
) -> Result<BlowupPrediction> {
    let mechanism = "x-integration".to_string();
    if alpha0 >= 0.0 {
        return Ok(BlowupPrediction {
            mechanism,
            t_star: None,
            x_star: None,
            bracket: 0.0,
            status: "no-blowup".into(),
            integrand_floor_ok: true,
        });
    }
    let curve = trace(field, (field.t[0], start_x), Family::Forward, None)?;
    if curve.len() < 2 {
        return Err(Error::Range("characteristic left the domain immediately".into()));
    }
    let model = field.model;
    let g = model.gamma;
    let shat0 = field.shat_at(0);
    let isentropic = (0..field.nx).all(|j| field.shat_at(j) == shat0);
    let k2 = bounds::k2_constant(&model);
    let expo = (1.0 - 3.0 * g) / 4.0;
    let integrand = |a: f64, shat: f64| -> f64 {
        let rho = 1.0 / model.v_from_a(a).expect("a positive on curve");
        let k = if isentropic { k2 } else { bounds::k5_constant(&model, shat) };
        k * rho.powf(expo)
    };
    let mut floor_ok = true;
    if let Some(cap) = density_cap {
        for k in 0..curve.len() {
            let rho = 1.0 / model.v_from_a(curve.a[k]).expect("a positive");
            if rho > cap * (1.0 + 1e-9) {
                floor_ok = false;
            }
        }
    }

    let mut integral = 0.0f64;
    let mut d_prev = 1.0f64;
    for k in 0..curve.len() - 1 {
        let f0 = integrand(curve.a[k], curve.shat[k]);
        let f1 = integrand(curve.a[k + 1], curve.shat[k + 1]);
        integral += 0.5 * (f0 + f1) * (curve.x[k + 1] - curve.x[k]);
        let d = 1.0 + alpha0 * integral;
        if d <= 0.0 {
            let theta = if d_prev - d > 0.0 { d_prev / (d_prev - d) } else { 1.0 };
            let x_star = curve.x[k] + theta * (curve.x[k + 1] - curve.x[k]);
            let t_star = curve.t[k] + theta * (curve.t[k + 1] - curve.t[k]);
            return Ok(BlowupPrediction {
                mechanism,
                t_star: Some(t_star),
                x_star: Some(x_star),
                bracket: curve.t[k + 1] - curve.t[k],
                status: "blowup".into(),
                integrand_floor_ok: floor_ok,
            });
        }
        d_prev = d;
    }
    Ok(BlowupPrediction {
        mechanism,
        t_star: None,
        x_star: None,
        bracket: 0.0,
        status: "no-blowup-within-domain".into(),
        integrand_floor_ok: floor_ok,
    })
}

/// Earliest pairwise intersection within a same-family bundle, by per-step
/// linear segment sweep over adjacent (in x) alive curves.
pub fn first_crossing(
    curves: &[CharacteristicCurve],
) -> Result<Option<(f64, (usize, usize))>> {
    if curves.len() < 2 {
        return Err(Error::Config("need at least 2 curves".into()));
    }
    let family = curves[0].family;
    if curves.iter().any(|c| c.family != family) {
        return Err(Error::Config("curves must share a family".into()));
    }
    let t0 = curves[0].t[0];
    let scale = curves.iter().map(|c| c.end_t().abs()).fold(1.0f64, f64::max);
    if curves.iter().any(|c| (c.t[0] - t0).abs() > 1e-9 * scale) {
        return Err(Error::Config("curves must start at a common time".into()));
    }
    let steps = curves.iter().map(|c| c.len()).max().unwrap_or(0);
    let mut best: Option<(f64, (usize, usize))> = None;

    for k in 0..steps.saturating_sub(1) {
        // alive curves with a segment [k, k+1]; aligned sampling is assumed
        let mut alive: Vec<usize> =
            (0..curves.len()).filter(|&i| curves[i].len() > k + 1).collect();
        if alive.len() < 2 {
            break;
        }
        let tk = curves[alive[0]].t[k];
        let tk1 = curves[alive[0]].t[k + 1];
        for &i in &alive {
            if (curves[i].t[k] - tk).abs() > 1e-9 * scale {
                return Err(Error::Config(
                    "curves must share their time sampling for crossing detection".into(),
                ));
            }
        }
        alive.sort_by(|&i, &j| {
            curves[i].x[k].partial_cmp(&curves[j].x[k]).expect("finite positions")
        });
        for w in alive.windows(2) {
            let (i, j) = (w[0], w[1]);
            let d0 = curves[i].x[k] - curves[j].x[k];
            let d1 = curves[i].x[k + 1] - curves[j].x[k + 1];
            if d0 == 0.0 && d1 == 0.0 {
                continue;
            }
            if d0 * d1 <= 0.0 {
                let theta = if (d0 - d1).abs() > 0.0 { d0 / (d0 - d1) } else { 0.0 };
                let t_cross = tk + theta * (tk1 - tk);
                let key = (t_cross, (i.min(j), i.max(j)));
                if best.map_or(true, |(tb, _)| t_cross < tb) {
                    best = Some(key);
                }
            }
        }
        if let Some((tb, _)) = best {
            if tb <= tk1 {
                break;
            }
        }
    }
    Ok(best)
}

/// CSV export `t,x,c,alpha` for a curve with its Riccati trajectory.
pub fn write_curve_csv<W: Write>(
    curve: &CharacteristicCurve,
    traj: Option<&RiccatiTrajectory>,
    mut w: W,
) -> Result<()> {
    writeln!(w, "t,x,c,alpha")?;
    for k in 0..curve.len() {
        let alpha = traj.and_then(|tr| tr.alpha.get(k).copied()).unwrap_or(f64::NAN);
        writeln!(w, "{},{},{},{}", curve.t[k], curve.x[k], curve.c[k], alpha)?;
    }
    Ok(())
}
