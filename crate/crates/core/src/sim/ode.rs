//! Classical fixed-step fourth-order Runge-Kutta for the two deterministic
//! systems, with domain clamping and conserved-quantity bookkeeping.

use crate::error::{Error, Result};
use crate::subfunc::{self, SState, SubfuncParams};
use crate::watterson::{self, WattersonParams, WState};

/// A sampled deterministic trajectory.
#[derive(Debug, Clone)]
pub struct OdeRun<const N: usize> {
    pub times: Vec<f64>,
    pub states: Vec<[f64; N]>,
    /// steps on which the state left the domain by more than the clamp
    /// tolerance and was pulled back
    pub clamp_events: usize,
}

impl<const N: usize> OdeRun<N> {
    pub fn terminal(&self) -> [f64; N] {
        *self.states.last().unwrap()
    }
}

fn rk4_step<const N: usize>(
    f: &impl Fn(&[f64; N]) -> [f64; N],
    y: &[f64; N],
    dt: f64,
) -> [f64; N] {
    let k1 = f(y);
    let mut y2 = *y;
    for i in 0..N {
        y2[i] = y[i] + 0.5 * dt * k1[i];
    }
    let k2 = f(&y2);
    for i in 0..N {
        y2[i] = y[i] + 0.5 * dt * k2[i];
    }
    let k3 = f(&y2);
    for i in 0..N {
        y2[i] = y[i] + dt * k3[i];
    }
    let k4 = f(&y2);
    let mut out = *y;
    for i in 0..N {
        out[i] = y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

fn integrate<const N: usize>(
    f: impl Fn(&[f64; N]) -> [f64; N],
    clamp: impl Fn(&mut [f64; N]) -> f64,
    start: [f64; N],
    t_end: f64,
    dt: f64,
    record_stride: usize,
) -> Result<OdeRun<N>> {
    if !(dt > 0.0 && t_end >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "dt/t_end",
            reason: format!("dt = {dt}, t_end = {t_end}"),
        });
    }
    let steps = (t_end / dt).round() as usize;
    let mut times = Vec::with_capacity(steps / record_stride + 2);
    let mut states = Vec::with_capacity(steps / record_stride + 2);
    let mut y = start;
    let mut clamp_events = 0usize;
    times.push(0.0);
    states.push(y);
    for k in 1..=steps {
        y = rk4_step(&f, &y, dt);
        let overshoot = clamp(&mut y);
        if overshoot > 1e-9 {
            clamp_events += 1;
        }
        if k % record_stride == 0 || k == steps {
            times.push(k as f64 * dt);
            states.push(y);
        }
    }
    Ok(OdeRun {
        times,
        states,
        clamp_events,
    })
}

/// RK4 trajectory of the two-locus system on the unit square.
pub fn watterson_trajectory(
    start: WState,
    p: &WattersonParams,
    t_end: f64,
    dt: f64,
    record_stride: usize,
) -> Result<OdeRun<2>> {
    let pp = *p;
    integrate(
        move |y: &[f64; 2]| {
            let (fx, fy) = watterson::ode_field(WState { x: y[0], y: y[1] }, &pp);
            [fx, fy]
        },
        |y: &mut [f64; 2]| {
            let mut over: f64 = 0.0;
            for v in y.iter_mut() {
                over = over.max((-*v).max(*v - 1.0));
                *v = v.clamp(0.0, 1.0);
            }
            over.max(0.0)
        },
        [start.x, start.y],
        t_end,
        dt,
        record_stride,
    )
}

/// RK4 trajectory of the six-dimensional system, state order
/// `(x3, x2, x1, y3, y2, y1)`.
pub fn subfunc_trajectory(
    start: &SState,
    p: &SubfuncParams,
    t_end: f64,
    dt: f64,
    record_stride: usize,
) -> Result<OdeRun<6>> {
    let pp = *p;
    integrate(
        move |y: &[f64; 6]| subfunc::ode_field(&SState::from_array(*y), &pp),
        |y: &mut [f64; 6]| {
            let mut over: f64 = 0.0;
            for v in y.iter_mut() {
                over = over.max(-*v);
                *v = v.max(0.0);
            }
            for half in [0, 3] {
                let s = y[half] + y[half + 1] + y[half + 2];
                if s > 1.0 {
                    over = over.max(s - 1.0);
                    for v in &mut y[half..half + 3] {
                        *v /= s;
                    }
                }
            }
            over
        },
        start.as_array(),
        t_end,
        dt,
        record_stride,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subfunc::point_at;
    use crate::watterson::project;

    #[test]
    fn watterson_flow_preserves_line_ratio() {
        let p = WattersonParams::new(1e-4).unwrap();
        let start = WState::new(0.9, 0.5).unwrap();
        let run = watterson_trajectory(start, &p, 1.0, 1e-3, 10).unwrap();
        let r0 = (1.0 - start.y) / (1.0 - start.x);
        for s in &run.states {
            let r = (1.0 - s[1]) / (1.0 - s[0]);
            assert!((r - r0).abs() < 1e-8, "ratio drifted to {r}");
        }
        assert_eq!(run.clamp_events, 0);
    }

    #[test]
    fn watterson_flow_converges_to_projection() {
        let p = WattersonParams::new(1e-4).unwrap();
        let start = WState::new(0.9, 0.5).unwrap();
        // run until the field is negligible
        let run = watterson_trajectory(start, &p, 4000.0, 1e-3, 100_000).unwrap();
        let end = run.terminal();
        let target = project(start, &p).unwrap();
        assert!((end[0] - 0.802_492).abs() < 1e-6);
        assert!((end[1] - 0.012_461).abs() < 1e-6);
        assert!((end[0] - target.x_star).abs() < 1e-6);
        assert!((end[1] - target.y_star).abs() < 1e-6);
    }

    #[test]
    fn on_curve_start_stays_put() {
        let p = WattersonParams::new(1e-4).unwrap();
        let s = WState::new(0.2, 0.05).unwrap();
        let run = watterson_trajectory(s, &p, 5.0, 1e-3, 1000).unwrap();
        let end = run.terminal();
        assert!((end[0] - 0.2).abs() < 1e-10);
        assert!((end[1] - 0.05).abs() < 1e-10);
    }

    #[test]
    fn subfunc_flow_preserves_full_function_ratio() {
        let p = SubfuncParams::new(1e-3).unwrap();
        let e = point_at(0.6, &p).unwrap();
        // nudge off the curve, keeping the ratio
        let s = SState::new(e.x3, e.x * 1.4, e.x * 0.7, e.y3, e.y * 1.2, e.y * 0.9).unwrap();
        let r0 = s.y3 / s.x3;
        let run = subfunc_trajectory(&s, &p, 1.0, 1e-3, 50).unwrap();
        for st in &run.states {
            let r = st[3] / st[0];
            assert!((r - r0).abs() < 1e-8);
        }
    }

    #[test]
    fn subfunc_equilibrium_is_fixed() {
        let p = SubfuncParams::new(1e-3).unwrap();
        let e = point_at(0.3, &p).unwrap();
        let run = subfunc_trajectory(&e.to_state(), &p, 2.0, 1e-3, 2000).unwrap();
        let end = run.terminal();
        let a0 = e.to_state().as_array();
        for i in 0..6 {
            assert!((end[i] - a0[i]).abs() < 1e-10);
        }
    }
}
