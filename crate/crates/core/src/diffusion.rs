//! Scale, speed and Green's-function analytics for one-dimensional diffusions
//! with generator `(a/2) d^2/dz^2 + b d/dz` and two absorbing endpoints.
//!
//! The natural scale `s` and speed density `m = 1/(a s')` are tabulated on a
//! partition graded toward the endpoints (the variance of the instantiating
//! models vanishes there, so the integrands are steep but integrable).  The
//! expected absorption time from `x` is
//!
//! ```text
//! E_x tau = 2 [ A(x) I1(x) + B(x) I2(x) ]
//! A = (s(x)-s(l))/(s(r)-s(l)),    I1 = int_x^r (s(r)-s(y)) m(y) dy
//! B = (s(r)-s(x))/(s(r)-s(l)),    I2 = int_l^x (s(y)-s(l)) m(y) dy
//! ```
//!
//! `s(r)-s(y)` is accumulated as a suffix sum of positive panel increments so
//! the near-boundary cancellation of the naive difference never occurs.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::quad::kronrod15;

type Eval = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// An open interval plus drift/variance evaluators.
#[derive(Clone)]
pub struct Diffusion1D {
    left: f64,
    right: f64,
    drift: Eval,
    variance: Eval,
}

impl std::fmt::Debug for Diffusion1D {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Diffusion1D")
            .field("left", &self.left)
            .field("right", &self.right)
            .finish_non_exhaustive()
    }
}

impl Diffusion1D {
    pub fn new<B, A>(left: f64, right: f64, drift: B, variance: A) -> Self
    where
        B: Fn(f64) -> f64 + Send + Sync + 'static,
        A: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        assert!(left < right, "need left < right");
        Self {
            left,
            right,
            drift: Arc::new(drift),
            variance: Arc::new(variance),
        }
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.left, self.right)
    }

    pub fn drift(&self, z: f64) -> f64 {
        (self.drift)(z)
    }

    pub fn variance(&self, z: f64) -> f64 {
        (self.variance)(z)
    }

    /// Tabulate natural scale and speed density.
    pub fn natural_scale(&self, opts: &ScaleOptions) -> Result<ScaleSpeedTable> {
        ScaleSpeedTable::build(self.clone(), opts)
    }

    /// Expected absorption time from `x0` at default resolution.
    pub fn mean_exit_time(&self, x0: f64) -> Result<f64> {
        self.natural_scale(&ScaleOptions::default())?.exit_time(x0)
    }

    /// CSV-ready sampling of `(z, drift, variance, -2 drift / variance)` on a
    /// uniform interior grid.
    pub fn coeff_profile(&self, n_points: usize) -> Vec<(f64, f64, f64, f64)> {
        let (l, r) = (self.left, self.right);
        (0..n_points)
            .map(|k| {
                let z = l + (r - l) * (k as f64 + 1.0) / (n_points as f64 + 1.0);
                let b = self.drift(z);
                let a = self.variance(z);
                (z, b, a, -2.0 * b / a)
            })
            .collect()
    }
}

/// Resolution knobs for the scale/speed tabulation.
#[derive(Debug, Clone)]
pub struct ScaleOptions {
    /// Panels of the cosine-graded base partition.
    pub base_panels: usize,
    /// Extra nodes per decade of distance from each endpoint.
    pub tail_points_per_decade: usize,
    /// Distance from the absorbing endpoints at which evaluation stops.
    pub endpoint_offset: f64,
    /// Scale anchor: `s(anchor) = 0`, `s'(anchor) = 1`. Defaults to 0 when
    /// the interval contains it, else the midpoint.
    pub anchor: Option<f64>,
}

impl Default for ScaleOptions {
    fn default() -> Self {
        Self {
            base_panels: 512,
            tail_points_per_decade: 16,
            endpoint_offset: 1e-10,
            anchor: None,
        }
    }
}

/// Tabulated natural scale `s`, its log-derivative integral `H` (so that
/// `s' = exp(-H)`), and speed density `m` on a graded partition.
pub struct ScaleSpeedTable {
    diff: Diffusion1D,
    /// partition nodes, `left + eps ..= right - eps`
    nodes: Vec<f64>,
    /// `H(node) = int_anchor^node 2 b / a`
    h: Vec<f64>,
    /// natural scale at nodes
    s: Vec<f64>,
    /// suffix sums: `s(last) - s(node)`
    tail: Vec<f64>,
}

impl ScaleSpeedTable {
    fn build(diff: Diffusion1D, opts: &ScaleOptions) -> Result<Self> {
        let (l, r) = diff.interval();
        let width = r - l;
        let eps = opts.endpoint_offset;
        if eps <= 0.0 || eps * 4.0 >= width {
            return Err(Error::InvalidParameter {
                name: "endpoint_offset",
                reason: format!("offset {eps} incompatible with interval width {width}"),
            });
        }
        let anchor = opts
            .anchor
            .unwrap_or(if l < 0.0 && r > 0.0 { 0.0 } else { 0.5 * (l + r) });
        if !(anchor > l && anchor < r) {
            return Err(Error::InvalidParameter {
                name: "anchor",
                reason: format!("anchor {anchor} outside ({l}, {r})"),
            });
        }

        // cosine base grid + logarithmically graded tails + anchor
        let mut nodes = Vec::with_capacity(opts.base_panels + 1);
        let n = opts.base_panels.max(16);
        for i in 0..=n {
            let t = std::f64::consts::PI * i as f64 / n as f64;
            nodes.push(l + eps + (width - 2.0 * eps) * 0.5 * (1.0 - t.cos()));
        }
        let decades = (width / (2.0 * eps)).log10().max(1.0);
        let per_side = (decades * opts.tail_points_per_decade as f64).ceil() as usize;
        for k in 0..per_side {
            let d = (width / 2.0) * (eps * 2.0 / width).powf(k as f64 / per_side as f64);
            nodes.push(l + d);
            nodes.push(r - d);
        }
        nodes.push(anchor);
        nodes.sort_by(|a, b| a.partial_cmp(b).unwrap());
        nodes.dedup_by(|a, b| (*a - *b).abs() < 1e-14 * width);

        let phi = {
            let diff = diff.clone();
            move |z: f64| {
                let a = diff.variance(z);
                2.0 * diff.drift(z) / a
            }
        };

        // panel increments of H, then prefix sums anchored at `anchor`
        let m = nodes.len();
        let mut dh = vec![0.0; m - 1];
        for i in 0..m - 1 {
            let (v, _) = kronrod15(&phi, nodes[i], nodes[i + 1]);
            dh[i] = v;
        }
        let mut h = vec![0.0; m];
        for i in 0..m - 1 {
            h[i + 1] = h[i] + dh[i];
        }
        let ia = nodes
            .iter()
            .enumerate()
            .min_by(|x, y| {
                (x.1 - anchor)
                    .abs()
                    .partial_cmp(&(y.1 - anchor).abs())
                    .unwrap()
            })
            .map(|(i, _)| i)
            .unwrap();
        let h0 = h[ia];
        for v in &mut h {
            *v -= h0;
            if !v.is_finite() || v.abs() > 700.0 {
                return Err(Error::QuadratureFailure {
                    location: anchor,
                    reason: "scale exponent overflow; drift/variance ratio not integrable".into(),
                });
            }
        }

        // panel increments of s via nested evaluation of s' = exp(-H)
        let mut ds = vec![0.0; m - 1];
        for i in 0..m - 1 {
            let (y0, y1) = (nodes[i], nodes[i + 1]);
            let hi = h[i];
            let sp = |t: f64| {
                let (part, _) = kronrod15(&phi, y0, t);
                (-(hi + part)).exp()
            };
            let (v, _) = kronrod15(&sp, y0, y1);
            if !(v > 0.0) {
                return Err(Error::QuadratureFailure {
                    location: 0.5 * (y0 + y1),
                    reason: "scale increment not positive".into(),
                });
            }
            ds[i] = v;
        }
        let mut s = vec![0.0; m];
        for i in 0..m - 1 {
            s[i + 1] = s[i] + ds[i];
        }
        let s0 = s[ia];
        for v in &mut s {
            *v -= s0;
        }
        let mut tail = vec![0.0; m];
        for i in (0..m - 1).rev() {
            tail[i] = tail[i + 1] + ds[i];
        }

        // the diffusion must be nondegenerate inside
        for &y in &nodes {
            if !(diff.variance(y) > 0.0) {
                return Err(Error::QuadratureFailure {
                    location: y,
                    reason: "variance not positive inside the interval".into(),
                });
            }
        }

        Ok(Self {
            diff,
            nodes,
            h,
            s,
            tail,
        })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    fn panel_of(&self, y: f64) -> usize {
        match self
            .nodes
            .binary_search_by(|v| v.partial_cmp(&y).unwrap())
        {
            Ok(i) => i.min(self.nodes.len() - 2),
            Err(i) => i.saturating_sub(1).min(self.nodes.len() - 2),
        }
    }

    fn phi_partial(&self, i: usize, y: f64) -> f64 {
        let d = &self.diff;
        let phi = |z: f64| 2.0 * d.drift(z) / d.variance(z);
        let (v, _) = kronrod15(&phi, self.nodes[i], y);
        v
    }

    /// `H(y) = -log s'(y)`.
    pub fn h_at(&self, y: f64) -> f64 {
        let i = self.panel_of(y);
        self.h[i] + self.phi_partial(i, y)
    }

    /// Natural scale value.
    pub fn s_at(&self, y: f64) -> f64 {
        let i = self.panel_of(y);
        let hi = self.h[i];
        let y0 = self.nodes[i];
        let d = &self.diff;
        let phi = |z: f64| 2.0 * d.drift(z) / d.variance(z);
        let sp = |t: f64| {
            let (part, _) = kronrod15(&phi, y0, t);
            (-(hi + part)).exp()
        };
        let (v, _) = kronrod15(&sp, y0, y);
        self.s[i] + v
    }

    /// `s(right) - s(y)` accumulated without cancellation.
    fn tail_at(&self, y: f64) -> f64 {
        let i = self.panel_of(y);
        let hi = self.h[i];
        let y0 = self.nodes[i];
        let d = &self.diff;
        let phi = |z: f64| 2.0 * d.drift(z) / d.variance(z);
        let sp = |t: f64| {
            let (part, _) = kronrod15(&phi, y0, t);
            (-(hi + part)).exp()
        };
        let (from_y_to_next, _) = kronrod15(&sp, y, self.nodes[i + 1]);
        self.tail[i + 1] + from_y_to_next
    }

    /// Speed density `m(y) = 1/(a(y) s'(y))`.
    pub fn m_at(&self, y: f64) -> f64 {
        self.h_at(y).exp() / self.diff.variance(y)
    }

    /// Green's-function integrand for absorption from `x0`:
    /// `G(x0, y) m(y)` with `G = 2 (s(min)-s(l)) (s(r)-s(max)) / (s(r)-s(l))`.
    pub fn green_times_speed(&self, x0: f64, y: f64) -> f64 {
        let s_l = self.s[0];
        let range = self.s[self.s.len() - 1] - s_l;
        let g = if y >= x0 {
            2.0 * (self.s_at(x0) - s_l) * self.tail_at(y) / range
        } else {
            2.0 * self.tail_at(x0) * (self.s_at(y) - s_l) / range
        };
        g * self.m_at(y)
    }

    /// Expected absorption time from `x0`.
    pub fn exit_time(&self, x0: f64) -> Result<f64> {
        let (l, r) = self.diff.interval();
        if x0 == l || x0 == r {
            return Ok(0.0);
        }
        if !(x0 > l && x0 < r) {
            return Err(Error::OutOfDomain(format!(
                "start {x0} outside [{l}, {r}]"
            )));
        }
        let first = self.nodes[0];
        let last = self.nodes[self.nodes.len() - 1];
        let x = x0.clamp(first, last);
        let s_l = self.s[0];
        let range = self.s[self.s.len() - 1] - s_l;
        let a_frac = (self.s_at(x) - s_l) / range;
        let b_frac = self.tail_at(x) / range;

        // I1 = int_x^r tail(y) m(y) dy
        let ix = self.panel_of(x);
        let mut i1 = 0.0;
        {
            let f = |y: f64| self.tail_at(y) * self.m_at(y);
            let (v, _) = kronrod15(&f, x, self.nodes[ix + 1]);
            i1 += v;
            for j in ix + 1..self.nodes.len() - 1 {
                let (v, _) = kronrod15(&f, self.nodes[j], self.nodes[j + 1]);
                i1 += v;
            }
        }
        // I2 = int_l^x (s(y)-s(l)) m(y) dy
        let mut i2 = 0.0;
        {
            let f = |y: f64| (self.s_at(y) - s_l) * self.m_at(y);
            for j in 0..ix {
                let (v, _) = kronrod15(&f, self.nodes[j], self.nodes[j + 1]);
                i2 += v;
            }
            let (v, _) = kronrod15(&f, self.nodes[ix], x);
            i2 += v;
        }
        let t = 2.0 * (a_frac * i1 + b_frac * i2);
        if !t.is_finite() {
            return Err(Error::QuadratureFailure {
                location: x0,
                reason: "non-finite exit time".into(),
            });
        }
        Ok(t)
    }

    /// `(y, G(x0,y) m(y))` on a uniform interior grid.
    pub fn green_profile(&self, x0: f64, n_points: usize) -> Vec<(f64, f64)> {
        let first = self.nodes[0];
        let last = self.nodes[self.nodes.len() - 1];
        (0..n_points)
            .map(|k| {
                let y = first + (last - first) * (k as f64 + 0.5) / n_points as f64;
                (y, self.green_times_speed(x0, y))
            })
            .collect()
    }
}
