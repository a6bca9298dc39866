//! Closed-form machinery for the two-locus double-recessive-null model.
//!
//! State is the pair of null-allele frequencies `(x, y)` on the unit square.
//! The deterministic flow moves along lines through `(1, 1)` until it reaches
//! the curve of equilibria `x y = sqrt(mu)`; everything here is built from the
//! scalar map `g` that sends the flow-line ratio `u = (1-x)/(1-y)` to the
//! curve coordinate it lands on.

use crate::diffusion::Diffusion1D;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WattersonParams {
    /// Per-generation null-mutation probability.
    pub mu: f64,
    /// Population size, used only by simulation callers.
    pub n_pop: Option<u32>,
}

impl WattersonParams {
    pub fn new(mu: f64) -> Result<Self> {
        if !(mu > 0.0 && mu < 1.0) {
            return Err(Error::InvalidParameter {
                name: "mu",
                reason: format!("need 0 < mu < 1, got {mu}"),
            });
        }
        Ok(Self { mu, n_pop: None })
    }

    pub fn with_pop_size(mut self, n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter {
                name: "n_pop",
                reason: format!("need n_pop >= 2, got {n}"),
            });
        }
        self.n_pop = Some(n);
        Ok(self)
    }

    /// sqrt(mu), the product x* y* on the equilibrium curve.
    pub fn sqrt_mu(&self) -> f64 {
        self.mu.sqrt()
    }

    /// Half-width of the curve coordinate interval, `1 - sqrt(mu)`.
    pub fn curve_halfwidth(&self) -> f64 {
        1.0 - self.mu.sqrt()
    }
}

/// Point of the unit square: frequencies of the null alleles at the two loci.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WState {
    pub x: f64,
    pub y: f64,
}

impl WState {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&x) || !(0.0..=1.0).contains(&y) {
            return Err(Error::OutOfDomain(format!(
                "state ({x}, {y}) outside the unit square"
            )));
        }
        Ok(Self { x, y })
    }
}

/// A point on the equilibrium curve `x* y* = sqrt(mu)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WCurvePoint {
    pub x_star: f64,
    pub y_star: f64,
}

impl WCurvePoint {
    /// Flow-line ratio `(1 - x*)/(1 - y*)` of the point.
    pub fn ratio(&self) -> f64 {
        (1.0 - self.x_star) / (1.0 - self.y_star)
    }

    /// Coordinate along the curve, `z = x* - y*`.
    pub fn z(&self) -> f64 {
        self.x_star - self.y_star
    }
}

/// Right-hand side of the deterministic flow at `s`.
pub fn ode_field(s: WState, p: &WattersonParams) -> (f64, f64) {
    let r = p.mu - (s.x * s.y).powi(2);
    ((1.0 - s.x) * r, (1.0 - s.y) * r)
}

/// Radicand of the projection map, `(1-u)^2 + 4 sqrt(mu) u`.
#[inline]
fn radicand(u: f64, smu: f64) -> f64 {
    (1.0 - u) * (1.0 - u) + 4.0 * smu * u
}

#[inline]
fn g_raw(u: f64, smu: f64) -> f64 {
    if u <= 1.0 {
        ((1.0 - u) + radicand(u, smu).sqrt()) / 2.0
    } else {
        // conjugate form: (1-u) and sqrt(S) cancel for large u
        2.0 * smu * u / (radicand(u, smu).sqrt() + u - 1.0)
    }
}

/// First derivative of `g`.
///
/// Uses `4 S - S'^2 = 16 sqrt(mu) (1 - sqrt(mu))` to avoid the cancellation
/// the textbook form suffers for large `u`:
/// `g'(u) = -4 sqrt(mu)(1-sqrt(mu)) / (sqrt(S) (S' + 2 sqrt(S)))`.
#[inline]
fn g_prime_raw(u: f64, smu: f64) -> f64 {
    let s = radicand(u, smu);
    let sp = -2.0 * (1.0 - u) + 4.0 * smu;
    let rt = s.sqrt();
    -4.0 * smu * (1.0 - smu) / (rt * (sp + 2.0 * rt))
}

/// Second derivative of `g`, via the same identity:
/// `g''(u) = 2 sqrt(mu) (1 - sqrt(mu)) S^{-3/2}`.
#[inline]
fn g_second_raw(u: f64, smu: f64) -> f64 {
    let s = radicand(u, smu);
    2.0 * smu * (1.0 - smu) / (s * s.sqrt())
}

fn check_u_mu(u: f64, mu: f64) -> Result<f64> {
    if u < 0.0 || !u.is_finite() {
        return Err(Error::OutOfDomain(format!("line ratio u must be >= 0, got {u}")));
    }
    if !(mu > 0.0 && mu < 1.0) {
        return Err(Error::InvalidParameter {
            name: "mu",
            reason: format!("need 0 < mu < 1, got {mu}"),
        });
    }
    Ok(mu.sqrt())
}

/// Curve coordinate reached from flow-line ratio `u`.
pub fn g_eval(u: f64, mu: f64) -> Result<f64> {
    Ok(g_raw(u, check_u_mu(u, mu)?))
}

pub fn g_prime(u: f64, mu: f64) -> Result<f64> {
    Ok(g_prime_raw(u, check_u_mu(u, mu)?))
}

pub fn g_second(u: f64, mu: f64) -> Result<f64> {
    Ok(g_second_raw(u, check_u_mu(u, mu)?))
}

/// Equilibrium the flow would reach from `s`.
///
/// The corner `x = y = 1` has no flow line through it and is rejected.
pub fn project(s: WState, p: &WattersonParams) -> Result<WCurvePoint> {
    let (omx, omy) = (1.0 - s.x, 1.0 - s.y);
    if omx == 0.0 && omy == 0.0 {
        return Err(Error::OutOfDomain(
            "projection undefined at the corner (1, 1)".into(),
        ));
    }
    let smu = p.sqrt_mu();
    let u = omx / omy;
    Ok(WCurvePoint {
        x_star: g_raw(u, smu),
        y_star: g_raw(1.0 / u, smu),
    })
}

/// Squared distance functional from the curve, `(mu - x^2 y^2)^2`.
pub fn lyapunov_phi(s: WState, p: &WattersonParams) -> f64 {
    let d = p.mu - (s.x * s.y).powi(2);
    d * d
}

/// Both sides of the decay identity for the distance functional:
/// the directional derivative of phi along the field, and the closed
/// product form `-4 x y (y (1-x) + x (1-y)) phi`.
pub fn lyapunov_identity(s: WState, p: &WattersonParams) -> (f64, f64) {
    let (x, y) = (s.x, s.y);
    let d = p.mu - (x * y).powi(2);
    let (fx, fy) = ode_field(s, p);
    // grad phi = 2 d * (-2 x y^2, -2 x^2 y)
    let lhs = 2.0 * d * (-2.0 * x * y * y) * fx + 2.0 * d * (-2.0 * x * x * y) * fy;
    let rhs = -4.0 * x * y * (y * (1.0 - x) + x * (1.0 - y)) * d * d;
    (lhs, rhs)
}

/// Curve point for coordinate `z = x* - y*`, with `1 - x*` evaluated
/// in conjugate form so the endpoints stay accurate.
pub(crate) fn curve_point_of_z(z: f64, smu: f64) -> (f64, f64, f64, f64) {
    let az = z.abs();
    let sq = (az * az + 4.0 * smu).sqrt();
    let xs = (az + sq) / 2.0;
    // 1 - x* = 2 ((1 - smu) - z) / ((2 - z) + sqrt(z^2 + 4 smu))
    let omxs = 2.0 * ((1.0 - smu) - az) / ((2.0 - az) + sq);
    let ys = xs - az;
    let omys = omxs + az;
    (xs, ys, omxs, omys)
}

/// Drift and variance of the curve-coordinate process `X* - Y*`, evaluated
/// at the curve point with coordinate `z`.
///
/// The drift is half the second-order contraction of the projection map
/// against the diffusion matrix; the variance is the full quadratic
/// variation of `x* - y*`, first-derivative contraction included.
pub fn limit_coeffs(z: f64, p: &WattersonParams) -> Result<(f64, f64)> {
    let half_width = p.curve_halfwidth();
    if !(z.abs() < half_width) {
        return Err(Error::OutOfDomain(format!(
            "curve coordinate |z| = {} at or beyond the absorbing endpoint {half_width}",
            z.abs()
        )));
    }
    let smu = p.sqrt_mu();
    let (xs, ys, omxs, omys) = curve_point_of_z(z, smu);
    let u = omxs / omys;
    let v = 1.0 / u;
    let (gpu, gppu) = (g_prime_raw(u, smu), g_second_raw(u, smu));
    let (gpv, gppv) = (g_prime_raw(v, smu), g_second_raw(v, smu));

    // twice the drift of x* minus twice the drift of y*
    let two_b = gppu * xs * omxs / (omys * omys)
        + gppu * omxs * omxs * ys / (omys * omys * omys)
        + gpu * 2.0 * omxs * ys / (omys * omys)
        - gppv * ys * omys / (omxs * omxs)
        - gppv * omys * omys * xs / (omxs * omxs * omxs)
        - gpv * 2.0 * omys * xs / (omxs * omxs);

    // quadratic variation of h = x* - y*
    let hx = gpu * (-1.0 / omys) - gpv * (omys / (omxs * omxs));
    let hy = gpu * (omxs / (omys * omys)) - gpv * (-1.0 / omxs);
    let variance = xs * omxs * hx * hx + ys * omys * hy * hy;

    // antisymmetry makes the drift vanish identically at the center
    let drift = if z == 0.0 {
        0.0
    } else if z > 0.0 {
        two_b / 2.0
    } else {
        -two_b / 2.0
    };
    Ok((drift, variance))
}

/// The limiting one-dimensional diffusion of `X* - Y*` on
/// `(-(1 - sqrt(mu)), 1 - sqrt(mu))`.
pub fn limit_diffusion(p: &WattersonParams) -> Diffusion1D {
    let pw = *p;
    let w = p.curve_halfwidth();
    Diffusion1D::new(
        -w,
        w,
        move |z| limit_coeffs(z, &pw).map(|(b, _)| b).unwrap_or(0.0),
        move |z| limit_coeffs(z, &pw).map(|(_, a)| a).unwrap_or(0.0),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(mu: f64) -> WattersonParams {
        WattersonParams::new(mu).unwrap()
    }

    #[test]
    fn field_vanishes_on_curve() {
        let p = params(1e-4);
        let x = 0.4;
        let y = p.sqrt_mu() / x;
        let (fx, fy) = ode_field(WState::new(x, y).unwrap(), &p);
        assert!(fx.abs() < 1e-15 && fy.abs() < 1e-15);
    }

    #[test]
    fn field_hand_value() {
        let p = params(1e-4);
        let (fx, fy) = ode_field(WState::new(0.5, 0.5).unwrap(), &p);
        assert!((fx - (-0.0312)).abs() < 1e-12);
        assert!((fy - (-0.0312)).abs() < 1e-12);
    }

    #[test]
    fn field_zero_factor_at_fixed_locus() {
        let p = params(1e-4);
        let (fx, _) = ode_field(WState::new(1.0, 0.3).unwrap(), &p);
        assert_eq!(fx, 0.0);
    }

    #[test]
    fn g_table_values() {
        // endpoints of the flow-ratio table for mu = 1e-4
        assert!((g_eval(0.0, 1e-4).unwrap() - 1.0).abs() < 1e-15);
        assert!((g_eval(1.0, 1e-4).unwrap() - 0.1).abs() < 1e-15);
        // bisection root of (1-y) x*^2 - (x-y) x* - sqrt(mu) (1-x) = 0 at u = 0.2
        assert!((g_eval(0.2, 1e-4).unwrap() - 0.802_492_235_949_962).abs() < 1e-12);
    }

    #[test]
    fn g_rejects_negative() {
        assert!(g_eval(-0.1, 1e-4).is_err());
        assert!(g_prime(-1.0, 1e-4).is_err());
    }

    #[test]
    fn g_derivatives_match_finite_differences() {
        let mu = 1e-4;
        let mut u = 0.01_f64;
        while u <= 100.0 {
            let h = 1e-6 * u.max(1.0);
            let fd1 = (g_eval(u + h, mu).unwrap() - g_eval(u - h, mu).unwrap()) / (2.0 * h);
            let d1 = g_prime(u, mu).unwrap();
            assert!(
                (fd1 - d1).abs() <= 1e-6 * d1.abs().max(1e-12),
                "g' mismatch at u={u}: {d1} vs fd {fd1}"
            );
            let h2 = 2e-4 * u.max(1.0);
            let fd2 = (g_eval(u + h2, mu).unwrap() - 2.0 * g_eval(u, mu).unwrap()
                + g_eval(u - h2, mu).unwrap())
                / (h2 * h2);
            let d2 = g_second(u, mu).unwrap();
            assert!(
                (fd2 - d2).abs() <= 2e-4 * d2.abs().max(1e-10),
                "g'' mismatch at u={u}: {d2} vs fd {fd2}"
            );
            u *= 1.6;
        }
    }

    #[test]
    fn curve_membership_identity() {
        let p = params(1e-4);
        let mut u = 1e-3;
        while u < 1e3 {
            let prod = g_eval(u, p.mu).unwrap() * g_eval(1.0 / u, p.mu).unwrap();
            assert!(
                (prod - p.sqrt_mu()).abs() < 1e-12,
                "g(u) g(1/u) = {prod} at u={u}"
            );
            u *= 2.3;
        }
    }

    #[test]
    fn projection_values() {
        let p = params(1e-4);
        let pt = project(WState::new(0.9, 0.5).unwrap(), &p).unwrap();
        assert!((pt.x_star - 0.802_492).abs() < 1e-6);
        assert!((pt.y_star - 0.012_461).abs() < 1e-6);
        // flow-line ratio preserved
        assert!((((1.0 - pt.y_star) / (1.0 - pt.x_star)) - 5.0).abs() < 1e-10);
        // curve membership
        assert!((pt.x_star * pt.y_star - p.sqrt_mu()).abs() < 1e-12);
    }

    #[test]
    fn projection_idempotent_and_symmetric() {
        let p = params(1e-4);
        let pt = project(WState::new(0.35, 0.35).unwrap(), &p).unwrap();
        let q = 1e-2_f64;
        assert!((pt.x_star - q.sqrt()).abs() < 1e-14); // mu^(1/4)
        assert!((pt.y_star - q.sqrt()).abs() < 1e-14);
        let again = project(WState::new(pt.x_star, pt.y_star).unwrap(), &p).unwrap();
        assert!((again.x_star - pt.x_star).abs() < 1e-12);
        assert!((again.y_star - pt.y_star).abs() < 1e-12);
    }

    #[test]
    fn projection_rejects_corner() {
        let p = params(1e-4);
        assert!(project(WState::new(1.0, 1.0).unwrap(), &p).is_err());
    }

    #[test]
    fn lyapunov_values() {
        let p = params(1e-4);
        let s = WState::new(0.5, 0.5).unwrap();
        let expect = (1e-4_f64 - 0.0625).powi(2);
        assert!((lyapunov_phi(s, &p) - expect).abs() < 1e-18);
        let on_curve = WState::new(0.2, p.sqrt_mu() / 0.2).unwrap();
        assert!(lyapunov_phi(on_curve, &p).abs() < 1e-30);
    }

    #[test]
    fn lyapunov_identity_holds() {
        let p = params(1e-4);
        for &(x, y) in &[(0.3, 0.7), (0.12, 0.45), (0.8, 0.2), (0.55, 0.95)] {
            let (lhs, rhs) = lyapunov_identity(WState::new(x, y).unwrap(), &p);
            assert!(
                (lhs - rhs).abs() <= 1e-10 * rhs.abs().max(1e-300),
                "identity off at ({x},{y}): {lhs} vs {rhs}"
            );
        }
    }

    #[test]
    fn limit_coeffs_match_contraction_oracle() {
        // drift = L h and variance = carre du champ of h(x,y) = x* - y*,
        // via high-order finite differences of the projection map alone
        let p = params(1e-4);
        let smu = p.sqrt_mu();
        let h = |x: f64, y: f64| {
            g_raw((1.0 - x) / (1.0 - y), smu) - g_raw((1.0 - y) / (1.0 - x), smu)
        };
        let d1 = |f: &dyn Fn(f64) -> f64, c: f64, hh: f64| -> f64 {
            (f(c - 2.0 * hh) - 8.0 * f(c - hh) + 8.0 * f(c + hh) - f(c + 2.0 * hh)) / (12.0 * hh)
        };
        let d2 = |f: &dyn Fn(f64) -> f64, c: f64, hh: f64| -> f64 {
            (-f(c - 2.0 * hh) + 16.0 * f(c - hh) - 30.0 * f(c) + 16.0 * f(c + hh)
                - f(c + 2.0 * hh))
                / (12.0 * hh * hh)
        };
        for &z in &[0.1, 0.3, 0.5, 0.8, 0.95] {
            let (b_cf, a_cf) = limit_coeffs(z, &p).unwrap();
            let (xs, ys, _, _) = curve_point_of_z(z, smu);
            let fx = |x: f64| h(x, ys);
            let fy = |y: f64| h(xs, y);
            let step = 1e-3;
            let hx = d1(&fx, xs, step);
            let hy = d1(&fy, ys, step);
            let hxx = d2(&fx, xs, step);
            let hyy = d2(&fy, ys, step);
            let gx = xs * (1.0 - xs);
            let gy = ys * (1.0 - ys);
            let b_fd = 0.5 * (gx * hxx + gy * hyy);
            let a_fd = gx * hx * hx + gy * hy * hy;
            assert!(
                (b_cf - b_fd).abs() <= 1e-6 * b_fd.abs(),
                "drift at z={z}: {b_cf} vs oracle {b_fd}"
            );
            assert!(
                (a_cf - a_fd).abs() <= 1e-6 * a_fd.abs(),
                "variance at z={z}: {a_cf} vs oracle {a_fd}"
            );
        }
    }

    #[test]
    fn limit_coeffs_antisymmetric_drift() {
        let p = params(1e-4);
        let (b0, a0) = limit_coeffs(0.0, &p).unwrap();
        assert_eq!(b0, 0.0);
        assert!(a0 > 0.0);
        let (bp, ap) = limit_coeffs(0.37, &p).unwrap();
        let (bm, am) = limit_coeffs(-0.37, &p).unwrap();
        assert!((bp + bm).abs() < 1e-15);
        assert!((ap - am).abs() < 1e-15);
    }

    #[test]
    fn limit_coeffs_rejects_boundary() {
        let p = params(1e-4);
        assert!(limit_coeffs(0.99, &p).is_err());
        assert!(limit_coeffs(-1.2, &p).is_err());
    }
}
