//! Limiting one-dimensional diffusion of the curve coordinate `X3* - Y3*`.

use super::curve::EquilibriumCurve;
use super::project::projection_derivs;
use super::SubfuncParams;
use crate::diffusion::Diffusion1D;
use crate::error::{Error, Result};
use crate::interp::{chebyshev_nodes, CubicHermite};

/// Drift and variance of the projected coordinate at curve coordinate `z`.
///
/// The drift is half the second-order contraction of the projection map
/// against the per-locus diffusion matrix; the variance is the quadratic
/// variation of `x3* - y3*`, cross-covariation of the two projected
/// coordinates included.
pub fn limit_coeffs(z: f64, curve: &EquilibriumCurve) -> Result<(f64, f64)> {
    let p = *curve.params();
    let alpha = p.alpha();
    if !(z.abs() < alpha) {
        return Err(Error::OutOfDomain(format!(
            "curve coordinate |z| = {} at or beyond endpoint {alpha}",
            z.abs()
        )));
    }
    let az = z.abs();
    let x3 = curve.x3_at_z(az)?;
    let y3 = x3 - az;
    let r = y3 / x3;
    let d = projection_derivs(r, &p)?;
    let (up, upp) = (d.du_dr, d.d2u_dr2);
    let (vp, vpp) = (d.dv_dq, d.d2v_dq2);
    let gx = x3 * (1.0 - x3);
    let gy = y3 * (1.0 - y3);

    let two_b = (upp * y3 * y3 / x3.powi(4) + up * 2.0 * y3 / x3.powi(3)) * gx
        + upp / (x3 * x3) * gy
        - vpp / (y3 * y3) * gx
        - (vpp * x3 * x3 / y3.powi(4) + vp * 2.0 * x3 / y3.powi(3)) * gy;

    let hx3 = -(up * y3 / (x3 * x3) + vp / y3);
    let hy3 = up / x3 + vp * x3 / (y3 * y3);
    let variance = gx * hx3 * hx3 + gy * hy3 * hy3;

    let drift = if z == 0.0 {
        0.0
    } else if z > 0.0 {
        two_b / 2.0
    } else {
        -two_b / 2.0
    };
    Ok((drift, variance))
}

/// Limiting diffusion with exact (root-finding) coefficient evaluation.
pub fn limit_diffusion_exact(p: &SubfuncParams) -> Result<Diffusion1D> {
    let curve = EquilibriumCurve::new(p)?;
    let curve2 = curve.clone();
    let a = p.alpha();
    Ok(Diffusion1D::new(
        -a,
        a,
        move |z| limit_coeffs(z, &curve).map(|(b, _)| b).unwrap_or(0.0),
        move |z| limit_coeffs(z, &curve2).map(|(_, v)| v).unwrap_or(0.0),
    ))
}

/// Limiting diffusion with tabulated coefficients, cheap enough for
/// path-by-path Monte Carlo.  Drift is odd and variance even in `z`, so the
/// tables cover `[0, 1-3b)` and are reflected.
pub fn limit_diffusion(p: &SubfuncParams) -> Result<Diffusion1D> {
    const NODES: usize = 4096;
    let curve = EquilibriumCurve::new(p)?;
    let alpha = p.alpha();
    let top = alpha * (1.0 - 1e-9);
    let zs = chebyshev_nodes(0.0, top, NODES);
    let mut bs = Vec::with_capacity(NODES);
    let mut vs = Vec::with_capacity(NODES);
    for &z in &zs {
        let (b, a) = limit_coeffs(z, &curve)?;
        bs.push(b);
        vs.push(a);
    }
    let drift_tab = CubicHermite::new(zs.clone(), bs)?;
    let var_tab = CubicHermite::new(zs, vs)?;
    let drift = move |z: f64| {
        let v = drift_tab.eval(z.abs().min(top));
        if z >= 0.0 {
            v
        } else {
            -v
        }
    };
    let variance = move |z: f64| var_tab.eval(z.abs().min(top)).max(0.0);
    Ok(Diffusion1D::new(-alpha, alpha, drift, variance))
}
