//! Projection onto the curve of equilibria along conserved-ratio rays.

use super::coeffs::CoeffTable;
use super::curve::{curve_xy, curve_y3_of_x3};
use super::{SEquilibrium, SState, SubfuncParams};
use crate::error::{Error, Result};

/// Equilibrium with the same full-function ratio `y3/x3` as `s`.
///
/// Solves `(r u)^2 d2(u) + (r u) d1(u) + d0(u) = 0` for `u = x3*` by
/// bisection on the curve branch, then Newton-polishes on the quartic.
pub fn project(s: &SState, p: &SubfuncParams) -> Result<SEquilibrium> {
    if !(s.x3 > 0.0 && s.y3 > 0.0) {
        return Err(Error::OutOfDomain(format!(
            "projection needs x3 > 0 and y3 > 0, got ({}, {})",
            s.x3, s.y3
        )));
    }
    let r = s.y3 / s.x3;
    let u = solve_u(r, p)?;
    let y3 = r * u;
    let (x, y) = curve_xy(u, y3, p)?;
    Ok(SEquilibrium { x3: u, y3, x, y })
}

/// Curve parameter `x3*` whose point has full-function ratio `r = y3/x3`.
pub fn project_ratio(r: f64, p: &SubfuncParams) -> Result<f64> {
    solve_u(r, p)
}

/// Root of the quartic on the same branch as `curve_y3_of_x3`.
pub(super) fn solve_u(r: f64, p: &SubfuncParams) -> Result<f64> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::OutOfDomain(format!("ratio r = {r} must be positive")));
    }
    let alpha = p.alpha();
    let t = CoeffTable::new(p);
    // bracket via the monotone crossing of y3(u) - r u
    let (mut lo, mut hi) = (0.0_f64, alpha);
    for _ in 0..64 {
        let mid = 0.5 * (lo + hi);
        if curve_y3_of_x3(mid, p)? - r * mid > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut u = 0.5 * (lo + hi);
    // Newton on F(u) = d0(u) + (r u) d1(u) + (r u)^2 d2(u); F' = e0 + r e1 + r^2 e2
    for _ in 0..8 {
        let f = t.d(0, u) + r * u * t.d(1, u) + (r * u) * (r * u) * t.d(2, u);
        let fp = t.e(0, u) + r * t.e(1, u) + r * r * t.e(2, u);
        if fp == 0.0 {
            break;
        }
        let step = f / fp;
        u = (u - step).clamp(0.0, alpha);
        if step.abs() < 1e-15 {
            break;
        }
    }
    Ok(u)
}

/// Closed-form derivatives of the projection parameter along the curve.
#[derive(Debug, Clone, Copy)]
pub struct ProjectionDerivs {
    /// `u(r) = x3*` and its first two derivatives in the ratio `r = y3/x3`.
    pub u: f64,
    pub du_dr: f64,
    pub d2u_dr2: f64,
    /// `v(q) = y3*` and derivatives in `q = x3/y3 = 1/r`.
    pub v: f64,
    pub dv_dq: f64,
    pub d2v_dq2: f64,
}

/// First and second derivatives of both projection parameters at ratio `r`.
///
/// The symmetric coefficient matrix makes `v(.)` the same scalar function as
/// `u(.)`, evaluated at the reciprocal ratio.
pub fn projection_derivs(r: f64, p: &SubfuncParams) -> Result<ProjectionDerivs> {
    let (u, du_dr, d2u_dr2) = derivs_at(r, p)?;
    let (v, dv_dq, d2v_dq2) = derivs_at(1.0 / r, p)?;
    Ok(ProjectionDerivs {
        u,
        du_dr,
        d2u_dr2,
        v,
        dv_dq,
        d2v_dq2,
    })
}

fn derivs_at(r: f64, p: &SubfuncParams) -> Result<(f64, f64, f64)> {
    let t = CoeffTable::new(p);
    let u = solve_u(r, p)?;
    let (d1, d2) = (t.d(1, u), t.d(2, u));
    let (e0, e1, e2) = (t.e(0, u), t.e(1, u), t.e(2, u));
    let denom = r * r * e2 + r * e1 + e0;
    if denom.abs() < 1e-300 {
        return Err(Error::SingularProjection { r });
    }
    let f = 2.0 * r * u * u * d2 + u * d1;
    let du = -f / denom;
    // quotient rule for u'' with f'(r), g'(r) as total derivatives
    let fp = 2.0 * u * u * d2 + (2.0 * r * e2 + e1) * du;
    let (ep0, ep1, ep2) = (t.e_prime(0, u), t.e_prime(1, u), t.e_prime(2, u));
    let gp = 2.0 * r * e2 + e1 + (r * r * ep2 + r * ep1 + ep0) * du;
    let d2u = -(fp * denom - f * gp) / (denom * denom);
    Ok((u, du, d2u))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subfunc::curve::{point_at, symmetric_point};

    #[test]
    fn idempotent_on_curve_points() {
        let p = SubfuncParams::new(1e-3).unwrap();
        for x3 in [0.05, 0.3, 0.7, 0.95] {
            let e = point_at(x3, &p).unwrap();
            let back = project(&e.to_state(), &p).unwrap();
            assert!((back.x3 - e.x3).abs() < 1e-10);
            assert!((back.y3 - e.y3).abs() < 1e-10);
            assert!((back.x - e.x).abs() < 1e-10);
            assert!((back.y - e.y).abs() < 1e-10);
        }
    }

    #[test]
    fn unit_ratio_gives_symmetric_point() {
        let p = SubfuncParams::new(1e-3).unwrap();
        let s = SState::new(0.5, 0.1, 0.1, 0.5, 0.1, 0.1).unwrap();
        let e = project(&s, &p).unwrap();
        let sym = symmetric_point(&p).unwrap();
        assert!((e.x3 - sym.x3).abs() < 1e-10);
        // numerically x3 ~ 0.9358 for b = 1e-3
        assert!((e.x3 - 0.935_801_290_39).abs() < 1e-9);
    }

    #[test]
    fn small_ratio_approaches_endpoint() {
        let p = SubfuncParams::new(1e-3).unwrap();
        let u = solve_u(1e-6, &p).unwrap();
        assert!((u - p.alpha()).abs() < 1e-3);
    }

    #[test]
    fn rejects_degenerate_ratio() {
        let p = SubfuncParams::new(1e-3).unwrap();
        let s = SState::new(0.0, 0.5, 0.1, 0.5, 0.1, 0.1).unwrap();
        assert!(project(&s, &p).is_err());
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let p = SubfuncParams::new(1e-3).unwrap();
        let mut r = 0.05_f64;
        while r < 20.0 {
            let d = projection_derivs(r, &p).unwrap();
            let h = 1e-5 * r.max(1.0);
            let up = solve_u(r + h, &p).unwrap();
            let um = solve_u(r - h, &p).unwrap();
            let fd1 = (up - um) / (2.0 * h);
            assert!(
                (d.du_dr - fd1).abs() <= 1e-6 * fd1.abs().max(1e-9),
                "du/dr at r={r}: {} vs fd {fd1}",
                d.du_dr
            );
            // fourth-order five-point second difference
            let h2 = 1e-3 * r.max(1.0);
            let f = |rr: f64| solve_u(rr, &p).unwrap();
            let fd2 = (-f(r - 2.0 * h2) + 16.0 * f(r - h2) - 30.0 * f(r)
                + 16.0 * f(r + h2)
                - f(r + 2.0 * h2))
                / (12.0 * h2 * h2);
            assert!(
                (d.d2u_dr2 - fd2).abs() <= 1e-4 * fd2.abs().max(1e-6),
                "d2u/dr2 at r={r}: {} vs fd {fd2}",
                d.d2u_dr2
            );
            r *= 2.1;
        }
    }

    #[test]
    fn reciprocal_symmetry() {
        // u computed at r equals v computed at q = 1/r
        let p = SubfuncParams::new(2e-3).unwrap();
        for &r in &[0.2, 0.9, 1.7, 6.0] {
            let d = projection_derivs(r, &p).unwrap();
            let dq = projection_derivs(1.0 / r, &p).unwrap();
            assert!((d.u - dq.v).abs() < 1e-10);
            assert!((d.du_dr - dq.dv_dq).abs() < 1e-10);
            assert!((d.d2u_dr2 - dq.d2v_dq2).abs() < 1e-10);
        }
    }

    #[test]
    fn projected_state_ratio_is_preserved() {
        let p = SubfuncParams::new(1e-3).unwrap();
        let s = SState::new(0.42, 0.05, 0.03, 0.21, 0.04, 0.02).unwrap();
        let e = project(&s, &p).unwrap();
        assert!(((e.y3 / e.x3) - (s.y3 / s.x3)).abs() < 1e-10);
        let (r17, r18, r19) = e.residuals(&p);
        assert!(r17.abs() < 1e-10 && r18.abs() < 1e-10 && r19.abs() < 1e-10);
    }
}
