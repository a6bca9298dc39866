//! The curve of equilibria and its tabulated parametrization.

use super::coeffs::CoeffTable;
use super::{SEquilibrium, SubfuncParams};
use crate::error::{Error, Result};
use crate::interp::{chebyshev_nodes, CubicHermite};

/// Discriminant of the curve quadratic in the cancellation-free form
/// `4b^2 (1-x3)^2 (1+4x3) + 8b^3 (1-x3)(1-5x3) + 4b^4 (1+x3)^2`.
///
/// The textbook `d1^2 - 4 d0 d2` loses six digits to cancellation; this
/// expansion is algebraically identical.
fn curve_discriminant(x3: f64, b: f64) -> f64 {
    let s = 1.0 - x3;
    4.0 * b * b * s * s * (1.0 + 4.0 * x3)
        + 8.0 * b * b * b * s * (1.0 - 5.0 * x3)
        + 4.0 * b * b * b * b * (1.0 + x3) * (1.0 + x3)
}

/// Solve the curve quadratic for the gene-2 full-function frequency.
///
/// Takes the root that is continuous in `x3` with `y3(0) = 1 - 3b`, in the
/// conjugate form `y3 = -2 d0 / (d1 + sqrt(disc))` which is stable at both
/// endpoints.
pub fn curve_y3_of_x3(x3: f64, p: &SubfuncParams) -> Result<f64> {
    let alpha = p.alpha();
    if !(0.0..=alpha + 1e-12).contains(&x3) {
        return Err(Error::OutOfDomain(format!(
            "x3 = {x3} outside the curve range [0, {alpha}]"
        )));
    }
    let t = CoeffTable::new(p);
    let disc = curve_discriminant(x3, p.b);
    if disc < 0.0 {
        return Err(Error::NegativeDiscriminant { x3, b: p.b });
    }
    Ok(-2.0 * t.d(0, x3) / (t.d(1, x3) + disc.sqrt()))
}

/// `d y3 / d x3` along the curve, by implicit differentiation; the
/// denominator `d1 + 2 d2 y3` collapses to `sqrt(disc)`.
pub fn curve_y3_prime(x3: f64, p: &SubfuncParams) -> Result<f64> {
    let t = CoeffTable::new(p);
    let y3 = curve_y3_of_x3(x3, p)?;
    let num = t.d_prime(0, x3) + t.d_prime(1, x3) * y3 + t.d_prime(2, x3) * y3 * y3;
    Ok(-num / curve_discriminant(x3, p.b).sqrt())
}

/// Single-function frequencies at a curve point `(x3, y3)`.
pub fn curve_xy(x3: f64, y3: f64, p: &SubfuncParams) -> Result<(f64, f64)> {
    let beta = p.beta();
    if (y3 - beta).abs() < 1e-14 || (x3 - beta).abs() < 1e-14 {
        return Err(Error::OutOfDomain(format!(
            "curve denominators vanish: x3 or y3 equals beta = {beta}"
        )));
    }
    let gamma = x3 + y3 - x3 * y3 - p.alpha();
    let x = (gamma - 2.0 * p.b * x3) / (2.0 * (y3 - beta));
    let y = (gamma - 2.0 * p.b * y3) / (2.0 * (x3 - beta));
    Ok((x, y))
}

/// Exact curve point at parameter `x3`.
pub fn point_at(x3: f64, p: &SubfuncParams) -> Result<SEquilibrium> {
    let y3 = curve_y3_of_x3(x3, p)?;
    let (x, y) = curve_xy(x3, y3, p)?;
    Ok(SEquilibrium { x3, y3, x, y })
}

/// The symmetric point `x3 = y3`, by bisection of `y3(t) - t`.
pub fn symmetric_point(p: &SubfuncParams) -> Result<SEquilibrium> {
    let alpha = p.alpha();
    let f = |t: f64| curve_y3_of_x3(t, p).map(|y3| y3 - t);
    let (mut lo, mut hi) = (0.0_f64, alpha);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    point_at(0.5 * (lo + hi), p)
}

/// Tabulated parametrization of the curve with interpolation and inversion
/// of the coordinate `z = x3 - y3`.
#[derive(Debug, Clone)]
pub struct EquilibriumCurve {
    params: SubfuncParams,
    /// `z(x3)` on Chebyshev-spaced nodes over `[0, 1-3b]`
    z_of_x3: CubicHermite,
    /// inverse map `x3(z)`
    x3_of_z: CubicHermite,
}

impl EquilibriumCurve {
    pub const DEFAULT_NODES: usize = 2048;

    pub fn new(p: &SubfuncParams) -> Result<Self> {
        Self::with_nodes(p, Self::DEFAULT_NODES)
    }

    pub fn with_nodes(p: &SubfuncParams, n: usize) -> Result<Self> {
        let alpha = p.alpha();
        let xs = chebyshev_nodes(0.0, alpha, n);
        let mut zs = Vec::with_capacity(n);
        for &x3 in &xs {
            let y3 = curve_y3_of_x3(x3, p)?;
            zs.push(x3 - y3);
        }
        if zs.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidParameter {
                name: "curve",
                reason: "z(x3) not strictly increasing on the node set".into(),
            });
        }
        let z_of_x3 = CubicHermite::new(xs.clone(), zs.clone())?;
        let x3_of_z = CubicHermite::new(zs, xs)?;
        Ok(Self {
            params: *p,
            z_of_x3,
            x3_of_z,
        })
    }

    pub fn params(&self) -> &SubfuncParams {
        &self.params
    }

    /// Curve coordinate range `(-(1-3b), 1-3b)`.
    pub fn z_range(&self) -> (f64, f64) {
        let a = self.params.alpha();
        (-a, a)
    }

    pub fn z_at_x3(&self, x3: f64) -> f64 {
        self.z_of_x3.eval(x3)
    }

    /// Interpolated inverse, polished by Newton on the exact curve relation.
    pub fn x3_at_z(&self, z: f64) -> Result<f64> {
        let alpha = self.params.alpha();
        if !(z.abs() < alpha) {
            return Err(Error::OutOfDomain(format!(
                "curve coordinate |z| = {} at or beyond endpoint {alpha}",
                z.abs()
            )));
        }
        let mut x3 = self.x3_of_z.eval(z).clamp(0.0, alpha);
        // Newton polish on the exact map x3 - y3(x3) = z
        for _ in 0..4 {
            let f0 = x3 - curve_y3_of_x3(x3, &self.params)? - z;
            if f0.abs() < 1e-15 {
                break;
            }
            let deriv = 1.0 - curve_y3_prime(x3, &self.params)?;
            x3 = (x3 - f0 / deriv).clamp(0.0, alpha);
        }
        Ok(x3)
    }

    /// Curve point at coordinate `z`, exact fields at the inverted parameter.
    pub fn point_at_z(&self, z: f64) -> Result<SEquilibrium> {
        point_at(self.x3_at_z(z)?, &self.params)
    }

    /// Samples `(x3, y3, x, y)` on an `n`-point parameter grid.
    pub fn sample(&self, n: usize) -> Result<Vec<SEquilibrium>> {
        let alpha = self.params.alpha();
        (0..n)
            .map(|k| point_at(alpha * k as f64 / (n - 1) as f64, &self.params))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints() {
        for &b in &[1e-4, 1e-3, 1e-2] {
            let p = SubfuncParams::new(b).unwrap();
            let y30 = curve_y3_of_x3(0.0, &p).unwrap();
            assert!(
                (y30 - p.alpha()).abs() < 1e-12,
                "y3(0) = {y30} vs alpha = {}",
                p.alpha()
            );
            let y3a = curve_y3_of_x3(p.alpha(), &p).unwrap();
            assert!(y3a.abs() < 1e-13, "y3(alpha) = {y3a}");
        }
    }

    #[test]
    fn zero_mutation_curve_is_flat() {
        let p = SubfuncParams { b: 0.0 };
        for k in 0..10 {
            let x3 = k as f64 / 10.0;
            let y3 = curve_y3_of_x3(x3, &p).unwrap();
            assert!((y3 - 1.0).abs() < 1e-9, "y3({x3}) = {y3}");
        }
    }

    #[test]
    fn residuals_are_tiny_along_the_curve() {
        for &b in &[1e-4, 1e-3, 1e-2] {
            let p = SubfuncParams::new(b).unwrap();
            for k in 0..=200 {
                let x3 = p.alpha() * k as f64 / 200.0;
                let e = point_at(x3, &p).unwrap();
                let (r17, r18, r19) = e.residuals(&p);
                assert!(r17.abs() <= 1e-10 && r18.abs() <= 1e-10 && r19.abs() <= 1e-10);
                // Gamma = -2xy identity
                assert!((e.gamma(&p) + 2.0 * e.x * e.y).abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn left_endpoint_xy() {
        let p = SubfuncParams::new(1e-3).unwrap();
        let e = point_at(0.0, &p).unwrap();
        assert!(e.x.abs() < 1e-12, "x = {}", e.x);
        let expect = p.b * p.alpha() / p.beta();
        assert!((e.y - expect).abs() < 1e-12, "y = {} vs {}", e.y, expect);
    }

    #[test]
    fn symmetric_point_matches_asymptotics() {
        let p = SubfuncParams::new(1e-3).unwrap();
        let e = symmetric_point(&p).unwrap();
        assert!((e.x3 - e.y3).abs() < 1e-10);
        assert!((e.x - e.y).abs() < 1e-10);
        let u = (2.0 + 5.0_f64.sqrt()).sqrt();
        let asym = 1.0 - u * p.b.sqrt();
        assert!(
            (e.x3 - asym).abs() <= 10.0 * p.b,
            "x3 = {} vs asymptotic {}",
            e.x3,
            asym
        );
        let v = (1.0 + 5.0_f64.sqrt()) / (2.0 * u);
        assert!((e.x - v * p.b.sqrt()).abs() <= 10.0 * p.b);
    }

    #[test]
    fn tabulation_inverts_accurately() {
        let p = SubfuncParams::new(1e-3).unwrap();
        let c = EquilibriumCurve::new(&p).unwrap();
        for k in -9..=9 {
            let z = 0.99 * p.alpha() * k as f64 / 9.0;
            let x3 = c.x3_at_z(z).unwrap();
            let e = point_at(x3, &p).unwrap();
            assert!((e.z() - z).abs() < 1e-11, "roundtrip z {z}: {}", e.z());
        }
        assert!(c.x3_at_z(p.alpha()).is_err());
    }

    #[test]
    fn rejects_out_of_range() {
        let p = SubfuncParams::new(1e-3).unwrap();
        assert!(curve_y3_of_x3(-0.1, &p).is_err());
        assert!(curve_y3_of_x3(0.9999, &p).is_err());
    }
}
