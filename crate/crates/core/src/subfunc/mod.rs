//! The six-dimensional subfunctionalization model.
//!
//! Each gene copy is in one of four states (both functions, one of the two
//! single functions, or null); the state tracks the frequencies of the three
//! functional states at each of the two copies.  With equal regulatory and
//! coding mutation rates `b`, the deterministic system has a curve of
//! equilibria parametrized by the gene-1 full-function frequency, and the
//! ratio of the two full-function frequencies is conserved along solutions,
//! which yields the projection onto the curve.

mod coeffs;
mod curve;
mod limit;
mod project;
mod stability;

pub use coeffs::CoeffTable;
pub use curve::{curve_xy, curve_y3_of_x3, curve_y3_prime, point_at, symmetric_point, EquilibriumCurve};
pub use limit::{limit_coeffs, limit_diffusion, limit_diffusion_exact};
pub use project::{project, project_ratio, projection_derivs, ProjectionDerivs};
pub use stability::{
    jacobian6, reduced4, reduced_basis, reduced_matrices, routh_hurwitz, verify_lemmas,
    LemmaReport, StabilityReport,
};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubfuncParams {
    /// Common regulatory/coding mutation rate per unit time.
    pub b: f64,
}

impl SubfuncParams {
    pub fn new(b: f64) -> Result<Self> {
        if !(b > 0.0 && b < 1.0 / 3.0) {
            return Err(Error::InvalidParameter {
                name: "b",
                reason: format!("need 0 < b < 1/3, got {b}"),
            });
        }
        Ok(Self { b })
    }

    /// `1 - 3b`, the on-curve mean fitness and the curve's parameter range.
    pub fn alpha(&self) -> f64 {
        1.0 - 3.0 * self.b
    }

    /// `1 - b`.
    pub fn beta(&self) -> f64 {
        1.0 - self.b
    }
}

/// Frequencies of the three functional states at each copy.
///
/// `x3` carries both functions, `x2` function 1 only, `x1` function 2 only;
/// the null frequency `x0 = 1 - x3 - x2 - x1` is implied. Same for `y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SState {
    pub x3: f64,
    pub x2: f64,
    pub x1: f64,
    pub y3: f64,
    pub y2: f64,
    pub y1: f64,
}

impl SState {
    pub fn new(x3: f64, x2: f64, x1: f64, y3: f64, y2: f64, y1: f64) -> Result<Self> {
        let s = Self {
            x3,
            x2,
            x1,
            y3,
            y2,
            y1,
        };
        let fields = [x3, x2, x1, y3, y2, y1];
        if fields.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::OutOfDomain(format!("frequencies outside [0,1]: {s:?}")));
        }
        if s.x0() < -1e-12 || s.y0() < -1e-12 {
            return Err(Error::OutOfDomain(format!(
                "functional frequencies exceed 1: {s:?}"
            )));
        }
        Ok(s)
    }

    pub fn x0(&self) -> f64 {
        1.0 - self.x3 - self.x2 - self.x1
    }

    pub fn y0(&self) -> f64 {
        1.0 - self.y3 - self.y2 - self.y1
    }

    pub fn as_array(&self) -> [f64; 6] {
        [self.x3, self.x2, self.x1, self.y3, self.y2, self.y1]
    }

    pub fn from_array(a: [f64; 6]) -> Self {
        Self {
            x3: a[0],
            x2: a[1],
            x1: a[2],
            y3: a[3],
            y2: a[4],
            y1: a[5],
        }
    }

    /// Swap gene labels: `(x3,x2,x1) <-> (y3,y1,y2)`.
    ///
    /// Function-1-only at one copy pairs with function-2-only at the other,
    /// so the single-function indices swap roles.
    pub fn gene_swapped(&self) -> Self {
        Self {
            x3: self.y3,
            x2: self.y1,
            x1: self.y2,
            y3: self.x3,
            y2: self.x1,
            y1: self.x2,
        }
    }
}

/// A point on the curve of equilibria; there `x2 = x1 = x` and `y2 = y1 = y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SEquilibrium {
    pub x3: f64,
    pub y3: f64,
    pub x: f64,
    pub y: f64,
}

impl SEquilibrium {
    /// `Gamma = x3 + y3 - x3 y3 - alpha`, which equals `-2xy` on the curve.
    pub fn gamma(&self, p: &SubfuncParams) -> f64 {
        self.x3 + self.y3 - self.x3 * self.y3 - p.alpha()
    }

    /// Coordinate along the curve, `z = x3 - y3`.
    pub fn z(&self) -> f64 {
        self.x3 - self.y3
    }

    pub fn to_state(self) -> SState {
        SState {
            x3: self.x3,
            x2: self.x,
            x1: self.x,
            y3: self.y3,
            y2: self.y,
            y1: self.y,
        }
    }

    /// Residuals of the three fixed-point equations.
    pub fn residuals(&self, p: &SubfuncParams) -> (f64, f64, f64) {
        let (a, bt) = (p.alpha(), p.beta());
        let b = p.b;
        let w_minus_alpha = self.x3 + self.y3 - self.x3 * self.y3 + 2.0 * self.x * self.y - a;
        let r18 = self.x * (self.y3 - bt) + self.x * self.y + b * self.x3;
        let r19 = self.y * (self.x3 - bt) + self.x * self.y + b * self.y3;
        (w_minus_alpha, r18, r19)
    }
}

/// Mean fitness: the probability a random-union offspring is viable.
pub fn mean_fitness(s: &SState) -> f64 {
    s.x3 + s.y3 - s.x3 * s.y3 + s.x1 * s.y2 + s.x2 * s.y1
}

/// Right-hand side of the deterministic dynamics, in state order
/// `(x3, x2, x1, y3, y2, y1)`.
pub fn ode_field(s: &SState, p: &SubfuncParams) -> [f64; 6] {
    let b = p.b;
    let w = mean_fitness(s);
    [
        -s.x3 * w + s.x3 - 3.0 * b * s.x3,
        -s.x2 * w + s.x2 * (s.y3 + s.y1) + b * s.x3 - 2.0 * b * s.x2,
        -s.x1 * w + s.x1 * (s.y3 + s.y2) + b * s.x3 - 2.0 * b * s.x1,
        -s.y3 * w + s.y3 - 3.0 * b * s.y3,
        -s.y2 * w + s.y2 * (s.x3 + s.x1) + b * s.y3 - 2.0 * b * s.y2,
        -s.y1 * w + s.y1 * (s.x3 + s.x2) + b * s.y3 - 2.0 * b * s.y1,
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fitness_trivials() {
        let fixed = SState::new(1.0, 0.0, 0.0, 0.0, 0.0, 0.0).unwrap();
        assert_eq!(mean_fitness(&fixed), 1.0);
        let subf = SState::new(0.0, 1.0, 0.0, 0.0, 0.0, 1.0).unwrap();
        assert_eq!(mean_fitness(&subf), 1.0);
        let half = SState::new(0.5, 0.0, 0.0, 0.5, 0.0, 0.0).unwrap();
        assert_eq!(mean_fitness(&half), 0.75);
    }

    #[test]
    fn field_vanishes_at_curve_points() {
        let p = SubfuncParams::new(1e-3).unwrap();
        for x3 in [0.1, 0.45, 0.8, 0.95] {
            let y3 = curve_y3_of_x3(x3, &p).unwrap();
            let (x, y) = curve_xy(x3, y3, &p).unwrap();
            let e = SEquilibrium { x3, y3, x, y };
            let f = ode_field(&e.to_state(), &p);
            for (i, v) in f.iter().enumerate() {
                assert!(v.abs() < 1e-12, "component {i} = {v} at x3={x3}");
            }
        }
    }

    #[test]
    fn ratio_is_conserved_infinitesimally() {
        // d/dt (y3/x3) = 0 along the field
        let p = SubfuncParams::new(2e-3).unwrap();
        let s = SState::new(0.4, 0.1, 0.05, 0.3, 0.12, 0.07).unwrap();
        let f = ode_field(&s, &p);
        let ddt_ratio = f[3] / s.x3 - s.y3 * f[0] / (s.x3 * s.x3);
        assert!(ddt_ratio.abs() < 1e-15);
    }

    #[test]
    fn gene_swap_commutes_with_field() {
        let p = SubfuncParams::new(1e-3).unwrap();
        let s = SState::new(0.4, 0.1, 0.05, 0.3, 0.12, 0.07).unwrap();
        let f = ode_field(&s, &p);
        let fs = ode_field(&s.gene_swapped(), &p);
        // swapped field = swap of field: (x3,x2,x1,y3,y2,y1) -> (y3,y1,y2,x3,x1,x2)
        let expect = [f[3], f[5], f[4], f[0], f[2], f[1]];
        for i in 0..6 {
            assert!((fs[i] - expect[i]).abs() < 1e-15);
        }
    }

    #[test]
    fn state_validation() {
        assert!(SState::new(0.5, 0.4, 0.3, 0.1, 0.1, 0.1).is_err()); // x-sum > 1
        assert!(SState::new(-0.1, 0.0, 0.0, 0.1, 0.1, 0.1).is_err());
    }
}
