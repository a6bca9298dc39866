//! Polynomial coefficients of the curve-of-equilibria quadratic.
//!
//! Substituting the on-curve solution for `(x, y)` into the fixed-point
//! equations collapses them to `sum_{i,j} c_ij x3^i y3^j = 0` with a
//! symmetric coefficient matrix.  For fixed `x3` this is the quadratic
//! `d0 + d1 y3 + d2 y3^2 = 0` with `d_j(t) = sum_i c_ij t^i`.

use super::SubfuncParams;

#[derive(Debug, Clone)]
pub struct CoeffTable {
    /// `c[i][j]`, rows/columns in degree order 0, 1, 2.
    pub c: [[f64; 3]; 3],
    alpha: f64,
    two_b_one_plus_b: f64,
}

impl CoeffTable {
    pub fn new(p: &SubfuncParams) -> Self {
        let b = p.b;
        // c00 from the factored form alpha (alpha - 2 beta^2); its cubic term
        // is 6 b^3 (one widely copied expansion drops the factor 6, which
        // pushes the endpoint of the curve off the quadratic by O(b^3)).
        let c00 = -1.0 + 4.0 * b - 5.0 * b * b + 6.0 * b * b * b;
        let c01 = 2.0 - 4.0 * b + 2.0 * b * b;
        let c11 = -4.0 + 4.0 * b + 2.0 * b * b;
        Self {
            c: [
                [c00, c01, -1.0],
                [c01, c11, 2.0],
                [-1.0, 2.0, -1.0],
            ],
            alpha: 1.0 - 3.0 * b,
            two_b_one_plus_b: 2.0 * b * (1.0 + b),
        }
    }

    /// `d_j(t) = c0j + c1j t + c2j t^2`.
    ///
    /// `d0` is evaluated in the factored form `-(alpha-t)(alpha-t+2b(1+b))`,
    /// which keeps full relative accuracy near its root at `t = alpha`; the
    /// monomial sum loses every digit there.
    #[inline]
    pub fn d(&self, j: usize, t: f64) -> f64 {
        if j == 0 {
            let gap = self.alpha - t;
            return -gap * (gap + self.two_b_one_plus_b);
        }
        self.c[0][j] + self.c[1][j] * t + self.c[2][j] * t * t
    }

    #[inline]
    pub fn d_prime(&self, j: usize, t: f64) -> f64 {
        self.c[1][j] + 2.0 * self.c[2][j] * t
    }

    #[inline]
    pub fn d_second(&self, j: usize) -> f64 {
        2.0 * self.c[2][j]
    }

    /// `e_j(t) = d/dt (t^j d_j(t))`.
    #[inline]
    pub fn e(&self, j: usize, t: f64) -> f64 {
        match j {
            0 => self.d_prime(0, t),
            1 => self.d(1, t) + t * self.d_prime(1, t),
            2 => 2.0 * t * self.d(2, t) + t * t * self.d_prime(2, t),
            _ => unreachable!(),
        }
    }

    /// `e_j'(t)`.
    #[inline]
    pub fn e_prime(&self, j: usize, t: f64) -> f64 {
        match j {
            0 => self.d_second(0),
            1 => 2.0 * self.d_prime(1, t) + t * self.d_second(1),
            2 => 2.0 * self.d(2, t) + 4.0 * t * self.d_prime(2, t) + t * t * self.d_second(2),
            _ => unreachable!(),
        }
    }
}
