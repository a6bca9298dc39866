//! Shape-preserving cubic Hermite interpolation (Fritsch-Carlson slopes).
//!
//! Monotone data yields a monotone interpolant, which is what the curve
//! tabulations need for safe inversion.

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct CubicHermite {
    xs: Vec<f64>,
    ys: Vec<f64>,
    slopes: Vec<f64>,
}

impl CubicHermite {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() || xs.len() < 2 {
            return Err(Error::InvalidParameter {
                name: "nodes",
                reason: "need at least two nodes with matching lengths".into(),
            });
        }
        if xs.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidParameter {
                name: "nodes",
                reason: "abscissae must be strictly increasing".into(),
            });
        }
        let n = xs.len();
        let mut delta = vec![0.0; n - 1];
        for i in 0..n - 1 {
            delta[i] = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]);
        }
        let mut slopes = vec![0.0; n];
        slopes[0] = delta[0];
        slopes[n - 1] = delta[n - 2];
        for i in 1..n - 1 {
            if delta[i - 1] * delta[i] <= 0.0 {
                slopes[i] = 0.0;
            } else {
                // harmonic mean weighted by interval widths
                let w1 = 2.0 * (xs[i + 1] - xs[i]) + (xs[i] - xs[i - 1]);
                let w2 = (xs[i + 1] - xs[i]) + 2.0 * (xs[i] - xs[i - 1]);
                slopes[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
            }
        }
        // clamp endpoint slopes to preserve shape
        for (i, d) in [(0usize, delta[0]), (n - 1, delta[n - 2])] {
            if slopes[i] * d <= 0.0 {
                slopes[i] = 0.0;
            } else if slopes[i].abs() > 3.0 * d.abs() {
                slopes[i] = 3.0 * d;
            }
        }
        Ok(Self { xs, ys, slopes })
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.xs[0], self.xs[self.xs.len() - 1])
    }

    fn segment(&self, x: f64) -> usize {
        match self.xs.binary_search_by(|v| v.partial_cmp(&x).unwrap()) {
            Ok(i) => i.min(self.xs.len() - 2),
            Err(i) => i.saturating_sub(1).min(self.xs.len() - 2),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let i = self.segment(x);
        let h = self.xs[i + 1] - self.xs[i];
        let t = (x - self.xs[i]) / h;
        let (y0, y1) = (self.ys[i], self.ys[i + 1]);
        let (m0, m1) = (self.slopes[i] * h, self.slopes[i + 1] * h);
        let t2 = t * t;
        let t3 = t2 * t;
        y0 * (2.0 * t3 - 3.0 * t2 + 1.0)
            + m0 * (t3 - 2.0 * t2 + t)
            + y1 * (-2.0 * t3 + 3.0 * t2)
            + m1 * (t3 - t2)
    }

    /// Invert a strictly monotone interpolant by bisection + Newton polish.
    pub fn invert(&self, y: f64) -> Result<f64> {
        let n = self.xs.len();
        let increasing = self.ys[n - 1] > self.ys[0];
        let (ylo, yhi) = if increasing {
            (self.ys[0], self.ys[n - 1])
        } else {
            (self.ys[n - 1], self.ys[0])
        };
        if !(y >= ylo && y <= yhi) {
            return Err(Error::OutOfDomain(format!(
                "value {y} outside interpolant range [{ylo}, {yhi}]"
            )));
        }
        let (mut lo, mut hi) = self.domain();
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            let v = self.eval(mid);
            if (v > y) == increasing {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }
}

/// Chebyshev-extrema nodes mapped onto `[a, b]`, endpoints included, ascending.
pub fn chebyshev_nodes(a: f64, b: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2);
    (0..n)
        .map(|k| {
            let t = std::f64::consts::PI * k as f64 / (n - 1) as f64;
            a + (b - a) * 0.5 * (1.0 - t.cos())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_nodes_and_stays_monotone() {
        let xs: Vec<f64> = (0..50).map(|i| i as f64 / 49.0).collect();
        let ys: Vec<f64> = xs.iter().map(|&x| (3.0 * x).tanh()).collect();
        let c = CubicHermite::new(xs.clone(), ys.clone()).unwrap();
        for (x, y) in xs.iter().zip(&ys) {
            assert!((c.eval(*x) - y).abs() < 1e-14);
        }
        let mut prev = c.eval(0.0);
        for i in 1..1000 {
            let v = c.eval(i as f64 / 999.0);
            assert!(v >= prev - 1e-13);
            prev = v;
        }
    }

    #[test]
    fn accurate_on_smooth_function() {
        let xs = chebyshev_nodes(0.0, 1.0, 200);
        let ys: Vec<f64> = xs.iter().map(|&x| (2.0 * x).exp()).collect();
        let c = CubicHermite::new(xs, ys).unwrap();
        for i in 0..500 {
            let x = (i as f64 + 0.5) / 500.0;
            let err = (c.eval(x) - (2.0 * x).exp()).abs();
            assert!(err < 1e-5, "err {err} at {x}");
        }
    }

    #[test]
    fn inversion_roundtrip() {
        let xs = chebyshev_nodes(0.0, 2.0, 128);
        let ys: Vec<f64> = xs.iter().map(|&x| x + 0.2 * x * x).collect();
        let c = CubicHermite::new(xs, ys).unwrap();
        for &y in &[0.0, 0.5, 1.7, 2.75] {
            let x = c.invert(y).unwrap();
            assert!((c.eval(x) - y).abs() < 1e-10);
        }
        assert!(c.invert(5.0).is_err());
        assert!(c.invert(-0.1).is_err());
    }

    #[test]
    fn chebyshev_nodes_cluster_at_ends() {
        let nodes = chebyshev_nodes(0.0, 1.0, 11);
        assert_eq!(nodes[0], 0.0);
        assert_eq!(*nodes.last().unwrap(), 1.0);
        assert!(nodes[1] - nodes[0] < nodes[5] - nodes[4]);
    }
}
