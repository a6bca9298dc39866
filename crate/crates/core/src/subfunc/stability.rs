//! Linearization at the curve of equilibria and Routh-Hurwitz analysis.
//!
//! Coordinates for the linearization follow the ordering
//! `(x3, y3, x2, x1, y2, y1)`.  On the curve the six-dimensional problem
//! splits into the antisymmetric two-dimensional block `(0,0,u,-u,v,-v)` and
//! a four-dimensional block that carries one zero eigenvalue along the curve
//! plus a 3x3 operator on the transverse directions.

use nalgebra::{Complex, Matrix2, Matrix3, Matrix4, Matrix6};

use super::curve::{point_at, symmetric_point};
use super::{mean_fitness, SEquilibrium, SState, SubfuncParams};
use crate::error::Result;

/// Analytic Jacobian of the six-dimensional field at `state`, in the
/// ordering `(x3, y3, x2, x1, y2, y1)`.
pub fn jacobian6_at_state(state: &SState, p: &SubfuncParams) -> Matrix6<f64> {
    let b = p.b;
    let (x3, x2, x1, y3, y2, y1) = (state.x3, state.x2, state.x1, state.y3, state.y2, state.y1);
    let w = mean_fitness(state);
    let grad_w = [1.0 - y3, 1.0 - x3, y1, y2, x1, x2];
    let alpha = 1.0 - 3.0 * b;

    let mut j = Matrix6::zeros();
    // rows for the full-function frequencies: x3 (alpha - w), y3 (alpha - w)
    for col in 0..6 {
        j[(0, col)] = -x3 * grad_w[col];
        j[(1, col)] = -y3 * grad_w[col];
    }
    j[(0, 0)] += alpha - w;
    j[(1, 1)] += alpha - w;

    // additions beyond -freq * grad w for the single-function rows
    let add = [
        // d x2: [b, x2, y3+y1-w-2b, 0, 0, x2]
        [b, x2, y3 + y1 - w - 2.0 * b, 0.0, 0.0, x2],
        // d x1: [b, x1, 0, y3+y2-w-2b, x1, 0]
        [b, x1, 0.0, y3 + y2 - w - 2.0 * b, x1, 0.0],
        // d y2: [y2, b, 0, y2, x3+x1-w-2b, 0]
        [y2, b, 0.0, y2, x3 + x1 - w - 2.0 * b, 0.0],
        // d y1: [y1, b, y1, 0, 0, x3+x2-w-2b]
        [y1, b, y1, 0.0, 0.0, x3 + x2 - w - 2.0 * b],
    ];
    let freq = [x2, x1, y2, y1];
    for row in 0..4 {
        for col in 0..6 {
            j[(row + 2, col)] = -freq[row] * grad_w[col] + add[row][col];
        }
    }
    j
}

/// Jacobian at a curve point.
pub fn jacobian6(e: &SEquilibrium, p: &SubfuncParams) -> Matrix6<f64> {
    jacobian6_at_state(&e.to_state(), p)
}

/// The restricted linearization on the symmetric subspace, coordinates
/// `(x3, y3, x, y)`.
pub fn reduced4(e: &SEquilibrium, p: &SubfuncParams) -> Matrix4<f64> {
    let b = p.b;
    let (x3, y3, x, y) = (e.x3, e.y3, e.x, e.y);
    Matrix4::new(
        -x3 * (1.0 - y3),
        -x3 * (1.0 - x3),
        -2.0 * x3 * y,
        -2.0 * x3 * x,
        -y3 * (1.0 - y3),
        -y3 * (1.0 - x3),
        -2.0 * y3 * y,
        -2.0 * y3 * x,
        -x * (1.0 - y3) + b,
        -x * (1.0 - x3) + x,
        -2.0 * x * y - b * x3 / x,
        -2.0 * x * x + x,
        -y * (1.0 - y3) + y,
        -y * (1.0 - x3) + b,
        -2.0 * y * y + y,
        -2.0 * x * y - b * y3 / y,
    )
}

/// Change of basis on the symmetric subspace that exposes the along-curve
/// zero eigenvalue; returns `(V, V^{-1})`.
pub fn reduced_basis(e: &SEquilibrium) -> (Matrix4<f64>, Matrix4<f64>) {
    let (x3, y3, x, y) = (e.x3, e.y3, e.x, e.y);
    let v = Matrix4::new(
        x3 / 2.0,
        x3 / 2.0,
        0.0,
        0.0,
        -y3 / 2.0,
        y3 / 2.0,
        0.0,
        0.0,
        x / 2.0,
        x / 2.0,
        1.0,
        0.0,
        -y / 2.0,
        y / 2.0,
        0.0,
        1.0,
    );
    let vinv = Matrix4::new(
        1.0 / x3,
        -1.0 / y3,
        0.0,
        0.0,
        1.0 / x3,
        1.0 / y3,
        0.0,
        0.0,
        -x / x3,
        0.0,
        1.0,
        0.0,
        0.0,
        -y / y3,
        0.0,
        1.0,
    );
    (v, vinv)
}

/// The 2x2 block on `(0,0,u,-u,v,-v)` and the 3x3 transverse operator of the
/// symmetric subspace.
pub fn reduced_matrices(e: &SEquilibrium, p: &SubfuncParams) -> (Matrix2<f64>, Matrix3<f64>) {
    let b = p.b;
    let (x3, y3, x, y) = (e.x3, e.y3, e.x, e.y);
    let m2 = Matrix2::new(-b * x3 / x, -x, -y, -b * y3 / y);
    let m = Matrix3::new(
        -x3 * (1.0 - y3) - y3 * (1.0 - x3) - 4.0 * x * y,
        -4.0 * y,
        -4.0 * x,
        x * (y3 + y) / 2.0,
        -b * x3 / x,
        x,
        y * (x3 + x) / 2.0,
        y,
        -b * y3 / y,
    );
    (m2, m)
}

/// Trace/determinant/second-symmetric-function data of the transverse
/// operator, the three Routh-Hurwitz sign conditions, and the directly
/// computed eigenvalues.
#[derive(Debug, Clone)]
pub struct StabilityReport {
    pub trace: f64,
    pub det: f64,
    pub b2: f64,
    pub eigenvalues: [Complex<f64>; 3],
    /// `trace < 0`, `det < 0`, `det - trace * b2 > 0`
    pub rh_pass: [bool; 3],
}

impl StabilityReport {
    pub fn all_pass(&self) -> bool {
        self.rh_pass.iter().all(|&b| b)
    }

    pub fn max_eigenvalue_real_part(&self) -> f64 {
        self.eigenvalues.iter().map(|c| c.re).fold(f64::MIN, f64::max)
    }
}

pub fn routh_hurwitz(e: &SEquilibrium, p: &SubfuncParams) -> StabilityReport {
    let (_, m) = reduced_matrices(e, p);
    let trace = m.trace();
    let det = m.determinant();
    let b2 = (m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)])
        + (m[(1, 1)] * m[(2, 2)] - m[(1, 2)] * m[(2, 1)])
        + (m[(0, 0)] * m[(2, 2)] - m[(0, 2)] * m[(2, 0)]);
    let eig = m.complex_eigenvalues();
    StabilityReport {
        trace,
        det,
        b2,
        eigenvalues: [eig[0], eig[1], eig[2]],
        rh_pass: [trace < 0.0, det < 0.0, det - trace * b2 > 0.0],
    }
}

/// Numeric verification of the stability inequalities on a curve grid.
#[derive(Debug, Clone)]
pub struct LemmaReport {
    pub grid_size: usize,
    /// min over the grid of `b x3 / x - y` and `b y3 / y - x`
    pub lemma2_min_margin: f64,
    pub lemma2_violations: usize,
    /// min over the grid of `det(M) - b2 trace(M)`
    pub lemma3_min_margin: f64,
    pub lemma3_violations: usize,
    /// `y3 (1 - x3) >= x >= y` on the half with `x3 <= y3`
    pub a1_holds_x3_le_y3: bool,
    pub a1_margin_x3_le_y3: f64,
    /// same inequality on the half with `x3 >= y3`
    pub a1_holds_x3_ge_y3: bool,
    pub a1_margin_x3_ge_y3: f64,
    /// `(y3 (1-x3) - x) / sqrt(b)` at the symmetric point; about 1.27202
    pub symmetric_gap_over_sqrt_b: f64,
}

pub fn verify_lemmas(p: &SubfuncParams, grid_size: usize) -> Result<LemmaReport> {
    let alpha = p.alpha();
    let mut lemma2_min = f64::MAX;
    let mut lemma2_bad = 0usize;
    let mut lemma3_min = f64::MAX;
    let mut lemma3_bad = 0usize;
    let mut le_margin = f64::MAX;
    let mut ge_margin = f64::MAX;

    for k in 1..=grid_size {
        let x3 = alpha * k as f64 / (grid_size as f64 + 1.0);
        let e = point_at(x3, p)?;
        let m2a = p.b * e.x3 / e.x - e.y;
        let m2b = p.b * e.y3 / e.y - e.x;
        let margin2 = m2a.min(m2b);
        lemma2_min = lemma2_min.min(margin2);
        if margin2 <= 0.0 {
            lemma2_bad += 1;
        }
        let rep = routh_hurwitz(&e, p);
        let margin3 = rep.det - rep.b2 * rep.trace;
        lemma3_min = lemma3_min.min(margin3);
        if margin3 <= 0.0 {
            lemma3_bad += 1;
        }
        // ordering-sensitive inequality chain
        let chain = (e.y3 * (1.0 - e.x3) - e.x).min(e.x - e.y);
        if e.x3 <= e.y3 {
            le_margin = le_margin.min(chain);
        } else {
            ge_margin = ge_margin.min(chain);
        }
    }

    let sym = symmetric_point(p)?;
    let gap = (sym.y3 * (1.0 - sym.x3) - sym.x) / p.b.sqrt();

    Ok(LemmaReport {
        grid_size,
        lemma2_min_margin: lemma2_min,
        lemma2_violations: lemma2_bad,
        lemma3_min_margin: lemma3_min,
        lemma3_violations: lemma3_bad,
        a1_holds_x3_le_y3: le_margin > 0.0,
        a1_margin_x3_le_y3: le_margin,
        a1_holds_x3_ge_y3: ge_margin > 0.0,
        a1_margin_x3_ge_y3: ge_margin,
        symmetric_gap_over_sqrt_b: gap,
    })
}
