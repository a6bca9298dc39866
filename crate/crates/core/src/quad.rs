//! Adaptive Gauss-Kronrod quadrature on finite intervals.
//!
//! A 15-point Kronrod rule with the embedded 7-point Gauss rule supplies the
//! local error estimate; intervals are bisected until the estimate meets the
//! requested tolerance.

use crate::error::{Error, Result};

/// Kronrod abscissae for the 15-point rule (positive half).
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];

/// Gauss weights for the embedded 7-point rule.
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Kronrod weights for the 15-point rule.
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// One 15-point Kronrod panel; returns (integral, error estimate).
pub fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_gauss = fc * WG[3];
    let mut res_kronrod = fc * WGK[7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        let fsum = f1 + f2;
        if j % 2 != 0 {
            res_gauss += WG[j / 2] * fsum;
        }
        res_kronrod += WGK[j] * fsum;
    }
    let integral = res_kronrod * half;
    let err = ((res_kronrod - res_gauss) * half).abs();
    (integral, err)
}

/// Adaptive integration of `f` over `[a, b]`.
///
/// Bisects until every panel satisfies the mixed tolerance
/// `abs_tol + rel_tol * |whole|`, up to `max_depth` levels.
pub fn integrate<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<f64> {
    const MAX_DEPTH: u32 = 48;
    let (whole, err) = kronrod15(f, a, b);
    let mut total = 0.0;
    let mut stack: Vec<(f64, f64, f64, f64, u32)> = vec![(a, b, whole, err, 0)];
    let scale = whole.abs().max(1e-300);
    while let Some((lo, hi, val, err, depth)) = stack.pop() {
        let tol = (abs_tol + rel_tol * scale) * (hi - lo).abs() / (b - a).abs();
        if err <= tol || depth >= MAX_DEPTH {
            if depth >= MAX_DEPTH && err > tol * 16.0 {
                return Err(Error::QuadratureFailure {
                    location: 0.5 * (lo + hi),
                    reason: format!("panel error {err:.3e} above tolerance after max refinement"),
                });
            }
            total += val;
            continue;
        }
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = kronrod15(f, lo, mid);
        let (v2, e2) = kronrod15(f, mid, hi);
        stack.push((lo, mid, v1, e1, depth + 1));
        stack.push((mid, hi, v2, e2, depth + 1));
    }
    if !total.is_finite() {
        return Err(Error::QuadratureFailure {
            location: 0.5 * (a + b),
            reason: "non-finite integral".into(),
        });
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        // Kronrod-15 is exact for polynomials well past degree 7.
        let f = |x: f64| 3.0 * x * x;
        let (v, _) = kronrod15(&f, 0.0, 2.0);
        assert!((v - 8.0).abs() < 1e-13);
    }

    #[test]
    fn adaptive_handles_peak() {
        // integral of 1/sqrt(x) over (0,1] = 2, steep at the origin
        let f = |x: f64| 1.0 / x.sqrt();
        let v = integrate(&f, 1e-12, 1.0, 1e-10, 1e-10).unwrap();
        assert!((v - (2.0 - 2e-6)).abs() < 1e-5, "got {v}");
    }

    #[test]
    fn oscillatory() {
        let f = |x: f64| (10.0 * x).sin();
        let v = integrate(&f, 0.0, 3.0, 1e-12, 1e-12).unwrap();
        let exact = (1.0 - (30.0f64).cos()) / 10.0;
        assert!((v - exact).abs() < 1e-10);
    }
}
