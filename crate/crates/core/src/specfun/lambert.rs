//! Lambert W on the branch continuously connected to the real W₋₁ on
//! (−1/e, 0): asymptotic / branch-point-series initialization followed by
//! Halley iteration on w·eʷ − z.
//!
//! For real z < −1/e the two continuations are complex conjugates; this
//! implementation returns the Im(w) ≤ 0 root. Callers that only need the
//! real part (crossover constants) are insensitive to that choice.

use crate::error::{CoreError, Result};
use num_complex::Complex64;
use std::f64::consts::E;

const MAX_ITER: usize = 80;
const RESIDUAL_TOL: f64 = 1e-13;

/// W₋₁(z): solves w·eʷ = z with residual ≤ 1e−12·|z|.
pub fn lambert_w_minus1(z: Complex64) -> Result<Complex64> {
    if z.norm() == 0.0 {
        return Err(CoreError::InvalidParams(
            "Lambert W branch -1 is singular at z = 0".into(),
        ));
    }
    if z.im == 0.0 && (z.re + 1.0 / E).abs() < 1e-14 {
        return Ok(Complex64::new(-1.0, 0.0));
    }
    let w0 = initial_guess(z);
    halley(z, w0)
}

fn initial_guess(z: Complex64) -> Complex64 {
    if z.im == 0.0 && z.re >= -1.0 / E && z.re < 0.0 {
        // real branch: W₋₁ real ≤ −1
        let x = z.re;
        let p = (2.0 * (E * x + 1.0)).max(0.0).sqrt();
        if p < 0.7 {
            Complex64::new(-1.0 - p - p * p / 3.0, 0.0)
        } else {
            // log-log start, valid up to z → 0⁻
            let l1 = (-x).ln();
            Complex64::new(l1 - (-l1).ln(), 0.0)
        }
    } else if (E * z + 1.0).norm() < 0.8 {
        // branch-point series in p = −sqrt(2(ez + 1)); the sign picks the
        // Im ≤ 0 continuation for real z below −1/e
        let p = -(2.0 * (E * z + 1.0)).sqrt();
        -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p
    } else {
        // asymptotic form on the k = −1 sheet
        let l = z.ln() - Complex64::new(0.0, 2.0 * std::f64::consts::PI);
        l - l.ln()
    }
}

fn halley(z: Complex64, mut w: Complex64) -> Result<Complex64> {
    for _ in 0..MAX_ITER {
        let ew = w.exp();
        let f = w * ew - z;
        if f.norm() <= RESIDUAL_TOL * z.norm() {
            return Ok(w);
        }
        let wp1 = w + 1.0;
        let denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        if denom.norm() == 0.0 {
            break;
        }
        w -= f / denom;
    }
    let residual = (w * w.exp() - z).norm();
    if residual <= 1e-12 * z.norm() {
        Ok(w)
    } else {
        Err(CoreError::LambertNoConvergence { last: w, residual })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn branch_point_value() {
        let w = lambert_w_minus1(Complex64::new(-1.0 / E, 0.0)).unwrap();
        assert_relative_eq!(w.re, -1.0, max_relative = 1e-12);
        assert_eq!(w.im, 0.0);
    }

    #[test]
    fn real_branch_reference_value() {
        // root of w·e^w = −0.1 on the real branch below −1
        let w = lambert_w_minus1(Complex64::new(-0.1, 0.0)).unwrap();
        assert_relative_eq!(w.re, -3.577152063957297, max_relative = 1e-11);
        assert_eq!(w.im, 0.0);
    }

    #[test]
    fn real_branch_stays_real_and_below_minus_one() {
        for &x in &[-0.367, -0.3, -0.2, -0.05, -1e-3, -1e-8] {
            let w = lambert_w_minus1(Complex64::new(x, 0.0)).unwrap();
            assert_eq!(w.im, 0.0, "x = {x}");
            assert!(w.re <= -1.0, "x = {x}, w = {w}");
        }
    }

    #[test]
    fn crossover_constant_argument() {
        // real part feeding the scaled crossover time ≈ 0.152
        let w = lambert_w_minus1(Complex64::new(-PI / 8.0, 0.0)).unwrap();
        let scaled = -w.re / (2.0 * PI);
        assert!((scaled - 0.152).abs() < 1e-3, "scaled = {scaled}");
        assert!(w.im <= 0.0);
        let residual = (w * w.exp() - Complex64::new(-PI / 8.0, 0.0)).norm();
        assert!(residual <= 1e-12 * (PI / 8.0));
    }

    #[test]
    fn continuity_through_branch_point() {
        // approach −1/e from both sides along the real axis
        let below = lambert_w_minus1(Complex64::new(-1.0 / E - 1e-6, 0.0)).unwrap();
        let above = lambert_w_minus1(Complex64::new(-1.0 / E + 1e-6, 0.0)).unwrap();
        assert!((below - above).norm() < 1e-2);
    }

    #[test]
    fn zero_rejected() {
        assert!(lambert_w_minus1(Complex64::new(0.0, 0.0)).is_err());
    }

    proptest! {
        // defining equation holds for all returned values over the annulus
        #[test]
        fn residual_over_annulus(r in 0.01f64..10.0, angle in 0.0f64..(2.0 * PI)) {
            let z = Complex64::from_polar(r, angle);
            let w = lambert_w_minus1(z).unwrap();
            prop_assert!((w * w.exp() - z).norm() <= 1e-12 * z.norm());
        }
    }
}
