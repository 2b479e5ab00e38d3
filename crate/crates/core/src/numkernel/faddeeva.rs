//! Faddeeva function and complex error functions.
//!
//! `w(z)` is evaluated by three regimes on the closed upper half-plane:
//! a Maclaurin series for `|z| <= 3`, a pole-corrected midpoint rule on the
//! band near the real axis, and a backward-evaluated continued fraction far
//! from it.  The lower half-plane goes through `w(z) = 2 e^{-z²} - w(-z)`,
//! which is where genuine overflow can occur.

use super::{cexp, Complex64, NumError, NumResult};

const SQRT_PI: f64 = 1.7724538509055160273;
/// Crossover radius between the series and the band/fraction regimes.
const SERIES_RADIUS: f64 = 3.0;
/// Step of the midpoint-rule grid; truncation error is O(e^{-pi²/h²}).
const BAND_H: f64 = 0.45;
/// Above this imaginary part the continued fraction is at machine precision.
const BAND_Y_MAX: f64 = 4.0;

/// Faddeeva function `w(z) = e^{-z²} erfc(-iz)`.
///
/// Accurate to at least 12 significant digits for `|z| <= 10`; degrades
/// gracefully beyond.  Overflows (possible only for `Im z < 0`) are errors.
pub fn faddeeva(z: Complex64) -> NumResult<Complex64> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(NumError::Invalid("non-finite argument to faddeeva"));
    }
    if z.im >= 0.0 {
        Ok(w_upper(z))
    } else {
        // w(z) = 2 e^{-z²} - w(-z), with -z in the upper half-plane.
        let e = cexp(-z * z).map_err(|_| NumError::Overflow("faddeeva reflection"))?;
        let r = 2.0 * e - w_upper(-z);
        if !r.re.is_finite() || !r.im.is_finite() {
            return Err(NumError::Overflow("faddeeva reflection"));
        }
        Ok(r)
    }
}

/// `w(z)` for `Im z >= 0` (no overflow possible: `|w| <= 1` up to a modest factor).
fn w_upper(z: Complex64) -> Complex64 {
    let r2 = z.re * z.re + z.im * z.im;
    // The series cancels about e^{y²-x²}; keep it where that factor is O(1).
    if r2 <= SERIES_RADIUS * SERIES_RADIUS && z.im * z.im - z.re * z.re <= 2.0 {
        w_series(z)
    } else if z.im <= BAND_Y_MAX {
        w_band(z)
    } else {
        w_contfrac(z)
    }
}

/// Maclaurin series: `w(z) = e^{-z²} + iz Σ_m (-z²)^m / Γ(m + 3/2)`.
fn w_series(z: Complex64) -> Complex64 {
    let u = -z * z;
    // Even part sums to exp(-z²) exactly.
    let even = u.exp();
    let mut term = Complex64::new(2.0 / SQRT_PI, 0.0); // 1/Γ(3/2)
    let mut sum = term;
    let mut m = 0usize;
    while m < 200 {
        term *= u / (m as f64 + 1.5);
        sum += term;
        if term.norm_sqr() < 1e-34 * sum.norm_sqr() {
            break;
        }
        m += 1;
    }
    even + Complex64::i() * z * sum
}

/// Pole-corrected midpoint/trapezoid rule for the band `|z| > 3`, `0 <= Im z <= 4`.
///
/// Two interlocking grids (integer and half-integer multiples of `h`); the one
/// whose nodes are farther from `Re z` is used, so the pole-correction
/// denominator is never small.
fn w_band(z: Complex64) -> Complex64 {
    let h = BAND_H;
    let xh = z.re / h;
    let frac = xh - xh.floor();
    let dist_int = frac.min(1.0 - frac);
    let dist_half = (frac - 0.5).abs();

    // offset = 0 puts nodes at k h (correction denominator 1 - e^{-2πiz/h});
    // offset = 1/2 puts them at (k+1/2) h (denominator 1 + e^{-2πiz/h}).
    let use_int_grid = dist_int >= dist_half;

    let mut sum = Complex64::new(0.0, 0.0);
    if use_int_grid {
        sum += 1.0 / z; // k = 0 node
        let kmax = (7.0 / h).ceil() as i64;
        for k in 1..=kmax {
            let t = k as f64 * h;
            sum += (-t * t).exp() * 2.0 * z / (z * z - t * t);
        }
    } else {
        let kmax = (7.0 / h).ceil() as i64;
        for k in 0..=kmax {
            let t = (k as f64 + 0.5) * h;
            sum += (-t * t).exp() * 2.0 * z / (z * z - t * t);
        }
    }
    let mut w = Complex64::i() * (h / std::f64::consts::PI) * sum;

    // Residue correction for the pole between the contour and the real axis.
    // Magnitude <= e^{y² - x² - 2πy/h}; bounded on this branch's domain.
    let q = Complex64::i() * (-2.0 * std::f64::consts::PI / h) * z;
    let e = q.exp();
    let den = if use_int_grid { 1.0 - e } else { 1.0 + e };
    w += 2.0 * (-z * z).exp() / den;
    w
}

/// Backward-evaluated continued fraction `w(z) = (i/√π)/(z - (1/2)/(z - 1/(z - ...)))`.
fn w_contfrac(z: Complex64) -> Complex64 {
    const DEPTH: usize = 40;
    let mut f = Complex64::new(0.0, 0.0);
    for n in (1..=DEPTH).rev() {
        f = (n as f64 / 2.0) / (z - f);
    }
    Complex64::new(0.0, 1.0 / SQRT_PI) / (z - f)
}

/// Scaled complementary error function `erfcx(x) = e^{x²} erfc(x)` for real `x`.
///
/// Bounded by 1 for `x >= 0`; grows as `2 e^{x²}` for negative `x` (may reach
/// `inf` for `x < -26.6`, which callers fold into Gaussian prefactors instead).
pub fn erfcx(x: f64) -> f64 {
    if x >= 0.0 {
        w_upper(Complex64::new(0.0, x)).re
    } else {
        2.0 * (x * x).exp() - w_upper(Complex64::new(0.0, -x)).re
    }
}

/// Error function of a complex argument.
pub fn erf_c(z: Complex64) -> NumResult<Complex64> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(NumError::Invalid("non-finite argument to erf"));
    }
    let r2 = z.norm_sqr();
    if r2 == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    if r2 <= 0.25 {
        // Alternating Maclaurin series; avoids the 1 - e^{-z²} w(iz)
        // cancellation near the origin.
        let zz = z * z;
        let mut term = z;
        let mut sum = Complex64::new(0.0, 0.0);
        for n in 0..40 {
            sum += term / (2.0 * n as f64 + 1.0);
            term *= -zz / (n as f64 + 1.0);
            if term.norm_sqr() < 1e-34 * sum.norm_sqr() {
                break;
            }
        }
        return Ok(sum * (2.0 / SQRT_PI));
    }
    if z.re >= 0.0 {
        // erfc(z) = e^{-z²} w(iz) for Re z >= 0.
        let e = cexp(-z * z).map_err(|_| NumError::Overflow("erf"))?;
        let v = Complex64::new(1.0, 0.0) - e * w_upper_any(Complex64::i() * z)?;
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(NumError::Overflow("erf"));
        }
        Ok(v)
    } else {
        Ok(-erf_c(-z)?)
    }
}

/// `w` for arbitrary half-plane, used internally by `erf_c`.
fn w_upper_any(z: Complex64) -> NumResult<Complex64> {
    if z.im >= 0.0 {
        Ok(w_upper(z))
    } else {
        let e = cexp(-z * z).map_err(|_| NumError::Overflow("faddeeva reflection"))?;
        let r = 2.0 * e - w_upper(-z);
        if !r.re.is_finite() || !r.im.is_finite() {
            return Err(NumError::Overflow("faddeeva reflection"));
        }
        Ok(r)
    }
}

/// Imaginary error function `erfi(z) = -i erf(iz)`.
pub fn erfi_c(z: Complex64) -> NumResult<Complex64> {
    Ok(-Complex64::i() * erf_c(Complex64::i() * z)?)
}

/// `e^a · erfi(z)` without intermediate overflow.
///
/// Uses `e^a erfi(z) = i (e^a - e^{a+z²} w(z))` after reducing `z` to the
/// first quadrant, so a growing `erfi` is always paired with its exponential.
/// Errors only when the result itself is out of range.
pub fn scaled_exp_erfi(a: Complex64, z: Complex64) -> NumResult<Complex64> {
    if z.re < 0.0 {
        return Ok(-scaled_exp_erfi(a, -z)?);
    }
    if z.im < 0.0 {
        return Ok(scaled_exp_erfi(a.conj(), z.conj())?.conj());
    }
    let t1 = cexp(a).map_err(|_| NumError::Overflow("scaled_exp_erfi"))?;
    let t2 = cexp(a + z * z).map_err(|_| NumError::Overflow("scaled_exp_erfi"))?;
    let v = Complex64::i() * (t1 - t2 * w_upper(z));
    if !v.re.is_finite() || !v.im.is_finite() {
        return Err(NumError::Overflow("scaled_exp_erfi"));
    }
    Ok(v)
}
