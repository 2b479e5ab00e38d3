//! Complex special functions and adaptive quadrature.
//!
//! Everything downstream (smeared propagators, detector states, closed-form
//! measures) reduces to the Faddeeva function `w(z) = e^{-z²} erfc(-iz)`,
//! the complex error functions, and Gaussian-damped semi-infinite integrals.

mod faddeeva;
mod quad;

pub use faddeeva::{erf_c, erfcx, erfi_c, faddeeva, scaled_exp_erfi};
pub use quad::{integrate_adaptive, integrate_semi_infinite, QuadratureSpec};

pub use num_complex::Complex64;

/// Largest exponent argument `exp` accepts without overflowing an `f64`.
pub(crate) const EXP_OVERFLOW: f64 = 709.0;

#[derive(Debug, Clone, thiserror::Error)]
pub enum NumError {
    #[error("overflow in {0}")]
    Overflow(&'static str),
    #[error("quadrature did not converge: best estimate {best}, error bound {bound:e}")]
    NonConvergent { best: Complex64, bound: f64 },
    #[error("invalid input: {0}")]
    Invalid(&'static str),
}

pub type NumResult<T> = Result<T, NumError>;

/// `exp` for complex arguments with an explicit overflow error instead of `inf`.
pub fn cexp(c: Complex64) -> NumResult<Complex64> {
    if !c.re.is_finite() || !c.im.is_finite() {
        return Err(NumError::Invalid("non-finite exponent"));
    }
    if c.re > EXP_OVERFLOW {
        return Err(NumError::Overflow("exp"));
    }
    let m = c.re.exp();
    Ok(Complex64::new(m * c.im.cos(), m * c.im.sin()))
}

#[cfg(test)]
pub(crate) mod ddreal;
