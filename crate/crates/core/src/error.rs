//! Crate-wide error type.

use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, CoreError>;

#[derive(Debug, Clone, Error)]
pub enum CoreError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("Lambert W iteration did not converge: last iterate {last}, residual {residual:.3e}")]
    LambertNoConvergence { last: Complex64, residual: f64 },

    #[error("gamma function pole at z = {z}")]
    GammaPole { z: Complex64 },

    #[error(
        "quadrature did not converge: best estimate {estimate:.17e}, \
         achieved bound {error_bound:.3e}, target {target:.3e}"
    )]
    QuadratureNoConvergence {
        estimate: f64,
        error_bound: f64,
        target: f64,
    },

    #[error("integrator norm drift {drift:.3e} exceeds tolerance {tol:.3e} after {steps} steps")]
    NormDrift { drift: f64, tol: f64, steps: u64 },

    #[error("mode ka = {ka:.12e} failed: {source}")]
    Mode {
        ka: f64,
        #[source]
        source: Box<CoreError>,
    },

    #[error("no sign change on [{lo:.6e}, {hi:.6e}]: f(lo) = {f_lo:.3e}, f(hi) = {f_hi:.3e}")]
    RootNotBracketed {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },
}

impl CoreError {
    /// Attach the momentum of the mode that produced this error.
    pub fn for_mode(self, ka: f64) -> CoreError {
        CoreError::Mode {
            ka,
            source: Box::new(self),
        }
    }
}
