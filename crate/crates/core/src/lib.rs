//! Finite-time quantum annealing toolkit for driven avoided crossings and
//! the transverse-field Ising chain: exact excess work from mode-level
//! Schrödinger integration, the closed-form estimates it crosses over
//! between (exponential sweep, power-law fast regime, adiabatic τ⁻², linear
//! response, half-crossing forms), the crossover times separating them, and
//! (N, τ) regime phase diagrams.
//!
//! Chain work is a sum over independent momentum modes; with the `parallel`
//! feature (default) modes are integrated on a rayon pool, with reductions
//! ordered so results are bit-identical at any thread count.

mod error;
pub mod fit;
pub mod models;
mod par;
pub mod specfun;

pub mod approx;
pub mod crossover;
pub mod dynamics;

pub use error::{CoreError, Result};
pub use par::compensated_sum;
