//! Self-contained special functions and adaptive quadrature: complex
//! Lambert W on the branch continued from the real W₋₁, complex Gamma,
//! and Gauss–Kronrod integration with semi-infinite support.

mod gamma;
mod lambert;
mod quad;

pub use gamma::gamma_complex;
pub use lambert::lambert_w_minus1;
pub use quad::{integrate, QuadResult, QuadratureSpec};
