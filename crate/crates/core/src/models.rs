//! Domain types and instantaneous spectra shared by all other modules.
//!
//! Units: ħ = 1 throughout, lattice spacing a = 1, so momenta appear only as
//! the dimensionless product `ka` and all energies are in units of the
//! coupling J (or absolute schedule energies for two-parameter drives).

use crate::error::{CoreError, Result};

/// Lattice spacing; fixed to 1 everywhere, kept as a named constant so the
/// convention is visible at call sites that care.
pub const LATTICE_SPACING: f64 = 1.0;

/// Coupling constants of the driven two-level / Ising-chain Hamiltonians.
///
/// `j` is the static coupling (σˣ term for the two-level crossing, the
/// nearest-neighbour bond for the chain); `delta` is the drive strength
/// multiplying the control parameter λ. Both are strictly positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub j: f64,
    pub delta: f64,
}

impl ModelParams {
    pub fn new(j: f64, delta: f64) -> Result<Self> {
        if j <= 0.0 || !j.is_finite() {
            return Err(CoreError::InvalidParams(format!(
                "coupling J must be positive and finite, got {j}"
            )));
        }
        if delta <= 0.0 || !delta.is_finite() {
            return Err(CoreError::InvalidParams(format!(
                "drive strength Delta must be positive and finite, got {delta}"
            )));
        }
        Ok(Self { j, delta })
    }

    pub fn delta_over_j(&self) -> f64 {
        self.delta / self.j
    }

    /// Dimensionless duration J²τ/Δ used on two-level-crossing abscissas.
    pub fn scaled_tau_lz(&self, tau: f64) -> f64 {
        self.j * self.j * tau / self.delta
    }

    /// Inverse of [`scaled_tau_lz`](Self::scaled_tau_lz).
    pub fn tau_from_scaled_lz(&self, scaled: f64) -> f64 {
        scaled * self.delta / (self.j * self.j)
    }

    /// Dimensionless duration (π²/N²)·(J²/Δ)·τ used on chain abscissas.
    pub fn scaled_tau_ti(&self, tau: f64, n: usize) -> f64 {
        let nn = n as f64;
        (std::f64::consts::PI / nn).powi(2) * self.j * self.j * tau / self.delta
    }

    /// Inverse of [`scaled_tau_ti`](Self::scaled_tau_ti).
    pub fn tau_from_scaled_ti(&self, scaled: f64, n: usize) -> f64 {
        let nn = n as f64;
        scaled * (nn / std::f64::consts::PI).powi(2) * self.delta / (self.j * self.j)
    }
}

/// One sampled point of a two-parameter drive: normalized time `s` in [0, 1],
/// transverse field energy `a`, coupling energy `b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScheduleSample {
    pub s: f64,
    pub a: f64,
    pub b: f64,
}

/// Where a two-parameter schedule crosses its critical surface a(s) = b(s),
/// with the local linearization used to map onto an effective linear drive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScheduleCrossing {
    /// Normalized crossing time.
    pub s: f64,
    /// Coupling energy at the crossing; plays the role of J.
    pub coupling: f64,
    /// d(a−b)/ds at the crossing; plays the role of Δ (per unit normalized time).
    pub drive_rate: f64,
}

/// Tabulated two-parameter annealing schedule (A(t), B(t)), piecewise-linear
/// in normalized time. Endpoints are fixed regardless of the duration τ.
///
/// A and B are absolute energies in ħ = 1 units: the mode Hamiltonians use
/// field Γ(t) = A(t) and coupling J(t) = B(t) directly.
#[derive(Debug, Clone, PartialEq)]
pub struct Schedule {
    samples: Vec<ScheduleSample>,
}

impl Schedule {
    pub fn new(samples: Vec<(f64, f64, f64)>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(CoreError::InvalidParams(
                "schedule needs at least two samples".into(),
            ));
        }
        for w in samples.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(CoreError::InvalidParams(format!(
                    "schedule time grid must be strictly increasing ({} then {})",
                    w[0].0, w[1].0
                )));
            }
        }
        let first = samples[0].0;
        let last = samples[samples.len() - 1].0;
        if (first - 0.0).abs() > 1e-12 || (last - 1.0).abs() > 1e-12 {
            return Err(CoreError::InvalidParams(format!(
                "schedule must span normalized time [0, 1], got [{first}, {last}]"
            )));
        }
        for &(s, a, b) in &samples {
            if !a.is_finite() || !b.is_finite() || a < 0.0 || b < 0.0 {
                return Err(CoreError::InvalidParams(format!(
                    "schedule values must be finite and non-negative, got (s={s}, a={a}, b={b})"
                )));
            }
        }
        Ok(Self {
            samples: samples
                .into_iter()
                .map(|(s, a, b)| ScheduleSample { s, a, b })
                .collect(),
        })
    }

    pub fn samples(&self) -> &[ScheduleSample] {
        &self.samples
    }

    /// Piecewise-linear (field, coupling) at normalized time s, clamped to [0, 1].
    pub fn values_at(&self, s: f64) -> (f64, f64) {
        let s = s.clamp(0.0, 1.0);
        let n = self.samples.len();
        // segment index by linear scan; schedules are short tables
        let mut i = 0;
        while i + 2 < n && self.samples[i + 1].s <= s {
            i += 1;
        }
        let lo = self.samples[i];
        let hi = self.samples[i + 1];
        let w = (s - lo.s) / (hi.s - lo.s);
        (lo.a + w * (hi.a - lo.a), lo.b + w * (hi.b - lo.b))
    }

    /// First normalized time where the field/coupling ratio passes 1,
    /// i.e. where a(s) − b(s) changes sign, with the local slope there.
    pub fn crossing(&self) -> Option<ScheduleCrossing> {
        for w in self.samples.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            let g_lo = lo.a - lo.b;
            let g_hi = hi.a - hi.b;
            if g_lo == 0.0 {
                let slope = (g_hi - g_lo) / (hi.s - lo.s);
                return Some(ScheduleCrossing {
                    s: lo.s,
                    coupling: lo.b,
                    drive_rate: slope,
                });
            }
            if g_lo.signum() != g_hi.signum() && g_hi != 0.0 {
                let w01 = g_lo / (g_lo - g_hi);
                let s = lo.s + w01 * (hi.s - lo.s);
                let coupling = lo.b + w01 * (hi.b - lo.b);
                let slope = (g_hi - g_lo) / (hi.s - lo.s);
                return Some(ScheduleCrossing {
                    s,
                    coupling,
                    drive_rate: slope,
                });
            }
        }
        None
    }

    /// Effective (J, Δ) from the crossing linearization, for scaled-time axes.
    pub fn effective_params(&self) -> Option<ModelParams> {
        let c = self.crossing()?;
        ModelParams::new(c.coupling, c.drive_rate.abs()).ok()
    }
}

/// Control protocol kind, as reported in run metadata.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProtocolKind {
    /// λ from −1/2 to 1/2 around the critical point.
    LinearSymmetric,
    /// λ from −1 to 0, stopping at the critical point.
    LinearHalf,
    /// Linear with arbitrary endpoints.
    Linear,
    /// Tabulated two-parameter schedule.
    TwoParameter,
}

impl ProtocolKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ProtocolKind::LinearSymmetric => "linear-symmetric",
            ProtocolKind::LinearHalf => "linear-half",
            ProtocolKind::Linear => "linear",
            ProtocolKind::TwoParameter => "two-parameter",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProtocolShape {
    Linear,
    TwoParameter(Schedule),
}

/// Control schedule λ(t) (or (A(t), B(t))) of duration τ with fixed endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct Protocol {
    pub lambda_i: f64,
    pub lambda_f: f64,
    pub tau: f64,
    pub shape: ProtocolShape,
}

impl Protocol {
    fn check_tau(tau: f64) -> Result<()> {
        if tau <= 0.0 || !tau.is_finite() {
            return Err(CoreError::InvalidParams(format!(
                "protocol duration must be positive and finite, got {tau}"
            )));
        }
        Ok(())
    }

    /// λ(t) = t/τ on [−τ/2, τ/2]: λ from −1/2 to 1/2.
    pub fn linear_symmetric(tau: f64) -> Result<Self> {
        Self::linear(-0.5, 0.5, tau)
    }

    /// λ(t) = t/τ on [−τ, 0]: λ from −1 to 0, stopping at the critical point.
    pub fn linear_half(tau: f64) -> Result<Self> {
        Self::linear(-1.0, 0.0, tau)
    }

    /// Linear ramp between arbitrary fixed endpoints.
    pub fn linear(lambda_i: f64, lambda_f: f64, tau: f64) -> Result<Self> {
        Self::check_tau(tau)?;
        if lambda_i == lambda_f {
            return Err(CoreError::InvalidParams(
                "linear protocol endpoints must differ".into(),
            ));
        }
        Ok(Self {
            lambda_i,
            lambda_f,
            tau,
            shape: ProtocolShape::Linear,
        })
    }

    /// Tabulated two-parameter schedule of duration τ.
    pub fn two_parameter(schedule: Schedule, tau: f64) -> Result<Self> {
        Self::check_tau(tau)?;
        Ok(Self {
            lambda_i: 0.0,
            lambda_f: 1.0,
            tau,
            shape: ProtocolShape::TwoParameter(schedule),
        })
    }

    /// Same endpoints and shape, new duration.
    pub fn with_tau(&self, tau: f64) -> Result<Self> {
        Self::check_tau(tau)?;
        let mut p = self.clone();
        p.tau = tau;
        Ok(p)
    }

    /// λ at normalized time s ∈ [0, 1] (linear shapes only).
    pub fn lambda_at(&self, s: f64) -> f64 {
        self.lambda_i + (self.lambda_f - self.lambda_i) * s
    }

    pub fn kind(&self) -> ProtocolKind {
        match &self.shape {
            ProtocolShape::TwoParameter(_) => ProtocolKind::TwoParameter,
            ProtocolShape::Linear => {
                if self.lambda_i == -0.5 && self.lambda_f == 0.5 {
                    ProtocolKind::LinearSymmetric
                } else if self.lambda_i == -1.0 && self.lambda_f == 0.0 {
                    ProtocolKind::LinearHalf
                } else {
                    ProtocolKind::Linear
                }
            }
        }
    }

    pub fn schedule(&self) -> Option<&Schedule> {
        match &self.shape {
            ProtocolShape::TwoParameter(s) => Some(s),
            ProtocolShape::Linear => None,
        }
    }

    /// True when the drive stops at the critical point (λf = 0).
    pub fn stops_at_critical_point(&self) -> bool {
        matches!(self.shape, ProtocolShape::Linear) && self.lambda_f == 0.0 && self.lambda_i < 0.0
    }
}

/// Mixing angle θ(λ) = ½·arctan2(J, Δλ) of the driven two-level crossing.
///
/// The two-argument form keeps θ in (0, π/2) and continuous through λ = 0.
pub fn lz_theta(params: &ModelParams, lambda: f64) -> f64 {
    0.5 * f64::atan2(params.j, params.delta * lambda)
}

/// Positive eigenenergy E(λ) = sqrt(Δ²λ² + J²); the gap 2E is minimal (2J) at λ = 0.
pub fn lz_energy(params: &ModelParams, lambda: f64) -> f64 {
    (params.delta * lambda).hypot(params.j)
}

/// Transverse field Γ(λ) = J + Δλ of the chain; Γ = J marks the critical point.
pub fn gamma_field(params: &ModelParams, lambda: f64) -> f64 {
    params.j + params.delta * lambda
}

/// Quasiparticle energy for arbitrary (field, coupling):
/// sqrt((field − coupling·cos ka)² + coupling²·sin²(ka)).
pub fn mode_dispersion(field: f64, coupling: f64, ka: f64) -> f64 {
    let (sin, cos) = ka.sin_cos();
    (field - coupling * cos).hypot(coupling * sin)
}

/// Bogoliubov angle for arbitrary (field, coupling):
/// ½·arctan2(coupling·sin ka, field − coupling·cos ka), in [0, π/2].
pub fn mode_angle(field: f64, coupling: f64, ka: f64) -> f64 {
    let (sin, cos) = ka.sin_cos();
    0.5 * f64::atan2(coupling * sin, field - coupling * cos)
}

/// Chain dispersion ε_k(λ) with Γ(λ) = J + Δλ.
pub fn ti_dispersion(params: &ModelParams, lambda: f64, ka: f64) -> f64 {
    mode_dispersion(gamma_field(params, lambda), params.j, ka)
}

/// Chain Bogoliubov angle θ_k(λ), continuous through Γ(λ) = J·cos(ka).
pub fn ti_theta_k(params: &ModelParams, lambda: f64, ka: f64) -> f64 {
    mode_angle(gamma_field(params, lambda), params.j, ka)
}

/// Per-mode substitution mapping one chain mode onto an effective two-level
/// crossing: coupling J_k = J·sin(ka), control shift λ → λ + (J/Δ)(1 − cos ka).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LzMapping {
    pub coupling: f64,
    pub lambda_shift: f64,
}

pub fn lz_mapping(params: &ModelParams, ka: f64) -> LzMapping {
    let (sin, cos) = ka.sin_cos();
    LzMapping {
        coupling: params.j * sin,
        lambda_shift: params.j / params.delta * (1.0 - cos),
    }
}

/// Accumulated dynamical phase per unit duration, Ξ = ∫₀¹ E(s) ds, so that
/// the dynamic phase of a run of duration τ is φ(τ) = −τ·Ξ. For a linear
/// drive with unit λ span this equals ∫ E(λ) dλ over the endpoints.
pub fn phase_rate_lz(params: &ModelParams, protocol: &Protocol) -> Result<f64> {
    if protocol.schedule().is_some() {
        return Err(CoreError::InvalidParams(
            "two-level phase rate is defined for linear protocols only".into(),
        ));
    }
    let spec = crate::specfun::QuadratureSpec::with_rel_tol(1e-12);
    let r = crate::specfun::integrate(
        |s| lz_energy(params, protocol.lambda_at(s)),
        0.0,
        1.0,
        &spec,
    )?;
    Ok(r.value)
}

/// Per-mode phase rate Ξ_k = ∫₀¹ ε_k(s) ds; φ_k(τ) = −τ·Ξ_k.
pub fn phase_rate_ti(params: &ModelParams, protocol: &Protocol, ka: f64) -> Result<f64> {
    let spec = crate::specfun::QuadratureSpec::with_rel_tol(1e-12);
    let r = match protocol.schedule() {
        None => crate::specfun::integrate(
            |s| ti_dispersion(params, protocol.lambda_at(s), ka),
            0.0,
            1.0,
            &spec,
        )?,
        Some(sched) => crate::specfun::integrate(
            |s| {
                let (a, b) = sched.values_at(s);
                mode_dispersion(a, b, ka)
            },
            0.0,
            1.0,
            &spec,
        )?,
    };
    Ok(r.value)
}

pub fn validate_chain_size(n: usize) -> Result<()> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(CoreError::InvalidParams(format!(
            "chain size must be even and at least 2, got {n}"
        )));
    }
    Ok(())
}

/// Positive-sector momenta ka_n = (2n+1)π/N for n = 0 … N/2 − 1, ascending.
///
/// Fermion pairs carry opposite momenta, so the ground-state dynamics closes
/// on this half of the Brillouin zone; the lowest momentum is π/N.
pub fn momentum_grid(n: usize) -> Result<Vec<f64>> {
    validate_chain_size(n)?;
    let nn = n as f64;
    Ok((0..n / 2)
        .map(|i| (2 * i + 1) as f64 * std::f64::consts::PI / nn)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn p(j: f64, delta: f64) -> ModelParams {
        ModelParams::new(j, delta).unwrap()
    }

    #[test]
    fn rejects_bad_params() {
        assert!(ModelParams::new(0.0, 1.0).is_err());
        assert!(ModelParams::new(1.0, -2.0).is_err());
        assert!(ModelParams::new(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn theta_reference_values() {
        assert_relative_eq!(lz_theta(&p(1.0, 1.0), 0.0), PI / 4.0, max_relative = 1e-14);
        // field-dominated limit
        assert!(lz_theta(&p(1.0, 10.0), 1e12) < 1e-10);
        assert!(lz_theta(&p(1.0, 10.0), 1e12) > 0.0);
        // oracle: 0.5 * atan2(1, 5)
        assert_relative_eq!(
            lz_theta(&p(1.0, 10.0), 0.5),
            0.5 * f64::atan2(1.0, 5.0),
            max_relative = 1e-14
        );
        assert_relative_eq!(
            lz_theta(&p(1.0, 10.0), 0.5),
            0.09869777992494037,
            max_relative = 1e-12
        );
    }

    #[test]
    fn energy_reference_values() {
        assert_relative_eq!(lz_energy(&p(1.0, 10.0), 0.0), 1.0);
        assert_relative_eq!(lz_energy(&p(1.0, 10.0), 0.5), 26f64.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(lz_energy(&p(2.0, 1.0), 0.0), 2.0);
    }

    #[test]
    fn dispersion_reference_values() {
        assert_relative_eq!(
            ti_dispersion(&p(1.0, 1.0), 0.0, PI / 2.0),
            2f64.sqrt(),
            max_relative = 1e-14
        );
        // gapless limit at the critical point
        assert!(ti_dispersion(&p(1.0, 1.0), 0.0, 1e-9) < 2e-9);
        assert_relative_eq!(ti_dispersion(&p(1.0, 1.0), -1.0, PI), 1.0, max_relative = 1e-12);
    }

    #[test]
    fn theta_k_reference_values() {
        // field dominates
        assert!(ti_theta_k(&p(1.0, 1.0), 1e9, PI / 3.0) < 1e-8);
        assert_relative_eq!(
            ti_theta_k(&p(1.0, 1.0), 0.0, PI / 2.0),
            PI / 8.0,
            max_relative = 1e-14
        );
        assert_abs_diff_eq!(ti_theta_k(&p(1.0, 1.0), 0.5, 1e-12), 0.0, epsilon = 1e-11);
    }

    #[test]
    fn mapping_reference_values() {
        let m = lz_mapping(&p(1.0, 1.0), PI / 2.0);
        assert_relative_eq!(m.coupling, 1.0, max_relative = 1e-14);
        assert_relative_eq!(m.lambda_shift, 1.0, max_relative = 1e-14);

        let m = lz_mapping(&p(1.0, 2.0), 1e-8);
        assert_relative_eq!(m.coupling, 1e-8, max_relative = 1e-6);
        assert_abs_diff_eq!(m.lambda_shift, 0.0, epsilon = 1e-15);

        let m = lz_mapping(&p(1.0, 2.0), PI);
        assert_abs_diff_eq!(m.coupling, 0.0, epsilon = 1e-15);
        assert_relative_eq!(m.lambda_shift, 1.0, max_relative = 1e-14);
    }

    #[test]
    fn momentum_grid_layout() {
        let grid = momentum_grid(100).unwrap();
        assert_eq!(grid.len(), 50);
        assert_relative_eq!(grid[0], PI / 100.0, max_relative = 1e-14);
        assert!(grid.windows(2).all(|w| w[1] > w[0]));
        assert!(momentum_grid(3).is_err());
        assert!(momentum_grid(0).is_err());
        assert_eq!(momentum_grid(2).unwrap(), vec![PI / 2.0]);
    }

    #[test]
    fn protocol_kinds_and_validation() {
        assert!(Protocol::linear_symmetric(0.0).is_err());
        assert!(Protocol::linear(1.0, 1.0, 1.0).is_err());
        let sym = Protocol::linear_symmetric(2.0).unwrap();
        assert_eq!(sym.kind(), ProtocolKind::LinearSymmetric);
        assert_relative_eq!(sym.lambda_at(0.0), -0.5);
        assert_relative_eq!(sym.lambda_at(1.0), 0.5);
        let half = Protocol::linear_half(2.0).unwrap();
        assert_eq!(half.kind(), ProtocolKind::LinearHalf);
        assert!(half.stops_at_critical_point());
        assert!(!sym.stops_at_critical_point());
    }

    #[test]
    fn schedule_interpolation_and_crossing() {
        let sched = Schedule::new(vec![(0.0, 2.0, 0.0), (0.5, 1.0, 1.0), (1.0, 0.0, 3.0)]).unwrap();
        let (a, b) = sched.values_at(0.25);
        assert_relative_eq!(a, 1.5);
        assert_relative_eq!(b, 0.5);
        let c = sched.crossing().unwrap();
        assert_relative_eq!(c.s, 0.5, max_relative = 1e-12);
        assert_relative_eq!(c.coupling, 1.0, max_relative = 1e-12);
        // crossing lands exactly on a knot: the forward segment supplies the
        // slope, (−3 − 0)/0.5
        assert_relative_eq!(c.drive_rate, -6.0, max_relative = 1e-12);

        let mid = Schedule::new(vec![(0.0, 2.0, 0.0), (0.5, 1.2, 0.8), (1.0, 0.0, 3.0)]).unwrap();
        let c = mid.crossing().unwrap();
        // g = a − b falls 0.4 → −3 over the second segment
        assert_relative_eq!(c.s, 0.5 + 0.4 / 3.4 * 0.5, max_relative = 1e-12);
        assert_relative_eq!(c.drive_rate, -6.8, max_relative = 1e-12);

        assert!(Schedule::new(vec![(0.0, 1.0, 1.0)]).is_err());
        assert!(Schedule::new(vec![(0.0, 1.0, 1.0), (0.4, 1.0, 1.0)]).is_err());
        assert!(Schedule::new(vec![(0.0, 1.0, 1.0), (0.6, 1.0, 1.0), (0.3, 1.0, 1.0)]).is_err());
    }

    proptest! {
        // E(λ)² − (Δλ)² = J², to 1e−12 relative
        #[test]
        fn energy_identity(j in 0.1f64..10.0, delta in 0.1f64..10.0, lambda in -20.0f64..20.0) {
            let params = p(j, delta);
            let e = lz_energy(&params, lambda);
            let lhs = e * e - (delta * lambda) * (delta * lambda);
            prop_assert!((lhs - j * j).abs() <= 1e-12 * (e * e).max(j * j));
        }

        // the per-mode substitution is exact: ε_k(λ) = sqrt(Δ²λ_k² + J_k²)
        #[test]
        fn mapping_identity(
            j in 0.1f64..10.0,
            delta in 0.1f64..10.0,
            lambda in -5.0f64..5.0,
            frac in 0.001f64..0.999,
        ) {
            let params = p(j, delta);
            let ka = frac * PI;
            let m = lz_mapping(&params, ka);
            let lhs = ti_dispersion(&params, lambda, ka);
            let shifted = ModelParams::new(m.coupling.max(f64::MIN_POSITIVE), delta).unwrap();
            let rhs = if m.coupling > 0.0 {
                lz_energy(&shifted, lambda + m.lambda_shift)
            } else {
                (delta * (lambda + m.lambda_shift)).abs()
            };
            prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.max(1e-300));
        }

        // θ monotone decreasing in λ at fixed ka
        #[test]
        fn theta_monotone(
            j in 0.1f64..10.0,
            delta in 0.1f64..10.0,
            lambda in -5.0f64..5.0,
            step in 0.01f64..1.0,
            frac in 0.01f64..0.99,
        ) {
            let params = p(j, delta);
            prop_assert!(lz_theta(&params, lambda + step) < lz_theta(&params, lambda));
            let ka = frac * PI;
            prop_assert!(
                ti_theta_k(&params, lambda + step, ka) < ti_theta_k(&params, lambda, ka)
            );
        }
    }
}
