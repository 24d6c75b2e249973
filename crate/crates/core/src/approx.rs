//! Closed-form excess-work estimates: the exponential sweep formula and its
//! per-mode variants, first-order adiabatic perturbation estimates, the
//! fast-regime scaling forms, the half-crossing special functions, and the
//! linear-response sum.

use crate::error::{CoreError, Result};
use crate::models::{
    self, gamma_field, lz_energy, momentum_grid, ti_dispersion, ModelParams, Protocol,
};
use crate::par::compensated_sum;
use crate::specfun::{gamma_complex, integrate, QuadratureSpec};
use num_complex::Complex64;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Mutex, OnceLock};

/// Whether oscillatory interference terms are kept or dropped.
///
/// Averaged means the cross term between the two endpoint contributions is
/// removed, |A − B·e^{iφ}|² → |A|² + |B|², the envelope the oscillations
/// wind around.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseMode {
    Full,
    Averaged,
}

/// Which form of the slow-regime chain estimate to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AptSum {
    /// Mode-by-mode sum over the finite chain.
    Discrete(PhaseMode),
    /// Continuum form (NJ/16π)(Δ/(J²τ))²·f(Δ/J); inherently phase-free.
    Continuous,
}

/// Labels for the estimate families a sweep can emit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveLabel {
    Lzf,
    Apt,
    Kzm,
    LzfLowestMode,
    Hlz,
    KzmHalf,
    AptHalf,
    Lrt,
    ExactIntegral,
}

impl CurveLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            CurveLabel::Lzf => "lzf",
            CurveLabel::Apt => "apt",
            CurveLabel::Kzm => "kzm",
            CurveLabel::LzfLowestMode => "lzf-lowest-mode",
            CurveLabel::Hlz => "hlz",
            CurveLabel::KzmHalf => "kzm-half",
            CurveLabel::AptHalf => "apt-half",
            CurveLabel::Lrt => "lrt",
            CurveLabel::ExactIntegral => "exact-integral",
        }
    }
}

/// One labelled curve of (τ, value) points.
#[derive(Debug, Clone, PartialEq)]
pub struct ApproxCurve {
    pub label: CurveLabel,
    pub values: Vec<(f64, f64)>,
}

impl ApproxCurve {
    pub fn new(label: CurveLabel, values: Vec<(f64, f64)>) -> Result<Self> {
        for &(tau, w) in &values {
            if !tau.is_finite() || !w.is_finite() || w < 0.0 {
                return Err(CoreError::InvalidParams(format!(
                    "curve {} has a non-finite or negative point ({tau}, {w})",
                    label.as_str()
                )));
            }
        }
        Ok(Self { label, values })
    }
}

/// Sweep-through transition probability exp(−πJ²τ/Δ).
pub fn lzf_probability(params: &ModelParams, tau: f64) -> f64 {
    (-PI * params.j * params.j * tau / params.delta).exp()
}

/// Per-mode variant with coupling J·sin(ka): exp(−πJ²sin²(ka)τ/Δ).
pub fn lzf_mode_probability(params: &ModelParams, tau: f64, ka: f64) -> f64 {
    let jk = params.j * ka.sin();
    (-PI * jk * jk * tau / params.delta).exp()
}

/// First-order adiabatic transition probability of the avoided crossing,
/// (1/16)(Δ/(J²τ))²·|J³/E³(λf) − J³·e^{−2iφ(τ)}/E³(λi)|² with
/// φ(τ) = −τ·∫E dλ evaluated by quadrature.
pub fn apt_lz_probability(params: &ModelParams, protocol: &Protocol, mode: PhaseMode) -> Result<f64> {
    let tau = protocol.tau;
    let e_i = lz_energy(params, protocol.lambda_i);
    let e_f = lz_energy(params, protocol.lambda_f);
    let j3 = params.j.powi(3);
    let a = j3 / e_f.powi(3);
    let b = j3 / e_i.powi(3);
    let pref = (params.delta / (params.j * params.j * tau)).powi(2) / 16.0;
    Ok(match mode {
        PhaseMode::Averaged => pref * (a * a + b * b),
        PhaseMode::Full => {
            let rate = models::phase_rate_lz(params, protocol)?;
            pref * (a * a + b * b - 2.0 * a * b * (2.0 * tau * rate).cos())
        }
    })
}

/// Endpoint data of the generic first-order adiabatic estimate for one mode:
/// amplitudes A = |θ̇/(2ε)| at the final and initial instants. Exact closed
/// derivative for linear drives, end-segment slopes for tabulated schedules.
fn apt_mode_amplitudes(params: &ModelParams, protocol: &Protocol, ka: f64) -> (f64, f64) {
    let tau = protocol.tau;
    match protocol.schedule() {
        None => {
            // dθ/dλ = −ΔJ·sin(ka) / (2ε²), θ̇ = dθ/dλ·(λf−λi)/τ
            let dlambda = protocol.lambda_f - protocol.lambda_i;
            let jk = params.j * ka.sin();
            let num = params.delta * jk * dlambda / (2.0 * tau);
            let e_f = ti_dispersion(params, protocol.lambda_f, ka);
            let e_i = ti_dispersion(params, protocol.lambda_i, ka);
            (
                (num / e_f.powi(2) / (2.0 * e_f)).abs(),
                (num / e_i.powi(2) / (2.0 * e_i)).abs(),
            )
        }
        Some(sched) => {
            let (sin, cos) = ka.sin_cos();
            let endpoint = |s0: f64, s1: f64, at: f64| -> f64 {
                let (a0, b0) = sched.values_at(s0);
                let (a1, b1) = sched.values_at(s1);
                let ds = s1 - s0;
                let (a, b) = sched.values_at(at);
                let x = a - b * cos;
                let y = b * sin;
                let xp = ((a1 - a0) - (b1 - b0) * cos) / ds;
                let yp = (b1 - b0) * sin / ds;
                let eps2 = x * x + y * y;
                let theta_dot = 0.5 * (yp * x - xp * y) / eps2 / tau;
                (theta_dot / (2.0 * eps2.sqrt())).abs()
            };
            let samples = sched.samples();
            let s_second = samples[1].s;
            let s_penult = samples[samples.len() - 2].s;
            (endpoint(s_penult, 1.0, 1.0), endpoint(0.0, s_second, 0.0))
        }
    }
}

/// First-order adiabatic excitation probability of one chain mode; valid for
/// linear drives (where it reduces to the closed endpoint form) and for
/// tabulated two-parameter schedules.
pub fn apt_ti_probability(
    params: &ModelParams,
    protocol: &Protocol,
    ka: f64,
    mode: PhaseMode,
) -> Result<f64> {
    let (a, b) = apt_mode_amplitudes(params, protocol, ka);
    Ok(match mode {
        PhaseMode::Averaged => a * a + b * b,
        PhaseMode::Full => {
            let rate = models::phase_rate_ti(params, protocol, ka)?;
            a * a + b * b - 2.0 * a * b * (2.0 * protocol.tau * rate).cos()
        }
    })
}

fn abs_lambda_f(protocol: &Protocol) -> f64 {
    protocol.lambda_f.abs()
}

/// Fast-regime power law for the crossing drive:
/// W = (N·Δ·|λf|/2π)·sqrt(Δ/(J²τ)).
pub fn kzm_work(params: &ModelParams, protocol: &Protocol, n: usize) -> f64 {
    let tau = protocol.tau;
    n as f64 * params.delta * abs_lambda_f(protocol) / (2.0 * PI)
        * (params.delta / (params.j * params.j * tau)).sqrt()
}

/// Defect density behind [`kzm_work`]: W = 2Δ|λf|·n_ex, so
/// n_ex = N/(4π)·sqrt(Δ/(J²τ)).
pub fn kzm_excitations(params: &ModelParams, protocol: &Protocol, n: usize) -> f64 {
    kzm_work(params, protocol, n) / (2.0 * params.delta * abs_lambda_f(protocol))
}

/// Continuum mode integral of the per-mode exponential sweep law,
/// (N/π)·∫₀^∞ sqrt((Γf−J)² + J·Γf·(ka)²)·exp(−πJ²(ka)²τ/Δ) d(ka).
pub fn exact_integral_work(
    params: &ModelParams,
    protocol: &Protocol,
    n: usize,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let gamma_f = gamma_field(params, protocol.lambda_f);
    if gamma_f < 0.0 {
        return Err(CoreError::InvalidParams(format!(
            "final field must be non-negative for the continuum form, got {gamma_f}"
        )));
    }
    let gap = gamma_f - params.j;
    let alpha = PI * params.j * params.j * protocol.tau / params.delta;
    let r = integrate(
        |ka| (gap * gap + params.j * gamma_f * ka * ka).sqrt() * (-alpha * ka * ka).exp(),
        0.0,
        f64::INFINITY,
        spec,
    )?;
    Ok(n as f64 / PI * r.value)
}

/// Slow-regime single-surviving-mode form:
/// W = 2Δ|λf|·exp[−π(π/N)²(J²/Δ)τ].
pub fn lzf_lowest_mode_work(params: &ModelParams, protocol: &Protocol, n: usize) -> f64 {
    let s = params.scaled_tau_ti(protocol.tau, n);
    2.0 * params.delta * abs_lambda_f(protocol) * (-PI * s).exp()
}

/// Dimensionless endpoint integral of the continuum adiabatic form:
/// f = J⁵·∫₀^π sin²(ka)·[1/ε⁵(end) + ε(end)/ε⁶(start)] d(ka). Depends only
/// on Δ/J and the protocol endpoints; memoized.
pub fn f_coefficient(params: &ModelParams, protocol: &Protocol) -> Result<f64> {
    type Cache = Mutex<HashMap<(u64, u64, u64), f64>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let key = (
        params.delta_over_j().to_bits(),
        protocol.lambda_i.to_bits(),
        protocol.lambda_f.to_bits(),
    );
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(&v) = cache.lock().unwrap().get(&key) {
        return Ok(v);
    }
    // scale-invariant: evaluate at J = 1
    let unit = ModelParams::new(1.0, params.delta_over_j())?;
    let spec = QuadratureSpec::with_rel_tol(1e-12);
    let r = integrate(
        |ka| {
            let e_f = ti_dispersion(&unit, protocol.lambda_f, ka);
            let e_i = ti_dispersion(&unit, protocol.lambda_i, ka);
            ka.sin().powi(2) * (1.0 / e_f.powi(5) + e_f / e_i.powi(6))
        },
        0.0,
        PI,
        &spec,
    )?;
    cache.lock().unwrap().insert(key, r.value);
    Ok(r.value)
}

/// Slow-regime chain excess work, either the discrete mode sum or the
/// continuum form (NJ/16π)(Δ/(J²τ))²·f(Δ/J).
pub fn apt_ti_work(params: &ModelParams, protocol: &Protocol, n: usize, form: AptSum) -> Result<f64> {
    match form {
        AptSum::Continuous => {
            let f = f_coefficient(params, protocol)?;
            let pref = n as f64 * params.j / (16.0 * PI)
                * (params.delta / (params.j * params.j * protocol.tau)).powi(2);
            Ok(pref * f)
        }
        AptSum::Discrete(mode) => {
            let grid = momentum_grid(n)?;
            let mut terms = Vec::with_capacity(grid.len());
            for &ka in &grid {
                let p = apt_ti_probability(params, protocol, ka, mode)?;
                terms.push(2.0 * ti_dispersion(params, protocol.lambda_f, ka) * p);
            }
            Ok(compensated_sum(terms))
        }
    }
}

/// The half-crossing bracket evaluated at scaled duration y = J²τ/Δ:
/// 1 − sinh(πy/2)/(πy)·e^{−πy/4}·|Γ(1+iy/4) + (e^{iπ/4}/2)√y·Γ(½+iy/4)|².
///
/// Grouped as (e^{πy/4} − e^{−3πy/4})/(2πy) to keep the exponentials tame;
/// beyond y ≈ 700 that grouping overflows and the τ⁻² tail 1/(16y²) is
/// returned instead.
fn hlz_bracket(y: f64) -> Result<f64> {
    if y > 700.0 {
        return Ok(1.0 / (16.0 * y * y));
    }
    let quarter = 0.25 * PI * y;
    // (e^a − e^{−3a})/(8a); the expm1 form avoids cancellation for small a
    let s_factor = if quarter < 1.0 {
        (4.0 * quarter).exp_m1() * (-3.0 * quarter).exp() / (8.0 * quarter)
    } else {
        (quarter.exp() - (-3.0 * quarter).exp()) / (8.0 * quarter)
    };
    let g1 = gamma_complex(Complex64::new(1.0, 0.25 * y))?;
    let g2 = gamma_complex(Complex64::new(0.5, 0.25 * y))?;
    let phase = Complex64::from_polar(0.5 * y.sqrt(), PI / 4.0);
    let bracket = g1 + phase * g2;
    Ok((1.0 - s_factor * bracket.norm_sqr()).clamp(0.0, 1.0))
}

/// Transition probability for a sweep that stops at the crossing point.
pub fn hlz_probability(params: &ModelParams, tau: f64) -> Result<f64> {
    hlz_bracket(params.scaled_tau_lz(tau))
}

/// The constant K = ∫₀^∞ x·p_half(x²) dx of the fast-regime half-crossing
/// law; computed once by quadrature (≈ 0.119).
pub fn kzm_half_constant() -> Result<f64> {
    static K: OnceLock<std::result::Result<f64, CoreError>> = OnceLock::new();
    K.get_or_init(|| {
        let spec = QuadratureSpec::with_rel_tol(1e-10);
        let r = integrate(
            |x| match hlz_bracket(x * x) {
                Ok(p) => x * p,
                Err(_) => f64::NAN,
            },
            0.0,
            f64::INFINITY,
            &spec,
        )?;
        if !r.value.is_finite() {
            return Err(CoreError::QuadratureNoConvergence {
                estimate: r.value,
                error_bound: r.error_bound,
                target: spec.rel_tol,
            });
        }
        Ok(r.value)
    })
    .clone()
}

/// Fast-regime work when stopping at the crossing: W = (K·N·J/π)·(Δ/(J²τ)).
pub fn kzm_half_work(params: &ModelParams, tau: f64, n: usize) -> Result<f64> {
    let k = kzm_half_constant()?;
    Ok(k * n as f64 * params.j / PI * params.delta / (params.j * params.j * tau))
}

/// Slow-regime work when stopping at the crossing, dominated by the lowest
/// mode: W = (NJ/8π)·(N/π)²·(Δ/(J²τ))².
pub fn apt_half_work(params: &ModelParams, tau: f64, n: usize) -> f64 {
    let nn = n as f64;
    nn * params.j / (8.0 * PI)
        * (nn / PI).powi(2)
        * (params.delta / (params.j * params.j * tau)).powi(2)
}

/// Linear-response excess work as the printed mode sum with a sin(ka)
/// weight: W = (J²/τ²)(Δ/2)²(δλ)²·Σ_{k>0} [1 − cos(2ε_k(start)τ)]·sin(ka)/ε_k⁵(start).
///
/// See [`lrt_work_via_relaxation`] for the variant whose weight matches the
/// relaxation function.
pub fn lrt_work(params: &ModelParams, protocol: &Protocol, n: usize, mode: PhaseMode) -> Result<f64> {
    lrt_sum(params, protocol, n, mode, false)
}

/// Linear-response excess work from the double time integral of the
/// relaxation function; identical to [`lrt_work`] except the per-mode weight
/// is sin²(ka).
pub fn lrt_work_via_relaxation(
    params: &ModelParams,
    protocol: &Protocol,
    n: usize,
    mode: PhaseMode,
) -> Result<f64> {
    lrt_sum(params, protocol, n, mode, true)
}

fn lrt_sum(
    params: &ModelParams,
    protocol: &Protocol,
    n: usize,
    mode: PhaseMode,
    squared_weight: bool,
) -> Result<f64> {
    if protocol.schedule().is_some() {
        return Err(CoreError::InvalidParams(
            "linear-response work is defined for linear protocols".into(),
        ));
    }
    let tau = protocol.tau;
    let dlambda = protocol.lambda_f - protocol.lambda_i;
    let grid = momentum_grid(n)?;
    let pref = params.j.powi(2) / tau.powi(2) * (params.delta / 2.0).powi(2) * dlambda.powi(2);
    let terms: Vec<f64> = grid
        .iter()
        .map(|&ka| {
            let eps = ti_dispersion(params, protocol.lambda_i, ka);
            let osc = match mode {
                PhaseMode::Full => 1.0 - (2.0 * eps * tau).cos(),
                PhaseMode::Averaged => 1.0,
            };
            let weight = if squared_weight {
                ka.sin().powi(2)
            } else {
                ka.sin()
            };
            osc * weight / eps.powi(5)
        })
        .collect();
    Ok(pref * compensated_sum(terms))
}

/// Ground-state relaxation function at time t:
/// Ψ₀(t) = Σ_{k>0} J²·sin²(ka)·cos(2ε_k(start)·t)/ε_k³(start).
pub fn relaxation_function(params: &ModelParams, protocol: &Protocol, n: usize, t: f64) -> Result<f64> {
    let grid = momentum_grid(n)?;
    let terms: Vec<f64> = grid
        .iter()
        .map(|&ka| {
            let eps = ti_dispersion(params, protocol.lambda_i, ka);
            params.j.powi(2) * ka.sin().powi(2) * (2.0 * eps * t).cos() / eps.powi(3)
        })
        .collect();
    Ok(compensated_sum(terms))
}

/// Local-linearization sweep probability of one mode under an arbitrary
/// protocol: exp(−π·y²·τ/|r|) with y the transverse coupling and r the
/// normalized-time rate of the mode's gap coordinate at its own crossing.
/// None when the mode never crosses.
pub fn mode_lzf_probability(params: &ModelParams, protocol: &Protocol, ka: f64) -> Option<f64> {
    let (sin, cos) = ka.sin_cos();
    match protocol.schedule() {
        None => {
            // gap coordinate Δλ_k crosses zero iff the shifted control spans 0
            let shift = params.j / params.delta * (1.0 - cos);
            let (lo, hi) = (
                (protocol.lambda_i + shift).min(protocol.lambda_f + shift),
                (protocol.lambda_i + shift).max(protocol.lambda_f + shift),
            );
            if lo > 0.0 || hi < 0.0 {
                return None;
            }
            let rate = params.delta * (protocol.lambda_f - protocol.lambda_i).abs();
            let y = params.j * sin;
            Some((-PI * y * y * protocol.tau / rate).exp())
        }
        Some(sched) => {
            let samples = sched.samples();
            for w in samples.windows(2) {
                let x0 = w[0].a - w[0].b * cos;
                let x1 = w[1].a - w[1].b * cos;
                if x0 == 0.0 || (x0.signum() != x1.signum() && x1 != 0.0) {
                    let frac = if x0 == 0.0 { 0.0 } else { x0 / (x0 - x1) };
                    let b_star = w[0].b + frac * (w[1].b - w[0].b);
                    let rate = ((x1 - x0) / (w[1].s - w[0].s)).abs();
                    if rate == 0.0 {
                        return None;
                    }
                    let y = b_star * sin;
                    return Some((-PI * y * y * protocol.tau / rate).exp());
                }
            }
            None
        }
    }
}

/// Fast-regime chain work as the full per-mode sweep sum,
/// Σ_k 2ε_k(end)·p_k; the curve whose continuum limit is [`kzm_work`].
/// Valid for any protocol whose modes cross their gap minima.
pub fn lzf_sum_work(params: &ModelParams, protocol: &Protocol, n: usize) -> Result<f64> {
    let grid = momentum_grid(n)?;
    let terms: Vec<f64> = grid
        .iter()
        .map(|&ka| {
            let p = mode_lzf_probability(params, protocol, ka).unwrap_or(0.0);
            2.0 * crate::dynamics::final_mode_energy(params, protocol, ka) * p
        })
        .collect();
    Ok(compensated_sum(terms))
}

/// Lowest-mode-only counterpart of [`lzf_sum_work`], the slow-regime curve
/// for arbitrary protocols.
pub fn lzf_lowest_mode_sum_work(params: &ModelParams, protocol: &Protocol, n: usize) -> Result<f64> {
    let ka = momentum_grid(n)?[0];
    let p = mode_lzf_probability(params, protocol, ka).unwrap_or(0.0);
    Ok(2.0 * crate::dynamics::final_mode_energy(params, protocol, ka) * p)
}

/// Continuum-in-k version of [`lzf_sum_work`]:
/// (N/π)·∫₀^π ε(end, ka)·p_sweep(ka) d(ka). This is the fast-regime curve
/// for arbitrary protocols; it keeps its power-law decay where the discrete
/// sum collapses onto the lowest mode.
pub fn lzf_continuum_work(params: &ModelParams, protocol: &Protocol, n: usize) -> Result<f64> {
    let spec = QuadratureSpec::with_rel_tol(1e-9);
    let r = integrate(
        |ka| {
            let p = mode_lzf_probability(params, protocol, ka).unwrap_or(0.0);
            crate::dynamics::final_mode_energy(params, protocol, ka) * p
        },
        0.0,
        PI,
        &spec,
    )?;
    Ok(n as f64 / PI * r.value)
}

/// Discrete adiabatic work sum valid for arbitrary protocols (used for
/// schedule-driven crossover curves).
pub fn apt_sum_work(
    params: &ModelParams,
    protocol: &Protocol,
    n: usize,
    mode: PhaseMode,
) -> Result<f64> {
    let grid = momentum_grid(n)?;
    let mut terms = Vec::with_capacity(grid.len());
    for &ka in &grid {
        let p = apt_ti_probability(params, protocol, ka, mode)?;
        terms.push(2.0 * crate::dynamics::final_mode_energy(params, protocol, ka) * p);
    }
    Ok(compensated_sum(terms))
}
