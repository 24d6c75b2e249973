//! Crossover times between the fast, slow, and very-slow scaling regimes,
//! regime classification, and (N, τ) phase-diagram generation.

use crate::approx::{
    apt_lz_probability, apt_sum_work, apt_ti_work, f_coefficient, kzm_half_constant, kzm_work,
    lzf_continuum_work, lzf_lowest_mode_sum_work, lzf_lowest_mode_work, lzf_probability, AptSum,
    PhaseMode,
};
use crate::error::{CoreError, Result};
use crate::models::{validate_chain_size, ModelParams, Protocol, Schedule};
use crate::specfun::lambert_w_minus1;
use num_complex::Complex64;
use std::f64::consts::PI;

/// How a crossover time was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrossoverMethod {
    Asymptotic,
    NumericRoot,
}

impl CrossoverMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            CrossoverMethod::Asymptotic => "asymptotic",
            CrossoverMethod::NumericRoot => "numeric-root",
        }
    }
}

/// Scaling regime of a (duration, size) point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegimeLabel {
    Kzm,
    Lzf,
    Apt,
    KzmHalf,
    AptHalf,
}

impl RegimeLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            RegimeLabel::Kzm => "KZM",
            RegimeLabel::Lzf => "LZF",
            RegimeLabel::Apt => "APT",
            RegimeLabel::KzmHalf => "KZM-half",
            RegimeLabel::AptHalf => "APT-half",
        }
    }
}

/// Crossover summary for one chain size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossoverReport {
    /// Fast→slow crossover, dimensionless (π²/N²)(J²/Δ)·τ₁.
    pub tau1_scaled: f64,
    /// Slow→very-slow crossover, dimensionless.
    pub tau2_scaled: f64,
    pub tau1: f64,
    pub tau2: f64,
    pub method: CrossoverMethod,
    pub n: usize,
    pub delta_over_j: f64,
}

/// A crossover time of the driven avoided crossing, both ways of getting it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LzCrossover {
    /// Root of the sweep-formula = adiabatic-estimate condition, J²τ_c/Δ.
    pub numeric_scaled: f64,
    /// Printed log + log-log asymptotic, J²τ_c/Δ.
    pub asymptotic_scaled: f64,
}

const BISECT_ITERS: usize = 200;

/// Bisection on ln x for a sign change of `f`; `lo`/`hi` must bracket.
fn bisect_log(f: &dyn Fn(f64) -> Result<f64>, lo: f64, hi: f64) -> Result<f64> {
    let (mut a, mut b) = (lo.ln(), hi.ln());
    let (fa, fb) = (f(lo)?, f(hi)?);
    if fa == 0.0 {
        return Ok(lo);
    }
    if fb == 0.0 {
        return Ok(hi);
    }
    if fa.signum() == fb.signum() {
        return Err(CoreError::RootNotBracketed {
            lo,
            hi,
            f_lo: fa,
            f_hi: fb,
        });
    }
    let rising = fa < 0.0;
    for _ in 0..BISECT_ITERS {
        let m = 0.5 * (a + b);
        let fm = f(m.exp())?;
        if fm == 0.0 {
            return Ok(m.exp());
        }
        if (fm < 0.0) == rising {
            a = m;
        } else {
            b = m;
        }
    }
    Ok((0.5 * (a + b)).exp())
}

/// Expand `hi` geometrically from `lo` until `f` changes sign, then bisect.
fn bracket_and_bisect(f: &dyn Fn(f64) -> Result<f64>, lo: f64, limit: f64) -> Result<f64> {
    let f_lo = f(lo)?;
    let mut hi = lo * 2.0;
    let mut f_hi = f(hi)?;
    while f_hi.signum() == f_lo.signum() && hi < limit {
        hi *= 2.0;
        f_hi = f(hi)?;
    }
    if f_hi.signum() == f_lo.signum() {
        return Err(CoreError::RootNotBracketed {
            lo,
            hi,
            f_lo,
            f_hi,
        });
    }
    bisect_log(f, lo, hi)
}

/// Golden-section minimum of `f` on [lo, hi] in ln x.
fn golden_min(f: &dyn Fn(f64) -> Result<f64>, lo: f64, hi: f64) -> Result<f64> {
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (lo.ln(), hi.ln());
    let mut c = b - phi * (b - a);
    let mut d = a + phi * (b - a);
    let (mut fc, mut fd) = (f(c.exp())?, f(d.exp())?);
    for _ in 0..BISECT_ITERS {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = f(c.exp())?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = f(d.exp())?;
        }
    }
    Ok((0.5 * (a + b)).exp())
}

/// Crossover duration where the exponential sweep law hands over to the
/// adiabatic τ⁻² estimate for the symmetric crossing drive. The numeric
/// value is the root of the defining equality (with the phase-averaged
/// estimate); the asymptotic value is
/// (2/π)·{ln[(4/π)(Δ/2J)³] + ln ln[(4/π)(Δ/2J)³]}.
pub fn lz_crossover_time(params: &ModelParams) -> Result<LzCrossover> {
    if params.delta_over_j() <= 1.0 {
        return Err(CoreError::InvalidParams(format!(
            "crossover time needs Delta/J > 1, got {}",
            params.delta_over_j()
        )));
    }
    let diff = |x: f64| {
        let tau = params.tau_from_scaled_lz(x);
        let protocol = Protocol::linear_symmetric(tau)?;
        let apt = apt_lz_probability(params, &protocol, PhaseMode::Averaged)?;
        Ok(lzf_probability(params, tau).ln() - apt.ln())
    };
    // start past the spurious low-τ intersection where the τ⁻² envelope
    // still exceeds 1
    let numeric = bracket_and_bisect(&diff, 1.0, 1e9)?;

    let arg = 4.0 / PI * (params.delta / (2.0 * params.j)).powi(3);
    let l = arg.ln();
    if l <= 0.0 {
        return Err(CoreError::InvalidParams(format!(
            "asymptotic crossover needs (4/π)(Δ/2J)³ > 1, got {arg}"
        )));
    }
    Ok(LzCrossover {
        numeric_scaled: numeric,
        asymptotic_scaled: 2.0 / PI * (l + l.ln()),
    })
}

fn scaled_pair(params: &ModelParams, n: usize, scaled: f64) -> (f64, f64) {
    (scaled, params.tau_from_scaled_ti(scaled, n))
}

/// Fast→slow chain crossover from the closed form:
/// scaled τ₁ = −Re W₋₁(−π/8)/(2π) ≈ 0.152, independent of N.
pub fn ti_tau1(params: &ModelParams, n: usize) -> Result<(f64, f64)> {
    validate_chain_size(n)?;
    let w = lambert_w_minus1(Complex64::new(-PI / 8.0, 0.0))?;
    let scaled = -w.re / (2.0 * PI);
    Ok(scaled_pair(params, n, scaled))
}

/// Fast→slow crossover as the closest log-approach of the power-law and
/// single-mode curves (they never intersect on the real axis).
pub fn ti_tau1_numeric(params: &ModelParams, n: usize) -> Result<(f64, f64)> {
    validate_chain_size(n)?;
    let gap = |s: f64| {
        let protocol = Protocol::linear_symmetric(params.tau_from_scaled_ti(s, n))?;
        Ok(
            (kzm_work(params, &protocol, n).ln() - lzf_lowest_mode_work(params, &protocol, n).ln())
                .abs(),
        )
    };
    let scaled = golden_min(&gap, 1e-3, 10.0)?;
    Ok(scaled_pair(params, n, scaled))
}

/// Slow→very-slow chain crossover.
///
/// The numeric root equates the single-mode exponential with the continuum
/// adiabatic form; the asymptotic value is the printed log + log-log
/// expression, which carries O(1/log N) error.
pub fn ti_tau2(params: &ModelParams, n: usize, method: CrossoverMethod) -> Result<(f64, f64)> {
    validate_chain_size(n)?;
    match method {
        CrossoverMethod::Asymptotic => {
            let f = f_coefficient(params, &Protocol::linear_symmetric(1.0).unwrap())?;
            let g = 4.0 / PI * (params.j / (4.0 * params.delta) * f).powf(-0.5)
                * (n as f64 / PI).powf(1.5);
            let l = g.ln();
            if l <= 0.0 {
                return Err(CoreError::InvalidParams(format!(
                    "asymptotic crossover needs its log argument above 1, got {g}"
                )));
            }
            Ok(scaled_pair(params, n, 2.0 / PI * (l + l.ln())))
        }
        CrossoverMethod::NumericRoot => {
            let diff = |s: f64| {
                let protocol = Protocol::linear_symmetric(params.tau_from_scaled_ti(s, n))?;
                let lzf = lzf_lowest_mode_work(params, &protocol, n);
                let apt = apt_ti_work(params, &protocol, n, AptSum::Continuous)?;
                Ok(lzf.ln() - apt.ln())
            };
            // the exponential-vs-power-law difference peaks at s = 2/π;
            // the physical root sits on the decreasing branch beyond it
            let scaled = bracket_and_bisect(&diff, 2.0 / PI, 1e6)?;
            Ok(scaled_pair(params, n, scaled))
        }
    }
}

/// Crossover when stopping at the critical point:
/// scaled τ_c = 1/(8K) ≈ 1.049, independent of N.
pub fn half_crossover_time(params: &ModelParams, n: usize) -> Result<(f64, f64)> {
    validate_chain_size(n)?;
    let k = kzm_half_constant()?;
    Ok(scaled_pair(params, n, 1.0 / (8.0 * k)))
}

/// Both chain crossovers for one size.
pub fn crossover_report(
    params: &ModelParams,
    n: usize,
    method: CrossoverMethod,
) -> Result<CrossoverReport> {
    let (tau1_scaled, tau1) = match method {
        CrossoverMethod::Asymptotic => ti_tau1(params, n)?,
        CrossoverMethod::NumericRoot => ti_tau1_numeric(params, n)?,
    };
    let (tau2_scaled, tau2) = ti_tau2(params, n, method)?;
    Ok(CrossoverReport {
        tau1_scaled,
        tau2_scaled,
        tau1,
        tau2,
        method,
        n,
        delta_over_j: params.delta_over_j(),
    })
}

/// Crossovers for a tabulated two-parameter schedule, by numeric methods on
/// the schedule-driven curves (per-mode linearized sweep sums and the
/// generic adiabatic sum). Scaled values use the effective parameters of the
/// schedule's crossing linearization.
pub fn schedule_crossover_report(schedule: &Schedule, n: usize) -> Result<CrossoverReport> {
    validate_chain_size(n)?;
    let eff = schedule.effective_params().ok_or_else(|| {
        CoreError::InvalidParams("schedule never crosses its critical surface".into())
    })?;
    let at = |s: f64| -> Result<Protocol> {
        Protocol::two_parameter(schedule.clone(), eff.tau_from_scaled_ti(s, n))
    };

    // fast-regime curve: continuum mode integral (keeps its power law where
    // the discrete sum collapses onto the lowest mode)
    let gap = |s: f64| {
        let protocol = at(s)?;
        let cont = lzf_continuum_work(&eff, &protocol, n)?;
        let lowest = lzf_lowest_mode_sum_work(&eff, &protocol, n)?;
        Ok((cont.ln() - lowest.ln()).abs())
    };
    let tau1_scaled = golden_min(&gap, 1e-3, 10.0)?;

    let diff = |s: f64| {
        let protocol = at(s)?;
        let lowest = lzf_lowest_mode_sum_work(&eff, &protocol, n)?;
        let apt = apt_sum_work(&eff, &protocol, n, PhaseMode::Averaged)?;
        Ok(lowest.ln() - apt.ln())
    };
    let tau2_scaled = bracket_and_bisect(&diff, 2.0 / PI, 1e6)?;

    Ok(CrossoverReport {
        tau1_scaled,
        tau2_scaled,
        tau1: eff.tau_from_scaled_ti(tau1_scaled, n),
        tau2: eff.tau_from_scaled_ti(tau2_scaled, n),
        method: CrossoverMethod::NumericRoot,
        n,
        delta_over_j: eff.delta_over_j(),
    })
}

/// Classify the scaling regime of a run. Crossing drives fall into three
/// regimes split at τ₁ (closed form) and τ₂ (numeric root); half drives
/// split once at the 1/(8K) point.
pub fn classify_regime(params: &ModelParams, n: usize, tau: f64, half: bool) -> Result<RegimeLabel> {
    if tau <= 0.0 || tau.is_nan() {
        return Err(CoreError::InvalidParams(format!(
            "duration must be positive, got {tau}"
        )));
    }
    if half {
        let (_, tau_c) = half_crossover_time(params, n)?;
        return Ok(if tau < tau_c {
            RegimeLabel::KzmHalf
        } else {
            RegimeLabel::AptHalf
        });
    }
    let (_, tau1) = ti_tau1(params, n)?;
    let (_, tau2) = ti_tau2(params, n, CrossoverMethod::NumericRoot)?;
    Ok(if tau < tau1 {
        RegimeLabel::Kzm
    } else if tau < tau2 {
        RegimeLabel::Lzf
    } else {
        RegimeLabel::Apt
    })
}

/// One grid cell of the phase diagram.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseCell {
    pub n: usize,
    pub tau: f64,
    pub scaled_tau: f64,
    pub regime: RegimeLabel,
    /// First cell of its row at or beyond the fast→slow boundary.
    pub is_boundary1: bool,
    /// First cell of its row at or beyond the slow→very-slow boundary.
    pub is_boundary2: bool,
    /// False where J²τ/Δ < 1: too fast for the power-law description.
    pub reliable: bool,
}

/// One point of a sampled boundary curve τ(N).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryPoint {
    pub n: usize,
    pub tau: f64,
    pub scaled_tau: f64,
}

/// Regime map over (N, τ) with its two boundary curves.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseDiagram {
    /// Row-major: outer loop over N, inner over τ (both ascending).
    pub cells: Vec<PhaseCell>,
    pub boundary_kzm_lzf: Vec<BoundaryPoint>,
    pub boundary_lzf_apt: Vec<BoundaryPoint>,
}

/// Even chain sizes spanning [n_min, n_max], ascending, deduplicated.
fn chain_sizes(n_min: usize, n_max: usize, count: usize) -> Result<Vec<usize>> {
    validate_chain_size(n_min)?;
    validate_chain_size(n_max)?;
    if n_max < n_min || count < 2 {
        return Err(CoreError::InvalidParams(format!(
            "need n_min <= n_max and at least 2 sizes, got [{n_min}, {n_max}] x {count}"
        )));
    }
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let frac = i as f64 / (count - 1) as f64;
        let raw = n_min as f64 + frac * (n_max - n_min) as f64;
        let even = 2 * ((raw / 2.0).round() as usize).max(1);
        let even = even.clamp(n_min, n_max);
        if out.last() != Some(&even) {
            out.push(even);
        }
    }
    Ok(out)
}

fn log_spaced(lo: f64, hi: f64, count: usize) -> Result<Vec<f64>> {
    if lo.is_nan() || hi.is_nan() || lo <= 0.0 || hi <= lo || count < 2 {
        return Err(CoreError::InvalidParams(format!(
            "need 0 < lo < hi and at least 2 points, got [{lo}, {hi}] x {count}"
        )));
    }
    let (a, b) = (lo.ln(), hi.ln());
    Ok((0..count)
        .map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp())
        .collect())
}

fn diagram_from_boundaries(
    params: &ModelParams,
    sizes: &[usize],
    taus: &[f64],
    tau1_of: &dyn Fn(usize) -> Result<f64>,
    tau2_of: &dyn Fn(usize) -> Result<f64>,
) -> Result<PhaseDiagram> {
    let mut cells = Vec::with_capacity(sizes.len() * taus.len());
    for &n in sizes {
        let tau1 = tau1_of(n)?;
        let tau2 = tau2_of(n)?;
        let mut seen1 = false;
        let mut seen2 = false;
        for &tau in taus {
            let regime = if tau < tau1 {
                RegimeLabel::Kzm
            } else if tau < tau2 {
                RegimeLabel::Lzf
            } else {
                RegimeLabel::Apt
            };
            let is_boundary1 = tau >= tau1 && !seen1;
            seen1 |= is_boundary1;
            let is_boundary2 = tau >= tau2 && !seen2;
            seen2 |= is_boundary2;
            cells.push(PhaseCell {
                n,
                tau,
                scaled_tau: params.scaled_tau_ti(tau, n),
                regime,
                is_boundary1,
                is_boundary2,
                reliable: params.scaled_tau_lz(tau) >= 1.0,
            });
        }
    }

    let n_min = *sizes.first().unwrap();
    let n_max = *sizes.last().unwrap();
    let dense = chain_sizes(n_min, n_max, 200.min((n_max - n_min) / 2 + 2).max(2))?;
    let mut boundary1 = Vec::with_capacity(dense.len());
    let mut boundary2 = Vec::with_capacity(dense.len());
    for &n in &dense {
        let tau1 = tau1_of(n)?;
        let tau2 = tau2_of(n)?;
        boundary1.push(BoundaryPoint {
            n,
            tau: tau1,
            scaled_tau: params.scaled_tau_ti(tau1, n),
        });
        boundary2.push(BoundaryPoint {
            n,
            tau: tau2,
            scaled_tau: params.scaled_tau_ti(tau2, n),
        });
    }
    Ok(PhaseDiagram {
        cells,
        boundary_kzm_lzf: boundary1,
        boundary_lzf_apt: boundary2,
    })
}

/// Regime map for the linear crossing drive.
pub fn phase_diagram(
    params: &ModelParams,
    n_range: (usize, usize),
    n_count: usize,
    tau_range: (f64, f64),
    tau_count: usize,
) -> Result<PhaseDiagram> {
    let sizes = chain_sizes(n_range.0, n_range.1, n_count)?;
    let taus = log_spaced(tau_range.0, tau_range.1, tau_count)?;
    diagram_from_boundaries(
        params,
        &sizes,
        &taus,
        &|n| ti_tau1(params, n).map(|(_, t)| t),
        &|n| ti_tau2(params, n, CrossoverMethod::NumericRoot).map(|(_, t)| t),
    )
}

/// Regime map for a tabulated two-parameter schedule; boundaries are
/// recomputed per chain size from the schedule-driven curves.
pub fn schedule_phase_diagram(
    schedule: &Schedule,
    n_range: (usize, usize),
    n_count: usize,
    tau_range: (f64, f64),
    tau_count: usize,
) -> Result<PhaseDiagram> {
    let eff = schedule.effective_params().ok_or_else(|| {
        CoreError::InvalidParams("schedule never crosses its critical surface".into())
    })?;
    let sizes = chain_sizes(n_range.0, n_range.1, n_count)?;
    let taus = log_spaced(tau_range.0, tau_range.1, tau_count)?;
    diagram_from_boundaries(
        &eff,
        &sizes,
        &taus,
        &|n| schedule_crossover_report(schedule, n).map(|r| r.tau1),
        &|n| schedule_crossover_report(schedule, n).map(|r| r.tau2),
    )
}
