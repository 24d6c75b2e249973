//! Run configuration: TOML file, overridden field-by-field by CLI flags.

use crate::error::{CliError, Result};
use qanneal::approx::PhaseMode;
use qanneal::dynamics::IntegratorSpec;
use qanneal::models::{ModelParams, Protocol, Schedule};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Lz,
    Ti,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ProtocolKindConfig {
    LinearSymmetric,
    LinearHalf,
    TwoParameter,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum PhaseModeConfig {
    Averaged,
    Full,
}

impl From<PhaseModeConfig> for PhaseMode {
    fn from(m: PhaseModeConfig) -> Self {
        match m {
            PhaseModeConfig::Averaged => PhaseMode::Averaged,
            PhaseModeConfig::Full => PhaseMode::Full,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum AptForm {
    Continuous,
    Discrete,
}

/// Curve families a work sweep can emit. `Lzf` is the exponential sweep law
/// for the two-level model and the lowest-mode form for the chain; `Kzm` and
/// `Apt` switch to their half-protocol variants when the drive stops at the
/// critical point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum CurveKind {
    Exact,
    Lzf,
    Apt,
    Kzm,
    Lrt,
    Hlz,
    ExactIntegral,
}

impl CurveKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            CurveKind::Exact => "exact",
            CurveKind::Lzf => "lzf",
            CurveKind::Apt => "apt",
            CurveKind::Kzm => "kzm",
            CurveKind::Lrt => "lrt",
            CurveKind::Hlz => "hlz",
            CurveKind::ExactIntegral => "exact-integral",
        }
    }
}

fn default_j() -> f64 {
    1.0
}
fn default_delta() -> f64 {
    1.0
}
fn default_n() -> usize {
    100
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ParamsConfig {
    pub j: f64,
    pub delta: f64,
    pub n: usize,
}

impl Default for ParamsConfig {
    fn default() -> Self {
        Self {
            j: default_j(),
            delta: default_delta(),
            n: default_n(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProtocolConfig {
    pub kind: ProtocolKindConfig,
    /// CSV of `s,a,b` samples; required when kind = two-parameter.
    pub schedule_file: Option<PathBuf>,
}

impl Default for ProtocolConfig {
    fn default() -> Self {
        Self {
            kind: ProtocolKindConfig::LinearSymmetric,
            schedule_file: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TauGridConfig {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    /// Interpret min/max as scaled durations (J²τ/Δ for the two-level model,
    /// (π²/N²)(J²/Δ)τ for the chain) instead of raw times.
    pub scaled: bool,
}

impl Default for TauGridConfig {
    fn default() -> Self {
        Self {
            min: 0.1,
            max: 10.0,
            count: 20,
            scaled: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IntegratorConfig {
    pub steps_per_unit_phase: u32,
    pub norm_drift_tol: f64,
    pub min_steps: u32,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        let spec = IntegratorSpec::default();
        Self {
            steps_per_unit_phase: spec.steps_per_unit_phase,
            norm_drift_tol: spec.norm_drift_tol,
            min_steps: spec.min_steps,
        }
    }
}

impl IntegratorConfig {
    pub fn to_spec(&self) -> IntegratorSpec {
        IntegratorSpec {
            steps_per_unit_phase: self.steps_per_unit_phase,
            norm_drift_tol: self.norm_drift_tol,
            min_steps: self.min_steps,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub model: Option<Model>,
    pub params: ParamsConfig,
    pub protocol: ProtocolConfig,
    pub tau: TauGridConfig,
    pub integrator: IntegratorConfig,
    /// Empty means the default set for the model/protocol combination.
    pub curves: Vec<CurveKind>,
    pub phase_mode: Option<PhaseModeConfig>,
    pub apt_form: Option<AptForm>,
    pub output: Option<PathBuf>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(CliError::io(path))?;
        toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn phase_mode(&self) -> PhaseMode {
        self.phase_mode.unwrap_or(PhaseModeConfig::Averaged).into()
    }

    pub fn apt_form(&self) -> AptForm {
        self.apt_form.unwrap_or(AptForm::Continuous)
    }

    pub fn model_params(&self) -> Result<ModelParams> {
        Ok(ModelParams::new(self.params.j, self.params.delta)?)
    }

    /// Build the protocol at duration τ, reading the schedule file if needed.
    pub fn protocol_at(&self, tau: f64, schedule: Option<&Schedule>) -> Result<Protocol> {
        Ok(match self.protocol.kind {
            ProtocolKindConfig::LinearSymmetric => Protocol::linear_symmetric(tau)?,
            ProtocolKindConfig::LinearHalf => Protocol::linear_half(tau)?,
            ProtocolKindConfig::TwoParameter => {
                let sched = schedule.ok_or_else(|| {
                    CliError::Config("two-parameter protocol needs a schedule".into())
                })?;
                Protocol::two_parameter(sched.clone(), tau)?
            }
        })
    }

    pub fn load_schedule(&self) -> Result<Option<Schedule>> {
        match (&self.protocol.kind, &self.protocol.schedule_file) {
            (ProtocolKindConfig::TwoParameter, Some(path)) => {
                Ok(Some(read_schedule_csv(path)?))
            }
            (ProtocolKindConfig::TwoParameter, None) => Err(CliError::Config(
                "protocol.kind = two-parameter requires protocol.schedule_file".into(),
            )),
            (_, Some(_)) => Err(CliError::Config(
                "schedule_file is only meaningful with the two-parameter protocol".into(),
            )),
            (_, None) => Ok(None),
        }
    }

    /// Log-spaced τ grid in raw time units (a single point when count = 1).
    pub fn tau_grid(&self, model: Model) -> Result<Vec<f64>> {
        let g = &self.tau;
        if g.count == 0 {
            return Err(CliError::Config("tau.count must be at least 1".into()));
        }
        if g.min.is_nan() || g.max.is_nan() || g.min <= 0.0 || g.max < g.min {
            return Err(CliError::Config(format!(
                "tau range must satisfy 0 < min <= max, got [{}, {}]",
                g.min, g.max
            )));
        }
        if g.count > 1 && g.max == g.min {
            return Err(CliError::Config(
                "tau.count > 1 needs tau.max > tau.min".into(),
            ));
        }
        let params = self.model_params()?;
        let convert = |x: f64| -> f64 {
            if !g.scaled {
                return x;
            }
            match model {
                Model::Lz => params.tau_from_scaled_lz(x),
                Model::Ti => params.tau_from_scaled_ti(x, self.params.n),
            }
        };
        let (lo, hi) = (convert(g.min), convert(g.max));
        if g.count == 1 {
            return Ok(vec![lo]);
        }
        let (a, b) = (lo.ln(), hi.ln());
        Ok((0..g.count)
            .map(|i| (a + (b - a) * i as f64 / (g.count - 1) as f64).exp())
            .collect())
    }

    /// The curve set actually emitted, validated against the model/protocol.
    pub fn resolve_curves(&self, model: Model) -> Result<Vec<CurveKind>> {
        use CurveKind::*;
        let half = self.protocol.kind == ProtocolKindConfig::LinearHalf;
        let two_param = self.protocol.kind == ProtocolKindConfig::TwoParameter;
        let valid: &[CurveKind] = match (model, half, two_param) {
            (Model::Lz, false, false) => &[Exact, Lzf, Apt],
            (Model::Lz, true, false) => &[Exact, Hlz, Apt],
            (Model::Lz, _, true) => {
                return Err(CliError::Config(
                    "the two-level model has no two-parameter drive".into(),
                ))
            }
            (Model::Ti, false, false) => &[Exact, Kzm, Lzf, Apt, Lrt, ExactIntegral],
            (Model::Ti, true, false) => &[Exact, Kzm, Apt],
            (Model::Ti, _, true) => &[Exact, Kzm, Lzf, Apt],
        };
        if self.curves.is_empty() {
            let default: Vec<CurveKind> = match (model, half) {
                (Model::Lz, false) => vec![Exact, Lzf, Apt],
                (Model::Lz, true) => vec![Exact, Hlz, Apt],
                (Model::Ti, false) if !two_param => vec![Exact, Kzm, Lzf, Apt, Lrt],
                (Model::Ti, false) => vec![Exact, Kzm, Lzf, Apt],
                (Model::Ti, true) => vec![Exact, Kzm, Apt],
            };
            return Ok(default);
        }
        for c in &self.curves {
            if !valid.contains(c) {
                return Err(CliError::Config(format!(
                    "curve '{}' is not valid for this model/protocol combination \
                     (valid: {})",
                    c.as_str(),
                    valid
                        .iter()
                        .map(|v| v.as_str())
                        .collect::<Vec<_>>()
                        .join(", ")
                )));
            }
        }
        let mut out = self.curves.clone();
        out.dedup();
        Ok(out)
    }
}

/// Parse a schedule CSV: `s,a,b` per line, '#' comments and an optional
/// header row allowed.
pub fn read_schedule_csv(path: &Path) -> Result<Schedule> {
    let text = std::fs::read_to_string(path).map_err(CliError::io(path))?;
    let mut samples = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parts: Vec<&str> = line.split(',').map(str::trim).collect();
        if idx == 0 && parts.iter().any(|p| p.parse::<f64>().is_err()) {
            continue; // header row
        }
        if parts.len() != 3 {
            return Err(CliError::Config(format!(
                "{}:{}: expected 's,a,b', got '{line}'",
                path.display(),
                idx + 1
            )));
        }
        let mut vals = [0.0f64; 3];
        for (slot, part) in vals.iter_mut().zip(&parts) {
            *slot = part.parse().map_err(|e| {
                CliError::Config(format!("{}:{}: {e}", path.display(), idx + 1))
            })?;
        }
        samples.push((vals[0], vals[1], vals[2]));
    }
    Ok(Schedule::new(samples)?)
}
