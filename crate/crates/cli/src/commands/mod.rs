//! Subcommand implementations.

pub mod crossover;
pub mod lz_work;
pub mod phase_diagram;
pub mod sweep;
pub mod ti_work;

use crate::config::{Model, ProtocolKindConfig, RunConfig};
use crate::error::Result;
use crate::output::{fmt_float, CsvFile};
use qanneal::models::Schedule;

/// Emit the '#'-prefixed metadata block: every physical and numerical knob
/// needed to reproduce the run.
pub fn write_metadata(
    file: &mut CsvFile,
    config: &RunConfig,
    model: Model,
    schedule: Option<&Schedule>,
) -> Result<()> {
    let model_name = match model {
        Model::Lz => "lz",
        Model::Ti => "ti",
    };
    file.comment(&format!("model = {model_name}"))?;
    file.comment(&format!("j = {}", fmt_float(config.params.j)))?;
    file.comment(&format!("delta = {}", fmt_float(config.params.delta)))?;
    file.comment(&format!(
        "delta_over_j = {}",
        fmt_float(config.params.delta / config.params.j)
    ))?;
    if model == Model::Ti {
        file.comment(&format!("n_spins = {}", config.params.n))?;
    }
    let kind = match config.protocol.kind {
        ProtocolKindConfig::LinearSymmetric => "linear-symmetric",
        ProtocolKindConfig::LinearHalf => "linear-half",
        ProtocolKindConfig::TwoParameter => "two-parameter",
    };
    file.comment(&format!("protocol = {kind}"))?;
    if let Some(sched) = schedule {
        let table: Vec<String> = sched
            .samples()
            .iter()
            .map(|p| format!("{}:{}:{}", fmt_float(p.s), fmt_float(p.a), fmt_float(p.b)))
            .collect();
        file.comment(&format!("schedule = {}", table.join(";")))?;
    }
    file.comment(&format!(
        "tau_grid = min {} max {} count {} units {}",
        fmt_float(config.tau.min),
        fmt_float(config.tau.max),
        config.tau.count,
        if config.tau.scaled { "scaled" } else { "raw" }
    ))?;
    file.comment(&format!(
        "integrator = rk4 steps_per_unit_phase {} norm_drift_tol {} min_steps {}",
        config.integrator.steps_per_unit_phase,
        fmt_float(config.integrator.norm_drift_tol),
        config.integrator.min_steps
    ))?;
    let curves = config.resolve_curves(model)?;
    let names: Vec<&str> = curves.iter().map(|c| c.as_str()).collect();
    file.comment(&format!("curves = {}", names.join(",")))?;
    file.comment(&format!(
        "phase_mode = {}",
        match config.phase_mode() {
            qanneal::approx::PhaseMode::Averaged => "averaged",
            qanneal::approx::PhaseMode::Full => "full",
        }
    ))?;
    Ok(())
}
