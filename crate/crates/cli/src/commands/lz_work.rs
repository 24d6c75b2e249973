//! `lz-work`: duration sweep for the driven two-level crossing.

use crate::config::{CurveKind, Model, ProtocolKindConfig, RunConfig};
use crate::error::Result;
use crate::output::CsvFile;
use qanneal::approx::{apt_lz_probability, hlz_probability, lzf_probability, PhaseMode};
use qanneal::dynamics::evolve_lz;
use qanneal::models::lz_energy;
use std::path::PathBuf;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

pub fn run(config: &RunConfig) -> Result<PathBuf> {
    let model = Model::Lz;
    let params = config.model_params()?;
    let curves = config.resolve_curves(model)?;
    let taus = config.tau_grid(model)?;
    let spec = config.integrator.to_spec();
    let half = config.protocol.kind == ProtocolKindConfig::LinearHalf;

    let mut columns: Vec<&str> = vec!["tau", "J2tau_over_Delta"];
    let has = |c: CurveKind| curves.contains(&c);
    if has(CurveKind::Exact) {
        columns.push("W_exact");
    }
    if has(CurveKind::Lzf) {
        columns.push("W_lzf");
    }
    if has(CurveKind::Apt) {
        columns.push("W_apt_avg");
        columns.push("W_apt_full");
    }
    if has(CurveKind::Exact) {
        columns.push("p_exact");
        columns.push("norm_drift");
    }
    if has(CurveKind::Hlz) {
        columns.push("W_hlz");
    }

    let compute_row = |&tau: &f64| -> Result<Vec<f64>> {
        let protocol = config.protocol_at(tau, None)?;
        let e_final = lz_energy(&params, protocol.lambda_f);
        let mut row = vec![tau, params.scaled_tau_lz(tau)];
        let exact = if has(CurveKind::Exact) {
            Some(evolve_lz(&params, &protocol, &spec)?)
        } else {
            None
        };
        if let Some(r) = &exact {
            row.push(2.0 * e_final * r.p_excite);
        }
        if has(CurveKind::Lzf) {
            row.push(2.0 * e_final * lzf_probability(&params, tau));
        }
        if has(CurveKind::Apt) {
            let avg = apt_lz_probability(&params, &protocol, PhaseMode::Averaged)?;
            let full = apt_lz_probability(&params, &protocol, PhaseMode::Full)?;
            row.push(2.0 * e_final * avg);
            row.push(2.0 * e_final * full);
        }
        if let Some(r) = &exact {
            row.push(r.p_excite);
            row.push(r.norm_drift);
        }
        if has(CurveKind::Hlz) {
            row.push(2.0 * e_final * hlz_probability(&params, tau)?);
        }
        Ok(row)
    };

    #[cfg(feature = "parallel")]
    let rows: Vec<Result<Vec<f64>>> = taus.par_iter().map(compute_row).collect();
    #[cfg(not(feature = "parallel"))]
    let rows: Vec<Result<Vec<f64>>> = taus.iter().map(compute_row).collect();

    let out = config
        .output
        .clone()
        .unwrap_or_else(|| PathBuf::from(if half { "lz_work_half.csv" } else { "lz_work.csv" }));
    let mut file = CsvFile::create(&out)?;
    super::write_metadata(&mut file, config, model, None)?;
    file.header(&columns)?;
    for row in rows {
        file.float_row(&row?)?;
    }
    file.finish()
}
