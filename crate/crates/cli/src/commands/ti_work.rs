//! `ti-work`: duration sweep for the transverse-field chain.

use crate::config::{AptForm, CurveKind, Model, ProtocolKindConfig, RunConfig};
use crate::error::Result;
use crate::output::CsvFile;
use qanneal::approx::{
    apt_half_work, apt_sum_work, apt_ti_work, exact_integral_work, kzm_half_work, kzm_work,
    lrt_work, lzf_continuum_work, lzf_lowest_mode_sum_work, lzf_lowest_mode_work, AptSum,
};
use qanneal::dynamics::excess_work_ti;
use qanneal::specfun::QuadratureSpec;
use std::path::PathBuf;

pub fn run(config: &RunConfig) -> Result<PathBuf> {
    let model = Model::Ti;
    let params = config.model_params()?;
    let n = config.params.n;
    qanneal::models::validate_chain_size(n)?;
    let curves = config.resolve_curves(model)?;
    let taus = config.tau_grid(model)?;
    let spec = config.integrator.to_spec();
    let schedule = config.load_schedule()?;
    let half = config.protocol.kind == ProtocolKindConfig::LinearHalf;
    let two_param = config.protocol.kind == ProtocolKindConfig::TwoParameter;
    let phase_mode = config.phase_mode();
    let quad = QuadratureSpec::default();

    // scaled abscissa: for schedules, from the crossing linearization
    let scaled_params = if two_param {
        schedule
            .as_ref()
            .and_then(|s| s.effective_params())
            .ok_or_else(|| {
                crate::error::CliError::Config(
                    "schedule never crosses its critical surface; no scaled axis".into(),
                )
            })?
    } else {
        params
    };

    let mut columns: Vec<&str> = vec!["tau", "scaled_tau"];
    let has = |c: CurveKind| curves.contains(&c);
    if has(CurveKind::Exact) {
        columns.push("W_exact");
    }
    if has(CurveKind::Kzm) {
        columns.push("W_kzm");
    }
    if has(CurveKind::Lzf) {
        columns.push("W_lzf_mode");
    }
    if has(CurveKind::Apt) {
        columns.push("W_apt");
    }
    if has(CurveKind::Lrt) {
        columns.push("W_lrt");
    }
    if has(CurveKind::ExactIntegral) {
        columns.push("W_exact_integral");
    }

    let out = config.output.clone().unwrap_or_else(|| {
        PathBuf::from(if half { "ti_work_half.csv" } else { "ti_work.csv" })
    });
    let mut file = CsvFile::create(&out)?;
    super::write_metadata(&mut file, config, model, schedule.as_ref())?;
    file.header(&columns)?;

    // rows in order; the mode loop inside the exact solver is the parallel axis
    for &tau in &taus {
        let protocol = config.protocol_at(tau, schedule.as_ref())?;
        let mut row = vec![tau, scaled_params.scaled_tau_ti(tau, n)];
        if has(CurveKind::Exact) {
            row.push(excess_work_ti(&params, &protocol, n, &spec)?.total);
        }
        if has(CurveKind::Kzm) {
            row.push(if half {
                kzm_half_work(&params, tau, n)?
            } else if two_param {
                lzf_continuum_work(&scaled_params, &protocol, n)?
            } else {
                kzm_work(&params, &protocol, n)
            });
        }
        if has(CurveKind::Lzf) {
            row.push(if two_param {
                lzf_lowest_mode_sum_work(&scaled_params, &protocol, n)?
            } else {
                lzf_lowest_mode_work(&params, &protocol, n)
            });
        }
        if has(CurveKind::Apt) {
            row.push(if half {
                apt_half_work(&params, tau, n)
            } else if two_param {
                apt_sum_work(&scaled_params, &protocol, n, phase_mode)?
            } else {
                match config.apt_form() {
                    AptForm::Continuous => apt_ti_work(&params, &protocol, n, AptSum::Continuous)?,
                    AptForm::Discrete => {
                        apt_ti_work(&params, &protocol, n, AptSum::Discrete(phase_mode))?
                    }
                }
            });
        }
        if has(CurveKind::Lrt) {
            row.push(lrt_work(&params, &protocol, n, phase_mode)?);
        }
        if has(CurveKind::ExactIntegral) {
            row.push(exact_integral_work(&params, &protocol, n, &quad)?);
        }
        file.float_row(&row)?;
    }
    file.finish()
}
