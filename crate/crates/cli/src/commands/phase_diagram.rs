//! `phase-diagram`: regime map over (N, τ) plus the two boundary curves.

use crate::config::RunConfig;
use crate::error::{CliError, Result};
use crate::output::CsvFile;
use qanneal::crossover::{phase_diagram, schedule_phase_diagram, PhaseDiagram};
use std::path::{Path, PathBuf};

pub struct GridArgs {
    pub n_min: usize,
    pub n_max: usize,
    pub n_count: usize,
    pub tau_min: f64,
    pub tau_max: f64,
    pub tau_count: usize,
}

fn sibling(base: &Path, suffix: &str) -> PathBuf {
    let stem = base
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "phase_diagram".into());
    base.with_file_name(format!("{stem}-{suffix}.csv"))
}

pub fn run(config: &RunConfig, grid: &GridArgs) -> Result<Vec<PathBuf>> {
    let params = config.model_params()?;
    let schedule = config.load_schedule()?;
    if grid.n_count < 2 || grid.tau_count < 2 {
        return Err(CliError::Config(
            "phase diagram needs at least a 2x2 grid".into(),
        ));
    }

    let diagram: PhaseDiagram = match &schedule {
        Some(sched) => schedule_phase_diagram(
            sched,
            (grid.n_min, grid.n_max),
            grid.n_count,
            (grid.tau_min, grid.tau_max),
            grid.tau_count,
        )?,
        None => phase_diagram(
            &params,
            (grid.n_min, grid.n_max),
            grid.n_count,
            (grid.tau_min, grid.tau_max),
            grid.tau_count,
        )?,
    };

    let base = config
        .output
        .clone()
        .unwrap_or_else(|| PathBuf::from("phase_diagram.csv"));

    let mut grid_file = CsvFile::create(&base)?;
    super::write_metadata(
        &mut grid_file,
        config,
        crate::config::Model::Ti,
        schedule.as_ref(),
    )?;
    grid_file.comment(&format!(
        "grid = N [{}, {}] x {} ; tau [{}, {}] x {}",
        grid.n_min, grid.n_max, grid.n_count, grid.tau_min, grid.tau_max, grid.tau_count
    ))?;
    grid_file.header(&[
        "N",
        "tau",
        "scaled_tau",
        "regime",
        "is_boundary1",
        "is_boundary2",
        "reliable_flag",
    ])?;
    for cell in &diagram.cells {
        grid_file.row(&[
            cell.n.to_string(),
            crate::output::fmt_float(cell.tau),
            crate::output::fmt_float(cell.scaled_tau),
            cell.regime.as_str().to_string(),
            u8::from(cell.is_boundary1).to_string(),
            u8::from(cell.is_boundary2).to_string(),
            u8::from(cell.reliable).to_string(),
        ])?;
    }
    let grid_path = grid_file.finish()?;

    let mut written = vec![grid_path];
    for (points, suffix) in [
        (&diagram.boundary_kzm_lzf, "boundary-kzm-lzf"),
        (&diagram.boundary_lzf_apt, "boundary-lzf-apt"),
    ] {
        let mut f = CsvFile::create(&sibling(&base, suffix))?;
        f.header(&["N", "tau", "scaled_tau"])?;
        for b in points {
            f.row(&[
                b.n.to_string(),
                crate::output::fmt_float(b.tau),
                crate::output::fmt_float(b.scaled_tau),
            ])?;
        }
        written.push(f.finish()?);
    }
    Ok(written)
}
