//! `sweep`: batch chain runs over (N, Δ/J) pairs with a manifest.

use crate::config::RunConfig;
use crate::error::{CliError, Result};
use crate::output::{resolve_out_path, write_json};
use serde_json::json;
use std::path::{Path, PathBuf};
use std::time::Instant;

/// Parse a `N:ratio` pair list, e.g. `50:1,100:1.5`.
pub fn parse_pairs(text: &str) -> Result<Vec<(usize, f64)>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|item| {
            let (n, ratio) = item
                .split_once(':')
                .ok_or_else(|| CliError::Config(format!("pair '{item}' is not 'N:ratio'")))?;
            let n: usize = n
                .trim()
                .parse()
                .map_err(|e| CliError::Config(format!("pair '{item}': {e}")))?;
            let ratio: f64 = ratio
                .trim()
                .parse()
                .map_err(|e| CliError::Config(format!("pair '{item}': {e}")))?;
            Ok((n, ratio))
        })
        .collect()
}

pub fn run(config: &RunConfig, pairs: &[(usize, f64)], out_dir: &Path) -> Result<PathBuf> {
    let dir = resolve_out_path(out_dir);
    std::fs::create_dir_all(&dir).map_err(CliError::io(&dir))?;

    let mut entries = Vec::with_capacity(pairs.len());
    for &(n, ratio) in pairs {
        let file_name = format!("ti_N{n}_dj{ratio}.csv");
        let mut run_config = config.clone();
        run_config.params.n = n;
        run_config.params.delta = ratio * run_config.params.j;
        run_config.output = Some(dir.join(&file_name));

        let started = Instant::now();
        let outcome = super::ti_work::run(&run_config);
        let wall = started.elapsed().as_secs_f64();
        match outcome {
            Ok(path) => entries.push(json!({
                "n": n,
                "delta_over_j": ratio,
                "file": path.file_name().map(|f| f.to_string_lossy().into_owned()),
                "status": "ok",
                "wall_time_s": wall,
            })),
            Err(e) => entries.push(json!({
                "n": n,
                "delta_over_j": ratio,
                "file": file_name,
                "status": "error",
                "error": e.to_string(),
                "wall_time_s": wall,
            })),
        }
    }

    let manifest = json!({ "runs": entries });
    write_json(&dir.join("manifest.json"), &manifest)
}
