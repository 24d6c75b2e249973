//! `crossover`: report regime-boundary durations, human- and
//! machine-readable.

use crate::config::{Model, RunConfig};
use crate::error::Result;
use crate::output::write_json;
use qanneal::crossover::{
    crossover_report, half_crossover_time, lz_crossover_time, schedule_crossover_report,
    CrossoverMethod,
};
use serde_json::json;
use std::path::PathBuf;

pub fn run(config: &RunConfig, model: Model, half: bool) -> Result<PathBuf> {
    let params = config.model_params()?;
    let out = config
        .output
        .clone()
        .unwrap_or_else(|| PathBuf::from("crossover.json"));

    let report = match model {
        Model::Lz => {
            let c = lz_crossover_time(&params)?;
            println!("two-level crossing, Delta/J = {}", params.delta_over_j());
            println!(
                "  sweep->adiabatic crossover J^2 tau_c / Delta: numeric-root {:.6}, asymptotic {:.6}",
                c.numeric_scaled, c.asymptotic_scaled
            );
            println!(
                "  tau_c: numeric-root {:.6e}, asymptotic {:.6e}",
                params.tau_from_scaled_lz(c.numeric_scaled),
                params.tau_from_scaled_lz(c.asymptotic_scaled)
            );
            json!({
                "model": "lz",
                "delta_over_j": params.delta_over_j(),
                "scaled": {
                    "numeric_root": c.numeric_scaled,
                    "asymptotic": c.asymptotic_scaled,
                },
                "tau": {
                    "numeric_root": params.tau_from_scaled_lz(c.numeric_scaled),
                    "asymptotic": params.tau_from_scaled_lz(c.asymptotic_scaled),
                },
            })
        }
        Model::Ti if half => {
            let n = config.params.n;
            let (scaled, tau) = half_crossover_time(&params, n)?;
            println!(
                "chain stopping at the critical point, N = {n}, Delta/J = {}",
                params.delta_over_j()
            );
            println!("  scaled crossover (pi^2/N^2)(J^2/Delta) tau_c = {scaled:.6}");
            println!("  tau_c = {tau:.6e}");
            json!({
                "model": "ti",
                "protocol": "linear-half",
                "n": n,
                "delta_over_j": params.delta_over_j(),
                "tau_c_scaled": scaled,
                "tau_c": tau,
            })
        }
        Model::Ti => {
            let n = config.params.n;
            let schedule = config.load_schedule()?;
            if let Some(sched) = schedule {
                let r = schedule_crossover_report(&sched, n)?;
                println!(
                    "chain with two-parameter schedule, N = {n} (effective Delta/J = {:.4})",
                    r.delta_over_j
                );
                println!(
                    "  tau1 (fast->slow):       scaled {:.6}, raw {:.6e}  [{}]",
                    r.tau1_scaled,
                    r.tau1,
                    r.method.as_str()
                );
                println!(
                    "  tau2 (slow->very slow):  scaled {:.6}, raw {:.6e}  [{}]",
                    r.tau2_scaled,
                    r.tau2,
                    r.method.as_str()
                );
                json!({
                    "model": "ti",
                    "protocol": "two-parameter",
                    "n": n,
                    "effective_delta_over_j": r.delta_over_j,
                    "method": r.method.as_str(),
                    "tau1_scaled": r.tau1_scaled,
                    "tau2_scaled": r.tau2_scaled,
                    "tau1": r.tau1,
                    "tau2": r.tau2,
                })
            } else {
                let asym = crossover_report(&params, n, CrossoverMethod::Asymptotic)?;
                let num = crossover_report(&params, n, CrossoverMethod::NumericRoot)?;
                println!(
                    "chain crossing the critical point, N = {n}, Delta/J = {}",
                    params.delta_over_j()
                );
                println!(
                    "  tau1 (fast->slow):       scaled {:.6} (closed form) / {:.6} (numeric), raw {:.6e}",
                    asym.tau1_scaled, num.tau1_scaled, asym.tau1
                );
                println!(
                    "  tau2 (slow->very slow):  scaled {:.6} (asymptotic) / {:.6} (numeric), raw {:.6e}",
                    asym.tau2_scaled, num.tau2_scaled, num.tau2
                );
                json!({
                    "model": "ti",
                    "protocol": "linear-symmetric",
                    "n": n,
                    "delta_over_j": params.delta_over_j(),
                    "asymptotic": {
                        "tau1_scaled": asym.tau1_scaled,
                        "tau2_scaled": asym.tau2_scaled,
                        "tau1": asym.tau1,
                        "tau2": asym.tau2,
                    },
                    "numeric_root": {
                        "tau1_scaled": num.tau1_scaled,
                        "tau2_scaled": num.tau2_scaled,
                        "tau1": num.tau1,
                        "tau2": num.tau2,
                    },
                })
            }
        }
    };
    let path = write_json(&out, &report)?;
    println!("wrote {}", path.display());
    Ok(path)
}
