//! Outage sweeps over P_A, the optical average SNR or the threshold.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use cogfso_core::mc::{simulate_outage, McEngine};
use cogfso_core::outage::{floor_pa_infinity, floor_rd_infinity, outage_terms, ScenarioConfig};

use crate::config::SweepSpec;

/// One grid point. Probabilities are `None` when not computed or when the
/// evaluator failed, in which case `error` says why.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    #[serde(rename = "swept_value_dB")]
    pub swept_value_db: f64,
    pub analytic_outage: Option<f64>,
    pub mc_outage: Option<f64>,
    pub mc_stderr: Option<f64>,
    pub floor_rd_inf: Option<f64>,
    pub floor_pa_inf: Option<f64>,
    pub error: Option<String>,
}

fn point(s: &ScenarioConfig, value_db: f64, trials: u64, engine: &McEngine) -> ResultRecord {
    let mut errors = Vec::new();
    let mut keep = |r: cogfso_core::Result<f64>, what: &str| match r {
        Ok(v) => Some(v),
        Err(e) => {
            errors.push(format!("{what}: {e}"));
            None
        }
    };
    let analytic = keep(outage_terms(s).map(|t| t.total), "analytic");
    let floor_rd = keep(floor_rd_infinity(s), "floor_rd_inf");
    let floor_pa = keep(floor_pa_infinity(s), "floor_pa_inf");
    let (mc, se) = if trials == 0 {
        (None, None)
    } else {
        match simulate_outage(s, trials, engine) {
            Ok(est) => (Some(est.outage), Some(est.std_err)),
            Err(e) => {
                errors.push(format!("mc: {e}"));
                (None, None)
            }
        }
    };
    ResultRecord {
        swept_value_db: value_db,
        analytic_outage: analytic,
        mc_outage: mc,
        mc_stderr: se,
        floor_rd_inf: floor_rd,
        floor_pa_inf: floor_pa,
        error: if errors.is_empty() { None } else { Some(errors.join("; ")) },
    }
}

/// Evaluate every grid point. Points run concurrently; point `i` draws from
/// substream `i`, and records come back in grid order.
pub fn run_outage_sweep(base: &ScenarioConfig, sweep: &SweepSpec, engine: &McEngine) -> Vec<ResultRecord> {
    let grid = sweep.grid();
    grid.par_iter()
        .enumerate()
        .map(|(i, &v)| point(&sweep.apply(base, v), v, sweep.trials, &engine.substream(i as u32)))
        .collect()
}
