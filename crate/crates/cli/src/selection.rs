//! SU-TX selection frequencies under the built-in and user-defined variants.

use serde::Serialize;

use cogfso_core::mc::{simulate_selection, McEngine, SelectionStats};
use cogfso_core::outage::ScenarioConfig;

use crate::config::{UserOverride, Variant};
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelectionRow {
    pub variant: String,
    pub stats: SelectionStats,
}

fn override_user2(name: &str, sr_var: Option<f64>, sp_var: Option<f64>) -> Variant {
    Variant {
        name: name.to_string(),
        p_a_dbw: None,
        users: vec![(2, UserOverride { sr_var, sp_var, max_power_dbw: None })],
    }
}

/// Base scenario; second user twice as strong toward the relay; toward the
/// primary receiver; toward both.
pub fn builtin_variants() -> Vec<Variant> {
    vec![
        Variant { name: "all_equal".into(), p_a_dbw: None, users: vec![] },
        override_user2("sr2_doubled", Some(2.0), None),
        override_user2("sp2_doubled", None, Some(2.0)),
        override_user2("sr2_sp2_doubled", Some(2.0), Some(2.0)),
    ]
}

/// Built-in variants first (when the base has at least two users), then
/// `extra` in the given order. Variant `i` uses substream `i`.
pub fn run_selection_study(
    base: &ScenarioConfig,
    extra: &[Variant],
    trials: u64,
    engine: &McEngine,
) -> CliResult<Vec<SelectionRow>> {
    let mut variants = if base.profiles.len() >= 2 { builtin_variants() } else { Vec::new() };
    variants.extend(extra.iter().cloned());
    if variants.is_empty() {
        return Err(CliError::Config("selection study needs at least two users or one [variants.NAME] table".into()));
    }
    variants
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let s = v.apply(base)?;
            let stats = simulate_selection(&s.profiles, s.p_a, trials, &engine.substream(i as u32))
                .map_err(CliError::from_eval)?;
            Ok(SelectionRow { variant: v.name.clone(), stats })
        })
        .collect()
}
