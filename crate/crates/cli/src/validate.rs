//! Every closed form against its Monte Carlo counterpart.

use serde::Serialize;

use cogfso_core::fso::{snr_cdf, turbulence_cdf};
use cogfso_core::mc::{simulate_outage, EmpiricalCdf, FsoSnrSampler, GainSampler, MalagaSampler, McEngine, SelectionSampler};
use cogfso_core::outage::{end_to_end_outage, ScenarioConfig};
use cogfso_core::rf::{beta_star_cdf_with, gain_cdf, zeta_cdf_with};

use crate::error::{CliError, CliResult};

pub const MIN_TRIALS: u64 = 10_000;
pub const Z_LIMIT: f64 = 3.0;
/// Quantile grid for CDFs too costly to evaluate at every sample.
const GRID_POINTS: usize = 50;

/// Distance limit for `n` draws: 0.005, or the 0.1% Kolmogorov quantile
/// when `n` is too small for that.
pub fn ks_limit(n: u64) -> f64 {
    (1.95 / (n as f64).sqrt()).max(0.005)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Statistic {
    /// Exact Kolmogorov-Smirnov distance.
    Ks,
    /// Sup distance on a sample-quantile grid.
    GridKs,
    /// `(analytic - empirical) / σ`.
    Z,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub statistic: Statistic,
    pub value: f64,
    pub limit: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub seed: u64,
    pub trials: u64,
    pub negative_control: bool,
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }

    /// Fixed-width text table; identical inputs give identical bytes.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "# seed={} trials={} negative_control={}\n{:<22} {:<8} {:>12} {:>10} {}\n",
            self.seed, self.trials, self.negative_control, "check", "stat", "value", "limit", "result"
        );
        for c in &self.checks {
            let stat = match c.statistic {
                Statistic::Ks => "ks",
                Statistic::GridKs => "grid_ks",
                Statistic::Z => "z",
            };
            out.push_str(&format!(
                "{:<22} {:<8} {:>12.6} {:>10.6} {}\n",
                c.name,
                stat,
                c.value,
                c.limit,
                if c.pass { "PASS" } else { "FAIL" }
            ));
        }
        out.push_str(if self.passed() { "overall PASS\n" } else { "overall FAIL\n" });
        out
    }
}

fn ks_check(name: &str, statistic: Statistic, value: f64, n: u64) -> Check {
    let limit = ks_limit(n);
    Check { name: name.into(), statistic, value, limit, pass: value <= limit }
}

/// `analytic` with the first user's S→R shape raised by one.
fn corrupt(s: &ScenarioConfig) -> ScenarioConfig {
    let mut c = s.clone();
    for p in &mut c.profiles {
        p.sr.m += 1.0 / f64::from(p.sr.tx_antennas * p.sr.rx_antennas);
    }
    c
}

/// Run all analytic/empirical pairs with `trials` draws each. With
/// `negative_control` the analytic side uses a shape one larger than the
/// simulated channel, which every RF check should detect.
pub fn run_validate(s: &ScenarioConfig, trials: u64, engine: &McEngine, negative_control: bool) -> CliResult<ValidationReport> {
    if trials < MIN_TRIALS {
        return Err(CliError::Config(format!("validate needs at least {MIN_TRIALS} trials, got {trials}")));
    }
    let eval = CliError::from_eval;
    let analytic = if negative_control { corrupt(s) } else { s.clone() };
    let method = s.zeta_method;
    let user = &s.profiles[0];
    let mut checks = Vec::new();

    let gain = GainSampler::new(&user.sr).map_err(eval)?;
    let e = EmpiricalCdf::new(engine.substream(0).sample(trials, |r| gain.draw(r)));
    let d = e.ks_distance(|x| gain_cdf(x, &analytic.profiles[0].sr)).map_err(eval)?;
    checks.push(ks_check("gain_cdf", Statistic::Ks, d, trials));

    let metric = SelectionSampler::new(std::slice::from_ref(user), s.p_a).map_err(eval)?;
    let e = EmpiricalCdf::new(engine.substream(1).sample(trials, |r| metric.user_metric(0, r)));
    let d = e
        .sup_distance_on(&e.quantile_grid(GRID_POINTS), |x| zeta_cdf_with(x, &analytic.profiles[0], s.p_a, method))
        .map_err(eval)?;
    checks.push(ks_check("zeta_cdf", Statistic::GridKs, d, trials));

    let select = SelectionSampler::new(&s.profiles, s.p_a).map_err(eval)?;
    let e = EmpiricalCdf::new(engine.substream(2).sample(trials, |r| select.select(r).1));
    let d = e
        .sup_distance_on(&e.quantile_grid(GRID_POINTS), |x| beta_star_cdf_with(x, &analytic.profiles, s.p_a, method))
        .map_err(eval)?;
    checks.push(ks_check("beta_star_cdf", Statistic::GridKs, d, trials));

    let turb = MalagaSampler::new(&s.fso.malaga).map_err(eval)?;
    let e = EmpiricalCdf::new(engine.substream(3).sample(trials, |r| turb.draw(r)));
    let d = e
        .sup_distance_on(&e.quantile_grid(GRID_POINTS), |h| turbulence_cdf(h, &s.fso.malaga))
        .map_err(eval)?;
    checks.push(ks_check("turbulence_cdf", Statistic::GridKs, d, trials));

    let snr = FsoSnrSampler::new(&s.fso).map_err(eval)?;
    let e = EmpiricalCdf::new(engine.substream(4).sample(trials, |r| snr.draw(r)));
    let d = e.sup_distance_on(&e.quantile_grid(GRID_POINTS), |x| snr_cdf(x, &s.fso)).map_err(eval)?;
    checks.push(ks_check("fso_snr_cdf", Statistic::GridKs, d, trials));

    let est = simulate_outage(s, trials, &engine.substream(5)).map_err(eval)?;
    let z = est.z_score(end_to_end_outage(&analytic).map_err(eval)?);
    checks.push(Check { name: "end_to_end_outage".into(), statistic: Statistic::Z, value: z, limit: Z_LIMIT, pass: z.abs() <= Z_LIMIT });

    Ok(ValidationReport { seed: engine.rng_config().seed, trials, negative_control, checks })
}
