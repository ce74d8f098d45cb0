//! TOML experiment files and the bundled figure presets.
//!
//! Powers are written in dBW and SNRs in dB; everything is converted to
//! linear units here and nowhere else.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use cogfso_core::fso::{special_case_params, Detection, FsoLinkParams, MalagaParams, PointingParams, SpecialCase};
use cogfso_core::outage::ScenarioConfig;
use cogfso_core::rf::{OstbcParams, RfLinkParams, SuTxProfile, ZetaMethod};
use cogfso_core::Error as CoreError;

use crate::error::{CliError, CliResult};

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// Raw file layout. Every table rejects unknown keys.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub p_a_dbw: f64,
    pub gamma_th_db: f64,
    #[serde(default)]
    pub quadrature_fallback: bool,
    #[serde(default)]
    pub seed: Option<u64>,
    pub ostbc: OstbcToml,
    pub users: BTreeMap<String, UserToml>,
    pub fso: FsoToml,
    #[serde(default)]
    pub sweep: Option<SweepToml>,
    #[serde(default)]
    pub variants: BTreeMap<String, VariantToml>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OstbcToml {
    pub block_symbols: u32,
    pub block_length: u32,
    #[serde(default = "one")]
    pub noise_power: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkToml {
    pub m: f64,
    pub var: f64,
    pub tx_antennas: u32,
    pub rx_antennas: u32,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UserToml {
    pub max_power_dbw: f64,
    pub sr: LinkToml,
    pub sp: LinkToml,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FsoToml {
    pub detection: Detection,
    pub avg_snr_db: f64,
    pub malaga: MalagaToml,
    pub pointing: PointingToml,
}

/// One of three spellings: `model = "gamma_gamma" | "k_distribution"`,
/// the physical `(b0, rho, omega, phase_diff)`, or the reduced
/// `(xi, rho, omega_prime)`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MalagaToml {
    pub alpha: f64,
    pub beta: f64,
    pub model: Option<String>,
    pub xi: Option<f64>,
    pub rho: Option<f64>,
    pub omega_prime: Option<f64>,
    pub b0: Option<f64>,
    pub omega: Option<f64>,
    pub phase_diff: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointingToml {
    pub zeta: f64,
    pub a0: Option<f64>,
    pub aperture_radius: Option<f64>,
    pub beam_waist: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepToml {
    pub variable: SweepVariable,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
    #[serde(default)]
    pub trials: u64,
    #[serde(default)]
    pub format: Option<OutputFormat>,
    #[serde(default)]
    pub output: Option<String>,
}

/// Per-user overrides applied on top of the base users.
#[derive(Debug, Clone, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct VariantToml {
    #[serde(default)]
    pub p_a_dbw: Option<f64>,
    #[serde(default)]
    pub users: BTreeMap<String, UserOverride>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct UserOverride {
    pub sr_var: Option<f64>,
    pub sp_var: Option<f64>,
    pub max_power_dbw: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVariable {
    #[serde(rename = "p_a_dbw")]
    PaDbw,
    AvgSnrDb,
    GammaThDb,
}

impl SweepVariable {
    pub fn name(self) -> &'static str {
        match self {
            SweepVariable::PaDbw => "p_a_dbw",
            SweepVariable::AvgSnrDb => "avg_snr_db",
            SweepVariable::GammaThDb => "gamma_th_db",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

/// Validated sweep grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
    /// Monte Carlo trials per grid point; 0 means analytic only.
    pub trials: u64,
    #[serde(skip)]
    pub format: OutputFormat,
    #[serde(skip)]
    pub output: Option<String>,
}

impl SweepSpec {
    pub fn new(variable: SweepVariable, start: f64, stop: f64, step: f64, trials: u64) -> CliResult<Self> {
        for (name, v) in [("start", start), ("stop", stop), ("step", step)] {
            if !v.is_finite() {
                return Err(CliError::field(format!("sweep.{name}"), format!("must be finite, got {v}")));
            }
        }
        if start > stop {
            return Err(CliError::field("sweep.start", format!("start {start} exceeds stop {stop}")));
        }
        if step <= 0.0 {
            return Err(CliError::field("sweep.step", format!("must be positive, got {step}")));
        }
        if (stop - start) / step > 1e5 {
            return Err(CliError::field("sweep.step", "grid has more than 100000 points"));
        }
        Ok(SweepSpec { variable, start, stop, step, trials, format: OutputFormat::Csv, output: None })
    }

    /// Grid values in dB; `stop` is included when it lies on the grid.
    pub fn grid(&self) -> Vec<f64> {
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize;
        (0..=n).map(|i| self.start + i as f64 * self.step).collect()
    }

    /// `base` with the swept variable set to `value_db`.
    pub fn apply(&self, base: &ScenarioConfig, value_db: f64) -> ScenarioConfig {
        let mut s = base.clone();
        let v = db_to_linear(value_db);
        match self.variable {
            SweepVariable::PaDbw => s.p_a = v,
            SweepVariable::AvgSnrDb => s.fso.avg_snr = v,
            SweepVariable::GammaThDb => s.gamma_th = v,
        }
        s
    }
}

impl Default for SweepSpec {
    fn default() -> Self {
        SweepSpec::new(SweepVariable::PaDbw, 0.0, 30.0, 5.0, 0).expect("default sweep is valid")
    }
}

/// A named set of overrides for selection studies.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Variant {
    pub name: String,
    pub p_a_dbw: Option<f64>,
    /// `(user index starting at 1, overrides)`.
    pub users: Vec<(usize, UserOverride)>,
}

impl Variant {
    pub fn apply(&self, base: &ScenarioConfig) -> CliResult<ScenarioConfig> {
        let mut s = base.clone();
        if let Some(p) = self.p_a_dbw {
            s.p_a = db_to_linear(p);
        }
        for &(idx, o) in &self.users {
            let field = |f: &str| format!("variants.{}.users.{idx}.{f}", self.name);
            let p = s
                .profiles
                .get_mut(idx - 1)
                .ok_or_else(|| CliError::field(format!("variants.{}.users.{idx}", self.name), "no such user"))?;
            if let Some(v) = o.sr_var {
                p.sr.var = v;
                p.sr.validate().map_err(|e| CliError::field(field("sr_var"), core_detail(&e)))?;
            }
            if let Some(v) = o.sp_var {
                p.sp.var = v;
                p.sp.validate().map_err(|e| CliError::field(field("sp_var"), core_detail(&e)))?;
            }
            if let Some(v) = o.max_power_dbw {
                p.max_power = db_to_linear(v);
            }
        }
        Ok(s)
    }
}

/// Everything a run needs, in linear units.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResolvedConfig {
    pub scenario: ScenarioConfig,
    pub sweep: SweepSpec,
    pub variants: Vec<Variant>,
    #[serde(skip)]
    pub seed: Option<u64>,
}

impl ResolvedConfig {
    /// Change detection before validation, e.g. from a command-line override.
    pub fn with_detection(mut self, d: Detection) -> Self {
        self.scenario.fso.detection = d;
        self
    }
}

/// Bundled experiment files, addressable as `--preset NAME`.
pub const PRESETS: &[(&str, &str)] = &[
    ("fig2a", include_str!("../presets/fig2a.toml")),
    ("fig2b", include_str!("../presets/fig2b.toml")),
    ("fig2b-k", include_str!("../presets/fig2b-k.toml")),
    ("fig2c", include_str!("../presets/fig2c.toml")),
];

pub fn preset_source(name: &str) -> CliResult<&'static str> {
    PRESETS.iter().find(|(n, _)| *n == name).map(|(_, s)| *s).ok_or_else(|| {
        let known: Vec<_> = PRESETS.iter().map(|(n, _)| *n).collect();
        CliError::Config(format!("unknown preset `{name}` (known: {})", known.join(", ")))
    })
}

pub fn load_preset(name: &str) -> CliResult<ResolvedConfig> {
    parse_config_str(preset_source(name)?)
}

pub fn parse_config(path: &Path) -> CliResult<ResolvedConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_config_str(&text)
}

pub fn parse_config_str(text: &str) -> CliResult<ResolvedConfig> {
    let file: ConfigFile = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
    resolve(file)
}

fn core_detail(e: &CoreError) -> String {
    match e {
        CoreError::InvalidParameter { detail, .. } => detail.clone(),
        other => other.to_string(),
    }
}

/// Attach a dotted path to a core validation error.
fn at(prefix: &str) -> impl Fn(CoreError) -> CliError + '_ {
    move |e| match e {
        CoreError::InvalidParameter { field, detail } => CliError::field(format!("{prefix}.{field}"), detail),
        other => CliError::field(prefix, other.to_string()),
    }
}

fn finite(field: &str, v: f64) -> CliResult<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::field(field, format!("must be finite, got {v}")))
    }
}

fn user_index(key: &str, table: &str) -> CliResult<usize> {
    match key.parse::<usize>() {
        Ok(i) if i >= 1 => Ok(i),
        _ => Err(CliError::field(format!("{table}.{key}"), "user keys must be positive integers")),
    }
}

fn resolve_link(l: &LinkToml, path: &str) -> CliResult<RfLinkParams> {
    RfLinkParams::new(l.m, l.var, l.tx_antennas, l.rx_antennas).map_err(at(path))
}

fn resolve_malaga(m: &MalagaToml) -> CliResult<MalagaParams> {
    let path = "fso.malaga";
    let need = |v: Option<f64>, f: &str| v.ok_or_else(|| CliError::field(format!("{path}.{f}"), "missing"));
    let forbid = |present: bool, f: &str, why: &str| {
        if present {
            Err(CliError::field(format!("{path}.{f}"), format!("not allowed {why}")))
        } else {
            Ok(())
        }
    };
    match m.model.as_deref() {
        Some("gamma_gamma") => {
            for (v, f) in [(m.xi, "xi"), (m.rho, "rho"), (m.omega_prime, "omega_prime"), (m.b0, "b0"), (m.omega, "omega")] {
                forbid(v.is_some(), f, "with model = \"gamma_gamma\"")?;
            }
            special_case_params(SpecialCase::GammaGamma, m.alpha, m.beta).map_err(at(path))
        }
        Some("k_distribution") => {
            for (v, f) in [(m.rho, "rho"), (m.omega_prime, "omega_prime"), (m.b0, "b0"), (m.omega, "omega")] {
                forbid(v.is_some(), f, "with model = \"k_distribution\"")?;
            }
            let xi = need(m.xi, "xi")?;
            special_case_params(SpecialCase::KDistribution { xi }, m.alpha, m.beta).map_err(at(path))
        }
        Some(other) => Err(CliError::field(
            format!("{path}.model"),
            format!("unknown model `{other}` (expected gamma_gamma or k_distribution)"),
        )),
        None if m.b0.is_some() || m.omega.is_some() => {
            forbid(m.xi.is_some(), "xi", "together with b0/omega")?;
            forbid(m.omega_prime.is_some(), "omega_prime", "together with b0/omega")?;
            MalagaParams::derive(
                m.alpha,
                m.beta,
                need(m.b0, "b0")?,
                need(m.rho, "rho")?,
                need(m.omega, "omega")?,
                m.phase_diff.unwrap_or(0.0),
            )
            .map_err(at(path))
        }
        None => {
            forbid(m.phase_diff.is_some(), "phase_diff", "without b0/omega")?;
            MalagaParams::from_reduced(m.alpha, m.beta, need(m.xi, "xi")?, need(m.rho, "rho")?, need(m.omega_prime, "omega_prime")?)
                .map_err(at(path))
        }
    }
}

fn resolve_pointing(p: &PointingToml) -> CliResult<PointingParams> {
    let path = "fso.pointing";
    match (p.a0, p.aperture_radius, p.beam_waist) {
        (Some(_), Some(_), _) | (Some(_), _, Some(_)) => {
            Err(CliError::field(format!("{path}.a0"), "give either a0 or aperture_radius/beam_waist, not both"))
        }
        (a0, None, None) => PointingParams::new(p.zeta, a0.unwrap_or(1.0)).map_err(at(path)),
        (None, Some(a), Some(w)) => PointingParams::from_geometry(p.zeta, a, w).map_err(at(path)),
        (None, None, Some(_)) => Err(CliError::field(format!("{path}.aperture_radius"), "missing")),
        (None, Some(_), None) => Err(CliError::field(format!("{path}.beam_waist"), "missing")),
    }
}

fn resolve(f: ConfigFile) -> CliResult<ResolvedConfig> {
    finite("p_a_dbw", f.p_a_dbw)?;
    finite("gamma_th_db", f.gamma_th_db)?;
    finite("fso.avg_snr_db", f.fso.avg_snr_db)?;

    let ostbc = OstbcParams::new(f.ostbc.block_symbols, f.ostbc.block_length, f.ostbc.noise_power).map_err(at("ostbc"))?;

    let mut indexed = Vec::with_capacity(f.users.len());
    for (key, u) in &f.users {
        indexed.push((user_index(key, "users")?, key, u));
    }
    indexed.sort_by_key(|(i, ..)| *i);
    if indexed.is_empty() {
        return Err(CliError::field("users", "at least one [users.N] table is required"));
    }
    for (pos, (i, ..)) in indexed.iter().enumerate() {
        if *i != pos + 1 {
            return Err(CliError::field(format!("users.{i}"), format!("users must be numbered 1..{}", indexed.len())));
        }
    }
    let mut profiles = Vec::with_capacity(indexed.len());
    for (_, key, u) in &indexed {
        let path = format!("users.{key}");
        finite(&format!("{path}.max_power_dbw"), u.max_power_dbw)?;
        let sr = resolve_link(&u.sr, &format!("{path}.sr"))?;
        let sp = resolve_link(&u.sp, &format!("{path}.sp"))?;
        profiles.push(SuTxProfile::new(sr, sp, db_to_linear(u.max_power_dbw)).map_err(at(&path))?);
    }

    let fso = FsoLinkParams::new(
        resolve_malaga(&f.fso.malaga)?,
        resolve_pointing(&f.fso.pointing)?,
        f.fso.detection,
        db_to_linear(f.fso.avg_snr_db),
    )
    .map_err(at("fso"))?;

    let scenario = ScenarioConfig {
        profiles,
        p_a: db_to_linear(f.p_a_dbw),
        ostbc,
        fso,
        gamma_th: db_to_linear(f.gamma_th_db),
        zeta_method: if f.quadrature_fallback { ZetaMethod::Auto } else { ZetaMethod::ClosedForm },
    };
    validate_scenario(&scenario)?;

    let sweep = match &f.sweep {
        None => SweepSpec::default(),
        Some(s) => {
            let mut spec = SweepSpec::new(s.variable, s.start, s.stop, s.step, s.trials)?;
            spec.format = s.format.unwrap_or_default();
            spec.output = s.output.clone();
            spec
        }
    };

    let mut variants = Vec::with_capacity(f.variants.len());
    for (name, v) in &f.variants {
        let mut users = Vec::new();
        for (key, o) in &v.users {
            users.push((user_index(key, &format!("variants.{name}.users"))?, *o));
        }
        users.sort_by_key(|(i, _)| *i);
        let variant = Variant { name: name.clone(), p_a_dbw: v.p_a_dbw, users };
        validate_scenario(&variant.apply(&scenario)?)?;
        variants.push(variant);
    }

    Ok(ResolvedConfig { scenario, sweep, variants, seed: f.seed })
}

/// Scenario validation with config-file field paths in the messages.
pub fn validate_scenario(s: &ScenarioConfig) -> CliResult<()> {
    s.validate().map_err(|e| match e {
        CoreError::InvalidParameter { field: "m", detail } => {
            let user = s.profiles.iter().position(|p| p.sr.integer_shape().is_none()).map_or(1, |i| i + 1);
            CliError::field(format!("users.{user}.sr.m"), format!("{detail} (set quadrature_fallback = true)"))
        }
        CoreError::InvalidParameter { field: "p_a", detail } => CliError::field("p_a_dbw", detail),
        CoreError::InvalidParameter { field: "gamma_th", detail } => CliError::field("gamma_th_db", detail),
        CoreError::InvalidParameter { field, detail } => CliError::field(field, detail),
        other => CliError::Config(other.to_string()),
    })
}
