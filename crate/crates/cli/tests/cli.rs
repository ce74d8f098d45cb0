use std::path::Path;
use std::process::Command;

use cogfso_cli::config::{load_preset, parse_config_str, preset_source, SweepVariable};
use cogfso_cli::output::{config_hash, parse_sweep_csv, sweep_csv, sweep_json, SweepDocument};
use cogfso_cli::{run_outage_sweep, CliError, SweepSpec};
use cogfso_core::fso::Detection;
use cogfso_core::mc::{McEngine, RngConfig};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cogfso"))
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = bin().args(args).output().unwrap();
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn edited(find: &str, replace: &str) -> String {
    let src = preset_source("fig2a").unwrap();
    assert!(src.contains(find), "preset lacks `{find}`");
    src.replacen(find, replace, 1)
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn fig2a_preset_holds_the_defaults() {
    let c = load_preset("fig2a").unwrap();
    let s = &c.scenario;
    assert_eq!(s.users(), 3);
    for p in &s.profiles {
        assert_eq!((p.sr.m, p.sr.var, p.sr.tx_antennas, p.sr.rx_antennas), (1.5, 1.0, 3, 2));
        assert_eq!((p.sp.m, p.sp.var, p.sp.rx_antennas), (1.5, 1.0, 2));
        assert!((p.max_power - 10f64.powf(2.7)).abs() < 1e-9);
    }
    assert_eq!(s.ostbc.rate(), 0.5);
    assert_eq!(s.ostbc.noise_power, 1.0);
    assert!((s.gamma_th - 10f64.powf(0.3)).abs() < 1e-12);
    assert_eq!(s.fso.malaga.alpha, 2.296);
    assert_eq!(s.fso.pointing.zeta, 0.8863);
    assert_eq!(c.sweep.variable, SweepVariable::PaDbw);
}

#[test]
fn fig2c_preset_uses_stronger_fading_parameter() {
    let c = load_preset("fig2c").unwrap();
    assert!((c.scenario.p_a - 100.0).abs() < 1e-9);
    assert!(c.scenario.profiles.iter().all(|p| p.sr.m == 2.5 && p.sp.m == 2.5));
    let b = load_preset("fig2b").unwrap();
    assert!(b.scenario.fso.malaga.guarded && b.scenario.fso.malaga.rho == 1.0);
    let k = load_preset("fig2b-k").unwrap();
    assert_eq!(k.scenario.fso.malaga.xi, 0.2158);
}

#[test]
fn config_errors_name_the_field() {
    let e = parse_config_str(&edited("rho = 0.596", "rho = 1.5")).unwrap_err();
    assert!(matches!(&e, CliError::Field { field, .. } if field == "fso.malaga.rho"), "{e}");
    assert_eq!(e.exit_code(), 3);

    let e = parse_config_str(&edited("p_a_dbw = 10.0", "p_a_dbw = 10.0\ncolour = 3")).unwrap_err();
    assert!(e.to_string().contains("colour"), "{e}");

    let e = parse_config_str(&edited("zeta = 0.8863", "zeta = 0.8863\nfoo = 1")).unwrap_err();
    assert!(e.to_string().contains("foo"), "{e}");

    let e = parse_config_str(&edited("[users.1]\nmax_power_dbw = 27.0\nsr = { m = 1.5", "[users.1]\nmax_power_dbw = 27.0\nsr = { m = 1.3")).unwrap_err();
    assert!(matches!(&e, CliError::Field { field, .. } if field == "users.1.sr.m"), "{e}");
    let ok = edited("[users.1]\nmax_power_dbw = 27.0\nsr = { m = 1.5", "[users.1]\nmax_power_dbw = 27.0\nsr = { m = 1.3");
    assert!(parse_config_str(&ok.replacen("gamma_th_db", "quadrature_fallback = true\ngamma_th_db", 1)).is_ok());

    let e = parse_config_str(&edited("alpha = 2.296\n", "")).unwrap_err();
    assert!(e.to_string().contains("alpha"), "{e}");

    let e = parse_config_str(&edited("step = 1.0", "step = -1.0")).unwrap_err();
    assert!(matches!(&e, CliError::Field { field, .. } if field == "sweep.step"));

    let e = parse_config_str(&edited("[users.3]", "[users.4]")).unwrap_err();
    assert!(e.to_string().contains("users.4"), "{e}");
}

#[test]
fn alternative_channel_spellings() {
    let physical = edited(
        "xi = 0.0872\nrho = 0.596\nomega_prime = 1.085",
        "b0 = 0.1079\nrho = 0.596\nomega = 0.5\nphase_diff = 0.3",
    );
    let c = parse_config_str(&physical).unwrap();
    assert!((c.scenario.fso.malaga.xi - 2.0 * 0.1079 * 0.404).abs() < 1e-12);

    let geometry = edited("zeta = 0.8863", "zeta = 0.8863\naperture_radius = 0.1\nbeam_waist = 2.5");
    let c = parse_config_str(&geometry).unwrap();
    assert!(c.scenario.fso.pointing.a0 < 1.0);

    let both = edited("zeta = 0.8863", "zeta = 0.8863\na0 = 0.9\nbeam_waist = 2.5");
    assert!(parse_config_str(&both).is_err());
}

#[test]
fn hash_tracks_meaningful_fields_only() {
    let base = config_hash(&load_preset("fig2a").unwrap());
    assert_eq!(base, config_hash(&load_preset("fig2a").unwrap()));
    assert_eq!(base, config_hash(&parse_config_str(&edited("p_a_dbw = 10.0", "p_a_dbw = 10")).unwrap()));
    assert_eq!(base, config_hash(&parse_config_str(&edited("# Outage", "# Different comment")).unwrap()));
    assert_eq!(base, config_hash(&parse_config_str(&edited("trials = 0", "trials = 0\nformat = \"json\"")).unwrap()));
    for (a, b) in [
        ("p_a_dbw = 10.0", "p_a_dbw = 11.0"),
        ("zeta = 0.8863", "zeta = 0.5908"),
        ("detection = \"imdd\"", "detection = \"heterodyne\""),
        ("trials = 0", "trials = 10"),
        ("stop = 30.0", "stop = 29.0"),
        ("block_length = 8", "block_length = 6"),
    ] {
        assert_ne!(base, config_hash(&parse_config_str(&edited(a, b)).unwrap()), "{b}");
    }
}

#[test]
fn analytic_only_sweep_leaves_mc_columns_empty() {
    let c = load_preset("fig2a").unwrap();
    let sweep = SweepSpec::new(SweepVariable::PaDbw, 0.0, 10.0, 5.0, 0).unwrap();
    let recs = run_outage_sweep(&c.scenario, &sweep, &McEngine::new(RngConfig::new(1)));
    assert_eq!(recs.len(), 3);
    for r in &recs {
        assert!(r.analytic_outage.is_some() && r.floor_rd_inf.is_some() && r.floor_pa_inf.is_some());
        assert!(r.mc_outage.is_none() && r.mc_stderr.is_none() && r.error.is_none());
    }
    let csv = sweep_csv(&recs).unwrap();
    assert!(csv.lines().nth(1).unwrap().ends_with(",,,") || csv.contains(",,"));
}

#[test]
fn failed_points_are_marked_and_the_sweep_continues() {
    let mut c = load_preset("fig2a").unwrap();
    c.scenario.profiles[0].sr.m = 1.3;
    let sweep = SweepSpec::new(SweepVariable::PaDbw, 0.0, 10.0, 5.0, 1000).unwrap();
    let recs = run_outage_sweep(&c.scenario, &sweep, &McEngine::new(RngConfig::new(1)));
    assert_eq!(recs.len(), 3);
    assert!(recs.iter().all(|r| r.error.is_some() && r.analytic_outage.is_none()));
}

#[test]
fn csv_and_json_agree() {
    let c = load_preset("fig2a").unwrap();
    let sweep = SweepSpec::new(SweepVariable::GammaThDb, -2.0, 6.0, 2.0, 20_000).unwrap();
    let records = run_outage_sweep(&c.scenario, &sweep, &McEngine::new(RngConfig::new(3)));
    let doc = SweepDocument { config_hash: config_hash(&c), seed: 3, records };
    let from_csv = parse_sweep_csv(&sweep_csv(&doc.records).unwrap()).unwrap();
    let from_json: SweepDocument = serde_json::from_str(&sweep_json(&doc).unwrap()).unwrap();
    assert_eq!(from_csv, doc.records);
    assert_eq!(from_json, doc);
}

#[test]
fn sweep_orderings_from_paired_runs() {
    let engine = McEngine::new(RngConfig::new(1));
    let c = load_preset("fig2a").unwrap();
    let run = |d: Detection, snr_db: f64| {
        let mut s = c.scenario.clone();
        s.fso.detection = d;
        s.fso.avg_snr = 10f64.powf(snr_db / 10.0);
        run_outage_sweep(&s, &c.sweep, &engine)
    };
    let im30 = run(Detection::ImDd, 30.0);
    let im40 = run(Detection::ImDd, 40.0);
    let het30 = run(Detection::Heterodyne, 30.0);
    for i in 0..im30.len() {
        assert!(im40[i].floor_pa_inf.unwrap() < im30[i].floor_pa_inf.unwrap());
        assert!(het30[i].analytic_outage.unwrap() <= im30[i].analytic_outage.unwrap());
    }
}

#[test]
fn binary_sweep_writes_output_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep.json");
    let (code, _, err) = run(&[
        "sweep", "--preset", "fig2a", "--trials", "2000", "--seed", "9", "--format", "json", "--output", out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    let doc: SweepDocument = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc.seed, 9);
    assert_eq!(doc.records.len(), 31);
    let side: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("sweep.json.run.json")).unwrap()).unwrap();
    assert_eq!(side["seed"], 9);
    assert_eq!(side["config_hash"], doc.config_hash.as_str());
    assert!(side["config"]["scenario"]["profiles"].is_array());
}

#[test]
fn binary_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.toml", &edited("rho = 0.596", "rho = 1.5"));
    let (code, _, err) = run(&["sweep", "--config", &bad]);
    assert_eq!(code, 3);
    assert!(err.contains("rho"), "{err}");

    let (code, ..) = run(&["sweep", "--bogus"]);
    assert_eq!(code, 2);

    let (code, ..) = run(&["validate", "--preset", "fig2a", "--trials", "100"]);
    assert_eq!(code, 3);

    let (code, out, _) = run(&["validate", "--preset", "fig2a", "--trials", "200000", "--negative-control"]);
    assert_eq!(code, 4);
    assert!(out.contains("FAIL"));

    let (code, ..) = run(&["sweep", "--preset", "nope"]);
    assert_eq!(code, 3);
}

#[test]
fn binary_select_default_preset() {
    let (code, out, err) = run(&["select", "--trials", "20000", "--format", "json"]);
    assert_eq!(code, 0, "{err}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["variants"].as_array().unwrap().len(), 4);
}

#[test]
fn user_defined_variants_follow_builtins() {
    let text = preset_source("fig2c").unwrap().to_string() + "\n[variants.loud_first.users.1]\nmax_power_dbw = 30.0\n";
    let c = parse_config_str(&text).unwrap();
    let rows = cogfso_cli::run_selection_study(&c.scenario, &c.variants, 20_000, &McEngine::new(RngConfig::new(4))).unwrap();
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[4].variant, "loud_first");
    let bad = preset_source("fig2c").unwrap().to_string() + "\n[variants.x.users.7]\nsr_var = 2.0\n";
    assert!(parse_config_str(&bad).is_err());
}
