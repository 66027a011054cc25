use std::fs;
use std::path::Path;
use std::process::Command;

use qraman::analysis::local_maxima;
use qraman::molecular::VibronicModel;
use qraman::photon::ProbeState;
use qraman::signal::{Model, SignalKind};
use qraman_cli::config::{parse_config, OutputFormat};
use qraman_cli::output::{read_binary, read_text};
use qraman_cli::CliError;

const BIN: &str = env!("CARGO_BIN_EXE_qraman");

fn qraman(args: &[&str]) -> std::process::Output {
    Command::new(BIN)
        .args(args)
        .env_remove("QRAMAN_THREADS")
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

const SMALL_QFRS: &str = r#"
[vibronic]
preset = "nitrostilbene"

[grid.shift]
start = "1.2 eV"
stop = "3.2 eV"
count = 21

[grid.delay]
start = 0
stop = 40
count = 5
"#;

const METHANE: &str = r#"
kind = "fastcars"

[vibrational]
preset = "methane"

[probe]
omega0 = 3.2
sigma0 = 0.0188
ts = "1 ps"

[detection]
omega_i = 1.6

[grid.shift]
start = "2800 cm^-1"
stop = "3100 cm^-1"
count = 31

[grid.delay]
start = 0
stop = 500
count = 3
"#;

#[test]
fn minimal_config_fills_defaults() {
    let cfg = parse_config("[vibronic]\npreset = \"nitrostilbene\"\n").unwrap();
    assert_eq!(cfg.kind, SignalKind::QfrsIntensity);
    match cfg.probe {
        ProbeState::Entangled(p) => {
            assert_eq!((p.omega0, p.sigma0, p.ts, p.ti), (4.0, 0.82, 30.0, 30.0));
        }
        other => panic!("unexpected probe {other:?}"),
    }
    assert_eq!(cfg.detection.omega_i, 2.0);
    assert_eq!(cfg.detection.lo_phase, 0.0);
    assert_eq!((cfg.shift.start, cfg.shift.stop, cfg.shift.count), (1.2, 3.2, 201));
    assert_eq!((cfg.delay.start, cfg.delay.stop, cfg.delay.count), (0.0, 100.0, 201));
    assert_eq!(cfg.output.format, OutputFormat::Text);
    assert!(!cfg.output.normalize);
    assert_eq!(cfg.model, Model::Vibronic(VibronicModel::nitrostilbene()));
}

#[test]
fn negative_width_names_the_field() {
    let err = parse_config("[vibronic]\npreset = \"nitrostilbene\"\n[probe]\nsigma0 = -1\n").unwrap_err();
    match &err {
        CliError::Validation { field, .. } => assert_eq!(field, "probe.sigma0"),
        other => panic!("expected a validation error, got {other:?}"),
    }
    assert_eq!(err.exit_code(), 2);
}

#[test]
fn wavenumber_strings_convert_to_ev() {
    let cfg = parse_config(
        "[vibrational]\n[[vibrational.modes]]\nomega = \"2914 cm^-1\"\ngamma = \"1 cm-1\"\n",
    )
    .unwrap();
    let Model::Vibrational(set) = &cfg.model else { panic!() };
    assert!((set.modes[0].omega - 0.36129).abs() < 1e-5);
    assert!((set.modes[0].gamma - 1.2398e-4).abs() < 1e-8);
}

#[test]
fn unknown_key_is_a_schema_error_with_path() {
    let err = parse_config("[vibronic]\npreset = \"nitrostilbene\"\n[grid.delay]\nstart = 0\nstop = 1\ncount = 2\nstep = 3\n")
        .unwrap_err();
    match err {
        CliError::Schema { path, .. } => assert_eq!(path, "grid.delay.step"),
        other => panic!("expected a schema error, got {other:?}"),
    }
    let err = parse_config("{\"vibronic\": {\"preset\": \"nitrostilbene\"}, \"probe\": {\"ts\": true}}").unwrap_err();
    assert!(matches!(err, CliError::Schema { ref path, .. } if path == "probe.ts"), "{err:?}");
}

#[test]
fn conflicting_blocks_are_rejected() {
    let two = "[vibronic]\npreset = \"nitrostilbene\"\n[vibrational]\npreset = \"methane\"\n";
    assert!(matches!(parse_config(two), Err(CliError::Validation { .. })));
    let empty_axis = "[vibronic]\npreset = \"nitrostilbene\"\n[grid.shift]\nstart = 2\nstop = 1\ncount = 5\n";
    match parse_config(empty_axis) {
        Err(CliError::Validation { field, .. }) => assert_eq!(field, "grid.shift.stop"),
        other => panic!("{other:?}"),
    }
    let wrong_kind = "kind = \"fastcars\"\n[vibronic]\npreset = \"nitrostilbene\"\n";
    assert!(parse_config(wrong_kind).is_err());
}

#[test]
fn lo_phase_is_wrapped() {
    let cfg = parse_config("kind = \"qfrs-heterodyne\"\n[vibronic]\npreset = \"nitrostilbene\"\n[detection]\nlo_phase = 7.0\n")
        .unwrap();
    assert!((cfg.detection.lo_phase - (7.0 - 2.0 * std::f64::consts::PI)).abs() < 1e-15);
}

#[test]
fn methane_lines_land_on_their_frequencies() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(dir.path(), "m.toml", METHANE);
    let out = dir.path().join("out");
    let o = qraman(&["fastcars", "--config", &config, "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let (shifts, _, values) = read_text(&fs::read_to_string(out.join("fastcars.dat")).unwrap()).unwrap();
    let peaks = local_maxima(&values[..shifts.len()]);
    let step = shifts[1] - shifts[0];
    for cm in [2914.0, 3019.0] {
        let target = cm / 8065.544;
        assert!(
            peaks.iter().any(|&i| (shifts[i] - target).abs() <= step),
            "no maximum near {cm} cm^-1: {:?}",
            peaks.iter().map(|&i| shifts[i] * 8065.544).collect::<Vec<_>>()
        );
    }
}

#[test]
fn methane_argmax_sits_on_a1() {
    // default 1200..3200 cm^-1 x 201 shift axis
    let dir = tempfile::tempdir().unwrap();
    let text = "kind = \"fastcars\"\n[vibrational]\npreset = \"methane\"\n\
                [probe]\nomega0 = 3.2\nsigma0 = 0.018806\nts = \"1 ps\"\n[detection]\nomega_i = 1.6\n";
    let config = write(dir.path(), "m.toml", text);
    let out = dir.path().join("out");
    let o = qraman(&["fastcars", "--config", &config, "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let meta: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("metadata.json")).unwrap()).unwrap();
    let argmax = meta["run"]["grids"][0]["stats"]["argmax_shift_ev"].as_f64().unwrap() * 8065.544;
    let step = 10.0;
    assert!((argmax - 2914.0).abs() <= step, "argmax at {argmax:.1} cm^-1");
}

#[test]
fn compare_probes_shares_axes() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(dir.path(), "q.toml", SMALL_QFRS);
    let out = dir.path().join("cmp");
    let o = qraman(&["compare-probes", "--config", &config, "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let grids: Vec<_> = ["entangled", "classical", "fock"]
        .iter()
        .map(|p| read_text(&fs::read_to_string(out.join(format!("qfrs-intensity-{p}.dat"))).unwrap()).unwrap())
        .collect();
    assert_eq!(grids.len(), 3);
    for g in &grids[1..] {
        assert_eq!(g.0, grids[0].0);
        assert_eq!(g.1, grids[0].1);
    }
    let meta: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("metadata.json")).unwrap()).unwrap();
    assert_eq!(meta["run"]["grids"].as_array().unwrap().len(), 3);
    assert_eq!(meta["run"]["subcommand"], "compare-probes");
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(dir.path(), "q.toml", SMALL_QFRS);
    let out = dir.path().join("o");
    let out = out.to_str().unwrap();
    let read_all = || {
        ["qfrs-intensity.dat", "qfrs-intensity.gp", "metadata.json"]
            .map(|f| fs::read(Path::new(out).join(f)).unwrap())
    };
    assert!(qraman(&["qfrs-intensity", "--config", &config, "--out", out, "--threads", "1"]).status.success());
    let first = read_all();
    assert!(qraman(&["qfrs-intensity", "--config", &config, "--out", out, "--threads", "3"]).status.success());
    assert_eq!(first, read_all());
}

#[test]
fn metadata_reproduces_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(dir.path(), "q.toml", SMALL_QFRS);
    let out = dir.path().join("a");
    assert!(qraman(&["qfrs-heterodyne", "--config", &config, "--out", out.to_str().unwrap()]).status.success());
    let meta = out.join("metadata.json");
    let text = fs::read_to_string(&meta).unwrap();
    let data = fs::read(out.join("qfrs-heterodyne.dat")).unwrap();
    let first = parse_config(&text).unwrap();
    assert_eq!(first.kind, SignalKind::QfrsHeterodyne);
    let again = qraman(&["qfrs-heterodyne", "--config", meta.to_str().unwrap()]);
    assert!(again.status.success());
    assert_eq!(fs::read_to_string(&meta).unwrap(), text);
    assert_eq!(fs::read(out.join("qfrs-heterodyne.dat")).unwrap(), data);
}

#[test]
fn text_values_round_trip() {
    use qraman::signal::scan_grid;
    let dir = tempfile::tempdir().unwrap();
    let config = write(dir.path(), "q.toml", SMALL_QFRS);
    let out = dir.path().join("v");
    assert!(qraman(&["qfrs-intensity", "--config", &config, "--out", out.to_str().unwrap()]).status.success());
    let (shifts, delays, values) = read_text(&fs::read_to_string(out.join("qfrs-intensity.dat")).unwrap()).unwrap();
    let cfg = parse_config(SMALL_QFRS).unwrap();
    let direct = scan_grid(&cfg.scan_request(cfg.probe), &cfg.shift.points(), &cfg.delay.points(), false).unwrap();
    assert_eq!(shifts, direct.shift_axis);
    assert_eq!(delays, direct.delay_axis);
    for (a, b) in values.iter().zip(&direct.values) {
        assert!((a - b).abs() <= 1e-12 * b.abs().max(1e-300), "{a} vs {b}");
    }
}

#[test]
fn binary_output_and_normalize_flag() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(dir.path(), "q.toml", SMALL_QFRS);
    let out = dir.path().join("b");
    let o = qraman(&["qfrs-intensity", "--config", &config, "--out", out.to_str().unwrap(), "--format", "binary", "--normalize"]);
    assert!(o.status.success());
    let values = read_binary(&fs::read(out.join("qfrs-intensity.bin")).unwrap()).unwrap();
    assert_eq!(values.len(), 21 * 5);
    let top = values.iter().cloned().fold(0.0, f64::max);
    assert!((top - 1.0).abs() < 1e-15);
    let meta: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("metadata.json")).unwrap()).unwrap();
    assert_eq!(meta["run"]["grids"][0]["normalized"], true);
    assert_eq!(meta["output"]["format"], "binary");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.toml", "[vibronic]\npreset = \"nitrostilbene\"\n[probe]\nsigma0 = -1\n");
    let o = qraman(&["qfrs-intensity", "--config", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("sigma0"));
    let missing = dir.path().join("nope.toml");
    assert_eq!(qraman(&["qfrs-intensity", "--config", missing.to_str().unwrap()]).status.code(), Some(4));
    let st = qraman(&["selftest"]);
    assert_eq!(st.status.code(), Some(0), "{}", String::from_utf8_lossy(&st.stdout));
    let lines = String::from_utf8_lossy(&st.stdout).lines().filter(|l| l.starts_with("PASS")).count();
    assert_eq!(lines, 6);
}

#[test]
fn thread_env_var_is_honored() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(dir.path(), "q.toml", SMALL_QFRS);
    let o = Command::new(BIN)
        .args(["qfrs-intensity", "--config", &config, "--out", dir.path().join("t").to_str().unwrap()])
        .env("QRAMAN_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}
