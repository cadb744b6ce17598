//! End-to-end tests of the command-line binary: argument handling, exit
//! codes, file layout, and byte-level determinism of the emitted CSV.
//!
//! Exit code 3 (physicality) has no test here on purpose: scenario
//! validation screens out every input that could reach an unphysical state,
//! so well-formed CLI input cannot trigger it — the code exists for the
//! library's internal guards and is unit-tested with the error type.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn thzqkd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_thzqkd"))
        .args(args)
        .output()
        .expect("binary spawns")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is UTF-8")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr is UTF-8")
}

fn assert_exit(out: &Output, code: i32, context: &str) {
    assert_eq!(
        out.status.code(),
        Some(code),
        "{context}\nstdout: {}\nstderr: {}",
        stdout(out),
        stderr(out)
    );
}

/// A fast two-subcarrier fixture on a fixed channel; detection, noise mode,
/// floor and W policy all rely on their documented defaults.
const FIXED_SCENARIO: &str = r#"{
  "name": "cli_fixture",
  "plan": {"f_i_hz": 7.8e11, "delta_f_hz": 5e9, "n": 2},
  "modulator": {"mu": 0.01, "a_sig": 1.0, "kappa": 0.98, "theta_rad": 0.0628, "v_mod": 1000.0},
  "channel": {"type": "fixed", "transmissivity": 0.9},
  "environment": {"temperature_k": 30.0},
  "sweep": {"start_m": 1.0, "stop_m": 5.0, "points": 7, "spacing": "linear"}
}"#;

/// Same plan through two centimetres of dry air, exercising spectrum
/// generation and its on-disk cache.
const OPEN_AIR_SCENARIO: &str = r#"{
  "name": "cli_open_air",
  "plan": {"f_i_hz": 5.8e11, "delta_f_hz": 5e9, "n": 2},
  "modulator": {"mu": 0.01, "a_sig": 1.0, "kappa": 0.98, "theta_rad": 0.0628, "v_mod": 1000.0},
  "channel": {"type": "open_air", "relative_humidity_pct": 17.89},
  "environment": {"temperature_k": 300.0},
  "sweep": {"start_m": 0.01, "stop_m": 0.02, "points": 2, "spacing": "linear"}
}"#;

fn write_scenario(dir: &Path, body: &str) -> String {
    let path = dir.join("scenario.json");
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn help_and_version_exit_cleanly() {
    for args in [&["--help"][..], &["--version"], &["simulate", "--help"], &["preset", "--help"]] {
        let out = thzqkd(args);
        assert_exit(&out, 0, &format!("{args:?} should exit 0"));
        assert!(!stdout(&out).is_empty(), "{args:?} should print to stdout");
    }
    let help = stdout(&thzqkd(&["--help"]));
    for subcommand in ["simulate", "preset", "absorption", "modnoise"] {
        assert!(help.contains(subcommand), "--help should mention {subcommand}");
    }
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        &[][..],
        &["frobnicate"],
        &["preset", "--bogus"],
        &["absorption", "--start", "1e11"],            // missing stop/step/water/temp
        &["absorption", "--start", "3e11", "--stop", "4e11", "--step", "1e9",
          "--temp", "296", "--rh", "50", "--pw", "5"], // --rh and --pw exclude each other
    ] {
        let out = thzqkd(args);
        assert_exit(&out, 1, &format!("{args:?} should exit 1"));
        assert!(!stderr(&out).is_empty(), "{args:?} should explain itself on stderr");
    }
}

#[test]
fn preset_list_shows_every_family() {
    let out = thzqkd(&["preset", "--list"]);
    assert_exit(&out, 0, "preset --list");
    let listing = stdout(&out);
    for family in
        ["fig2", "fig4a", "fig4f", "fig5", "fig6a", "fig6b", "fig7", "fig8a", "fig8b", "fig9"]
    {
        assert!(listing.contains(family), "listing should include {family}:\n{listing}");
    }
}

#[test]
fn unknown_preset_exits_one() {
    let out = thzqkd(&["preset", "nope"]);
    assert_exit(&out, 1, "unknown preset");
    assert!(stderr(&out).contains("error:"), "stderr: {}", stderr(&out));
}

#[test]
fn preset_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for out_dir in [&a, &b] {
        let out = thzqkd(&["preset", "fig9_n12", "--out", out_dir.to_str().unwrap()]);
        assert_exit(&out, 0, "preset fig9_n12");
        assert!(stdout(&out).contains("wrote "), "should report the written file");
    }
    let first = fs::read(a.join("fig9_n12.csv")).unwrap();
    let second = fs::read(b.join("fig9_n12.csv")).unwrap();
    assert!(!first.is_empty());
    assert_eq!(first, second, "repeated preset runs must emit identical bytes");
    let text = String::from_utf8(first).unwrap();
    assert!(text.starts_with("distance_m,r_ofdm_bits\n"), "header line: {text}");
    assert!(text.lines().last().unwrap().starts_with("# max_secure_distance_m="));
}

#[test]
fn simulate_writes_curve_and_reuses_spectrum_cache() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = write_scenario(dir.path(), OPEN_AIR_SCENARIO);
    let out_dir = dir.path().join("out");
    let run = || {
        let out = thzqkd(&["simulate", &scenario, "--out", out_dir.to_str().unwrap()]);
        assert_exit(&out, 0, "simulate open-air fixture");
        fs::read_to_string(out_dir.join("cli_open_air.csv")).unwrap()
    };
    let first = run();
    let cached: Vec<String> = fs::read_dir(&out_dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|name| name.starts_with("spectrum_"))
        .collect();
    assert_eq!(cached.len(), 1, "one cached spectrum table, got {cached:?}");
    assert_eq!(first, run(), "cached rerun must reproduce the curve exactly");
    // 2 sweep points -> header + 2 rows + secure-distance comment.
    assert_eq!(first.lines().count(), 4, "unexpected layout:\n{first}");
}

#[test]
fn simulate_wide_adds_per_subcarrier_columns() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = write_scenario(dir.path(), FIXED_SCENARIO);
    let out_dir = dir.path().join("out");
    let out = thzqkd(&["simulate", &scenario, "--out", out_dir.to_str().unwrap(), "--wide"]);
    assert_exit(&out, 0, "simulate --wide");
    let text = fs::read_to_string(out_dir.join("cli_fixture.csv")).unwrap();
    assert!(text.starts_with("distance_m,r_ofdm_bits,r_k_1,r_k_2\n"), "header: {text}");
}

#[test]
fn simulate_is_thread_count_invariant() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = write_scenario(dir.path(), FIXED_SCENARIO);
    let mut curves = Vec::new();
    for threads in ["1", "2"] {
        let out_dir = dir.path().join(format!("t{threads}"));
        let out = thzqkd(&[
            "simulate",
            &scenario,
            "--out",
            out_dir.to_str().unwrap(),
            "--threads",
            threads,
        ]);
        assert_exit(&out, 0, "simulate --threads");
        curves.push(fs::read(out_dir.join("cli_fixture.csv")).unwrap());
    }
    assert_eq!(curves[0], curves[1], "thread count changed the output bytes");
}

#[test]
fn malformed_scenario_exits_one_with_field_path() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = write_scenario(
        dir.path(),
        &FIXED_SCENARIO.replace("\"points\": 7", "\"points\": 1"),
    );
    let out = thzqkd(&["simulate", &scenario]);
    assert_exit(&out, 1, "invalid sweep.points");
    let err = stderr(&out);
    assert!(err.contains("$.sweep.points"), "error should name the field: {err}");

    let trailing = write_scenario(dir.path(), &format!("{FIXED_SCENARIO} extra"));
    let out = thzqkd(&["simulate", &trailing]);
    assert_exit(&out, 1, "trailing garbage after the document");
}

#[test]
fn missing_input_files_exit_two() {
    let out = thzqkd(&["simulate", "/no/such/scenario.json"]);
    assert_exit(&out, 2, "missing scenario file");
    assert!(stderr(&out).contains("scenario.json"), "stderr: {}", stderr(&out));

    let out = thzqkd(&[
        "absorption", "--start", "3e11", "--stop", "3.1e11", "--step", "1e9", "--rh", "50",
        "--temp", "296", "--lines", "/no/such/lines.par",
    ]);
    assert_exit(&out, 2, "missing line table");
}

#[test]
fn absorption_tabulates_to_stdout_or_file() {
    let args = ["absorption", "--start", "5.5e11", "--stop", "5.6e11", "--step", "5e9",
        "--rh", "50", "--temp", "296"];
    let out = thzqkd(&args);
    assert_exit(&out, 0, "absorption to stdout");
    let table = stdout(&out);
    let lines: Vec<&str> = table.lines().collect();
    assert_eq!(lines[0], "frequency_hz,alpha_per_m");
    assert_eq!(lines.len(), 4, "550/555/560 GHz grid: {table}");
    assert!(lines[1].starts_with("550000000000,"));
    for row in &lines[1..] {
        let alpha: f64 = row.split(',').nth(1).unwrap().parse().unwrap();
        assert!(alpha > 0.0, "absorption should be positive near the 557 GHz line");
    }

    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("alpha.csv");
    let mut with_file = args.to_vec();
    with_file.extend(["--out", file.to_str().unwrap()]);
    let out = thzqkd(&with_file);
    assert_exit(&out, 0, "absorption to file");
    assert_eq!(fs::read_to_string(&file).unwrap(), table, "file and stdout must agree");

    // --pw bypasses the humidity conversion; continuum overrides parse.
    let out = thzqkd(&["absorption", "--start", "5.5e11", "--stop", "5.5e11", "--step", "1e9",
        "--pw", "10.0", "--temp", "296", "--cs", "4.0e-8", "--cf", "1.4e-9"]);
    assert_exit(&out, 0, "absorption via --pw");
}

#[test]
fn modnoise_tabulates_every_subcarrier() {
    let out = thzqkd(&["modnoise", "--n", "3", "--mu", "0.01", "--kappa", "0.98",
        "--theta", "0.0628", "--vmod", "1000", "--fi", "3e11", "--df", "5e9"]);
    assert_exit(&out, 0, "modnoise");
    let table = stdout(&out);
    let lines: Vec<&str> = table.lines().collect();
    assert_eq!(lines[0], "n,k,eps_mod_snu");
    assert_eq!(lines.len(), 5, "3 subcarriers + header + worst-case comment: {table}");
    for (i, row) in lines[1..4].iter().enumerate() {
        assert!(row.starts_with(&format!("3,{},", i + 1)), "row {row}");
        let eps: f64 = row.split(',').nth(2).unwrap().parse().unwrap();
        assert!(eps > 0.0);
    }
    assert!(lines[4].starts_with("# worst_k="), "summary: {}", lines[4]);

    let out = thzqkd(&["modnoise", "--n", "0", "--mu", "0.01", "--kappa", "0.98",
        "--theta", "0.0628", "--vmod", "1000", "--fi", "3e11", "--df", "5e9"]);
    assert_exit(&out, 1, "n = 0 must be rejected");
}

#[test]
fn modulation_noise_family_writes_per_n_tables() {
    let dir = tempfile::tempdir().unwrap();
    let out = thzqkd(&["preset", "fig2", "--out", dir.path().to_str().unwrap()]);
    assert_exit(&out, 0, "preset fig2");
    for n in (10..=120).step_by(10) {
        let table = fs::read_to_string(dir.path().join(format!("fig2_n{n}.csv"))).unwrap();
        assert!(table.starts_with("k,eps_mod_snu\n"));
        assert_eq!(table.lines().count(), n + 1, "N={n} table should have N rows");
    }
    let summary = fs::read_to_string(dir.path().join("fig2_worst.csv")).unwrap();
    assert!(summary.starts_with("n,k_worst,eps_worst_snu\n"));
    assert_eq!(summary.lines().count(), 13, "12 band sizes + header");
}
