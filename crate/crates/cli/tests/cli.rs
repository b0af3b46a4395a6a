use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const EXAMPLE_SUB: &str = r#""substitution": {"alphabet": 4, "images": ["12", "14", "2", "3"]}"#;

fn salem(args: &[&str], config: &str, dir: &Path) -> Output {
    let cfg_path = dir.join("config.json");
    fs::write(&cfg_path, config).unwrap();
    Command::new(env!("CARGO_BIN_EXE_salem"))
        .args(args)
        .arg("--config")
        .arg(&cfg_path)
        .arg("--out")
        .arg(dir.join("out"))
        .output()
        .unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn read(dir: &Path, name: &str) -> String {
    fs::read_to_string(dir.join("out").join(name)).unwrap()
}

fn example_config(extra: &str) -> String {
    format!("{{{EXAMPLE_SUB}{extra}}}")
}

#[test]
fn analyze_example_is_salem() {
    let dir = TempDir::new().unwrap();
    let out = salem(&["analyze"], &example_config(""), dir.path());
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_str(&read(dir.path(), "analyze.json")).unwrap();
    assert_eq!(v["salem"], true);
    assert_eq!(v["verdict"], "Salem");
    assert!((v["alpha_f64"].as_f64().unwrap() - 1.7220838057).abs() < 1e-9);
    assert_eq!(v["char_poly"], "x^4 - x^3 - x^2 - x + 1");
    assert_eq!(v["matrix"], serde_json::json!([[1, 1, 0, 0], [1, 0, 1, 0], [0, 0, 0, 1], [0, 1, 0, 0]]));
    assert_eq!(v["length"], "5");
    assert_eq!(v["delta1"], "1/5");
    assert_eq!(v["meta"]["config_sha256"].as_str().unwrap().len(), 64);
    // 256 bits carry 77 decimal digits.
    let alpha = v["alpha"].as_str().unwrap();
    assert!(alpha.starts_with("1.7220838057390422450270692"));
    assert_eq!(alpha.trim_end_matches("e0").len(), 78);
}

#[test]
fn analyze_rank_one_substitution() {
    let dir = TempDir::new().unwrap();
    let out = salem(&["analyze"], r#"{"substitution": {"alphabet": 1, "images": ["11"]}}"#, dir.path());
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&read(dir.path(), "analyze.json")).unwrap();
    assert_eq!(v["alpha_f64"].as_f64().unwrap(), 2.0);
    assert_eq!(v["verdict"], "other");
    assert_eq!(v["salem"], false);
}

#[test]
fn invalid_configs_exit_2() {
    let dir = TempDir::new().unwrap();
    let out = salem(&["analyze"], "{not json", dir.path());
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("invalid config"));
    let out = salem(&["analyze"], &example_config(r#", "spectral": {"num_samples": 0}"#), dir.path());
    assert_eq!(code(&out), 2);
    let out = salem(&["analyze"], r#"{"substitution": {"alphabet": 2, "images": ["13", "1"]}}"#, dir.path());
    assert_eq!(code(&out), 2);
}

#[test]
fn non_primitive_exits_3() {
    let dir = TempDir::new().unwrap();
    let out = salem(&["analyze"], r#"{"substitution": {"alphabet": 2, "images": ["11", "22"]}}"#, dir.path());
    assert_eq!(code(&out), 3);
}

#[test]
fn trace_orbit_periods_and_errors() {
    let dir = TempDir::new().unwrap();
    let cfg = example_config(r#", "eta": ["1,0,0,0/2", "1,0,0,0/1"], "horizon": 12"#);
    let out = salem(&["trace-orbit"], &cfg, dir.path());
    assert_eq!(code(&out), 0);
    let summary = read(dir.path(), "trace_orbit_summary.csv");
    let lines: Vec<&str> = summary.lines().collect();
    assert!(lines[0].starts_with("# command=trace-orbit"));
    assert_eq!(lines[1], "eta,L,period,preperiod,cycle");
    assert_eq!(lines[2], "\"1,0,0,0/2\",2,5,0,\"0,1,1,1,1\"");
    assert_eq!(lines[3], "\"1,0,0,0/1\",1,1,0,0");
    let dump = read(dir.path(), "trace_orbit.csv");
    assert_eq!(dump.lines().nth(1).unwrap(), "eta,n,T_n,residue,frac_orbit");
    assert_eq!(dump.lines().count(), 2 + 2 * 13);
    assert!(dump.lines().nth(3).unwrap().starts_with("\"1,0,0,0/2\",1,1,1,"));

    let bad = example_config(r#", "eta": ["1,0,x,0/2"]"#);
    assert_eq!(code(&salem(&["trace-orbit"], &bad, dir.path())), 4);
    let short = example_config(r#", "eta": ["1,0,0,0/2"], "horizon": 3"#);
    assert_eq!(code(&salem(&["trace-orbit"], &short, dir.path())), 4);
    let wrong_degree = example_config(r#", "eta": ["1,0/2"]"#);
    assert_eq!(code(&salem(&["trace-orbit"], &wrong_degree, dir.path())), 4);
}

#[test]
fn equidist_full_interval_and_panel() {
    let dir = TempDir::new().unwrap();
    let cfg = example_config(
        r#", "eta": ["1,0,0,0/2", "1,1,0,0/3"], "intervals": [[0, 1], [0.1, 0.4]], "equidist_n": 20000"#,
    );
    assert_eq!(code(&salem(&["equidist"], &cfg, dir.path())), 0);
    let text = read(dir.path(), "equidist.csv");
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 4);
    for r in &rows {
        let (emp, torus, diff): (f64, f64, f64) = (r[5].parse().unwrap(), r[6].parse().unwrap(), r[7].parse().unwrap());
        assert!(diff <= 0.03, "{r:?}");
        if &r[1] == "0.0000000000000000e0" && &r[2] == "1.0000000000000000e0" {
            assert_eq!((emp, torus), (1.0, 1.0));
        }
    }
}

#[test]
fn selberg_check_outputs() {
    let dir = TempDir::new().unwrap();
    let cfg = example_config(r#", "intervals": [[0.2, 0.7]], "selberg_degrees": [4, 16]"#);
    assert_eq!(code(&salem(&["selberg-check"], &cfg, dir.path())), 0);
    let text = read(dir.path(), "selberg.csv");
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    for r in rdr.records().map(|r| r.unwrap()) {
        let f = |i: usize| r[i].parse::<f64>().unwrap();
        assert!(f(3) >= -1e-9 && f(4) >= -1e-9);
        assert!((f(5) - f(7)).abs() < 1e-6 && (f(6) - f(8)).abs() < 1e-6);
    }
    let coeffs = read(dir.path(), "selberg_coefficients.csv");
    assert_eq!(coeffs.lines().nth(1).unwrap(), "a,b,N,polynomial,k,cos_coeff,sin_coeff");
    // (4 + 1) + (16 + 1) rows for each of S⁺ and S⁻.
    assert_eq!(coeffs.lines().count(), 2 + 2 * (5 + 17));
}

const SPECTRAL: &str = r#", "spectral": {"omega": [0.0, 0.7], "r_grid": [2, 4, 8, 16, 32, 64, 128, 256, 512], "num_samples": 16}"#;

#[test]
fn spectral_is_identical_across_thread_counts_and_runs() {
    let cfg = example_config(SPECTRAL);
    let mut outputs = Vec::new();
    for threads in ["1", "2", "8", "8"] {
        let dir = TempDir::new().unwrap();
        let out = salem(&["spectral", "--threads", threads, "--seed", "7"], &cfg, dir.path());
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        outputs.push((read(dir.path(), "spectral.csv"), read(dir.path(), "spectral_fit.json")));
    }
    assert!(outputs.windows(2).all(|w| w[0] == w[1]));
    let other_seed = {
        let dir = TempDir::new().unwrap();
        salem(&["spectral", "--seed", "8"], &cfg, dir.path());
        read(dir.path(), "spectral.csv")
    };
    assert_ne!(other_seed, outputs[0].0);
}

#[test]
fn spectral_slopes_and_zero_frequency() {
    let dir = TempDir::new().unwrap();
    assert_eq!(code(&salem(&["spectral"], &example_config(SPECTRAL), dir.path())), 0);
    let v: Value = serde_json::from_str(&read(dir.path(), "spectral_fit.json")).unwrap();
    for fit in v["fits"].as_array().unwrap() {
        let slope = fit["holder"]["slope"].as_f64().unwrap();
        assert!((-1.0..=1.0 + 1e-9).contains(&slope), "slope {slope}");
    }
    // At ω = 0, G_R grows like R: slope close to 1.
    let s0 = v["fits"][0]["holder"]["slope"].as_f64().unwrap();
    assert!((s0 - 1.0).abs() < 0.05, "{s0}");
}

#[test]
fn spectral_window_error_exits_6() {
    let dir = TempDir::new().unwrap();
    // A length cap below the needed tiling is reported as a window error.
    let cfg = example_config(r#", "spectral": {"r_grid": [1e12, 2e12, 4e12, 8e12, 1.6e13, 3.2e13]}"#);
    assert_eq!(code(&salem(&["spectral"], &cfg, dir.path())), 6);
}

#[test]
fn bounds_example_and_case_errors() {
    let dir = TempDir::new().unwrap();
    let cfg = example_config(
        r#", "eta": ["1,0,0,0/2"], "bounds": {"case_params": [
            {"l": 6, "abs_eta": 1.0, "abs_sigma0_eta": 1.0, "h": 2.0, "m": 1,
             "delta1_beta": 0.01, "residues_all_zero": false, "some_residue_l": 1}]}"#,
    );
    let out = salem(&["bounds"], &cfg, dir.path());
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_str(&read(dir.path(), "bounds.json")).unwrap();
    let eta = &v["eta_reports"][0];
    assert_eq!(eta["report"]["case"]["case_id"], "L36");
    assert!((eta["report"]["delta"].as_f64().unwrap() - 2.778e-3).abs() < 1e-6);
    assert!(eta["report"]["gamma"].as_f64().unwrap() > 0.0);
    assert!(eta["hypotheses"]["all"].as_bool().unwrap());
    let case = &v["case_reports"][0];
    assert_eq!(case["result"]["case_id"], "L36");
    assert!(case["gamma"].as_f64().unwrap() > 0.0);

    let inconsistent = example_config(
        r#", "bounds": {"case_params": [
            {"l": 1, "abs_eta": 1.0, "abs_sigma0_eta": 1.0, "h": 0.5, "m": 1,
             "delta1_beta": 0.01, "residues_all_zero": false, "some_residue_l": 1}]}"#,
    );
    assert_eq!(code(&salem(&["bounds"], &inconsistent, dir.path())), 7);
}

#[test]
fn report_runs_everything_with_manifest() {
    let dir = TempDir::new().unwrap();
    let cfg = example_config(&format!(r#", "eta": ["1,0,0,0/2"], "equidist_n": 5000{SPECTRAL}"#));
    let out = salem(&["report"], &cfg, dir.path());
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let index: Value = serde_json::from_str(&read(dir.path(), "report.json")).unwrap();
    assert_eq!(index["commands_run"].as_array().unwrap().len(), 6);
    let manifest: Value = serde_json::from_str(&read(dir.path(), "manifest.json")).unwrap();
    let hash = index["meta"]["config_sha256"].as_str().unwrap();
    for entry in manifest["files"].as_array().unwrap() {
        let name = entry["name"].as_str().unwrap();
        let text = read(dir.path(), name);
        assert!(text.contains(hash), "{name} lacks the config hash");
    }
}

#[test]
fn report_skips_eta_commands_for_non_salem() {
    let dir = TempDir::new().unwrap();
    let cfg = format!(r#"{{"substitution": {{"alphabet": 2, "images": ["12", "1"]}}{SPECTRAL}}}"#);
    let out = salem(&["report"], &cfg, dir.path());
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let index: Value = serde_json::from_str(&read(dir.path(), "report.json")).unwrap();
    let skipped: Vec<&str> = index["skipped"].as_array().unwrap().iter().map(|s| s["command"].as_str().unwrap()).collect();
    assert_eq!(skipped, ["trace-orbit", "equidist", "bounds"]);
}
