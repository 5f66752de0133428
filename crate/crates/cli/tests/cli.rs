use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn corrdim(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_corrdim"))
        .args(args)
        .current_dir(cwd)
        .env_remove("CORRDIM_WORKERS")
        .output()
        .expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn lines(s: &str) -> String {
    let mut out = s.lines().collect::<Vec<_>>().join("\n");
    out.push('\n');
    out
}

#[test]
fn synth_logistic_writes_lossless_samples() {
    let dir = tempfile::tempdir().unwrap();
    let o = corrdim(&["synth", "logistic", "--mu", "4", "--x0", "0.3", "--n", "3"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text, "0.3\n0.84\n0.5376000000000001\n");
    let v: Vec<f64> = text.lines().map(|l| l.parse().unwrap()).collect();
    for (a, b) in v.iter().zip([0.3, 0.84, 0.5376]) {
        assert!((a - b).abs() < 1e-15);
    }
}

#[test]
fn synth_round_trips_through_file() {
    let dir = tempfile::tempdir().unwrap();
    let o = corrdim(&["synth", "henon", "--n", "200", "--out", "h.txt"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let s = corrdim::signal_io::load_ascii_signal(dir.path().join("h.txt"), 1.0, "h").unwrap();
    let expect = corrdim::signal_io::gen_henon(200, 1.4, 0.3, 0.0, 0.0, 1000).unwrap();
    assert_eq!(s.samples(), expect.samples());
}

#[test]
fn synth_rejects_unknown_kind() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(corrdim(&["synth", "lorenz"], dir.path()).status.code(), Some(2));
}

#[test]
fn synth_domain_error_is_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = corrdim(&["synth", "logistic", "--x0", "1.5"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("x0"));
}

#[test]
fn ci_constant_signal_heaviside_is_all_ones() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("c.txt"), "0.5\n".repeat(100)).unwrap();
    let o = corrdim(
        &["ci", "c.txt", "--kernel", "cd", "--norm", "none", "--cutoff", "0", "--m", "1..3", "--out-dir", "out"],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let grid = fs::read_to_string(dir.path().join("out/grid.csv")).unwrap();
    let rows: Vec<&str> = grid.lines().skip(1).collect();
    assert_eq!(rows.len(), 3 * 41);
    assert!(rows.iter().all(|r| r.ends_with(",1")), "{grid}");
}

#[test]
fn ci_logistic_defaults_shape() {
    let dir = tempfile::tempdir().unwrap();
    let s = corrdim::signal_io::gen_logistic(1000, 4.0, 0.3).unwrap();
    corrdim::signal_io::write_ascii_signal(&s, dir.path().join("log.txt")).unwrap();
    let o = corrdim(&["ci", "log.txt", "--out-dir", "out", "--taps"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let grid = fs::read_to_string(dir.path().join("out/grid.csv")).unwrap();
    assert_eq!(grid.lines().count(), 821);
    assert_eq!(grid.lines().next(), Some("m,r,c"));
    let taps = fs::read_to_string(dir.path().join("out/taps.csv")).unwrap();
    assert_eq!(taps.lines().count(), 60);

    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("out/report.json")).unwrap()).unwrap();
    assert_eq!(report["command"], "ci");
    assert_eq!(report["config"]["kernels"][0], "mcd");
    assert_eq!(report["config"]["metric"], "euclidean");
    assert_eq!(report["config"]["preprocessing"]["normalization"], "l1");
    assert_eq!(report["config"]["preprocessing"]["filter"]["cutoff_hz"], 60.0);
    assert_eq!(report["config"]["thresholds"].as_array().unwrap().len(), 41);
    assert_eq!(report["n_vectors"][19], serde_json::json!([20, 981]));
}

#[test]
fn missing_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let o = corrdim(&["ci", "nope.txt"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("nope.txt"));
}

#[test]
fn bad_flags_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["ci", "x.txt", "--m", "0..3"][..],
        &["ci", "x.txt", "--r-values", "0.1,0.01"],
        &["ci", "x.txt", "--kernel", "gauss"],
        &["cd", "x.txt", "--window", "2"],
        &["--workers", "0", "ci", "x.txt"],
        &["frobnicate"],
    ] {
        assert_eq!(corrdim(args, dir.path()).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn infeasible_filter_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("x.txt"), lines(&"1\n2\n".repeat(200))).unwrap();
    let o = corrdim(&["ci", "x.txt", "--sample-rate", "100"], dir.path());
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
}

#[test]
fn constant_signal_has_no_scaling_region() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("c.txt"), "2.5\n".repeat(300)).unwrap();
    let o = corrdim(
        &["cd", "c.txt", "--kernel", "cd", "--norm", "none", "--cutoff", "0", "--m", "1..3"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("no scaling region"), "{}", stderr(&o));
}

#[test]
fn zero_signal_under_l1_is_degenerate() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("z.txt"), "0\n".repeat(300)).unwrap();
    let o = corrdim(&["ci", "z.txt", "--cutoff", "0"], dir.path());
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn cd_fits_injected_power_law_grid() {
    let dir = tempfile::tempdir().unwrap();
    let r = corrdim::dimension::make_log_r_grid(1e-4, 1.0, 41).unwrap().values;
    let mut csv = String::from("m,r,c\n");
    for (m, d) in [(1usize, 0.8), (2, 1.7), (3, 2.4)] {
        for &rk in &r {
            csv.push_str(&format!("{m},{rk},{}\n", 0.5 * rk.powf(d)));
        }
    }
    fs::write(dir.path().join("grid.csv"), csv).unwrap();
    let o = corrdim(&["cd", "grid.csv", "--from-grid", "--out-dir", "out"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let est = fs::read_to_string(dir.path().join("out/estimates.csv")).unwrap();
    let mut it = est.lines();
    assert_eq!(it.next(), Some("m,slope,intercept,r_squared,r_lo,r_hi,n_points"));
    for (line, d) in it.zip([0.8, 1.7, 2.4]) {
        let slope: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert!((slope - d).abs() <= 1e-9, "{line}");
    }
    let report = fs::read_to_string(dir.path().join("out/report.json")).unwrap();
    assert!(report.contains("\"kind\": \"grid\""));
}

#[test]
fn cd_malformed_grid_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("g.csv"), "m,r,c\n1,0.1,abc\n").unwrap();
    assert_eq!(corrdim(&["cd", "g.csv", "--from-grid"], dir.path()).status.code(), Some(2));
}

fn write_manifest(dir: &Path, pairs: &[(&str, &str, &str)]) {
    let entries: Vec<String> = pairs
        .iter()
        .map(|(id, a, b)| {
            format!(r#"{{"id":"{id}","path_a":"{a}","path_b":"{b}","label_a":"interictal","label_b":"ictal"}}"#)
        })
        .collect();
    fs::write(
        dir.join("manifest.json"),
        format!(r#"{{"sample_rate_hz": 173.61, "pairs": [{}]}}"#, entries.join(",")),
    )
    .unwrap();
}

fn write_signal(dir: &Path, name: &str, s: &corrdim::signal_io::RawSignal) {
    corrdim::signal_io::write_ascii_signal(s, dir.join(name)).unwrap();
}

#[test]
fn compare_self_pairs_are_zero() {
    let dir = tempfile::tempdir().unwrap();
    write_signal(dir.path(), "a.txt", &corrdim::signal_io::gen_logistic(400, 3.9, 0.2).unwrap());
    write_signal(dir.path(), "b.txt", &corrdim::signal_io::gen_sine(400, 5.0, 173.61, 1.0).unwrap());
    write_manifest(dir.path(), &[("p1", "a.txt", "a.txt"), ("p2", "b.txt", "b.txt")]);
    let o = corrdim(&["compare", "manifest.json", "--m", "3", "--out-dir", "out"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    for k in ["cd", "mcd"] {
        let pairs = fs::read_to_string(dir.path().join(format!("out/pairs_{k}.csv"))).unwrap();
        let mut it = pairs.lines();
        assert_eq!(it.next(), Some("pair_id,c_a,c_b,diff"));
        let rows: Vec<&str> = it.collect();
        assert_eq!(rows.len(), 2);
        assert!(rows.iter().all(|r| r.ends_with(",0")), "{pairs}");
    }
    let summary = fs::read_to_string(dir.path().join("out/summary.csv")).unwrap();
    assert_eq!(summary, "kernel,n,mean_diff,std_err\ncd,2,0,0\nmcd,2,0,0\n");
    let report = fs::read_to_string(dir.path().join("out/report.json")).unwrap();
    assert!(report.contains("\"difference\": \"interictal - ictal\""));
}

#[test]
fn compare_unreadable_signal_names_pair() {
    let dir = tempfile::tempdir().unwrap();
    write_signal(dir.path(), "a.txt", &corrdim::signal_io::gen_logistic(400, 3.9, 0.2).unwrap());
    fs::write(dir.path().join("bad.txt"), "0.1\nfoo\n").unwrap();
    write_manifest(dir.path(), &[("ok", "a.txt", "a.txt"), ("broken-7", "a.txt", "bad.txt")]);
    let o = corrdim(&["compare", "manifest.json", "--m", "3"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("broken-7"), "{}", stderr(&o));
}

#[test]
fn compare_missing_file_names_pair() {
    let dir = tempfile::tempdir().unwrap();
    write_signal(dir.path(), "a.txt", &corrdim::signal_io::gen_logistic(400, 3.9, 0.2).unwrap());
    write_manifest(dir.path(), &[("ok", "a.txt", "a.txt"), ("gone", "a.txt", "missing.txt")]);
    let o = corrdim(&["compare", "manifest.json"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("gone"), "{}", stderr(&o));
}

#[test]
fn scan_default_thresholds() {
    let dir = tempfile::tempdir().unwrap();
    write_signal(dir.path(), "a.txt", &corrdim::signal_io::gen_logistic(400, 3.9, 0.2).unwrap());
    write_signal(dir.path(), "b.txt", &corrdim::signal_io::gen_logistic(400, 4.0, 0.7).unwrap());
    write_signal(dir.path(), "c.txt", &corrdim::signal_io::gen_sine(400, 9.0, 173.61, 1.0).unwrap());
    write_manifest(dir.path(), &[("p1", "a.txt", "c.txt"), ("p2", "b.txt", "c.txt")]);
    let o = corrdim(&["scan", "manifest.json", "--m", "4", "--out-dir", "out"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let scan = fs::read_to_string(dir.path().join("out/scan.csv")).unwrap();
    let rows: Vec<&str> = scan.lines().collect();
    assert_eq!(rows[0], "kernel,r,m,n,mean_diff,std_err");
    assert_eq!(rows.len(), 17);
    assert!(rows[1].starts_with("cd,0.0005,4,2,"));
    assert!(rows[16].starts_with("mcd,0.01,4,2,"));
}

#[test]
fn heatmap_writes_pgm_and_matrix() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("x.txt"), "0\n1\n3\n").unwrap();
    let o = corrdim(
        &["heatmap", "x.txt", "--m", "1", "--cutoff", "0", "--norm", "none", "--csv", "--out-dir", "out"],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let pgm = fs::read(dir.path().join("out/dij.pgm")).unwrap();
    let mut expect = b"P5\n3 3\n255\n".to_vec();
    expect.extend([0, 85, 255, 85, 0, 170, 255, 170, 0]);
    assert_eq!(pgm, expect);
    assert_eq!(fs::read_to_string(dir.path().join("out/dij.csv")).unwrap(), "0,1,3\n1,0,2\n3,2,0\n");
    let report = fs::read_to_string(dir.path().join("out/report.json")).unwrap();
    assert!(report.contains("\"d_max\": 3.0"), "{report}");
}

#[test]
fn heatmap_over_cap_is_input_error() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("x.txt"), lines(&"1\n2\n3\n".repeat(10))).unwrap();
    let o = corrdim(
        &["heatmap", "x.txt", "--m", "1", "--cutoff", "0", "--max-vectors", "5"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn embed_dumps_vectors() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("x.txt"), "1\n2\n3\n4\n5\n").unwrap();
    let o = corrdim(
        &["embed", "x.txt", "--m", "2", "--lag", "2", "--cutoff", "0", "--norm", "none"],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(String::from_utf8(o.stdout).unwrap(), "x0,x1\n1,3\n2,4\n3,5\n");
}

#[test]
fn unwritable_output_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("x.txt"), "0.5\n".repeat(50)).unwrap();
    fs::write(dir.path().join("blocker"), "").unwrap();
    let o = corrdim(
        &["ci", "x.txt", "--cutoff", "0", "--norm", "none", "--m", "1", "--out-dir", "blocker/sub"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(4), "{}", stderr(&o));
}

#[test]
fn workers_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("x.txt"), "0.5\n".repeat(50)).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_corrdim"))
        .args(["ci", "x.txt", "--cutoff", "0", "--norm", "none", "--m", "1"])
        .current_dir(dir.path())
        .env("CORRDIM_WORKERS", "0")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}
