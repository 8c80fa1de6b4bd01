use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_mmwpl"));
    cmd.env_remove("MMWPL_THREADS");
    cmd
}

fn scene(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/scenes").join(format!("{name}.json"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn mmwpl")
}

fn ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines().skip(1).map(|l| l.split(',').map(str::to_owned).collect()).collect()
}

fn col(csv: &str, i: usize) -> Vec<f64> {
    rows(csv).iter().map(|r| r[i].parse().unwrap()).collect()
}

#[test]
fn empty_scene_is_all_los() {
    let dir = tempfile::tempdir().unwrap();
    let db = dir.path().join("empty.json");
    std::fs::write(&db, r#"{"name": "empty", "buildings": []}"#).unwrap();
    let csv = ok(&["los-prob", "--db", db.to_str().unwrap(), "--tx", "0,0,7"]);
    assert_eq!(csv.lines().next(), Some("radius_m,p_los,valid"));
    let r = rows(&csv);
    assert_eq!(r.len(), 191);
    for row in r {
        assert_eq!(row[1].parse::<f64>().unwrap(), 1.0);
        assert_eq!(row[2], "1");
    }
}

#[test]
fn slab_scene_matches_counting_oracle() {
    let csv = ok(&["los-prob", "--db", scene("slab").to_str().unwrap(), "--rmax", "60", "--step", "0.5"]);
    let radii = col(&csv, 0);
    let p = col(&csv, 1);
    for (&r, &got) in radii.iter().zip(&p) {
        // slab occupies 10 <= x <= 20; anything reaching x = 10 is shadowed
        let xs: Vec<f64> = (0..100).map(|k| r * (std::f64::consts::TAU * k as f64 / 100.0).cos()).collect();
        let exterior = xs.iter().filter(|&&x| !(x > 10.0 + 1e-9 && x < 20.0 - 1e-9)).count();
        let visible = xs.iter().filter(|&&x| x < 10.0 - 1e-9).count();
        let want = visible as f64 / exterior as f64;
        assert!((got - want).abs() < 1e-5, "r={r}: {got} vs {want}");
    }
    assert_eq!(p[0], 0.99);
}

#[test]
fn tx_inside_building_exits_2_naming_box() {
    let out = run(&["los-prob", "--db", scene("slab").to_str().unwrap(), "--tx", "15,0,5"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("building 0"), "{err}");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["pathloss"]).status.code(), Some(2), "missing preset and parameters");
    assert_eq!(run(&["los-prob", "--db", "/nonexistent.json", "--tx", "0,0,1"]).status.code(), Some(2));
    assert_eq!(run(&["pathloss", "--preset", "60GHz-MARS"]).status.code(), Some(2));
    let out = bin().env("MMWPL_THREADS", "zero").args(["pathloss", "--preset", "28GHz-NYC"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn fit_plos_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let curve = dir.path().join("c.csv");
    let mut text = String::from("radius_m,p_los,valid\n");
    for r in 10..=200 {
        let d = r as f64;
        let b = (27.0 / d).min(1.0) * (1.0 - (-d / 71.0).exp()) + (-d / 71.0).exp();
        text += &format!("{d},{:.17},1\n", b * b);
    }
    std::fs::write(&curve, text).unwrap();
    let doc: Value = serde_json::from_str(&ok(&["fit-plos", curve.to_str().unwrap()])).unwrap();
    assert_eq!(doc["d_bp_m"], 27.0);
    assert_eq!(doc["alpha_m"], 71.0);
    assert_eq!(doc["squared"], true);
    assert!(doc["mse"].as_f64().unwrap() < 1e-20);
}

#[test]
fn fit_plos_mean_of_demo_curves() {
    let dir = tempfile::tempdir().unwrap();
    let mut paths = Vec::new();
    for s in ["downtown_a", "downtown_b", "downtown_c", "downtown_d"] {
        let p = dir.path().join(format!("{s}.csv"));
        ok(&["los-prob", "--db", scene(s).to_str().unwrap(), "--out", p.to_str().unwrap()]);
        paths.push(p.to_str().unwrap().to_owned());
    }
    let mut args = vec!["fit-plos"];
    args.extend(paths.iter().map(String::as_str));
    assert_eq!(run(&args).status.code(), Some(2), "several curves need --mean");

    args.push("--mean");
    let doc: Value = serde_json::from_str(&ok(&args)).unwrap();

    // library oracle on the same curves
    let curves: Vec<mmwpl_core::LosCurveF64> = paths
        .iter()
        .map(|p| mmwpl_core::io::read_los_curve(std::fs::File::open(p).unwrap()).unwrap())
        .collect();
    let fit = mmwpl_core::fit_p_los(&mmwpl_core::mean_curve(&curves).unwrap()).unwrap();
    assert_eq!(doc["d_bp_m"].as_f64().unwrap(), fit.params.d_bp());
    assert_eq!(doc["alpha_m"].as_f64().unwrap(), fit.params.alpha());
    assert_eq!(doc["mse"].as_f64().unwrap(), fit.mse);
    assert!(fit.mse > 0.0 && fit.mse < 0.01);
}

#[test]
fn fit_plos_malformed_csv_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "radius_m,p_los,valid\n10,abc,1\n").unwrap();
    assert_eq!(run(&["fit-plos", bad.to_str().unwrap()]).status.code(), Some(2));
    std::fs::write(&bad, "radius,prob\n10,1\n").unwrap();
    assert_eq!(run(&["fit-plos", bad.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn fit_plos_all_masked_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let masked = dir.path().join("m.csv");
    std::fs::write(&masked, "radius_m,p_los,valid\n10,0,0\n11,0,0\n12,0,0\n").unwrap();
    assert_eq!(run(&["fit-plos", masked.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn pathloss_preset_rows() {
    let close = ok(&["pathloss", "--preset", "28GHz-NYC", "--nlos", "close-in"]);
    let float = ok(&["pathloss", "--preset", "28GHz-NYC", "--nlos", "floating"]);
    assert_eq!(close.lines().next(), Some("d_m,p_los,mean_pl_db,sigma_db"));
    let d = col(&close, 0);
    let a = col(&close, 2);
    let b = col(&float, 2);
    let i100 = d.iter().position(|&x| x == 100.0).unwrap();
    assert!((a[i100] - 124.2).abs() <= 0.2, "{}", a[i100]);
    let worst = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    assert!(worst <= 2.0, "{worst}");

    // at 20 m the LOS probability is one, so the row is the LOS close-in value
    let i20 = d.iter().position(|&x| x == 20.0).unwrap();
    let los = 20.0 * (4.0 * std::f64::consts::PI * 28e9 / 299_792_458.0).log10() + 21.0 * 20f64.log10();
    assert_eq!(col(&close, 1)[i20], 1.0);
    assert_eq!(rows(&close)[i20][2], mmwpl_core::io::format_sig6(los));
    assert_eq!(col(&close, 3)[i20], 3.6);
}

#[test]
fn pathloss_explicit_parameters_match_preset() {
    let preset = ok(&["pathloss", "--preset", "73GHz-NYC"]);
    let explicit = ok(&[
        "pathloss", "--frequency", "73e9", "--n-los", "2.0", "--sigma-los", "4.8", "--n-nlos", "3.4", "--sigma-nlos",
        "7.9",
    ]);
    assert_eq!(preset, explicit);
    let overridden = ok(&["pathloss", "--preset", "73GHz-NYC", "--n-nlos", "3.0"]);
    assert_ne!(preset, overridden);
}

fn write_samples(dir: &Path, body: &str) -> String {
    let p = dir.join("s.csv");
    std::fs::write(&p, format!("d_m,pl_db,condition\n{body}")).unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn fit_two_point_close_in() {
    let dir = tempfile::tempdir().unwrap();
    let fspl = 20.0 * (4.0 * std::f64::consts::PI * 28e9 / 299_792_458.0).log10();
    let s = write_samples(dir.path(), &format!("10,{},NLOS\n100,{},NLOS\n1,0,LOS\n", fspl + 20.0, fspl + 41.0));
    let doc: Value = serde_json::from_str(&ok(&[
        "fit", "--samples", &s, "--model", "close-in", "--condition", "NLOS", "--frequency", "28e9",
    ]))
    .unwrap();
    // sum(ab)/sum(a^2) with a = (10, 20), b = (20, 41)
    let want = (10.0 * 20.0 + 20.0 * 41.0) / (100.0 + 400.0);
    assert!((doc["exponent"].as_f64().unwrap() - want).abs() < 1e-9);
    assert!((doc["exponent"].as_f64().unwrap() - 2.04).abs() <= 0.01);
    assert_eq!(doc["model"], "close-in");
    assert_eq!(doc["n_samples"], 2);
}

#[test]
fn fit_two_point_floating_interpolates() {
    let dir = tempfile::tempdir().unwrap();
    let s = write_samples(dir.path(), "10,100,LOS\n100,126,LOS\n50,,LOS\n");
    let doc: Value =
        serde_json::from_str(&ok(&["fit", "--samples", &s, "--model", "floating", "--condition", "LOS"])).unwrap();
    assert!((doc["intercept_db"].as_f64().unwrap() - 74.0).abs() < 1e-9);
    assert!((doc["slope"].as_f64().unwrap() - 2.6).abs() < 1e-9);
    assert!(doc["shadow_std_db"].as_f64().unwrap().abs() < 1e-9);
    assert_eq!(doc["skipped_rows"], 1);
    assert_eq!(doc["valid_range_m"], serde_json::json!([10.0, 100.0]));
}

#[test]
fn fit_errors() {
    let dir = tempfile::tempdir().unwrap();
    let s = write_samples(dir.path(), "10,100,LOS\n");
    assert_eq!(run(&["fit", "--samples", &s, "--model", "floating", "--condition", "LOS"]).status.code(), Some(1));
    assert_eq!(run(&["fit", "--samples", &s, "--model", "close-in", "--condition", "LOS"]).status.code(), Some(2));
    let s = write_samples(dir.path(), "10,100,MAYBE\n");
    assert_eq!(run(&["fit", "--samples", &s, "--model", "floating", "--condition", "LOS"]).status.code(), Some(2));
}

#[test]
fn synth_then_fit_recovers_noiseless_shape() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.csv");
    ok(&[
        "synth", "--preset", "28GHz-NYC", "--condition", "NLOS", "--count", "2000", "--seed", "11", "--out",
        out.to_str().unwrap(),
    ]);
    let doc: Value = serde_json::from_str(&ok(&[
        "fit", "--samples", out.to_str().unwrap(), "--model", "close-in", "--condition", "NLOS", "--frequency", "28e9",
    ]))
    .unwrap();
    assert_eq!(doc["n_samples"], 2000);
    assert!((doc["exponent"].as_f64().unwrap() - 3.4).abs() < 0.1, "{doc}");
    assert!((doc["shadow_std_db"].as_f64().unwrap() - 9.7).abs() < 0.5, "{doc}");
}

#[test]
fn outage_median_threshold_and_monte_carlo() {
    let path = ok(&["pathloss", "--preset", "28GHz-NYC", "--rmin", "100", "--rmax", "100"]);
    let mean = rows(&path)[0][2].clone();
    let csv = ok(&["outage", "--preset", "28GHz-NYC", "--threshold", &mean, "--rmin", "100", "--rmax", "100"]);
    assert!((col(&csv, 2)[0] - 0.5).abs() < 1e-5);

    let csv = ok(&[
        "outage", "--preset", "28GHz-NYC", "--threshold", "130", "--rmin", "100", "--rmax", "100", "--monte-carlo",
        "100000", "--seed", "5",
    ]);
    assert_eq!(csv.lines().next(), Some("d_m,coverage,outage,outage_mc"));
    let r = &rows(&csv)[0];
    let analytic: f64 = r[2].parse().unwrap();
    let mc: f64 = r[3].parse().unwrap();
    assert!((analytic - mc).abs() <= 0.005, "{analytic} vs {mc}");
    let cov: f64 = r[1].parse().unwrap();
    assert!((cov + analytic - 1.0).abs() < 1e-5);

    assert_eq!(
        run(&["outage", "--preset", "28GHz-NYC", "--threshold", "130", "--monte-carlo", "10"]).status.code(),
        Some(2),
        "monte carlo without a seed"
    );
}

#[test]
fn outage_is_independent_of_thread_count() {
    let args = [
        "outage", "--preset", "73GHz-NYC", "--threshold", "125", "--rmin", "20", "--rmax", "120", "--step", "5",
        "--monte-carlo", "2000", "--seed", "9",
    ];
    let one = bin().env("MMWPL_THREADS", "1").args(args).output().unwrap();
    let many = bin().env("MMWPL_THREADS", "4").args(args).output().unwrap();
    assert!(one.status.success() && many.status.success());
    assert_eq!(one.stdout, many.stdout);
}

#[test]
fn out_file_is_written_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("curve.csv");
    ok(&["los-prob", "--db", scene("downtown_a").to_str().unwrap(), "--out", out.to_str().unwrap()]);
    let stdout = ok(&["los-prob", "--db", scene("downtown_a").to_str().unwrap()]);
    assert_eq!(std::fs::read_to_string(&out).unwrap(), stdout);
    let leftovers: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(leftovers.len(), 1, "temporary file left behind");
    let doc: Value = serde_json::from_str(&ok(&["fit-plos", out.to_str().unwrap()])).unwrap();
    assert!(doc["d_bp_m"].as_f64().unwrap() >= 1.0);
}

#[test]
fn site_selection() {
    let a = ok(&["los-prob", "--db", scene("downtown_b").to_str().unwrap(), "--rmax", "30"]);
    let b = ok(&["los-prob", "--db", scene("downtown_b").to_str().unwrap(), "--rmax", "30", "--tx", "DOWNTOWN_B"]);
    let c = ok(&["los-prob", "--db", scene("downtown_b").to_str().unwrap(), "--rmax", "30", "--tx", "-30,0,7"]);
    assert_eq!(a, b);
    assert_eq!(a, c);
    let out = run(&["los-prob", "--db", scene("downtown_b").to_str().unwrap(), "--tx", "NOPE"]);
    assert_eq!(out.status.code(), Some(2));
}
