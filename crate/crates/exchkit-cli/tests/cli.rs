//! End-to-end tests of the installed binary.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_exchkit")
}

fn run(args: &[&str]) -> Output {
    run_env(args, &[])
}

fn run_env(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(bin());
    cmd.args(args);
    for (key, value) in envs {
        cmd.env(key, value);
    }
    cmd.output().expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 stderr")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn write_instance(path: &Path, json: &str) {
    std::fs::write(path, json).expect("write instance");
}

#[test]
fn gen_is_deterministic_and_generates_valid_instances() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let args = ["gen", "--seed", "7", "--c", "3", "--n", "4", "--r-min", "0.5"];
    assert_eq!(code(&run(&[&args[..], &["--out", a.to_str().unwrap()]].concat())), 0);
    assert_eq!(code(&run(&[&args[..], &["--out", b.to_str().unwrap()]].concat())), 0);
    let bytes_a = std::fs::read(&a).unwrap();
    let bytes_b = std::fs::read(&b).unwrap();
    assert_eq!(bytes_a, bytes_b, "same flags must reproduce the file byte for byte");

    let check = run(&["check", a.to_str().unwrap()]);
    assert_eq!(code(&check), 0, "generated instances are weighted exchangeable");
}

#[test]
fn gen_with_unit_ratio_floor_fixes_all_weights_at_one() {
    let out = run(&["gen", "--seed", "3", "--c", "2", "--n", "3", "--r-min", "1"]);
    assert_eq!(code(&out), 0);
    let parsed: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    for row in parsed["lambda"].as_array().unwrap() {
        for entry in row.as_array().unwrap() {
            assert_eq!(entry.as_f64().unwrap(), 1.0);
        }
    }
}

#[test]
fn check_rejects_an_asymmetric_kernel_naming_a_transposition() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    write_instance(
        &path,
        r#"{"format_version":"1","c":2,"n":2,"lambda":[[1.0,1.0],[1.0,1.0]],"g":[0.1,0.5,0.2,0.2]}"#,
    );
    let out = run(&["check", path.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    let err = stderr_of(&out);
    assert!(err.contains("not weighted exchangeable"), "stderr: {err}");
    assert!(err.contains("swap coordinates 1 and 2"), "stderr: {err}");
}

#[test]
fn check_accepts_the_coordinate_product_kernel() {
    // g(x1, x2) = x1 x2 on the alphabet {1, 2}, normalized
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("prod.json");
    write_instance(
        &path,
        r#"{"format_version":"1","c":2,"n":2,"lambda":[[1.0,1.0],[1.0,1.0]],"g":[0.111111111111111,0.222222222222222,0.222222222222222,0.444444444444444]}"#,
    );
    assert_eq!(code(&run(&["check", path.to_str().unwrap()])), 0);
}

#[test]
fn verify_single_instance_reports_sharpness_and_exact_first_marginal() {
    // near-extreme kernel concentrated on the balanced urn, constant weights
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("extreme.json");
    write_instance(
        &path,
        r#"{"format_version":"1","c":2,"n":2,"lambda":[[1.0,1.0],[1.0,1.0]],"g":[1e-13,0.4999999999999,0.4999999999999,1e-13]}"#,
    );
    let out = run(&["verify", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr_of(&out));
    let text = stdout_of(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "seed,c,n,k,tv_exact,bound_general,bound_finite,prod_r_k,prod_r_n,pass_general,pass_finite"
    );
    let row1: Vec<&str> = lines.next().unwrap().split(',').collect();
    let row2: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row1[0], "", "file had no seed, the field stays empty");
    assert_eq!((row1[3], row2[3]), ("1", "2"));
    // constant weights make the first marginals of law and approximant equal
    assert!(row1[4].parse::<f64>().unwrap() < 1e-9);
    // at k = n = 2 the distance approaches the bound k(k-1)/(2n) = 1/2
    let tv: f64 = row2[4].parse().unwrap();
    let bound: f64 = row2[5].parse().unwrap();
    assert_eq!(bound, 0.5);
    assert!((tv - 0.5).abs() < 1e-9, "tv {tv}");
    assert!(tv <= bound);
}

#[test]
fn sweep_is_schedule_independent_and_flags_the_degenerate_rows() {
    let dir = tempfile::tempdir().unwrap();
    let single = dir.path().join("t1.csv");
    let multi = dir.path().join("t4.csv");
    let args = ["verify", "--instances", "26", "--seed", "0"];
    let run1 = run_env(
        &[&args[..], &["--out", single.to_str().unwrap()]].concat(),
        &[("EXCHKIT_THREADS", "1")],
    );
    let run4 = run_env(
        &[&args[..], &["--out", multi.to_str().unwrap()]].concat(),
        &[("EXCHKIT_THREADS", "4")],
    );
    // the weighted instances violate the degenerate k = 1 bound, exit 1
    assert_eq!(code(&run1), 1);
    assert_eq!(code(&run4), 1);
    let text1 = std::fs::read_to_string(&single).unwrap();
    let text4 = std::fs::read_to_string(&multi).unwrap();
    assert_eq!(text1, text4, "row order must not depend on the schedule");

    let rows: Vec<Vec<String>> = text1
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect();
    assert_eq!(rows.len(), 112, "one row per generated (instance, k) pair");
    let keys: Vec<(u64, usize)> = rows
        .iter()
        .map(|r| (r[0].parse().unwrap(), r[3].parse().unwrap()))
        .collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted, "rows are sorted by (seed, k)");
    for row in &rows {
        if row[9] == "false" {
            assert_eq!(row[3], "1", "only the degenerate k = 1 bound fails");
        }
        assert_eq!(row[10], "true", "the finite-alphabet bound holds everywhere");
    }
}

#[test]
fn restricted_sweep_with_constant_weights_passes_everything() {
    let out = run(&["verify", "--instances", "12", "--r-min", "1"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr_of(&out));
    for line in stdout_of(&out).lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols[9], "true");
        assert_eq!(cols[10], "true");
        if cols[3] == "1" {
            assert!(cols[4].parse::<f64>().unwrap() < 1e-12);
        }
    }
}

#[test]
fn sampling_is_reproducible_and_tracks_the_law() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst.json");
    assert_eq!(
        code(&run(&[
            "gen", "--seed", "9", "--c", "2", "--n", "3", "--r-min", "0.4", "--out",
            inst.to_str().unwrap()
        ])),
        0
    );
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let args = ["sample", inst.to_str().unwrap(), "--samples", "20000", "--seed", "5"];
    let out_a = run(&[&args[..], &["--out", a.to_str().unwrap()]].concat());
    assert_eq!(code(&out_a), 0);
    let out_b = run(&[&args[..], &["--out", b.to_str().unwrap()]].concat());
    assert_eq!(code(&out_b), 0);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());

    let text = std::fs::read_to_string(&a).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "tuple,count,empirical,exact");
    let mut total = 0usize;
    for line in lines {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols[0].len(), 3, "binary tuples render as three digits");
        total += cols[1].parse::<usize>().unwrap();
    }
    assert_eq!(total, 20000);
    let err = stderr_of(&out_a);
    let tv: f64 = err
        .rsplit_once("= ")
        .map(|(_, tail)| tail.trim().parse().unwrap())
        .unwrap();
    assert!(tv < 0.05, "empirical tv {tv}");
}

#[test]
fn projection_finds_an_exact_product_representation() {
    // constant weights, kernel 1: the first marginal is the uniform point
    // of the grid, so the projection distance vanishes
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("flat.json");
    assert_eq!(
        code(&run(&[
            "gen", "--seed", "1", "--c", "2", "--n", "2", "--r-min", "1", "--out",
            inst.to_str().unwrap()
        ])),
        0
    );
    let out = run(&["project", inst.to_str().unwrap(), "--k", "1", "--grid", "10"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr_of(&out));
    let parsed: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert!(parsed["value"].as_f64().unwrap() < 1e-9);
    let weights: f64 = parsed["atoms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|a| a["weight"].as_f64().unwrap())
        .sum();
    assert!((weights - 1.0).abs() < 1e-9);
}

#[test]
fn decay_curves_shrink_with_length() {
    let out = run(&["asymptotics", "--family", "constant", "--k", "2", "--n-max", "8"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr_of(&out));
    let text = stdout_of(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "family,k,n,tv_exact,bound_general");
    let rows: Vec<Vec<String>> =
        lines.map(|l| l.split(',').map(str::to_string).collect()).collect();
    assert_eq!(rows.len(), 7, "one row per n in 2..=8");
    let mut last_tv = f64::INFINITY;
    for row in &rows {
        let n: f64 = row[2].parse().unwrap();
        let tv: f64 = row[3].parse().unwrap();
        let bound: f64 = row[4].parse().unwrap();
        assert!((bound - 1.0 / n).abs() < 1e-12, "exchangeable rate bound is 1/n");
        assert!(tv <= bound);
        assert!(tv < last_tv, "distance decreases along the family");
        last_tv = tv;
    }
    let err = stderr_of(&out);
    assert!(err.contains("finite-deficit true"), "stderr: {err}");
}

#[test]
fn bad_inputs_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.json");
    assert_eq!(code(&run(&["check", missing.to_str().unwrap()])), 2);

    let malformed = dir.path().join("malformed.json");
    write_instance(&malformed, "{ not json");
    assert_eq!(code(&run(&["check", malformed.to_str().unwrap()])), 2);

    let wrong_version = dir.path().join("v2.json");
    write_instance(
        &wrong_version,
        r#"{"format_version":"2","c":2,"n":1,"lambda":[[1.0,1.0]],"g":[0.5,0.5]}"#,
    );
    assert_eq!(code(&run(&["check", wrong_version.to_str().unwrap()])), 2);

    assert_eq!(code(&run(&["gen", "--seed", "1", "--c", "2", "--n", "2", "--r-min", "0"])), 2);
    assert_eq!(code(&run(&["asymptotics", "--family", "mystery"])), 2);
    assert_eq!(code(&run(&["verify", "--instances", "0"])), 2);
    assert_eq!(code(&run(&["--definitely-not-a-flag"])), 2);

    let threads = run_env(&["verify", "--instances", "2"], &[("EXCHKIT_THREADS", "zero")]);
    assert_eq!(code(&threads), 2);
}
