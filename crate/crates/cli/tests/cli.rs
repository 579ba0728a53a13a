use std::process::{Command, Output};

fn fsdim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fsdim"))
        .args(args)
        .output()
        .expect("spawn fsdim")
}

fn stdout(args: &[&str]) -> String {
    let out = fsdim(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn eval_examples() {
    assert_eq!(stdout(&["eval", "--k", "2", "--f", "nearlinear", "000"]), "1/8\n");
    assert_eq!(stdout(&["eval", "--f", "std", "1"]), "1/2\n");
    assert_eq!(stdout(&["eval", "--f", "pair:f0", "00"]), "29/64\n");
    assert_eq!(stdout(&["eval", "--k", "3", "--f", "coherent:shift", "0"]), "1/3\n");
}

#[test]
fn chain_columns() {
    let csv = stdout(&["chain", "--f", "nearlinear", "--x", "1/2", "--N", "5"]);
    let b: Vec<&str> = csv.lines().skip(1).map(|l| l.split(',').nth(2).unwrap()).collect();
    assert_eq!(b, ["0", "0", "1", "4", "11"]);

    let zero = stdout(&["chain", "--f", "std", "--x", "0/1", "--N", "6"]);
    assert!(zero.lines().skip(1).all(|l| l.split(',').nth(1) == Some("0/1")));
}

#[test]
fn pair_chains_have_identical_values() {
    let strip = |s: String| s.lines().map(str::to_owned).collect::<Vec<_>>();
    let c0 = strip(stdout(&["chain", "--f", "pair:f0", "--x", "1/2", "--N", "64"]));
    let c1 = strip(stdout(&["chain", "--f", "pair:f1", "--x", "1/2", "--N", "64"]));
    assert_eq!(c0, c1);
    let oracle = strip(stdout(&["chain", "--f", "pair:f1", "--x", "1/2", "--N", "10", "--mode", "oracle"]));
    assert_eq!(oracle[..], c0[..11]);
}

#[test]
fn equidist_outputs() {
    let json = stdout(&["equidist", "--source", "nearlinear", "--N", "100000", "--m", "3", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["label"], "empirical, not proof");
    assert!(v["lines"].as_array().unwrap().iter().all(|l| l["within"] == true));

    let csv = stdout(&["equidist", "--source", "constant:0", "--N", "1000", "--m", "2"]);
    assert!(csv.contains("\n1,1000,0,1000,1/1,1/2\n"));
    assert!(csv.contains("\n2,1000,0,1000,1/1,3/4\n"));
}

#[test]
fn kcurve_rows() {
    let csv = stdout(&[
        "kcurve", "--t", "zero:8", "--f", "pair:f0", "--x", "1/2", "--scale", "pair", "--n-min", "200", "--n", "200",
    ]);
    let row: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[3], "25");
    let ratio: f64 = row[4].parse().unwrap();
    assert!((ratio - 0.125).abs() < 0.125 * 0.05);

    let csv = stdout(&["kcurve", "--f", "std", "--x", "1/3", "--n-min", "0", "--n", "6"]);
    let first: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
    assert_eq!((first[1], first[3]), ("1/1", "0"));
    assert!(csv.lines().skip(1).all(|l| !l.contains(",inf,")));
}

#[test]
fn verify_exit_codes_and_json() {
    let out = fsdim(&["verify", "mealy", "--format", "json", "--no-timing"]);
    assert_eq!(out.status.code(), Some(0));
    let reps: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    for r in reps.as_array().unwrap() {
        for key in ["suite", "check", "status", "details", "elapsed_ms"] {
            assert!(r.get(key).is_some(), "missing {key}");
        }
        assert_eq!(r["status"], "pass");
    }
    // byte-stable given seed
    let again = fsdim(&["verify", "mealy", "--format", "json", "--no-timing"]);
    assert_eq!(out.stdout, again.stdout);

    let bad = fsdim(&["verify", "mealy", "--inject-fault"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stdout).contains("non-permutation"));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["eval", "--f", "bogus", "0"][..],
        &["chain", "--x", "0.5"],
        &["chain", "--x", "3/2"],
        &["eval", "--f", "std", "012"],
        &["verify", "no-such-suite"],
        &["nonsense"],
        &["eval", "--f", "coherent", "0"],
    ] {
        assert_eq!(fsdim(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("fsdim-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("chain.csv");
    let printed = stdout(&["chain", "--f", "nearlinear", "--x", "1/2", "--N", "8"]);
    stdout(&["chain", "--f", "nearlinear", "--x", "1/2", "--N", "8", "--out", path.to_str().unwrap()]);
    assert_eq!(std::fs::read_to_string(&path).unwrap(), printed);
    std::fs::remove_dir_all(&dir).unwrap();
}
