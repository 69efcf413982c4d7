use std::process::Command;

fn cmik(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_cmik")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

#[test]
fn label_examples() {
    assert_eq!(cmik(&["label", "--disc", "-4", "--ell", "2", "--d", "-2"]), (0, "2.2.ns7-16.4.4\n".into()));
    assert_eq!(cmik(&["label", "--disc", "-3", "--ell", "2", "--d", "1"]), (0, "2.0.ns5-1.1.1\n".into()));
    assert_eq!(cmik(&["label", "--disc", "-3", "--ell", "2", "--d", "4"]), (0, "2.0.ns5-2.3.1\n".into()));
    assert_eq!(cmik(&["label", "--disc", "-147", "--ell", "7", "--d", "a-3"]), (0, "7.2.s-7.2.1\n".into()));
    assert_eq!(cmik(&["label", "--disc", "-88", "--ell", "11", "--d", "-11"]).1, "11.1.s-11.2.2\n");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(cmik(&["label", "--disc", "-4", "--ell", "2"]).0, 2);
    assert_eq!(cmik(&["frobnicate"]).0, 2);
    assert_eq!(cmik(&["label", "--disc", "-23", "--ell", "2", "--d", "1"]).0, 2);
    assert_eq!(cmik(&["identify", "--curve", "y^2=x^3+x+1"]).0, 2);
}

#[test]
fn ambiguous_cell_exits_one() {
    let (code, out) = cmik(&["--json", "label", "--disc", "-64", "--ell", "2", "--d", "1"]);
    assert_eq!(code, 1);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(v["error"].as_str().unwrap().contains("AMBIGUOUS"));
}

#[test]
fn twistset_size() {
    let (code, out) = cmik(&["--json", "twistset", "--disc", "-147", "--ell", "7"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["size"], 8);
}

#[test]
fn identify_and_group() {
    let (code, out) = cmik(&["--json", "identify", "--curve", "y^2=x^3+16*81"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["disc"], -3);
    assert_eq!(v["labels"][0]["label"], "2.0.ns5-1.1.1");
    assert_eq!(v["labels"][1]["label"], "3.1.ns-27.6.1");
    let (code, out) = cmik(&["--json", "group", "--name", "G_4_4+c-1", "--disc", "-4", "--mod", "32"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["index"], 4);
    assert_eq!(v["label"], "2.2.ns7-16.4.4");
}

#[test]
fn verify_and_csv() {
    let csv = std::env::temp_dir().join(format!("cmik-verify-{}.csv", std::process::id()));
    let (code, out) = cmik(&[
        "--json", "verify", "--curve", "y^2=x^3-2x", "--ell", "2", "--level", "4", "--primes", "1500", "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{out}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["predicted"], "2.2.ns7-16.4.4");
    assert_eq!(v["consistent"], true);
    let mut r = csv::Reader::from_path(&csv).unwrap();
    assert_eq!(r.records().count() as u64, v["samples"].as_u64().unwrap());
    std::fs::remove_file(&csv).unwrap();
}

#[test]
fn divpoly_identities() {
    let (code, out) = cmik(&["divpoly", "--check-identities"]);
    assert_eq!(code, 0);
    assert!(out.lines().all(|l| !l.starts_with("FAIL")));
    let (code, out) = cmik(&["--json", "divpoly", "--curve", "y^2=x^3+16", "--n", "3"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["psi"]["factor_degrees"], serde_json::json!([1, 1, 2]));
}
