use std::fs;
use std::process::{Command, Output};

fn flagcurv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flagcurv"))
        .args(args)
        .env_remove("FLAGCURV_TOL")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn classify_normal_metric() {
    let o = flagcurv(&["classify", "--model", "W24", "--s", "1,1,1"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("strongly_nonneg=true"));
    assert!(out.contains("strongly_pos=false"));
    assert!(out.contains("reason=all_equal_normal"));
}

#[test]
fn classify_writes_a_valid_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.json");
    let p = path.to_str().unwrap();
    let o = flagcurv(&["classify", "--model", "W6", "--s", "1,1,1.2", "--certificate", p]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("strongly_pos=true"));
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    for key in ["model", "s", "coeffs", "epsilon", "min_eigenvalue", "block_minima", "kernel_witness"] {
        assert!(json.get(key).is_some(), "{key}");
    }
    let o = flagcurv(&["certify", "--verify", p]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("valid=true"));
}

#[test]
fn tampered_certificate_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.json");
    let p = path.to_str().unwrap();
    assert!(flagcurv(&["certify", "--model", "W12", "--s", "1,1.1,1.3", "--out", p]).status.success());
    let mut json: serde_json::Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    json["coeffs"]["a"] = serde_json::json!([0.0, 0.0, 0.0]);
    fs::write(&path, json.to_string()).unwrap();
    let o = flagcurv(&["certify", "--verify", p]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn negative_p() {
    let o = flagcurv(&["classify", "--model", "W24", "--s", "1,2,3"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("sec_nonneg=false"));
    let o = flagcurv(&["certify", "--model", "W24", "--s", "1,2,3", "--kind", "nonneg"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn domain_errors_exit_2() {
    for args in [
        vec!["classify", "--model", "W24", "--s", "1,0,1"],
        vec!["classify", "--model", "W24", "--s", "1,-1,1"],
        vec!["classify", "--model", "W24", "--s", "1,1"],
        vec!["classify", "--model", "W9", "--s", "1,1,1"],
        vec!["scan", "--resolution", "1"],
        vec!["blocks", "--model", "W6", "--s", "1,1,1", "--b", "1,0,0"],
        vec!["crosscheck", "--model", "W3"],
    ] {
        assert_eq!(flagcurv(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn tolerance_precedence() {
    let run = |env: Option<&str>, flag: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_flagcurv"));
        cmd.env_remove("FLAGCURV_TOL");
        if let Some(v) = env {
            cmd.env("FLAGCURV_TOL", v);
        }
        if let Some(v) = flag {
            cmd.args(["--tol", v]);
        }
        // p₃ ≈ −1.5e-4 here after normalization, so a loose tolerance accepts sec ≥ 0
        let o = cmd.args(["classify", "--model", "W6", "--s", "1,1,1.3334"]).output().unwrap();
        (o.status.code(), stdout(&o).contains("sec_nonneg=true"))
    };
    assert_eq!(run(None, None), (Some(0), false));
    assert_eq!(run(Some("0.01"), None), (Some(0), true));
    assert_eq!(run(Some("0.01"), Some("1e-9")), (Some(0), false));
    assert_eq!(run(Some("junk"), None).0, Some(2));
    assert_eq!(run(Some("junk"), Some("0.01")), (Some(0), true));
}

#[test]
fn scan_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("scan.csv");
    let svg = dir.path().join("scan.svg");
    let args = ["scan", "--model", "W12", "--resolution", "30", "--csv", csv.to_str().unwrap(), "--svg", svg.to_str().unwrap()];
    assert!(flagcurv(&args).status.success());
    let text = fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("s1,s2,s3,p1,p2,p3,"));
    assert_eq!(text.lines().count(), 1 + 31 * 32 / 2);
    let first = fs::read(&svg).unwrap();
    assert!(String::from_utf8_lossy(&first).contains("<svg"));
    assert!(flagcurv(&args).status.success());
    assert_eq!(fs::read(&svg).unwrap(), first);
}

#[test]
fn blocks_and_dumps() {
    let dir = tempfile::tempdir().unwrap();
    let op = dir.path().join("op.csv");
    let st = dir.path().join("st.csv");
    let fm = dir.path().join("forms.csv");
    let o = flagcurv(&[
        "blocks",
        "--model",
        "W12",
        "--s",
        "1,2,2.5",
        "--omega0",
        "--operator-csv",
        op.to_str().unwrap(),
        "--structure-csv",
        st.to_str().unwrap(),
        "--forms-csv",
        fm.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("R3:"));
    assert!(fs::read_to_string(&op).unwrap().starts_with("row,col,value\n"));
    assert!(fs::read_to_string(&st).unwrap().starts_with("a,b,c,value\n"));
    let forms = fs::read_to_string(&fm).unwrap();
    assert!(forms.contains("phi_1,") && forms.contains("psi_3,"));
}

#[test]
fn crosscheck_all_models() {
    for model in ["W6", "W12", "W24"] {
        let o = flagcurv(&["crosscheck", "--model", model, "--samples", "20"]);
        assert!(o.status.success(), "{model}");
        let out = stdout(&o);
        let line = out.lines().find(|l| l.starts_with("max_block_deviation=")).unwrap();
        let v: f64 = line.split('=').nth(1).unwrap().parse().unwrap();
        assert!(v < 1e-9, "{model}: {v}");
    }
}

#[test]
fn selftest_passes() {
    let o = flagcurv(&["selftest"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).contains("dim g2 = 14"));
    assert!(!stdout(&o).contains("FAIL"));
}
