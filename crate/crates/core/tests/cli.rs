use std::path::Path;
use std::process::{Command, Output};
use tempfile::TempDir;

fn renorm(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_renorm"))
        .args(args)
        .current_dir(dir)
        .env_remove("RENORM_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

const TWO_BUBBLES: &str = r#"[
  {"name": "B2", "vertices": 3, "edges": [[0,1],[0,1],[1,2],[1,2]], "external": [0,0,2,2]}
]"#;

#[test]
fn coproduct_of_two_bubble_chain() {
    let dir = TempDir::new().unwrap();
    std::fs::write(dir.path().join("g.json"), TWO_BUBBLES).unwrap();
    let o = renorm(&["coproduct", "--graphs", "g.json", "--graph", "B2"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o), "1⊗B2 + B2⊗1 + 2*(B1⊗B1)\n");
}

#[test]
fn antipode_of_sunset() {
    let dir = TempDir::new().unwrap();
    let o = renorm(&["antipode", "--graph", "S"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("3*T1.B1 - S\n"), "{}", stdout(&o));
}

#[test]
fn toyrules_then_birkhoff_and_gauge() {
    let dir = TempDir::new().unwrap();
    let p = dir.path();
    let o = renorm(&["toyrules-emit", "--grade-cap", "2", "--out-dir", "toy"], p);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(p.join("toy/bubble_dr.json").exists() && p.join("toy/bubble_mc.json").exists());

    let o = renorm(
        &["birkhoff", "--grade-cap", "2", "--character", "toy/bubble_dr.json", "--out-dir", "out"],
        p,
    );
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
    for f in ["phi_minus.json", "phi_plus.json", "prepared.json", "report.json"] {
        assert!(p.join("out").join(f).exists(), "{f}");
    }
    let minus = std::fs::read_to_string(p.join("out/phi_minus.json")).unwrap();
    // the counterterm file is itself a loadable character
    let o = renorm(&["rho-check", "--grade-cap", "2", "--character", "out/phi_minus.json"], p);
    assert_eq!(o.status.code(), Some(0), "{minus}\n{}", stderr(&o));

    let o = renorm(
        &["gauge-check", "--grade-cap", "2", "--dr", "toy/bubble_dr.json", "--mc", "toy/bubble_mc.json"],
        p,
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let entries = report.as_array().unwrap();
    assert!(!entries.is_empty());
    for e in entries {
        for field in ["identity", "monomial", "lhs", "rhs", "equal"] {
            assert!(e.get(field).is_some(), "{field}");
        }
        assert_eq!(e["equal"], true);
    }
}

#[test]
fn beta_and_flows() {
    let dir = TempDir::new().unwrap();
    let p = dir.path();
    renorm(&["toyrules-emit", "--grade-cap", "2"], p);
    let o = renorm(
        &["beta", "--grade-cap", "2", "--character", "bubble_dr.json", "--format", "json"],
        p,
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["beta"]["kind"], "infinitesimal");
    assert!(v["flow"].as_array().unwrap().iter().any(|e| !e["terms"].as_array().unwrap().is_empty()));

    let o = renorm(&["rho-check", "--grade-cap", "2", "--character", "bubble_dr.json"], p);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("equal to phi at s=0: yes"));

    // the cutoff flow cannot be reconstructed from a pole
    let o = renorm(
        &["rho-check", "--sigma", "mc", "--grade-cap", "2", "--character", "bubble_dr.json"],
        p,
    );
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("divergent flow integral at B1"), "{}", stderr(&o));

    for (sigma, file) in [("dr", "bubble_dr.json"), ("mc", "bubble_mc.json")] {
        let o = renorm(
            &["equivariance", "--sigma", sigma, "--u", "-3/2", "--grade-cap", "2", "--character", file],
            p,
        );
        assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
    }
    let o = renorm(
        &["equivariance", "--u", "0", "--grade-cap", "2", "--character", "bubble_dr.json"],
        p,
    );
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn selftest_and_fault_injection() {
    let dir = TempDir::new().unwrap();
    let o = renorm(&["selftest", "--samples", "3"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = renorm(&["selftest", "--samples", "3", "--corrupt", "antipode"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("first failing invariant: antipode axiom"), "{}", stdout(&o));
}

#[test]
fn input_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    let p = dir.path();
    let o = renorm(&["graph-check", "--graphs", "missing.json"], p);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("missing.json"));

    std::fs::write(p.join("bad.json"), r#"{"name":"x","vertices":2,"edges":[[0,1],[0,5]],"external":[2,2]}"#)
        .unwrap();
    let o = renorm(&["graph-check", "--graphs", "bad.json"], p);
    assert_eq!(o.status.code(), Some(2));

    std::fs::write(p.join("phi.json"), r#"{"grade_cap": 1, "values": [{"graph": "B1", "series": []}]}"#)
        .unwrap();
    let o = renorm(&["birkhoff", "--grade-cap", "1", "--character", "phi.json"], p);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("missing value for generator"), "{}", stderr(&o));

    let o = renorm(&["birkhoff"], p);
    assert_eq!(o.status.code(), Some(2));
    let o = renorm(&["coproduct", "--graph", "Nope"], p);
    assert_eq!(o.status.code(), Some(2));
    let o = renorm(&["selftest", "--grade-cap", "0"], p);
    assert_eq!(o.status.code(), Some(2));
    let o = renorm(&["no-such-command"], p);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn graph_check_reports_corpus() {
    let dir = TempDir::new().unwrap();
    let o = renorm(&["graph-check", "--format", "json"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let names: Vec<&str> = v["graphs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|g| g["name"].as_str().unwrap())
        .collect();
    assert!(names.contains(&"B2") && names.contains(&"S"));
    assert!(v["failures"].as_array().unwrap().is_empty());
}
