use std::process::{Command, Output};

fn divfree(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_divfree")).args(args).output().expect("run divfree")
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("json on stdout")
}

#[test]
fn cohomology_report() {
    let o = divfree(&["cohomology", "--catalog", "danielewski3"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["command"], "cohomology");
    assert_eq!(v["result"]["betti"], serde_json::json!([1, 0, 2]));
}

#[test]
fn inline_descriptor() {
    let o = divfree(&["cohomology", "--inline", r#"{"kind":"torus","n":2}"#]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["result"]["betti"], serde_json::json!([1, 2, 1]));
}

#[test]
fn validation_errors_exit_2() {
    for args in [
        &["cohomology", "--inline", r#"{"kind":"danielewski","p_coefficients":["0","0","1"]}"#][..],
        &["surface-theorem", "--catalog", "affine3"],
        &["cohomology", "--catalog", "sphere2"],
        &["field-calc", "--catalog", "danielewski2", "--op", "divergence", "--field", "x=1"],
    ] {
        let o = divfree(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn resource_cap_exit_4() {
    let o = divfree(&["cohomology", "--catalog", "affine3", "--window", "12", "--max-dimension", "10"]);
    assert_eq!(o.status.code(), Some(4), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn sl_span_rank() {
    let o = divfree(&["sl-span", "--n", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["result"]["rank"], 28);
    assert_eq!(v["result"]["spans"], true);
}

#[test]
fn human_output() {
    let o = divfree(&["--human", "cohomology", "--catalog", "torus2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(serde_json::from_slice::<serde_json::Value>(&o.stdout).is_err());
    assert!(!o.stdout.is_empty());
}
