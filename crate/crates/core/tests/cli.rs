use std::process::Command;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_stationary"));
    c.env_remove("STATIONARY_OUT_DIR");
    c
}

#[test]
fn solve_writes_the_unit_circle() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("circle.csv");
    let out = bin().args(["solve", "--alpha", "-2", "--z0", "1", "--out"]).arg(&csv).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("s,x,z,psi"));
    let mut n = 0;
    for line in lines {
        let v: Vec<f64> = line.split(',').map(|f| f.parse().unwrap()).collect();
        assert!((v[1] * v[1] + v[2] * v[2] - 1.0).abs() < 1e-8, "{line}");
        n += 1;
    }
    assert!(n > 1000);
    let events: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("circle.events.json")).unwrap()).unwrap();
    assert_eq!(events["schema"], 1);
    assert_eq!(events["events"].as_array().unwrap().last().unwrap()["kind"], "AXIS_RETURN");
}

#[test]
fn alpha_zero_is_refused() {
    for cmd in ["solve", "classify", "mesh", "phase"] {
        let out = bin().args([cmd, "--alpha", "0"]).output().unwrap();
        assert_eq!(out.status.code(), Some(1), "{cmd}");
        assert!(String::from_utf8_lossy(&out.stderr).contains("minimal-surface"), "{cmd}");
    }
}

#[test]
fn bad_flags_exit_with_one() {
    let out = bin().args(["solve", "--alpha", "1", "--bogus"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = bin().arg("--help").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn helicoidal_suite_blocks_every_cell() {
    let out = bin().args(["verify", "--suite", "helicoidal"]).output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let cells = v["cells"].as_array().unwrap();
    assert!(!cells.is_empty());
    for c in cells {
        assert_eq!(c["verdict"], "BLOCKED", "{c}");
        assert!(c["params"]["h"].as_f64().unwrap() != 0.0);
    }
}

#[test]
fn classify_json_has_schema_and_verdict() {
    let out = bin().args(["classify", "--alpha", "-5", "--json"]).output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["verdict"], "CLOSED_BIGRAPH");
}

#[test]
fn sweep_is_deterministic_and_changes_only_at_thresholds() {
    let args = ["sweep", "--alpha-from", "-6", "--alpha-to", "2", "--step", "0.5"];
    let a = bin().args(args).output().unwrap();
    let b = bin().args(args).args(["--threads", "1"]).output().unwrap();
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let rows: Vec<serde_json::Value> =
        String::from_utf8(a.stdout).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(rows.len(), 16);
    let expected = |a: f64| {
        if a < -4.0 {
            "CLOSED_BIGRAPH"
        } else if a == -4.0 {
            "CIRCLE_ALPHA_MINUS4"
        } else if a < -2.0 {
            "CLOSED_OSCILLATING"
        } else if a == -2.0 {
            "CIRCLE_ORIGIN"
        } else if a < 0.0 {
            "OSCILLATING_GRAPH_OUTSIDE_COMPACT"
        } else {
            "ENTIRE_GRAPH"
        }
    };
    for r in &rows {
        let alpha = r["alpha"].as_f64().unwrap();
        assert_eq!(r["verdict"], expected(alpha), "alpha {alpha}");
    }
}
