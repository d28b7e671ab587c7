use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/fixtures")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_realbundle"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_on(cmd: &str, name: &str, extra: &[&str]) -> Output {
    let path = fixture(name);
    let mut args = vec![cmd, "--input", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    run(&args)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON on stdout")
}

#[test]
fn report_on_three_three_config() {
    let o = run_on("report", "config_3_3.json", &[]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let text = stdout(&o);
    assert!(text.contains("2+2+2"));
    assert!(text.contains("T³"));
}

#[test]
fn report_on_zero_one_config() {
    let o = run_on(
        "report",
        "config_0_1.json",
        &["--machine", "--skip-numeric"],
    );
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let t = &v["classification"]["genus2_type"];
    assert_eq!(t["base"], "L(4,1)");
    assert_eq!(t["cover"], "ℝP³");
    assert_eq!(v["numeric"]["status"], "skipped");
}

#[test]
fn classify_every_table_row() {
    let rows = [
        ("config_0_1.json", 3, "0"),
        ("config_1_1.json", 2, "2"),
        ("config_2_1.json", 1, "1+1+2"),
        ("config_3_1.json", 0, "1+1+1+1+2"),
        ("config_3_3.json", 0, "2+2+2"),
    ];
    for (name, s, partition) in rows {
        let o = run_on("classify", name, &["--machine"]);
        assert_eq!(o.status.code(), Some(0), "{name}");
        let v = json(&o);
        assert_eq!(v["invariant"]["s"], s, "{name}");
        assert_eq!(v["partition"], partition, "{name}");
        assert_eq!(v["table_row"]["consistent"], true, "{name}");
    }
}

#[test]
fn curve_info_and_normal_form() {
    let o = run_on("curve-info", "config_2_1.json", &["--machine"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["k"], 1);
    let o = run_on("normal-form", "config_3_3.json", &["--machine"]);
    let v = json(&o);
    assert_eq!(v["s"], 0);
    assert_eq!(v["eps"], serde_json::json!([1, -1, 1]));
    assert!(v["congruence"]["max_deviation"].as_f64().unwrap() < 1e-9);
}

#[test]
fn sw_subcommand() {
    for (g, spin) in [(2, false), (3, true), (5, true)] {
        let o = run(&["sw", "--genus", &g.to_string(), "--machine"]);
        assert_eq!(o.status.code(), Some(0));
        let v = json(&o);
        assert_eq!(v["spin"], spin, "g={g}");
        assert_eq!(v["relatively_spin"], true, "g={g}");
        assert_eq!(v["w1"], "0", "g={g}");
    }
    let v = json(&run(&["sw", "--genus", "2", "--machine"]));
    assert_eq!(v["w2"], "w1^2");
}

#[test]
fn machine_output_is_deterministic() {
    let a = run_on(
        "report",
        "config_2_1.json",
        &["--machine", "--samples", "200"],
    );
    let b = run_on(
        "report",
        "config_2_1.json",
        &["--machine", "--samples", "200"],
    );
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn input_errors_exit_one() {
    let o = run_on("report", "bad_degree.json", &[]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
    let o = run_on("report", "bad_degree.json", &["--machine"]);
    assert!(json(&o).get("error").is_some());
    assert_eq!(run(&["sw", "--genus", "1"]).status.code(), Some(1));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(1));
    let o = run(&["report", "--input", "/nonexistent/input.json"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn verification_failure_exits_two() {
    let o = run_on("verify", "identity_quadrics.json", &[]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn export_cloud_writes_rows() {
    let dir = std::env::temp_dir().join(format!("realbundle-cloud-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("cloud.txt");
    let o = run_on(
        "verify",
        "config_1_1.json",
        &[
            "--samples",
            "150",
            "--seed",
            "3",
            "--export-cloud",
            out.to_str().unwrap(),
        ],
    );
    assert_eq!(o.status.code(), Some(0));
    let rows = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = rows.lines().collect();
    assert!(!lines.is_empty());
    assert_eq!(lines[0].split_whitespace().count(), 6);
    std::fs::remove_dir_all(&dir).unwrap();
}
