use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn trustnet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trustnet"))
        .args(args)
        .output()
        .expect("spawn trustnet")
}

fn bundled(name: &str) -> String {
    format!("{}/../../scenarios/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn write_scenario(dir: &Path, text: &str) -> PathBuf {
    let path = dir.join("scenario.json");
    fs::write(&path, text).unwrap();
    path
}

fn trust_of(out: &Output) -> f64 {
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).expect("stdout is JSON");
    report["trust"].as_f64().unwrap()
}

const LONE_TARGET: &str = r#"{
    "agents": [{"id": "R"}, {"id": "X", "cgf": 0, "reputation": 9, "transactions": 10}],
    "query": {"requester": "R", "target": "X"}
}"#;

#[test]
fn compute_worked_example() {
    let out = trustnet(&["compute", &bundled("table1.json")]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!((trust_of(&out) - 0.430).abs() <= 0.005);

    let out = trustnet(&["compute", &bundled("table1.json"), "--agr", "mean-weighted"]);
    assert!(out.status.success());
    assert!((trust_of(&out) - 0.476).abs() <= 0.005);
}

#[test]
fn no_witnesses_and_no_guarantee_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out = trustnet(&[
        "compute",
        write_scenario(dir.path(), LONE_TARGET).to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(trust_of(&out), 0.0);
}

#[test]
fn malformed_file_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_scenario(dir.path(), &LONE_TARGET.replace("\"cgf\"", "\"cfg\""));
    for cmd in ["compute", "validate"] {
        let out = trustnet(&[cmd, path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(1));
        assert!(stderr(&out).contains("cfg"), "{}", stderr(&out));
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn weight_sum_violation() {
    let dir = tempfile::tempdir().unwrap();
    let text = LONE_TARGET.replace(
        "\"target\": \"X\"}",
        "\"target\": \"X\", \"weights\": {\"wg_a\": 0.6, \"wg_b\": 0.6}}",
    );
    let out = trustnet(&[
        "validate",
        write_scenario(dir.path(), &text).to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("wg_a + wg_b = 1"), "{}", stderr(&out));
}

#[test]
fn undeclared_edge_endpoint() {
    let dir = tempfile::tempdir().unwrap();
    let text = LONE_TARGET.replace(
        "\"query\"",
        "\"graph\": {\"edges\": [[\"R\", \"Z\"]]}, \"query\"",
    );
    let out = trustnet(&[
        "validate",
        write_scenario(dir.path(), &text).to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains('Z'), "{}", stderr(&out));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(trustnet(&["compute"]).status.code(), Some(1));
    assert_eq!(trustnet(&["frobnicate"]).status.code(), Some(1));
    let out = trustnet(&["compute", &bundled("table1.json"), "--agr", "median"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(trustnet(&["--help"]).status.success());
}

#[test]
fn missing_file_exits_two() {
    let out = trustnet(&["compute", "/definitely/not/here.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unwritable_out_dir_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "").unwrap();
    let out_dir = blocker.join("out");
    let out = trustnet(&[
        "simulate",
        &bundled("liar_vs_honest.json"),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
}

#[test]
fn simulate_without_section_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = trustnet(&[
        "simulate",
        &bundled("table1.json"),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn liar_weight_falls_below_half() {
    let dir = tempfile::tempdir().unwrap();
    let out = trustnet(&[
        "simulate",
        &bundled("liar_vs_honest.json"),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(String::from_utf8_lossy(&out.stdout).lines().count(), 1);

    let result: serde_json::Value =
        serde_json::from_slice(&fs::read(dir.path().join("result.json")).unwrap()).unwrap();
    let table = result["weight_trajectories"]["R"].as_object().unwrap();
    for liar in ["L1", "L2"] {
        let last = table[liar]
            .as_array()
            .unwrap()
            .last()
            .unwrap()
            .as_f64()
            .unwrap();
        assert!(last < 0.5, "{liar} ends at {last}");
    }
    for name in ["fig2.csv", "fig3.csv"] {
        let csv = fs::read_to_string(dir.path().join(name)).unwrap();
        assert!(csv.lines().count() > 1 && !csv.contains('\r'));
    }
}

#[test]
fn repeated_seed_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for out in [&a, &b] {
        let status = trustnet(&[
            "simulate",
            &bundled("liar_vs_honest.json"),
            "--out",
            out.to_str().unwrap(),
        ])
        .status;
        assert!(status.success());
    }
    for name in ["result.json", "fig2.csv", "fig3.csv"] {
        assert_eq!(
            fs::read(a.join(name)).unwrap(),
            fs::read(b.join(name)).unwrap(),
            "{name}"
        );
    }
}

#[test]
fn parallel_seeds_match_single_runs() {
    let dir = tempfile::tempdir().unwrap();
    let many = dir.path().join("many");
    let out = trustnet(&[
        "simulate",
        &bundled("liar_vs_honest.json"),
        "--out",
        many.to_str().unwrap(),
        "--seeds",
        "3",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(String::from_utf8_lossy(&out.stdout).lines().count(), 3);

    // the first seed is the file's own seed, so it must match a plain run
    let single = dir.path().join("single");
    assert!(trustnet(&[
        "simulate",
        &bundled("liar_vs_honest.json"),
        "--out",
        single.to_str().unwrap(),
    ])
    .status
    .success());
    let seeded: Vec<_> = fs::read_dir(&many)
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    assert_eq!(seeded.len(), 3);
    let first = many.join("seed-7");
    assert_eq!(
        fs::read(first.join("result.json")).unwrap(),
        fs::read(single.join("result.json")).unwrap()
    );
    assert_ne!(
        fs::read(first.join("result.json")).unwrap(),
        fs::read(many.join("seed-8").join("result.json")).unwrap()
    );
}

#[test]
fn bundled_scenarios_validate_and_run() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["table1.json", "liar_vs_honest.json", "society50.json"] {
        let path = bundled(name);
        assert!(trustnet(&["validate", &path]).status.success(), "{name}");
        let out = trustnet(&["compute", &path]);
        assert!(out.status.success(), "{name}: {}", stderr(&out));
        let t = trust_of(&out);
        assert!((0.0..=1.0).contains(&t));
        if name != "table1.json" {
            let out_dir = dir.path().join(name);
            let out = trustnet(&["simulate", &path, "--out", out_dir.to_str().unwrap()]);
            assert!(out.status.success(), "{name}: {}", stderr(&out));
        }
    }
}
