use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("tests/data");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cluster"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("json output")
}

#[test]
fn gamma_matches_golden_file() {
    let out = run(&["gamma", "--input", &data("gamma_triangle.json")]);
    let golden = std::fs::read(data("gamma_triangle.golden.json")).unwrap();
    assert!(out.status.success());
    assert_eq!(out.stdout, golden);
}

#[test]
fn identical_inputs_give_identical_bytes() {
    let a = run(&[
        "mutate",
        "--input",
        r#"{"vertices":3,"arrows":[[1,2,1],[2,3,2]],"frozen":[3],"path":[1,2,1]}"#,
    ]);
    let b = run(&[
        "mutate",
        "--input",
        r#"{"vertices":3,"arrows":[[1,2,1],[2,3,2]],"frozen":[3],"path":[1,2,1]}"#,
    ]);
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["provenance"], serde_json::json!([1, 2, 1]));
}

#[test]
fn e8_plan_only_length() {
    let v = json(&run(&[
        "mu-i",
        "--plan-only",
        "--input",
        &data("e8_c15.json"),
    ]));
    assert_eq!(v["length"], 840);
    assert_eq!(v["expected_length"], 840);
    assert!(v.get("final_labels").is_none());
}

#[test]
fn selftest_exits_zero() {
    let out = run(&["selftest", "--seed", "11"]);
    let v = json(&out);
    assert!(v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["passed"] == true));
}

#[test]
fn validation_errors_exit_two() {
    let out = run(&["gamma", "--input", r#"{"rank":2,"word":[1,1]}"#]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "validation");

    assert_eq!(
        run(&["acyclic", "--input", r#"{"n":2,"arrows":[[1,2,1]]}"#])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&[
            "mutate",
            "--input",
            r#"{"vertices":2,"arrows":[[1,2,1]],"frozen":[2],"path":[2]}"#
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        run(&["gamma", "--input", "{not json"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["gamma"]).status.code(), Some(2));
}

#[test]
fn minor_check_on_non_type_a_is_rejected() {
    let out = run(&[
        "minor-check",
        "--input",
        r#"{"rank":2,"edges":[[1,2,2]],"word":[1]}"#,
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn walk_modes() {
    let bfs = json(&run(&[
        "walk",
        "--depth",
        "8",
        "--input",
        r#"{"vertices":2,"arrows":[[1,2,1]]}"#,
    ]));
    assert_eq!(bfs["seeds"], 5);
    assert_eq!(bfs["variables"].as_array().unwrap().len(), 5);
    let a = run(&[
        "walk",
        "--seed",
        "5",
        "--depth",
        "6",
        "--input",
        r#"{"rank":3,"edges":[[1,2,1],[2,3,1]],"word":[1,2,1,3,2,1]}"#,
    ]);
    let b = run(&[
        "walk",
        "--seed",
        "5",
        "--depth",
        "6",
        "--input",
        r#"{"rank":3,"edges":[[1,2,1],[2,3,1]],"word":[1,2,1,3,2,1]}"#,
    ]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["path"].as_array().unwrap().len(), 6);
}

#[test]
fn dimension_vector_commands() {
    let input = r#"{"rank":3,"edges":[[1,2,2],[2,3,1]],"word":[1,3,2,1,3,2,1],"path":[4]}"#;
    let v = json(&run(&["dimvec", "--input", input]));
    let step = &v["steps"][0];
    assert_eq!(step["in_score"], 70);
    assert_eq!(step["out_score"], 69);
    assert_eq!(step["new_label"], serde_json::json!([0, 2, 2, 4, 8, 6, 13]));
    let v = json(&run(&["delta-dimvec", "--input", input]));
    assert_eq!(
        v["steps"][0]["new_label"],
        serde_json::json!([0, 2, 0, 0, 0, 0, 1])
    );
}

#[test]
fn tracked_mu_i_and_identities() {
    let a4 =
        r#"{"rank":4,"edges":[[1,2,1],[2,3,1],[3,4,1]],"word":[1,2,1,3,2,1,4,3,2,1],"track":true}"#;
    let v = json(&run(&["mu-i", "--input", a4]));
    assert_eq!(v["identities_verified"], 10);
    assert_eq!(v["groups"][0], serde_json::json!([1, 5, 8]));
    let v = json(&run(&["identities", "--input", a4]));
    assert_eq!(v["verified"], 10);
    assert_eq!(v["identities"].as_array().unwrap().len(), 10);
}

#[test]
fn pbw_euler_phi_minor_acyclic() {
    let v = json(&run(&[
        "pbw",
        "--input",
        r#"{"rank":3,"edges":[[1,2,1],[2,3,1]],"word":[2,3,1,2,3,1],"path":[3]}"#,
    ]));
    assert_eq!(v["cluster"][2], "m1*m2*m6 - m1*m4 - m2*m5 + m3");

    let v = json(&run(&[
        "euler-gen",
        "--input",
        r#"{"rank":3,"edges":[[1,2,2],[2,3,1]],"word":[3,1,2,3,1,2,1],"k":[5]}"#,
    ]));
    assert_eq!(v[0]["words"], 402);

    let a4 = r#"{"rank":4,"edges":[[1,2,1],[2,3,1],[3,4,1]],"word":[3,4,2,1,3,4,2,1]}"#;
    let v = json(&run(&["phi-eval", "--input", a4]));
    assert_eq!(v["values"][7]["phi"], "t8*t7*t6*t5*t4*t2");
    let v = json(&run(&["minor-check", "--input", a4]));
    assert_eq!(v["minors"][3]["cols"], serde_json::json!([2, 3, 5]));

    let v = json(&run(&[
        "acyclic",
        "--input",
        r#"{"n":4,"arrows":[[1,2,1],[1,3,1],[1,4,1]]}"#,
    ]));
    assert_eq!(v["restored"], true);
    assert_eq!(v["disjoint"], true);
}

#[test]
fn output_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("cluster-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("gamma.json");
    let out = run(&[
        "gamma",
        "--input",
        &data("gamma_triangle.json"),
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(
        std::fs::read(&path).unwrap(),
        std::fs::read(data("gamma_triangle.golden.json")).unwrap()
    );
    std::fs::remove_dir_all(&dir).unwrap();
}
