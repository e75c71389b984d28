use std::process::{Command, Output};

fn sullivan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sullivan"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn sphere_cohomology() {
    let o = sullivan(&["cohomology", "fixtures/s2", "--cap", "12"]);
    assert!(o.status.success());
    assert!(
        stdout(&o).contains("betti: 1,0,1,0,0,0,0,0,0,0,0,0,0\n"),
        "{}",
        stdout(&o)
    );
}

#[test]
fn json_output_is_repeatable() {
    let args = ["formality", "heisenberg_shifted", "--cap", "14", "--json"];
    let (a, b) = (sullivan(&args), sullivan(&args));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["verdict"]["label"], "NonFormal(stage=2)");
}

#[test]
fn nonformal_exits_zero_unless_expected_otherwise() {
    assert_eq!(
        sullivan(&["formality", "heisenberg_shifted", "--cap", "14"])
            .status
            .code(),
        Some(0)
    );
    let args = [
        "formality",
        "heisenberg_shifted",
        "--cap",
        "14",
        "--expect",
        "formal",
    ];
    assert_eq!(sullivan(&args).status.code(), Some(4));
    let args = [
        "formality",
        "heisenberg_shifted",
        "--cap",
        "14",
        "--expect",
        "nonformal",
    ];
    assert_eq!(sullivan(&args).status.code(), Some(0));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(sullivan(&["cohomology", "s2"]).status.code(), Some(1));
    assert_eq!(
        sullivan(&["cohomology", "s6", "--cap", "12"]).status.code(),
        Some(1)
    );
    assert_eq!(
        sullivan(&["cohomology", "no_such_thing", "--cap", "12"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        sullivan(&["tncz", "s2", "--cap", "8"]).status.code(),
        Some(1)
    );
}

#[test]
fn parse_errors_exit_two_with_position() {
    let dir = env!("CARGO_TARGET_TMPDIR");
    let path = format!("{dir}/bad.cdga");
    std::fs::write(
        &path,
        "generator a : degree 2\ngenerator x : degree 4\nd x = a^2\n",
    )
    .unwrap();
    let o = sullivan(&["cohomology", &path, "--cap", "8"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains(":3:"));

    let path = format!("{dir}/bad.json");
    std::fs::write(
        &path,
        r#"{"name": "x", "generators": [{"name": "a", "degree": -1}]}"#,
    )
    .unwrap();
    let o = sullivan(&["cohomology", &path, "--cap", "8"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("$.generators[0].degree"));
}

#[test]
fn failed_preconditions_exit_three() {
    // The S³ fiber has a derivation of degree −3.
    let o = sullivan(&["replay-derivations", "base_bcn_total", "--cap", "8"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn json_documents_are_read() {
    let dir = env!("CARGO_TARGET_TMPDIR");
    let path = format!("{dir}/s3.json");
    let doc = sullivan::fixtures::fixture("s3").unwrap().load().unwrap();
    std::fs::write(
        &path,
        sullivan::dsl::json::render(&sullivan::dsl::json::to_json(&doc)),
    )
    .unwrap();
    let o = sullivan(&["cohomology", &path, "--cap", "6"]);
    assert!(
        stdout(&o).contains("betti: 1,0,0,1,0,0,0\n"),
        "{}",
        stdout(&o)
    );
}

#[test]
fn fixtures_are_listed() {
    let o = sullivan(&["fixtures", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v.as_array().unwrap().len() >= 10);
}

#[test]
fn seeded_shuffle_keeps_the_verdict() {
    for seed in ["1", "2", "3"] {
        let o = sullivan(&["formality", "lupton_total", "--cap", "12", "--seed", seed]);
        assert!(stdout(&o).starts_with("NonFormal(stage=2)\n"));
    }
}
