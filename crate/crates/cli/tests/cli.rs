use std::process::{Command, Output};

fn modcsf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_modcsf"))
        .args(args)
        .env_remove("MODCSF_CSF_CACHE")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("JSON output")
}

#[test]
fn csf_of_listings() {
    let out = modcsf(&["csf", "--listing-str", "v1 v1", "--basis", "e"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "2*e[2]\n");

    let out = modcsf(&["csf", "--listing-str", "", "--basis", "m"]);
    assert_eq!(stdout(&out), "1*m[]\n");

    let out = modcsf(&[
        "csf",
        "--listing-str",
        "b1{4x2:1-1,2-1,1-2,3-2,4-2}",
        "--basis",
        "e",
    ]);
    assert_eq!(stdout(&out), "20*e[4,2] + 40*e[5,1] + 180*e[6]\n");
}

#[test]
fn csf_from_files() {
    let dir = std::env::temp_dir().join(format!("modcsf-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let poset = dir.join("claw.json");
    std::fs::write(&poset, r#"{"n": 4, "lt": [[0, 1], [1, 2]]}"#).unwrap();
    let out = modcsf(&["csf", "--poset", poset.to_str().unwrap(), "--basis", "e"]);
    assert_eq!(stdout(&out), "1*e[2,1,1] - 2*e[2,2] + 5*e[3,1] + 4*e[4]\n");

    let listing = dir.join("listing.txt");
    std::fs::write(&listing, "v1 v1 v1 v2 v2\n").unwrap();
    let out = modcsf(&[
        "csf",
        "--listing",
        listing.to_str().unwrap(),
        "--basis",
        "e",
        "--json",
    ]);
    assert_eq!(json(&out)["text"], "12*e[3,2]");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn usage_and_parse_errors_exit_2() {
    assert_eq!(modcsf(&["csf", "--basis", "e"]).status.code(), Some(2));
    let out = modcsf(&["csf", "--listing-str", "b1{2x2:3-1}"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("byte 7"));
    assert_eq!(
        modcsf(&["check-epos", "--n", "9", "--class", "all"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(modcsf(&["bogus"]).status.code(), Some(2));
}

#[test]
fn counts_match_the_table() {
    let out = modcsf(&["counts", "--max-n", "7"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out),
        "all      1 2 5 16 63 318 2045\n\
         3p1free  1 2 5 15 49 173 639\n\
         both     1 2 5 14 42 132 429\n"
    );
}

#[test]
fn check_epos_reports() {
    let out = modcsf(&["check-epos", "--n", "7", "--class", "3p1free"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["checked"], 639);
    assert_eq!(report["counterexamples"], serde_json::json!([]));
    assert!(report.get("seconds").is_none());

    let out = modcsf(&["check-epos", "--n", "4", "--class", "all"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["counterexamples"].as_array().unwrap().len(), 1);

    let out = modcsf(&["check-epos", "--n", "3", "--class", "all", "--timing"]);
    assert!(json(&out)["seconds"].is_number());
}

#[test]
fn output_does_not_depend_on_jobs() {
    for args in [
        &[
            "check-epos",
            "--n",
            "6",
            "--class",
            "all",
            "--reductions",
            "split,dual",
        ][..],
        &[
            "verify",
            "modular",
            "--samples",
            "60",
            "--max-size",
            "9",
            "--seed",
            "3",
        ][..],
        &["enumerate", "--n", "5", "--class", "3p1free"][..],
    ] {
        let one = modcsf(&[&["--jobs", "1"][..], args].concat());
        let many = modcsf(&[&["--jobs", "4"][..], args].concat());
        assert_eq!(one.stdout, many.stdout, "{args:?}");
        assert_eq!(one.status.code(), many.status.code());
    }
}

#[test]
fn modular_sampling() {
    let out = modcsf(&[
        "verify",
        "modular",
        "--samples",
        "100",
        "--max-size",
        "8",
        "--seed",
        "42",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["checked"], 100);
}

#[test]
fn expansion_and_reduction() {
    let out = modcsf(&["expand3free", "--graph", "4x2:1-1,2-1,1-2,3-2,4-2"]);
    assert_eq!(stdout(&out), "20*e[4,2] + 40*e[5,1] + 180*e[6]\n");
    let out = modcsf(&[
        "expand3free",
        "--graph",
        "4x2:1-1,2-1,1-2,3-2,4-2",
        "--json",
    ]);
    assert_eq!(
        json(&out)["functionals"],
        serde_json::json!(["1/6", "5/12", "5/12"])
    );

    let out = modcsf(&["reduce", "--listing-str", "b1{4x2:1-1,2-1,1-2,3-2,4-2}"]);
    assert_eq!(
        stdout(&out),
        "1/6 v2 v2 v1 v1 v1 v1\n5/12 v2 v1 v1 v1 v1 v2\n5/12 v1 v1 v1 v1 v2 v2\n"
    );
}

#[test]
fn enumeration() {
    let out = modcsf(&["enumerate", "--n", "4", "--class", "both", "--count-only"]);
    assert_eq!(stdout(&out), "14\n");
    let out = modcsf(&["enumerate", "--n", "2"]);
    assert_eq!(
        stdout(&out),
        "{\"n\":2,\"lt\":[]}\n{\"n\":2,\"lt\":[[0,1]]}\n"
    );
}

#[test]
fn sweeps() {
    let out = modcsf(&["sweep", "listings", "--n", "5"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["checked"], 49);
    let out = modcsf(&["sweep", "graphs", "--max-rs", "5"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn cache_cap_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_modcsf"))
        .args(["check-epos", "--n", "5", "--class", "3p1free"])
        .env("MODCSF_CSF_CACHE", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let bad = Command::new(env!("CARGO_BIN_EXE_modcsf"))
        .args(["check-epos", "--n", "5"])
        .env("MODCSF_CSF_CACHE", "lots")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
