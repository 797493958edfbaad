//! End-to-end tests of the `gdconj` binary: exit codes, report shapes,
//! golden CSV output, and byte-level determinism. Also pins the shipped
//! config files in `tests/configs/` to the built-in example pairs.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use gdconj::{fixture, pair_from_path, FIXTURE_NAMES};

fn config_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/configs")
        .join(format!("{name}.toml"))
}

fn gdconj(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gdconj"))
        .args(args)
        .output()
        .expect("binary should run")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout should be UTF-8")
}

#[test]
fn shipped_configs_reproduce_the_builtin_examples() {
    for name in FIXTURE_NAMES {
        let path = config_path(name);
        let parsed = pair_from_path(&path)
            .unwrap_or_else(|e| panic!("config for {name} should parse: {e}"));
        let builtin = fixture(name).expect("fixture should build");
        for (config_sys, fixture_sys) in [(&parsed.f, &builtin.f), (&parsed.g, &builtin.g)] {
            for vertex in 0..2 {
                for digit in 0..2u8 {
                    assert!(
                        config_sys
                            .map(vertex, digit)
                            .same_action(fixture_sys.map(vertex, digit)),
                        "{name}: map [{vertex}][{digit}] differs between \
                         the config file and the built-in pair"
                    );
                }
            }
        }
        assert_eq!(
            parsed.g.label(),
            builtin.g.label(),
            "{name}: target label should match"
        );
    }
}

#[test]
fn classify_agrees_between_config_and_example() {
    for name in FIXTURE_NAMES {
        let path = config_path(name);
        let from_config = gdconj(&["classify", path.to_str().unwrap()]);
        let from_example = gdconj(&["example", name, "classify"]);
        assert!(from_config.status.success(), "classify {name} via config");
        assert!(from_example.status.success(), "classify {name} via example");
        assert_eq!(
            stdout_of(&from_config),
            stdout_of(&from_example),
            "{name}: the two input routes must print identical reports"
        );
    }
}

#[test]
fn classify_reports_the_expected_kinds() {
    let expected = [
        ("ex-affine", "\"kind\": \"singular\""),
        ("ex-lf-singular", "\"kind\": \"singular\""),
        ("ex-lf-smooth", "\"kind\": \"smooth\""),
        ("ex-nonlinear", "\"kind\": \"singular\""),
    ];
    for (name, needle) in expected {
        let out = gdconj(&["example", name, "classify"]);
        assert!(out.status.success(), "classify {name} should exit 0");
        let text = stdout_of(&out);
        assert!(text.contains(needle), "{name} report should contain {needle}, got:\n{text}");
    }
}

#[test]
fn identical_invocations_are_byte_identical() {
    let args = ["example", "ex-lf-smooth", "curve", "--vertex", "0", "--depth", "6"];
    let first = gdconj(&args);
    let second = gdconj(&args);
    assert!(first.status.success(), "curve should succeed");
    assert_eq!(first.stdout, second.stdout, "repeated runs must match byte for byte");

    let args = ["example", "ex-nonlinear", "eval", "--vertex", "1", "--x", "3/7"];
    let first = gdconj(&args);
    let second = gdconj(&args);
    assert!(first.status.success(), "eval should succeed");
    assert_eq!(first.stdout, second.stdout, "repeated eval runs must match");
}

#[test]
fn curve_csv_has_the_documented_shape() {
    let out = gdconj(&["example", "ex-lf-smooth", "curve", "--vertex", "0", "--depth", "2"]);
    assert!(out.status.success(), "curve should exit 0");
    assert_eq!(
        stdout_of(&out),
        "x,phi\n0,0\n0.25,0.4\n0.5,0.6666666666666666\n0.75,0.8571428571428571\n1,1\n",
        "depth-2 curve of phi0 = 2x/(x+1) at dyadic points"
    );
}

#[test]
fn curve_out_file_matches_stdout() {
    let dir = tempfile::tempdir().expect("tempdir");
    let path = dir.path().join("curve.csv");
    let to_stdout = gdconj(&["example", "ex-affine", "curve", "--vertex", "1", "--depth", "4"]);
    let to_file = gdconj(&[
        "example", "ex-affine", "curve", "--vertex", "1", "--depth", "4",
        "--out", path.to_str().unwrap(),
    ]);
    assert!(to_stdout.status.success() && to_file.status.success());
    assert!(to_file.stdout.is_empty(), "--out should leave stdout empty");
    let written = std::fs::read(&path).expect("read written file");
    assert_eq!(written, to_stdout.stdout, "file content equals stdout content");
}

#[test]
fn eval_report_carries_exact_values_when_available() {
    let out = gdconj(&["example", "ex-affine", "eval", "--vertex", "0", "--x", "1/2"]);
    assert!(out.status.success(), "eval at the break should exit 0");
    let text = stdout_of(&out);
    assert!(text.contains("\"exact\": \"1/4\""), "break maps to break:\n{text}");
    assert!(text.contains("\"exact_hit\": true"), "break point resolves exactly");
}

#[test]
fn trace_csv_and_json_share_the_rows() {
    let csv = gdconj(&["example", "ex-lf-smooth", "trace", "--vertex", "0", "--x", "1/3", "--depth", "4"]);
    assert!(csv.status.success(), "trace should exit 0");
    let text = stdout_of(&csv);
    assert!(
        text.starts_with("depth,digit,f_len,g_len,ratio,rs_ratio,t_n\n"),
        "trace CSV header, got:\n{text}"
    );
    assert_eq!(text.lines().count(), 5, "header plus one row per depth");

    let json = gdconj(&[
        "example", "ex-lf-smooth", "trace", "--vertex", "0", "--x", "1/3",
        "--depth", "4", "--format", "json",
    ]);
    assert!(json.status.success(), "trace json should exit 0");
    let parsed: serde_json::Value =
        serde_json::from_str(&stdout_of(&json)).expect("trace json parses");
    assert_eq!(
        parsed["rows"].as_array().map(Vec::len),
        Some(4),
        "JSON trace carries the same four rows"
    );
}

#[test]
fn region_lattice_is_deterministic_and_flagged() {
    let out = gdconj(&["region", "--min", "-1/2", "--max", "1/2", "--step", "1/2"]);
    assert!(out.status.success(), "region should exit 0");
    assert_eq!(
        stdout_of(&out),
        "c00,c11,admissible\n\
         -0.5,-0.5,1\n-0.5,0,1\n-0.5,0.5,1\n\
         0,-0.5,1\n0,0,1\n0,0.5,1\n\
         0.5,-0.5,0\n0.5,0,1\n0.5,0.5,1\n",
        "3x3 lattice: (1/2, -1/2) violates c00 <= 2*c11 + 1"
    );
}

#[test]
fn validate_prints_a_report_on_success_and_failure() {
    let ok = gdconj(&["validate", config_path("ex-lf-smooth").to_str().unwrap()]);
    assert!(ok.status.success(), "valid config should exit 0");
    let text = stdout_of(&ok);
    assert!(text.contains("\"ok\": true"), "success report:\n{text}");

    let dir = tempfile::tempdir().expect("tempdir");
    let bad = dir.path().join("bad.toml");
    let mut broken = std::fs::read_to_string(config_path("ex-affine")).expect("read config");
    // Damage one boundary so the row no longer tiles the interval.
    broken = broken.replace("slope = \"3/4\"", "slope = \"2/3\"");
    std::fs::write(&bad, broken).expect("write bad config");

    let out = gdconj(&["validate", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1), "tiling violation should exit 1");
    let text = stdout_of(&out);
    assert!(text.contains("\"ok\": false"), "failure report:\n{text}");
    assert!(text.contains("violations"), "report lists violations:\n{text}");
}

#[test]
fn exit_codes_separate_failure_classes() {
    // 2: unreadable config path.
    let out = gdconj(&["classify", "/nonexistent/nowhere.toml"]);
    assert_eq!(out.status.code(), Some(2), "missing file is a config error");

    // 2: unknown example name.
    let out = gdconj(&["example", "ex-unknown", "classify"]);
    assert_eq!(out.status.code(), Some(2), "unknown example is a config error");

    // 2: malformed flag value.
    let out = gdconj(&["example", "ex-affine", "eval", "--vertex", "0", "--x", "one"]);
    assert_eq!(out.status.code(), Some(2), "unparseable --x is a config error");

    // 2: clap usage error.
    let out = gdconj(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(2), "usage errors exit 2");

    // 1: domain failure on otherwise good input.
    let out = gdconj(&["example", "ex-affine", "eval", "--vertex", "0", "--x", "3/2"]);
    assert_eq!(out.status.code(), Some(1), "x outside [0,1] exits 1");

    // 3: well-formed pair no criterion covers — source breaks off 1/2, a
    // formula map in the target.
    let dir = tempfile::tempdir().expect("tempdir");
    let path = dir.path().join("uncovered.toml");
    let thirds = "kind = \"affine\"\nslope = \"1/3\"\nintercept = \"0\"\n";
    let thirds_hi = "kind = \"affine\"\nslope = \"2/3\"\nintercept = \"1/3\"\n";
    let halves = "kind = \"affine\"\nslope = \"1/2\"\nintercept = \"0\"\n";
    let halves_hi = "kind = \"affine\"\nslope = \"1/2\"\nintercept = \"1/2\"\n";
    let expr = "kind = \"expr\"\nformula = \"x^2/(x+1)\"\nlip = \"3/4\"\n";
    let text = format!(
        "[f.0.0]\n{thirds}\n[f.0.1]\n{thirds_hi}\n[f.1.0]\n{thirds}\n[f.1.1]\n{thirds_hi}\n\
         [g.0.0]\n{expr}\n[g.0.1]\n{halves_hi}\n[g.1.0]\n{halves}\n[g.1.1]\n{halves_hi}"
    );
    std::fs::write(&path, text).expect("write config");
    let out = gdconj(&["classify", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3), "no applicable criterion exits 3");
}

#[test]
fn residual_reports_zero_for_the_identity_pair() {
    let dir = tempfile::tempdir().expect("tempdir");
    let path = dir.path().join("identity.toml");
    let halving_rows = |name: &str| {
        format!(
            "[{name}.0.0]\nkind = \"affine\"\nslope = \"1/2\"\nintercept = \"0\"\n\n\
             [{name}.0.1]\nkind = \"affine\"\nslope = \"1/2\"\nintercept = \"1/2\"\n\n\
             [{name}.1.0]\nkind = \"affine\"\nslope = \"1/2\"\nintercept = \"0\"\n\n\
             [{name}.1.1]\nkind = \"affine\"\nslope = \"1/2\"\nintercept = \"1/2\"\n\n"
        )
    };
    std::fs::write(&path, format!("{}{}", halving_rows("f"), halving_rows("g")))
        .expect("write config");
    let out = gdconj(&["residual", path.to_str().unwrap(), "--grid", "17"]);
    assert!(out.status.success(), "residual should exit 0");
    let text = stdout_of(&out);
    assert!(
        text.contains("\"exact\": \"0\""),
        "identity pair has exactly zero defect:\n{text}"
    );
}
