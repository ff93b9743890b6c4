//! Command surface driven in-process through `run`.

use threebox_cli::run;

fn call(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("threebox").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn temp_file(name: &str, contents: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("threebox-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

const EVERY_COMMAND: &[&[&str]] = &[
    &["three-box", "stats"],
    &["three-box", "abl", "--choice", "3", "--outcome", "0"],
    &["three-box", "success"],
    &["three-box", "success", "--without-intermediate"],
    &["scm", "run", "d"],
    &["scm", "show", "b1"],
    &["dag", "dsep", "--variant", "realist+o", "--x", "V", "--y", "C", "--given", "M2"],
    &["dag", "show", "--variant", "pure+op"],
    &["iq", "check", "--form", "compact"],
    &["feasibility", "decide", "--variant", "realist", "--restrict", "1,2"],
    &["feasibility", "decide", "--variant", "realist+op"],
    &["report", "figure4"],
];

#[test]
fn outputs_are_exact_and_repeatable() {
    for args in EVERY_COMMAND {
        for format in ["json", "markdown"] {
            let full: Vec<&str> = args.iter().copied().chain(["--format", format]).collect();
            let (code, out, err) = call(&full);
            assert_eq!(code, 0, "{full:?}: {err}");
            // rationals only: a digit followed by a decimal point never appears
            let floaty = out.as_bytes().windows(2).any(|w| w[0].is_ascii_digit() && w[1] == b'.');
            assert!(!floaty, "{full:?} printed a float:\n{out}");
            assert_eq!(call(&full).1, out, "{full:?} is not deterministic");
            if format == "json" {
                serde_json::from_str::<serde_json::Value>(&out).unwrap_or_else(|e| panic!("{full:?}: {e}"));
            }
        }
    }
}

#[test]
fn abl_statement() {
    assert_eq!(call(&["three-box", "abl", "--choice", "1"]).1, "P(M1=1|M2=1,C=1) = 1\n");
    assert_eq!(call(&["three-box", "abl", "--choice", "3", "--outcome", "0"]).1, "P(M1=0|M2=1,C=3) = 4/5\n");
}

#[test]
fn expectations_drive_the_exit_status() {
    assert_eq!(call(&["feasibility", "decide", "--variant", "pure+p", "--expect", "feasible"]).0, 0);
    let (code, out, err) = call(&["feasibility", "decide", "--variant", "pure+o", "--expect", "feasible"]);
    assert_eq!(code, 1);
    assert!(out.contains("infeasible"));
    assert!(err.contains("wanted feasible, got infeasible"), "{err}");
    assert_eq!(call(&["iq", "check", "--restrict", "1,2", "--expect", "ok"]).0, 0);
    assert_eq!(call(&["iq", "check", "--expect", "ok"]).0, 1);
    assert_eq!(
        call(&[
            "dag",
            "dsep",
            "--variant",
            "realist+p",
            "--x",
            "C",
            "--y",
            "V",
            "--given",
            "M2",
            "--expect",
            "connected"
        ])
        .0,
        0
    );
    // a verdict the command does not produce is a usage error
    assert_eq!(call(&["three-box", "stats", "--expect", "ok"]).0, 2);
}

#[test]
fn usage_errors_name_the_offending_token() {
    let (code, _, err) = call(&["dag", "dsep", "--variant", "realist+q", "--x", "C", "--y", "V"]);
    assert_eq!(code, 2);
    assert!(err.contains("realist+q"), "{err}");
    let (code, _, err) = call(&["iq", "check", "--form", "sideways"]);
    assert_eq!(code, 2);
    assert!(err.contains("sideways") && err.contains("compact"), "{err}");
    assert_eq!(call(&["report", "figure4", "--bogus"]).0, 2);
    assert_eq!(call(&[]).0, 2);
    let (code, out, _) = call(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("three-box"));
}

#[test]
fn domain_errors_exit_with_one() {
    let (code, _, err) = call(&["dag", "dsep", "--variant", "pure", "--x", "C", "--y", "Q"]);
    assert_eq!(code, 1);
    assert!(err.contains("Q"), "{err}");
    assert_eq!(call(&["iq", "check", "--restrict", "3"]).0, 1);
    assert_eq!(call(&["iq", "check", "--behavior", "builtin:five-box"]).0, 1);
    assert_eq!(call(&["scm", "run", "e"]).0, 1);
    assert_eq!(call(&["three-box", "abl", "--choice", "4"]).0, 1);
}

#[test]
fn behavior_and_model_files() {
    let (_, stats, _) = call(&["three-box", "stats", "--format", "json"]);
    let path = temp_file("behavior.json", &stats);
    let path = path.to_str().unwrap();
    let (code, out, _) = call(&["iq", "check", "--behavior", path, "--form", "compact", "--format", "json"]);
    assert_eq!(code, 0);
    let report: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(report["max_lhs"], "10/9");
    assert_eq!(
        call(&[
            "feasibility",
            "decide",
            "--variant",
            "realist",
            "--behavior",
            path,
            "--restrict",
            "1,2",
            "--expect",
            "infeasible"
        ])
        .0,
        0
    );

    let bad = temp_file("bad.json", r#"{"choices":[1],"table":{"C=1":{"00":"1/2","01":"0/1","10":"0/1","11":"0/1"}}}"#);
    let (code, _, err) = call(&["iq", "check", "--behavior", bad.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("C=1"), "{err}");

    let (_, model, _) = call(&["scm", "show", "c", "--format", "json"]);
    let model_path = temp_file("model.json", &model);
    let (code, out, _) = call(&["scm", "run", model_path.to_str().unwrap(), "--expect", "match"]);
    assert_eq!(code, 0, "{out}");
}
