use std::path::PathBuf;

use serde::Deserialize;
use tropreal::ideal_ops::same_locus;
use tropreal::Ideal;
use tropreal_cli::problem::{parse_problem, ProblemFile};

fn problems() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("problems")
}

fn problem(name: &str) -> String {
    problems().join(name).display().to_string()
}

fn cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("tropreal").chain(args.iter().copied());
    let code = tropreal_cli::run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

#[derive(Deserialize)]
struct Expected {
    problem: String,
    args: Vec<String>,
    radical: Vec<String>,
}

#[test]
fn sample_problems_match_expected() {
    let src = std::fs::read_to_string(problems().join("expected.json")).unwrap();
    let cases: Vec<Expected> = serde_json::from_str(&src).unwrap();
    assert_eq!(cases.len(), 7);
    for case in cases {
        let path = problem(&case.problem);
        let mut args: Vec<&str> = case.args.iter().map(String::as_str).collect();
        args.push(&path);
        let (code, out, err) = cli(&args);
        assert_eq!(code, 0, "{}: {err}", case.problem);
        let pr = parse_problem(&std::fs::read_to_string(&path).unwrap())
            .unwrap()
            .ring
            .parameter_ring();
        let got = Ideal::parse(&pr, &out.lines().collect::<Vec<_>>()).unwrap();
        let want = Ideal::parse(&pr, &case.radical).unwrap();
        assert!(
            same_locus(&got, &want).unwrap(),
            "{}: got {got}",
            case.problem
        );
    }
}

#[test]
fn malformed_input_is_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad_poly = dir.path().join("poly.json");
    std::fs::write(
        &bad_poly,
        r#"{"parameters":["c"],"variables":["x"],"ideal":["x + * c"]}"#,
    )
    .unwrap();
    let (code, _, err) = cli(&["real1", bad_poly.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(
        err.contains("ideal[0]") && err.contains("line 1, column 5"),
        "{err}"
    );

    let bad_json = dir.path().join("trunc.json");
    std::fs::write(&bad_json, "{\"parameters\": [\"c\"],\n \"variables\": [").unwrap();
    let (code, _, err) = cli(&["real1", bad_json.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("line 2"), "{err}");

    let (code, _, _) = cli(&["real1", "/nonexistent/problem.json"]);
    assert_eq!(code, 1);
    let (code, _, _) = cli(&["frobnicate"]);
    assert_eq!(code, 1);
    let (code, _, err) = cli(&["realm", "--ray", "2,0", &problem("ex2_1.json")]);
    assert_eq!(code, 1, "{err}");
}

#[test]
fn caps_are_exit_two() {
    let p = problem("ex3_12.json");
    let (code, _, err) = cli(&["--minor-cols", "1", "realm", "--mult", "2", &p]);
    assert_eq!(code, 2);
    assert!(err.contains("--minor-cols"), "{err}");
    let (code, _, err) = cli(&["--cgb-depth", "0", "cgb", &problem("ex2_4.json")]);
    assert_eq!(code, 2);
    assert!(err.contains("--cgb-depth"), "{err}");
}

#[test]
fn help_is_exit_zero() {
    let (code, out, _) = cli(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("realsigma"));
}

#[test]
fn json_output_reads_back_as_a_problem() {
    for (args, file) in [
        (vec!["real1"], "ex2_4.json"),
        (vec!["realm", "--ray", "1,0", "--mult", "2"], "ex3_1.json"),
        (vec!["saturate"], "ex2_4.json"),
    ] {
        let p = problem(file);
        let mut a = args.clone();
        a.push(&p);
        let (_, text, _) = cli(&a);
        let mut j = vec!["--json"];
        j.extend(a);
        let (code, out, err) = cli(&j);
        assert_eq!(code, 0, "{err}");
        let pf: ProblemFile = serde_json::from_str(&out).unwrap();
        let back = pf.build().unwrap();
        let gens = tropreal_cli::canonical_generators(&back.ideal);
        assert_eq!(gens.join("\n") + "\n", text, "{file}");
    }
}

#[test]
fn text_output_is_deterministic() {
    let p = problem("ex3_12.json");
    for seed in ["0", "7"] {
        let a = cli(&["--seed", seed, "realm", "--mult", "2", &p]);
        let b = cli(&["--seed", seed, "realm", "--mult", "2", &p]);
        assert_eq!(a, b);
    }
    let p = problem("ex3_1.json");
    assert_eq!(cli(&["cgb", &p]), cli(&["cgb", &p]));
}

#[test]
fn trace_file_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("trace.json");
    let (code, _, err) = cli(&[
        "--trace",
        t.to_str().unwrap(),
        "realsigma",
        &problem("ex5_2.json"),
    ]);
    assert_eq!(code, 0, "{err}");
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&t).unwrap()).unwrap();
    assert_eq!(v["sweeps"].as_array().unwrap().len(), 2);

    let (code, _, _) = cli(&["--trace", t.to_str().unwrap(), "gb", &problem("ex5_2.json")]);
    assert_eq!(code, 1);
}

#[test]
fn cache_dir_gives_same_answers() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let p = problem("ex3_11.json");
    let plain = cli(&["realm", "--mult", "2", &p]);
    let cold = cli(&["--cache-dir", d, "realm", "--mult", "2", &p]);
    let warm = cli(&["--cache-dir", d, "realm", "--mult", "2", &p]);
    assert_eq!(plain, cold);
    assert_eq!(cold, warm);
    assert!(std::fs::read_dir(dir.path()).unwrap().next().is_some());
}

#[test]
fn tool_subcommands() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.json");
    std::fs::write(
        &m,
        r#"{"rows": 2, "cols": 3, "entries": [[2, 4, 4], [-6, 6, 12]]}"#,
    )
    .unwrap();
    let (code, out, _) = cli(&["snf", m.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.starts_with("diagonal: 2 6\n"), "{out}");

    let e21 = problem("ex2_1.json");
    assert_eq!(cli(&["gb", &e21]).1, "x*y + c1*x + c2*y\n");
    assert_eq!(
        cli(&["hilbert", "--degree", "2", "--at", "1,1", &e21]).1,
        "5\n"
    );
    let (code, out, _) = cli(&["cgb", &e21]);
    assert_eq!(code, 0);
    assert!(out.contains("branch 0:"), "{out}");

    let (_, out, _) = cli(&["decompose", &problem("ex3_1.json")]);
    assert_eq!(out.lines().count(), 3, "{out}");

    let e24 = problem("ex2_4.json");
    let (code, out, _) = cli(&["saturate", "--by", "x", &e24]);
    assert_eq!(code, 0);
    assert!(!out.trim().is_empty());
    let (code, out, _) = cli(&["minors", "--mult", "1", "--degree", "1", &e21]);
    assert_eq!(code, 0, "{out}");
}
