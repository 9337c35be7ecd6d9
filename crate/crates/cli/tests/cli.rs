use std::fs;
use std::process::Command;

use qdp_cli::run_from_args;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("qdp").chain(args.iter().copied());
    let code = run_from_args(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn value(stdout: &str, key: &str) -> f64 {
    let prefix = format!("{key} = ");
    let line = stdout
        .lines()
        .find(|l| l.starts_with(&prefix))
        .unwrap_or_else(|| panic!("no {key} in {stdout}"));
    line[prefix.len()..]
        .split(',')
        .next()
        .unwrap()
        .trim()
        .parse()
        .unwrap()
}

#[test]
fn budget_examples() {
    let (code, out, _) = run(&["budget", "--p", "0.03", "--d", "0.5", "--dim", "2"]);
    assert_eq!(code, 0);
    assert!((value(&out, "epsilon") - 3.5066).abs() < 1e-4);

    let (code, out, _) = run(&["budget", "--p", "1", "--d", "0.5", "--dim", "2"]);
    assert_eq!(code, 0);
    assert_eq!(value(&out, "epsilon"), 0.0);

    let (code, out, _) = run(&[
        "budget",
        "--p",
        "0.03",
        "--d",
        "0.5",
        "--dim",
        "2",
        "--gates",
        "2",
        "--qec-gates",
        "1",
    ]);
    assert_eq!(code, 0);
    assert!((value(&out, "epsilon") - 3.06657879431).abs() < 1e-10);
}

#[test]
fn defaults_reproduce_baseline() {
    let (_, bare, _) = run(&["budget"]);
    let (_, explicit, _) = run(&[
        "budget", "--p", "0.03", "--d", "0.5", "--dim", "2", "--n", "1", "--m", "0", "--level", "1",
    ]);
    assert_eq!(bare, explicit);
}

#[test]
fn domain_errors_name_the_flag() {
    for (args, flag) in [
        (vec!["budget", "--p", "0"], "--p"),
        (vec!["budget", "--p", "1.5"], "--p"),
        (vec!["budget", "--d", "0"], "--d"),
        (vec!["budget", "--dim", "1"], "--dim"),
        (vec!["budget", "--gates", "0"], "--gates"),
        (
            vec!["budget", "--gates", "2", "--qec-gates", "3"],
            "--qec-gates",
        ),
        (vec!["budget", "--level", "0"], "--level"),
        (vec!["plan", "--target", "-1"], "--target"),
        (
            vec!["plan", "--target", "1", "--max-level", "0"],
            "--max-level",
        ),
        (vec!["validate", "montecarlo", "--trials", "0"], "--trials"),
        (
            vec!["validate", "montecarlo", "--backend", "gpu"],
            "--backend",
        ),
        (vec!["validate", "dp", "--pairs", "0"], "--pairs"),
    ] {
        let (code, _, err) = run(&args);
        assert_eq!(code, 2, "{args:?}");
        assert!(err.contains(flag), "{args:?}: {err}");
    }
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["budget", "--bogus"]).0, 2);
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["sweep", "--from", "0.1", "--to", "0.2"]).0, 2);
    assert_eq!(run(&["plan"]).0, 2);
    assert_eq!(run(&["validate", "nonsense"]).0, 2);
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    for sub in ["budget", "sweep", "threshold", "plan", "validate"] {
        assert!(out.contains(sub), "{sub}");
    }
}

#[test]
fn threshold_is_deterministic() {
    let (code, a, _) = run(&["threshold"]);
    assert_eq!(code, 0);
    assert_eq!(a, run(&["threshold"]).1);
    assert!((value(&a, "threshold") - 0.0579).abs() < 1e-3);
    assert!(a.contains("(0, 0.05]"));
    assert!(a.lines().next().unwrap().ends_with("0.057850"));
}

fn plan_line(out: &str) -> &str {
    out.lines().find(|l| l.starts_with("PLAN ")).unwrap()
}

#[test]
fn plan_examples() {
    let (code, out, _) = run(&["plan", "--target", "0", "--gates", "3"]);
    assert_eq!(code, 0);
    assert!(
        plan_line(&out).contains(" m=0 level=1 ") && plan_line(&out).contains("attainable=true")
    );

    let (_, out, _) = run(&[
        "plan", "--target", "3.0", "--gates", "2", "--p", "0.03", "--d", "0.5", "--dim", "2",
    ]);
    assert!(plan_line(&out).contains(" m=1 level=1 "), "{out}");

    let (_, out, _) = run(&[
        "plan",
        "--target",
        "5.0",
        "--gates",
        "1",
        "--p",
        "0.03",
        "--max-level",
        "2",
    ]);
    assert!(plan_line(&out).contains(" m=1 level=2 "), "{out}");

    let (code, out, _) = run(&["plan", "--target", "2", "--gates", "2", "--p", "0.2"]);
    assert_eq!(code, 0);
    assert!(plan_line(&out).contains("warning=above_threshold"));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(
        &cfg,
        "# two gates, one corrected\ngates = 2\nqec-gates = 1\np = 0.05\n",
    )
    .unwrap();
    let cfg = cfg.to_str().unwrap();
    let (_, from_file, _) = run(&["budget", "--config", cfg]);
    let (_, explicit, _) = run(&["budget", "--gates", "2", "--qec-gates", "1", "--p", "0.05"]);
    assert_eq!(from_file, explicit);
    let (_, overridden, _) = run(&["--config", cfg, "budget", "--p", "0.03"]);
    assert!((value(&overridden, "epsilon") - 3.06657879431).abs() < 1e-10);

    let bad = dir.path().join("bad.cfg");
    fs::write(&bad, "colour = blue\n").unwrap();
    assert_eq!(run(&["budget", "--config", bad.to_str().unwrap()]).0, 2);
    assert_eq!(run(&["budget", "--config", "/no/such/file"]).0, 2);
}

fn read_csv(path: &std::path::Path) -> (String, Vec<String>, Vec<Vec<f64>>) {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let schema = lines.next().unwrap().to_string();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect();
    (schema, header, rows)
}

#[test]
fn sweep_csv_layout_is_stable() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        let (code, _, err) = run(&[
            "sweep",
            "--param",
            "d",
            "--from",
            "0.01",
            "--to",
            "1",
            "--steps",
            "100",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(code, 0, "{err}");
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let (schema, header, rows) = read_csv(&a);
    assert!(schema.starts_with("# qdp-sweep/1 param=d"));
    assert_eq!(
        header,
        [
            "sweep_value",
            "effective_p",
            "epsilon",
            "scenario_n",
            "scenario_m",
            "scenario_level",
            "d",
            "dim"
        ]
    );
    assert_eq!(rows.len(), 100);
    assert!(rows.iter().all(|r| r.len() == 8));
    assert!(rows.windows(2).all(|w| w[1][2] > w[0][2]));
    assert_eq!(rows[99][0], 1.0);
}

#[test]
fn sweep_cells_use_twelve_significant_digits() {
    let (code, out, _) = run(&[
        "sweep", "--param", "p", "--from", "0.001", "--to", "0.05", "--steps", "3",
    ]);
    assert_eq!(code, 0);
    let row: Vec<&str> = out.lines().nth(3).unwrap().split(',').collect();
    assert_eq!(row[0], "0.0255");
    assert_eq!(row[2], "3.66907682682");
}

#[test]
fn integer_sweeps() {
    let (code, out, _) = run(&[
        "sweep",
        "--param",
        "level",
        "--from",
        "1",
        "--to",
        "2",
        "--qec-gates",
        "1",
    ]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 4);
    assert_eq!(
        run(&["sweep", "--param", "level", "--from", "1", "--to", "2", "--steps", "5"]).0,
        2
    );
    assert_eq!(
        run(&["sweep", "--param", "m", "--from", "0.5", "--to", "2"]).0,
        2
    );
    assert_eq!(
        run(&["sweep", "--param", "m", "--from", "0", "--to", "3", "--gates", "2"]).0,
        2
    );
    let (code, out, _) = run(&[
        "sweep",
        "--param",
        "n",
        "--from",
        "1",
        "--to",
        "4",
        "--qec-gates",
        "1",
    ]);
    assert_eq!(code, 0);
    let eps: Vec<f64> = out
        .lines()
        .skip(2)
        .map(|l| l.split(',').nth(2).unwrap().parse().unwrap())
        .collect();
    assert!(eps.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn unwritable_output_is_reported() {
    let (code, _, err) = run(&[
        "sweep",
        "--param",
        "d",
        "--from",
        "0.1",
        "--to",
        "1",
        "--out",
        "/no/such/dir/x.csv",
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("/no/such/dir/x.csv"));
}

#[test]
fn budget_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("budget.csv");
    assert_eq!(run(&["budget", "--csv", path.to_str().unwrap()]).0, 0);
    let (schema, header, rows) = read_csv(&path);
    assert!(schema.starts_with("# qdp-budget/1"));
    assert_eq!(header.len(), 8);
    assert!((rows[0][7] - 3.50655789732).abs() < 1e-12);
}

#[test]
fn validate_suites() {
    let (code, out, _) = run(&["validate", "syndromes"]);
    assert_eq!(code, 0);
    assert!(out.contains("21/21 match"));

    let (code, out, _) = run(&[
        "validate",
        "montecarlo",
        "--p",
        "0.03",
        "--trials",
        "100000",
        "--seed",
        "42",
    ]);
    assert_eq!(code, 0, "{out}");
    assert!(value(&out, "z_score").abs() < 3.0);

    let (code, out, _) = run(&["validate", "montecarlo", "--level", "2", "--trials", "2000"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("not gated"));
    assert_eq!(
        run(&[
            "validate",
            "montecarlo",
            "--level",
            "2",
            "--backend",
            "circuit"
        ])
        .0,
        2
    );
    assert_eq!(
        run(&[
            "validate",
            "montecarlo",
            "--backend",
            "circuit",
            "--trials",
            "100001"
        ])
        .0,
        2
    );

    let (code, out, _) = run(&[
        "validate", "dp", "--p", "0.03", "--d", "0.5", "--pairs", "100", "--povms", "6", "--seed",
        "7",
    ]);
    assert_eq!(code, 0);
    assert!(value(&out, "max_log_ratio") <= 3.5066 + 1e-6);
}

#[test]
fn validation_failure_exits_one() {
    // A single trial that fails puts the estimate at 1, many sigma from 0.017.
    let failing = (0..500u64).find_map(|seed| {
        let seed = seed.to_string();
        let (code, out, _) = run(&[
            "validate",
            "montecarlo",
            "--p",
            "0.03",
            "--trials",
            "1",
            "--seed",
            &seed,
        ]);
        (code == 1).then_some(out)
    });
    let out = failing.expect("some seed fails");
    assert!(out.contains("FAIL"));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_qdp");
    assert_eq!(
        Command::new(bin).arg("threshold").status().unwrap().code(),
        Some(0)
    );
    assert_eq!(
        Command::new(bin)
            .args(["budget", "--p", "0"])
            .output()
            .unwrap()
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        Command::new(bin)
            .arg("--nope")
            .output()
            .unwrap()
            .status
            .code(),
        Some(2)
    );
    let out = Command::new(bin)
        .args(["budget", "--gates", "2", "--qec-gates", "1"])
        .output()
        .unwrap();
    assert!(String::from_utf8_lossy(&out.stdout).contains("epsilon = 3.06657879431"));
}
