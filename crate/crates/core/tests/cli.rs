use std::path::Path;
use std::process::{Command, Output};

fn gather(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gather"))
        .args(args)
        .output()
        .unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn bounds_prints_every_report_field() {
    let out = gather(&["bounds", "--n", "4", "--delta", "0.1", "--dmax", "5"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    for key in [
        "n",
        "delta",
        "d_max0",
        "alpha_max",
        "move_prob_lb",
        "theta_s_max",
        "gamma_s_min",
        "step_min",
        "shrink_min",
        "expected_intervals_ub",
    ] {
        assert!(keys.contains(&key), "missing {key}");
    }
    assert_eq!(v["n"], 4);
    assert!((v["alpha_max"].as_f64().unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    assert!((v["shrink_min"].as_f64().unwrap() - 0.001_998_3).abs() < 1e-7);
}

#[test]
fn invalid_arguments_exit_with_two() {
    assert_eq!(
        gather(&["bounds", "--n", "1", "--delta", "0.1", "--dmax", "5"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        gather(&["bounds", "--n", "3", "--delta", "-1", "--dmax", "5"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        gather(&["sim", "--model", "sideways"]).status.code(),
        Some(2)
    );
    assert_eq!(gather(&["frobnicate"]).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let (t, s) = (dir.path().join("t.csv"), dir.path().join("s.csv"));
    let out = gather(&[
        "sim",
        "--model",
        "continuous",
        "--n",
        "3",
        "--seed",
        "1",
        "--substep",
        "0.3",
        "--trace",
        p(&t),
        "--summary",
        p(&s),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unwritable_paths_exit_with_three() {
    let out = gather(&[
        "sim",
        "--model",
        "discrete",
        "--n",
        "3",
        "--seed",
        "1",
        "--trace",
        "/nonexistent/t.csv",
        "--summary",
        "/nonexistent/s.csv",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let out = gather(&[
        "sweep",
        "--model",
        "discrete",
        "--n-list",
        "1",
        "--reps",
        "1",
        "--base-seed",
        "0",
        "--out",
        "/nonexistent/out.csv",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn discrete_sim_writes_trace_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let (t, s) = (dir.path().join("t.csv"), dir.path().join("s.csv"));
    let out = gather(&[
        "sim",
        "--model",
        "discrete",
        "--n",
        "6",
        "--spread",
        "10",
        "--seed",
        "3",
        "--record-every",
        "5",
        "--trace",
        p(&t),
        "--summary",
        p(&s),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let trace = std::fs::read_to_string(&t).unwrap();
    assert!(trace.starts_with("step,agent,x,y,heading,moved\n"));
    let steps: Vec<u64> = trace
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(steps.len() % 6, 0);
    assert_eq!(steps[0], 0);
    let summary = std::fs::read_to_string(&s).unwrap();
    let mut lines = summary.lines();
    assert_eq!(
        lines.next(),
        Some("run_id,seed,n,spread,converged_step,final_radius")
    );
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(&row[..4], &["0", "3", "6", "10"]);
    assert_eq!(row[4].parse::<u64>().unwrap(), *steps.last().unwrap());
}

#[test]
fn continuous_sim_writes_series() {
    let dir = tempfile::tempdir().unwrap();
    let (t, s, series) = (
        dir.path().join("t.csv"),
        dir.path().join("s.csv"),
        dir.path().join("l.csv"),
    );
    let out = gather(&[
        "sim",
        "--model",
        "continuous",
        "--n",
        "3",
        "--spread",
        "2",
        "--seed",
        "8",
        "--delta",
        "0.1",
        "--substep",
        "0.01",
        "--trace",
        p(&t),
        "--summary",
        p(&s),
        "--series",
        p(&series),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = std::fs::read_to_string(&series).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("interval,sec_radius,lyapunov,confined"));
    let last = text.lines().last().unwrap();
    assert!(last.ends_with(",0,true"), "{last}");
}

#[test]
fn repeated_invocations_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let run = |tag: &str| {
        let t = dir.path().join(format!("{tag}-t.csv"));
        let s = dir.path().join(format!("{tag}-s.csv"));
        let o = dir.path().join(format!("{tag}-sweep.csv"));
        let out = gather(&[
            "sim",
            "--model",
            "continuous",
            "--n",
            "4",
            "--seed",
            "12",
            "--substep",
            "0.01",
            "--trace",
            p(&t),
            "--summary",
            p(&s),
        ]);
        assert!(out.status.success());
        let out = gather(&[
            "sweep",
            "--model",
            "discrete",
            "--n-list",
            "4,8",
            "--reps",
            "3",
            "--base-seed",
            "2",
            "--spread",
            "15",
            "--out",
            p(&o),
        ]);
        assert!(out.status.success());
        [t, s, o.clone(), o.with_extension("fit.json")].map(|f| std::fs::read(f).unwrap())
    };
    assert_eq!(run("a"), run("b"));
}
