use std::process::{Command, Output};

fn mcvuln(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mcvuln"))
        .args(args)
        .env_remove("MCVULN_WORKERS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn documented_outputs() {
    let o = mcvuln(&["analytic", "two-thread", "--model", "wo"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["value"], "7/54");
    assert!(stdout(&o).contains(r#""float":0.129629629630"#));
    for key in ["command", "params", "seed", "version"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }

    let o = mcvuln(&["analytic", "disjoint", "--lengths", "2,2"]);
    assert!(stdout(&o).contains(r#""value":"1/6""#));
}

#[test]
fn exit_codes() {
    assert_eq!(
        mcvuln(&["simulate", "--model", "sc", "--threads", "2", "--samples", "0"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(mcvuln(&["simulate", "--model", "xyz"]).status.code(), Some(1));
    assert_eq!(
        mcvuln(&["analytic", "disjoint", "--lengths", "1,1,1,1,1,1,1,1,1,1,1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        mcvuln(&["oracle", "window", "--model", "tso", "--program-len", "20"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        mcvuln(&["oracle", "disjoint", "--lengths", "1,1,1,1,1,1", "--cap", "3"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(mcvuln(&["--version"]).status.code(), Some(0));
}

#[test]
fn simulate_is_byte_identical_across_workers() {
    let run = |w: &str| {
        mcvuln(&[
            "simulate",
            "--model",
            "pso",
            "--threads",
            "3",
            "--samples",
            "100000",
            "--workers",
            w,
        ])
    };
    let base = run("1");
    assert!(base.status.success());
    for w in ["4", "16"] {
        assert_eq!(run(w).stdout, base.stdout);
    }
    let env = Command::new(env!("CARGO_BIN_EXE_mcvuln"))
        .args([
            "simulate",
            "--model",
            "pso",
            "--threads",
            "3",
            "--samples",
            "100000",
        ])
        .env("MCVULN_WORKERS", "2")
        .output()
        .unwrap();
    assert_eq!(env.stdout, base.stdout);
}

#[test]
fn sweep_csv_columns() {
    let o = mcvuln(&[
        "sweep",
        "--models",
        "sc,tso,pso,wo",
        "--threads",
        "2..3",
        "--samples",
        "2000",
        "--format",
        "csv",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("model,n,m,samples,seed,pr_a_mean,pr_a_lo95,pr_a_hi95")
    );
    assert_eq!(lines.count(), 8);
}

#[test]
fn oracle_commands() {
    let o = mcvuln(&["oracle", "window", "--model", "tso", "--program-len", "1"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["rows"][0]["value"], "3/4");
    assert_eq!(v["rows"][1]["value"], "1/4");
    let o = mcvuln(&["oracle", "disjoint", "--lengths", "2,2", "--cap", "20"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["lower"]["float"].as_f64().unwrap() <= 1.0 / 6.0);
    assert!(v["upper"]["float"].as_f64().unwrap() >= 1.0 / 6.0);
}

#[test]
fn verify_passes() {
    let o = mcvuln(&["verify", "--samples", "200000", "--oracle-len", "8"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], true, "{}", stdout(&o));
    assert_eq!(o.status.code(), Some(0));
}
