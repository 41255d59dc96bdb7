use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn linbandit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_linbandit"))
        .args(args)
        .env("RUST_LOG", "error")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

const SMALL: &str = r#"
dim = 3
n_arms = 4
horizon = 40
n_runs = 2
base_seed = 1
noise_sd = 0.5
lambda = 1.0
nu = 0.5
delta = 0.05
gamma_grid = [0.6, 0.9]
output_dir = "unused"

[family]
kind = "p2"

[[policy]]
kind = "lints"
inference = "exact"

[[policy]]
kind = "linbucb"
inference = "approximate"
gamma = 0.9
"#;

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("exp.toml");
    fs::write(
        &path,
        text.replace("\"unused\"", &format!("{:?}", dir.join("out").display().to_string())),
    )
    .unwrap();
    path.display().to_string()
}

#[test]
fn run_writes_all_outputs_and_replays_from_manifest() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), SMALL);
    let o = linbandit(&["run", &cfg]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = tmp.path().join("out");
    for f in ["traces.csv", "aggregate.csv", "regret.svg", "manifest.toml"] {
        assert!(out.join(f).exists(), "{f} missing");
    }
    let traces = fs::read_to_string(out.join("traces.csv")).unwrap();
    assert!(traces.starts_with("step,instant_regret,cum_regret,policy,seed\n"));
    assert_eq!(traces.lines().count(), 1 + 40 * 2 * 2);
    let agg = fs::read_to_string(out.join("aggregate.csv")).unwrap();
    assert!(agg.starts_with("step,mean,stderr,policy\n"));
    assert!(stdout(&o).contains("LinBUCB_Approximate"));

    let replay = tmp.path().join("replay");
    let o = linbandit(&[
        "run",
        out.join("manifest.toml").to_str().unwrap(),
        "--output-dir",
        replay.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert_eq!(fs::read(replay.join("traces.csv")).unwrap(), traces.as_bytes());
    assert_eq!(fs::read_to_string(replay.join("aggregate.csv")).unwrap(), agg);
}

#[test]
fn unknown_key_is_rejected_before_running() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), &SMALL.replace("n_runs = 2", "n_runs = 2\nruns = 3"));
    let o = linbandit(&["run", &cfg]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("runs"));
    assert!(!tmp.path().join("out").join("traces.csv").exists());
}

#[test]
fn unwritable_output_fails_up_front() {
    let tmp = tempfile::tempdir().unwrap();
    let blocker = tmp.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let cfg = write_config(tmp.path(), SMALL);
    let o = linbandit(&["run", &cfg, "--output-dir", blocker.join("sub").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn sweep_writes_table() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), SMALL);
    let o = linbandit(&["sweep-gamma", &cfg, "--grid", "0.5,0.7,0.95"]);
    assert!(o.status.success());
    let csv = fs::read_to_string(tmp.path().join("out/sweep.csv")).unwrap();
    assert!(csv.starts_with("gamma,policy,mean_final,stderr_final\n"));
    assert_eq!(csv.lines().count(), 4);
    // Without --grid the config's grid is used.
    let o = linbandit(&["sweep-gamma", &cfg]);
    assert!(o.status.success());
    assert_eq!(
        fs::read_to_string(tmp.path().join("out/sweep.csv"))
            .unwrap()
            .lines()
            .count(),
        3
    );
}

#[test]
fn verify_quick_suites_pass() {
    for suite in ["divergence", "concentration", "quantile-shift"] {
        let o = linbandit(&["verify", "--suite", suite, "--quick"]);
        assert!(o.status.success(), "{suite}: {}", stdout(&o));
        assert!(stdout(&o).contains("PASS"));
    }
    assert!(!linbandit(&["verify", "--suite", "nonsense"]).status.success());
}

#[test]
fn bounds_preset_prints_table() {
    let o = linbandit(&["bounds", "--preset", "default"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("kappa2=0.020976"));
    assert!(s.contains("LinBUCB_Approximate TypeII"));
    assert_eq!(linbandit(&["bounds", "--preset", "nope"]).status.code(), Some(2));
}

#[test]
fn adversarial_episode_reports_budget() {
    let o = linbandit(&[
        "adversarial",
        "--policy",
        "lints",
        "--alpha",
        "2",
        "--epsilon",
        "0.1",
        "--horizon",
        "60",
        "--runs",
        "2",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let s = stdout(&o);
    assert!(s.contains("r = 1.100000"));
    assert_eq!(s.matches("budget held").count(), 2);
    // Below the feasibility threshold for the quantile adversary.
    let o = linbandit(&[
        "adversarial",
        "--policy",
        "linbucb",
        "--alpha",
        "2",
        "--epsilon",
        "0.01",
        "--horizon",
        "10",
    ]);
    assert_eq!(o.status.code(), Some(2));
}
