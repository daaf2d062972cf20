use std::path::Path;
use std::process::{Command, Output};

use pseudospec_harness::THREADS_ENV;

fn pseudospec(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_pseudospec"));
    cmd.args(args).env_remove(THREADS_ENV);
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn list_prints_every_id() {
    let out = pseudospec(&["list"], &[]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 10);
    assert!(text.lines().any(|l| l.starts_with("riemann_b")));
}

#[test]
fn run_writes_the_configured_output() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("eig.csv");
    let cfg = write(
        dir.path(),
        "e.toml",
        &format!("experiment = \"eigen_bn\"\nn = 8\noutput = {:?}\n", csv),
    );
    let out = pseudospec(&["run", &cfg], &[(THREADS_ENV, "2")]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("N,k,eigenvalue\n8,1,"));

    let other = dir.path().join("other.csv");
    let out = pseudospec(&["run", &cfg, "--output", other.to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(other).unwrap(), text);
}

#[test]
fn run_without_output_prints_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "e.toml", "experiment = \"eigen_bn\"\nn = 8\n");
    let out = pseudospec(&["run", &cfg], &[]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 7);
}

#[test]
fn validation_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad_method = write(
        dir.path(),
        "m.toml",
        "experiment = \"problem1\"\nmethod = \"fem\"\n",
    );
    let bad_key = write(
        dir.path(),
        "k.toml",
        "experiment = \"problem1\"\nspeed = 1\n",
    );
    let good = write(dir.path(), "g.toml", "experiment = \"eigen_bn\"\nn = 8\n");
    for (args, env) in [
        (vec!["run", bad_method.as_str()], vec![]),
        (vec!["run", bad_key.as_str()], vec![]),
        (vec!["run", "/nonexistent/config.toml"], vec![]),
        (vec!["run", good.as_str()], vec![(THREADS_ENV, "zero")]),
    ] {
        let out = pseudospec(&args, &env);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
    }
    let stderr = String::from_utf8(pseudospec(&["run", &bad_key], &[]).stderr).unwrap();
    assert!(stderr.contains("line 2"), "{stderr}");
}

#[test]
fn numerical_failure_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let text = r#"
experiment = "custom"
n = 32
dt = 5.0
t_end = 5.0

[stepper]
max_iterations = 2

[problem]
a = 0.01
beta = -1.0
gamma = 5.0
flux = "burgers"
initial = "sin_pi"
"#;
    let cfg = write(dir.path(), "c.toml", text);
    let out = pseudospec(&["run", &cfg], &[]);
    assert_eq!(
        out.status.code(),
        Some(2),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn goldens_check_passes_on_the_stored_files() {
    let out = pseudospec(&["goldens", "--check"], &[]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_string_lossy().into_owned();
    assert_eq!(
        pseudospec(&["goldens", "--check", "--dir", &d], &[])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        pseudospec(&["goldens", "--dir", &d], &[]).status.code(),
        Some(0)
    );
    assert_eq!(
        pseudospec(&["goldens", "--check", "--dir", &d], &[])
            .status
            .code(),
        Some(0)
    );
}
