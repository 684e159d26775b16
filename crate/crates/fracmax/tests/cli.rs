use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fracmax(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fracmax"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env("FRACMAX_LOG", "info")
        .output()
        .expect("binary runs")
}

fn config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs").join(name)
}

fn write_config(dir: &Path, body: &str) -> PathBuf {
    let p = dir.join("run.toml");
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn kernel_suite_passes_on_defaults() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let o = fracmax(&["verify", "--suite", "kernels"], &out);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let residuals = std::fs::read_to_string(out.join("kernels.csv")).unwrap();
    assert_eq!(residuals.lines().count(), 1 + 9 * 4 * 4);
    let verify = std::fs::read_to_string(out.join("verify.csv")).unwrap();
    assert!(verify.ends_with("# overall=PASS\n"));
    assert!(std::fs::read_to_string(out.join("summary.txt"))
        .unwrap()
        .contains("passed = true"));
    assert!(std::fs::read_to_string(out.join("fracmax.log"))
        .unwrap()
        .contains("suite kernels"));
}

#[test]
fn missing_required_field_exits_2_without_output() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "[problem]\nintervals = 8\na = \"1\"\noperator = { kind = \"single\", alpha = 0.5 }\nbc = { kind = \"periodic\" }\n",
    );
    let out = tmp.path().join("out");
    let o = fracmax(&["solve", "--config", cfg.to_str().unwrap()], &out);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("steps") && err.contains("line"), "{err}");
    assert!(!out.exists());
}

#[test]
fn usage_errors_exit_2() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    assert_eq!(fracmax(&["verify", "--suite", "nope"], &out).status.code(), Some(2));
    assert_eq!(fracmax(&["verify", "--tol", "-1"], &out).status.code(), Some(2));
    assert_eq!(fracmax(&["frobnicate"], &out).status.code(), Some(2));
    assert_eq!(fracmax(&["solve"], &out).status.code(), Some(2));
    let bad = write_config(tmp.path(), "[problem]\nintervals = 8\nsteps = 4\na = \"-1\"\noperator = { kind = \"single\", alpha = 0.5 }\nbc = { kind = \"dirichlet\" }\n");
    assert_eq!(
        fracmax(&["solve", "--config", bad.to_str().unwrap()], &out)
            .status
            .code(),
        Some(2)
    );
    assert!(!out.exists());
}

#[test]
fn solve_writes_time_rows_and_sidecar() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let o = fracmax(
        &["solve", "--config", config("manufactured.toml").to_str().unwrap()],
        &out,
    );
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(out.join("solution.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 1 + 65, "header plus N + 1 rows");
    assert!(lines.iter().all(|l| l.split(',').count() == 64 + 2));
    let meta = std::fs::read_to_string(out.join("solution.meta")).unwrap();
    let err: f64 = meta
        .lines()
        .find_map(|l| l.strip_prefix("max_error = "))
        .unwrap()
        .parse()
        .unwrap();
    assert!(err < 2e-3, "{err}");
}

#[test]
fn robin_multiterm_problem_solves_nonpositive() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let o = fracmax(
        &["solve", "--config", config("robin-reaction.toml").to_str().unwrap()],
        &out,
    );
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(out.join("solution.csv")).unwrap();
    for line in csv.lines().skip(1) {
        for v in line.split(',').skip(1) {
            assert!(v.parse::<f64>().unwrap() <= 1e-12, "{v}");
        }
    }
}

#[test]
fn failed_check_exits_1() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    // The evaluators agree to ~1e-9, never to zero.
    let o = fracmax(&["caputo", "--tol", "0"], &out);
    assert_eq!(o.status.code(), Some(1));
    assert!(std::fs::read_to_string(out.join("summary.txt"))
        .unwrap()
        .contains("status = fail"));
    assert!(out.join("caputo.csv").exists());
}

#[test]
fn quick_verify_and_sweep() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = config("quick-verify.toml");
    let out = tmp.path().join("v");
    let o = fracmax(&["verify", "--config", cfg.to_str().unwrap(), "--jobs", "2"], &out);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let verify = std::fs::read_to_string(out.join("verify.csv")).unwrap();
    for suite in [
        "maxprinciple",
        "comparison",
        "multiterm",
        "varorder",
        "sector",
        "lemma",
        "thresholds",
    ] {
        assert!(verify.contains(&format!("# suite={suite} ")), "{suite}");
    }
    assert!(verify
        .lines()
        .skip(1)
        .filter(|l| !l.starts_with('#'))
        .all(|l| l.split(',').count() == 10));

    let out = tmp.path().join("s");
    let o = fracmax(&["sweep", "--config", cfg.to_str().unwrap()], &out);
    assert_eq!(o.status.code(), Some(0));
    let conv = std::fs::read_to_string(out.join("convergence.csv")).unwrap();
    assert_eq!(conv.lines().count(), 1 + 2 * 3);
    let probe = std::fs::read_to_string(out.join("threshold.csv")).unwrap();
    assert_eq!(probe.lines().filter(|l| !l.starts_with('#')).count(), 1 + 8 * 4);
}

#[test]
fn seed_changes_the_instances() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "[sweep]\nseeds = 2\nalphas = [0.5]\nlambdas = [1.0]\nbcs = [\"robin\"]\nintervals = 8\nsteps = 8\n",
    );
    let run = |seed: &str, dir: &str| {
        let out = tmp.path().join(dir);
        let o = fracmax(
            &[
                "verify",
                "--suite",
                "maxprinciple",
                "--config",
                cfg.to_str().unwrap(),
                "--seed",
                seed,
            ],
            &out,
        );
        assert_eq!(o.status.code(), Some(0));
        std::fs::read_to_string(out.join("verify.csv")).unwrap()
    };
    let (a, b) = (run("1", "a"), run("2", "b"));
    assert_ne!(a, b);
    assert!(a.contains("maxprinciple,single(alpha=0.5) lambda=1 robin,1,true"));
}
