use std::fs;
use std::process::{Command, Output};

fn sppam(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sppam"))
        .args(args)
        .env_remove("SPPAM_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn discount_example() {
    let o = sppam(&[
        "theory", "--what", "discount", "--eta", "4.9", "--mu", "1", "--beta", "0.9",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("satisfied=true"), "{out}");
    let c: f64 = out
        .split_whitespace()
        .find_map(|kv| kv.strip_prefix("C="))
        .unwrap()
        .parse()
        .unwrap();
    assert!(c < 1.0);
}

#[test]
fn theory_grid_prints_one_line_per_eta() {
    let o = sppam(&[
        "theory", "--what", "gd", "--grid", "-1", "1", "0.5", "--lambda", "1,4",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 5);
}

#[test]
fn region_example_grid_is_41_by_41_and_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let paths = [dir.path().join("a.csv"), dir.path().join("b.csv")];
    for p in &paths {
        let o = sppam(&[
            "region",
            "--algo",
            "ppam",
            "--p",
            "20",
            "--kappa",
            "10",
            "--range",
            "-5",
            "5",
            "--step",
            "0.25",
            "--iters",
            "100",
            "--seed",
            "1",
            "--out",
            p.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
    }
    let a = fs::read(&paths[0]).unwrap();
    assert_eq!(a, fs::read(&paths[1]).unwrap());
    let text = String::from_utf8(a).unwrap();
    assert_eq!(
        text.lines().next(),
        Some("eta,beta,metric,empirical,theoretical,boundary")
    );
    assert_eq!(text.lines().count(), 1 + 41 * 41);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(sppam(&["region", "--bogus"]).status.code(), Some(2));
    assert_eq!(sppam(&["region"]).status.code(), Some(2));
    assert_eq!(
        sppam(&["region", "--algo", "ppam", "--step", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(sppam(&["region", "--algo", "sppam"]).status.code(), Some(2));
    assert_eq!(sppam(&["theory", "--what", "gd"]).status.code(), Some(2));
    assert_eq!(
        sppam(&["glm-bench", "--trials", "4"]).status.code(),
        Some(2)
    );
    assert_eq!(sppam(&["verify", "--only", "11"]).status.code(), Some(2));
    assert_eq!(sppam(&["nope"]).status.code(), Some(2));
}

#[test]
fn help_lists_flags() {
    let o = sppam(&["region", "--help"]);
    assert_eq!(o.status.code(), Some(0));
    let h = stdout(&o);
    for flag in [
        "--algo",
        "--p",
        "--kappa",
        "--range",
        "--step",
        "--iters",
        "--seed",
        "--out",
        "--threads",
        "--config",
    ] {
        assert!(h.contains(flag), "missing {flag}");
    }
}

#[test]
fn verify_single_check_and_negative_control() {
    let o = sppam(&["verify", "--only", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("[PASS]"));
    let o = sppam(&["verify", "--only", "1", "--golden-tau", "4.0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("[FAIL]"));
}

#[test]
fn verify_reports_every_check_and_exit_code_follows() {
    let o = sppam(&["--threads", "4", "verify", "--seed", "1"]);
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().filter(|l| l.starts_with('[')).collect();
    assert_eq!(lines.len(), 10, "{out}");
    for (i, l) in lines.iter().enumerate() {
        assert!(
            l[7..].trim_start().starts_with(&format!("{} ", i + 1)),
            "{l}"
        );
    }
    let all_pass = lines.iter().all(|l| l.starts_with("[PASS]"));
    assert_eq!(o.status.code(), Some(if all_pass { 0 } else { 1 }));
}

#[test]
fn config_file_supplies_flags_and_cli_wins() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.cfg");
    fs::write(&cfg, "# small sweep\nalgo = gd\nrange = -1 1\nstep = 0.5\n").unwrap();
    let o = sppam(&["--config", cfg.to_str().unwrap(), "region"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 1 + 25);
    let o = sppam(&["region", "--config", cfg.to_str().unwrap(), "--step", "1"]);
    assert_eq!(stdout(&o).lines().count(), 1 + 9);
}

#[test]
fn env_seed_matches_flag() {
    let flag = sppam(&["gen", "--p", "3", "--n", "4", "--seed", "3"]);
    let env = Command::new(env!("CARGO_BIN_EXE_sppam"))
        .args(["gen", "--p", "3", "--n", "4"])
        .env("SPPAM_SEED", "3")
        .output()
        .unwrap();
    assert_eq!(flag.stdout, env.stdout);
    let text = stdout(&flag);
    assert_eq!(text.lines().next(), Some("a1,a2,a3,b"));
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn glm_bench_writes_rows_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let rows = dir.path().join("rows.csv");
    let summary = dir.path().join("summary.csv");
    let o = sppam(&[
        "glm-bench",
        "--model",
        "poisson",
        "--p",
        "5",
        "--n",
        "20",
        "--kappa",
        "2",
        "--etas",
        "0.1,1",
        "--trials",
        "3",
        "--max-iters",
        "200",
        "--algos",
        "sppam,sgd",
        "--out",
        rows.to_str().unwrap(),
        "--summary",
        summary.to_str().unwrap(),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let r = fs::read_to_string(rows).unwrap();
    assert_eq!(
        r.lines().next(),
        Some("algo,eta,trial,iters,final_precision,diverged")
    );
    assert_eq!(r.lines().count(), 1 + 2 * 2 * 3);
    let s = fs::read_to_string(summary).unwrap();
    assert_eq!(s.lines().next(), Some("algo,eta,median_iters"));
    assert_eq!(s.lines().count(), 1 + 4);
}
