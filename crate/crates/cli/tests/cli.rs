use std::process::{Command, Output};

use siegel_cli::{Report, BENCH_CSV_HEADER};

fn siegel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_siegel"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn zeta_two_with_pcf() {
    let out = siegel(&["zeta", "--s", "2", "--method", "pcf", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let r: Report = serde_json::from_str(&stdout(&out)).unwrap();
    assert!((r.re - 1.644_934_066_8).abs() < 1e-10, "{r:?}");
    assert!(r.im.abs() < 1e-10);
    assert_eq!(r.method, "pcf");
    assert!(r.converged);
}

#[test]
fn json_has_stable_keys_and_round_trips() {
    let out = siegel(&["zeta", "--s", "2", "--method", "classical", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let raw: serde_json::Value = serde_json::from_str(&text).unwrap();
    let mut keys: Vec<_> = raw.as_object().unwrap().keys().cloned().collect();
    keys.sort();
    assert_eq!(keys, ["abs_err", "converged", "im", "method", "nodes", "re"]);
    let report: Report = serde_json::from_str(&text).unwrap();
    let again: Report = serde_json::from_str(&serde_json::to_string(&report).unwrap()).unwrap();
    assert_eq!(again, report);
    assert_eq!(serde_json::to_string(&report).unwrap(), text.trim_end());
}

#[test]
fn pole_is_a_domain_error() {
    let out = siegel(&["zeta", "--s", "1"]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("pole"));
}

#[test]
fn domain_errors_exit_three() {
    assert_eq!(code(&siegel(&["pcf", "--a", "-10", "--z", "1"])), 3);
    assert_eq!(code(&siegel(&["mordell", "--x", "0", "--tau", "2", "--route", "closed"])), 3);
    assert_eq!(code(&siegel(&["mordell", "--x", "0", "--tau", "0.3+i", "--route", "closed"])), 3);
    assert_eq!(code(&siegel(&["mordell", "--x", "0", "--tau", "-1"])), 3);
    assert_eq!(code(&siegel(&["zeta", "--s", "0.5+55i"])), 3);
}

#[test]
fn no_convergence_exits_two() {
    let out = siegel(&["zeta", "--s", "0.5+45i", "--method", "pcf"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("did not converge"));
}

#[test]
fn usage_errors_exit_sixty_four() {
    for args in [
        &["zeta", "--s", "abc"][..],
        &["zeta", "--s", "2", "--tol", "1e-2"],
        &["zeta", "--s", "2", "--tol", "1e-14"],
        &["zeta", "--s", "2", "--method", "fast"],
        &["zeta"],
        &["frobnicate"],
        &[],
        &["verify", "--only", "no.such.check"],
    ] {
        assert_eq!(code(&siegel(args)), 64, "{args:?}");
    }
}

#[test]
fn help_exits_zero() {
    let out = siegel(&["--help"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("zeta"));
}

#[test]
fn complex_literals_on_the_command_line() {
    let out = siegel(&["pcf", "--a", "0.5", "--z", "2", "--format", "json"]);
    let r: Report = serde_json::from_str(&stdout(&out)).unwrap();
    // mpmath pcfu(0.5, 2)
    assert!((r.re - 0.155_013_076_597_330_83).abs() < 1e-12);

    let out = siegel(&["zeta", "--s", "-0.3+2i", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let out = siegel(&["mordell", "--x", "1.5-0.2i", "--tau", "3i+1", "--format", "json"]);
    assert_eq!(code(&out), 64, "imaginary part must come last");
}

#[test]
fn mordell_routes_agree() {
    let value = |route: &str| -> Report {
        let out = siegel(&["mordell", "--x", "0.3", "--tau", "0.4", "--route", route, "--format", "json"]);
        assert_eq!(code(&out), 0, "{route}");
        serde_json::from_str(&stdout(&out)).unwrap()
    };
    let closed = value("closed");
    for route in ["direct", "transform"] {
        let r = value(route);
        assert!((r.re - closed.re).hypot(r.im - closed.im) < 1e-9, "{route}");
    }
}

#[test]
fn csv_report() {
    let out = siegel(&["zeta", "--s", "3", "--format", "csv"]);
    let text = stdout(&out);
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines[0], "re,im,abs_err,nodes,method,converged");
    let re: f64 = lines[1].split(',').next().unwrap().parse().unwrap();
    // mpmath zeta(3)
    assert!((re - 1.202_056_903_159_594_3).abs() < 1e-10);
}

#[test]
fn verify_single_row() {
    let out = siegel(&["verify", "--only", "mordell.functional_equation", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[1].starts_with("mordell.functional_equation,"));
    assert!(lines[1].ends_with(",true"));
}

#[test]
fn verify_failure_exits_one() {
    // the first-zero residual is about 2e-12
    let out = siegel(&["verify", "--only", "zeta.first_zero", "--tol", "1e-13"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("FAIL"));
}

#[test]
fn looser_tolerance_never_passes_fewer_checks() {
    let passed = |tol: &str| {
        let out = siegel(&["verify", "--only", "pcf,mordell", "--tol", tol, "--format", "json"]);
        let rows: Vec<serde_json::Value> = serde_json::from_str(&stdout(&out)).unwrap();
        rows.iter().filter(|r| r["passed"] == true).count()
    };
    let strict = passed("1e-13");
    let loose = passed("1e-3");
    assert!(loose >= strict);
    assert!(loose > strict, "1e-13 should fail at least one of these checks");
}

#[test]
fn sampled_checks_are_reproducible() {
    let run = |seed: &str| stdout(&siegel(&["verify", "--only", "mordell.functional_equation_sampled", "--seed", seed, "--format", "json"]));
    assert_eq!(run("7"), run("7"));
}

#[test]
fn bench_csv() {
    let out = siegel(&["bench"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.ends_with('\n'));
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(BENCH_CSV_HEADER));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|f| f.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 5);
    let speedup = |r: &[f64]| r[2] / r[3];
    // τ = 1 is self-dual
    assert_eq!(rows[0][0], 1.0);
    assert!(rows[0][6] <= 1e-9);
    assert!(speedup(&rows[0]) < 3.0 && speedup(&rows[0]) > 1.0 / 3.0);
    assert_eq!(rows[4][0], 0.01);
    assert!(speedup(&rows[4]) >= 5.0);
    assert!(speedup(&rows[3]) <= speedup(&rows[4]));
    for r in &rows {
        assert!(r[6] <= 1e-9, "{r:?}");
        assert!(r[4] > 0.0 && r[5] > 0.0);
    }
}

#[test]
fn bench_custom_grid() {
    let out = siegel(&["bench", "--taus", "0.5,0.2+0.1i", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let rows: Vec<serde_json::Value> = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[1]["tau_im"], 0.1);
}

#[test]
fn bench_failure_exits_two() {
    assert_eq!(code(&siegel(&["bench", "--taus", "0.0001"])), 2);
}
