use std::process::{Command, Output};

use efrac_core::Rational;
use serde_json::Value;

fn efrac(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_efrac"))
        .args(args)
        .env_remove("EFRAC_ORACLE_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

/// Every string leaf written in rational syntax must re-parse and print back unchanged.
fn check_rational_leaves(v: &Value, seen: &mut usize) {
    match v {
        Value::String(s) => {
            let body = s.strip_prefix('-').unwrap_or(s);
            let looks_rational = !body.is_empty()
                && body.split('/').count() <= 2
                && body.split('/').all(|p| !p.is_empty() && p.bytes().all(|b| b.is_ascii_digit()));
            if looks_rational {
                let r: Rational = s.parse().unwrap();
                assert_eq!(&r.to_string(), s, "not in reduced form");
                *seen += 1;
            }
        }
        Value::Array(items) => items.iter().for_each(|i| check_rational_leaves(i, seen)),
        Value::Object(map) => map.values().for_each(|i| check_rational_leaves(i, seen)),
        _ => {}
    }
}

#[test]
fn greedy_text() {
    let out = efrac(&["greedy", "5/6", "--format", "text"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "2 3\n");
}

#[test]
fn enumerate_csv() {
    let out = efrac(&["enumerate", "--sum", "1", "--terms", "3", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "2,3,6\n2,4,4\n3,3,3\n");
}

#[test]
fn split_at_position() {
    let out = efrac(&["split", "2,3,6", "--at", "3"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "2 3 7 42\n");
    assert_eq!(code(&efrac(&["split", "2,3,6", "--at", "4"])), 1);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&efrac(&["gap", "--delta", "-2"])), 1);
    assert_eq!(code(&efrac(&["gap", "--delta", "x/y"])), 1);
    assert_eq!(code(&efrac(&["no-such-command"])), 1);
    assert_eq!(code(&efrac(&["enumerate", "--sum", "1"])), 1);
    assert_eq!(code(&efrac(&["lcm-bound", "--delta", "-1/2"])), 1);
    assert_eq!(code(&efrac(&["sylvester", "--p", "2", "--q", "1", "--format", "csv"])), 1);
    assert_eq!(code(&efrac(&["oracle", "--k-max", "2", "--delta-list", "0", "--q-mode", "sometimes"])), 1);
    let err = efrac(&["gap", "--delta", "-2"]);
    assert!(!err.stderr.is_empty());
    assert!(err.stdout.is_empty());
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(code(&efrac(&["--help"])), 0);
    let out = efrac(&["--version"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains(env!("CARGO_PKG_VERSION")));
}

#[test]
fn negative_deltas_are_accepted() {
    let out = efrac(&["gap", "--delta", "-1/2", "--k", "3"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("sharp_sum_bound: 3\n"));
}

#[test]
fn oracle_exit_codes() {
    let pass = efrac(&["oracle", "--k-max", "3", "--delta-list", "-1,0,1/2,2"]);
    assert_eq!(code(&pass), 0);
    assert!(stdout(&pass).starts_with("PASS"));

    let starved = efrac(&["oracle", "--k-max", "5", "--delta-list", "3", "--budget", "10"]);
    assert_eq!(code(&starved), 2);

    let via_env = Command::new(env!("CARGO_BIN_EXE_efrac"))
        .args(["oracle", "--k-max", "5", "--delta-list", "3"])
        .env("EFRAC_ORACLE_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(code(&via_env), 2);
}

#[test]
fn json_round_trips() {
    let commands: &[&[&str]] = &[
        &["greedy", "7/15"],
        &["split", "2 3 6", "--at", "1"],
        &["enumerate", "--sum", "1", "--terms", "3"],
        &["gap", "--delta", "3/2", "--k", "4"],
        &["lcm-bound", "--delta", "4/3"],
        &["extremal", "--kind", "gap", "--k", "5", "--delta", "3"],
        &["extremal", "--kind", "lcm", "--k", "1", "--delta", "3"],
        &["sylvester", "--p", "6", "--q", "3", "--table"],
        &["oracle", "--k-max", "3", "--delta-list", "-1/2,1/3,1"],
        &["geometry", "--dim", "2", "--coeffs", "m:2,m:3,m:7,one", "--t", "1/2"],
    ];
    for args in commands {
        let mut full = args.to_vec();
        full.extend(["--format", "json"]);
        let out = efrac(&full);
        assert_eq!(code(&out), 0, "{args:?}");
        let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
        assert_eq!(v["command"], args[0]);
        assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
        assert!(v.get("inputs").is_some() && v.get("result").is_some());
        let mut seen = 0;
        check_rational_leaves(&v, &mut seen);
        assert!(seen > 0, "{args:?}");
        // Re-serializing the parsed value reproduces the same document.
        assert_eq!(serde_json::to_string_pretty(&v).unwrap() + "\n", stdout(&out));
    }
}

#[test]
fn big_values_are_strings() {
    let out = efrac(&["sylvester", "--p", "8", "--q", "1", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["result"]["u"], "113423713055421844361000442");
    assert_eq!(v["result"]["t"], "113423713055421844361000443");
}

#[test]
fn output_is_byte_identical_across_runs() {
    for args in [
        &["oracle", "--k-max", "4", "--delta-list", "-1,0,1/3,3/2,2", "--format", "json"][..],
        &["enumerate", "--sum", "3/2", "--terms", "4", "--format", "json"],
        &["geometry", "--dim", "3", "--coeffs", "m:2,m:2,one"],
    ] {
        let a = efrac(args);
        let b = efrac(args);
        assert_eq!(code(&a), code(&b));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn timing_only_when_asked() {
    let plain = stdout(&efrac(&["oracle", "--k-max", "2", "--delta-list", "1", "--format", "json"]));
    assert!(!plain.contains("millis"));
    let timed = stdout(&efrac(&["oracle", "--k-max", "2", "--delta-list", "1", "--format", "json", "--timing"]));
    assert!(timed.contains("millis"));
}
