use std::process::{Command, Output};

use num_bigint::BigInt;
use serde_json::Value;

fn aea(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_aea"))
        .args(args)
        .env_remove("AEA_DEFAULT_WORD")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = aea(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    stdout(&out)
}

const U3: &str = "922375420941";
const V3: &str = "707599307587";
const F59: &str = "956722026041";
const F58: &str = "591286729879";

#[test]
fn gcd_examples() {
    assert_eq!(ok(&["gcd", U3, V3]), "1\n");
    assert_eq!(ok(&["gcd", F59, F58]), "1\n");
    assert_eq!(ok(&["gcd", "0", "0"]), "0\n");
    assert_eq!(ok(&["gcd", "0x10", "24"]), "8\n");
}

#[test]
fn gcd_bezout_coefficients_check_out() {
    let text = ok(&["gcd", "12", "8", "--bezout"]);
    assert_eq!(text, "4\nx = 1\ny = -1\n");

    let json: Value =
        serde_json::from_str(&ok(&["gcd", F59, F58, "--bezout", "--format", "json"])).unwrap();
    assert_eq!(json["g"], "1");
    let x: BigInt = json["bezout"][0].as_str().unwrap().parse().unwrap();
    let y: BigInt = json["bezout"][1].as_str().unwrap().parse().unwrap();
    let u: BigInt = F59.parse().unwrap();
    let v: BigInt = F58.parse().unwrap();
    assert_eq!(x * u + y * v, BigInt::from(1));
}

#[test]
fn hgcd_worked_examples() {
    assert_eq!(
        ok(&["hgcd", U3, V3, "--base", "binary:20", "--small"]),
        "matrix [[-62729, 81769], [353414, -460685]]\nreduced 1873414 725479\n"
    );
    let json: Value = serde_json::from_str(&ok(&[
        "hgcd",
        F59,
        F58,
        "--base",
        "decimal:6",
        "--small",
        "--format",
        "json",
    ]))
    .unwrap();
    assert_eq!(
        json["matrix"],
        serde_json::json!(["196418", "-317811", "-317811", "514229"])
    );
    assert_eq!(json["reduced"], serde_json::json!(["1346269", "832040"]));
}

#[test]
fn hgcd_small_v_is_identity() {
    assert_eq!(
        ok(&["hgcd", U3, "1000", "--base", "binary:20", "--small"]),
        format!("matrix [[1, 0], [0, 1]]\nreduced {U3} 1000\n")
    );
}

#[test]
fn default_word_comes_from_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_aea"))
        .args(["hgcd", U3, V3, "--small"])
        .env("AEA_DEFAULT_WORD", "20")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("matrix [[-62729, 81769], [353414, -460685]]"));
}

#[test]
fn input_from_file() {
    let path = std::env::temp_dir().join(format!("aea-cli-pair-{}", std::process::id()));
    std::fs::write(&path, format!("{U3}\n{V3}\n")).unwrap();
    let p = path.to_str().unwrap();
    assert_eq!(ok(&["gcd", "--file", p]), "1\n");
    assert_eq!(aea(&["gcd", "1", "2", "--file", p]).status.code(), Some(2));
    std::fs::remove_file(path).unwrap();
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(aea(&["gcd", "12x", "5"]).status.code(), Some(2));
    assert_eq!(aea(&["gcd", "-4", "5"]).status.code(), Some(2));
    assert_eq!(aea(&["gcd", "7"]).status.code(), Some(2));
    // below the 8-word gate without --small
    assert_eq!(aea(&["hgcd", U3, V3]).status.code(), Some(2));
    assert_eq!(aea(&["hgcd", V3, U3, "--small"]).status.code(), Some(2));
    assert_eq!(
        aea(&["hgcd", U3, V3, "--base", "ternary:3"]).status.code(),
        Some(2)
    );
    assert_eq!(aea(&["bench", "--algos", "quick"]).status.code(), Some(2));
    assert_eq!(aea(&["frobnicate"]).status.code(), Some(2));
}

fn trace_lines(args: &[&str]) -> Vec<Value> {
    ok(args)
        .lines()
        .map(|l| serde_json::from_str(l).expect("one JSON object per line"))
        .collect()
}

fn matrix_of(v: &Value) -> [BigInt; 4] {
    let e = |i: usize| v["matrix"][i].as_str().unwrap().parse::<BigInt>().unwrap();
    [e(0), e(1), e(2), e(3)]
}

fn mul(x: &[BigInt; 4], y: &[BigInt; 4]) -> [BigInt; 4] {
    [
        &x[0] * &y[0] + &x[1] * &y[2],
        &x[0] * &y[1] + &x[1] * &y[3],
        &x[2] * &y[0] + &x[3] * &y[2],
        &x[2] * &y[1] + &x[3] * &y[3],
    ]
}

#[test]
fn trace_of_the_decimal_example() {
    let lines = trace_lines(&["trace", F59, F58, "--base", "decimal:6", "--small"]);
    let kinds: Vec<&str> = lines.iter().map(|l| l["kind"].as_str().unwrap()).collect();
    let pos = |k: &str, nth: usize| {
        kinds
            .iter()
            .enumerate()
            .filter(|(_, x)| **x == k)
            .nth(nth)
            .map(|(i, _)| i)
            .unwrap()
    };
    assert!(pos("ile_call", 0) < pos("ile_call", 1));
    assert!(pos("ile_call", 1) < pos("merge", 0));
    assert!(pos("merge", 0) < pos("squeeze", 0));
    assert_eq!(
        lines[pos("ile_call", 0)]["window"],
        serde_json::json!([1, 2])
    );

    let summary = lines.last().unwrap();
    assert_eq!(summary["kind"], "summary");
    assert_eq!(summary["prefix_violations"], 0);
    assert_eq!(
        summary["events"].as_u64().unwrap() as usize,
        lines.len() - 1
    );

    let one = [1, 0, 0, 1].map(BigInt::from);
    let product = lines
        .iter()
        .filter(|l| {
            matches!(
                l["kind"].as_str(),
                Some("ile_call" | "sign_flip" | "irregular" | "squeeze")
            )
        })
        .fold(one, |acc, l| mul(&matrix_of(l), &acc));
    assert_eq!(product, matrix_of(summary));
}

#[test]
fn trace_prefixes_shrink_v_at_merges() {
    let mut u = String::from("0x");
    let mut v = String::from("0x");
    for i in 0..256 {
        u.push(char::from_digit((i * 7 + 3) % 16, 16).unwrap());
        v.push(char::from_digit((i * 11 + 5) % 16, 16).unwrap());
    }
    u.replace_range(2..3, "f");
    let lines = trace_lines(&["trace", &u, &v]);
    let ub: BigInt = BigInt::parse_bytes(&u.as_bytes()[2..], 16).unwrap();
    let vb: BigInt = BigInt::parse_bytes(&v.as_bytes()[2..], 16).unwrap();
    let mut cum = [1, 0, 0, 1].map(BigInt::from);
    let mut last = vb.bits();
    let mut cuts = 0;
    for (k, l) in lines.iter().enumerate() {
        let kind = l["kind"].as_str().unwrap();
        if matches!(kind, "ile_call" | "sign_flip" | "irregular" | "squeeze") {
            cum = mul(&matrix_of(l), &cum);
        }
        let last_merge_of_step = kind == "merge"
            && lines[k + 1..]
                .iter()
                .take_while(|n| n["step"] == l["step"])
                .all(|n| n["kind"] != "merge");
        if last_merge_of_step {
            let vv = &cum[2] * &ub + &cum[3] * &vb;
            assert!(vv.bits() < last, "V did not shrink at step {}", l["step"]);
            last = vv.bits();
            cuts += 1;
        }
    }
    assert!(cuts > 0);
}

#[test]
fn identity_trace_has_no_ile_calls() {
    let lines = trace_lines(&["trace", U3, "1000", "--base", "binary:20", "--small"]);
    assert!(lines.iter().all(|l| l["kind"] != "ile_call"));
    assert_eq!(lines.last().unwrap()["kind"], "summary");
}

/// CSV rows without the timing columns.
fn bench_counts(args: &[&str]) -> Vec<String> {
    ok(args)
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            format!("{},{},{},{}", f[0], f[1], f[2], f[4])
        })
        .collect()
}

#[test]
fn bench_is_deterministic() {
    let args = [
        "bench", "--seed", "42", "--bits", "4096", "--count", "10", "--trials", "1",
    ];
    let first = bench_counts(&args);
    assert_eq!(first.len(), 4);
    assert_eq!(first, bench_counts(&args));
    let header = ok(&args).lines().next().unwrap().to_string();
    assert_eq!(header, "algorithm,bits,trials,median_ns,divisions,ratio");
}

#[test]
fn bench_fibonacci_divisions() {
    let rows = bench_counts(&[
        "bench",
        "--input",
        "fibonacci",
        "--bits",
        "2000,8000",
        "--count",
        "1",
        "--trials",
        "1",
        "--algos",
        "aea,euclid",
    ]);
    let divisions = |row: &String| row.rsplit(',').next().unwrap().parse::<u64>().unwrap();
    for pair in rows.chunks(2) {
        assert!(pair[0].starts_with("aea") && pair[1].starts_with("euclid"));
        assert!(divisions(&pair[0]) <= divisions(&pair[1]), "{pair:?}");
    }
}

#[test]
fn bench_json_rows() {
    let json: Value = serde_json::from_str(&ok(&[
        "bench", "--bits", "512,1024", "--count", "2", "--trials", "1", "--format", "json",
    ]))
    .unwrap();
    let rows = json.as_array().unwrap();
    assert_eq!(rows.len(), 8);
    assert!(rows[0]["ratio"].is_null());
    assert!(rows[4]["ratio"].is_number());
}

#[test]
fn selftest_passes() {
    let out = aea(&["selftest", "--trials", "20"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
}

#[test]
fn selftest_names_the_corrupted_check() {
    let out = aea(&[
        "selftest",
        "--trials",
        "5",
        "--inject-fault",
        "binary-example replay",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("binary-example replay"));
    assert!(stdout(&out).contains("FAIL  binary-example replay"));
}
