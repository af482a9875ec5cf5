use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use lrs_core::format::parse_rational;
use num_rational::BigRational;
use serde_json::Value;

const WIDE: &[&str] = &[
    "--q",
    "16",
    "--n",
    "40",
    "--k",
    "20",
    "--w",
    "12",
    "--u",
    "4",
    "--square-blocks",
];
const SMALL: &[&str] = &[
    "--q",
    "11",
    "--n",
    "10",
    "--k",
    "5",
    "--w",
    "4",
    "--u",
    "3",
    "--square-blocks",
];

fn lrs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lrs"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn with(base: &[&str], extra: &[&str]) -> Vec<String> {
    base.iter().chain(extra).map(|s| s.to_string()).collect()
}

fn run(cmd: &str, base: &[&str], extra: &[&str]) -> Output {
    let mut args = vec![cmd.to_string()];
    args.extend(with(base, extra));
    let refs: Vec<&str> = args.iter().map(String::as_str).collect();
    lrs(&refs)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn rat(v: &Value) -> BigRational {
    parse_rational(v.as_str().unwrap()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    dir.join(name)
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

#[test]
fn bounds_rows_are_ordered() {
    let o = run("bounds", WIDE, &["--ell", "10,1,2,4,5,8", "--format", "json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let rows = json(&o);
    let rows = rows.as_array().unwrap();
    let ells: Vec<u64> = rows.iter().map(|r| r["ell"].as_u64().unwrap()).collect();
    assert_eq!(ells, vec![1, 2, 4, 5, 8, 10]);
    for r in rows {
        let (lb, ub, opt) = (rat(&r["lbW"]), rat(&r["ubW"]), rat(&r["Wopt"]));
        assert!(lb <= opt && opt <= ub, "{r}");
    }
    assert_eq!(rows[0]["lbW"], rows[0]["ubW"]);
    let csv = run("bounds", WIDE, &["--ell", "1,2,4,5,8,10"]);
    let text = stdout(&csv);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "ell,log2_lbW,log2_ubW,log2_Wopt");
    assert_eq!(lines.len(), 7);
    assert!(lines[1].starts_with("1,458.6439,458.6439,"));
}

#[test]
fn sweep_validation() {
    let o = run("bounds", WIDE, &["--ell", "1,3"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert_eq!(err.lines().count(), 1);
    assert!(err.starts_with("error: validation: ell = 3 does not divide n = 40"));
    assert!(stdout(&o).is_empty());

    let empty = run("bounds", WIDE, &["--ell", ""]);
    assert!(empty.status.success());
    assert_eq!(stdout(&empty), "ell,log2_lbW,log2_ubW,log2_Wopt\n");

    let too_many = run(
        "bounds",
        &[
            "--q",
            "4",
            "--n",
            "8",
            "--k",
            "4",
            "--w",
            "2",
            "--u",
            "1",
            "--square-blocks",
        ],
        &["--ell", "4"],
    );
    assert_eq!(too_many.status.code(), Some(2));

    let no_m = lrs(&[
        "bounds", "--q", "16", "--n", "40", "--k", "20", "--w", "12", "--u", "4", "--ell", "2",
    ]);
    assert_eq!(no_m.status.code(), Some(2));
    let bad_q = lrs(&[
        "bounds", "--q", "12", "--n", "4", "--k", "2", "--w", "1", "--u", "1", "--m", "4", "--ell", "1",
    ]);
    assert_eq!(bad_q.status.code(), Some(2));
}

#[test]
fn lp_single_block() {
    let o = run("lp", SMALL, &["--ell", "1"]);
    assert!(o.status.success());
    let v = json(&o);
    let dist = v["distribution"].as_array().unwrap();
    assert_eq!(dist.len(), 1);
    assert_eq!(dist[0]["composition"], serde_json::json!([3]));
    assert_eq!(dist[0]["prob"], "1/1");
}

#[test]
fn lp_probabilities_and_work_factor_identity() {
    for ell in ["2", "5", "10"] {
        let v = json(&run("lp", SMALL, &["--ell", ell]));
        let total: BigRational = v["distribution"]
            .as_array()
            .unwrap()
            .iter()
            .map(|d| rat(&d["prob"]))
            .sum();
        assert_eq!(total, BigRational::from_integer(1.into()));
        let ell_n: u64 = ell.parse().unwrap();
        let cost = BigRational::from_integer((100 * ell_n.pow(3)).into());
        let wf = rat(&v["work_factor"]);
        assert_eq!(&cost / rat(&v["objective"]), wf);
        let log2 = v["log2_Wopt"].as_f64().unwrap();
        assert!((log2 - lrs_core::analysis::log2_rational(&wf)).abs() < 1e-9);
    }
}

#[test]
fn simulate_schema_and_determinism() {
    let zero = run("simulate", SMALL, &["--ell", "1,10", "--trials", "0"]);
    assert!(zero.status.success());
    assert_eq!(
        stdout(&zero),
        "ell,trials,total_iterations,successes,log2_empirical_wf,log2_W_LB\n"
    );

    let a = scratch("sim_a.csv");
    let b = scratch("sim_b.csv");
    for path in [&a, &b] {
        let o = run(
            "simulate",
            SMALL,
            &[
                "--ell",
                "10,5",
                "--trials",
                "40",
                "--seed",
                "3",
                "-o",
                path.to_str().unwrap(),
            ],
        );
        assert!(o.status.success(), "{}", stderr(&o));
    }
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert!(rows[0].starts_with("5,40,") && rows[1].starts_with("10,40,"));
    for row in rows {
        let cols: Vec<&str> = row.split(',').collect();
        assert_eq!(cols.len(), 6);
        let successes: u64 = cols[3].parse().unwrap();
        let iters: u64 = cols[2].parse().unwrap();
        assert!(successes <= 40 && iters >= successes);
    }
}

#[test]
fn decode_round_trip_within_unique_radius() {
    let y = scratch("rt_y.txt");
    let c = scratch("rt_c.txt");
    let d = scratch("rt_d.txt");
    let common = [
        "--q",
        "11",
        "--n",
        "10",
        "--k",
        "5",
        "--square-blocks",
        "--ell",
        "2",
        "--w",
        "2",
        "--u",
        "0",
    ];
    let rt = run(
        "roundtrip",
        &common,
        &[
            "--seed",
            "8",
            "--received-out",
            y.to_str().unwrap(),
            "--codeword-out",
            c.to_str().unwrap(),
        ],
    );
    assert!(rt.status.success(), "{}", stderr(&rt));
    assert_eq!(json(&rt)["recovered_planted"], true);
    let dec = run(
        "decode",
        &common,
        &["--input", y.to_str().unwrap(), "--codeword-out", d.to_str().unwrap()],
    );
    assert!(dec.status.success(), "{}", stderr(&dec));
    assert_eq!(json(&dec)["iterations_used"], 1);
    assert_eq!(
        std::fs::read_to_string(&c).unwrap(),
        std::fs::read_to_string(&d).unwrap()
    );
}

#[test]
fn decode_planted_fixture_beyond_unique_radius() {
    let args = [
        "--q",
        "11",
        "--n",
        "10",
        "--k",
        "5",
        "--square-blocks",
        "--ell",
        "5",
        "--w",
        "3",
        "--u",
        "3",
    ];
    let input = fixture("planted_w3_received.txt");
    let o = run("decode", &args, &["--input", input.to_str().unwrap(), "--seed", "5"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["status"], "decoded");
    assert!(v["distance"].as_u64().unwrap() <= 3);
}

#[test]
fn decode_error_exit_codes() {
    let args = [
        "--q",
        "11",
        "--n",
        "10",
        "--k",
        "5",
        "--square-blocks",
        "--ell",
        "5",
        "--w",
        "3",
        "--u",
        "3",
    ];
    let bad = scratch("corrupt.txt");
    std::fs::write(&bad, "8a a0\n15 3g\n30 70\n46 26\n79 99\n").unwrap();
    let o = run("decode", &args, &["--input", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("line 2, column 5"), "{}", stderr(&o));

    let missing = run("decode", &args, &["--input", scratch("missing.txt").to_str().unwrap()]);
    assert_eq!(missing.status.code(), Some(1));

    let input = fixture("planted_w3_received.txt");
    let capped = run(
        "decode",
        &args,
        &[
            "--input",
            input.to_str().unwrap(),
            "--cap",
            "1",
            "--seed",
            "1",
            "--dist",
            "uniform",
        ],
    );
    match capped.status.code() {
        Some(4) => assert_eq!(json(&capped)["status"], "cap_exhausted"),
        Some(0) => assert_eq!(json(&capped)["iterations_used"], 1),
        other => panic!("unexpected exit {other:?}"),
    }

    let too_short = run(
        "decode",
        &args[..args.len() - 2],
        &["--u", "9", "--input", input.to_str().unwrap()],
    );
    assert_eq!(too_short.status.code(), Some(2));
}
