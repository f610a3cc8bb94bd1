use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use omv_cli::format::{format_header, format_values, parse_answers, parse_instance};
use omv_core::harness::AdaptiveAdversary;
use omv_core::oracle::product;
use omv_core::{ProblemKind, Value};

fn omv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_omv"))
        .args(args)
        .output()
        .expect("omv runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("omv-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn gen(args: &[&str], name: &str) -> PathBuf {
    let path = scratch(name);
    let mut all = vec!["gen"];
    all.extend_from_slice(args);
    all.extend_from_slice(&["--out", s(&path)]);
    let o = omv(&all);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    path
}

#[test]
fn gen_is_deterministic() {
    let a = omv(&["gen", "bool", "4", "--seed", "7"]);
    let b = omv(&["gen", "bool", "4", "--seed", "7"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).starts_with("OMV 1\nproblem bool\nn 4\n"));
}

#[test]
fn gen_monotone_rows() {
    let o = omv(&["gen", "bmmp", "8", "--monotone", "rows", "--seed", "2"]);
    let inst = parse_instance(&stdout(&o)).unwrap();
    for row in inst.matrix.rows() {
        assert!(row.windows(2).all(|w| w[0] <= w[1]));
    }
}

#[test]
fn gen_skewed_has_heavy_values() {
    let o = omv(&["gen", "eq", "8", "--skewed", "--seed", "3"]);
    let inst = parse_instance(&stdout(&o)).unwrap();
    for k in 0..8 {
        let col: Vec<Value> = (0..8).map(|i| inst.matrix.get(i, k)).collect();
        let most = col
            .iter()
            .map(|x| col.iter().filter(|y| *y == x).count())
            .max()
            .unwrap();
        assert!(most >= 2, "column {k} has no repeated value");
    }
}

#[test]
fn gen_unsatisfiable_fails() {
    let o = omv(&["gen", "bmmp", "4", "--hi", "1000"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unsatisfiable"));
}

#[test]
fn solve_then_verify_for_every_deterministic_chain() {
    let cases = [
        ("bool", "naive"),
        ("bool", "bool<-bmmp,bmmp<-eq,eq<-bool,naive"),
        (
            "bool",
            "bool<-minwit,minwit<-minmax,minmax<-dom,dom<-eq,eq<-bool,naive",
        ),
        ("eq", "eq<-bool,naive"),
        ("dom", "dom<-eq,eq<-bool,naive"),
        ("minmax", "minmax<-dom,dom<-eq,eq<-bool,naive"),
        ("minwit", "minwit<-minmax,minmax<-dom,naive"),
        ("bmmp", "bmmp<-eq,eq<-bool,naive"),
    ];
    for (i, (problem, chain)) in cases.iter().enumerate() {
        let inst = gen(
            &[problem, "9", "--seed", &i.to_string(), "--inf-rate", "0.1"],
            &format!("inst{i}.omv"),
        );
        let ans = scratch(&format!("ans{i}.txt"));
        let o = omv(&[
            "solve",
            s(&inst),
            "--chain",
            chain,
            "--hitting",
            "full",
            "--out",
            s(&ans),
        ]);
        assert!(
            o.status.success(),
            "{chain}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
        assert!(String::from_utf8_lossy(&o.stderr).contains("queries="));
        let v = omv(&["verify", s(&inst), s(&ans)]);
        assert_eq!(
            v.status.code(),
            Some(0),
            "{chain}: {}",
            String::from_utf8_lossy(&v.stderr)
        );
    }
}

#[test]
fn reduction_matches_naive_output() {
    let inst = gen(&["eq", "12", "--seed", "5", "--skewed"], "eq.omv");
    let a = omv(&["solve", s(&inst)]);
    let b = omv(&["solve", s(&inst), "--chain", "eq<-bool,naive"]);
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn forced_hit_is_seed_independent() {
    let inst = gen(
        &["bmmp", "12", "--monotone", "stream", "--seed", "6"],
        "stream.omv",
    );
    let run = |seed: &str| {
        omv(&[
            "solve",
            s(&inst),
            "--chain",
            "bmmp<-eq,naive",
            "--hitting",
            "full",
            "--seed",
            seed,
        ])
    };
    let a = run("1");
    assert!(a.status.success());
    assert_eq!(a.stdout, run("2").stdout);
    assert_eq!(a.stdout, omv(&["solve", s(&inst)]).stdout);
}

#[test]
fn verify_reports_first_mismatch() {
    let inst = gen(&["bool", "5", "--seed", "8"], "flip.omv");
    let o = omv(&["solve", s(&inst)]);
    let mut answers = parse_answers(&stdout(&o), 5).unwrap();
    answers[1][2] = if answers[1][2] == Value::ONE {
        Value::ZERO
    } else {
        Value::ONE
    };
    let ans = scratch("flip.txt");
    let text: String = answers.iter().map(|a| format_values(a) + "\n").collect();
    std::fs::write(&ans, text).unwrap();
    let v = omv(&["verify", s(&inst), s(&ans)]);
    assert_eq!(v.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&v.stderr).contains("query 2, row 3"));
}

#[test]
fn verify_accepts_infinite_witnesses() {
    let inst = scratch("minwit.omv");
    std::fs::write(
        &inst,
        "OMV 1\nproblem minwit\nn 2\n0 1\n0 0\nqueries 1\n1 1\n",
    )
    .unwrap();
    let ans = scratch("minwit.txt");
    std::fs::write(&ans, "2 inf\n").unwrap();
    assert_eq!(omv(&["verify", s(&inst), s(&ans)]).status.code(), Some(0));
    std::fs::write(&ans, "2 inf\n1 1\n").unwrap();
    assert_eq!(omv(&["verify", s(&inst), s(&ans)]).status.code(), Some(3));
    std::fs::write(&ans, "2\n").unwrap();
    assert_eq!(omv(&["verify", s(&inst), s(&ans)]).status.code(), Some(2));
}

#[test]
fn distinct_exit_codes() {
    let bad = scratch("bad.omv");
    std::fs::write(&bad, "OMV 1\nproblem eq\nn 2\n1 2\n").unwrap();
    assert_eq!(omv(&["solve", s(&bad)]).status.code(), Some(2));
    std::fs::write(
        &bad,
        "OMV 1\nproblem bmmp\nn 2\nmonotone rows\n2 1\n5 5\nqueries 0\n",
    )
    .unwrap();
    let o = omv(&["solve", s(&bad)]);
    assert_eq!(o.status.code(), Some(3));
    assert!(
        String::from_utf8_lossy(&o.stderr).contains("(1,2)"),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let good = gen(&["eq", "3"], "good.omv");
    assert_eq!(
        omv(&["solve", s(&good), "--chain", "dom<-eq,naive"])
            .status
            .code(),
        Some(5)
    );
}

fn protocol_child(chain: &str) -> std::process::Child {
    Command::new(env!("CARGO_BIN_EXE_omv"))
        .args(["protocol", "--chain", chain, "--hitting", "full"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("omv runs")
}

#[test]
fn protocol_reproduces_solve() {
    let inst = gen(
        &["minmax", "7", "--seed", "9", "--inf-rate", "0.2"],
        "proto.omv",
    );
    let text = std::fs::read_to_string(&inst).unwrap();
    let mut child = protocol_child("minmax<-dom,dom<-eq,eq<-bool,naive");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(text.as_bytes())
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    assert_eq!(out.stdout, omv(&["solve", s(&inst)]).stdout);
}

#[test]
fn protocol_wrong_length_is_a_protocol_error() {
    let mut child = protocol_child("naive");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"OMV 1\nproblem bool\nn 2\n1 0\n0 1\n1 1\n1\n")
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(4));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("1 1\nerror "), "{text}");
}

/// Each query depends on the previous answer, so the session only
/// completes if the process answers before reading further.
#[test]
fn protocol_survives_adaptive_driver() {
    for (problem, chain) in [
        ("eq", "eq<-bool,naive"),
        ("bool", "bool<-bmmp,bmmp<-eq,eq<-bool,naive"),
        (
            "minwit",
            "minwit<-minmax,minmax<-dom,dom<-eq,eq<-bool,naive",
        ),
    ] {
        let inst = parse_instance(&stdout(&omv(&["gen", problem, "6", "--seed", "4"]))).unwrap();
        let kind: ProblemKind = inst.kind;
        let mut child = protocol_child(chain);
        let mut stdin = child.stdin.take().unwrap();
        let mut reader = BufReader::new(child.stdout.take().unwrap());
        stdin
            .write_all(format_header(kind, &inst.matrix).as_bytes())
            .unwrap();
        let mut adversary = AdaptiveAdversary::new(kind, 6, 11);
        let mut answer: Option<Vec<Value>> = None;
        for round in 0..20 {
            let q = adversary.next_query(answer.as_deref());
            writeln!(stdin, "{}", format_values(&q)).unwrap();
            stdin.flush().unwrap();
            let mut line = String::new();
            reader.read_line(&mut line).unwrap();
            let got = parse_answers(&line, 6).unwrap().remove(0);
            assert_eq!(
                got,
                product(kind, &inst.matrix, &q).unwrap(),
                "{chain} round {round}"
            );
            answer = Some(got);
        }
        drop(stdin);
        assert!(child.wait().unwrap().success());
    }
}

#[test]
fn bench_table_columns() {
    let o = omv(&[
        "bench",
        "--chain",
        "bmmp<-eq,naive",
        "--sizes",
        "8,16",
        "--delta",
        "2",
        "--hitting",
        "17",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("chain\tn\ttrial"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split('\t').collect()).collect();
    assert_eq!(rows.len(), 2);
    for r in rows {
        assert_eq!(r[4], "85");
    }
}
