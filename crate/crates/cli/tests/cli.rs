use std::collections::BTreeSet;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const T2: &str = "2 3\n5\n3 3 4\n3 1 2\n1 3 2\n";

fn kpvo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kpvo"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> Output {
    let out = kpvo(args);
    assert!(
        out.status.success(),
        "kpvo {args:?} failed:\n{}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn frontier(csv: &str) -> BTreeSet<Vec<i64>> {
    csv.lines()
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect()
}

#[test]
fn solve_t2_with_lex() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("t2.txt");
    fs::write(&inst, T2).unwrap();
    let out_csv = dir.path().join("pf.csv");
    let out = ok(&["solve", s(&inst), "--order", "lex", "--out", s(&out_csv)]);
    let stdout = String::from_utf8(out.stdout).unwrap();
    let expected: BTreeSet<Vec<i64>> = [vec![3, 1], vec![1, 3], vec![2, 2]].into_iter().collect();
    assert_eq!(frontier(&stdout), expected);
    assert_eq!(fs::read_to_string(&out_csv).unwrap(), stdout);
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("nodes 6") && stderr.contains("checks 5"), "{stderr}");

    // an explicit order file gives the same frontier
    let order = dir.path().join("order.txt");
    fs::write(&order, "3 1 2\n").unwrap();
    let out = ok(&["solve", s(&inst), "--order", s(&order)]);
    assert_eq!(frontier(&String::from_utf8(out.stdout).unwrap()), expected);
}

#[test]
fn errors_exit_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("t2.txt");
    fs::write(&inst, T2).unwrap();
    let out = kpvo(&["solve", s(&inst), "--order", "bogus"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("valid names"));
    assert!(!kpvo(&["solve", "/no/such/file.txt"]).status.success());
    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "2 3\n5\n3 3\n").unwrap();
    let out = kpvo(&["solve", s(&bad)]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
    let short = dir.path().join("order.txt");
    fs::write(&short, "1 2\n").unwrap();
    assert!(!kpvo(&["solve", s(&inst), "--order", s(&short)]).status.success());
    assert!(!kpvo(&["eval", "--corpus", s(dir.path()), "--methods", "nope", "--out-dir", s(dir.path())]).status.success());
}

#[test]
fn eval_lex_only_is_all_100() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus");
    ok(&["gen", "--out", s(&corpus), "-p", "3", "-n", "10", "--count", "4"]);
    let reports = dir.path().join("reports");
    ok(&["eval", "--corpus", s(&corpus), "--methods", "lex", "--out-dir", s(&reports)]);
    let relative = fs::read_to_string(reports.join("relative.csv")).unwrap();
    let mut lines = relative.lines();
    assert_eq!(lines.next(), Some("size,method,nodes_pct,width_pct,checks_pct,gmean_pct"));
    assert_eq!(lines.next(), Some("\"(3,10)\",lex,100,100,100,100"));
    assert_eq!(lines.next(), None);
}

#[test]
fn staged_workflow() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let (train, val, test) = (d.join("train"), d.join("val"), d.join("test"));
    ok(&["gen", "--out", s(&train), "-p", "2", "-n", "9", "--count", "8", "--seed", "0", "--split", "train"]);
    ok(&["gen", "--out", s(&val), "-p", "2", "-n", "9", "--count", "4", "--seed", "100", "--split", "validation"]);
    ok(&["gen", "--out", s(&test), "-p", "2", "-n", "9", "--count", "4", "--seed", "200", "--split", "test"]);
    assert_eq!(fs::read_dir(&train).unwrap().count(), 8);

    let (tl, vl, sd) = (d.join("train.csv"), d.join("val.csv"), d.join("smacd.csv"));
    ok(&["tune", "--corpus", s(&train), "--out", s(&tl), "--budget", "15"]);
    ok(&["tune", "--corpus", s(&val), "--out", s(&vl), "--budget", "15"]);
    ok(&["tune", "--mode", "dataset", "--corpus", s(&train), "--out", s(&sd), "--budget", "15"]);
    assert_eq!(fs::read_to_string(&tl).unwrap().lines().count(), 9);

    let ds = d.join("dataset.csv");
    ok(&["featurize", "--corpus", s(&train), "--labels", s(&tl), "--out", s(&ds)]);
    let header = fs::read_to_string(&ds).unwrap().lines().next().unwrap().to_string();
    assert_eq!(header.split(',').count(), 2 + 37 + 1);

    let models = d.join("models");
    ok(&["train", "--dataset", s(&ds), "--kind", "all", "--grid", "rounds=5", "--out-dir", s(&models)]);
    for k in ["linear_pointwise_0", "linear_pairwise_0", "gbt_pointwise_0", "gbt_pairwise_0"] {
        assert!(models.join(format!("{k}.model")).exists(), "{k}");
        assert!(models.join(format!("{k}.log.csv")).exists(), "{k}");
    }

    let sel = d.join("selection.csv");
    let winner = d.join("winner.model");
    let mut args = vec!["select", "--corpus", s(&val), "--labels", s(&vl), "--out", s(&sel), "--winner", s(&winner), "--models"];
    let paths: Vec<String> = ["linear_pointwise_0", "gbt_pairwise_0"]
        .iter()
        .map(|k| s(&models.join(format!("{k}.model"))).to_string())
        .collect();
    args.extend(paths.iter().map(String::as_str));
    ok(&args);
    assert_eq!(fs::read_to_string(&sel).unwrap().lines().filter(|l| l.ends_with(",true")).count(), 1);
    assert!(winner.exists());

    let imp = ok(&["importance", s(&models.join("gbt_pairwise_0.model"))]);
    assert_eq!(String::from_utf8(imp.stdout).unwrap().lines().count(), 38);
    assert!(!kpvo(&["importance", s(&models.join("linear_pairwise_0.model"))]).status.success());

    let methods = format!("lex,min_weight,max_ratio,smacd:{},ml:{}", s(&sd), s(&winner));
    let (r1, r2) = (d.join("r1"), d.join("r2"));
    for r in [&r1, &r2] {
        ok(&["eval", "--corpus", s(&test), "--methods", &methods, "--k-random", "2", "--out-dir", s(r)]);
    }
    for f in ["records.csv", "heuristic_ratios.csv", "summary.csv", "relative.csv", "cumulative.csv"] {
        assert_eq!(fs::read(r1.join(f)).unwrap(), fs::read(r2.join(f)).unwrap(), "{f}");
    }
    let summary = fs::read_to_string(r1.join("summary.csv")).unwrap();
    for m in ["lex", "min_weight", "max_ratio", "smacd", "ml"] {
        assert!(summary.contains(&format!(",{m},4,")), "{m}: {summary}");
    }

    let r3 = d.join("r3");
    ok(&["report", "--records", s(&r1.join("records.csv")), "--out-dir", s(&r3)]);
    assert_eq!(fs::read(r1.join("relative.csv")).unwrap(), fs::read(r3.join("relative.csv")).unwrap());
}

#[test]
fn pipeline_micro_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.toml");
    fs::write(
        &cfg,
        "seed = 1\nsizes = [[3, 15]]\ntrain = 30\nvalidation = 10\ntest = 10\n\n[tuner]\nbudget = 30\n\n[ranker]\ngbt_grid = \"rounds=30\"\n",
    )
    .unwrap();
    let out = dir.path().join("out");
    ok(&["pipeline", "--config", s(&cfg), "--out", s(&out)]);
    let reports = out.join("reports");
    for f in ["records.csv", "heuristic_ratios.csv", "summary.csv", "relative.csv", "cumulative.csv", "selection_3_15.csv", "importance_3_15.csv"] {
        assert!(reports.join(f).exists(), "{f}");
    }
    assert!(out.join("models/3_15/selected.model").exists());
    assert_eq!(fs::read_dir(out.join("instances/3_15/test")).unwrap().count(), 10);
}
