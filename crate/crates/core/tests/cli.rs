use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn medineq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_medineq"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/cohorts").join(name)
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn assert_one_line_error(o: &Output, code: i32) {
    assert_eq!(o.status.code(), Some(code), "stderr: {}", stderr(o));
    let err = stderr(o);
    assert_eq!(err.lines().count(), 1, "{err}");
    assert!(err.starts_with("error: "), "{err}");
}

#[test]
fn table1_text_row() {
    let o = medineq(&["table1"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let row = out.lines().find(|l| l.starts_with("Weibull(theta, tau=0.5)")).unwrap();
    let nums: Vec<f64> = row.split_whitespace().skip(2).take(3).map(|t| t.parse().unwrap()).collect();
    for (v, paper) in nums.iter().zip([0.7237, 0.9681, 0.8358]) {
        assert!((v - paper).abs() <= 2e-3);
    }
}

#[test]
fn table1_csv_and_json() {
    let o = medineq(&["table1", "--format", "csv"]);
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 17);
    assert_eq!(out.lines().next().unwrap(), "distribution,psi1,psi2,psi3,rank1,rank2,rank3");
    assert!(out.contains("\"Uniform(0, theta)\",0.5000,0.6931,0.6137,6,2,3-4"));
    let o = medineq(&["--format", "json", "table1"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 16);
}

#[test]
fn table1_coarse_quadrature_in_range() {
    let o = medineq(&["table1", "--panels", "1", "--nodes", "2", "--format", "csv"]);
    assert!(o.status.success());
    for line in stdout(&o).lines().skip(1) {
        let cells: Vec<&str> = line.rsplitn(7, ',').collect();
        for c in &cells[3..6] {
            let v: f64 = c.parse().unwrap();
            assert!((0.0..=1.0).contains(&v));
        }
    }
    assert_one_line_error(&medineq(&["table1", "--nodes", "1"]), 1);
}

#[test]
fn curve_export() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("u.csv");
    let o = medineq(&["curve", "uniform:theta=1", "--k", "1", "--output", path(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o), "Psi1 = 0.5000\n");
    let text = std::fs::read_to_string(&out).unwrap();
    let c = median_inequality::CurveSamples::from_csv(&text).unwrap();
    assert!((c.index - 0.5).abs() <= 1e-8);
    assert!(c.points.iter().all(|(p, v)| (p - v).abs() < 1e-15));

    let a = medineq(&["curve", "paretoII:sigma=1,alpha=1", "--k", "3", "--points", "1000"]);
    let b = medineq(&["curve", "paretoIII:sigma=1,gamma=2", "--k", "1", "--points", "1000"]);
    let pts = |o: &Output| -> Vec<(f64, f64)> {
        stdout(o)
            .lines()
            .skip(2)
            .map(|l| {
                let (p, v) = l.split_once(',').unwrap();
                (p.parse().unwrap(), v.parse().unwrap())
            })
            .collect()
    };
    for (x, y) in pts(&a).iter().zip(pts(&b)) {
        assert_eq!(x.0, y.0);
        assert!((x.1 - y.1).abs() <= 1e-12);
    }

    let o = medineq(&["curve", "lognormal:mu=0,sigma=1", "--k", "2", "--format", "json", "--points", "5"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["points"].as_array().unwrap().len(), 5);
    assert_eq!(v["strategy"], 2);
}

#[test]
fn curve_errors() {
    assert_one_line_error(&medineq(&["curve", "nonexistent:a=1", "--k", "1"]), 1);
    assert_one_line_error(&medineq(&["curve", "uniform:theta=1", "--k", "4"]), 1);
    assert_one_line_error(&medineq(&["curve", "gamma:theta=1", "--k", "1"]), 1);
}

#[test]
fn indices_examples() {
    let o = medineq(&["indices", "1", "3", "5", "7", "10", "20", "24", "--format", "csv"]);
    assert!(o.status.success());
    assert_eq!(
        stdout(&o),
        "label,mean,median,n_T,n_P,G,Z,D,G2,Psi1,Psi2,Psi3\n\
         sample,10.0000,7.0000,7,7,0.4408,0.8267,0.6254,0.4257,0.5714,0.8472,0.7694\n"
    );
    let o = medineq(&["indices", "1", "2", "3"]);
    assert!(stdout(&o).lines().any(|l| l.split_whitespace().collect::<Vec<_>>() == ["G", "0.2222"]));
    let o = medineq(&["indices", "5", "5", "5", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    for key in ["psi1", "psi2", "psi3", "gini"] {
        assert_eq!(v[key], 0.0);
    }
    let o = medineq(&["indices", "1", "3", "5", "--precision", "2", "--format", "csv"]);
    assert!(stdout(&o).contains(",3.00,3.00,"));
}

#[test]
fn indices_from_file_and_errors() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("v.txt");
    std::fs::write(&f, "# incomes\n1, 3, 5\n7 10\n20\n24\n").unwrap();
    let o = medineq(&["indices", "--file", path(&f), "--format", "csv"]);
    assert!(stdout(&o).ends_with("0.5714,0.8472,0.7694\n"));

    let o = medineq(&["indices", "0", "0", "5"]);
    assert_one_line_error(&o, 2);
    assert!(stderr(&o).contains("X_{2:3} = 0"));
    assert_one_line_error(&medineq(&["indices", "1", "-2", "3"]), 1);
    assert_one_line_error(&medineq(&["indices", "1", "abc"]), 1);
    assert_one_line_error(&medineq(&["indices"]), 1);
    assert_one_line_error(&medineq(&["indices", "1", "2", "--bogus"]), 1);
}

#[test]
fn transfer_replay() {
    let dir = tempfile::tempdir().unwrap();
    let plan = dir.path().join("plan.txt");
    std::fs::write(&plan, "5 6 3\n6 7 3\n3 6 1\n2 6 1\n2 5 1\n1 5 3\n").unwrap();
    let o = medineq(&["transfer", "--plan", path(&plan), "--format", "csv", "1", "3", "5", "7", "10", "20", "24"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert!(lines[0].starts_with("step,L,H,c,psi1,psi2,psi3,"));
    assert_eq!(lines.len(), 7);
    assert!(lines[6].starts_with("6,1,5,3,0.2857,0.6640,0.6217,"));

    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "5 6 6\n").unwrap();
    let o = medineq(&["transfer", "--plan", path(&bad), "1", "3", "5", "7", "10", "20", "24"]);
    assert_one_line_error(&o, 1);
    assert!(stderr(&o).contains("step 1") && stderr(&o).contains("< 5"), "{}", stderr(&o));

    let empty = dir.path().join("empty.txt");
    std::fs::write(&empty, "# nothing\n").unwrap();
    let o = medineq(&["transfer", "--plan", path(&empty), "--format", "csv", "1", "2", "3"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 1);

    let median = dir.path().join("median.txt");
    std::fs::write(&median, "4 7 1\n").unwrap();
    let o = medineq(&["transfer", "--plan", path(&median), "--format", "csv", "1", "3", "5", "7", "10", "20", "24"]);
    assert!(o.status.success());
    assert!(stdout(&o).lines().nth(1).unwrap().contains(",NA,NA,NA,"));
}

#[test]
fn cohorts_fixture() {
    let o = medineq(&[
        "cohorts",
        path(&fixture("households.csv")),
        path(&fixture("config.toml")),
        "--format",
        "csv",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let expected = std::fs::read_to_string(fixture("expected_report.csv")).unwrap();
    assert_eq!(stdout(&o), expected);

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.csv");
    let o = medineq(&[
        "cohorts",
        path(&fixture("households.csv")),
        path(&fixture("config.toml")),
        "--format",
        "csv",
        "--output",
        path(&out),
    ]);
    assert!(o.status.success());
    assert_eq!(std::fs::read_to_string(&out).unwrap(), expected);
}

#[test]
fn cohorts_with_undefined_group() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data.csv");
    let mut text = std::fs::read_to_string(fixture("households.csv")).unwrap();
    text.push_str("ZZ,0,0,0,1,0,EUR\nZZ,0,0,0,2,1,EUR\n");
    std::fs::write(&data, text).unwrap();
    let o = medineq(&["cohorts", path(&data), path(&fixture("config.toml")), "--format", "csv"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(out.lines().last().unwrap(), "ZZ,NA,NA,2,0,NA,NA,NA,NA,NA,NA,NA,NA,NA,NA");
    assert!(stderr(&o).contains("ZZ"));
    let expected = std::fs::read_to_string(fixture("expected_report.csv")).unwrap();
    assert!(out.starts_with(&expected));
}

#[test]
fn cohorts_errors() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data.csv");
    std::fs::write(&data, "country,HY040G,HY090G,n_adults,n_children,cur\nAA,1,2,1,0,EUR\n").unwrap();
    let o = medineq(&["cohorts", path(&data), path(&fixture("config.toml"))]);
    assert_one_line_error(&o, 1);
    assert!(stderr(&o).contains("PY080"));

    std::fs::write(&data, "country,HY040G,HY090G,PY080,n_adults,n_children,cur\nAA,1,2,3,1,0,USD\n").unwrap();
    let o = medineq(&["cohorts", path(&data), path(&fixture("config.toml"))]);
    assert_one_line_error(&o, 1);
    assert!(stderr(&o).contains("USD"));

    let o = medineq(&["cohorts", path(&dir.path().join("missing.csv")), path(&fixture("config.toml"))]);
    assert_one_line_error(&o, 1);
}

#[test]
fn output_is_deterministic() {
    let a = medineq(&["table1", "--format", "json"]);
    let b = medineq(&["table1", "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn help_exits_zero() {
    let o = medineq(&["--help"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("table1"));
}
