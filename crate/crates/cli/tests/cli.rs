use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn tedk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tedk"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim_end().to_string()
}

/// A fresh scratch directory per test.
fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("tedk-cli-{}-{name}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn identical_files_are_at_distance_zero() {
    let d = scratch("identical");
    let f = write(&d, "f.txt", "(a(b)(c(d)))(e)");
    let o = tedk(&["compute", &f, &f, "--k", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "0\t1\t0\t0");
}

#[test]
fn relabel_exceeds_zero_threshold() {
    let d = scratch("relabel");
    let f = write(&d, "f.txt", "(a(b)(c))");
    let g = write(&d, "g.txt", "(a(b)(x))");
    let o = tedk(&["compute", &f, &g, "--k", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("INF\t0\t"));
    let o = tedk(&["compute", &f, &g, "--k", "1", "--verify"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("1\t1\t"));
    let o = tedk(&["oracle", &f, &g]);
    assert_eq!(stdout(&o), "1");
}

#[test]
fn parse_errors_exit_two() {
    let d = scratch("parse");
    let f = write(&d, "f.txt", "(a(b)");
    let g = write(&d, "g.txt", "(a)");
    let o = tedk(&["compute", &f, &g, "--k", "1"]);
    assert_eq!(o.status.code(), Some(2));
    let j = write(&d, "j.json", "{\"label\": 3}");
    let o = tedk(&["compute", &j, &j, "--k", "1", "--format", "json"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bad_flags_exit_three() {
    let d = scratch("flags");
    let f = write(&d, "f.txt", "(a)");
    assert_eq!(tedk(&["compute", &f, &f]).status.code(), Some(3));
    assert_eq!(tedk(&["compute", &f, &f, "--k", "-1"]).status.code(), Some(3));
    assert_eq!(tedk(&["compute", &f, &f, "--k", "1", "--rounds", "x"]).status.code(), Some(3));
    assert_eq!(tedk(&["compute", &f, &f, "--k", "1", "--threads", "0"]).status.code(), Some(3));
    assert_eq!(tedk(&["compute", &f, &f, "--k", "1", "--oracle", "--verify"]).status.code(), Some(3));
    let missing = d.join("missing.txt");
    let o = tedk(&["compute", missing.to_str().unwrap(), &f, "--k", "1"]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(tedk(&["frobnicate"]).status.code(), Some(3));
    assert_eq!(tedk(&["--help"]).status.code(), Some(0));
}

#[test]
fn generation_is_reproducible() {
    let d = scratch("gen");
    let path = |n: &str| d.join(n).to_string_lossy().into_owned();
    for out in ["a.txt", "b.txt"] {
        let o = tedk(&["gen", "--n", "300", "--seed", "9", "--out", &path(out)]);
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(stdout(&o), "300");
    }
    assert_eq!(fs::read(path("a.txt")).unwrap(), fs::read(path("b.txt")).unwrap());
    let o = tedk(&["gen", "--n", "0", "--out", &path("empty.txt")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(fs::read_to_string(path("empty.txt")).unwrap().trim(), "");
    // A second output file is required exactly when a pair is generated.
    let o = tedk(&["gen", "--n", "5", "--edits", "1", "--out", &path("c.txt")]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn planted_script_is_recovered() {
    let d = scratch("planted");
    let path = |n: &str| d.join(n).to_string_lossy().into_owned();
    for seed in 0..6 {
        let seed = seed.to_string();
        let o = tedk(&[
            "gen", "--n", "60", "--sigma", "3", "--seed", &seed, "--edits", "2", "--out", &path("f.txt"),
            "--out-g", &path("g.txt"),
        ]);
        assert_eq!(o.status.code(), Some(0));
        let d: usize = tedk(&["oracle", &path("f.txt"), &path("g.txt")])
            .stdout
            .iter()
            .map(|&b| b as char)
            .collect::<String>()
            .trim()
            .parse()
            .unwrap();
        assert!(d <= 2);
        let o = tedk(&["compute", &path("f.txt"), &path("g.txt"), "--k", "2", "--seed", &seed, "--verify"]);
        assert_eq!(o.status.code(), Some(0));
        assert!(stdout(&o).starts_with(&format!("{d}\t2\t{seed}\t")));
    }
}

#[test]
fn json_round_trip() {
    let d = scratch("json");
    let path = |n: &str| d.join(n).to_string_lossy().into_owned();
    let o = tedk(&[
        "gen", "--n", "40", "--seed", "3", "--edits", "1", "--format", "json", "--out", &path("f.json"),
        "--out-g", &path("g.json"),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(path("f.json")).unwrap();
    assert!(text.trim_start().starts_with('['));
    let o = tedk(&["compute", &path("f.json"), &path("g.json"), "--k", "3", "--format", "json", "--verify"]);
    assert_eq!(o.status.code(), Some(0));
    let h = write(&d, "h.json", r#"[{"label": "a", "children": [{"label": "b", "children": []}]}]"#);
    let p = write(&d, "p.txt", "(a(c))");
    let o = tedk(&["oracle", &h, &h, "--format", "json"]);
    assert_eq!(stdout(&o), "0");
    assert_eq!(tedk(&["oracle", &h, &p]).status.code(), Some(2));
}

#[test]
fn same_seed_same_output() {
    let d = scratch("determinism");
    let path = |n: &str| d.join(n).to_string_lossy().into_owned();
    tedk(&["gen", "--n", "200", "--seed", "5", "--edits", "2", "--out", &path("f.txt"), "--out-g", &path("g.txt")]);
    let args = ["compute", &path("f.txt"), &path("g.txt"), "--k", "3", "--seed", "17", "--rounds", "4"];
    let a = tedk(&args);
    let b = tedk(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn bench_prints_csv() {
    let o = tedk(&["bench", "--n", "200,400", "--k", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "n,k,wall_ms,reduction_ms,anchor_ms,rounds_ms,residual_ms,value");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("200,1,") && lines[1].ends_with(",0"));
}

#[test]
fn quick_selftest_passes() {
    let o = tedk(&["selftest", "quick"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("PASS")).count(), 8);
}
