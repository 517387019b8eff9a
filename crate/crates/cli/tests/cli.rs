use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_srindex")).args(args).env_remove("SRINDEX_SEED").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn build_example(dir: &Path, s: &str) -> Output {
    std::fs::write(dir.join("t.txt"), b"abracadabra").unwrap();
    run(&["build", "--input", p(&dir.join("t.txt")), "--output", p(&dir.join("t.srix")), "--s", s, "--variant", "2"])
}

#[test]
fn build_reports_worked_example() {
    let dir = tempfile::tempdir().unwrap();
    let out = build_example(dir.path(), "4");
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.lines().any(|l| l == "r=8"), "{text}");
    assert!(text.lines().any(|l| l == "retained=4"));
    assert!(text.lines().any(|l| l.starts_with("bytes.valid_area=")));

    let full = build_example(dir.path(), "1");
    assert!(stdout(&full).lines().any(|l| l == "retained=8"));
}

#[test]
fn locate_and_count_lines() {
    let dir = tempfile::tempdir().unwrap();
    assert!(build_example(dir.path(), "4").status.success());
    let pats = dir.path().join("p.txt");
    std::fs::write(&pats, b"abra\n\nxyz\n").unwrap();
    let idx = dir.path().join("t.srix");

    let out = run(&["locate", "--index", p(&idx), "--patterns", p(&pats), "--sorted"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "abra\t2\t1,8\nxyz\t0\t\n");
    assert!(String::from_utf8_lossy(&out.stderr).contains("empty pattern"));

    let out = run(&["count", "--index", p(&idx), "--patterns", p(&pats)]);
    assert_eq!(stdout(&out), "abra\t2\nxyz\t0\n");
}

#[test]
fn stats_echo_header() {
    let dir = tempfile::tempdir().unwrap();
    assert!(build_example(dir.path(), "4").status.success());
    let out = run(&["stats", "--index", p(&dir.path().join("t.srix"))]);
    let text = stdout(&out);
    for want in ["n=12", "r=8", "n/r=1.500", "s=4", "variant=2"] {
        assert!(text.lines().any(|l| l == want), "missing {want} in {text}");
    }
}

#[test]
fn io_problems_exit_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing");
    let out = run(&["build", "--input", p(&missing), "--output", p(&dir.path().join("x"))]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());

    std::fs::write(dir.path().join("junk"), b"not an index").unwrap();
    let out = run(&["stats", "--index", p(&dir.path().join("junk"))]);
    assert_eq!(out.status.code(), Some(2));

    assert_eq!(run(&["build", "--input", "a", "--output", "b", "--variant", "7"]).status.code(), Some(2));
}

#[test]
fn gen_and_bench() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.txt");
    let gen = |seed: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_srindex"));
        cmd.args(["gen", "--kind", "dna", "--seed-len", "500", "--copies", "8", "--rate", "0.01", "--output", p(&g)]);
        match seed {
            Some(v) => cmd.env("SRINDEX_SEED", v),
            None => cmd.env_remove("SRINDEX_SEED"),
        };
        assert!(cmd.output().unwrap().status.success());
        std::fs::read(&g).unwrap()
    };
    let a = gen(None);
    assert_eq!(a.len(), 4000);
    assert!(a.iter().all(|b| b"ACGT".contains(b)));
    assert_ne!(gen(Some("99")), a);

    let out = run(&["bench", "--input", p(&g), "--s", "2,4", "--variants", "0,1", "--pattern-count", "50", "--m", "6"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let tsv = stdout(&out);
    let rows: Vec<&str> = tsv.lines().collect();
    assert_eq!(rows.len(), 5);
    assert!(rows[0].starts_with("s\tvariant\tindex_bytes"));
    assert!(rows[1].starts_with("2\t0\t") && rows[4].starts_with("4\t1\t"));
}
