use std::process::Command;

fn twistcode(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_twistcode"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn affine_all_checks() {
    let (code, out, _) = twistcode(&["affine", "--p", "3", "--k", "2", "--check", "all"]);
    assert_eq!(code, 0);
    for line in [
        "delta_tw=24",
        "delta_rep=18",
        "gap=6",
        "check.delta.pairwise=PASS",
    ] {
        assert!(out.lines().any(|l| l == line), "missing {line}");
    }
    assert!(!out.contains("FAIL"));
}

#[test]
fn affine_bad_parameters() {
    assert_eq!(twistcode(&["affine", "--p", "4", "--k", "2"]).0, 2);
    assert_eq!(twistcode(&["affine", "--p", "3", "--k", "3"]).0, 2);
    assert_eq!(
        twistcode(&["affine", "--p", "3", "--k", "2", "--check", "most"]).0,
        2
    );
}

#[test]
fn symplectic_q2() {
    let (code, out, _) = twistcode(&["symplectic", "--n", "1", "--check", "all"]);
    assert_eq!(code, 0);
    for line in [
        "delta_tw=20",
        "delta_rep=16",
        "gap=4",
        "code_size=720",
        "length=30",
    ] {
        assert!(out.lines().any(|l| l == line), "missing {line}");
    }
}

#[test]
fn symplectic_guard_and_polynomial() {
    let (code, _, err) = twistcode(&["symplectic", "--n", "3"]);
    assert_eq!(code, 2);
    assert!(err.contains("size guard"));
    assert_eq!(
        twistcode(&["symplectic", "--n", "2", "--poly", "x^2+1"]).0,
        2
    );
    assert_eq!(twistcode(&["symplectic", "--n", "1", "--poly", "x+1"]).0, 0);
}

#[test]
fn report_files_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    for path in [&a, &b] {
        let (code, out, _) = twistcode(&[
            "affine",
            "--p",
            "5",
            "--k",
            "2",
            "--report",
            path.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
        assert!(out.is_empty());
    }
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    assert!(text.starts_with("family=affine\np=5\nk=2\n"));
    assert!(!text.contains("time."));
}

#[test]
fn dist_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("code.txt");
    let f = file.to_str().unwrap();
    assert_eq!(
        twistcode(&["affine", "--p", "3", "--k", "2", "--out", f]).0,
        0
    );
    let (code, out, _) = twistcode(&["dist", f]);
    assert_eq!((code, out.trim()), (0, "delta=24"));
    let (code, out, _) = twistcode(&["dist", f, "--method", "closure"]);
    assert_eq!((code, out.trim()), (0, "delta=24"));
    assert_eq!(twistcode(&["dist", f, "--method", "guess"]).0, 2);
}

#[test]
fn dist_single_word_and_malformed() {
    let dir = tempfile::tempdir().unwrap();
    let one = dir.path().join("one.txt");
    std::fs::write(
        &one,
        "# twistcode v1\n# family=custom r=1 q=3 length=3 size=1\n2 3 1\n",
    )
    .unwrap();
    let (code, out, _) = twistcode(&["dist", one.to_str().unwrap()]);
    assert_eq!((code, out.trim()), (0, "delta=0"));

    let bad = dir.path().join("bad.txt");
    std::fs::write(
        &bad,
        "# twistcode v1\n# family=custom r=1 q=3 length=3 size=2\n1 2 3\n1 2\n",
    )
    .unwrap();
    let (code, _, err) = twistcode(&["dist", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("line 4"), "{err}");
    assert_eq!(twistcode(&["dist", "/nonexistent/file"]).0, 2);
}

#[test]
fn table1_small() {
    let (code, out, _) = twistcode(&["table1", "--max-p", "5", "--max-n", "1", "--max-k", "3"]);
    assert_eq!(code, 0);
    let rows: Vec<&str> = out.lines().skip(1).collect();
    assert_eq!(rows.len(), 4);
    assert!(rows[0].starts_with("Gbar_2 (p=3)"));
    assert!(rows[3].starts_with("Sp(4,2)"));
    assert!(rows.iter().all(|r| r.ends_with("ok")));
    assert_eq!(twistcode(&["table1", "--max-p", "5", "--max-n", "3"]).0, 2);
}
