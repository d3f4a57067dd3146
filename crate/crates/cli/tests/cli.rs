use std::path::Path;
use std::process::{Command, Output};

fn weno_lab(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weno-lab"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("spawn weno-lab")
}

fn read_csv(path: &Path) -> (String, Vec<String>, Vec<Vec<String>>) {
    let text = std::fs::read_to_string(path).unwrap();
    let (comment, body) = text.split_once('\n').unwrap();
    let mut r = csv::Reader::from_reader(body.as_bytes());
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(String::from).collect())
        .collect();
    (comment.to_string(), header, rows)
}

#[test]
fn accuracy_zc_f0_first_row() {
    let dir = tempfile::tempdir().unwrap();
    let out = weno_lab(
        dir.path(),
        &["accuracy", "--scheme", "zc", "--function", "f0"],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let (comment, header, rows) = read_csv(&dir.path().join("accuracy_f0_zc.csv"));
    assert!(
        comment.starts_with("# weno-lab command=accuracy"),
        "{comment}"
    );
    assert!(comment.contains("scheme=zc"));
    assert_eq!(header, ["inv_dx", "l1_error", "l1_order"]);
    assert_eq!(rows.len(), 6);
    assert_eq!(rows[0][0], "25");
    let e: f64 = rows[0][1].parse().unwrap();
    assert!((e / 2.76205e-5 - 1.0).abs() < 0.05, "{e}");
    assert!(rows[0][2].is_empty());
    let order: f64 = rows[5][2].parse().unwrap();
    assert!((order - 5.0).abs() < 0.1, "{order}");
}

#[test]
fn solve_sod_writes_named_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = weno_lab(
        dir.path(),
        &[
            "solve",
            "--problem",
            "sod",
            "--n",
            "200",
            "--cfl",
            "0.5",
            "--scheme",
            "zc",
        ],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let (_, header, rows) = read_csv(&dir.path().join("sod_zc.csv"));
    assert_eq!(header, ["x", "rho", "u", "p", "rho_exact"]);
    assert_eq!(rows.len(), 200);
    for row in &rows {
        for v in row {
            assert!(v.parse::<f64>().unwrap().is_finite());
        }
    }
}

#[test]
fn identical_config_is_bit_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "solve",
        "--problem",
        "gste",
        "--scheme",
        "zc+",
        "--n",
        "50",
        "--t_final",
        "0.5",
    ];
    let a = weno_lab(dir.path(), &[&args[..], &["--output", "a.csv"]].concat());
    let b = weno_lab(dir.path(), &[&args[..], &["--output", "b.csv"]].concat());
    assert!(a.status.success() && b.status.success());
    let ra = std::fs::read_to_string(dir.path().join("a.csv")).unwrap();
    let rb = std::fs::read_to_string(dir.path().join("b.csv")).unwrap();
    // only the recorded output name differs
    assert_eq!(ra.replace("a.csv", "X"), rb.replace("b.csv", "X"));
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["solve"][..],
        &["solve", "--problem", "sod", "--scheme", "banana"],
        &["dance"],
        &["solve", "--problem", "sod", "--cfl", "-1"],
        &["solve", "--problem", "sod", "--cfl", "2"],
        &["adr", "--n_points", "3"],
    ] {
        let out = weno_lab(dir.path(), args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
    let out = weno_lab(
        dir.path(),
        &["solve", "--problem", "sod", "--scheme", "banana"],
    );
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("zcplus"), "{msg}");
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("run.cfg"),
        "# gste smoke run\ncommand = solve\nproblem = gste\nscheme = z\nn = 40\nt_final = 0.25\n",
    )
    .unwrap();
    let out = weno_lab(dir.path(), &["--config", "run.cfg", "--scheme", "zc"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let (comment, header, rows) = read_csv(&dir.path().join("gste_zc.csv"));
    assert!(
        comment.contains("n=40") && comment.contains("t_final=0.25"),
        "{comment}"
    );
    assert_eq!(header, ["x", "u", "u_exact"]);
    assert_eq!(rows.len(), 40);
}

#[test]
fn adr_and_ek_table_columns() {
    let dir = tempfile::tempdir().unwrap();
    let out = weno_lab(
        dir.path(),
        &["adr", "--scheme", "linear", "--n_points", "32"],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let (_, header, rows) = read_csv(&dir.path().join("adr_linear.csv"));
    assert_eq!(header, ["omega", "re_phi", "im_phi"]);
    assert!(!rows.is_empty());

    let out = weno_lab(dir.path(), &["ek-table", "--n", "100", "--t_final", "0.5"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let (_, header, rows) = read_csv(&dir.path().join("ek_table.csv"));
    assert_eq!(header, ["scheme", "e0", "e1", "e2", "total"]);
    assert_eq!(rows.len(), 7);
}

#[test]
fn weights_trace_columns() {
    let dir = tempfile::tempdir().unwrap();
    let out = weno_lab(
        dir.path(),
        &[
            "weights",
            "--scheme",
            "zc",
            "--n",
            "50",
            "--record_times",
            "0,0.25",
            "--t_final",
            "0.25",
        ],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let (_, header, rows) = read_csv(&dir.path().join("weights_gste_zc.csv"));
    assert_eq!(header, ["t", "x", "w0", "w1", "w2", "l0", "l2"]);
    assert!(!rows.is_empty());
    for row in &rows {
        let w: f64 = (2..5).map(|k| row[k].parse::<f64>().unwrap()).sum();
        assert!((w - 1.0).abs() < 1e-12);
    }
}
