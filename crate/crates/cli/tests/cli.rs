use std::fs;
use std::process::{Command, Output};

fn gaplab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gaplab"))
        .args(args)
        .output()
        .expect("failed to launch gaplab")
}

fn stdout(args: &[&str]) -> String {
    let out = gaplab(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn data_rows(text: &str) -> Vec<String> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(str::to_string)
        .collect()
}

#[test]
fn csv_starts_with_metadata_then_columns() {
    for cmd in ["table1", "table2", "records", "first-gaps", "figure1", "figure2"] {
        let text = stdout(&[cmd, "--limit", "1000"]);
        let mut lines = text.lines();
        assert!(lines.next().unwrap().starts_with(&format!("# gaplab {cmd} version=")));
        let columns = lines.find(|l| !l.starts_with('#')).unwrap();
        assert!(columns.contains(','), "{cmd}: {columns}");
        assert!(!text.contains('\r'));
    }
}

#[test]
fn first_gaps_rows() {
    let rows = data_rows(&stdout(&["first-gaps", "--limit", "1000"]));
    assert!(rows[0].starts_with("1,2,"));
    assert!(rows.iter().any(|r| r.starts_with("14,113,")));
    assert!(rows.iter().any(|r| r.starts_with("6,23,")));
}

#[test]
fn records_merged_with_bundled_reference() {
    let rows = data_rows(&stdout(&["records", "--limit", "1e6", "--ref", "bundled"]));
    assert_eq!(rows.len(), 75);
    assert!(rows[17].ends_with(",computed"));
    assert!(rows[18].ends_with(",reference"));
    assert!(rows[74].starts_with("1476,1425172824437699411,1425172824437700887,6.18190882585e-7"));
}

#[test]
fn scientific_limits_and_threads_give_identical_output() {
    let a = stdout(&["records", "--limit", "2e6", "--threads", "1"]);
    let b = stdout(&["records", "--limit", "2000000", "--threads", "3", "--segment", "4096"]);
    assert_eq!(a, b);
}

#[test]
fn writes_to_out_path_and_gnuplot_script() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("fig1.csv");
    let gp = dir.path().join("fig1.gp");
    let out = gaplab(&[
        "figure1",
        "--limit",
        "130",
        "--out",
        csv.to_str().unwrap(),
        "--emit-gnuplot",
        gp.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(data_rows(&fs::read_to_string(&csv).unwrap()).len(), 6);
    let script = fs::read_to_string(&gp).unwrap();
    assert!(script.contains(csv.to_str().unwrap()));
}

#[test]
fn exit_codes() {
    assert_eq!(gaplab(&["table1", "--limit", "2"]).status.code(), Some(2));
    assert_eq!(gaplab(&["table1", "--limit", "1.5"]).status.code(), Some(2));
    assert_eq!(gaplab(&["predict", "bogus", "3"]).status.code(), Some(2));
    assert_eq!(gaplab(&["nonsense"]).status.code(), Some(2));
    assert_eq!(gaplab(&["predict", "g_gauss", "2"]).status.code(), Some(3));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "1 2\n14 115\n").unwrap();
    let out = gaplab(&["records", "--ref", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    let wrong = dir.path().join("wrong.txt");
    fs::write(&wrong, "1 2\n2 3\n4 7\n6 23\n8 89\n14 127\n").unwrap();
    // 127 + 14 is composite, so this fails validation before merging
    assert_eq!(gaplab(&["records", "--ref", wrong.to_str().unwrap()]).status.code(), Some(3));

    let missing = dir.path().join("missing.txt");
    let out = gaplab(&["figure1", "--ref", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing.txt"));

    let unwritable = dir.path().join("no/such/dir/out.csv");
    assert_eq!(
        gaplab(&["table1", "--out", unwritable.to_str().unwrap()]).status.code(),
        Some(4)
    );
}

#[test]
fn merge_inconsistency_is_a_data_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("skip.txt");
    // a valid prime pair that is not the record for gap 8
    fs::write(&path, "1 2\n2 3\n4 7\n6 23\n8 359\n").unwrap();
    let out = gaplab(&["records", "--limit", "1000", "--ref", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("gap 8"));
}

#[test]
fn predict_models() {
    assert_eq!(stdout(&["predict", "r_shanks", "16"]), "1.08268226589\n");
    assert_eq!(stdout(&["predict", "r_cramer", "1"]), "0\n");
    assert_eq!(stdout(&["predict", "g_wolf", "1e6", "78498"]), "114.703854564\n");
    assert_eq!(stdout(&["predict", "g_cramer", "1e6"]), "190.868331977\n");
    assert_eq!(stdout(&["predict", "pf_wolf", "14"]), "157.777537691\n");
    assert_eq!(stdout(&["predict", "r_main_wolf", "1e6"]), "0.0827959419100\n");
}
