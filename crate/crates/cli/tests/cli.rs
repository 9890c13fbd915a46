use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures").join(name)
}

fn hgd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hgd")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn triangle_ghd_accepts_and_validates() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.hgd");
    let tri = fixture("triangle.hg");
    let o = hgd(&["solve", "--kind", "ghd", "-k", "2", p(&tri), "-o", p(&out)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let o = hgd(&["validate", "--kind", "ghd", "-k", "2", p(&tri), p(&out)]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("valid GHD"));

    // Too small a width bound turns the same file into a violation.
    let o = hgd(&["validate", "--kind", "ghd", "-k", "1", p(&tri), p(&out)]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("violation"));
}

#[test]
fn triangle_fhd_below_two_rejected_with_c2() {
    let tri = fixture("triangle.hg");
    let o = hgd(&["solve", "--kind", "fhd", "-k", "3/2", "--c", "2", p(&tri)]);
    assert_eq!(code(&o), 1);
    let o = hgd(&["solve", "--kind", "fhd", "-k", "3/2", p(&tri)]);
    assert_eq!(code(&o), 0);
}

#[test]
fn mutated_decomposition_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let c5 = fixture("c5.hg");
    let good = dir.path().join("c5.hgd");
    let o = hgd(&["solve", "--kind", "hd", "-k", "2", p(&c5), "-o", p(&good)]);
    assert_eq!(code(&o), 0);
    let text = fs::read_to_string(&good).unwrap();
    // Drop the last node; some edge is then no longer covered by any bag.
    let lines: Vec<&str> = text.lines().collect();
    let bad = dir.path().join("bad.hgd");
    fs::write(&bad, lines[..lines.len() - 1].join("\n")).unwrap();
    let o = hgd(&["validate", "--kind", "hd", "-k", "2", p(&c5), p(&bad)]);
    assert_eq!(code(&o), 1, "{}", stdout(&o));
}

#[test]
fn input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let broken = dir.path().join("broken.hg");
    fs::write(&broken, "e1(a,b,\n").unwrap();
    assert_eq!(code(&hgd(&["solve", "--kind", "hd", "-k", "1", p(&broken)])), 2);
    assert_eq!(code(&hgd(&["solve", "--kind", "hd", "-k", "3/2", p(&fixture("triangle.hg"))])), 2);
    assert_eq!(code(&hgd(&["solve", "--kind", "ghd", "-k", "2", "/does/not/exist.hg"])), 2);
    assert_eq!(code(&hgd(&["solve", "--kind", "ghd", "-k", "2", "--mode", "bmip:1", p(&broken)])), 2);
}

#[test]
fn subedge_budget_exit_three() {
    let o = hgd(&["solve", "--kind", "ghd", "-k", "2", "--budget", "1", p(&fixture("fano.hg"))]);
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn analyze_prints_one_row_per_file() {
    let o = hgd(&["analyze", p(&fixture("triangle.hg")), p(&fixture("k4.hg"))]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    let lines: Vec<&str> = s.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].starts_with("instance,degree,iwidth"));
    assert!(lines[1].ends_with("triangle.hg,2,1,0,0,1,2"));
}

#[test]
fn reduction_witness_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("r");
    let o = hgd(&[
        "gen-3sat",
        "--formula",
        "(x1 | !x2 | x3) & (!x1 | x2 | !x3)",
        "--assignment",
        "TFF",
        "--emit-witness",
        "-o",
        p(&prefix),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let layout = fs::read_to_string(dir.path().join("r.layout")).unwrap();
    assert_eq!(layout.lines().next(), Some("status: satisfiable"));
    let o = hgd(&["validate", "--kind", "ghd", "-k", "2", p(&dir.path().join("r.hg")), p(&dir.path().join("r.hgd"))]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));

    // A falsifying assignment is refused as input.
    let o = hgd(&["gen-3sat", "--formula", "(x1 | x2 | x3)", "--assignment", "FFF", "--emit-witness"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn approx_and_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let tri = fixture("triangle.hg");
    let f = dir.path().join("f.hgd");
    assert_eq!(code(&hgd(&["solve", "--kind", "fhd", "-k", "3/2", p(&tri), "-o", p(&f)])), 0);
    for method in ["bagwise", "degree"] {
        let g = dir.path().join(format!("{method}.hgd"));
        let o = hgd(&["approx", "--method", method, p(&tri), p(&f)]);
        assert_eq!(code(&o), 0);
        fs::write(&g, stdout(&o)).unwrap();
        assert_eq!(code(&hgd(&["validate", "--kind", "ghd", "-k", "2", p(&tri), p(&g)])), 0);
    }
    let o = hgd(&["bounds", "-k", "3/2", "--csv", p(&tri)]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).lines().count(), 2);
}

#[test]
fn pad_and_gadget_emit_hypergraphs() {
    let dir = tempfile::tempdir().unwrap();
    let padded = dir.path().join("p.hg");
    let o = hgd(&["pad", "--l", "2", p(&fixture("triangle.hg"))]);
    assert_eq!(code(&o), 0);
    fs::write(&padded, stdout(&o)).unwrap();
    // Width 2 plus a shift of 2.
    assert_eq!(code(&hgd(&["solve", "--kind", "ghd", "-k", "3", p(&padded)])), 1);
    assert_eq!(code(&hgd(&["pad", "--l", "0", p(&fixture("triangle.hg"))])), 2);

    let o = hgd(&["gen-gadget", "--m1", "p,q", "--m2", "r"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("EA1("));
}
