use std::path::Path;
use std::process::{Command, Output};

use monosum::cli::RunManifest;

fn monosum(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_monosum"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = monosum(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn sums_intervals_example() {
    let text = stdout(&["sums", "--elements", "3,5,7", "--cap", "20", "--intervals"]);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows, ["0,0", "3,3", "5,5", "7,8", "10,10", "12,12", "15,15"]);
}

#[test]
fn optimize_table_has_rows_two_to_rmax() {
    let text = stdout(&["optimize", "table", "--rmax", "5"]);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "r,b0,c_upper,delta_min,identity_gap");
    assert_eq!(lines.len(), 5);
    assert!(lines[1].starts_with("2,3.73205080756888,0.933012701892219,"));
}

#[test]
fn exact_outputs() {
    assert_eq!(
        stdout(&["density", "delta", "--r", "2", "--b", "4"]),
        "r,b,delta,delta_real\n2,4,14/15,0.933333333333333\n"
    );
    let fp = stdout(&["dynamics", "fixed-point", "--z", "1/4"]);
    assert_eq!(
        fp.lines().nth(1).unwrap(),
        "1/4,14/15,7/30,0.933333333333333,0.233333333333333,true"
    );
}

#[test]
fn exit_codes() {
    assert_eq!(
        monosum(&["dynamics", "certify", "--epsilon", "-1"]).status.code(),
        Some(1)
    );
    assert_eq!(monosum(&["sums", "--cap", "10"]).status.code(), Some(1));
    assert_eq!(
        monosum(&["sums", "--elements", "3,x", "--cap", "10"]).status.code(),
        Some(2)
    );
    assert_eq!(monosum(&["no-such-command"]).status.code(), Some(2));
}

fn read(p: &Path) -> Vec<u8> {
    std::fs::read(p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

#[test]
fn reruns_are_byte_identical_and_replay() {
    let dir = tempfile::tempdir().unwrap();
    let d = |name: &str| dir.path().join(name).to_string_lossy().into_owned();
    let sets = d("set.txt");
    std::fs::write(&sets, "6\n12\n18\n24\n30\n7\n").unwrap();
    let commands: Vec<Vec<String>> = vec![
        vec!["sums", "--input", &sets, "--cap", "100", "--k", "3"],
        vec![
            "coloring",
            "classify",
            "--type",
            "loglog",
            "--n",
            "3,16,70000",
            "--inner-base",
            "2",
        ],
        vec!["coloring", "phi", "--h", "1,3,7,20", "--color", "1"],
        vec!["density", "abar", "--h", "1,3,8,21,55"],
        vec!["density", "profile", "--h", "1,3,8,21,55", "--color", "0"],
        vec!["density", "recurrence", "--z", "1/4", "--steps", "30"],
        vec!["density", "log", "--input", &sets, "--x", "100"],
        vec!["density", "cover", "--b", "3.5"],
        vec!["optimize", "root", "--r", "4"],
        vec!["optimize", "minimize", "--r", "3"],
        vec!["optimize", "f2"],
        vec!["verify", "lemma21", "--N", "60", "--trials", "20", "--seed", "5"],
        vec!["verify", "primes", "--lo", "100", "--hi", "271", "--r", "2"],
        vec!["verify", "thm22", "--input", &sets, "--n", "30", "--k", "3"],
    ]
    .into_iter()
    .map(|c| c.into_iter().map(String::from).collect())
    .collect();

    for (i, cmd) in commands.iter().enumerate() {
        let out = d(&format!("out{i}.txt"));
        let mut args: Vec<&str> = cmd.iter().map(String::as_str).collect();
        args.extend(["--out", &out]);
        stdout(&args);
        let first = read(Path::new(&out));
        assert!(!first.is_empty(), "{cmd:?} wrote nothing");
        stdout(&args);
        assert_eq!(first, read(Path::new(&out)), "{cmd:?} is not reproducible");

        let manifest_path = format!("{out}.manifest.json");
        let manifest: RunManifest = serde_json::from_slice(&read(Path::new(&manifest_path))).unwrap();
        assert_eq!(manifest.argv, args);
        assert_eq!(manifest.outputs, [Path::new(&out)]);
        let replay = stdout(&["replay", &manifest_path]);
        assert!(replay.starts_with("replay ok"), "{replay}");
    }
}

#[test]
fn replay_detects_changed_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.csv");
    let out_s = out.to_string_lossy();
    stdout(&["optimize", "table", "--rmax", "4", "--out", &out_s]);
    std::fs::write(&out, "tampered\n").unwrap();
    let res = monosum(&["replay", &format!("{out_s}.manifest.json")]);
    assert_eq!(res.status.code(), Some(1));
}

#[test]
fn certify_writes_snapshots_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let snap = dir.path().join("snap");
    let snap_s = snap.to_string_lossy();
    let text = stdout(&["dynamics", "certify", "--epsilon", "0.1", "--snapshots", &snap_s]);
    let report: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(report["certification"]["status"], "certified");
    for f in ["polygons.csv", "overlay.svg", "certificate.json", "manifest.json"] {
        assert!(snap.join(f).exists(), "missing {f}");
    }
    let csv = std::fs::read_to_string(snap.join("polygons.csv")).unwrap();
    assert!(csv.starts_with("k,vertex_index,a,b\n0,0,"));
    assert!(stdout(&["replay", &snap.join("manifest.json").to_string_lossy()]).starts_with("replay ok"));
}

#[test]
fn thread_count_does_not_change_results() {
    let runs: Vec<String> = ["1", "4"]
        .iter()
        .map(|t| {
            let mut s = stdout(&["--threads", t, "optimize", "table", "--rmax", "8"]);
            s += &stdout(&[
                "--threads",
                t,
                "verify",
                "lemma21",
                "--N",
                "80",
                "--trials",
                "16",
                "--seed",
                "3",
            ]);
            s += &stdout(&[
                "--threads",
                t,
                "dynamics",
                "certify",
                "--epsilon",
                "0.05",
                "--grid",
                "128",
            ]);
            s
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
}

#[test]
fn svg_is_optional_side_output() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("p.svg");
    let csv = stdout(&[
        "density",
        "recurrence",
        "--z",
        "0.3",
        "--steps",
        "10",
        "--svg",
        &svg.to_string_lossy(),
    ]);
    assert!(csv.starts_with("n,abar_real,bbar_real\n"));
    assert!(std::fs::read_to_string(&svg).unwrap().starts_with("<svg"));
}
