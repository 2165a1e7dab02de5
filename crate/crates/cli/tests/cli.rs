use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn ira(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ira")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn graph_export_lists_fifty_edges() {
    let out = stdout(&ira(&["graph", "export"]));
    assert_eq!(out.lines().count(), 50);
    assert!(out.lines().all(|l| l.split_whitespace().count() == 2));
    let info = stdout(&ira(&["graph", "info"]));
    assert!(info.contains("girth Some(5)"));
}

#[test]
fn interleaver_file() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("perm.txt");
    stdout(&ira(&["interleave", "gen", "--n", "1344", "--p", "173", "--s", "1184", "--small", "fig7", "--shift", "skip-first", "--out", path(&file)]));
    let text = fs::read_to_string(&file).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 1345);
    assert_eq!((lines[0], lines[1], lines[25], lines[1321]), ("1344", "1304", "80", "1184"));
    let o = ira(&["interleave", "gen", "--p", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn build_and_decode_a_clean_frame() {
    let dir = tempfile::tempdir().unwrap();
    let perm = dir.path().join("perm.txt");
    let code = dir.path().join("code.txt");
    let llr = dir.path().join("llr.txt");
    stdout(&ira(&["interleave", "gen", "--out", path(&perm)]));
    stdout(&ira(&["code", "build", "--profile", "paper", "--k", "192", "--rate", "1/4", "--interleaver", path(&perm), "--pins", "none", "--out", path(&code)]));
    assert!(fs::read_to_string(&code).unwrap().contains("rep_degree"));
    // the all-zero word is a codeword when nothing is pinned
    fs::write(&llr, "4.0\n".repeat(768)).unwrap();
    for scheduling in ["flooding", "turbo"] {
        let out = stdout(&ira(&["decode", "--scheduling", scheduling, "--iters", "72", "--in", path(&llr), "--code", path(&code)]));
        assert_eq!(out.trim(), "0".repeat(192));
    }
    fs::write(&llr, "4.0\n".repeat(700)).unwrap();
    assert!(!ira(&["decode", "--in", path(&llr), "--code", path(&code)]).status.success());
}

#[test]
fn baseline_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let bits = dir.path().join("bits.txt");
    let llr = dir.path().join("llr.txt");
    let payload: String = (0..192).map(|i| if (i * 7) % 5 < 2 { '1' } else { '0' }).collect();
    fs::write(&bits, &payload).unwrap();
    let coded = stdout(&ira(&["baseline", "encode", "--gens", "463,535,733,745", "--in", path(&bits)]));
    assert_eq!(coded.trim().len(), 800);
    let llrs: String = coded.trim().chars().map(|c| if c == '0' { "1.5\n" } else { "-1.5\n" }).collect();
    fs::write(&llr, llrs).unwrap();
    let decoded = stdout(&ira(&["baseline", "decode", "--gens", "463,535,733,745", "--in", path(&llr)]));
    assert_eq!(decoded.trim(), payload);
}

#[test]
fn defect_report_and_search() {
    let out = stdout(&ira(&["analyze", "defects", "--code", "builtin"]));
    assert!(out.contains("cycle4_total "));
    assert!(out.contains("cycle4_min_degree "));
    let out = stdout(&ira(&["analyze", "search-ps", "--p-range", "1:200", "--s-range", "0:1344", "--sample", "5", "--rows"]));
    assert!(out.starts_with("p,s,cycle4_min_degree,cycle4_total,min_stopping_set_size\n"));
    assert_eq!(out.lines().filter(|l| l.contains(',')).count(), 6);
    assert!(out.contains("best_p "));
}

#[test]
fn sweep_from_config_with_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.cfg");
    let csv = dir.path().join("out.csv");
    let svg = dir.path().join("out.svg");
    fs::write(&cfg, format!("# quick run\nsnr_points = inf\nmax_frames = 8\noutput = {}\n", csv.display())).unwrap();
    let out = stdout(&ira(&["sim", "sweep", "--config", path(&cfg), "--set", &format!("plot={}", svg.display())]));
    assert!(out.starts_with("system,scheduling,ebno_db,frames,bit_errors,frame_errors,ber,fer,iters,seed\n"));
    let text = fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert!(text.contains("ira,turbo,inf,8,0,0,0,0,72,1"));
    assert!(text.contains("conv,viterbi,inf,8,0,0,0,0,0,1"));
    assert!(fs::read_to_string(&svg).unwrap().starts_with("<svg"));

    fs::write(&cfg, "snr_points = 1\ncolour = blue\n").unwrap();
    let o = ira(&["sim", "sweep", "--config", path(&cfg)]);
    assert!(!o.status.success());
    assert_eq!(o.status.code(), Some(2));
    let o = ira(&["sim", "sweep", "--set", "max_frames=0"]);
    assert_eq!(o.status.code(), Some(2));
}
