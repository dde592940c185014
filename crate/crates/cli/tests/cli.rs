use std::path::{Path, PathBuf};
use std::process::Command;

use liftcodes::{Field, Matrix};
use liftcodes_cli::config::parse_config_str;
use liftcodes_cli::export::{from_alist, from_matrix_market, to_alist, to_matrix_market};
use liftcodes_cli::run_command;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)
}

fn run(args: &[&str]) -> (i32, String, String) {
    let mut argv = vec!["liftcodes".to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_command(&argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn check_on_toric_passes() {
    let p = config("toric3.cfg");
    let (code, out, _) = run(&["check", p.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.starts_with("# liftcodes report\n"));
    assert!(out.contains("css_condition: exact pass"));
    assert!(out.contains("css_k: exact 2"));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_liftcodes");
    let p = config("toric3.cfg");
    let ok = Command::new(bin).args(["check", p.to_str().unwrap()]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let bad = Command::new(bin).arg("frobnicate").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    let capped = Command::new(bin).args(["--cap", "4", "distance", p.to_str().unwrap()]).output().unwrap();
    assert_eq!(capped.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&capped.stderr).contains("rerun with --cap"));
}

#[test]
fn usage_errors() {
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["check", "/nonexistent/job.cfg"]).0, 2);
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("dup.cfg");
    std::fs::write(&bad, "[field]\nq = 2\nq = 3\n").unwrap();
    let (code, _, err) = run(&["check", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("duplicate key"));
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn distance_over_the_cap_is_refused() {
    let p = config("toric3.cfg");
    let (code, _, err) = run(&["--cap", "4", "distance", p.to_str().unwrap()]);
    assert_eq!(code, 3);
    assert!(err.contains("rerun with --cap"));
    let (code, out, _) = run(&["distance", p.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.contains("d: exact 3"));
}

#[test]
fn export_round_trips_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let p = config("toric3.cfg");
    for (fmt, file) in [("alist", "hx.alist"), ("mm", "hx.mtx")] {
        let dest = dir.path().join(file);
        let (code, _, _) = run(&["export", p.to_str().unwrap(), "--format", fmt, "--out", dest.to_str().unwrap(), "--matrix", "hx"]);
        assert_eq!(code, 0);
        let text = std::fs::read_to_string(&dest).unwrap();
        let m = if fmt == "alist" { from_alist(&text).unwrap() } else { from_matrix_market(&text, Field::binary()).unwrap() };
        assert_eq!(m.shape(), (9, 18));
        assert_eq!(m.nnz(), 36);
    }
    let rep = dir.path().join("r.txt");
    assert_eq!(run(&["export", p.to_str().unwrap(), "--format", "report", "--out", rep.to_str().unwrap()]).0, 0);
    assert!(std::fs::read_to_string(&rep).unwrap().contains("[distance]"));
    assert_eq!(run(&["export", p.to_str().unwrap(), "--format", "mm", "--out", "/tmp/x", "--matrix", "nope"]).0, 2);
}

#[test]
fn random_matrices_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for t in 0..100 {
        let q = [2u32, 2, 3, 5, 7][t % 5];
        let f = Field::new(q as u64).unwrap();
        let (r, c) = (rng.gen_range(0..12), rng.gen_range(1..15));
        let dense: Vec<Vec<u32>> = (0..r)
            .map(|_| (0..c).map(|_| if rng.gen_bool(0.3) { rng.gen_range(1..q) } else { 0 }).collect())
            .collect();
        let m = Matrix::from_dense_with_cols(f, &dense, c).unwrap();
        assert_eq!(from_matrix_market(&to_matrix_market(&m), f).unwrap(), m);
        if q == 2 {
            assert_eq!(from_alist(&to_alist(&m).unwrap()).unwrap(), m);
        } else {
            assert!(to_alist(&m).is_err());
        }
    }
}

#[test]
fn config_echo_is_idempotent() {
    for name in ["toric3.cfg", "toric3_decode.cfg", "s3_cayley.cfg", "ternary_toric.cfg", "lps_13_17.cfg"] {
        let text = std::fs::read_to_string(config(name)).unwrap();
        let once = parse_config_str(&text).unwrap();
        let echo = once.render();
        let twice = parse_config_str(&echo).unwrap();
        assert_eq!(once, twice, "{name}");
        assert_eq!(echo, twice.render(), "{name}");
    }
    let e = parse_config_str("[field]\nq = 2\n[group]\nkind = cyclic\nkind = symmetric\n").unwrap_err();
    assert_eq!(e.line, 5);
}

#[test]
fn reports_are_byte_identical() {
    for name in ["toric3.cfg", "toric3_decode.cfg", "s3_cayley.cfg"] {
        let p = config(name);
        let a = run(&["--seed", "3", "construct", p.to_str().unwrap()]);
        let b = run(&["--seed", "3", "construct", p.to_str().unwrap()]);
        assert_eq!(a.0, 0, "{name}: {}", a.2);
        assert_eq!(a, b);
    }
    // thread count does not change results
    let p = config("toric3_decode.cfg");
    assert_eq!(run(&["--threads", "1", "decode", p.to_str().unwrap()]).1, run(&["--threads", "3", "decode", p.to_str().unwrap()]).1);
}
