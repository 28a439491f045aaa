mod common;

use std::fs;
use std::process::Command;

use common::{fan, FANS};
use proptest::prelude::*;

use toric_sections::exec::Execution;
use toric_sections::io::{
    csv_bytes, load_divisor, load_divisor_for, load_fan, sweep_rows, write_divisor, write_fan,
    FanFile,
};
use toric_sections::multiplication::CheckMode;
use toric_sections::reduction::{sweep_cokernel_with, SweepOptions};
use toric_sections::toric::{validate_fan, TorusDivisor};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_toric-sections"))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fan_and_divisor_files_round_trip(
        k in 0..FANS.len(),
        rot in 0usize..12,
        c in prop::collection::vec(-9i64..=9, 12),
        label in prop::option::of("[a-zA-Z0-9 _-]{0,12}"),
    ) {
        let dir = tempfile::tempdir().unwrap();
        let base = fan(FANS[k]);
        let mut rays = FanFile::from_fan(&base).rays;
        let r = rot % rays.len();
        rays.rotate_left(r);
        let f = FanFile { rays: rays.clone() }.to_fan().unwrap();
        let fp = dir.path().join("fan.json");
        write_fan(&f, &fp).unwrap();
        let back = load_fan(&fp).unwrap();
        prop_assert_eq!(&back, &f);
        prop_assert_eq!(FanFile::from_fan(&back).rays, rays);

        let d = TorusDivisor::new(c[..f.len()].to_vec());
        let dp = dir.path().join("d.json");
        write_divisor(&d, label.as_deref(), &dp).unwrap();
        prop_assert_eq!(load_divisor(&dp).unwrap(), d.clone());
        let stored = load_divisor_for(&f, &dp).unwrap();
        prop_assert_eq!(f.to_input_order(stored.coeffs()), d.coeffs().to_vec());
    }
}

#[test]
fn rotated_and_validated_fans_agree() {
    let f = fan("p2/0/0");
    let rays: Vec<_> = f.rays().to_vec();
    let mut r = rays.clone();
    r.rotate_left(3);
    assert_eq!(validate_fan(&r).unwrap().rays(), f.rays());
}

#[test]
fn sweep_csv_is_schedule_independent() {
    let f = fan("p2/0");
    let l = TorusDivisor::new(vec![0, 0, 1, 1]);
    let bytes = |exec, seed| {
        let opts = SweepOptions {
            budget: 400,
            seed,
            exec,
            mode: CheckMode::Both,
            keep_instances: true,
        };
        let r = sweep_cokernel_with(&f, &l, 9, None, &opts).unwrap();
        csv_bytes(&sweep_rows("p2/0", &f, &r)).unwrap()
    };
    let a = bytes(Execution::Sequential, Some(3));
    assert_eq!(a, bytes(Execution::Parallel, Some(3)));
    assert_eq!(a, bytes(Execution::Sequential, Some(3)));
    assert_ne!(a, bytes(Execution::Sequential, Some(4)));
    assert_eq!(String::from_utf8(a).unwrap().lines().count(), 401);
}

struct Files(tempfile::TempDir);

impl Files {
    fn new() -> Self {
        let f = Files(tempfile::tempdir().unwrap());
        f.put("f2.json", r#"{"rays": [[1,0],[0,1],[-1,2],[0,-1]]}"#);
        f.put("L.json", r#"{"coeffs": [1,0,1,1], "label": "L"}"#);
        f.put("E.json", r#"{"coeffs": [0,1,0,0]}"#);
        f.put("G.json", r#"{"coeffs": [1,1,1,1]}"#);
        f
    }

    fn put(&self, name: &str, text: &str) -> String {
        let p = self.0.path().join(name);
        fs::write(&p, text).unwrap();
        p.to_string_lossy().into_owned()
    }

    fn p(&self, name: &str) -> String {
        self.0.path().join(name).to_string_lossy().into_owned()
    }
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = bin().args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn binary_exit_codes() {
    let f = Files::new();
    let (code, out, _) = run(&["fan-check", &f.p("f2.json")]);
    assert_eq!((code, out.as_str()), (0, "valid: smooth complete, 4 rays\n"));

    let (code, out, _) = run(&["cokernel", &f.p("f2.json"), &f.p("L.json"), &f.p("E.json")]);
    assert_eq!(code, 0);
    assert!(out.contains("coker_dim: 1") && out.contains("missing: (-1,-1)"), "{out}");

    let (code, out, _) = run(&["verify", &f.p("f2.json"), &f.p("L.json"), &f.p("G.json"), "--mode", "both"]);
    assert_eq!(code, 0);
    assert!(out.contains("structured_fallbacks: 0"), "{out}");

    let bad = f.put("bad.json", r#"{"rays": [[2,0],[0,1],[-1,-1]]}"#);
    let (code, _, err) = run(&["fan-check", &bad]);
    assert_eq!(code, 1);
    assert!(err.contains("ray 0"), "{err}");

    let garbage = f.put("g.json", "not json at all");
    assert_eq!(run(&["fan-check", &garbage]).0, 1);
    assert_eq!(run(&["plot", &f.p("f2.json"), &f.p("L.json"), &f.p("E.json")]).0, 2);
    assert_eq!(run(&["sweep", &f.p("f2.json"), &f.p("L.json"), "--max-coeff", "many"]).0, 2);
    assert_eq!(run(&["gen", "divisor", &f.p("f2.json"), "--class", "ample", "--max-coeff", "3"]).0, 2);
    // 4^4 - 1 candidates exceed a budget of 10 and no seed is given
    let (code, _, err) = run(&["sweep", &f.p("f2.json"), &f.p("L.json"), "--max-coeff", "3", "--budget", "10"]);
    assert_eq!(code, 1);
    assert!(err.contains("budget"), "{err}");
}

#[test]
fn binary_sweep_is_byte_identical() {
    let f = Files::new();
    let args = |out: &str| {
        vec![
            "sweep".to_string(),
            f.p("f2.json"),
            f.p("L.json"),
            "--max-coeff".into(),
            "12".into(),
            "--budget".into(),
            "500".into(),
            "--seed".into(),
            "77".into(),
            "--out".into(),
            f.p(out),
        ]
    };
    for out in ["a.csv", "b.csv"] {
        let a = args(out);
        let v: Vec<&str> = a.iter().map(String::as_str).collect();
        assert_eq!(run(&v).0, 0);
    }
    let a = fs::read(f.p("a.csv")).unwrap();
    assert_eq!(a, fs::read(f.p("b.csv")).unwrap());
    assert!(String::from_utf8(a).unwrap().lines().nth(1).unwrap().ends_with(",77"));
}

#[test]
fn plot_writes_svg() {
    let f = Files::new();
    let svg = f.p("fig.svg");
    let (code, _, _) = run(&["plot", &f.p("f2.json"), &f.p("L.json"), &f.p("E.json"), "--out", &svg]);
    assert_eq!(code, 0);
    let text = fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<svg") && text.contains("class=\"missing\""));
}
