use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use pauliwmc::dimacs;
use pauliwmc::equivalence::{check_formulas, miter};
use pauliwmc::qasm::parse_qasm;
use pauliwmc::wmc::count;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pauliwmc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn reflexive_check_exits_zero() {
    let tt = fixture("tt.qasm");
    let o = run(&["check", path(&tt), path(&tt)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "equivalent");
}

#[test]
fn tt_versus_s() {
    let o = run(&["check", path(&fixture("tt.qasm")), path(&fixture("s.qasm"))]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn removed_gate_is_reported_with_witness() {
    let o = run(&[
        "check",
        path(&fixture("tt.qasm")),
        path(&fixture("s_removed.qasm")),
        "--json",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["verdict"], "not_equivalent");
    assert_eq!(report["witness"]["pauli"], "X");
    assert_eq!(report["witness"]["qubit"], 1);
}

#[test]
fn usage_errors_exit_three() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(3));
    let o = run(&["check", "/nonexistent.qasm", "/nonexistent.qasm"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error: io:"));
    let o = run(&[
        "check",
        path(&fixture("tt.qasm")),
        path(&fixture("tt.qasm")),
        "--epsilon",
        "-1",
    ]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn oracle_subcommand() {
    let o = run(&["oracle", "check", path(&fixture("tt.qasm")), path(&fixture("s.qasm"))]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&[
        "oracle",
        "check",
        path(&fixture("tt.qasm")),
        path(&fixture("s_removed.qasm")),
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn encoded_files_count_like_in_process() {
    let dir = tempfile::tempdir().unwrap();
    let text = run(&["bench", "gen", "--qubits", "3", "--gates", "25", "--seed", "9", "--full"]);
    let u_path = dir.path().join("u.qasm");
    std::fs::write(&u_path, &text.stdout).unwrap();
    let inj = run(&["bench", "inject", path(&u_path), "--kind", "remove", "--seed", "2"]);
    assert_eq!(inj.status.code(), Some(0));
    let v_path = dir.path().join("v.qasm");
    std::fs::write(&v_path, &inj.stdout).unwrap();

    for dialect in ["plain", "mcc"] {
        let out = dir.path().join(dialect);
        let o = run(&[
            "encode",
            path(&u_path),
            path(&v_path),
            "--out",
            path(&out),
            "--dialect",
            dialect,
        ]);
        assert_eq!(o.status.code(), Some(0));
        let u = parse_qasm(&String::from_utf8(text.stdout.clone()).unwrap()).unwrap();
        let v = parse_qasm(&String::from_utf8(inj.stdout.clone()).unwrap()).unwrap();
        for (spec, f) in check_formulas(&miter(&u, &v).unwrap()).unwrap() {
            let file = out.join(format!("check_{}.cnf", spec.label()));
            let want = count(&f).unwrap().value.to_f64();
            let reloaded = count(&dimacs::read_instance(&file).unwrap()).unwrap().value.to_f64();
            assert!((reloaded - want).abs() <= 1e-9);
            let printed = run(&["count", path(&file)]);
            assert_eq!(printed.status.code(), Some(0));
            let shown = stdout(&printed);
            let shown = shown.trim();
            let value = shown
                .parse::<f64>()
                .or_else(|_| shown.parse::<pauliwmc::ExactWeight>().map(|w| w.to_f64()))
                .unwrap();
            assert!((value - want).abs() <= 1e-9, "{shown} vs {want}");
        }
    }
}

#[test]
fn bench_run_is_reproducible() {
    let args = [
        "bench", "run", "--qubits", "3,4", "--gates", "10,20", "--seed", "5", "--error", "remove",
    ];
    let strip = |o: Output| -> Vec<String> {
        stdout(&o)
            .lines()
            .map(|l| l.rsplit_once(',').unwrap().0.to_string())
            .collect()
    };
    let a = strip(run(&args));
    let b = strip(run(&args));
    assert_eq!(a, b);
    assert_eq!(a[0], "case,n,gates,gates_prime,verdict");
    assert_eq!(a.len(), 5);
}

#[test]
fn tt_vs_s_golden_files() {
    let u = parse_qasm(&std::fs::read_to_string(fixture("tt.qasm")).unwrap()).unwrap();
    let v = parse_qasm(&std::fs::read_to_string(fixture("s.qasm")).unwrap()).unwrap();
    for (spec, f) in check_formulas(&miter(&u, &v).unwrap()).unwrap() {
        let stem = format!("tt_vs_s/check_{}", spec.label());
        let cnf = std::fs::read_to_string(fixture(&format!("{stem}.cnf"))).unwrap();
        let sidecar = std::fs::read_to_string(fixture(&format!("{stem}.weights.json"))).unwrap();
        assert_eq!(dimacs::emit(&f), cnf);
        assert_eq!(dimacs::sidecar_json(&f).unwrap(), sidecar);
    }
}
