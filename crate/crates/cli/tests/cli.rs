use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wernerlike")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn rows(csv: &str) -> Vec<Vec<f64>> {
    csv.lines().skip(1).map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect()
}

fn sweep_to(path: &Path, extra: &[&str]) -> Vec<u8> {
    let mut args = vec!["sweep", "--out", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    let out = run(&args);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    fs::read(path).unwrap()
}

#[test]
fn sweep_output_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["--kind", "gwl", "--example", "psi_2", "--p-step", "0.1", "--oracle", "--grid", "16", "--with-concurrence"];
    let a = sweep_to(&dir.path().join("a.csv"), &args);
    let b = sweep_to(&dir.path().join("b.csv"), &args);
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    assert!(text.starts_with("p,eof,qd_analytic,qd_numeric,residual,concurrence\n"));
    assert!(!text.contains('\r'));
    let ps: Vec<f64> = rows(&text).iter().map(|r| r[0]).collect();
    assert!(ps.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn werner_endpoint_rows() {
    let text = stdout(&run(&["sweep", "--kind", "werner"]));
    let rows = rows(&text);
    assert_eq!(rows.len(), 134);
    assert_eq!(rows[0], vec![-1.0, 1.0, 1.0]);
    let zero = rows.iter().find(|r| r[0] == 0.0).unwrap();
    assert_eq!(zero, &vec![0.0, 0.0, 0.0]);
}

#[test]
fn maximally_entangled_gwl_eof_turns_on_at_one_third() {
    let text = stdout(&run(&[
        "sweep", "--kind", "gwl", "--concurrence", "1", "--p-start", "0.2", "--p-stop", "0.5", "--p-step", "0.01",
    ]));
    for r in rows(&text) {
        if r[0] <= 1.0 / 3.0 {
            assert_eq!(r[1], 0.0, "p = {}", r[0]);
        } else {
            assert!(r[1] > 0.0, "p = {}", r[0]);
        }
    }
}

#[test]
fn poschl_teller_discord_ordering() {
    let sweep = |kind: &str| {
        rows(&stdout(&run(&[
            "sweep", "--kind", "deformed", "--family", "poschl-teller", "--N", "10", "--alpha", "0.65", "--nmax", "9",
            "--deformed-kind", kind, "--p-start", "0.01", "--p-stop", "0.99", "--p-step", "0.01",
        ])))
    };
    let (a, c, d) = (sweep("A"), sweep("C"), sweep("D"));
    assert_eq!(a.len(), 99);
    for ((ra, rc), rd) in a.iter().zip(&c).zip(&d) {
        assert!(ra[2] > rc[2] && rc[2] > rd[2], "p = {}", ra[0]);
    }
}

#[test]
fn wmatrix_file_and_product_state() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("psi.txt");
    fs::write(&file, "1+0j 0+0j\n0+0j 0+0j\n").unwrap();
    let out = run(&["verify", "--kind", "gwl", "--wmatrix", file.to_str().unwrap(), "--grid", "16"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let text = stdout(&run(&["sweep", "--kind", "gwl", "--wmatrix", file.to_str().unwrap(), "--oracle", "--grid", "16"]));
    for r in rows(&text) {
        assert!(r[2].abs() < 1e-10 && r[3].abs() < 1e-10, "p = {}", r[0]);
    }

    fs::write(&file, "0.70710678+0j 0+0j 0+0j 0.70710678+0j").unwrap();
    assert_eq!(code(&run(&["state-info", "--kind", "gwl", "--wmatrix", file.to_str().unwrap(), "--p", "1"])), 0);
    fs::write(&file, "1+0j 1+0j 0+0j 0+0j").unwrap();
    assert_eq!(code(&run(&["state-info", "--kind", "gwl", "--wmatrix", file.to_str().unwrap(), "--p", "1"])), 1);
}

#[test]
fn state_info_reports_all_quantities() {
    let text = stdout(&run(&["state-info", "--kind", "werner", "--p", "-1", "--oracle", "--grid", "16"]));
    let value = |key: &str| -> f64 {
        let prefix = format!("{key} = ");
        let line = text.lines().find_map(|l| l.strip_prefix(&prefix));
        line.unwrap_or_else(|| panic!("missing `{key}` in\n{text}")).parse().unwrap()
    };
    assert!(text.contains("eigenvalues = "));
    for (key, expected) in
        [("concurrence", 1.0), ("entropy", 0.0), ("entropy_a", 1.0), ("eof", 1.0), ("qd_analytic", 1.0), ("qd_numeric", 1.0)]
    {
        assert!((value(key) - expected).abs() < 1e-12, "{key}");
    }
}

#[test]
fn crossover_reports_both_functionals() {
    let out = run(&["crossover", "--kind", "deformed", "--family", "exciton", "--kappa", "0.3", "--nmax", "5", "--deformed-kind", "D"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("max-over-p: no sign change"));
    let p: f64 = text.lines().find_map(|l| l.strip_prefix("p-crossing: ")).unwrap().parse().unwrap();
    assert!((p - 0.8804).abs() < 1e-3, "{p}");
}

#[test]
fn exit_codes() {
    assert_eq!(code(&run(&["--help"])), 0);
    assert_eq!(code(&run(&["sweep", "--kind", "bogus"])), 1);
    assert_eq!(code(&run(&["sweep"])), 1);
    assert_eq!(code(&run(&["sweep", "--kind", "werner", "--p-start", "-2"])), 1);
    assert_eq!(code(&run(&["sweep", "--kind", "werner", "--p-step", "0"])), 1);
    assert_eq!(code(&run(&["sweep", "--kind", "gwl"])), 1);
    assert_eq!(code(&run(&["sweep", "--kind", "deformed", "--family", "poschl-teller", "--alpha", "0.65"])), 1);
    assert_eq!(code(&run(&["verify", "--kind", "werner", "--p-step", "0.5", "--grid", "16", "--threshold", "0"])), 2);
    assert_eq!(code(&run(&["verify", "--kind", "werner", "--p-step", "0.5", "--grid", "16"])), 0);
    assert_eq!(code(&run(&["crossover", "--kind", "werner", "--lo", "-0.5", "--hi", "-0.4"])), 3);
    assert_eq!(code(&run(&["sweep", "--kind", "werner", "--out", "/nonexistent-dir/x.csv"])), 1);
}
