use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use schmidt_bec_cli::config::Method;
use schmidt_bec_cli::sweep::{self, COLUMNS};
use schmidt_bec_cli::{cmd_ground_state, cmd_sweep, cmd_verify, RunConfig};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_schmidt-bec"))
}

fn config(text: &str) -> RunConfig {
    RunConfig::from_toml(text).unwrap()
}

fn trap(f_t: f64, d: u32) -> String {
    format!("[trap]\nomega_t_hz = {f_t}\nomega_l_hz = 3.5\nd = {d}\n")
}

#[test]
fn sweep_header_matches_golden_file() {
    let cfg = RunConfig::load(&data("golden.toml")).unwrap();
    let rows = cmd_sweep(&cfg, 2).unwrap();
    let mut buf = Vec::new();
    sweep::write_csv(&cfg, &rows, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let head: Vec<&str> = text.lines().take(2).collect();
    let golden = std::fs::read_to_string(data("sweep_header.golden")).unwrap();
    assert_eq!(head, golden.lines().collect::<Vec<_>>());
    assert_eq!(head[1], COLUMNS.join(","));
    assert_eq!(text.lines().count(), 2 + 4);
}

#[test]
fn formula_figure_grid_is_fast() {
    let start = Instant::now();
    let mut rows = 0;
    for d in [1, 2] {
        for f_t in [35.0, 175.0, 350.0] {
            let cfg = config(&format!(
                "{}[sweep]\nmethods = [\"formula-first-order\", \"formula-exact-RL\"]\n",
                trap(f_t, d)
            ));
            let out = cmd_sweep(&cfg, 1).unwrap();
            assert!(out.iter().all(|r| r.error.is_none()));
            rows += out.len();
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert_eq!(rows, 2 * 3 * 30 * 2);
    assert!(elapsed < 5.0, "{elapsed} s");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "[trap]\nomega_t_hz = 175.0\nomega_l_hz = 3.5\nd = 7\n").unwrap();
    let out = bin().args(["sweep", "--config"]).arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("trap.d"));

    let capped = dir.path().join("capped.toml");
    std::fs::write(&capped, format!("{}[sweep]\nn = [1000.0]\nmethods = [\"solver-3d\"]\n", trap(175.0, 1))).unwrap();
    let out = bin().args(["sweep", "--mem-cap", "0.01", "--config"]).arg(&capped).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    let good = data("golden.toml");
    let csv = dir.path().join("out.csv");
    let out = bin().args(["sweep", "--workers", "2", "--config"]).arg(&good).arg("--out").arg(&csv).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(std::fs::read_to_string(&csv).unwrap().starts_with("# schmidt-bec"));

    let out = bin().args(["scales", "--config"]).arg(&good).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("N_T ="));

    let garbage = dir.path().join("garbage.bin");
    std::fs::write(&garbage, b"not a field").unwrap();
    let out = bin().arg("verify").arg(&garbage).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn noninteracting_ground_state_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(&format!(
        "{}[grid]\npoints = [32, 32, 128]\n[numerics]\nfixed_iterations = 3000\ndt = 0.02\n",
        trap(175.0, 1)
    ));
    let first = dir.path().join("a.bin");
    let a = cmd_ground_state(&cfg, 1.0, &first).unwrap();
    let bare = 1.0 + 0.5 * 3.5 / 175.0;
    assert!((a.mu_over_hbar_omega_t / bare - 1.0).abs() < 1e-4, "{}", a.mu_over_hbar_omega_t);
    assert!((a.purity_svd - 1.0).abs() < 1e-8);

    let report = cmd_verify(&first).unwrap();
    assert_eq!(report.sidecar_matches, Some(true));
    assert!((report.check.norm - 1.0).abs() < 1e-10);

    let second = dir.path().join("b.bin");
    let b = cmd_ground_state(&cfg, 1.0, &second).unwrap();
    assert_eq!(a.mu_over_hbar_omega_t.to_bits(), b.mu_over_hbar_omega_t.to_bits());
    assert_eq!(std::fs::read(&first).unwrap(), std::fs::read(&second).unwrap());
}

#[test]
fn tri_method_sweep_agrees_and_purity_drops_at_n_t() {
    let cfg = config(&format!(
        "{}[sweep]\nrelative = true\nn = [0.02, 0.05, 0.1, 1.0]\nmethods = [\"formula-exact-RL\", \"formula-first-order\", \"solver-3d\", \"variational\"]\n[grid]\npoints = [32, 32, 256]\n",
        trap(175.0, 1)
    ));
    let rows = cmd_sweep(&cfg, 4).unwrap();
    assert!(rows.iter().all(|r| r.error.is_none()), "{rows:?}");
    let n_t = cfg.upper_critical_n();
    for &n in &cfg.atoms[..3] {
        let at: Vec<_> = rows.iter().filter(|r| r.n == n).collect();
        let solver = at.iter().find(|r| r.method == Method::Solver3d).unwrap().mu_over_hbar_omega_t.unwrap();
        for r in &at {
            let mu = r.mu_over_hbar_omega_t.unwrap();
            assert!((mu / solver - 1.0).abs() < 0.02, "N/N_T = {}: {} {mu} vs {solver}", n / n_t, r.method);
        }
    }
    let top = rows
        .iter()
        .find(|r| r.method == Method::Solver3d && r.n == cfg.atoms[3])
        .unwrap();
    assert!(top.purity.unwrap() < 0.999, "{:?}", top.purity);
    assert!(top.r_l.is_none());
}
