use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pseudoherm"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut rdr = csv::Reader::from_path(path).unwrap();
    let header = rdr.headers().unwrap().iter().map(String::from).collect();
    let rows = rdr
        .records()
        .map(|r| r.unwrap().iter().map(|x| x.parse::<f64>().unwrap()).collect())
        .collect();
    (header, rows)
}

#[test]
fn times_reports_critical_time() {
    let o = run(&[
        "times",
        "--kind",
        "su11",
        "--phi0",
        "100",
        "--lambda0",
        "0.01",
        "--gamma",
        "0.5",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    let line = text.lines().find(|l| l.starts_with("T+")).unwrap();
    let gt: f64 = line.rsplit('=').next().unwrap().trim().parse().unwrap();
    assert!((gt - 2.146).abs() < 1e-3, "{text}");
}

#[test]
fn entropy_single_value() {
    let o = run(&["entropy", "--kind", "su2", "--n", "1", "--r", "0.7853981634"]);
    assert!(o.status.success());
    let v: f64 = stdout(&o).trim().parse().unwrap();
    assert!((v - 0.5).abs() < 1e-10);
}

#[test]
fn dyson_preset_matches_closed_forms() {
    use pseudoherm::dyson::{k0_closed_form, GaussState};
    use pseudoherm::HamiltonianProfile;
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = run(&["dyson", "--preset", "fig2", "--out", out]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let (header, rows) = read_csv(&dir.path().join("fig2_dyson.csv"));
    assert_eq!(
        header,
        ["t", "gamma_t", "Phi", "phi", "Lambda", "z_abs", "eps", "mu_abs"]
    );
    assert_eq!(rows.len(), 400);
    let g0 = GaussState::from_signed(-100.0, 0.0, 0.01).unwrap();
    let h = HamiltonianProfile::linear_ramp(0.0, 0.5);
    for row in rows.iter().step_by(37) {
        let c = k0_closed_form(&g0, &h, row[0], pseudoherm::AlgebraKind::Su11).unwrap();
        assert_eq!(row[2], c.amplitude);
        assert_eq!(row[4], c.cartan);
    }
    let last = rows.last().unwrap();
    assert!((last[1] - 0.999 * 2.145_965_79).abs() < 1e-6);
    assert!(last[5] < 1.0);
    assert!(dir.path().join("fig2_dyson.manifest.json").exists());
}

#[test]
fn fig3_run_with_plots_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = run(&["run", "--preset", "fig3", "--out", out, "--svg"]);
    assert!(o.status.success());
    let (header, rows) = read_csv(&dir.path().join("fig3.csv"));
    assert_eq!(header, ["t", "gamma_t", "S_lin", "r"]);
    let s: Vec<f64> = rows.iter().map(|r| r[2]).collect();
    assert!(s.windows(2).all(|w| w[1] >= w[0]));
    assert!(*s.last().unwrap() > 0.99);
    for f in ["fig3_S_lin.svg", "fig3_r.svg"] {
        let svg = std::fs::read_to_string(dir.path().join(f)).unwrap();
        assert!(svg.starts_with("<svg"));
    }
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("fig3.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["scenario"]["kind"], "su11");
    assert_eq!(manifest["integrator"]["method"], "closed");
    assert_eq!(manifest["breakdown"], serde_json::Value::Null);
    let csv_bytes = std::fs::read(dir.path().join("fig3.csv")).unwrap();
    let entry = manifest["outputs"]
        .as_array()
        .unwrap()
        .iter()
        .find(|e| e["file"] == "fig3.csv")
        .unwrap();
    assert_eq!(entry["sha256"], pseudoherm_cli::output::sha256_hex(&csv_bytes));
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let o = run(&["run", "--preset", "fig7", "--out", d.path().to_str().unwrap(), "--svg"]);
        assert!(o.status.success());
    }
    let mut names: Vec<_> = std::fs::read_dir(a.path())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    names.sort();
    assert!(names.len() >= 4);
    for n in names {
        assert_eq!(
            std::fs::read(a.path().join(&n)).unwrap(),
            std::fs::read(b.path().join(&n)).unwrap()
        );
    }
}

#[test]
fn figures_runs_all_presets() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin()
        .args(["figures", "--out", dir.path().to_str().unwrap()])
        .env("PSEUDOHERM_THREADS", "2")
        .output()
        .unwrap();
    assert!(o.status.success());
    for i in 1..=7 {
        assert!(dir.path().join(format!("fig{i}.csv")).exists());
        assert!(dir.path().join(format!("fig{i}.manifest.json")).exists());
    }
    let (header, rows) = read_csv(&dir.path().join("fig4.csv"));
    assert_eq!(header, ["n", "S_lin"]);
    assert!((rows[9][1] - 0.823_803).abs() < 1e-6);
    assert!((rows[99][1] - 0.943_651_5).abs() < 1e-6);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, text: &str| {
        let p = dir.path().join(name);
        std::fs::write(&p, text).unwrap();
        p
    };
    let out = dir.path().join("out");
    let out = out.to_str().unwrap();

    let bad_key = write("bad.ini", "[scenario]\nkind = su2\n[map]\ncolour = red\n");
    assert_eq!(
        run(&["run", bad_key.to_str().unwrap(), "--out", out]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["run", "--preset", "fig9", "--out", out]).status.code(), Some(2));
    assert_eq!(run(&["run", "/nonexistent.ini", "--out", out]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));

    // |z| = 4 > 1: the su(1,1) map is invalid from the start.
    let invalid = write(
        "invalid.ini",
        "[scenario]\nkind = su11\n[map]\nPhi0 = 2\nLambda0 = 6\n[time]\nt_end = 1\n",
    );
    assert_eq!(
        run(&["run", invalid.to_str().unwrap(), "--out", out]).status.code(),
        Some(3)
    );

    // Phase-lock offset breaks the closed-form squeeze branch: negative r.
    let numerical = write(
        "numerical.ini",
        "[scenario]\nkind = su2\n[evolution]\nl = 2\nr0 = 0\n[time]\nt_end = 4\n",
    );
    assert_eq!(
        run(&["run", numerical.to_str().unwrap(), "--out", out]).status.code(),
        Some(4)
    );

    let ok = write("ok.ini", "[scenario]\nname = ok\nkind = su2\n[time]\nsamples = 5\n");
    assert_eq!(run(&["run", ok.to_str().unwrap(), "--out", out]).status.code(), Some(0));
}

#[test]
fn general_profile_runs_with_ode() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("gen.ini");
    std::fs::write(
        &cfg,
        "[scenario]\nname = gen\nkind = su11\n[map]\nPhi0 = 0.3\nphi0 = 0.2\nLambda0 = 2.5\n\
         [hamiltonian]\ngamma = 0.3\nomega_R = 1\nalpha_abs = 0.15\nalpha_phase = 0.3\nbeta_abs = 0.1\nbeta_phase = -0.2\n\
         [evolution]\nr0 = 0.1\n[time]\nt_end = 1.5\nsamples = 31\n\
         [output]\nseries = Phi, Lambda, r, S_lin, herm_residual\n",
    )
    .unwrap();
    let o = run(&["run", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let (header, rows) = read_csv(&dir.path().join("gen.csv"));
    assert_eq!(header, ["t", "gamma_t", "Phi", "Lambda", "r", "S_lin", "herm_residual"]);
    assert!(!rows.is_empty());
    for r in &rows {
        assert!(r[6] < 1e-8);
        assert!((r[5] - (1.0 - 1.0 / (2.0 * r[4]).cosh())).abs() < 1e-14);
    }
}
