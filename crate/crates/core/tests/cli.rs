use std::path::Path;
use std::process::{Command, Output};

use cnslab::diagnostics::{DiagnosticsReport, REPORT_SCHEMA_VERSION};

fn cnslab(args: &[&str]) -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_cnslab"));
    c.args(args).env_remove("CNSLAB_OUTPUT_DIR");
    c
}

fn run(cmd: &mut Command) -> Output {
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

const SMALL: &str = r#"
epsilons = [0.04, 0.02]
t_end = 0.1
output_interval = 0.005

[diagnostics]
residual_box = { x = [-1.0, 1.0], t = [0.02, 0.1] }
test_function = { x0 = 0.0, wx = 0.8, t0 = 0.05, wt = 0.04 }
"#;

fn write_small(dir: &Path) -> String {
    let p = dir.join("small.toml");
    std::fs::write(&p, SMALL).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn help_and_usage_errors_use_conventional_exit_codes() {
    let o = run(&mut cnslab(&["--help"]));
    assert_eq!(o.status.code(), Some(0));
    for sub in ["run", "sweep", "riemann", "check-entropy", "validate-data"] {
        assert!(stdout(&o).contains(sub), "help lacks {sub}");
        assert_eq!(run(&mut cnslab(&[sub, "--help"])).status.code(), Some(0), "{sub} --help");
    }
    assert!(stdout(&o).contains("CNSLAB_OUTPUT_DIR"));
    assert_eq!(run(&mut cnslab(&["frobnicate"])).status.code(), Some(2));
    assert_eq!(run(&mut cnslab(&["riemann", "--bogus"])).status.code(), Some(2));
    assert_eq!(run(&mut cnslab(&[])).status.code(), Some(2));
    assert_eq!(run(&mut cnslab(&["riemann", "--left", "1", "--right", "1,0"])).status.code(), Some(2));
}

#[test]
fn riemann_prints_a_snapshot_with_the_wave_structure() {
    let o = run(&mut cnslab(&["riemann", "--left", "1,0", "--right", "0.125,0", "--n-cells", "50"]));
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("# star_rho = 4.2875537077452"), "{text}");
    assert!(text.contains("# wave2 = Shock"));
    let data_lines = text.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty()).count();
    assert_eq!(data_lines, 50);

    let o = run(&mut cnslab(&["riemann", "--left", "0.7,-0.2", "--right", "0.7,-0.2", "--n-cells", "10"]));
    assert!(o.status.success());
    assert!(stdout(&o).contains("# iterations = 0"));

    let o = run(&mut cnslab(&["riemann", "--left", "0,0", "--right", "1,0"]));
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
}

#[test]
fn check_entropy_passes_on_the_default_gammas() {
    let o = run(&mut cnslab(&["check-entropy"]));
    assert!(o.status.success(), "{}", stdout(&o));
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 30);
    assert!(!text.contains("FAIL"));
}

#[test]
fn validate_data_reads_configs_and_snapshots() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_small(dir.path());
    let o = run(&mut cnslab(&["validate-data", "--config", &cfg]));
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("eps=4e-2 E1 = ") && text.contains("eps=2e-2 status = ok"), "{text}");

    let snap = dir.path().join("sod.dat");
    let o = run(&mut cnslab(&[
        "riemann",
        "--left",
        "1,0",
        "--right",
        "0.5,0",
        "--output",
        snap.to_str().unwrap(),
    ]));
    assert!(o.status.success());
    let o = run(&mut cnslab(&["validate-data", "--snapshot", snap.to_str().unwrap()]));
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("c0 = 5.0000000000e-1"));
    assert_eq!(run(&mut cnslab(&["validate-data", "--epsilon", "0.1"])).status.code(), Some(2));
}

#[test]
fn sweep_writes_tables_and_reports_to_the_env_directory() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_small(dir.path());
    let out = dir.path().join("from-env");
    let o = run(cnslab(&["sweep", "--config", &cfg]).env("CNSLAB_OUTPUT_DIR", &out));
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let conv = std::fs::read_to_string(out.join("convergence.csv")).unwrap();
    let mut lines = conv.lines();
    assert_eq!(lines.next(), Some("epsilon,n_cells,t,l1_rho,l1_m"));
    assert_eq!(lines.count(), 2);
    let uni = std::fs::read_to_string(out.join("uniformity.csv")).unwrap();
    assert!(uni.starts_with("epsilon,energy,dissipation,"));
    let report = DiagnosticsReport::read(&out.join("eps_2e-2.report.json")).unwrap();
    assert_eq!(report.schema_version, REPORT_SCHEMA_VERSION);
    assert!(out.join("eps_4e-2.final.dat").exists());
    assert!(out.join("summary.txt").exists() && out.join("config.toml").exists());

    // the flag beats the environment
    let flag = dir.path().join("from-flag");
    let o = run(cnslab(&["run", "--config", &cfg, "--epsilon", "0.04", "--output-dir", flag.to_str().unwrap()])
        .env("CNSLAB_OUTPUT_DIR", dir.path().join("unused")));
    assert!(o.status.success());
    assert!(flag.join("eps_4e-2.report.json").exists());
    assert!(!dir.path().join("unused").exists());
}

#[test]
fn bad_config_fails_with_a_message() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.toml");
    std::fs::write(&p, "epsilons = [0.01, 0.02]").unwrap();
    let o = run(cnslab(&["sweep", "--config", p.to_str().unwrap()]).current_dir(dir.path()));
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("error:") && err.contains("epsilons"), "{err}");
}
