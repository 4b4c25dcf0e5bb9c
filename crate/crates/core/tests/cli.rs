use ncgf::cli::{execute, Command, GroupName, RunConfig};
use std::path::Path;
use std::process::Command as Process;

fn bin() -> Process {
    Process::new(env!("CARGO_BIN_EXE_ncgf"))
}

fn config(command: Command, group: GroupName, out: &Path) -> RunConfig {
    RunConfig { command: Some(command), group, out: out.to_path_buf(), ..RunConfig::default() }
}

fn write_json(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn validate_u1_lists_each_check_once() {
    let dir = tempfile::tempdir().unwrap();
    let report = execute(&config(Command::Validate, GroupName::U1, dir.path())).unwrap();
    assert!(report.pass, "{:?}", report.checks);
    let names: Vec<&str> = report.checks.iter().map(|c| c.name.as_str()).collect();
    assert_eq!(
        names,
        [
            "chart_conditions",
            "plane_wave_properties",
            "unitarity_exact",
            "unitarity_literal",
            "star_commutator",
            "pairing_identity",
            "cyclicity",
            "ad_covariance"
        ]
    );
    let text = std::fs::read_to_string(dir.path().join("report.json")).unwrap();
    let json: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(json["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(json["config"]["n"], 129);
    assert!(json.get("seconds").is_none());
}

#[test]
fn validate_report_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let run = || {
        let status = bin().args(["validate", "--group", "u1", "--out"]).arg(dir.path()).status().unwrap();
        assert_eq!(status.code(), Some(0));
        std::fs::read(dir.path().join("report.json")).unwrap()
    };
    assert_eq!(run(), run());
}

#[test]
fn broken_chart_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_json(dir.path(), "c.json", r#"{"group": "u1", "chart_scale": 1.01}"#);
    let out = bin().args(["validate", "--config"]).arg(&cfg).arg("--out").arg(dir.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL chart_conditions"));
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let status = bin().args(["validate", "--group", "g2"]).status().unwrap();
    assert_eq!(status.code(), Some(2));
    for (name, text) in [
        ("group.json", r#"{"group": "g2"}"#),
        ("key.json", r#"{"group": "u1", "colour": 3}"#),
        ("zero.json", r#"{"group": "u1", "steps": 0}"#),
        ("trace.json", r#"{"group": "u1", "chart": "trace"}"#),
        ("half.json", r#"{"group": "u1", "j_max": 0.3}"#),
    ] {
        let cfg = write_json(dir.path(), name, text);
        let status = bin().args(["validate", "--config"]).arg(&cfg).arg("--out").arg(dir.path()).status().unwrap();
        assert_eq!(status.code(), Some(2), "{name}");
    }
    let missing = bin().args(["validate", "--config", "/nonexistent/ncgf.json"]).status().unwrap();
    assert_eq!(missing.code(), Some(2));
}

#[test]
fn thread_count_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let ok = bin().env("NCGF_THREADS", "2").args(["validate", "--group", "u1", "--out"]).arg(dir.path()).status().unwrap();
    assert_eq!(ok.code(), Some(0));
    let zero = bin().env("NCGF_THREADS", "0").args(["validate", "--group", "u1", "--out"]).arg(dir.path()).status().unwrap();
    assert_eq!(zero.code(), Some(2));
}

fn csv(path: &Path) -> (String, Vec<String>) {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines().map(str::to_string);
    (lines.next().unwrap(), lines.collect())
}

#[test]
fn propagate_u1_writes_kernel_ladder_and_modes() {
    let dir = tempfile::tempdir().unwrap();
    let report = execute(&config(Command::Propagate, GroupName::U1, dir.path())).unwrap();
    assert!(report.pass, "{:?}", report.checks);
    let (header, rows) = csv(&dir.path().join("kernel.csv"));
    assert_eq!(header, "node,z0[rad],re[1/vol],im[1/vol]");
    assert_eq!(rows.len(), 513);
    let cells: Vec<&str> = rows[0].split(',').collect();
    assert_eq!(cells[0], "0");
    assert!(cells[1..].iter().all(|c| c.contains('e') && c.parse::<f64>().is_ok()));
    let (header, rows) = csv(&dir.path().join("ladder.csv"));
    assert_eq!(header, "level,steps,epsilon[time],change[1/vol],oracle_sup[rel],oracle_l2[rel]");
    assert_eq!(rows.len(), 3);
    let extra = report.extra.unwrap();
    let modes = extra["modes"].as_array().unwrap();
    assert_eq!(modes.len(), 7);
    for m in modes {
        assert!((m["ratio"].as_f64().unwrap() - 1.0).abs() < 1e-6, "{m}");
    }

    let self_cmp = bin().args(["compare", "--out"]).arg(dir.path()).arg("--reference").arg(dir.path()).status().unwrap();
    assert_eq!(self_cmp.code(), Some(0));
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("compare.json")).unwrap()).unwrap();
    assert_eq!(json["extra"]["sup_difference"], 0.0);
    assert_eq!(json["extra"]["l2_difference"], 0.0);
    let (header, rows) = csv(&dir.path().join("modes.csv"));
    assert_eq!(header.split(',').count(), 1 + 7);
    assert!(rows[2].split(',').skip(1).all(|r| r.parse::<f64>().unwrap() == 1.0));

    let oracle = execute(&config(Command::Compare, GroupName::U1, dir.path())).unwrap();
    assert!(oracle.pass);
    assert!(oracle.extra.unwrap()["sup_difference"].as_f64().unwrap() < 1e-8);
}

#[test]
fn compare_without_prior_run_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let status = bin().args(["compare", "--out"]).arg(dir.path()).status().unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn star_and_transform_tables() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = config(Command::Star, GroupName::Su2, dir.path());
    c.samples = 5;
    assert!(execute(&c).unwrap().pass);
    let (header, rows) = csv(&dir.path().join("star.csv"));
    assert_eq!(header, "sample,i,j,x0[1/rad],x1[1/rad],x2[1/rad],re[x^2],im[x^2]");
    assert_eq!(rows.len(), 5 * 9);

    let mut c = config(Command::Transform, GroupName::U1, dir.path());
    c.dual_nodes = 11;
    assert!(execute(&c).unwrap().pass);
    let (header, rows) = csv(&dir.path().join("transform.csv"));
    assert_eq!(header, "sample,x0[1/rad],re[vol],im[vol]");
    assert_eq!(rows.len(), 11);
}

#[test]
fn config_round_trips_through_json() {
    let c = RunConfig { command: Some(Command::Propagate), group: GroupName::So3, seed: 9, ..RunConfig::default() };
    let text = serde_json::to_string(&c).unwrap();
    assert!(text.contains(r#""group":"so3""#) && text.contains(r#""hamiltonian":"free""#));
    let back: RunConfig = serde_json::from_str(&text).unwrap();
    assert_eq!(back, c);
}
