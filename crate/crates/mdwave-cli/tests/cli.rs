use std::collections::BTreeSet;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

use mdwave_cli::catalog;

fn mdwave(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mdwave")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn run_in(dir: &Path, scenario: &str, extra: &[&str]) -> Output {
    let out = dir.to_str().unwrap();
    let mut args = vec!["--scenario", scenario, "--out", out];
    args.extend_from_slice(extra);
    mdwave(&args)
}

fn write_scenario(dir: &TempDir, body: &str) -> String {
    let p = dir.path().join("scenario.toml");
    fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

fn summary(dir: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join("summary.json")).unwrap()).unwrap()
}

#[test]
fn catalog_covers_every_criterion() {
    let covered: BTreeSet<u32> = catalog::scenarios().iter().flat_map(|s| s.criteria.clone()).collect();
    assert_eq!(covered, (1..=15).collect());
}

#[test]
fn catalog_names_are_stable() {
    let names: Vec<&str> = catalog::names().collect();
    assert_eq!(
        names,
        [
            "01-mode-block",
            "02-duhamel-oracle",
            "03-jump",
            "04-ledger-order",
            "05-atom-energy",
            "06-linear-decay",
            "07-delta-approximation",
            "08-tail-variation",
            "09-dissipativity",
            "10-translation",
            "11-ode-pathology",
            "12-splitting",
            "13-cascade",
            "14-kato-ponce",
            "15-smoke-3d",
            "decay",
            "ode-demo",
            "pullback",
            "gronwall",
            "weak-star",
            "strichartz-envelope",
        ]
    );
    for s in catalog::scenarios() {
        assert!(catalog::bundled(&s.name).is_some(), "{} is listed under its own name", s.name);
    }
}

#[test]
fn list_prints_every_scenario() {
    let o = mdwave(&["--list"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().count(), catalog::names().count());
    assert!(text.contains("kernel-vs-attractor"));
}

#[test]
fn malformed_config_exits_with_parse_code() {
    let dir = TempDir::new().unwrap();
    for body in ["name = \"x\"\nexperiment = ", "name = \"x\"\nexperiment = \"simulate\"\n[run]\ndt = 0.1\n"] {
        let path = write_scenario(&dir, body);
        assert_eq!(code(&run_in(dir.path(), &path, &[])), 2, "{body}");
    }
    assert_eq!(code(&mdwave(&["--scenario", "no-such-scenario"])), 2);
    assert_eq!(code(&mdwave(&["--bogus-flag"])), 2);
}

#[test]
fn unknown_check_exits_with_parse_code() {
    let dir = TempDir::new().unwrap();
    let path = write_scenario(&dir, "name = \"x\"\nexperiment = \"ode-demo\"\nchecks = [\"ledger-order\"]\n");
    let o = run_in(dir.path(), &path, &[]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown check"));
}

#[test]
fn bad_mode_index_exits_with_precondition_code() {
    let dir = TempDir::new().unwrap();
    let path = write_scenario(
        &dir,
        "name = \"x\"\nexperiment = \"simulate\"\n[model]\ncutoff = 8\n\
         [forcing]\nkind = \"atoms\"\natoms = [{ time_seconds = 0.5, mode = 8, value = 1.0 }]\n",
    );
    assert_eq!(code(&run_in(dir.path(), &path, &[])), 3);
    assert!(!dir.path().join("summary.json").exists());
}

#[test]
fn focusing_blow_up_exits_with_blow_up_code() {
    let dir = TempDir::new().unwrap();
    let path = write_scenario(
        &dir,
        "name = \"x\"\nexperiment = \"simulate\"\nchecks = [\"jump\"]\n[model.nonlinearity]\nquintic = -1.0\n\
         [run]\nt_end_seconds = 5.0\ninitial_energy = 5.0\n",
    );
    let o = run_in(dir.path(), &path, &[]);
    assert_eq!(code(&o), 4);
    assert!(String::from_utf8_lossy(&o.stderr).contains("blow-up"));
}

#[test]
fn failed_checks_only_matter_with_check_flag() {
    let dir = TempDir::new().unwrap();
    let path = write_scenario(
        &dir,
        "name = \"x\"\nexperiment = \"simulate\"\nchecks = [\"energy-decay\"]\n[forcing]\nkind = \"smooth\"\n[run]\nt_end_seconds = 1.0\n",
    );
    assert_eq!(code(&run_in(dir.path(), &path, &[])), 0);
    assert_eq!(code(&run_in(dir.path(), &path, &["--check"])), 1);
    assert_eq!(summary(dir.path())["pass"], false);
}

#[test]
fn empty_forcing_decay_passes() {
    let dir = TempDir::new().unwrap();
    let o = run_in(dir.path(), "decay", &["--check"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let s = summary(dir.path());
    assert_eq!(s["schema"], "mdwave-summary/1");
    assert_eq!(s["checks"]["energy-decay"], true);
    assert_eq!(s["checks"]["b-form"], true);
    assert_eq!(s["values"]["atoms"], 0);
    for f in ["trajectory.csv", "ledger.csv"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    assert_eq!(String::from_utf8(o.stdout).unwrap(), fs::read_to_string(dir.path().join("summary.json")).unwrap());
}

#[test]
fn output_is_byte_identical_across_runs_and_threads() {
    let runs: Vec<String> = [["--threads", "1"], ["--threads", "4"], ["--threads", "4"]]
        .iter()
        .map(|t| {
            let dir = TempDir::new().unwrap();
            assert_eq!(code(&run_in(dir.path(), "strichartz-envelope", t)), 0);
            let csv = fs::read_to_string(dir.path().join("strichartz_scan.csv")).unwrap();
            fs::read_to_string(dir.path().join("summary.json")).unwrap() + &csv
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
    assert_eq!(runs[1], runs[2]);
}

#[test]
fn seed_override_changes_random_forcing() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    assert_eq!(code(&run_in(a.path(), "05-atom-energy", &["--check"])), 0);
    assert_eq!(code(&run_in(b.path(), "05-atom-energy", &["--check", "--seed", "99"])), 0);
    let (sa, sb) = (summary(a.path()), summary(b.path()));
    assert_eq!(sb["seed"], 99);
    assert_ne!(sa["values"]["final_energy_norm"], sb["values"]["final_energy_norm"]);
}

#[test]
fn ode_demo_reports_the_intervals() {
    let dir = TempDir::new().unwrap();
    assert_eq!(code(&run_in(dir.path(), "ode-demo", &["--check"])), 0);
    let s = summary(dir.path());
    let near = |v: &Value, lo: f64, hi: f64| {
        (v[0].as_f64().unwrap() - lo).abs() <= 0.1 && (v[1].as_f64().unwrap() - hi).abs() <= 0.1
    };
    let iv = &s["values"]["intervals"];
    assert!(near(&iv["attractor"], -2.0, 1.5), "{iv}");
    assert!(near(&iv["kernel_union"], -2.0, 1.0), "{iv}");
    assert!(near(&s["values"]["plus_three_range"], -1.0, 1.0));
    assert!(dir.path().join("arctan.csv").exists());
}

#[test]
fn cheap_criteria_pass_through_the_binary() {
    for name in ["01-mode-block", "02-duhamel-oracle", "07-delta-approximation", "08-tail-variation", "14-kato-ponce"] {
        let dir = TempDir::new().unwrap();
        let o = run_in(dir.path(), name, &["--check"]);
        assert_eq!(code(&o), 0, "{name}: {}", String::from_utf8_lossy(&o.stdout));
    }
}
