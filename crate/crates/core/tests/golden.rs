//! Pinned 100-row sweep. Set `REGRETLAB_BLESS=1` to regenerate the file.

use std::path::PathBuf;

use regretlab::harness::config::ExperimentConfig;
use regretlab::harness::emit::write_csv;
use regretlab::harness::experiment::run_experiment;

const SWEEP: &str = r#"
name = "golden"
dim = 3
horizons = [64, 128, 256, 512]
seeds = [0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19, 20, 21, 22, 23, 24]
bounds = ["regret", "stability"]

[learner]
kind = "iol"

[adversary]
suite = "linear"
scale = 1.0
drift = 0.5
"#;

fn golden_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden/iol_linear_sweep.csv")
}

/// Text fields must match exactly; floats to 1e-12 relative, which absorbs
/// last-digit differences between math libraries.
fn same_field(a: &str, b: &str) -> bool {
    if a == b {
        return true;
    }
    match (a.parse::<f64>(), b.parse::<f64>()) {
        (Ok(x), Ok(y)) if a.contains('e') => (x - y).abs() <= 1e-12 * x.abs().max(y.abs()).max(1e-300),
        _ => false,
    }
}

#[test]
fn sweep_matches_golden_file() {
    let cfg = ExperimentConfig::from_toml_str(SWEEP, &[]).unwrap();
    let rows = run_experiment(&cfg).unwrap();
    assert_eq!(rows.len(), 100);
    assert!(rows.iter().all(|r| r.passed()));
    let mut buf = Vec::new();
    write_csv(&rows, &mut buf).unwrap();
    let fresh = String::from_utf8(buf).unwrap();

    let path = golden_path();
    if std::env::var_os("REGRETLAB_BLESS").is_some() {
        std::fs::write(&path, &fresh).unwrap();
    }
    let pinned = std::fs::read_to_string(&path).expect("golden file; regenerate with REGRETLAB_BLESS=1");
    assert_eq!(fresh.lines().count(), pinned.lines().count());
    for (i, (a, b)) in fresh.lines().zip(pinned.lines()).enumerate() {
        let fa: Vec<&str> = a.split(',').collect();
        let fb: Vec<&str> = b.split(',').collect();
        assert_eq!(fa.len(), fb.len(), "line {}", i + 1);
        for (x, y) in fa.iter().zip(&fb) {
            assert!(same_field(x, y), "line {}: `{x}` vs `{y}`", i + 1);
        }
    }
}

#[test]
fn rerun_is_byte_identical() {
    let cfg = ExperimentConfig::from_toml_str(SWEEP, &["horizons=[64]".into(), "seeds=[0, 1, 2]".into()]).unwrap();
    let render = || {
        let mut buf = Vec::new();
        write_csv(&run_experiment(&cfg).unwrap(), &mut buf).unwrap();
        buf
    };
    assert_eq!(render(), render());
}
