use regretlab::geometry::{FeasibleSet, Norm};
use regretlab::harness::config::ExperimentConfig;
use regretlab::harness::experiment::{run_experiment, run_once};
use regretlab::losses::LossKind;

const FTL_MINIMAL: &str = r#"
    [learner]
    kind = "ftl"
    regime = "strongly_convex"

    [adversary]
    suite = "quadratic"
    alpha = 1.0
"#;

fn cfg(text: &str, overrides: &[&str]) -> ExperimentConfig {
    let o: Vec<String> = overrides.iter().map(|s| s.to_string()).collect();
    ExperimentConfig::from_toml_str(text, &o).unwrap()
}

#[test]
fn minimal_ftl_config_gives_one_passing_row() {
    let c = cfg(FTL_MINIMAL, &["horizons=[16]", "dim=2"]);
    let rows = run_experiment(&c).unwrap();
    assert_eq!(rows.len(), 1);
    let row = &rows[0];
    assert_eq!((row.horizon, row.d, row.learner.as_str()), (16, 2, "ftl"));
    let names: Vec<&str> = row.bounds.iter().map(|b| b.bound_name.as_str()).collect();
    for want in ["ftl_regret", "ftl_forward_regret", "ftl_stability", "ftl_uniform_stability"] {
        assert!(names.contains(&want), "{names:?}");
    }
    assert!(row.passed(), "{:#?}", row.bounds);
}

/// Replays FTL on the same quadratic sequence: with equal curvatures the
/// leader is the projected mean of the centers seen so far.
#[test]
fn minimal_ftl_run_matches_replay() {
    let c = cfg(FTL_MINIMAL, &["horizons=[16]", "dim=2"]);
    let out = run_once(&c, 0, 16).unwrap();
    let traj = &out.trajectory;
    let ball = FeasibleSet::centered_ball(2, 1.0).unwrap();
    let centers: Vec<Vec<f64>> = traj
        .losses
        .iter()
        .map(|l| match &l.kind {
            LossKind::Quadratic { center, .. } => center.to_vec(),
            other => panic!("unexpected loss {other:?}"),
        })
        .collect();
    let mean = |k: usize| -> Vec<f64> {
        if k == 0 {
            return vec![0.0, 0.0];
        }
        (0..2).map(|i| centers[..k].iter().map(|c| c[i]).sum::<f64>() / k as f64).collect()
    };
    let mut regret = 0.0;
    let best = ball.project(&mean(16)).unwrap();
    for t in 0..16 {
        let w = ball.project(&mean(t)).unwrap();
        assert!(traj.points[t].distance(&w, Norm::L2) < 1e-9, "step {t}");
        let f = |x: &[f64]| 0.5 * ((x[0] - centers[t][0]).powi(2) + (x[1] - centers[t][1]).powi(2));
        regret += f(&w) - f(&best);
    }
    assert!((out.report.regret - regret).abs() < 1e-9, "{} vs {regret}", out.report.regret);
}

#[test]
fn dyadic_iol_approx_sweep_has_a_slope_row() {
    let text = r#"
        dim = 3
        horizons = [64, 128, 256, 512, 1024, 2048, 4096]
        seeds = [0, 1]

        [learner]
        kind = "iol"

        [adversary]
        suite = "linear"

        [mode]
        kind = "approx"
        delta = { kind = "inverse_t_squared", c = 1.0 }

        [slope]
        exponent = 0.5
    "#;
    let c = cfg(text, &[]);
    let rows = run_experiment(&c).unwrap();
    assert_eq!(rows.len(), 7 * 2 + 1);
    let slope = rows.last().unwrap();
    assert_eq!(slope.bounds.len(), 1);
    assert_eq!(slope.bounds[0].bound_name, "iol_regret_slope");
    assert!(slope.bounds[0].pass, "{:?}", slope.bounds[0]);
    assert!(rows.iter().all(|r| r.mode == "approx"));
}

#[test]
fn invalid_schedule_names_the_premise() {
    let text = r#"
        [learner]
        kind = "iol"
        regime = "strongly_convex"
        eta = { kind = "constant", value = 0.1 }

        [adversary]
        suite = "quadratic"
    "#;
    let c = cfg(text, &["horizons=[16]"]);
    let err = run_experiment(&c).unwrap_err().to_string();
    assert!(err.contains("1/(alpha t)") || err.contains("strongly convex"), "{err}");
    assert!(err.contains("--no-validate"), "{err}");

    let c = cfg(text, &["horizons=[16]", "validate=false"]);
    assert_eq!(run_experiment(&c).unwrap().len(), 1);
}

#[test]
fn identical_configs_give_identical_rows() {
    let c = cfg(FTL_MINIMAL, &["horizons=[32, 64]", "seeds=[3, 4]"]);
    let a = run_experiment(&c).unwrap();
    let b = run_experiment(&c).unwrap();
    let strip = |rows: Vec<regretlab::harness::experiment::ResultRow>| {
        rows.into_iter().map(|mut r| {
            r.wall_clock_s = 0.0;
            r
        }).collect::<Vec<_>>()
    };
    assert_eq!(strip(a.clone()).iter().map(|r| (r.horizon, r.seed)).collect::<Vec<_>>(), vec![(32, 3), (32, 4), (64, 3), (64, 4)]);
    assert_eq!(strip(a), strip(b));
}
