//! Regression check against a stored sweep. The file was produced by
//!
//! ```text
//! jcbell sweep --field smsv:1,0 --max-dim 256 --sigma 0.1 --stop 3 --steps 13 \
//!     --outputs bell,bell_lower,entropy,ppt_min
//! ```
//!
//! after the pipeline had passed the closed-form checks in the acceptance
//! suite. Regenerate it only for intentional numerical changes.

use jcbell::sweep_cli::{parse_csv, run_sweep, ExperimentConfig};

const GOLDEN: &str = include_str!("data/smsv_r1_sigma01.csv");

#[test]
fn squeezed_vacuum_sweep_matches_stored_values() {
    let cfg = ExperimentConfig::from_json(
        r#"{"initial_state": {"atom": "e", "field": "smsv:1,0"},
            "noise": {"sigma": 0.1},
            "time_grid": {"start": 0, "stop": 3, "steps": 13},
            "outputs": ["bell", "bell_lower", "entropy", "ppt_min"],
            "truncation": {"max_dim": 256}}"#,
    )
    .unwrap();
    let fresh = run_sweep(&cfg).unwrap();
    let golden = parse_csv(GOLDEN).unwrap();
    assert_eq!(fresh.columns, golden.columns);
    assert_eq!(fresh.records.len(), golden.records.len());
    for (a, b) in fresh.records.iter().zip(&golden.records) {
        assert_eq!(a.t, b.t);
        for (col, (x, y)) in fresh.columns.iter().zip(a.values.iter().zip(&b.values)) {
            let tol = 1e-9 * y.abs().max(1e-3);
            assert!((x - y).abs() <= tol, "{col} at t = {}: {x} vs stored {y}", a.t);
        }
    }
}
