use std::collections::BTreeMap;

use exterior_wave::harness::{run_verify, SweepConfig, VerifyOptions};
use exterior_wave::radial_data::ProfileSpec;

fn outcomes(opts: &VerifyOptions) -> BTreeMap<String, bool> {
    run_verify(opts).unwrap().checks.into_iter().map(|c| (c.name, c.passed)).collect()
}

#[test]
fn default_data_outcomes() {
    let got = outcomes(&VerifyOptions::default());
    // Q_k grows like ε^{1-k} inside the data support and the boundary
    // constants are still drifting towards their r = 0 limits at ε = 0.2.
    let expected_failures = ["q_decay", "boundary_constants"];
    for (name, passed) in &got {
        assert_eq!(*passed, !expected_failures.contains(&name.as_str()), "{name}");
    }
    assert_eq!(got.len(), 9);
}

#[test]
fn wrong_robin_sign_is_caught() {
    let opts = VerifyOptions {
        robin_sign: -1.0,
        ..VerifyOptions::default()
    };
    let got = outcomes(&opts);
    assert!(!got["robin_compatibility"]);
    assert!(got["boundary_conditions"]);
}

#[test]
fn zero_data_passes_everything() {
    let opts = VerifyOptions {
        config: SweepConfig {
            phi: ProfileSpec::bump(0.0, 1.0),
            psi: ProfileSpec::bump(0.0, 1.0),
            ..SweepConfig::default()
        },
        ..VerifyOptions::default()
    };
    let summary = run_verify(&opts).unwrap();
    assert!(summary.passed(), "{:?}", summary.checks);
}
