//! Forced non-generic parameters must yield `error` reports, never panics.

use hahn_bispectral::kernel::{int, rat};
use hahn_bispectral::suite::{run_suite, SuiteConfig, CHECKS};
use hahn_bispectral::{Error, Status};

#[test]
fn forced_degenerate_cells_do_not_panic() {
    let pairs = vec![
        (int(1), rat(1, 3)),
        (int(0), rat(1, 3)),
        (int(-2), rat(5, 2)),
        (rat(1, 2), int(1)),
        (rat(1, 2), int(3)),
        (rat(1, 2), rat(5, 2)),
        (rat(1, 3), rat(1, 3)),
        (int(2), int(4)),
    ];
    let cfg = SuiteConfig {
        n_list: vec![1, 2, 3],
        param_draws: 0,
        explicit_params: pairs.clone(),
        force: true,
        ..Default::default()
    };
    let r = run_suite(&cfg).unwrap();
    assert_eq!(r.summary.total, 3 * pairs.len() * CHECKS.len());
    assert!(r.summary.errors > 0);
    for c in &r.checks {
        if c.status != Status::Pass {
            assert!(c.counterexample.is_some(), "{c:?}");
        }
    }
    // integer alpha puts a coefficient pole on the grid
    let alpha_one = r
        .checks
        .iter()
        .find(|c| c.check_id == "rh_relations" && c.params.alpha == int(1) && c.params.n == 2)
        .unwrap();
    assert_eq!(alpha_one.status, Status::Error);
}

#[test]
fn validated_constructor_rejects_each_condition() {
    use hahn_bispectral::Params;
    for (a, b) in [
        (int(1), rat(1, 3)),
        (rat(1, 3), int(2)),
        (rat(1, 3), rat(7, 3)),
    ] {
        assert!(matches!(Params::new(a, b, 2), Err(Error::InvalidParams(_))));
    }
    assert!(Params::new(rat(1, 2), rat(1, 3), 0).is_err());
}
