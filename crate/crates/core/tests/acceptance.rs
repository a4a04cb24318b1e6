//! Acceptance suite: one line per criterion, exact comparisons throughout.
//!
//! Runs without the libtest harness so every line is printed; the process
//! exits non-zero if any criterion fails or exceeds its time budget.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use hahn_bispectral::algebra::{
    casimir_matrix, casimir_value, tilde_substitution, verify_casimir, verify_potential,
    verify_rh_relations, verify_tilde_algebra,
};
use hahn_bispectral::bases::{
    build_u_series, eval_u_hypergeometric, verify_biorthogonality, verify_dual_route,
    verify_weight, weight,
};
use hahn_bispectral::bispectral::{
    verify_difference_equation, verify_factorization, verify_matrix_realizations,
    verify_recurrence_relation, verify_shift_relations,
};
use hahn_bispectral::emit::{build, EmitKind, Emitted};
use hahn_bispectral::heun::{verify_heun_raising, verify_kappa_report};
use hahn_bispectral::kernel::{int, rat};
use hahn_bispectral::matrix::commutator;
use hahn_bispectral::operators::triplet_e_basis;
use hahn_bispectral::params::seeded_draws;
use hahn_bispectral::suite::{run_suite, Format, SuiteConfig};
use hahn_bispectral::{Basis, OpKind, Params, VerificationReport};

const SEED: u64 = 20_240_611;

type Outcome = Result<String, String>;

fn draws(ns: impl IntoIterator<Item = usize>, count: usize) -> Vec<Params> {
    ns.into_iter()
        .flat_map(|n| seeded_draws(SEED, n, count))
        .collect()
}

fn require(r: VerificationReport) -> Result<(), String> {
    if r.passed() {
        Ok(())
    } else {
        Err(format!(
            "{} at {}: {:?} {}",
            r.check_id,
            r.params,
            r.status,
            r.counterexample.map(|c| c.to_string()).unwrap_or_default()
        ))
    }
}

fn sweep(ps: &[Params], checks: &[fn(&Params) -> VerificationReport]) -> Outcome {
    for p in ps {
        for c in checks {
            require(c(p))?;
        }
    }
    Ok(format!("{} parameter sets", ps.len()))
}

fn heun_raising() -> Outcome {
    let ps = draws(1..=6, 5);
    for p in &ps {
        for kind in OpKind::ALL {
            require(verify_heun_raising(kind, p, 6))?;
        }
        require(verify_kappa_report(p))?;
    }
    Ok(format!(
        "X, Y, Z for n <= 6 over {} parameter sets",
        ps.len()
    ))
}

fn dual_route() -> Outcome {
    let ps = draws(1..=6, 5);
    for p in &ps {
        require(verify_dual_route(p))?;
        // third route: the terminating hypergeometric sum, on and off the grid
        for n in 0..=p.n {
            let u = build_u_series(n, p).map_err(|e| e.to_string())?;
            let points = (0..=p.n as i64).map(int).chain([rat(1, 7), rat(-5, 3)]);
            for x in points {
                let a = u.fun.eval(&x).ok_or("pole at sample point")?;
                let b = eval_u_hypergeometric(n, p, &x).map_err(|e| e.to_string())?;
                if a != b {
                    return Err(format!("U_{n}({x}) at {p}: {a} vs {b}"));
                }
            }
        }
    }
    Ok(format!("{} parameter sets, three routes", ps.len()))
}

fn factorization() -> Outcome {
    sweep(&draws(1..=6, 5), &[verify_factorization])
}

fn shift_relations() -> Outcome {
    sweep(&draws(1..=5, 5), &[verify_shift_relations])
}

fn biorthogonality() -> Outcome {
    sweep(&draws(1..=6, 5), &[verify_biorthogonality, verify_weight])
}

fn bispectral_pair() -> Outcome {
    sweep(
        &draws(1..=6, 5),
        &[verify_difference_equation, verify_recurrence_relation],
    )
}

fn matrix_realizations() -> Outcome {
    sweep(&draws(1..=6, 5), &[verify_matrix_realizations])
}

fn algebra() -> Outcome {
    let ps = draws(1..=8, 5);
    for p in &ps {
        require(verify_rh_relations(p))?;
        let q = casimir_matrix(p).map_err(|e| e.to_string())?;
        if q.scalar_value() != Some(casimir_value(&p.alpha, &p.beta)) {
            return Err(format!("Casimir not alpha(beta-alpha)/2 at {p}"));
        }
        if !verify_casimir(p).map_err(|e| e.to_string())? {
            return Err(format!("Casimir does not commute at {p}"));
        }
    }
    Ok(format!("{} parameter sets, N <= 8", ps.len()))
}

fn potential() -> Outcome {
    let ps = draws([3], 3);
    let mut scalars = Vec::new();
    for p in &ps {
        let r = verify_potential(p);
        scalars.push(
            r.details
                .get("scalars")
                .cloned()
                .unwrap_or_default()
                .to_string(),
        );
        require(r)?;
    }
    Ok(format!("scalars {}", scalars[0]))
}

fn tilde() -> Outcome {
    let ps = draws(1..=4, 3);
    let mut verdicts = std::collections::BTreeSet::new();
    for p in &ps {
        require(verify_tilde_algebra(p))?;
        let rep = tilde_substitution(p).map_err(|e| e.to_string())?;
        if !rep.zx_passes {
            return Err(format!("[Z,X] fails for tilde operators at {p}"));
        }
        verdicts.insert(rep.satisfying.join("+"));
    }
    if verdicts.len() != 1 {
        return Err(format!("verdict depends on parameters: {verdicts:?}"));
    }
    Ok(format!(
        "satisfying substitution: {}",
        verdicts.into_iter().next().unwrap()
    ))
}

fn anchors() -> Outcome {
    let p = Params::new(rat(1, 2), rat(1, 3), 1).map_err(|e| e.to_string())?;
    let [x, _, z] = triplet_e_basis(&p).map_err(|e| e.to_string())?;
    let zx = commutator(&z, &x).map_err(|e| e.to_string())?;
    let expect = vec![vec![int(0), int(0)], vec![int(-2), int(0)]];
    if zx.rows() != expect || (&(&z * &z) + &z).rows() != expect {
        return Err(format!("[Z,X] = {:?}", zx.to_strings()));
    }
    let q = Params::forced(rat(1, 2), int(2), 1).map_err(|e| e.to_string())?;
    let w = weight(&q).map_err(|e| e.to_string())?;
    if w.values.values != vec![rat(5, 4), rat(-1, 4)] {
        return Err(format!("weight {:?}", w.values.values));
    }
    Ok("[Z,X] and weight at N = 1".into())
}

fn determinism_round_trip() -> Outcome {
    let cfg = SuiteConfig {
        n_list: vec![1, 2],
        param_draws: 2,
        seed: SEED,
        ..Default::default()
    };
    let a = run_suite(&cfg).map_err(|e| e.to_string())?;
    let b = run_suite(&cfg).map_err(|e| e.to_string())?;
    if a.without_timing() != b.without_timing() {
        return Err("reports differ between runs with the same seed".into());
    }
    let report = Emitted::Report(a.clone());
    let text = report.render(Format::Json).map_err(|e| e.to_string())?;
    let back =
        Emitted::parse(EmitKind::Report, "all", Format::Json, &text).map_err(|e| e.to_string())?;
    if back != report {
        return Err("report does not round-trip".into());
    }
    let p = &draws([3], 1)[0];
    let objects: &[(EmitKind, &str, Basis)] = &[
        (EmitKind::Matrix, "X", Basis::Delta),
        (EmitKind::Matrix, "Y", Basis::Phi),
        (EmitKind::Matrix, "Z", Basis::U),
        (EmitKind::Matrix, "calY", Basis::Phi),
        (EmitKind::Matrix, "tildeY", Basis::Delta),
        (EmitKind::Matrix, "casimir", Basis::Delta),
        (EmitKind::Matrix, "gram", Basis::Delta),
        (EmitKind::Function, "U3", Basis::Delta),
        (EmitKind::Function, "V2", Basis::Delta),
        (EmitKind::Function, "phi1", Basis::Delta),
        (EmitKind::Weight, "w", Basis::Delta),
        (EmitKind::Coefficients, "lambda", Basis::Delta),
        (EmitKind::Coefficients, "nu", Basis::Delta),
        (EmitKind::Coefficients, "mu", Basis::Delta),
        (EmitKind::Coefficients, "xi", Basis::Delta),
        (EmitKind::Coefficients, "C3", Basis::Delta),
        (EmitKind::Report, "potential", Basis::Delta),
    ];
    for (kind, sel, basis) in objects {
        let obj = build(*kind, sel, *basis, p).map_err(|e| e.to_string())?;
        let text = obj.render(Format::Json).map_err(|e| e.to_string())?;
        let back = Emitted::parse(*kind, sel, Format::Json, &text).map_err(|e| e.to_string())?;
        if back != obj {
            return Err(format!("{kind} {sel} does not round-trip"));
        }
    }
    Ok(format!(
        "{} checks twice, {} emitted objects",
        a.summary.total,
        objects.len() + 1
    ))
}

struct Criterion {
    name: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

fn main() -> ExitCode {
    let ms = Duration::from_millis;
    let criteria = [
        Criterion {
            name: "heun raising and kappa cubic",
            budget: ms(1000),
            run: heun_raising,
        },
        Criterion {
            name: "dual-route construction",
            budget: ms(2000),
            run: dual_route,
        },
        Criterion {
            name: "factorization",
            budget: ms(1000),
            run: factorization,
        },
        Criterion {
            name: "shift relations",
            budget: ms(5000),
            run: shift_relations,
        },
        Criterion {
            name: "biorthogonality and weight",
            budget: ms(5000),
            run: biorthogonality,
        },
        Criterion {
            name: "difference equation and recurrence",
            budget: ms(5000),
            run: bispectral_pair,
        },
        Criterion {
            name: "matrix realizations",
            budget: ms(5000),
            run: matrix_realizations,
        },
        Criterion {
            name: "algebra relations and Casimir",
            budget: ms(10000),
            run: algebra,
        },
        Criterion {
            name: "potential",
            budget: ms(1000),
            run: potential,
        },
        Criterion {
            name: "tilde substitution",
            budget: ms(5000),
            run: tilde,
        },
        Criterion {
            name: "hand-checked anchors",
            budget: ms(100),
            run: anchors,
        },
        Criterion {
            name: "determinism and round trip",
            budget: ms(1000),
            run: determinism_round_trip,
        },
    ];
    let mut failures = 0;
    for (i, c) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = (c.run)();
        let took = start.elapsed();
        let timing = format!(
            "{:.3}s / {:.1}s",
            took.as_secs_f64(),
            c.budget.as_secs_f64()
        );
        match outcome {
            Ok(msg) if took <= c.budget => {
                println!("PASS {:>2} {} [{timing}] {msg}", i + 1, c.name);
            }
            Ok(msg) => {
                failures += 1;
                println!("FAIL {:>2} {} [{timing}] over budget; {msg}", i + 1, c.name);
            }
            Err(msg) => {
                failures += 1;
                println!("FAIL {:>2} {} [{timing}] {msg}", i + 1, c.name);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failures} failed",
        criteria.len() - failures
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
