//! Full verification suite: every check over every `(N, parameter set)` cell.

use std::path::PathBuf;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{
    verify_casimir_report, verify_potential, verify_rh_relations, verify_tilde_algebra,
};
use crate::bases::{verify_biorthogonality, verify_dual_route, verify_weight};
use crate::bispectral::{
    verify_adjoint_identity, verify_difference_equation, verify_factorization,
    verify_matrix_realizations, verify_recurrence_relation, verify_shift_relations,
};
use crate::error::{Error, Result};
use crate::heun::{verify_heun_raising, verify_kappa_report};
use crate::kernel::RatScalar;
use crate::operators::OpKind;
use crate::params::{seeded_draws, Params};
use crate::report::{Status, VerificationReport};

/// Highest pole-monomial index tried by the raising checks.
pub const HEUN_N_MAX: usize = 6;

type CheckFn = fn(&Params) -> VerificationReport;

fn heun_x(p: &Params) -> VerificationReport {
    verify_heun_raising(OpKind::X, p, HEUN_N_MAX)
}
fn heun_y(p: &Params) -> VerificationReport {
    verify_heun_raising(OpKind::Y, p, HEUN_N_MAX)
}
fn heun_z(p: &Params) -> VerificationReport {
    verify_heun_raising(OpKind::Z, p, HEUN_N_MAX)
}

/// Every check, by id.
pub const CHECKS: &[(&str, CheckFn)] = &[
    ("heun_raising.X", heun_x),
    ("heun_raising.Y", heun_y),
    ("heun_raising.Z", heun_z),
    ("kappa_cubic", verify_kappa_report),
    ("dual_route", verify_dual_route),
    ("factorization", verify_factorization),
    ("shift_relations", verify_shift_relations),
    ("biorthogonality", verify_biorthogonality),
    ("weight", verify_weight),
    ("difference_equation", verify_difference_equation),
    ("recurrence_relation", verify_recurrence_relation),
    ("matrix_realizations", verify_matrix_realizations),
    ("adjoint_identity", verify_adjoint_identity),
    ("rh_relations", verify_rh_relations),
    ("casimir", verify_casimir_report),
    ("potential", verify_potential),
    ("tilde_algebra", verify_tilde_algebra),
];

/// Resolves a check name; a bare prefix such as `heun_raising` selects every
/// check under it.
pub fn select_checks(names: &[String]) -> Result<Vec<(&'static str, CheckFn)>> {
    if names.is_empty() {
        return Ok(CHECKS.to_vec());
    }
    let mut out: Vec<(&'static str, CheckFn)> = Vec::new();
    for name in names {
        let hits: Vec<_> = CHECKS
            .iter()
            .filter(|(id, _)| *id == name || id.starts_with(&format!("{name}.")))
            .copied()
            .collect();
        if hits.is_empty() {
            return Err(Error::UnknownSelector(format!("check {name:?}")));
        }
        for h in hits {
            if !out.iter().any(|(id, _)| *id == h.0) {
                out.push(h);
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(Error::UnknownSelector(format!("format {s:?}"))),
        }
    }
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub n_list: Vec<usize>,
    pub param_draws: usize,
    pub explicit_params: Vec<(RatScalar, RatScalar)>,
    pub seed: u64,
    pub force: bool,
    pub output_path: Option<PathBuf>,
    pub format: Format,
    /// Empty selects every check.
    pub checks: Vec<String>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            n_list: (1..=6).collect(),
            param_draws: 5,
            explicit_params: Vec::new(),
            seed: 0,
            force: false,
            output_path: None,
            format: Format::Json,
            checks: Vec::new(),
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_list.is_empty() || self.n_list.contains(&0) {
            return Err(Error::Config(
                "N list must be nonempty with every N >= 1".into(),
            ));
        }
        if self.param_draws == 0 && self.explicit_params.is_empty() {
            return Err(Error::Config(
                "need at least one draw or explicit parameter pair".into(),
            ));
        }
        select_checks(&self.checks)?;
        Ok(())
    }

    /// Explicit pairs first, then the seeded draws; the same draws are reused
    /// for every `N`.
    pub fn parameter_sets(&self) -> Result<Vec<Params>> {
        let mut out = Vec::new();
        for &n in &self.n_list {
            for (a, b) in &self.explicit_params {
                let p = if self.force {
                    Params::forced(a.clone(), b.clone(), n)?
                } else {
                    Params::new(a.clone(), b.clone(), n)?
                };
                out.push(p);
            }
            out.extend(seeded_draws(self.seed, n, self.param_draws));
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub errors: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub checks: Vec<VerificationReport>,
    pub summary: Summary,
}

impl SuiteReport {
    pub fn from_reports(mut checks: Vec<VerificationReport>) -> Self {
        checks.sort_by(|a, b| (&a.check_id, &a.params).cmp(&(&b.check_id, &b.params)));
        let count = |s: Status| checks.iter().filter(|r| r.status == s).count();
        let summary = Summary {
            total: checks.len(),
            passed: count(Status::Pass),
            failed: count(Status::Fail),
            errors: count(Status::Error),
        };
        SuiteReport { checks, summary }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.passed == self.summary.total
    }

    pub fn exit_code(&self) -> i32 {
        if self.all_passed() {
            0
        } else {
            1
        }
    }

    /// Copy with every `elapsed_us` zeroed, for comparing runs.
    pub fn without_timing(&self) -> Self {
        let mut r = self.clone();
        for c in &mut r.checks {
            c.elapsed_us = 0;
        }
        r
    }
}

/// Runs one check per cell in parallel. Configuration errors surface before
/// any check runs.
pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    cfg.validate()?;
    let checks = select_checks(&cfg.checks)?;
    let sets = cfg.parameter_sets()?;
    let cells: Vec<(CheckFn, &Params)> = sets
        .iter()
        .flat_map(|p| checks.iter().map(move |(_, f)| (*f, p)))
        .collect();
    let reports: Vec<VerificationReport> = cells.par_iter().map(|(f, p)| f(p)).collect();
    Ok(SuiteReport::from_reports(reports))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{int, rat};

    #[test]
    fn single_explicit_cell_passes() {
        let cfg = SuiteConfig {
            n_list: vec![1],
            param_draws: 0,
            explicit_params: vec![(rat(1, 2), rat(1, 3))],
            ..Default::default()
        };
        let r = run_suite(&cfg).unwrap();
        assert_eq!(r.summary.total, CHECKS.len());
        assert!(
            r.all_passed(),
            "{:#?}",
            r.checks.iter().filter(|c| !c.passed()).collect::<Vec<_>>()
        );
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn forced_integer_alpha_reports_errors() {
        let cfg = SuiteConfig {
            n_list: vec![2],
            param_draws: 0,
            explicit_params: vec![(int(1), rat(1, 3))],
            force: true,
            ..Default::default()
        };
        let r = run_suite(&cfg).unwrap();
        assert!(r.summary.errors > 0);
        assert_eq!(r.exit_code(), 1);
    }

    #[test]
    fn non_generic_without_force_is_a_config_error() {
        let cfg = SuiteConfig {
            n_list: vec![2],
            param_draws: 0,
            explicit_params: vec![(int(1), rat(1, 3))],
            ..Default::default()
        };
        assert!(run_suite(&cfg).is_err());
    }

    #[test]
    fn unknown_check_is_rejected() {
        let cfg = SuiteConfig {
            checks: vec!["nope".into()],
            ..Default::default()
        };
        assert!(matches!(cfg.validate(), Err(Error::UnknownSelector(_))));
        assert_eq!(select_checks(&["heun_raising".into()]).unwrap().len(), 3);
    }
}
