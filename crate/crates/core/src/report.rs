//! Verification reports: one record per (check, parameter set).

use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::params::Params;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// The check could not be evaluated (degenerate parameters, pole on the
    /// grid, ...). Counts as not passing.
    Error,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check_id: String,
    pub params: Params,
    pub status: Status,
    /// Present whenever `status` is not `Pass`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
    /// Check-specific facts (expansion coefficients, recorded scalars, ...).
    #[serde(default, skip_serializing_if = "Map::is_empty")]
    pub details: Map<String, Value>,
    pub elapsed_us: u64,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Accumulates details while a check runs, then seals the report.
pub struct ReportBuilder {
    check_id: String,
    params: Params,
    details: Map<String, Value>,
    started: Instant,
}

impl ReportBuilder {
    pub fn new(check_id: &str, params: &Params) -> Self {
        ReportBuilder {
            check_id: check_id.to_string(),
            params: params.clone(),
            details: Map::new(),
            started: Instant::now(),
        }
    }

    pub fn detail(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.details.insert(key.to_string(), value.into());
        self
    }

    fn seal(self, status: Status, counterexample: Option<Value>) -> VerificationReport {
        VerificationReport {
            check_id: self.check_id,
            params: self.params,
            status,
            counterexample,
            details: self.details,
            elapsed_us: self.started.elapsed().as_micros() as u64,
        }
    }

    pub fn pass(self) -> VerificationReport {
        self.seal(Status::Pass, None)
    }

    pub fn fail(self, counterexample: Value) -> VerificationReport {
        self.seal(Status::Fail, Some(counterexample))
    }

    pub fn error(self, err: &Error) -> VerificationReport {
        let payload = serde_json::json!({
            "error": err.to_string(),
            "degenerate": err.is_degeneracy(),
        });
        self.seal(Status::Error, Some(payload))
    }

    /// Runs `body`; `Ok(None)` passes, `Ok(Some(cx))` fails with `cx`, and an
    /// error becomes an `Error` report.
    pub fn run(
        mut self,
        body: impl FnOnce(&mut Self) -> Result<Option<Value>>,
    ) -> VerificationReport {
        match body(&mut self) {
            Ok(None) => self.pass(),
            Ok(Some(cx)) => self.fail(cx),
            Err(e) => self.error(&e),
        }
    }
}
