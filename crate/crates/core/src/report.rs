use serde::{Deserialize, Serialize};

use crate::config::RunConfig;

/// One checked case of a verification suite.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseResult {
    pub descriptor: String,
    pub pass: bool,
    /// Measured valuation or residual valuation, when meaningful.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measured: Option<i64>,
    /// Digits the comparison was carried out to.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CaseResult {
    pub fn new(descriptor: impl Into<String>, pass: bool) -> Self {
        CaseResult { descriptor: descriptor.into(), pass, measured: None, precision: None, detail: None }
    }

    pub fn measured(mut self, v: Option<i64>) -> Self {
        self.measured = v;
        self
    }

    pub fn precision(mut self, v: Option<i64>) -> Self {
        self.precision = v;
        self
    }

    pub fn detail(mut self, d: impl Into<String>) -> Self {
        self.detail = Some(d.into());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub suite: String,
    pub p: u32,
    pub n: u32,
    pub prec: u32,
    pub seed: u64,
    pub cases: Vec<CaseResult>,
    pub failures: Vec<String>,
    pub pass: bool,
}

impl VerifyReport {
    /// Cases are sorted by descriptor so that the report does not depend on
    /// evaluation order.
    pub fn new(suite: &str, cfg: &RunConfig, mut cases: Vec<CaseResult>) -> Self {
        cases.sort_by(|a, b| a.descriptor.cmp(&b.descriptor));
        let failures: Vec<String> = cases.iter().filter(|c| !c.pass).map(|c| c.descriptor.clone()).collect();
        VerifyReport {
            suite: suite.to_string(),
            p: cfg.p,
            n: cfg.n,
            prec: cfg.prec,
            seed: cfg.seed,
            pass: failures.is_empty(),
            failures,
            cases,
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.pass {
            0
        } else {
            1
        }
    }
}
