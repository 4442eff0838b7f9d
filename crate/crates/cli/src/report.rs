//! Check reports and their plain-text and JSON renderings.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
    /// A variant-selection check that settled on a named winner.
    Ambiguous,
}

impl Status {
    pub fn is_ok(self) -> bool {
        matches!(self, Status::Pass | Status::Ambiguous)
    }

    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Error => "ERROR",
            Status::Ambiguous => "AMBIGUOUS",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check_id: String,
    pub description: String,
    /// The mathematical statement under test.
    pub statement: String,
    pub params: serde_json::Value,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lhs: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rhs: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub abs_err: Option<f64>,
    pub tol: f64,
    pub digits: u32,
    /// Winning variant of an adjudication check.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub winner: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    /// Set when the failure was a numeric non-convergence.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub nonconvergent: bool,
    pub seconds: f64,
}

impl CheckReport {
    pub fn params_key(&self) -> String {
        self.params.to_string()
    }

    /// One line for the human summary.
    pub fn line(&self) -> String {
        let mut s = format!("{:<9} {:<20} {}", self.status.label(), self.check_id, self.params_key());
        if let Some(e) = self.abs_err {
            let _ = write!(s, "  err={e:.2e} tol={:.0e}", self.tol);
        }
        if let Some(w) = &self.winner {
            let _ = write!(s, "  winner={w}");
        }
        if let Some(m) = &self.message {
            if !self.status.is_ok() {
                let _ = write!(s, "  ({m})");
            }
        }
        s
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub pass: usize,
    pub fail: usize,
    pub error: usize,
    pub ambiguous: usize,
}

impl Summary {
    pub fn of(reports: &[CheckReport]) -> Self {
        let mut s = Summary {
            total: reports.len(),
            ..Summary::default()
        };
        for r in reports {
            match r.status {
                Status::Pass => s.pass += 1,
                Status::Fail => s.fail += 1,
                Status::Error => s.error += 1,
                Status::Ambiguous => s.ambiguous += 1,
            }
        }
        s
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SuiteReport {
    pub digits: u32,
    pub reports: Vec<CheckReport>,
    pub summary: Summary,
}

impl SuiteReport {
    pub fn new(digits: u32, mut reports: Vec<CheckReport>) -> Self {
        reports.sort_by(|a, b| (&a.check_id, a.params_key()).cmp(&(&b.check_id, b.params_key())));
        let summary = Summary::of(&reports);
        SuiteReport {
            digits,
            reports,
            summary,
        }
    }

    /// 0 all pass, 1 any fail, 3 numeric trouble without a failure.
    pub fn exit_code(&self) -> i32 {
        if self.summary.fail > 0 {
            1
        } else if self.reports.iter().any(|r| r.status == Status::Error) {
            3
        } else {
            0
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for r in &self.reports {
            s.push_str(&r.line());
            s.push('\n');
        }
        let m = &self.summary;
        let _ = writeln!(
            s,
            "{} checks at {} digits: {} pass, {} fail, {} error, {} ambiguous",
            m.total, self.digits, m.pass, m.fail, m.error, m.ambiguous
        );
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
