//! Machine-readable verification outcomes.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::expr::{ParamBinding, TermsUsed};
use crate::rational::{fmt_exp_pq, fmt_pq, t_to_exp};
use crate::series::QSeries;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Singular,
    Nonconvergent,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Singular => "singular",
            Status::Nonconvergent => "nonconvergent",
        }
    }
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub exponent: String,
    pub lhs: String,
    pub rhs: String,
}

impl Mismatch {
    /// Coefficients of `t^e` on both sides.
    pub fn at(e: i64, lhs: &QSeries, rhs: &QSeries) -> Mismatch {
        Mismatch {
            exponent: fmt_exp_pq(t_to_exp(e, lhs.scale())),
            lhs: fmt_pq(&lhs.coeff_t(e)),
            rhs: fmt_pq(&rhs.coeff_t(e)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct TermsReport {
    pub n: i64,
    pub j: Option<i64>,
}

impl From<TermsUsed> for TermsReport {
    fn from(t: TermsUsed) -> Self {
        TermsReport { n: t.n, j: t.j }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub case_id: String,
    pub status: Status,
    pub order: i64,
    pub scale: u32,
    pub samples: Vec<BTreeMap<String, String>>,
    pub first_mismatch: Option<Mismatch>,
    pub terms_used: TermsReport,
    pub runtime_ms: u64,
    /// Human-readable context; not part of the JSON schema.
    #[serde(skip)]
    pub detail: Option<String>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// One line for terminal output.
    pub fn summary_line(&self) -> String {
        let mut s = format!("{:<28} {:<13} order {:>3}", self.case_id, self.status, self.order);
        if let Some(m) = &self.first_mismatch {
            s.push_str(&format!("  first mismatch at q^({}): {} vs {}", m.exponent, m.lhs, m.rhs));
        }
        if let Some(d) = &self.detail {
            s.push_str(&format!("  [{d}]"));
        }
        s
    }
}

pub fn sample_strings(b: &ParamBinding) -> BTreeMap<String, String> {
    b.iter().map(|(k, v)| (k.clone(), v.to_report_string())).collect()
}

/// Combined status of a batch: any failure wins, then any singular or
/// nonconvergent case.
pub fn aggregate(reports: &[VerificationReport]) -> Status {
    if reports.iter().any(|r| r.status == Status::Fail) {
        Status::Fail
    } else {
        reports.iter().map(|r| r.status).find(|s| *s != Status::Pass).unwrap_or(Status::Pass)
    }
}
