use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    /// The identity's premises did not hold for the supplied inputs.
    HypothesisNotSatisfied,
}

/// Outcome of checking one identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub identity: String,
    /// The statement being checked, written as a formula.
    pub paper_ref: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<String>>,
}

impl VerificationReport {
    pub fn pass(identity: &str, statement: &str) -> Self {
        VerificationReport {
            identity: identity.to_string(),
            paper_ref: statement.to_string(),
            status: Status::Pass,
            witness: None,
        }
    }

    pub fn fail(identity: &str, statement: &str, witness: Vec<String>) -> Self {
        VerificationReport {
            identity: identity.to_string(),
            paper_ref: statement.to_string(),
            status: Status::Fail,
            witness: Some(witness),
        }
    }

    /// Pass when `residuals` is empty, otherwise fail listing them.
    pub fn from_residuals(identity: &str, statement: &str, residuals: Vec<String>) -> Self {
        if residuals.is_empty() {
            Self::pass(identity, statement)
        } else {
            Self::fail(identity, statement, residuals)
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn with_witness(mut self, witness: Vec<String>) -> Self {
        self.witness = Some(witness);
        self
    }
}

pub fn all_passed(reports: &[VerificationReport]) -> bool {
    reports.iter().all(VerificationReport::passed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn serializes_to_the_report_schema() {
        let r = VerificationReport::pass("theorem", "[A,A] = -2 lambda.A");
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["status"], "pass");
        assert!(json.get("witness").is_none());
        let f = VerificationReport::fail("x", "y", vec!["T^1_{12} = x1".into()]);
        let json = serde_json::to_value(&f).unwrap();
        assert_eq!(json["status"], "fail");
        assert_eq!(json["witness"][0], "T^1_{12} = x1");
        let back: VerificationReport = serde_json::from_value(json).unwrap();
        assert_eq!(back, f);
    }
}
