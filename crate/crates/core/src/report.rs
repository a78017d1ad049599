use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

/// One verified identity. `paper_ref` holds a plain statement of the
/// identity being checked.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub check_id: String,
    pub paper_ref: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<serde_json::Value>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn push(&mut self, check_id: impl Into<String>, statement: impl Into<String>, status: Status, witness: Option<serde_json::Value>) {
        self.checks.push(Check { check_id: check_id.into(), paper_ref: statement.into(), status, witness });
    }

    pub fn pass(&mut self, check_id: impl Into<String>, statement: impl Into<String>) {
        self.push(check_id, statement, Status::Pass, None);
    }

    pub fn skip(&mut self, check_id: impl Into<String>, statement: impl Into<String>, reason: &str) {
        self.push(check_id, statement, Status::Skipped, Some(serde_json::Value::String(reason.to_string())));
    }

    /// Records pass when `ok`, otherwise fail with the given witness.
    pub fn record(&mut self, check_id: impl Into<String>, statement: impl Into<String>, ok: bool, witness: impl FnOnce() -> serde_json::Value) {
        if ok {
            self.pass(check_id, statement);
        } else {
            self.push(check_id, statement, Status::Fail, Some(witness()));
        }
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn count(&self, status: Status) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }

    pub fn all_passed(&self) -> bool {
        self.count(Status::Fail) == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(&self.checks).expect("report serializes")
    }
}
