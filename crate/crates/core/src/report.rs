use serde::Serialize;

/// Outcome of one named check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

impl Check {
    pub fn pass(name: impl Into<String>) -> Self {
        Check { name: name.into(), pass: true, counterexample: None }
    }

    pub fn fail(name: impl Into<String>, counterexample: impl Into<String>) -> Self {
        Check { name: name.into(), pass: false, counterexample: Some(counterexample.into()) }
    }

    /// Pass when `witness` is `None`, fail with the witness otherwise.
    pub fn from_witness(name: impl Into<String>, witness: Option<String>) -> Self {
        match witness {
            None => Check::pass(name),
            Some(w) => Check::fail(name, w),
        }
    }
}

/// An ordered list of checks. Verifiers return these instead of erroring.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.pass)
    }
}
