use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

/// One verified statement. `detail` is a witness on success, a counterexample
/// on failure and the reason when skipped.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub id: String,
    pub anchor: String,
    pub status: Status,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub checks: Vec<Check>,
    pub summary: Summary,
}

impl VerificationReport {
    pub fn new(suite: impl Into<String>, checks: Vec<Check>) -> Self {
        let count = |s: Status| checks.iter().filter(|c| c.status == s).count();
        let summary = Summary {
            total: checks.len(),
            passed: count(Status::Pass),
            failed: count(Status::Fail),
            skipped: count(Status::Skipped),
        };
        VerificationReport {
            suite: suite.into(),
            checks,
            summary,
        }
    }

    pub fn merge(suite: impl Into<String>, parts: Vec<VerificationReport>) -> Self {
        Self::new(suite, parts.into_iter().flat_map(|r| r.checks).collect())
    }

    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn exit_code(&self) -> i32 {
        if self.all_passed() {
            0
        } else {
            1
        }
    }

    pub fn find(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("id\tstatus\tanchor\tdetail\n");
        for c in &self.checks {
            let status = match c.status {
                Status::Pass => "pass",
                Status::Fail => "fail",
                Status::Skipped => "skipped",
            };
            out.push_str(&format!("{}\t{status}\t{}\t{}\n", c.id, c.anchor, c.detail.replace(['\t', '\n'], " ")));
        }
        out
    }
}

pub enum Outcome {
    Pass(String),
    Fail(String),
    Skip(String),
}

impl Outcome {
    pub fn from_bool(ok: bool, witness: impl Into<String>, counterexample: impl FnOnce() -> String) -> Self {
        if ok {
            Outcome::Pass(witness.into())
        } else {
            Outcome::Fail(counterexample())
        }
    }
}

type Job = Box<dyn Fn() -> Result<Outcome> + Send + Sync>;

/// A batch of independent checks, run in parallel and reported in insertion order.
#[derive(Default)]
pub struct Plan {
    tasks: Vec<(String, String, Job)>,
}

impl Plan {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add<F>(&mut self, id: impl Into<String>, anchor: impl Into<String>, job: F)
    where
        F: Fn() -> Result<Outcome> + Send + Sync + 'static,
    {
        self.tasks.push((id.into(), anchor.into(), Box::new(job)));
    }

    pub fn run(self) -> Vec<Check> {
        self.tasks
            .into_par_iter()
            .map(|(id, anchor, job)| {
                let (status, detail) = match job() {
                    Ok(Outcome::Pass(w)) => (Status::Pass, w),
                    Ok(Outcome::Fail(w)) => (Status::Fail, w),
                    Ok(Outcome::Skip(w)) => (Status::Skipped, w),
                    Err(e @ Error::GuardExceeded { .. }) => (Status::Skipped, format!("guard: {e}")),
                    Err(e) => (Status::Fail, format!("error: {e}")),
                };
                Check {
                    id,
                    anchor,
                    status,
                    detail,
                }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plan_keeps_order_and_maps_errors() {
        let mut plan = Plan::new();
        plan.add("a", "first", || Ok(Outcome::Pass("ok".into())));
        plan.add("b", "second", || Err(Error::GuardExceeded { points: 10, limit: 1 }));
        plan.add("c", "third", || Err(Error::DivisionByZero));
        plan.add("d", "fourth", || Ok(Outcome::from_bool(false, "", || "x = 3".into())));
        let r = VerificationReport::new("t", plan.run());
        let ids: Vec<&str> = r.checks.iter().map(|c| c.id.as_str()).collect();
        assert_eq!(ids, ["a", "b", "c", "d"]);
        assert_eq!(r.summary, Summary { total: 4, passed: 1, failed: 2, skipped: 1 });
        assert_eq!(r.exit_code(), 1);
        assert_eq!(r.find("d").unwrap().detail, "x = 3");
    }
}
