//! Per-branch results of a contract check.

use std::fmt;

use serde_json::{json, Value};

/// Counterexamples kept per branch.
const KEPT_COUNTEREXAMPLES: usize = 5;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct BranchStats {
    pub hits: usize,
    pub passes: usize,
    /// The first few failures, in order of discovery.
    pub counterexamples: Vec<String>,
}

impl BranchStats {
    pub fn failures(&self) -> usize {
        self.hits - self.passes
    }
}

/// Outcome of one contract check.
///
/// A report fails when any branch has a counterexample or was never hit:
/// a generator that never reaches a branch leaves it untested.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub name: String,
    pub branches: Vec<(String, BranchStats)>,
}

impl Report {
    /// A report with the given branches, all unhit.
    pub fn new(name: &str, branches: &[&str]) -> Report {
        Report {
            name: name.to_string(),
            branches: branches.iter().map(|b| (b.to_string(), BranchStats::default())).collect(),
        }
    }

    fn slot(&mut self, branch: &str) -> &mut BranchStats {
        if let Some(i) = self.branches.iter().position(|(b, _)| b == branch) {
            return &mut self.branches[i].1;
        }
        self.branches.push((branch.to_string(), BranchStats::default()));
        &mut self.branches.last_mut().unwrap().1
    }

    /// Records one case; `describe` is called only on failure.
    pub fn record(&mut self, branch: &str, ok: bool, describe: impl FnOnce() -> String) {
        let s = self.slot(branch);
        s.hits += 1;
        if ok {
            s.passes += 1;
        } else if s.counterexamples.len() < KEPT_COUNTEREXAMPLES {
            s.counterexamples.push(describe());
        }
    }

    pub fn branch(&self, name: &str) -> Option<&BranchStats> {
        self.branches.iter().find(|(b, _)| b == name).map(|(_, s)| s)
    }

    /// Combines the counts of two reports of the same check.
    pub fn merge(mut self, other: Report) -> Report {
        for (b, s) in other.branches {
            let mine = self.slot(&b);
            mine.hits += s.hits;
            mine.passes += s.passes;
            let room = KEPT_COUNTEREXAMPLES.saturating_sub(mine.counterexamples.len());
            mine.counterexamples.extend(s.counterexamples.into_iter().take(room));
        }
        self
    }

    pub fn counterexample_count(&self) -> usize {
        self.branches.iter().map(|(_, s)| s.failures()).sum()
    }

    pub fn uncovered(&self) -> Vec<&str> {
        self.branches.iter().filter(|(_, s)| s.hits == 0).map(|(b, _)| b.as_str()).collect()
    }

    pub fn passed(&self) -> bool {
        self.counterexample_count() == 0 && self.uncovered().is_empty()
    }

    /// Machine-readable summary: counts and the first counterexample per branch.
    pub fn to_json(&self) -> Value {
        let branches: Vec<Value> = self
            .branches
            .iter()
            .map(|(b, s)| {
                json!({
                    "branch": b,
                    "hits": s.hits,
                    "passes": s.passes,
                    "first_counterexample": s.counterexamples.first(),
                })
            })
            .collect();
        json!({
            "check": self.name,
            "passed": self.passed(),
            "counterexamples": self.counterexample_count(),
            "branches": branches,
        })
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "check {}", self.name)?;
        let width = self.branches.iter().map(|(b, _)| b.len()).max().unwrap_or(0);
        for (b, s) in &self.branches {
            let mark = if s.hits == 0 {
                "  (never hit)"
            } else if s.failures() > 0 {
                "  FAIL"
            } else {
                ""
            };
            writeln!(f, "  {b:<width$}  {}/{}{mark}", s.passes, s.hits)?;
            for c in &s.counterexamples {
                writeln!(f, "    counterexample: {c}")?;
            }
        }
        write!(f, "{}", if self.passed() { "PASS" } else { "FAIL" })
    }
}
