use std::fmt::Write as _;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::LatticeError;

/// Enough to regenerate the family a fuzz check failed on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Repro {
    pub seed: u64,
    pub trial: u64,
    pub n: usize,
    pub k: usize,
    pub p: usize,
    pub q: usize,
    pub search: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    /// Fixture name, or `fuzz`.
    pub scope: String,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub repro: Option<Repro>,
}

/// A concrete object backing a verdict: a matching, a family, a witness pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub scope: String,
    pub name: String,
    pub value: String,
}

/// An observation that is reported but not judged: research-mode outcomes
/// and discrepancies with the stated examples.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Finding {
    pub scope: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trial: Option<u64>,
    pub kind: String,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub name: String,
    pub millis: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub inputs: Vec<String>,
    pub verdicts: Vec<Verdict>,
    pub witnesses: Vec<Witness>,
    pub findings: Vec<Finding>,
    pub timings: Vec<Timing>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("{fixture}: {fact} does not hold: {detail}")]
    FixtureMismatch {
        fixture: String,
        fact: String,
        detail: String,
    },
    #[error("{check} failed (seed {}, trial {}): {detail}", .repro.seed, .repro.trial)]
    InvariantViolation {
        check: String,
        repro: Repro,
        detail: String,
    },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

impl Report {
    pub fn new(command: impl Into<String>, inputs: Vec<String>) -> Self {
        Self {
            command: command.into(),
            inputs,
            verdicts: Vec::new(),
            witnesses: Vec::new(),
            findings: Vec::new(),
            timings: Vec::new(),
        }
    }

    pub fn verdict(
        &mut self,
        scope: &str,
        name: impl Into<String>,
        passed: bool,
        detail: impl Into<String>,
    ) {
        self.verdicts.push(Verdict {
            scope: scope.into(),
            name: name.into(),
            passed,
            detail: detail.into(),
            repro: None,
        });
    }

    pub fn witness(&mut self, scope: &str, name: impl Into<String>, value: impl ToString) {
        self.witnesses.push(Witness {
            scope: scope.into(),
            name: name.into(),
            value: value.to_string(),
        });
    }

    pub fn finding(
        &mut self,
        scope: &str,
        trial: Option<u64>,
        kind: impl Into<String>,
        detail: impl Into<String>,
    ) {
        self.findings.push(Finding {
            scope: scope.into(),
            trial,
            kind: kind.into(),
            detail: detail.into(),
        });
    }

    /// Runs `f`, recording its wall time under `name`.
    pub fn timed<T>(&mut self, name: &str, f: impl FnOnce(&mut Self) -> T) -> T {
        let start = Instant::now();
        let out = f(self);
        self.timings.push(Timing {
            name: name.into(),
            millis: start.elapsed().as_secs_f64() * 1e3,
        });
        out
    }

    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Verdict> {
        self.verdicts.iter().filter(|v| !v.passed)
    }

    /// The first failing verdict as an error.
    pub fn first_error(&self) -> Option<VerifyError> {
        self.failures().next().map(|v| match &v.repro {
            Some(repro) => VerifyError::InvariantViolation {
                check: v.name.clone(),
                repro: repro.clone(),
                detail: v.detail.clone(),
            },
            None => VerifyError::FixtureMismatch {
                fixture: v.scope.clone(),
                fact: v.name.clone(),
                detail: v.detail.clone(),
            },
        })
    }

    /// The report with wall-clock data dropped; equal across runs with the same inputs.
    pub fn deterministic(&self) -> Report {
        Report {
            timings: Vec::new(),
            ..self.clone()
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {}", self.command, self.inputs.join(" "));
        for v in &self.verdicts {
            let tag = if v.passed { "PASS" } else { "FAIL" };
            let _ = write!(out, "{tag} [{}] {}", v.scope, v.name);
            if !v.detail.is_empty() {
                let _ = write!(out, ": {}", v.detail);
            }
            if let Some(r) = &v.repro {
                let _ = write!(out, " (seed {}, trial {})", r.seed, r.trial);
            }
            out.push('\n');
        }
        for w in &self.witnesses {
            let _ = writeln!(
                out,
                "  [{}] {} = {}",
                w.scope,
                w.name,
                w.value.trim_end().replace('\n', "\n    ")
            );
        }
        for f in &self.findings {
            let trial = f.trial.map(|t| format!(" trial {t}")).unwrap_or_default();
            let _ = writeln!(out, "NOTE [{}{trial}] {}: {}", f.scope, f.kind, f.detail);
        }
        for t in &self.timings {
            let _ = writeln!(out, "  time {}: {:.1} ms", t.name, t.millis);
        }
        let failed = self.failures().count();
        let _ = writeln!(
            out,
            "{} verdicts, {failed} failed, {} findings",
            self.verdicts.len(),
            self.findings.len()
        );
        out
    }
}
