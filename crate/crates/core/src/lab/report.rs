use std::fmt::Write as _;
use std::time::Duration;

use serde::Serialize;
use serde_json::{json, Value};

use crate::scalar::{self, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    ProvenExactOnSamples,
    Failed,
    /// Nothing could be checked, e.g. every sampled Pfaffian vanished.
    Inconclusive,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::ProvenExactOnSamples => "proven-exact-on-samples",
            Status::Failed => "failed",
            Status::Inconclusive => "inconclusive",
        }
    }
}

/// A failing trial: where its stream came from and what differed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub trial: usize,
    pub seed: u64,
    pub detail: String,
    /// Exact text of the largest residual entry, when there is one.
    pub residual: Option<String>,
}

/// What a single trial reports when a check fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub detail: String,
    pub residual: Option<Scalar>,
}

impl Failure {
    pub fn new(detail: impl Into<String>) -> Self {
        Failure {
            detail: detail.into(),
            residual: None,
        }
    }

    pub fn with_residual(detail: impl Into<String>, residual: Option<Scalar>) -> Self {
        Failure {
            detail: detail.into(),
            residual,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub identity: String,
    pub dimension: usize,
    pub trials: usize,
    pub status: Status,
    pub witnesses: Vec<Witness>,
    /// Measured quantities worth reporting, e.g. a proportionality constant.
    pub notes: Vec<String>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.status == Status::ProvenExactOnSamples
    }

    /// Line-oriented form. Timing is left out unless asked for, so output
    /// depends only on the inputs.
    pub fn to_text(&self, timing: bool) -> String {
        let mut out = format!(
            "{} dim={} trials={} status={}",
            self.identity,
            self.dimension,
            self.trials,
            self.status.as_str()
        );
        if timing {
            let _ = write!(out, " elapsed_ms={}", self.elapsed.as_millis());
        }
        out.push('\n');
        for note in &self.notes {
            let _ = writeln!(out, "  note {note}");
        }
        for w in &self.witnesses {
            let _ = write!(out, "  witness trial={} seed={}", w.trial, w.seed);
            if let Some(r) = &w.residual {
                let _ = write!(out, " residual={r}");
            }
            let _ = writeln!(out, " {}", w.detail);
        }
        out
    }

    /// One summary record, then one record per witness.
    pub fn records(&self, timing: bool) -> Vec<Value> {
        let mut summary = json!({
            "record": "report",
            "identity": self.identity,
            "dimension": self.dimension,
            "trials": self.trials,
            "status": self.status,
            "notes": self.notes,
            "witnesses": self.witnesses.len(),
        });
        if timing {
            summary["elapsed_ms"] = json!(self.elapsed.as_millis() as u64);
        }
        let mut out = vec![summary];
        for w in &self.witnesses {
            out.push(json!({
                "record": "witness",
                "identity": self.identity,
                "dimension": self.dimension,
                "trial": w.trial,
                "seed": w.seed,
                "residual": w.residual,
                "detail": w.detail,
            }));
        }
        out
    }
}

pub(crate) fn witness(trial: usize, seed: u64, failure: Failure) -> Witness {
    Witness {
        trial,
        seed,
        detail: failure.detail,
        residual: failure.residual.as_ref().map(scalar::format),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_and_records() {
        let r = VerificationReport {
            identity: "ch".into(),
            dimension: 2,
            trials: 3,
            status: Status::Failed,
            witnesses: vec![witness(
                1,
                42,
                Failure::with_residual("nonzero", Some(scalar::ratio(-3, 2))),
            )],
            notes: vec!["constant=2".into()],
            elapsed: Duration::from_millis(5),
        };
        let text = r.to_text(false);
        assert!(text.starts_with("ch dim=2 trials=3 status=failed\n"));
        assert!(text.contains("witness trial=1 seed=42 residual=-3/2 nonzero"));
        assert!(!text.contains("elapsed"));
        let recs = r.records(false);
        assert_eq!(recs.len(), 2);
        assert_eq!(recs[0]["status"], "failed");
        assert_eq!(recs[1]["residual"], "-3/2");
    }
}
