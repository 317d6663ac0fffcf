//! Empirical scan of the Pfaffian diagram against the matching-sum Pfaffian.

use num_traits::Zero;

use super::oracle::pfaffian_oracle;
use super::random::{skew_matrix, trial_rng, trial_seed};
use super::report::{Status, VerificationReport, Witness};
use crate::binding::MatrixBinding;
use crate::diagram::Dimension;
use crate::error::{Error, Result};
use crate::eval::evaluate_closed;
use crate::library::pfaffian_diagram;
use crate::scalar::{self, Scalar};

/// Draws per sample before giving up on finding a nonzero Pfaffian.
const MAX_DRAWS: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PfaffianSample {
    pub trial: usize,
    pub pfaffian: Scalar,
    pub value: Scalar,
    pub ratio: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PfaffianScan {
    pub n: usize,
    pub samples: Vec<PfaffianSample>,
    /// Trials where every draw had a vanishing Pfaffian.
    pub skipped: Vec<usize>,
    /// Common ratio, when all ratios agree.
    pub constant: Option<Scalar>,
}

impl PfaffianScan {
    pub fn consistent(&self) -> bool {
        self.constant.is_some()
    }

    pub fn to_report(&self, seed: u64) -> VerificationReport {
        let status = if self.samples.is_empty() {
            Status::Inconclusive
        } else if self.consistent() {
            Status::ProvenExactOnSamples
        } else {
            Status::Failed
        };
        let mut notes = vec![match &self.constant {
            Some(c) => format!("constant={}", scalar::format(c)),
            None if self.samples.is_empty() => "constant=none (no nonzero Pfaffian sampled)".into(),
            None => "constant=inconsistent".into(),
        }];
        for s in &self.samples {
            notes.push(format!(
                "trial={} pf={} value={} ratio={}",
                s.trial,
                scalar::format(&s.pfaffian),
                scalar::format(&s.value),
                scalar::format(&s.ratio)
            ));
        }
        let witnesses = if status == Status::Failed {
            self.samples
                .iter()
                .map(|s| Witness {
                    trial: s.trial,
                    seed: trial_seed(seed, s.trial as u64),
                    detail: "ratio".into(),
                    residual: Some(scalar::format(&s.ratio)),
                })
                .collect()
        } else {
            Vec::new()
        };
        VerificationReport {
            identity: "pfaffian".into(),
            dimension: self.n,
            trials: self.samples.len() + self.skipped.len(),
            status,
            witnesses,
            notes,
            elapsed: Default::default(),
        }
    }
}

/// Ratios `value(pfaffian diagram) / Pf(A)` over random skew-symmetric integer
/// matrices with nonzero Pfaffian.
pub fn pfaffian_scan(n: usize, trials: usize, seed: u64) -> Result<PfaffianScan> {
    if n == 0 || n % 2 != 0 || n > 8 {
        return Err(Error::Unsupported(format!(
            "Pfaffian scan needs an even dimension up to 8, got {n}"
        )));
    }
    let dim = Dimension::new(n)?;
    let diagram = pfaffian_diagram(dim, "A")?;
    let mut samples = Vec::new();
    let mut skipped = Vec::new();
    for t in 0..trials {
        let mut rng = trial_rng(seed, t as u64);
        let mut found = None;
        for _ in 0..MAX_DRAWS {
            let a = skew_matrix(&mut rng, n);
            let pf = pfaffian_oracle(&a);
            if !pf.is_zero() {
                found = Some((a, pf));
                break;
            }
        }
        let Some((a, pf)) = found else {
            skipped.push(t);
            continue;
        };
        let binding = MatrixBinding::new(dim).with("A", a)?;
        let value = evaluate_closed(&diagram, &binding)?;
        let ratio = &value / &pf;
        samples.push(PfaffianSample {
            trial: t,
            pfaffian: pf,
            value,
            ratio,
        });
    }
    let constant = samples.first().map(|s| s.ratio.clone()).filter(|c| {
        samples.iter().all(|s| &s.ratio == c)
    });
    Ok(PfaffianScan {
        n,
        samples,
        skipped,
        constant,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;
    use crate::scalar::int;

    #[test]
    fn two_by_two_ratio_is_constant() {
        let dim = Dimension::new(2).unwrap();
        let d = pfaffian_diagram(dim, "A").unwrap();
        for a in 1..=3 {
            let m = Matrix::from_ints(&[[0, a], [-a, 0]]);
            let b = MatrixBinding::new(dim).with("A", m.clone()).unwrap();
            let ratio = evaluate_closed(&d, &b).unwrap() / pfaffian_oracle(&m);
            assert_eq!(ratio, int(-2));
        }
    }

    #[test]
    fn scan_reports_constant() {
        let s = pfaffian_scan(4, 5, 3).unwrap();
        assert_eq!(s.samples.len(), 5);
        assert!(s.consistent(), "{:?}", s.samples);
        assert!(pfaffian_scan(3, 1, 0).is_err());
    }
}
