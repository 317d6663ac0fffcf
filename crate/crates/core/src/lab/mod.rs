//! Verification drivers for the diagrammatic identities, with classical
//! oracles to check them against.
//!
//! Every check is an exact equality over the rationals. Trials draw their
//! matrices from independent seeded streams and run in parallel; results are
//! merged by trial index, so reports do not depend on the worker count.

mod drivers;
pub mod oracle;
mod pfaffian;
mod polar;
pub mod random;
mod report;

use std::time::Instant;

use rayon::prelude::*;

use crate::binding::MatrixBinding;
use crate::diagram::Dimension;
use crate::error::{Error, Result};
use crate::eval::evaluate_closed;
use crate::library::char_coeff_diagram;
use crate::linalg::Matrix;
use crate::scalar::{self, Scalar};

pub use drivers::{verify, Identity};
pub use pfaffian::{pfaffian_scan, PfaffianSample, PfaffianScan};
pub use polar::{polarization_check, polarize, PolarizationReport};
pub use random::{trial_rng, trial_seed, TrialRng};
pub use report::{Failure, Status, VerificationReport, Witness};

/// `c_0 .. c_n` of `det(A − λI)` read off the characteristic-coefficient diagrams.
pub fn charpoly_diagrammatic(a: &Matrix) -> Result<Vec<Scalar>> {
    if !a.is_square() || a.rows() == 0 {
        return Err(Error::Unsupported("characteristic polynomial needs a square matrix".into()));
    }
    let n = a.rows();
    let dim = Dimension::new(n)?;
    let binding = MatrixBinding::new(dim).with("A", a.clone())?;
    (0..=n)
        .map(|i| {
            let value = evaluate_closed(&char_coeff_diagram(dim, i, "A")?, &binding)?;
            let factor = scalar::sign_power(i + n / 2)
                / (scalar::factorial(i) * scalar::factorial(n - i));
            Ok(value * factor)
        })
        .collect()
}

/// Runs `trial` for indices `0..trials` in parallel, each with its own stream,
/// and assembles a report in index order.
pub(crate) fn run_trials<F>(
    identity: &str,
    n: usize,
    trials: usize,
    seed: u64,
    trial: F,
) -> Result<VerificationReport>
where
    F: Fn(usize, &mut TrialRng) -> Result<Option<Failure>> + Sync,
{
    let start = Instant::now();
    let outcomes: Vec<Option<Failure>> = (0..trials)
        .into_par_iter()
        .map(|t| trial(t, &mut trial_rng(seed, t as u64)))
        .collect::<Result<_>>()?;
    let witnesses: Vec<Witness> = outcomes
        .into_iter()
        .enumerate()
        .filter_map(|(t, f)| f.map(|f| report::witness(t, trial_seed(seed, t as u64), f)))
        .collect();
    Ok(VerificationReport {
        identity: identity.to_string(),
        dimension: n,
        trials,
        status: if witnesses.is_empty() {
            Status::ProvenExactOnSamples
        } else {
            Status::Failed
        },
        witnesses,
        notes: Vec::new(),
        elapsed: start.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    #[test]
    fn diagrammatic_charpoly_two_by_two() {
        let a = Matrix::from_ints(&[[1, 2], [3, 4]]);
        assert_eq!(charpoly_diagrammatic(&a).unwrap(), vec![int(-2), int(-5), int(1)]);
    }

    #[test]
    fn diagrammatic_charpoly_matches_oracle_in_three() {
        let a = Matrix::from_ints(&[[2, -1, 0], [4, 3, 1], [0, 5, -2]]);
        assert_eq!(charpoly_diagrammatic(&a).unwrap(), oracle::charpoly_oracle(&a));
    }

    #[test]
    fn reports_are_independent_of_scheduling() {
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| {
                    run_trials("demo", 2, 16, 9, |t, rng| {
                        let m = random::int_matrix(rng, 2);
                        Ok((t % 5 == 0).then(|| Failure::with_residual("flagged", Some(m.trace()))))
                    })
                    .unwrap()
                })
        };
        let mut a = run(1);
        let mut b = run(4);
        a.elapsed = Default::default();
        b.elapsed = Default::default();
        assert_eq!(a, b);
        assert_eq!(a.witnesses.len(), 4);
    }
}
