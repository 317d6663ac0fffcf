//! Polarization of single-matrix identities by inclusion–exclusion.

use super::oracle::ch_trace_polynomial;
use super::random::{int_matrix, trial_rng};
use super::report::{Status, VerificationReport};
use crate::algebra::proportionality;
use crate::binding::MatrixBinding;
use crate::diagram::Dimension;
use crate::error::{Error, Result};
use crate::library::ch_diagram;
use crate::linalg::Matrix;
use crate::scalar::{self, Scalar};

/// Polar form of a degree-`k` matrix identity:
/// `(1/k!) Σ_{S ⊆ {1..k}} (−1)^{k−|S|} τ(Σ_{i∈S} A_i)`.
///
/// Homogeneity is checked on the first argument (`τ(2A) = 2^k τ(A)`) before
/// anything else is computed.
pub fn polarize<F>(tau: F, k: usize, matrices: &[Matrix]) -> Result<Matrix>
where
    F: Fn(&Matrix) -> Result<Matrix>,
{
    if matrices.len() != k || k == 0 {
        return Err(Error::ArityMismatch {
            expected: k,
            found: matrices.len(),
        });
    }
    let first = &matrices[0];
    let doubled = tau(&first.scale(&scalar::int(2)))?;
    let scaled = tau(first)?.scale(&num_traits::pow(scalar::int(2), k));
    if doubled != scaled {
        return Err(Error::NotHomogeneous { degree: k });
    }
    let shape = (first.rows(), first.cols());
    let mut acc: Option<Matrix> = None;
    for mask in 0u32..(1 << k) {
        let mut arg = Matrix::zeros(shape.0, shape.1);
        for (i, m) in matrices.iter().enumerate() {
            if mask & (1 << i) != 0 {
                arg = &arg + m;
            }
        }
        let value = tau(&arg)?;
        let sign = scalar::sign_power(k - mask.count_ones() as usize);
        let term = value.scale(&sign);
        acc = Some(match acc {
            Some(a) => &a + &term,
            None => term,
        });
    }
    Ok(acc.expect("at least one subset").scale(&(Scalar::from_integer(1.into()) / scalar::factorial(k))))
}

/// Outcome of comparing the generalized Cayley–Hamilton diagram with the
/// polarized Cayley–Hamilton identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolarizationReport {
    pub n: usize,
    pub samples: usize,
    /// `diagram = constant · polar form`, when one constant fits every sample.
    pub constant: Option<Scalar>,
    /// Both sides vanish on `n x n` matrices for every sample.
    pub vanish_in_dimension: bool,
}

impl PolarizationReport {
    pub fn passed(&self) -> bool {
        self.constant.is_some() && self.vanish_in_dimension
    }

    pub fn to_report(&self) -> VerificationReport {
        let mut notes = vec![match &self.constant {
            Some(c) => format!(
                "constant={} (diagram = constant · polar form, measured on {}x{} matrices)",
                scalar::format(c),
                self.n + 1,
                self.n + 1
            ),
            None => "constant=inconsistent".to_string(),
        }];
        notes.push(format!(
            "vanish-in-dimension-{}={}",
            self.n, self.vanish_in_dimension
        ));
        VerificationReport {
            identity: "polarize".into(),
            dimension: self.n,
            trials: self.samples,
            status: if self.passed() {
                Status::ProvenExactOnSamples
            } else {
                Status::Failed
            },
            witnesses: Vec::new(),
            notes,
            elapsed: Default::default(),
        }
    }
}

fn ch_side(dim: Dimension, mats: &[Matrix]) -> Result<Matrix> {
    let names: Vec<String> = (1..=mats.len()).map(|j| format!("A{j}")).collect();
    let mut b = MatrixBinding::new(dim);
    for (l, m) in names.iter().zip(mats) {
        b.bind(l.clone(), m.clone())?;
    }
    Ok(ch_diagram(dim, &names)?.function_matrix(&b)?.into_matrix())
}

/// Compares `ch_diagram(A_1..A_n)` with the polarized degree-`n`
/// Cayley–Hamilton trace polynomial.
///
/// In dimension `n` both sides are identically zero, which says nothing about
/// the constant between them. Both are built from traces and products only, so
/// they are evaluated on `(n+1) x (n+1)` matrices, where neither vanishes, to
/// measure the constant; the zero sets are then compared in dimension `n`.
pub fn polarization_check(n: usize, samples: usize, seed: u64) -> Result<PolarizationReport> {
    if !(1..=3).contains(&n) {
        return Err(Error::Unsupported(format!("polarization check needs 1 <= n <= 3, got {n}")));
    }
    let tau = |a: &Matrix| Ok(ch_trace_polynomial(n, a));
    let big = Dimension::new(n + 1)?;
    let small = Dimension::new(n)?;
    let mut constant: Option<Option<Scalar>> = None;
    let mut vanish = true;
    for t in 0..samples {
        let mut rng = trial_rng(seed, t as u64);
        let mats: Vec<Matrix> = (0..n).map(|_| int_matrix(&mut rng, n + 1)).collect();
        let diagram = ch_side(big, &mats)?;
        let polar = polarize(tau, n, &mats)?;
        let ratio = if polar.is_zero() && diagram.is_zero() {
            // Uninformative sample; skip it for the constant.
            None
        } else {
            Some(proportionality(&diagram, &polar))
        };
        if let Some(r) = ratio {
            constant = Some(match (constant, r) {
                (None, r) => r,
                (Some(Some(c)), Some(r)) if c == r => Some(c),
                _ => None,
            });
        }
        let small_mats: Vec<Matrix> = (0..n).map(|_| int_matrix(&mut rng, n)).collect();
        let d_small = ch_side(small, &small_mats)?;
        let p_small = polarize(tau, n, &small_mats)?;
        vanish &= d_small.is_zero() && p_small.is_zero();
    }
    Ok(PolarizationReport {
        n,
        samples,
        constant: constant.flatten(),
        vanish_in_dimension: vanish,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    fn m(rows: &[[i64; 2]]) -> Matrix {
        Matrix::from_ints(rows)
    }

    #[test]
    fn square_polarizes_to_symmetric_product() {
        let a1 = m(&[[1, 2], [0, 1]]);
        let a2 = m(&[[0, 1], [3, -1]]);
        let p = polarize(|a| Ok(a * a), 2, &[a1.clone(), a2.clone()]).unwrap();
        let expected = (&(&a1 * &a2) + &(&a2 * &a1)).scale(&ratio(1, 2));
        assert_eq!(p, expected);
    }

    #[test]
    fn trace_times_matrix() {
        let a1 = m(&[[1, 2], [0, 1]]);
        let a2 = m(&[[0, 1], [3, -1]]);
        let p = polarize(|a| Ok(a.scale(&a.trace())), 2, &[a1.clone(), a2.clone()]).unwrap();
        let expected = (&a2.scale(&a1.trace()) + &a1.scale(&a2.trace())).scale(&ratio(1, 2));
        assert_eq!(p, expected);
    }

    #[test]
    fn diagonal_restriction_recovers_tau() {
        let a = m(&[[2, -1], [5, 3]]);
        let tau = |x: &Matrix| Ok(&(x * x) * x);
        let p = polarize(tau, 3, &[a.clone(), a.clone(), a.clone()]).unwrap();
        assert_eq!(p, tau(&a).unwrap());
    }

    #[test]
    fn inhomogeneous_is_rejected() {
        let a = m(&[[1, 0], [0, 1]]);
        let r = polarize(|x| Ok(&(x * x) + x), 2, &[a.clone(), a]);
        assert_eq!(r, Err(Error::NotHomogeneous { degree: 2 }));
    }

    #[test]
    fn constant_is_n_factorial() {
        let r = polarization_check(2, 3, 1).unwrap();
        assert_eq!(r.constant, Some(int(2)));
        assert!(r.vanish_in_dimension);
        let r = polarization_check(3, 2, 1).unwrap();
        assert_eq!(r.constant, Some(int(6)));
    }
}
