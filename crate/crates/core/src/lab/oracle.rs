//! Classical computations used as independent references. None of these go
//! through the diagram engine.

use num_traits::{One, Zero};

use crate::linalg::Matrix;
use crate::scalar::{self, Scalar};

/// Coefficients `c_0 .. c_n` of `det(A − λI) = Σ c_i λ^i` by the
/// Faddeev–LeVerrier recurrence.
pub fn charpoly_oracle(a: &Matrix) -> Vec<Scalar> {
    assert!(a.is_square(), "characteristic polynomial of a non-square matrix");
    let n = a.rows();
    // Monic det(λI − A) = Σ m_i λ^i, built from the top down.
    let mut monic = vec![Scalar::zero(); n + 1];
    monic[n] = Scalar::one();
    let identity = Matrix::identity(n);
    let mut m = Matrix::zeros(n, n);
    for k in 1..=n {
        m = &(a * &m) + &identity.scale(&monic[n - k + 1]);
        let am = a * &m;
        monic[n - k] = -am.trace() / scalar::int(k as i64);
    }
    let sign = scalar::sign_power(n);
    monic.into_iter().map(|c| c * &sign).collect()
}

/// `det(A − λI)` at a single point, by elimination.
pub fn charpoly_at(a: &Matrix, lambda: &Scalar) -> Scalar {
    (a - &Matrix::identity(a.rows()).scale(lambda)).determinant()
}

/// `Σ c_i A^i`.
pub fn matrix_polynomial(coefficients: &[Scalar], a: &Matrix) -> Matrix {
    let mut acc = Matrix::zeros(a.rows(), a.cols());
    let mut power = Matrix::identity(a.rows());
    for c in coefficients {
        acc = &acc + &power.scale(c);
        power = &power * a;
    }
    acc
}

/// Pfaffian by expansion along the first row over perfect matchings.
pub fn pfaffian_oracle(a: &Matrix) -> Scalar {
    assert!(a.is_square(), "Pfaffian of a non-square matrix");
    let idx: Vec<usize> = (0..a.rows()).collect();
    pfaffian_rec(a, &idx)
}

fn pfaffian_rec(a: &Matrix, idx: &[usize]) -> Scalar {
    if idx.is_empty() {
        return Scalar::one();
    }
    if idx.len() % 2 == 1 {
        return Scalar::zero();
    }
    let first = idx[0];
    let mut total = Scalar::zero();
    for j in 1..idx.len() {
        let entry = &a[(first, idx[j])];
        if entry.is_zero() {
            continue;
        }
        let rest: Vec<usize> = idx[1..]
            .iter()
            .enumerate()
            .filter(|&(p, _)| p + 1 != j)
            .map(|(_, &v)| v)
            .collect();
        // Sign of pairing the first index with the j-th (0-based) is (-1)^(j+1).
        let term = entry * pfaffian_rec(a, &rest);
        if j % 2 == 1 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

/// Elementary symmetric functions `e_0 .. e_m` from power sums `p_1 .. p_m`
/// via Newton's identities.
pub fn elementary_from_power_sums(p: &[Scalar]) -> Vec<Scalar> {
    let mut e = vec![Scalar::one()];
    for k in 1..=p.len() {
        let mut acc = Scalar::zero();
        for i in 1..=k {
            let term = &e[k - i] * &p[i - 1];
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        e.push(acc / scalar::int(k as i64));
    }
    e
}

/// `e_0 .. e_m` of the eigenvalues of `A`, from traces of powers.
pub fn elementary_invariants(a: &Matrix, m: usize) -> Vec<Scalar> {
    let mut p = Vec::with_capacity(m);
    let mut power = Matrix::identity(a.rows());
    for _ in 0..m {
        power = &power * a;
        p.push(power.trace());
    }
    elementary_from_power_sums(&p)
}

/// The degree-`n` Cayley–Hamilton trace polynomial `Σ_i (−1)^i e_{n−i}(A) A^i`.
///
/// It vanishes on `n x n` matrices and, being written in traces, makes sense
/// for square matrices of any size.
pub fn ch_trace_polynomial(n: usize, a: &Matrix) -> Matrix {
    let e = elementary_invariants(a, n);
    let coefficients: Vec<Scalar> = (0..=n)
        .map(|i| &e[n - i] * scalar::sign_power(i))
        .collect();
    matrix_polynomial(&coefficients, a)
}

/// Left side of the Fricke relation, `tr(ABC) + tr(ACB)`.
pub fn fricke_lhs(a: &Matrix, b: &Matrix, c: &Matrix) -> Scalar {
    (&(a * b) * c).trace() + (&(a * c) * b).trace()
}

/// Right side, `tr(AB)tr(C) + tr(A)tr(BC) + tr(B)tr(CA) − tr(A)tr(B)tr(C)`.
pub fn fricke_rhs(a: &Matrix, b: &Matrix, c: &Matrix) -> Scalar {
    let (ta, tb, tc) = (a.trace(), b.trace(), c.trace());
    (a * b).trace() * &tc + &ta * (b * c).trace() + &tb * (c * a).trace() - ta * tb * tc
}

pub fn cross(u: &[Scalar], v: &[Scalar]) -> Vec<Scalar> {
    vec![
        &u[1] * &v[2] - &u[2] * &v[1],
        &u[2] * &v[0] - &u[0] * &v[2],
        &u[0] * &v[1] - &u[1] * &v[0],
    ]
}

pub fn dot(u: &[Scalar], v: &[Scalar]) -> Scalar {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    fn ints(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn charpoly_of_identity() {
        assert_eq!(charpoly_oracle(&Matrix::identity(3)), ints(&[1, -3, 3, -1]));
    }

    #[test]
    fn charpoly_of_companion() {
        // Companion matrix of λ² − 5λ − 2.
        let c = Matrix::from_ints(&[[0, 2], [1, 5]]);
        assert_eq!(charpoly_oracle(&c), ints(&[-2, -5, 1]));
        let a = Matrix::from_ints(&[[1, 2], [3, 4]]);
        assert_eq!(charpoly_oracle(&a), ints(&[-2, -5, 1]));
    }

    #[test]
    fn charpoly_matches_point_evaluation() {
        let a = Matrix::from_rows(vec![
            vec![ratio(1, 2), int(3), int(-1), int(0)],
            vec![int(2), ratio(-2, 3), int(4), int(1)],
            vec![int(0), int(5), int(1), ratio(7, 5)],
            vec![int(-3), int(1), int(2), int(2)],
        ]);
        let c = charpoly_oracle(&a);
        for l in [-2, -1, 0, 1, 3] {
            let lambda = int(l);
            let poly: Scalar = c
                .iter()
                .enumerate()
                .map(|(i, ci)| ci * num_traits::pow(lambda.clone(), i))
                .sum();
            assert_eq!(poly, charpoly_at(&a, &lambda));
        }
    }

    #[test]
    fn pfaffian_small_cases() {
        assert_eq!(pfaffian_oracle(&Matrix::from_ints(&[[0, 5], [-5, 0]])), int(5));
        let a = Matrix::from_ints(&[[0, 1, 2, 3], [-1, 0, 4, 5], [-2, -4, 0, 6], [-3, -5, -6, 0]]);
        // a12 a34 − a13 a24 + a14 a23
        assert_eq!(pfaffian_oracle(&a), int(6 - 10 + 12));
        assert_eq!(pfaffian_oracle(&a).pow(2), a.determinant());
    }

    #[test]
    fn newton_identities() {
        // Eigenvalues 1, 2, 3: p = (6, 14, 36), e = (1, 6, 11, 6).
        let e = elementary_from_power_sums(&ints(&[6, 14, 36]));
        assert_eq!(e, ints(&[1, 6, 11, 6]));
    }

    #[test]
    fn trace_polynomial_vanishes_in_its_dimension() {
        let a = Matrix::from_ints(&[[2, -1, 0], [4, 3, 1], [0, 5, -2]]);
        assert!(ch_trace_polynomial(3, &a).is_zero());
        assert!(!ch_trace_polynomial(2, &a).is_zero());
    }

    #[test]
    fn fricke_on_identities() {
        let i = Matrix::identity(2);
        assert_eq!(fricke_lhs(&i, &i, &i), int(4));
        assert_eq!(fricke_rhs(&i, &i, &i), int(4));
    }

    #[test]
    fn cross_and_dot() {
        assert_eq!(cross(&ints(&[1, 0, 0]), &ints(&[0, 1, 0])), ints(&[0, 0, 1]));
        assert_eq!(dot(&ints(&[1, 2, 3]), &ints(&[4, 5, 6])), int(32));
    }
}
