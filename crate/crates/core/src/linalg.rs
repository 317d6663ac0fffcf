//! Dense exact-rational matrices.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::scalar::{self, Scalar};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_ints<const C: usize>(rows: &[[i64; C]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|&x| scalar::int(x)).collect())
                .collect(),
        )
    }

    pub fn diagonal(entries: &[Scalar]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, x) in entries.iter().enumerate() {
            m[(i, i)] = x.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn trace(&self) -> Scalar {
        assert!(self.is_square(), "trace of non-square matrix");
        (0..self.rows).map(|i| &self[(i, i)]).sum()
    }

    pub fn scale(&self, factor: &Scalar) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * factor).collect(),
        }
    }

    pub fn pow(&self, exponent: usize) -> Self {
        assert!(self.is_square(), "power of non-square matrix");
        let mut acc = Self::identity(self.rows);
        for _ in 0..exponent {
            acc = &acc * self;
        }
        acc
    }

    /// Kronecker product; row/column indices of `self` are the more significant digits.
    pub fn kron(&self, other: &Matrix) -> Self {
        let mut k = Self::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = &self[(i, j)];
                if a.is_zero() {
                    continue;
                }
                for p in 0..other.rows {
                    for q in 0..other.cols {
                        k[(i * other.rows + p, j * other.cols + q)] = a * &other[(p, q)];
                    }
                }
            }
        }
        k
    }

    pub fn skew_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows)
                .all(|i| (0..self.cols).all(|j| self[(i, j)] == -self[(j, i)].clone()))
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    ///
    /// Rows are first scaled to integers, so the elimination itself runs over
    /// `BigInt` with exact divisions only.
    pub fn determinant(&self) -> Scalar {
        assert!(self.is_square(), "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Scalar::one();
        }
        let mut scale = BigInt::one();
        let mut a: Vec<Vec<BigInt>> = (0..n)
            .map(|i| {
                let lcm = self
                    .row(i)
                    .iter()
                    .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
                scale *= &lcm;
                self.row(i)
                    .iter()
                    .map(|x| x.numer() * (&lcm / x.denom()))
                    .collect()
            })
            .collect();

        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                    Some(r) => {
                        a.swap(k, r);
                        sign = -sign;
                    }
                    None => return Scalar::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let value = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = value / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        Scalar::new(sign * &a[n - 1][n - 1], scale)
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Scalar;

    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &Matrix {
    type Output = Matrix;

    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in product");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }
}

impl Add for &Matrix {
    type Output = Matrix;

    fn add(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in sum");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Matrix {
    type Output = Matrix;

    fn sub(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in difference");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &Matrix {
    type Output = Matrix;

    fn neg(self) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| -x).collect(),
        }
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix{:?}", self.to_string_rows())
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.to_string_rows().iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

impl Matrix {
    fn to_string_rows(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(scalar::format).collect())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    #[test]
    fn bareiss_matches_cofactor_expansion() {
        let a = Matrix::from_ints(&[[2, -1, 0], [1, 3, 4], [0, 5, -2]]);
        // 2(3*-2 - 4*5) - (-1)(1*-2 - 0) + 0 = -52 - 2
        assert_eq!(a.determinant(), int(-54));
    }

    #[test]
    fn bareiss_pivots_and_rationals() {
        let a = Matrix::from_ints(&[[0, 1], [1, 0]]);
        assert_eq!(a.determinant(), int(-1));
        let b = Matrix::from_rows(vec![
            vec![ratio(1, 2), ratio(1, 3)],
            vec![ratio(1, 4), ratio(1, 5)],
        ]);
        assert_eq!(b.determinant(), ratio(1, 10) - ratio(1, 12));
        let singular = Matrix::from_ints(&[[1, 2, 3], [2, 4, 6], [0, 0, 1]]);
        assert_eq!(singular.determinant(), int(0));
    }

    #[test]
    fn kronecker_layout() {
        let a = Matrix::from_ints(&[[1, 2], [3, 4]]);
        let i = Matrix::identity(2);
        let k = a.kron(&i);
        assert_eq!(k[(0, 2)], int(2));
        assert_eq!(k[(3, 1)], int(3));
        assert_eq!(k[(1, 0)], int(0));
    }

    #[test]
    fn trace_and_power() {
        let a = Matrix::from_ints(&[[1, 1], [0, 1]]);
        assert_eq!(a.pow(3), Matrix::from_ints(&[[1, 3], [0, 1]]));
        assert_eq!(a.trace(), int(2));
    }
}
