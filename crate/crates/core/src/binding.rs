use std::collections::BTreeMap;

use crate::diagram::{Dimension, Mark, TraceDiagram};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// Concrete matrices and vectors for the labels a diagram uses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixBinding {
    dimension: Dimension,
    matrices: BTreeMap<String, Matrix>,
    vectors: BTreeMap<String, Vec<Scalar>>,
}

impl MatrixBinding {
    pub fn new(dimension: Dimension) -> Self {
        MatrixBinding {
            dimension,
            matrices: BTreeMap::new(),
            vectors: BTreeMap::new(),
        }
    }

    pub fn dimension(&self) -> Dimension {
        self.dimension
    }

    /// Binds `label`; the matrix must be `n x n`.
    pub fn bind(&mut self, label: impl Into<String>, matrix: Matrix) -> Result<()> {
        let n = self.dimension.get();
        if matrix.rows() != n || matrix.cols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: if matrix.rows() != n {
                    matrix.rows()
                } else {
                    matrix.cols()
                },
            });
        }
        self.matrices.insert(label.into(), matrix);
        Ok(())
    }

    pub fn with(mut self, label: impl Into<String>, matrix: Matrix) -> Result<Self> {
        self.bind(label, matrix)?;
        Ok(self)
    }

    pub fn bind_vector(&mut self, label: impl Into<String>, vector: Vec<Scalar>) -> Result<()> {
        let n = self.dimension.get();
        if vector.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: vector.len(),
            });
        }
        self.vectors.insert(label.into(), vector);
        Ok(())
    }

    pub fn with_vector(mut self, label: impl Into<String>, vector: Vec<Scalar>) -> Result<Self> {
        self.bind_vector(label, vector)?;
        Ok(self)
    }

    pub fn matrix(&self, label: &str) -> Result<&Matrix> {
        self.matrices
            .get(label)
            .ok_or_else(|| Error::UnboundLabel(label.to_string()))
    }

    pub fn vector(&self, label: &str) -> Result<&[Scalar]> {
        self.vectors
            .get(label)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::UnboundLabel(label.to_string()))
    }

    pub fn matrices(&self) -> impl Iterator<Item = (&String, &Matrix)> {
        self.matrices.iter()
    }

    pub fn vectors(&self) -> impl Iterator<Item = (&String, &Vec<Scalar>)> {
        self.vectors.iter()
    }

    /// Product of a marking word, `M1 M2 .. Mk`.
    pub fn word_matrix(&self, word: &[Mark]) -> Result<Matrix> {
        let mut acc = Matrix::identity(self.dimension.get());
        for mark in word {
            let m = self.matrix(&mark.label)?;
            acc = if mark.transposed {
                &acc * &m.transpose()
            } else {
                &acc * m
            };
        }
        Ok(acc)
    }

    /// Every label the diagram uses must be bound and dimensions must agree.
    pub fn check_covers(&self, diagram: &TraceDiagram) -> Result<()> {
        if diagram.dimension() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: diagram.n(),
                found: self.dimension.get(),
            });
        }
        for label in diagram.matrix_labels() {
            self.matrix(&label)?;
        }
        for label in diagram.vector_labels() {
            self.vector(&label)?;
        }
        Ok(())
    }
}
