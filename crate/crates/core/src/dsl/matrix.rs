//! `.tmat` bindings: `matrix A r c` followed by `r` rows, `vector u n`
//! followed by `n` entries on as many lines as convenient.

use std::collections::BTreeSet;
use std::path::Path;

use crate::binding::MatrixBinding;
use crate::diagram::Dimension;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{self, Scalar};

use super::lexer::{self, Statement};

enum Pending {
    Matrix {
        label: String,
        rows: usize,
        cols: usize,
        data: Vec<Vec<Scalar>>,
    },
    Vector {
        label: String,
        len: usize,
        data: Vec<Scalar>,
    },
}

impl Pending {
    fn complete(&self) -> bool {
        match self {
            Pending::Matrix { rows, data, .. } => data.len() == *rows,
            Pending::Vector { len, data, .. } => data.len() == *len,
        }
    }
}

/// Parses a binding file. The dimension comes from `dim` when present,
/// otherwise from the first matrix or vector; every entry must agree with it.
pub fn parse_matrix_file(text: &str) -> Result<MatrixBinding> {
    let statements = lexer::statements(text)?;
    let mut dimension: Option<Dimension> = None;
    let mut binding: Option<MatrixBinding> = None;
    let mut pending: Option<(Pending, Statement)> = None;
    let mut labels = BTreeSet::new();

    let set_dimension = |dimension: &mut Option<Dimension>, n: usize, st: &Statement| -> Result<()> {
        match dimension {
            Some(d) if d.get() != n => Err(st.error(format!(
                "size {n} does not match dimension {d}"
            ))),
            Some(_) => Ok(()),
            None => {
                *dimension = Some(Dimension::new(n).map_err(|e| st.error(e.to_string()))?);
                Ok(())
            }
        }
    };

    for st in &statements {
        if let Some((p, _)) = pending.as_mut().filter(|(p, _)| !p.complete()) {
            let values = st
                .tokens
                .iter()
                .map(|t| {
                    scalar::parse(&t.text)
                        .ok_or_else(|| st.error_at(t, format!("invalid rational {:?}", t.text)))
                })
                .collect::<Result<Vec<_>>>()?;
            match p {
                Pending::Matrix { cols, data, .. } => {
                    if values.len() != *cols {
                        return Err(st.error(format!(
                            "row has {} entries, expected {cols}",
                            values.len()
                        )));
                    }
                    data.push(values);
                }
                Pending::Vector { len, data, .. } => {
                    if data.len() + values.len() > *len {
                        return Err(st.error(format!("vector has more than {len} entries")));
                    }
                    data.extend(values);
                }
            }
            continue;
        }
        if let Some((p, header)) = pending.take() {
            bind(&mut binding, dimension, p, &header)?;
        }
        match st.keyword() {
            "dim" => {
                if dimension.is_some() {
                    return Err(st.error("dim must come first and only once"));
                }
                let [_, n] = &st.tokens[..] else {
                    return Err(st.error("expected dim N"));
                };
                let n: usize = n
                    .text
                    .parse()
                    .map_err(|_| st.error_at(n, format!("invalid dimension {:?}", n.text)))?;
                set_dimension(&mut dimension, n, st)?;
            }
            kw @ ("matrix" | "vector") => {
                let sizes: Vec<usize> = st.tokens[2.min(st.tokens.len())..]
                    .iter()
                    .map(|t| {
                        t.text
                            .parse()
                            .map_err(|_| st.error_at(t, format!("invalid size {:?}", t.text)))
                    })
                    .collect::<Result<_>>()?;
                let label = st
                    .tokens
                    .get(1)
                    .ok_or_else(|| st.error(format!("{kw} needs a label")))?;
                if !labels.insert((kw, label.text.clone())) {
                    return Err(st.error_at(label, format!("{kw} {} given twice", label.text)));
                }
                let p = match (kw, &sizes[..]) {
                    ("matrix", [r, c]) => {
                        if r != c {
                            return Err(st.error(format!("matrix {} is {r}x{c}, not square", label.text)));
                        }
                        set_dimension(&mut dimension, *r, st)?;
                        Pending::Matrix {
                            label: label.text.clone(),
                            rows: *r,
                            cols: *c,
                            data: Vec::new(),
                        }
                    }
                    ("vector", [n]) => {
                        set_dimension(&mut dimension, *n, st)?;
                        Pending::Vector {
                            label: label.text.clone(),
                            len: *n,
                            data: Vec::new(),
                        }
                    }
                    ("matrix", _) => return Err(st.error("expected matrix LABEL ROWS COLS")),
                    _ => return Err(st.error("expected vector LABEL LEN")),
                };
                pending = Some((p, st.clone()));
            }
            other => return Err(st.error(format!("expected matrix or vector, found {other:?}"))),
        }
    }
    if let Some((p, header)) = pending.take() {
        if !p.complete() {
            return Err(header.error("missing entries before end of file"));
        }
        bind(&mut binding, dimension, p, &header)?;
    }
    match (binding, dimension) {
        (Some(b), _) => Ok(b),
        (None, Some(d)) => Ok(MatrixBinding::new(d)),
        (None, None) => Err(Error::Parse {
            line: 1,
            column: 1,
            message: "empty binding file needs a dim statement".into(),
        }),
    }
}

fn bind(
    binding: &mut Option<MatrixBinding>,
    dimension: Option<Dimension>,
    pending: Pending,
    header: &Statement,
) -> Result<()> {
    let dim = dimension.expect("set by the header");
    let b = binding.get_or_insert_with(|| MatrixBinding::new(dim));
    match pending {
        Pending::Matrix { label, data, .. } => b.bind(label, Matrix::from_rows(data)),
        Pending::Vector { label, data, .. } => b.bind_vector(label, data),
    }
    .map_err(|e| header.error(e.to_string()))
}

pub fn load_matrix_file(path: impl AsRef<Path>) -> Result<MatrixBinding> {
    parse_matrix_file(&super::relation::read(path.as_ref())?)
}

/// Canonical text: `dim`, then matrices and vectors by label.
pub fn serialize_matrix_file(binding: &MatrixBinding) -> String {
    let n = binding.dimension().get();
    let mut out = format!("dim {n}\n");
    for (label, m) in binding.matrices() {
        out.push_str(&format!("matrix {label} {n} {n}\n"));
        for i in 0..n {
            let row: Vec<String> = m.row(i).iter().map(scalar::format).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
    }
    for (label, v) in binding.vectors() {
        out.push_str(&format!("vector {label} {n}\n"));
        let row: Vec<String> = v.iter().map(scalar::format).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    #[test]
    fn integer_and_rational_entries() {
        let b = parse_matrix_file("matrix A 2 2 \n 1 2 \n 3 4").unwrap();
        assert_eq!(b.matrix("A").unwrap(), &Matrix::from_ints(&[[1, 2], [3, 4]]));
        let b = parse_matrix_file("dim 2\nmatrix B 2 2\n1/3 -2/4\n0 +5\nvector u 2\n1/2\n-7").unwrap();
        assert_eq!(b.matrix("B").unwrap()[(0, 1)], ratio(-1, 2));
        assert_eq!(b.vector("u").unwrap(), [ratio(1, 2), int(-7)]);
        assert_eq!(parse_matrix_file(&serialize_matrix_file(&b)).unwrap(), b);
    }

    #[test]
    fn sizes_must_agree() {
        let cases = [
            ("matrix A 2 3\n1 2 3\n4 5 6", 1),
            ("dim 3\nmatrix A 2 2\n1 2\n3 4", 2),
            ("matrix A 2 2\n1 2\n3 4\nvector u 3\n1 2 3", 4),
            ("matrix A 2 2\n1 2 3\n4 5", 2),
            ("vector u 2\n1 2 3", 2),
            ("matrix A 2 2\n1 x\n3 4", 2),
            ("matrix A 2 2\n1 2", 1),
            ("matrix A 1 1\n1\nmatrix A 1 1\n2", 3),
        ];
        for (text, line) in cases {
            match parse_matrix_file(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn dim_alone_gives_an_empty_binding() {
        let b = parse_matrix_file("# nothing bound\ndim 3\n").unwrap();
        assert_eq!(b.dimension().get(), 3);
        assert_eq!(b.matrices().count(), 0);
        assert!(parse_matrix_file("").is_err());
    }
}
