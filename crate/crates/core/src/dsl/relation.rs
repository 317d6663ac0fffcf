//! `.trel` relations: a registry of diagrams followed by `relation` and one
//! `<rational> * <name | builtin:..>` term per line.

use std::fs;
use std::path::Path;

use crate::algebra::FormalSum;
use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};

use super::diagram::{parse_builtin, parse_diagram_set, DiagramSet, SetParser};
use super::lexer::{self, Statement, Token};

#[derive(Debug)]
enum Target {
    Name(String),
    Builtin(super::BuiltinRef),
}

#[derive(Debug)]
struct Term {
    coefficient: Scalar,
    target: Target,
    line: usize,
    column: usize,
}

/// Parses a relation that does not import other files.
pub fn parse_relation(text: &str) -> Result<FormalSum> {
    parse_relation_with(text, &mut |path| {
        Err(Error::Unsupported(format!("cannot import {path}: no file context")))
    })
}

/// Parses a relation, reading each `import PATH` through `resolve`, which
/// returns the text of a diagram set.
pub fn parse_relation_with(
    text: &str,
    resolve: &mut dyn FnMut(&str) -> Result<String>,
) -> Result<FormalSum> {
    let statements = lexer::statements(text)?;
    let mut parser = SetParser::default();
    let mut registry = DiagramSet::new();
    let mut terms: Option<Vec<Term>> = None;
    for st in &statements {
        if let Some(terms) = terms.as_mut() {
            terms.push(term(st, &parser)?);
            continue;
        }
        match st.keyword() {
            "import" => {
                let [_, path] = &st.tokens[..] else {
                    return Err(st.error("expected import PATH"));
                };
                let imported = parse_diagram_set(&resolve(&path.text)?).map_err(|e| match e {
                    Error::Parse {
                        line,
                        column,
                        message,
                    } => Error::Parse {
                        line,
                        column,
                        message: format!("in {}: {message}", path.text),
                    },
                    other => other,
                })?;
                registry
                    .merge(imported)
                    .map_err(|e| st.error_at(path, e.to_string()))?;
            }
            "relation" => {
                if st.tokens.len() > 2 {
                    return Err(st.error_at(&st.tokens[2], "expected relation [NAME]"));
                }
                registry
                    .merge(parser.take_set()?)
                    .map_err(|e| st.error(e.to_string()))?;
                terms = Some(Vec::new());
            }
            _ => parser.statement(st)?,
        }
    }
    let terms = terms.ok_or_else(|| Error::Parse {
        line: statements.last().map_or(1, |s| s.line),
        column: 1,
        message: "missing relation statement".into(),
    })?;
    let mut sum: Option<FormalSum> = None;
    for t in terms {
        let part = match &t.target {
            Target::Name(name) => {
                if registry.entry(name).is_none() {
                    return Err(Error::Parse {
                        line: t.line,
                        column: t.column,
                        message: format!("unknown diagram {name}"),
                    });
                }
                registry.get(name)?
            }
            Target::Builtin(b) => b.resolve()?,
        }
        .scale(&t.coefficient);
        sum = Some(match sum {
            None => part,
            Some(acc) => acc.add(&part)?,
        });
    }
    match (sum, parser.dimension()) {
        (Some(s), _) => Ok(s),
        (None, Some(d)) => Ok(FormalSum::zero(d)),
        (None, None) => Err(Error::Parse {
            line: 1,
            column: 1,
            message: "empty relation needs a dim statement".into(),
        }),
    }
}

/// One term: `COEF * TARGET`, `COEF*TARGET`, or a bare target meaning `1 *`.
fn term(st: &Statement, parser: &SetParser) -> Result<Term> {
    let joined: Vec<&str> = st.tokens.iter().map(|t| t.text.as_str()).collect();
    let star = st.tokens.iter().position(|t| t.text.contains('*'));
    let (coefficient, rest): (Scalar, Vec<Token>) = match star {
        None => (scalar::int(1), st.tokens.clone()),
        Some(i) => {
            let t = &st.tokens[i];
            let (before, after) = t.text.split_once('*').expect("contains *");
            let coef_text = joined[..i].concat() + before;
            let coefficient = scalar::parse(&coef_text).ok_or_else(|| {
                st.error(format!("invalid coefficient {coef_text:?}"))
            })?;
            let mut rest = Vec::new();
            if !after.is_empty() {
                rest.push(Token {
                    text: after.to_string(),
                    column: t.column + before.len() + 1,
                });
            }
            rest.extend(st.tokens[i + 1..].iter().cloned());
            (coefficient, rest)
        }
    };
    let first = rest
        .first()
        .ok_or_else(|| st.error("term needs a diagram after '*'"))?
        .clone();
    let sub = Statement {
        line: st.line,
        tokens: rest,
    };
    let target = if first.text.starts_with("builtin:") {
        Target::Builtin(parse_builtin(&sub, 0, parser.dimension())?)
    } else {
        if sub.tokens.len() > 1 {
            return Err(sub.error_at(&sub.tokens[1], "unexpected token after diagram name"));
        }
        Target::Name(first.text.clone())
    };
    Ok(Term {
        coefficient,
        target,
        line: st.line,
        column: first.column,
    })
}

pub(crate) fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

/// Reads a relation file; imports resolve relative to its directory.
pub fn load_relation(path: impl AsRef<Path>) -> Result<FormalSum> {
    let path = path.as_ref();
    let text = read(path)?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    parse_relation_with(&text, &mut |p| read(&base.join(p)))
}
