//! Statement splitting shared by the three text formats.
//!
//! A statement ends at a newline or `;`, and `#` starts a comment. Tokens are
//! separated by whitespace, except that a parenthesised group stays attached
//! to the word before it, so `cil(a.t, b.h)` is one token.

use crate::error::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Token {
    pub text: String,
    pub column: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Statement {
    pub line: usize,
    pub tokens: Vec<Token>,
}

impl Statement {
    pub fn column(&self) -> usize {
        self.tokens.first().map_or(1, |t| t.column)
    }

    pub fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            column: self.column(),
            message: message.into(),
        }
    }

    pub fn error_at(&self, token: &Token, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            column: token.column,
            message: message.into(),
        }
    }

    pub fn keyword(&self) -> &str {
        &self.tokens[0].text
    }
}

pub(crate) fn statements(text: &str) -> Result<Vec<Statement>, Error> {
    let mut out = Vec::new();
    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        let content = raw.split('#').next().unwrap_or("");
        let chars: Vec<char> = content.chars().collect();
        let mut tokens = Vec::new();
        let mut current = String::new();
        let mut start = 0;
        let mut depth = 0usize;
        let flush = |tokens: &mut Vec<Token>, current: &mut String, start: usize| {
            if !current.is_empty() {
                tokens.push(Token {
                    text: std::mem::take(current),
                    column: start + 1,
                });
            }
        };
        for (col, &c) in chars.iter().enumerate() {
            if depth > 0 {
                current.push(c);
                match c {
                    '(' => depth += 1,
                    ')' => depth -= 1,
                    _ => {}
                }
                continue;
            }
            match c {
                ';' => {
                    flush(&mut tokens, &mut current, start);
                    if !tokens.is_empty() {
                        out.push(Statement {
                            line,
                            tokens: std::mem::take(&mut tokens),
                        });
                    }
                }
                c if c.is_whitespace() => flush(&mut tokens, &mut current, start),
                '(' => {
                    if current.is_empty() {
                        start = col;
                    }
                    current.push(c);
                    depth = 1;
                }
                ')' => {
                    return Err(Error::Parse {
                        line,
                        column: col + 1,
                        message: "unbalanced ')'".into(),
                    })
                }
                c => {
                    if current.is_empty() {
                        start = col;
                    }
                    current.push(c);
                }
            }
        }
        if depth > 0 {
            return Err(Error::Parse {
                line,
                column: start + 1,
                message: "unclosed '('".into(),
            });
        }
        flush(&mut tokens, &mut current, start);
        if !tokens.is_empty() {
            out.push(Statement { line, tokens });
        }
    }
    Ok(out)
}

/// Splits `name(a, b)` into `name` and its trimmed arguments.
pub(crate) fn call(text: &str) -> Option<(&str, Vec<String>)> {
    let open = text.find('(')?;
    let inner = text[open + 1..].strip_suffix(')')?;
    let args = if inner.trim().is_empty() {
        Vec::new()
    } else {
        inner.split(',').map(|a| a.trim().to_string()).collect()
    };
    Some((&text[..open], args))
}
