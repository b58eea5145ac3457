//! Tokenizer for VQL text. Tokens keep their starting byte offset so
//! parse errors can point into the input.

use crate::error::ParseError;

#[derive(Debug, Clone, PartialEq)]
pub enum TokenKind {
    /// Bare word: identifier or keyword, decided by the parser in context.
    Ident(String),
    Number(f64),
    Str(String),
    Comma,
    Dot,
    LParen,
    RParen,
    Star,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl TokenKind {
    /// Short description used in error messages.
    pub fn describe(&self) -> String {
        match self {
            TokenKind::Ident(s) => format!("{s:?}"),
            TokenKind::Number(n) => format!("number {n}"),
            TokenKind::Str(s) => format!("string {s:?}"),
            TokenKind::Comma => "\",\"".into(),
            TokenKind::Dot => "\".\"".into(),
            TokenKind::LParen => "\"(\"".into(),
            TokenKind::RParen => "\")\"".into(),
            TokenKind::Star => "\"*\"".into(),
            TokenKind::Eq => "\"=\"".into(),
            TokenKind::Ne => "\"!=\"".into(),
            TokenKind::Lt => "\"<\"".into(),
            TokenKind::Le => "\"<=\"".into(),
            TokenKind::Gt => "\">\"".into(),
            TokenKind::Ge => "\">=\"".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    pub offset: usize,
}

pub fn tokenize(input: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = input.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        match b {
            b' ' | b'\t' | b'\r' | b'\n' => i += 1,
            b',' => {
                tokens.push(Token { kind: TokenKind::Comma, offset: i });
                i += 1;
            }
            b'.' => {
                tokens.push(Token { kind: TokenKind::Dot, offset: i });
                i += 1;
            }
            b'(' => {
                tokens.push(Token { kind: TokenKind::LParen, offset: i });
                i += 1;
            }
            b')' => {
                tokens.push(Token { kind: TokenKind::RParen, offset: i });
                i += 1;
            }
            b'*' => {
                tokens.push(Token { kind: TokenKind::Star, offset: i });
                i += 1;
            }
            b'=' => {
                tokens.push(Token { kind: TokenKind::Eq, offset: i });
                i += 1;
            }
            b'!' => {
                if bytes.get(i + 1) == Some(&b'=') {
                    tokens.push(Token { kind: TokenKind::Ne, offset: i });
                    i += 2;
                } else {
                    return Err(ParseError::Syntax {
                        offset: i,
                        expected: "\"!=\"".into(),
                        found: "\"!\"".into(),
                    });
                }
            }
            b'<' => match bytes.get(i + 1) {
                Some(&b'=') => {
                    tokens.push(Token { kind: TokenKind::Le, offset: i });
                    i += 2;
                }
                Some(&b'>') => {
                    tokens.push(Token { kind: TokenKind::Ne, offset: i });
                    i += 2;
                }
                _ => {
                    tokens.push(Token { kind: TokenKind::Lt, offset: i });
                    i += 1;
                }
            },
            b'>' => {
                if bytes.get(i + 1) == Some(&b'=') {
                    tokens.push(Token { kind: TokenKind::Ge, offset: i });
                    i += 2;
                } else {
                    tokens.push(Token { kind: TokenKind::Gt, offset: i });
                    i += 1;
                }
            }
            b'"' | b'\'' => {
                let (s, next) = lex_string(input, i)?;
                tokens.push(Token { kind: TokenKind::Str(s), offset: i });
                i = next;
            }
            b'0'..=b'9' => {
                let (n, next) = lex_number(input, i)?;
                tokens.push(Token { kind: TokenKind::Number(n), offset: i });
                i = next;
            }
            b'-' => {
                if bytes.get(i + 1).is_some_and(|c| c.is_ascii_digit()) {
                    let (n, next) = lex_number(input, i + 1)?;
                    tokens.push(Token { kind: TokenKind::Number(-n), offset: i });
                    i = next;
                } else {
                    return Err(ParseError::Syntax {
                        offset: i,
                        expected: "digit after \"-\"".into(),
                        found: "\"-\"".into(),
                    });
                }
            }
            _ if b.is_ascii_alphabetic() || b == b'_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                tokens.push(Token {
                    kind: TokenKind::Ident(input[start..i].to_string()),
                    offset: start,
                });
            }
            _ => {
                let ch = input[i..].chars().next().unwrap();
                return Err(ParseError::Syntax {
                    offset: i,
                    expected: "token".into(),
                    found: format!("{ch:?}"),
                });
            }
        }
    }
    Ok(tokens)
}

/// Reads a quoted string starting at `start`. Both quote styles are
/// accepted; backslash escapes the quote character and itself.
fn lex_string(input: &str, start: usize) -> Result<(String, usize), ParseError> {
    let bytes = input.as_bytes();
    let quote = bytes[start];
    let mut out = String::new();
    let mut i = start + 1;
    while i < bytes.len() {
        match bytes[i] {
            b'\\' => {
                match bytes.get(i + 1) {
                    Some(&c) if c == quote || c == b'\\' => {
                        out.push(c as char);
                        i += 2;
                    }
                    _ => {
                        // Lone backslash: keep it literally.
                        out.push('\\');
                        i += 1;
                    }
                }
            }
            c if c == quote => return Ok((out, i + 1)),
            _ => {
                let ch = input[i..].chars().next().unwrap();
                out.push(ch);
                i += ch.len_utf8();
            }
        }
    }
    Err(ParseError::Syntax {
        offset: start,
        expected: "closing quote".into(),
        found: "end of input".into(),
    })
}

fn lex_number(input: &str, start: usize) -> Result<(f64, usize), ParseError> {
    let bytes = input.as_bytes();
    let mut i = start;
    while i < bytes.len() && bytes[i].is_ascii_digit() {
        i += 1;
    }
    if i < bytes.len() && bytes[i] == b'.' && bytes.get(i + 1).is_some_and(|c| c.is_ascii_digit()) {
        i += 1;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
    }
    input[start..i].parse::<f64>().map(|n| (n, i)).map_err(|_| ParseError::Syntax {
        offset: start,
        expected: "number".into(),
        found: input[start..i].to_string(),
    })
}
