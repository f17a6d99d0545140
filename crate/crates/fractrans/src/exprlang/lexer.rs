//! Tokenizer for the coefficient expression language.

use thiserror::Error;

/// Token classes produced by [`tokenize`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    Number,
    Identifier,
    Operator,
    Paren,
    Comma,
}

/// A single lexed token with its byte offset in the source string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub lexeme: String,
    pub position: usize,
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum LexError {
    #[error("unknown character '{ch}' at byte {position}")]
    UnknownCharacter { ch: char, position: usize },
    #[error("malformed number literal at byte {position}: missing exponent digits")]
    MalformedExponent { position: usize },
}

/// Splits `source` into tokens, skipping whitespace.
///
/// Numbers accept decimal and scientific notation (`1.5`, `.5`, `1e-3`).
/// Identifiers are ASCII alphanumeric words starting with a letter or `_`.
pub fn tokenize(source: &str) -> Result<Vec<Token>, LexError> {
    let bytes = source.as_bytes();
    let mut tokens = Vec::new();
    let mut pos = 0usize;

    while pos < bytes.len() {
        let b = bytes[pos];
        match b {
            b' ' | b'\t' | b'\r' | b'\n' => pos += 1,
            b'0'..=b'9' | b'.' => {
                let start = pos;
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                if pos < bytes.len() && bytes[pos] == b'.' {
                    pos += 1;
                    while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                        pos += 1;
                    }
                }
                // A lone '.' with no digits on either side is not a number.
                if pos == start + 1 && bytes[start] == b'.' {
                    return Err(LexError::UnknownCharacter { ch: '.', position: start });
                }
                if pos < bytes.len() && (bytes[pos] == b'e' || bytes[pos] == b'E') {
                    let mut probe = pos + 1;
                    if probe < bytes.len() && (bytes[probe] == b'+' || bytes[probe] == b'-') {
                        probe += 1;
                    }
                    if probe < bytes.len() && bytes[probe].is_ascii_digit() {
                        pos = probe;
                        while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                            pos += 1;
                        }
                    } else {
                        return Err(LexError::MalformedExponent { position: pos });
                    }
                }
                tokens.push(Token {
                    kind: TokenKind::Number,
                    lexeme: source[start..pos].to_string(),
                    position: start,
                });
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                let start = pos;
                while pos < bytes.len()
                    && (bytes[pos].is_ascii_alphanumeric() || bytes[pos] == b'_')
                {
                    pos += 1;
                }
                tokens.push(Token {
                    kind: TokenKind::Identifier,
                    lexeme: source[start..pos].to_string(),
                    position: start,
                });
            }
            b'+' | b'-' | b'*' | b'/' | b'^' => {
                tokens.push(Token {
                    kind: TokenKind::Operator,
                    lexeme: (b as char).to_string(),
                    position: pos,
                });
                pos += 1;
            }
            b'(' | b')' => {
                tokens.push(Token {
                    kind: TokenKind::Paren,
                    lexeme: (b as char).to_string(),
                    position: pos,
                });
                pos += 1;
            }
            b',' => {
                tokens.push(Token {
                    kind: TokenKind::Comma,
                    lexeme: ",".to_string(),
                    position: pos,
                });
                pos += 1;
            }
            _ => {
                let ch = source[pos..].chars().next().unwrap_or('\u{fffd}');
                return Err(LexError::UnknownCharacter { ch, position: pos });
            }
        }
    }
    Ok(tokens)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(src: &str) -> Vec<(TokenKind, String)> {
        tokenize(src)
            .unwrap()
            .into_iter()
            .map(|t| (t.kind, t.lexeme))
            .collect()
    }

    #[test]
    fn lexes_product() {
        assert_eq!(
            kinds("2*x"),
            vec![
                (TokenKind::Number, "2".into()),
                (TokenKind::Operator, "*".into()),
                (TokenKind::Identifier, "x".into()),
            ]
        );
    }

    #[test]
    fn lexes_call_with_unary_minus() {
        assert_eq!(
            kinds("exp(-t)"),
            vec![
                (TokenKind::Identifier, "exp".into()),
                (TokenKind::Paren, "(".into()),
                (TokenKind::Operator, "-".into()),
                (TokenKind::Identifier, "t".into()),
                (TokenKind::Paren, ")".into()),
            ]
        );
    }

    #[test]
    fn scientific_literal_is_one_token() {
        assert_eq!(kinds("1e-3"), vec![(TokenKind::Number, "1e-3".into())]);
        assert_eq!(kinds("2.5E+10"), vec![(TokenKind::Number, "2.5E+10".into())]);
    }

    #[test]
    fn positions_strictly_increase() {
        let toks = tokenize("min( x , 1.5e2)^2").unwrap();
        for pair in toks.windows(2) {
            assert!(pair[0].position < pair[1].position);
        }
    }

    #[test]
    fn unknown_character_reports_offset() {
        let err = tokenize("x + $").unwrap_err();
        assert_eq!(err, LexError::UnknownCharacter { ch: '$', position: 4 });
    }

    #[test]
    fn dangling_exponent_is_an_error() {
        assert!(matches!(
            tokenize("1e"),
            Err(LexError::MalformedExponent { position: 1 })
        ));
    }
}
