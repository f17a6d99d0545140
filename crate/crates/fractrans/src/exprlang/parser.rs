//! Precedence-climbing (Pratt) parser for the expression language.

use thiserror::Error;

use super::lexer::{tokenize, LexError, Token, TokenKind};
use super::{BinOp, ExprAst, Func, Var};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ParseError {
    #[error("lex error: {0}")]
    Lex(#[from] LexError),
    #[error("parse error at byte {position}: found {found}, expected {}", expected.join(" or "))]
    Unexpected {
        position: usize,
        found: String,
        expected: Vec<&'static str>,
    },
    #[error("parse error at byte {position}: unknown identifier '{name}' (only x, t and builtin functions are allowed)")]
    UnknownIdentifier { position: usize, name: String },
    #[error("parse error at byte {position}: {func} takes {expected} argument(s), got {got}")]
    BadArity {
        position: usize,
        func: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("parse error at byte {position}: invalid number literal '{lexeme}'")]
    BadNumber { position: usize, lexeme: String },
    #[error("parse error: unexpected end of input, expected {}", expected.join(" or "))]
    UnexpectedEnd { expected: Vec<&'static str> },
}

/// Binding powers. `^` binds tightest and is right associative; unary minus
/// sits between `^` and `*`/`/` so that `-x^2` parses as `-(x^2)` while
/// `-x*2` parses as `(-x)*2`.
const BP_ADD: (u8, u8) = (1, 2);
const BP_MUL: (u8, u8) = (3, 4);
const BP_UNARY: u8 = 5;
const BP_POW: (u8, u8) = (8, 7);

struct Parser<'a> {
    tokens: &'a [Token],
    cursor: usize,
    source_len: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.cursor)
    }

    fn bump(&mut self) -> Option<&'a Token> {
        let t = self.tokens.get(self.cursor);
        if t.is_some() {
            self.cursor += 1;
        }
        t
    }

    fn end_position(&self) -> usize {
        self.source_len
    }

    fn expect(&mut self, kind: TokenKind, lexeme: &str, label: &'static str) -> Result<(), ParseError> {
        match self.peek() {
            Some(t) if t.kind == kind && t.lexeme == lexeme => {
                self.cursor += 1;
                Ok(())
            }
            Some(t) => Err(ParseError::Unexpected {
                position: t.position,
                found: format!("'{}'", t.lexeme),
                expected: vec![label],
            }),
            None => Err(ParseError::UnexpectedEnd { expected: vec![label] }),
        }
    }

    fn parse_expr(&mut self, min_bp: u8) -> Result<ExprAst, ParseError> {
        let mut lhs = self.parse_prefix()?;
        loop {
            let (op, lbp, rbp) = match self.peek() {
                Some(t) if t.kind == TokenKind::Operator => match t.lexeme.as_str() {
                    "+" => (BinOp::Add, BP_ADD.0, BP_ADD.1),
                    "-" => (BinOp::Sub, BP_ADD.0, BP_ADD.1),
                    "*" => (BinOp::Mul, BP_MUL.0, BP_MUL.1),
                    "/" => (BinOp::Div, BP_MUL.0, BP_MUL.1),
                    "^" => (BinOp::Pow, BP_POW.0, BP_POW.1),
                    _ => break,
                },
                _ => break,
            };
            if lbp < min_bp {
                break;
            }
            self.cursor += 1;
            let rhs = self.parse_expr(rbp)?;
            lhs = ExprAst::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn parse_prefix(&mut self) -> Result<ExprAst, ParseError> {
        const EXPECTED: &[&str] = &["a number", "a variable", "a function call", "'('", "'-'"];
        let token = match self.bump() {
            Some(t) => t,
            None => {
                return Err(ParseError::UnexpectedEnd { expected: EXPECTED.to_vec() });
            }
        };
        match token.kind {
            TokenKind::Number => token
                .lexeme
                .parse::<f64>()
                .map(ExprAst::Const)
                .map_err(|_| ParseError::BadNumber {
                    position: token.position,
                    lexeme: token.lexeme.clone(),
                }),
            TokenKind::Operator if token.lexeme == "-" => {
                let operand = self.parse_expr(BP_UNARY)?;
                Ok(ExprAst::Neg(Box::new(operand)))
            }
            // Unary plus is accepted (and discarded) so that signed constants
            // like "+1" are valid coefficient expressions.
            TokenKind::Operator if token.lexeme == "+" => self.parse_expr(BP_UNARY),
            TokenKind::Paren if token.lexeme == "(" => {
                let inner = self.parse_expr(0)?;
                self.expect(TokenKind::Paren, ")", "')'")?;
                Ok(inner)
            }
            TokenKind::Identifier => match token.lexeme.as_str() {
                "x" => Ok(ExprAst::Variable(Var::X)),
                "t" => Ok(ExprAst::Variable(Var::T)),
                name => match Func::from_name(name) {
                    Some(func) => self.parse_call(func, token.position),
                    None => Err(ParseError::UnknownIdentifier {
                        position: token.position,
                        name: name.to_string(),
                    }),
                },
            },
            _ => Err(ParseError::Unexpected {
                position: token.position,
                found: format!("'{}'", token.lexeme),
                expected: EXPECTED.to_vec(),
            }),
        }
    }

    fn parse_call(&mut self, func: Func, call_pos: usize) -> Result<ExprAst, ParseError> {
        self.expect(TokenKind::Paren, "(", "'(' after function name")?;
        let mut args = vec![self.parse_expr(0)?];
        while let Some(t) = self.peek() {
            if t.kind == TokenKind::Comma {
                self.cursor += 1;
                args.push(self.parse_expr(0)?);
            } else {
                break;
            }
        }
        self.expect(TokenKind::Paren, ")", "')' or ','")?;
        if args.len() != func.arity() {
            return Err(ParseError::BadArity {
                position: call_pos,
                func: func.name(),
                expected: func.arity(),
                got: args.len(),
            });
        }
        Ok(ExprAst::Call(func, args))
    }
}

/// Parses a full token stream into an expression tree.
pub fn parse(tokens: &[Token], source_len: usize) -> Result<ExprAst, ParseError> {
    let mut parser = Parser { tokens, cursor: 0, source_len };
    let ast = parser.parse_expr(0)?;
    if let Some(t) = parser.peek() {
        return Err(ParseError::Unexpected {
            position: t.position,
            found: format!("'{}'", t.lexeme),
            expected: vec!["end of expression"],
        });
    }
    let _ = parser.end_position();
    Ok(ast)
}

/// Convenience: tokenize and parse in one step.
pub fn parse_str(source: &str) -> Result<ExprAst, ParseError> {
    let tokens = tokenize(source)?;
    parse(&tokens, source.len())
}
