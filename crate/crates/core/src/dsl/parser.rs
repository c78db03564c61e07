use super::lexer::{tokenize, Token, TokenKind};
use super::{BinaryOp, Expr, ExprError, ExprKind, UnaryOp};

/// Tokenize and parse in one step.
pub fn parse_expr(source: &str, kind: ExprKind, dimension: usize) -> Result<Expr, ExprError> {
    let tokens = tokenize(source)?;
    parse_expression_at(&tokens, kind, dimension, source.len())
}

/// Parse a token sequence produced by [`tokenize`].
pub fn parse_expression(tokens: &[Token], kind: ExprKind, dimension: usize) -> Result<Expr, ExprError> {
    let end = tokens.last().map(|t| t.pos + 1).unwrap_or(0);
    parse_expression_at(tokens, kind, dimension, end)
}

fn parse_expression_at(tokens: &[Token], kind: ExprKind, dimension: usize, end: usize) -> Result<Expr, ExprError> {
    let mut p = Parser {
        tokens,
        cursor: 0,
        kind,
        dimension,
        end,
    };
    let expr = p.expr()?;
    if let Some(tok) = p.peek() {
        return Err(ExprError::Syntax {
            pos: tok.pos,
            message: format!("unexpected {}", tok.kind),
        });
    }
    Ok(expr)
}

struct Parser<'a> {
    tokens: &'a [Token],
    cursor: usize,
    kind: ExprKind,
    dimension: usize,
    /// Offset reported for errors at end of input.
    end: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.cursor)
    }

    fn next(&mut self) -> Option<&Token> {
        let tok = self.tokens.get(self.cursor);
        if tok.is_some() {
            self.cursor += 1;
        }
        tok
    }

    fn eat(&mut self, kind: &TokenKind) -> bool {
        if self.peek().map(|t| &t.kind) == Some(kind) {
            self.cursor += 1;
            true
        } else {
            false
        }
    }

    fn expect_rparen(&mut self) -> Result<(), ExprError> {
        match self.next() {
            Some(Token {
                kind: TokenKind::RParen,
                ..
            }) => Ok(()),
            Some(tok) => Err(ExprError::Syntax {
                pos: tok.pos,
                message: format!("expected `)`, found {}", tok.kind),
            }),
            None => Err(ExprError::Syntax {
                pos: self.end,
                message: "expected `)`, found end of input".into(),
            }),
        }
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut left = self.term()?;
        loop {
            let op = if self.eat(&TokenKind::Plus) {
                BinaryOp::Add
            } else if self.eat(&TokenKind::Minus) {
                BinaryOp::Sub
            } else {
                return Ok(left);
            };
            let right = self.term()?;
            left = Expr::binary(op, left, right);
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut left = self.unary()?;
        loop {
            let op = if self.eat(&TokenKind::Star) {
                BinaryOp::Mul
            } else if self.eat(&TokenKind::Slash) {
                BinaryOp::Div
            } else {
                return Ok(left);
            };
            let right = self.unary()?;
            left = Expr::binary(op, left, right);
        }
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if self.eat(&TokenKind::Minus) {
            return Ok(Expr::unary(UnaryOp::Neg, self.unary()?));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.primary()?;
        if !self.eat(&TokenKind::Caret) {
            return Ok(base);
        }
        let pos = self.peek().map(|t| t.pos).unwrap_or(self.end);
        let exponent = self.unary()?;
        if !exponent.is_constant() {
            return Err(ExprError::NonConstantExponent { pos });
        }
        Ok(Expr::binary(BinaryOp::Pow, base, exponent))
    }

    fn primary(&mut self) -> Result<Expr, ExprError> {
        let end = self.end;
        let Some(tok) = self.next().cloned() else {
            return Err(ExprError::Syntax {
                pos: end,
                message: "unexpected end of input".into(),
            });
        };
        match tok.kind {
            TokenKind::Number(v) => Ok(Expr::Constant(v)),
            TokenKind::LParen => {
                let inner = self.expr()?;
                self.expect_rparen()?;
                Ok(inner)
            }
            TokenKind::Ident(name) => self.identifier(name, tok.pos),
            other => Err(ExprError::Syntax {
                pos: tok.pos,
                message: format!("unexpected {other}"),
            }),
        }
    }

    fn identifier(&mut self, name: String, pos: usize) -> Result<Expr, ExprError> {
        if let Some(op) = UnaryOp::from_function_name(&name) {
            match self.next() {
                Some(Token {
                    kind: TokenKind::LParen,
                    ..
                }) => {}
                Some(tok) => {
                    return Err(ExprError::Syntax {
                        pos: tok.pos,
                        message: format!("expected `(` after `{name}`, found {}", tok.kind),
                    })
                }
                None => {
                    return Err(ExprError::Syntax {
                        pos: self.end,
                        message: format!("expected `(` after `{name}`"),
                    })
                }
            }
            let arg = self.expr()?;
            self.expect_rparen()?;
            return Ok(Expr::unary(op, arg));
        }
        match name.as_str() {
            "pi" => return Ok(Expr::Constant(std::f64::consts::PI)),
            "e" => return Ok(Expr::Constant(std::f64::consts::E)),
            "s" => {
                return match self.kind {
                    ExprKind::Curve => Ok(Expr::Param),
                    ExprKind::Field => Err(ExprError::WrongSymbolKind {
                        symbol: name,
                        kind: self.kind,
                        pos,
                    }),
                }
            }
            _ => {}
        }
        if let Some(index) = coordinate_index(&name) {
            return match self.kind {
                ExprKind::Curve => Err(ExprError::WrongSymbolKind {
                    symbol: name,
                    kind: self.kind,
                    pos,
                }),
                ExprKind::Field if index >= 1 && index <= self.dimension => Ok(Expr::Coord(index - 1)),
                ExprKind::Field => Err(ExprError::CoordOutOfRange {
                    index,
                    dimension: self.dimension,
                    pos,
                }),
            };
        }
        Err(ExprError::UnknownIdentifier { name, pos })
    }
}

fn coordinate_index(name: &str) -> Option<usize> {
    let digits = name.strip_prefix('x')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    // absurdly long indices saturate and fail the range check
    Some(digits.parse().unwrap_or(usize::MAX))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(v: f64) -> Expr {
        Expr::Constant(v)
    }

    #[test]
    fn parses_curve_component() {
        let e = parse_expr("s/sqrt(2)", ExprKind::Curve, 3).unwrap();
        assert_eq!(
            e,
            Expr::binary(BinaryOp::Div, Expr::Param, Expr::unary(UnaryOp::Sqrt, c(2.0)))
        );
    }

    #[test]
    fn parses_example_field() {
        let e = parse_expr("x1^2+x2+x3^2", ExprKind::Field, 3).unwrap();
        let sq = |i| Expr::binary(BinaryOp::Pow, Expr::Coord(i), c(2.0));
        let expected = Expr::binary(BinaryOp::Add, Expr::binary(BinaryOp::Add, sq(0), Expr::Coord(1)), sq(2));
        assert_eq!(e, expected);
    }

    #[test]
    fn coordinate_out_of_range() {
        assert_eq!(
            parse_expr("x4", ExprKind::Field, 3),
            Err(ExprError::CoordOutOfRange {
                index: 4,
                dimension: 3,
                pos: 0
            })
        );
        assert!(matches!(
            parse_expr("x0", ExprKind::Field, 3),
            Err(ExprError::CoordOutOfRange { index: 0, .. })
        ));
    }

    #[test]
    fn wrong_symbol_kind() {
        assert!(matches!(
            parse_expr("x1 + s", ExprKind::Field, 3),
            Err(ExprError::WrongSymbolKind {
                pos: 5,
                kind: ExprKind::Field,
                ..
            })
        ));
        assert!(matches!(
            parse_expr("cos(x1)", ExprKind::Curve, 3),
            Err(ExprError::WrongSymbolKind {
                pos: 4,
                kind: ExprKind::Curve,
                ..
            })
        ));
    }

    #[test]
    fn precedence_and_associativity() {
        let p = |src| parse_expr(src, ExprKind::Curve, 1).unwrap();
        assert_eq!(
            p("1-2-3"),
            Expr::binary(BinaryOp::Sub, Expr::binary(BinaryOp::Sub, c(1.0), c(2.0)), c(3.0))
        );
        assert_eq!(
            p("2^3^2"),
            Expr::binary(BinaryOp::Pow, c(2.0), Expr::binary(BinaryOp::Pow, c(3.0), c(2.0)))
        );
        assert_eq!(
            p("-s^2"),
            Expr::unary(UnaryOp::Neg, Expr::binary(BinaryOp::Pow, Expr::Param, c(2.0)))
        );
        assert_eq!(
            p("-s*2"),
            Expr::binary(BinaryOp::Mul, Expr::unary(UnaryOp::Neg, Expr::Param), c(2.0))
        );
        assert_eq!(p("1+2*3").eval(0.0, &[]), 7.0);
        assert_eq!(
            p("2^-1"),
            Expr::binary(BinaryOp::Pow, c(2.0), Expr::unary(UnaryOp::Neg, c(1.0)))
        );
    }

    #[test]
    fn errors_carry_positions() {
        assert!(matches!(
            parse_expr("s +", ExprKind::Curve, 1),
            Err(ExprError::Syntax { pos: 3, .. })
        ));
        assert!(matches!(
            parse_expr("(s", ExprKind::Curve, 1),
            Err(ExprError::Syntax { pos: 2, .. })
        ));
        assert!(matches!(
            parse_expr("s s", ExprKind::Curve, 1),
            Err(ExprError::Syntax { pos: 2, .. })
        ));
        assert!(matches!(
            parse_expr("sin s", ExprKind::Curve, 1),
            Err(ExprError::Syntax { pos: 4, .. })
        ));
        assert_eq!(
            parse_expr("tan(s)", ExprKind::Curve, 1),
            Err(ExprError::UnknownIdentifier {
                name: "tan".into(),
                pos: 0
            })
        );
        assert_eq!(
            parse_expr("s^s", ExprKind::Curve, 1),
            Err(ExprError::NonConstantExponent { pos: 2 })
        );
        assert!(matches!(
            parse_expr("", ExprKind::Curve, 1),
            Err(ExprError::Syntax { pos: 0, .. })
        ));
    }
}
