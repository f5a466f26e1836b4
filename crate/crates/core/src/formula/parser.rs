use super::{BinOp, Formula};
use crate::error::{Error, Pos, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Const(bool),
    Not,
    Op(BinOp),
    LParen,
    RParen,
    End,
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    pos: Pos,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str, start: Pos) -> Self {
        Lexer {
            chars: text.chars().peekable(),
            pos: start,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.pos.line += 1;
            self.pos.col = 1;
        } else {
            self.pos.col += 1;
        }
        Some(c)
    }

    fn expect(&mut self, want: char, what: &str, at: Pos) -> Result<()> {
        match self.chars.peek() {
            Some(&c) if c == want => {
                self.bump();
                Ok(())
            }
            _ => Err(Error::Lex {
                pos: at,
                msg: format!("incomplete operator, expected `{what}`"),
            }),
        }
    }

    fn tokens(mut self) -> Result<Vec<(Tok, Pos)>> {
        let mut out = Vec::new();
        loop {
            while matches!(self.chars.peek(), Some(c) if c.is_whitespace()) {
                self.bump();
            }
            let at = self.pos;
            let Some(c) = self.bump() else {
                out.push((Tok::End, at));
                return Ok(out);
            };
            let tok = match c {
                '!' => Tok::Not,
                '&' => Tok::Op(BinOp::And),
                '|' => Tok::Op(BinOp::Or),
                '^' => Tok::Op(BinOp::Xor),
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '-' => {
                    self.expect('>', "->", at)?;
                    Tok::Op(BinOp::Implies)
                }
                '<' => {
                    self.expect('-', "<->", at)?;
                    self.expect('>', "<->", at)?;
                    Tok::Op(BinOp::Iff)
                }
                '0' | '1' => {
                    if matches!(self.chars.peek(), Some(c) if c.is_ascii_alphanumeric() || *c == '_') {
                        return Err(Error::Lex {
                            pos: at,
                            msg: "constants are `0` or `1`".into(),
                        });
                    }
                    Tok::Const(c == '1')
                }
                c if c.is_ascii_alphabetic() || c == '_' => {
                    let mut name = String::from(c);
                    while let Some(&c) = self.chars.peek() {
                        if c.is_ascii_alphanumeric() || c == '_' {
                            name.push(c);
                            self.bump();
                        } else {
                            break;
                        }
                    }
                    Tok::Ident(name)
                }
                other => {
                    return Err(Error::Lex {
                        pos: at,
                        msg: format!("unexpected character `{other}`"),
                    })
                }
            };
            out.push((tok, at));
        }
    }
}

struct Parser<'s> {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    scope: &'s [String],
    open: Vec<Pos>,
}

impl<'s> Parser<'s> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn advance(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn eat(&mut self, op: BinOp) -> bool {
        if *self.peek() == Tok::Op(op) {
            self.advance();
            true
        } else {
            false
        }
    }

    fn iff(&mut self) -> Result<Formula> {
        let mut lhs = self.implies()?;
        while self.eat(BinOp::Iff) {
            let rhs = self.implies()?;
            lhs = Formula::binary(BinOp::Iff, lhs, rhs);
        }
        Ok(lhs)
    }

    fn implies(&mut self) -> Result<Formula> {
        let lhs = self.or()?;
        if self.eat(BinOp::Implies) {
            let rhs = self.implies()?;
            return Ok(Formula::binary(BinOp::Implies, lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula> {
        let mut lhs = self.xor()?;
        while self.eat(BinOp::Or) {
            let rhs = self.xor()?;
            lhs = Formula::binary(BinOp::Or, lhs, rhs);
        }
        Ok(lhs)
    }

    fn xor(&mut self) -> Result<Formula> {
        let mut lhs = self.and()?;
        while self.eat(BinOp::Xor) {
            let rhs = self.and()?;
            lhs = Formula::binary(BinOp::Xor, lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula> {
        let mut lhs = self.unary()?;
        while self.eat(BinOp::And) {
            let rhs = self.unary()?;
            lhs = Formula::binary(BinOp::And, lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula> {
        if *self.peek() == Tok::Not {
            self.advance();
            return Ok(Formula::not(self.unary()?));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Formula> {
        let pos = self.pos();
        match self.advance() {
            Tok::Const(b) => Ok(Formula::Const(b)),
            Tok::Ident(name) => {
                if self.scope.contains(&name) {
                    Ok(Formula::Var(name))
                } else {
                    Err(Error::UnknownIdentifier { pos, name })
                }
            }
            Tok::LParen => {
                self.open.push(pos);
                let inner = self.iff()?;
                if *self.peek() != Tok::RParen {
                    let open = self.open.pop().unwrap_or(pos);
                    return Err(match self.peek() {
                        Tok::End => Error::Unbalanced { pos: open },
                        _ => Error::Syntax {
                            pos: self.pos(),
                            msg: "expected `)` or an operator".into(),
                        },
                    });
                }
                self.advance();
                self.open.pop();
                Ok(inner)
            }
            Tok::RParen => Err(Error::Unbalanced { pos }),
            Tok::End => Err(Error::Syntax {
                pos,
                msg: "unexpected end of formula".into(),
            }),
            Tok::Not | Tok::Op(_) => Err(Error::Syntax {
                pos,
                msg: "expected a variable, constant or `(`".into(),
            }),
        }
    }
}

/// Parses `text` starting at the given position, so errors point into the
/// surrounding file.
pub fn parse_formula_at(text: &str, scope: &[String], start: Pos) -> Result<Formula> {
    let toks = Lexer::new(text, start).tokens()?;
    let mut p = Parser {
        toks,
        at: 0,
        scope,
        open: Vec::new(),
    };
    let f = p.iff()?;
    match p.peek() {
        Tok::End => Ok(f),
        Tok::RParen => Err(Error::Unbalanced { pos: p.pos() }),
        _ => Err(Error::Syntax {
            pos: p.pos(),
            msg: "expected an operator or end of formula".into(),
        }),
    }
}

/// Parses a single formula whose identifiers must all appear in `scope`.
pub fn parse_formula(text: &str, scope: &[String]) -> Result<Formula> {
    parse_formula_at(text, scope, Pos { line: 1, col: 1 })
}
