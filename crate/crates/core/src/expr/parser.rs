use super::ast::{builtin_arity, BinOp, Congruence, Expr, Parsed};
use super::ExprError;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(i128),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    DotDot,
    Assign,
    Congruent,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(v) => format!("`{v}`"),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::DotDot => "`..`".into(),
            Tok::Assign => "`=`".into(),
            Tok::Congruent => "`≡`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(src: &str) -> Result<Vec<Token>, ExprError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col) = (line, col);
        let syntax = |msg: String| ExprError::Syntax { line: start_line, col: start_col, msg };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let mut advance = 1;
        let tok = match c {
            '0'..='9' => {
                let mut j = i;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                let text: String = chars[i..j].iter().collect();
                advance = j - i;
                Tok::Int(text.parse().map_err(|_| syntax(format!("integer literal `{text}` is too large")))?)
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut j = i;
                while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                    j += 1;
                }
                advance = j - i;
                Tok::Ident(chars[i..j].iter().collect())
            }
            '+' => Tok::Plus,
            '-' | '\u{2212}' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            '≡' => Tok::Congruent,
            '.' if chars.get(i + 1) == Some(&'.') => {
                advance = 2;
                Tok::DotDot
            }
            '=' => {
                let rest: String = chars[i..chars.len().min(i + 5)].iter().collect();
                if rest == "=mod=" {
                    advance = 5;
                    Tok::Congruent
                } else {
                    Tok::Assign
                }
            }
            other => return Err(syntax(format!("unexpected character `{other}`"))),
        };
        out.push(Token { tok, line: start_line, col: start_col });
        i += advance;
        col += advance;
    }
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, ahead: usize) -> &Tok {
        let i = (self.pos + ahead).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos < self.toks.len() - 1 {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, msg: String) -> ExprError {
        let t = &self.toks[self.pos];
        ExprError::Syntax { line: t.line, col: t.col, msg }
    }

    fn expect(&mut self, tok: Tok) -> Result<Token, ExprError> {
        if *self.peek() == tok {
            Ok(self.next())
        } else {
            Err(self.error_here(format!("expected {}, found {}", tok.describe(), self.peek().describe())))
        }
    }

    fn expect_ident(&mut self, what: &str) -> Result<String, ExprError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.next();
                Ok(s)
            }
            other => Err(self.error_here(format!("expected {what}, found {}", other.describe()))),
        }
    }

    fn statement(&mut self) -> Result<Parsed, ExprError> {
        let lhs = self.expr()?;
        if *self.peek() != Tok::Congruent {
            self.expect(Tok::Eof)?;
            return Ok(Parsed::Expr(lhs));
        }
        self.next();
        let rhs = self.expr()?;
        self.expect(Tok::LParen)?;
        match self.peek() {
            Tok::Ident(s) if s == "mod" => {
                self.next();
            }
            other => return Err(self.error_here(format!("expected `mod`, found {}", other.describe()))),
        }
        match self.peek() {
            Tok::Ident(s) if s == "p" => {
                self.next();
            }
            other => return Err(self.error_here(format!("expected `p`, found {}", other.describe()))),
        }
        let mut modulus_exponent = 1;
        if *self.peek() == Tok::Caret {
            self.next();
            match self.peek().clone() {
                Tok::Int(e) if (1..=4).contains(&e) => {
                    self.next();
                    modulus_exponent = e as u32;
                }
                Tok::Int(e) => return Err(self.error_here(format!("modulus exponent {e} is outside 1..=4"))),
                other => return Err(self.error_here(format!("expected an exponent, found {}", other.describe()))),
            }
        }
        self.expect(Tok::RParen)?;
        self.expect(Tok::Eof)?;
        Ok(Parsed::Congruence(Congruence { lhs, rhs, modulus_exponent }))
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut acc = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(acc),
            };
            self.next();
            acc = Expr::binary(op, acc, self.term()?);
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut acc = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(acc),
            };
            self.next();
            acc = Expr::binary(op, acc, self.unary()?);
        }
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if *self.peek() == Tok::Minus {
            self.next();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.factor()
    }

    fn factor(&mut self) -> Result<Expr, ExprError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.next();
        let exp = self.atom()?;
        if *self.peek() == Tok::Caret {
            return Err(self.error_here("`^` is not associative; add parentheses".into()));
        }
        Ok(Expr::binary(BinOp::Pow, base, exp))
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        let t = self.next();
        match t.tok {
            Tok::Int(v) => Ok(Expr::Int(v)),
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            Tok::Ident(name) => {
                // `x (mod p)` ends a statement rather than calling `x`
                let is_call = *self.peek() == Tok::LParen
                    && !matches!(self.peek_at(1), Tok::Ident(s) if s == "mod");
                if name == "sum" && is_call {
                    self.sum()
                } else if is_call {
                    self.call(name, t.line, t.col)
                } else if name == "sum" || builtin_arity(&name).is_some() {
                    Err(ExprError::Syntax { line: t.line, col: t.col, msg: format!("`{name}` must be called") })
                } else {
                    Ok(Expr::Var(name))
                }
            }
            other => Err(ExprError::Syntax {
                line: t.line,
                col: t.col,
                msg: format!("expected an expression, found {}", other.describe()),
            }),
        }
    }

    fn sum(&mut self) -> Result<Expr, ExprError> {
        self.expect(Tok::LParen)?;
        let index = self.expect_ident("a summation index")?;
        if index == "p" || index == "sum" || builtin_arity(&index).is_some() {
            return Err(self.error_here(format!("`{index}` cannot be a summation index")));
        }
        self.expect(Tok::Assign)?;
        let lower = self.expr()?;
        self.expect(Tok::DotDot)?;
        let upper = self.expr()?;
        self.expect(Tok::Comma)?;
        let body = self.expr()?;
        self.expect(Tok::RParen)?;
        Ok(Expr::Sum { index, lower: Box::new(lower), upper: Box::new(upper), body: Box::new(body) })
    }

    fn call(&mut self, name: String, line: usize, col: usize) -> Result<Expr, ExprError> {
        let arity = builtin_arity(&name).ok_or_else(|| ExprError::UnknownFunction { name: name.clone(), line, col })?;
        self.expect(Tok::LParen)?;
        let mut args = Vec::new();
        if *self.peek() != Tok::RParen {
            args.push(self.expr()?);
            while *self.peek() == Tok::Comma {
                self.next();
                args.push(self.expr()?);
            }
        }
        self.expect(Tok::RParen)?;
        if args.len() != arity {
            return Err(ExprError::Arity { name, expected: arity, got: args.len(), line, col });
        }
        Ok(Expr::Call { name, args })
    }
}

/// Parses either a congruence `lhs ≡ rhs (mod p^e)` or a bare expression.
pub fn parse(src: &str) -> Result<Parsed, ExprError> {
    Parser { toks: lex(src)?, pos: 0 }.statement()
}

pub fn parse_expr(src: &str) -> Result<Expr, ExprError> {
    match parse(src)? {
        Parsed::Expr(e) => Ok(e),
        Parsed::Congruence(_) => Err(ExprError::Syntax { line: 1, col: 1, msg: "expected an expression, found a congruence".into() }),
    }
}

pub fn parse_congruence(src: &str) -> Result<Congruence, ExprError> {
    match parse(src)? {
        Parsed::Congruence(c) => Ok(c),
        Parsed::Expr(_) => Err(ExprError::Syntax { line: 1, col: 1, msg: "expected a congruence `lhs ≡ rhs (mod p^e)`".into() }),
    }
}
