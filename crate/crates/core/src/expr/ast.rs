use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Pow => "^",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Int(i128),
    Var(String),
    Neg(Box<Expr>),
    Binary { op: BinOp, lhs: Box<Expr>, rhs: Box<Expr> },
    Sum { index: String, lower: Box<Expr>, upper: Box<Expr>, body: Box<Expr> },
    Call { name: String, args: Vec<Expr> },
}

impl Expr {
    pub fn binary(op: BinOp, lhs: Expr, rhs: Expr) -> Expr {
        Expr::Binary { op, lhs: Box::new(lhs), rhs: Box::new(rhs) }
    }

    /// 0 = additive, 1 = multiplicative, 2 = unary minus, 3 = power, 4 = atom.
    fn level(&self) -> u8 {
        match self {
            Expr::Binary { op: BinOp::Add | BinOp::Sub, .. } => 0,
            Expr::Binary { op: BinOp::Mul | BinOp::Div, .. } => 1,
            Expr::Neg(_) => 2,
            Expr::Binary { op: BinOp::Pow, .. } => 3,
            Expr::Int(_) | Expr::Var(_) | Expr::Sum { .. } | Expr::Call { .. } => 4,
        }
    }

    fn fmt_at(&self, f: &mut fmt::Formatter<'_>, min_level: u8) -> fmt::Result {
        if self.level() < min_level {
            write!(f, "(")?;
            self.fmt_at(f, 0)?;
            return write!(f, ")");
        }
        match self {
            Expr::Int(v) => write!(f, "{v}"),
            Expr::Var(name) => write!(f, "{name}"),
            Expr::Neg(inner) => {
                write!(f, "-")?;
                inner.fmt_at(f, 2)
            }
            Expr::Binary { op: BinOp::Pow, lhs, rhs } => {
                lhs.fmt_at(f, 4)?;
                write!(f, "^")?;
                rhs.fmt_at(f, 4)
            }
            Expr::Binary { op, lhs, rhs } => {
                let level = self.level();
                lhs.fmt_at(f, level)?;
                write!(f, " {} ", op.symbol())?;
                // left-associative: a right operand at the same level needs parentheses
                let right_min = if level == 0 { 1 } else { 2 };
                rhs.fmt_at(f, right_min)
            }
            Expr::Sum { index, lower, upper, body } => {
                write!(f, "sum({index}=")?;
                lower.fmt_at(f, 0)?;
                write!(f, "..")?;
                upper.fmt_at(f, 0)?;
                write!(f, ", ")?;
                body.fmt_at(f, 0)?;
                write!(f, ")")
            }
            Expr::Call { name, args } => {
                write!(f, "{name}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    a.fmt_at(f, 0)?;
                }
                write!(f, ")")
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(f, 0)
    }
}

/// `lhs ≡ rhs (mod p^e)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Congruence {
    pub lhs: Expr,
    pub rhs: Expr,
    pub modulus_exponent: u32,
}

impl fmt::Display for Congruence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ≡ {} (mod p^{})", self.lhs, self.rhs, self.modulus_exponent)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Parsed {
    Congruence(Congruence),
    Expr(Expr),
}

/// Builtin functions and their arities.
pub const BUILTINS: &[(&str, usize)] = &[
    ("binom", 2),
    ("f", 1),
    ("fx", 2),
    ("fr", 2),
    ("A", 1),
    ("H", 1),
    ("H2", 1),
    ("q2", 0),
    ("jacobi", 2),
    ("inv", 1),
];

pub fn builtin_arity(name: &str) -> Option<usize> {
    BUILTINS.iter().find(|(n, _)| *n == name).map(|(_, a)| *a)
}
