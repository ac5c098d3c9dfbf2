use std::collections::HashMap;

use crate::modring::{jacobi, ModError, PrimePowerRing, Residue};
use crate::sequences::{binom_mod, franel_exact, generalized_franel, TableCache};

use super::ast::{BinOp, Expr};
use super::ExprError;

/// Largest `k` accepted by `binom(n, k)` and the longest summation range.
const LOOP_LIMIT: i128 = 10_000_000;

/// Evaluates expressions in one ring, reusing the tables of `cache`.
pub struct Evaluator<'a> {
    cache: &'a TableCache,
    bindings: &'a HashMap<String, Residue>,
}

type Scope = Vec<(String, i128)>;

fn lookup(scope: &Scope, name: &str) -> Option<i128> {
    scope.iter().rev().find(|(n, _)| n == name).map(|(_, v)| *v)
}

fn overflow(what: &str) -> ExprError {
    ExprError::Overflow(what.to_string())
}

impl<'a> Evaluator<'a> {
    pub fn new(cache: &'a TableCache, bindings: &'a HashMap<String, Residue>) -> Self {
        Evaluator { cache, bindings }
    }

    fn ring(&self) -> PrimePowerRing {
        self.cache.ring()
    }

    pub fn eval(&self, e: &Expr) -> Result<Residue, ExprError> {
        self.residue(e, &mut Vec::new())
    }

    fn residue(&self, e: &Expr, scope: &mut Scope) -> Result<Residue, ExprError> {
        let ring = self.ring();
        match e {
            Expr::Int(v) => Ok(ring.from_i128(*v)),
            Expr::Var(name) => {
                if let Some(v) = lookup(scope, name) {
                    return Ok(ring.from_i128(v));
                }
                if name == "p" {
                    return Ok(ring.elem(ring.p()));
                }
                match self.bindings.get(name) {
                    Some(r) if r.ring() == ring => Ok(*r),
                    Some(r) => Ok(r.reduce_to(ring)?),
                    None => Err(ExprError::Unbound(name.clone())),
                }
            }
            Expr::Neg(inner) => Ok(-self.residue(inner, scope)?),
            Expr::Binary { op, lhs, rhs } => match op {
                BinOp::Add => Ok(self.residue(lhs, scope)? + self.residue(rhs, scope)?),
                BinOp::Sub => Ok(self.residue(lhs, scope)? - self.residue(rhs, scope)?),
                BinOp::Mul => Ok(self.residue(lhs, scope)? * self.residue(rhs, scope)?),
                BinOp::Div => {
                    let num = self.residue(lhs, scope)?;
                    let den = self.residue(rhs, scope)?;
                    num.try_div(den).map_err(|_| ExprError::NotInvertible { expr: rhs.to_string(), modulus: ring.modulus() })
                }
                BinOp::Pow => {
                    let base = self.residue(lhs, scope)?;
                    let n = self.integer(rhs, scope)?;
                    let n = i64::try_from(n).map_err(|_| overflow("exponent"))?;
                    base.pow_signed(n)
                        .map_err(|_| ExprError::NotInvertible { expr: lhs.to_string(), modulus: ring.modulus() })
                }
            },
            Expr::Sum { index, lower, upper, body } => {
                let (lo, hi) = self.bounds(lower, upper, scope)?;
                let mut acc = ring.zero();
                for k in lo..=hi {
                    scope.push((index.clone(), k));
                    let term = self.residue(body, scope);
                    scope.pop();
                    acc += term?;
                }
                Ok(acc)
            }
            Expr::Call { name, args } => self.call(name, args, scope),
        }
    }

    fn bounds(&self, lower: &Expr, upper: &Expr, scope: &mut Scope) -> Result<(i128, i128), ExprError> {
        let lo = self.integer(lower, scope)?;
        let hi = self.integer(upper, scope)?;
        if hi.saturating_sub(lo) > LOOP_LIMIT {
            return Err(ExprError::Domain(format!("summation range {lo}..{hi} is too long")));
        }
        Ok((lo, hi))
    }

    /// Integer context: sum bounds, exponents and index arguments.
    fn integer(&self, e: &Expr, scope: &mut Scope) -> Result<i128, ExprError> {
        match e {
            Expr::Int(v) => Ok(*v),
            Expr::Var(name) => {
                if let Some(v) = lookup(scope, name) {
                    return Ok(v);
                }
                if name == "p" {
                    return Ok(self.ring().p() as i128);
                }
                if self.bindings.contains_key(name) {
                    return Err(ExprError::NotInteger(format!("`{name}` is a residue")));
                }
                Err(ExprError::Unbound(name.clone()))
            }
            Expr::Neg(inner) => self.integer(inner, scope)?.checked_neg().ok_or_else(|| overflow("negation")),
            Expr::Binary { op, lhs, rhs } => {
                let a = self.integer(lhs, scope)?;
                let b = self.integer(rhs, scope)?;
                match op {
                    BinOp::Add => a.checked_add(b).ok_or_else(|| overflow("addition")),
                    BinOp::Sub => a.checked_sub(b).ok_or_else(|| overflow("subtraction")),
                    BinOp::Mul => a.checked_mul(b).ok_or_else(|| overflow("multiplication")),
                    BinOp::Div => {
                        if b == 0 || a % b != 0 {
                            Err(ExprError::NotInteger(e.to_string()))
                        } else {
                            Ok(a / b)
                        }
                    }
                    BinOp::Pow => {
                        let n = u32::try_from(b).map_err(|_| ExprError::NotInteger(e.to_string()))?;
                        a.checked_pow(n).ok_or_else(|| overflow("power"))
                    }
                }
            }
            Expr::Sum { index, lower, upper, body } => {
                let (lo, hi) = self.bounds(lower, upper, scope)?;
                let mut acc: i128 = 0;
                for k in lo..=hi {
                    scope.push((index.clone(), k));
                    let term = self.integer(body, scope);
                    scope.pop();
                    acc = acc.checked_add(term?).ok_or_else(|| overflow("sum"))?;
                }
                Ok(acc)
            }
            Expr::Call { name, .. } => Err(ExprError::NotInteger(format!("`{name}(..)` is a residue"))),
        }
    }

    fn index(&self, e: &Expr, scope: &mut Scope, what: &str) -> Result<u64, ExprError> {
        let v = self.integer(e, scope)?;
        u64::try_from(v).map_err(|_| ExprError::Domain(format!("{what} must be nonnegative, got {v}")))
    }

    fn call(&self, name: &str, args: &[Expr], scope: &mut Scope) -> Result<Residue, ExprError> {
        let ring = self.ring();
        let p = ring.p();
        match name {
            "binom" => {
                let n = self.integer(&args[0], scope)?;
                let k = self.integer(&args[1], scope)?;
                if k < 0 {
                    return Ok(ring.zero());
                }
                if k > LOOP_LIMIT {
                    return Err(ExprError::Domain(format!("binom lower argument {k} is too large")));
                }
                Ok(binom_mod(ring, n, k as u64))
            }
            "f" => {
                let n = self.index(&args[0], scope, "f(n): n")?;
                if n < p {
                    Ok(self.cache.franel().get(n as usize))
                } else {
                    Ok(ring.from_bigint(&franel_exact(n)))
                }
            }
            "fx" => {
                let n = self.index(&args[0], scope, "fx(n, x): n")?;
                let x = self.residue(&args[1], scope)?;
                if n < p {
                    return Ok(self.cache.franel_poly(x).get(n as usize));
                }
                let mut acc = ring.zero();
                for k in 0..=n {
                    let c = binom_mod(ring, n as i128, k) * binom_mod(ring, k as i128, n - k)
                        * binom_mod(ring, 2 * k as i128, k);
                    acc += c * x.pow(k);
                }
                Ok(acc)
            }
            "fr" => {
                let r = self.integer(&args[0], scope)?;
                let r = u32::try_from(r)
                    .ok()
                    .filter(|&r| r >= 1)
                    .ok_or_else(|| ExprError::Domain(format!("fr(r, n): r must be a positive integer, got {r}")))?;
                let n = self.index(&args[1], scope, "fr(r, n): n")?;
                if n < p {
                    Ok(self.cache.generalized_franel(r).get(n as usize))
                } else {
                    Ok(ring.from_bigint(&generalized_franel(n, r)))
                }
            }
            "A" => {
                let n = self.index(&args[0], scope, "A(n): n")?;
                Ok(self.cache.apery(n))
            }
            "H" | "H2" => {
                let n = self.index(&args[0], scope, &format!("{name}(n): n"))?;
                if n >= p {
                    return Err(ExprError::NotInvertible { expr: format!("{name}({n})"), modulus: ring.modulus() });
                }
                let order = if name == "H" { 1 } else { 2 };
                Ok(self.cache.harmonic(order).get(n as usize))
            }
            "q2" => Ok(self.cache.fermat_q2()?),
            "jacobi" => {
                let a = self.integer(&args[0], scope)?;
                let n = self.integer(&args[1], scope)?;
                Ok(ring.from_i64(jacobi(a, n)? as i64))
            }
            "inv" => {
                let a = self.residue(&args[0], scope)?;
                a.inv().map_err(|_| ExprError::NotInvertible { expr: args[0].to_string(), modulus: ring.modulus() })
            }
            other => Err(ExprError::UnknownFunction { name: other.to_string(), line: 0, col: 0 }),
        }
    }
}

/// Evaluates `e` in `ring` with the given residue-valued bindings.
pub fn eval_expr(e: &Expr, ring: PrimePowerRing, bindings: &HashMap<String, Residue>) -> Result<Residue, ExprError> {
    let cache = TableCache::new(ring);
    Evaluator::new(&cache, bindings).eval(e)
}

impl From<ModError> for ExprError {
    fn from(e: ModError) -> Self {
        ExprError::Mod(e)
    }
}
