//! A small expression language for stating congruences, e.g.
//! `sum(k=0..p-1, (-1)^k*f(k)) ≡ jacobi(p,3) (mod p^2)`.

mod ast;
mod eval;
mod parser;

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use thiserror::Error;

use crate::modring::{ModError, PrimePowerRing};
use crate::primes::PrimeRange;
use crate::report::{CheckClass, CheckResult, Report};
use crate::sequences::TableCache;

pub use ast::{builtin_arity, BinOp, Congruence, Expr, Parsed, BUILTINS};
pub use eval::{eval_expr, Evaluator};
pub use parser::{parse, parse_congruence, parse_expr};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("{line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: unknown function `{name}`")]
    UnknownFunction { name: String, line: usize, col: usize },
    #[error("{line}:{col}: `{name}` takes {expected} argument(s), got {got}")]
    Arity { name: String, expected: usize, got: usize, line: usize, col: usize },
    #[error("unbound variable `{0}`")]
    Unbound(String),
    #[error("`{expr}` is not invertible mod {modulus}")]
    NotInvertible { expr: String, modulus: u64 },
    #[error("not an integer: {0}")]
    NotInteger(String),
    #[error("integer overflow in {0}")]
    Overflow(String),
    #[error("{0}")]
    Domain(String),
    #[error("worker count must be at least 1")]
    NoWorkers,
    #[error("no primes in range {0}")]
    NoPrimes(PrimeRange),
    #[error(transparent)]
    Mod(ModError),
}

/// Evaluates a congruence at every odd prime in `range`.
///
/// Each prime yields one row labelled `label` with class `expression`;
/// evaluation failures (a non-invertible denominator, say) become error rows.
pub fn eval_congruence(
    stmt: &Congruence,
    range: PrimeRange,
    label: &str,
    workers: usize,
) -> Result<Report, ExprError> {
    if workers == 0 {
        return Err(ExprError::NoWorkers);
    }
    let primes: Vec<u64> = range.primes().into_iter().filter(|&p| p >= 3).collect();
    if primes.is_empty() {
        return Err(ExprError::NoPrimes(range));
    }
    let e = stmt.modulus_exponent;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build().expect("thread pool");
    let rows: Vec<CheckResult> = pool.install(|| {
        primes
            .par_iter()
            .map(|&p| {
                let ring = match PrimePowerRing::new(p, e) {
                    Ok(r) => r,
                    Err(err) => {
                        return CheckResult::errored(label, CheckClass::Expression, BTreeMap::new(), p, e, err.to_string())
                    }
                };
                let cache = TableCache::new(ring);
                let bindings = HashMap::new();
                let ev = Evaluator::new(&cache, &bindings);
                match ev.eval(&stmt.lhs).and_then(|l| Ok((l, ev.eval(&stmt.rhs)?))) {
                    Ok((l, r)) => CheckResult::evaluated(label, CheckClass::Expression, BTreeMap::new(), l, r, None),
                    Err(err) => {
                        CheckResult::errored(label, CheckClass::Expression, BTreeMap::new(), p, e, err.to_string())
                    }
                }
            })
            .collect()
    });
    Ok(Report::new(rows, Vec::new()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ring(p: u64, e: u32) -> PrimePowerRing {
        PrimePowerRing::new(p, e).unwrap()
    }

    fn value(src: &str, p: u64, e: u32) -> Result<u64, ExprError> {
        eval_expr(&parse_expr(src)?, ring(p, e), &HashMap::new()).map(|r| r.value())
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(value("1-2-3", 101, 1).unwrap(), 101 - 4);
        assert_eq!(value("2*3^2", 101, 1).unwrap(), 18);
        assert_eq!(value("12/2/3", 101, 1).unwrap(), 2);
        assert_eq!(value("-1^2", 101, 1).unwrap(), 100);
        assert_eq!(value("(-1)^3", 101, 1).unwrap(), 100);
        assert_eq!(value("2 − 5", 101, 1).unwrap(), 98);
        assert!(matches!(parse("2^3^2"), Err(ExprError::Syntax { .. })));
    }

    #[test]
    fn documented_examples() {
        assert_eq!(value("f(4)", 5, 3).unwrap(), 96);
        assert!(matches!(value("1/p", 5, 1), Err(ExprError::NotInvertible { .. })));
        assert_eq!(value("sum(k=1..4, 1/k^2)", 5, 1).unwrap(), 0);
        assert_eq!(value("2^(-1)", 7, 1).unwrap(), 4);
        assert!(value("p^(-1)", 7, 1).is_err());
    }

    #[test]
    fn syntax_errors_carry_positions() {
        match parse("sum(k=0..p, f(k)") {
            Err(ExprError::Syntax { line, col, .. }) => assert_eq!((line, col), (1, 17)),
            other => panic!("{other:?}"),
        }
        match parse("1 +\n  * 2") {
            Err(ExprError::Syntax { line, col, .. }) => assert_eq!((line, col), (2, 3)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("g(1)"), Err(ExprError::UnknownFunction { col: 1, .. })));
        assert!(matches!(parse("binom(1)"), Err(ExprError::Arity { expected: 2, got: 1, .. })));
        assert!(matches!(parse("f(1) ≡ 1 (mod p^5)"), Err(ExprError::Syntax { .. })));
        assert!(matches!(parse("1 $ 2"), Err(ExprError::Syntax { col: 3, .. })));
    }

    #[test]
    fn statement_forms() {
        let a = parse_congruence("f(1) ≡ 2 (mod p^2)").unwrap();
        let b = parse_congruence("f(1) =mod= 2 (mod p^2)").unwrap();
        assert_eq!(a, b);
        assert_eq!(parse_congruence("x ≡ 1 (mod p)").unwrap().modulus_exponent, 1);
        assert!(parse_congruence("f(1)").is_err());
    }

    #[test]
    fn integer_context() {
        assert!(matches!(value("sum(k=0..p/2, 1)", 7, 1), Err(ExprError::NotInteger(_))));
        assert_eq!(value("sum(k=0..(p-1)/2, 1)", 7, 1).unwrap(), 4);
        assert_eq!(value("binom(p+2, 2)", 7, 2).unwrap(), 36);
        assert_eq!(value("binom(-1, 3)", 7, 1).unwrap(), 6);
        assert!(matches!(value("H(p)", 7, 1), Err(ExprError::NotInvertible { .. })));
        assert!(matches!(value("y + 1", 7, 1), Err(ExprError::Unbound(_))));
        // f beyond the table falls back to exact values: f_7 = 104960
        assert_eq!(value("f(7)", 7, 2).unwrap(), 104_960 % 49);
    }

    #[test]
    fn bindings_are_residues() {
        let r = ring(11, 2);
        let mut b = HashMap::new();
        b.insert("x".to_string(), r.elem(3));
        assert_eq!(eval_expr(&parse_expr("x^2 + 1").unwrap(), r, &b).unwrap().value(), 10);
        assert!(matches!(eval_expr(&parse_expr("sum(k=0..x, 1)").unwrap(), r, &b), Err(ExprError::NotInteger(_))));
    }

    #[test]
    fn false_statement_fails_on_one_residue_class() {
        let stmt = parse_congruence("sum(k=0..p-1, (-1)^k*f(k)) ≡ 1 (mod p^2)").unwrap();
        let report = eval_congruence(&stmt, PrimeRange::new(5, 97), "neg", 3).unwrap();
        for row in &report.rows {
            assert_eq!(row.pass, row.prime % 3 == 1, "p = {}", row.prime);
        }
    }

    #[test]
    fn error_rows_for_non_invertible() {
        let stmt = parse_congruence("1/(p-5) ≡ 1 (mod p)").unwrap();
        let report = eval_congruence(&stmt, PrimeRange::new(5, 11), "div", 1).unwrap();
        assert_eq!(report.rows.len(), 3);
        assert!(report.rows[0].error.is_some());
        assert_eq!(report.rows[0].class, CheckClass::Expression);
    }

    fn arb_expr() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![
            (0i128..1000).prop_map(Expr::Int),
            prop::sample::select(vec!["p", "k", "x", "j2"]).prop_map(|s| Expr::Var(s.to_string())),
        ];
        leaf.prop_recursive(4, 40, 4, |inner| {
            let ops = prop::sample::select(vec![BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div, BinOp::Pow]);
            prop_oneof![
                inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
                (ops, inner.clone(), inner.clone()).prop_map(|(op, a, b)| Expr::binary(op, a, b)),
                (prop::sample::select(vec!["k", "i"]), inner.clone(), inner.clone(), inner.clone()).prop_map(
                    |(i, lo, hi, body)| Expr::Sum {
                        index: i.to_string(),
                        lower: Box::new(lo),
                        upper: Box::new(hi),
                        body: Box::new(body),
                    }
                ),
                (prop::sample::select(BUILTINS.to_vec()), prop::collection::vec(inner, 2)).prop_map(
                    |((name, arity), args)| Expr::Call {
                        name: name.to_string(),
                        args: args.into_iter().take(arity).collect(),
                    }
                ),
            ]
        })
    }

    proptest! {
        #[test]
        fn print_parse_roundtrip(e in arb_expr()) {
            let text = e.to_string();
            prop_assert_eq!(parse_expr(&text).unwrap(), e, "{}", text);
        }

        #[test]
        fn congruence_roundtrip(a in arb_expr(), b in arb_expr(), m in 1u32..=4) {
            let c = Congruence { lhs: a, rhs: b, modulus_exponent: m };
            prop_assert_eq!(parse_congruence(&c.to_string()).unwrap(), c);
        }
    }
}

#[cfg(test)]
mod equivalence {
    use super::*;
    use crate::suite::run_check;

    pub const ENCODINGS: &[(&str, &str)] = &[
        ("C15", "sum(k=0..p-1, (-1)^k * f(k)) ≡ jacobi(p,3) (mod p^2)"),
        ("C16", "sum(k=0..p-1, (-1)^k * k * f(k)) ≡ -2/3 * jacobi(p,3) (mod p^2)"),
        ("C19", "sum(k=1..p-1, (-1)^k * f(k) / k) ≡ 0 (mod p^2)"),
        ("C111", "sum(k=1..p-1, (-1)^k * f(k-1) / k) ≡ 3*q2() + 3*p*q2()^2 (mod p^2)"),
        ("L25", "f(p-1) ≡ 1 + 3*p*q2() + 3*p^2*q2()^2 (mod p^3)"),
    ];

    #[test]
    fn textual_statements_match_builtin_rows() {
        for (id, text) in ENCODINGS {
            let stmt = parse_congruence(text).unwrap();
            let report = eval_congruence(&stmt, PrimeRange::new(5, 97), id, 2).unwrap();
            assert_eq!(report.rows.len(), 23);
            for row in &report.rows {
                let builtin = run_check(id, row.prime).unwrap();
                assert_eq!(
                    (row.prime, row.modulus_exponent, row.lhs, row.rhs, row.pass),
                    (builtin.prime, builtin.modulus_exponent, builtin.lhs, builtin.rhs, true),
                    "{id} at p = {}",
                    row.prime
                );
            }
        }
    }
}
