//! Exact checks of the binomial identities behind the congruences.
//!
//! Identities that are polynomial in a free variable `x` are evaluated at
//! `degree + 2` consecutive integers centered at zero, which pins the
//! polynomial down completely. Everything here runs on exact integers.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::sequences::{
    apery_exact, binom_i64, franel_exact, franel_poly_forms, AperyRoute,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IdentityKind {
    FranelRecurrence,
    ShiftedBinomialSquare,
    ChuVandermonde,
    Andersen,
    CentralBinomialWeights,
    HockeyStick,
    TelescopedOddSum,
    FranelPolyAtOne,
    AperyViaFranel,
    FranelPolyForms,
}

impl IdentityKind {
    pub fn id(self) -> &'static str {
        match self {
            IdentityKind::FranelRecurrence => "franel-recurrence",
            IdentityKind::ShiftedBinomialSquare => "shifted-binomial-square",
            IdentityKind::ChuVandermonde => "chu-vandermonde",
            IdentityKind::Andersen => "andersen",
            IdentityKind::CentralBinomialWeights => "central-binomial-weights",
            IdentityKind::HockeyStick => "hockey-stick",
            IdentityKind::TelescopedOddSum => "telescoped-odd-sum",
            IdentityKind::FranelPolyAtOne => "franel-poly-at-one",
            IdentityKind::AperyViaFranel => "apery-via-franel",
            IdentityKind::FranelPolyForms => "franel-poly-forms",
        }
    }

    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            IdentityKind::FranelRecurrence => &["n"],
            IdentityKind::ShiftedBinomialSquare => &["k", "x"],
            IdentityKind::ChuVandermonde => &["y", "z", "k"],
            IdentityKind::Andersen => &["m", "n", "x"],
            IdentityKind::CentralBinomialWeights => &["m", "n"],
            IdentityKind::HockeyStick => &["l", "m"],
            IdentityKind::TelescopedOddSum => &["k", "m"],
            IdentityKind::FranelPolyAtOne => &["n"],
            IdentityKind::AperyViaFranel => &["n"],
            IdentityKind::FranelPolyForms => &["n", "x"],
        }
    }

    /// Both sides of the identity at one parameter tuple (ordered as
    /// [`param_names`](Self::param_names)).
    pub fn evaluate(self, args: &[i64]) -> (BigInt, BigInt) {
        let u = |i: usize| args[i] as u64;
        match self {
            IdentityKind::FranelRecurrence => franel_recurrence_sides(u(0)),
            IdentityKind::ShiftedBinomialSquare => shifted_binomial_square_sides(u(0), args[1]),
            IdentityKind::ChuVandermonde => chu_vandermonde_sides(args[0], args[1], u(2)),
            IdentityKind::Andersen => andersen_sides(u(0), u(1), args[2]),
            IdentityKind::CentralBinomialWeights => {
                let poly = central_binomial_weight_poly(u(0) as u32);
                central_binomial_weight_sides(&poly, u(0) as u32, u(1))
            }
            IdentityKind::HockeyStick => hockey_stick_sides(u(0), u(1)),
            IdentityKind::TelescopedOddSum => telescoped_odd_sum_sides(u(0), u(1)),
            IdentityKind::FranelPolyAtOne => {
                (franel_poly_forms(u(0), &BigInt::one()).0, franel_exact(u(0)))
            }
            IdentityKind::AperyViaFranel => (
                apery_exact(u(0), AperyRoute::Definition),
                apery_exact(u(0), AperyRoute::ViaFranel),
            ),
            IdentityKind::FranelPolyForms => franel_poly_forms(u(0), &BigInt::from(args[1])),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub identity: IdentityKind,
    pub params: Vec<(String, i64)>,
    pub lhs: String,
    pub rhs: String,
}

impl Counterexample {
    pub fn args(&self) -> Vec<i64> {
        self.params.iter().map(|(_, v)| *v).collect()
    }

    /// Re-runs the stock evaluator at the recorded parameters.
    pub fn reproduce(&self) -> (BigInt, BigInt) {
        self.identity.evaluate(&self.args())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityOutcome {
    pub identity_id: String,
    pub range_tested: String,
    pub cases: u64,
    pub pass: bool,
    pub counterexample: Option<Counterexample>,
}

struct Runner {
    id: String,
    range: String,
    cases: u64,
    failure: Option<Counterexample>,
}

impl Runner {
    fn new(id: &str, range: String) -> Self {
        Runner { id: id.to_string(), range, cases: 0, failure: None }
    }

    /// Records one case; returns false once a counterexample is known.
    fn case(&mut self, kind: IdentityKind, args: &[i64], sides: (BigInt, BigInt)) -> bool {
        self.cases += 1;
        if sides.0 != sides.1 {
            self.failure = Some(Counterexample {
                identity: kind,
                params: kind
                    .param_names()
                    .iter()
                    .zip(args)
                    .map(|(n, v)| (n.to_string(), *v))
                    .collect(),
                lhs: sides.0.to_string(),
                rhs: sides.1.to_string(),
            });
            return false;
        }
        true
    }

    fn finish(self) -> IdentityOutcome {
        IdentityOutcome {
            identity_id: self.id,
            range_tested: self.range,
            cases: self.cases,
            pass: self.failure.is_none(),
            counterexample: self.failure,
        }
    }
}

/// `count` consecutive integers centered at zero, negatives first.
fn sample_points(count: u64) -> impl Iterator<Item = i64> {
    let lo = -(count as i64 / 2);
    lo..lo + count as i64
}

// ---------------------------------------------------------------------------
// sides

fn franel_recurrence_sides(n: u64) -> (BigInt, BigInt) {
    let n2 = BigInt::from(n * n);
    let lhs = BigInt::from((n + 1) * (n + 1)) * franel_exact(n + 1);
    let rhs = BigInt::from(7 * n * n + 7 * n + 2) * franel_exact(n) + 8 * n2 * franel_exact(n - 1);
    (lhs, rhs)
}

fn shifted_binomial_square_sides(k: u64, x: i64) -> (BigInt, BigInt) {
    let mut lhs = BigInt::zero();
    for l in k..=2 * k {
        let term = binom_i64(l as i64, k) * binom_i64(k as i64, l - k) * binom_i64(x + l as i64, l);
        if l % 2 == 0 {
            lhs += term;
        } else {
            lhs -= term;
        }
    }
    let b = binom_i64(x + k as i64, k);
    (lhs, &b * &b)
}

fn chu_vandermonde_sides(y: i64, z: i64, k: u64) -> (BigInt, BigInt) {
    let lhs = (0..=k).map(|j| binom_i64(y, j) * binom_i64(z, k - j)).sum();
    (lhs, binom_i64(y + z, k))
}

/// Denominator `m` cleared: `m * lhs` against `(m - n) * ...`.
fn andersen_sides(m: u64, n: u64, x: i64) -> (BigInt, BigInt) {
    let lhs: BigInt = (0..=n).map(|k| binom_i64(x, k) * binom_i64(-x, m - k)).sum();
    let rhs = BigInt::from(m - n) * binom_i64(x - 1, n) * binom_i64(-x, m - n);
    (lhs * m, rhs)
}

/// Coefficients (lowest degree first) of `2(2x+1)(x+1)^(m-1) - x^m`.
pub fn central_binomial_weight_poly(m: u32) -> Vec<BigInt> {
    let m = m as usize;
    // (x+1)^(m-1)
    let mut base = vec![BigInt::zero(); m.max(1)];
    for (i, c) in base.iter_mut().enumerate() {
        *c = binom_i64(m as i64 - 1, i as u64);
    }
    let mut poly = vec![BigInt::zero(); m + 1];
    for (i, c) in base.iter().enumerate() {
        poly[i] += 2 * c;
        poly[i + 1] += 4 * c;
    }
    poly[m] -= 1;
    poly
}

fn eval_poly(coeffs: &[BigInt], x: &BigInt) -> BigInt {
    coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
}

fn central_binomial_weight_sides(poly: &[BigInt], m: u32, n: u64) -> (BigInt, BigInt) {
    let lhs = (0..n)
        .map(|k| eval_poly(poly, &BigInt::from(k)) * binom_i64(2 * k as i64, k))
        .sum();
    let rhs = num_traits::pow(BigInt::from(n), m as usize) * binom_i64(2 * n as i64, n);
    (lhs, rhs)
}

fn hockey_stick_sides(l: u64, m: u64) -> (BigInt, BigInt) {
    let lhs = (0..=m).map(|n| binom_i64(n as i64, l)).sum();
    (lhs, binom_i64(m as i64 + 1, l + 1))
}

fn telescoped_odd_sum_sides(k: u64, m: u64) -> (BigInt, BigInt) {
    let s: BigInt = (k..m)
        .map(|n| BigInt::from(2 * n + 1) * binom_i64((n + k) as i64, 2 * k))
        .sum();
    let lhs = BigInt::from(k + 1) * binom_i64(2 * k as i64, k) * s;
    let rhs = BigInt::from(m * m) * binom_i64(m as i64 - 1, k) * binom_i64((m + k) as i64, k);
    (lhs, rhs)
}

// ---------------------------------------------------------------------------
// verifiers

/// `(n+1)^2 f_{n+1} = (7n^2+7n+2) f_n + 8n^2 f_{n-1}` for `1 <= n < n_max`,
/// with every Franel number computed by direct summation.
pub fn verify_franel_recurrence(n_max: u64) -> IdentityOutcome {
    let kind = IdentityKind::FranelRecurrence;
    let mut run = Runner::new(kind.id(), format!("1 <= n < {n_max}"));
    let mut f: Vec<BigInt> = (0..=n_max.max(1)).map(franel_exact).collect();
    f.push(franel_exact(n_max + 1));
    for n in 1..n_max {
        let i = n as usize;
        let lhs = BigInt::from((n + 1) * (n + 1)) * &f[i + 1];
        let rhs = BigInt::from(7 * n * n + 7 * n + 2) * &f[i] + BigInt::from(8 * n * n) * &f[i - 1];
        if !run.case(kind, &[n as i64], (lhs, rhs)) {
            break;
        }
    }
    run.finish()
}

/// `sum_{l=k}^{2k} (-1)^l binom(l,k) binom(k,l-k) binom(x+l,l) = binom(x+k,k)^2`
/// at `2k + 2` points per `k`.
pub fn verify_shifted_binomial_square(k_max: u64) -> IdentityOutcome {
    let kind = IdentityKind::ShiftedBinomialSquare;
    let mut run = Runner::new(kind.id(), format!("0 <= k <= {k_max}, 2k+2 points in x"));
    'outer: for k in 0..=k_max {
        for x in sample_points(2 * k + 2) {
            if !run.case(kind, &[k as i64, x], shifted_binomial_square_sides(k, x)) {
                break 'outer;
            }
        }
    }
    run.finish()
}

/// `sum_j binom(y,j) binom(z,k-j) = binom(y+z,k)` on the grid
/// `y, z in [-k_max, k_max]`, `0 <= k <= k_max`.
pub fn verify_chu_vandermonde(k_max: u64) -> IdentityOutcome {
    let kind = IdentityKind::ChuVandermonde;
    let b = k_max as i64;
    let mut run = Runner::new(kind.id(), format!("y, z in [-{b}, {b}], 0 <= k <= {k_max}"));
    'outer: for k in 0..=k_max {
        for y in -b..=b {
            for z in -b..=b {
                if !run.case(kind, &[y, z, k as i64], chu_vandermonde_sides(y, z, k)) {
                    break 'outer;
                }
            }
        }
    }
    run.finish()
}

/// `sum_{k<=n} binom(x,k) binom(-x,m-k) = (m-n)/m binom(x-1,n) binom(-x,m-n)`
/// for `0 <= n <= m <= m_max`, at `m + 2` points in `x`.
pub fn verify_andersen(m_max: u64) -> IdentityOutcome {
    let kind = IdentityKind::Andersen;
    let mut run = Runner::new(kind.id(), format!("0 <= n <= m, 1 <= m <= {m_max}, m+2 points in x"));
    'outer: for m in 1..=m_max {
        for n in 0..=m {
            for x in sample_points(m + 2) {
                if !run.case(kind, &[m as i64, n as i64, x], andersen_sides(m, n, x)) {
                    break 'outer;
                }
            }
        }
    }
    run.finish()
}

/// `sum_{k<n} P_m(k) binom(2k,k) = n^m binom(2n,n)` with
/// `P_m(x) = 2(2x+1)(x+1)^(m-1) - x^m`.
pub fn verify_central_binomial_weights(m_max: u32, n_max: u64) -> IdentityOutcome {
    verify_central_binomial_weights_with(m_max, n_max, central_binomial_weight_poly)
}

/// As [`verify_central_binomial_weights`] with a caller-supplied weight polynomial.
pub fn verify_central_binomial_weights_with(
    m_max: u32,
    n_max: u64,
    poly: impl Fn(u32) -> Vec<BigInt>,
) -> IdentityOutcome {
    let kind = IdentityKind::CentralBinomialWeights;
    let mut run = Runner::new(kind.id(), format!("1 <= m <= {m_max}, 1 <= n <= {n_max}"));
    'outer: for m in 1..=m_max {
        let coeffs = poly(m);
        let mut lhs = BigInt::zero();
        let mut central = BigInt::one();
        for n in 1..=n_max {
            let k = n - 1;
            lhs += eval_poly(&coeffs, &BigInt::from(k)) * &central;
            // binom(2n, n) from binom(2n-2, n-1)
            central = central * (2 * (2 * k + 1)) / n;
            let rhs = num_traits::pow(BigInt::from(n), m as usize) * &central;
            if !run.case(kind, &[m as i64, n as i64], (lhs.clone(), rhs)) {
                break 'outer;
            }
        }
    }
    run.finish()
}

/// `sum_{n<=m} binom(n,l) = binom(m+1,l+1)`.
pub fn verify_hockey_stick(l_max: u64, m_max: u64) -> IdentityOutcome {
    let kind = IdentityKind::HockeyStick;
    let mut run = Runner::new(kind.id(), format!("0 <= l <= {l_max}, 0 <= m <= {m_max}"));
    'outer: for l in 0..=l_max {
        for m in 0..=m_max {
            if !run.case(kind, &[l as i64, m as i64], hockey_stick_sides(l, m)) {
                break 'outer;
            }
        }
    }
    run.finish()
}

/// `(k+1) binom(2k,k) sum_{n=k}^{m-1} (2n+1) binom(n+k,2k) = m^2 binom(m-1,k) binom(m+k,k)`
/// for `0 <= k < m <= m_max`, `k <= k_max`.
pub fn verify_telescoped_odd_sum(k_max: u64, m_max: u64) -> IdentityOutcome {
    let kind = IdentityKind::TelescopedOddSum;
    let mut run = Runner::new(kind.id(), format!("0 <= k <= {k_max}, k < m <= {m_max}"));
    'outer: for k in 0..=k_max {
        for m in k + 1..=m_max {
            if !run.case(kind, &[k as i64, m as i64], telescoped_odd_sum_sides(k, m)) {
                break 'outer;
            }
        }
    }
    run.finish()
}

/// `f_n(1) = f_n`, the Apery numbers through Franel numbers, and agreement of
/// both defining forms of `f_n(x)` at `n + 2` points, for `n <= n_max`.
pub fn verify_strehl_and_apery(n_max: u64) -> IdentityOutcome {
    let mut run = Runner::new("strehl-and-apery", format!("0 <= n <= {n_max}"));
    'outer: for n in 0..=n_max {
        let a = n as i64;
        for kind in [IdentityKind::FranelPolyAtOne, IdentityKind::AperyViaFranel] {
            if !run.case(kind, &[a], kind.evaluate(&[a])) {
                break 'outer;
            }
        }
        for x in sample_points(n + 2) {
            let kind = IdentityKind::FranelPolyForms;
            if !run.case(kind, &[a, x], franel_poly_forms(n, &BigInt::from(x))) {
                break 'outer;
            }
        }
    }
    run.finish()
}

/// Every identity at the bounds used by the acceptance run.
pub fn verify_all_default() -> Vec<IdentityOutcome> {
    vec![
        verify_franel_recurrence(200),
        verify_shifted_binomial_square(25),
        verify_chu_vandermonde(20),
        verify_andersen(20),
        verify_central_binomial_weights(6, 60),
        verify_hockey_stick(20, 40),
        verify_telescoped_odd_sum(20, 40),
        verify_strehl_and_apery(40),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn recurrence_first_step() {
        assert_eq!(franel_recurrence_sides(1), (big(40), big(40)));
        let out = verify_franel_recurrence(200);
        assert!(out.pass, "{out:?}");
        assert_eq!(out.cases, 199);
    }

    #[test]
    fn shifted_binomial_square_examples() {
        for x in -3..3 {
            assert_eq!(shifted_binomial_square_sides(0, x), (big(1), big(1)));
        }
        // -binom(1,1)binom(1,0)binom(1,1) + binom(2,1)binom(1,1)binom(2,2) = -1 + 2
        assert_eq!(shifted_binomial_square_sides(1, 0), (big(1), big(1)));
        assert!(verify_shifted_binomial_square(25).pass);
    }

    #[test]
    fn chu_vandermonde_examples() {
        assert_eq!(chu_vandermonde_sides(2, 2, 2), (big(6), big(6)));
        assert_eq!(chu_vandermonde_sides(-1, -1, 1), (big(-2), big(-2)));
        assert_eq!(chu_vandermonde_sides(5, -7, 0), (big(1), big(1)));
        assert!(verify_chu_vandermonde(20).pass);
    }

    #[test]
    fn andersen_examples() {
        assert_eq!(andersen_sides(1, 0, 2), (big(-2), big(-2)));
        for m in 1..6 {
            for x in -4..4 {
                assert_eq!(andersen_sides(m, m, x), (big(0), big(0)));
            }
        }
        assert!(verify_andersen(20).pass);
    }

    #[test]
    fn weight_polynomials() {
        let p1 = central_binomial_weight_poly(1);
        assert_eq!(p1, vec![big(2), big(3)]);
        let p2 = central_binomial_weight_poly(2);
        assert_eq!(p2, vec![big(2), big(6), big(3)]);
        assert_eq!(central_binomial_weight_sides(&p1, 1, 1), (big(2), big(2)));
        assert_eq!(central_binomial_weight_sides(&p2, 2, 2), (big(24), big(24)));
        assert!(verify_central_binomial_weights(6, 60).pass);
    }

    #[test]
    fn perturbed_weight_polynomial_is_caught() {
        for m in 1..=6u32 {
            for i in 0..=m as usize {
                let mutated = move |mm: u32| {
                    let mut c = central_binomial_weight_poly(mm);
                    if mm == m {
                        c[i] += 1;
                    }
                    c
                };
                let out = verify_central_binomial_weights_with(6, 60, mutated);
                assert!(!out.pass, "m = {m}, coefficient {i}");
                let cx = out.counterexample.expect("counterexample recorded");
                let args = cx.args();
                let (l, r) = central_binomial_weight_sides(&mutated(args[0] as u32), args[0] as u32, args[1] as u64);
                assert_ne!(l, r);
                assert_eq!(l.to_string(), cx.lhs);
            }
        }
    }

    #[test]
    fn hockey_stick_examples() {
        for m in 0..10 {
            assert_eq!(hockey_stick_sides(0, m), (big(m as i64 + 1), big(m as i64 + 1)));
        }
        assert_eq!(hockey_stick_sides(2, 4), (big(10), big(10)));
        assert_eq!(hockey_stick_sides(3, 2), (big(0), big(0)));
        assert!(verify_hockey_stick(20, 40).pass);
    }

    #[test]
    fn telescoped_odd_sum_examples() {
        for m in 1..10u64 {
            let sq = big((m * m) as i64);
            assert_eq!(telescoped_odd_sum_sides(0, m), (sq.clone(), sq));
        }
        // 2 * 2 * (3 * binom(2,2) + 5 * binom(3,2)) = 72 = 9 * binom(2,1) * binom(4,1)
        assert_eq!(telescoped_odd_sum_sides(1, 3), (big(72), big(72)));
        assert!(verify_telescoped_odd_sum(20, 40).pass);
    }

    #[test]
    fn strehl_and_apery() {
        assert_eq!(IdentityKind::FranelPolyAtOne.evaluate(&[1]), (big(2), big(2)));
        assert_eq!(IdentityKind::AperyViaFranel.evaluate(&[1]), (big(5), big(5)));
        assert!(verify_strehl_and_apery(40).pass);
    }

    #[test]
    fn counterexample_reproduces() {
        let cx = Counterexample {
            identity: IdentityKind::HockeyStick,
            params: vec![("l".into(), 2), ("m".into(), 4)],
            lhs: "10".into(),
            rhs: "10".into(),
        };
        assert_eq!(cx.reproduce(), (big(10), big(10)));
    }

    #[test]
    fn sample_points_are_centered() {
        assert_eq!(sample_points(4).collect::<Vec<_>>(), vec![-2, -1, 0, 1]);
        assert_eq!(sample_points(3).collect::<Vec<_>>(), vec![-1, 0, 1]);
    }
}
