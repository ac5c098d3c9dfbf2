//! The congruence inventory. Each entry evaluates both sides independently
//! at one prime: the left side from sequence tables, the right side from
//! its closed form.

use std::collections::BTreeMap;

use crate::modring::{jacobi, ModError, PrimePowerRing, RationalParam, Residue};
use crate::report::{instance_label, CheckClass};
use crate::sequences::{binom_shift_table, TableCache};

use super::mining::cornacchia_x2_3y2;

/// Sample values for the p-adic parameter `r`.
pub const R_SAMPLES: [(i64, i64); 10] =
    [(0, 1), (1, 1), (2, 1), (3, 1), (5, 1), (-1, 2), (1, 2), (1, 3), (-2, 3), (7, 5)];

/// Sample values for the polynomial variable `x`.
pub const X_SAMPLES: [(i64, i64); 6] = [(-2, 1), (-1, 1), (1, 1), (2, 1), (3, 1), (1, 2)];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WolstenholmePart {
    Harmonic,
    Harmonic2,
    Central,
}

impl WolstenholmePart {
    fn name(self) -> &'static str {
        match self {
            WolstenholmePart::Harmonic => "harmonic",
            WolstenholmePart::Harmonic2 => "harmonic2",
            WolstenholmePart::Central => "central-binomial",
        }
    }
}

/// Which congruence a [`CheckSpec`] evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Statement {
    ShiftedFranelSum { r: RationalParam },
    AlternatingMoment { power: u32, numerator: i64, denominator: i64 },
    CentralWeightedFranel,
    ReciprocalFranel,
    ReciprocalSquareFranel,
    ShiftedReciprocalFranel,
    GeneralizedFranelReciprocal { r: u32 },
    PolyShiftedSum { r: RationalParam, x: RationalParam },
    LinearWeightFranel,
    PolyCentralWeighted { x: RationalParam },
    PolyReciprocal { x: RationalParam },
    CentralBinomialProduct,
    FranelAtPMinusOne,
    BinomialProductSign,
    OddSumTelescoped,
    Wolstenholme(WolstenholmePart),
    Lehmer,
    CentralBinomialSum,
    FranelSymmetry,
    DoubleAlternatingSum,
    FranelOverEightPowers,
    FranelOverKEightPowers,
    CubedCentralOverSixteenPowers,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckSpec {
    pub id: &'static str,
    pub class: CheckClass,
    pub modulus_exponent: u32,
    pub min_prime: u64,
    pub params: BTreeMap<String, String>,
    pub statement: Statement,
    pub description: &'static str,
}

impl CheckSpec {
    pub fn label(&self) -> String {
        instance_label(self.id, &self.params)
    }

    /// Parameters whose denominator is divisible by `p` make the cell
    /// inadmissible at `p`.
    pub fn rational_params(&self) -> Vec<RationalParam> {
        match self.statement {
            Statement::ShiftedFranelSum { r } => vec![r],
            Statement::PolyShiftedSum { r, x } => vec![r, x],
            Statement::PolyCentralWeighted { x } | Statement::PolyReciprocal { x } => vec![x],
            _ => Vec::new(),
        }
    }

    pub fn admits(&self, p: u64) -> bool {
        p >= self.min_prime
    }

    /// Why the instance cannot run at `p`, if it cannot.
    pub fn skip_reason(&self, p: u64) -> Option<String> {
        self.rational_params()
            .into_iter()
            .find(|q| !q.admissible_for(p))
            .map(|q| format!("parameter {q} has denominator divisible by {p}"))
    }
}

/// Both sides at one prime, plus the index inspected by all-`k` checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Evaluation {
    pub lhs: Residue,
    pub rhs: Residue,
    pub witness: Option<u64>,
}

impl Evaluation {
    fn pair(lhs: Residue, rhs: Residue) -> Self {
        Evaluation { lhs, rhs, witness: None }
    }

    /// First `k` where the sequences differ, else the last `k`.
    fn for_all(pairs: impl Iterator<Item = (u64, Residue, Residue)>) -> Self {
        let mut last = None;
        for (k, l, r) in pairs {
            last = Some(Evaluation { lhs: l, rhs: r, witness: Some(k) });
            if l != r {
                break;
            }
        }
        last.expect("nonempty index range")
    }
}

/// Lazily built tables for every exponent of one prime.
pub struct PrimeContext {
    p: u64,
    caches: Vec<TableCache>,
}

impl PrimeContext {
    pub fn new(p: u64) -> Result<Self, ModError> {
        let caches = (1..=4)
            .map(|e| PrimePowerRing::new(p, e).map(TableCache::new))
            .collect::<Result<_, _>>()?;
        Ok(PrimeContext { p, caches })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn tables(&self, e: u32) -> &TableCache {
        &self.caches[e as usize - 1]
    }
}

fn legendre3(ring: PrimePowerRing) -> Residue {
    ring.from_i64(jacobi(ring.p() as i128, 3).expect("3 is odd") as i64)
}

fn sign(ring: PrimePowerRing, k: u64) -> Residue {
    if k.is_multiple_of(2) {
        ring.one()
    } else {
        -ring.one()
    }
}

/// `sum_{k} (-1)^k f_k * weight(k)` over `0..p`.
fn alternating_franel(t: &TableCache, weight: impl Fn(u64) -> Residue) -> Residue {
    let ring = t.ring();
    let f = t.franel();
    let mut s = ring.zero();
    for k in 0..ring.p() {
        let term = f.get(k as usize) * weight(k);
        if k % 2 == 0 {
            s += term;
        } else {
            s -= term;
        }
    }
    s
}

pub fn evaluate(spec: &CheckSpec, ctx: &PrimeContext) -> Result<Evaluation, ModError> {
    let t = ctx.tables(spec.modulus_exponent);
    let ring = t.ring();
    let p = ring.p();
    let n = p as usize;
    let inv = t.inverses();
    let pr = ring.elem(p);
    Ok(match spec.statement {
        Statement::ShiftedFranelSum { r } => {
            let b = binom_shift_table(ring, &r, n)?;
            let c = t.central();
            let lhs = alternating_franel(t, |k| b.get(k as usize));
            let rhs = (0..n).fold(ring.zero(), |s, k| s + c.get(k) * b.get(k) * b.get(k));
            Evaluation::pair(lhs, rhs)
        }
        Statement::AlternatingMoment { power, numerator, denominator } => {
            let lhs = alternating_franel(t, |k| ring.elem(k).pow(power as u64));
            let c = ring.from_rational(&RationalParam::new(numerator, denominator)?)?;
            Evaluation::pair(lhs, c * legendre3(ring))
        }
        Statement::CentralWeightedFranel => {
            let c = t.central();
            let f = t.franel();
            let inv_m4 = ring.from_i64(-4).inv()?;
            let inv_16 = ring.elem(16).inv()?;
            let (mut lhs, mut rhs) = (ring.zero(), ring.zero());
            let (mut w4, mut w16) = (ring.one(), ring.one());
            for k in 0..n {
                let ck = c.get(k);
                lhs += ck * f.get(k) * w4;
                rhs += ck * ck * ck * w16;
                w4 *= inv_m4;
                w16 *= inv_16;
            }
            Evaluation::pair(lhs, rhs)
        }
        Statement::ReciprocalFranel => {
            let f = t.franel();
            let lhs = (1..n).fold(ring.zero(), |s, k| s + sign(ring, k as u64) * f.get(k) * inv[k]);
            Evaluation::pair(lhs, ring.zero())
        }
        Statement::ReciprocalSquareFranel => {
            let f = t.franel();
            let lhs = (1..n).fold(ring.zero(), |s, k| {
                s + sign(ring, k as u64) * f.get(k) * inv[k] * inv[k]
            });
            Evaluation::pair(lhs, ring.zero())
        }
        Statement::ShiftedReciprocalFranel => {
            let f = t.franel();
            let lhs = (1..n).fold(ring.zero(), |s, k| s + sign(ring, k as u64) * f.get(k - 1) * inv[k]);
            let q = t.fermat_q2()?;
            Evaluation::pair(lhs, q.scale(3) + pr * q * q.scale(3))
        }
        Statement::GeneralizedFranelReciprocal { r } => {
            let g = t.generalized_franel(r);
            let lhs = (1..n).fold(ring.zero(), |s, k| {
                s + sign(ring, k as u64 * r as u64) * g.get(k) * inv[k].pow(r as u64 - 1)
            });
            Evaluation::pair(lhs, ring.zero())
        }
        Statement::PolyShiftedSum { r, x } => {
            let xr = ring.from_rational(&x)?;
            let b = binom_shift_table(ring, &r, n)?;
            let fx = t.franel_poly(xr);
            let c = t.central();
            let lhs = (0..n).fold(ring.zero(), |s, l| s + sign(ring, l as u64) * b.get(l) * fx.get(l));
            let mut rhs = ring.zero();
            let mut xk = ring.one();
            for k in 0..n {
                rhs += c.get(k) * xk * b.get(k) * b.get(k);
                xk *= xr;
            }
            Evaluation::pair(lhs, rhs)
        }
        Statement::LinearWeightFranel => {
            let lhs = alternating_franel(t, |k| ring.elem(3 * k + 2));
            Evaluation::pair(lhs, ring.zero())
        }
        Statement::PolyCentralWeighted { x } => {
            let xr = ring.from_rational(&x)?;
            let fx = t.franel_poly(xr);
            let c = t.central();
            let inv_m4 = ring.from_i64(-4).inv()?;
            let inv_16 = ring.elem(16).inv()?;
            let (mut lhs, mut rhs) = (ring.zero(), ring.zero());
            // w16 carries x^k / 16^k
            let (mut w4, mut w16) = (ring.one(), ring.one());
            for k in 0..n {
                let ck = c.get(k);
                lhs += ck * fx.get(k) * w4;
                rhs += ck * ck * ck * w16;
                w4 *= inv_m4;
                w16 *= inv_16 * xr;
            }
            Evaluation::pair(lhs, rhs)
        }
        Statement::PolyReciprocal { x } => {
            let xr = ring.from_rational(&x)?;
            let fx = t.franel_poly(xr);
            let lhs = (1..n).fold(ring.zero(), |s, l| s + sign(ring, l as u64) * fx.get(l) * inv[l]);
            let rhs = ((p as usize).div_ceil(2)..n)
                .fold(ring.zero(), |s, k| s + xr.pow(k as u64) * inv[k] * inv[k]);
            Evaluation::pair(lhs, pr * rhs)
        }
        Statement::CentralBinomialProduct => {
            let c = t.central();
            let two_p = ring.elem(2 * p);
            Evaluation::for_all((1..p).map(|k| {
                let lhs = ring.elem(k) * c.get(k as usize) * c.get((p - k) as usize);
                let exponent = (2 * k / p) as i64 - 1;
                let rhs = if exponent.rem_euclid(2) == 0 { two_p } else { -two_p };
                (k, lhs, rhs)
            }))
        }
        Statement::FranelAtPMinusOne => {
            let q = t.fermat_q2()?;
            let rhs = ring.one() + pr * q.scale(3) + pr * pr * q * q.scale(3);
            Evaluation::pair(t.franel().get(n - 1), rhs)
        }
        Statement::BinomialProductSign => {
            let binomials = t.binomials();
            let mut upper = ring.one();
            Evaluation::for_all((0..p).map(move |k| {
                if k > 0 {
                    upper = upper * ring.elem(p + k) * inv[k as usize];
                }
                (k, binomials.binom(n - 1, k as usize) * upper, sign(ring, k))
            }))
        }
        Statement::OddSumTelescoped => {
            let c = t.central();
            Evaluation::for_all((0..p - 1).map(|k| {
                let ku = k as usize;
                let mut s = ring.zero();
                let mut b = ring.one();
                for m in ku..n {
                    s += ring.elem(2 * m as u64 + 1) * b;
                    if m + 1 < n {
                        b = b * ring.elem((m + ku + 1) as u64) * inv[m - ku + 1];
                    }
                }
                let rhs = pr * pr * sign(ring, k) * inv[ku + 1];
                (k, c.get(ku) * s, rhs)
            }))
        }
        Statement::Wolstenholme(part) => match part {
            WolstenholmePart::Harmonic => Evaluation::pair(t.harmonic(1).get(n - 1), ring.zero()),
            WolstenholmePart::Harmonic2 => Evaluation::pair(t.harmonic(2).get(n - 1), ring.zero()),
            WolstenholmePart::Central => {
                let lhs = (1..n).fold(ring.one(), |acc, j| acc * ring.elem(p + j as u64) * inv[j]);
                Evaluation::pair(lhs, ring.one())
            }
        },
        Statement::Lehmer => {
            let q = t.fermat_q2()?;
            let lhs = t.harmonic(1).get((n - 1) / 2);
            Evaluation::pair(lhs, q.scale(-2) + pr * q * q)
        }
        Statement::CentralBinomialSum => {
            let lhs = t.central().iter().fold(ring.zero(), |s, c| s + c);
            Evaluation::pair(lhs, legendre3(ring))
        }
        Statement::FranelSymmetry => {
            let f = t.franel();
            let m8 = ring.from_i64(-8);
            Evaluation::for_all((0..p).map(|k| {
                let ku = k as usize;
                (k, f.get(ku), m8.pow(k) * f.get(n - 1 - ku))
            }))
        }
        Statement::DoubleAlternatingSum => {
            let binomials = t.binomials();
            let m8 = ring.from_i64(-8);
            let pows: Vec<Residue> = (0..n).scan(ring.one(), |w, _| {
                let cur = *w;
                *w *= m8;
                Some(cur)
            })
            .collect();
            let mut lhs = ring.zero();
            for m in 0..n {
                let inner = (0..=m).fold(ring.zero(), |s, k| {
                    let b = binomials.binom(m, k);
                    s + b * b * b * pows[k]
                });
                lhs += sign(ring, m as u64) * inner;
            }
            Evaluation::pair(lhs, legendre3(ring))
        }
        Statement::FranelOverEightPowers => {
            let inv8 = ring.elem(8).inv()?;
            let f = t.franel();
            let mut w = ring.one();
            let mut lhs = ring.zero();
            for k in 0..n {
                lhs += f.get(k) * w;
                w *= inv8;
            }
            Evaluation::pair(lhs, legendre3(ring))
        }
        Statement::FranelOverKEightPowers => {
            let inv8 = ring.elem(8).inv()?;
            let f = t.franel();
            let mut w = inv8;
            let mut lhs = ring.zero();
            for k in 1..n {
                lhs += f.get(k) * inv[k] * w;
                w *= inv8;
            }
            Evaluation::pair(lhs, t.fermat_q2()?.scale(3))
        }
        Statement::CubedCentralOverSixteenPowers => {
            let c = t.central();
            let inv16 = ring.elem(16).inv()?;
            let mut w = ring.one();
            let mut lhs = ring.zero();
            for k in 0..n {
                let ck = c.get(k);
                lhs += ck * ck * ck * w;
                w *= inv16;
            }
            let rhs = match cornacchia_x2_3y2(p).ok().flatten() {
                Some(rep) => ring.elem(rep.x).pow(2).scale(4) - pr.scale(2),
                None => ring.zero(),
            };
            Evaluation::pair(lhs, rhs)
        }
    })
}

fn spec(
    id: &'static str,
    class: CheckClass,
    e: u32,
    statement: Statement,
    description: &'static str,
) -> CheckSpec {
    CheckSpec {
        id,
        class,
        modulus_exponent: e,
        min_prime: 5,
        params: BTreeMap::new(),
        statement,
        description,
    }
}

fn with_params(mut s: CheckSpec, params: &[(&str, String)]) -> CheckSpec {
    for (k, v) in params {
        s.params.insert(k.to_string(), v.clone());
    }
    s
}

fn rational(pair: (i64, i64)) -> RationalParam {
    RationalParam::new(pair.0, pair.1).expect("nonzero denominator")
}

/// Every check instance, in report order.
pub fn registry() -> Vec<CheckSpec> {
    use CheckClass::*;
    use Statement::*;

    let mut out = Vec::new();
    for r in R_SAMPLES.map(rational) {
        out.push(with_params(
            spec(
                "T14_r",
                Theorem,
                2,
                ShiftedFranelSum { r },
                "sum (-1)^k binom(k+r,k) f_k == sum binom(2k,k) binom(k+r,k)^2 (mod p^2)",
            ),
            &[("r", r.to_string())],
        ));
    }
    let moments: [(&str, u32, i64, i64, &str); 3] = [
        ("C15", 0, 1, 1, "sum (-1)^k f_k == (p/3) (mod p^2)"),
        ("C16", 1, -2, 3, "sum (-1)^k k f_k == -2/3 (p/3) (mod p^2)"),
        ("C17", 2, 10, 27, "sum (-1)^k k^2 f_k == 10/27 (p/3) (mod p^2)"),
    ];
    for (id, power, numerator, denominator, d) in moments {
        out.push(spec(id, Theorem, 2, AlternatingMoment { power, numerator, denominator }, d));
    }
    out.push(spec(
        "C18",
        Theorem,
        2,
        CentralWeightedFranel,
        "sum binom(2k,k) f_k / (-4)^k == sum binom(2k,k)^3 / 16^k (mod p^2)",
    ));
    out.push(spec("C19", Theorem, 2, ReciprocalFranel, "sum_{k>=1} (-1)^k f_k / k == 0 (mod p^2)"));
    out.push(spec("C110", Theorem, 1, ReciprocalSquareFranel, "sum_{k>=1} (-1)^k f_k / k^2 == 0 (mod p)"));
    out.push(spec(
        "C111",
        Theorem,
        2,
        ShiftedReciprocalFranel,
        "sum_{k>=1} (-1)^k f_{k-1} / k == 3 q_p(2) + 3p q_p(2)^2 (mod p^2)",
    ));
    for r in 1..=6u32 {
        let mut s = with_params(
            spec(
                "C112_r",
                Theorem,
                1,
                GeneralizedFranelReciprocal { r },
                "sum_{k>=1} (-1)^{kr} f_k^(r) / k^(r-1) == 0 (mod p)",
            ),
            &[("r", r.to_string())],
        );
        s.min_prime = r.max(3) as u64 + 1;
        out.push(s);
    }
    out.push(spec("K3", Theorem, 2, AlternatingMoment { power: 3, numerator: -10, denominator: 81 }, "sum (-1)^k k^3 f_k == -10/81 (p/3) (mod p^2)"));
    out.push(spec("K4", Theorem, 2, AlternatingMoment { power: 4, numerator: -14, denominator: 243 }, "sum (-1)^k k^4 f_k == -14/243 (p/3) (mod p^2)"));
    for r in R_SAMPLES.map(rational) {
        for x in X_SAMPLES.map(rational) {
            out.push(with_params(
                spec(
                    "T21_rx",
                    Theorem,
                    2,
                    PolyShiftedSum { r, x },
                    "sum (-1)^l binom(l+r,l) f_l(x) == sum binom(2k,k) x^k binom(k+r,k)^2 (mod p^2)",
                ),
                &[("r", r.to_string()), ("x", x.to_string())],
            ));
        }
    }
    out.push(spec("C25", Derived, 2, LinearWeightFranel, "sum (3k+2)(-1)^k f_k == 0 (mod p^2)"));
    for x in X_SAMPLES.map(rational) {
        out.push(with_params(
            spec(
                "C26_x",
                Derived,
                2,
                PolyCentralWeighted { x },
                "sum binom(2k,k) f_k(x) / (-4)^k == sum binom(2k,k)^3 x^k / 16^k (mod p^2)",
            ),
            &[("x", x.to_string())],
        ));
    }
    for x in X_SAMPLES.map(rational) {
        out.push(with_params(
            spec(
                "C27_x",
                Derived,
                2,
                PolyReciprocal { x },
                "sum_{l>=1} (-1)^l f_l(x) / l == p sum_{k=(p+1)/2}^{p-1} x^k / k^2 (mod p^2)",
            ),
            &[("x", x.to_string())],
        ));
    }
    out.push(spec(
        "L24",
        Lemma,
        2,
        CentralBinomialProduct,
        "k binom(2k,k) binom(2(p-k),p-k) == (-1)^(floor(2k/p)-1) 2p (mod p^2) for 1 <= k < p",
    ));
    out.push(spec("L25", Lemma, 3, FranelAtPMinusOne, "f_{p-1} == 1 + 3p q_p(2) + 3p^2 q_p(2)^2 (mod p^3)"));
    out.push(spec(
        "L26a",
        Lemma,
        2,
        BinomialProductSign,
        "binom(p-1,k) binom(p+k,k) == (-1)^k (mod p^2) for 0 <= k < p",
    ));
    out.push(spec(
        "L26b",
        Lemma,
        4,
        OddSumTelescoped,
        "binom(2k,k) sum_{n=k}^{p-1} (2n+1) binom(n+k,2k) == p^2 (-1)^k / (k+1) (mod p^4) for 0 <= k <= p-2",
    ));
    let wol: [(WolstenholmePart, u32, &str); 3] = [
        (WolstenholmePart::Harmonic, 2, "H_{p-1} == 0 (mod p^2)"),
        (WolstenholmePart::Harmonic2, 1, "H^(2)_{p-1} == 0 (mod p)"),
        (WolstenholmePart::Central, 3, "binom(2p-1,p-1) == 1 (mod p^3)"),
    ];
    for (part, e, d) in wol {
        out.push(with_params(
            spec("WOL", Lemma, e, Wolstenholme(part), d),
            &[("part", part.name().to_string())],
        ));
    }
    out.push(spec("LEH", Lemma, 2, Lehmer, "H_{(p-1)/2} == -2 q_p(2) + p q_p(2)^2 (mod p^2)"));
    out.push(spec("ST11_anchor", Lemma, 2, CentralBinomialSum, "sum binom(2k,k) == (p/3) (mod p^2)"));
    out.push(spec("JV", Lemma, 1, FranelSymmetry, "f_k == (-8)^k f_{p-1-k} (mod p) for 0 <= k < p"));
    out.push(spec(
        "R1a",
        Conjecture,
        2,
        DoubleAlternatingSum,
        "sum_n (-1)^n sum_k binom(n,k)^3 (-8)^k == (p/3) (mod p^2)",
    ));
    out.push(spec("R1b", Conjecture, 2, FranelOverEightPowers, "sum f_k / 8^k == (p/3) (mod p^2)"));
    out.push(spec("R1c", Derived, 1, FranelOverKEightPowers, "sum_{k>=1} f_k / (k 8^k) == 3 q_p(2) (mod p)"));
    out.push(spec(
        "S11conj",
        Conjecture,
        2,
        CubedCentralOverSixteenPowers,
        "sum binom(2k,k)^3 / 16^k == 4x^2 - 2p if p = x^2 + 3y^2, 0 if p == 2 (mod 3) (mod p^2)",
    ));
    out
}
