//! Exact and modular generators for Franel numbers, the polynomials
//! `f_n(x)`, Apery numbers, generalized Franel numbers and the binomial
//! families the congruences are built from.
//!
//! Exact generators work over [`BigInt`]. Modular tables stop at index
//! `p - 1`, so every division they perform is by a unit.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::modring::{fermat_quotient2, harmonic_table, ModError, PrimePowerRing, RationalParam, Residue};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SequenceKind {
    Franel,
    /// `f_n(x)` at the residue `x`.
    FranelPoly { x: u64 },
    GeneralizedFranel { r: u32 },
    CentralBinomial,
    /// `binom(k + r, k)`.
    ShiftedBinomial { r: RationalParam },
    Harmonic { order: u8 },
}

/// Residues of one sequence, indexed from `k = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceTable {
    ring: PrimePowerRing,
    kind: SequenceKind,
    values: Vec<u64>,
}

impl SequenceTable {
    pub fn new(ring: PrimePowerRing, kind: SequenceKind, values: Vec<Residue>) -> Self {
        let values = values
            .into_iter()
            .map(|r| {
                debug_assert_eq!(r.ring(), ring);
                r.value()
            })
            .collect();
        SequenceTable { ring, kind, values }
    }

    pub fn ring(&self) -> PrimePowerRing {
        self.ring
    }

    pub fn kind(&self) -> SequenceKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Panics when `k` is out of range.
    #[inline]
    pub fn get(&self, k: usize) -> Residue {
        self.ring.elem(self.values[k])
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn iter(&self) -> impl Iterator<Item = Residue> + '_ {
        self.values.iter().map(move |&v| self.ring.elem(v))
    }
}

fn check_len(ring: PrimePowerRing, len: usize) -> Result<(), ModError> {
    if len as u64 > ring.p() {
        return Err(ModError::TableTooLong { len, bound: ring.p() as usize, p: ring.p() });
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// exact generators

/// Generalized binomial `x (x-1) ... (x-k+1) / k!` for any integer `x`.
pub fn binom_exact(x: &BigInt, k: u64) -> BigInt {
    let mut acc = BigInt::one();
    let mut top = x.clone();
    for j in 1..=k {
        acc *= &top;
        acc /= j;
        if acc.is_zero() {
            break;
        }
        top -= 1;
    }
    acc
}

pub fn binom_i64(x: i64, k: u64) -> BigInt {
    binom_exact(&BigInt::from(x), k)
}

/// Row `binom(n, 0..=n)`.
pub fn binomial_row(n: u64) -> Vec<BigInt> {
    let mut row = Vec::with_capacity(n as usize + 1);
    let mut c = BigInt::one();
    row.push(c.clone());
    for k in 1..=n {
        c = c * (n - k + 1) / k;
        row.push(c.clone());
    }
    row
}

/// `f_n = sum_k binom(n,k)^3` by direct summation.
pub fn franel_exact(n: u64) -> BigInt {
    generalized_franel(n, 3)
}

/// `f_n^{(r)} = sum_j binom(n,j)^r`.
pub fn generalized_franel(n: u64, r: u32) -> BigInt {
    binomial_row(n).iter().map(|c| num_traits::pow(c.clone(), r as usize)).sum()
}

/// Franel numbers `f_0..=f_{n_max}` via the three-term recurrence with exact division.
pub fn franel_exact_list(n_max: usize) -> Vec<BigInt> {
    let mut out: Vec<BigInt> = Vec::with_capacity(n_max + 1);
    out.push(BigInt::one());
    if n_max >= 1 {
        out.push(BigInt::from(2));
    }
    for n in 1..n_max {
        let next = (BigInt::from(7 * n * n + 7 * n + 2) * &out[n] + BigInt::from(8 * n * n) * &out[n - 1])
            / BigInt::from((n + 1) * (n + 1));
        out.push(next);
    }
    out
}

/// Both defining forms of `f_n(x)`:
/// `sum binom(n,k)^2 binom(2k,n) x^k` and `sum binom(n,k) binom(k,n-k) binom(2k,k) x^k`.
pub fn franel_poly_forms(n: u64, x: &BigInt) -> (BigInt, BigInt) {
    let row = binomial_row(n);
    let mut first = BigInt::zero();
    let mut second = BigInt::zero();
    let mut xk = BigInt::one();
    for k in 0..=n {
        if 2 * k >= n {
            let c = &row[k as usize];
            first += c * c * binom_i64(2 * k as i64, n) * &xk;
            second += c * binom_i64(k as i64, n - k) * binom_i64(2 * k as i64, k) * &xk;
        }
        xk *= x;
    }
    (first, second)
}

/// `f_n(x)`; panics if the two defining forms disagree.
pub fn franel_poly_exact(n: u64, x: &BigInt) -> BigInt {
    let (a, b) = franel_poly_forms(n, x);
    assert_eq!(a, b, "defining forms of f_{n}(x) disagree at x = {x}");
    a
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AperyRoute {
    /// `sum binom(n,k)^2 binom(n+k,k)^2`
    Definition,
    /// `sum binom(n,k) binom(n+k,k) f_k`
    ViaFranel,
}

pub fn apery_exact(n: u64, route: AperyRoute) -> BigInt {
    let row = binomial_row(n);
    match route {
        AperyRoute::Definition => (0..=n)
            .map(|k| {
                let t = &row[k as usize] * binom_i64((n + k) as i64, k);
                &t * &t
            })
            .sum(),
        AperyRoute::ViaFranel => {
            let f = franel_exact_list(n as usize);
            (0..=n)
                .map(|k| &row[k as usize] * binom_i64((n + k) as i64, k) * &f[k as usize])
                .sum()
        }
    }
}

// ---------------------------------------------------------------------------
// modular generators

/// Factorials and inverse factorials `0..p`, giving `binom(n, k)` for `n < p`.
#[derive(Debug, Clone)]
pub struct BinomialTable {
    fact: Vec<Residue>,
    inv_fact: Vec<Residue>,
}

impl BinomialTable {
    pub fn new(ring: PrimePowerRing) -> Self {
        let n = ring.p() as usize;
        let mut fact = Vec::with_capacity(n);
        fact.push(ring.one());
        for j in 1..n {
            let prev = fact[j - 1];
            fact.push(prev * ring.elem(j as u64));
        }
        let mut inv_fact = vec![ring.zero(); n];
        inv_fact[n - 1] = fact[n - 1].inv().expect("(p-1)! is a unit");
        for j in (1..n).rev() {
            inv_fact[j - 1] = inv_fact[j] * ring.elem(j as u64);
        }
        BinomialTable { fact, inv_fact }
    }

    /// `binom(n, k)` for `0 <= n < p`; zero outside `0..=n`.
    #[inline]
    pub fn binom(&self, n: usize, k: usize) -> Residue {
        if k > n {
            return self.fact[0].ring().zero();
        }
        self.fact[n] * self.inv_fact[k] * self.inv_fact[n - k]
    }

    #[inline]
    pub fn inverse(&self, n: usize) -> Residue {
        self.inv_fact[n] * self.fact[n - 1]
    }
}

/// `binom(n, k)` reduced mod `p^e` for any integer `n`, tracking powers of `p`
/// in numerator and denominator so arguments at or beyond `p` stay exact.
pub fn binom_mod(ring: PrimePowerRing, n: i128, k: u64) -> Residue {
    let p = ring.p() as i128;
    let mut valuation: i64 = 0;
    let mut unit = ring.one();
    let split = |mut m: i128| -> (i64, i128) {
        let mut v = 0;
        while m % p == 0 {
            m /= p;
            v += 1;
        }
        (v, m)
    };
    for j in 1..=k as i128 {
        let top = n - j + 1;
        if top == 0 {
            return ring.zero();
        }
        let (vt, ut) = split(top);
        let (vb, ub) = split(j);
        valuation += vt - vb;
        unit = unit * ring.from_i128(ut) * ring.from_i128(ub).inv().expect("unit part");
    }
    debug_assert!(valuation >= 0);
    if valuation >= ring.exponent() as i64 {
        ring.zero()
    } else {
        unit * ring.elem(ring.p()).pow(valuation as u64)
    }
}

/// `f_0..f_{len-1}` from `(n+1)^2 f_{n+1} = (7n^2+7n+2) f_n + 8n^2 f_{n-1}`.
pub fn franel_mod_table(ring: PrimePowerRing, len: usize) -> Result<SequenceTable, ModError> {
    check_len(ring, len)?;
    let inverses = ring.inverse_table(len.saturating_sub(1))?;
    let mut values = Vec::with_capacity(len);
    if len > 0 {
        values.push(ring.one());
    }
    if len > 1 {
        values.push(ring.elem(2));
    }
    for n in 1..len.saturating_sub(1) {
        let nn = n as i64;
        let next = ring.from_i64(7 * nn * nn + 7 * nn + 2) * values[n]
            + ring.from_i64(8 * nn * nn) * values[n - 1];
        let inv = inverses[n + 1];
        values.push(next * inv * inv);
    }
    Ok(SequenceTable::new(ring, SequenceKind::Franel, values))
}

/// `binom(2k, k)` for `k < len`, via `binom(2k+2,k+1) = binom(2k,k) * 2(2k+1)/(k+1)`.
pub fn central_binom_table(ring: PrimePowerRing, len: usize) -> Result<SequenceTable, ModError> {
    check_len(ring, len)?;
    let inverses = ring.inverse_table(len.saturating_sub(1))?;
    let mut values = Vec::with_capacity(len);
    let mut c = ring.one();
    for k in 0..len {
        values.push(c);
        if k + 1 < len {
            c = c * ring.elem(2 * (2 * k as u64 + 1)) * inverses[k + 1];
        }
    }
    Ok(SequenceTable::new(ring, SequenceKind::CentralBinomial, values))
}

/// `binom(k + r, k) = prod_{j<=k} (r + j)/j` for `k < len`.
pub fn binom_shift_table(
    ring: PrimePowerRing,
    r: &RationalParam,
    len: usize,
) -> Result<SequenceTable, ModError> {
    check_len(ring, len)?;
    let rbar = ring.from_rational(r)?;
    let inverses = ring.inverse_table(len.saturating_sub(1))?;
    let mut values = Vec::with_capacity(len);
    let mut c = ring.one();
    for k in 0..len {
        values.push(c);
        if k + 1 < len {
            c = c * (rbar + ring.elem(k as u64 + 1)) * inverses[k + 1];
        }
    }
    Ok(SequenceTable::new(ring, SequenceKind::ShiftedBinomial { r: *r }, values))
}

fn franel_poly_table_with(
    ring: PrimePowerRing,
    x: Residue,
    len: usize,
    binomials: &BinomialTable,
    central: &SequenceTable,
) -> SequenceTable {
    let mut xpow = Vec::with_capacity(len);
    let mut acc = ring.one();
    for _ in 0..len {
        xpow.push(acc);
        acc *= x;
    }
    let weights: Vec<Residue> = (0..len).map(|k| central.get(k) * xpow[k]).collect();
    let values = (0..len)
        .map(|l| {
            let mut s = ring.zero();
            for k in l.div_ceil(2)..=l {
                s += binomials.binom(l, k) * binomials.binom(k, l - k) * weights[k];
            }
            s
        })
        .collect();
    SequenceTable::new(ring, SequenceKind::FranelPoly { x: x.value() }, values)
}

/// `f_l(x)` for `l < len` from `sum_k binom(l,k) binom(k,l-k) binom(2k,k) x^k`.
pub fn franel_poly_mod_table(
    ring: PrimePowerRing,
    x: Residue,
    len: usize,
) -> Result<SequenceTable, ModError> {
    check_len(ring, len)?;
    if x.ring() != ring {
        return Err(ModError::RingMismatch { left: ring.modulus(), right: x.ring().modulus() });
    }
    let binomials = BinomialTable::new(ring);
    let central = central_binom_table(ring, len)?;
    Ok(franel_poly_table_with(ring, x, len, &binomials, &central))
}

/// `f_k^{(r)}` for `k < len`, by direct summation of the binomial row.
pub fn generalized_franel_mod_table(
    ring: PrimePowerRing,
    r: u32,
    len: usize,
) -> Result<SequenceTable, ModError> {
    check_len(ring, len)?;
    let binomials = BinomialTable::new(ring);
    Ok(generalized_franel_table_with(ring, r, len, &binomials))
}

fn generalized_franel_table_with(
    ring: PrimePowerRing,
    r: u32,
    len: usize,
    binomials: &BinomialTable,
) -> SequenceTable {
    let values = (0..len)
        .map(|k| {
            let mut s = ring.zero();
            for j in 0..=k {
                s += binomials.binom(k, j).pow(r as u64);
            }
            s
        })
        .collect();
    SequenceTable::new(ring, SequenceKind::GeneralizedFranel { r }, values)
}

/// Lazily built full-length (`0..p`) tables for one ring.
///
/// Every table is initialized at most once and is read-only afterwards, so
/// a cache can be shared between threads.
pub struct TableCache {
    ring: PrimePowerRing,
    inverses: OnceLock<Vec<Residue>>,
    binomials: OnceLock<BinomialTable>,
    franel: OnceLock<SequenceTable>,
    central: OnceLock<SequenceTable>,
    harmonic: OnceLock<SequenceTable>,
    harmonic2: OnceLock<SequenceTable>,
    fermat_q2: OnceLock<Result<Residue, ModError>>,
    franel_poly: Mutex<HashMap<u64, Arc<SequenceTable>>>,
    generalized: Mutex<HashMap<u32, Arc<SequenceTable>>>,
    apery: Mutex<HashMap<u64, Residue>>,
}

impl TableCache {
    pub fn new(ring: PrimePowerRing) -> Self {
        TableCache {
            ring,
            inverses: OnceLock::new(),
            binomials: OnceLock::new(),
            franel: OnceLock::new(),
            central: OnceLock::new(),
            harmonic: OnceLock::new(),
            harmonic2: OnceLock::new(),
            fermat_q2: OnceLock::new(),
            franel_poly: Mutex::new(HashMap::new()),
            generalized: Mutex::new(HashMap::new()),
            apery: Mutex::new(HashMap::new()),
        }
    }

    pub fn ring(&self) -> PrimePowerRing {
        self.ring
    }

    fn full(&self) -> usize {
        self.ring.p() as usize
    }

    /// `inverses()[k] = 1/k` for `1 <= k < p`.
    pub fn inverses(&self) -> &[Residue] {
        self.inverses
            .get_or_init(|| self.ring.inverse_table(self.full() - 1).expect("k < p"))
    }

    pub fn binomials(&self) -> &BinomialTable {
        self.binomials.get_or_init(|| BinomialTable::new(self.ring))
    }

    pub fn franel(&self) -> &SequenceTable {
        self.franel
            .get_or_init(|| franel_mod_table(self.ring, self.full()).expect("len = p"))
    }

    pub fn central(&self) -> &SequenceTable {
        self.central
            .get_or_init(|| central_binom_table(self.ring, self.full()).expect("len = p"))
    }

    pub fn harmonic(&self, order: u8) -> &SequenceTable {
        let cell = if order >= 2 { &self.harmonic2 } else { &self.harmonic };
        cell.get_or_init(|| harmonic_table(self.ring, self.full() - 1, order).expect("n < p"))
    }

    pub fn fermat_q2(&self) -> Result<Residue, ModError> {
        self.fermat_q2
            .get_or_init(|| fermat_quotient2(self.ring.p(), self.ring.exponent()))
            .clone()
    }

    pub fn franel_poly(&self, x: Residue) -> Arc<SequenceTable> {
        if let Some(t) = self.franel_poly.lock().unwrap().get(&x.value()) {
            return Arc::clone(t);
        }
        let table = Arc::new(franel_poly_table_with(
            self.ring,
            x,
            self.full(),
            self.binomials(),
            self.central(),
        ));
        self.franel_poly
            .lock()
            .unwrap()
            .entry(x.value())
            .or_insert(table)
            .clone()
    }

    pub fn generalized_franel(&self, r: u32) -> Arc<SequenceTable> {
        if let Some(t) = self.generalized.lock().unwrap().get(&r) {
            return Arc::clone(t);
        }
        let table = Arc::new(generalized_franel_table_with(self.ring, r, self.full(), self.binomials()));
        self.generalized.lock().unwrap().entry(r).or_insert(table).clone()
    }

    /// `A_n` reduced into the ring (exact computation, memoized per `n`).
    pub fn apery(&self, n: u64) -> Residue {
        if let Some(v) = self.apery.lock().unwrap().get(&n) {
            return *v;
        }
        let v = self.ring.from_bigint(&apery_exact(n, AperyRoute::Definition));
        self.apery.lock().unwrap().insert(n, v);
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primes::primes_in_range;

    fn ring(p: u64, e: u32) -> PrimePowerRing {
        PrimePowerRing::new(p, e).unwrap()
    }

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn franel_small_values() {
        let expected = [1, 2, 10, 56, 346, 2252, 15184];
        for (n, &v) in expected.iter().enumerate() {
            assert_eq!(franel_exact(n as u64), big(v));
        }
        let listed = franel_exact_list(60);
        for (n, v) in listed.iter().enumerate() {
            assert_eq!(*v, franel_exact(n as u64));
        }
    }

    #[test]
    fn franel_mod_examples() {
        let t = franel_mod_table(ring(5, 2), 5).unwrap();
        assert_eq!(t.values(), &[1, 2, 10, 6, 21]);
        let t = franel_mod_table(ring(5, 3), 5).unwrap();
        assert_eq!(t.get(4).value(), 96);
        assert_eq!(franel_mod_table(ring(11, 2), 1).unwrap().values(), &[1]);
        assert!(franel_mod_table(ring(5, 2), 6).is_err());
    }

    #[test]
    fn franel_mod_matches_exact() {
        for p in primes_in_range(5, 97) {
            let exact = franel_exact_list(p as usize - 1);
            for e in 1..=3 {
                let r = ring(p, e);
                let t = franel_mod_table(r, p as usize).unwrap();
                for (k, v) in exact.iter().enumerate() {
                    assert_eq!(t.get(k), r.from_bigint(v), "p = {p}, e = {e}, k = {k}");
                }
            }
        }
    }

    #[test]
    fn franel_poly_values() {
        for x in -5..5 {
            assert_eq!(franel_poly_exact(0, &big(x)), big(1));
        }
        assert_eq!(franel_poly_exact(2, &big(2)), big(32));
        for n in 0..=50 {
            assert_eq!(franel_poly_exact(n, &big(1)), franel_exact(n));
        }
        for n in 0..=40 {
            for x in -3..=3 {
                let (a, b) = franel_poly_forms(n, &big(x));
                assert_eq!(a, b, "n = {n}, x = {x}");
            }
        }
    }

    #[test]
    fn franel_poly_mod_examples() {
        let r = ring(7, 2);
        let at_one = franel_poly_mod_table(r, r.one(), 7).unwrap();
        assert_eq!(at_one.values(), franel_mod_table(r, 7).unwrap().values());
        let at_zero = franel_poly_mod_table(r, r.zero(), 7).unwrap();
        assert_eq!(at_zero.values(), &[1, 0, 0, 0, 0, 0, 0]);
        let at_two = franel_poly_mod_table(r, r.elem(2), 7).unwrap();
        assert_eq!(at_two.get(2).value(), 32);
        for (l, v) in at_two.iter().enumerate() {
            assert_eq!(v, r.from_bigint(&franel_poly_exact(l as u64, &big(2))));
        }
        assert!(franel_poly_mod_table(r, ring(7, 1).one(), 3).is_err());
    }

    #[test]
    fn apery_values_and_routes() {
        assert_eq!(apery_exact(0, AperyRoute::Definition), big(1));
        assert_eq!(apery_exact(1, AperyRoute::Definition), big(5));
        assert_eq!(apery_exact(2, AperyRoute::Definition), big(73));
        for n in 0..=40 {
            assert_eq!(
                apery_exact(n, AperyRoute::Definition),
                apery_exact(n, AperyRoute::ViaFranel),
                "n = {n}"
            );
        }
    }

    #[test]
    fn generalized_franel_values() {
        assert_eq!(generalized_franel(3, 1), big(8));
        assert_eq!(generalized_franel(2, 3), big(10));
        for k in 0..=30 {
            assert_eq!(generalized_franel(k, 2), binom_i64(2 * k as i64, k));
        }
        let r = ring(11, 2);
        let t = generalized_franel_mod_table(r, 4, 11).unwrap();
        for k in 0..11 {
            assert_eq!(t.get(k), r.from_bigint(&generalized_franel(k as u64, 4)));
        }
    }

    #[test]
    fn central_binomial_table() {
        let t = central_binom_table(ring(7, 3), 5).unwrap();
        assert_eq!(t.values(), &[1, 2, 6, 20, 70]);
        let t = central_binom_table(ring(5, 1), 5).unwrap();
        assert_eq!(t.get(3).value(), 0);
        assert_eq!(t.get(4).value(), 0);
        let t = central_binom_table(ring(5, 2), 5).unwrap();
        assert_eq!(t.get(3).value(), 20);
        for p in [5u64, 13, 31] {
            let r = ring(p, 4);
            let t = central_binom_table(r, p as usize).unwrap();
            for k in 0..p {
                assert_eq!(t.get(k as usize), r.from_bigint(&binom_i64(2 * k as i64, k)));
            }
        }
    }

    #[test]
    fn shifted_binomials() {
        let r = ring(11, 2);
        let zero = binom_shift_table(r, &RationalParam::integer(0), 11).unwrap();
        assert!(zero.iter().all(|v| v == r.one()));
        let two = binom_shift_table(r, &RationalParam::integer(2), 11).unwrap();
        let half = r.elem(2).inv().unwrap();
        for k in 0..11u64 {
            assert_eq!(two.get(k as usize), r.elem((k + 1) * (k + 2)) * half);
        }
        assert!(binom_shift_table(r, &"1/11".parse().unwrap(), 5).is_err());
    }

    #[test]
    fn shifted_binomial_at_minus_half() {
        let minus_half: RationalParam = "-1/2".parse().unwrap();
        for p in primes_in_range(5, 97) {
            for e in 1..=4 {
                let r = ring(p, e);
                let shifted = binom_shift_table(r, &minus_half, p as usize).unwrap();
                let central = central_binom_table(r, p as usize).unwrap();
                let inv4 = r.elem(4).inv().unwrap();
                for k in 0..p as usize {
                    assert_eq!(shifted.get(k), central.get(k) * inv4.pow(k as u64));
                }
            }
        }
    }

    #[test]
    fn generalized_binomials() {
        assert_eq!(binom_i64(6, 3), big(20));
        for k in 0..=10 {
            assert_eq!(binom_i64(-1, k), big(if k % 2 == 0 { 1 } else { -1 }));
        }
        assert_eq!(binom_i64(-3, 2), big(6));
        assert_eq!(binom_i64(3, 5), big(0));
        assert_eq!(binom_i64(0, 0), big(1));
    }

    #[test]
    fn binom_mod_beyond_p() {
        for p in [5u64, 7, 13] {
            for e in 1..=4 {
                let r = ring(p, e);
                for n in -30i64..60 {
                    for k in 0..25u64 {
                        assert_eq!(
                            binom_mod(r, n as i128, k),
                            r.from_bigint(&binom_i64(n, k)),
                            "binom({n}, {k}) mod {p}^{e}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn jarvis_verrill_symmetry() {
        for p in primes_in_range(5, 97) {
            let r = ring(p, 1);
            let f = franel_mod_table(r, p as usize).unwrap();
            let m8 = r.from_i64(-8);
            for k in 0..p as usize {
                assert_eq!(f.get(k), m8.pow(k as u64) * f.get(p as usize - 1 - k), "p = {p}, k = {k}");
            }
        }
    }

    #[test]
    fn cache_tables_agree_with_builders() {
        let r = ring(13, 2);
        let cache = TableCache::new(r);
        assert_eq!(cache.franel(), &franel_mod_table(r, 13).unwrap());
        assert_eq!(cache.central(), &central_binom_table(r, 13).unwrap());
        let x = r.from_i64(-2);
        assert_eq!(*cache.franel_poly(x), franel_poly_mod_table(r, x, 13).unwrap());
        assert_eq!(cache.apery(3), r.from_bigint(&apery_exact(3, AperyRoute::Definition)));
        assert_eq!(cache.inverses()[5], r.elem(5).inv().unwrap());
        assert_eq!(cache.binomials().binom(12, 5), r.elem(792));
        assert_eq!(cache.binomials().inverse(7), r.elem(7).inv().unwrap());
    }
}
