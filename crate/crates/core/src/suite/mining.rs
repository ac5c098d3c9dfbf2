//! Conjecture-mining helpers: `p = x^2 + 3y^2`, recovery of the odd
//! integers `a_r`, and the 3-adic integrality scan.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::modring::{jacobi, valuation, PrimePowerRing};
use crate::primes::{is_prime, PrimeRange};
use crate::sequences::{franel_exact_list, TableCache};

use super::SuiteError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct QuadraticRepresentation {
    pub p: u64,
    pub x: u64,
    pub y: u64,
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = ((acc as u128 * b as u128) % m as u128) as u64;
        }
        b = ((b as u128 * b as u128) % m as u128) as u64;
        e >>= 1;
    }
    acc
}

/// Square root of a quadratic residue `a` modulo an odd prime (Tonelli-Shanks).
fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let mul = |x: u64, y: u64| ((x as u128 * y as u128) % p as u128) as u64;
    let s = (p - 1).trailing_zeros();
    let q = (p - 1) >> s;
    let z = (2..p).find(|&z| pow_mod(z, (p - 1) / 2, p) == p - 1)?;
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul(t2, t2);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul(b, b);
        t = mul(t, c);
        r = mul(r, b);
    }
    Some(r)
}

/// Cornacchia's algorithm for `p = x^2 + 3y^2`; `None` when `p == 2 (mod 3)`.
pub fn cornacchia_x2_3y2(p: u64) -> Result<Option<QuadraticRepresentation>, SuiteError> {
    if p <= 3 || !is_prime(p) {
        return Err(SuiteError::BadPrime(p));
    }
    if p % 3 == 2 {
        return Ok(None);
    }
    let mut a = p;
    let mut b = sqrt_mod(p - 3, p).expect("-3 is a square when p == 1 (mod 3)");
    if 2 * b < p {
        b = p - b;
    }
    while (b as u128) * (b as u128) > p as u128 {
        (a, b) = (b, a % b);
    }
    let rest = p - b * b;
    if !rest.is_multiple_of(3) {
        return Ok(None);
    }
    let y2 = rest / 3;
    let y = y2.isqrt();
    if y * y != y2 || y == 0 {
        return Ok(None);
    }
    Ok(Some(QuadraticRepresentation { p, x: b, y }))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ArScan {
    pub r: u32,
    pub value: i128,
    pub odd: bool,
    /// `(p, symmetric lift of a_r mod p^2)` for every prime used.
    pub lifts: Vec<(u64, i128)>,
}

/// Recovers the integer `a_r` with
/// `sum (-1)^k k^r f_k == 2 a_r / 3^(2r-1) (p/3) (mod p^2)` across a prime range.
pub fn scan_ar(r: u32, range: PrimeRange) -> Result<ArScan, SuiteError> {
    let floor = r.max(3) as u64;
    let primes: Vec<u64> = range.primes().into_iter().filter(|&p| p > floor).collect();
    if primes.is_empty() {
        return Err(SuiteError::NoPrimes(range));
    }
    let mut lifts = Vec::with_capacity(primes.len());
    for &p in &primes {
        let ring = PrimePowerRing::new(p, 2)?;
        let cache = TableCache::new(ring);
        let f = cache.franel();
        let mut moment = ring.zero();
        for k in 0..p {
            let term = ring.elem(k).pow(r as u64) * f.get(k as usize);
            if k % 2 == 0 {
                moment += term;
            } else {
                moment -= term;
            }
        }
        let chi = jacobi(p as i128, 3)? as i64;
        let a = moment * ring.elem(3).pow(2 * r as u64 - 1) * ring.elem(2).inv()? * ring.from_i64(chi);
        lifts.push((p, a.symmetric()));
    }
    let candidate = lifts.last().expect("nonempty").1;
    let mut usable = 0;
    for &(p, lifted) in &lifts {
        let m = (p as i128) * (p as i128);
        if m > 2 * candidate.abs() {
            usable += 1;
            if lifted != candidate {
                return Err(SuiteError::InconsistentAr { r, p, lifted, candidate });
            }
        } else if (lifted - candidate).rem_euclid(m) != 0 {
            return Err(SuiteError::InconsistentAr { r, p, lifted, candidate });
        }
    }
    if usable < 3 {
        return Err(SuiteError::TooFewPrimes { r, usable });
    }
    Ok(ArScan { r, value: candidate, odd: candidate % 2 != 0, lifts })
}

/// Margins `v_3(S) - 2 v_3(n)`; `None` when the sum is zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IntegralityRow {
    pub n: u64,
    /// For `sum_{k<n} (-1)^k f_k`.
    pub alternating: Option<i64>,
    /// For `sum_{k<n} (-1)^k k f_k`.
    pub weighted: Option<i64>,
}

impl IntegralityRow {
    pub fn is_counterexample(&self) -> bool {
        self.alternating.is_some_and(|m| m < 0) || self.weighted.is_some_and(|m| m < 0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntegralityScan {
    pub n_max: u64,
    pub rows: Vec<IntegralityRow>,
}

impl IntegralityScan {
    pub fn counterexamples(&self) -> impl Iterator<Item = &IntegralityRow> {
        self.rows.iter().filter(|r| r.is_counterexample())
    }
}

/// Whether both partial sums divided by `n^2` are 3-adic integers, `1 <= n <= n_max`.
pub fn check_3adic_integrality(n_max: u64) -> IntegralityScan {
    let f = franel_exact_list(n_max as usize);
    let mut alternating = BigInt::zero();
    let mut weighted = BigInt::zero();
    let mut rows = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max {
        let k = n - 1;
        let fk = &f[k as usize];
        if k % 2 == 0 {
            alternating += fk;
            weighted += fk * k;
        } else {
            alternating -= fk;
            weighted -= fk * k;
        }
        let vn = 2 * valuation(&BigInt::from(n), 3).expect("n > 0") as i64;
        rows.push(IntegralityRow {
            n,
            alternating: valuation(&alternating, 3).map(|v| v as i64 - vn),
            weighted: valuation(&weighted, 3).map(|v| v as i64 - vn),
        });
    }
    IntegralityScan { n_max, rows }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primes::primes_in_range;

    #[test]
    fn cornacchia_examples() {
        assert_eq!(cornacchia_x2_3y2(7).unwrap(), Some(QuadraticRepresentation { p: 7, x: 2, y: 1 }));
        assert_eq!(cornacchia_x2_3y2(13).unwrap(), Some(QuadraticRepresentation { p: 13, x: 1, y: 2 }));
        assert_eq!(cornacchia_x2_3y2(5).unwrap(), None);
        assert!(cornacchia_x2_3y2(3).is_err());
        assert!(cornacchia_x2_3y2(25).is_err());
    }

    #[test]
    fn cornacchia_presence_matches_residue_class() {
        for p in primes_in_range(5, 10_007) {
            match cornacchia_x2_3y2(p).unwrap() {
                Some(rep) => {
                    assert_eq!(p % 3, 1);
                    assert_eq!(rep.x * rep.x + 3 * rep.y * rep.y, p);
                    assert!(rep.x > 0 && rep.y > 0);
                }
                None => assert_eq!(p % 3, 2, "p = {p}"),
            }
        }
    }

    #[test]
    fn sqrt_mod_roundtrip() {
        for p in primes_in_range(3, 500) {
            for a in 1..p {
                if let Some(s) = sqrt_mod(a, p) {
                    assert_eq!(s * s % p, a);
                }
            }
        }
    }

    #[test]
    fn first_values_of_a_r() {
        let range = PrimeRange::new(5, 199);
        assert_eq!(scan_ar(1, range).unwrap().value, -1);
        assert_eq!(scan_ar(2, range).unwrap().value, 5);
        assert!(scan_ar(1, range).unwrap().odd);
        assert!(matches!(scan_ar(1, PrimeRange::new(4, 4)), Err(SuiteError::NoPrimes(_))));
        assert!(matches!(scan_ar(1, PrimeRange::new(5, 7)), Err(SuiteError::TooFewPrimes { .. })));
    }

    #[test]
    fn integrality_small() {
        let scan = check_3adic_integrality(30);
        assert_eq!(scan.rows[0].n, 1);
        assert!(scan.rows[0].alternating.unwrap() >= 0);
        // S(3) = 1 - 2 + 10 = 9
        assert_eq!(scan.rows[2].alternating, Some(2 - 2));
        assert_eq!(scan.counterexamples().count(), 0);
    }
}
