//! Arithmetic modulo prime powers `p^e` (`e <= 4`) and the scalar helpers
//! the congruence checks are phrased in: Jacobi symbols, Fermat quotients
//! and harmonic numbers.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use thiserror::Error;

use crate::primes::is_prime;
use crate::sequences::{SequenceKind, SequenceTable};

/// Largest supported exponent; the deepest congruence in the suite is mod `p^4`.
pub const MAX_EXPONENT: u32 = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModError {
    #[error("{0} is not an odd prime")]
    NotPrime(u64),
    #[error("exponent {0} outside 1..={MAX_EXPONENT}")]
    ExponentOutOfRange(u32),
    #[error("modulus {p}^{e} does not fit in 63 bits")]
    ModulusTooLarge { p: u64, e: u32 },
    #[error("residues belong to different rings (mod {left} vs mod {right})")]
    RingMismatch { left: u64, right: u64 },
    #[error("{value} is not invertible modulo {modulus}")]
    NotInvertible { value: u64, modulus: u64 },
    #[error("{value} is not divisible by {p}")]
    NotDivisibleByP { value: u64, p: u64 },
    #[error("cannot divide by p in a ring of exponent 1")]
    NoLowerRing,
    #[error("Jacobi symbol needs an odd positive modulus, got {0}")]
    BadJacobiModulus(i128),
    #[error("table length {len} exceeds the bound {bound} for p = {p}")]
    TableTooLong { len: usize, bound: usize, p: u64 },
    #[error("invalid rational parameter: {0}")]
    BadRational(String),
}

/// The ring `Z / p^e Z` for an odd prime `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimePowerRing {
    p: u64,
    e: u32,
    modulus: u64,
}

impl PrimePowerRing {
    pub fn new(p: u64, e: u32) -> Result<Self, ModError> {
        if p < 3 || !is_prime(p) {
            return Err(ModError::NotPrime(p));
        }
        if !(1..=MAX_EXPONENT).contains(&e) {
            return Err(ModError::ExponentOutOfRange(e));
        }
        let modulus = p
            .checked_pow(e)
            .filter(|m| *m < 1 << 63)
            .ok_or(ModError::ModulusTooLarge { p, e })?;
        Ok(PrimePowerRing { p, e, modulus })
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn exponent(&self) -> u32 {
        self.e
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// The ring one exponent higher, used to divide p-divisible quantities by `p`.
    pub fn companion(&self) -> Result<Self, ModError> {
        PrimePowerRing::new(self.p, self.e + 1)
    }

    /// Same prime, different exponent.
    pub fn with_exponent(&self, e: u32) -> Result<Self, ModError> {
        PrimePowerRing::new(self.p, e)
    }

    #[inline]
    pub fn zero(&self) -> Residue {
        Residue { value: 0, ring: *self }
    }

    #[inline]
    pub fn one(&self) -> Residue {
        Residue { value: 1 % self.modulus, ring: *self }
    }

    #[inline]
    pub fn elem(&self, value: u64) -> Residue {
        Residue { value: value % self.modulus, ring: *self }
    }

    pub fn from_i128(&self, value: i128) -> Residue {
        let m = self.modulus as i128;
        Residue { value: value.rem_euclid(m) as u64, ring: *self }
    }

    pub fn from_i64(&self, value: i64) -> Residue {
        self.from_i128(value as i128)
    }

    pub fn from_bigint(&self, value: &BigInt) -> Residue {
        let m = BigInt::from(self.modulus);
        let r = value.mod_floor(&m);
        Residue { value: r.to_u64().expect("reduced value fits"), ring: *self }
    }

    /// Maps `a/b` to `a * b^{-1}`; fails when `p | b`.
    pub fn from_rational(&self, q: &RationalParam) -> Result<Residue, ModError> {
        let den = self.elem(q.denominator);
        let inv = den.inv().map_err(|_| {
            ModError::BadRational(format!("denominator of {q} is divisible by {}", self.p))
        })?;
        Ok(self.from_i64(q.numerator) * inv)
    }

    /// Inverses of `1..=n` (`n < p`), index 0 holds zero.
    ///
    /// Uses batch inversion: one extended Euclid on the product of all
    /// entries, then two passes of multiplications.
    pub fn inverse_table(&self, n: usize) -> Result<Vec<Residue>, ModError> {
        if n as u64 >= self.p {
            return Err(ModError::TableTooLong { len: n, bound: self.p as usize - 1, p: self.p });
        }
        let mut prefix = Vec::with_capacity(n + 1);
        prefix.push(self.one());
        for j in 1..=n {
            let prev = prefix[j - 1];
            prefix.push(prev * self.elem(j as u64));
        }
        let mut acc = prefix[n].inv()?;
        let mut out = vec![self.zero(); n + 1];
        for j in (1..=n).rev() {
            out[j] = acc * prefix[j - 1];
            acc *= self.elem(j as u64);
        }
        Ok(out)
    }

    #[inline]
    fn mul_raw(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.modulus as u128) as u64
    }
}

impl fmt::Display for PrimePowerRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z/{}^{}", self.p, self.e)
    }
}

/// Canonical representative in `[0, p^e)` tagged with its ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Residue {
    value: u64,
    ring: PrimePowerRing,
}

/// Operand-carrying arithmetic request, see [`Residue::apply`].
#[derive(Debug, Clone, Copy)]
pub enum ArithOp {
    Add(Residue),
    Sub(Residue),
    Mul(Residue),
    Neg,
    Pow(u64),
}

impl Residue {
    #[inline]
    pub fn value(&self) -> u64 {
        self.value
    }

    #[inline]
    pub fn ring(&self) -> PrimePowerRing {
        self.ring
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    /// Representative in `(-m/2, m/2]`.
    pub fn symmetric(&self) -> i128 {
        let m = self.ring.modulus as i128;
        let v = self.value as i128;
        if 2 * v > m {
            v - m
        } else {
            v
        }
    }

    fn same_ring(&self, other: &Residue) -> Result<(), ModError> {
        if self.ring != other.ring {
            return Err(ModError::RingMismatch {
                left: self.ring.modulus,
                right: other.ring.modulus,
            });
        }
        Ok(())
    }

    pub fn apply(self, op: ArithOp) -> Result<Residue, ModError> {
        match op {
            ArithOp::Add(b) => self.same_ring(&b).map(|_| self + b),
            ArithOp::Sub(b) => self.same_ring(&b).map(|_| self - b),
            ArithOp::Mul(b) => self.same_ring(&b).map(|_| self * b),
            ArithOp::Neg => Ok(-self),
            ArithOp::Pow(n) => Ok(self.pow(n)),
        }
    }

    pub fn pow(self, mut n: u64) -> Residue {
        let ring = self.ring;
        let mut base = self.value;
        let mut acc = 1 % ring.modulus;
        while n > 0 {
            if n & 1 == 1 {
                acc = ring.mul_raw(acc, base);
            }
            base = ring.mul_raw(base, base);
            n >>= 1;
        }
        Residue { value: acc, ring }
    }

    /// `self^n` for signed `n`; negative exponents invert first.
    pub fn pow_signed(self, n: i64) -> Result<Residue, ModError> {
        if n >= 0 {
            Ok(self.pow(n as u64))
        } else {
            Ok(self.inv()?.pow(n.unsigned_abs()))
        }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm.
    pub fn inv(self) -> Result<Residue, ModError> {
        let m = self.ring.modulus as i128;
        let (mut old_r, mut r) = (self.value as i128, m);
        let (mut old_s, mut s) = (1i128, 0i128);
        while r != 0 {
            let q = old_r / r;
            (old_r, r) = (r, old_r - q * r);
            (old_s, s) = (s, old_s - q * s);
        }
        if old_r != 1 {
            return Err(ModError::NotInvertible { value: self.value, modulus: self.ring.modulus });
        }
        Ok(self.ring.from_i128(old_s))
    }

    pub fn try_div(self, rhs: Residue) -> Result<Residue, ModError> {
        self.same_ring(&rhs)?;
        Ok(self * rhs.inv()?)
    }

    /// Multiply by a (possibly negative) machine integer.
    pub fn scale(self, k: i64) -> Residue {
        self * self.ring.from_i64(k)
    }

    /// Image under the projection onto a ring of the same prime and lower exponent.
    pub fn reduce_to(self, target: PrimePowerRing) -> Result<Residue, ModError> {
        if target.p != self.ring.p || target.e > self.ring.e {
            return Err(ModError::RingMismatch { left: self.ring.modulus, right: target.modulus });
        }
        Ok(target.elem(self.value))
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

// Operators panic on ring mismatch; `apply`/`try_div` report it as an error.

impl Add for Residue {
    type Output = Residue;
    #[inline]
    fn add(self, rhs: Residue) -> Residue {
        assert_eq!(self.ring, rhs.ring, "ring mismatch in residue addition");
        let m = self.ring.modulus;
        let s = self.value + rhs.value;
        Residue { value: if s >= m { s - m } else { s }, ring: self.ring }
    }
}

impl Sub for Residue {
    type Output = Residue;
    #[inline]
    fn sub(self, rhs: Residue) -> Residue {
        assert_eq!(self.ring, rhs.ring, "ring mismatch in residue subtraction");
        let m = self.ring.modulus;
        let v = if self.value >= rhs.value { self.value - rhs.value } else { self.value + m - rhs.value };
        Residue { value: v, ring: self.ring }
    }
}

impl Mul for Residue {
    type Output = Residue;
    #[inline]
    fn mul(self, rhs: Residue) -> Residue {
        assert_eq!(self.ring, rhs.ring, "ring mismatch in residue multiplication");
        Residue { value: self.ring.mul_raw(self.value, rhs.value), ring: self.ring }
    }
}

impl Neg for Residue {
    type Output = Residue;
    #[inline]
    fn neg(self) -> Residue {
        let v = if self.value == 0 { 0 } else { self.ring.modulus - self.value };
        Residue { value: v, ring: self.ring }
    }
}

impl AddAssign for Residue {
    fn add_assign(&mut self, rhs: Residue) {
        *self = *self + rhs;
    }
}

impl SubAssign for Residue {
    fn sub_assign(&mut self, rhs: Residue) {
        *self = *self - rhs;
    }
}

impl MulAssign for Residue {
    fn mul_assign(&mut self, rhs: Residue) {
        *self = *self * rhs;
    }
}

/// A rational `a/b` in lowest terms with `b > 0`, standing in for a p-adic integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RationalParam {
    numerator: i64,
    denominator: u64,
}

impl RationalParam {
    pub fn new(numerator: i64, denominator: i64) -> Result<Self, ModError> {
        if denominator == 0 {
            return Err(ModError::BadRational(format!("{numerator}/0")));
        }
        let g = numerator.gcd(&denominator);
        let (mut n, mut d) = (numerator / g, denominator / g);
        if d < 0 {
            n = -n;
            d = -d;
        }
        Ok(RationalParam { numerator: n, denominator: d as u64 })
    }

    pub fn integer(n: i64) -> Self {
        RationalParam { numerator: n, denominator: 1 }
    }

    pub fn numerator(&self) -> i64 {
        self.numerator
    }

    pub fn denominator(&self) -> u64 {
        self.denominator
    }

    pub fn is_integer(&self) -> bool {
        self.denominator == 1
    }

    /// True when the rational embeds into the p-adic integers.
    pub fn admissible_for(&self, p: u64) -> bool {
        !self.denominator.is_multiple_of(p)
    }
}

impl fmt::Display for RationalParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denominator == 1 {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "{}/{}", self.numerator, self.denominator)
        }
    }
}

impl FromStr for RationalParam {
    type Err = ModError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ModError::BadRational(s.to_string());
        let s = s.trim();
        match s.split_once('/') {
            Some((a, b)) => {
                let a: i64 = a.trim().parse().map_err(|_| bad())?;
                let b: i64 = b.trim().parse().map_err(|_| bad())?;
                RationalParam::new(a, b)
            }
            None => s.parse().map(RationalParam::integer).map_err(|_| bad()),
        }
    }
}

/// Divides a p-divisible residue mod `p^{e+1}` by `p`, landing in `Z/p^e`.
pub fn exact_div_p(value: Residue) -> Result<Residue, ModError> {
    let ring = value.ring();
    if ring.exponent() < 2 {
        return Err(ModError::NoLowerRing);
    }
    if !value.value().is_multiple_of(ring.p()) {
        return Err(ModError::NotDivisibleByP { value: value.value(), p: ring.p() });
    }
    let lower = ring.with_exponent(ring.exponent() - 1)?;
    Ok(lower.elem(value.value() / ring.p()))
}

/// Jacobi symbol `(a/n)` for odd positive `n`.
pub fn jacobi(a: i128, n: i128) -> Result<i8, ModError> {
    if n <= 0 || n % 2 == 0 {
        return Err(ModError::BadJacobiModulus(n));
    }
    let mut a = a.rem_euclid(n);
    let mut n = n;
    let mut sign = 1i8;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                sign = -sign;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        a %= n;
    }
    Ok(if n == 1 { sign } else { 0 })
}

/// Fermat quotient `(a^{p-1} - 1)/p` modulo `p^e`, computed in `Z/p^{e+1}`.
pub fn fermat_quotient(base: i64, p: u64, e: u32) -> Result<Residue, ModError> {
    let target = PrimePowerRing::new(p, e)?;
    if e >= MAX_EXPONENT {
        return Err(ModError::ExponentOutOfRange(e));
    }
    let wide = target.companion()?;
    let a = wide.from_i64(base);
    if a.value() % p == 0 {
        return Err(ModError::NotInvertible { value: a.value(), modulus: p });
    }
    exact_div_p(a.pow(p - 1) - wide.one())
}

/// `q_p(2)` modulo `p^e`, `e <= 3`.
pub fn fermat_quotient2(p: u64, e: u32) -> Result<Residue, ModError> {
    fermat_quotient(2, p, e)
}

/// `H_n` (order 1) or `H_n^{(2)}` (order 2) for `n = 0..=n_max`, `n_max < p`.
pub fn harmonic_table(ring: PrimePowerRing, n_max: usize, order: u8) -> Result<SequenceTable, ModError> {
    let inverses = ring.inverse_table(n_max)?;
    let mut values = Vec::with_capacity(n_max + 1);
    let mut acc = ring.zero();
    values.push(acc);
    for inv in &inverses[1..] {
        acc += if order >= 2 { *inv * *inv } else { *inv };
        values.push(acc);
    }
    Ok(SequenceTable::new(ring, SequenceKind::Harmonic { order: order.min(2) }, values))
}

/// Exact `v_p(n)` for nonzero `n`; `None` for zero.
pub fn valuation(n: &BigInt, p: u64) -> Option<u32> {
    if n == &BigInt::from(0) {
        return None;
    }
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if r != BigInt::from(0) {
            return Some(v);
        }
        n = q;
        v += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ring(p: u64, e: u32) -> PrimePowerRing {
        PrimePowerRing::new(p, e).unwrap()
    }

    #[test]
    fn ring_construction() {
        assert_eq!(ring(5, 2).modulus(), 25);
        assert_eq!(ring(7, 3).modulus(), 343);
        assert_eq!(PrimePowerRing::new(4, 2), Err(ModError::NotPrime(4)));
        assert_eq!(PrimePowerRing::new(2, 1), Err(ModError::NotPrime(2)));
        assert_eq!(PrimePowerRing::new(5, 0), Err(ModError::ExponentOutOfRange(0)));
        assert_eq!(PrimePowerRing::new(5, 5), Err(ModError::ExponentOutOfRange(5)));
        assert!(matches!(
            PrimePowerRing::new(4_294_967_311, 4),
            Err(ModError::ModulusTooLarge { .. })
        ));
    }

    #[test]
    fn basic_arithmetic() {
        let r = ring(5, 2);
        assert_eq!((r.elem(13) * r.elem(2)).value(), 1);
        assert_eq!((r.elem(24) + r.elem(1)).value(), 0);
        assert_eq!((r.elem(3) - r.elem(4)).value(), 24);
        assert_eq!((-r.elem(0)).value(), 0);
        assert_eq!(ring(7, 3).elem(2).pow(9).value(), 169);
        assert_eq!(r.elem(7).apply(ArithOp::Pow(0)).unwrap().value(), 1);
    }

    #[test]
    fn mismatched_rings_rejected() {
        let a = ring(5, 2).elem(3);
        let b = ring(5, 3).elem(3);
        assert!(matches!(a.apply(ArithOp::Add(b)), Err(ModError::RingMismatch { .. })));
        assert!(matches!(a.apply(ArithOp::Mul(b)), Err(ModError::RingMismatch { .. })));
    }

    #[test]
    fn inverses() {
        let r = ring(5, 2);
        assert_eq!(r.elem(3).inv().unwrap().value(), 17);
        assert_eq!(r.elem(1).inv().unwrap().value(), 1);
        assert_eq!(
            r.elem(5).inv(),
            Err(ModError::NotInvertible { value: 5, modulus: 25 })
        );
    }

    #[test]
    fn batch_inverse_table_matches_euclid() {
        for (p, e) in [(5, 1), (13, 4), (97, 3)] {
            let r = ring(p, e);
            let table = r.inverse_table(p as usize - 1).unwrap();
            for j in 1..p {
                assert_eq!(table[j as usize], r.elem(j).inv().unwrap());
            }
        }
        assert!(ring(5, 1).inverse_table(5).is_err());
    }

    #[test]
    fn rationals() {
        let r = ring(5, 2);
        let half: RationalParam = "-1/2".parse().unwrap();
        assert_eq!(r.from_rational(&half).unwrap().value(), 12);
        assert_eq!(r.from_rational(&"0/7".parse().unwrap()).unwrap().value(), 0);
        assert!(r.from_rational(&"2/5".parse().unwrap()).is_err());
        assert_eq!("6/-4".parse::<RationalParam>().unwrap().to_string(), "-3/2");
        assert!("1/0".parse::<RationalParam>().is_err());
        assert!("x".parse::<RationalParam>().is_err());
    }

    #[test]
    fn divide_by_p() {
        let r = ring(5, 3);
        assert_eq!(exact_div_p(r.elem(15)).unwrap(), ring(5, 2).elem(3));
        assert_eq!(exact_div_p(r.elem(0)).unwrap(), ring(5, 2).elem(0));
        assert_eq!(exact_div_p(r.elem(7)), Err(ModError::NotDivisibleByP { value: 7, p: 5 }));
        assert_eq!(exact_div_p(ring(5, 1).elem(0)), Err(ModError::NoLowerRing));
    }

    #[test]
    fn jacobi_values() {
        assert_eq!(jacobi(5, 3), Ok(-1));
        assert_eq!(jacobi(7, 3), Ok(1));
        assert_eq!(jacobi(0, 3), Ok(0));
        assert_eq!(jacobi(2, 15), Ok(1));
        assert_eq!(jacobi(-1, 7), Ok(-1));
        assert!(jacobi(3, 4).is_err());
        assert!(jacobi(3, -3).is_err());
    }

    #[test]
    fn fermat_quotients() {
        assert_eq!(fermat_quotient2(5, 1).unwrap().value(), 3);
        assert_eq!(fermat_quotient2(7, 1).unwrap().value(), 2);
        assert_eq!(fermat_quotient2(5, 2).unwrap().value(), 3);
        // q_11(2) = 1023 / 11 = 93
        assert_eq!(fermat_quotient2(11, 2).unwrap().value(), 93);
        assert!(fermat_quotient2(5, 4).is_err());
    }

    #[test]
    fn harmonic_values() {
        let t = harmonic_table(ring(5, 2), 4, 1).unwrap();
        assert_eq!(t.get(0).value(), 0);
        assert_eq!(t.get(2).value(), 14);
        let t2 = harmonic_table(ring(7, 1), 6, 2).unwrap();
        assert_eq!(t2.get(6).value(), 0);
        assert!(harmonic_table(ring(7, 1), 7, 1).is_err());
    }

    #[test]
    fn wolstenholme_and_lehmer() {
        for p in crate::primes::primes_in_range(5, 97) {
            let r2 = ring(p, 2);
            let h = harmonic_table(r2, p as usize - 1, 1).unwrap();
            assert!(h.get(p as usize - 1).is_zero(), "H_(p-1) mod p^2, p = {p}");
            let h2 = harmonic_table(ring(p, 1), p as usize - 1, 2).unwrap();
            assert!(h2.get(p as usize - 1).is_zero(), "H2_(p-1) mod p, p = {p}");
            let q = fermat_quotient2(p, 2).unwrap();
            let pr = r2.elem(p);
            let lehmer = q.scale(-2) + pr * q * q;
            assert_eq!(h.get((p as usize - 1) / 2), lehmer, "p = {p}");
        }
    }

    #[test]
    fn jacobi_matches_euler_criterion() {
        for p in crate::primes::primes_in_range(3, 97) {
            let r = ring(p, 1);
            for a in 1..p {
                let euler = r.elem(a).pow((p - 1) / 2);
                let j = jacobi(a as i128, p as i128).unwrap();
                assert_eq!(euler, r.from_i64(j as i64), "a = {a}, p = {p}");
            }
        }
    }

    #[test]
    fn valuations() {
        assert_eq!(valuation(&BigInt::from(9), 3), Some(2));
        assert_eq!(valuation(&BigInt::from(-54), 3), Some(3));
        assert_eq!(valuation(&BigInt::from(0), 3), None);
    }

    fn ring_strategy() -> impl Strategy<Value = PrimePowerRing> {
        (prop::sample::select(vec![5u64, 7, 11, 13]), 1u32..=4).prop_map(|(p, e)| ring(p, e))
    }

    proptest! {
        #[test]
        fn inverse_roundtrip(r in ring_strategy(), a in any::<u64>()) {
            let x = r.elem(a);
            prop_assume!(x.value() % r.p() != 0);
            prop_assert_eq!((x * x.inv().unwrap()).value(), 1);
        }

        #[test]
        fn rational_times_denominator(r in ring_strategy(), a in -1000i64..1000, b in 1i64..1000) {
            let q = RationalParam::new(a, b).unwrap();
            prop_assume!(q.admissible_for(r.p()));
            let x = r.from_rational(&q).unwrap();
            prop_assert_eq!(x * r.from_i64(q.denominator() as i64), r.from_i64(q.numerator()));
        }

        #[test]
        fn div_p_inverts_mul_p(p in prop::sample::select(vec![5u64, 7, 11, 13]), e in 1u32..=3, x in any::<u64>()) {
            let low = ring(p, e);
            let high = low.companion().unwrap();
            let px = high.elem(x) * high.elem(p);
            prop_assert_eq!(exact_div_p(px).unwrap(), low.elem(x));
        }
    }
}
