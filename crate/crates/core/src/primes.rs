//! Primality, prime enumeration and `lo..hi` range parsing.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RangeError {
    #[error("malformed range `{0}`, expected lo..hi")]
    Malformed(String),
    #[error("empty range {0}..{1}")]
    Empty(u64, u64),
    #[error("upper bound {0} exceeds the sieve limit {SIEVE_LIMIT}")]
    TooLarge(u64),
}

pub const SIEVE_LIMIT: u64 = 10_000_000;

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for the full `u64` range.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primes in `[lo, hi]` by a sieve of Eratosthenes.
pub fn primes_in_range(lo: u64, hi: u64) -> Vec<u64> {
    if hi < 2 || lo > hi {
        return Vec::new();
    }
    let n = hi as usize;
    let mut composite = vec![false; n + 1];
    let mut i = 2;
    while i * i <= n {
        if !composite[i] {
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
        i += 1;
    }
    (lo.max(2) as usize..=n).filter(|&k| !composite[k]).map(|k| k as u64).collect()
}

/// Inclusive integer range written `lo..hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeRange {
    pub lo: u64,
    pub hi: u64,
}

impl PrimeRange {
    pub fn new(lo: u64, hi: u64) -> Self {
        PrimeRange { lo, hi }
    }

    pub fn primes(&self) -> Vec<u64> {
        primes_in_range(self.lo, self.hi)
    }
}

impl fmt::Display for PrimeRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.lo, self.hi)
    }
}

impl FromStr for PrimeRange {
    type Err = RangeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let malformed = || RangeError::Malformed(s.to_string());
        let (lo, hi) = s.trim().split_once("..").ok_or_else(malformed)?;
        let lo: u64 = lo.trim().parse().map_err(|_| malformed())?;
        let hi: u64 = hi.trim().parse().map_err(|_| malformed())?;
        if lo > hi {
            return Err(RangeError::Empty(lo, hi));
        }
        if hi > SIEVE_LIMIT {
            return Err(RangeError::TooLarge(hi));
        }
        Ok(PrimeRange { lo, hi })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_primes() {
        assert_eq!(primes_in_range(1, 30), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert_eq!(primes_in_range(4, 4), Vec::<u64>::new());
        assert_eq!(primes_in_range(5, 5), vec![5]);
        assert!(primes_in_range(10, 3).is_empty());
    }

    #[test]
    fn miller_rabin_agrees_with_sieve() {
        let sieve = primes_in_range(0, 20_000);
        let mr: Vec<u64> = (0..=20_000).filter(|&n| is_prime(n)).collect();
        assert_eq!(sieve, mr);
    }

    #[test]
    fn large_primality() {
        assert!(is_prime(4_294_967_311));
        assert!(is_prime(18_446_744_073_709_551_557));
        // strong pseudoprime to bases 2, 3, 5, 7
        assert!(!is_prime(3_215_031_751));
        assert!(!is_prime(4_294_967_297));
    }

    #[test]
    fn parse_ranges() {
        assert_eq!("5..97".parse::<PrimeRange>(), Ok(PrimeRange::new(5, 97)));
        assert_eq!(" 4..4 ".parse::<PrimeRange>(), Ok(PrimeRange::new(4, 4)));
        assert!("5-97".parse::<PrimeRange>().is_err());
        assert!("9..5".parse::<PrimeRange>().is_err());
        assert!("a..5".parse::<PrimeRange>().is_err());
        assert!("5..100000000".parse::<PrimeRange>().is_err());
    }
}
