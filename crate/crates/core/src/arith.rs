//! Integer factorization, p-adic valuations and radicals.
//!
//! Factorization is delegated to `num-prime`: trial division followed by
//! Pollard rho, with BPSW-style primality checks on the cofactors. Operands
//! below 2^128 take the machine-word paths.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

/// Prime decomposition of the absolute value of a nonzero integer.
///
/// Primes are strictly increasing and every exponent is at least one. The
/// factorization of a unit is empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct PrimeFactorization {
    factors: Vec<(BigInt, u32)>,
}

impl PrimeFactorization {
    pub fn factors(&self) -> &[(BigInt, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = &BigInt> {
        self.factors.iter().map(|(p, _)| p)
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Exponent of `p`, zero when absent.
    pub fn exponent(&self, p: &BigInt) -> u32 {
        self.factors
            .binary_search_by(|(q, _)| q.cmp(p))
            .map(|i| self.factors[i].1)
            .unwrap_or(0)
    }

    pub fn product(&self) -> BigInt {
        self.factors
            .iter()
            .fold(BigInt::one(), |acc, (p, e)| acc * num_traits::pow(p.clone(), *e as usize))
    }

    /// Product of the distinct primes.
    pub fn radical(&self) -> BigInt {
        self.factors.iter().fold(BigInt::one(), |acc, (p, _)| acc * p)
    }

    fn from_map<T: Into<BigInt>>(map: BTreeMap<T, usize>) -> Self {
        let factors = map.into_iter().map(|(p, e)| (p.into(), e as u32)).collect();
        PrimeFactorization { factors }
    }
}

impl fmt::Display for PrimeFactorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (i, (p, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " * ")?;
            }
            if *e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Exact factorization of `|n|`.
pub fn factorize(n: &BigInt) -> Result<PrimeFactorization> {
    if n.is_zero() {
        return Err(Error::ZeroArgument);
    }
    let m = n.magnitude();
    if let Some(small) = m.to_u128() {
        if small == 1 {
            return Ok(PrimeFactorization::default());
        }
        return Ok(PrimeFactorization::from_map(num_prime::nt_funcs::factorize128(small)));
    }
    let map: BTreeMap<BigUint, usize> = num_prime::nt_funcs::factorize(m.clone());
    Ok(PrimeFactorization {
        factors: map
            .into_iter()
            .map(|(p, e)| (BigInt::from_biguint(Sign::Plus, p), e as u32))
            .collect(),
    })
}

/// Factorization of a machine-word integer as `(prime, exponent)` pairs.
pub fn factorize_u64(n: u64) -> Vec<(u64, u32)> {
    if n <= 1 {
        return Vec::new();
    }
    num_prime::nt_funcs::factorize64(n)
        .into_iter()
        .map(|(p, e)| (p, e as u32))
        .collect()
}

pub fn is_prime(n: &BigInt) -> bool {
    if n.sign() != Sign::Plus {
        return false;
    }
    match n.to_u64() {
        Some(small) => num_prime::nt_funcs::is_prime64(small),
        None => num_prime::nt_funcs::is_prime(n.magnitude(), None).probably(),
    }
}

pub fn is_prime_u64(n: u64) -> bool {
    num_prime::nt_funcs::is_prime64(n)
}

/// Largest `m` with `p^m | n`.
pub fn valuation(n: &BigInt, p: &BigInt) -> Result<u32> {
    if n.is_zero() {
        return Err(Error::ZeroArgument);
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    Ok(valuation_unchecked(n, p))
}

/// Valuation without the primality and zero checks. `n` must be nonzero and
/// `p > 1`.
pub(crate) fn valuation_unchecked(n: &BigInt, p: &BigInt) -> u32 {
    debug_assert!(!n.is_zero());
    if p == &BigInt::from(2) {
        return n.magnitude().trailing_zeros().unwrap_or(0) as u32;
    }
    let mut m = n.magnitude().clone();
    let p = p.magnitude();
    let mut v = 0;
    loop {
        let (q, r) = m.div_rem(p);
        if !r.is_zero() {
            return v;
        }
        m = q;
        v += 1;
    }
}

/// Valuation of `n` at `p`, splitting off the unit part: `n = p^v * u`.
pub(crate) fn split_valuation(n: &BigInt, p: &BigInt) -> (u32, BigInt) {
    let mut u = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = u.div_rem(p);
        if !r.is_zero() {
            return (v, u);
        }
        u = q;
        v += 1;
    }
}

/// Product of the distinct primes dividing `n`; `radical(±1) = 1`.
pub fn radical(n: &BigInt) -> Result<BigInt> {
    Ok(factorize(n)?.radical())
}

pub fn radical_u64(n: u64) -> u64 {
    factorize_u64(n).iter().map(|(p, _)| p).product()
}

/// Natural logarithm of a positive big integer, accurate to double precision.
pub fn ln_big(n: &BigInt) -> f64 {
    debug_assert!(n.is_positive());
    match n.to_f64() {
        Some(f) if f.is_finite() => f.ln(),
        _ => {
            let bits = n.bits();
            let shift = bits.saturating_sub(64);
            let top: BigInt = n >> shift;
            top.to_f64().unwrap_or(f64::MAX).ln() + shift as f64 * std::f64::consts::LN_2
        }
    }
}

/// Smallest-prime-factor table for `0..=limit`.
///
/// Backs the batch factorizations of the scanning paths: every value below
/// the limit factors in `O(log n)` table lookups.
#[derive(Debug, Clone)]
pub struct SpfSieve {
    spf: Vec<u32>,
}

impl SpfSieve {
    pub fn new(limit: usize) -> Self {
        let mut spf = vec![0u32; limit + 1];
        for i in 2..=limit {
            if spf[i] == 0 {
                spf[i] = i as u32;
                let mut j = i.saturating_mul(i);
                while j <= limit {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                    j += i;
                }
            }
        }
        SpfSieve { spf }
    }

    pub fn limit(&self) -> usize {
        self.spf.len() - 1
    }

    /// Factorization of `n` as `(prime, exponent)` pairs, increasing primes.
    /// Panics if `n` exceeds the table.
    pub fn factor(&self, mut n: usize) -> impl Iterator<Item = (u32, u32)> + '_ {
        std::iter::from_fn(move || {
            if n <= 1 {
                return None;
            }
            let p = self.spf[n];
            let mut e = 0;
            while n % p as usize == 0 {
                n /= p as usize;
                e += 1;
            }
            Some((p, e))
        })
    }

    pub fn radical(&self, n: usize) -> u64 {
        self.factor(n).map(|(p, _)| p as u64).product()
    }
}
