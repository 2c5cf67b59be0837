//! Precomputed number-theoretic tables: smallest prime factors, Möbius
//! values, squarefree flags, and the prime list up to a limit.
//!
//! Tables are built once with a linear sieve and never mutated, so they can
//! be shared freely across threads.

use crate::bitmap::Bitmap;
use crate::error::{Error, Result};

/// Default cap on table size (number of elements).
pub const DEFAULT_MEMORY_CEILING: u64 = 100_000_000;

#[derive(Debug)]
pub struct SieveTables {
    limit: u64,
    /// spf[n] = smallest prime factor of n, for 2 <= n <= limit; 0 below 2.
    spf: Vec<u32>,
    /// mu[n] in {-1, 0, +1}, for 1 <= n <= limit.
    mu: Vec<i8>,
    squarefree: Bitmap,
    primes: Vec<u64>,
}

/// Builds all tables up to `limit` with the default memory ceiling.
pub fn build_sieve(limit: u64) -> Result<SieveTables> {
    build_sieve_with_ceiling(limit, DEFAULT_MEMORY_CEILING)
}

/// Builds all tables up to `limit`, refusing limits above `ceiling`.
///
/// Runs in O(limit): every composite is visited exactly once, through its
/// smallest prime factor.
pub fn build_sieve_with_ceiling(limit: u64, ceiling: u64) -> Result<SieveTables> {
    if limit < 2 || limit > ceiling {
        return Err(Error::Capacity {
            what: "sieve tables",
            requested: limit,
            ceiling,
        });
    }
    let n = limit as usize;
    let mut spf = vec![0u32; n + 1];
    let mut mu = vec![0i8; n + 1];
    let mut primes: Vec<u64> = Vec::new();
    mu[1] = 1;
    for i in 2..=n {
        if spf[i] == 0 {
            spf[i] = i as u32;
            mu[i] = -1;
            primes.push(i as u64);
        }
        let spf_i = spf[i] as usize;
        for &p in &primes {
            let p = p as usize;
            if p > spf_i || i * p > n {
                break;
            }
            spf[i * p] = p as u32;
            // p = spf(i*p); i*p is squarefree iff p does not divide i.
            mu[i * p] = if p == spf_i { 0 } else { -mu[i] };
        }
    }
    let mut squarefree = Bitmap::new(n + 1);
    for (i, &m) in mu.iter().enumerate().skip(1) {
        if m != 0 {
            squarefree.set(i);
        }
    }
    Ok(SieveTables {
        limit,
        spf,
        mu,
        squarefree,
        primes,
    })
}

impl SieveTables {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Möbius value mu(n). Panics if n is 0 or above the limit.
    #[inline]
    pub fn mu(&self, n: u64) -> i64 {
        self.mu[n as usize] as i64
    }

    /// Smallest prime factor of n >= 2.
    #[inline]
    pub fn spf(&self, n: u64) -> u64 {
        debug_assert!(n >= 2);
        self.spf[n as usize] as u64
    }

    #[inline]
    pub fn is_squarefree(&self, n: u64) -> bool {
        self.squarefree.get(n as usize)
    }

    #[inline]
    pub fn is_prime(&self, n: u64) -> bool {
        n >= 2 && self.spf[n as usize] as u64 == n
    }

    /// All primes up to the limit, ascending.
    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Prime factorization of n as (prime, exponent) pairs, ascending in p.
    pub fn factor(&self, n: u64) -> Vec<(u64, u32)> {
        debug_assert!(n >= 1 && n <= self.limit);
        let mut out = Vec::new();
        let mut m = n;
        while m > 1 {
            let p = self.spf(m);
            let mut e = 0u32;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            out.push((p, e));
        }
        out
    }

    /// The primes p <= bound with p ≡ residue (mod modulus), ascending.
    pub fn primes_in_progression(
        &self,
        modulus: u64,
        residue: u64,
        bound: u64,
    ) -> Result<Vec<u64>> {
        if modulus == 0 || residue >= modulus {
            return Err(Error::Argument(format!(
                "residue {residue} not in [0, {modulus})"
            )));
        }
        if bound > self.limit {
            return Err(Error::Range {
                what: "progression bound",
                value: bound,
                limit: self.limit,
            });
        }
        Ok(self
            .primes
            .iter()
            .copied()
            .take_while(|&p| p <= bound)
            .filter(|&p| p % modulus == residue)
            .collect())
    }
}
