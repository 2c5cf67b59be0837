//! Arithmetic functions tabulated on [1, N] and the transforms that define
//! Möbius pairs.
//!
//! Values are exact i64; support detection (f(n) != 0) relies on exact
//! cancellation, so overflow is always detected and reported, never wrapped.
//! The direction convention is fixed here once: `dirichlet_transform` sums g
//! over the divisors of n (f = ĝ), `moebius_transform` recovers g.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::sieve::SieveTables;

/// Seed for the pair-invariant spot check in [`make_pair`].
const PAIR_CHECK_SEED: u64 = 0x6d6f_6269;
const PAIR_CHECK_SAMPLES: usize = 1000;

/// Dense tabulation of an arithmetic function on [1, N], exact integer values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArithFunction {
    limit: u64,
    /// values[n] for 1 <= n <= limit; slot 0 is unused.
    values: Vec<i64>,
    label: String,
}

impl ArithFunction {
    /// Wraps a 1-indexed value table; `values[0]` is the value at n = 1.
    pub fn from_values(label: impl Into<String>, values: Vec<i64>) -> Self {
        assert!(!values.is_empty(), "empty value table");
        let limit = values.len() as u64;
        let mut padded = Vec::with_capacity(values.len() + 1);
        padded.push(0);
        padded.extend(values);
        ArithFunction {
            limit,
            values: padded,
            label: label.into(),
        }
    }

    pub fn constant(limit: u64, value: i64, label: impl Into<String>) -> Self {
        Self::from_values(label, vec![value; limit as usize])
    }

    /// 1 on the listed points, 0 elsewhere.
    pub fn indicator(limit: u64, points: &[u64], label: impl Into<String>) -> Self {
        let mut values = vec![0i64; limit as usize];
        for &n in points {
            assert!(n >= 1 && n <= limit, "indicator point {n} out of range");
            values[n as usize - 1] = 1;
        }
        Self::from_values(label, values)
    }

    pub fn from_fn(limit: u64, f: impl FnMut(u64) -> i64, label: impl Into<String>) -> Self {
        Self::from_values(label, (1..=limit).map(f).collect())
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn set_label(&mut self, label: impl Into<String>) {
        self.label = label.into();
    }

    /// Value at n; panics if n is 0 or above the limit.
    #[inline]
    pub fn get(&self, n: u64) -> i64 {
        self.values[n as usize]
    }

    /// (n, value) pairs for n = 1..=limit.
    pub fn iter(&self) -> impl Iterator<Item = (u64, i64)> + '_ {
        self.values[1..]
            .iter()
            .enumerate()
            .map(|(i, &v)| (i as u64 + 1, v))
    }

    /// Ascending list of n with f(n) != 0.
    pub fn support(&self) -> Vec<u64> {
        self.iter()
            .filter(|&(_, v)| v != 0)
            .map(|(n, _)| n)
            .collect()
    }

    /// Copy restricted to [1, limit]. Panics if limit is 0 or above N.
    pub fn truncate(&self, limit: u64) -> ArithFunction {
        assert!(limit >= 1 && limit <= self.limit);
        ArithFunction::from_values(self.label.clone(), self.values[1..=limit as usize].to_vec())
    }
}

/// Prime-power table of a multiplicative function: the value at n is the
/// product of `value_at(p, e)` over the prime powers p^e exactly dividing n.
pub struct MultiplicativeSpec {
    label: String,
    completely_multiplicative: bool,
    rule: Box<dyn Fn(u64, u32) -> i64 + Send + Sync>,
}

impl MultiplicativeSpec {
    /// General prime-power rule. The implied value at 1 is always 1.
    pub fn new(
        label: impl Into<String>,
        rule: impl Fn(u64, u32) -> i64 + Send + Sync + 'static,
    ) -> Self {
        MultiplicativeSpec {
            label: label.into(),
            completely_multiplicative: false,
            rule: Box::new(rule),
        }
    }

    /// Completely multiplicative: the value at (p, e) is the value at p
    /// raised to the e-th power.
    pub fn completely_multiplicative(
        label: impl Into<String>,
        at_prime: impl Fn(u64) -> i64 + Send + Sync + 'static,
    ) -> Self {
        MultiplicativeSpec {
            label: label.into(),
            completely_multiplicative: true,
            rule: Box::new(move |p, _| at_prime(p)),
        }
    }

    /// The constant function 1 (value 1 at every prime power).
    pub fn one() -> Self {
        Self::new("one", |_, _| 1)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn is_completely_multiplicative(&self) -> bool {
        self.completely_multiplicative
    }

    /// Value at the prime power p^e, e >= 1.
    pub fn value_at(&self, p: u64, e: u32) -> Result<i64> {
        debug_assert!(e >= 1);
        if self.completely_multiplicative {
            (self.rule)(p, 1).checked_pow(e).ok_or(Error::Overflow {
                context: "prime power value",
                at: p,
            })
        } else {
            Ok((self.rule)(p, e))
        }
    }
}

impl std::fmt::Debug for MultiplicativeSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MultiplicativeSpec")
            .field("label", &self.label)
            .field("completely_multiplicative", &self.completely_multiplicative)
            .finish_non_exhaustive()
    }
}

/// Tabulates the multiplicative function described by `spec` on [1, limit].
pub fn tabulate_multiplicative(
    spec: &MultiplicativeSpec,
    tables: &SieveTables,
    limit: u64,
) -> Result<ArithFunction> {
    if limit > tables.limit() {
        return Err(Error::Range {
            what: "tabulation limit",
            value: limit,
            limit: tables.limit(),
        });
    }
    let n = limit as usize;
    let mut values = vec![0i64; n + 1];
    values[1] = 1;
    for m in 2..=n {
        let p = tables.spf(m as u64);
        let mut rest = m as u64;
        let mut e = 0u32;
        while rest.is_multiple_of(p) {
            rest /= p;
            e += 1;
        }
        let vp = spec.value_at(p, e)?;
        values[m] = values[rest as usize]
            .checked_mul(vp)
            .ok_or(Error::Overflow {
                context: "multiplicative tabulation",
                at: m as u64,
            })?;
    }
    values.remove(0);
    Ok(ArithFunction::from_values(spec.label(), values))
}

/// f(n) = Σ_{d|n} g(d), by adding g(d) to every multiple of d.
///
/// O(N log N) additions; on overflow the error names the first offending n
/// in this scan order.
pub fn dirichlet_transform(g: &ArithFunction) -> Result<ArithFunction> {
    let n = g.limit() as usize;
    let mut out = vec![0i64; n + 1];
    for d in 1..=n {
        let gd = g.values[d];
        if gd == 0 {
            continue;
        }
        let mut m = d;
        while m <= n {
            out[m] = out[m].checked_add(gd).ok_or(Error::Overflow {
                context: "dirichlet transform",
                at: m as u64,
            })?;
            m += d;
        }
    }
    out.remove(0);
    Ok(ArithFunction::from_values(
        format!("dirichlet({})", g.label()),
        out,
    ))
}

/// g(n) = Σ_{d|n} μ(n/d) f(d), accumulating μ(k)·f(d) at n = k·d.
pub fn moebius_transform(f: &ArithFunction, tables: &SieveTables) -> Result<ArithFunction> {
    if f.limit() > tables.limit() {
        return Err(Error::Range {
            what: "function limit",
            value: f.limit(),
            limit: tables.limit(),
        });
    }
    let n = f.limit() as usize;
    let mut out = vec![0i64; n + 1];
    for d in 1..=n {
        let fd = f.values[d];
        if fd == 0 {
            continue;
        }
        let mut k = 1usize;
        while k * d <= n {
            let m = tables.mu(k as u64);
            if m != 0 {
                let slot = &mut out[k * d];
                *slot = if m > 0 {
                    slot.checked_add(fd)
                } else {
                    slot.checked_sub(fd)
                }
                .ok_or(Error::Overflow {
                    context: "moebius transform",
                    at: (k * d) as u64,
                })?;
            }
            k += 1;
        }
    }
    out.remove(0);
    Ok(ArithFunction::from_values(
        format!("moebius({})", f.label()),
        out,
    ))
}

/// Quadratic-cost cap for [`naive_transform_oracle`].
pub const ORACLE_LIMIT: u64 = 100_000;

/// Same contract as [`dirichlet_transform`], computed by per-n divisor
/// enumeration with trial division up to √n. Independent check path; capped
/// at [`ORACLE_LIMIT`].
pub fn naive_transform_oracle(g: &ArithFunction) -> Result<ArithFunction> {
    if g.limit() > ORACLE_LIMIT {
        return Err(Error::Capacity {
            what: "naive transform oracle",
            requested: g.limit(),
            ceiling: ORACLE_LIMIT,
        });
    }
    let n = g.limit();
    let mut out = Vec::with_capacity(n as usize);
    for m in 1..=n {
        out.push(divisor_sum(g, m)?);
    }
    Ok(ArithFunction::from_values(
        format!("naive_dirichlet({})", g.label()),
        out,
    ))
}

/// Σ_{d|m} g(d) by trial division.
fn divisor_sum(g: &ArithFunction, m: u64) -> Result<i64> {
    let mut sum = 0i64;
    let mut i = 1u64;
    while i * i <= m {
        if m.is_multiple_of(i) {
            sum = sum.checked_add(g.get(i)).ok_or(Error::Overflow {
                context: "divisor sum",
                at: m,
            })?;
            let j = m / i;
            if j != i {
                sum = sum.checked_add(g.get(j)).ok_or(Error::Overflow {
                    context: "divisor sum",
                    at: m,
                })?;
            }
        }
        i += 1;
    }
    Ok(sum)
}

/// f_y(n) = Σ_{d|n, d<=y} g(d). For y >= N this is the full transform.
pub fn truncated_dirichlet(g: &ArithFunction, y: u64) -> Result<ArithFunction> {
    if y == 0 {
        return Err(Error::Argument("truncation bound y must be >= 1".into()));
    }
    let n = g.limit() as usize;
    let cut = (y.min(g.limit())) as usize;
    let mut out = vec![0i64; n + 1];
    for d in 1..=cut {
        let gd = g.values[d];
        if gd == 0 {
            continue;
        }
        let mut m = d;
        while m <= n {
            out[m] = out[m].checked_add(gd).ok_or(Error::Overflow {
                context: "truncated dirichlet transform",
                at: m as u64,
            })?;
            m += d;
        }
    }
    out.remove(0);
    Ok(ArithFunction::from_values(
        format!("dirichlet_{}({})", y, g.label()),
        out,
    ))
}

/// g_y(n) = Σ_{d|n, d<=y} μ(n/d) f(d).
pub fn truncated_moebius(f: &ArithFunction, y: u64, tables: &SieveTables) -> Result<ArithFunction> {
    if y == 0 {
        return Err(Error::Argument("truncation bound y must be >= 1".into()));
    }
    if f.limit() > tables.limit() {
        return Err(Error::Range {
            what: "function limit",
            value: f.limit(),
            limit: tables.limit(),
        });
    }
    let n = f.limit() as usize;
    let cut = (y.min(f.limit())) as usize;
    let mut out = vec![0i64; n + 1];
    for d in 1..=cut {
        let fd = f.values[d];
        if fd == 0 {
            continue;
        }
        let mut k = 1usize;
        while k * d <= n {
            let m = tables.mu(k as u64);
            if m != 0 {
                let slot = &mut out[k * d];
                *slot = if m > 0 {
                    slot.checked_add(fd)
                } else {
                    slot.checked_sub(fd)
                }
                .ok_or(Error::Overflow {
                    context: "truncated moebius transform",
                    at: (k * d) as u64,
                })?;
            }
            k += 1;
        }
    }
    out.remove(0);
    Ok(ArithFunction::from_values(
        format!("moebius_{}({})", y, f.label()),
        out,
    ))
}

/// A pair (f, g) with f the Dirichlet transform of g on a shared range.
#[derive(Debug, Clone)]
pub struct MoebiusPair {
    f: ArithFunction,
    g: ArithFunction,
}

impl MoebiusPair {
    pub fn f(&self) -> &ArithFunction {
        &self.f
    }

    pub fn g(&self) -> &ArithFunction {
        &self.g
    }

    pub fn limit(&self) -> u64 {
        self.g.limit()
    }

    /// Re-checks f(n) = Σ_{d|n} g(d) on `samples` seeded random indices,
    /// via trial-division divisor sums. Returns false on any mismatch.
    pub fn verify_sample(&self, samples: usize, seed: u64) -> bool {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = self.limit();
        for _ in 0..samples {
            let m = rng.gen_range(1..=n);
            match divisor_sum(&self.g, m) {
                Ok(s) if s == self.f.get(m) => {}
                _ => return false,
            }
        }
        true
    }
}

/// Builds the pair (ĝ, g). The pair invariant is spot-checked on 1000
/// seeded sample indices against an independent divisor enumeration.
pub fn make_pair(g: ArithFunction) -> Result<MoebiusPair> {
    let f = dirichlet_transform(&g)?;
    let pair = MoebiusPair { f, g };
    assert!(
        pair.verify_sample(PAIR_CHECK_SAMPLES, PAIR_CHECK_SEED),
        "pair invariant violated at construction"
    );
    Ok(pair)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sieve::build_sieve;

    fn mu_function(tables: &SieveTables, limit: u64) -> ArithFunction {
        ArithFunction::from_fn(limit, |n| tables.mu(n), "mu")
    }

    #[test]
    fn dirichlet_of_delta_is_one() {
        let g = ArithFunction::indicator(50, &[1], "delta");
        let f = dirichlet_transform(&g).unwrap();
        assert!(f.iter().all(|(_, v)| v == 1));
    }

    #[test]
    fn dirichlet_of_one_counts_divisors() {
        let g = ArithFunction::constant(50, 1, "one");
        let f = dirichlet_transform(&g).unwrap();
        assert_eq!(f.get(6), 4);
        assert_eq!(f.get(12), 6);
        assert_eq!(f.get(49), 3);
    }

    #[test]
    fn dirichlet_of_mu_is_delta() {
        let tables = build_sieve(200).unwrap();
        let g = mu_function(&tables, 200);
        let f = dirichlet_transform(&g).unwrap();
        assert_eq!(f.get(1), 1);
        assert!((2..=200).all(|n| f.get(n) == 0));
    }

    #[test]
    fn moebius_of_one_is_delta() {
        let tables = build_sieve(200).unwrap();
        let f = ArithFunction::constant(200, 1, "one");
        let g = moebius_transform(&f, &tables).unwrap();
        assert_eq!(g.get(1), 1);
        assert!((2..=200).all(|n| g.get(n) == 0));
    }

    #[test]
    fn moebius_of_identity_is_phi() {
        let tables = build_sieve(100).unwrap();
        let f = ArithFunction::from_fn(100, |n| n as i64, "id");
        let g = moebius_transform(&f, &tables).unwrap();
        assert_eq!(g.get(6), 2);
        assert_eq!(g.get(10), 4);
        assert_eq!(g.get(1), 1);
    }

    #[test]
    fn round_trip_recovers_input() {
        let tables = build_sieve(3000).unwrap();
        let g = ArithFunction::from_fn(3000, |n| (n as i64 * 37 % 11) - 5, "mix");
        let f = dirichlet_transform(&g).unwrap();
        let back = moebius_transform(&f, &tables).unwrap();
        assert!(g.iter().zip(back.iter()).all(|((_, a), (_, b))| a == b));
    }

    #[test]
    fn oracle_examples() {
        let g = ArithFunction::constant(20, 1, "one");
        let f = naive_transform_oracle(&g).unwrap();
        assert_eq!(f.get(12), 6);
        let g2 = ArithFunction::indicator(20, &[2], "delta2");
        let f2 = naive_transform_oracle(&g2).unwrap();
        assert_eq!(f2.get(10), 1);
        assert_eq!(f2.get(5), 0);
    }

    #[test]
    fn oracle_guards_large_limits() {
        let g = ArithFunction::constant(ORACLE_LIMIT + 1, 1, "one");
        assert!(matches!(
            naive_transform_oracle(&g),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn truncated_dirichlet_examples() {
        let g = ArithFunction::constant(40, 1, "one");
        let f2 = truncated_dirichlet(&g, 2).unwrap();
        assert_eq!(f2.get(6), 2);
        let full = truncated_dirichlet(&g, 40).unwrap();
        let direct = dirichlet_transform(&g).unwrap();
        assert!(full
            .iter()
            .zip(direct.iter())
            .all(|((_, a), (_, b))| a == b));

        // squares up to y = 4: divisors 1 and 4 of 36 count, 9 does not
        let squares = ArithFunction::indicator(40, &[1, 4, 9, 16, 25, 36], "squares");
        let fy = truncated_dirichlet(&squares, 4).unwrap();
        assert_eq!(fy.get(36), 2);
    }

    #[test]
    fn truncated_moebius_examples() {
        let tables = build_sieve(40).unwrap();
        let f = ArithFunction::constant(40, 1, "one");
        let g1 = truncated_moebius(&f, 1, &tables).unwrap();
        assert!((1..=40).all(|n| g1.get(n) == tables.mu(n)));
        let g2 = truncated_moebius(&f, 2, &tables).unwrap();
        assert_eq!(g2.get(4), -1);
        let full = truncated_moebius(&f, 40, &tables).unwrap();
        let direct = moebius_transform(&f, &tables).unwrap();
        assert!(full
            .iter()
            .zip(direct.iter())
            .all(|((_, a), (_, b))| a == b));
    }

    #[test]
    fn tabulate_one_is_constant_one() {
        let tables = build_sieve(100).unwrap();
        let g = tabulate_multiplicative(&MultiplicativeSpec::one(), &tables, 100).unwrap();
        assert!(g.iter().all(|(_, v)| v == 1));
    }

    #[test]
    fn tabulate_support_pruning_rule() {
        // -1 at p in {2} with e = 1, 0 at higher powers of 2, +1 elsewhere.
        let tables = build_sieve(100).unwrap();
        let spec = MultiplicativeSpec::new("pruned", |p, e| {
            if p == 2 {
                if e == 1 {
                    -1
                } else {
                    0
                }
            } else {
                1
            }
        });
        let g = tabulate_multiplicative(&spec, &tables, 100).unwrap();
        assert_eq!(g.get(2), -1);
        assert_eq!(g.get(4), 0);
        assert_eq!(g.get(8), 0);
        assert_eq!(g.get(6), -1);
        assert_eq!(g.get(15), 1);
    }

    #[test]
    fn tabulate_completely_multiplicative_powers() {
        let tables = build_sieve(100).unwrap();
        let spec =
            MultiplicativeSpec::completely_multiplicative("cm", |p| if p == 2 { -1 } else { 1 });
        let g = tabulate_multiplicative(&spec, &tables, 100).unwrap();
        assert_eq!(g.get(8), -1);
        assert_eq!(g.get(4), 1);
        assert_eq!(g.get(24), -1);
    }

    #[test]
    fn tabulation_overflow_is_detected() {
        let tables = build_sieve(100).unwrap();
        let spec = MultiplicativeSpec::new("huge", |_, _| i64::MAX);
        let err = tabulate_multiplicative(&spec, &tables, 100).unwrap_err();
        assert!(matches!(err, Error::Overflow { .. }));
    }

    #[test]
    fn transform_overflow_is_detected() {
        let g = ArithFunction::constant(10, i64::MAX / 2, "big");
        assert!(matches!(
            dirichlet_transform(&g),
            Err(Error::Overflow { .. })
        ));
    }

    #[test]
    fn make_pair_examples() {
        let g = ArithFunction::indicator(500, &[1], "delta");
        let pair = make_pair(g).unwrap();
        assert!(pair.f().iter().all(|(_, v)| v == 1));

        let tables = build_sieve(500).unwrap();
        let mu = mu_function(&tables, 500);
        let pair = make_pair(mu).unwrap();
        assert_eq!(pair.f().get(1), 1);
        assert!((2..=500).all(|n| pair.f().get(n) == 0));

        let one = ArithFunction::constant(500, 1, "one");
        let pair = make_pair(one).unwrap();
        assert_eq!(pair.f().get(12), 6);
        assert!(pair.verify_sample(100, 42));
    }
}
