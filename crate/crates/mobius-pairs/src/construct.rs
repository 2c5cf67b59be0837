//! Explicit Möbius-pair constructions: multiplicative pairs with prescribed
//! support densities, and the greedy thin-support pair whose partner
//! support has density zero.
//!
//! Both constructions select finite prime sets by a downward greedy scan:
//! a prime is included iff the running product stays at or above the
//! target, and the scan stops once the product is within tolerance. The
//! achieved products are exact for the finite selections and reproducible
//! bit-for-bit.

use serde::{Deserialize, Serialize};

use crate::arithfn::{make_pair, tabulate_multiplicative, MoebiusPair, MultiplicativeSpec};
use crate::error::{Error, Result};
use crate::sieve::SieveTables;

/// Per-prime factor used by the greedy product selections.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FactorKind {
    /// 1 − 1/p: density of integers not divisible by p.
    NotDivisible,
    /// 1 − 1/p²: density of integers not divisible by p².
    NotDivisibleBySquare,
    /// 1 − 1/p + 1/p²: density of integers not exactly divisible by p.
    NotExactlyDivisible,
    /// 1 + 1/(p−1): growth factor of the reciprocal sum over numbers with
    /// all prime factors in the selection.
    ReciprocalGrowth,
}

impl FactorKind {
    pub fn factor(self, p: u64) -> f64 {
        let p = p as f64;
        match self {
            FactorKind::NotDivisible => 1.0 - 1.0 / p,
            FactorKind::NotDivisibleBySquare => 1.0 - 1.0 / (p * p),
            FactorKind::NotExactlyDivisible => 1.0 - 1.0 / p + 1.0 / (p * p),
            FactorKind::ReciprocalGrowth => 1.0 + 1.0 / (p - 1.0),
        }
    }

    /// True for the kinds whose factors lie in (0, 1).
    pub fn is_decreasing(self) -> bool {
        !matches!(self, FactorKind::ReciprocalGrowth)
    }
}

/// An ordered finite prime set with its running product.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PrimeSelection {
    pub primes: Vec<u64>,
    /// Greedy target, when the selection was target-driven.
    pub target: Option<f64>,
    pub achieved: f64,
    pub factor_kind: FactorKind,
    /// Largest candidate the pool offered.
    pub pool_bound: u64,
}

impl PrimeSelection {
    /// Recomputes the product over the selection from scratch.
    pub fn recompute_product(&self) -> f64 {
        self.primes
            .iter()
            .map(|&p| self.factor_kind.factor(p))
            .product()
    }

    /// Running products after each inclusion, same order as `primes`.
    pub fn running_products(&self) -> Vec<f64> {
        let mut acc = 1.0;
        self.primes
            .iter()
            .map(|&p| {
                acc *= self.factor_kind.factor(p);
                acc
            })
            .collect()
    }
}

/// Greedily selects primes from `pool` (ascending) so that the product of
/// `kind` factors lands in [target, target + tolerance].
///
/// A prime is skipped when including it would drop the product below the
/// target; later primes have factors closer to 1, so the product converges
/// to the target from above. `target = 0` selects the whole pool and
/// reports the achieved (nonzero) product without error.
pub fn select_primes_by_product(
    pool: &[u64],
    kind: FactorKind,
    target: f64,
    tolerance: f64,
) -> Result<PrimeSelection> {
    if !(0.0..=1.0).contains(&target) {
        return Err(Error::Argument(format!("target {target} not in [0, 1]")));
    }
    if !tolerance.is_finite() || tolerance <= 0.0 {
        return Err(Error::Argument("tolerance must be positive".into()));
    }
    if !kind.is_decreasing() {
        return Err(Error::Argument(
            "greedy product selection needs factors in (0, 1)".into(),
        ));
    }
    if pool.is_empty() {
        return Err(Error::Argument("prime pool is empty".into()));
    }
    let pool_bound = *pool.last().expect("nonempty pool");
    let mut primes = Vec::new();
    let mut achieved = 1.0f64;
    if target == 0.0 {
        for &p in pool {
            achieved *= kind.factor(p);
            primes.push(p);
        }
        return Ok(PrimeSelection {
            primes,
            target: Some(target),
            achieved,
            factor_kind: kind,
            pool_bound,
        });
    }
    for &p in pool {
        if achieved - target <= tolerance {
            break;
        }
        let f = kind.factor(p);
        if achieved * f >= target {
            achieved *= f;
            primes.push(p);
        }
    }
    if achieved - target <= tolerance {
        Ok(PrimeSelection {
            primes,
            target: Some(target),
            achieved,
            factor_kind: kind,
            pool_bound,
        })
    } else {
        Err(Error::InsufficientPool {
            target,
            achieved,
            pool_bound,
        })
    }
}

/// A nondecreasing bound function on [2, ∞).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZFunction {
    Log,
    LogLog,
    /// (log x)^exponent.
    LogPower(f64),
    Table(ZTable),
}

/// Breakpoints (x, z) interpreted as a nondecreasing step function: the
/// value at x is the z of the last breakpoint at or before x, and the first
/// z before that.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ZTable {
    breakpoints: Vec<(u64, f64)>,
}

impl ZTable {
    pub fn new(breakpoints: Vec<(u64, f64)>) -> Result<Self> {
        if breakpoints.is_empty() {
            return Err(Error::Argument("Z table has no breakpoints".into()));
        }
        if breakpoints.iter().any(|&(x, z)| x < 1 || !z.is_finite()) {
            return Err(Error::Argument(
                "Z table needs x >= 1 and finite z values".into(),
            ));
        }
        if breakpoints.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::Argument("Z table x values must be ascending".into()));
        }
        if breakpoints.windows(2).any(|w| w[0].1 > w[1].1) {
            return Err(Error::Argument(
                "Z table values must be nondecreasing".into(),
            ));
        }
        Ok(ZTable { breakpoints })
    }

    pub fn breakpoints(&self) -> &[(u64, f64)] {
        &self.breakpoints
    }

    fn eval(&self, x: f64) -> f64 {
        let mut value = self.breakpoints[0].1;
        for &(bx, bz) in &self.breakpoints {
            if bx as f64 <= x {
                value = bz;
            } else {
                break;
            }
        }
        value
    }
}

impl ZFunction {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            ZFunction::Log => x.ln(),
            ZFunction::LogLog => x.ln().ln(),
            ZFunction::LogPower(c) => x.ln().powf(*c),
            ZFunction::Table(t) => t.eval(x),
        }
    }

    /// Short name for reports.
    pub fn describe(&self) -> String {
        match self {
            ZFunction::Log => "log".into(),
            ZFunction::LogLog => "loglog".into(),
            ZFunction::LogPower(c) => format!("logpow:{c}"),
            ZFunction::Table(t) => format!("table[{}]", t.breakpoints.len()),
        }
    }
}

/// A constructed pair together with the selections that produced it and the
/// truncated-product density predictions for both supports.
#[derive(Debug)]
pub struct ConstructionReport {
    pub pair: MoebiusPair,
    pub selections: Vec<PrimeSelection>,
    /// Predicted densities of (supp f, supp g), exact truncated products.
    pub predicted_densities: (f64, f64),
    /// (α′, β′): the targets actually attained by the greedy selections.
    pub achieved_targets: (f64, f64),
}

fn prime_power_rule_pruned(
    p_set: std::collections::BTreeSet<u64>,
    q_set: std::collections::BTreeSet<u64>,
) -> MultiplicativeSpec {
    MultiplicativeSpec::new("prescribed_g", move |p, e| {
        if p_set.contains(&p) {
            if e == 1 {
                -1
            } else {
                0
            }
        } else if q_set.contains(&p) {
            0
        } else {
            1
        }
    })
}

fn prime_power_rule_sign_flip(p_set: std::collections::BTreeSet<u64>) -> MultiplicativeSpec {
    MultiplicativeSpec::new("prescribed_g", move |p, e| {
        if p_set.contains(&p) && e == 1 {
            -1
        } else {
            1
        }
    })
}

/// Builds a multiplicative Möbius pair with support densities prescribed to
/// α (for f) and β (for g), up to the greedy tolerance.
///
/// Prime pools are the residue classes 1 and 2 mod 3, truncated at the
/// sieve limit. For β < 1 the P-selection starts above a bound s chosen by
/// doubling until Π_{p ∈ pool ∩ [s, bound]} (1 − 1/p²) ≥ β, which keeps the
/// Q-target β / Π_{p ∈ P}(1 − 1/p²) inside [0, 1]. For β = 1 the pair uses
/// the sign-flip table, whose g never vanishes.
pub fn construct_prescribed_pair(
    alpha: f64,
    beta: f64,
    tolerance: f64,
    limit: u64,
    tables: &SieveTables,
) -> Result<ConstructionReport> {
    if !(0.0..=1.0).contains(&alpha) || !(0.0..=1.0).contains(&beta) {
        return Err(Error::Argument(format!(
            "alpha {alpha} and beta {beta} must lie in [0, 1]"
        )));
    }
    if limit > tables.limit() {
        return Err(Error::Range {
            what: "construction limit",
            value: limit,
            limit: tables.limit(),
        });
    }
    let pool_p = tables.primes_in_progression(3, 1, tables.limit())?;
    let pool_q = tables.primes_in_progression(3, 2, tables.limit())?;

    if beta < 1.0 {
        // suffix products of (1 - 1/p²) over the P-pool
        let mut suffix = vec![1.0f64; pool_p.len() + 1];
        for i in (0..pool_p.len()).rev() {
            suffix[i] = suffix[i + 1] * FactorKind::NotDivisibleBySquare.factor(pool_p[i]);
        }
        let mut s = 2u64;
        let start_idx = loop {
            let idx = pool_p.partition_point(|&p| p < s);
            if suffix[idx] >= beta {
                break idx;
            }
            s = s.saturating_mul(2);
        };
        let sel_p = select_primes_by_product(
            &pool_p[start_idx..],
            FactorKind::NotDivisible,
            alpha,
            tolerance,
        )?;
        let square_product: f64 = sel_p
            .primes
            .iter()
            .map(|&p| FactorKind::NotDivisibleBySquare.factor(p))
            .product();
        let q_target = if beta == 0.0 {
            0.0
        } else {
            beta / square_product
        };
        debug_assert!(q_target <= 1.0 + 1e-12);
        let sel_q = select_primes_by_product(
            &pool_q,
            FactorKind::NotDivisible,
            q_target.min(1.0),
            tolerance,
        )?;
        let spec = prime_power_rule_pruned(
            sel_p.primes.iter().copied().collect(),
            sel_q.primes.iter().copied().collect(),
        );
        let g = tabulate_multiplicative(&spec, tables, limit)?;
        let pair = make_pair(g)?;
        let predicted_f = sel_p.achieved;
        let predicted_g = sel_q.achieved * square_product;
        Ok(ConstructionReport {
            pair,
            selections: vec![sel_p, sel_q],
            predicted_densities: (predicted_f, predicted_g),
            achieved_targets: (predicted_f, predicted_g),
        })
    } else {
        let sel_p =
            select_primes_by_product(&pool_p, FactorKind::NotExactlyDivisible, alpha, tolerance)?;
        let spec = prime_power_rule_sign_flip(sel_p.primes.iter().copied().collect());
        let g = tabulate_multiplicative(&spec, tables, limit)?;
        let pair = make_pair(g)?;
        let predicted_f = sel_p.achieved;
        Ok(ConstructionReport {
            pair,
            selections: vec![sel_p],
            predicted_densities: (predicted_f, 1.0),
            achieved_targets: (predicted_f, 1.0),
        })
    }
}

/// Greedy thin-support pair: scanning primes q in ascending order, q joins
/// P iff the current product Π_{p ∈ P} (1 + 1/(p−1)) is still below Z(q).
/// g is completely multiplicative with g(p) = −1 on P and 0 off P, so the
/// reciprocal sum over supp(g) stays below Z while supp(f) thins out.
pub fn greedy_thin_support_pair(
    z: &ZFunction,
    limit: u64,
    tables: &SieveTables,
) -> Result<ConstructionReport> {
    if limit < 2 || limit > tables.limit() {
        return Err(Error::Range {
            what: "construction limit",
            value: limit,
            limit: tables.limit(),
        });
    }
    let mut selected: Vec<u64> = Vec::new();
    let mut product = 1.0f64;
    for &q in tables.primes() {
        if q > limit {
            break;
        }
        if product < z.eval(q as f64) {
            selected.push(q);
            product *= FactorKind::ReciprocalGrowth.factor(q);
        }
    }
    let p_set: std::collections::BTreeSet<u64> = selected.iter().copied().collect();
    let spec = MultiplicativeSpec::completely_multiplicative("greedy_thin_g", move |p| {
        if p_set.contains(&p) {
            -1
        } else {
            0
        }
    });
    let g = tabulate_multiplicative(&spec, tables, limit)?;
    let pair = make_pair(g)?;
    let predicted_f: f64 = selected
        .iter()
        .map(|&p| FactorKind::NotExactlyDivisible.factor(p))
        .product();
    let in_p: std::collections::BTreeSet<u64> = selected.iter().copied().collect();
    let predicted_g: f64 = tables
        .primes()
        .iter()
        .take_while(|&&p| p <= limit)
        .filter(|p| !in_p.contains(p))
        .map(|&p| FactorKind::NotDivisible.factor(p))
        .product();
    let selection = PrimeSelection {
        primes: selected,
        target: None,
        achieved: product,
        factor_kind: FactorKind::ReciprocalGrowth,
        pool_bound: limit,
    };
    Ok(ConstructionReport {
        pair,
        selections: vec![selection],
        predicted_densities: (predicted_f, predicted_g),
        achieved_targets: (predicted_f, predicted_g),
    })
}
