//! Densities, mean values, and set-of-multiples machinery over finite
//! ranges.
//!
//! Asymptotic statements are approximated by checkpointed counts: a
//! [`CheckpointPlan`] fixes the evaluation bounds x_1 < ... < x_k and every
//! estimate records exact integer counts at each bound. Upper and lower
//! densities are reported as max/min checkpoint ratios over the tail of the
//! plan; these are explicitly proxies, not limits.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::arithfn::ArithFunction;
use crate::bitmap::Bitmap;
use crate::error::{Error, Result};
use crate::sieve::SieveTables;

/// Cap on the subset expansion in the prescribed-divisor routes.
pub const EXPANSION_GUARD: u64 = 20;

/// Strictly increasing evaluation bounds, the finite stand-in for x → ∞.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckpointPlan {
    points: Vec<u64>,
}

impl CheckpointPlan {
    pub fn new(points: Vec<u64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Argument("checkpoint plan is empty".into()));
        }
        if points[0] < 1 || points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Argument(
                "checkpoints must be strictly increasing and >= 1".into(),
            ));
        }
        Ok(CheckpointPlan { points })
    }

    /// Geometric plan limit, limit/ratio, limit/ratio², ..., truncated below
    /// `min_x`. Always contains `limit` itself.
    pub fn geometric(limit: u64, min_x: u64, ratio: u64) -> Result<Self> {
        if limit < 1 || min_x < 1 || ratio < 2 {
            return Err(Error::Argument(
                "geometric plan needs limit >= 1, min_x >= 1, ratio >= 2".into(),
            ));
        }
        let mut points = Vec::new();
        let mut x = limit;
        while x >= min_x {
            points.push(x);
            if x == 1 {
                break;
            }
            x /= ratio;
        }
        if points.is_empty() {
            points.push(limit);
        }
        points.reverse();
        points.dedup();
        CheckpointPlan::new(points)
    }

    /// The default plan: halving steps down to 10^3 (or down to the limit
    /// itself when the range is smaller).
    pub fn default_for(limit: u64) -> Self {
        CheckpointPlan::geometric(limit, 1000.min(limit.max(1)), 2)
            .expect("default plan construction")
    }

    pub fn points(&self) -> &[u64] {
        &self.points
    }

    pub fn last(&self) -> u64 {
        *self.points.last().expect("plan nonempty")
    }

    /// Checks that every evaluation bound is within `limit`.
    pub fn check_within(&self, limit: u64, what: &'static str) -> Result<()> {
        if self.last() > limit {
            return Err(Error::Range {
                what,
                value: self.last(),
                limit,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub x: u64,
    pub count: i64,
    pub ratio: f64,
}

/// Checkpointed counts/ratios approximating a density or mean value.
///
/// `count` holds the exact integer count (or signed partial sum, for mean
/// values); `ratio` is count/x. The tail statistics are taken over the last
/// half of the checkpoints.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityEstimate {
    pub checkpoints: Vec<Checkpoint>,
    pub final_ratio: f64,
    pub tail_oscillation: f64,
}

impl DensityEstimate {
    pub fn from_counts(points: &[u64], counts: &[i64]) -> Self {
        assert_eq!(points.len(), counts.len());
        let checkpoints: Vec<Checkpoint> = points
            .iter()
            .zip(counts)
            .map(|(&x, &count)| Checkpoint {
                x,
                count,
                ratio: count as f64 / x as f64,
            })
            .collect();
        let final_ratio = checkpoints.last().expect("nonempty").ratio;
        let tail_oscillation = checkpoints[checkpoints.len() / 2..]
            .iter()
            .map(|c| (c.ratio - final_ratio).abs())
            .fold(0.0, f64::max);
        DensityEstimate {
            checkpoints,
            final_ratio,
            tail_oscillation,
        }
    }

    pub fn final_count(&self) -> i64 {
        self.checkpoints.last().expect("nonempty").count
    }

    pub fn final_x(&self) -> u64 {
        self.checkpoints.last().expect("nonempty").x
    }

    /// Upper-density proxy: max ratio over the tail half of the plan.
    pub fn tail_upper(&self) -> f64 {
        self.checkpoints[self.checkpoints.len() / 2..]
            .iter()
            .map(|c| c.ratio)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Lower-density proxy: min ratio over the tail half of the plan.
    pub fn tail_lower(&self) -> f64 {
        self.checkpoints[self.checkpoints.len() / 2..]
            .iter()
            .map(|c| c.ratio)
            .fold(f64::INFINITY, f64::min)
    }
}

/// Counts n <= x with pred(n), at every checkpoint of the plan.
fn counts_at_checkpoints(plan: &CheckpointPlan, mut pred: impl FnMut(u64) -> bool) -> Vec<i64> {
    let mut counts = Vec::with_capacity(plan.points().len());
    let mut count = 0i64;
    let mut next = 0usize;
    for n in 1..=plan.last() {
        if pred(n) {
            count += 1;
        }
        while next < plan.points().len() && plan.points()[next] == n {
            counts.push(count);
            next += 1;
        }
    }
    counts
}

/// Membership bitmap of a set of multiples M(A) ∩ [1, N].
#[derive(Debug, Clone)]
pub struct MultiplesBitmap {
    limit: u64,
    membership: Bitmap,
    generating_set: Vec<u64>,
}

impl MultiplesBitmap {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    #[inline]
    pub fn contains(&self, n: u64) -> bool {
        n >= 1 && n <= self.limit && self.membership.get(n as usize)
    }

    pub fn generating_set(&self) -> &[u64] {
        &self.generating_set
    }

    pub fn count(&self) -> usize {
        self.membership.count_ones()
    }
}

/// Density of {n <= x : f(n) != 0} at each checkpoint.
pub fn support_density(f: &ArithFunction, plan: &CheckpointPlan) -> Result<DensityEstimate> {
    plan.check_within(f.limit(), "checkpoint")?;
    let counts = counts_at_checkpoints(plan, |n| f.get(n) != 0);
    Ok(DensityEstimate::from_counts(
        plan.points(),
        counts.as_slice(),
    ))
}

/// (1/x) Σ_{n<=x} f(n) at each checkpoint, from exact integer partial sums.
/// With `absolute` set the summand is |f(n)|.
pub fn mean_value(
    f: &ArithFunction,
    plan: &CheckpointPlan,
    absolute: bool,
) -> Result<DensityEstimate> {
    plan.check_within(f.limit(), "checkpoint")?;
    let mut sums = Vec::with_capacity(plan.points().len());
    let mut sum = 0i64;
    let mut next = 0usize;
    for n in 1..=plan.last() {
        let v = f.get(n);
        let term = if absolute {
            v.checked_abs().ok_or(Error::Overflow {
                context: "mean value partial sum",
                at: n,
            })?
        } else {
            v
        };
        sum = sum.checked_add(term).ok_or(Error::Overflow {
            context: "mean value partial sum",
            at: n,
        })?;
        while next < plan.points().len() && plan.points()[next] == n {
            sums.push(sum);
            next += 1;
        }
    }
    Ok(DensityEstimate::from_counts(plan.points(), sums.as_slice()))
}

/// Partial sums Σ_{a ∈ A, a <= x} 1/a at each checkpoint.
pub fn reciprocal_sum_partial(elements: &[u64], plan: &CheckpointPlan) -> Vec<(u64, f64)> {
    assert!(
        elements.iter().all(|&a| a >= 1),
        "elements must be natural numbers"
    );
    let mut sorted = elements.to_vec();
    sorted.sort_unstable();
    let mut out = Vec::with_capacity(plan.points().len());
    let mut sum = 0.0;
    let mut idx = 0usize;
    for &x in plan.points() {
        while idx < sorted.len() && sorted[idx] <= x {
            sum += 1.0 / sorted[idx] as f64;
            idx += 1;
        }
        out.push((x, sum));
    }
    out
}

/// Marks M(A) ∩ [1, limit] and estimates its density on the plan.
pub fn set_of_multiples(
    a: &[u64],
    limit: u64,
    plan: &CheckpointPlan,
) -> Result<(MultiplesBitmap, DensityEstimate)> {
    if a.is_empty() {
        return Err(Error::Argument("generating set is empty".into()));
    }
    plan.check_within(limit, "checkpoint")?;
    let set: BTreeSet<u64> = a.iter().copied().collect();
    for &el in &set {
        if el < 1 {
            return Err(Error::Argument("generating set contains 0".into()));
        }
        if el > limit {
            return Err(Error::Range {
                what: "generating element",
                value: el,
                limit,
            });
        }
    }
    let mut membership = Bitmap::new(limit as usize + 1);
    for &el in &set {
        let mut m = el;
        while m <= limit {
            membership.set(m as usize);
            m += el;
        }
    }
    let counts = counts_at_checkpoints(plan, |n| membership.get(n as usize));
    let estimate = DensityEstimate::from_counts(plan.points(), counts.as_slice());
    Ok((
        MultiplesBitmap {
            limit,
            membership,
            generating_set: set.into_iter().collect(),
        },
        estimate,
    ))
}

/// Heilbronn–Rohrbach upper bound for d(M(A)): 1 − Π_{a ∈ A} (1 − 1/a).
pub fn heilbronn_rohrbach_bound(a: &[u64]) -> f64 {
    assert!(
        a.iter().all(|&x| x >= 1),
        "elements must be natural numbers"
    );
    let set: BTreeSet<u64> = a.iter().copied().collect();
    let product: f64 = set.iter().map(|&x| 1.0 - 1.0 / x as f64).product();
    1.0 - product
}

fn check_elements_within(a: &BTreeSet<u64>, limit: u64) -> Result<()> {
    for &el in a {
        if el > limit {
            return Err(Error::Range {
                what: "divisor-set element",
                value: el,
                limit,
            });
        }
    }
    Ok(())
}

fn validate_nested_sets(
    a: &[u64],
    s: &[u64],
    t: &[u64],
) -> Result<(BTreeSet<u64>, BTreeSet<u64>, BTreeSet<u64>)> {
    let a_set: BTreeSet<u64> = a.iter().copied().collect();
    let s_set: BTreeSet<u64> = s.iter().copied().collect();
    let t_set: BTreeSet<u64> = t.iter().copied().collect();
    if a_set.contains(&0) {
        return Err(Error::Argument("divisor sets contain 0".into()));
    }
    if !s_set.is_subset(&a_set) || !t_set.is_subset(&s_set) {
        return Err(Error::Argument(
            "prescribed sets must satisfy T ⊆ S ⊆ A".into(),
        ));
    }
    Ok((a_set, s_set, t_set))
}

/// Counts n <= x whose divisor set from A is exactly S and whose subset of
/// S with n/d squarefree is exactly T. Direct scan, condition by condition.
pub fn prescribed_divisors_empirical(
    a: &[u64],
    s: &[u64],
    t: &[u64],
    tables: &SieveTables,
    plan: &CheckpointPlan,
) -> Result<DensityEstimate> {
    let (a_set, s_set, t_set) = validate_nested_sets(a, s, t)?;
    plan.check_within(tables.limit(), "checkpoint")?;
    check_elements_within(&a_set, plan.last())?;
    let a_vec: Vec<u64> = a_set.iter().copied().collect();
    let s_vec: Vec<u64> = s_set.iter().copied().collect();
    let counts = counts_at_checkpoints(plan, |n| {
        for &d in &a_vec {
            if (n % d == 0) != s_set.contains(&d) {
                return false;
            }
        }
        for &d in &s_vec {
            if tables.is_squarefree(n / d) != t_set.contains(&d) {
                return false;
            }
        }
        true
    });
    Ok(DensityEstimate::from_counts(
        plan.points(),
        counts.as_slice(),
    ))
}

/// One term of the signed subset expansion over T ⊆ U ⊆ S.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct UExpansionTerm {
    pub subset: Vec<u64>,
    pub sign: i8,
    pub counts: Vec<i64>,
}

/// Output of [`prescribed_divisors_formula`]: the assembled estimate plus
/// the per-subset counts it was assembled from.
#[derive(Debug, Clone)]
pub struct FormulaDensity {
    pub estimate: DensityEstimate,
    pub lcm: u64,
    pub terms: Vec<UExpansionTerm>,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn checked_lcm(a: u64, b: u64) -> Option<u64> {
    if a == 0 || b == 0 {
        return Some(0);
    }
    (a / gcd(a, b)).checked_mul(b)
}

fn subsets_between(t: &BTreeSet<u64>, s: &BTreeSet<u64>) -> Vec<BTreeSet<u64>> {
    let extra: Vec<u64> = s.difference(t).copied().collect();
    let mut out = Vec::with_capacity(1 << extra.len());
    for mask in 0u32..(1u32 << extra.len()) {
        let mut u = t.clone();
        for (i, &e) in extra.iter().enumerate() {
            if mask >> i & 1 == 1 {
                u.insert(e);
            }
        }
        out.push(u);
    }
    out
}

fn expansion_guard(s: &BTreeSet<u64>, t: &BTreeSet<u64>) -> Result<()> {
    let k = s.difference(t).count() as u64;
    if k > EXPANSION_GUARD {
        return Err(Error::Capacity {
            what: "subset expansion",
            requested: k,
            ceiling: EXPANSION_GUARD,
        });
    }
    Ok(())
}

/// Same counts as [`prescribed_divisors_empirical`], computed by reduction
/// to set-of-multiples complements.
///
/// Writing L = lcm(S), the candidates are n = Lq; for each subset U with
/// T ⊆ U ⊆ S the count of q <= x/L avoiding the set of multiples of
///
///   K_U = {a/gcd(a, L) : a ∈ A \ S} ∪ ⋃_{e ∈ U} {h²/gcd(h², L/e) : h >= 2}
///
/// is taken with sign (−1)^(|U|−|T|). Elements of K_U above N/L mark
/// nothing in range, so the truncation is exact at every checkpoint.
pub fn prescribed_divisors_formula(
    a: &[u64],
    s: &[u64],
    t: &[u64],
    limit: u64,
    plan: &CheckpointPlan,
) -> Result<FormulaDensity> {
    let (a_set, s_set, t_set) = validate_nested_sets(a, s, t)?;
    expansion_guard(&s_set, &t_set)?;
    plan.check_within(limit, "checkpoint")?;
    check_elements_within(&a_set, limit)?;
    let mut l = 1u64;
    for &d in &s_set {
        l = checked_lcm(l, d).ok_or(Error::Overflow {
            context: "lcm of prescribed divisor set",
            at: d,
        })?;
    }
    let q_max = limit / l;
    let q_points: Vec<u64> = plan.points().iter().map(|&x| x / l).collect();

    let mut terms = Vec::new();
    let mut totals = vec![0i64; plan.points().len()];
    for u in subsets_between(&t_set, &s_set) {
        let mut k_set: BTreeSet<u64> = BTreeSet::new();
        for &el in a_set.difference(&s_set) {
            let reduced = el / gcd(el, l);
            if reduced <= q_max {
                k_set.insert(reduced);
            }
        }
        for &e in &u {
            let le = l / e;
            let mut h = 2u64;
            while h * h <= limit / e {
                let hh = h * h;
                let reduced = hh / gcd(hh, le);
                if reduced <= q_max {
                    k_set.insert(reduced);
                }
                h += 1;
            }
        }
        // count of q <= q_i not in M(K_U), per checkpoint
        let mut counts = Vec::with_capacity(q_points.len());
        if k_set.is_empty() {
            counts.extend(q_points.iter().map(|&q| q as i64));
        } else {
            let mut marked = Bitmap::new(q_max as usize + 1);
            for &k in &k_set {
                let mut m = k;
                while m <= q_max {
                    marked.set(m as usize);
                    m += k;
                }
            }
            let mut survivors = 0i64;
            let mut next = 0usize;
            while next < q_points.len() && q_points[next] == 0 {
                counts.push(0);
                next += 1;
            }
            for q in 1..=q_max {
                if !marked.get(q as usize) {
                    survivors += 1;
                }
                while next < q_points.len() && q_points[next] == q {
                    counts.push(survivors);
                    next += 1;
                }
            }
        }
        let sign: i8 = if (u.len() - t_set.len()) % 2 == 0 {
            1
        } else {
            -1
        };
        for (total, &c) in totals.iter_mut().zip(&counts) {
            *total += sign as i64 * c;
        }
        terms.push(UExpansionTerm {
            subset: u.into_iter().collect(),
            sign,
            counts,
        });
    }
    Ok(FormulaDensity {
        estimate: DensityEstimate::from_counts(plan.points(), totals.as_slice()),
        lcm: l,
        terms,
    })
}

/// Third route: signed counts over T ⊆ U ⊆ S of n satisfying the exact
/// divisor-set condition with n/e squarefree for every e ∈ U, each term
/// counted by direct scan. Returns exact totals per checkpoint.
pub fn prescribed_divisors_chi_counts(
    a: &[u64],
    s: &[u64],
    t: &[u64],
    tables: &SieveTables,
    plan: &CheckpointPlan,
) -> Result<Vec<i64>> {
    let (a_set, s_set, t_set) = validate_nested_sets(a, s, t)?;
    expansion_guard(&s_set, &t_set)?;
    plan.check_within(tables.limit(), "checkpoint")?;
    check_elements_within(&a_set, plan.last())?;
    let a_vec: Vec<u64> = a_set.iter().copied().collect();
    let mut totals = vec![0i64; plan.points().len()];
    for u in subsets_between(&t_set, &s_set) {
        let u_vec: Vec<u64> = u.iter().copied().collect();
        let counts = counts_at_checkpoints(plan, |n| {
            for &d in &a_vec {
                if (n % d == 0) != s_set.contains(&d) {
                    return false;
                }
            }
            u_vec.iter().all(|&e| tables.is_squarefree(n / e))
        });
        let sign: i64 = if (u.len() - t_set.len()) % 2 == 0 {
            1
        } else {
            -1
        };
        for (total, c) in totals.iter_mut().zip(counts) {
            *total += sign * c;
        }
    }
    Ok(totals)
}

/// Σ_{n<=y} g(n)/n and its absolute companion Σ_{n<=y} |g(n)|/n.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct WintnerSums {
    pub signed: f64,
    pub absolute: f64,
}

pub fn wintner_prediction(g: &ArithFunction, y: u64) -> Result<WintnerSums> {
    if y < 1 {
        return Err(Error::Argument("wintner bound y must be >= 1".into()));
    }
    if y > g.limit() {
        return Err(Error::Range {
            what: "wintner bound",
            value: y,
            limit: g.limit(),
        });
    }
    let mut signed = 0.0;
    let mut absolute = 0.0;
    for n in 1..=y {
        let v = g.get(n) as f64 / n as f64;
        signed += v;
        absolute += v.abs();
    }
    Ok(WintnerSums { signed, absolute })
}

/// Convergence diagnostics for the mean-value-zero criterion: the series
/// G(x) = Σ_{n<=x} h(n)/n and H(x)/x at each checkpoint.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KroneckerReport {
    pub g_series: Vec<(u64, f64)>,
    pub h_ratio_series: Vec<(u64, f64)>,
    pub g_tail_oscillation: f64,
    /// H(x)/x at the final checkpoint (signed).
    pub final_h_ratio: f64,
    pub g_tolerance: f64,
    pub h_tolerance: f64,
    /// True iff G's tail oscillation is below `g_tolerance` and
    /// |final_h_ratio| is below `h_tolerance`.
    pub verdict: bool,
}

pub fn kronecker_check(
    h: &ArithFunction,
    plan: &CheckpointPlan,
    g_tolerance: f64,
    h_tolerance: f64,
) -> Result<KroneckerReport> {
    plan.check_within(h.limit(), "checkpoint")?;
    let mut g_series = Vec::with_capacity(plan.points().len());
    let mut h_ratio_series = Vec::with_capacity(plan.points().len());
    let mut g_sum = 0.0f64;
    let mut h_sum = 0i128;
    let mut next = 0usize;
    for n in 1..=plan.last() {
        let v = h.get(n);
        g_sum += v as f64 / n as f64;
        h_sum += v as i128;
        while next < plan.points().len() && plan.points()[next] == n {
            g_series.push((n, g_sum));
            h_ratio_series.push((n, h_sum as f64 / n as f64));
            next += 1;
        }
    }
    let final_g = g_series.last().expect("nonempty").1;
    let g_tail_oscillation = g_series[g_series.len() / 2..]
        .iter()
        .map(|&(_, g)| (g - final_g).abs())
        .fold(0.0, f64::max);
    let final_h_ratio = h_ratio_series.last().expect("nonempty").1;
    let verdict = g_tail_oscillation < g_tolerance && final_h_ratio.abs() < h_tolerance;
    Ok(KroneckerReport {
        g_series,
        h_ratio_series,
        g_tail_oscillation,
        final_h_ratio,
        g_tolerance,
        h_tolerance,
        verdict,
    })
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn validate_prime_set(p_set: &[u64]) -> Result<BTreeSet<u64>> {
    let set: BTreeSet<u64> = p_set.iter().copied().collect();
    if set.len() != p_set.len() {
        return Err(Error::Argument("prime set has repeated elements".into()));
    }
    for &p in &set {
        if !is_prime_u64(p) {
            return Err(Error::Argument(format!("{p} is not prime")));
        }
    }
    Ok(set)
}

/// Density of squarefree integers coprime to every p in P:
/// (6/π²) Π_{p ∈ P} (1 + 1/p)^{-1}.
pub fn landau_density(p_set: &[u64]) -> Result<f64> {
    let set = validate_prime_set(p_set)?;
    let product: f64 = set.iter().map(|&p| 1.0 / (1.0 + 1.0 / p as f64)).product();
    Ok(6.0 / (std::f64::consts::PI * std::f64::consts::PI) * product)
}

/// Empirical counterpart of [`landau_density`]: counts n <= x squarefree
/// with no prime factor in P.
pub fn squarefree_coprime_density(
    p_set: &[u64],
    plan: &CheckpointPlan,
    tables: &SieveTables,
) -> Result<DensityEstimate> {
    let set = validate_prime_set(p_set)?;
    plan.check_within(tables.limit(), "checkpoint")?;
    let primes: Vec<u64> = set.into_iter().collect();
    let counts = counts_at_checkpoints(plan, |n| {
        tables.is_squarefree(n) && primes.iter().all(|&p| n % p != 0)
    });
    Ok(DensityEstimate::from_counts(
        plan.points(),
        counts.as_slice(),
    ))
}

/// For each threshold T, the density of {n <= x : some a ∈ A with a >= T
/// divides n}. Pointwise nonincreasing in T.
pub fn evaporating_profile(
    a: &[u64],
    thresholds: &[u64],
    limit: u64,
    plan: &CheckpointPlan,
) -> Result<Vec<(u64, DensityEstimate)>> {
    if thresholds.is_empty() {
        return Err(Error::Argument("no thresholds given".into()));
    }
    if thresholds.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Argument("thresholds must be ascending".into()));
    }
    for &t in thresholds {
        if t > limit {
            return Err(Error::Range {
                what: "threshold",
                value: t,
                limit,
            });
        }
    }
    plan.check_within(limit, "checkpoint")?;
    let mut out = Vec::with_capacity(thresholds.len());
    for &t in thresholds {
        let tail: Vec<u64> = a
            .iter()
            .copied()
            .filter(|&el| el >= t && el <= limit)
            .collect();
        let estimate = if tail.is_empty() {
            DensityEstimate::from_counts(plan.points(), vec![0i64; plan.points().len()].as_slice())
        } else {
            set_of_multiples(&tail, limit, plan)?.1
        };
        out.push((t, estimate));
    }
    Ok(out)
}

/// Diagnostic series count(x) · (log x)^delta / x for membership of A in
/// the growth class with exponent delta; a bounded series means membership
/// at desk scale.
pub fn log_power_growth(a: &[u64], delta: f64, plan: &CheckpointPlan) -> Result<Vec<(u64, f64)>> {
    if plan.points().len() < 2 {
        return Err(Error::Argument(
            "growth diagnostic needs at least 2 checkpoints".into(),
        ));
    }
    if !delta.is_finite() || delta <= 0.0 {
        return Err(Error::Argument("delta must be positive".into()));
    }
    let mut sorted = a.to_vec();
    sorted.sort_unstable();
    let mut out = Vec::with_capacity(plan.points().len());
    let mut idx = 0usize;
    for &x in plan.points() {
        while idx < sorted.len() && sorted[idx] <= x {
            idx += 1;
        }
        let count = idx as f64;
        out.push((x, count * (x as f64).ln().powf(delta) / x as f64));
    }
    Ok(out)
}
