//! Prescribed-density constructions across a grid of reachable targets:
//! every output must have its truncated products within the greedy
//! tolerance of the targets and its empirical support densities within
//! 0.02 of the products at N = 10^6.

use std::sync::OnceLock;

use mobius_pairs::construct::construct_prescribed_pair;
use mobius_pairs::density::{support_density, CheckpointPlan};
use mobius_pairs::sieve::{build_sieve, SieveTables};

const MILLION: u64 = 1_000_000;

fn tables() -> &'static SieveTables {
    static TABLES: OnceLock<SieveTables> = OnceLock::new();
    TABLES.get_or_init(|| build_sieve(MILLION).expect("sieve to 10^6"))
}

// Targets kept above the truncated-pool floors (the full residue-class
// products only reach ~0.37 for P and ~0.25 for Q at this limit).
const ALPHAS: [f64; 3] = [0.45, 0.7, 0.95];
const BETAS: [f64; 3] = [0.45, 0.8, 1.0];

#[test]
fn grid_products_hit_targets_and_empirical_matches() {
    let plan = CheckpointPlan::default_for(MILLION);
    for &alpha in &ALPHAS {
        for &beta in &BETAS {
            let report = construct_prescribed_pair(alpha, beta, 0.01, MILLION, tables())
                .unwrap_or_else(|e| panic!("({alpha}, {beta}): {e}"));
            let (pf, pg) = report.predicted_densities;
            assert!(
                (pf - alpha).abs() <= 0.01,
                "({alpha}, {beta}): predicted f {pf}"
            );
            assert!(
                (pg - beta).abs() <= 0.01,
                "({alpha}, {beta}): predicted g {pg}"
            );
            let ef = support_density(report.pair.f(), &plan).unwrap().final_ratio;
            let eg = support_density(report.pair.g(), &plan).unwrap().final_ratio;
            assert!(
                (ef - pf).abs() < 0.02,
                "({alpha}, {beta}): empirical f {ef} vs {pf}"
            );
            assert!(
                (eg - pg).abs() < 0.02,
                "({alpha}, {beta}): empirical g {eg} vs {pg}"
            );
            // every selection product must recompute exactly from scratch
            for sel in &report.selections {
                assert!((sel.achieved - sel.recompute_product()).abs() <= 1e-12);
            }
        }
    }
}

#[test]
fn whole_pool_selection_for_zero_targets() {
    // alpha = 0 cannot be attained by a finite pool; the construction
    // reports the full-pool product instead of failing
    let report = construct_prescribed_pair(0.0, 0.8, 0.01, 100_000, tables()).unwrap();
    let (pf, _) = report.predicted_densities;
    assert!(pf > 0.0 && pf < 0.45, "whole-pool product {pf}");
    let plan = CheckpointPlan::default_for(100_000);
    let ef = support_density(report.pair.f(), &plan).unwrap().final_ratio;
    assert!((ef - pf).abs() < 0.03, "empirical {ef} vs {pf}");
}

#[test]
fn unreachable_target_reports_insufficient_pool() {
    // the truncated pool cannot push the product down to 0.1
    let err = construct_prescribed_pair(0.1, 0.8, 0.001, 100_000, tables()).unwrap_err();
    match err {
        mobius_pairs::error::Error::InsufficientPool { achieved, .. } => {
            assert!(achieved > 0.1, "achieved {achieved}");
        }
        other => panic!("expected insufficient pool, got {other:?}"),
    }
}
