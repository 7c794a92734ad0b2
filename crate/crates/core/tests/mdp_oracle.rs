//! Value iteration against exhaustive stationary-policy enumeration.

mod common;

use aoicache::mdp::DEFAULT_EPSILON;
use aoicache::{solve_content_mdp, CacheAction, ContentMdp};
use proptest::prelude::*;

#[test]
fn reference_instance_matches_enumeration() {
    let mdp = ContentMdp::new(4, 1.0, 1.5, 1.0)
        .with_discount(0.9)
        .with_cap(8);
    let solved = solve_content_mdp(&mdp, DEFAULT_EPSILON).unwrap();
    let (policy, values) = common::brute_force(&mdp);
    assert_eq!(solved.policy, policy);
    for (a, b) in solved.values.iter().zip(&values) {
        assert!((a - b).abs() <= 1e-6, "{a} vs {b}");
    }
    // Refreshing is worth it once the copy is a few slots old, and stays so.
    let first = solved.refresh_threshold().expect("refreshes somewhere");
    assert!(policy[first as usize - 1..]
        .iter()
        .all(|&a| a == CacheAction::Refresh));
}

#[test]
fn exact_policy_evaluation_agrees_with_solver_values() {
    let mdp = ContentMdp::new(3, 0.4, 0.3, 2.0)
        .with_discount(0.8)
        .with_cap(6);
    let solved = solve_content_mdp(&mdp, 1e-9).unwrap();
    let exact = common::evaluate_policy(&mdp, &solved.policy);
    for (a, b) in solved.values.iter().zip(&exact) {
        assert!((a - b).abs() <= 1e-8);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn greedy_policy_matches_enumeration(
        max_aoi in 1u32..=4,
        extra in 0u32..=4,
        popularity in 0.0f64..1.0,
        cost in 0.0f64..3.0,
        weight in 0.1f64..3.0,
        discount in 0.0f64..0.95,
    ) {
        let cap = (max_aoi + extra).clamp(max_aoi.max(1), 8);
        let mdp = ContentMdp::new(max_aoi, popularity, cost, weight)
            .with_discount(discount)
            .with_cap(cap);
        let solved = solve_content_mdp(&mdp, DEFAULT_EPSILON).unwrap();
        let (policy, values) = common::brute_force(&mdp);
        // A genuine tie makes both actions optimal; skip those.
        let near_tie = solved.gap.iter().any(|g| g.abs() < 1e-7);
        prop_assume!(!near_tie);
        prop_assert_eq!(&solved.policy, &policy);
        for (a, b) in solved.values.iter().zip(&values) {
            prop_assert!((a - b).abs() <= 1e-6);
        }
    }

    #[test]
    fn values_nonincreasing_in_age(
        max_aoi in 1u32..=20,
        popularity in 0.01f64..1.0,
        cost in 0.0f64..5.0,
        weight in 0.1f64..3.0,
        discount in 0.0f64..0.99,
    ) {
        let mdp = ContentMdp::new(max_aoi, popularity, cost, weight).with_discount(discount);
        let solved = solve_content_mdp(&mdp, DEFAULT_EPSILON).unwrap();
        prop_assert!(solved.values.iter().all(|v| v.is_finite()));
        for w in solved.values.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-9);
        }
    }
}
