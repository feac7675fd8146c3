//! Census-style searches at n = 9 and the budgeted n = 64 exploration.

use patsym_core::inflate::{self, Mode};
use patsym_core::pattern;
use patsym_core::perm::{Permutation, SymmetryOp};
use patsym_core::search::{self, SearchSpec, TargetSpec};

fn perm(s: &str) -> Permutation {
    s.parse().unwrap()
}

#[test]
fn uniform_census_at_nine() {
    let result = search::exhaustive_search(&SearchSpec::uniform(9, 3)).unwrap();
    assert!(result.exhausted);
    assert_eq!(result.matches, vec![perm("349852167"), perm("761258943")]);

    // The two hosts are each other's inverse, reverse, and complement.
    let (a, b) = (&result.matches[0], &result.matches[1]);
    assert_eq!(&SymmetryOp::inverse().apply(a), b);
    assert_eq!(&SymmetryOp::reverse().apply(a), b);
    assert_eq!(&SymmetryOp::complement().apply(a), b);

    // Both lie in the restricted class, so the restricted search finds the
    // same set.
    let restricted = search::restricted_search(&SearchSpec::uniform(9, 3)).unwrap();
    assert_eq!(restricted.matches, result.matches);
    assert!(restricted.nodes_explored < result.nodes_explored);
}

#[test]
fn paper_target_census_at_nine() {
    let target = inflate::target_vector(3, 9, Mode::Paper)
        .unwrap()
        .to_counts()
        .unwrap();
    let spec = SearchSpec::with_counts(9, 3, target);
    let result = search::exhaustive_search(&spec).unwrap();
    let expected = vec![
        perm("438951276"),
        perm("472951836"),
        perm("638159274"),
        perm("672159834"),
    ];
    assert_eq!(result.matches, expected);

    // All four are self-dual, so the restricted search reproduces them.
    let restricted = search::restricted_search(&spec).unwrap();
    assert_eq!(restricted.matches, expected);
    for pi in &restricted.matches {
        let inverse = SymmetryOp::inverse().apply(pi);
        assert_eq!(inverse, SymmetryOp::reverse().apply(pi));
        assert_eq!(inverse, SymmetryOp::complement().apply(pi));
    }

    // Every match re-verifies against the reference counter.
    for pi in &result.matches {
        let counts = pattern::count_patterns_reference(pi, 3).unwrap();
        assert_eq!(counts.counts(), &[8, 17, 17, 17, 17, 8]);
    }
}

#[test]
fn census_hosts_avoid_the_increasing_four_pattern() {
    // Each of the four size-9 hosts has no occurrence of 1234 at all, so
    // none of them is 4-symmetric in any sense.
    for s in ["438951276", "472951836", "638159274", "672159834"] {
        let counts = pattern::count_patterns_reference(&perm(s), 4).unwrap();
        assert_eq!(counts.get(&perm("1234")), 0, "{s}");
        assert!(!counts.all_equal());
    }
}

#[test]
fn derived_target_census_at_nine_is_empty() {
    // The derived-mode k = 3 vector at m = 9 is non-integral, so there is
    // nothing to search for.
    let vector = inflate::target_vector(3, 9, Mode::Derived).unwrap();
    assert!(!vector.integral);
    assert!(vector.to_counts().is_err());
}

#[test]
fn budgeted_restricted_exploration_at_sixty_four() {
    let target = inflate::target_vector(4, 64, Mode::Paper)
        .unwrap()
        .to_counts()
        .unwrap();
    let spec = SearchSpec {
        n: 64,
        k: 4,
        target: TargetSpec::Counts(target),
        restricted: true,
        budget: Some(500),
        threads: 2,
    };
    let result = search::restricted_search(&spec).unwrap();
    assert!(!result.exhausted);
    assert!(result.nodes_explored <= 500);
    // No claim about matches either way; the budget contract is the test.
}
