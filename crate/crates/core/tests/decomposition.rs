//! Exhaustive check of the tensor decomposition identity at small sizes:
//! counting patterns of `sigma (x) rho` directly agrees with summing, over
//! interval partitions consistent with each pattern, the host count of the
//! contraction times the inner counts of the block projections.

use patsym_core::{pattern, verify};

#[test]
fn decomposition_identity_exhaustive_small() {
    let mut hosts = Vec::new();
    for size in 1..=4 {
        hosts.extend(pattern::all_patterns(size).unwrap());
    }
    let mut checks = 0u64;
    for sigma in &hosts {
        for rho in &hosts {
            let product = sigma.tensor(rho).unwrap();
            for k in 1..=4usize {
                let direct = pattern::count_patterns_reference(&product, k).unwrap();
                let decomposed = verify::tensor_decomposition_counts(sigma, rho, k).unwrap();
                for (idx, &c) in direct.counts().iter().enumerate() {
                    assert_eq!(
                        decomposed[idx], c as u128,
                        "sigma={sigma} rho={rho} k={k} rank={idx}"
                    );
                    checks += 1;
                }
            }
        }
    }
    // 33 hosts on each side, all patterns of size 1..=4.
    assert_eq!(checks, 33 * 33 * 33);
}
