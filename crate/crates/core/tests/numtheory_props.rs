//! Heavier number-theoretic properties: the closed form for a_p(k) against
//! a full-period brute force, the two-sided growth bounds, and the exact
//! behaviour of the falling-factorial valuation on the shifted window.

use patsym_core::numtheory::{
    a_exponent, falling_factorial_valuation, ilog, legendre, primes_up_to, ExtendedValuation,
};

/// Brute-force a_p(k): scan the predicate `f_{p,k}(n) >= 2 e_p(k)` over one
/// full period `p^{e_p(k) + floor(log_p k) + 1}` and find the least m such
/// that it is a function of `n mod p^m`.
fn brute_force_a(p: u64, k: u64) -> u64 {
    let bound = legendre(p, k) + ilog(p, k) + 1;
    let period = p.pow(bound as u32);
    let threshold = 2 * legendre(p, k);
    let predicate: Vec<bool> = (0..period)
        .map(|n| falling_factorial_valuation(p, n, k).at_least(threshold))
        .collect();
    (0..=bound)
        .find(|&m| {
            let pm = p.pow(m as u32);
            (0..period).all(|n| predicate[n as usize] == predicate[(n % pm) as usize])
        })
        .expect("the scan period itself is always sufficient")
}

#[test]
fn closed_form_matches_brute_force() {
    for p in [2u64, 3, 5, 7] {
        for k in 1..=20u64 {
            if p > k {
                continue;
            }
            assert_eq!(a_exponent(p, k), brute_force_a(p, k), "p={p} k={k}");
        }
    }
}

#[test]
fn two_sided_bounds_hold_up_to_ten_thousand() {
    // -2 < a_p(k) - k/(p-1) <= log_p k for every 2 <= k <= 10^4, p <= k.
    let primes = primes_up_to(10_000);
    for k in 2..=10_000u64 {
        for &p in primes.iter().take_while(|&&p| p <= k) {
            let a = a_exponent(p, k);
            // Lower bound, exactly: a + 2 > k/(p-1).
            assert!((a + 2) * (p - 1) > k, "lower bound fails at p={p} k={k}");
            // Upper bound; the slack is at least 1/(p-1), far above f64
            // rounding at these magnitudes.
            let gap = a as f64 - k as f64 / (p - 1) as f64 - (k as f64).ln() / (p as f64).ln();
            assert!(gap <= 1e-9, "upper bound fails at p={p} k={k}: gap={gap}");
        }
    }
}

#[test]
fn shifted_window_attains_the_threshold_exactly() {
    // Empirical check of the exact equality f_{p,k}(n) = 2 e_p(k) for
    // n - p^{a_p(k)} in {0..k-1}. Counterexamples are reported, not
    // asserted away; none are known.
    let mut counterexamples = Vec::new();
    for p in [2u64, 3, 5] {
        for k in 2..=12u64 {
            if p > k {
                continue;
            }
            let base = p.pow(a_exponent(p, k) as u32);
            for j in 0..k {
                let n = base + j;
                let value = falling_factorial_valuation(p, n, k);
                if value != ExtendedValuation::Finite(2 * legendre(p, k)) {
                    counterexamples.push(format!(
                        "p={p} k={k} n={n}: f = {value}, expected {}",
                        2 * legendre(p, k)
                    ));
                }
            }
        }
    }
    println!(
        "shifted-window exactness: {} counterexamples",
        counterexamples.len()
    );
    for c in &counterexamples {
        println!("  {c}");
    }
}
