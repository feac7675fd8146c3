//! Divisibility machinery governing exact k-symmetry: p-adic valuations,
//! factorial and falling-factorial valuations, binomial valuations by the
//! carry criterion, the exponents `a_p(k)`, the minimal modulus `T(k)`,
//! admissible residue classes, and the least admissible size `f(k)`.
//!
//! The divisibility condition `div_k(n)` asks that `k!^2` divide the falling
//! factorial `n(n-1)...(n-k+1)`; `alldiv_k(n)` is the conjunction of
//! `div_j(n)` over `j = 1..=k`. Whether `div_k(n)` holds depends only on
//! `n mod p^{a_p(k)}` for each prime `p <= k`, with
//! `a_p(k) = e_p(k) + floor(log_p k)`, so `alldiv_k` is periodic with
//! minimal modulus `T(k) = prod_p p^{a_p(k)}`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};

/// A p-adic valuation, which is infinite exactly for the valuation of 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtendedValuation {
    Finite(u64),
    Infinite,
}

impl ExtendedValuation {
    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtendedValuation::Infinite)
    }

    /// Total comparison against a finite threshold.
    pub fn at_least(&self, threshold: u64) -> bool {
        match self {
            ExtendedValuation::Finite(v) => *v >= threshold,
            ExtendedValuation::Infinite => true,
        }
    }
}

impl fmt::Display for ExtendedValuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedValuation::Finite(v) => write!(f, "{v}"),
            ExtendedValuation::Infinite => write!(f, "infinity"),
        }
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p.is_multiple_of(2) {
        return p == 2;
    }
    let mut d = 3;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return vec![];
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for p in 2..=n {
        if !composite[p] {
            primes.push(p as u64);
            let mut m = p * p;
            while m <= n {
                composite[m] = true;
                m += p;
            }
        }
    }
    primes
}

/// Greatest `r` with `p^r | x` (valuation of `|x|`); infinite for `x = 0`.
pub fn p_valuation(p: u64, x: i64) -> Result<ExtendedValuation> {
    if !is_prime(p) {
        return Err(Error::input(format!("{p} is not prime")));
    }
    Ok(valuation_unchecked(p, x.unsigned_abs()))
}

fn valuation_unchecked(p: u64, mut x: u64) -> ExtendedValuation {
    if x == 0 {
        return ExtendedValuation::Infinite;
    }
    let mut v = 0;
    while x.is_multiple_of(p) {
        x /= p;
        v += 1;
    }
    ExtendedValuation::Finite(v)
}

/// `e_p(t)`: the exponent of `p` in `t!`, by the floor-sum formula.
pub fn legendre(p: u64, t: u64) -> u64 {
    debug_assert!(is_prime(p));
    let mut acc = 0;
    let mut power = p;
    loop {
        acc += t / power;
        match power.checked_mul(p) {
            Some(next) if next <= t => power = next,
            _ => break,
        }
    }
    acc
}

/// `f_{p,k}(n)`: valuation of the falling factorial `n(n-1)...(n-k+1)`,
/// as the sum of the term valuations. Infinite exactly when `n < k`.
pub fn falling_factorial_valuation(p: u64, n: u64, k: u64) -> ExtendedValuation {
    debug_assert!(is_prime(p) && k >= 1);
    if n < k {
        return ExtendedValuation::Infinite;
    }
    let mut acc = 0;
    for j in 0..k {
        match valuation_unchecked(p, n - j) {
            ExtendedValuation::Finite(v) => acc += v,
            ExtendedValuation::Infinite => unreachable!("n >= k keeps every factor positive"),
        }
    }
    ExtendedValuation::Finite(acc)
}

/// `nu_p(C(x, y))` by the carry criterion: the number of `j > 0` with
/// `y mod p^j > x mod p^j`.
pub fn kummer_valuation(p: u64, x: u64, y: u64) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::input(format!("{p} is not prime")));
    }
    if y > x {
        return Err(Error::input(format!(
            "kummer_valuation needs y <= x, got y={y}, x={x}"
        )));
    }
    let mut carries = 0;
    let mut power = p;
    loop {
        if y % power > x % power {
            carries += 1;
        }
        match power.checked_mul(p) {
            Some(next) if next <= x => power = next,
            _ => break,
        }
    }
    Ok(carries)
}

/// Floor of `log_p(x)` for `x >= 1`.
pub fn ilog(p: u64, x: u64) -> u64 {
    debug_assert!(p >= 2 && x >= 1);
    let mut e = 0;
    let mut power = p;
    while power <= x {
        e += 1;
        power = match power.checked_mul(p) {
            Some(next) => next,
            None => break,
        };
    }
    e
}

/// `max_j nu_p(C(k-1, j))` by the closed form: `floor(log_p(k-1)) - nu_p(k)`
/// unless `k` is a power of `p`, in which case it is 0.
pub fn max_row_valuation(p: u64, k: u64) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::input(format!("{p} is not prime")));
    }
    if k < 2 {
        return Err(Error::input("max_row_valuation needs k >= 2"));
    }
    if p > k {
        return Err(Error::input(format!(
            "max_row_valuation needs p <= k, got p={p}, k={k}"
        )));
    }
    if is_power_of(p, k) {
        return Ok(0);
    }
    let nu_k = match valuation_unchecked(p, k) {
        ExtendedValuation::Finite(v) => v,
        ExtendedValuation::Infinite => unreachable!(),
    };
    Ok(ilog(p, k - 1) - nu_k)
}

fn is_power_of(p: u64, k: u64) -> bool {
    let mut x = k;
    while x.is_multiple_of(p) {
        x /= p;
    }
    x == 1
}

/// `a_p(k)`: the least exponent `m` such that whether
/// `f_{p,k}(n) >= 2 e_p(k)` depends only on `n mod p^m`. Closed form
/// `e_p(k) + floor(log_p k)` for `p <= k`, and 0 for `p > k`.
pub fn a_exponent(p: u64, k: u64) -> u64 {
    debug_assert!(is_prime(p) && k >= 1);
    if p > k {
        return 0;
    }
    legendre(p, k) + ilog(p, k)
}

/// `T(k)`: the minimal modulus such that `alldiv_k(n)` depends only on
/// `n mod T(k)`; the product of `p^{a_p(k)}` over primes `p <= k`.
pub fn minimal_modulus(k: u64) -> BigUint {
    let mut acc = BigUint::one();
    for p in primes_up_to(k) {
        acc *= BigUint::from(p).pow(a_exponent(p, k) as u32);
    }
    acc
}

/// `div_k(n)`: whether `k!^2` divides `n(n-1)...(n-k+1)`. For `n < k` the
/// falling factorial is 0 and the condition holds trivially.
pub fn div_condition(k: u64, n: u64) -> bool {
    if n < k {
        return true;
    }
    for p in primes_up_to(k) {
        if !falling_factorial_valuation(p, n, k).at_least(2 * legendre(p, k)) {
            return false;
        }
    }
    true
}

/// `alldiv_k(n) = div_1(n) and ... and div_k(n)`.
pub fn alldiv(k: u64, n: u64) -> bool {
    (1..=k).all(|j| div_condition(j, n))
}

/// Largest k for which full residue enumeration is attempted; `T(8)` is
/// about 3.4e7 and `T(9)` is 27x larger.
pub const MAX_RESIDUE_K: u64 = 8;

fn factorization_string(k: u64) -> String {
    primes_up_to(k)
        .iter()
        .map(|&p| format!("{p}^{}", a_exponent(p, k)))
        .collect::<Vec<_>>()
        .join(" * ")
}

/// Admissible residues of `alldiv_j(n)` restricted to one prime: the
/// classes `r mod p^{a_p(k)}` whose representatives `>= k` satisfy
/// `f_{p,j}(n) >= 2 e_p(j)` for every `j` with `p <= j <= k`.
fn prime_admissible_residues(p: u64, k: u64) -> (u64, Vec<u64>) {
    let modulus = p.pow(a_exponent(p, k) as u32);
    let residues = (0..modulus)
        .filter(|&r| {
            let rep = if r >= k { r } else { r + modulus };
            debug_assert!(rep >= k, "p^a >= k guarantees a representative");
            (p..=k).all(|j| falling_factorial_valuation(p, rep, j).at_least(2 * legendre(p, j)))
        })
        .collect();
    (modulus, residues)
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    // Extended Euclid; moduli here are coprime by construction.
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    assert_eq!(old_r, 1, "CRT moduli must be coprime");
    (old_s.rem_euclid(m as i128)) as u64
}

/// The residues `r mod T(k)` whose representatives `>= k` satisfy
/// `alldiv_k`, computed by per-prime scans CRT-combined, then re-verified
/// directly. Sorted ascending.
pub fn admissible_residues(k: u64) -> Result<Vec<u64>> {
    if k < 1 {
        return Err(Error::input("admissible_residues needs k >= 1"));
    }
    if k > MAX_RESIDUE_K {
        return Err(Error::resource(format!(
            "T({k}) = {} exceeds the residue enumeration budget (k <= {MAX_RESIDUE_K}); \
             per-prime factorisation: {}",
            minimal_modulus(k),
            factorization_string(k)
        )));
    }
    let mut combined: Vec<(u64, u64)> = vec![(0, 1)]; // (residue, modulus)
    for p in primes_up_to(k) {
        let (pm, prs) = prime_admissible_residues(p, k);
        let mut next = Vec::with_capacity(combined.len() * prs.len());
        for &(r1, m1) in &combined {
            // r = r1 (mod m1), r = r2 (mod pm), with gcd(m1, pm) = 1.
            let inv = mod_inverse(m1 % pm, pm);
            for &r2 in &prs {
                let diff = (r2 + pm - r1 % pm) % pm;
                let r = r1 as u128 + m1 as u128 * ((diff as u128 * inv as u128) % pm as u128);
                next.push((r as u64, m1 * pm));
            }
        }
        combined = next;
    }
    let modulus = combined.first().map(|&(_, m)| m).unwrap_or(1);
    let mut residues: Vec<u64> = combined.into_iter().map(|(r, _)| r).collect();
    residues.sort_unstable();
    // Independent re-verification of every combined class.
    for &r in &residues {
        let rep = if r >= k { r } else { r + modulus };
        debug_assert!(alldiv(k, rep), "CRT produced a non-admissible residue {r}");
    }
    Ok(residues)
}

/// `f(k)`: the least `n >= k` with `alldiv_k(n)`, via CRT-combined residues.
/// `None` if no residue class is admissible.
pub fn least_admissible(k: u64) -> Result<Option<u64>> {
    let residues = admissible_residues(k)?;
    let modulus: u64 = {
        let m = minimal_modulus(k);
        // k <= MAX_RESIDUE_K keeps T(k) well inside u64.
        m.try_into().expect("T(k) fits in u64 for enumerable k")
    };
    Ok(residues
        .iter()
        .map(|&r| if r >= k { r } else { r + modulus })
        .min())
}

/// The full divisibility picture for one k: exponents, minimal modulus,
/// admissible residues and the least admissible size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisibilityProfile {
    pub k: u64,
    /// `p -> a_p(k)` for primes `p <= k`.
    pub exponents: BTreeMap<u64, u64>,
    /// `T(k)`.
    pub modulus: BigUint,
    /// Admissible residues mod `T(k)`, sorted.
    pub residues: Vec<u64>,
    /// `f(k)`.
    pub least_n: Option<u64>,
}

impl DivisibilityProfile {
    pub fn compute(k: u64) -> Result<Self> {
        let residues = admissible_residues(k)?;
        let least_n = least_admissible(k)?;
        Ok(DivisibilityProfile {
            k,
            exponents: primes_up_to(k)
                .into_iter()
                .map(|p| (p, a_exponent(p, k)))
                .collect(),
            modulus: minimal_modulus(k),
            residues,
            least_n,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_core::{RngCore, SeedableRng};

    #[test]
    fn valuation_examples() {
        assert_eq!(p_valuation(2, 40).unwrap(), ExtendedValuation::Finite(3));
        assert_eq!(p_valuation(7, 0).unwrap(), ExtendedValuation::Infinite);
        assert_eq!(p_valuation(3, 5).unwrap(), ExtendedValuation::Finite(0));
        assert_eq!(p_valuation(3, -54).unwrap(), ExtendedValuation::Finite(3));
        assert!(p_valuation(6, 12).is_err());
    }

    #[test]
    fn valuation_ordering() {
        assert!(ExtendedValuation::Finite(100) < ExtendedValuation::Infinite);
        assert!(ExtendedValuation::Infinite.at_least(u64::MAX));
        assert!(!ExtendedValuation::Finite(1).at_least(2));
    }

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre(2, 4), 3);
        assert_eq!(legendre(3, 9), 4);
        assert_eq!(legendre(5, 4), 0);
    }

    #[test]
    fn falling_factorial_examples() {
        assert_eq!(
            falling_factorial_valuation(2, 9, 3),
            ExtendedValuation::Finite(3)
        );
        for (p, k) in [(2, 5), (3, 7), (5, 2)] {
            assert_eq!(
                falling_factorial_valuation(p, k - 1, k),
                ExtendedValuation::Infinite
            );
        }
        assert_eq!(
            falling_factorial_valuation(2, 64, 4),
            ExtendedValuation::Finite(7)
        );
    }

    #[test]
    fn kummer_examples() {
        assert_eq!(kummer_valuation(3, 9, 4).unwrap(), 2);
        for (p, x) in [(2, 10), (5, 7), (13, 100)] {
            assert_eq!(kummer_valuation(p, x, 0).unwrap(), 0);
        }
        assert_eq!(kummer_valuation(2, 4, 2).unwrap(), 1);
        assert!(kummer_valuation(2, 3, 4).is_err());
    }

    #[test]
    fn kummer_matches_legendre_subtraction() {
        for p in primes_up_to(31) {
            for x in 0..=300 {
                for y in 0..=x {
                    let carries = kummer_valuation(p, x, y).unwrap();
                    let legendre_route = legendre(p, x) - legendre(p, y) - legendre(p, x - y);
                    assert_eq!(carries, legendre_route, "p={p} x={x} y={y}");
                }
            }
        }
    }

    #[test]
    fn max_row_valuation_examples() {
        assert_eq!(max_row_valuation(2, 4).unwrap(), 0);
        assert_eq!(max_row_valuation(3, 7).unwrap(), 1);
        assert_eq!(max_row_valuation(2, 3).unwrap(), 1);
        assert!(max_row_valuation(5, 3).is_err());
    }

    #[test]
    fn max_row_valuation_matches_row_scan() {
        for k in 2..=40u64 {
            for p in primes_up_to(k) {
                let scanned = (0..k)
                    .map(|j| kummer_valuation(p, k - 1, j).unwrap())
                    .max()
                    .unwrap();
                assert_eq!(max_row_valuation(p, k).unwrap(), scanned, "p={p} k={k}");
            }
        }
    }

    #[test]
    fn a_exponent_examples() {
        assert_eq!(a_exponent(2, 4), 5);
        assert_eq!(a_exponent(2, 16), 19);
        assert_eq!(a_exponent(3, 9), 6);
        assert_eq!(a_exponent(17, 16), 0);
        assert_eq!(a_exponent(17, 17), 2);
    }

    #[test]
    fn minimal_modulus_examples() {
        assert_eq!(minimal_modulus(1), BigUint::from(1u32));
        assert_eq!(minimal_modulus(3), BigUint::from(36u32));
        assert_eq!(minimal_modulus(5), BigUint::from(7200u32));
        assert_eq!(minimal_modulus(10), BigUint::from(9144576000u64));
    }

    #[test]
    fn div_condition_examples() {
        assert!(div_condition(3, 9));
        assert!(!div_condition(2, 3));
        for k in 1..=10 {
            assert!(div_condition(k, k - 1));
        }
    }

    #[test]
    fn alldiv_examples() {
        assert!(alldiv(3, 9));
        assert!(alldiv(4, 64));
        assert!(!alldiv(3, 2));
    }

    #[test]
    fn admissible_residue_examples() {
        assert_eq!(admissible_residues(3).unwrap(), vec![0, 1, 9, 20, 28, 29]);
        assert_eq!(admissible_residues(1).unwrap(), vec![0]);
        assert_eq!(admissible_residues(2).unwrap(), vec![0, 1]);
        assert_eq!(minimal_modulus(2), BigUint::from(4u32));
    }

    #[test]
    fn admissible_residues_rejects_large_k() {
        let err = admissible_residues(9).unwrap_err();
        match err {
            Error::Resource(msg) => {
                assert!(
                    msg.contains("2^10"),
                    "message should carry the factorisation: {msg}"
                );
            }
            other => panic!("expected resource error, got {other:?}"),
        }
    }

    #[test]
    fn least_admissible_examples() {
        assert_eq!(least_admissible(1).unwrap(), Some(1));
        assert_eq!(least_admissible(4).unwrap(), Some(64));
        assert_eq!(least_admissible(8).unwrap(), Some(180225));
    }

    #[test]
    fn least_admissible_matches_direct_scan_small_k() {
        // Independent oracle: scan n upward from k.
        for k in 1..=6u64 {
            let direct = (k..).find(|&n| alldiv(k, n));
            assert_eq!(least_admissible(k).unwrap(), direct, "k={k}");
        }
    }

    #[test]
    fn valuation_of_sum_takes_the_smaller_valuation() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(5);
        let primes = primes_up_to(31);
        let mut checked = 0u32;
        while checked < 2000 {
            let s = (rng.next_u64() % 2_000_000) as i64 - 1_000_000;
            let t = (rng.next_u64() % 2_000_000) as i64 - 1_000_000;
            let p = primes[(rng.next_u64() % primes.len() as u64) as usize];
            let vs = p_valuation(p, s).unwrap();
            let vt = p_valuation(p, t).unwrap();
            if vs < vt {
                assert_eq!(p_valuation(p, t + s).unwrap(), vs, "p={p} s={s} t={t}");
                checked += 1;
            }
        }
    }

    #[test]
    fn prime_power_of_exponent_dominates_k() {
        // p^{a_p(k)} >= k for all p <= k <= 40.
        for k in 2..=40u64 {
            for p in primes_up_to(k) {
                let power = (p as u128).pow(a_exponent(p, k) as u32);
                assert!(power >= k as u128, "p={p} k={k}");
            }
        }
    }

    #[test]
    fn alldiv_is_periodic_mod_minimal_modulus() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(17);
        for k in 1..=6u64 {
            let modulus: u64 = minimal_modulus(k).try_into().unwrap();
            for _ in 0..100 {
                let n = k + rng.next_u64() % 1_000_000;
                assert_eq!(alldiv(k, n), alldiv(k, n + modulus), "k={k} n={n}");
            }
        }
    }

    #[test]
    fn modulus_minimality_witnesses_per_prime() {
        // Dropping a single prime factor of T(k) breaks periodicity of
        // alldiv_k, with one genuine exception: at k = 6 the conjunction of
        // the prime-2 conditions over j = 2..6 is invariant under n -> n+32,
        // because every flip of the j = 6 condition between classes that
        // agree mod 32 is masked by a j <= 5 condition that fails on both.
        // T(6) is still the minimal modulus of the single condition div_6.
        for k in 2..=6u64 {
            let modulus: u64 = minimal_modulus(k).try_into().unwrap();
            for p in primes_up_to(k) {
                let reduced = modulus / p;
                let witness = (0..modulus).find(|&n| alldiv(k, n) != alldiv(k, n + reduced));
                if (k, p) == (6, 2) {
                    assert!(
                        witness.is_none(),
                        "alldiv_6 is invariant mod T(6)/2; witness {witness:?} contradicts"
                    );
                } else {
                    assert!(
                        witness.is_some(),
                        "alldiv_{k} appears periodic mod T({k})/{p} = {reduced}"
                    );
                }
            }
        }
    }

    #[test]
    fn div6_alone_needs_the_full_prime2_exponent() {
        // The prime-2 part of the single condition div_6 does distinguish
        // classes mod 2^6 that agree mod 2^5, so a_2(6) = 6 is correct for
        // div_6 even though the conjunction alldiv_6 collapses to T(6)/2.
        let threshold = 2 * legendre(2, 6);
        let witness = (0..64u64).find(|&r| {
            let lo = r + 64; // representatives >= 6 in the two classes
            let hi = lo + 32;
            falling_factorial_valuation(2, lo, 6).at_least(threshold)
                != falling_factorial_valuation(2, hi, 6).at_least(threshold)
        });
        assert!(witness.is_some());
    }

    #[test]
    fn modulus_stays_below_loose_asymptotic_bound() {
        // log T(k) < 2 k log k for 2 <= k <= 10.
        for k in 2..=10u64 {
            let t: u64 = minimal_modulus(k).try_into().unwrap();
            assert!((t as f64).ln() < 2.0 * k as f64 * (k as f64).ln(), "k={k}");
        }
    }

    #[test]
    fn profile_assembles_consistently() {
        let profile = DivisibilityProfile::compute(3).unwrap();
        assert_eq!(profile.modulus, BigUint::from(36u32));
        assert_eq!(profile.residues, vec![0, 1, 9, 20, 28, 29]);
        assert_eq!(profile.least_n, Some(9));
        assert_eq!(profile.exponents, BTreeMap::from([(2, 2), (3, 2)]));
        // Periodicity spot check straight from the profile.
        let modulus: u64 = profile.modulus.clone().try_into().unwrap();
        for &r in &profile.residues {
            assert!(alldiv(3, r + modulus));
        }
    }
}
