//! Counting k-patterns of a permutation.
//!
//! All full-vector counts are indexed by the canonical lexicographic
//! enumeration of one-line notations of `S_k` (e.g. for k = 3:
//! 123, 132, 213, 231, 312, 321). Pattern size is capped at 9, the largest
//! k for which a full `k!` vector is a reasonable in-memory object.
//!
//! Three counters are provided: a subset-enumeration reference counter (the
//! oracle everything else is tested against), a specialised fast counter for
//! k <= 4, and an incremental counter that maintains the counts of a
//! partially assigned permutation and supports exact rollback, which is what
//! backtracking search prunes on.

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Largest supported pattern size for full-vector counting (9! slots).
pub const MAX_PATTERN_SIZE: usize = 9;

/// Work budget for the reference counter, in enumerated subsets.
const REFERENCE_WORK_BUDGET: u128 = 2_000_000_000;

pub const FACTORIALS: [usize; 10] = [1, 1, 2, 6, 24, 120, 720, 5040, 40320, 362880];

/// Exact binomial coefficient, without overflow for every (n, k) this crate
/// enumerates.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

fn check_pattern_size(k: usize) -> Result<()> {
    if !(1..=MAX_PATTERN_SIZE).contains(&k) {
        return Err(Error::unsupported(format!(
            "pattern size {k} outside supported range 1..={MAX_PATTERN_SIZE}"
        )));
    }
    Ok(())
}

/// Lexicographic rank of the order type of a sequence of distinct values,
/// via the Lehmer code. Only comparisons are used, so the values need not
/// be 1..=k.
pub fn lex_rank(values: &[u32]) -> usize {
    let k = values.len();
    let mut rank = 0;
    for i in 0..k {
        let smaller_later = values[i + 1..].iter().filter(|&&v| v < values[i]).count();
        rank += smaller_later * FACTORIALS[k - 1 - i];
    }
    rank
}

/// Inverse of [`lex_rank`] restricted to permutations: the `rank`-th
/// element of `S_k` in lexicographic one-line order.
pub fn lex_unrank(k: usize, mut rank: usize) -> Permutation {
    assert!((1..=MAX_PATTERN_SIZE).contains(&k) && rank < FACTORIALS[k]);
    let mut available: Vec<u32> = (1..=k as u32).collect();
    let mut entries = Vec::with_capacity(k);
    for i in 0..k {
        let f = FACTORIALS[k - 1 - i];
        let d = rank / f;
        rank %= f;
        entries.push(available.remove(d));
    }
    Permutation::from_one_line(entries).expect("unrank produces valid permutations")
}

/// All of `S_k` in canonical lexicographic order.
pub fn all_patterns(k: usize) -> Result<Vec<Permutation>> {
    check_pattern_size(k)?;
    Ok((0..FACTORIALS[k]).map(|r| lex_unrank(k, r)).collect())
}

/// The vector of pattern counts `{X^tau(sigma)}` for all `tau` of one size,
/// in canonical lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternCounts {
    k: usize,
    n: usize,
    counts: Vec<u64>,
}

impl PatternCounts {
    fn new_zero(k: usize, n: usize) -> Self {
        PatternCounts {
            k,
            n,
            counts: vec![0; FACTORIALS[k]],
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Size of the host permutation the counts were taken in.
    pub fn host_size(&self) -> usize {
        self.n
    }

    /// Counts in canonical lexicographic pattern order.
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn get(&self, tau: &Permutation) -> u64 {
        assert_eq!(tau.size(), self.k, "pattern size mismatch");
        self.counts[lex_rank(tau.entries())]
    }

    pub fn iter(&self) -> impl Iterator<Item = (Permutation, u64)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .map(move |(r, &c)| (lex_unrank(self.k, r), c))
    }

    pub fn total(&self) -> u128 {
        self.counts.iter().map(|&c| c as u128).sum()
    }

    pub fn all_equal(&self) -> bool {
        self.counts.windows(2).all(|w| w[0] == w[1])
    }
}

/// Reference counter: explicit enumeration of all `C(n, k)` position
/// subsets. Authoritative oracle for every other counter in the crate.
pub fn count_patterns_reference(sigma: &Permutation, k: usize) -> Result<PatternCounts> {
    check_pattern_size(k)?;
    let n = sigma.size();
    let mut result = PatternCounts::new_zero(k, n);
    if k > n {
        return Ok(result);
    }
    let work = binomial(n, k);
    if work > REFERENCE_WORK_BUDGET {
        return Err(Error::resource(format!(
            "reference counting needs {work} subset enumerations (budget {REFERENCE_WORK_BUDGET})"
        )));
    }
    let entries = sigma.entries();
    // Lexicographic combination odometer over 0-based positions.
    let mut comb: Vec<usize> = (0..k).collect();
    let mut values = vec![0u32; k];
    loop {
        for (slot, &pos) in values.iter_mut().zip(comb.iter()) {
            *slot = entries[pos];
        }
        result.counts[lex_rank(&values)] += 1;
        // Advance.
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(result);
            }
            i -= 1;
            if comb[i] != i + n - k {
                break;
            }
        }
        comb[i] += 1;
        for j in i + 1..k {
            comb[j] = comb[j - 1] + 1;
        }
    }
}

/// Fenwick tree over values 1..=n, for prefix counts.
struct Fenwick {
    tree: Vec<u32>,
}

impl Fenwick {
    fn new(n: usize) -> Self {
        Fenwick {
            tree: vec![0; n + 1],
        }
    }

    fn add(&mut self, mut value: usize) {
        while value < self.tree.len() {
            self.tree[value] += 1;
            value += value & value.wrapping_neg();
        }
    }

    /// Number of inserted values `<= value`.
    fn prefix(&self, mut value: usize) -> u64 {
        let mut acc = 0u64;
        while value > 0 {
            acc += self.tree[value] as u64;
            value -= value & value.wrapping_neg();
        }
        acc
    }
}

fn count_k1(sigma: &Permutation) -> PatternCounts {
    let mut result = PatternCounts::new_zero(1, sigma.size());
    result.counts[0] = sigma.size() as u64;
    result
}

fn count_k2(sigma: &Permutation) -> PatternCounts {
    let n = sigma.size();
    let mut result = PatternCounts::new_zero(2, n);
    if n < 2 {
        return result;
    }
    let mut seen = Fenwick::new(n);
    let mut non_inversions = 0u64;
    for &v in sigma.entries() {
        non_inversions += seen.prefix(v as usize - 1);
        seen.add(v as usize);
    }
    let pairs = binomial(n, 2) as u64;
    result.counts[0] = non_inversions;
    result.counts[1] = pairs - non_inversions;
    result
}

fn count_k3(sigma: &Permutation) -> PatternCounts {
    let n = sigma.size();
    let mut result = PatternCounts::new_zero(3, n);
    if n < 3 {
        return result;
    }
    let entries = sigma.entries();
    // For each pair (i, j) with i < j, the third element sits to the right
    // of j; its value region relative to {sigma(i), sigma(j)} determines the
    // pattern. Keep a Fenwick tree of the values right of j.
    let mut suffix = Fenwick::new(n);
    for j in (1..n).rev() {
        let y = entries[j] as usize;
        let suffix_size = (n - 1 - j) as u64;
        for &xv in &entries[..j] {
            let x = xv as usize;
            let (lo, hi) = if x < y { (x, y) } else { (y, x) };
            let below = suffix.prefix(lo - 1);
            let between = suffix.prefix(hi - 1) - suffix.prefix(lo);
            let above = suffix_size - suffix.prefix(hi);
            if x < y {
                result.counts[0] += above; // 123
                result.counts[1] += between; // 132
                result.counts[3] += below; // 231
            } else {
                result.counts[2] += above; // 213
                result.counts[4] += between; // 312
                result.counts[5] += below; // 321
            }
        }
        suffix.add(y);
    }
    result
}

fn count_k4(sigma: &Permutation) -> PatternCounts {
    let n = sigma.size();
    let mut result = PatternCounts::new_zero(4, n);
    if n < 4 {
        return result;
    }
    let v = sigma.entries();
    let mut quad = [0u32; 4];
    for a in 0..n - 3 {
        quad[0] = v[a];
        for b in a + 1..n - 2 {
            quad[1] = v[b];
            for c in b + 1..n - 1 {
                quad[2] = v[c];
                for &vd in &v[c + 1..] {
                    quad[3] = vd;
                    result.counts[lex_rank(&quad)] += 1;
                }
            }
        }
    }
    result
}

/// Fast counter: identical output to [`count_patterns_reference`], with
/// specialised paths for k <= 4.
pub fn count_patterns_fast(sigma: &Permutation, k: usize) -> Result<PatternCounts> {
    check_pattern_size(k)?;
    match k {
        1 => Ok(count_k1(sigma)),
        2 => Ok(count_k2(sigma)),
        3 => Ok(count_k3(sigma)),
        4 => Ok(count_k4(sigma)),
        _ => count_patterns_reference(sigma, k),
    }
}

/// Result of a k-symmetry decision, with the counts as witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetryWitness {
    pub symmetric: bool,
    /// True when `n < k`, so every count is zero.
    pub trivial: bool,
    pub counts: PatternCounts,
}

/// Decides whether all `k!` pattern counts of `sigma` are equal.
pub fn is_k_symmetric(sigma: &Permutation, k: usize) -> Result<SymmetryWitness> {
    let counts = count_patterns_fast(sigma, k)?;
    Ok(SymmetryWitness {
        symmetric: counts.all_equal(),
        trivial: sigma.size() < k,
        counts,
    })
}

/// Incremental pattern counter over a partially assigned permutation.
///
/// Values are placed one at a time (left-to-right with [`append`], or at
/// arbitrary positions with [`place`]); after each placement the counts
/// equal the reference counts of the partial sequence read in position
/// order. Placement cost is `O(C(p, k-1))` subset scans; [`unplace`] rolls
/// back exactly.
///
/// A counter is a single-threaded session object; create one per worker.
///
/// [`append`]: IncrementalCounter::append
/// [`place`]: IncrementalCounter::place
/// [`unplace`]: IncrementalCounter::unplace
#[derive(Debug, Clone)]
pub struct IncrementalCounter {
    k: usize,
    n: usize,
    /// Assigned (position, value) pairs, sorted by position (both 1-based).
    assigned: Vec<(u32, u32)>,
    /// Placement order, for rollback.
    history: Vec<(u32, u32)>,
    value_used: Vec<bool>,
    position_used: Vec<bool>,
    counts: Vec<u64>,
}

impl IncrementalCounter {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        check_pattern_size(k)?;
        if n < 1 {
            return Err(Error::input("host size must be at least 1"));
        }
        Ok(IncrementalCounter {
            k,
            n,
            assigned: Vec::with_capacity(n),
            history: Vec::with_capacity(n),
            value_used: vec![false; n + 1],
            position_used: vec![false; n + 1],
            counts: vec![0; FACTORIALS[k]],
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn host_size(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.assigned.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assigned.is_empty()
    }

    /// Raw counts in canonical pattern order.
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Snapshot of the counts as a [`PatternCounts`] of the partial
    /// sequence (host size = number of assigned values).
    pub fn to_pattern_counts(&self) -> PatternCounts {
        PatternCounts {
            k: self.k,
            n: self.assigned.len(),
            counts: self.counts.clone(),
        }
    }

    /// Appends `value` at the leftmost unassigned position.
    pub fn append(&mut self, value: u32) -> Result<()> {
        let pos = (1..=self.n as u32)
            .find(|&p| !self.position_used[p as usize])
            .ok_or_else(|| Error::input("all positions already assigned"))?;
        self.place(pos, value)
    }

    /// Assigns `value` at 1-based `position`.
    pub fn place(&mut self, position: u32, value: u32) -> Result<()> {
        if position == 0 || position as usize > self.n {
            return Err(Error::input(format!(
                "position {position} out of range 1..={}",
                self.n
            )));
        }
        if value == 0 || value as usize > self.n {
            return Err(Error::input(format!(
                "value {value} out of range 1..={}",
                self.n
            )));
        }
        if self.position_used[position as usize] {
            return Err(Error::input(format!(
                "position {position} already assigned"
            )));
        }
        if self.value_used[value as usize] {
            return Err(Error::input(format!("value {value} already used")));
        }
        let idx = self.assigned.partition_point(|&(p, _)| p < position);
        self.scan_subsets(idx, position, value, 1);
        self.assigned.insert(idx, (position, value));
        self.history.push((position, value));
        self.position_used[position as usize] = true;
        self.value_used[value as usize] = true;
        Ok(())
    }

    /// Removes the most recently placed value, restoring the previous
    /// counts exactly. Returns the removed (position, value).
    pub fn unplace(&mut self) -> Option<(u32, u32)> {
        let (position, value) = self.history.pop()?;
        let idx = self.assigned.partition_point(|&(p, _)| p < position);
        debug_assert_eq!(self.assigned[idx], (position, value));
        self.assigned.remove(idx);
        self.scan_subsets(idx, position, value, -1);
        self.position_used[position as usize] = false;
        self.value_used[value as usize] = false;
        Some((position, value))
    }

    /// Adds `delta` to the count of every k-subset containing the entry
    /// (`position`, `value`), where `insert_idx` is its slot among the
    /// other assigned entries (which must not currently include it).
    fn scan_subsets(&mut self, insert_idx: usize, _position: u32, value: u32, delta: i64) {
        let others = self.assigned.len();
        if self.k == 1 {
            self.counts[0] = (self.counts[0] as i64 + delta) as u64;
            return;
        }
        if others < self.k - 1 {
            return;
        }
        let mut chosen = vec![0usize; self.k - 1];
        let mut values = vec![0u32; self.k];
        self.scan_subsets_rec(0, 0, insert_idx, value, delta, &mut chosen, &mut values);
    }

    #[allow(clippy::too_many_arguments)]
    fn scan_subsets_rec(
        &mut self,
        depth: usize,
        start: usize,
        insert_idx: usize,
        value: u32,
        delta: i64,
        chosen: &mut [usize],
        values: &mut [u32],
    ) {
        let need = self.k - 1;
        if depth == need {
            // Merge the new value into position order: all chosen entries
            // with index < insert_idx sit left of it.
            let left = chosen.iter().take_while(|&&c| c < insert_idx).count();
            for (slot, &c) in values[..left].iter_mut().zip(chosen.iter()) {
                *slot = self.assigned[c].1;
            }
            values[left] = value;
            for (slot, &c) in values[left + 1..].iter_mut().zip(chosen[left..].iter()) {
                *slot = self.assigned[c].1;
            }
            let rank = lex_rank(values);
            self.counts[rank] = (self.counts[rank] as i64 + delta) as u64;
            return;
        }
        // Leave room for the remaining picks.
        let last = self.assigned.len() - (need - depth - 1);
        for c in start..last {
            chosen[depth] = c;
            self.scan_subsets_rec(depth + 1, c + 1, insert_idx, value, delta, chosen, values);
        }
    }
}
