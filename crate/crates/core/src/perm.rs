//! Permutations in one-line notation and the structural operations on them:
//! projection to order types, the inverse/reverse/complement symmetry group,
//! tensor (Kronecker) products, interval partitions and contraction.
//!
//! External convention is 1-indexed throughout: a permutation of size `n`
//! maps positions `1..=n` to values `1..=n`, and its text form is a
//! contiguous digit string for `n <= 9` (e.g. `349852167`) or a
//! comma-separated list otherwise (e.g. `10,3,1,2,...`).

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest permutation size any constructor will produce. Tensor products
/// that would exceed this report a resource error instead of allocating.
pub const MAX_SIZE: usize = 1 << 22;

/// A permutation of `1..=n` in one-line notation: `entries[i]` is the image
/// of position `i + 1`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    entries: Vec<u32>,
}

impl Permutation {
    /// Builds a permutation from one-line notation, validating that the
    /// entries are a rearrangement of `1..=n`.
    pub fn from_one_line(entries: Vec<u32>) -> Result<Self> {
        let n = entries.len();
        if n == 0 {
            return Err(Error::input("permutation must have size at least 1"));
        }
        if n > MAX_SIZE {
            return Err(Error::resource(format!(
                "permutation size {n} exceeds the supported maximum {MAX_SIZE}"
            )));
        }
        let mut seen = vec![false; n];
        for &v in &entries {
            if v == 0 || v as usize > n {
                return Err(Error::input(format!(
                    "entry {v} out of range for a permutation of size {n}"
                )));
            }
            if seen[v as usize - 1] {
                return Err(Error::input(format!("entry {v} repeated")));
            }
            seen[v as usize - 1] = true;
        }
        Ok(Permutation { entries })
    }

    pub fn identity(n: usize) -> Self {
        assert!((1..=MAX_SIZE).contains(&n));
        Permutation {
            entries: (1..=n as u32).collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    /// One-line notation entries; `entries()[i]` is the image of `i + 1`.
    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    /// Image of the 1-indexed position `pos`.
    pub fn image(&self, pos: usize) -> u32 {
        self.entries[pos - 1]
    }

    pub fn inverse(&self) -> Self {
        let mut entries = vec![0u32; self.entries.len()];
        for (i, &v) in self.entries.iter().enumerate() {
            entries[v as usize - 1] = i as u32 + 1;
        }
        Permutation { entries }
    }

    /// Reverse: `result(j) = self(n + 1 - j)`.
    pub fn reverse(&self) -> Self {
        let entries = self.entries.iter().rev().copied().collect();
        Permutation { entries }
    }

    /// Complement: `result(j) = n + 1 - self(j)`.
    pub fn complement(&self) -> Self {
        let n = self.entries.len() as u32;
        let entries = self.entries.iter().map(|&v| n + 1 - v).collect();
        Permutation { entries }
    }

    /// Order type (pattern) of the restriction to a set of 1-indexed
    /// positions: the result has the same pairwise comparisons as `self`
    /// on those positions.
    pub fn project(&self, positions: &[usize]) -> Result<Permutation> {
        if positions.is_empty() {
            return Err(Error::input("projection requires a nonempty position set"));
        }
        let n = self.size();
        let mut sorted = positions.to_vec();
        sorted.sort_unstable();
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                return Err(Error::input(format!("duplicate position {}", w[0])));
            }
        }
        if sorted[0] < 1 || *sorted.last().unwrap() > n {
            return Err(Error::input(format!(
                "position out of range 1..={n} in projection"
            )));
        }
        let values: Vec<u32> = sorted.iter().map(|&p| self.entries[p - 1]).collect();
        Ok(order_type(&values))
    }

    /// Tensor (Kronecker) product. In 0-indexed terms the result is
    /// `j -> b * self(j / b) + other(j mod b)`; block `i` of positions
    /// carries the value interval selected by `self(i)`, internally ordered
    /// by `other`.
    pub fn tensor(&self, other: &Permutation) -> Result<Permutation> {
        let a = self.size();
        let b = other.size();
        let ab = a
            .checked_mul(b)
            .filter(|&ab| ab <= MAX_SIZE)
            .ok_or_else(|| {
                Error::resource(format!(
                    "tensor product size {a} x {b} exceeds the supported maximum {MAX_SIZE}"
                ))
            })?;
        let mut entries = Vec::with_capacity(ab);
        for j in 0..ab {
            let hi = self.entries[j / b] as usize - 1;
            let lo = other.entries[j % b] as usize - 1;
            entries.push((b * hi + lo) as u32 + 1);
        }
        Ok(Permutation { entries })
    }

    /// Orbit under the full symmetry group generated by inverse, reverse and
    /// complement; its size always divides 8.
    pub fn gamma_orbit(&self) -> BTreeSet<Permutation> {
        SymmetryOp::gamma().iter().map(|g| g.apply(self)).collect()
    }

    /// All partitions of the positions into `t` consecutive intervals whose
    /// images are also intervals, in lexicographic order of block lengths.
    pub fn consistent_partitions(&self, t: usize) -> Result<Vec<IntervalPartition>> {
        let k = self.size();
        if t < 1 || t > k {
            return Err(Error::input(format!(
                "block count {t} out of range 1..={k}"
            )));
        }
        let mut out = Vec::new();
        let mut lens = Vec::with_capacity(t);
        self.collect_partitions(t, 0, &mut lens, &mut out);
        Ok(out)
    }

    fn collect_partitions(
        &self,
        t: usize,
        start: usize,
        lens: &mut Vec<usize>,
        out: &mut Vec<IntervalPartition>,
    ) {
        let k = self.size();
        let remaining_blocks = t - lens.len();
        if remaining_blocks == 0 {
            if start == k {
                out.push(IntervalPartition { lens: lens.clone() });
            }
            return;
        }
        // Each later block needs at least one position.
        let max_len = k - start - (remaining_blocks - 1);
        for len in 1..=max_len {
            if self.block_image_is_interval(start, len) {
                lens.push(len);
                self.collect_partitions(t, start + len, lens, out);
                lens.pop();
            }
        }
    }

    fn block_image_is_interval(&self, start: usize, len: usize) -> bool {
        let block = &self.entries[start..start + len];
        let min = *block.iter().min().unwrap();
        let max = *block.iter().max().unwrap();
        (max - min) as usize + 1 == len
    }

    /// Whether `part` is a partition into intervals consistent with `self`.
    pub fn is_consistent(&self, part: &IntervalPartition) -> bool {
        if part.k() != self.size() {
            return false;
        }
        let mut start = 0;
        for &len in &part.lens {
            if !self.block_image_is_interval(start, len) {
                return false;
            }
            start += len;
        }
        true
    }

    /// Contraction: the order type induced on the blocks of a consistent
    /// interval partition.
    pub fn contract(&self, part: &IntervalPartition) -> Result<Permutation> {
        if !self.is_consistent(part) {
            return Err(Error::input(format!(
                "partition {part} is not consistent with {self}"
            )));
        }
        // Block images are disjoint intervals, so any representative works.
        let mut reps = Vec::with_capacity(part.t());
        let mut start = 0;
        for &len in &part.lens {
            reps.push(self.entries[start]);
            start += len;
        }
        Ok(order_type(&reps))
    }
}

/// Order type of a sequence of distinct values: ranks each value within the
/// sequence, preserving all pairwise comparisons.
fn order_type(values: &[u32]) -> Permutation {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_unstable_by_key(|&i| values[i]);
    let mut entries = vec![0u32; values.len()];
    for (rank, &i) in idx.iter().enumerate() {
        entries[i] = rank as u32 + 1;
    }
    Permutation { entries }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_values(f, &self.entries)
    }
}

fn fmt_values(f: &mut fmt::Formatter<'_>, values: &[u32]) -> fmt::Result {
    if values.len() <= 9 {
        for v in values {
            write!(f, "{v}")?;
        }
        Ok(())
    } else {
        let parts: Vec<String> = values.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let entries = parse_values(s)?;
        Permutation::from_one_line(entries)
    }
}

fn parse_values(s: &str) -> Result<Vec<u32>> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::input("empty permutation string"));
    }
    if s.contains(',') {
        s.split(',')
            .map(|part| {
                part.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::input(format!("malformed entry {part:?}")))
            })
            .collect()
    } else {
        s.chars()
            .map(|c| match c.to_digit(10) {
                Some(d) if d >= 1 => Ok(d),
                _ => Err(Error::input(format!(
                    "malformed permutation string {s:?}: expected digits 1-9 or a comma-separated list"
                ))),
            })
            .collect()
    }
}

/// One of the three involutions generating the symmetry group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Generator {
    Inverse,
    Reverse,
    Complement,
}

/// A word over the generators `{inverse, reverse, complement}`, applied
/// right-to-left. The empty word is the identity. The distinct actions of
/// all such words form a dihedral group of order 8.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct SymmetryOp {
    word: Vec<Generator>,
}

impl SymmetryOp {
    pub fn identity() -> Self {
        SymmetryOp { word: vec![] }
    }

    pub fn inverse() -> Self {
        SymmetryOp {
            word: vec![Generator::Inverse],
        }
    }

    pub fn reverse() -> Self {
        SymmetryOp {
            word: vec![Generator::Reverse],
        }
    }

    pub fn complement() -> Self {
        SymmetryOp {
            word: vec![Generator::Complement],
        }
    }

    pub fn from_word(word: Vec<Generator>) -> Self {
        SymmetryOp { word }
    }

    /// `self` composed after `inner`: the result applies `inner` first.
    pub fn after(&self, inner: &SymmetryOp) -> SymmetryOp {
        let mut word = self.word.clone();
        word.extend_from_slice(&inner.word);
        SymmetryOp { word }
    }

    pub fn apply(&self, sigma: &Permutation) -> Permutation {
        let mut result = sigma.clone();
        for g in self.word.iter().rev() {
            result = match g {
                Generator::Inverse => result.inverse(),
                Generator::Reverse => result.reverse(),
                Generator::Complement => result.complement(),
            };
        }
        result
    }

    /// The eight words whose actions enumerate the full group exactly once.
    pub fn gamma() -> [SymmetryOp; 8] {
        use Generator::*;
        [
            SymmetryOp::identity(),
            SymmetryOp::from_word(vec![Inverse]),
            SymmetryOp::from_word(vec![Reverse]),
            SymmetryOp::from_word(vec![Complement]),
            SymmetryOp::from_word(vec![Inverse, Reverse]),
            SymmetryOp::from_word(vec![Inverse, Complement]),
            SymmetryOp::from_word(vec![Reverse, Complement]),
            SymmetryOp::from_word(vec![Inverse, Reverse, Complement]),
        ]
    }
}

impl fmt::Display for SymmetryOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return write!(f, "identity");
        }
        let names: Vec<&str> = self
            .word
            .iter()
            .map(|g| match g {
                Generator::Inverse => "inverse",
                Generator::Reverse => "reverse",
                Generator::Complement => "complement",
            })
            .collect();
        write!(f, "{}", names.join("*"))
    }
}

impl FromStr for SymmetryOp {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "identity" {
            return Ok(SymmetryOp::identity());
        }
        let word = s
            .split('*')
            .map(|name| match name.trim() {
                "inverse" => Ok(Generator::Inverse),
                "reverse" => Ok(Generator::Reverse),
                "complement" => Ok(Generator::Complement),
                other => Err(Error::input(format!(
                    "unknown symmetry generator {other:?}"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SymmetryOp { word })
    }
}

/// A composition of `[k]` into consecutive intervals, stored as the sequence
/// of block lengths. Text form separates blocks with `|`, e.g. `12|3|4`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IntervalPartition {
    lens: Vec<usize>,
}

impl IntervalPartition {
    pub fn from_block_lengths(lens: Vec<usize>) -> Result<Self> {
        if lens.is_empty() {
            return Err(Error::input("partition must have at least one block"));
        }
        if lens.contains(&0) {
            return Err(Error::input("every block length must be at least 1"));
        }
        Ok(IntervalPartition { lens })
    }

    /// All-singleton partition of `[k]`.
    pub fn singletons(k: usize) -> Self {
        assert!(k >= 1);
        IntervalPartition { lens: vec![1; k] }
    }

    /// Single block covering all of `[k]`.
    pub fn whole(k: usize) -> Self {
        assert!(k >= 1);
        IntervalPartition { lens: vec![k] }
    }

    pub fn block_lengths(&self) -> &[usize] {
        &self.lens
    }

    /// Number of elements partitioned.
    pub fn k(&self) -> usize {
        self.lens.iter().sum()
    }

    /// Number of blocks.
    pub fn t(&self) -> usize {
        self.lens.len()
    }

    /// 0-based half-open position ranges of the blocks, in order.
    pub fn block_ranges(&self) -> Vec<std::ops::Range<usize>> {
        let mut out = Vec::with_capacity(self.lens.len());
        let mut start = 0;
        for &len in &self.lens {
            out.push(start..start + len);
            start += len;
        }
        out
    }
}

impl fmt::Display for IntervalPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = self.k();
        let mut pos = 1u32;
        for (i, &len) in self.lens.iter().enumerate() {
            if i > 0 {
                write!(f, "|")?;
            }
            let block: Vec<u32> = (pos..pos + len as u32).collect();
            fmt_values(f, &block)?;
            pos += len as u32;
        }
        debug_assert_eq!(pos as usize - 1, k);
        Ok(())
    }
}

impl FromStr for IntervalPartition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lens = Vec::new();
        let mut next = 1u32;
        for block in s.trim().split('|') {
            let positions = parse_values(block)?;
            for &p in &positions {
                if p != next {
                    return Err(Error::input(format!(
                        "partition {s:?} must list positions 1..k consecutively; expected {next}, found {p}"
                    )));
                }
                next += 1;
            }
            lens.push(positions.len());
        }
        IntervalPartition::from_block_lengths(lens)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn perm(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn project_examples() {
        let sigma = perm("349852167");
        assert_eq!(sigma.project(&[1, 2, 3]).unwrap(), perm("123"));
        let all: Vec<usize> = (1..=9).collect();
        assert_eq!(sigma.project(&all).unwrap(), sigma);
        assert_eq!(perm("21").project(&[1]).unwrap(), perm("1"));
    }

    #[test]
    fn project_errors() {
        let sigma = perm("2413");
        assert!(matches!(sigma.project(&[]), Err(Error::Input(_))));
        assert!(matches!(sigma.project(&[1, 1]), Err(Error::Input(_))));
        assert!(matches!(sigma.project(&[0, 2]), Err(Error::Input(_))));
        assert!(matches!(sigma.project(&[2, 5]), Err(Error::Input(_))));
    }

    #[test]
    fn symmetry_examples() {
        assert_eq!(SymmetryOp::inverse().apply(&perm("2413")), perm("3142"));
        assert_eq!(SymmetryOp::reverse().apply(&perm("123")), perm("321"));
        assert_eq!(SymmetryOp::complement().apply(&perm("2413")), perm("3142"));
    }

    #[test]
    fn generators_are_involutions() {
        for g in [
            SymmetryOp::inverse(),
            SymmetryOp::reverse(),
            SymmetryOp::complement(),
        ] {
            for s in ["1", "21", "2413", "349852167"] {
                let sigma = perm(s);
                assert_eq!(g.apply(&g.apply(&sigma)), sigma, "{g} on {s}");
            }
        }
    }

    #[test]
    fn symmetry_words_parse_and_compose() {
        let word: SymmetryOp = "inverse*reverse".parse().unwrap();
        let sigma = perm("1342");
        assert_eq!(
            word.apply(&sigma),
            SymmetryOp::inverse().apply(&SymmetryOp::reverse().apply(&sigma))
        );
        assert_eq!(word, SymmetryOp::inverse().after(&SymmetryOp::reverse()));
        assert_eq!(
            "identity".parse::<SymmetryOp>().unwrap().apply(&sigma),
            sigma
        );
        assert!("rotate".parse::<SymmetryOp>().is_err());
    }

    #[test]
    fn gamma_has_eight_distinct_actions() {
        // 1342 has trivial stabiliser, so the orbit exhibits all 8 actions.
        let tau = perm("1342");
        let images: BTreeSet<Permutation> =
            SymmetryOp::gamma().iter().map(|g| g.apply(&tau)).collect();
        assert_eq!(images.len(), 8);
    }

    #[test]
    fn gamma_orbit_examples() {
        let orbit12 = perm("12").gamma_orbit();
        assert_eq!(orbit12, [perm("12"), perm("21")].into_iter().collect());

        assert_eq!(perm("1").gamma_orbit(), [perm("1")].into_iter().collect());

        let orbit2413 = perm("2413").gamma_orbit();
        assert_eq!(
            orbit2413,
            [perm("2413"), perm("3142")].into_iter().collect()
        );
    }

    #[test]
    fn gamma_orbits_partition_s4_into_seven_classes() {
        let mut orbits: BTreeSet<BTreeSet<Permutation>> = BTreeSet::new();
        for tau in crate::pattern::all_patterns(4).unwrap() {
            orbits.insert(tau.gamma_orbit());
        }
        let mut sizes: Vec<usize> = orbits.iter().map(|o| o.len()).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![2, 2, 2, 2, 4, 4, 8]);
        // The size-8 class from the third condition list.
        let big: BTreeSet<Permutation> = [
            "1342", "1423", "4132", "2431", "3241", "2314", "4213", "3124",
        ]
        .iter()
        .map(|s| perm(s))
        .collect();
        assert!(orbits.contains(&big));
    }

    #[test]
    fn tensor_examples() {
        let rho = perm("349852167");
        assert_eq!(perm("1").tensor(&rho).unwrap(), rho);
        assert_eq!(perm("21").tensor(&perm("12")).unwrap(), perm("3412"));
        assert_eq!(perm("12").tensor(&perm("21")).unwrap(), perm("2143"));
    }

    #[test]
    fn tensor_is_associative_up_to_size_four() {
        let mut all = Vec::new();
        for k in 1..=4 {
            all.extend(crate::pattern::all_patterns(k).unwrap());
        }
        for a in &all {
            for b in &all {
                let ab = a.tensor(b).unwrap();
                for c in &all {
                    let left = ab.tensor(c).unwrap();
                    let right = a.tensor(&b.tensor(c).unwrap()).unwrap();
                    assert_eq!(left, right, "({a} (x) {b}) (x) {c}");
                }
            }
        }
    }

    #[test]
    fn consistent_partition_examples() {
        let parts = perm("1234").consistent_partitions(3).unwrap();
        let expected: Vec<IntervalPartition> = ["1|2|34", "1|23|4", "12|3|4"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
        assert_eq!(parts, expected);

        assert!(perm("2413").consistent_partitions(2).unwrap().is_empty());
        assert!(perm("2413").consistent_partitions(3).unwrap().is_empty());

        for k in 1..=5 {
            for tau in crate::pattern::all_patterns(k).unwrap() {
                let parts = tau.consistent_partitions(k).unwrap();
                assert_eq!(parts, vec![IntervalPartition::singletons(k)]);
                let whole = tau.consistent_partitions(1).unwrap();
                assert_eq!(whole, vec![IntervalPartition::whole(k)]);
            }
        }
    }

    #[test]
    fn consistent_partitions_enumeration_is_complete() {
        // Against a brute-force filter over all compositions of k.
        fn compositions(k: usize, t: usize) -> Vec<Vec<usize>> {
            let mut out = Vec::new();
            let mut current = Vec::new();
            fn rec(k: usize, t: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
                let used: usize = current.iter().sum();
                if current.len() == t {
                    if used == k {
                        out.push(current.clone());
                    }
                    return;
                }
                let remaining_blocks = t - current.len();
                for len in 1..=(k - used).saturating_sub(remaining_blocks - 1) {
                    current.push(len);
                    rec(k, t, current, out);
                    current.pop();
                }
            }
            rec(k, t, &mut current, &mut out);
            out
        }
        for k in 1..=6usize {
            for tau in crate::pattern::all_patterns(k).unwrap() {
                for t in 1..=k {
                    let listed = tau.consistent_partitions(t).unwrap();
                    let expected: Vec<IntervalPartition> = compositions(k, t)
                        .into_iter()
                        .map(|lens| IntervalPartition::from_block_lengths(lens).unwrap())
                        .filter(|part| tau.is_consistent(part))
                        .collect();
                    assert_eq!(listed, expected, "tau={tau} t={t}");
                }
            }
        }
    }

    #[test]
    fn consistent_partitions_rejects_bad_t() {
        assert!(perm("2413").consistent_partitions(0).is_err());
        assert!(perm("2413").consistent_partitions(5).is_err());
    }

    #[test]
    fn contract_examples() {
        let tau = perm("1243");
        assert_eq!(
            tau.contract(&"1|2|34".parse().unwrap()).unwrap(),
            perm("123")
        );
        assert_eq!(
            tau.contract(&"12|3|4".parse().unwrap()).unwrap(),
            perm("132")
        );
        for k in 1..=5 {
            for tau in crate::pattern::all_patterns(k).unwrap() {
                assert_eq!(
                    tau.contract(&IntervalPartition::singletons(k)).unwrap(),
                    tau
                );
                assert_eq!(
                    tau.contract(&IntervalPartition::whole(k)).unwrap(),
                    perm("1")
                );
            }
        }
    }

    #[test]
    fn contract_rejects_inconsistent_partition() {
        // 2413 maps {1,2} to {2,4}, which is not an interval.
        let res = perm("2413").contract(&"12|34".parse().unwrap());
        assert!(matches!(res, Err(Error::Input(_))));
    }

    #[test]
    fn contract_is_independent_of_representatives() {
        // Flattening one arbitrary representative per block must agree with
        // contract, for every consistent partition of every small pattern.
        for k in 1..=5 {
            for tau in crate::pattern::all_patterns(k).unwrap() {
                for t in 1..=k {
                    for part in tau.consistent_partitions(t).unwrap() {
                        let contracted = tau.contract(&part).unwrap();
                        for offset in 0..k {
                            let reps: Vec<usize> = part
                                .block_ranges()
                                .iter()
                                .map(|r| r.start + (offset % r.len()) + 1)
                                .collect();
                            assert_eq!(tau.project(&reps).unwrap(), contracted);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn partition_text_roundtrip() {
        for s in ["12|3|4", "1|2|34", "1234", "1|2|3|4"] {
            let p: IntervalPartition = s.parse().unwrap();
            assert_eq!(p.to_string(), s);
        }
        let big: IntervalPartition = "1,2|3,4,5,6,7,8,9,10,11,12".parse().unwrap();
        assert_eq!(big.block_lengths(), &[2, 10]);
        assert!("1|3|2".parse::<IntervalPartition>().is_err());
        assert!("2|13".parse::<IntervalPartition>().is_err());
    }

    #[test]
    fn parse_rejects_malformed_strings() {
        assert!("".parse::<Permutation>().is_err());
        assert!("120".parse::<Permutation>().is_err());
        assert!("11".parse::<Permutation>().is_err());
        assert!("13".parse::<Permutation>().is_err());
        assert!("1,2,x".parse::<Permutation>().is_err());
        assert!("10,3,1".parse::<Permutation>().is_err());
    }

    proptest! {
        #[test]
        fn display_parse_roundtrip(entries in proptest::sample::subsequence((1u32..=30).collect::<Vec<_>>(), 1..=30).prop_shuffle()) {
            // Re-rank so the entries form a permutation of 1..=len.
            let p = order_type(&entries);
            let text = p.to_string();
            prop_assert_eq!(text.parse::<Permutation>().unwrap(), p);
        }

        #[test]
        fn tensor_size_is_multiplicative(
            a in proptest::sample::subsequence((1u32..=6).collect::<Vec<_>>(), 1..=6).prop_shuffle(),
            b in proptest::sample::subsequence((1u32..=6).collect::<Vec<_>>(), 1..=6).prop_shuffle(),
        ) {
            let pa = order_type(&a);
            let pb = order_type(&b);
            prop_assert_eq!(pa.tensor(&pb).unwrap().size(), pa.size() * pb.size());
        }

        #[test]
        fn double_application_is_identity(entries in proptest::sample::subsequence((1u32..=12).collect::<Vec<_>>(), 1..=12).prop_shuffle()) {
            let p = order_type(&entries);
            for g in [SymmetryOp::inverse(), SymmetryOp::reverse(), SymmetryOp::complement()] {
                prop_assert_eq!(g.apply(&g.apply(&p)), p.clone());
            }
        }
    }
}
