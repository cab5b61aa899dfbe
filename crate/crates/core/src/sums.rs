//! Subset-sum reachability on packed bit tables.
//!
//! Everything here is exact integer work. A [`SumSet`] records which values in
//! `0..=cap` are sums of distinct elements of an [`IntSet`]; sums above the cap
//! are dropped, and the `truncated` flag remembers that they exist so callers
//! never mistake "not tracked" for "not reachable".

use std::fmt::{self, Write as _};
use std::path::Path;

use crate::error::{memory_budget_from_env, Error, Result};

/// A finite set of distinct positive integers, stored in increasing order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct IntSet(Vec<u64>);

impl IntSet {
    /// Builds a set from elements in any order. Zero and duplicates are rejected.
    pub fn new(mut elements: Vec<u64>) -> Result<Self> {
        elements.sort_unstable();
        if elements.first() == Some(&0) {
            return Err(Error::invalid("set elements must be positive"));
        }
        if let Some(w) = elements.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::invalid(format!("duplicate element {}", w[0])));
        }
        Ok(IntSet(elements))
    }

    pub fn empty() -> Self {
        IntSet(Vec::new())
    }

    /// All integers in `[lo, hi]`; empty when `lo > hi`.
    pub fn range(lo: u64, hi: u64) -> Result<Self> {
        if lo == 0 {
            return Err(Error::invalid("set elements must be positive"));
        }
        Ok(IntSet((lo..=hi).collect()))
    }

    pub(crate) fn from_sorted_unchecked(elements: Vec<u64>) -> Self {
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(elements.first().is_none_or(|&x| x > 0));
        IntSet(elements)
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.0.iter().copied()
    }

    pub fn contains(&self, x: u64) -> bool {
        self.0.binary_search(&x).is_ok()
    }

    pub fn max(&self) -> Option<u64> {
        self.0.last().copied()
    }

    /// Sum of all elements.
    pub fn total(&self) -> u128 {
        self.0.iter().map(|&x| x as u128).sum()
    }

    pub fn is_subset(&self, other: &IntSet) -> bool {
        self.iter().all(|x| other.contains(x))
    }

    pub fn union(&self, other: &IntSet) -> IntSet {
        let mut v: Vec<u64> = self.0.iter().chain(other.0.iter()).copied().collect();
        v.sort_unstable();
        v.dedup();
        IntSet(v)
    }

    /// Parses the one-integer-per-line text format. Blank lines are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let v: u64 = line.parse().map_err(|_| Error::Parse {
                line: i + 1,
                message: format!("`{line}` is not a non-negative integer"),
            })?;
            if v == 0 {
                return Err(Error::Parse {
                    line: i + 1,
                    message: "elements must be positive".into(),
                });
            }
            if !seen.insert(v) {
                return Err(Error::Parse {
                    line: i + 1,
                    message: format!("duplicate element {v}"),
                });
            }
            out.push(v);
        }
        out.sort_unstable();
        Ok(IntSet(out))
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for x in self.iter() {
            let _ = writeln!(s, "{x}");
        }
        s
    }
}

impl fmt::Display for IntSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("}")
    }
}

/// Packed bit table over `0..len`.
#[derive(Clone, Debug, PartialEq, Eq)]
struct BitTable {
    words: Vec<u64>,
    len: usize,
}

impl BitTable {
    fn zeros(len: usize) -> Self {
        BitTable {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    fn get(&self, i: usize) -> bool {
        i < self.len && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    fn mask_tail(&mut self) {
        let r = self.len % 64;
        if r != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << r) - 1;
            }
        }
    }

    /// `self |= self << shift`, touching only words up to `top_word`.
    ///
    /// Words are visited high to low, so every read sees the value from before
    /// this element was added. That is what keeps elements distinct.
    fn or_shifted_self(&mut self, shift: usize, top_word: usize) {
        let n = self.words.len();
        let (ws, bs) = (shift / 64, shift % 64);
        if ws >= n {
            return;
        }
        let top = top_word.min(n - 1);
        let w = &mut self.words;
        if bs == 0 {
            for i in (ws..=top).rev() {
                w[i] |= w[i - ws];
            }
        } else {
            for i in (ws + 1..=top).rev() {
                w[i] |= (w[i - ws] << bs) | (w[i - ws - 1] >> (64 - bs));
            }
            if ws <= top {
                w[ws] |= w[0] << bs;
            }
        }
        self.mask_tail();
    }

    /// `dst |= src << shift` for two distinct tables of the same length.
    fn or_shifted_from(dst: &mut BitTable, src: &BitTable, shift: usize) {
        let n = dst.words.len();
        let (ws, bs) = (shift / 64, shift % 64);
        if ws >= n {
            return;
        }
        if bs == 0 {
            for i in ws..n {
                dst.words[i] |= src.words[i - ws];
            }
        } else {
            dst.words[ws] |= src.words[0] << bs;
            for i in ws + 1..n {
                dst.words[i] |= (src.words[i - ws] << bs) | (src.words[i - ws - 1] >> (64 - bs));
            }
        }
        dst.mask_tail();
    }

    fn or_assign(&mut self, other: &BitTable) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    /// First set bit in `[from, to]`, if any.
    fn next_one(&self, from: usize, to: usize) -> Option<usize> {
        self.scan(from, to, false)
    }

    /// First clear bit in `[from, to]`, if any.
    fn next_zero(&self, from: usize, to: usize) -> Option<usize> {
        self.scan(from, to, true)
    }

    fn scan(&self, from: usize, to: usize, want_zero: bool) -> Option<usize> {
        if from > to || from >= self.len {
            return None;
        }
        let to = to.min(self.len - 1);
        let mut wi = from / 64;
        let mut word = if want_zero { !self.words[wi] } else { self.words[wi] };
        word &= !0u64 << (from % 64);
        loop {
            if word != 0 {
                let pos = wi * 64 + word.trailing_zeros() as usize;
                return (pos <= to).then_some(pos);
            }
            wi += 1;
            if wi * 64 > to {
                return None;
            }
            word = if want_zero { !self.words[wi] } else { self.words[wi] };
        }
    }

    fn count_ones(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }
}

/// Reachable subset sums in `0..=cap`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SumSet {
    cap: u64,
    bits: BitTable,
    truncated: bool,
}

impl SumSet {
    fn with_cap(cap: u64) -> Self {
        let len = usize::try_from(cap).expect("cap exceeds address space") + 1;
        let mut bits = BitTable::zeros(len);
        bits.set(0);
        SumSet {
            cap,
            bits,
            truncated: false,
        }
    }

    /// Inclusive upper bound of tracked sums.
    pub fn cap(&self) -> u64 {
        self.cap
    }

    /// True when the source set has sums above the cap that were not tracked.
    pub fn truncated(&self) -> bool {
        self.truncated
    }

    pub fn contains(&self, s: u64) -> bool {
        s <= self.cap && self.bits.get(s as usize)
    }

    /// Number of tracked members, including 0.
    pub fn count(&self) -> u64 {
        self.bits.count_ones()
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        let mut pos = 0usize;
        let top = self.cap as usize;
        std::iter::from_fn(move || {
            let p = self.bits.next_one(pos, top)?;
            pos = p + 1;
            Some(p as u64)
        })
    }

    fn check_range(&self, lo: u64, hi: u64) -> Result<()> {
        if lo > hi || hi > self.cap {
            return Err(Error::RangeOutsideCap { lo, hi, cap: self.cap });
        }
        Ok(())
    }

    /// The maximal runs of consecutive members inside `[lo, hi]`.
    pub fn maximal_intervals(&self, lo: u64, hi: u64) -> Result<IntervalList> {
        self.check_range(lo, hi)?;
        let (mut pos, top) = (lo as usize, hi as usize);
        let mut out = Vec::new();
        while let Some(start) = self.bits.next_one(pos, top) {
            let end = match self.bits.next_zero(start, top) {
                Some(z) => z - 1,
                None => top,
            };
            out.push((start as u64, end as u64));
            pos = end + 2;
        }
        Ok(IntervalList(out))
    }

    /// True iff every integer of `[lo, hi]` is a member.
    pub fn contains_interval(&self, lo: u64, hi: u64) -> Result<bool> {
        self.check_range(lo, hi)?;
        Ok(self.bits.next_zero(lo as usize, hi as usize).is_none())
    }

    /// The maximal run of members containing `x`, if `x` is a member.
    pub fn run_containing(&self, x: u64) -> Option<(u64, u64)> {
        if !self.contains(x) {
            return None;
        }
        let xi = x as usize;
        let hi = self
            .bits
            .next_zero(xi, self.cap as usize)
            .map_or(self.cap, |z| z as u64 - 1);
        // walk down word by word
        let mut lo = xi;
        while lo > 0 && self.bits.get(lo - 1) {
            if lo.is_multiple_of(64) && self.bits.words[lo / 64 - 1] == !0 {
                lo -= 64;
            } else {
                lo -= 1;
            }
        }
        Some((lo as u64, hi))
    }
}

/// Σ(A) restricted to `0..=cap`.
///
/// Elements larger than `cap` cannot reach a tracked value and are skipped;
/// they still count towards the truncation flag.
pub fn subset_sums(set: &IntSet, cap: u64) -> SumSet {
    let mut out = SumSet::with_cap(cap);
    out.truncated = set.total() > cap as u128;
    let mut reach: u128 = 0;
    for a in set.iter().filter(|&a| a <= cap) {
        reach = (reach + a as u128).min(cap as u128);
        out.bits.or_shifted_self(a as usize, reach as usize / 64);
    }
    out
}

/// Σ^[k](A) restricted to `0..=cap`, under the memory budget from the environment.
pub fn bounded_subset_sums(set: &IntSet, k: usize, cap: u64) -> Result<SumSet> {
    bounded_subset_sums_with_budget(set, k, cap, memory_budget_from_env())
}

/// Σ^[k](A) restricted to `0..=cap`.
///
/// Keeps one layer per cardinality `0..=k`; layers are updated from the top
/// down for each element so no element is used twice.
pub fn bounded_subset_sums_with_budget(set: &IntSet, k: usize, cap: u64, budget: u64) -> Result<SumSet> {
    if k >= set.len() {
        return Ok(subset_sums(set, cap));
    }
    let words = (cap as u128 + 1).div_ceil(64);
    let requested = words * 8 * (k as u128 + 2);
    if requested > budget as u128 {
        return Err(Error::MemoryBudget { requested, budget });
    }

    let mut layers: Vec<BitTable> = (0..=k).map(|_| BitTable::zeros(cap as usize + 1)).collect();
    layers[0].set(0);
    for a in set.iter().filter(|&a| a <= cap) {
        for j in (1..=k).rev() {
            let (lower, upper) = layers.split_at_mut(j);
            BitTable::or_shifted_from(&mut upper[0], &lower[j - 1], a as usize);
        }
    }

    let mut out = SumSet::with_cap(cap);
    for layer in &layers {
        out.bits.or_assign(layer);
    }
    // The largest k-subset sum is the sum of the k largest elements.
    let top_k: u128 = set.as_slice().iter().rev().take(k).map(|&x| x as u128).sum();
    out.truncated = top_k > cap as u128;
    Ok(out)
}

/// Sorted, pairwise disjoint, non-adjacent closed integer intervals.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IntervalList(Vec<(u64, u64)>);

impl IntervalList {
    /// Merges arbitrary closed ranges into maximal intervals. Ranges with `lo > hi` are dropped.
    pub fn from_ranges(ranges: impl IntoIterator<Item = (u64, u64)>) -> Self {
        let mut v: Vec<(u64, u64)> = ranges.into_iter().filter(|(lo, hi)| lo <= hi).collect();
        v.sort_unstable();
        let mut out: Vec<(u64, u64)> = Vec::with_capacity(v.len());
        for (lo, hi) in v {
            match out.last_mut() {
                Some(last) if lo <= last.1.saturating_add(1) => last.1 = last.1.max(hi),
                _ => out.push((lo, hi)),
            }
        }
        IntervalList(out)
    }

    pub fn as_slice(&self) -> &[(u64, u64)] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.0.iter().copied()
    }

    /// Number of intervals.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, x: u64) -> bool {
        let i = self.0.partition_point(|&(_, hi)| hi < x);
        self.0.get(i).is_some_and(|&(lo, _)| lo <= x)
    }

    /// Number of integers covered.
    pub fn measure(&self) -> u128 {
        self.0.iter().map(|&(lo, hi)| (hi - lo) as u128 + 1).sum()
    }

    /// Number of covered integers `x` with `x <= t`.
    pub fn count_at_most(&self, t: u64) -> u64 {
        self.0
            .iter()
            .take_while(|&&(lo, _)| lo <= t)
            .map(|&(lo, hi)| hi.min(t) - lo + 1)
            .sum()
    }

    pub fn clip(&self, lo: u64, hi: u64) -> IntervalList {
        IntervalList(
            self.0
                .iter()
                .filter(|&&(a, b)| b >= lo && a <= hi)
                .map(|&(a, b)| (a.max(lo), b.min(hi)))
                .collect(),
        )
    }

    /// The longest interval; ties go to the leftmost.
    pub fn longest(&self) -> Option<(u64, u64)> {
        self.0
            .iter()
            .copied()
            .fold(None, |best: Option<(u64, u64)>, iv| match best {
                Some(b) if b.1 - b.0 >= iv.1 - iv.0 => Some(b),
                _ => Some(iv),
            })
    }

    /// CSV with header `lo,hi`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("lo,hi\n");
        for (lo, hi) in self.iter() {
            let _ = writeln!(s, "{lo},{hi}");
        }
        s
    }
}

/// A half-open run `[start, start + len)` of covered integers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Coverage {
    pub start: u64,
    pub len: u64,
}

impl Coverage {
    pub fn new(start: u64, len: u64) -> Self {
        Coverage { start, len }
    }

    /// Last covered integer.
    pub fn end_inclusive(&self) -> u64 {
        self.start + self.len - 1
    }
}

/// Extends a covered run by adding new elements one at a time.
///
/// If Σ(A) covers `[x, x + y)` and each addition satisfies
/// `a_i <= y + a_1 + ... + a_{i-1}` (checked in the given order) and lies
/// outside `A`, then Σ(A ∪ {a_1..a_s}) covers `[x, x + y + a_1 + ... + a_s)`.
/// The order is taken as given; no reordering is attempted. Membership of the
/// additions in `A` is the caller's responsibility.
pub fn graham_extend(base: Coverage, additions: &[u64]) -> Result<Coverage> {
    if base.len == 0 {
        return Err(Error::invalid("base coverage must have length at least 1"));
    }
    let mut seen = std::collections::HashSet::with_capacity(additions.len());
    for &a in additions {
        if a == 0 {
            return Err(Error::invalid("additions must be positive"));
        }
        if !seen.insert(a) {
            return Err(Error::invalid(format!("duplicate addition {a}")));
        }
    }
    let mut len = base.len as u128;
    for (i, &a) in additions.iter().enumerate() {
        if a as u128 > len {
            return Err(Error::ConditionViolated {
                index: i + 1,
                addition: a,
                limit: len,
            });
        }
        len += a as u128;
    }
    let len = u64::try_from(len).map_err(|_| Error::invalid("extended length overflows u64"))?;
    Ok(Coverage { start: base.start, len })
}

/// `{x / d : x ∈ A, d | x}`.
pub fn divisor_reduce(set: &IntSet, d: u64) -> Result<IntSet> {
    if d == 0 {
        return Err(Error::invalid("divisor must be at least 1"));
    }
    Ok(IntSet::from_sorted_unchecked(
        set.iter().filter(|x| x % d == 0).map(|x| x / d).collect(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[u64]) -> IntSet {
        IntSet::new(v.to_vec()).unwrap()
    }

    fn members(s: &SumSet) -> Vec<u64> {
        s.iter().collect()
    }

    #[test]
    fn intset_rejects_zero_and_duplicates() {
        assert!(IntSet::new(vec![3, 0]).is_err());
        assert!(IntSet::new(vec![3, 5, 3]).is_err());
        assert_eq!(set(&[7, 3, 5]).as_slice(), &[3, 5, 7]);
    }

    #[test]
    fn parse_file_format() {
        let s = IntSet::parse("7\n3\n\n5\n").unwrap();
        assert_eq!(s.as_slice(), &[3, 5, 7]);
        assert!(matches!(IntSet::parse("3\n3\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(IntSet::parse("3\nx\n"), Err(Error::Parse { line: 2, .. })));
        assert!(IntSet::parse("0\n").is_err());
        assert_eq!(IntSet::parse(&s.to_text()).unwrap(), s);
    }

    #[test]
    fn empty_set_sums_to_zero_only() {
        let s = subset_sums(&IntSet::empty(), 10);
        assert_eq!(members(&s), vec![0]);
        assert!(!s.truncated());
    }

    #[test]
    fn small_sum_set() {
        let s = subset_sums(&set(&[3, 5, 7]), 20);
        assert_eq!(members(&s), vec![0, 3, 5, 7, 8, 10, 12, 15]);
        assert!(!s.truncated());
        let s = subset_sums(&set(&[1, 2, 4, 8]), 15);
        assert_eq!(members(&s), (0..=15).collect::<Vec<_>>());
    }

    #[test]
    fn truncation_flag() {
        let s = subset_sums(&set(&[3, 5, 7]), 14);
        assert!(s.truncated());
        assert_eq!(members(&s), vec![0, 3, 5, 7, 8, 10, 12]);
        // elements above the cap are skipped but still truncate
        let s = subset_sums(&set(&[2, 100]), 10);
        assert!(s.truncated());
        assert_eq!(members(&s), vec![0, 2]);
    }

    #[test]
    fn shifts_across_word_boundaries() {
        let s = subset_sums(&set(&[64, 65, 130]), 300);
        assert_eq!(members(&s), vec![0, 64, 65, 129, 130, 194, 195, 259]);
    }

    #[test]
    fn bounded_layers() {
        let a = set(&[3, 5, 7]);
        assert_eq!(members(&bounded_subset_sums(&a, 0, 20).unwrap()), vec![0]);
        assert_eq!(members(&bounded_subset_sums(&a, 1, 20).unwrap()), vec![0, 3, 5, 7]);
        assert_eq!(
            members(&bounded_subset_sums(&a, 2, 20).unwrap()),
            vec![0, 3, 5, 7, 8, 10, 12]
        );
        assert_eq!(bounded_subset_sums(&a, 3, 20).unwrap(), subset_sums(&a, 20));
    }

    #[test]
    fn bounded_truncation_uses_top_k() {
        let a = set(&[3, 5, 7]);
        assert!(!bounded_subset_sums(&a, 2, 12).unwrap().truncated());
        assert!(bounded_subset_sums(&a, 2, 11).unwrap().truncated());
    }

    #[test]
    fn bounded_memory_budget() {
        let a = set(&[1, 2, 3, 4]);
        let err = bounded_subset_sums_with_budget(&a, 2, 1 << 20, 1024).unwrap_err();
        assert!(matches!(err, Error::MemoryBudget { .. }));
    }

    #[test]
    fn intervals_of_small_set() {
        let s = subset_sums(&set(&[3, 5, 7]), 15);
        let iv = s.maximal_intervals(0, 15).unwrap();
        assert_eq!(
            iv.as_slice(),
            &[(0, 0), (3, 3), (5, 5), (7, 8), (10, 10), (12, 12), (15, 15)]
        );
        assert_eq!(s.maximal_intervals(7, 8).unwrap().as_slice(), &[(7, 8)]);
        let full = subset_sums(&set(&[1, 2, 4, 8]), 15);
        assert_eq!(full.maximal_intervals(0, 15).unwrap().as_slice(), &[(0, 15)]);
        assert!(s.maximal_intervals(0, 16).is_err());
        assert!(s.maximal_intervals(5, 4).is_err());
    }

    #[test]
    fn contains_interval_cases() {
        let full = subset_sums(&set(&[1, 2, 4, 8]), 15);
        assert!(full.contains_interval(0, 15).unwrap());
        let s = subset_sums(&set(&[3, 5, 7]), 15);
        assert!(s.contains_interval(7, 8).unwrap());
        assert!(!s.contains_interval(7, 10).unwrap());
        assert!(matches!(s.contains_interval(0, 99), Err(Error::RangeOutsideCap { .. })));
    }

    #[test]
    fn run_containing_long_runs() {
        let a = IntSet::range(1, 40).unwrap();
        let s = subset_sums(&a, 1000);
        assert_eq!(s.run_containing(500), Some((0, 820)));
        assert_eq!(s.run_containing(900), None);
        let s = subset_sums(&set(&[3, 5, 7]), 15);
        assert_eq!(s.run_containing(8), Some((7, 8)));
    }

    #[test]
    fn interval_list_merges() {
        let l = IntervalList::from_ranges([(5, 9), (1, 3), (4, 4), (20, 25), (22, 30), (8, 2)]);
        assert_eq!(l.as_slice(), &[(1, 9), (20, 30)]);
        assert_eq!(l.measure(), 20);
        assert_eq!(l.count_at_most(22), 12);
        assert!(l.contains(20) && !l.contains(10));
        assert_eq!(l.clip(3, 21).as_slice(), &[(3, 9), (20, 21)]);
        assert_eq!(l.longest(), Some((20, 30)));
        assert_eq!(l.to_csv(), "lo,hi\n1,9\n20,30\n");
    }

    #[test]
    fn graham_examples() {
        assert_eq!(graham_extend(Coverage::new(0, 7), &[7]).unwrap(), Coverage::new(0, 14));
        assert!(matches!(
            graham_extend(Coverage::new(0, 4), &[5]),
            Err(Error::ConditionViolated { index: 1, .. })
        ));
        assert_eq!(
            graham_extend(Coverage::new(0, 2), &[2, 3, 5]).unwrap(),
            Coverage::new(0, 12)
        );
        // brute-force the two positive examples
        assert!(subset_sums(&set(&[1, 2, 3, 7]), 13).contains_interval(0, 13).unwrap());
        assert!(subset_sums(&set(&[1, 2, 3, 5]), 11).contains_interval(0, 11).unwrap());
    }

    #[test]
    fn graham_rejects_bad_input() {
        assert!(graham_extend(Coverage::new(0, 0), &[1]).is_err());
        assert!(graham_extend(Coverage::new(0, 3), &[0]).is_err());
        assert!(graham_extend(Coverage::new(0, 3), &[2, 2]).is_err());
        assert_eq!(graham_extend(Coverage::new(4, 3), &[]).unwrap(), Coverage::new(4, 3));
    }

    #[test]
    fn divisor_reduction() {
        let a = set(&[6, 10, 15, 20]);
        assert_eq!(divisor_reduce(&a, 5).unwrap().as_slice(), &[2, 3, 4]);
        assert_eq!(divisor_reduce(&a, 1).unwrap(), a);
        assert!(divisor_reduce(&set(&[7, 11, 13]), 2).unwrap().is_empty());
        assert!(divisor_reduce(&a, 0).is_err());
    }
}
