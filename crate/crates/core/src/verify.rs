//! Finite experiments around partitions of `[N, eN)`: smooth-number filtering,
//! coverage witnesses, adversarial partition search, and divisor reductions
//! of dense sets.

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{memory_budget_from_env, Error, Result};
use crate::sums::{bounded_subset_sums, divisor_reduce, subset_sums, IntSet, IntervalList, SumSet};

/// Integers of `[lo, hi]` with no prime factor at most `r²`.
pub fn prime_filter(lo: u64, hi: u64, r: u64) -> Result<IntSet> {
    if lo < 2 || lo > hi {
        return Err(Error::invalid(format!("need 2 <= lo <= hi, got [{lo}, {hi}]")));
    }
    let limit = r.saturating_mul(r);
    if limit >= hi {
        // every member has a prime factor at most itself
        return Ok(IntSet::empty());
    }
    let len = usize::try_from(hi - lo + 1).map_err(|_| Error::invalid("range too long"))?;
    let mut keep = vec![true; len];
    let small = limit as usize;
    let mut composite = vec![false; small + 1];
    for p in 2..=small {
        if composite[p] {
            continue;
        }
        for m in (p * p..=small).step_by(p) {
            composite[m] = true;
        }
        let p = p as u64;
        let first = lo.div_ceil(p) * p;
        let mut m = first;
        while m <= hi {
            keep[(m - lo) as usize] = false;
            m += p;
        }
    }
    let members = (lo..=hi).zip(keep).filter_map(|(x, k)| k.then_some(x)).collect();
    Ok(IntSet::new(members).expect("sorted distinct positives"))
}

// e = 2.718281828459045235360287471352662497757247..., scaled by 10^39
const E_SCALED: &str = "2718281828459045235360287471352662497757";

/// Largest member of `[N, ⌈eN⌉)`, i.e. `⌊eN⌋` (eN is irrational for N >= 1).
pub fn window_end(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::invalid("N must be positive"));
    }
    let e_lo: BigUint = E_SCALED.parse().expect("digits");
    let e_hi = &e_lo + 1u32;
    let scale = BigUint::from(10u32).pow(39);
    let lo = (&e_lo * n) / &scale;
    let hi = (&e_hi * n) / &scale;
    if lo != hi {
        return Err(Error::invalid(format!(
            "cannot resolve floor(e·{n}) with 39 digits of e"
        )));
    }
    u64::try_from(lo).map_err(|_| Error::invalid("window end overflows u64"))
}

/// A coloring of the integers in `[N, ⌈eN⌉)`, optionally restricted to the
/// integers with no prime factor at most `r²`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartitionWindow {
    pub n: u64,
    pub r: u32,
    pub elements: Vec<u64>,
    pub colors: Vec<u32>,
}

impl PartitionWindow {
    /// Every element colored 0.
    pub fn new(n: u64, r: u32) -> Result<Self> {
        if r == 0 {
            return Err(Error::invalid("r must be positive"));
        }
        let end = window_end(n)?;
        let elements: Vec<u64> = (n..=end).collect();
        let colors = vec![0; elements.len()];
        Ok(PartitionWindow { n, r, elements, colors })
    }

    /// The window with elements having a prime factor at most `r²` removed.
    pub fn filtered(n: u64, r: u32) -> Result<Self> {
        let mut w = PartitionWindow::new(n, r)?;
        let lo = n.max(2);
        w.elements = prime_filter(lo, *w.elements.last().expect("nonempty"), r as u64)?
            .as_slice()
            .to_vec();
        w.colors = vec![0; w.elements.len()];
        Ok(w)
    }

    pub fn with_colors(mut self, colors: Vec<u32>) -> Result<Self> {
        if colors.len() != self.elements.len() {
            return Err(Error::invalid(format!(
                "{} colors for {} window elements",
                colors.len(),
                self.elements.len()
            )));
        }
        if let Some(c) = colors.iter().find(|&&c| c >= self.r) {
            return Err(Error::invalid(format!("color {c} is not below r = {}", self.r)));
        }
        self.colors = colors;
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn total(&self) -> u128 {
        self.elements.iter().map(|&x| x as u128).sum()
    }

    pub fn class(&self, color: u32) -> IntSet {
        let members = self
            .elements
            .iter()
            .zip(&self.colors)
            .filter_map(|(&x, &c)| (c == color).then_some(x))
            .collect();
        IntSet::new(members).expect("window elements are sorted and distinct")
    }

    /// The default target `⌊N²/8⌋`.
    pub fn default_target(&self) -> u64 {
        self.n * self.n / 8
    }
}

const MAX_REPORTED_GAPS: usize = 16;

/// What one color class covers below the target's upper end.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ColorCoverage {
    pub color: u32,
    pub size: usize,
    pub total: u128,
    /// Longest run of subset sums inside `[N, min(total, hi)]`.
    pub longest: Option<(u64, u64)>,
    /// Start of the run of subset sums that ends at or passes `hi`.
    pub covering_start: Option<u64>,
    /// `covering_start / N`.
    pub c: Option<f64>,
    pub covers_target: bool,
    /// First few maximal gaps inside the target.
    pub gaps: Vec<(u64, u64)>,
}

/// Per-color coverage of a target interval.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoverageReport {
    pub n: u64,
    pub target: (u64, u64),
    pub colors: Vec<ColorCoverage>,
}

impl CoverageReport {
    /// The color whose covering run starts lowest, among those reaching `hi`.
    pub fn best(&self) -> Option<&ColorCoverage> {
        self.colors
            .iter()
            .filter(|c| c.covering_start.is_some())
            .min_by_key(|c| c.covering_start)
    }
}

/// Outcome of [`lemma21_witness`].
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WitnessResult {
    Witness { color: u32, report: CoverageReport },
    NoWitness { report: CoverageReport },
}

impl WitnessResult {
    pub fn report(&self) -> &CoverageReport {
        match self {
            WitnessResult::Witness { report, .. } | WitnessResult::NoWitness { report } => report,
        }
    }

    pub fn color(&self) -> Option<u32> {
        match self {
            WitnessResult::Witness { color, .. } => Some(*color),
            WitnessResult::NoWitness { .. } => None,
        }
    }
}

fn check_budget(hi: u64, tables: usize) -> Result<()> {
    let budget = memory_budget_from_env();
    let requested = (hi as u128 + 1).div_ceil(64) * 8 * tables as u128;
    if requested > budget as u128 {
        return Err(Error::MemoryBudget { requested, budget });
    }
    Ok(())
}

fn color_coverage(n: u64, color: u32, class: &IntSet, sums: &SumSet, target: (u64, u64)) -> ColorCoverage {
    let (lo, hi) = target;
    let total = class.total();
    let top = (total.min(hi as u128)) as u64;
    let longest = if n <= top {
        sums.maximal_intervals(n, top).ok().and_then(|l| l.longest())
    } else {
        None
    };
    let covering_start = sums.run_containing(hi).map(|(s, _)| s);
    let covers_target = covering_start.is_some_and(|s| s <= lo);
    let gaps = if covers_target {
        Vec::new()
    } else {
        let covered = sums.maximal_intervals(lo, hi).unwrap_or_default();
        complement(&covered, lo, hi)
            .into_iter()
            .take(MAX_REPORTED_GAPS)
            .collect()
    };
    ColorCoverage {
        color,
        size: class.len(),
        total,
        longest,
        covering_start,
        c: covering_start.map(|s| s as f64 / n as f64),
        covers_target,
        gaps,
    }
}

fn complement(list: &IntervalList, lo: u64, hi: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut next = lo;
    for (a, b) in list.iter() {
        if a > next {
            out.push((next, a - 1));
        }
        next = b + 1;
    }
    if next <= hi {
        out.push((next, hi));
    }
    out
}

/// Coverage of every color at `hi` capped tables.
pub fn coverage_report(p: &PartitionWindow, target: (u64, u64)) -> Result<CoverageReport> {
    let (lo, hi) = target;
    if lo > hi {
        return Err(Error::invalid(format!("empty target [{lo}, {hi}]")));
    }
    if hi as u128 > p.total() {
        return Err(Error::invalid(format!(
            "target end {hi} exceeds the window total {}",
            p.total()
        )));
    }
    check_budget(hi, p.r as usize)?;
    let colors = (0..p.r)
        .into_par_iter()
        .map(|c| {
            let class = p.class(c);
            let sums = subset_sums(&class, hi);
            color_coverage(p.n, c, &class, &sums, target)
        })
        .collect();
    Ok(CoverageReport { n: p.n, target, colors })
}

/// Some color whose subset sums contain all of `[lo, hi]`, with the full
/// per-color report either way.
pub fn lemma21_witness(p: &PartitionWindow, target: (u64, u64)) -> Result<WitnessResult> {
    let report = coverage_report(p, target)?;
    Ok(match report.colors.iter().find(|c| c.covers_target).map(|c| c.color) {
        Some(color) => WitnessResult::Witness { color, report },
        None => WitnessResult::NoWitness { report },
    })
}

/// How [`worst_partition_search`] picks partitions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchStrategy {
    /// Independent uniform colorings.
    Random,
    /// Every coloring of a window of at most 22 elements.
    Exhaustive,
    /// Random starts improved by single-element recolorings that raise `c`.
    GreedyAdversarial,
}

/// Largest window [`SearchStrategy::Exhaustive`] accepts.
pub const EXHAUSTIVE_MAX_WINDOW: usize = 22;

/// Recolorings tried per greedy trial.
pub const GREEDY_MOVES: usize = 64;

/// One partition's outcome.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialOutcome {
    pub trial: u64,
    /// Color achieving the smallest covering start, if any covers the target end.
    pub color: Option<u32>,
    pub covering_start: Option<u64>,
    pub c: Option<f64>,
}

/// Distribution of smallest covering constants over partitions.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchReport {
    pub n: u64,
    pub r: u32,
    pub window: (u64, u64),
    pub target: u64,
    pub strategy: SearchStrategy,
    pub seed: u64,
    pub trials: Vec<TrialOutcome>,
    /// Largest `c` over trials; `None` when some trial has no covering color.
    pub worst_c: Option<f64>,
    pub all_witnessed: bool,
}

/// For a fixed coloring, the smallest covering start over colors at target `t`.
fn best_start(p: &PartitionWindow, t: u64) -> (Option<u32>, Option<u64>) {
    (0..p.r)
        .filter_map(|c| {
            let sums = subset_sums(&p.class(c), t);
            sums.run_containing(t).map(|(s, _)| (c, s))
        })
        .min_by_key(|&(_, s)| s)
        .map_or((None, None), |(c, s)| (Some(c), Some(s)))
}

fn outcome(trial: u64, n: u64, best: (Option<u32>, Option<u64>)) -> TrialOutcome {
    TrialOutcome {
        trial,
        color: best.0,
        covering_start: best.1,
        c: best.1.map(|s| s as f64 / n as f64),
    }
}

fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Harder is a later covering start, and no cover at all is hardest.
fn hardness(start: Option<u64>) -> u64 {
    start.unwrap_or(u64::MAX)
}

/// Empirical smallest covering constants `c` (cover `[cN, ⌊N²/8⌋]` by one color).
///
/// Deterministic in `seed`: trial `i` draws from ChaCha stream `i`.
pub fn worst_partition_search(
    n: u64,
    r: u32,
    trials: u64,
    seed: u64,
    strategy: SearchStrategy,
) -> Result<SearchReport> {
    let base = PartitionWindow::new(n, r)?;
    let target = base.default_target();
    if target == 0 {
        return Err(Error::invalid(format!("N = {n} gives an empty target")));
    }
    check_budget(target, rayon::current_num_threads() * r as usize)?;
    let window = (n, *base.elements.last().expect("nonempty"));
    let len = base.len();
    let random_colors = |rng: &mut ChaCha8Rng| -> Vec<u32> { (0..len).map(|_| rng.gen_range(0..r)).collect() };

    let outcomes: Vec<TrialOutcome> = match strategy {
        SearchStrategy::Random => (0..trials)
            .into_par_iter()
            .map(|t| {
                let colors = random_colors(&mut trial_rng(seed, t));
                let p = base.clone().with_colors(colors).expect("valid colors");
                outcome(t, n, best_start(&p, target))
            })
            .collect(),
        SearchStrategy::GreedyAdversarial => (0..trials)
            .into_par_iter()
            .map(|t| {
                let mut rng = trial_rng(seed, t);
                let mut p = base.clone().with_colors(random_colors(&mut rng)).expect("valid colors");
                let mut best = best_start(&p, target);
                for _ in 0..GREEDY_MOVES {
                    if best.1.is_none() {
                        break;
                    }
                    let i = rng.gen_range(0..len);
                    let old = p.colors[i];
                    let new = (old + rng.gen_range(1..r.max(2))) % r;
                    if new == old {
                        continue;
                    }
                    p.colors[i] = new;
                    let cand = best_start(&p, target);
                    if hardness(cand.1) > hardness(best.1) {
                        best = cand;
                    } else {
                        p.colors[i] = old;
                    }
                }
                outcome(t, n, best)
            })
            .collect(),
        SearchStrategy::Exhaustive => {
            if len > EXHAUSTIVE_MAX_WINDOW {
                return Err(Error::invalid(format!(
                    "exhaustive search needs a window of at most {EXHAUSTIVE_MAX_WINDOW} elements, N = {n} gives {len}"
                )));
            }
            let count = (r as u128).pow(len as u32);
            if count > 1u128 << EXHAUSTIVE_MAX_WINDOW {
                return Err(Error::invalid(format!("{count} colorings is too many to enumerate")));
            }
            (0..count as u64)
                .into_par_iter()
                .map(|code| {
                    let mut rest = code;
                    let colors = (0..len)
                        .map(|_| {
                            let c = (rest % r as u64) as u32;
                            rest /= r as u64;
                            c
                        })
                        .collect();
                    let p = base.clone().with_colors(colors).expect("valid colors");
                    outcome(code, n, best_start(&p, target))
                })
                .collect()
        }
    };

    let all_witnessed = outcomes.iter().all(|o| o.covering_start.is_some());
    let worst_c = if all_witnessed {
        outcomes.iter().filter_map(|o| o.c).reduce(f64::max)
    } else {
        None
    };
    Ok(SearchReport {
        n,
        r,
        window,
        target,
        strategy,
        seed,
        trials: outcomes,
        worst_c,
        all_witnessed,
    })
}

/// One divisor's reduction in [`thm22_check`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DivisorRow {
    pub d: u64,
    pub reduced_size: usize,
    /// `|A| - |A'|`.
    pub drop: usize,
    pub longest: Option<(u64, u64)>,
    /// Number of integers in `longest`.
    pub length: u64,
}

/// Longest intervals in `Σ^[k](A')` over divisor reductions `A' = {x/d : d | x}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Thm22Report {
    pub n: u64,
    pub k: usize,
    pub size: usize,
    pub rows: Vec<DivisorRow>,
    /// Index into `rows` of the longest interval (smallest `d` on ties).
    pub best: usize,
    pub reaches_n: bool,
}

impl Thm22Report {
    pub fn best_row(&self) -> &DivisorRow {
        &self.rows[self.best]
    }
}

/// Tries `d = 1` and every `d` dividing at least two members of `A`.
pub fn thm22_check(a: &IntSet, n: u64, k: usize) -> Result<Thm22Report> {
    if a.max().is_some_and(|m| m > n) {
        return Err(Error::invalid(format!("A must lie in [1, {n}]")));
    }
    if k == 0 {
        return Err(Error::invalid("k must be positive"));
    }
    let max = a.max().unwrap_or(0);
    let mut present = vec![false; max as usize + 1];
    for x in a.iter() {
        present[x as usize] = true;
    }
    let divisors: Vec<u64> = (1..=max.max(1))
        .filter(|&d| {
            d == 1
                || (d..=max)
                    .step_by(d as usize)
                    .filter(|&m| present[m as usize])
                    .nth(1)
                    .is_some()
        })
        .collect();
    let rows: Vec<DivisorRow> = divisors
        .into_par_iter()
        .map(|d| -> Result<DivisorRow> {
            let reduced = divisor_reduce(a, d)?;
            let cap: u64 = reduced.as_slice().iter().rev().take(k).sum();
            let sums = bounded_subset_sums(&reduced, k, cap)?;
            let longest = sums.maximal_intervals(0, cap)?.longest();
            Ok(DivisorRow {
                d,
                reduced_size: reduced.len(),
                drop: a.len() - reduced.len(),
                longest,
                length: longest.map_or(0, |(lo, hi)| hi - lo + 1),
            })
        })
        .collect::<Result<_>>()?;
    let best = rows
        .iter()
        .enumerate()
        .max_by(|(i, x), (j, y)| x.length.cmp(&y.length).then(j.cmp(i)))
        .map(|(i, _)| i)
        .expect("d = 1 is always present");
    let reaches_n = rows[best].length >= n;
    Ok(Thm22Report {
        n,
        k,
        size: a.len(),
        rows,
        best,
        reaches_n,
    })
}
