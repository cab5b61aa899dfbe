//! Integer colorings: the generalized log-log coloring, block colorings given
//! by breakpoints, and the derived sets S(φ, i).

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::sums::IntervalList;

/// Base of the inner logarithm in `floor(log_b(log n)) mod r`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum InnerBase {
    Natural,
    Base(f64),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogLogParams {
    b: f64,
    r: u32,
    inner: InnerBase,
}

impl LogLogParams {
    pub fn new(b: f64, r: u32) -> Result<Self> {
        if !(b > 1.0 && b.is_finite()) {
            return Err(Error::invalid(format!("outer base must be finite and > 1, got {b}")));
        }
        if r < 2 {
            return Err(Error::invalid(format!("need at least two colors, got {r}")));
        }
        Ok(LogLogParams {
            b,
            r,
            inner: InnerBase::Natural,
        })
    }

    pub fn with_inner_base(mut self, c: f64) -> Result<Self> {
        if !(c > 1.0 && c.is_finite()) {
            return Err(Error::invalid(format!("inner base must be finite and > 1, got {c}")));
        }
        self.inner = InnerBase::Base(c);
        Ok(self)
    }

    /// Erdős' original coloring: `floor(log_4 log_2 n) mod 2`.
    pub fn erdos() -> Self {
        LogLogParams {
            b: 4.0,
            r: 2,
            inner: InnerBase::Base(2.0),
        }
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn inner(&self) -> InnerBase {
        self.inner
    }
}

/// Result of classifying one integer under a log-log coloring.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LogLogClass {
    pub color: u32,
    /// `floor(log_b(log n))`, or `None` where the inner log is below 1 and the
    /// floor is negative or undefined (those `n` get color 0).
    pub level: Option<i64>,
    /// The rounding enclosure straddled a level boundary and no exact check
    /// was available; `color` is then the midpoint guess.
    pub ambiguous: bool,
}

const U: f64 = f64::EPSILON;

/// Color of `n` under `floor(log_b(log n)) mod r`.
///
/// The floor is taken from an outward-rounded enclosure of `log_b(log n)`.
/// When the enclosure straddles an integer and both bases are integers, the
/// boundary `n >= c^(b^j)` is decided exactly; otherwise the class is marked
/// ambiguous.
pub fn loglog_color(n: u64, p: &LogLogParams) -> LogLogClass {
    let conventional = LogLogClass {
        color: 0,
        level: None,
        ambiguous: false,
    };
    if n <= 1 {
        return conventional;
    }
    let ln_n = (n as f64).ln();
    let (inner, inner_rel) = match p.inner {
        InnerBase::Natural => (ln_n, 4.0 * U),
        InnerBase::Base(c) => (ln_n / c.ln(), 8.0 * U),
    };
    let inner_lo = inner * (1.0 - inner_rel) - U;
    let inner_hi = inner * (1.0 + inner_rel) + U;
    if inner_hi < 1.0 {
        return conventional;
    }
    if inner_lo < 1.0 {
        // log_b(inner) is within rounding of 0: level 0 or the convention, color 0 either way
        return LogLogClass {
            color: 0,
            level: Some(0),
            ambiguous: false,
        };
    }

    let ln_b = p.b.ln();
    let outer = |x: f64| x.ln();
    let v = outer(inner) / ln_b;
    let v_lo = (outer(inner_lo) - 4.0 * U * outer(inner_lo).abs() - 1e-300) / (ln_b * (1.0 + 4.0 * U));
    let v_hi = (outer(inner_hi) + 4.0 * U * outer(inner_hi).abs() + 1e-300) / (ln_b * (1.0 - 4.0 * U));
    let (f_lo, f_hi) = (v_lo.floor() as i64, v_hi.floor() as i64);

    let color_of = |level: i64| level.rem_euclid(p.r as i64) as u32;
    if f_lo == f_hi {
        return LogLogClass {
            color: color_of(f_lo),
            level: Some(f_lo),
            ambiguous: false,
        };
    }
    if let Some(level) = exact_level(n, p, f_lo, f_hi) {
        return LogLogClass {
            color: color_of(level),
            level: Some(level),
            ambiguous: false,
        };
    }
    let guess = (v.floor() as i64).clamp(f_lo, f_hi);
    LogLogClass {
        color: color_of(guess),
        level: Some(guess),
        ambiguous: true,
    }
}

/// Decides `floor(log_b(log_c n))` exactly for integer `b` and `c` by testing
/// `n >= c^(b^j)` for each candidate `j`.
fn exact_level(n: u64, p: &LogLogParams, lo: i64, hi: i64) -> Option<i64> {
    let c = match p.inner {
        InnerBase::Base(c) if c.fract() == 0.0 => c as u128,
        _ => return None,
    };
    if p.b.fract() != 0.0 || lo < 0 {
        return None;
    }
    let b = p.b as u128;
    // threshold(j) = c^(b^j), saturating at u128::MAX
    let threshold = |j: i64| -> u128 {
        let e = b.checked_pow(j as u32).unwrap_or(u128::MAX);
        let mut acc: u128 = 1;
        for _ in 0..e.min(200) {
            acc = acc.saturating_mul(c);
        }
        acc
    };
    let mut level = lo;
    for j in lo + 1..=hi {
        if n as u128 >= threshold(j) {
            level = j;
        }
    }
    Some(level)
}

/// How block indices map to colors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ColorRule {
    /// Block `j` gets color `(j + 1) mod r`.
    Cyclic { r: u32 },
    /// One color per block.
    Explicit(Vec<u32>),
}

/// A coloring that is constant on `[H_j, H_{j+1})`, with `H_0 = 1`.
///
/// Only a finite prefix of breakpoints is stored. The last breakpoint opens a
/// final block whose end is not represented.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockColoring {
    breakpoints: Vec<u64>,
    rule: ColorRule,
}

impl BlockColoring {
    pub fn new(breakpoints: Vec<u64>, rule: ColorRule) -> Result<Self> {
        if breakpoints.first() != Some(&1) {
            return Err(Error::invalid("breakpoints must start with H_0 = 1"));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("breakpoints must be strictly increasing"));
        }
        match &rule {
            ColorRule::Cyclic { r } if *r < 2 => return Err(Error::invalid("cyclic rule needs at least two colors")),
            ColorRule::Explicit(colors) if colors.len() != breakpoints.len() => {
                return Err(Error::invalid(format!(
                    "{} explicit colors for {} blocks",
                    colors.len(),
                    breakpoints.len()
                )))
            }
            _ => {}
        }
        Ok(BlockColoring { breakpoints, rule })
    }

    /// Two colors, block `j` colored `(j + 1) mod 2`.
    pub fn cyclic(breakpoints: Vec<u64>) -> Result<Self> {
        Self::new(breakpoints, ColorRule::Cyclic { r: 2 })
    }

    pub fn breakpoints(&self) -> &[u64] {
        &self.breakpoints
    }

    pub fn rule(&self) -> &ColorRule {
        &self.rule
    }

    /// Number of blocks, counting the open final block.
    pub fn block_count(&self) -> usize {
        self.breakpoints.len()
    }

    pub fn last_breakpoint(&self) -> u64 {
        *self.breakpoints.last().expect("non-empty by construction")
    }

    /// Largest `x` for which S(φ, i) is determined by the stored prefix: `2(H_last - 1)`.
    pub fn phi_limit(&self) -> u64 {
        2 * (self.last_breakpoint() - 1)
    }

    pub fn num_colors(&self) -> u32 {
        match &self.rule {
            ColorRule::Cyclic { r } => *r,
            ColorRule::Explicit(c) => c.iter().max().map_or(1, |m| m + 1),
        }
    }

    pub fn block_color_index(&self, j: usize) -> u32 {
        match &self.rule {
            ColorRule::Cyclic { r } => ((j as u64 + 1) % *r as u64) as u32,
            ColorRule::Explicit(c) => c[j],
        }
    }

    /// Index of the block containing `n >= 1`; values past the last breakpoint
    /// belong to the open final block.
    pub fn block_of(&self, n: u64) -> usize {
        self.breakpoints.partition_point(|&h| h <= n) - 1
    }

    /// True iff `H_{i+2} > 2(H_{i+1} - 1)` for every represented `i`.
    pub fn is_separated(&self) -> bool {
        self.first_violation().is_none()
    }

    fn first_violation(&self) -> Option<usize> {
        let h = &self.breakpoints;
        (0..h.len().saturating_sub(2)).find(|&i| h[i + 2] <= 2 * (h[i + 1] - 1))
    }

    /// Parses one breakpoint per line with an optional second column of colors.
    pub fn parse(text: &str) -> Result<Self> {
        let mut hs = Vec::new();
        let mut colors = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut fields = line
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|f| !f.is_empty());
            let parse = |f: Option<&str>, what: &str| -> Result<Option<u64>> {
                f.map(|s| {
                    s.parse::<u64>().map_err(|_| Error::Parse {
                        line: i + 1,
                        message: format!("bad {what} `{s}`"),
                    })
                })
                .transpose()
            };
            hs.push(parse(fields.next(), "breakpoint")?.expect("non-empty line"));
            if let Some(c) = parse(fields.next(), "color")? {
                colors.push((hs.len() - 1, c as u32));
            }
            if fields.next().is_some() {
                return Err(Error::Parse {
                    line: i + 1,
                    message: "expected at most two columns".into(),
                });
            }
        }
        let rule = if colors.is_empty() {
            ColorRule::Cyclic { r: 2 }
        } else if colors.len() == hs.len() {
            ColorRule::Explicit(colors.into_iter().map(|(_, c)| c).collect())
        } else {
            return Err(Error::invalid("either every breakpoint has a color or none does"));
        };
        Self::new(hs, rule)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (j, h) in self.breakpoints.iter().enumerate() {
            match &self.rule {
                ColorRule::Cyclic { .. } => writeln!(s, "{h}"),
                ColorRule::Explicit(c) => writeln!(s, "{h},{}", c[j]),
            }
            .expect("write to String");
        }
        s
    }
}

/// Color of `n` under a block coloring; `n` must lie before the last breakpoint.
pub fn block_color(n: u64, c: &BlockColoring) -> Result<u32> {
    let limit = c.last_breakpoint();
    if n == 0 || n >= limit {
        return Err(Error::OutOfRange { n, limit });
    }
    Ok(c.block_color_index(c.block_of(n)))
}

/// The set of `n` with color `i` in φ(n), as maximal intervals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiSet {
    pub color: u32,
    pub intervals: IntervalList,
}

/// S(φ, i) clipped to `[1, range_max]`: the union of `[H_j, 2(H_{j+1} - 1)]`
/// over blocks `j` of color `i`. The open final block contributes
/// `[H_last, range_max]`.
pub fn phi_set(c: &BlockColoring, color: u32, range_max: u64) -> Result<PhiSet> {
    if range_max > c.phi_limit() {
        return Err(Error::OutOfRange {
            n: range_max,
            limit: c.phi_limit(),
        });
    }
    let h = c.breakpoints();
    let ranges = (0..h.len()).filter(|&j| c.block_color_index(j) == color).map(|j| {
        let hi = h.get(j + 1).map_or(range_max, |&next| 2 * (next - 1));
        (h[j], hi.min(range_max))
    });
    Ok(PhiSet {
        color,
        intervals: IntervalList::from_ranges(ranges),
    })
}

/// φ(n): the colors `α(j)` over `ceil(n/2) <= j <= n`, sorted and deduplicated.
pub fn phi_colors(c: &BlockColoring, n: u64) -> Vec<u32> {
    if n == 0 {
        return Vec::new();
    }
    let (first, last) = (c.block_of(n.div_ceil(2)), c.block_of(n));
    let mut colors: Vec<u32> = (first..=last).map(|j| c.block_color_index(j)).collect();
    colors.sort_unstable();
    colors.dedup();
    colors
}

/// Merges violating blocks until `H_{i+2} > 2(H_{i+1} - 1)` holds everywhere.
///
/// At the first violation `i`, the block `[H_{i+1}, H_{i+2})` takes the color
/// of block `i`; with two alternating colors this fuses blocks `i..=i+2`. The
/// new φ-sets are pointwise subsets of the old ones. Only two-color colorings
/// are supported. When the fused block reaches the last breakpoint the
/// represented prefix shrinks accordingly.
pub fn make_separated(c: &BlockColoring) -> Result<BlockColoring> {
    if c.num_colors() > 2 {
        return Err(Error::Unsupported(
            "separation by merging is defined for two-color colorings".into(),
        ));
    }
    let mut hs = c.breakpoints.clone();
    let mut colors: Vec<u32> = (0..hs.len()).map(|j| c.block_color_index(j)).collect();

    // fuse adjacent equal colors first; α is unchanged by this
    let mut j = 1;
    while j < hs.len() {
        if colors[j] == colors[j - 1] {
            hs.remove(j);
            colors.remove(j);
        } else {
            j += 1;
        }
    }

    let mut current = BlockColoring {
        breakpoints: hs,
        rule: ColorRule::Explicit(colors),
    };
    while let Some(i) = current.first_violation() {
        let ColorRule::Explicit(colors) = &mut current.rule else {
            unreachable!()
        };
        current.breakpoints.drain(i + 1..=i + 2);
        colors.drain(i + 1..=i + 2);
    }

    // restore the cyclic rule when the colors still follow it
    if let ColorRule::Cyclic { r } = c.rule {
        let ColorRule::Explicit(colors) = &current.rule else {
            unreachable!()
        };
        if colors
            .iter()
            .enumerate()
            .all(|(j, &col)| col as u64 == (j as u64 + 1) % r as u64)
        {
            current.rule = ColorRule::Cyclic { r };
        }
    }
    Ok(current)
}
