//! Natural and logarithmic densities.
//!
//! Block-coloring densities are exact rationals throughout. Logarithmic
//! densities carry an explicit floating-point error bound.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::colorings::{phi_set, BlockColoring, ColorRule, LogLogParams};
use crate::error::{Error, Result};
use crate::exact::{self, ratio};
use crate::report::{fmt_real, line_plot_svg, Series};
use crate::sums::{IntSet, IntervalList};

/// One sampled density value.
#[derive(Clone, Debug, PartialEq)]
pub enum DensityValue {
    Exact(BigRational),
    Real(f64),
}

impl DensityValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            DensityValue::Exact(q) => exact::to_f64(q),
            DensityValue::Real(x) => *x,
        }
    }
}

/// `(x, density)` samples with strictly increasing `x`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct DensityProfile {
    pub samples: Vec<(u64, DensityValue)>,
}

impl DensityProfile {
    fn all_exact(&self) -> bool {
        self.samples.iter().all(|(_, v)| matches!(v, DensityValue::Exact(_)))
    }

    /// `x,value_num,value_den` when every value is exact, otherwise `x,value`.
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        if self.all_exact() {
            s.push_str("x,value_num,value_den\n");
            for (x, v) in &self.samples {
                if let DensityValue::Exact(q) = v {
                    let _ = writeln!(s, "{x},{},{}", q.numer(), q.denom());
                }
            }
        } else {
            s.push_str("x,value\n");
            for (x, v) in &self.samples {
                let _ = writeln!(s, "{x},{}", fmt_real(v.to_f64()));
            }
        }
        s
    }

    pub fn to_svg(&self, title: &str) -> String {
        let pts: Vec<(f64, f64)> = self.samples.iter().map(|(x, v)| (*x as f64, v.to_f64())).collect();
        line_plot_svg(
            title,
            "t",
            "density",
            &[Series {
                label: "density",
                points: &pts,
            }],
        )
    }
}

/// A floating-point value with an absolute error bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Approx {
    pub value: f64,
    pub error: f64,
}

impl Approx {
    pub fn contains(&self, x: f64) -> bool {
        (x - self.value).abs() <= self.error
    }
}

/// Σ 1/a over a finite set, exactly.
pub fn reciprocal_sum_exact(set: &IntSet) -> BigRational {
    // binary splitting keeps the operands balanced
    fn split(xs: &[u64]) -> (BigInt, BigInt) {
        match xs {
            [] => (BigInt::zero(), BigInt::one()),
            [x] => (BigInt::one(), BigInt::from(*x)),
            _ => {
                let (l, r) = xs.split_at(xs.len() / 2);
                let ((ln, ld), (rn, rd)) = (split(l), split(r));
                (ln * &rd + rn * &ld, ld * rd)
            }
        }
    }
    let (n, d) = split(set.as_slice());
    BigRational::new(n, d)
}

const DIRECT_LIMIT: u64 = 1 << 12;

/// Σ_{a=lo}^{hi} 1/a for `1 <= lo <= hi`.
fn harmonic_range(lo: u64, hi: u64) -> Approx {
    debug_assert!(1 <= lo && lo <= hi);
    let u = f64::EPSILON;
    if hi < DIRECT_LIMIT || hi - lo < DIRECT_LIMIT {
        // smallest terms first, compensated
        let (mut sum, mut comp) = (0.0f64, 0.0f64);
        for a in (lo..=hi).rev() {
            let t = 1.0 / a as f64;
            let s = sum + t;
            comp += if sum.abs() >= t { (sum - s) + t } else { (t - s) + sum };
            sum = s;
        }
        let value = sum + comp;
        return Approx {
            value,
            error: 4.0 * u * value,
        };
    }
    if lo < DIRECT_LIMIT {
        let head = harmonic_range(lo, DIRECT_LIMIT - 1);
        let tail = harmonic_range(DIRECT_LIMIT, hi);
        return Approx {
            value: head.value + tail.value,
            error: head.error + tail.error + u * (head.value + tail.value),
        };
    }
    // ψ(hi + 1) - ψ(lo) with the asymptotic series; lo >= 4096 so the
    // truncation after x^-6 is below 1e-30
    let (x1, x0) = (hi as f64 + 1.0, lo as f64);
    let corr = |x: f64| {
        let x2 = x * x;
        -1.0 / (2.0 * x) - 1.0 / (12.0 * x2) + 1.0 / (120.0 * x2 * x2) - 1.0 / (252.0 * x2 * x2 * x2)
    };
    let log_part = ((hi - lo + 1) as f64 / x0).ln_1p();
    let value = log_part + corr(x1) - corr(x0);
    Approx {
        value,
        error: 8.0 * u * value + 1e-30,
    }
}

/// Σ 1/a over the positive members of an interval list.
pub fn reciprocal_sum_intervals(list: &IntervalList) -> Approx {
    let mut acc = Approx { value: 0.0, error: 0.0 };
    for (lo, hi) in list.iter() {
        let lo = lo.max(1);
        if lo > hi {
            continue;
        }
        let part = harmonic_range(lo, hi);
        acc.value += part.value;
        acc.error += part.error + f64::EPSILON * acc.value;
    }
    acc
}

/// A logarithmic density `(1/ln x) Σ_{a<=x} 1/a`.
#[derive(Clone, Debug, PartialEq)]
pub struct LogDensity {
    pub x: u64,
    pub value: Approx,
    /// The reciprocal sum, when it was computed exactly.
    pub reciprocal_sum: Option<BigRational>,
}

fn check_log_x(x: u64) -> Result<f64> {
    if x < 2 {
        return Err(Error::invalid(format!("log density needs x >= 2, got {x}")));
    }
    Ok((x as f64).ln())
}

/// Logarithmic density of a finite set up to `x`, with an exact reciprocal sum.
pub fn log_density_set(set: &IntSet, x: u64) -> Result<LogDensity> {
    let ln_x = check_log_x(x)?;
    let below: Vec<u64> = set.iter().take_while(|&a| a <= x).collect();
    let sum = reciprocal_sum_exact(&IntSet::from_sorted_unchecked(below));
    let s = exact::to_f64(&sum);
    let value = s / ln_x;
    Ok(LogDensity {
        x,
        value: Approx {
            value,
            error: 4.0 * f64::EPSILON * value,
        },
        reciprocal_sum: Some(sum),
    })
}

/// Logarithmic density of a union of intervals up to `x`.
pub fn log_density_intervals(list: &IntervalList, x: u64) -> Result<LogDensity> {
    let ln_x = check_log_x(x)?;
    let s = reciprocal_sum_intervals(&list.clip(1, x));
    let value = s.value / ln_x;
    Ok(LogDensity {
        x,
        value: Approx {
            value,
            error: s.error / ln_x + 2.0 * f64::EPSILON * value,
        },
        reciprocal_sum: None,
    })
}

fn check_delta_args(r: u32, b_gt_one: bool) -> Result<()> {
    if r < 2 {
        return Err(Error::invalid(format!("r must be at least 2, got {r}")));
    }
    if !b_gt_one {
        return Err(Error::invalid("b must exceed 1"));
    }
    Ok(())
}

/// `δ_r(b) = (1 - 1/(2b)) / (1 - b^-r)`.
pub fn delta_formula(r: u32, b: f64) -> Result<f64> {
    check_delta_args(r, b > 1.0 && b.is_finite())?;
    Ok((1.0 - 0.5 / b) / (1.0 - b.powi(-(r as i32))))
}

/// [`delta_formula`] in exact rational arithmetic.
pub fn delta_formula_exact(r: u32, b: &BigRational) -> Result<BigRational> {
    check_delta_args(r, *b > BigRational::one())?;
    let one = BigRational::one();
    let b_r = num_traits::pow(b.clone(), r as usize);
    Ok((&one - (&one / (ratio(2, 1) * b))) / (&one - one.clone() / b_r))
}

/// `δ_r'(b)`.
pub fn delta_derivative(r: u32, b: f64) -> Result<f64> {
    check_delta_args(r, b > 1.0 && b.is_finite())?;
    let ri = r as i32;
    let q = 1.0 - b.powi(-ri);
    Ok(0.5 / (b * b) / q - (1.0 - 0.5 / b) * r as f64 * b.powi(-ri - 1) / (q * q))
}

/// Asymptotic upper logarithmic density of the covers `∪_{j ≡ i (mod r)} [b^j, 2b^{j+1}]`
/// of the log-log coloring's subset sums, measured in log coordinates.
///
/// The covered fraction is maximal at a right endpoint `2b^{j+1}`; below it the
/// uncovered gaps have normalized lengths `b^{-mr} (1/(2b) - b^{-r})`, m >= 0,
/// summed term by term here. Returns 1 when `b^{r-1} <= 2` (no gaps).
pub fn loglog_cover_density(p: &LogLogParams) -> f64 {
    let (b, r) = (p.b(), p.r() as i32);
    if b.powi(r - 1) <= 2.0 {
        return 1.0;
    }
    let first_gap = 0.5 / b - b.powi(-r);
    let ratio = b.powi(-r);
    let (mut gaps, mut comp, mut term) = (0.0f64, 0.0f64, first_gap);
    while term > 1e-20 * first_gap {
        let s = gaps + term;
        comp += (gaps - s) + term;
        gaps = s;
        term *= ratio;
    }
    1.0 - (gaps + comp)
}

fn require_two_color_cyclic(c: &BlockColoring) -> Result<()> {
    if *c.rule() != (ColorRule::Cyclic { r: 2 }) {
        return Err(Error::Unsupported(
            "block densities need the default two-color cyclic rule".into(),
        ));
    }
    Ok(())
}

fn h_minus_one(c: &BlockColoring, i: usize) -> BigInt {
    BigInt::from(c.breakpoints()[i] - 1)
}

/// ā_n: density of S(φ, n mod 2) in `[1, 2(H_n - 1)]`, from the closed formula
/// `[2 Σ_{i≡n, i<=n} (H_i - 1) - Σ_{i≢n, i<=n} (H_i - 1)] / (2(H_n - 1))`.
pub fn abar_direct(c: &BlockColoring, n: usize) -> Result<BigRational> {
    require_two_color_cyclic(c)?;
    if n == 0 {
        return Err(Error::invalid("ā_0 is undefined (zero denominator)"));
    }
    if n >= c.block_count() {
        return Err(Error::OutOfRange {
            n: n as u64,
            limit: c.block_count() as u64 - 1,
        });
    }
    let (mut same, mut other) = (BigInt::zero(), BigInt::zero());
    for i in 0..=n {
        if i % 2 == n % 2 {
            same += h_minus_one(c, i);
        } else {
            other += h_minus_one(c, i);
        }
    }
    let two = BigInt::from(2);
    Ok(BigRational::new(&two * same - other, two * h_minus_one(c, n)))
}

/// `z_n = (H_{n-1} - 1) / (H_n - 1)` for `n = 1..block_count`.
pub fn z_ratios(c: &BlockColoring) -> Vec<BigRational> {
    (1..c.block_count())
        .map(|n| BigRational::new(h_minus_one(c, n - 1), h_minus_one(c, n)))
        .collect()
}

/// One state `(ā_n, b̄_n)` of the density recurrence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensitySeqState {
    pub n: usize,
    pub abar: BigRational,
    pub bbar: BigRational,
    pub z: BigRational,
}

/// Iterates `ā_n = b̄_{n-1} z_n + 1 - z_n/2`, `b̄_n = ā_{n-1} z_n` from the
/// seed `(ā_1, b̄_1)`, consuming `z_2, z_3, ...` from `zs`.
///
/// The first returned state is the seed itself (n = 1, z = 0).
pub fn abar_recurrence(zs: &[BigRational], seed: (BigRational, BigRational)) -> Result<Vec<DensitySeqState>> {
    let half = ratio(1, 2);
    if let Some(z) = zs.iter().find(|z| **z < BigRational::zero() || **z > half) {
        return Err(Error::invalid(format!("z = {z} lies outside [0, 1/2]")));
    }
    let mut out = Vec::with_capacity(zs.len() + 1);
    out.push(DensitySeqState {
        n: 1,
        abar: seed.0,
        bbar: seed.1,
        z: BigRational::zero(),
    });
    for z in zs {
        let prev = out.last().expect("seeded");
        let abar = &prev.bbar * z + BigRational::one() - z * &half;
        let bbar = &prev.abar * z;
        out.push(DensitySeqState {
            n: prev.n + 1,
            abar,
            bbar,
            z: z.clone(),
        });
    }
    Ok(out)
}

/// The recurrence driven by a coloring's own ratios, seeded with `(ā_1, 0)`.
pub fn abar_sequence(c: &BlockColoring) -> Result<Vec<DensitySeqState>> {
    let seed = (abar_direct(c, 1)?, BigRational::zero());
    let zs = z_ratios(c);
    abar_recurrence(&zs[1..], seed)
}

/// Exact `|S ∩ [1, t]| / t` for each `t`.
pub fn natural_density_profile(set: &IntervalList, ts: &[u64]) -> Result<DensityProfile> {
    if ts.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("sample points must be strictly increasing"));
    }
    if ts.first() == Some(&0) {
        return Err(Error::invalid("sample points must be positive"));
    }
    let positive = set.clip(1, u64::MAX);
    let samples = ts
        .iter()
        .map(|&t| {
            let count = positive.count_at_most(t);
            (t, DensityValue::Exact(BigRational::new(count.into(), t.into())))
        })
        .collect();
    Ok(DensityProfile { samples })
}

/// Density of S(φ, n mod 2) at `t = 2(H_n - 1)` by counting the φ-set.
pub fn abar_by_counting(c: &BlockColoring, n: usize) -> Result<BigRational> {
    require_two_color_cyclic(c)?;
    if n == 0 || n >= c.block_count() {
        return Err(Error::invalid(format!("no ā_{n} for this coloring")));
    }
    let t = 2 * (c.breakpoints()[n] - 1);
    let phi = phi_set(c, (n % 2) as u32, t)?;
    Ok(BigRational::new(phi.intervals.count_at_most(t).into(), t.into()))
}
