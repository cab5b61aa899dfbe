//! The critical polynomial `b^r - 2rb + r - 1`, the minimum of `δ_r`, and the
//! one-dimensional infimum `f2`.
//!
//! Floating point only locates things; every reported root is backed by an
//! exact dyadic bracket whose endpoint signs were checked in rational
//! arithmetic.

use std::cmp::Ordering;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::density::{delta_formula, delta_formula_exact};
use crate::error::{Error, Result};
use crate::exact::{self, from_f64, ratio, Sqrt3};
use crate::report::fmt_real;

/// Default tolerance for roots and minimizers.
pub const DEFAULT_TOL: f64 = 1e-12;

const MAX_BISECTIONS: usize = 4096;

fn check_r(r: u32) -> Result<()> {
    if r < 2 {
        return Err(Error::invalid(format!("r must be at least 2, got {r}")));
    }
    Ok(())
}

fn check_tol(tol: f64) -> Result<()> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::invalid(format!("tolerance must be positive, got {tol}")));
    }
    Ok(())
}

/// `p_r(b) = b^r - 2rb + r - 1`, exactly.
pub fn critical_poly_exact(r: u32, b: &BigRational) -> BigRational {
    let r_q = BigRational::from_integer(r.into());
    num_traits::pow(b.clone(), r as usize) - ratio(2, 1) * &r_q * b + r_q - BigRational::one()
}

pub fn critical_poly(r: u32, b: f64) -> f64 {
    b.powi(r as i32) - 2.0 * r as f64 * b + r as f64 - 1.0
}

fn critical_poly_deriv(r: u32, b: f64) -> f64 {
    r as f64 * b.powi(r as i32 - 1) - 2.0 * r as f64
}

fn sign(q: &BigRational) -> i8 {
    match q.cmp(&BigRational::zero()) {
        Ordering::Less => -1,
        Ordering::Equal => 0,
        Ordering::Greater => 1,
    }
}

/// Signs of `p_r` at the sample points used to certify the root structure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DescartesCertificate {
    /// Sign changes in the coefficient sequence `(1, -2r, r - 1)`.
    pub sign_changes: u32,
    /// Sign of `p_r(0) = r - 1`.
    pub at_zero: i8,
    /// Sign of `p_r(1) = -r`.
    pub at_one: i8,
    pub at_bracket_lo: i8,
    pub at_bracket_hi: i8,
    /// Sign of `p_r(2r)`, standing in for `+∞`.
    pub at_infinity_proxy: i8,
}

impl DescartesCertificate {
    /// Exactly two positive roots, one in `(0, 1)` and one inside the bracket.
    pub fn holds(&self) -> bool {
        self.sign_changes == 2
            && self.at_zero > 0
            && self.at_one < 0
            && self.at_bracket_lo < 0
            && self.at_bracket_hi > 0
            && self.at_infinity_proxy > 0
    }
}

/// The root `b0 > 1` of `p_r`.
#[derive(Clone, Debug, PartialEq)]
pub struct RootResult {
    pub r: u32,
    /// Nearest float to the bracket midpoint.
    pub b0: f64,
    /// Exact bracket with `p_r(lo) < 0 < p_r(hi)`.
    pub lo: BigRational,
    pub hi: BigRational,
    /// `|p_r(mid)|` evaluated exactly, then rounded.
    pub residual: f64,
    /// The companion root in `(0, 1)`, to float precision.
    pub small_root: f64,
    pub certificate: DescartesCertificate,
}

impl RootResult {
    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / ratio(2, 1)
    }
}

fn float_bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    // f(lo) < 0 < f(hi)
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Finds the unique root of `b^r - 2rb + r - 1` in `(1, ∞)`.
///
/// The bracket `(1, 2r)` is certified exactly, a float estimate is found by
/// bisection and Newton, and an exact bracket around it is then halved until
/// the exact residual at its midpoint is at most `tol`.
pub fn critical_root(r: u32, tol: f64) -> Result<RootResult> {
    check_r(r)?;
    check_tol(tol)?;
    let one = BigRational::one();
    let proxy = BigRational::from_integer((2 * r).into());
    let (p0, p1, pinf) = (
        critical_poly_exact(r, &BigRational::zero()),
        critical_poly_exact(r, &one),
        critical_poly_exact(r, &proxy),
    );
    debug_assert!(sign(&p1) < 0 && sign(&pinf) > 0);

    let f = |b: f64| critical_poly(r, b);
    let mut b = float_bisect(f, 1.0, 2.0 * r as f64);
    for _ in 0..8 {
        let d = critical_poly_deriv(r, b);
        let next = b - f(b) / d;
        if !next.is_finite() || next <= 1.0 {
            break;
        }
        b = next;
    }

    // exact bracket around the float estimate, widened until the signs straddle
    let mut eps = (b * 1e-14).max(f64::MIN_POSITIVE);
    let (mut lo, mut hi) = loop {
        let lo = from_f64((b - eps).max(1.0));
        let hi = from_f64((b + eps).min(2.0 * r as f64));
        if sign(&critical_poly_exact(r, &lo)) < 0 && sign(&critical_poly_exact(r, &hi)) > 0 {
            break (lo, hi);
        }
        eps *= 16.0;
        if eps > 2.0 * r as f64 {
            break (one.clone(), proxy.clone());
        }
    };

    let two = ratio(2, 1);
    let mut residual;
    let mut steps = 0;
    loop {
        let mid = (&lo + &hi) / &two;
        let pm = critical_poly_exact(r, &mid);
        let width = exact::to_f64(&(&hi - &lo));
        residual = exact::to_f64(&pm.abs());
        // 2^-100 keeps b0 well beyond double precision
        if (residual <= tol && width < 1e-30) || pm.is_zero() {
            if pm.is_zero() {
                lo = mid.clone();
                hi = mid;
            }
            break;
        }
        steps += 1;
        if steps > MAX_BISECTIONS {
            return Err(Error::invalid(format!(
                "residual {residual:e} did not reach tolerance {tol:e}"
            )));
        }
        if sign(&pm) < 0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    let small_root = float_bisect(|b| -f(b), 0.0, 1.0);
    let certificate = DescartesCertificate {
        sign_changes: sign_changes(&critical_poly_coefficients(r)),
        at_zero: sign(&p0),
        at_one: sign(&p1),
        at_bracket_lo: sign(&critical_poly_exact(r, &lo)),
        at_bracket_hi: sign(&critical_poly_exact(r, &hi)),
        at_infinity_proxy: sign(&pinf),
    };
    let mid = (&lo + &hi) / &two;
    Ok(RootResult {
        r,
        b0: exact::to_f64(&mid),
        lo,
        hi,
        residual,
        small_root,
        certificate,
    })
}

/// One row of the upper-bound table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundRow {
    pub r: u32,
    pub b0: f64,
    /// `(1 - 1/(2 b0)) (1 + 1/(2r b0 - r))`.
    pub c_upper: f64,
    /// `δ_r(b0)`.
    pub delta_min: f64,
    /// `|c_upper - delta_min|`, evaluated exactly at the rational root estimate.
    pub identity_gap: f64,
}

/// `(1 - 1/(2b)) (1 + 1/(2rb - r))` in exact arithmetic.
pub fn c_upper_exact(r: u32, b: &BigRational) -> BigRational {
    let one = BigRational::one();
    let two = ratio(2, 1);
    let r_q = BigRational::from_integer(r.into());
    (&one - &one / (&two * b)) * (&one + &one / (&two * &r_q * b - &r_q))
}

fn bound_row(r: u32, tol: f64) -> Result<BoundRow> {
    let root = critical_root(r, tol)?;
    let mid = root.midpoint();
    let c = c_upper_exact(r, &mid);
    let d = delta_formula_exact(r, &mid)?;
    Ok(BoundRow {
        r,
        b0: root.b0,
        c_upper: exact::to_f64(&c),
        delta_min: exact::to_f64(&d),
        identity_gap: exact::to_f64(&(c - d).abs()),
    })
}

/// Rows for `r = 2..=r_max`, computed in parallel.
pub fn c_upper_table(r_max: u32, tol: f64) -> Result<Vec<BoundRow>> {
    check_r(r_max)?;
    (2..=r_max).into_par_iter().map(|r| bound_row(r, tol)).collect()
}

/// First `r` at which `c_upper` fails to decrease, if any.
pub fn monotonicity_violation(rows: &[BoundRow]) -> Option<u32> {
    rows.windows(2).find(|w| w[1].c_upper >= w[0].c_upper).map(|w| w[1].r)
}

/// CSV with header `r,b0,c_upper,delta_min,identity_gap`.
pub fn table_csv(rows: &[BoundRow]) -> String {
    let mut s = String::from("r,b0,c_upper,delta_min,identity_gap\n");
    for row in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{}",
            row.r,
            fmt_real(row.b0),
            fmt_real(row.c_upper),
            fmt_real(row.delta_min),
            fmt_real(row.identity_gap)
        );
    }
    s
}

/// A minimizer and the minimum value.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Minimum {
    pub arg: f64,
    pub value: f64,
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search on `[lo, hi]` where `less(x, y)` decides whether the
/// objective at `x` is strictly smaller than at `y`.
fn golden_section(mut lo: f64, mut hi: f64, tol: f64, less: impl Fn(f64, f64) -> bool) -> f64 {
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    for _ in 0..500 {
        let floor = 4.0 * f64::EPSILON * hi.abs().max(lo.abs()).max(1.0);
        if hi - lo <= tol.max(floor) || x1 >= x2 {
            break;
        }
        if less(x1, x2) {
            hi = x2;
            x2 = x1;
            x1 = hi - INV_PHI * (hi - lo);
        } else {
            lo = x1;
            x1 = x2;
            x2 = lo + INV_PHI * (hi - lo);
        }
    }
    0.5 * (lo + hi)
}

/// Minimizes `δ_r` over `b > 1`.
///
/// A coarse scan on `(1, 2r + 1]` brackets the minimum; golden section then
/// narrows it, comparing `δ_r` values exactly because the function is too
/// flat near its minimum for float comparisons to resolve `b` finely.
pub fn minimize_delta(r: u32, tol: f64) -> Result<Minimum> {
    check_r(r)?;
    check_tol(tol)?;
    const SCAN: usize = 2000;
    let top = 2.0 * r as f64 + 1.0;
    let step = (top - 1.0) / SCAN as f64;
    let grid: Vec<f64> = (1..=SCAN).map(|k| 1.0 + k as f64 * step).collect();
    let best = grid
        .iter()
        .enumerate()
        .min_by(|a, b| {
            delta_formula(r, *a.1)
                .unwrap_or(f64::INFINITY)
                .total_cmp(&delta_formula(r, *b.1).unwrap_or(f64::INFINITY))
        })
        .map(|(i, _)| i)
        .expect("non-empty grid");
    let lo = if best == 0 { 1.0 + step / 2.0 } else { grid[best - 1] };
    let hi = grid[(best + 1).min(SCAN - 1)];
    let exact_delta = |b: f64| delta_formula_exact(r, &from_f64(b)).expect("b > 1");
    let b = golden_section(lo, hi, tol, |x, y| exact_delta(x) < exact_delta(y));
    Ok(Minimum {
        arg: b,
        value: exact::to_f64(&exact_delta(b)),
    })
}

/// `(1 - z/2) / (1 - z^2)` on `[0, 1)`.
pub fn f2_objective(z: f64) -> f64 {
    (1.0 - z / 2.0) / (1.0 - z * z)
}

fn f2_objective_exact(z: &BigRational) -> BigRational {
    let one = BigRational::one();
    (&one - z / ratio(2, 1)) / (&one - z * z)
}

/// The infimum of `(1 - z/2)/(1 - z^2)` over `[0, 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct F2Result {
    /// Numerical minimizer and value.
    pub numeric: Minimum,
    /// Stationary point `2 - √3`.
    pub z_exact: Sqrt3,
    /// `(2 + √3)/4`.
    pub f2_exact: Sqrt3,
}

/// Golden section on `[0, 1/2]` with exact comparisons, alongside the
/// closed-form root of `-z^2 + 4z - 1`.
pub fn f2_inf() -> F2Result {
    let z = golden_section(0.0, 0.5, 1e-15, |x, y| {
        f2_objective_exact(&from_f64(x)) < f2_objective_exact(&from_f64(y))
    });
    let z_exact = Sqrt3::new(ratio(2, 1), ratio(-1, 1));
    let f2_exact = Sqrt3::new(ratio(1, 2), ratio(1, 4));
    F2Result {
        numeric: Minimum {
            arg: z,
            value: exact::to_f64(&f2_objective_exact(&from_f64(z))),
        },
        z_exact,
        f2_exact,
    }
}

/// `f2 = (2 + √3)/4` as a float.
pub fn f2_value() -> f64 {
    (2.0 + 3f64.sqrt()) / 4.0
}

/// Exact check that a rational lies strictly on the given side of `2 + √3`.
pub fn compare_with_two_plus_sqrt3(x: &BigRational) -> Ordering {
    let diff = Sqrt3::new(x - ratio(2, 1), ratio(-1, 1));
    diff.signum()
}

/// Integer coefficient sequence of `p_r`, highest degree first, zeros dropped.
pub fn critical_poly_coefficients(r: u32) -> Vec<BigInt> {
    let r_i = BigInt::from(r);
    let mut c = vec![BigInt::one(), -(BigInt::from(2) * &r_i)];
    if r > 1 {
        c.push(r_i - 1);
    }
    c.retain(|x| !x.is_zero());
    c
}

/// Sign changes in a coefficient sequence.
pub fn sign_changes(coeffs: &[BigInt]) -> u32 {
    coeffs
        .windows(2)
        .filter(|w| w[0].is_positive() != w[1].is_positive())
        .count() as u32
}

#[cfg(test)]
mod tests {
    use super::*;

    fn oracle_root(r: u32) -> f64 {
        // plain float bisection, independent of the exact machinery
        let (mut lo, mut hi) = (1.0f64, 2.0 * r as f64);
        for _ in 0..200 {
            let m = 0.5 * (lo + hi);
            if m.powi(r as i32) - 2.0 * r as f64 * m + r as f64 - 1.0 < 0.0 {
                lo = m;
            } else {
                hi = m;
            }
        }
        lo
    }

    #[test]
    fn r2_root_is_two_plus_sqrt3() {
        let root = critical_root(2, 1e-12).unwrap();
        assert!((root.b0 - (2.0 + 3f64.sqrt())).abs() < 1e-15);
        assert!(root.residual <= 1e-12);
        assert_eq!(compare_with_two_plus_sqrt3(&root.lo), Ordering::Less);
        assert_eq!(compare_with_two_plus_sqrt3(&root.hi), Ordering::Greater);
        assert!(root.certificate.holds());
        assert!((root.small_root - (2.0 - 3f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn r3_root() {
        let root = critical_root(3, 1e-12).unwrap();
        assert!((root.b0 - oracle_root(3)).abs() < 1e-9);
        assert!((root.b0 - 2.2618).abs() < 1e-4);
        assert!(root.small_root > 0.0 && root.small_root < 1.0);
    }

    #[test]
    fn roots_for_many_r() {
        for r in 2..=12 {
            let root = critical_root(r, 1e-20).unwrap();
            assert!(root.b0 > 1.0);
            assert!(root.residual <= 1e-20);
            assert!(root.certificate.holds());
            assert!((root.b0 - oracle_root(r)).abs() < 1e-12 * root.b0);
        }
    }

    #[test]
    fn bad_arguments() {
        assert!(critical_root(1, 1e-12).is_err());
        assert!(critical_root(2, 0.0).is_err());
        assert!(minimize_delta(1, 1e-12).is_err());
        assert!(c_upper_table(1, 1e-12).is_err());
    }

    #[test]
    fn table_values() {
        let rows = c_upper_table(10, 1e-12).unwrap();
        assert_eq!(rows.len(), 9);
        assert!((rows[0].c_upper - 0.933_012_701_9).abs() < 1e-10);
        // both closed forms evaluated in floats at the oracle root
        let b = oracle_root(3);
        let c_oracle = (1.0 - 0.5 / b) * (1.0 + 1.0 / (6.0 * b - 3.0));
        let d_oracle = (1.0 - 0.5 / b) / (1.0 - b.powi(-3));
        assert!((c_oracle - d_oracle).abs() < 1e-9);
        assert!((rows[1].c_upper - c_oracle).abs() < 1e-9);
        assert!((rows[1].c_upper - 0.8526).abs() < 1e-4);
        for row in &rows {
            assert!(row.identity_gap <= 1e-12);
            assert!(row.c_upper > 0.5 && row.c_upper < 1.0);
            assert!((row.c_upper - delta_formula(row.r, row.b0).unwrap()).abs() < 1e-12);
        }
        assert_eq!(monotonicity_violation(&rows), None);
        let csv = table_csv(&rows);
        assert!(csv.starts_with("r,b0,c_upper,delta_min,identity_gap\n2,3.73205080756888,0.933012701892219,"));
    }

    #[test]
    fn minimization_agrees_with_root() {
        for r in 2..=10 {
            let tol = 1e-12;
            let m = minimize_delta(r, tol).unwrap();
            let root = critical_root(r, tol).unwrap();
            assert!((m.arg - root.b0).abs() <= 10.0 * tol, "r={r}: {} vs {}", m.arg, root.b0);
            let d = crate::density::delta_derivative(r, m.arg - 1e-4).unwrap();
            let e = crate::density::delta_derivative(r, m.arg + 1e-4).unwrap();
            assert!(d < 0.0 && e > 0.0);
        }
        let m = minimize_delta(2, 1e-12).unwrap();
        assert!(14.0 / 15.0 > m.value);
        assert!((m.value - f2_value()).abs() < 1e-15);
    }

    #[test]
    fn f2_numeric_and_exact() {
        let f = f2_inf();
        assert!((f.numeric.arg - (2.0 - 3f64.sqrt())).abs() < 1e-9);
        assert!((f.numeric.value - f2_value()).abs() < 1e-15);
        assert!((f.f2_exact.to_f64() - f2_value()).abs() < 1e-16);
        // stationarity: -z^2 + 4z - 1 = 0 at z = 2 - √3
        let z = f.z_exact.clone();
        let q = Sqrt3::rational(ratio(-1, 1)) * z.clone() * z.clone() + Sqrt3::rational(ratio(4, 1)) * z
            - Sqrt3::rational(ratio(1, 1));
        assert_eq!(q, Sqrt3::rational(BigRational::zero()));
        assert_eq!(f2_objective(0.0), 1.0);
        assert!(f2_objective(0.999_999) > 1e5);
        let c2 = c_upper_table(2, 1e-12).unwrap()[0].c_upper;
        assert!((f.numeric.value - c2).abs() < 1e-15);
    }

    #[test]
    fn coefficient_sign_changes() {
        for r in 2..=10 {
            assert_eq!(sign_changes(&critical_poly_coefficients(r)), 2);
        }
    }
}
