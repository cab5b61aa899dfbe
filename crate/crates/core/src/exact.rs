//! Exact scalar types: big rationals and the quadratic fields Q(√D).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Field operations needed to run the step map and fixed-point formulas exactly.
pub trait ExactField:
    Clone + PartialEq + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Div<Output = Self>
{
    fn from_ratio(num: i64, den: i64) -> Self;

    fn is_zero_value(&self) -> bool {
        *self == Self::from_ratio(0, 1)
    }
}

impl ExactField for BigRational {
    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(num.into(), den.into())
    }
}

pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(num.into(), den.into())
}

/// Exact conversion of a finite float.
pub fn from_f64(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite float")
}

/// Nearest float to a rational (to within an ulp).
pub fn to_f64(x: &BigRational) -> f64 {
    // scale so numerator and denominator both fit comfortably in f64
    let (n, d) = (x.numer(), x.denom());
    let shift = (n.bits().max(d.bits()) as i64 - 1000).max(0) as usize;
    let (n, d) = (n >> shift, d >> shift);
    if d.is_zero() {
        return if n.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        };
    }
    // 2^-64 relative accuracy through a 128-bit quotient
    let bits = n.bits() as i64 - d.bits() as i64;
    let scale = 120 - bits;
    let q: BigInt = if scale >= 0 {
        (n << scale as usize) / d
    } else {
        n / (d << (-scale) as usize)
    };
    let half = (-scale / 2) as i32;
    q.to_f64().unwrap_or(f64::NAN) * 2f64.powi(half) * 2f64.powi(-scale as i32 - half)
}

/// `p + q√D` with rational `p`, `q`; `D` must not be a perfect square.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadSurd<const D: u32> {
    pub p: BigRational,
    pub q: BigRational,
}

/// Elements of Q(√3).
pub type Sqrt3 = QuadSurd<3>;

impl<const D: u32> QuadSurd<D> {
    pub fn new(p: BigRational, q: BigRational) -> Self {
        QuadSurd { p, q }
    }

    pub fn rational(p: BigRational) -> Self {
        QuadSurd {
            p,
            q: BigRational::zero(),
        }
    }

    /// `√D` itself.
    pub fn root() -> Self {
        QuadSurd {
            p: BigRational::zero(),
            q: BigRational::one(),
        }
    }

    pub fn conjugate(&self) -> Self {
        QuadSurd {
            p: self.p.clone(),
            q: -self.q.clone(),
        }
    }

    /// `p^2 - D q^2`.
    pub fn norm(&self) -> BigRational {
        &self.p * &self.p - BigRational::from_integer(D.into()) * &self.q * &self.q
    }

    pub fn signum(&self) -> Ordering {
        let (sp, sq) = (self.p.cmp(&Zero::zero()), self.q.cmp(&Zero::zero()));
        match (sp, sq) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (a, b) if a == b => a,
            // opposite signs: the larger of p^2 and D q^2 wins
            (a, _) => match self.norm().cmp(&Zero::zero()) {
                Ordering::Greater => a,
                Ordering::Less => a.reverse(),
                Ordering::Equal => Ordering::Equal,
            },
        }
    }

    pub fn to_f64(&self) -> f64 {
        to_f64(&self.p) + to_f64(&self.q) * (D as f64).sqrt()
    }
}

impl<const D: u32> PartialOrd for QuadSurd<D> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<const D: u32> Ord for QuadSurd<D> {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.clone() - other.clone()).signum()
    }
}

impl<const D: u32> Add for QuadSurd<D> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        QuadSurd::new(self.p + o.p, self.q + o.q)
    }
}

impl<const D: u32> Sub for QuadSurd<D> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        QuadSurd::new(self.p - o.p, self.q - o.q)
    }
}

impl<const D: u32> Neg for QuadSurd<D> {
    type Output = Self;
    fn neg(self) -> Self {
        QuadSurd::new(-self.p, -self.q)
    }
}

impl<const D: u32> Mul for QuadSurd<D> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let d = BigRational::from_integer(D.into());
        QuadSurd::new(&self.p * &o.p + d * &self.q * &o.q, &self.p * &o.q + &self.q * &o.p)
    }
}

impl<const D: u32> Div for QuadSurd<D> {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let n = o.norm();
        assert!(!n.is_zero(), "division by zero in Q(√{D})");
        let num = self * o.conjugate();
        QuadSurd::new(num.p / &n, num.q / n)
    }
}

impl<const D: u32> ExactField for QuadSurd<D> {
    fn from_ratio(num: i64, den: i64) -> Self {
        QuadSurd::rational(ratio(num, den))
    }
}

impl<const D: u32> fmt::Display for QuadSurd<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}·√{}", self.p, self.q, D)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3(p: (i64, i64), q: (i64, i64)) -> Sqrt3 {
        Sqrt3::new(ratio(p.0, p.1), ratio(q.0, q.1))
    }

    #[test]
    fn field_arithmetic() {
        let a = s3((2, 1), (1, 1)); // 2 + √3
        let b = s3((2, 1), (-1, 1)); // 2 - √3
        assert_eq!(a.clone() * b.clone(), Sqrt3::from_ratio(1, 1));
        assert_eq!(Sqrt3::from_ratio(1, 1) / b.clone(), a);
        assert_eq!(Sqrt3::root() * Sqrt3::root(), Sqrt3::from_ratio(3, 1));
        assert!((a.to_f64() - 3.732_050_807_568_877).abs() < 1e-15);
    }

    #[test]
    fn ordering() {
        let a = s3((2, 1), (-1, 1)); // 0.2679...
        assert_eq!(a.signum(), Ordering::Greater);
        assert!(a < Sqrt3::from_ratio(27, 100));
        assert!(a > Sqrt3::from_ratio(26, 100));
        assert_eq!(s3((-7, 4), (1, 1)).signum(), Ordering::Less); // √3 < 7/4
        assert_eq!(s3((0, 1), (0, 1)).signum(), Ordering::Equal);
    }

    #[test]
    fn rational_to_float() {
        assert_eq!(to_f64(&ratio(14, 15)), 14.0 / 15.0);
        assert_eq!(to_f64(&ratio(-1, 3)), -1.0 / 3.0);
        assert_eq!(to_f64(&from_f64(0.1)), 0.1);
        let huge = BigRational::new(BigInt::from(1) << 3000usize, BigInt::from(3) << 3000usize);
        assert_eq!(to_f64(&huge), 1.0 / 3.0);
    }
}
