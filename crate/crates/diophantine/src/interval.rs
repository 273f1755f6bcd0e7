//! Outward-rounded real intervals, generic over the float type.
//!
//! Transcendental functions are evaluated in `f64` and padded by a few ulps
//! before conversion to `T`; conversion to a narrower `T` rounds outward.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{Float, FromPrimitive, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Scalar used for interval endpoints.
pub trait Real:
    Float + FromPrimitive + ToPrimitive + fmt::Debug + fmt::Display + Send + Sync + 'static
{
}

impl Real for f32 {}
impl Real for f64 {}

const PAD_ULPS: f64 = 4.0;

fn pad_down(x: f64, ulps: f64) -> f64 {
    if x == 0.0 {
        return -f64::MIN_POSITIVE;
    }
    x - x.abs() * f64::EPSILON * ulps - f64::MIN_POSITIVE
}

fn pad_up(x: f64, ulps: f64) -> f64 {
    if x == 0.0 {
        return f64::MIN_POSITIVE;
    }
    x + x.abs() * f64::EPSILON * ulps + f64::MIN_POSITIVE
}

fn to_t_down<T: Real>(x: f64) -> T {
    let t = T::from_f64(x).unwrap_or_else(T::neg_infinity);
    match t.to_f64() {
        Some(back) if back > x => t - t.abs() * T::epsilon() - T::min_positive_value(),
        _ => t,
    }
}

fn to_t_up<T: Real>(x: f64) -> T {
    let t = T::from_f64(x).unwrap_or_else(T::infinity);
    match t.to_f64() {
        Some(back) if back < x => t + t.abs() * T::epsilon() + T::min_positive_value(),
        _ => t,
    }
}

/// Closed interval `[lo, hi]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval<T> {
    pub lo: T,
    pub hi: T,
}

impl<T: Real> Interval<T> {
    pub fn new(lo: T, hi: T) -> Self {
        debug_assert!(lo <= hi, "inverted interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn point(x: T) -> Self {
        Interval { lo: x, hi: x }
    }

    /// Enclosure of an `f64` value known up to `ulps` units in the last place.
    pub fn from_f64_ulps(x: f64, ulps: f64) -> Self {
        Interval {
            lo: to_t_down(pad_down(x, ulps)),
            hi: to_t_up(pad_up(x, ulps)),
        }
    }

    fn from_f64_bounds(lo: f64, hi: f64) -> Self {
        Interval {
            lo: to_t_down(lo),
            hi: to_t_up(hi),
        }
    }

    pub fn zero() -> Self {
        Self::point(T::zero())
    }

    pub fn mid(&self) -> T {
        (self.lo + self.hi) / (T::one() + T::one())
    }

    pub fn width(&self) -> T {
        self.hi - self.lo
    }

    pub fn contains(&self, x: T) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn overlaps(&self, other: &Self) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn hull(&self, other: &Self) -> Self {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    /// Certainly strictly below `other`.
    pub fn lt(&self, other: &Self) -> bool {
        self.hi < other.lo
    }

    /// Certainly at most `other`.
    pub fn le(&self, other: &Self) -> bool {
        self.hi <= other.lo
    }

    fn f64_bounds(&self) -> (f64, f64) {
        (
            self.lo.to_f64().unwrap_or(f64::NEG_INFINITY),
            self.hi.to_f64().unwrap_or(f64::INFINITY),
        )
    }

    pub fn scale(&self, k: f64) -> Self {
        let (lo, hi) = self.f64_bounds();
        let (a, b) = if k >= 0.0 { (lo * k, hi * k) } else { (hi * k, lo * k) };
        Self::from_f64_bounds(pad_down(a, 1.0), pad_up(b, 1.0))
    }

    pub fn max(&self, other: &Self) -> Self {
        Interval {
            lo: self.lo.max(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    pub fn min(&self, other: &Self) -> Self {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.min(other.hi),
        }
    }

    /// Natural log; the interval must be positive.
    pub fn ln(&self) -> Self {
        let (lo, hi) = self.f64_bounds();
        assert!(lo > 0.0, "log of non-positive interval");
        Self::from_f64_bounds(pad_down(lo.ln(), PAD_ULPS), pad_up(hi.ln(), PAD_ULPS))
    }

    pub fn exp(&self) -> Self {
        let (lo, hi) = self.f64_bounds();
        Self::from_f64_bounds(
            pad_down(lo.exp(), PAD_ULPS).max(0.0),
            pad_up(hi.exp(), PAD_ULPS),
        )
    }

    pub fn sqrt(&self) -> Self {
        let (lo, hi) = self.f64_bounds();
        Self::from_f64_bounds(
            pad_down(lo.max(0.0).sqrt(), PAD_ULPS).max(0.0),
            pad_up(hi.max(0.0).sqrt(), PAD_ULPS),
        )
    }

    pub fn recip(&self) -> Self {
        let (lo, hi) = self.f64_bounds();
        assert!(lo > 0.0 || hi < 0.0, "reciprocal of interval containing 0");
        Self::from_f64_bounds(pad_down(1.0 / hi, 1.0), pad_up(1.0 / lo, 1.0))
    }

    pub fn div(&self, other: &Self) -> Self {
        *self * other.recip()
    }

    pub fn abs(&self) -> Self {
        if self.lo >= T::zero() {
            *self
        } else if self.hi <= T::zero() {
            -*self
        } else {
            Interval {
                lo: T::zero(),
                hi: self.hi.max(-self.lo),
            }
        }
    }

    /// `log(n)` for a positive integer.
    pub fn ln_bigint(n: &BigInt) -> Self {
        let (lo, hi) = ln_bigint_f64(n);
        Self::from_f64_bounds(lo, hi)
    }

    /// `log(r)` for a positive rational.
    pub fn ln_rational(r: &BigRational) -> Self {
        let (a_lo, a_hi) = ln_bigint_f64(r.numer());
        let (b_lo, b_hi) = ln_bigint_f64(r.denom());
        Self::from_f64_bounds(pad_down(a_lo - b_hi, 1.0), pad_up(a_hi - b_lo, 1.0))
    }

    /// Enclosure of an exact rational.
    pub fn from_rational(r: &BigRational) -> Self {
        let (lo, hi) = rational_f64_bounds(r);
        Self::from_f64_bounds(lo, hi)
    }

    pub fn from_bigint(n: &BigInt) -> Self {
        Self::from_rational(&BigRational::from_integer(n.clone()))
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        self.f64_bounds()
    }
}

/// Bounds on `ln n` in `f64` for `n > 0`.
pub fn ln_bigint_f64(n: &BigInt) -> (f64, f64) {
    assert!(n.sign() == Sign::Plus, "log of non-positive integer");
    let bits = n.bits();
    if bits <= 53 {
        let v = n.to_f64().expect("fits");
        let l = v.ln();
        return (pad_down(l, PAD_ULPS), pad_up(l, PAD_ULPS));
    }
    let shift = bits.saturating_sub(60);
    let m: BigInt = n >> shift;
    let m = m.to_u64().expect("60-bit mantissa");
    let base = shift as f64 * std::f64::consts::LN_2;
    let lo = (m as f64).ln() + base;
    let hi = ((m + 1) as f64).ln() + base;
    (pad_down(lo, PAD_ULPS), pad_up(hi, PAD_ULPS))
}

/// Bounds on a rational value in `f64`.
pub fn rational_f64_bounds(r: &BigRational) -> (f64, f64) {
    if r.is_zero() {
        return (0.0, 0.0);
    }
    let neg = r.is_negative();
    let num = r.numer().abs();
    let den = r.denom().clone();
    // q = floor(num * 2^s / den) carries about 62 significant bits.
    let s: i64 = 62 - (num.bits() as i64 - den.bits() as i64);
    let (q, exact) = if s >= 0 {
        let scaled: BigInt = &num << (s as u64);
        let q = &scaled / &den;
        let ex = (&q * &den) == scaled;
        (q, ex)
    } else {
        let scaled_den: BigInt = &den << ((-s) as u64);
        let q = &num / &scaled_den;
        let ex = (&q * &scaled_den) == num;
        (q, ex)
    };
    let qf = q.to_f64().expect("finite");
    let p = 2f64.powi(-(s as i32));
    let lo = qf * p;
    let hi = if exact { lo } else { (qf + 1.0) * p };
    let (lo, hi) = (pad_down(lo, 2.0), pad_up(hi, 2.0));
    if neg {
        (-hi, -lo)
    } else {
        (lo, hi)
    }
}

impl<T: Real> Add for Interval<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let (a, b) = self.f64_bounds();
        let (c, d) = rhs.f64_bounds();
        Self::from_f64_bounds(pad_down(a + c, 1.0), pad_up(b + d, 1.0))
    }
}

impl<T: Real> Sub for Interval<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<T: Real> Neg for Interval<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

impl<T: Real> Mul for Interval<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let (a, b) = self.f64_bounds();
        let (c, d) = rhs.f64_bounds();
        let ps = [a * c, a * d, b * c, b * d];
        let lo = ps.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = ps.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        Self::from_f64_bounds(pad_down(lo, 1.0), pad_up(hi, 1.0))
    }
}

impl<T: Real> fmt::Display for Interval<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Sum of intervals.
pub fn sum<T: Real, I: IntoIterator<Item = Interval<T>>>(it: I) -> Interval<T> {
    it.into_iter().fold(Interval::zero(), |a, b| a + b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_of_big_integer_brackets_true_value() {
        let n = BigInt::from(10u64).pow(40);
        let iv = Interval::<f64>::ln_bigint(&n);
        let truth = 40.0 * 10f64.ln();
        assert!(iv.contains(truth));
        assert!(iv.width() < 1e-12);
    }

    #[test]
    fn ln_between_53_and_60_bits() {
        for b in 53..=61u32 {
            let n = (BigInt::from(1) << b) + BigInt::from(3);
            let iv = Interval::<f64>::ln_bigint(&n);
            assert!(iv.contains(b as f64 * std::f64::consts::LN_2), "bits {b}");
        }
    }

    #[test]
    fn rational_bounds_contain_value() {
        let r = BigRational::new(BigInt::from(1), BigInt::from(3));
        let iv = Interval::<f64>::from_rational(&r);
        assert!(iv.lo <= 1.0 / 3.0 && 1.0 / 3.0 <= iv.hi);
        let iv32 = Interval::<f32>::from_rational(&r);
        assert!((iv32.lo as f64) < 1.0 / 3.0 && (iv32.hi as f64) > 1.0 / 3.0);
    }

    #[test]
    fn arithmetic_encloses() {
        let a = Interval::<f64>::from_f64_ulps(0.1, 0.0);
        let b = a + a + a;
        assert!(b.contains(0.30000000000000004) && b.lo <= 0.3);
    }
}
