//! Exact arithmetic foundation: rationals, algebraic numbers with certified
//! root boxes, projective points, number-field elements, continued
//! fractions and divided-power jets.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factor;
use crate::interval::{rational_f64_bounds, Interval};
use crate::upoly::{self, ZPoly};

pub type ExactRational = BigRational;

/// Default target width for archimedean quantities.
pub const DEFAULT_WIDTH: f64 = 1e-12;
/// Bisection budget for deciding comparisons.
pub const REFINEMENT_BUDGET: usize = 1_000_000;

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Exact rational from a finite `f64`.
pub fn rational_from_f64(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite float")
}

/// Parse `"p/q"`, `"p"` or a decimal such as `"2.05"`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::InvalidInput(format!("not a rational: {s}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        let neg = ip.starts_with('-');
        let ip_abs = ip.trim_start_matches(['-', '+']);
        let digits = format!("{}{}", if ip_abs.is_empty() { "0" } else { ip_abs }, fp);
        let n: BigInt = digits.parse().map_err(|_| bad())?;
        let d = BigInt::from(10u32).pow(fp.len() as u32);
        let r = BigRational::new(n, d);
        return Ok(if neg { -r } else { r });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(n))
}

fn floor_rat(x: &BigRational) -> BigInt {
    x.floor().to_integer()
}

/// Round to a dyadic rational with `bits` fractional bits.
fn round_dyadic(x: &BigRational, bits: u64) -> BigRational {
    let scale = BigInt::one() << bits;
    let v = (x * BigRational::from_integer(scale.clone()) + rat(1, 2)).floor();
    v / BigRational::from_integer(scale)
}

/// Complex rational.
#[derive(Clone, Debug, PartialEq)]
struct Cq {
    re: BigRational,
    im: BigRational,
}

impl Cq {
    fn from_c64(z: Complex64) -> Self {
        Cq {
            re: rational_from_f64(z.re),
            im: rational_from_f64(z.im),
        }
    }
    fn mul(&self, o: &Cq) -> Cq {
        Cq {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
    fn add_int(&self, c: &BigInt) -> Cq {
        Cq {
            re: &self.re + BigRational::from_integer(c.clone()),
            im: self.im.clone(),
        }
    }
    fn norm2(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }
    fn div(&self, o: &Cq) -> Cq {
        let n = o.norm2();
        let conj = Cq {
            re: o.re.clone(),
            im: -o.im.clone(),
        };
        let m = self.mul(&conj);
        Cq {
            re: m.re / &n,
            im: m.im / n,
        }
    }
    fn sub(&self, o: &Cq) -> Cq {
        Cq {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
        }
    }
    fn round(&self, bits: u64) -> Cq {
        Cq {
            re: round_dyadic(&self.re, bits),
            im: round_dyadic(&self.im, bits),
        }
    }
}

fn eval_cq(p: &[BigInt], z: &Cq) -> Cq {
    let mut acc = Cq {
        re: BigRational::zero(),
        im: BigRational::zero(),
    };
    for c in p.iter().rev() {
        acc = acc.mul(z).add_int(c);
    }
    acc
}

/// Axis-parallel box in the complex plane with rational corners. Real roots
/// carry a degenerate imaginary side `[0, 0]`.
#[derive(Clone, Debug, PartialEq)]
pub struct RootBox {
    pub re_lo: BigRational,
    pub re_hi: BigRational,
    pub im_lo: BigRational,
    pub im_hi: BigRational,
}

impl RootBox {
    pub fn is_real(&self) -> bool {
        self.im_lo.is_zero() && self.im_hi.is_zero()
    }

    pub fn width(&self) -> BigRational {
        let a = &self.re_hi - &self.re_lo;
        let b = &self.im_hi - &self.im_lo;
        if a > b {
            a
        } else {
            b
        }
    }

    pub fn re_interval(&self) -> Interval<f64> {
        let (a, _) = rational_f64_bounds(&self.re_lo);
        let (_, b) = rational_f64_bounds(&self.re_hi);
        Interval::new(a, b)
    }

    pub fn im_interval(&self) -> Interval<f64> {
        let (a, _) = rational_f64_bounds(&self.im_lo);
        let (_, b) = rational_f64_bounds(&self.im_hi);
        Interval::new(a, b)
    }

    /// Enclosure of `|z|^2` over the box.
    pub fn modulus_sq(&self) -> Interval<f64> {
        let sq = |iv: Interval<f64>| {
            let a = iv.abs();
            a * a
        };
        sq(self.re_interval()) + sq(self.im_interval())
    }

    pub fn center_f64(&self) -> Complex64 {
        Complex64::new(self.re_interval().mid(), self.im_interval().mid())
    }

    fn contains_box(&self, o: &RootBox) -> bool {
        self.re_lo <= o.re_lo && o.re_hi <= self.re_hi && self.im_lo <= o.im_lo && o.im_hi <= self.im_hi
    }

    fn disjoint(&self, o: &RootBox) -> bool {
        self.re_hi < o.re_lo || o.re_hi < self.re_lo || self.im_hi < o.im_lo || o.im_hi < self.im_lo
    }

    fn conj(&self) -> RootBox {
        RootBox {
            re_lo: self.re_lo.clone(),
            re_hi: self.re_hi.clone(),
            im_lo: -self.im_hi.clone(),
            im_hi: -self.im_lo.clone(),
        }
    }
}

impl fmt::Display for RootBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} x {}", self.re_interval(), self.im_interval())
    }
}

/// Algebraic number: primitive irreducible integer minimal polynomial
/// (constant term first) and one isolating box per complex root. Real roots
/// come first in increasing order, then non-real roots ordered by real part
/// with the upper-half-plane member of each conjugate pair first.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraicNumber {
    pub minpoly: ZPoly,
    pub embeddings: Vec<RootBox>,
    pub distinguished: usize,
}

fn aberth(p: &[BigInt]) -> Vec<Complex64> {
    let n = upoly::degree(p).unwrap();
    let c: Vec<f64> = p.iter().map(|x| x.to_f64().unwrap_or(f64::MAX)).collect();
    let lc = c[n];
    // Fujiwara bound on the root moduli.
    let r = (1..=n)
        .map(|k| (c[n - k] / lc).abs().powf(1.0 / k as f64))
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE)
        * 2.0;
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(r * 0.7, 2.0 * std::f64::consts::PI * (k as f64 + 0.4) / n as f64))
        .collect();
    let eval = |x: Complex64| -> (Complex64, Complex64) {
        let mut v = Complex64::new(0.0, 0.0);
        let mut d = Complex64::new(0.0, 0.0);
        for a in c.iter().rev() {
            d = d * x + v;
            v = v * x + a;
        }
        (v, d)
    };
    for _ in 0..2000 {
        let mut mx: f64 = 0.0;
        for k in 0..n {
            let (v, d) = eval(z[k]);
            if v.norm() == 0.0 {
                continue;
            }
            let ratio = v / d;
            let s: Complex64 = (0..n).filter(|&j| j != k).map(|j| 1.0 / (z[k] - z[j])).sum();
            let w = ratio / (1.0 - ratio * s);
            if w.is_finite() {
                z[k] -= w;
                mx = mx.max(w.norm() / (1.0 + z[k].norm()));
            }
        }
        if mx < 1e-15 {
            break;
        }
    }
    z
}

/// Upper bound on the square root of a non-negative rational, as a rational.
fn sqrt_upper(x: &BigRational) -> BigRational {
    let (_, hi) = rational_f64_bounds(x);
    let s = hi.max(0.0).sqrt();
    rational_from_f64(s * (1.0 + 4.0 * f64::EPSILON) + f64::MIN_POSITIVE)
}

/// Newton-refine a non-real root approximation and return a box holding
/// some root, of width at most `width`.
fn certify_complex(p: &[BigInt], z0: &Cq, width: &BigRational, upper: bool) -> Option<(Cq, RootBox)> {
    let n = upoly::degree(p).unwrap();
    let dp = upoly::derivative(p);
    let nn = BigRational::from_integer(BigInt::from(n * n));
    let mut z = z0.clone();
    let mut bits: u64 = 60;
    for _ in 0..200 {
        let pz = eval_cq(p, &z);
        let dz = eval_cq(&dp, &z);
        if dz.norm2().is_zero() {
            z.re += rat(1, 1 << 20);
            continue;
        }
        let rho2 = &nn * pz.norm2() / dz.norm2();
        let rho = sqrt_upper(&rho2);
        let ok_side = !upper || z.im > rho;
        if ok_side && &rho * int(2) <= *width && !rho.is_zero() || (pz.norm2().is_zero() && ok_side) {
            let rho = if rho.is_zero() { width / int(4) } else { rho };
            let b = RootBox {
                re_lo: &z.re - &rho,
                re_hi: &z.re + &rho,
                im_lo: &z.im - &rho,
                im_hi: &z.im + &rho,
            };
            return Some((z, b));
        }
        let step = pz.div(&dz);
        z = z.sub(&step).round(bits);
        bits = (bits * 2).min(4 * 64 + width_bits(width));
    }
    None
}

fn width_bits(w: &BigRational) -> u64 {
    // Number of bits needed to resolve `w`.
    let inv = (BigRational::one() / w).ceil().to_integer();
    inv.bits() + 8
}

impl AlgebraicNumber {
    pub fn degree(&self) -> usize {
        upoly::degree(&self.minpoly).unwrap()
    }

    /// The rational number `r` as a degree-one algebraic number.
    pub fn rational(r: &BigRational) -> Self {
        AlgebraicNumber {
            minpoly: vec![-r.numer().clone(), r.denom().clone()],
            embeddings: vec![RootBox {
                re_lo: r.clone(),
                re_hi: r.clone(),
                im_lo: BigRational::zero(),
                im_hi: BigRational::zero(),
            }],
            distinguished: 0,
        }
    }

    pub fn is_rational(&self) -> bool {
        self.degree() == 1
    }

    /// Exact value when the degree is one.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.degree() == 1 {
            Some(BigRational::new(-self.minpoly[0].clone(), self.minpoly[1].clone()))
        } else {
            None
        }
    }

    pub fn is_real(&self) -> bool {
        self.embeddings[self.distinguished].is_real()
    }

    pub fn leading_coefficient(&self) -> BigInt {
        upoly::lead(&self.minpoly)
    }

    /// Same number with another distinguished root.
    pub fn with_root(&self, which: usize) -> Result<Self> {
        if which >= self.degree() {
            return Err(Error::InvalidInput(format!("root index {which} out of range")));
        }
        let mut a = self.clone();
        a.distinguished = which;
        Ok(a)
    }

    /// Midpoint approximation of embedding `sigma`.
    pub fn approx(&self, sigma: usize) -> Complex64 {
        self.embeddings[sigma].center_f64()
    }

    /// Number of real embeddings.
    pub fn real_count(&self) -> usize {
        self.embeddings.iter().filter(|b| b.is_real()).count()
    }

    /// Independent certification check: a sign change plus a Sturm count of
    /// one for real boxes, winding number one of the boundary image for
    /// non-real boxes.
    pub fn certify(&self, sigma: usize) -> bool {
        let b = &self.embeddings[sigma];
        if b.is_real() {
            if b.re_lo == b.re_hi {
                return upoly::eval_q(&self.minpoly, &b.re_lo).is_zero();
            }
            let s = upoly::sturm_sequence(&self.minpoly);
            let a = upoly::sign_at(&self.minpoly, &b.re_lo);
            let c = upoly::sign_at(&self.minpoly, &b.re_hi);
            a * c < 0 && upoly::roots_in(&s, &b.re_lo, &b.re_hi) == 1
        } else {
            winding_number(&self.minpoly, b) == Some(1)
        }
    }
}

/// Winding number of `p` around 0 along the boundary of the box,
/// by adaptive sampling; `None` if `p` comes too close to 0 on the boundary.
pub fn winding_number(p: &[BigInt], b: &RootBox) -> Option<i64> {
    let c: Vec<f64> = p.iter().map(|x| x.to_f64().unwrap()).collect();
    let ev = |z: Complex64| c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, a| acc * z + a);
    let (x0, x1) = (b.re_interval().lo, b.re_interval().hi);
    let (y0, y1) = (b.im_interval().lo, b.im_interval().hi);
    let corners = [
        Complex64::new(x0, y0),
        Complex64::new(x1, y0),
        Complex64::new(x1, y1),
        Complex64::new(x0, y1),
    ];
    let mut total = 0.0;
    for k in 0..4 {
        let (a, bnd) = (corners[k], corners[(k + 1) % 4]);
        let steps = 4096;
        let mut prev = ev(a);
        if prev.norm() == 0.0 {
            return None;
        }
        for s in 1..=steps {
            let t = s as f64 / steps as f64;
            let z = a + (bnd - a) * t;
            let v = ev(z);
            if v.norm() == 0.0 {
                return None;
            }
            let d = (v / prev).arg();
            if d.abs() > 1.5 {
                return None;
            }
            total += d;
            prev = v;
        }
    }
    Some((total / (2.0 * std::f64::consts::PI)).round() as i64)
}

/// Build an algebraic number from integer coefficients (constant term
/// first). The polynomial is normalized to content one and positive leading
/// coefficient, then checked for irreducibility.
pub fn algnum_from_minpoly(coeffs: &[BigInt], which_root: usize) -> Result<AlgebraicNumber> {
    let p = upoly::primitive(coeffs);
    let n = match upoly::degree(&p) {
        None => return Err(Error::ZeroPolynomial),
        Some(0) => return Err(Error::InvalidInput("constant polynomial has no roots".into())),
        Some(n) => n,
    };
    if which_root >= n {
        return Err(Error::InvalidInput(format!("root index {which_root} >= degree {n}")));
    }
    if !factor::is_irreducible(&p) {
        return Err(Error::ReducibleMinpoly);
    }
    if n == 1 {
        let r = BigRational::new(-p[0].clone(), p[1].clone());
        return Ok(AlgebraicNumber::rational(&r));
    }
    let mut boxes = isolate_real_roots(&p);
    let r = boxes.len();
    if r < n {
        boxes.extend(isolate_complex_roots(&p, n - r)?);
    }
    Ok(AlgebraicNumber {
        minpoly: p,
        embeddings: boxes,
        distinguished: which_root,
    })
}

pub fn algnum_from_i64(coeffs: &[i64], which_root: usize) -> Result<AlgebraicNumber> {
    let v: Vec<BigInt> = coeffs.iter().map(|&c| BigInt::from(c)).collect();
    algnum_from_minpoly(&v, which_root)
}

/// The real root of `x^2 - 2` that is positive.
pub fn sqrt2() -> AlgebraicNumber {
    let a = algnum_from_i64(&[-2, 0, 1], 0).expect("irreducible");
    let pos = a.embeddings.iter().position(|b| b.re_hi.is_positive() && !b.re_lo.is_negative()).unwrap();
    a.with_root(pos).unwrap()
}

/// The real cube root of 2.
pub fn cbrt2() -> AlgebraicNumber {
    algnum_from_i64(&[-2, 0, 0, 1], 0).expect("irreducible")
}

fn isolate_real_roots(p: &[BigInt]) -> Vec<RootBox> {
    let seq = upoly::sturm_sequence(p);
    let m = BigRational::from_integer(upoly::cauchy_bound(p));
    let mut stack = vec![(-m.clone(), m)];
    let mut out: Vec<(BigRational, BigRational)> = vec![];
    while let Some((a, b)) = stack.pop() {
        let k = upoly::roots_in(&seq, &a, &b);
        if k == 0 {
            continue;
        }
        if k == 1 && upoly::sign_at(p, &a) * upoly::sign_at(p, &b) < 0 {
            out.push((a, b));
            continue;
        }
        let mid = (&a + &b) / int(2);
        stack.push((a, mid.clone()));
        stack.push((mid, b));
    }
    out.sort_by(|x, y| x.0.cmp(&y.0));
    out.into_iter()
        .map(|(a, b)| RootBox {
            re_lo: a,
            re_hi: b,
            im_lo: BigRational::zero(),
            im_hi: BigRational::zero(),
        })
        .collect()
}

fn isolate_complex_roots(p: &[BigInt], count: usize) -> Result<Vec<RootBox>> {
    let half = count / 2;
    let approx = aberth(p);
    let mut uppers: Vec<Complex64> = approx.into_iter().filter(|z| z.im > 0.0).collect();
    uppers.sort_by(|a, b| b.im.partial_cmp(&a.im).unwrap());
    uppers.truncate(half);
    if uppers.len() != half {
        return Err(Error::PrecisionExhausted);
    }
    let mut width = rat(1, 1 << 10);
    for _ in 0..40 {
        let mut boxes = vec![];
        let mut ok = true;
        for z in &uppers {
            match certify_complex(p, &Cq::from_c64(*z), &width, true) {
                Some((_, b)) => boxes.push(b),
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            let disjoint = (0..boxes.len()).all(|i| (i + 1..boxes.len()).all(|j| boxes[i].disjoint(&boxes[j])));
            if disjoint {
                boxes.sort_by(|a, b| a.re_lo.cmp(&b.re_lo));
                let mut out = vec![];
                for b in boxes {
                    let c = b.conj();
                    out.push(b);
                    out.push(c);
                }
                return Ok(out);
            }
        }
        width = width / int(1 << 16);
    }
    Err(Error::PrecisionExhausted)
}

/// Box of width at most `width` around root `sigma`.
pub fn refine_embedding(alpha: &AlgebraicNumber, sigma: usize, width: &BigRational) -> RootBox {
    let b = alpha.embeddings[sigma].clone();
    if b.width() <= *width {
        return b;
    }
    if b.is_real() {
        let (mut lo, mut hi) = (b.re_lo, b.re_hi);
        let slo = upoly::sign_at(&alpha.minpoly, &lo);
        while &hi - &lo > *width {
            let mid = (&lo + &hi) / int(2);
            let s = upoly::sign_at(&alpha.minpoly, &mid);
            if s == 0 {
                lo = mid.clone();
                hi = mid;
                break;
            }
            if s == slo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        return RootBox {
            re_lo: lo,
            re_hi: hi,
            im_lo: BigRational::zero(),
            im_hi: BigRational::zero(),
        };
    }
    let upper = b.im_lo.is_positive();
    let center = Cq {
        re: (&b.re_lo + &b.re_hi) / int(2),
        im: (&b.im_lo + &b.im_hi) / int(2),
    };
    let mut w = width.clone();
    for _ in 0..64 {
        if let Some((_, nb)) = certify_complex(&alpha.minpoly, &center, &w, upper) {
            if b.contains_box(&nb) {
                return nb;
            }
        }
        w = w / int(2);
    }
    b
}

/// Real enclosure of a real embedding refined to `width`.
pub fn real_interval(alpha: &AlgebraicNumber, sigma: usize, width: f64) -> Result<(BigRational, BigRational)> {
    let b = &alpha.embeddings[sigma];
    if !b.is_real() {
        return Err(Error::NotReal);
    }
    let r = refine_embedding(alpha, sigma, &rational_from_f64(width));
    Ok((r.re_lo, r.re_hi))
}

/// Point of the projective line over Q with coprime integer coordinates
/// and canonical sign (`b > 0`, or `b = 0` and `a = 1`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint {
    pub a: BigInt,
    pub b: BigInt,
}

impl ProjPoint {
    pub fn new(a: BigInt, b: BigInt) -> Result<Self> {
        if a.is_zero() && b.is_zero() {
            return Err(Error::InvalidInput("(0:0) is not a projective point".into()));
        }
        let g = a.gcd(&b);
        let (mut a, mut b) = (a / &g, b / &g);
        if b.is_negative() || (b.is_zero() && a.is_negative()) {
            a = -a;
            b = -b;
        }
        Ok(ProjPoint { a, b })
    }

    pub fn from_i64(a: i64, b: i64) -> Result<Self> {
        Self::new(BigInt::from(a), BigInt::from(b))
    }

    pub fn from_rational(r: &BigRational) -> Self {
        ProjPoint {
            a: r.numer().clone(),
            b: r.denom().clone(),
        }
    }

    pub fn infinity() -> Self {
        ProjPoint {
            a: BigInt::one(),
            b: BigInt::zero(),
        }
    }

    /// Affine value `a/b` when finite.
    pub fn affine(&self) -> Option<BigRational> {
        if self.b.is_zero() {
            None
        } else {
            Some(BigRational::new(self.a.clone(), self.b.clone()))
        }
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}:{})", self.a, self.b)
    }
}

/// Accepts `(a:b)`, `a:b`, `inf`, or any rational accepted by
/// [`parse_rational`].
impl std::str::FromStr for ProjPoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") {
            return Ok(Self::infinity());
        }
        if let Some((a, b)) = t.split_once(':') {
            let bad = || Error::InvalidInput(format!("not a projective point: {s}"));
            return Self::new(a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
        }
        Ok(Self::from_rational(&parse_rational(t)?))
    }
}

impl Serialize for ProjPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ProjPoint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Element of Q(alpha) on the power basis `1, alpha, ..., alpha^(n-1)`.
#[derive(Clone, Debug)]
pub struct NumberFieldElement {
    pub coords: Vec<BigRational>,
    pub parent: Arc<AlgebraicNumber>,
}

impl PartialEq for NumberFieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.parent.minpoly == other.parent.minpoly && self.coords == other.coords
    }
}

fn reduce_mod(parent: &AlgebraicNumber, mut v: Vec<BigRational>) -> Vec<BigRational> {
    let n = parent.degree();
    let m: Vec<BigRational> = upoly::to_q(&parent.minpoly);
    let lc = m[n].clone();
    while v.len() > n {
        let top = v.pop().unwrap();
        if top.is_zero() {
            continue;
        }
        let c = top / &lc;
        let s = v.len() - n;
        for i in 0..n {
            v[s + i] -= &c * &m[i];
        }
    }
    v.resize(n, BigRational::zero());
    v
}

impl NumberFieldElement {
    pub fn from_coords(parent: Arc<AlgebraicNumber>, coords: Vec<BigRational>) -> Self {
        let c = reduce_mod(&parent, coords);
        NumberFieldElement { coords: c, parent }
    }

    pub fn from_rational(parent: Arc<AlgebraicNumber>, r: BigRational) -> Self {
        Self::from_coords(parent, vec![r])
    }

    pub fn zero(parent: Arc<AlgebraicNumber>) -> Self {
        Self::from_coords(parent, vec![])
    }

    pub fn one(parent: Arc<AlgebraicNumber>) -> Self {
        Self::from_rational(parent, BigRational::one())
    }

    /// The generator alpha itself.
    pub fn generator(parent: Arc<AlgebraicNumber>) -> Self {
        if let Some(r) = parent.as_rational() {
            return Self::from_rational(parent, r);
        }
        Self::from_coords(parent, vec![BigRational::zero(), BigRational::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, o: &Self) -> Self {
        let c = self.coords.iter().zip(&o.coords).map(|(a, b)| a + b).collect();
        NumberFieldElement {
            coords: c,
            parent: self.parent.clone(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let c = self.coords.iter().zip(&o.coords).map(|(a, b)| a - b).collect();
        NumberFieldElement {
            coords: c,
            parent: self.parent.clone(),
        }
    }

    pub fn neg(&self) -> Self {
        NumberFieldElement {
            coords: self.coords.iter().map(|a| -a).collect(),
            parent: self.parent.clone(),
        }
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        NumberFieldElement {
            coords: self.coords.iter().map(|a| a * k).collect(),
            parent: self.parent.clone(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.coords.len();
        let mut v = vec![BigRational::zero(); 2 * n - 1];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coords.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        Self::from_coords(self.parent.clone(), v)
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut r = Self::one(self.parent.clone());
        let mut b = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        r
    }

    /// Multiplicative inverse via the extended Euclidean algorithm.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let m = upoly::to_q(&self.parent.minpoly);
        let a = upoly::trimmed(&self.coords);
        // Invariant: r_i = s_i * a (mod m).
        let (mut r0, mut r1) = (m, a);
        let (mut s0, mut s1): (Vec<BigRational>, Vec<BigRational>) = (vec![], vec![BigRational::one()]);
        while upoly::degree(&r1).unwrap_or(0) > 0 {
            let (q, r) = upoly::divrem_q(&r0, &r1);
            let qs = qmul(&q, &s1);
            let s2 = qsub(&s0, &qs);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
        }
        let c = r1[0].clone();
        let s: Vec<BigRational> = s1.iter().map(|x| x / &c).collect();
        Ok(Self::from_coords(self.parent.clone(), s))
    }

    /// Value at embedding `sigma` as a pair of real enclosures.
    pub fn embed(&self, sigma: usize) -> (Interval<f64>, Interval<f64>) {
        let b = &self.parent.embeddings[sigma];
        let (zr, zi) = (b.re_interval(), b.im_interval());
        let mut re = Interval::zero();
        let mut im = Interval::zero();
        for c in self.coords.iter().rev() {
            let nre = re * zr - im * zi;
            let nim = re * zi + im * zr;
            re = nre + Interval::from_rational(c);
            im = nim;
        }
        (re, im)
    }
}

fn qmul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut v = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            v[i + j] += x * y;
        }
    }
    v
}

fn qsub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            a.get(i).cloned().unwrap_or_else(BigRational::zero) - b.get(i).cloned().unwrap_or_else(BigRational::zero)
        })
        .collect()
}

/// Input accepted by [`cf_convergents`].
pub enum CfSource<'a> {
    Algebraic(&'a AlgebraicNumber),
    Rational(&'a BigRational),
}

/// The first `count` continued-fraction convergents, in increasing
/// denominator. A rational input stops at its last convergent.
pub fn cf_convergents(src: CfSource<'_>, count: usize) -> Result<Vec<ProjPoint>> {
    let quotients = match src {
        CfSource::Rational(r) => rational_partial_quotients(r, count),
        CfSource::Algebraic(a) => {
            if let Some(r) = a.as_rational() {
                rational_partial_quotients(&r, count)
            } else {
                if !a.is_real() {
                    return Err(Error::NotReal);
                }
                algebraic_partial_quotients(a, count)?
            }
        }
    };
    Ok(convergents_from_quotients(&quotients))
}

pub fn convergents_from_quotients(qs: &[BigInt]) -> Vec<ProjPoint> {
    let (mut p0, mut q0) = (BigInt::one(), BigInt::zero());
    let (mut p1, mut q1) = (BigInt::zero(), BigInt::one());
    let mut out = vec![];
    for a in qs {
        let p2 = a * &p0 + &p1;
        let q2 = a * &q0 + &q1;
        p1 = p0;
        q1 = q0;
        p0 = p2;
        q0 = q2;
        out.push(ProjPoint::new(p0.clone(), q0.clone()).expect("nonzero"));
    }
    out
}

fn rational_partial_quotients(r: &BigRational, count: usize) -> Vec<BigInt> {
    let (mut n, mut d) = (r.numer().clone(), r.denom().clone());
    let mut out = vec![];
    while !d.is_zero() && out.len() < count {
        let (q, m) = n.div_mod_floor(&d);
        out.push(q);
        n = d;
        d = m;
    }
    out
}

/// Partial quotients of a real irrational algebraic number by the
/// Lagrange method: refine the isolating interval until the floor is
/// determined, then substitute `x -> a + 1/x`.
pub fn algebraic_partial_quotients(alpha: &AlgebraicNumber, count: usize) -> Result<Vec<BigInt>> {
    let b = &alpha.embeddings[alpha.distinguished];
    let mut p = alpha.minpoly.clone();
    let (mut lo, mut hi) = (b.re_lo.clone(), b.re_hi.clone());
    let mut out = vec![];
    let mut budget = REFINEMENT_BUDGET;
    while out.len() < count {
        let slo = upoly::sign_at(&p, &lo);
        loop {
            let fl = floor_rat(&lo);
            let fh = floor_rat(&hi);
            if fl == fh && lo > BigRational::from_integer(fl.clone()) {
                break;
            }
            if budget == 0 {
                return Err(Error::PrecisionExhausted);
            }
            budget -= 1;
            let mid = (&lo + &hi) / int(2);
            let s = upoly::sign_at(&p, &mid);
            if s == 0 {
                return Err(Error::InvalidInput("rational root in algebraic expansion".into()));
            }
            if s == slo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let a = floor_rat(&lo);
        out.push(a.clone());
        // p(x) <- x^n p(a + 1/x)
        let mut shifted = upoly::taylor_shift(&p, &a);
        let n = upoly::degree(&p).unwrap();
        shifted.resize(n + 1, BigInt::zero());
        shifted.reverse();
        p = upoly::prim_keep_sign(&shifted);
        let ar = BigRational::from_integer(a);
        let nlo = BigRational::one() / (&hi - &ar);
        let nhi = BigRational::one() / (&lo - &ar);
        lo = nlo;
        hi = nhi;
    }
    Ok(out)
}

/// Binomial coefficient as a big integer.
pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

/// Divided-power jet coefficient `D^(i1,i2) f` at `(u, v)`, where
/// `f[a][b]` is the coefficient of `x^a y^b`. A univariate polynomial is a
/// grid with one column (pass any `v` and `i2 = 0`).
pub fn eval_jet_coefficient(
    f: &[Vec<BigRational>],
    u: &NumberFieldElement,
    v: &NumberFieldElement,
    order: (usize, usize),
) -> NumberFieldElement {
    let (i1, i2) = order;
    let parent = u.parent.clone();
    let d1 = f.len().saturating_sub(1);
    let d2 = f.iter().map(|r| r.len()).max().unwrap_or(1).saturating_sub(1);
    let mut acc = NumberFieldElement::zero(parent.clone());
    if i1 > d1 || i2 > d2 {
        return acc;
    }
    let upow: Vec<NumberFieldElement> = std::iter::successors(Some(NumberFieldElement::one(parent.clone())), |x| {
        Some(x.mul(u))
    })
    .take(d1 - i1 + 1)
    .collect();
    let vpow: Vec<NumberFieldElement> = std::iter::successors(Some(NumberFieldElement::one(parent.clone())), |x| {
        Some(x.mul(v))
    })
    .take(d2 - i2 + 1)
    .collect();
    for a in i1..=d1 {
        let mut row = NumberFieldElement::zero(parent.clone());
        for b in i2..f[a].len() {
            let c = &f[a][b];
            if c.is_zero() {
                continue;
            }
            let k = c * BigRational::from_integer(binomial(b, i2));
            row = row.add(&vpow[b - i2].scale(&k));
        }
        if row.is_zero() {
            continue;
        }
        let k = BigRational::from_integer(binomial(a, i1));
        acc = acc.add(&row.mul(&upow[a - i1]).scale(&k));
    }
    acc
}

/// Absolute value bound `|alpha_sigma - r|` certified from a refined box.
pub fn distance_interval(alpha: &AlgebraicNumber, r: &BigRational, width: f64) -> Result<(BigRational, BigRational)> {
    let (lo, hi) = real_interval(alpha, alpha.distinguished, width)?;
    let a = &lo - r;
    let b = &hi - r;
    if a.is_positive() {
        Ok((a, b))
    } else if b.is_negative() {
        Ok((-b, -a))
    } else {
        Err(Error::PrecisionExhausted)
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct AlgebraicSpec {
    /// Integer coefficients, constant term first, as decimal strings.
    pub minpoly: Vec<String>,
    pub root: usize,
}

impl AlgebraicSpec {
    pub fn build(&self) -> Result<AlgebraicNumber> {
        let v: std::result::Result<Vec<BigInt>, _> = self.minpoly.iter().map(|s| s.trim().parse::<BigInt>()).collect();
        let v = v.map_err(|_| Error::InvalidInput("minpoly coefficient is not an integer".into()))?;
        algnum_from_minpoly(&v, self.root)
    }
}
