//! Weighted staircases, divided-power derivatives, vanishing systems at a
//! point with algebraic coordinates, auxiliary polynomial construction and
//! the weighted index.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FieldPoint;
use crate::lattice::{self, IntegerMatrix, Metric, SiegelParams, SiegelReport};
use crate::linalg::{self, RationalKernel};
use crate::numbers::{binomial, AlgebraicNumber, NumberFieldElement, ProjPoint};
use crate::Iv;

/// Weights `theta1, theta2 >= 1`, degrees `d1, d2 >= 1` and threshold `delta`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightSystem {
    #[serde(with = "crate::serde_util::rational")]
    pub theta1: BigRational,
    #[serde(with = "crate::serde_util::rational")]
    pub theta2: BigRational,
    pub d1: usize,
    pub d2: usize,
    #[serde(with = "crate::serde_util::rational")]
    pub delta: BigRational,
}

impl WeightSystem {
    pub fn new(theta1: BigRational, theta2: BigRational, d1: usize, d2: usize, delta: BigRational) -> Result<Self> {
        let w = Self {
            theta1,
            theta2,
            d1,
            d2,
            delta,
        };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        if self.theta1 < BigRational::one() || self.theta2 < BigRational::one() {
            return Err(Error::InvalidInput("theta_i must be at least 1".into()));
        }
        if self.d1 == 0 || self.d2 == 0 {
            return Err(Error::InvalidInput("d_i must be positive".into()));
        }
        if self.delta.is_negative() {
            return Err(Error::InvalidInput("delta must be non-negative".into()));
        }
        Ok(())
    }

    /// Parses rationals given as decimals or fractions.
    pub fn parse(theta1: &str, theta2: &str, d1: usize, d2: usize, delta: &str) -> Result<Self> {
        use crate::numbers::parse_rational;
        Self::new(parse_rational(theta1)?, parse_rational(theta2)?, d1, d2, parse_rational(delta)?)
    }

    /// `w(i, j) = (i/d1) theta1 + (j/d2) theta2`.
    pub fn weight(&self, i: usize, j: usize) -> BigRational {
        BigRational::new(BigInt::from(i), BigInt::from(self.d1)) * &self.theta1
            + BigRational::new(BigInt::from(j), BigInt::from(self.d2)) * &self.theta2
    }

    pub fn below(&self, i: usize, j: usize) -> bool {
        self.weight(i, j) < self.delta
    }

    /// Largest `j <= d2` with `(i, j)` below the staircase.
    pub fn jmax(&self, i: usize) -> Option<usize> {
        RowLimits::new(self).jmax(i)
    }
}

/// `w(i, j) < delta` cleared of denominators: `i a + j b < c` with `b > 0`.
struct RowLimits {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d2: usize,
}

impl RowLimits {
    fn new(w: &WeightSystem) -> Self {
        let (n1, m1) = (w.theta1.numer(), w.theta1.denom());
        let (n2, m2) = (w.theta2.numer(), w.theta2.denom());
        let (p, q) = (w.delta.numer(), w.delta.denom());
        let (d1, d2) = (BigInt::from(w.d1), BigInt::from(w.d2));
        Self {
            a: n1 * m2 * &d2 * q,
            b: n2 * m1 * &d1 * q,
            c: p * m1 * m2 * &d1 * &d2,
            d2: w.d2,
        }
    }

    fn jmax(&self, i: usize) -> Option<usize> {
        let r = &self.c - &self.a * BigInt::from(i);
        if !r.is_positive() {
            return None;
        }
        let j: BigInt = (r - BigInt::one()) / &self.b;
        Some(j.to_usize().map_or(self.d2, |j| j.min(self.d2)))
    }
}

impl fmt::Display for WeightSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "theta=({}, {}) d=({}, {}) delta={}",
            self.theta1, self.theta2, self.d1, self.d2, self.delta
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StaircaseMode {
    Below,
    AtLeast,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Staircase {
    pub weights: WeightSystem,
    pub mode: StaircaseMode,
    /// Sorted lexicographically.
    pub members: Vec<(usize, usize)>,
}

pub fn staircase(w: &WeightSystem, mode: StaircaseMode) -> Staircase {
    let rows = RowLimits::new(w);
    let mut members = vec![];
    for i in 0..=w.d1 {
        let first_above = rows.jmax(i).map_or(0, |j| j + 1);
        let range = match mode {
            StaircaseMode::Below => 0..first_above,
            StaircaseMode::AtLeast => first_above..w.d2 + 1,
        };
        members.extend(range.map(|j| (i, j)));
    }
    Staircase {
        weights: w.clone(),
        mode,
        members,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountReport {
    pub exact_count: usize,
    #[serde(with = "crate::serde_util::rational")]
    pub area: BigRational,
    #[serde(with = "crate::serde_util::rational")]
    pub error_bound: BigRational,
    /// The triangle `w < delta` leaves the box, so the area formula no
    /// longer describes the count.
    pub saturated: bool,
    pub within_bound: bool,
}

pub fn staircase_count_report(w: &WeightSystem) -> CountReport {
    let exact_count = staircase(w, StaircaseMode::Below).members.len();
    let d1 = BigRational::from_integer(BigInt::from(w.d1));
    let d2 = BigRational::from_integer(BigInt::from(w.d2));
    let area = &d1 * &d2 * &w.delta * &w.delta / (BigRational::from_integer(BigInt::from(2)) * &w.theta1 * &w.theta2);
    let error_bound = &w.delta * &d1 / &w.theta1 + &w.delta * &d2 / &w.theta2 + BigRational::from_integer(BigInt::from(2));
    let saturated = w.delta > w.theta1 || w.delta > w.theta2;
    let diff = (BigRational::from_integer(BigInt::from(exact_count)) - &area).abs();
    CountReport {
        exact_count,
        within_bound: diff <= error_bound,
        area,
        error_bound,
        saturated,
    }
}

/// Integer polynomial `sum coeffs[i][j] x^i y^j` of bidegree `(d1, d2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BivariatePolynomial {
    pub d1: usize,
    pub d2: usize,
    pub coeffs: Vec<Vec<BigInt>>,
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    d1: usize,
    d2: usize,
    coeffs: Vec<String>,
}

impl Serialize for BivariatePolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyJson {
            d1: self.d1,
            d2: self.d2,
            coeffs: self.coeffs.iter().flatten().map(|c| c.to_string()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BivariatePolynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = PolyJson::deserialize(d)?;
        if j.coeffs.len() != (j.d1 + 1) * (j.d2 + 1) {
            return Err(D::Error::custom("coefficient count does not match bidegree"));
        }
        let flat: std::result::Result<Vec<BigInt>, _> = j.coeffs.iter().map(|c| c.trim().parse::<BigInt>()).collect();
        let flat = flat.map_err(D::Error::custom)?;
        Ok(BivariatePolynomial {
            d1: j.d1,
            d2: j.d2,
            coeffs: flat.chunks(j.d2 + 1).map(|c| c.to_vec()).collect(),
        })
    }
}

impl BivariatePolynomial {
    pub fn zero(d1: usize, d2: usize) -> Self {
        Self {
            d1,
            d2,
            coeffs: vec![vec![BigInt::zero(); d2 + 1]; d1 + 1],
        }
    }

    pub fn from_i64(grid: &[&[i64]]) -> Self {
        let d1 = grid.len() - 1;
        let d2 = grid[0].len() - 1;
        Self {
            d1,
            d2,
            coeffs: grid.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect(),
        }
    }

    /// Coefficients listed as `(i, j, c)`; the bidegree is the smallest
    /// containing them unless given.
    pub fn from_terms(d1: usize, d2: usize, terms: &[(usize, usize, i64)]) -> Self {
        let mut p = Self::zero(d1, d2);
        for &(i, j, c) in terms {
            p.coeffs[i][j] += c;
        }
        p
    }

    /// Coefficient vector in the monomial order `x^i y^j -> i (d2+1) + j`.
    pub fn to_vector(&self) -> Vec<BigInt> {
        self.coeffs.iter().flatten().cloned().collect()
    }

    pub fn from_vector(d1: usize, d2: usize, v: &[BigInt]) -> Self {
        Self {
            d1,
            d2,
            coeffs: v.chunks(d2 + 1).map(|c| c.to_vec()).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().flatten().all(|c| c.is_zero())
    }

    pub fn content(&self) -> BigInt {
        self.coeffs.iter().flatten().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    pub fn primitive_part(&self) -> Self {
        let g = self.content();
        if g.is_zero() {
            return self.clone();
        }
        Self {
            d1: self.d1,
            d2: self.d2,
            coeffs: self.coeffs.iter().map(|r| r.iter().map(|c| c / &g).collect()).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut p = Self::zero(self.d1 + o.d1, self.d2 + o.d2);
        for (i, r) in self.coeffs.iter().enumerate() {
            for (j, a) in r.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (k, s) in o.coeffs.iter().enumerate() {
                    for (l, b) in s.iter().enumerate() {
                        if !b.is_zero() {
                            p.coeffs[i + k][j + l] += a * b;
                        }
                    }
                }
            }
        }
        p
    }

    /// Same polynomial viewed in a larger bidegree.
    pub fn padded(&self, d1: usize, d2: usize) -> Self {
        let mut p = Self::zero(d1.max(self.d1), d2.max(self.d2));
        for (i, r) in self.coeffs.iter().enumerate() {
            for (j, c) in r.iter().enumerate() {
                p.coeffs[i][j] = c.clone();
            }
        }
        p
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut p = self.padded(o.d1, o.d2);
        for (i, r) in o.coeffs.iter().enumerate() {
            for (j, c) in r.iter().enumerate() {
                p.coeffs[i][j] += c;
            }
        }
        p
    }

    /// Degrees actually attained in `x` and `y`; `None` for zero.
    pub fn degrees(&self) -> Option<(usize, usize)> {
        let mut dx = None;
        let mut dy = 0;
        for (i, r) in self.coeffs.iter().enumerate() {
            for (j, c) in r.iter().enumerate() {
                if !c.is_zero() {
                    dx = Some(i);
                    dy = dy.max(j);
                }
            }
        }
        dx.map(|i| (i, dy))
    }

    /// Shrinks the grid to the attained bidegree.
    pub fn trimmed(&self) -> Self {
        let (dx, dy) = self.degrees().unwrap_or((0, 0));
        Self {
            d1: dx,
            d2: dy,
            coeffs: self.coeffs[..=dx].iter().map(|r| r[..=dy].to_vec()).collect(),
        }
    }

    pub fn l1_norm(&self) -> BigInt {
        self.coeffs.iter().flatten().map(|c| c.abs()).sum()
    }

    /// `x^d1 f(1/x, y)` or `y^d2 f(x, 1/y)`: the chart at infinity.
    pub fn reversed(&self, in_x: bool, in_y: bool) -> Self {
        let mut p = self.clone();
        if in_x {
            p.coeffs.reverse();
        }
        if in_y {
            p.coeffs.iter_mut().for_each(|r| r.reverse());
        }
        p
    }

    pub fn eval_rational(&self, x: &BigRational, y: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for r in self.coeffs.iter().rev() {
            let mut row = BigRational::zero();
            for c in r.iter().rev() {
                row = row * y + BigRational::from_integer(c.clone());
            }
            acc = acc * x + row;
        }
        acc
    }
}

impl fmt::Display for BivariatePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, r) in self.coeffs.iter().enumerate().rev() {
            for (j, c) in r.iter().enumerate().rev() {
                if c.is_zero() {
                    continue;
                }
                let mono = match (i, j) {
                    (0, 0) => String::new(),
                    _ => {
                        let px = match i {
                            0 => String::new(),
                            1 => "x".into(),
                            _ => format!("x^{i}"),
                        };
                        let py = match j {
                            0 => String::new(),
                            1 => "y".into(),
                            _ => format!("y^{j}"),
                        };
                        if !px.is_empty() && !py.is_empty() {
                            format!("{px}*{py}")
                        } else {
                            px + &py
                        }
                    }
                };
                let a = c.abs();
                let sign = if c.is_negative() { "-" } else { "+" };
                if first {
                    if c.is_negative() {
                        write!(f, "-")?;
                    }
                } else {
                    write!(f, " {sign} ")?;
                }
                if mono.is_empty() {
                    write!(f, "{a}")?;
                } else if a.is_one() {
                    write!(f, "{mono}")?;
                } else {
                    write!(f, "{a}*{mono}")?;
                }
                first = false;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Exact value `f(u, v)` in the field of the point.
pub fn eval_at(f: &BivariatePolynomial, p: &FieldPoint) -> NumberFieldElement {
    let k = |c: &BigInt| NumberFieldElement::from_rational(p.field.clone(), BigRational::from_integer(c.clone()));
    let mut acc = NumberFieldElement::zero(p.field.clone());
    for r in f.coeffs.iter().rev() {
        let mut row = NumberFieldElement::zero(p.field.clone());
        for c in r.iter().rev() {
            row = row.mul(&p.v).add(&k(c));
        }
        acc = acc.mul(&p.u).add(&row);
    }
    acc
}

/// `D^(i1,i2)`: `x^a y^b -> C(a,i1) C(b,i2) x^(a-i1) y^(b-i2)`.
pub fn divided_derivative(f: &BivariatePolynomial, i1: usize, i2: usize) -> BivariatePolynomial {
    if i1 > f.d1 || i2 > f.d2 {
        return BivariatePolynomial::zero(f.d1.saturating_sub(i1), f.d2.saturating_sub(i2));
    }
    let mut p = BivariatePolynomial::zero(f.d1 - i1, f.d2 - i2);
    for a in i1..=f.d1 {
        let ca = binomial(a, i1);
        for b in i2..=f.d2 {
            let c = &f.coeffs[a][b];
            if !c.is_zero() {
                p.coeffs[a - i1][b - i2] = c * &ca * binomial(b, i2);
            }
        }
    }
    p
}

fn taylor_shift_l(p: &mut [NumberFieldElement], u: &NumberFieldElement) {
    let d = p.len();
    if u.is_zero() {
        return;
    }
    for i in 0..d {
        for k in (i..d.saturating_sub(1)).rev() {
            let t = p[k + 1].mul(u);
            p[k] = p[k].add(&t);
        }
    }
}

/// Table of all divided-power jets `D^(i,j) f (u, v)`, i.e. the coefficients
/// of `f(x + u, y + v)`.
pub fn jets(f: &BivariatePolynomial, p: &FieldPoint) -> Vec<Vec<NumberFieldElement>> {
    let field = p.field.clone();
    let z = |c: &BigInt| NumberFieldElement::from_rational(field.clone(), BigRational::from_integer(c.clone()));
    let mut g: Vec<Vec<NumberFieldElement>> = f.coeffs.iter().map(|r| r.iter().map(z).collect()).collect();
    // Shift in x, column by column.
    for b in 0..=f.d2 {
        let mut col: Vec<NumberFieldElement> = g.iter().map(|r| r[b].clone()).collect();
        taylor_shift_l(&mut col, &p.u);
        for (a, v) in col.into_iter().enumerate() {
            g[a][b] = v;
        }
    }
    for row in g.iter_mut() {
        taylor_shift_l(row, &p.v);
    }
    g
}

/// Weighted index: the least weight of a nonzero jet.
pub fn index_at(f: &BivariatePolynomial, p: &FieldPoint, w: &WeightSystem) -> Result<BigRational> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let j = jets(f, p);
    let mut best: Option<BigRational> = None;
    for (a, r) in j.iter().enumerate() {
        for (b, e) in r.iter().enumerate() {
            if !e.is_zero() {
                let wt = w.weight(a, b);
                if best.as_ref().map_or(true, |x| wt < *x) {
                    best = Some(wt);
                }
            }
        }
    }
    Ok(best.expect("nonzero polynomial has a nonzero jet"))
}

/// Index at a rational point of `P^1 x P^1`, switching to the chart at
/// infinity in a factor whose point is `(1:0)`.
pub fn index_at_proj(f: &BivariatePolynomial, p1: &ProjPoint, p2: &ProjPoint, w: &WeightSystem) -> Result<BigRational> {
    let inf1 = p1.b.is_zero();
    let inf2 = p2.b.is_zero();
    let g = f.reversed(inf1, inf2);
    let x = if inf1 { BigRational::zero() } else { p1.affine().unwrap() };
    let y = if inf2 { BigRational::zero() } else { p2.affine().unwrap() };
    index_at(&g, &FieldPoint::rational(x, y), w)
}

/// Primitive integer row `v` and factor `c` with `row = c v`.
fn clear_row(row: &[BigRational]) -> (Vec<BigInt>, BigRational) {
    let den = row.iter().fold(BigInt::one(), |d, x| d.lcm(x.denom()));
    let v: Vec<BigInt> = row.iter().map(|x| x.numer() * (&den / x.denom())).collect();
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() || g.is_one() {
        return (v, BigRational::new(BigInt::one(), den));
    }
    (v.into_iter().map(|x| x / &g).collect(), BigRational::new(g, den))
}

/// `u^k v^l` for `k <= d1`, `l <= d2`.
fn power_table(p: &FieldPoint, d1: usize, d2: usize) -> Vec<Vec<NumberFieldElement>> {
    let one = NumberFieldElement::one(p.field.clone());
    let mut up = vec![one.clone()];
    for _ in 0..d1 {
        up.push(up.last().unwrap().mul(&p.u));
    }
    let mut vp = vec![one];
    for _ in 0..d2 {
        vp.push(vp.last().unwrap().mul(&p.v));
    }
    up.iter().map(|a| vp.iter().map(|b| a.mul(b)).collect()).collect()
}

/// One block of `[L:Q]` integer rows per below-staircase pair, expressing
/// `D^(i1,i2) f (u, v) = 0` on the power basis. Columns are monomials
/// `x^i y^j` in the order `i (d2+1) + j`.
pub fn vanishing_system(a1: &AlgebraicNumber, a2: &AlgebraicNumber, w: &WeightSystem) -> Result<IntegerMatrix> {
    Ok(vanishing_system_at(&FieldPoint::from_pair(a1, a2)?, w))
}

pub fn vanishing_system_at(p: &FieldPoint, w: &WeightSystem) -> IntegerMatrix {
    let n = p.degree();
    let cols = (w.d1 + 1) * (w.d2 + 1);
    let pw = power_table(p, w.d1, w.d2);
    let mut rows = vec![];
    for &(i1, i2) in &staircase(w, StaircaseMode::Below).members {
        let mut block = vec![vec![BigRational::zero(); cols]; n];
        for a in i1..=w.d1 {
            let ca = binomial(a, i1);
            for b in i2..=w.d2 {
                let k = BigRational::from_integer(&ca * binomial(b, i2));
                let e = &pw[a - i1][b - i2];
                for (c, row) in block.iter_mut().enumerate() {
                    if !e.coords[c].is_zero() {
                        row[a * (w.d2 + 1) + b] = &k * &e.coords[c];
                    }
                }
            }
        }
        for r in block {
            rows.push(clear_row(&r).0);
        }
    }
    IntegerMatrix::new(rows, cols).expect("rectangular")
}

/// Sampled estimate and upper bounds for `log sup |f|_FS` over `P^1(C)^2`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupNorm {
    /// Maximum over the sample grid (a lower bound up to rounding).
    pub log_sampled: f64,
    /// `min(log l1, sampled + Lipschitz correction)`.
    pub log_upper: f64,
    /// `log sum |a_ij|`, always an upper bound.
    pub log_l1: f64,
    pub samples: usize,
}

pub fn fs_sup_norm(f: &BivariatePolynomial, samples: usize) -> SupNorm {
    let l1 = f.l1_norm();
    if l1.is_zero() {
        return SupNorm {
            log_sampled: f64::NEG_INFINITY,
            log_upper: f64::NEG_INFINITY,
            log_l1: f64::NEG_INFINITY,
            samples: 0,
        };
    }
    let maxc = f.coeffs.iter().flatten().map(|c| c.abs()).max().unwrap();
    let log_maxc = Iv::ln_bigint(&maxc).mid();
    let scale_of = |c: &BigInt| -> f64 {
        if c.is_zero() {
            return 0.0;
        }
        let r = (Iv::ln_bigint(&c.abs()).mid() - log_maxc).exp();
        if c.is_negative() {
            -r
        } else {
            r
        }
    };
    let c: Vec<Vec<f64>> = f.coeffs.iter().map(|r| r.iter().map(scale_of).collect()).collect();
    let nside = ((samples as f64).powf(0.25).ceil() as usize).max(2);
    let pi = std::f64::consts::PI;
    let grid: Vec<(Complex64, Complex64)> = (0..nside)
        .flat_map(|a| {
            (0..nside).map(move |b| {
                let th = (a as f64 + 0.5) * pi / nside as f64;
                let ph = 2.0 * pi * b as f64 / nside as f64;
                (Complex64::new((th / 2.0).cos(), 0.0), Complex64::from_polar((th / 2.0).sin(), ph))
            })
        })
        .collect();
    let mono = |(z0, z1): (Complex64, Complex64), d: usize| -> Vec<Complex64> {
        (0..=d).map(|k| z1.powu(k as u32) * z0.powu((d - k) as u32)).collect()
    };
    let xs: Vec<Vec<Complex64>> = grid.iter().map(|&g| mono(g, f.d1)).collect();
    let mut best: f64 = 0.0;
    for &gy in &grid {
        let q = mono(gy, f.d2);
        let bvec: Vec<Complex64> = c.iter().map(|r| r.iter().zip(&q).map(|(a, b)| b * *a).sum()).collect();
        for px in &xs {
            let v: Complex64 = px.iter().zip(&bvec).map(|(a, b)| a * b).sum();
            best = best.max(v.norm());
        }
    }
    let l1s: f64 = c.iter().flatten().map(|x| x.abs()).sum();
    let corr = l1s * (f.d1 + f.d2) as f64 * 5.0 * pi / (4.0 * nside as f64);
    let log_l1 = Iv::ln_bigint(&l1).hi;
    SupNorm {
        log_sampled: best.ln() + log_maxc,
        log_upper: ((best + corr).ln() + log_maxc).min(log_l1),
        log_l1,
        samples: nside.pow(4),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AuxOptions {
    /// Caller-supplied constant in the norm target `A/eps T1 T2 (d1+d2)`.
    pub a_const: f64,
    /// Slack; defaults to `2 theta1 theta2 - delta^2 [L:Q]`.
    pub epsilon: Option<f64>,
    /// `T(D1) T(D2)`; defaults to the product computed from the points.
    pub t_product: Option<f64>,
    pub sup_samples: usize,
}

impl Default for AuxOptions {
    fn default() -> Self {
        Self {
            a_const: 1.0,
            epsilon: None,
            t_product: None,
            sup_samples: 1_000_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuxReport {
    pub conditions: usize,
    pub unknowns: usize,
    pub kernel_dim: usize,
    pub field_degree: usize,
    pub log_euclidean_norm: f64,
    pub sup_norm: SupNorm,
    pub epsilon: f64,
    pub t_product: f64,
    /// `A/eps T1 T2 (d1+d2)`, absent when `eps <= 0`.
    pub norm_target: Option<f64>,
    pub conditions_verified: bool,
    #[serde(with = "crate::serde_util::rational")]
    pub index: BigRational,
    pub siegel: SiegelReport,
}

/// Coordinate `c` of `S u^k v^l` summed over the structure described in
/// [`construct_auxiliary`]; `binom[n][k]` is a table of binomials.
struct ShiftCoefficients {
    binom: Vec<Vec<BigInt>>,
    jmax: Vec<Option<usize>>,
}

impl ShiftCoefficients {
    fn new(w: &WeightSystem) -> Self {
        let d = w.d1.max(w.d2);
        Self {
            binom: (0..=d + 1).map(|n| (0..=d + 1).map(|k| binomial(n, k)).collect()).collect(),
            jmax: (0..=w.d1).map(|i| w.jmax(i)).collect(),
        }
    }

    fn c(&self, n: isize, k: isize) -> BigInt {
        if n < 0 || k < 0 || k > n {
            BigInt::zero()
        } else {
            self.binom[n as usize][k as usize].clone()
        }
    }

    /// `sum_{j=t}^{J} C(b,j) C(j,t) (-1)^(j-t)`.
    fn partial(&self, b: usize, t: usize, jj: usize) -> BigInt {
        if jj < t {
            return BigInt::zero();
        }
        if b == t {
            return BigInt::one();
        }
        let m = (jj.min(b) - t) as isize;
        let s = self.c(b as isize - t as isize - 1, m);
        let s = if m % 2 == 1 { -s } else { s };
        self.c(b as isize, t as isize) * s
    }

    /// Coefficient `S` of `x^s y^t` in the part of `x^a y^b` that the
    /// Taylor expansion at the point puts on the staircase, divided by
    /// `u^(a-s) v^(b-t)`.
    fn s(&self, a: usize, b: usize, s: usize, t: usize) -> BigInt {
        let mut acc = BigInt::zero();
        for i in s..=a {
            let Some(jm) = self.jmax[i] else { break };
            let g = self.partial(b, t, jm.min(b));
            if g.is_zero() {
                continue;
            }
            let term = self.c(a as isize, i as isize) * self.c(i as isize, s as isize) * g;
            if (i - s) % 2 == 1 {
                acc -= term;
            } else {
                acc += term;
            }
        }
        acc
    }
}

/// Builds a nonzero integer polynomial whose jets vanish at `(a1, a2)` on the
/// below-staircase pairs.
///
/// Writing `f = h - R(h)` with `h` supported on the at-least pairs and `R(h)`
/// the below part of the Taylor expansion carried back, `f` automatically has
/// the required jets over `L`; it has rational coefficients exactly when the
/// irrational coordinates of `R(h)` vanish. The kernel is solved in that
/// reduced form and the result is re-verified against the full system.
pub fn construct_auxiliary(
    a1: &AlgebraicNumber,
    a2: &AlgebraicNumber,
    w: &WeightSystem,
    opts: &AuxOptions,
) -> Result<(BivariatePolynomial, AuxReport)> {
    let p = FieldPoint::from_pair(a1, a2)?;
    let n = p.degree();
    let below = staircase(w, StaircaseMode::Below).members;
    let above = staircase(w, StaircaseMode::AtLeast).members;
    let cols = (w.d1 + 1) * (w.d2 + 1);
    let conditions = n * below.len();
    if above.is_empty() {
        return Err(Error::EmptyKernel { conditions, unknowns: cols });
    }
    let pw = power_table(&p, w.d1, w.d2);
    let sc = ShiftCoefficients::new(w);
    // K: irrational coordinates (rows) against the at-least unknowns.
    // K0: rational coordinate, giving f on the below pairs.
    let mut k_rows = vec![];
    let mut k0_rows = vec![];
    for &(s, t) in &below {
        let mut block = vec![vec![BigRational::zero(); above.len()]; n];
        for (col, &(a, b)) in above.iter().enumerate() {
            if a < s || b < t {
                continue;
            }
            let sv = sc.s(a, b, s, t);
            if sv.is_zero() {
                continue;
            }
            let e = &pw[a - s][b - t];
            let sr = BigRational::from_integer(sv);
            for c in 0..n {
                if !e.coords[c].is_zero() {
                    block[c][col] = &sr * &e.coords[c];
                }
            }
        }
        k0_rows.push(clear_row(&block[0]));
        for r in &block[1..] {
            let (v, _) = clear_row(r);
            if v.iter().any(|x| !x.is_zero()) {
                k_rows.push(v);
            }
        }
    }
    let kk = linalg::kernel(&k_rows, above.len())?;
    let kdim = kk.dim();
    if kdim == 0 {
        return Err(Error::EmptyKernel { conditions, unknowns: cols });
    }
    // Express the kernel in the full monomial space.
    let mono = |(i, j): (usize, usize)| i * (w.d2 + 1) + j;
    let free: Vec<usize> = kk.free.iter().map(|&c| mono(above[c])).collect();
    let mut pivots: Vec<usize> = kk.pivots.iter().map(|&c| mono(above[c])).collect();
    let mut rref: Vec<Vec<BigRational>> = kk.rref.clone();
    let tvecs: Vec<Vec<BigInt>> = (0..kdim).map(|k| kk.integer_vector(k)).collect();
    let tscale: Vec<BigInt> = (0..kdim).map(|k| tvecs[k][kk.free[k]].clone()).collect();
    for (row, &(s, t)) in k0_rows.iter().zip(&below) {
        let (ints, factor) = row;
        pivots.push(mono((s, t)));
        let entries = (0..kdim)
            .map(|k| {
                let dot: BigInt = ints.iter().zip(&tvecs[k]).filter(|(a, _)| !a.is_zero()).map(|(a, b)| a * b).sum();
                // f_B = -dot / (den * scale); the rref entry is minus the value.
                factor * BigRational::new(dot, tscale[k].clone())
            })
            .collect();
        rref.push(entries);
    }
    let full = RationalKernel {
        cols,
        pivots,
        free,
        rref,
    };
    let basis = linalg::saturated_kernel_basis(&full);
    let fvec = lattice::shortest_in_lattice(&basis, &Metric::Euclidean)?;
    let f = BivariatePolynomial::from_vector(w.d1, w.d2, &fvec);

    let system = vanishing_system_at(&p, w);
    let conditions_verified = system.annihilates(&fvec);
    let index = index_at(&f, &p, w)?;
    let siegel_params = SiegelParams::from_matrix(&system, kdim);
    let siegel = lattice::verify_siegel(&system, &fvec, &Metric::Euclidean, &siegel_params)?;
    let norm2: BigInt = fvec.iter().map(|x| x * x).sum();
    let epsilon = opts.epsilon.unwrap_or_else(|| {
        let two = BigRational::from_integer(BigInt::from(2));
        let e = two * &w.theta1 * &w.theta2 - &w.delta * &w.delta * BigRational::from_integer(BigInt::from(n));
        e.to_f64().unwrap()
    });
    let t_product = match opts.t_product {
        Some(t) => t,
        None => {
            let t1 = crate::heights::t_of_divisor(&crate::heights::divisor_from_algnum(a1))?.t.hi;
            let t2 = crate::heights::t_of_divisor(&crate::heights::divisor_from_algnum(a2))?.t.hi;
            t1 * t2
        }
    };
    let norm_target = (epsilon > 0.0).then(|| opts.a_const / epsilon * t_product * (w.d1 + w.d2) as f64);
    let report = AuxReport {
        conditions,
        unknowns: cols,
        kernel_dim: kdim,
        field_degree: n,
        log_euclidean_norm: Iv::ln_bigint(&norm2).scale(0.5).mid(),
        sup_norm: fs_sup_norm(&f, opts.sup_samples),
        epsilon,
        t_product,
        norm_target,
        conditions_verified,
        index,
        siegel,
    };
    Ok((f, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numbers::{int, rat, sqrt2};

    fn ws(t1: &str, t2: &str, d1: usize, d2: usize, delta: &str) -> WeightSystem {
        WeightSystem::parse(t1, t2, d1, d2, delta).unwrap()
    }

    #[test]
    fn staircase_examples() {
        let w = ws("1", "1", 1, 1, "2");
        assert_eq!(staircase(&w, StaircaseMode::AtLeast).members, vec![(1, 1)]);
        let w = ws("2.1", "2.1", 40, 40, "2.05");
        let s = staircase(&w, StaircaseMode::Below);
        assert_eq!(s.members.len(), 820);
        assert!(s.members.iter().all(|&(i, j)| i + j <= 39));
        assert!(staircase(&ws("1", "1", 3, 3, "0"), StaircaseMode::Below).members.is_empty());
    }

    #[test]
    fn count_reports() {
        let r = staircase_count_report(&ws("2.1", "2.1", 40, 40, "2.05"));
        assert_eq!(r.exact_count, 820);
        assert!((r.area.to_f64().unwrap() - 762.36).abs() < 0.01);
        assert!((r.error_bound.to_f64().unwrap() - 80.095).abs() < 0.01);
        let r = staircase_count_report(&ws("1", "1", 10, 10, "1"));
        assert_eq!((r.exact_count, r.area.clone(), r.error_bound.clone()), (55, int(50), int(22)));
        let r = staircase_count_report(&ws("1", "1", 10, 10, "100"));
        assert!(r.saturated && r.exact_count == 121);
    }

    #[test]
    fn derivative_examples() {
        let f = BivariatePolynomial::from_terms(2, 1, &[(2, 1, 1)]);
        assert_eq!(divided_derivative(&f, 1, 0), BivariatePolynomial::from_terms(1, 1, &[(1, 1, 2)]));
        let f = BivariatePolynomial::from_terms(2, 0, &[(2, 0, 1)]);
        assert_eq!(divided_derivative(&f, 2, 0), BivariatePolynomial::from_terms(0, 0, &[(0, 0, 1)]));
        let f = BivariatePolynomial::from_terms(2, 2, &[(2, 2, 1), (1, 1, 1)]);
        assert_eq!(divided_derivative(&f, 1, 1), BivariatePolynomial::from_terms(1, 1, &[(1, 1, 4), (0, 0, 1)]));
    }

    #[test]
    fn index_examples() {
        // (x - y)^2 = x^2 - 2xy + y^2
        let f = BivariatePolynomial::from_terms(2, 2, &[(2, 0, 1), (1, 1, -2), (0, 2, 1)]);
        let w = ws("1", "1", 2, 2, "1");
        assert_eq!(index_at(&f, &FieldPoint::rational(int(1), int(1)), &w).unwrap(), int(1));
        assert_eq!(index_at(&f, &FieldPoint::rational(int(1), int(2)), &w).unwrap(), int(0));
        let f = BivariatePolynomial::from_terms(1, 1, &[(1, 1, 1)]);
        let w = ws("1", "1", 1, 1, "1");
        assert_eq!(index_at(&f, &FieldPoint::rational(int(0), int(0)), &w).unwrap(), int(2));
        assert_eq!(
            index_at(&BivariatePolynomial::zero(1, 1), &FieldPoint::rational(int(0), int(0)), &w),
            Err(Error::ZeroPolynomial)
        );
        // x y at ((1:0), (0:1)): chart at infinity in x turns x into 1.
        let i = index_at_proj(&f, &ProjPoint::infinity(), &ProjPoint::from_i64(0, 1).unwrap(), &w).unwrap();
        assert_eq!(i, int(1));
    }

    #[test]
    fn vanishing_system_shapes() {
        let a = sqrt2();
        let m = vanishing_system(&a, &a, &ws("2.1", "2.1", 4, 4, "2.05")).unwrap();
        let below = staircase(&ws("2.1", "2.1", 4, 4, "2.05"), StaircaseMode::Below).members.len();
        assert_eq!((m.rows, m.cols), (2 * below, 25));
        let p0 = FieldPoint::rational(rat(1, 2), rat(3, 1));
        let w = ws("1", "1", 2, 2, "0.1");
        let m = vanishing_system_at(&p0, &w);
        assert_eq!(m.rows, 1);
        // Evaluation at (1/2, 3) after clearing denominators by 4.
        let f = BivariatePolynomial::from_terms(2, 2, &[(2, 1, 4), (0, 0, -3)]);
        assert!(m.annihilates(&f.to_vector()));
        assert_eq!(vanishing_system_at(&p0, &ws("1", "1", 2, 2, "0")).rows, 0);
    }

    #[test]
    fn small_construction_over_sqrt2() {
        let a = sqrt2();
        let w = ws("2.1", "2.1", 8, 8, "2.05");
        let opts = AuxOptions {
            sup_samples: 4096,
            ..Default::default()
        };
        let (f, r) = construct_auxiliary(&a, &a, &w, &opts).unwrap();
        assert!(!f.is_zero());
        assert!(r.conditions_verified);
        assert!(r.index >= w.delta);
        assert_eq!(r.kernel_dim, 81 - r.conditions);
        assert!(r.siegel.holds);
    }

    #[test]
    fn rational_origin_construction() {
        let z = AlgebraicNumber::rational(&int(0));
        let w = ws("1", "1", 1, 1, "0.5");
        let (f, r) = construct_auxiliary(&z, &z, &w, &AuxOptions { sup_samples: 256, ..Default::default() }).unwrap();
        assert_eq!(r.kernel_dim, 3);
        assert!(f.coeffs[0][0].is_zero() && !f.is_zero());
        assert_eq!(f.to_vector().iter().map(|x| x.abs()).sum::<BigInt>(), BigInt::one());
    }

    #[test]
    fn polynomial_json_round_trip() {
        let f = BivariatePolynomial::from_terms(2, 1, &[(2, 1, -7), (0, 0, 3)]);
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"d1":2,"d2":1,"coeffs":["3","0","0","0","0","-7"]}"#);
        assert_eq!(serde_json::from_str::<BivariatePolynomial>(&s).unwrap(), f);
    }
}
