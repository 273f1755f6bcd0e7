//! Places, Fubini-Study heights and Weil functions on the projective line,
//! and the invariant T(D) = S(D) H(D) of a reduced divisor.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};
use crate::factor;
use crate::interval::{Interval, Real};
use crate::numbers::{algnum_from_minpoly, refine_embedding, AlgebraicNumber, ProjPoint};
use crate::upoly::{self, ZPoly};
use crate::Iv;

/// Log-ratio between the diagonal-induced metric on the canonical bundle and
/// the square of the dual Fubini-Study metric. Both give `|dz| = 1 + |z|^2`,
/// so the constant vanishes; [`metric_comparison_constant`] re-derives it.
pub const C0: f64 = 0.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Archimedean,
    Finite(u64),
}

impl Place {
    pub fn finite(p: u64) -> Result<Self> {
        if arith::is_prime(p) {
            Ok(Place::Finite(p))
        } else {
            Err(Error::InvalidInput(format!("{p} is not prime")))
        }
    }

    pub fn is_archimedean(&self) -> bool {
        matches!(self, Place::Archimedean)
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Archimedean => write!(f, "inf"),
            Place::Finite(p) => write!(f, "{p}"),
        }
    }
}

impl std::str::FromStr for Place {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "archimedean" => Ok(Place::Archimedean),
            t => {
                let p: u64 = t.parse().map_err(|_| Error::InvalidInput(format!("bad place {t:?}")))?;
                Place::finite(p)
            }
        }
    }
}

impl Serialize for Place {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Place {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            S(String),
            N(u64),
        }
        let s = match Raw::deserialize(d)? {
            Raw::S(s) => s,
            Raw::N(n) => n.to_string(),
        };
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Reduced effective divisor on P^1 given by a binary form.
/// `form[k]` is the coefficient of `a^k b^(deg-k)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorData {
    #[serde(with = "crate::serde_util::bigint_vec")]
    pub form: Vec<BigInt>,
    pub deg: usize,
}

impl DivisorData {
    /// Validates content one and squarefreeness. A nonzero constant sign is
    /// kept, so `-a + b` and `a - b` are distinct data for the same divisor.
    pub fn new(form: Vec<BigInt>, deg: usize) -> Result<Self> {
        if deg == 0 {
            return Err(Error::InvalidInput("divisor degree must be positive".into()));
        }
        if form.len() > deg + 1 || form.iter().all(|c| c.is_zero()) {
            return Err(Error::InvalidInput("form does not match its degree".into()));
        }
        let mut form = form;
        form.resize(deg + 1, BigInt::zero());
        if !upoly::content(&form).is_one() {
            return Err(Error::InvalidInput("form content is not 1".into()));
        }
        let d = Self { form, deg };
        if !d.is_squarefree() {
            return Err(Error::InvalidInput("form is not squarefree".into()));
        }
        Ok(d)
    }

    pub fn from_i64(form: &[i64], deg: usize) -> Result<Self> {
        Self::new(form.iter().map(|&c| BigInt::from(c)).collect(), deg)
    }

    fn dehomogenized(&self) -> ZPoly {
        upoly::trimmed(&self.form)
    }

    /// Number of times `b` divides the form (the multiplicity at infinity).
    pub fn order_at_infinity(&self) -> usize {
        self.deg - upoly::degree(&self.form).unwrap()
    }

    fn is_squarefree(&self) -> bool {
        self.order_at_infinity() <= 1 && upoly::is_squarefree(&self.dehomogenized())
    }

    /// `F(a, b)`.
    pub fn eval(&self, p: &ProjPoint) -> BigInt {
        let mut acc = BigInt::zero();
        let mut apow = BigInt::one();
        let mut bpows = vec![BigInt::one()];
        for _ in 0..self.deg {
            let next = bpows.last().unwrap() * &p.b;
            bpows.push(next);
        }
        for (k, c) in self.form.iter().enumerate() {
            if !c.is_zero() {
                acc += c * &apow * &bpows[self.deg - k];
            }
            apow *= &p.a;
        }
        acc
    }
}

/// Weights `phi: S -> [0, 1]` summing to one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhiWeights {
    #[serde(with = "phi_serde")]
    pub entries: BTreeMap<Place, BigRational>,
}

mod phi_serde {
    use super::*;
    use crate::numbers::parse_rational;
    use serde::de::Error as _;

    pub fn serialize<S: serde::Serializer>(m: &BTreeMap<Place, BigRational>, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_map(m.iter().map(|(k, v)| (k.to_string(), v.to_string())))
    }

    pub fn deserialize<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<BTreeMap<Place, BigRational>, D::Error> {
        let raw = BTreeMap::<String, String>::deserialize(d)?;
        raw.iter()
            .map(|(k, v)| {
                let p: Place = k.parse().map_err(D::Error::custom)?;
                let r = parse_rational(v).map_err(D::Error::custom)?;
                Ok((p, r))
            })
            .collect()
    }
}

impl PhiWeights {
    pub fn new(entries: BTreeMap<Place, BigRational>) -> Result<Self> {
        let w = Self { entries };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        let mut total = BigRational::zero();
        for (p, v) in &self.entries {
            if v.is_negative() || *v > BigRational::one() {
                return Err(Error::InvalidInput(format!("weight at {p} outside [0,1]")));
            }
            total += v;
        }
        if !total.is_one() {
            return Err(Error::InvalidInput(format!("weights sum to {total}, not 1")));
        }
        Ok(())
    }

    pub fn archimedean_only() -> Self {
        let mut m = BTreeMap::new();
        m.insert(Place::Archimedean, BigRational::one());
        Self { entries: m }
    }

    pub fn places(&self) -> impl Iterator<Item = &Place> {
        self.entries.keys()
    }
}

/// `1/2 log(a^2 + b^2)` on the coprime representative.
pub fn fs_height<T: Real>(p: &ProjPoint) -> Interval<T> {
    let n = &p.a * &p.a + &p.b * &p.b;
    Interval::<T>::ln_bigint(&n).scale(0.5)
}

/// Value of a local Weil function. At a finite place the value is the exact
/// integer `ord_p F(a,b)` times `log p`.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalWeil<T> {
    pub place: Place,
    pub ord: Option<u32>,
    pub value: Interval<T>,
}

pub fn weil_local<T: Real>(d: &DivisorData, v: Place, p: &ProjPoint) -> Result<LocalWeil<T>> {
    let f = d.eval(p);
    if f.is_zero() {
        return Err(Error::PointOnDivisor);
    }
    Ok(match v {
        Place::Finite(q) => {
            let e = arith::valuation(&f, q);
            let value = if e == 0 {
                Interval::zero()
            } else {
                Interval::<T>::ln_bigint(&BigInt::from(q)).scale(e as f64)
            };
            LocalWeil { place: v, ord: Some(e), value }
        }
        Place::Archimedean => LocalWeil {
            place: v,
            ord: None,
            value: archimedean(d, p, &f),
        },
    })
}

fn archimedean<T: Real>(d: &DivisorData, p: &ProjPoint, f: &BigInt) -> Interval<T> {
    let n = &p.a * &p.a + &p.b * &p.b;
    Interval::<T>::ln_bigint(&n).scale(d.deg as f64 / 2.0) - Interval::<T>::ln_bigint(&f.abs())
}

/// Decomposition of the global sum over places. The finite part is the exact
/// integer `|F(a,b)| = prod p^ord`; `finite` lists its factorization with any
/// part left unfactored in `cofactor` (1 when complete).
#[derive(Clone, Debug, PartialEq)]
pub struct WeilSum<T> {
    pub finite: Vec<(u64, u32)>,
    pub cofactor: BigInt,
    pub finite_norm: BigInt,
    pub finite_value: Interval<T>,
    pub archimedean: Interval<T>,
    pub total: Interval<T>,
}

/// Trial-division limit used when `|F(a,b)|` exceeds 64 bits.
pub const DEFAULT_TRIAL_BOUND: u64 = 1 << 20;

pub fn weil_sum<T: Real>(d: &DivisorData, p: &ProjPoint, prime_bound: Option<u64>) -> Result<WeilSum<T>> {
    let f = d.eval(p);
    if f.is_zero() {
        return Err(Error::PointOnDivisor);
    }
    let norm = f.abs();
    let (mut finite, cofactor) = arith::factor_bigint(&norm, prime_bound.unwrap_or(DEFAULT_TRIAL_BOUND));
    if let Some(b) = prime_bound {
        finite.retain(|&(q, _)| q <= b);
    }
    // Sum over all primes of ord_p log p is log|F| whether or not every
    // prime was found, so the finite value never depends on factoring.
    let finite_value = Interval::<T>::ln_bigint(&norm);
    let arch = archimedean(d, p, &f);
    let n = &p.a * &p.a + &p.b * &p.b;
    let total = Interval::<T>::ln_bigint(&n).scale(d.deg as f64 / 2.0);
    Ok(WeilSum {
        finite,
        cofactor,
        finite_norm: norm,
        finite_value,
        archimedean: arch,
        total,
    })
}

pub fn divisor_from_algnum(alpha: &AlgebraicNumber) -> DivisorData {
    DivisorData {
        form: alpha.minpoly.clone(),
        deg: alpha.degree(),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TValues {
    pub s: Iv,
    pub h: Iv,
    pub t: Iv,
    /// Height of each irreducible component, in factor order (the point at
    /// infinity last when present).
    pub component_heights: Vec<Iv>,
}

/// Height `(1/k)(log lead + sum 1/2 log(1+|alpha_s|^2))` of the orbit cut out
/// by an irreducible integer polynomial of degree `k`.
pub fn orbit_height(g: &[BigInt]) -> Result<Iv> {
    let alpha = algnum_from_minpoly(g, 0)?;
    let k = alpha.degree();
    let mut acc = Iv::ln_bigint(&alpha.leading_coefficient().abs());
    for s in 0..k {
        let b = refine_embedding(&alpha, s, &BigRational::new(BigInt::one(), BigInt::from(1u64 << 40)));
        acc = acc + (Iv::point(1.0) + b.modulus_sq()).ln().scale(0.5);
    }
    Ok(acc.scale(1.0 / k as f64))
}

pub fn t_of_divisor(d: &DivisorData) -> Result<TValues> {
    let mut heights = vec![];
    let finite = d.dehomogenized();
    if upoly::degree(&finite).unwrap() > 0 {
        let (_, factors) = factor::factor(&finite);
        for (g, _) in factors {
            heights.push(orbit_height(&g)?);
        }
    }
    if d.order_at_infinity() > 0 {
        heights.push(Iv::zero());
    }
    let one = Iv::point(1.0);
    let h = heights.iter().fold(one, |m, x| m.max(x));
    let s = (h.scale(2.0) + Iv::point(C0)).max(&one);
    Ok(TValues {
        s,
        h,
        t: s * h,
        component_heights: heights,
    })
}

/// Certified enclosure of `|alpha - r|` for a real distinguished embedding.
pub fn certified_distance(alpha: &AlgebraicNumber, r: &BigRational) -> Result<(BigRational, BigRational)> {
    if !alpha.embeddings[alpha.distinguished].is_real() {
        return Err(Error::NotReal);
    }
    if alpha.as_rational().as_ref() == Some(r) {
        return Err(Error::PointOnDivisor);
    }
    let mut w = BigRational::new(BigInt::one(), BigInt::from(1u64 << 32));
    for _ in 0..64 {
        let b = refine_embedding(alpha, alpha.distinguished, &w);
        let lo = &b.re_lo - r;
        let hi = &b.re_hi - r;
        let sep = if lo.is_positive() {
            lo
        } else if hi.is_negative() {
            -hi
        } else {
            w = &w * &w;
            continue;
        };
        // Separated: refine to relative width 2^-60 of the distance.
        let fine = sep * BigRational::new(BigInt::one(), BigInt::one() << 60u32);
        let b = refine_embedding(alpha, alpha.distinguished, &fine);
        let lo = &b.re_lo - r;
        let hi = &b.re_hi - r;
        return Ok(if lo.is_positive() { (lo, hi) } else { (-hi, -lo) });
    }
    Err(Error::PrecisionExhausted)
}

/// Diophantine exponent `kappa = -log|alpha - p/q| / log q`.
///
/// The denominator is `log q`, the exponent in `|alpha - p/q| <= q^-kappa`.
/// For `q = 1` the value is `+inf` when the distance is below 1 and `-inf`
/// otherwise.
pub fn approx_quality(alpha: &AlgebraicNumber, p: &ProjPoint) -> Result<Iv> {
    if p.b.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let r = p.affine().unwrap();
    let (lo, hi) = certified_distance(alpha, &r)?;
    let num = -Iv::new(Iv::ln_rational(&lo).lo, Iv::ln_rational(&hi).hi);
    if p.b.is_one() {
        let inf = if num.lo > 0.0 {
            f64::INFINITY
        } else if num.hi < 0.0 {
            f64::NEG_INFINITY
        } else {
            return Err(Error::PrecisionExhausted);
        };
        return Ok(Iv::new(inf, inf));
    }
    let den = Iv::ln_bigint(&p.b);
    Ok(num.div(&den))
}

/// `lambda_inf(P) - kappa log q` for the divisor of `alpha`, together with the
/// constant bounding it: `(n/2) log(1+alpha^2) - log lead - sum_{s != 1}
/// log|alpha - alpha_s|` plus a margin of `n log(1 + 2 |alpha - p/q|
/// (1 + |alpha|)) + (n-1) max_s log(1 + |alpha-p/q| / |alpha - alpha_s|)`,
/// valid whenever `|alpha - p/q| < min_s |alpha - alpha_s| / 2`.
pub fn kappa_weil_gap(alpha: &AlgebraicNumber, p: &ProjPoint) -> Result<(Iv, f64)> {
    let d = divisor_from_algnum(alpha);
    let lam: LocalWeil<f64> = weil_local(&d, Place::Archimedean, p)?;
    let kappa = approx_quality(alpha, p)?;
    let lq = Iv::ln_bigint(&p.b);
    let gap = lam.value - kappa * lq;
    let n = alpha.degree() as f64;
    let a = alpha.approx(alpha.distinguished);
    let mut c = n / 2.0 * (1.0 + a.norm_sqr()).ln() - alpha.leading_coefficient().abs().to_f64().unwrap().ln();
    let mut min_sep = f64::INFINITY;
    for s in 0..alpha.degree() {
        if s != alpha.distinguished {
            let sep = (a - alpha.approx(s)).norm();
            min_sep = min_sep.min(sep);
            c -= sep.ln();
        }
    }
    let dist = (a.re - p.a.to_f64().unwrap() / p.b.to_f64().unwrap()).abs();
    let margin = n * (1.0 + 2.0 * dist * (1.0 + a.norm())).ln() + (n - 1.0) * (1.0 + dist / min_sep).ln();
    Ok((gap, c.abs() + margin + 1e-9))
}

/// Certified `sup_{a^2+b^2=1} |F(a,b)|`: the maximum over `samples` angles,
/// widened by a Lipschitz bound on the gaps.
pub fn sup_on_circle(d: &DivisorData, samples: usize) -> Iv {
    let c: Vec<f64> = d.form.iter().map(|x| x.to_f64().unwrap()).collect();
    let f = |t: f64| {
        let (s, co) = t.sin_cos();
        c.iter()
            .enumerate()
            .map(|(k, ck)| ck * co.powi(k as i32) * s.powi((d.deg - k) as i32))
            .sum::<f64>()
    };
    let step = std::f64::consts::PI / samples as f64;
    let mut best: f64 = 0.0;
    for i in 0..samples {
        best = best.max(f(i as f64 * step).abs());
    }
    let lip = d.deg as f64 * c.iter().map(|x| x.abs()).sum::<f64>();
    Iv::new(best * (1.0 - 1e-12), best * (1.0 + 1e-12) + lip * step / 2.0)
}

/// Numerical re-derivation of [`C0`]: the sup over a sphere grid of
/// `|log(|dz|_Delta / |dz|_FS^-2)|`, where `|dz|_Delta` is the limit of
/// `|z-w| / |s_Delta|(z,w)` as `w -> z` (Richardson-extrapolated).
pub fn metric_comparison_constant(samples: usize) -> f64 {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    let mut worst: f64 = 0.0;
    for i in 0..samples {
        let zc = 1.0 - 2.0 * (i as f64 + 0.5) / samples as f64;
        let r = (1.0 - zc * zc).sqrt();
        let th = golden * i as f64;
        // Stereographic projection from the north pole; the other chart is
        // symmetric under z -> 1/z.
        let rho = r / (1.0 - zc);
        let z = num_complex::Complex64::from_polar(rho, th);
        let norm_delta = |w: num_complex::Complex64| {
            let s = (z - w).norm() / ((1.0 + z.norm_sqr()).sqrt() * (1.0 + w.norm_sqr()).sqrt());
            (z - w).norm() / s
        };
        let h = 1e-6 * (1.0 + rho);
        let dir = num_complex::Complex64::from_polar(1.0, 0.3 + th);
        let r1 = norm_delta(z + dir * h);
        let r2 = norm_delta(z + dir * (h / 2.0));
        let limit = 2.0 * r2 - r1;
        worst = worst.max((limit / (1.0 + z.norm_sqr())).ln().abs());
    }
    worst
}
