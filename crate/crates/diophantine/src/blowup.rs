//! Metric data of the staircase blow-up at the strict transform of a point,
//! derived sections, Cauchy-type estimates, and the inequality chain that
//! ends in a height bound.
//!
//! The blow-up itself is never built. Everything below is a number attached
//! to the strict transform of one rational point.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::auxpoly::{
    construct_auxiliary, divided_derivative, fs_sup_norm, jets, AuxOptions, BivariatePolynomial, WeightSystem,
};
use crate::error::{Error, Result};
use crate::field::FieldPoint;
use crate::heights::{
    divisor_from_algnum, fs_height, t_of_divisor, weil_local, DivisorData, PhiWeights, Place, C0,
    DEFAULT_TRIAL_BOUND,
};
use crate::numbers::{AlgebraicSpec, ProjPoint};
use crate::Iv;

/// A real quantity as stored in certificates: midpoint and enclosure width.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RealValue {
    pub value: f64,
    pub interval_width: f64,
}

impl From<Iv> for RealValue {
    fn from(x: Iv) -> Self {
        RealValue {
            value: x.mid(),
            interval_width: x.width(),
        }
    }
}

impl RealValue {
    pub fn exact(x: f64) -> Self {
        RealValue {
            value: x,
            interval_width: 0.0,
        }
    }

    fn bounds(&self) -> (f64, f64) {
        let r = self.interval_width / 2.0;
        (self.value - r, self.value + r)
    }
}

fn rat_f64(r: &BigRational) -> Iv {
    Iv::from_rational(r)
}

// ---------------------------------------------------------------------------
// Staircase generators

/// Minimal generators of the at-least staircase, by increasing `i`.
pub fn generators(w: &WeightSystem) -> Vec<(usize, usize)> {
    let mut out = vec![];
    let mut prev = usize::MAX;
    for i in 0..=w.d1 {
        let first = match w.jmax(i) {
            None => Some(0),
            Some(j) if j < w.d2 => Some(j + 1),
            Some(_) => None,
        };
        if let Some(c) = first {
            if c < prev {
                out.push((i, c));
            }
            prev = c;
        }
    }
    out
}

/// Generators that are vertices of the Newton polygon of the staircase
/// ideal, i.e. unique minimizers of some positive linear functional.
pub fn vertex_generators(h: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut hull: Vec<(i64, i64)> = vec![];
    for &(i, j) in h {
        let p = (i as i64, j as i64);
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            let cross = (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    hull.into_iter().map(|(i, j)| (i as usize, j as usize)).collect()
}

// ---------------------------------------------------------------------------
// Exceptional divisor

#[derive(Clone, Debug, PartialEq)]
pub struct ExceptionalNorm {
    pub place: Place,
    /// `-log ||E||_v` at the strict transform.
    pub value: Iv,
    /// `j1 lambda1 + j2 lambda2` at the witness.
    pub witness_term: Iv,
    /// Minimizing generator, the first one in case of ties.
    pub witness: (usize, usize),
    pub generators: usize,
}

pub fn exceptional_log_norm(
    p1: &ProjPoint,
    p2: &ProjPoint,
    d1: &DivisorData,
    d2: &DivisorData,
    w: &WeightSystem,
    v: Place,
) -> Result<ExceptionalNorm> {
    let h = generators(w);
    if h.is_empty() {
        return Err(Error::InvalidInput("staircase has no generators in the box".into()));
    }
    let l1 = weil_local::<f64>(d1, v, p1)?;
    let l2 = weil_local::<f64>(d2, v, p2)?;
    match v {
        Place::Finite(p) => {
            let (o1, o2) = (l1.ord.unwrap() as u64, l2.ord.unwrap() as u64);
            let (k, witness) = h
                .iter()
                .map(|&(i, j)| (i as u64 * o1 + j as u64 * o2, (i, j)))
                .min_by_key(|&(k, _)| k)
                .unwrap();
            let value = if k == 0 {
                Iv::zero()
            } else {
                Iv::ln_bigint(&BigInt::from(p)).scale(k as f64)
            };
            Ok(ExceptionalNorm {
                place: v,
                value,
                witness_term: value,
                witness,
                generators: h.len(),
            })
        }
        Place::Archimedean => {
            let terms: Vec<Iv> = h
                .iter()
                .map(|&(i, j)| l1.value.scale(i as f64) + l2.value.scale(j as f64))
                .collect();
            let mut best = 0;
            for (k, t) in terms.iter().enumerate() {
                if t.mid() < terms[best].mid() {
                    best = k;
                }
            }
            let m = terms[best];
            let sum = terms
                .iter()
                .enumerate()
                .map(|(k, t)| if k == best { Iv::point(1.0) } else { (*t - m).scale(-2.0).exp() })
                .fold(Iv::zero(), |a, b| a + b);
            Ok(ExceptionalNorm {
                place: v,
                value: m - sum.ln().scale(0.5),
                witness_term: m,
                witness: h[best],
                generators: h.len(),
            })
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EAuditEntry {
    pub place: Place,
    pub value: Iv,
    pub witness: (usize, usize),
    pub witness_term: Iv,
    /// The constant `C`; `C (d1 + d2)` is the allowed slack.
    pub c: f64,
    /// `value - (witness_term - C (d1 + d2))`, exactly zero at finite places.
    pub slack: Iv,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EAudit {
    pub entries: Vec<EAuditEntry>,
    /// Places where some local Weil value is nonzero, plus infinity.
    pub support: Vec<Place>,
    /// Arakelov degree of the pullback of `O(E)`: the sum over all places.
    pub total_degree: Iv,
    pub generators: usize,
}

fn audit_entry(e: &ExceptionalNorm, w: &WeightSystem) -> EAuditEntry {
    let n = (w.d1 + w.d2) as f64;
    let (c, slack) = match e.place {
        Place::Finite(_) => (0.0, Iv::zero()),
        Place::Archimedean => {
            let log_h = Iv::point(e.generators as f64).ln();
            (log_h.hi * 0.5 / n, (log_h - (e.witness_term - e.value).scale(2.0)).scale(0.5))
        }
    };
    EAuditEntry {
        place: e.place,
        value: e.value,
        witness: e.witness,
        witness_term: e.witness_term,
        c,
        slack,
        holds: slack.hi >= 0.0 && slack.lo >= -1e-9,
    }
}

pub fn degreeofe_audit(
    p1: &ProjPoint,
    p2: &ProjPoint,
    d1: &DivisorData,
    d2: &DivisorData,
    w: &WeightSystem,
    places: &[Place],
) -> Result<EAudit> {
    let f1 = d1.eval(p1);
    let f2 = d2.eval(p2);
    if f1.is_zero() || f2.is_zero() {
        return Err(Error::PointOnDivisor);
    }
    let (primes, cofactor) = arith::factor_bigint(&(f1 * f2), DEFAULT_TRIAL_BOUND);
    if !cofactor.is_one() {
        return Err(Error::PrecisionExhausted);
    }
    let mut support: BTreeSet<Place> = primes.iter().map(|&(p, _)| Place::Finite(p)).collect();
    support.insert(Place::Archimedean);
    let mut total = Iv::zero();
    for &v in &support {
        total = total + exceptional_log_norm(p1, p2, d1, d2, w, v)?.value;
    }
    let mut entries = vec![];
    let mut gens = 0;
    for &v in places {
        let e = exceptional_log_norm(p1, p2, d1, d2, w, v)?;
        gens = e.generators;
        entries.push(audit_entry(&e, w));
    }
    Ok(EAudit {
        entries,
        support: support.into_iter().collect(),
        total_degree: total,
        generators: gens,
    })
}

// ---------------------------------------------------------------------------
// Derived sections

/// Sample budget for the sup norm in [`derived_section`].
pub const DERIVED_SUP_SAMPLES: usize = 1 << 16;

/// `max(2/R, A2/A1)` for the two unit-disk charts `z`, `1/z` of `P^1`, with
/// `R = 1/2` and `A1 <= rho <= A2` the range of `rho = (1 + |z|^2)^(-1/2)`,
/// the Fubini-Study length of the trivializing section, on the unit disk.
pub fn chart_comparison_constant(samples: usize) -> f64 {
    let r: f64 = 0.5;
    let (mut a1, mut a2) = (f64::INFINITY, 0.0f64);
    for k in 0..=samples {
        let t = k as f64 / samples as f64;
        let rho = 1.0 / (1.0 + t * t).sqrt();
        a1 = a1.min(rho);
        a2 = a2.max(rho);
    }
    (2.0 / r).max(a2 / a1)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DerivedSection {
    pub i1: usize,
    pub i2: usize,
    #[serde(with = "crate::serde_util::rational")]
    pub weight: BigRational,
    /// `D^(i1,i2) f` at the point, in the affine chart of the point.
    #[serde(with = "crate::serde_util::rational")]
    pub value: BigRational,
    pub log_sup: f64,
    pub c1: f64,
    pub lognorm_bound: f64,
}

/// Least-weight nonzero jet at a rational point, ties going to the
/// lexicographically first pair.
fn lowest_jet(
    f: &BivariatePolynomial,
    p1: &ProjPoint,
    p2: &ProjPoint,
    w: &WeightSystem,
) -> Result<(usize, usize, BigRational, BigRational)> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let inf1 = p1.b.is_zero();
    let inf2 = p2.b.is_zero();
    let g = f.reversed(inf1, inf2);
    let x = if inf1 { BigRational::zero() } else { p1.affine().unwrap() };
    let y = if inf2 { BigRational::zero() } else { p2.affine().unwrap() };
    let table = jets(&g, &FieldPoint::rational(x, y));
    let mut best: Option<(usize, usize, BigRational, BigRational)> = None;
    for (a, row) in table.iter().enumerate() {
        for (b, e) in row.iter().enumerate() {
            if e.is_zero() {
                continue;
            }
            let wt = w.weight(a, b);
            if best.as_ref().map_or(true, |(_, _, bw, _)| wt < *bw) {
                best = Some((a, b, wt, e.coords[0].clone()));
            }
        }
    }
    Ok(best.unwrap())
}

pub fn derived_section(
    f: &BivariatePolynomial,
    p1: &ProjPoint,
    p2: &ProjPoint,
    w: &WeightSystem,
    eps: &BigRational,
) -> Result<DerivedSection> {
    let s = derived_section_unchecked(f, p1, p2, w, DERIVED_SUP_SAMPLES)?;
    if s.weight > *eps {
        return Err(Error::IndexTooLarge {
            index: s.weight.to_string(),
            epsilon: eps.to_string(),
        });
    }
    Ok(s)
}

fn derived_section_unchecked(
    f: &BivariatePolynomial,
    p1: &ProjPoint,
    p2: &ProjPoint,
    w: &WeightSystem,
    sup_samples: usize,
) -> Result<DerivedSection> {
    let (i1, i2, weight, value) = lowest_jet(f, p1, p2, w)?;
    let log_sup = fs_sup_norm(f, sup_samples).log_upper;
    let c1 = chart_comparison_constant(1000);
    Ok(DerivedSection {
        i1,
        i2,
        weight,
        value,
        log_sup,
        c1,
        lognorm_bound: log_sup + (w.d1 + w.d2) as f64 * c1.ln(),
    })
}

// ---------------------------------------------------------------------------
// Local estimate on the blow-up

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalCauchyReport {
    pub samples: usize,
    /// Sampled max of `|f|` on the torus `|z1| = |z2| = 1`.
    pub torus_max: f64,
    /// Largest `|f| / sqrt(sum_H |z^j|^2) / torus_max` seen, including the
    /// limits at the chart origins.
    pub max_ratio: f64,
    /// Limit of the ratio at the origin of the chart of each vertex generator.
    pub chart_ratios: Vec<((usize, usize), f64)>,
    /// `max(max_ratio, 1)^(1/(d1+d2))`.
    pub empirical_b: f64,
    /// Interior samples where `|f|` exceeds the Lipschitz-widened torus max;
    /// zero by the maximum principle.
    pub boundary_max_violations: usize,
}

fn to_f64_big(c: &BigInt) -> f64 {
    c.to_f64().unwrap_or(if c.is_negative() { f64::MIN } else { f64::MAX })
}

/// Compares `f` on the blow-up of the staircase ideal at the origin, seen
/// through the quotient metric `|f| / sqrt(sum_{j in H} |z^j|^2)`, with the
/// sup of `f` on the unit polydisk.
pub fn verify_localcauchy(
    f: &BivariatePolynomial,
    w: &WeightSystem,
    samples: usize,
    seed: u64,
) -> Result<LocalCauchyReport> {
    if f.d1 > w.d1 || f.d2 > w.d2 {
        return Err(Error::InvalidInput("polynomial exceeds the bidegree of the weights".into()));
    }
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    for (i, row) in f.coeffs.iter().enumerate() {
        for (j, c) in row.iter().enumerate() {
            if !c.is_zero() && w.below(i, j) {
                return Err(Error::NotInIdeal);
            }
        }
    }
    let h = generators(w);
    let c: Vec<Vec<f64>> = f.coeffs.iter().map(|r| r.iter().map(to_f64_big).collect()).collect();
    let eval = |z1: Complex64, z2: Complex64| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for row in c.iter().rev() {
            let mut r = Complex64::new(0.0, 0.0);
            for a in row.iter().rev() {
                r = r * z2 + a;
            }
            acc = acc * z1 + r;
        }
        acc
    };
    let side = 64;
    let tau = 2.0 * std::f64::consts::PI;
    let mut torus_max: f64 = 0.0;
    for a in 0..side {
        for b in 0..side {
            let z1 = Complex64::from_polar(1.0, tau * a as f64 / side as f64);
            let z2 = Complex64::from_polar(1.0, tau * b as f64 / side as f64);
            torus_max = torus_max.max(eval(z1, z2).norm());
        }
    }
    let l1: f64 = c.iter().flatten().map(|x| x.abs()).sum();
    let widened = torus_max + l1 * (f.d1 + f.d2) as f64 * std::f64::consts::PI / side as f64;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_ratio: f64 = 0.0;
    let mut violations = 0;
    for k in 0..samples {
        // Half the samples are uniform in the polydisk, half log-uniform in
        // the radii to reach deep into the exceptional divisor.
        let (lr1, lr2) = if k % 2 == 0 {
            (
                0.5 * (1.0 - rng.gen::<f64>()).ln(),
                0.5 * (1.0 - rng.gen::<f64>()).ln(),
            )
        } else {
            (-12.0 * rng.gen::<f64>(), -12.0 * rng.gen::<f64>())
        };
        let (t1, t2) = (tau * rng.gen::<f64>(), tau * rng.gen::<f64>());
        let m = h
            .iter()
            .map(|&(i, j)| i as f64 * lr1 + j as f64 * lr2)
            .fold(f64::NEG_INFINITY, f64::max);
        let denom = h
            .iter()
            .map(|&(i, j)| (2.0 * (i as f64 * lr1 + j as f64 * lr2 - m)).exp())
            .sum::<f64>()
            .sqrt();
        let mut num = Complex64::new(0.0, 0.0);
        for (i, row) in c.iter().enumerate() {
            for (j, a) in row.iter().enumerate() {
                if *a != 0.0 {
                    let mag = (i as f64 * lr1 + j as f64 * lr2 - m).exp();
                    num += Complex64::from_polar(a * mag, i as f64 * t1 + j as f64 * t2);
                }
            }
        }
        max_ratio = max_ratio.max(num.norm() / denom / torus_max);
        let z1 = Complex64::from_polar(lr1.exp(), t1);
        let z2 = Complex64::from_polar(lr2.exp(), t2);
        if eval(z1, z2).norm() > widened {
            violations += 1;
        }
    }
    let chart_ratios: Vec<((usize, usize), f64)> = vertex_generators(&h)
        .into_iter()
        .filter(|&(i, j)| i <= f.d1 && j <= f.d2)
        .map(|(i, j)| ((i, j), c[i][j].abs() / torus_max))
        .collect();
    for &(_, r) in &chart_ratios {
        max_ratio = max_ratio.max(r);
    }
    Ok(LocalCauchyReport {
        samples,
        torus_max,
        max_ratio,
        chart_ratios,
        empirical_b: max_ratio.max(1.0).powf(1.0 / (w.d1 + w.d2) as f64),
        boundary_max_violations: violations,
    })
}

// ---------------------------------------------------------------------------
// Cauchy inequality in exact arithmetic

type Cq = Complex<BigRational>;

fn eval_cq(f: &BivariatePolynomial, x: &Cq, y: &Cq) -> Cq {
    let zero = Cq::new(BigRational::zero(), BigRational::zero());
    let mut acc = zero.clone();
    for row in f.coeffs.iter().rev() {
        let mut r = zero.clone();
        for a in row.iter().rev() {
            r = r * y + Cq::new(BigRational::from_integer(a.clone()), BigRational::zero());
        }
        acc = acc * x + r;
    }
    acc
}

/// Point `r ((1 - s^2) + 2 s i) / (1 + s^2)` of the circle of radius `r`.
fn circle_point(s: &BigRational, r: &BigRational) -> Cq {
    let one = BigRational::one();
    let d = &one + s * s;
    Cq::new(r * (&one - s * s) / &d, r * BigRational::from_integer(BigInt::from(2)) * s / d)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CauchyReport {
    pub checks: usize,
    /// `(i, j, interior sample index)` of each violation.
    pub violations: Vec<(usize, usize, usize)>,
    /// Largest `|D^(i,j) f(z)| R^(i+j) / (2^(i+j) M)` seen.
    pub worst_ratio: f64,
    pub torus_points: usize,
}

/// Checks `|d^(i+j) f / dx^i dy^j (z)| <= 2^(i+j) i! j! / R^(i+j) M` for all
/// orders up to the bidegree and sample points `z` in the polydisk of radius
/// `R/2`, where `M` is the max of `|f|` on the torus of radius `R`.
///
/// Everything is exact: torus points are rational points of the circle and
/// interior points dyadic. The sampled `M` is a lower bound of the true max,
/// so the absence of violations is certified.
pub fn cauchy_inequality_check(
    f: &BivariatePolynomial,
    r: &BigRational,
    interior: usize,
    torus_side: usize,
    seed: u64,
) -> CauchyReport {
    let circle: Vec<Cq> = (0..torus_side)
        .map(|k| {
            let phi = -std::f64::consts::PI + std::f64::consts::TAU * (k as f64 + 0.5) / torus_side as f64;
            let s = BigRational::new(BigInt::from(((phi / 2.0).tan() * 64.0).round() as i64), BigInt::from(64));
            circle_point(&s, r)
        })
        .collect();
    let mut m2 = BigRational::zero();
    for x in &circle {
        for y in &circle {
            let n = eval_cq(f, x, y).norm_sqr();
            if n > m2 {
                m2 = n;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let den = BigInt::from(256);
    let mut points = vec![];
    while points.len() < interior {
        let a: i64 = rng.gen_range(-128..=128);
        let b: i64 = rng.gen_range(-128..=128);
        if a * a + b * b > 128 * 128 {
            continue;
        }
        let z1 = Cq::new(
            r * BigRational::new(BigInt::from(a), den.clone()),
            r * BigRational::new(BigInt::from(b), den.clone()),
        );
        let a: i64 = rng.gen_range(-128..=128);
        let b: i64 = rng.gen_range(-128..=128);
        if a * a + b * b > 128 * 128 {
            continue;
        }
        let z2 = Cq::new(
            r * BigRational::new(BigInt::from(a), den.clone()),
            r * BigRational::new(BigInt::from(b), den.clone()),
        );
        points.push((z1, z2));
    }
    let (dx, dy) = f.degrees().unwrap_or((0, 0));
    let r2 = r * r;
    let mut checks = 0;
    let mut violations = vec![];
    let mut worst: f64 = 0.0;
    for i in 0..=dx {
        for j in 0..=dy {
            // With divided derivatives the factorials cancel:
            // |D f(z)|^2 <= 4^(i+j) / R^(2(i+j)) M^2.
            let g = divided_derivative(f, i, j);
            let k = (i + j) as i32;
            let bound = &m2 * BigRational::from_integer(BigInt::from(4).pow(k as u32)) / num_traits::pow(r2.clone(), k as usize);
            for (idx, (z1, z2)) in points.iter().enumerate() {
                let lhs = eval_cq(&g, z1, z2).norm_sqr();
                checks += 1;
                if lhs > bound {
                    violations.push((i, j, idx));
                }
                if !bound.is_zero() {
                    let q = (&lhs / &bound).to_f64().unwrap_or(f64::INFINITY);
                    worst = worst.max(q.sqrt());
                }
            }
        }
    }
    CauchyReport {
        checks,
        violations,
        worst_ratio: worst,
        torus_points: circle.len() * circle.len(),
    }
}

// ---------------------------------------------------------------------------
// Pullback degree

/// Height of `P` for the canonical bundle with the metric induced by the
/// Fubini-Study metric: `omega = O(-2)` shifted by the comparison constant.
pub fn h_omega(p: &ProjPoint) -> Iv {
    fs_height::<f64>(p).scale(-2.0) + Iv::point(C0)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ESpec {
    pub divisor1: DivisorData,
    pub divisor2: DivisorData,
    /// Weights whose `delta` is the level of the blown-up ideal.
    pub weights: WeightSystem,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PullbackSpec {
    pub d1: usize,
    pub d2: usize,
    pub omega: (usize, usize),
    pub include_e: Option<ESpec>,
}

/// `d1 h1 + d2 h2 + i1 h_omega(P1) + i2 h_omega(P2) - deg P~*(E)`.
pub fn pullback_degree(p1: &ProjPoint, p2: &ProjPoint, spec: &PullbackSpec) -> Result<Iv> {
    let mut acc = fs_height::<f64>(p1).scale(spec.d1 as f64) + fs_height::<f64>(p2).scale(spec.d2 as f64);
    if spec.omega.0 > 0 {
        acc = acc + h_omega(p1).scale(spec.omega.0 as f64);
    }
    if spec.omega.1 > 0 {
        acc = acc + h_omega(p2).scale(spec.omega.1 as f64);
    }
    if let Some(e) = &spec.include_e {
        let audit = degreeofe_audit(p1, p2, &e.divisor1, &e.divisor2, &e.weights, &[])?;
        acc = acc - audit.total_degree;
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// Certificates

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CertifyConfig {
    /// `h_omega <= A3 h`; `2 + |c0|` on the projective line.
    #[serde(with = "crate::serde_util::rational")]
    pub a3: BigRational,
    /// Constant in the auxiliary norm target.
    pub a_const: f64,
    /// Chart constant; computed when absent.
    pub c1: Option<f64>,
    /// Lower bound on `d / h_i`.
    pub min_degree_ratio: usize,
    /// Cap on `d1`, `d2`.
    pub degree_cap: usize,
    pub sup_samples: usize,
}

impl Default for CertifyConfig {
    fn default() -> Self {
        Self {
            a3: BigRational::from_integer(BigInt::from(2 + C0.abs().ceil() as i64)),
            a_const: 1.0,
            c1: None,
            min_degree_ratio: 40,
            degree_cap: 40,
            sup_samples: 1 << 20,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateInputs {
    pub alpha1: AlgebraicSpec,
    pub alpha2: AlgebraicSpec,
    pub p1: ProjPoint,
    pub p2: ProjPoint,
    #[serde(with = "crate::serde_util::rational")]
    pub theta1: BigRational,
    #[serde(with = "crate::serde_util::rational")]
    pub theta2: BigRational,
    #[serde(with = "crate::serde_util::rational")]
    pub epsilon: BigRational,
    pub places: Vec<Place>,
    pub phi: PhiWeights,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Epsilons {
    /// `delta = 2 + e0`; fixed only once the hypotheses hold.
    #[serde(with = "crate::serde_util::rational_opt")]
    pub e0: Option<BigRational>,
    #[serde(with = "crate::serde_util::rational")]
    pub e1: BigRational,
    #[serde(with = "crate::serde_util::rational")]
    pub e2: BigRational,
    #[serde(with = "crate::serde_util::rational")]
    pub e3: BigRational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Lt,
    Le,
    Gt,
    Ge,
}

impl Relation {
    /// Strict relations must be certified by the enclosures; non-strict ones
    /// hold unless the enclosures refute them.
    pub fn eval(self, lhs: &RealValue, rhs: &RealValue) -> bool {
        let (a_lo, a_hi) = lhs.bounds();
        let (b_lo, b_hi) = rhs.bounds();
        match self {
            Relation::Lt => a_hi < b_lo,
            Relation::Gt => a_lo > b_hi,
            Relation::Le => a_lo <= b_hi,
            Relation::Ge => a_hi >= b_lo,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Relation::Lt => "<",
            Relation::Le => "<=",
            Relation::Gt => ">",
            Relation::Ge => ">=",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntryKind {
    /// A hypothesis of the theorem; failure ends the run.
    Hypothesis,
    /// A link of the deduction; failure is a contradiction.
    Derived,
    /// Recorded for inspection only.
    Info,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainEntry {
    pub name: String,
    pub kind: EntryKind,
    pub lhs: RealValue,
    pub relation: Relation,
    pub rhs: RealValue,
    pub holds: bool,
}

impl ChainEntry {
    fn new(name: impl Into<String>, kind: EntryKind, lhs: RealValue, relation: Relation, rhs: RealValue) -> Self {
        Self {
            name: name.into(),
            kind,
            holds: relation.eval(&lhs, &rhs),
            lhs,
            relation,
            rhs,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeilEntry {
    pub divisor: u8,
    pub place: Place,
    pub value: RealValue,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Outcome {
    HeightBound {
        value: RealValue,
    },
    HypothesisViolation {
        entry: String,
        ratio: RealValue,
        /// Set when the ratio is known exactly.
        exact_ratio: Option<String>,
        description: String,
    },
    ChainSatisfied,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub inputs: CertificateInputs,
    pub config: CertifyConfig,
    pub field_degree: usize,
    pub h1: RealValue,
    pub h2: RealValue,
    pub t1: RealValue,
    pub t2: RealValue,
    pub epsilons: Epsilons,
    pub d: Option<usize>,
    pub d1: Option<usize>,
    pub d2: Option<usize>,
    /// `d` after capping, with `d_i h_i` close to it.
    pub d_effective: Option<f64>,
    #[serde(with = "crate::serde_util::rational_opt")]
    pub delta: Option<BigRational>,
    pub aux_norm_log: Option<RealValue>,
    #[serde(with = "crate::serde_util::rational_opt")]
    pub index_measured: Option<BigRational>,
    pub derived_orders: Option<(usize, usize)>,
    pub weil_table: Vec<WeilEntry>,
    pub exceptional_degree: Option<RealValue>,
    /// Measured aggregate constant of the final bound.
    pub a9: Option<RealValue>,
    pub chain: Vec<ChainEntry>,
    pub outcome: Outcome,
}

/// Name of the chain entry whose right side is the height bound.
pub const FINAL_BOUND: &str = "final_bound";

/// Recomputes the outcome from the chain table alone.
pub fn outcome_from_chain(chain: &[ChainEntry]) -> Outcome {
    for e in chain.iter().filter(|e| e.kind == EntryKind::Hypothesis) {
        if !e.relation.eval(&e.lhs, &e.rhs) {
            let exact_ratio = (e.lhs.interval_width == 0.0).then(|| format!("{}", e.lhs.value));
            return Outcome::HypothesisViolation {
                entry: e.name.clone(),
                ratio: e.lhs,
                exact_ratio,
                description: format!(
                    "{}: ratio {} is not {} {}",
                    e.name,
                    e.lhs.value,
                    e.relation.symbol(),
                    e.rhs.value
                ),
            };
        }
    }
    let contradiction = chain
        .iter()
        .any(|e| e.kind == EntryKind::Derived && !e.relation.eval(&e.lhs, &e.rhs));
    match chain.iter().find(|e| e.name == FINAL_BOUND) {
        Some(b) if contradiction => Outcome::HeightBound { value: b.rhs },
        _ => Outcome::ChainSatisfied,
    }
}

pub fn replay(cert: &Certificate) -> Outcome {
    outcome_from_chain(&cert.chain)
}

/// Largest `e0` in `1/20, 1/40, 1/80, ...` with `2 theta1 theta2 > n (2 + e0)^2`.
pub fn choose_e0(theta1: &BigRational, theta2: &BigRational, n: usize) -> Result<BigRational> {
    let lhs = theta1 * theta2 * BigRational::from_integer(BigInt::from(2));
    let nn = BigRational::from_integer(BigInt::from(n));
    let two = BigRational::from_integer(BigInt::from(2));
    let mut e0 = BigRational::new(BigInt::one(), BigInt::from(20));
    for _ in 0..30 {
        let delta = &two + &e0;
        if lhs > &nn * &delta * &delta {
            return Ok(e0);
        }
        e0 /= BigRational::from_integer(BigInt::from(2));
    }
    Err(Error::InvalidInput(
        "theta1 theta2 leaves no room for delta above 2 at this field degree".into(),
    ))
}

/// `d`, `d1`, `d2` and the effective `d` after capping.
fn select_degrees(
    theta1: &BigRational,
    theta2: &BigRational,
    delta: &BigRational,
    h1: f64,
    h2: f64,
    cfg: &CertifyConfig,
) -> (usize, usize, usize, f64) {
    use num_integer::Integer;
    let l = theta1.denom().lcm(theta2.denom()).lcm(delta.denom());
    let l = l.to_f64().unwrap();
    let need = cfg.min_degree_ratio as f64 * h1.max(h2);
    let d = ((need / l).ceil().max(1.0) * l) as usize;
    let mut de = d as f64;
    let cap = cfg.degree_cap.max(2) as f64;
    if (de / h1.min(h2)).ceil() > cap {
        de = (cap - 1.0) * h1.min(h2);
    }
    let mut d1 = ((de / h1).floor() as usize).max(1);
    let mut d2 = ((de / h2).ceil() as usize).max(1);
    // Keep d1 / d2 < h2 / h1.
    if d1 as f64 * h1 >= d2 as f64 * h2 {
        if d1 > 1 {
            d1 -= 1;
        } else {
            d2 += 1;
        }
    }
    (d, d1, d2, de)
}

#[allow(clippy::too_many_arguments)]
pub fn certify_pair(
    alpha1: &AlgebraicSpec,
    alpha2: &AlgebraicSpec,
    p1: &ProjPoint,
    p2: &ProjPoint,
    theta1: &BigRational,
    theta2: &BigRational,
    eps: &BigRational,
    places: &[Place],
    phi: &PhiWeights,
    cfg: &CertifyConfig,
) -> Result<Certificate> {
    phi.validate()?;
    let s_set: BTreeSet<Place> = places.iter().copied().collect();
    if s_set.len() != places.len() || !s_set.iter().eq(phi.places()) {
        return Err(Error::InvalidInput("phi must be defined exactly on the places of S".into()));
    }
    if !eps.is_positive() {
        return Err(Error::InvalidInput("epsilon must be positive".into()));
    }
    let a1 = alpha1.build()?;
    let a2 = alpha2.build()?;
    let div1 = divisor_from_algnum(&a1);
    let div2 = divisor_from_algnum(&a2);
    let n = FieldPoint::from_pair(&a1, &a2)?.degree();
    let h1: Iv = fs_height(p1);
    let h2: Iv = fs_height(p2);
    if h1.lo <= 0.0 || h2.lo <= 0.0 {
        return Err(Error::InvalidInput("points of height zero are not supported".into()));
    }
    let t1 = t_of_divisor(&div1)?.t;
    let t2 = t_of_divisor(&div2)?.t;

    let nn = BigRational::from_integer(BigInt::from(n));
    let one = BigRational::one();
    let two = BigRational::from_integer(BigInt::from(2));
    let e1 = eps / (&nn + &one);
    let k = &one + &two * &cfg.a3;
    let e2 = &e1 / (&two * &k);
    let e3 = &e1 - &k * &e2;
    let mut epsilons = Epsilons { e0: None, e1, e2, e3 };

    let mut chain = vec![];
    let mut weil_table = vec![];
    let phi_theta = |v: &Place, th: &BigRational| rat_f64(&(&phi.entries[v] * th));
    for v in places {
        for (i, div, p, h, th) in [(1u8, &div1, p1, h1, theta1), (2u8, &div2, p2, h2, theta2)] {
            let l = weil_local::<f64>(div, *v, p)?;
            weil_table.push(WeilEntry {
                divisor: i,
                place: *v,
                value: l.value.into(),
            });
            // |F(P)| = 1 makes the archimedean ratio exactly deg(D).
            let ratio = if v.is_archimedean() && div.eval(p).abs().is_one() {
                Iv::point(div.deg as f64)
            } else {
                l.value.div(&h)
            };
            chain.push(ChainEntry::new(
                format!("hypothesis[D{i},{v}]"),
                EntryKind::Hypothesis,
                ratio.into(),
                Relation::Gt,
                phi_theta(v, th).into(),
            ));
        }
    }
    chain.push(ChainEntry::new(
        "theta_product",
        EntryKind::Info,
        rat_f64(&(theta1 * theta2)).into(),
        Relation::Ge,
        rat_f64(&(&two * &nn + eps)).into(),
    ));
    chain.push(ChainEntry::new(
        "epsilon_cascade",
        EntryKind::Info,
        rat_f64(&epsilons.e2).into(),
        Relation::Lt,
        rat_f64(&(&epsilons.e1 / &k)).into(),
    ));

    let mut cert = Certificate {
        inputs: CertificateInputs {
            alpha1: alpha1.clone(),
            alpha2: alpha2.clone(),
            p1: p1.clone(),
            p2: p2.clone(),
            theta1: theta1.clone(),
            theta2: theta2.clone(),
            epsilon: eps.clone(),
            places: places.to_vec(),
            phi: phi.clone(),
        },
        config: cfg.clone(),
        field_degree: n,
        h1: h1.into(),
        h2: h2.into(),
        t1: t1.into(),
        t2: t2.into(),
        epsilons: epsilons.clone(),
        d: None,
        d1: None,
        d2: None,
        d_effective: None,
        delta: None,
        aux_norm_log: None,
        index_measured: None,
        derived_orders: None,
        weil_table,
        exceptional_degree: None,
        a9: None,
        chain,
        outcome: Outcome::ChainSatisfied,
    };
    if let o @ Outcome::HypothesisViolation { .. } = outcome_from_chain(&cert.chain) {
        cert.outcome = o;
        return Ok(cert);
    }

    let e0 = choose_e0(theta1, theta2, n)?;
    let delta = &two + &e0;
    epsilons.e0 = Some(e0);
    let (d, d1, d2, d_eff) = select_degrees(theta1, theta2, &delta, h1.mid(), h2.mid(), cfg);
    let w = WeightSystem::new(theta1.clone(), theta2.clone(), d1, d2, delta.clone())?;
    let chain = &mut cert.chain;
    chain.push(ChainEntry::new(
        "degree_ratio",
        EntryKind::Info,
        RealValue::exact(d1 as f64 / d2 as f64),
        Relation::Lt,
        h2.div(&h1).into(),
    ));

    let opts = AuxOptions {
        a_const: cfg.a_const,
        epsilon: None,
        t_product: Some((t1 * t2).mid()),
        sup_samples: cfg.sup_samples,
    };
    let (f, report) = construct_auxiliary(&a1, &a2, &w, &opts)?;
    if let Some(target) = report.norm_target {
        chain.push(ChainEntry::new(
            "aux_norm",
            EntryKind::Info,
            RealValue::exact(report.sup_norm.log_upper),
            Relation::Le,
            RealValue::exact(target),
        ));
    }
    let (i1, i2, weight, _) = lowest_jet(&f, p1, p2, &w)?;
    let ds = derived_section_unchecked(&f, p1, p2, &w, cfg.sup_samples)?;
    let c1 = cfg.c1.unwrap_or(ds.c1);
    let big_l = ds.log_sup + (d1 + d2) as f64 * c1.ln();
    chain.push(ChainEntry::new(
        "index",
        EntryKind::Info,
        rat_f64(&weight).into(),
        Relation::Lt,
        rat_f64(&epsilons.e2).into(),
    ));
    chain.push(ChainEntry::new(
        "derived_weight",
        EntryKind::Info,
        rat_f64(&weight).into(),
        Relation::Le,
        rat_f64(&epsilons.e2).into(),
    ));

    let we = WeightSystem::new(theta1.clone(), theta2.clone(), d1, d2, &delta - &epsilons.e2)?;
    let audit = degreeofe_audit(p1, p2, &div1, &div2, &we, places)?;
    let mut witness_sum = Iv::zero();
    let mut c_total = 0.0;
    for e in &audit.entries {
        chain.push(ChainEntry::new(
            format!("exceptional[{}]", e.place),
            EntryKind::Derived,
            e.slack.into(),
            Relation::Ge,
            RealValue::exact(0.0),
        ));
        witness_sum = witness_sum + e.witness_term;
        c_total += e.c * (d1 + d2) as f64;
    }
    chain.push(ChainEntry::new(
        "exceptional_total",
        EntryKind::Derived,
        audit.total_degree.into(),
        Relation::Ge,
        (witness_sum - Iv::point(c_total)).into(),
    ));
    let m = h1.scale(d1 as f64).min(&h2.scale(d2 as f64));
    let level = rat_f64(&(&delta - &epsilons.e2));
    chain.push(ChainEntry::new(
        "hypothesis_lower",
        EntryKind::Derived,
        witness_sum.into(),
        Relation::Ge,
        (level * m).into(),
    ));
    let pb = pullback_degree(
        p1,
        p2,
        &PullbackSpec {
            d1,
            d2,
            omega: (i1, i2),
            include_e: Some(ESpec {
                divisor1: div1.clone(),
                divisor2: div2.clone(),
                weights: we.clone(),
            }),
        },
    )?;
    chain.push(ChainEntry::new(
        "pullback_lower",
        EntryKind::Derived,
        pb.into(),
        Relation::Ge,
        RealValue::exact(-big_l),
    ));
    let a3 = rat_f64(&cfg.a3);
    let upper = h1.scale(d1 as f64) + h2.scale(d2 as f64) + a3 * (h1.scale(i1 as f64) + h2.scale(i2 as f64))
        - level * m
        + Iv::point(c_total);
    chain.push(ChainEntry::new(
        "pullback_upper",
        EntryKind::Derived,
        pb.into(),
        Relation::Le,
        upper.into(),
    ));
    let t12 = t1 * t2;
    let a9 = Iv::point(big_l + c_total).div(&t12.scale((d1 + d2) as f64));
    let e3 = rat_f64(&epsilons.e3);
    chain.push(ChainEntry::new(
        "sandwich",
        EntryKind::Derived,
        RealValue::exact(-(big_l + c_total)),
        Relation::Le,
        (-(e3 * m)).into(),
    ));
    let bound = a9.scale(2.0).div(&e3) * t12;
    chain.push(ChainEntry::new(
        FINAL_BOUND,
        EntryKind::Info,
        h1.into(),
        Relation::Le,
        bound.into(),
    ));

    cert.epsilons = epsilons;
    cert.d = Some(d);
    cert.d1 = Some(d1);
    cert.d2 = Some(d2);
    cert.delta = Some(delta);
    cert.aux_norm_log = Some(RealValue::exact(report.sup_norm.log_upper));
    cert.index_measured = Some(weight);
    cert.derived_orders = Some((i1, i2));
    cert.exceptional_degree = Some(audit.total_degree.into());
    cert.a9 = Some(a9.into());
    cert.d_effective = Some(d_eff);
    cert.outcome = outcome_from_chain(&cert.chain);
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numbers::rat;

    fn pp(a: i64, b: i64) -> ProjPoint {
        ProjPoint::from_i64(a, b).unwrap()
    }

    fn w(t1: i64, t2: i64, d1: usize, d2: usize, delta: BigRational) -> WeightSystem {
        WeightSystem::new(rat(t1, 1), rat(t2, 1), d1, d2, delta).unwrap()
    }

    #[test]
    fn generators_of_staircases() {
        // theta = 1, d = 1, delta = 2: only (1,1) is at least 2.
        assert_eq!(generators(&w(1, 1, 1, 1, rat(2, 1))), vec![(1, 1)]);
        // i/2 + j/2 >= 1 on a 2x2 box: (0,2), (1,1), (2,0).
        let h = generators(&w(1, 1, 2, 2, rat(1, 1)));
        assert_eq!(h, vec![(0, 2), (1, 1), (2, 0)]);
        assert_eq!(vertex_generators(&h), vec![(0, 2), (2, 0)]);
    }

    #[test]
    fn exceptional_single_generator() {
        let d = DivisorData::from_i64(&[-2, 0, 1], 2).unwrap();
        let ws = w(1, 1, 1, 1, rat(2, 1));
        let e = exceptional_log_norm(&pp(7, 5), &pp(3, 2), &d, &d, &ws, Place::Archimedean).unwrap();
        let l1: Iv = weil_local(&d, Place::Archimedean, &pp(7, 5)).unwrap().value;
        let l2: Iv = weil_local(&d, Place::Archimedean, &pp(3, 2)).unwrap().value;
        assert!((e.value.mid() - (l1 + l2).mid()).abs() < 1e-12);
        assert_eq!(
            exceptional_log_norm(&pp(0, 1), &pp(3, 2), &DivisorData::from_i64(&[0, 1], 1).unwrap(), &d, &ws, Place::Archimedean),
            Err(Error::PointOnDivisor)
        );
    }

    #[test]
    fn exceptional_finite_min() {
        // D1 = a - 3b meets P1 = (10:1) at 7; D2 = a + b misses P2 = (1:1) at 7.
        let d1 = DivisorData::from_i64(&[-3, 1], 1).unwrap();
        let d2 = DivisorData::from_i64(&[1, 1], 1).unwrap();
        // Generators (0,2), (1,1), (2,0); only the first avoids ord_7 F1 = 1.
        let ws = w(1, 1, 2, 2, rat(1, 1));
        let e = exceptional_log_norm(&pp(10, 1), &pp(1, 1), &d1, &d2, &ws, Place::Finite(7)).unwrap();
        assert_eq!(e.witness, (0, 2));
        assert!(e.value.contains(0.0));
        // Swapped roles: the minimum moves to (2,0).
        let e = exceptional_log_norm(&pp(1, 1), &pp(10, 1), &d2, &d1, &ws, Place::Finite(7)).unwrap();
        assert_eq!(e.witness, (2, 0));
        assert!(e.value.contains(0.0));
        // Weight 2i + j on a 2x1 box with delta = 4 leaves H = {(2,0)}.
        let ws = WeightSystem::new(rat(4, 1), rat(1, 1), 2, 1, rat(4, 1)).unwrap();
        assert_eq!(generators(&ws), vec![(2, 0)]);
        let e = exceptional_log_norm(&pp(10, 1), &pp(1, 1), &d1, &d2, &ws, Place::Finite(7)).unwrap();
        assert_eq!(e.witness, (2, 0));
        assert!(e.value.contains(2.0 * 7f64.ln()));
    }

    #[test]
    fn archimedean_equal_terms() {
        // Symmetric data: every generator of i + j >= 2 on a 2x2 box has the
        // same term 2 lambda, so the value is 2 lambda - 1/2 log 3.
        let d = DivisorData::from_i64(&[-2, 0, 1], 2).unwrap();
        let ws = w(1, 1, 2, 2, rat(1, 1));
        let e = exceptional_log_norm(&pp(7, 5), &pp(7, 5), &d, &d, &ws, Place::Archimedean).unwrap();
        let l: Iv = weil_local(&d, Place::Archimedean, &pp(7, 5)).unwrap().value;
        let want = 2.0 * l.mid() - 0.5 * 3f64.ln();
        assert!((e.value.mid() - want).abs() < 1e-12);
        let a = degreeofe_audit(&pp(7, 5), &pp(7, 5), &d, &d, &ws, &[Place::Archimedean]).unwrap();
        assert!(a.entries[0].holds && a.entries[0].slack.contains(0.0));
    }

    #[test]
    fn derived_section_examples() {
        let f = BivariatePolynomial::from_terms(2, 2, &[(2, 0, 1), (1, 1, -2), (0, 2, 1)]);
        let ws = w(1, 1, 2, 2, rat(2, 1));
        let s = derived_section(&f, &pp(1, 1), &pp(1, 1), &ws, &rat(1, 1)).unwrap();
        assert_eq!((s.i1, s.i2), (0, 2));
        assert_eq!(s.value, rat(1, 1));
        let xy = BivariatePolynomial::from_terms(1, 1, &[(1, 1, 1)]);
        let s = derived_section(&xy, &pp(0, 1), &pp(0, 1), &ws, &rat(1, 1)).unwrap();
        assert_eq!((s.i1, s.i2, s.value.clone()), (1, 1, rat(1, 1)));
        assert_eq!(s.c1, 4.0);
        let s = derived_section(&xy, &pp(2, 1), &pp(3, 1), &ws, &rat(0, 1)).unwrap();
        assert_eq!((s.i1, s.i2, s.value), (0, 0, rat(6, 1)));
        assert!(matches!(
            derived_section(&xy, &pp(0, 1), &pp(0, 1), &ws, &rat(1, 2)),
            Err(Error::IndexTooLarge { .. })
        ));
    }

    #[test]
    fn local_cauchy_monomials() {
        let ws = w(1, 1, 2, 2, rat(1, 1));
        let f = BivariatePolynomial::from_terms(2, 2, &[(2, 0, 1)]);
        let r = verify_localcauchy(&f, &ws, 2000, 1).unwrap();
        assert_eq!(r.chart_ratios[1].0, (2, 0));
        assert!((r.chart_ratios[1].1 - 1.0).abs() < 1e-12);
        assert!((r.max_ratio - 1.0).abs() < 1e-12);
        assert_eq!(r.boundary_max_violations, 0);
        let g = BivariatePolynomial::from_terms(2, 2, &[(2, 0, 1), (0, 2, 1)]);
        let r = verify_localcauchy(&g, &ws, 2000, 1).unwrap();
        assert!(r.empirical_b <= 2f64.powf(0.25));
        let bad = BivariatePolynomial::from_terms(2, 2, &[(1, 0, 1)]);
        assert_eq!(verify_localcauchy(&bad, &ws, 10, 1), Err(Error::NotInIdeal));
    }

    #[test]
    fn cauchy_small() {
        let f = BivariatePolynomial::from_terms(2, 1, &[(0, 0, 3), (1, 1, -2), (2, 0, 1), (2, 1, 5)]);
        let r = cauchy_inequality_check(&f, &rat(1, 1), 10, 16, 3);
        assert_eq!(r.checks, 6 * 10);
        assert!(r.violations.is_empty(), "{r:?}");
        assert!(r.worst_ratio > 0.0 && r.worst_ratio <= 1.0);
    }

    #[test]
    fn pullback_examples() {
        let spec = PullbackSpec {
            d1: 3,
            d2: 2,
            omega: (0, 0),
            include_e: None,
        };
        let v = pullback_degree(&pp(7, 5), &pp(2, 1), &spec).unwrap();
        assert!(v.contains(1.5 * 74f64.ln() + 5f64.ln()));
        let spec = PullbackSpec {
            d1: 0,
            d2: 0,
            omega: (1, 0),
            include_e: None,
        };
        let v = pullback_degree(&pp(1, 1), &pp(2, 1), &spec).unwrap();
        assert!(v.contains(-(2f64.ln()) + C0));
    }

    #[test]
    fn certify_sqrt2_violation() {
        let a = AlgebraicSpec {
            minpoly: vec!["-2".into(), "0".into(), "1".into()],
            root: crate::numbers::sqrt2().distinguished,
        };
        let t = rat(21, 10);
        for p in [pp(17, 12), pp(1, 1)] {
            let c = certify_pair(
                &a,
                &a,
                &p,
                &p,
                &t,
                &t,
                &rat(1, 10),
                &[Place::Archimedean],
                &PhiWeights::archimedean_only(),
                &CertifyConfig::default(),
            )
            .unwrap();
            match &c.outcome {
                Outcome::HypothesisViolation { exact_ratio, ratio, .. } => {
                    assert_eq!(exact_ratio.as_deref(), Some("2"));
                    assert_eq!(ratio.value, 2.0);
                }
                o => panic!("{o:?}"),
            }
            assert_eq!(replay(&c), c.outcome);
        }
    }
}
