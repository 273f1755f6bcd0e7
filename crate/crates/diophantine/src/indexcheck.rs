//! Index locus analysis on `P^1 x P^1`: factorization into components,
//! the fiber multiplicity audit, heights of cycles, the zero-dimensional
//! multiplicity bound and an empirical harness for the index bound.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::auxpoly::{eval_at, fs_sup_norm, index_at, index_at_proj, jets, BivariatePolynomial, WeightSystem};
use crate::bifactor;
use crate::error::{Error, Result};
use crate::factor;
use crate::field::FieldPoint;
use crate::heights::{fs_height, orbit_height};
use crate::numbers::{algnum_from_minpoly, ProjPoint};
use crate::upoly::{self, ZPoly};
use crate::Iv;

/// Height of `P^1` for the Fubini-Study metric on `O(1)`.
pub const FS_LINE_HEIGHT: f64 = 0.5;
/// Specializations used when testing whether a curve lies in an index locus.
pub const LOCUS_SAMPLES: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Shape {
    /// `{c} x P^1`: the factor involves `x` only.
    Fiber1,
    /// `P^1 x {c}`.
    Fiber2,
    Curve,
    PointSupport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Component {
    /// Irreducible primitive factor; the constant 1 for a point.
    pub factor: BivariatePolynomial,
    pub multiplicity: usize,
    pub shape: Shape,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<(ProjPoint, ProjPoint)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub height: Option<Iv>,
}

impl Component {
    pub fn curve(factor: BivariatePolynomial, multiplicity: usize) -> Self {
        let factor = factor.trimmed();
        let shape = match factor.degrees() {
            Some((_, 0)) => Shape::Fiber1,
            Some((0, _)) => Shape::Fiber2,
            _ => Shape::Curve,
        };
        Self {
            factor,
            multiplicity,
            shape,
            point: None,
            height: None,
        }
    }

    pub fn point(p: ProjPoint, q: ProjPoint) -> Self {
        Self {
            factor: BivariatePolynomial::from_terms(0, 0, &[(0, 0, 1)]),
            multiplicity: 1,
            shape: Shape::PointSupport,
            point: Some((p, q)),
            height: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Factorization {
    /// Signed integer with `f = content * prod factor^mult`.
    #[serde(with = "crate::serde_util::bigint")]
    pub content: BigInt,
    pub components: Vec<Component>,
}

impl Factorization {
    pub fn expand(&self) -> BivariatePolynomial {
        let mut p = BivariatePolynomial::from_terms(0, 0, &[(0, 0, 1)]);
        p.coeffs[0][0] = self.content.clone();
        for c in &self.components {
            for _ in 0..c.multiplicity {
                p = p.mul(&c.factor);
            }
        }
        p
    }
}

/// Complete factorization over the rationals with multiplicities.
pub fn factor_components(f: &BivariatePolynomial) -> Result<Factorization> {
    let (content, fs) = bifactor::factor(f)?;
    Ok(Factorization {
        content,
        components: fs.into_iter().map(|(h, e)| Component::curve(h, e)).collect(),
    })
}

fn random_rational(rng: &mut ChaCha8Rng) -> BigRational {
    BigRational::new(BigInt::from(rng.gen_range(-60i64..=60)), BigInt::from(rng.gen_range(1i64..=17)))
}

fn specialize(h: &BivariatePolynomial, c: &BigRational, in_y: bool) -> ZPoly {
    let q: Vec<BigRational> = if in_y {
        h.coeffs
            .iter()
            .map(|r| r.iter().rev().fold(BigRational::zero(), |acc, a| acc * c + BigRational::from_integer(a.clone())))
            .collect()
    } else {
        (0..=h.d2)
            .map(|j| {
                h.coeffs
                    .iter()
                    .rev()
                    .fold(BigRational::zero(), |acc, r| acc * c + BigRational::from_integer(r[j].clone()))
            })
            .collect()
    };
    upoly::clear_q(&q)
}

/// Smooth points of the curve `h = 0`, found by specializing one coordinate
/// to random rationals and taking a root of the resulting polynomial.
fn sample_points(h: &BivariatePolynomial, rng: &mut ChaCha8Rng, count: usize) -> Result<Vec<FieldPoint>> {
    let h = h.trimmed();
    let (dx, dy) = h.degrees().ok_or(Error::ZeroPolynomial)?;
    let in_y = dx > 0;
    let want = if in_y { dx } else { dy };
    let mut out = vec![];
    for _ in 0..40 * count {
        if out.len() == count {
            break;
        }
        let c = random_rational(rng);
        let u = specialize(&h, &c, in_y);
        if upoly::degree(&u) != Some(want) || !upoly::is_squarefree(&u) {
            continue;
        }
        let (_, fs) = factor::factor(&u);
        let root = algnum_from_minpoly(&fs[0].0, 0)?;
        let cn = crate::numbers::AlgebraicNumber::rational(&c);
        out.push(if in_y {
            FieldPoint::from_pair(&root, &cn)?
        } else {
            FieldPoint::from_pair(&cn, &root)?
        });
    }
    if out.is_empty() {
        return Err(Error::InvalidInput("no smooth specialization found".into()));
    }
    Ok(out)
}

/// Index of `f` at a generic point of the curve `h = 0`, estimated as the
/// minimum over sampled smooth points.
pub fn generic_index(f: &BivariatePolynomial, h: &BivariatePolynomial, w: &WeightSystem, rng: &mut ChaCha8Rng) -> Result<BigRational> {
    let mut best: Option<BigRational> = None;
    for p in sample_points(h, rng, LOCUS_SAMPLES)? {
        let i = index_at(f, &p, w)?;
        if best.as_ref().map_or(true, |b| i < *b) {
            best = Some(i);
        }
    }
    Ok(best.unwrap())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditEntry {
    pub factor: BivariatePolynomial,
    pub mult: usize,
    pub shape: Shape,
    #[serde(with = "crate::serde_util::rational")]
    pub generic_index: BigRational,
    pub exempt: bool,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub height: Option<Iv>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    #[serde(with = "crate::serde_util::rational")]
    pub epsilon: BigRational,
    /// `eps d1 / theta1`.
    #[serde(with = "crate::serde_util::rational")]
    pub multiplicity: BigRational,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub components: Vec<AuditEntry>,
    pub thresholds: Thresholds,
    pub seeds: Vec<u64>,
    pub caveat: String,
}

impl AuditReport {
    pub fn all_pass(&self) -> bool {
        self.components.iter().all(|c| c.pass)
    }
}

/// Lists the components of `div f` lying in the locus of index at least
/// `eps` and checks non-fiber ones against `m >= eps d1 / theta1`.
pub fn fiber_multiplicity_audit(f: &BivariatePolynomial, w: &WeightSystem, eps: &BigRational, seed: u64) -> Result<AuditReport> {
    let fac = factor_components(f)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let threshold = eps * BigRational::from_integer(BigInt::from(w.d1)) / &w.theta1;
    let mut entries = vec![];
    for c in fac.components {
        let gi = generic_index(f, &c.factor, w, &mut rng)?;
        if gi < *eps {
            continue;
        }
        let exempt = matches!(c.shape, Shape::Fiber1 | Shape::Fiber2);
        let pass = exempt || BigRational::from_integer(BigInt::from(c.multiplicity)) >= threshold;
        entries.push(AuditEntry {
            factor: c.factor,
            mult: c.multiplicity,
            shape: c.shape,
            generic_index: gi,
            exempt,
            pass,
            height: None,
        });
    }
    Ok(AuditReport {
        components: entries,
        thresholds: Thresholds {
            epsilon: eps.clone(),
            multiplicity: threshold,
        },
        seeds: vec![seed],
        caveat: format!("locus membership tested at {LOCUS_SAMPLES} random specializations per component"),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HeightMethod {
    Product,
    Quadrature,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CycleHeight {
    pub value: Iv,
    /// Three standard errors of the Monte Carlo mean; zero for closed forms.
    pub quadrature_error: f64,
    pub method: HeightMethod,
    pub samples: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureOptions {
    pub samples: usize,
    pub seed: u64,
    pub tolerance: Option<f64>,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self {
            samples: 200_000,
            seed: 1,
            tolerance: None,
        }
    }
}

/// `h(Z1 x Z2)` for cycles of dimensions `e1, e2` with the given heights and
/// degrees on the two factors.
pub fn product_height(e1: usize, h1: Iv, deg1: f64, e2: usize, h2: Iv, deg2: f64) -> Iv {
    let fact = |n: usize| (1..=n).map(|k| k as f64).product::<f64>();
    let top = fact(e1 + e2 + 1);
    let a = top / (fact(e1 + 1) * fact(e2));
    let b = top / (fact(e1) * fact(e2 + 1));
    h1.scale(a * deg2) + h2.scale(b * deg1)
}

/// Uniform point on the unit sphere of `C^2` modulo phase, i.e. a
/// Fubini-Study distributed point of `P^1(C)`: `(cos t/2, sin t/2 e^(i phi))`.
fn fs_sample(rng: &mut ChaCha8Rng) -> (f64, num_complex::Complex64) {
    let z: f64 = rng.gen_range(-1.0..1.0);
    let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    (((1.0 + z) / 2.0).sqrt(), num_complex::Complex64::from_polar(((1.0 - z) / 2.0).sqrt(), phi))
}

fn mean_and_error(mut sample: impl FnMut() -> f64, n: usize) -> (f64, f64) {
    let mut sum = 0.0;
    let mut sq = 0.0;
    for _ in 0..n {
        let v = sample();
        sum += v;
        sq += v * v;
    }
    let mean = sum / n as f64;
    let var = (sq / n as f64 - mean * mean).max(0.0);
    (mean, 3.0 * (var / n as f64).sqrt())
}

/// `-integral log ||x||_FS` over `P^1` by Monte Carlo; the exact value is
/// [`FS_LINE_HEIGHT`].
pub fn line_height_quadrature(opts: &QuadratureOptions) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let (m, e) = mean_and_error(
        || {
            let (_, x1) = fs_sample(&mut rng);
            x1.norm().ln()
        },
        opts.samples,
    );
    (-m, e)
}

/// Height of `div g` under `O(d1, d2)`: the height of `P^1 x P^1` for the
/// mixed product with `O(deg_x g, deg_y g)`, plus the integral of
/// `log ||g||` against `c1(O(d1, d2))^2`.
pub fn height_by_quadrature(g: &BivariatePolynomial, d1: usize, d2: usize, opts: &QuadratureOptions) -> Result<CycleHeight> {
    let g = g.trimmed();
    let (a, b) = g.degrees().ok_or(Error::ZeroPolynomial)?;
    let g = g.primitive_part();
    let (d1f, d2f) = (d1 as f64, d2 as f64);
    let mixed = FS_LINE_HEIGHT * (a as f64 * (2.0 * d1f * d2f + d2f * d2f) + b as f64 * (d1f * d1f + 2.0 * d1f * d2f));
    let coeffs: Vec<Vec<f64>> = g.coeffs.iter().map(|r| r.iter().map(|c| c.to_f64().unwrap()).collect()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let (m, e) = mean_and_error(
        || {
            let (x0, x1) = fs_sample(&mut rng);
            let (y0, y1) = fs_sample(&mut rng);
            let mut acc = num_complex::Complex64::new(0.0, 0.0);
            for (i, r) in coeffs.iter().enumerate() {
                let px = x1.powu(i as u32) * x0.powi((a - i) as i32);
                for (j, c) in r.iter().enumerate() {
                    if *c != 0.0 {
                        acc += px * y1.powu(j as u32) * y0.powi((b - j) as i32) * *c;
                    }
                }
            }
            acc.norm().ln()
        },
        opts.samples,
    );
    let scale = 2.0 * d1f * d2f;
    let (value, err) = (mixed + scale * m, scale * e);
    if let Some(t) = opts.tolerance {
        if err > t {
            return Err(Error::QuadratureBudgetExceeded { achieved: err, requested: t });
        }
    }
    Ok(CycleHeight {
        value: Iv::new(value - err, value + err),
        quadrature_error: err,
        method: HeightMethod::Quadrature,
        samples: opts.samples,
    })
}

/// Height of a component under `O(d1, d2)`: closed product form for points
/// and fibers, quadrature for other curves.
pub fn height_of_cycle(c: &Component, d1: usize, d2: usize, opts: &QuadratureOptions) -> Result<CycleHeight> {
    let (d1f, d2f) = (d1 as f64, d2 as f64);
    let line = Iv::point(FS_LINE_HEIGHT);
    let closed = |value: Iv| CycleHeight {
        value,
        quadrature_error: 0.0,
        method: HeightMethod::Product,
        samples: 0,
    };
    match c.shape {
        Shape::PointSupport => {
            let (p, q) = c.point.as_ref().ok_or_else(|| Error::InvalidInput("point component without a point".into()))?;
            let h = fs_height::<f64>(p).scale(d1f) + fs_height::<f64>(q).scale(d2f);
            Ok(closed(h))
        }
        Shape::Fiber1 | Shape::Fiber2 => {
            let first = c.shape == Shape::Fiber1;
            let g = c.factor.trimmed();
            let uni: ZPoly = if first {
                g.coeffs.iter().map(|r| r[0].clone()).collect()
            } else {
                g.coeffs[0].clone()
            };
            let k = upoly::degree(&uni).unwrap() as f64;
            let (dp, dl) = if first { (d1f, d2f) } else { (d2f, d1f) };
            // Zero-dimensional part: degree k, height dp k h(orbit).
            let hz = orbit_height(&uni)?.scale(dp * k);
            let hl = line.scale(dl * dl);
            let h = if first {
                product_height(0, hz, k, 1, hl, dl)
            } else {
                product_height(1, hl, dl, 0, hz, k)
            };
            Ok(closed(h))
        }
        Shape::Curve => height_by_quadrature(&c.factor, d1, d2, opts),
    }
}

/// Empirical constant `S` making `m h(Z) <= S log C d1 d2 (d1 + d2)` hold
/// for every listed component.
pub fn bezout_s_estimate(components: &[(usize, f64)], log_c: f64, d1: usize, d2: usize) -> f64 {
    let denom = log_c * (d1 * d2 * (d1 + d2)) as f64;
    components.iter().map(|&(m, h)| m as f64 * h / denom).fold(0.0, f64::max)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroDimBound {
    #[serde(with = "crate::serde_util::rational")]
    pub index: BigRational,
    /// `(1/(theta1 theta2)) (eps/4)^2 d1 d2`, or zero when the point is not
    /// in the locus.
    #[serde(with = "crate::serde_util::rational")]
    pub multiplicity_lower: BigRational,
    /// Exponents `eps d_i / (4 theta_i)` of the containing monomial ideal.
    #[serde(with = "crate::serde_util::rational")]
    pub e1: BigRational,
    #[serde(with = "crate::serde_util::rational")]
    pub e2: BigRational,
    /// Every nonzero jet `(i, j)` has `i >= e1` or `j >= e2`.
    pub contained: bool,
}

pub fn zero_dim_mult_bound(f: &BivariatePolynomial, p: &FieldPoint, w: &WeightSystem, eps: &BigRational, seed: u64) -> Result<ZeroDimBound> {
    let four = BigRational::from_integer(BigInt::from(4));
    let d1 = BigRational::from_integer(BigInt::from(w.d1));
    let d2 = BigRational::from_integer(BigInt::from(w.d2));
    let e1 = eps * &d1 / (&four * &w.theta1);
    let e2 = eps * &d2 / (&four * &w.theta2);
    let index = index_at(f, p, w)?;
    let half = eps / BigRational::from_integer(BigInt::from(2));
    if index < half {
        return Ok(ZeroDimBound {
            index,
            multiplicity_lower: BigRational::zero(),
            e1,
            e2,
            contained: false,
        });
    }
    let fac = factor_components(f)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for c in &fac.components {
        if eval_at(&c.factor, p).is_zero() && generic_index(f, &c.factor, w, &mut rng)? >= half {
            return Err(Error::NotIsolated);
        }
    }
    let table = jets(f, p);
    let mut contained = true;
    for (i, r) in table.iter().enumerate() {
        for (j, e) in r.iter().enumerate() {
            let iq = BigRational::from_integer(BigInt::from(i));
            let jq = BigRational::from_integer(BigInt::from(j));
            if !e.is_zero() && iq < e1 && jq < e2 {
                contained = false;
            }
        }
    }
    let q = eps / &four;
    Ok(ZeroDimBound {
        index,
        multiplicity_lower: &q * &q * d1 * d2 / (&w.theta1 * &w.theta2),
        e1,
        e2,
        contained,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndexTheoremReport {
    pub log_sup_sampled: f64,
    pub log_sup_upper: f64,
    /// `(d1 + d2) log C`.
    pub log_sup_target: f64,
    pub norm_hypothesis: bool,
    pub degree_ratio: f64,
    pub height_ratio: f64,
    pub height_hypothesis: bool,
    #[serde(with = "crate::serde_util::rational")]
    pub index: BigRational,
    #[serde(with = "crate::serde_util::rational")]
    pub epsilon: BigRational,
    pub conclusion: bool,
    pub violated: Vec<String>,
}

/// Measures the hypotheses and the conclusion `ind <= eps` on one instance.
/// Nothing is asserted about their relation: the constants involved are
/// not effective.
pub fn verify_index_theorem_instance(
    f: &BivariatePolynomial,
    p1: &ProjPoint,
    p2: &ProjPoint,
    w: &WeightSystem,
    eps: &BigRational,
    c: f64,
    sup_samples: usize,
) -> Result<IndexTheoremReport> {
    let sup = fs_sup_norm(f, sup_samples);
    let log_sup_target = (w.d1 + w.d2) as f64 * c.ln();
    let h1 = fs_height::<f64>(p1).mid();
    let h2 = fs_height::<f64>(p2).mid();
    let degree_ratio = w.d1 as f64 / w.d2 as f64;
    let height_ratio = if h1 > 0.0 { h2 / h1 } else { f64::INFINITY };
    let index = index_at_proj(f, p1, p2, w)?;
    let norm_hypothesis = sup.log_upper <= log_sup_target;
    let height_hypothesis = height_ratio >= degree_ratio;
    let mut violated = vec![];
    if !norm_hypothesis {
        violated.push("sup norm exceeds C^(d1+d2)".to_string());
    }
    if !height_hypothesis {
        violated.push("h2/h1 below d1/d2".to_string());
    }
    Ok(IndexTheoremReport {
        log_sup_sampled: sup.log_sampled,
        log_sup_upper: sup.log_upper,
        log_sup_target,
        norm_hypothesis,
        degree_ratio,
        height_ratio,
        height_hypothesis,
        conclusion: index <= *eps,
        index,
        epsilon: eps.clone(),
        violated,
    })
}
