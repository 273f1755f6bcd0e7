//! Hermitian lattices over Z: degrees, slopes, twists, short kernel vectors
//! by exact reduction, and the explicit Siegel bound used to audit them.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::{Interval, Real};
use crate::linalg;
use crate::Iv;

/// Reduction parameter of the basis reduction, as a fraction.
pub const LLL_DELTA: (i64, i64) = (99, 100);

/// Kernels of rank at most this are searched exhaustively after reduction.
pub const EXHAUSTIVE_RANK: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegerMatrix {
    pub rows: usize,
    pub cols: usize,
    #[serde(with = "matrix_serde")]
    pub entries: Vec<Vec<BigInt>>,
}

mod matrix_serde {
    use super::*;
    use serde::de::Error as _;

    pub fn serialize<S: serde::Serializer>(m: &[Vec<BigInt>], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(m.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()))
    }

    pub fn deserialize<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Vec<Vec<BigInt>>, D::Error> {
        let raw = Vec::<Vec<String>>::deserialize(d)?;
        raw.iter()
            .map(|r| r.iter().map(|x| x.trim().parse().map_err(D::Error::custom)).collect())
            .collect()
    }
}

impl IntegerMatrix {
    pub fn new(entries: Vec<Vec<BigInt>>, cols: usize) -> Result<Self> {
        if entries.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidInput("ragged matrix".into()));
        }
        Ok(Self {
            rows: entries.len(),
            cols,
            entries,
        })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let e = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        Self::new(e, cols).expect("rectangular")
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![vec![BigInt::zero(); cols]; rows],
        }
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        linalg::mat_vec(&self.entries, v)
    }

    pub fn annihilates(&self, v: &[BigInt]) -> bool {
        v.len() == self.cols && self.mul_vec(v).iter().all(|x| x.is_zero())
    }

    /// `log` of the Frobenius norm, an upper bound for the operator norm.
    pub fn log_frobenius(&self) -> Iv {
        let s: BigInt = self.entries.iter().flatten().map(|x| x * x).sum();
        if s.is_zero() {
            return Iv::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        }
        Iv::ln_bigint(&s).scale(0.5)
    }

    /// `log` of the largest Euclidean row norm.
    pub fn log_max_row(&self) -> Iv {
        let s = self
            .entries
            .iter()
            .map(|r| r.iter().map(|x| x * x).sum::<BigInt>())
            .max()
            .unwrap_or_default();
        if s.is_zero() {
            return Iv::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        }
        Iv::ln_bigint(&s).scale(0.5)
    }
}

/// `Z^rank` with the metric `exp(-2 twist) * gram`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HermitianLattice {
    pub rank: usize,
    #[serde(with = "rational_matrix_serde")]
    pub gram: Vec<Vec<BigRational>>,
    /// Accumulated twist parameter; the metric is scaled by `exp(-2 twist)`.
    #[serde(default)]
    pub twist: f64,
}

mod rational_matrix_serde {
    use super::*;
    use crate::numbers::parse_rational;
    use serde::de::Error as _;

    pub fn serialize<S: serde::Serializer>(m: &[Vec<BigRational>], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(m.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()))
    }

    pub fn deserialize<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Vec<Vec<BigRational>>, D::Error> {
        let raw = Vec::<Vec<String>>::deserialize(d)?;
        raw.iter()
            .map(|r| r.iter().map(|x| parse_rational(x).map_err(D::Error::custom)).collect())
            .collect()
    }
}

/// Leading principal minors of a rational symmetric matrix.
fn leading_minors(g: &[Vec<BigRational>]) -> Vec<BigRational> {
    let n = g.len();
    let mut a = g.to_vec();
    let mut out = vec![];
    let mut det = BigRational::one();
    for k in 0..n {
        let p = a[k][k].clone();
        det *= &p;
        out.push(det.clone());
        if p.is_zero() {
            // Later minors are not needed once one vanishes.
            out.resize(n, BigRational::zero());
            return out;
        }
        for i in k + 1..n {
            let f = &a[i][k] / &p;
            if f.is_zero() {
                continue;
            }
            for j in k..n {
                let t = &f * &a[k][j];
                a[i][j] -= t;
            }
        }
    }
    out
}

impl HermitianLattice {
    pub fn new(gram: Vec<Vec<BigRational>>) -> Result<Self> {
        let rank = gram.len();
        if rank == 0 || gram.iter().any(|r| r.len() != rank) {
            return Err(Error::InvalidInput("gram must be square and nonempty".into()));
        }
        for i in 0..rank {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::InvalidInput("gram is not symmetric".into()));
                }
            }
        }
        if leading_minors(&gram).iter().any(|m| !m.is_positive()) {
            return Err(Error::SingularGram);
        }
        Ok(Self { rank, gram, twist: 0.0 })
    }

    pub fn standard(rank: usize) -> Self {
        let gram = (0..rank)
            .map(|i| (0..rank).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
            .collect();
        Self { rank, gram, twist: 0.0 }
    }

    pub fn diagonal(d: &[BigRational]) -> Result<Self> {
        let n = d.len();
        Self::new(
            (0..n)
                .map(|i| (0..n).map(|j| if i == j { d[i].clone() } else { BigRational::zero() }).collect())
                .collect(),
        )
    }

    pub fn det(&self) -> BigRational {
        leading_minors(&self.gram).pop().unwrap()
    }

    /// Enclosure of the effective metric entries `exp(-2 twist) gram[i][j]`.
    pub fn effective_gram(&self) -> Vec<Vec<Iv>> {
        let f = Iv::point(-2.0 * self.twist).exp();
        self.gram
            .iter()
            .map(|r| r.iter().map(|x| Iv::from_rational(x) * f).collect())
            .collect()
    }

    /// Orthogonal direct sum.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.twist != other.twist {
            return Err(Error::InvalidInput("direct sum of lattices with different twists".into()));
        }
        let n = self.rank + other.rank;
        let mut g = vec![vec![BigRational::zero(); n]; n];
        for i in 0..self.rank {
            for j in 0..self.rank {
                g[i][j] = self.gram[i][j].clone();
            }
        }
        for i in 0..other.rank {
            for j in 0..other.rank {
                g[self.rank + i][self.rank + j] = other.gram[i][j].clone();
            }
        }
        Ok(Self {
            rank: n,
            gram: g,
            twist: self.twist,
        })
    }
}

/// `-1/2 log det(gram) + rank * twist`.
pub fn arakelov_degree_in<T: Real>(l: &HermitianLattice) -> Result<Interval<T>> {
    let det = l.det();
    if !det.is_positive() {
        return Err(Error::SingularGram);
    }
    let base = Interval::<T>::ln_rational(&det).scale(-0.5);
    Ok(base + Interval::<T>::from_f64_ulps(l.twist * l.rank as f64, 1.0))
}

pub fn arakelov_degree(l: &HermitianLattice) -> Result<Iv> {
    arakelov_degree_in(l)
}

pub fn slope(l: &HermitianLattice) -> Result<Iv> {
    Ok(arakelov_degree(l)?.scale(1.0 / l.rank as f64))
}

/// Upper bound on the maximal slope from the degrees of filtration pieces.
pub fn slope_max_upper_from_filtration(piece_degrees: &[Iv]) -> Result<Iv> {
    let mut it = piece_degrees.iter();
    let first = *it.next().ok_or_else(|| Error::InvalidInput("no filtration pieces".into()))?;
    Ok(it.fold(first, |m, x| m.max(x)))
}

/// Metric scaled by `exp(-2 lambda)`.
pub fn twist(l: &HermitianLattice, lambda: f64) -> HermitianLattice {
    HermitianLattice {
        rank: l.rank,
        gram: l.gram.clone(),
        twist: l.twist + lambda,
    }
}

/// Source metric for kernel searches.
#[derive(Clone, Debug, PartialEq)]
pub enum Metric {
    Euclidean,
    Gram(Vec<Vec<BigRational>>),
}

impl Metric {
    /// Integer-scaled inner product (the scale is common to all pairs).
    fn inner(&self, scaled: &Option<Vec<Vec<BigInt>>>, x: &[BigInt], y: &[BigInt]) -> BigInt {
        match scaled {
            None => x.iter().zip(y).filter(|(a, b)| !a.is_zero() && !b.is_zero()).map(|(a, b)| a * b).sum(),
            Some(g) => {
                let mut s = BigInt::zero();
                for (i, xi) in x.iter().enumerate() {
                    if xi.is_zero() {
                        continue;
                    }
                    for (j, yj) in y.iter().enumerate() {
                        if !yj.is_zero() {
                            s += xi * &g[i][j] * yj;
                        }
                    }
                }
                s
            }
        }
    }

    fn scaled(&self) -> (Option<Vec<Vec<BigInt>>>, BigInt) {
        match self {
            Metric::Euclidean => (None, BigInt::one()),
            Metric::Gram(g) => {
                let den = g.iter().flatten().fold(BigInt::one(), |d, x| d.lcm(x.denom()));
                let s = g
                    .iter()
                    .map(|r| r.iter().map(|x| (x * BigRational::from_integer(den.clone())).to_integer()).collect())
                    .collect();
                (Some(s), den)
            }
        }
    }

    /// Squared norm `x^T G x` as an exact rational.
    pub fn norm_sq(&self, x: &[BigInt]) -> BigRational {
        let (s, den) = self.scaled();
        BigRational::new(self.inner(&s, x, x), den)
    }
}

/// Result of integral basis reduction: `transform * basis` is reduced.
pub struct Reduced {
    pub transform: Vec<Vec<BigInt>>,
    pub gram: Vec<Vec<BigInt>>,
}

fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    // Nearest integer to a/b for b > 0.
    (a * BigInt::from(2) + b).div_floor(&(b * BigInt::from(2)))
}

/// Integral LLL on a positive-definite integer Gram matrix, tracking the
/// unimodular transform. All arithmetic is exact.
pub fn lll_gram(g: &[Vec<BigInt>]) -> Result<Reduced> {
    let n = g.len();
    let (dn, dd) = (BigInt::from(LLL_DELTA.0), BigInt::from(LLL_DELTA.1));
    let mut h: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    if n == 0 {
        return Ok(Reduced { transform: h, gram: vec![] });
    }
    // d[i] is the Gram determinant of the first i vectors; lam[k][j] = d[j+1] mu[k][j].
    let mut d = vec![BigInt::zero(); n + 1];
    d[0] = BigInt::one();
    let mut lam = vec![vec![BigInt::zero(); n]; n];
    // Current Gram entries are recomputed from h on demand.
    let cur = |h: &Vec<Vec<BigInt>>, i: usize, j: usize| -> BigInt {
        let mut s = BigInt::zero();
        for (a, ha) in h[i].iter().enumerate() {
            if ha.is_zero() {
                continue;
            }
            for (b, hb) in h[j].iter().enumerate() {
                if !hb.is_zero() {
                    s += ha * &g[a][b] * hb;
                }
            }
        }
        s
    };
    let mut kmax = 0usize;
    d[1] = g[0][0].clone();
    if !d[1].is_positive() {
        return Err(Error::SingularGram);
    }
    let mut k = 1usize;
    while k < n {
        if k > kmax {
            kmax = k;
            for j in 0..=k {
                let mut u = cur(&h, k, j);
                for i in 0..j {
                    u = (&d[i + 1] * &u - &lam[k][i] * &lam[j][i]) / &d[i];
                }
                if j < k {
                    lam[k][j] = u;
                } else {
                    if !u.is_positive() {
                        return Err(Error::SingularGram);
                    }
                    d[k + 1] = u;
                }
            }
        }
        redi(&mut h, &mut lam, &d, k, k - 1);
        // Lovasz: dd (d_{k+1} d_{k-1} + lam^2) >= dn d_k^2 in shifted indices.
        let l = &lam[k][k - 1];
        let lhs = &dd * (&d[k + 1] * &d[k - 1] + l * l);
        let rhs = &dn * &d[k] * &d[k];
        if lhs < rhs {
            swapi(&mut h, &mut lam, &mut d, k, kmax);
            k = k.saturating_sub(1).max(1);
        } else {
            for l in (0..k - 1).rev() {
                redi(&mut h, &mut lam, &d, k, l);
            }
            k += 1;
        }
    }
    let gram = (0..n).map(|i| (0..n).map(|j| cur(&h, i, j)).collect()).collect();
    Ok(Reduced { transform: h, gram })
}

fn redi(h: &mut [Vec<BigInt>], lam: &mut [Vec<BigInt>], d: &[BigInt], k: usize, l: usize) {
    let dl = &d[l + 1];
    if (&lam[k][l] * BigInt::from(2)).abs() <= *dl {
        return;
    }
    let q = round_div(&lam[k][l], dl);
    let hl = h[l].clone();
    for (x, y) in h[k].iter_mut().zip(&hl) {
        *x -= &q * y;
    }
    lam[k][l] -= &q * dl;
    for i in 0..l {
        let t = &q * &lam[l][i];
        lam[k][i] -= t;
    }
}

fn swapi(h: &mut [Vec<BigInt>], lam: &mut [Vec<BigInt>], d: &mut [BigInt], k: usize, kmax: usize) {
    h.swap(k, k - 1);
    for j in 0..k - 1 {
        let t = lam[k][j].clone();
        lam[k][j] = std::mem::replace(&mut lam[k - 1][j], t);
    }
    let l = lam[k][k - 1].clone();
    let b = (&d[k - 1] * &d[k + 1] + &l * &l) / &d[k];
    for i in k + 1..=kmax {
        let t = lam[i][k].clone();
        lam[i][k] = (&d[k + 1] * &lam[i][k - 1] - &l * &t) / &d[k];
        lam[i][k - 1] = (&b * &t + &l * &lam[i][k]) / &d[k + 1];
    }
    d[k] = b;
}

/// Normalizes the sign so the first nonzero entry is positive.
pub fn positive_leading(v: &[BigInt]) -> Vec<BigInt> {
    match v.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => v.iter().map(|y| -y).collect(),
        _ => v.to_vec(),
    }
}

/// Deterministic choice among candidates of equal minimal norm:
/// lexicographically smallest after sign normalization.
fn pick(cands: Vec<(BigInt, Vec<BigInt>)>) -> Vec<BigInt> {
    let min = cands.iter().map(|(n, _)| n.clone()).min().expect("nonempty");
    cands
        .into_iter()
        .filter(|(n, _)| *n == min)
        .map(|(_, v)| positive_leading(&v))
        .min()
        .unwrap()
}

/// All integer combinations `c` with `c^T G c <= bound` (G integer,
/// positive definite), by Fincke-Pohst with an f64 radius padded for
/// rounding and exact filtering afterwards.
fn enumerate_short(g: &[Vec<BigInt>], bound: &BigInt) -> Vec<Vec<i64>> {
    let n = g.len();
    let gf: Vec<Vec<f64>> = g.iter().map(|r| r.iter().map(|x| x.to_f64().unwrap()).collect()).collect();
    // Cholesky-style quadratic form q[i][i], q[i][j] (Fincke-Pohst).
    let mut q = gf.clone();
    for i in 0..n {
        for j in i + 1..n {
            q[j][i] = q[i][j];
            q[i][j] /= q[i][i];
        }
        for k in i + 1..n {
            for l in k..n {
                q[k][l] -= q[k][i] * q[i][l];
            }
        }
    }
    let radius = bound.to_f64().unwrap() * (1.0 + 1e-9) + 1e-9;
    let mut out = vec![];
    let mut x = vec![0i64; n];
    fn rec(i: usize, q: &[Vec<f64>], rem: f64, x: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        let n = q.len();
        let center: f64 = -(i + 1..n).map(|j| q[i][j] * x[j] as f64).sum::<f64>();
        let span = (rem / q[i][i]).max(0.0).sqrt() + 1e-9;
        let lo = (center - span).ceil() as i64;
        let hi = (center + span).floor() as i64;
        for v in lo..=hi {
            x[i] = v;
            let t = v as f64 - center;
            let r = rem - q[i][i] * t * t;
            if r < -1e-9 * (1.0 + rem.abs()) {
                continue;
            }
            if i == 0 {
                out.push(x.clone());
            } else {
                rec(i - 1, q, r, x, out);
            }
        }
        x[i] = 0;
    }
    rec(n - 1, &q, radius, &mut x, &mut out);
    out.retain(|c| c.iter().any(|&v| v != 0));
    out
}

/// Shortest nonzero kernel vector found by exact kernel computation,
/// saturation, basis reduction and, for small ranks, exhaustive search.
pub fn small_kernel_vector(m: &IntegerMatrix, metric: &Metric) -> Result<Vec<BigInt>> {
    let basis = kernel_lattice_basis(m)?;
    shortest_in_lattice(&basis, metric)
}

/// Z-basis of `ker M ∩ Z^cols`.
pub fn kernel_lattice_basis(m: &IntegerMatrix) -> Result<Vec<Vec<BigInt>>> {
    let k = linalg::kernel(&m.entries, m.cols)?;
    if k.dim() == 0 {
        return Err(Error::TrivialKernel);
    }
    Ok(linalg::saturated_kernel_basis(&k))
}

/// Shortest vector of the lattice spanned by `basis` (exact for rank at most
/// [`EXHAUSTIVE_RANK`], otherwise the shortest reduced basis vector).
pub fn shortest_in_lattice(basis: &[Vec<BigInt>], metric: &Metric) -> Result<Vec<BigInt>> {
    let (sg, _) = metric.scaled();
    let r = basis.len();
    let g: Vec<Vec<BigInt>> = (0..r)
        .map(|i| (0..r).map(|j| metric.inner(&sg, &basis[i], &basis[j])).collect())
        .collect();
    let red = lll_gram(&g)?;
    let apply = |c: &[BigInt]| -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); basis[0].len()];
        for (ci, b) in c.iter().zip(basis) {
            if ci.is_zero() {
                continue;
            }
            for (x, y) in v.iter_mut().zip(b) {
                *x += ci * y;
            }
        }
        v
    };
    let reduced: Vec<Vec<BigInt>> = red.transform.iter().map(|c| apply(c)).collect();
    let mut cands: Vec<(BigInt, Vec<BigInt>)> = (0..r).map(|i| (red.gram[i][i].clone(), reduced[i].clone())).collect();
    if r <= EXHAUSTIVE_RANK {
        let best = cands.iter().map(|(n, _)| n.clone()).min().unwrap();
        for c in enumerate_short(&red.gram, &best) {
            let cb: Vec<BigInt> = c.iter().map(|&x| BigInt::from(x)).collect();
            let v = {
                let mut v = vec![BigInt::zero(); basis[0].len()];
                for (ci, b) in cb.iter().zip(&reduced) {
                    for (x, y) in v.iter_mut().zip(b) {
                        *x += ci * y;
                    }
                }
                v
            };
            cands.push((metric.inner(&sg, &v, &v), v));
        }
    }
    Ok(pick(cands))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SiegelParams {
    pub m: usize,
    pub n: usize,
    /// `log C`, kept in log form because `C` can be astronomically large.
    pub log_c: f64,
    pub mu_max_w: f64,
    pub chi: f64,
}

impl SiegelParams {
    /// `m` = source rank, `n` = kernel rank, `C` = max(1, max row norm,
    /// Frobenius norm), the standard target lattice (`mu_max = 0`) and `chi = 0`.
    pub fn from_matrix(mat: &IntegerMatrix, kernel_rank: usize) -> Self {
        let log_c = mat.log_frobenius().hi.max(mat.log_max_row().hi).max(0.0);
        Self {
            m: mat.cols,
            n: kernel_rank,
            log_c,
            mu_max_w: 0.0,
            chi: 0.0,
        }
    }
}

/// `(m/n) log C^2 + (m/n - 1) mu_max(W) - chi + 3 log n`.
pub fn siegel_bound_log(p: &SiegelParams) -> Result<Iv> {
    if p.n == 0 || p.m < p.n {
        return Err(Error::InvalidInput("need m >= n >= 1".into()));
    }
    let r = p.m as f64 / p.n as f64;
    let t1 = Iv::from_f64_ulps(p.log_c, 1.0).scale(2.0).scale(r);
    let t2 = Iv::from_f64_ulps(p.mu_max_w, 1.0).scale(r - 1.0);
    let t3 = Iv::ln_bigint(&BigInt::from(p.n)).scale(3.0);
    Ok(t1 + t2 - Iv::from_f64_ulps(p.chi, 1.0) + t3)
}

pub fn siegel_bound(m: usize, n: usize, c: f64, mu_max_w: f64, chi: f64) -> Result<Iv> {
    if c <= 1.0 {
        return Err(Error::InvalidInput("C must exceed 1".into()));
    }
    siegel_bound_log(&SiegelParams {
        m,
        n,
        log_c: c.ln(),
        mu_max_w,
        chi,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SiegelReport {
    pub log_norm: Iv,
    pub bound: Iv,
    pub holds: bool,
    pub params: SiegelParams,
}

pub fn verify_siegel(m: &IntegerMatrix, x: &[BigInt], metric: &Metric, p: &SiegelParams) -> Result<SiegelReport> {
    if !m.annihilates(x) || x.iter().all(|v| v.is_zero()) {
        return Err(Error::NotInKernel);
    }
    let n2 = metric.norm_sq(x);
    let log_norm = Iv::ln_rational(&n2).scale(0.5);
    let bound = siegel_bound_log(p)?;
    let mut holds = log_norm.hi <= bound.lo;
    if !holds && log_norm.lo <= bound.hi && p.mu_max_w == 0.0 && p.chi == 0.0 && p.log_c == SiegelParams::from_matrix(m, p.n).log_c {
        // Undecided with the standard parameters: compare
        // |x|^(2n) <= C^(2m) n^(3n) in integers, C^2 = max(1, |M|_F^2).
        let c2 = m.entries.iter().flatten().map(|v| v * v).sum::<BigInt>().max(BigInt::one());
        let e = |b: &BigInt, k: usize| num_traits::pow(b.clone(), k);
        let nn = BigInt::from(p.n);
        holds = e(n2.numer(), p.n) <= e(&c2, p.m) * e(&nn, 3 * p.n) * e(n2.denom(), p.n);
    }
    Ok(SiegelReport {
        log_norm,
        bound,
        holds,
        params: p.clone(),
    })
}
