//! Factorization in `Z[x, y]`: primitive remainder sequences over `Z[y][x]`,
//! squarefree parts, and Hensel lifting of a univariate specialization in
//! `y` followed by factor recombination.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::auxpoly::BivariatePolynomial;
use crate::error::{Error, Result};
use crate::factor;
use crate::numbers::binomial;
use crate::upoly::{self, QPoly, ZPoly};

/// Coefficients in `x`, each a polynomial in `y`.
type Xy = Vec<ZPoly>;

fn to_xy(f: &BivariatePolynomial) -> Xy {
    let mut v: Xy = f.coeffs.iter().map(|r| upoly::trimmed(r)).collect();
    while v.last().is_some_and(|c| upoly::is_zero(c)) {
        v.pop();
    }
    v
}

fn from_xy(v: &[ZPoly]) -> BivariatePolynomial {
    if v.is_empty() {
        return BivariatePolynomial::zero(0, 0);
    }
    let d2 = v.iter().map(|c| c.len()).max().unwrap_or(1).max(1) - 1;
    let mut p = BivariatePolynomial::zero(v.len() - 1, d2);
    for (i, c) in v.iter().enumerate() {
        for (j, a) in c.iter().enumerate() {
            p.coeffs[i][j] = a.clone();
        }
    }
    p
}

/// Content in `Z[y]` (integer content included), positive leading
/// coefficient.
fn content_y(v: &[ZPoly]) -> ZPoly {
    let mut g: ZPoly = vec![];
    let mut ic = BigInt::zero();
    for c in v {
        if upoly::is_zero(c) {
            continue;
        }
        ic = ic.gcd(&upoly::content(c));
        g = if g.is_empty() { upoly::primitive(c) } else { upoly::gcd(&g, c) };
    }
    if g.is_empty() {
        return vec![];
    }
    upoly::scale(&g, &ic)
}

fn pp_y(v: &[ZPoly]) -> Xy {
    let c = content_y(v);
    if c.is_empty() {
        return v.to_vec();
    }
    v.iter().map(|a| upoly::exact_div(a, &c).expect("content divides")).collect()
}

fn prem(a: &[ZPoly], b: &[ZPoly]) -> Xy {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r: Xy = a.to_vec();
    while r.len() > db && !r.is_empty() {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        let s = dr - db;
        for c in r.iter_mut() {
            *c = upoly::mul(c, lb);
        }
        for (i, bc) in b.iter().enumerate() {
            r[s + i] = upoly::sub(&r[s + i], &upoly::mul(&lr, bc));
        }
        r[dr] = vec![];
        while r.last().is_some_and(|c| upoly::is_zero(c)) {
            r.pop();
        }
    }
    r
}

/// Greatest common divisor in `Z[x, y]`, primitive with canonical sign.
pub fn gcd(a: &BivariatePolynomial, b: &BivariatePolynomial) -> BivariatePolynomial {
    let (a, b) = (to_xy(a), to_xy(b));
    if a.is_empty() {
        return canonical(&from_xy(&b));
    }
    if b.is_empty() {
        return canonical(&from_xy(&a));
    }
    let cg = upoly::gcd(&content_y(&a), &content_y(&b));
    let (mut p, mut q) = (pp_y(&a), pp_y(&b));
    if p.len() < q.len() {
        std::mem::swap(&mut p, &mut q);
    }
    while !q.is_empty() {
        let r = prem(&p, &q);
        p = q;
        q = if r.is_empty() { r } else { pp_y(&r) };
    }
    let g: Xy = pp_y(&p).iter().map(|c| upoly::mul(c, &cg)).collect();
    canonical(&from_xy(&g))
}

pub fn derivative_x(f: &BivariatePolynomial) -> BivariatePolynomial {
    if f.d1 == 0 {
        return BivariatePolynomial::zero(0, f.d2);
    }
    let mut p = BivariatePolynomial::zero(f.d1 - 1, f.d2);
    for i in 1..=f.d1 {
        for j in 0..=f.d2 {
            p.coeffs[i - 1][j] = &f.coeffs[i][j] * BigInt::from(i);
        }
    }
    p
}

fn pack(f: &BivariatePolynomial, n: usize) -> ZPoly {
    let mut g = vec![BigInt::zero(); n * (f.d2 + 1)];
    for (i, r) in f.coeffs.iter().enumerate() {
        for (j, c) in r.iter().enumerate() {
            if !c.is_zero() {
                g[i + n * j] = c.clone();
            }
        }
    }
    upoly::trimmed(&g)
}

fn unpack(g: &[BigInt], n: usize) -> BivariatePolynomial {
    let d2 = g.len().saturating_sub(1) / n;
    let mut p = BivariatePolynomial::zero(n - 1, d2);
    for (k, c) in g.iter().enumerate() {
        p.coeffs[k % n][k / n] = c.clone();
    }
    p.trimmed()
}

/// Exact quotient `f / h` when `h` divides `f` in `Z[x, y]`, computed
/// through the substitution `y -> t^(deg_x f + 1)`.
pub fn exact_div(f: &BivariatePolynomial, h: &BivariatePolynomial) -> Option<BivariatePolynomial> {
    let (hx, hy) = h.degrees()?;
    let Some((dx, dy)) = f.degrees() else {
        return Some(BivariatePolynomial::zero(0, 0));
    };
    if hx > dx || hy > dy {
        return None;
    }
    let n = dx + 1;
    let q = upoly::exact_div(&pack(f, n), &pack(h, n))?;
    let q = unpack(&q, n);
    (h.mul(&q).trimmed() == f.trimmed()).then_some(q)
}

/// Primitive, with the coefficient of the lexicographically largest
/// monomial `x^i y^j` positive.
pub fn canonical(h: &BivariatePolynomial) -> BivariatePolynomial {
    let p = h.primitive_part().trimmed();
    match p.coeffs.iter().flatten().rev().find(|c| !c.is_zero()) {
        Some(c) if c.is_negative() => {
            BivariatePolynomial::from_vector(p.d1, p.d2, &p.to_vector().into_iter().map(|x| -x).collect::<Vec<_>>())
        }
        _ => p,
    }
}

fn shift_y(f: &BivariatePolynomial, c: &BigInt) -> BivariatePolynomial {
    let mut p = BivariatePolynomial::zero(f.d1, f.d2);
    for (i, r) in f.coeffs.iter().enumerate() {
        for (j, a) in r.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            // a (y + c)^j
            let mut cp = BigInt::one();
            for k in (0..=j).rev() {
                p.coeffs[i][k] += a * binomial(j, k) * &cp;
                cp *= c;
            }
        }
    }
    p
}

fn specialize_y(f: &BivariatePolynomial, c: &BigInt) -> ZPoly {
    upoly::trimmed(&f.coeffs.iter().map(|r| upoly::eval_z(r, c)).collect::<Vec<_>>())
}

fn q_mul(a: &[BigRational], b: &[BigRational]) -> QPoly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut r = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            r[i + j] += x * y;
        }
    }
    upoly::trimmed(&r)
}

fn q_sub(a: &[BigRational], b: &[BigRational]) -> QPoly {
    let n = a.len().max(b.len());
    let mut r = vec![BigRational::zero(); n];
    for (i, x) in a.iter().enumerate() {
        r[i] += x;
    }
    for (i, x) in b.iter().enumerate() {
        r[i] -= x;
    }
    upoly::trimmed(&r)
}

/// Inverse of `a` modulo `m` over Q (the two must be coprime).
fn q_invmod(a: &[BigRational], m: &[BigRational]) -> QPoly {
    let (mut r0, mut r1) = (m.to_vec(), upoly::divrem_q(a, m).1);
    let (mut t0, mut t1): (QPoly, QPoly) = (vec![], vec![BigRational::one()]);
    while !upoly::is_zero(&r1) {
        let (q, r) = upoly::divrem_q(&r0, &r1);
        let t = q_sub(&t0, &q_mul(&q, &t1));
        r0 = r1;
        r1 = r;
        t0 = t1;
        t1 = t;
    }
    // r0 is a nonzero constant.
    let k = r0[0].clone();
    upoly::divrem_q(&t0.iter().map(|x| x / &k).collect::<Vec<_>>(), m).1
}

/// Polynomial in `x` whose coefficients are power series in `y` truncated
/// at `y^m`; stored as `[i][j]`.
type Series = Vec<Vec<BigRational>>;

fn series_mul(a: &Series, b: &Series, m: usize) -> Series {
    let mut r = vec![vec![BigRational::zero(); m]; a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        for (k, bk) in b.iter().enumerate() {
            for (j, x) in ai.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                for (l, y) in bk.iter().enumerate().take(m - j) {
                    if !y.is_zero() {
                        r[i + k][j + l] += x * y;
                    }
                }
            }
        }
    }
    r
}

fn series_from(f: &BivariatePolynomial, m: usize) -> Series {
    f.coeffs
        .iter()
        .map(|r| {
            (0..m)
                .map(|j| r.get(j).map_or_else(BigRational::zero, |c| BigRational::from_integer(c.clone())))
                .collect()
        })
        .collect()
}

/// Lifts the monic factorization `f(x, 0)/lc = prod g_k` to
/// `f / lc_x(f) = prod G_k mod y^m`.
fn hensel_lift(f: &BivariatePolynomial, gs: &[QPoly], m: usize) -> Vec<Series> {
    let dx = f.d1;
    // Inverse of the leading coefficient as a series.
    let lc: Vec<BigRational> = (0..m)
        .map(|j| f.coeffs[dx].get(j).map_or_else(BigRational::zero, |c| BigRational::from_integer(c.clone())))
        .collect();
    let mut inv = vec![BigRational::zero(); m];
    inv[0] = lc[0].recip();
    for k in 1..m {
        let mut s = BigRational::zero();
        for j in 1..=k {
            s += &lc[j] * &inv[k - j];
        }
        inv[k] = -s * &inv[0];
    }
    let target = series_mul(&series_from(f, m), &vec![inv], m);
    let r = gs.len();
    let cofactor = |k: usize| gs.iter().enumerate().filter(|&(l, _)| l != k).fold(vec![BigRational::one()], |acc, (_, g)| q_mul(&acc, g));
    let s: Vec<QPoly> = (0..r).map(|k| q_invmod(&cofactor(k), &gs[k])).collect();
    let mut big: Vec<Series> = gs
        .iter()
        .map(|g| {
            g.iter()
                .map(|c| {
                    let mut v = vec![BigRational::zero(); m];
                    v[0] = c.clone();
                    v
                })
                .collect()
        })
        .collect();
    for k in 1..m {
        let prod = big[1..].iter().fold(big[0].clone(), |acc, g| series_mul(&acc, g, m));
        let e: QPoly = upoly::trimmed(
            &(0..target.len())
                .map(|i| {
                    let p = prod.get(i).map_or_else(BigRational::zero, |c| c[k].clone());
                    &target[i][k] - p
                })
                .collect::<Vec<_>>(),
        );
        if e.is_empty() {
            continue;
        }
        for l in 0..r {
            let delta = upoly::divrem_q(&q_mul(&s[l], &e), &gs[l]).1;
            for (i, c) in delta.iter().enumerate() {
                big[l][i][k] += c;
            }
        }
    }
    debug_assert!(big.iter().all(|g| g.len() <= dx + 1));
    big
}

fn series_to_poly(s: &Series) -> BivariatePolynomial {
    let den = s.iter().flatten().fold(BigInt::one(), |d, c| d.lcm(c.denom()));
    let m = s.first().map_or(1, |r| r.len());
    let mut p = BivariatePolynomial::zero(s.len().saturating_sub(1), m.saturating_sub(1));
    for (i, r) in s.iter().enumerate() {
        for (j, c) in r.iter().enumerate() {
            p.coeffs[i][j] = c.numer() * (&den / c.denom());
        }
    }
    p
}

fn primitive_y(f: &BivariatePolynomial) -> BivariatePolynomial {
    from_xy(&pp_y(&to_xy(f)))
}

/// Irreducible factors of a squarefree polynomial with trivial content in
/// `Z[y]` and positive degree in `x`.
fn factor_squarefree(a: &BivariatePolynomial) -> Result<Vec<BivariatePolynomial>> {
    let a = a.trimmed();
    let (dx, dy) = a.degrees().ok_or(Error::ZeroPolynomial)?;
    let mut shift = None;
    for k in 0..200i64 {
        let c = BigInt::from(if k % 2 == 0 { k / 2 } else { -(k + 1) / 2 });
        let u = specialize_y(&a, &c);
        if upoly::degree(&u) == Some(dx) && upoly::is_squarefree(&u) {
            shift = Some(c);
            break;
        }
    }
    let c = shift.ok_or_else(|| Error::InvalidInput("no good specialization for factoring".into()))?;
    let a_s = shift_y(&a, &c);
    let (_, fs) = factor::factor(&specialize_y(&a_s, &BigInt::zero()));
    if fs.len() <= 1 {
        return Ok(vec![canonical(&a)]);
    }
    let gs: Vec<QPoly> = fs
        .iter()
        .map(|(g, _)| {
            let l = BigRational::from_integer(upoly::lead(g));
            g.iter().map(|x| BigRational::from_integer(x.clone()) / &l).collect()
        })
        .collect();
    let m = dy + 1;
    let lifted = hensel_lift(&a_s, &gs, m);
    let mut remaining: Vec<usize> = (0..lifted.len()).collect();
    let mut cur = a_s.clone();
    let mut found = vec![];
    let mut size = 1;
    'outer: while 2 * size <= remaining.len() {
        let n = remaining.len();
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            let lc: Series = vec![(0..m)
                .map(|j| cur.coeffs[cur.d1].get(j).map_or_else(BigRational::zero, |x| BigRational::from_integer(x.clone())))
                .collect()];
            let prod = idx.iter().fold(lc, |acc, &i| series_mul(&acc, &lifted[remaining[i]], m));
            let cand = primitive_y(&series_to_poly(&prod));
            if let Some(q) = exact_div(&cur, &cand) {
                found.push(cand);
                cur = q;
                let chosen: Vec<usize> = idx.iter().map(|&i| remaining[i]).collect();
                remaining.retain(|r| !chosen.contains(r));
                continue 'outer;
            }
            // Next combination of `size` out of `n`.
            let mut i = size;
            loop {
                if i == 0 {
                    size += 1;
                    continue 'outer;
                }
                i -= 1;
                if idx[i] < n - size + i {
                    break;
                }
            }
            idx[i] += 1;
            for k in i + 1..size {
                idx[k] = idx[k - 1] + 1;
            }
        }
    }
    if cur.degrees().is_some_and(|d| d.0 > 0) {
        found.push(cur);
    }
    let back = -c;
    Ok(found.iter().map(|h| canonical(&shift_y(h, &back))).collect())
}

/// `f = content * prod g^e` with each `g` irreducible, primitive and of
/// canonical sign. Factors are sorted by total degree, then by descending
/// degree in `x`.
pub fn factor(f: &BivariatePolynomial) -> Result<(BigInt, Vec<(BivariatePolynomial, usize)>)> {
    let f = f.trimmed();
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let v = to_xy(&f);
    let cy = content_y(&v);
    let mut out: Vec<(BivariatePolynomial, usize)> = vec![];
    let (_, yfs) = factor::factor(&cy);
    for (g, e) in yfs {
        out.push((canonical(&from_xy(&[g])), e));
    }
    let g = from_xy(&pp_y(&v));
    if g.degrees().is_some_and(|d| d.0 > 0) {
        let sqf = exact_div(&g, &gcd(&g, &derivative_x(&g))).expect("gcd divides");
        for h in factor_squarefree(&sqf)? {
            let mut e = 0;
            let mut rest = g.clone();
            while let Some(q) = exact_div(&rest, &h) {
                rest = q;
                e += 1;
            }
            out.push((h, e));
        }
    }
    out.sort_by(|(a, _), (b, _)| {
        let (ax, ay) = a.degrees().unwrap();
        let (bx, by) = b.degrees().unwrap();
        (ax + ay, std::cmp::Reverse(ax), a.to_vector()).cmp(&(bx + by, std::cmp::Reverse(bx), b.to_vector()))
    });
    let mut prod = BivariatePolynomial::from_terms(0, 0, &[(0, 0, 1)]);
    for (h, e) in &out {
        for _ in 0..*e {
            prod = prod.mul(h);
        }
    }
    let prod = prod.trimmed();
    let (i, j) = (0..=prod.d1)
        .flat_map(|i| (0..=prod.d2).map(move |j| (i, j)))
        .find(|&(i, j)| !prod.coeffs[i][j].is_zero())
        .unwrap();
    let content = &f.coeffs[i][j] / &prod.coeffs[i][j];
    Ok((content, out))
}

impl BivariatePolynomial {
    /// Swaps the roles of `x` and `y`.
    pub fn transpose(&self) -> Self {
        let mut p = Self::zero(self.d2, self.d1);
        for (i, r) in self.coeffs.iter().enumerate() {
            for (j, c) in r.iter().enumerate() {
                p.coeffs[j][i] = c.clone();
            }
        }
        p
    }
}
