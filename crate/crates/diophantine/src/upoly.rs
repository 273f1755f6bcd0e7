//! Dense univariate polynomials over Z and Q, constant term first.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type ZPoly = Vec<BigInt>;
pub type QPoly = Vec<BigRational>;

pub fn trim<T: Zero>(p: &mut Vec<T>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

pub fn trimmed<T: Zero + Clone>(p: &[T]) -> Vec<T> {
    let mut v = p.to_vec();
    trim(&mut v);
    v
}

/// Degree, `None` for the zero polynomial.
pub fn degree<T: Zero>(p: &[T]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

pub fn lead<T: Zero + Clone>(p: &[T]) -> T {
    degree(p).map(|d| p[d].clone()).unwrap_or_else(T::zero)
}

pub fn is_zero<T: Zero>(p: &[T]) -> bool {
    degree(p).is_none()
}

/// Non-negative gcd of the coefficients.
pub fn content(p: &[BigInt]) -> BigInt {
    p.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

/// Divide by the positive content; sign of the leading coefficient is kept.
pub fn prim_keep_sign(p: &[BigInt]) -> ZPoly {
    let c = content(p);
    let mut v: ZPoly = if c.is_zero() || c.is_one() {
        p.to_vec()
    } else {
        p.iter().map(|x| x / &c).collect()
    };
    trim(&mut v);
    v
}

/// Primitive part with positive leading coefficient.
pub fn primitive(p: &[BigInt]) -> ZPoly {
    let mut v = prim_keep_sign(p);
    if lead(&v).is_negative() {
        for c in v.iter_mut() {
            *c = -&*c;
        }
    }
    v
}

pub fn derivative(p: &[BigInt]) -> ZPoly {
    let mut v: ZPoly = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i))
        .collect();
    trim(&mut v);
    v
}

pub fn add(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    let n = a.len().max(b.len());
    let mut v: ZPoly = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_default();
            let y = b.get(i).cloned().unwrap_or_default();
            x + y
        })
        .collect();
    trim(&mut v);
    v
}

pub fn sub(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    let nb: ZPoly = b.iter().map(|c| -c).collect();
    add(a, &nb)
}

pub fn mul(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    if is_zero(a) || is_zero(b) {
        return vec![];
    }
    let mut v = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            v[i + j] += x * y;
        }
    }
    trim(&mut v);
    v
}

pub fn scale(a: &[BigInt], k: &BigInt) -> ZPoly {
    let mut v: ZPoly = a.iter().map(|c| c * k).collect();
    trim(&mut v);
    v
}

/// Exact value at a rational point.
pub fn eval_q(p: &[BigInt], x: &BigRational) -> BigRational {
    // Horner on numerator/denominator to avoid repeated gcds.
    let (n, d) = (x.numer(), x.denom());
    let deg = match degree(p) {
        None => return BigRational::zero(),
        Some(k) => k,
    };
    let mut acc = BigInt::zero();
    let mut dpow = BigInt::one();
    for i in (0..=deg).rev() {
        acc = acc * n + &p[i] * &dpow;
        dpow *= d;
    }
    // acc = sum p_i n^i d^(deg-i), and dpow = d^(deg+1).
    let den = dpow / d;
    BigRational::new(acc, den)
}

/// Sign of the value at a rational point.
pub fn sign_at(p: &[BigInt], x: &BigRational) -> i8 {
    let v = eval_q(p, x);
    if v.is_zero() {
        0
    } else if v.is_positive() {
        1
    } else {
        -1
    }
}

pub fn eval_z(p: &[BigInt], x: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

pub fn to_q(p: &[BigInt]) -> QPoly {
    p.iter().map(|c| BigRational::from_integer(c.clone())).collect()
}

/// Clear denominators with a positive multiplier; the result is primitive
/// up to sign (sign of `p` is kept).
pub fn clear_q(p: &[BigRational]) -> ZPoly {
    let l = p.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let v: ZPoly = p.iter().map(|c| (c * BigRational::from_integer(l.clone())).to_integer()).collect();
    prim_keep_sign(&v)
}

pub fn divrem_q(a: &[BigRational], b: &[BigRational]) -> (QPoly, QPoly) {
    let db = degree(b).expect("division by zero polynomial");
    let mut r = trimmed(a);
    let lb = b[db].clone();
    let mut q = vec![BigRational::zero(); r.len().saturating_sub(db).max(1)];
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = &r[dr] / &lb;
        let s = dr - db;
        for (i, bc) in b.iter().enumerate().take(db + 1) {
            r[s + i] -= &c * bc;
        }
        q[s] = c;
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

/// Remainder of `a` modulo `b` over Q, scaled to a primitive integer
/// polynomial by a positive factor.
pub fn rem_z(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    let (_, r) = divrem_q(&to_q(a), &to_q(b));
    clear_q(&r)
}

/// Exact quotient over Z if `b` divides `a`.
pub fn exact_div(a: &[BigInt], b: &[BigInt]) -> Option<ZPoly> {
    let db = degree(b)?;
    if is_zero(a) {
        return Some(vec![]);
    }
    let da = degree(a)?;
    if da < db {
        return None;
    }
    let mut r = trimmed(a);
    let lb = b[db].clone();
    let mut q = vec![BigInt::zero(); da - db + 1];
    while let Some(dr) = degree(&r) {
        if dr < db {
            return None;
        }
        let (c, m) = r[dr].div_rem(&lb);
        if !m.is_zero() {
            return None;
        }
        let s = dr - db;
        for (i, bc) in b.iter().enumerate().take(db + 1) {
            r[s + i] -= &c * bc;
        }
        q[s] = c;
        trim(&mut r);
    }
    trim(&mut q);
    Some(q)
}

/// Primitive gcd over Q with positive leading coefficient.
pub fn gcd(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    let mut x = primitive(a);
    let mut y = primitive(b);
    if is_zero(&x) {
        return y;
    }
    while !is_zero(&y) {
        let r = rem_z(&x, &y);
        x = y;
        y = primitive(&r);
    }
    primitive(&x)
}

pub fn is_squarefree(p: &[BigInt]) -> bool {
    match degree(p) {
        None => false,
        Some(0) => true,
        Some(_) => degree(&gcd(p, &derivative(p))) == Some(0),
    }
}

fn q_sub(a: &[BigRational], b: &[BigRational]) -> QPoly {
    let n = a.len().max(b.len());
    let mut v: QPoly = (0..n)
        .map(|i| {
            a.get(i).cloned().unwrap_or_else(BigRational::zero)
                - b.get(i).cloned().unwrap_or_else(BigRational::zero)
        })
        .collect();
    trim(&mut v);
    v
}

fn q_deriv(a: &[BigRational]) -> QPoly {
    let mut v: QPoly = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
        .collect();
    trim(&mut v);
    v
}

fn q_gcd(a: &[BigRational], b: &[BigRational]) -> QPoly {
    let g = gcd(&clear_q(a), &clear_q(b));
    to_q(&g)
}

/// Yun's squarefree decomposition of a nonzero polynomial:
/// `p = c * prod f_i^i`, returned as `(f_i, i)` with `deg f_i > 0`,
/// each `f_i` primitive with positive leading coefficient.
pub fn squarefree_decomposition(p: &[BigInt]) -> Vec<(ZPoly, usize)> {
    let mut out = vec![];
    let f = to_q(&primitive(p));
    if degree(&f).unwrap_or(0) == 0 {
        return out;
    }
    let fp = q_deriv(&f);
    let a0 = q_gcd(&f, &fp);
    let mut b = divrem_q(&f, &a0).0;
    let c = divrem_q(&fp, &a0).0;
    let mut d = q_sub(&c, &q_deriv(&b));
    let mut i = 1;
    while degree(&b).unwrap_or(0) > 0 {
        let a = if is_zero(&d) { b.clone() } else { q_gcd(&b, &d) };
        if degree(&a).unwrap_or(0) > 0 {
            out.push((primitive(&clear_q(&a)), i));
        }
        let c = divrem_q(&d, &a).0;
        b = divrem_q(&b, &a).0;
        d = q_sub(&c, &q_deriv(&b));
        i += 1;
    }
    out
}

/// Sturm sequence, each term scaled by a positive constant.
pub fn sturm_sequence(p: &[BigInt]) -> Vec<ZPoly> {
    let mut seq = vec![prim_keep_sign(p), prim_keep_sign(&derivative(p))];
    loop {
        let n = seq.len();
        if is_zero(&seq[n - 1]) {
            seq.pop();
            break;
        }
        let r = rem_z(&seq[n - 2], &seq[n - 1]);
        if is_zero(&r) {
            break;
        }
        let neg: ZPoly = r.iter().map(|c| -c).collect();
        seq.push(neg);
    }
    seq
}

pub fn sign_changes_at(seq: &[ZPoly], x: &BigRational) -> usize {
    let mut last = 0i8;
    let mut n = 0;
    for s in seq {
        let v = sign_at(s, x);
        if v == 0 {
            continue;
        }
        if last != 0 && v != last {
            n += 1;
        }
        last = v;
    }
    n
}

/// Number of distinct real roots in `(a, b]`.
pub fn roots_in(seq: &[ZPoly], a: &BigRational, b: &BigRational) -> usize {
    sign_changes_at(seq, a) - sign_changes_at(seq, b)
}

/// Cauchy bound: every complex root has modulus `< bound`.
pub fn cauchy_bound(p: &[BigInt]) -> BigInt {
    let d = degree(p).expect("nonzero");
    let l = p[d].abs();
    let m = p[..d].iter().map(|c| c.abs()).max().unwrap_or_default();
    m.div_ceil(&l) + BigInt::one()
}

/// `(x + s)` substituted into `p` (Taylor shift) over Z.
pub fn taylor_shift(p: &[BigInt], s: &BigInt) -> ZPoly {
    let mut v = p.to_vec();
    let n = v.len();
    for i in 0..n {
        for j in (i..n.saturating_sub(1)).rev() {
            let t = &v[j + 1] * s;
            v[j] += t;
        }
    }
    trim(&mut v);
    v
}
