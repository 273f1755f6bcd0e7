//! Factorization of univariate integer polynomials (Zassenhaus: modular
//! factorization, Hensel lifting, subset recombination).

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::upoly::{self, ZPoly};

type MPoly = Vec<u64>;

fn mtrim(p: &mut MPoly) {
    while p.last() == Some(&0) {
        p.pop();
    }
}

fn mdeg(p: &MPoly) -> Option<usize> {
    p.iter().rposition(|&c| c != 0)
}

fn powmod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn minv(a: u64, p: u64) -> u64 {
    powmod(a, p - 2, p)
}

fn mreduce(f: &[BigInt], p: u64) -> MPoly {
    let pb = BigInt::from(p);
    let mut v: MPoly = f
        .iter()
        .map(|c| c.mod_floor(&pb).to_u64().expect("small"))
        .collect();
    mtrim(&mut v);
    v
}

fn mmul(a: &MPoly, b: &MPoly, p: u64) -> MPoly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut v = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            v[i + j] = (v[i + j] + x * y) % p;
        }
    }
    mtrim(&mut v);
    v
}

fn msub(a: &MPoly, b: &MPoly, p: u64) -> MPoly {
    let n = a.len().max(b.len());
    let mut v: MPoly = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    mtrim(&mut v);
    v
}

fn madd(a: &MPoly, b: &MPoly, p: u64) -> MPoly {
    let n = a.len().max(b.len());
    let mut v: MPoly = (0..n)
        .map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % p)
        .collect();
    mtrim(&mut v);
    v
}

fn mdivrem(a: &MPoly, b: &MPoly, p: u64) -> (MPoly, MPoly) {
    let db = mdeg(b).expect("nonzero divisor");
    let inv = minv(b[db], p);
    let mut r = a.clone();
    mtrim(&mut r);
    let mut q = vec![0u64; r.len().saturating_sub(db).max(1)];
    while let Some(dr) = mdeg(&r) {
        if dr < db {
            break;
        }
        let c = r[dr] * inv % p;
        let s = dr - db;
        for i in 0..=db {
            r[s + i] = (r[s + i] + p - c * b[i] % p) % p;
        }
        q[s] = c;
        mtrim(&mut r);
    }
    mtrim(&mut q);
    (q, r)
}

fn mmonic(a: &MPoly, p: u64) -> MPoly {
    match mdeg(a) {
        None => vec![],
        Some(d) => {
            let inv = minv(a[d], p);
            a.iter().map(|&c| c * inv % p).collect()
        }
    }
}

fn mgcd(a: &MPoly, b: &MPoly, p: u64) -> MPoly {
    let mut x = a.clone();
    let mut y = b.clone();
    mtrim(&mut x);
    mtrim(&mut y);
    while !y.is_empty() {
        let (_, r) = mdivrem(&x, &y, p);
        x = y;
        y = r;
    }
    mmonic(&x, p)
}

/// `(g, s, t)` with `s a + t b = g` monic.
fn mxgcd(a: &MPoly, b: &MPoly, p: u64) -> (MPoly, MPoly, MPoly) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (vec![1u64], vec![]);
    let (mut t0, mut t1) = (vec![], vec![1u64]);
    mtrim(&mut r0);
    mtrim(&mut r1);
    while !r1.is_empty() {
        let (q, r) = mdivrem(&r0, &r1, p);
        let s2 = msub(&s0, &mmul(&q, &s1, p), p);
        let t2 = msub(&t0, &mmul(&q, &t1, p), p);
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s2;
        t0 = t1;
        t1 = t2;
    }
    let d = mdeg(&r0).expect("nonzero gcd");
    let inv = minv(r0[d], p);
    let sc = |v: &MPoly| -> MPoly {
        let mut w: MPoly = v.iter().map(|&c| c * inv % p).collect();
        mtrim(&mut w);
        w
    };
    (sc(&r0), sc(&s0), sc(&t0))
}

fn mpowmod(base: &MPoly, e: &BigUint, m: &MPoly, p: u64) -> MPoly {
    let mut r: MPoly = vec![1];
    let mut b = mdivrem(base, m, p).1;
    let bits = e.bits();
    for i in 0..bits {
        if e.bit(i) {
            r = mdivrem(&mmul(&r, &b, p), m, p).1;
        }
        if i + 1 < bits {
            b = mdivrem(&mmul(&b, &b, p), m, p).1;
        }
    }
    r
}

fn mderiv(a: &MPoly, p: u64) -> MPoly {
    let mut v: MPoly = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| (i as u64 % p) * c % p)
        .collect();
    mtrim(&mut v);
    v
}

/// Distinct-degree factorization of a monic squarefree polynomial.
fn ddf(f: &MPoly, p: u64) -> Vec<(MPoly, usize)> {
    let mut out = vec![];
    let mut f = f.clone();
    let x: MPoly = vec![0, 1];
    let mut h = x.clone();
    let pe = BigUint::from(p);
    let mut i = 0;
    while mdeg(&f).unwrap_or(0) >= 2 * (i + 1) {
        i += 1;
        h = mpowmod(&h, &pe, &f, p);
        let g = mgcd(&msub(&h, &x, p), &f, p);
        if mdeg(&g).unwrap_or(0) > 0 {
            out.push((g.clone(), i));
            f = mdivrem(&f, &g, p).0;
            h = mdivrem(&h, &f, p).1;
        }
    }
    if mdeg(&f).unwrap_or(0) > 0 {
        let d = mdeg(&f).unwrap();
        out.push((f, d));
    }
    out
}

/// Equal-degree splitting (Cantor-Zassenhaus) for odd `p`.
fn edf(f: &MPoly, d: usize, p: u64, rng: &mut ChaCha8Rng) -> Vec<MPoly> {
    let n = mdeg(f).unwrap_or(0);
    if n <= d {
        return vec![mmonic(f, p)];
    }
    let e = (BigUint::from(p).pow(d as u32) - BigUint::one()) / BigUint::from(2u32);
    loop {
        let mut a: MPoly = (0..n).map(|_| rng.gen_range(0..p)).collect();
        mtrim(&mut a);
        if mdeg(&a).unwrap_or(0) == 0 {
            continue;
        }
        let g = mgcd(&a, f, p);
        let cand = if mdeg(&g).unwrap_or(0) > 0 {
            g
        } else {
            let b = mpowmod(&a, &e, f, p);
            mgcd(&msub(&b, &vec![1], p), f, p)
        };
        let k = mdeg(&cand).unwrap_or(0);
        if k > 0 && k < n {
            let other = mdivrem(f, &cand, p).0;
            let mut out = edf(&cand, d, p, rng);
            out.extend(edf(&other, d, p, rng));
            return out;
        }
    }
}

fn factor_mod_p(f: &MPoly, p: u64, rng: &mut ChaCha8Rng) -> Vec<MPoly> {
    let mut out = vec![];
    for (g, d) in ddf(&mmonic(f, p), p) {
        out.extend(edf(&g, d, p, rng));
    }
    out
}

const SMALL_PRIMES: [u64; 40] = [
    3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
    101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179,
];

fn sym_mod(c: &BigInt, m: &BigInt) -> BigInt {
    let r = c.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

fn zmod(a: &[BigInt], m: &BigInt) -> ZPoly {
    let mut v: ZPoly = a.iter().map(|c| c.mod_floor(m)).collect();
    upoly::trim(&mut v);
    v
}

fn to_z(a: &MPoly) -> ZPoly {
    a.iter().map(|&c| BigInt::from(c)).collect()
}

/// Lift monic `f = g h (mod p)` to `mod p^k`, `f` monic modulo `p^k`.
fn hensel_pair(f: &ZPoly, g: &MPoly, h: &MPoly, p: u64, k: u32) -> (ZPoly, ZPoly) {
    let (one, s, t) = mxgcd(g, h, p);
    debug_assert_eq!(one, vec![1]);
    let pb = BigInt::from(p);
    let mut gz = to_z(g);
    let mut hz = to_z(h);
    let gm = g.clone();
    let mut pj = pb.clone();
    for _ in 1..k {
        let pj1 = &pj * &pb;
        let e = upoly::sub(f, &upoly::mul(&gz, &hz));
        let e: ZPoly = zmod(&e, &pj1).iter().map(|c| c / &pj).collect();
        let em = mreduce(&e, p);
        // tau = (e t) rem g, sigma = e s + (e t div g) h.
        let et = mmul(&em, &t, p);
        let (qd, tau) = mdivrem(&et, &gm, p);
        let sigma = madd(&mmul(&em, &s, p), &mmul(&qd, h, p), p);
        gz = zmod(&upoly::add(&gz, &upoly::scale(&to_z(&tau), &pj)), &pj1);
        hz = zmod(&upoly::add(&hz, &upoly::scale(&to_z(&sigma), &pj)), &pj1);
        pj = pj1;
    }
    (gz, hz)
}

/// Lift all factors; `f` primitive, `factors` monic mod `p` with product
/// `f / lc(f)`.
fn hensel_multi(f: &ZPoly, factors: &[MPoly], p: u64, k: u32) -> Vec<ZPoly> {
    let m = BigInt::from(p).pow(k);
    let lc = upoly::lead(f);
    let lc_inv = lc.modinv(&m).expect("lc invertible mod p^k");
    let mut target = zmod(&upoly::scale(f, &lc_inv), &m);
    let mut out = vec![];
    let mut rest: Vec<MPoly> = factors.to_vec();
    while rest.len() > 1 {
        let g = rest.remove(0);
        let h = rest.iter().fold(vec![1u64], |acc, x| mmul(&acc, x, p));
        let (gl, hl) = hensel_pair(&target, &g, &h, p, k);
        out.push(gl);
        target = hl;
    }
    out.push(target);
    out
}

fn prod_mod(fs: &[&ZPoly], lc: &BigInt, m: &BigInt) -> ZPoly {
    let mut acc: ZPoly = vec![lc.clone()];
    for f in fs {
        acc = zmod(&upoly::mul(&acc, f), m);
    }
    acc.iter().map(|c| sym_mod(c, m)).collect()
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![];
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(idx.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 && idx[0] == n - k {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Irreducible factors over Z of a primitive squarefree polynomial of
/// positive degree. Each factor is primitive with positive leading
/// coefficient.
pub fn factor_squarefree(f: &[BigInt]) -> Vec<ZPoly> {
    let f = upoly::primitive(f);
    let n = upoly::degree(&f).expect("nonzero");
    if n <= 1 {
        return vec![f];
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    // Pick the admissible prime with the fewest modular factors among the
    // first few.
    let lc = upoly::lead(&f);
    let mut best: Option<(u64, Vec<MPoly>)> = None;
    let mut tried = 0;
    for &p in SMALL_PRIMES.iter() {
        if (&lc % BigInt::from(p)).is_zero() {
            continue;
        }
        let fm = mreduce(&f, p);
        if mdeg(&fm) != Some(n) {
            continue;
        }
        let g = mgcd(&fm, &mderiv(&fm, p), p);
        if mdeg(&g).unwrap_or(0) > 0 {
            continue;
        }
        let fac = factor_mod_p(&fm, p, &mut rng);
        if fac.len() == 1 {
            return vec![f];
        }
        if best.as_ref().map_or(true, |(_, b)| fac.len() < b.len()) {
            best = Some((p, fac));
        }
        tried += 1;
        if tried >= 5 {
            break;
        }
    }
    let (p, fac) = match best {
        Some(b) => b,
        None => return factor_large_prime(&f),
    };
    recombine(&f, p, &fac)
}

fn factor_large_prime(f: &ZPoly) -> Vec<ZPoly> {
    // Fallback for polynomials with many small-prime collisions.
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let lc = upoly::lead(f);
    let n = upoly::degree(f).unwrap();
    let mut p = 181u64;
    loop {
        p += 2;
        if !(3..).step_by(2).take_while(|d| d * d <= p).all(|d| p % d != 0) {
            continue;
        }
        if (&lc % BigInt::from(p)).is_zero() {
            continue;
        }
        let fm = mreduce(f, p);
        if mdeg(&fm) != Some(n) || mdeg(&mgcd(&fm, &mderiv(&fm, p), p)).unwrap_or(0) > 0 {
            continue;
        }
        let fac = factor_mod_p(&fm, p, &mut rng);
        return recombine(f, p, &fac);
    }
}

fn recombine(f: &ZPoly, p: u64, fac: &[MPoly]) -> Vec<ZPoly> {
    let n = upoly::degree(f).unwrap();
    let lc = upoly::lead(f);
    let maxc = f.iter().map(|c| c.abs()).max().unwrap();
    let bound: BigInt = (BigInt::one() << (n + 1)) * maxc * BigInt::from(n + 1) * lc.abs() * 2;
    let mut k = 1u32;
    let pb = BigInt::from(p);
    while pb.pow(k) <= bound {
        k += 1;
    }
    let m = pb.pow(k);
    let lifted = hensel_multi(f, fac, p, k);
    let mut remaining: Vec<ZPoly> = lifted;
    let mut fstar = f.clone();
    let mut out = vec![];
    let mut s = 1;
    'outer: while 2 * s <= remaining.len() {
        for subset in combinations(remaining.len(), s) {
            let lcs = upoly::lead(&fstar);
            let chosen: Vec<&ZPoly> = subset.iter().map(|&i| &remaining[i]).collect();
            let g = upoly::primitive(&prod_mod(&chosen, &lcs, &m));
            if let Some(q) = upoly::exact_div(&fstar, &g) {
                out.push(g);
                fstar = upoly::primitive(&q);
                let mut keep = vec![];
                for (i, r) in remaining.into_iter().enumerate() {
                    if !subset.contains(&i) {
                        keep.push(r);
                    }
                }
                remaining = keep;
                continue 'outer;
            }
        }
        s += 1;
    }
    out.push(upoly::primitive(&fstar));
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// Complete factorization over Z: `f = content * sign * prod g_i^{e_i}`.
/// Returns the signed content and irreducible factors with multiplicities.
pub fn factor(f: &[BigInt]) -> (BigInt, Vec<(ZPoly, usize)>) {
    let c = upoly::content(f);
    let sign = if upoly::lead(f).is_negative() { -BigInt::one() } else { BigInt::one() };
    let mut out = vec![];
    for (g, e) in upoly::squarefree_decomposition(f) {
        for h in factor_squarefree(&g) {
            out.push((h, e));
        }
    }
    out.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(&b.0)));
    (c * sign, out)
}

/// True iff `f` is irreducible over Q (degree at least one).
pub fn is_irreducible(f: &[BigInt]) -> bool {
    match upoly::degree(f) {
        None | Some(0) => false,
        Some(1) => true,
        Some(_) => upoly::is_squarefree(f) && factor_squarefree(f).len() == 1,
    }
}
