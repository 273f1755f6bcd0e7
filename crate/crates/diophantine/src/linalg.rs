//! Exact kernels of integer matrices: fraction-free (Bareiss) elimination for
//! small systems, multi-modular elimination with rational reconstruction for
//! large ones, and saturation to a Z-basis of `ker M ∩ Z^m`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Reduced row echelon description of a rational kernel. The kernel vector
/// for free column `free[k]` has a 1 there, `-rref[i][k]` at `pivots[i]` and
/// zeros elsewhere.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalKernel {
    pub cols: usize,
    pub pivots: Vec<usize>,
    pub free: Vec<usize>,
    pub rref: Vec<Vec<BigRational>>,
}

impl RationalKernel {
    pub fn dim(&self) -> usize {
        self.free.len()
    }

    /// Primitive integer multiple of the `k`-th kernel vector.
    pub fn integer_vector(&self, k: usize) -> Vec<BigInt> {
        let mut den = BigInt::one();
        for row in &self.rref {
            den = den.lcm(row[k].denom());
        }
        let mut v = vec![BigInt::zero(); self.cols];
        v[self.free[k]] = den.clone();
        for (i, &p) in self.pivots.iter().enumerate() {
            let e = &self.rref[i][k];
            v[p] = -(e.numer() * (&den / e.denom()));
        }
        let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        v.into_iter().map(|x| x / &g).collect()
    }
}

pub fn mat_vec(m: &[Vec<BigInt>], v: &[BigInt]) -> Vec<BigInt> {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                .fold(BigInt::zero(), |acc, (a, b)| acc + a * b)
        })
        .collect()
}

/// Kernel by fraction-free Gaussian elimination.
pub fn kernel_bareiss(m: &[Vec<BigInt>], cols: usize) -> RationalKernel {
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let rows = a.len();
    let mut pivots = vec![];
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, piv);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = (&a[r][c] * &a[i][j] - &a[i][c] * &a[r][j]) / &prev;
                a[i][j] = v;
            }
            a[i][c] = BigInt::zero();
        }
        // Entries left of c in rows below are already zero.
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    back_substitute(&a[..r], &pivots, cols)
}

/// Rational RREF entries at the free columns from an integer echelon form.
fn back_substitute(ech: &[Vec<BigInt>], pivots: &[usize], cols: usize) -> RationalKernel {
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let r = pivots.len();
    let mut rref = vec![vec![BigRational::zero(); free.len()]; r];
    for (k, &fc) in free.iter().enumerate() {
        // Solve ech * x = 0 with x[fc] = 1, other free entries 0.
        let mut x = vec![BigRational::zero(); r];
        for i in (0..r).rev() {
            let mut s = BigRational::from_integer(ech[i][fc].clone());
            for (j, xj) in x.iter().enumerate().skip(i + 1) {
                if !xj.is_zero() {
                    s += xj * BigRational::from_integer(ech[i][pivots[j]].clone());
                }
            }
            x[i] = -s / BigRational::from_integer(ech[i][pivots[i]].clone());
        }
        for i in 0..r {
            rref[i][k] = -x[i].clone();
        }
    }
    RationalKernel {
        cols,
        pivots: pivots.to_vec(),
        free,
        rref,
    }
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    a * b % p
}

fn invmod(a: u64, p: u64) -> u64 {
    let (mut t, mut nt, mut r, mut nr) = (0i64, 1i64, p as i64, a as i64);
    while nr != 0 {
        let q = r / nr;
        (t, nt) = (nt, t - q * nt);
        (r, nr) = (nr, r - q * nr);
    }
    t.rem_euclid(p as i64) as u64
}

/// Echelon form mod `p` followed by back substitution at free columns.
fn kernel_mod_p(m: &[Vec<BigInt>], cols: usize, p: u64) -> (Vec<usize>, Vec<Vec<u64>>) {
    let bp = BigInt::from(p);
    let mut a: Vec<Vec<u64>> = m
        .iter()
        .map(|row| row.iter().map(|x| x.mod_floor(&bp).to_u64().unwrap()).collect())
        .collect();
    let rows = a.len();
    let mut pivots = vec![];
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, piv);
        let inv = invmod(a[r][c], p);
        for x in a[r][c..].iter_mut() {
            *x = mulmod(*x, inv, p);
        }
        let (top, bottom) = a.split_at_mut(r + 1);
        let prow = &top[r];
        for row in bottom.iter_mut() {
            let f = row[c];
            if f == 0 {
                continue;
            }
            let nf = p - f;
            for (x, y) in row[c..].iter_mut().zip(&prow[c..]) {
                *x = (*x + nf * y) % p;
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    // Back substitution: rref[i][k] = entry of the fully reduced row i at free[k].
    let mut rref = vec![vec![0u64; free.len()]; r];
    for i in (0..r).rev() {
        for (k, &fc) in free.iter().enumerate() {
            let mut s = a[i][fc];
            for j in i + 1..r {
                let e = a[i][pivots[j]];
                if e != 0 {
                    s = (s + p - mulmod(e, rref[j][k], p)) % p;
                }
            }
            rref[i][k] = s;
        }
    }
    (pivots, rref)
}

fn rational_reconstruct(a: &BigInt, m: &BigInt) -> Option<BigRational> {
    let bound = (m / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (m.clone(), a.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound || !r1.gcd(&t1).is_one() {
        return None;
    }
    Some(BigRational::new(r1, t1))
}

/// Primes just below 2^31, descending.
pub fn large_primes() -> impl Iterator<Item = u64> {
    (1u64 << 30..(1u64 << 31)).rev().filter(|&n| crate::arith::is_prime(n))
}

/// Verifies that every kernel vector is annihilated by `m`.
pub fn verify_kernel(m: &[Vec<BigInt>], k: &RationalKernel) -> bool {
    (0..k.dim()).all(|j| mat_vec(m, &k.integer_vector(j)).iter().all(|x| x.is_zero()))
}

/// Kernel by elimination modulo word-size primes, Chinese remaindering and
/// rational reconstruction, accepted only after exact verification.
pub fn kernel_multimodular(m: &[Vec<BigInt>], cols: usize) -> Result<RationalKernel> {
    let mut modulus = BigInt::one();
    let mut best_pivots: Option<Vec<usize>> = None;
    let mut residues: Vec<BigInt> = vec![];
    let mut last: Option<Vec<Vec<BigRational>>> = None;
    for (count, p) in large_primes().enumerate() {
        if count > 400 {
            break;
        }
        let (piv, rr) = kernel_mod_p(m, cols, p);
        match &best_pivots {
            Some(b) if piv.len() < b.len() || (piv.len() == b.len() && piv > *b) => continue,
            Some(b) if *b == piv => {}
            _ => {
                // First prime, or a better pivot set revealing earlier primes were unlucky.
                best_pivots = Some(piv.clone());
                modulus = BigInt::one();
                residues = vec![];
                last = None;
            }
        }
        let bp = BigInt::from(p);
        if residues.is_empty() {
            residues = rr.iter().flatten().map(|&x| BigInt::from(x)).collect();
            modulus = bp;
        } else {
            // CRT: x = r + modulus * ((a - r) * modulus^-1 mod p).
            let minv = BigInt::from(invmod((&modulus % &bp).to_u64().unwrap(), p));
            for (x, &a) in residues.iter_mut().zip(rr.iter().flatten()) {
                let t = ((BigInt::from(a) - &*x) * &minv).mod_floor(&bp);
                *x += &modulus * t;
            }
            modulus *= &bp;
        }
        let width = if piv.is_empty() { 0 } else { cols - piv.len() };
        let mut rec = vec![];
        let mut ok = true;
        for x in &residues {
            match rational_reconstruct(x, &modulus) {
                Some(q) => rec.push(q),
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        let rows: Vec<Vec<BigRational>> = if width == 0 { vec![vec![]; piv.len()] } else { rec.chunks(width).map(|c| c.to_vec()).collect() };
        if last.as_ref() == Some(&rows) {
            let free = (0..cols).filter(|c| !piv.contains(c)).collect();
            let k = RationalKernel {
                cols,
                pivots: piv.clone(),
                free,
                rref: rows,
            };
            if verify_kernel(m, &k) {
                return Ok(k);
            }
            last = None;
        } else {
            last = Some(rows);
        }
    }
    Err(Error::PrecisionExhausted)
}

/// Rational kernel, choosing the method by size.
pub fn kernel(m: &[Vec<BigInt>], cols: usize) -> Result<RationalKernel> {
    if m.len() * cols <= 4096 {
        Ok(kernel_bareiss(m, cols))
    } else {
        kernel_multimodular(m, cols)
    }
}

/// Hermite normal form (upper triangular, positive diagonal, entries above
/// each pivot reduced into `[0, pivot)`) of the lattice spanned by `gens`.
pub fn hnf(gens: &[Vec<BigInt>], dim: usize) -> Vec<Vec<BigInt>> {
    let mut rows: Vec<Vec<BigInt>> = gens.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    let mut out: Vec<Vec<BigInt>> = vec![];
    for c in 0..dim {
        // Euclid on column c among remaining rows.
        loop {
            let nz: Vec<usize> = (0..rows.len()).filter(|&i| !rows[i][c].is_zero()).collect();
            if nz.len() <= 1 {
                break;
            }
            let imin = *nz.iter().min_by_key(|&&i| rows[i][c].abs()).unwrap();
            let pivot = rows[imin].clone();
            for &i in &nz {
                if i != imin {
                    let q = rows[i][c].div_floor(&pivot[c]);
                    for (x, y) in rows[i].iter_mut().zip(&pivot) {
                        *x -= &q * y;
                    }
                }
            }
        }
        if let Some(i) = (0..rows.len()).find(|&i| !rows[i][c].is_zero()) {
            let mut r = rows.swap_remove(i);
            if r[c].is_negative() {
                r.iter_mut().for_each(|x| *x = -x.clone());
            }
            for prev in out.iter_mut() {
                let q = prev[c].div_floor(&r[c]);
                if !q.is_zero() {
                    for (x, y) in prev.iter_mut().zip(&r) {
                        *x -= &q * y;
                    }
                }
            }
            out.push(r);
        }
        rows.retain(|r| r.iter().any(|x| !x.is_zero()));
    }
    out
}

/// Z-basis of `ker M ∩ Z^cols` from a rational kernel.
pub fn saturated_kernel_basis(k: &RationalKernel) -> Vec<Vec<BigInt>> {
    let r = k.dim();
    let mut den = BigInt::one();
    for row in &k.rref {
        for e in row {
            den = den.lcm(e.denom());
        }
    }
    // Coordinates t on the free columns with rref * t integral form the
    // lattice {t : N t = 0 mod den}, N = den * rref.
    let mut basis: Vec<Vec<BigInt>> = (0..r)
        .map(|i| (0..r).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    if !den.is_one() {
        let nrows: Vec<Vec<BigInt>> = k
            .rref
            .iter()
            .map(|row| row.iter().map(|e| e.numer() * (&den / e.denom())).collect())
            .collect();
        for nrow in &nrows {
            let c: Vec<BigInt> = basis
                .iter()
                .map(|b| b.iter().zip(nrow).fold(BigInt::zero(), |s, (x, y)| s + x * y).mod_floor(&den))
                .collect();
            if c.iter().all(|x| x.is_zero()) {
                continue;
            }
            // Unimodular combination bringing the residues to (g, 0, ..., 0).
            let mut vals = c;
            let mut b = basis.clone();
            for i in 1..r {
                if vals[i].is_zero() {
                    continue;
                }
                let e = vals[0].extended_gcd(&vals[i]);
                let (g, s, t) = (e.gcd, e.x, e.y);
                let (u, v) = (&vals[0] / &g, &vals[i] / &g);
                let b0: Vec<BigInt> = b[0].iter().zip(&b[i]).map(|(x, y)| &s * x + &t * y).collect();
                let bi: Vec<BigInt> = b[0].iter().zip(&b[i]).map(|(x, y)| &u * y - &v * x).collect();
                b[0] = b0;
                b[i] = bi;
                vals[0] = g;
                vals[i] = BigInt::zero();
            }
            let mult = &den / vals[0].gcd(&den);
            b[0].iter_mut().for_each(|x| *x *= &mult);
            let mut gens = b;
            for i in 0..r {
                let mut e = vec![BigInt::zero(); r];
                e[i] = den.clone();
                gens.push(e);
            }
            basis = hnf(&gens, r);
        }
    }
    basis
        .iter()
        .map(|t| {
            let mut v = vec![BigInt::zero(); k.cols];
            for (j, &fc) in k.free.iter().enumerate() {
                v[fc] = t[j].clone();
            }
            for (i, &p) in k.pivots.iter().enumerate() {
                let s = k.rref[i].iter().zip(t).fold(BigRational::zero(), |s, (e, x)| s + e * BigRational::from_integer(x.clone()));
                debug_assert!(s.is_integer());
                v[p] = -s.to_integer();
            }
            v
        })
        .collect()
}
