//! Fixed-seed invariant checks over every library module, at sizes that
//! run in seconds.

use std::io::Write;

use diophantine::auxpoly::{divided_derivative, index_at, BivariatePolynomial, WeightSystem};
use diophantine::blowup::{certify_pair, exceptional_log_norm, pullback_degree, replay, CertifyConfig, Outcome, PullbackSpec};
use diophantine::field::FieldPoint;
use diophantine::heights::{fs_height, sup_on_circle, weil_local, weil_sum, DivisorData, LocalWeil, PhiWeights, Place, WeilSum};
use diophantine::indexcheck::factor_components;
use diophantine::lattice::{arakelov_degree, small_kernel_vector, twist, HermitianLattice, IntegerMatrix, Metric};
use diophantine::numbers::{cbrt2, cf_convergents, rat, sqrt2, AlgebraicSpec, CfSource, NumberFieldElement, ProjPoint};
use diophantine::Iv;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = fn(&mut ChaCha8Rng) -> Result<(), String>;

pub const CHECKS: &[(&str, Check)] = &[
    ("numbers.root_boxes", root_boxes),
    ("numbers.field_axioms", field_axioms),
    ("numbers.convergent_quality", convergent_quality),
    ("heights.product_formula", product_formula),
    ("heights.weil_lower_bound", weil_lower_bound),
    ("heights.place_locality", place_locality),
    ("lattice.twist_and_sum", twist_and_sum),
    ("lattice.shortest_kernel", shortest_kernel),
    ("auxpoly.integrality_leibniz", integrality_leibniz),
    ("auxpoly.index_oracle", index_oracle),
    ("indexcheck.factorization", factorization),
    ("blowup.exceptional_bounds", exceptional_bounds),
    ("blowup.pullback_additivity", pullback_additivity),
    ("blowup.certificate_replay", certificate_replay),
];

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// Runs every check, printing one line each. Returns the number of failures.
pub fn run(seed: u64, out: &mut dyn Write) -> usize {
    let mut failures = 0;
    for (name, f) in CHECKS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        match f(&mut rng) {
            Ok(()) => {
                let _ = writeln!(out, "ok   {name}");
            }
            Err(m) => {
                failures += 1;
                let _ = writeln!(out, "FAIL {name}: {m}");
            }
        }
    }
    let _ = writeln!(out, "{} checks, {} failed", CHECKS.len(), failures);
    failures
}

fn random_point(rng: &mut ChaCha8Rng, bound: i64) -> ProjPoint {
    loop {
        let a = rng.gen_range(-bound..=bound);
        let b = rng.gen_range(0..=bound);
        if let Ok(p) = ProjPoint::from_i64(a, b) {
            return p;
        }
    }
}

fn random_poly(rng: &mut ChaCha8Rng, d1: usize, d2: usize, c: i64) -> BivariatePolynomial {
    let mut f = BivariatePolynomial::zero(d1, d2);
    for row in f.coeffs.iter_mut() {
        for x in row.iter_mut() {
            *x = BigInt::from(rng.gen_range(-c..=c));
        }
    }
    f
}

fn root_boxes(_: &mut ChaCha8Rng) -> Result<(), String> {
    for a in [sqrt2(), cbrt2()] {
        for s in 0..a.degree() {
            ensure(a.certify(s), || format!("embedding {s} of degree {} not certified", a.degree()))?;
        }
    }
    Ok(())
}

fn field_axioms(rng: &mut ChaCha8Rng) -> Result<(), String> {
    for a in [sqrt2(), cbrt2()] {
        let f = std::sync::Arc::new(a.clone());
        let mut elt = || {
            let c = (0..a.degree()).map(|_| rat(rng.gen_range(-9..=9), rng.gen_range(1..=5))).collect();
            NumberFieldElement::from_coords(f.clone(), c)
        };
        for _ in 0..10 {
            let (x, y, z) = (elt(), elt(), elt());
            ensure(x.mul(&y).mul(&z) == x.mul(&y.mul(&z)), || "multiplication is not associative".into())?;
            if !x.is_zero() {
                let one = NumberFieldElement::one(f.clone());
                ensure(x.mul(&x.inv().map_err(err)?) == one, || "x * x^-1 != 1".into())?;
            }
        }
    }
    Ok(())
}

fn convergent_quality(_: &mut ChaCha8Rng) -> Result<(), String> {
    let a = sqrt2();
    let cs = cf_convergents(CfSource::Algebraic(&a), 30).map_err(err)?;
    for c in &cs[4..] {
        let k = diophantine::heights::approx_quality(&a, c).map_err(err)?;
        ensure(k.lo >= 1.9 && k.hi <= 2.7, || format!("kappa {k} at {c}"))?;
        // |alpha - p/q| < 1/q^2 is kappa > 2.
        ensure(k.lo > 2.0, || format!("convergent {c} has kappa {k}"))?;
    }
    Ok(())
}

fn divisors() -> Vec<DivisorData> {
    vec![
        DivisorData::from_i64(&[-2, 0, 1], 2).unwrap(),
        DivisorData::from_i64(&[-2, 0, 0, 1], 3).unwrap(),
        DivisorData::from_i64(&[-3, 2], 1).unwrap(),
    ]
}

fn product_formula(rng: &mut ChaCha8Rng) -> Result<(), String> {
    for d in divisors() {
        for _ in 0..100 {
            let p = random_point(rng, 10_000);
            if d.eval(&p).is_zero() {
                continue;
            }
            let s: WeilSum<f64> = weil_sum(&d, &p, None).map_err(err)?;
            let h: Iv = fs_height(&p).scale(d.deg as f64);
            let lhs = s.archimedean + s.finite_value;
            ensure(lhs.overlaps(&h) && lhs.width() <= 1e-9, || format!("sum {lhs} vs {h} at {p}"))?;
            let mut norm = BigInt::one();
            for (q, e) in &s.finite {
                norm *= BigInt::from(*q).pow(*e);
            }
            ensure(norm * &s.cofactor == s.finite_norm, || format!("finite part inexact at {p}"))?;
        }
    }
    Ok(())
}

fn weil_lower_bound(rng: &mut ChaCha8Rng) -> Result<(), String> {
    for d in divisors() {
        let c = sup_on_circle(&d, 4096);
        for _ in 0..200 {
            let p = random_point(rng, 1000);
            if d.eval(&p).is_zero() {
                continue;
            }
            let l: LocalWeil<f64> = weil_local(&d, Place::Archimedean, &p).map_err(err)?;
            ensure(l.value.hi >= -c.ln().hi, || format!("lambda {} below -log C at {p}", l.value))?;
        }
    }
    Ok(())
}

fn place_locality(rng: &mut ChaCha8Rng) -> Result<(), String> {
    for d in divisors() {
        for _ in 0..100 {
            let p = random_point(rng, 1000);
            if d.eval(&p).is_zero() {
                continue;
            }
            let f = d.eval(&p);
            for q in [2u64, 3, 5, 7, 11, 13] {
                let l: LocalWeil<f64> = weil_local(&d, Place::Finite(q), &p).map_err(err)?;
                if (&f % BigInt::from(q)).is_zero() {
                    continue;
                }
                ensure(l.value == Iv::zero(), || format!("lambda_{q} nonzero at {p}"))?;
            }
        }
    }
    Ok(())
}

fn twist_and_sum(rng: &mut ChaCha8Rng) -> Result<(), String> {
    for _ in 0..10 {
        let d1: Vec<BigRational> = (0..2).map(|_| rat(rng.gen_range(1..20), rng.gen_range(1..5))).collect();
        let d2: Vec<BigRational> = (0..3).map(|_| rat(rng.gen_range(1..20), rng.gen_range(1..5))).collect();
        let l1 = HermitianLattice::diagonal(&d1).map_err(err)?;
        let l2 = HermitianLattice::diagonal(&d2).map_err(err)?;
        let sum = arakelov_degree(&l1.direct_sum(&l2).map_err(err)?).map_err(err)?;
        let parts = arakelov_degree(&l1).map_err(err)? + arakelov_degree(&l2).map_err(err)?;
        ensure(sum.overlaps(&parts), || format!("direct sum {sum} vs {parts}"))?;
        let lam = rng.gen_range(-2.0..2.0);
        let t = arakelov_degree(&twist(&l2, lam)).map_err(err)? - arakelov_degree(&l2).map_err(err)?;
        ensure((t.mid() - 3.0 * lam).abs() <= 1e-10, || format!("twist law {t} vs {}", 3.0 * lam))?;
    }
    Ok(())
}

/// Shortest nonzero kernel vector by enumeration over a box.
fn exhaustive_shortest(m: &IntegerMatrix, cols: usize, r: i64) -> Option<BigInt> {
    let mut best: Option<BigInt> = None;
    let mut x = vec![-r; cols];
    loop {
        if x.iter().any(|&v| v != 0) {
            let v: Vec<BigInt> = x.iter().map(|&t| BigInt::from(t)).collect();
            if m.annihilates(&v) {
                let n: BigInt = v.iter().map(|t| t * t).sum();
                if best.as_ref().map(|b| n < *b).unwrap_or(true) {
                    best = Some(n);
                }
            }
        }
        let mut k = 0;
        while k < cols {
            x[k] += 1;
            if x[k] <= r {
                break;
            }
            x[k] = -r;
            k += 1;
        }
        if k == cols {
            return best;
        }
    }
}

fn shortest_kernel(rng: &mut ChaCha8Rng) -> Result<(), String> {
    for _ in 0..10 {
        let cols = rng.gen_range(3..=5);
        let row: Vec<i64> = (0..cols).map(|_| rng.gen_range(-3..=3)).collect();
        let m = IntegerMatrix::from_i64(&[&row]);
        if row.iter().all(|&v| v == 0) {
            continue;
        }
        let x = small_kernel_vector(&m, &Metric::Euclidean).map_err(err)?;
        ensure(m.annihilates(&x), || "returned vector is not in the kernel".into())?;
        let n: BigInt = x.iter().map(|t| t * t).sum();
        let best = exhaustive_shortest(&m, cols, 3).ok_or("oracle found no vector")?;
        ensure(n == best, || format!("norm^2 {n}, shortest {best}"))?;
    }
    Ok(())
}

fn integrality_leibniz(rng: &mut ChaCha8Rng) -> Result<(), String> {
    for _ in 0..20 {
        let f = random_poly(rng, 3, 3, 9);
        let g = random_poly(rng, 2, 3, 9);
        let fg = f.mul(&g);
        for n in 0..=5 {
            let lhs = divided_derivative(&fg, n, 0);
            let mut rhs = BivariatePolynomial::zero(0, 0);
            for i in 0..=n {
                rhs = rhs.add(&divided_derivative(&f, i, 0).mul(&divided_derivative(&g, n - i, 0)));
            }
            ensure(lhs.trimmed() == rhs.trimmed(), || format!("Leibniz fails at order {n}"))?;
        }
    }
    Ok(())
}

fn index_oracle(rng: &mut ChaCha8Rng) -> Result<(), String> {
    for _ in 0..20 {
        let f = random_poly(rng, 3, 3, 3);
        if f.is_zero() {
            continue;
        }
        let (x, y) = (rat(rng.gen_range(-3..=3), rng.gen_range(1..=3)), rat(rng.gen_range(-3..=3), rng.gen_range(1..=3)));
        let w = WeightSystem::new(rat(rng.gen_range(1..=4), 1), rat(rng.gen_range(1..=4), 1), 3, 3, rat(1, 1)).map_err(err)?;
        let got = index_at(&f, &FieldPoint::rational(x.clone(), y.clone()), &w).map_err(err)?;
        let mut best: Option<BigRational> = None;
        for i in 0..=3 {
            for j in 0..=3 {
                if !divided_derivative(&f, i, j).eval_rational(&x, &y).is_zero() {
                    let v = w.weight(i, j);
                    if best.as_ref().map(|b| v < *b).unwrap_or(true) {
                        best = Some(v);
                    }
                }
            }
        }
        ensure(Some(got.clone()) == best, || format!("index {got} vs {best:?}"))?;
    }
    Ok(())
}

fn factorization(rng: &mut ChaCha8Rng) -> Result<(), String> {
    for _ in 0..5 {
        let a = random_poly(rng, 1, 1, 4);
        let b = random_poly(rng, 2, 1, 4);
        let f = a.mul(&b).mul(&a);
        if f.is_zero() {
            continue;
        }
        let fac = factor_components(&f).map_err(err)?;
        ensure(fac.expand().trimmed() == f.trimmed(), || "content * prod factor^mult != f".into())?;
    }
    Ok(())
}

fn exceptional_bounds(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let d1 = DivisorData::from_i64(&[-2, 0, 1], 2).unwrap();
    for _ in 0..20 {
        let (t1, t2) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let delta = rat(rng.gen_range(1..=2 * (t1 + t2)), 2);
        let w = WeightSystem::new(rat(t1, 1), rat(t2, 1), rng.gen_range(1..=5), rng.gen_range(1..=5), delta).map_err(err)?;
        let (p1, p2) = (random_point(rng, 50), random_point(rng, 50));
        if d1.eval(&p1).is_zero() || d1.eval(&p2).is_zero() {
            continue;
        }
        let e = exceptional_log_norm(&p1, &p2, &d1, &d1, &w, Place::Archimedean).map_err(err)?;
        let slack = 0.5 * (e.generators as f64).ln();
        ensure(
            e.value.hi >= e.witness_term.lo - slack - 1e-9 && e.value.lo <= e.witness_term.hi + 1e-9,
            || format!("archimedean value {} outside [min - {slack}, min] with min {}", e.value, e.witness_term),
        )?;
    }
    Ok(())
}

fn pullback_additivity(rng: &mut ChaCha8Rng) -> Result<(), String> {
    for _ in 0..20 {
        let (p1, p2) = (random_point(rng, 500), random_point(rng, 500));
        let s = |d1, d2, o| PullbackSpec { d1, d2, omega: o, include_e: None };
        let (a1, a2, b1, b2) = (rng.gen_range(0..5), rng.gen_range(0..5), rng.gen_range(0..5), rng.gen_range(0..5));
        let lhs = pullback_degree(&p1, &p2, &s(a1 + b1, a2 + b2, (1, 2))).map_err(err)?;
        let rhs = pullback_degree(&p1, &p2, &s(a1, a2, (1, 0))).map_err(err)? + pullback_degree(&p1, &p2, &s(b1, b2, (0, 2))).map_err(err)?;
        ensure(lhs.overlaps(&rhs), || format!("{lhs} vs {rhs}"))?;
    }
    Ok(())
}

fn certificate_replay(_: &mut ChaCha8Rng) -> Result<(), String> {
    let spec = AlgebraicSpec { minpoly: vec!["-2".into(), "0".into(), "1".into()], root: sqrt2().distinguished };
    let (p1, p2) = (ProjPoint::from_i64(3, 2).unwrap(), ProjPoint::from_i64(17, 12).unwrap());
    let t = rat(21, 10);
    let cert = certify_pair(&spec, &spec, &p1, &p2, &t, &t, &rat(1, 10), &[Place::Archimedean], &PhiWeights::archimedean_only(), &CertifyConfig::default())
        .map_err(err)?;
    ensure(matches!(cert.outcome, Outcome::HypothesisViolation { .. }), || "expected a hypothesis violation".into())?;
    let text = serde_json::to_string(&cert).map_err(err)?;
    let back: diophantine::blowup::Certificate = serde_json::from_str(&text).map_err(err)?;
    ensure(serde_json::to_string(&replay(&back)).map_err(err)? == serde_json::to_string(&cert.outcome).map_err(err)?, || "replay differs".into())
}
