//! Rational approximations `p/q` to a real algebraic number with
//! `|alpha - p/q| <= q^-kappa`, `q <= q_max`.
//!
//! For `kappa > 2` only the range `q <= Q0 = ceil(2^(1/(kappa-2)))` is
//! enumerated directly. Beyond it `q^-kappa < 1/(2q^2)`, so by Legendre every
//! solution in lowest terms is a convergent; each convergent is checked with a
//! numerator window of one on either side. For `kappa <= 2` every `q` is
//! enumerated, which is allowed up to [`BRUTE_FORCE_LIMIT`].

use std::io::Write;

use diophantine::error::{Error, Result};
use diophantine::heights::{approx_quality, divisor_from_algnum, fs_height, weil_local, LocalWeil, Place};
use diophantine::Iv;
use diophantine::numbers::{algebraic_partial_quotients, convergents_from_quotients, real_interval, AlgebraicNumber, ProjPoint};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

pub const BRUTE_FORCE_LIMIT: u64 = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HuntMethod {
    Window,
    BruteForce,
}

#[derive(Clone, Debug)]
pub struct HuntRow {
    pub point: ProjPoint,
    pub h_fs: Iv,
    pub kappa: Iv,
    /// One entry per requested place, archimedean first.
    pub lambdas: Vec<(Place, Iv)>,
    /// `None` when the enclosure of `kappa` straddles the threshold.
    pub passes: Option<bool>,
}

impl HuntRow {
    pub fn width(&self) -> f64 {
        let mut w = self.h_fs.width();
        if self.kappa.lo.is_finite() {
            w = w.max(self.kappa.width());
        }
        for (_, l) in &self.lambdas {
            w = w.max(l.width());
        }
        w
    }
}

#[derive(Clone, Debug)]
pub struct HuntResult {
    pub method: HuntMethod,
    /// Largest `q` enumerated exhaustively.
    pub q0: u64,
    pub candidates: usize,
    pub rows: Vec<HuntRow>,
}

#[derive(Clone, Debug)]
pub struct HuntParams {
    pub kappa: f64,
    pub q_max: u64,
    pub places: Vec<Place>,
    /// Width of the enclosure of alpha used to place candidate numerators.
    pub precision: f64,
    pub threads: usize,
}

impl Default for HuntParams {
    fn default() -> Self {
        Self {
            kappa: 2.5,
            q_max: 1000,
            places: vec![Place::Archimedean],
            precision: 1e-30,
            threads: std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
        }
    }
}

/// Canonical column order: `inf` always, then finite places ascending.
pub fn column_places(places: &[Place]) -> Vec<Place> {
    let mut v: Vec<Place> = places.iter().copied().filter(|p| !p.is_archimedean()).collect();
    v.sort();
    v.dedup();
    v.insert(0, Place::Archimedean);
    v
}

fn evaluate(alpha: &AlgebraicNumber, p: &ProjPoint, kappa: f64, places: &[Place]) -> Result<HuntRow> {
    let k = approx_quality(alpha, p)?;
    let passes = if k.lo >= kappa {
        Some(true)
    } else if k.hi < kappa {
        Some(false)
    } else {
        None
    };
    let d = divisor_from_algnum(alpha);
    let mut lambdas = vec![];
    for &v in places {
        let l: LocalWeil<f64> = weil_local(&d, v, p)?;
        lambdas.push((v, l.value));
    }
    Ok(HuntRow {
        point: p.clone(),
        h_fs: fs_height(p),
        kappa: k,
        lambdas,
        passes,
    })
}

/// Numerators of fractions within `q^(1-kappa)` of `q alpha`, padded by one.
fn window(q: u64, alpha_f: f64, kappa: f64) -> (i64, i64) {
    let qf = q as f64;
    let c = qf * alpha_f;
    let r = qf.powf(1.0 - kappa);
    ((c - r).floor() as i64 - 1, (c + r).ceil() as i64 + 1)
}

fn brute_range(alpha: &AlgebraicNumber, alpha_f: f64, lo: u64, hi: u64, prm: &HuntParams, places: &[Place]) -> Result<(usize, Vec<HuntRow>)> {
    let mut rows = vec![];
    let mut seen = 0;
    for q in lo..=hi {
        let (a, b) = window(q, alpha_f, prm.kappa);
        for p in a..=b {
            if p.gcd(&(q as i64)) != 1 {
                continue;
            }
            seen += 1;
            let pt = ProjPoint::from_i64(p, q as i64)?;
            let row = evaluate(alpha, &pt, prm.kappa, places)?;
            if row.passes != Some(false) {
                rows.push(row);
            }
        }
    }
    Ok((seen, rows))
}

fn brute_force(alpha: &AlgebraicNumber, alpha_f: f64, q_hi: u64, prm: &HuntParams, places: &[Place]) -> Result<(usize, Vec<HuntRow>)> {
    let threads = prm.threads.max(1).min(q_hi.max(1) as usize);
    if threads <= 1 || q_hi < 256 {
        return brute_range(alpha, alpha_f, 1, q_hi, prm, places);
    }
    let chunk = q_hi.div_ceil(threads as u64);
    let parts: Vec<Result<(usize, Vec<HuntRow>)>> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..threads as u64)
            .map(|t| {
                let lo = t * chunk + 1;
                let hi = ((t + 1) * chunk).min(q_hi);
                s.spawn(move || if lo > hi { Ok((0, vec![])) } else { brute_range(alpha, alpha_f, lo, hi, prm, places) })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("hunt worker panicked")).collect()
    });
    let mut seen = 0;
    let mut rows = vec![];
    for p in parts {
        let (s, r) = p?;
        seen += s;
        rows.extend(r);
    }
    Ok((seen, rows))
}

/// Convergents with `lo < q <= hi`.
fn convergents_between(alpha: &AlgebraicNumber, lo: u64, hi: u64) -> Result<Vec<ProjPoint>> {
    let hi_b = BigInt::from(hi);
    let mut count = 16;
    loop {
        let qs = algebraic_partial_quotients(alpha, count)?;
        let cs = convergents_from_quotients(&qs);
        if cs.last().map(|c| c.b > hi_b).unwrap_or(false) {
            let lo_b = BigInt::from(lo);
            return Ok(cs.into_iter().filter(|c| c.b > lo_b && c.b <= hi_b).collect());
        }
        count *= 2;
    }
}

pub fn hunt(alpha: &AlgebraicNumber, prm: &HuntParams) -> Result<HuntResult> {
    if prm.q_max < 1 {
        return Err(Error::InvalidInput("q_max must be at least 1".into()));
    }
    if !prm.kappa.is_finite() || prm.kappa <= 1.0 {
        return Err(Error::InvalidInput("kappa must be a finite real above 1".into()));
    }
    if alpha.is_rational() || !alpha.is_real() {
        return Err(Error::InvalidInput("hunt needs an irrational real algebraic number".into()));
    }
    let places = column_places(&prm.places);
    let (lo, hi) = real_interval(alpha, alpha.distinguished, prm.precision)?;
    let alpha_f = ((lo + hi) / BigInt::from(2)).to_f64().unwrap();
    let (method, q0) = if prm.kappa > 2.0 {
        let q0 = 2f64.powf(1.0 / (prm.kappa - 2.0)).ceil();
        let q0 = if q0.is_finite() && q0 < prm.q_max as f64 { q0 as u64 } else { prm.q_max };
        (if q0 < prm.q_max { HuntMethod::Window } else { HuntMethod::BruteForce }, q0)
    } else {
        if prm.q_max > BRUTE_FORCE_LIMIT {
            return Err(Error::InvalidInput(format!(
                "kappa <= 2 needs exhaustive search; q_max must be at most {BRUTE_FORCE_LIMIT}"
            )));
        }
        (HuntMethod::BruteForce, prm.q_max)
    };
    let (mut candidates, mut rows) = brute_force(alpha, alpha_f, q0, prm, &places)?;
    if q0 < prm.q_max {
        for c in convergents_between(alpha, q0, prm.q_max)? {
            for e in [-1i64, 0, 1] {
                let pt = ProjPoint::new(&c.a + BigInt::from(e), c.b.clone())?;
                if pt.b != c.b {
                    continue;
                }
                candidates += 1;
                let row = evaluate(alpha, &pt, prm.kappa, &places)?;
                if row.passes != Some(false) {
                    rows.push(row);
                }
            }
        }
    }
    rows.sort_by(|x, y| (&x.point.b, &x.point.a).cmp(&(&y.point.b, &y.point.a)));
    rows.dedup_by(|x, y| x.point == y.point);
    Ok(HuntResult { method, q0, candidates, rows })
}

/// Decimal string with 15 significant digits; `inf`, `-inf` or `nan`
/// for non-finite values.
pub fn sig15(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let e = x.abs().log10().floor() as i32;
    if !(-5..15).contains(&e) {
        return format!("{x:.14e}");
    }
    let s = format!("{:.*}", (14 - e).max(0) as usize, x);
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn mid(x: &Iv) -> f64 {
    if x.lo == x.hi {
        x.lo
    } else {
        0.5 * (x.lo + x.hi)
    }
}

pub fn csv_header(places: &[Place]) -> String {
    let mut h = vec!["p".to_string(), "q".into(), "h_fs".into(), "kappa".into()];
    for v in column_places(places) {
        h.push(match v {
            Place::Archimedean => "lambda_inf".into(),
            Place::Finite(p) => format!("lambda_{p}"),
        });
    }
    h.push("passes".into());
    h.push("width".into());
    h.join(",")
}

pub fn write_csv(res: &HuntResult, places: &[Place], out: &mut dyn Write) -> std::io::Result<()> {
    writeln!(out, "{}", csv_header(places))?;
    for r in &res.rows {
        let mut f = vec![r.point.a.to_string(), r.point.b.to_string(), sig15(mid(&r.h_fs)), sig15(mid(&r.kappa))];
        for (_, l) in &r.lambdas {
            f.push(sig15(mid(l)));
        }
        f.push(
            match r.passes {
                Some(true) => "true",
                Some(false) => "false",
                None => "undecided",
            }
            .into(),
        );
        f.push(sig15(r.width()));
        writeln!(out, "{}", f.join(","))?;
    }
    Ok(())
}

/// Largest denominator among the rows.
pub fn max_q(res: &HuntResult) -> BigInt {
    res.rows.iter().map(|r| r.point.b.clone()).max().unwrap_or_else(BigInt::zero)
}
